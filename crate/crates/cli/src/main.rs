//! Command-line front-end: mesh generation, single solves, convergence
//! studies and the verification suite.
//!
//! Exit codes: 0 success, 1 verification failure, 2 mesh or argument error,
//! 3 solver failure.

mod config;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use oseen_vem::analysis::{convergence_study, single_run, StudySettings};
use oseen_vem::mesh::{generate_voronoi, read_mesh, write_mesh, MeshFamily, PolyMesh};
use oseen_vem::problems::{by_id, OseenProblem, ProblemParams};
use oseen_vem::verify::{self, VerifyOptions};

use config::{parse_levels, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "oseen-vem", version, about = "Virtual element solver for the Oseen equations")]
struct Cli {
    /// `key = value` config file; flags override its entries.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Print the resolved configuration and exit.
    #[arg(long, global = true)]
    dump_config: bool,
    #[command(flatten)]
    flags: Flags,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Args, Debug, Default)]
struct Flags {
    #[arg(long, global = true)]
    problem: Option<String>,
    #[arg(long, global = true)]
    mu: Option<f64>,
    #[arg(long, global = true)]
    gamma: Option<f64>,
    #[arg(long, global = true)]
    r1: Option<f64>,
    #[arg(long, global = true)]
    r2: Option<f64>,
    /// squares, distorted, voronoi or nonconvex.
    #[arg(long, global = true)]
    family: Option<String>,
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Comma-separated refinement levels, e.g. 5,10,20.
    #[arg(long, global = true)]
    levels: Option<String>,
    #[arg(long, global = true)]
    k: Option<usize>,
    /// skew or hat.
    #[arg(long, global = true)]
    variant: Option<String>,
    #[arg(long = "stab.c1", global = true)]
    c1: Option<f64>,
    #[arg(long = "stab.c2", global = true)]
    c2: Option<f64>,
    #[arg(long = "stab.c3", global = true)]
    c3: Option<f64>,
    /// Weight of the energy-norm diagnostic.
    #[arg(long, global = true)]
    alpha: Option<f64>,
    /// Vertex perturbation of the distorted family.
    #[arg(long, global = true)]
    amplitude: Option<f64>,
    /// Lloyd iterations of the Voronoi family.
    #[arg(long, global = true)]
    lloyd: Option<usize>,
    /// Voronoi seed count for `mesh`.
    #[arg(long, global = true)]
    seeds: Option<usize>,
    /// Mesh file used by `solve` instead of a generated one.
    #[arg(long, global = true)]
    mesh: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write one mesh file.
    Mesh,
    /// Solve once and write the solution and error report.
    Solve,
    /// Run a convergence study and write its tables.
    Convergence,
    /// Run the property suites.
    Verify {
        /// Per-property timing and details.
        #[arg(long)]
        verbose: bool,
        #[arg(long, hide = true, default_value_t = 1.0)]
        fault_quadrature_scale: f64,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Mesh => "mesh",
            Command::Solve => "solve",
            Command::Convergence => "convergence",
            Command::Verify { .. } => "verify",
        }
    }
}

enum Failure {
    Verify(String),
    Usage(String),
    Solver(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verify(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Solver(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Verify(m) | Failure::Usage(m) | Failure::Solver(m) => m,
        }
    }
}

type Outcome = Result<(), Failure>;

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn solver(e: impl std::fmt::Display) -> Failure {
    Failure::Solver(e.to_string())
}

fn resolve(cli: &Cli) -> Result<RunConfig, Failure> {
    let mut c = RunConfig::default();
    if let Some(path) = &cli.config {
        let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        c.apply_file(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    }
    let f = &cli.flags;
    if let Some(cmd) = &cli.command {
        c.command = Some(cmd.name().to_string());
    }
    macro_rules! overlay {
        ($($flag:ident => $field:expr),* $(,)?) => {
            $(if let Some(v) = &f.$flag { $field = v.clone(); })*
        };
    }
    overlay!(
        problem => c.problem, mu => c.mu, gamma => c.gamma, r1 => c.r1, r2 => c.r2,
        family => c.family, n => c.n, k => c.k, c1 => c.stab.c1, c2 => c.stab.c2,
        c3 => c.stab.c3, amplitude => c.amplitude, lloyd => c.lloyd, out => c.out,
        seed => c.seed,
    );
    if let Some(l) = &f.levels {
        c.levels = parse_levels(l).map_err(usage)?;
    }
    if let Some(v) = &f.variant {
        c.variant = v.parse().map_err(usage)?;
    }
    if f.alpha.is_some() {
        c.alpha = f.alpha;
    }
    if f.seeds.is_some() {
        c.seeds = f.seeds;
    }
    if f.mesh.is_some() {
        c.mesh = f.mesh.clone();
    }
    Ok(c)
}

fn family(c: &RunConfig) -> Result<MeshFamily, Failure> {
    let fam = MeshFamily::from_name(&c.family, c.seed).ok_or_else(|| {
        usage(format!(
            "unknown mesh family `{}` (expected squares, distorted, voronoi or nonconvex)",
            c.family
        ))
    })?;
    Ok(match fam {
        MeshFamily::Distorted { seed, .. } => MeshFamily::Distorted {
            amplitude: c.amplitude,
            seed,
        },
        MeshFamily::Voronoi { seed, .. } => MeshFamily::Voronoi {
            lloyd_iterations: c.lloyd,
            seed,
        },
        other => other,
    })
}

fn problem(c: &RunConfig) -> Result<OseenProblem, Failure> {
    let p = ProblemParams {
        mu: c.mu,
        gamma: c.gamma,
        r1: c.r1,
        r2: c.r2,
        k: c.k,
    };
    by_id(&c.problem, &p).map_err(usage)
}

fn settings(c: &RunConfig) -> StudySettings {
    StudySettings {
        k: c.k,
        params: c.stab,
        variant: c.variant,
        energy_alpha: c.alpha,
    }
}

fn out_dir(c: &RunConfig) -> Result<&Path, Failure> {
    fs::create_dir_all(&c.out).map_err(|e| usage(format!("{}: {e}", c.out.display())))?;
    Ok(&c.out)
}

fn write(path: PathBuf, text: &str) -> Outcome {
    fs::write(&path, text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn mesh_name(c: &RunConfig) -> String {
    match (c.family.as_str(), c.seeds) {
        ("voronoi", Some(s)) => format!("voronoi_s{s}_l{}_seed{}", c.lloyd, c.seed),
        _ => format!("{}_n{}", c.family, c.n),
    }
}

fn generated_mesh(c: &RunConfig) -> Result<PolyMesh, Failure> {
    let fam = family(c)?;
    match (&fam, c.seeds) {
        (MeshFamily::Voronoi { .. }, Some(s)) => generate_voronoi(s, c.lloyd, c.seed),
        _ => fam.generate(c.n),
    }
    .map_err(usage)
}

fn cmd_mesh(c: &RunConfig) -> Outcome {
    let mesh = generated_mesh(c)?;
    let path = out_dir(c)?.join(format!("{}.mesh", mesh_name(c)));
    write_mesh(&mesh, &path).map_err(usage)?;
    println!("wrote {} ({} cells, {} vertices)", path.display(), mesh.n_cells(), mesh.n_vertices());
    Ok(())
}

fn cmd_solve(c: &RunConfig) -> Outcome {
    let (mesh, label) = match &c.mesh {
        Some(path) => (read_mesh(path).map_err(usage)?, path.display().to_string()),
        None => (generated_mesh(c)?, mesh_name(c)),
    };
    let prob = problem(c)?;
    let run = single_run(&mesh, &prob, &settings(c)).map_err(solver)?;
    let dir = out_dir(c)?;
    write(dir.join("solution.txt"), &run.solution.dump(&label, &prob.id))?;
    println!(
        "unknowns {}  relative residual {:.2e}",
        run.solve.unknowns, run.solve.relative_residual
    );
    if let Some(rep) = &run.errors {
        let text = rep.to_report();
        write(dir.join("report.txt"), &text)?;
        print!("{text}");
    }
    Ok(())
}

fn cmd_convergence(c: &RunConfig) -> Outcome {
    let fam = family(c)?;
    let prob = problem(c)?;
    let dir = out_dir(c)?.to_path_buf();
    let stem = format!("{}_{}_k{}_{}", prob.id, fam.name(), c.k, c.variant.name());
    let emit = |table: &oseen_vem::analysis::ConvergenceTable| -> Outcome {
        write(dir.join(format!("{stem}.csv")), &table.to_csv())?;
        write(dir.join(format!("{stem}.md")), &table.to_markdown())?;
        write(dir.join(format!("{stem}.dat")), &table.plot_data())
    };
    match convergence_study(&prob, &fam, &c.levels, &settings(c)) {
        Ok(table) => {
            emit(&table)?;
            print!("{}", table.to_markdown());
            Ok(())
        }
        Err(fail) => {
            emit(&fail.partial)?;
            Err(solver(format!("convergence study stopped at {fail}")))
        }
    }
}

fn cmd_verify(c: &RunConfig, verbose: bool, scale: f64) -> Outcome {
    let opts = VerifyOptions {
        seed: c.seed,
        quadrature_weight_scale: scale,
        ..VerifyOptions::default()
    };
    let summary = verify::run(&opts);
    print!("{}", summary.render(verbose));
    if summary.passed() {
        Ok(())
    } else {
        Err(Failure::Verify(format!(
            "verification failed: {}",
            summary.failing().join(", ")
        )))
    }
}

fn run(cli: &Cli) -> Outcome {
    let c = resolve(cli)?;
    if cli.dump_config {
        print!("{}", c.dump());
        return Ok(());
    }
    match (&cli.command, c.command.as_deref()) {
        (Some(Command::Verify {
            verbose,
            fault_quadrature_scale,
        }), _) => cmd_verify(&c, *verbose, *fault_quadrature_scale),
        (_, Some("mesh")) => cmd_mesh(&c),
        (_, Some("solve")) => cmd_solve(&c),
        (_, Some("convergence")) => cmd_convergence(&c),
        (_, Some("verify")) => cmd_verify(&c, false, 1.0),
        _ => Err(usage("no command given (mesh, solve, convergence or verify)")),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
