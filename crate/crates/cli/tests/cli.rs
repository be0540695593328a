use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oseen-vem"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn report_value(text: &str, key: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key} = ")))
        .unwrap_or_else(|| panic!("{key} missing in\n{text}"))
        .parse()
        .unwrap()
}

fn out_arg(dir: &Path) -> String {
    dir.to_str().unwrap().to_string()
}

#[test]
fn squares_mesh_has_16_cells() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["mesh", "--family", "squares", "--n", "4", "--out", &out_arg(dir.path())]);
    assert!(o.status.success(), "{}", stderr(&o));
    let mesh = oseen_vem::mesh::read_mesh(dir.path().join("squares_n4.mesh")).unwrap();
    assert_eq!(mesh.n_cells(), 16);
}

#[test]
fn voronoi_mesh_is_deterministic() {
    let mut texts = Vec::new();
    for _ in 0..2 {
        let dir = tempfile::tempdir().unwrap();
        let o = run(&[
            "mesh", "--family", "voronoi", "--seeds", "64", "--lloyd", "3", "--seed", "7", "--out",
            &out_arg(dir.path()),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
        texts.push(fs::read_to_string(dir.path().join("voronoi_s64_l3_seed7.mesh")).unwrap());
    }
    assert_eq!(texts[0], texts[1]);
}

#[test]
fn invalid_family_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["mesh", "--family", "hexagons", "--out", &out_arg(dir.path())]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown mesh family"), "{}", stderr(&o));
}

#[test]
fn bad_arguments_exit_2() {
    let o = run(&["solve", "--variant", "upwind"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["solve", "--k", "two"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["solve", "--problem", "example9"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&[]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn solve_example1_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&[
        "solve", "--problem", "example1", "--mu", "1", "--gamma", "1", "--family", "squares", "--n", "10",
        "--k", "1", "--out", &out_arg(dir.path()),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let rep = fs::read_to_string(dir.path().join("report.txt")).unwrap();
    for key in ["velocity_h1", "velocity_l2", "pressure_l2"] {
        let v = report_value(&rep, key);
        assert!(v.is_finite() && v > 0.0, "{key} = {v}");
    }
    let sol = fs::read_to_string(dir.path().join("solution.txt")).unwrap();
    assert!(sol.starts_with("oseen-vem solution 1\nk 1\n"));
}

#[test]
fn solve_stokes_patch_k2_is_exact() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&[
        "solve", "--problem", "stokes_patch", "--k", "2", "--family", "distorted", "--n", "4", "--out",
        &out_arg(dir.path()),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let rep = fs::read_to_string(dir.path().join("report.txt")).unwrap();
    for key in ["velocity_h1", "velocity_l2", "pressure_l2"] {
        assert!(report_value(&rep, key) <= 1e-8, "{rep}");
    }
}

#[test]
fn solve_example4_small_mu_stays_finite() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&[
        "solve", "--problem", "example4", "--mu", "1e-4", "--k", "2", "--family", "distorted", "--n", "8",
        "--out", &out_arg(dir.path()),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let sol = fs::read_to_string(dir.path().join("solution.txt")).unwrap();
    for line in sol.lines().skip(4) {
        if let Ok(v) = line.parse::<f64>() {
            assert!(v.is_finite());
        }
    }
}

#[test]
fn solve_reads_mesh_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = out_arg(dir.path());
    assert!(run(&["mesh", "--family", "nonconvex", "--n", "3", "--out", &out]).status.success());
    let mesh = dir.path().join("nonconvex_n3.mesh");
    let o = run(&[
        "solve", "--problem", "stokes_patch", "--mesh", mesh.to_str().unwrap(), "--out", &out,
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let rep = fs::read_to_string(dir.path().join("report.txt")).unwrap();
    assert!(report_value(&rep, "velocity_h1") <= 1e-8);
}

#[test]
fn convergence_writes_five_row_table() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&[
        "convergence", "--problem", "example1", "--k", "1", "--family", "squares", "--levels", "2,3,4,6,8",
        "--out", &out_arg(dir.path()),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = fs::read_to_string(dir.path().join("example1_squares_k1_skew.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "h,EuH1,rateH1,EuL2,rateL2,EpL2,rateP");
    assert_eq!(lines.len(), 6);
    let md = fs::read_to_string(dir.path().join("example1_squares_k1_skew.md")).unwrap();
    assert!(md.contains('|'));
    let dat = fs::read_to_string(dir.path().join("example1_squares_k1_skew.dat")).unwrap();
    assert_eq!(dat.lines().filter(|l| !l.starts_with('#') && !l.is_empty()).count(), 15);
}

#[test]
fn variants_agree_on_example1() {
    let dir = tempfile::tempdir().unwrap();
    for v in ["skew", "hat"] {
        let o = run(&[
            "convergence", "--problem", "example1", "--levels", "4,8", "--variant", v, "--out",
            &out_arg(dir.path()),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    let read = |v: &str| -> Vec<f64> {
        let csv = fs::read_to_string(dir.path().join(format!("example1_squares_k1_{v}.csv"))).unwrap();
        csv.lines()
            .skip(1)
            .flat_map(|l| {
                let f: Vec<&str> = l.split(',').collect();
                [f[1], f[3], f[5]].map(|s| s.parse::<f64>().unwrap())
            })
            .collect()
    };
    let (a, b) = (read("skew"), read("hat"));
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).abs() <= 0.1 * x.max(*y), "{x} vs {y}");
    }
}

#[test]
fn failed_study_exits_3_with_partial_table() {
    let dir = tempfile::tempdir().unwrap();
    // the generator rejects n = 0 when the second level is reached
    let o = run(&[
        "convergence", "--problem", "example1", "--levels", "4,0", "--out", &out_arg(dir.path()),
    ]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    let csv = fs::read_to_string(dir.path().join("example1_squares_k1_skew.csv")).unwrap();
    assert_eq!(csv.lines().count(), 2);
}

#[test]
fn verify_passes_and_fault_injection_fails() {
    let o = run(&["verify", "--verbose"]);
    assert!(o.status.success(), "{}{}", stdout(&o), stderr(&o));
    assert!(stdout(&o).contains("properties passed"));
    assert!(stdout(&o).lines().any(|l| l.starts_with("PASS") && l.contains('s')));

    let o = run(&["verify", "--fault-quadrature-scale", "1.000001"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("quadrature.exactness"), "{}", stderr(&o));
}

#[test]
fn config_file_round_trip_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "command = convergence\nmu = 1e-8\nstab.c1 = 0.5\nlevels = 5,10\nvariant = hat\n").unwrap();
    let o = run(&["--config", cfg.to_str().unwrap(), "--dump-config", "--mu", "0.25"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let dumped = stdout(&o);
    assert!(dumped.contains("mu = 0.25\n"));
    assert!(dumped.contains("stab.c1 = 0.5\n"));
    assert!(dumped.contains("levels = 5,10\n"));
    assert!(dumped.contains("command = convergence\n"));

    let again = dir.path().join("again.cfg");
    fs::write(&again, &dumped).unwrap();
    let o = run(&["--config", again.to_str().unwrap(), "--dump-config"]);
    assert_eq!(stdout(&o), dumped);

    fs::write(&cfg, "mu = 1\ncolour = blue\n").unwrap();
    let o = run(&["--config", cfg.to_str().unwrap(), "--dump-config"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown config key `colour`"));
}
