//! Error measures, the energy-norm diagnostic and convergence tables.

use std::fmt;
use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use nalgebra::DVector;
use rayon::prelude::*;

use crate::forms::data_degree;
use crate::lps::{local_l1, local_l2, local_l3, StabilizationParams};
use crate::mesh::{MeshFamily, PolyMesh};
use crate::polybasis::dim;
use crate::problems::OseenProblem;
use crate::quadrature::polygon_rule;
use crate::system::{solve_problem, ConvectiveVariant, Solution, SolveReport};
use crate::vemspace::Discretization;
use crate::{Result, Vec2, VemError};

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    /// max h_E.
    pub h: f64,
    /// √Σ‖∇(u - Π∇_k u_h)‖².
    pub velocity_h1: f64,
    /// √Σ‖u - Π⁰_k u_h‖².
    pub velocity_l2: f64,
    /// √Σ‖p - Π⁰_k p_h‖² with both pressures mean-free.
    pub pressure_l2: f64,
    /// Squared energy norm of the discrete solution, if requested.
    pub energy: Option<f64>,
    pub scalar_dofs: usize,
    pub unknowns: usize,
    pub wall_time: f64,
}

impl ErrorReport {
    pub fn measures(&self) -> [f64; 3] {
        [self.velocity_h1, self.velocity_l2, self.pressure_l2]
    }

    /// `key = value` lines.
    pub fn to_report(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "h = {:e}", self.h);
        let _ = writeln!(s, "velocity_h1 = {:e}", self.velocity_h1);
        let _ = writeln!(s, "velocity_l2 = {:e}", self.velocity_l2);
        let _ = writeln!(s, "pressure_l2 = {:e}", self.pressure_l2);
        if let Some(e) = self.energy {
            let _ = writeln!(s, "energy_squared = {e:e}");
        }
        let _ = writeln!(s, "scalar_dofs = {}", self.scalar_dofs);
        let _ = writeln!(s, "unknowns = {}", self.unknowns);
        let _ = writeln!(s, "wall_time = {:.3}", self.wall_time);
        s
    }
}

/// Element-wise projections of the discrete solution compared with the
/// exact solution on a degree 2k+4 rule.
pub fn compute_errors(disc: &Discretization, sol: &Solution, problem: &OseenProblem) -> Result<ErrorReport> {
    let ex = problem
        .exact
        .as_ref()
        .ok_or_else(|| VemError::MissingExact(problem.id.clone()))?;
    let n = disc.n_scalar();
    if sol.u1.len() != n || sol.u2.len() != n || sol.p.len() != n {
        return Err(VemError::DimensionMismatch(format!(
            "solution vectors of length {} for {n} scalar DOFs",
            sol.u1.len()
        )));
    }
    let deg = data_degree(disc.k);

    // means of both pressures
    let means = disc
        .elements
        .par_iter()
        .map(|el| -> Result<(f64, f64)> {
            let rule = polygon_rule(&el.geom, deg)?;
            let coef = &el.proj.pi0_k * disc.gather(el.cell, &sol.p);
            let exact = rule.integrate(|x| (ex.p)(x));
            let discrete = rule.integrate(|x| dot(&el.basis.eval(x), &coef));
            Ok((exact, discrete))
        })
        .collect::<Result<Vec<_>>>()?;
    let area = disc.mesh.domain_area();
    let p_mean = means.iter().map(|m| m.0).sum::<f64>() / area;
    let ph_mean = means.iter().map(|m| m.1).sum::<f64>() / area;

    let parts = disc
        .elements
        .par_iter()
        .map(|el| -> Result<[f64; 3]> {
            let rule = polygon_rule(&el.geom, deg)?;
            let l1 = disc.gather(el.cell, &sol.u1);
            let l2 = disc.gather(el.cell, &sol.u2);
            let lp = disc.gather(el.cell, &sol.p);
            let pr = &el.proj;
            let nab = [&pr.pi_nabla_k * &l1, &pr.pi_nabla_k * &l2];
            let l2p = [&pr.pi0_k * &l1, &pr.pi0_k * &l2];
            let pp = &pr.pi0_k * &lp;
            let mut e = [0.0; 3];
            for (&x, &w) in rule.points.iter().zip(&rule.weights) {
                let m = el.basis.eval(x);
                let (gx, gy) = el.basis.grad(x);
                let gu = (ex.grad_u)(x);
                let u = (ex.u)(x);
                for c in 0..2 {
                    let dx = gu[(c, 0)] - dot(&gx, &nab[c]);
                    let dy = gu[(c, 1)] - dot(&gy, &nab[c]);
                    e[0] += w * (dx * dx + dy * dy);
                    let d = u[c] - dot(&m, &l2p[c]);
                    e[1] += w * d * d;
                }
                let d = ((ex.p)(x) - p_mean) - (dot(&m, &pp) - ph_mean);
                e[2] += w * d * d;
            }
            Ok(e)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut tot = [0.0; 3];
    for p in parts {
        for i in 0..3 {
            tot[i] += p[i];
        }
    }
    Ok(ErrorReport {
        h: disc.mesh.h_max(),
        velocity_h1: tot[0].sqrt(),
        velocity_l2: tot[1].sqrt(),
        pressure_l2: tot[2].sqrt(),
        energy: None,
        scalar_dofs: n,
        unknowns: 3 * n + 1,
        wall_time: 0.0,
    })
}

fn dot(a: &[f64], b: &DVector<f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

/// Squared mesh-dependent energy norm
/// μ‖∇z‖² + γ‖z‖² + α‖q‖² + L1(z, z) + L2(z, z) + L3(q, q),
/// evaluated on the projections Π∇_k z, Π⁰_k z and Π⁰_k q.
pub fn energy_norm_diagnostic(
    disc: &Discretization,
    v: &Solution,
    problem: &OseenProblem,
    params: &StabilizationParams,
    alpha: f64,
) -> Result<f64> {
    let parts = disc
        .elements
        .par_iter()
        .map(|el| -> Result<f64> {
            let pr = &el.proj;
            let h = &el.tables.mass;
            let g = &el.tables.stiffness;
            let z = [disc.gather(el.cell, &v.u1), disc.gather(el.cell, &v.u2)];
            let q = disc.gather(el.cell, &v.p);
            let mut s = 0.0;
            for zc in &z {
                let nab = &pr.pi_nabla_k * zc;
                let l2 = &pr.pi0_k * zc;
                s += problem.mu * nab.dot(&(g * &nab)) + problem.gamma * l2.dot(&(h * &l2));
            }
            let qp = &pr.pi0_k * &q;
            s += alpha * qp.dot(&(h * &qp));
            let nloc = el.n_dofs();
            let zz = DVector::from_fn(2 * nloc, |i, _| if i < nloc { z[0][i] } else { z[1][i - nloc] });
            let vel = local_l1(el, |x| (problem.convection)(x), params)? + local_l2(el, params);
            s += zz.dot(&(vel * &zz));
            s += q.dot(&(local_l3(el, params) * &q));
            Ok(s)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(parts.iter().sum())
}

/// Errors and observed rates over a sequence of meshes.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConvergenceTable {
    pub rows: Vec<ErrorReport>,
}

pub const CSV_HEADER: &str = "h,EuH1,rateH1,EuL2,rateL2,EpL2,rateP";

/// log(e_prev/e)/log(h_prev/h).
pub fn rate(h_prev: f64, e_prev: f64, h: f64, e: f64) -> f64 {
    (e_prev / e).ln() / (h_prev / h).ln()
}

impl ConvergenceTable {
    pub fn push(&mut self, r: ErrorReport) {
        self.rows.push(r);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Rates of (H¹, L², pressure) per row; `None` on the first row.
    pub fn rates(&self) -> Vec<Option<[f64; 3]>> {
        let mut out = vec![None];
        for w in self.rows.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            let ea = a.measures();
            let eb = b.measures();
            out.push(Some([0, 1, 2].map(|i| rate(a.h, ea[i], b.h, eb[i]))));
        }
        out.truncate(self.rows.len());
        out
    }

    /// Rates between the last two levels.
    pub fn final_rates(&self) -> Option<[f64; 3]> {
        self.rates().last().copied().flatten()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{CSV_HEADER}");
        for (r, rate) in self.rows.iter().zip(self.rates()) {
            let e = r.measures();
            let fr = |i: usize| rate.map(|x| format!("{:.4}", x[i])).unwrap_or_default();
            let _ = writeln!(
                s,
                "{:.6e},{:.6e},{},{:.6e},{},{:.6e},{}",
                r.h,
                e[0],
                fr(0),
                e[1],
                fr(1),
                e[2],
                fr(2)
            );
        }
        s
    }

    pub fn to_markdown(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "| h | E_u H1 | rate | E_u L2 | rate | E_p L2 | rate |");
        let _ = writeln!(s, "|---|---|---|---|---|---|---|");
        for (r, rate) in self.rows.iter().zip(self.rates()) {
            let e = r.measures();
            let fr = |i: usize| rate.map(|x| format!("{:.2}", x[i])).unwrap_or_else(|| "-".into());
            let _ = writeln!(
                s,
                "| {:.4e} | {:.6e} | {} | {:.6e} | {} | {:.6e} | {} |",
                r.h,
                e[0],
                fr(0),
                e[1],
                fr(1),
                e[2],
                fr(2)
            );
        }
        s
    }

    /// One line `measure log10(h) log10(e)` per level and measure.
    pub fn plot_data(&self) -> String {
        let mut s = String::from("# measure log10_h log10_error\n");
        for (name, i) in [("EuH1", 0), ("EuL2", 1), ("EpL2", 2)] {
            for r in &self.rows {
                let _ = writeln!(s, "{name} {:.10} {:.10}", r.h.log10(), r.measures()[i].log10());
            }
        }
        s
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }

    pub fn write_markdown(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_markdown())?;
        Ok(())
    }

    pub fn write_plot_data(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.plot_data())?;
        Ok(())
    }
}

/// A convergence study that stopped at `level`, with the rows completed
/// before the failure.
#[derive(Debug)]
pub struct StudyFailure {
    pub level: usize,
    pub n: usize,
    pub error: VemError,
    pub partial: ConvergenceTable,
}

impl fmt::Display for StudyFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "level {} (n = {}): {}", self.level, self.n, self.error)
    }
}

impl std::error::Error for StudyFailure {}

/// Settings of a convergence study.
#[derive(Debug, Clone)]
pub struct StudySettings {
    pub k: usize,
    pub params: StabilizationParams,
    pub variant: ConvectiveVariant,
    /// Weight α of the energy-norm diagnostic; `None` skips it.
    pub energy_alpha: Option<f64>,
}

impl Default for StudySettings {
    fn default() -> Self {
        Self {
            k: 1,
            params: StabilizationParams::default(),
            variant: ConvectiveVariant::Skew,
            energy_alpha: None,
        }
    }
}

/// One solve and error evaluation per level `n` of the mesh family.
pub fn convergence_study(
    problem: &OseenProblem,
    family: &MeshFamily,
    levels: &[usize],
    settings: &StudySettings,
) -> std::result::Result<ConvergenceTable, StudyFailure> {
    let mut table = ConvergenceTable::default();
    for (level, &n) in levels.iter().enumerate() {
        let run = || -> Result<ErrorReport> {
            let t0 = Instant::now();
            let mesh = family.generate(n)?;
            let disc = Discretization::new(&mesh, settings.k)?;
            let (sol, _) = solve_problem(&disc, problem, &settings.params, settings.variant)?;
            let mut rep = compute_errors(&disc, &sol, problem)?;
            if let Some(alpha) = settings.energy_alpha {
                rep.energy = Some(energy_norm_diagnostic(&disc, &sol, problem, &settings.params, alpha)?);
            }
            rep.wall_time = t0.elapsed().as_secs_f64();
            Ok(rep)
        };
        match run() {
            Ok(rep) => table.push(rep),
            Err(error) => {
                return Err(StudyFailure {
                    level,
                    n,
                    error,
                    partial: table,
                })
            }
        }
    }
    Ok(table)
}

/// Output of [`single_run`].
#[derive(Debug, Clone)]
pub struct SingleRun {
    pub solution: Solution,
    pub solve: SolveReport,
    /// Present when the problem carries an exact solution.
    pub errors: Option<ErrorReport>,
}

/// Assembly, solve and (when possible) error evaluation on one mesh.
pub fn single_run(mesh: &PolyMesh, problem: &OseenProblem, settings: &StudySettings) -> Result<SingleRun> {
    let t0 = Instant::now();
    let disc = Discretization::new(mesh, settings.k)?;
    let (solution, solve) = solve_problem(&disc, problem, &settings.params, settings.variant)?;
    let errors = match problem.exact {
        Some(_) => {
            let mut rep = compute_errors(&disc, &solution, problem)?;
            if let Some(alpha) = settings.energy_alpha {
                rep.energy = Some(energy_norm_diagnostic(&disc, &solution, problem, &settings.params, alpha)?);
            }
            rep.wall_time = t0.elapsed().as_secs_f64();
            Some(rep)
        }
        None => None,
    };
    Ok(SingleRun {
        solution,
        solve,
        errors,
    })
}

/// Cross-section values of the discrete first velocity component: the
/// element containing each point evaluates Π⁰_k u_h there.
pub fn sample_velocity(disc: &Discretization, sol: &Solution, points: &[Vec2]) -> Vec<Option<Vec2>> {
    points
        .iter()
        .map(|&x| {
            let el = disc.elements.iter().find(|e| e.geom.contains(x))?;
            let m = el.basis.eval(x);
            let c1 = &el.proj.pi0_k * disc.gather(el.cell, &sol.u1);
            let c2 = &el.proj.pi0_k * disc.gather(el.cell, &sol.u2);
            Some(Vec2::new(dot(&m, &c1), dot(&m, &c2)))
        })
        .collect()
}

/// Number of monomials used by the error projections.
pub fn projection_dim(k: usize) -> usize {
    dim(k as isize)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(hs: &[f64], c: f64, order: f64) -> ConvergenceTable {
        ConvergenceTable {
            rows: hs
                .iter()
                .map(|&h| ErrorReport {
                    h,
                    velocity_h1: c * h.powf(order),
                    velocity_l2: c * h.powf(order),
                    pressure_l2: c * h.powf(order),
                    energy: None,
                    scalar_dofs: 0,
                    unknowns: 0,
                    wall_time: 0.0,
                })
                .collect(),
        }
    }

    #[test]
    fn synthetic_rates() {
        let t = synthetic(&[0.2, 0.1, 0.05], 3.0, 1.0);
        let r = t.rates();
        assert!(r[0].is_none());
        for x in r[1].unwrap().iter().chain(r[2].unwrap().iter()) {
            assert!((x - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn csv_schema_and_plot_rows() {
        let t = synthetic(&[0.5, 0.25], 1.0, 2.0);
        let csv = t.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER);
        assert_eq!(lines.next().unwrap(), "5.000000e-1,2.500000e-1,,2.500000e-1,,2.500000e-1,");
        assert_eq!(lines.next().unwrap(), "2.500000e-1,6.250000e-2,2.0000,6.250000e-2,2.0000,6.250000e-2,2.0000");
        assert_eq!(t.plot_data().lines().count(), 1 + 2 * 3);
    }
}
