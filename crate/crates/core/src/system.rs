//! Global assembly, Dirichlet elimination and the linear solve.
//!
//! Unknowns are ordered `[u1 | u2 | p | λ]`, each field using the global
//! scalar numbering of [`crate::vemspace::DofLayout`]; λ enforces the zero
//! mean of the pressure.

use std::fmt::Write as _;
use std::str::FromStr;

use faer::linalg::solvers::Solve;
use faer::sparse::{SparseColMat, Triplet};
use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::forms::{local_a, local_b, local_c_hat, local_c_skew, local_d, local_load};
use crate::lps::{local_l1, local_l2, local_l3, StabilizationParams};
use crate::problems::OseenProblem;
pub use crate::vemspace::Discretization;
use crate::vemspace::VemElement;
use crate::{Result, VemError};

/// Systems smaller than this are factorized densely.
pub const DENSE_LIMIT: usize = 3000;
pub const RESIDUAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ConvectiveVariant {
    /// Boundary-corrected form, antisymmetrized.
    #[default]
    Skew,
    /// Projected-gradient form without boundary term, antisymmetrized.
    Hat,
}

impl ConvectiveVariant {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Skew => "skew",
            Self::Hat => "hat",
        }
    }
}

impl FromStr for ConvectiveVariant {
    type Err = VemError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "skew" => Ok(Self::Skew),
            "hat" => Ok(Self::Hat),
            other => Err(VemError::Domain(format!(
                "unknown convective variant `{other}` (expected skew or hat)"
            ))),
        }
    }
}

/// Square sparse matrix in coordinate form, sorted by (row, col) with
/// duplicates summed.
#[derive(Debug, Clone, Default)]
pub struct SparseMatrix {
    pub n: usize,
    pub entries: Vec<(usize, usize, f64)>,
}

impl SparseMatrix {
    pub fn from_triplets(n: usize, mut t: Vec<(usize, usize, f64)>) -> Self {
        t.par_sort_unstable_by_key(|&(r, c, _)| (r, c));
        let mut entries: Vec<(usize, usize, f64)> = Vec::with_capacity(t.len() / 4);
        for (r, c, v) in t {
            match entries.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 += v,
                _ => entries.push((r, c, v)),
            }
        }
        Self { n, entries }
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn mul(&self, x: &DVector<f64>) -> DVector<f64> {
        let mut y = DVector::zeros(self.n);
        for &(r, c, v) in &self.entries {
            y[r] += v * x[c];
        }
        y
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.entries
            .binary_search_by_key(&(r, c), |&(a, b, _)| (a, b))
            .map(|i| self.entries[i].2)
            .unwrap_or(0.0)
    }

    /// Sub-block rows `r0..r0+nr`, columns `c0..c0+nc` as a dense matrix.
    pub fn dense_block(&self, r0: usize, nr: usize, c0: usize, nc: usize) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(nr, nc);
        for &(r, c, v) in &self.entries {
            if r >= r0 && r < r0 + nr && c >= c0 && c < c0 + nc {
                m[(r - r0, c - c0)] += v;
            }
        }
        m
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        self.dense_block(0, self.n, 0, self.n)
    }

    /// max |a_ij|.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|e| e.2.abs()).fold(0.0, f64::max)
    }
}

/// Assembled saddle-point system.
#[derive(Debug, Clone)]
pub struct GlobalSystem {
    pub n_scalar: usize,
    pub matrix: SparseMatrix,
    pub rhs: DVector<f64>,
    /// Prescribed value of each unknown, if any.
    pub fixed: Vec<Option<f64>>,
    pub variant: ConvectiveVariant,
}

impl GlobalSystem {
    pub fn dim(&self) -> usize {
        3 * self.n_scalar + 1
    }
}

fn velocity_index(n: usize, nloc: usize, dofs: &[usize], local: usize) -> usize {
    let (c, i) = (local / nloc, local % nloc);
    c * n + dofs[i]
}

/// Scatters one 2N_E × 2N_E velocity matrix per element into a global
/// 2n × 2n matrix.
pub fn assemble_velocity_operator<F>(disc: &Discretization, local: F) -> Result<SparseMatrix>
where
    F: Fn(&VemElement) -> Result<DMatrix<f64>> + Sync,
{
    let n = disc.n_scalar();
    let parts = disc
        .elements
        .par_iter()
        .map(|el| {
            let m = local(el)?;
            let nloc = el.n_dofs();
            let mut t = Vec::with_capacity(m.len());
            for c in 0..m.ncols() {
                let gc = velocity_index(n, nloc, &el.dofs, c);
                for r in 0..m.nrows() {
                    let v = m[(r, c)];
                    if v != 0.0 {
                        t.push((velocity_index(n, nloc, &el.dofs, r), gc, v));
                    }
                }
            }
            Ok(t)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SparseMatrix::from_triplets(2 * n, parts.concat()))
}

/// Scatters one N_E × N_E scalar matrix per element.
pub fn assemble_scalar_operator<F>(disc: &Discretization, local: F) -> Result<SparseMatrix>
where
    F: Fn(&VemElement) -> Result<DMatrix<f64>> + Sync,
{
    let parts = disc
        .elements
        .par_iter()
        .map(|el| {
            let m = local(el)?;
            let mut t = Vec::with_capacity(m.len());
            for c in 0..m.ncols() {
                for r in 0..m.nrows() {
                    if m[(r, c)] != 0.0 {
                        t.push((el.dofs[r], el.dofs[c], m[(r, c)]));
                    }
                }
            }
            Ok(t)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SparseMatrix::from_triplets(disc.n_scalar(), parts.concat()))
}

/// Global coupling matrix B (2n × n) with b_h(v, q) = vᵀ B q.
pub fn assemble_coupling(disc: &Discretization) -> DMatrix<f64> {
    let n = disc.n_scalar();
    let mut b = DMatrix::zeros(2 * n, n);
    for el in &disc.elements {
        let m = local_b(el);
        let nloc = el.n_dofs();
        for r in 0..m.nrows() {
            let gr = velocity_index(n, nloc, &el.dofs, r);
            for c in 0..nloc {
                b[(gr, el.dofs[c])] += m[(r, c)];
            }
        }
    }
    b
}

struct ElementContribution {
    triplets: Vec<(usize, usize, f64)>,
    rhs: Vec<(usize, f64)>,
}

fn element_contribution(
    el: &VemElement,
    n: usize,
    problem: &OseenProblem,
    params: &StabilizationParams,
    variant: ConvectiveVariant,
) -> Result<ElementContribution> {
    let field = |x| (problem.convection)(x);
    let nloc = el.n_dofs();
    let mut vel = local_a(el, problem.mu) + local_d(el, problem.gamma);
    vel += match variant {
        ConvectiveVariant::Skew => local_c_skew(el, field)?,
        ConvectiveVariant::Hat => local_c_hat(el, field)?,
    };
    vel += local_l1(el, field, params)?;
    vel += local_l2(el, params);
    let b = local_b(el);
    let l3 = local_l3(el, params);
    let load = local_load(el, |x| (problem.load)(x))?;

    let vi = |l: usize| velocity_index(n, nloc, &el.dofs, l);
    let pi = |l: usize| 2 * n + el.dofs[l];
    let lambda = 3 * n;
    let mut t = Vec::with_capacity(9 * nloc * nloc + nloc);
    for c in 0..2 * nloc {
        for r in 0..2 * nloc {
            t.push((vi(r), vi(c), vel[(r, c)]));
        }
    }
    for r in 0..2 * nloc {
        for j in 0..nloc {
            t.push((vi(r), pi(j), -b[(r, j)]));
            t.push((pi(j), vi(r), b[(r, j)]));
        }
    }
    for r in 0..nloc {
        for c in 0..nloc {
            t.push((pi(r), pi(c), l3[(r, c)]));
        }
        let mean = el.proj.moments[(0, r)];
        t.push((pi(r), lambda, mean));
        t.push((lambda, pi(r), mean));
    }
    t.retain(|e| e.2 != 0.0);
    let rhs = (0..2 * nloc).map(|r| (vi(r), load[r])).collect();
    Ok(ElementContribution { triplets: t, rhs })
}

/// Assembles the stabilized system without boundary conditions.
pub fn assemble(
    disc: &Discretization,
    problem: &OseenProblem,
    params: &StabilizationParams,
    variant: ConvectiveVariant,
) -> Result<GlobalSystem> {
    let n = disc.n_scalar();
    let parts = disc
        .elements
        .par_iter()
        .map(|el| element_contribution(el, n, problem, params, variant))
        .collect::<Result<Vec<_>>>()?;
    let mut rhs = DVector::zeros(3 * n + 1);
    let mut triplets = Vec::with_capacity(parts.iter().map(|p| p.triplets.len()).sum());
    for p in parts {
        triplets.extend(p.triplets);
        for (i, v) in p.rhs {
            rhs[i] += v;
        }
    }
    Ok(GlobalSystem {
        n_scalar: n,
        matrix: SparseMatrix::from_triplets(3 * n + 1, triplets),
        rhs,
        fixed: vec![None; 3 * n + 1],
        variant,
    })
}

/// Fixes both velocity components at boundary nodes to `g` and eliminates
/// them symmetrically.
pub fn apply_dirichlet(
    system: &mut GlobalSystem,
    disc: &Discretization,
    g: impl Fn(crate::Vec2) -> crate::Vec2,
) {
    let n = system.n_scalar;
    for (s, &on_boundary) in disc.layout.boundary.iter().enumerate() {
        if on_boundary {
            let p = disc.layout.position[s].expect("boundary DOFs are point values");
            let v = g(p);
            system.fixed[s] = Some(v.x);
            system.fixed[n + s] = Some(v.y);
        }
    }
    let fixed = &system.fixed;
    let rhs = &mut system.rhs;
    let mut kept = Vec::with_capacity(system.matrix.entries.len());
    for &(r, c, v) in &system.matrix.entries {
        if fixed[r].is_some() {
            continue;
        }
        if let Some(val) = fixed[c] {
            rhs[r] -= v * val;
            continue;
        }
        kept.push((r, c, v));
    }
    for (i, f) in fixed.iter().enumerate() {
        if let Some(val) = f {
            kept.push((i, i, 1.0));
            rhs[i] = *val;
        }
    }
    system.matrix = SparseMatrix::from_triplets(system.matrix.n, kept);
}

/// Discrete velocity and pressure in global scalar numbering.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub k: usize,
    pub u1: DVector<f64>,
    pub u2: DVector<f64>,
    pub p: DVector<f64>,
    pub lambda: f64,
}

impl Solution {
    pub fn from_vector(k: usize, n: usize, x: &DVector<f64>) -> Self {
        Self {
            k,
            u1: x.rows(0, n).into_owned(),
            u2: x.rows(n, n).into_owned(),
            p: x.rows(2 * n, n).into_owned(),
            lambda: x[3 * n],
        }
    }

    pub fn zeros(k: usize, n: usize) -> Self {
        Self::from_vector(k, n, &DVector::zeros(3 * n + 1))
    }

    pub fn to_vector(&self) -> DVector<f64> {
        let n = self.u1.len();
        let mut x = DVector::zeros(3 * n + 1);
        x.rows_mut(0, n).copy_from(&self.u1);
        x.rows_mut(n, n).copy_from(&self.u2);
        x.rows_mut(2 * n, n).copy_from(&self.p);
        x[3 * n] = self.lambda;
        x
    }

    /// Text dump: a header with k, mesh and problem, then one value per line
    /// for each field.
    pub fn dump(&self, mesh: &str, problem: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "oseen-vem solution 1");
        let _ = writeln!(s, "k {}", self.k);
        let _ = writeln!(s, "mesh {mesh}");
        let _ = writeln!(s, "problem {problem}");
        for (name, f) in [("u1", &self.u1), ("u2", &self.u2), ("p", &self.p)] {
            let _ = writeln!(s, "{name} {}", f.len());
            for v in f.iter() {
                let _ = writeln!(s, "{v:e}");
            }
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub unknowns: usize,
    pub nonzeros: usize,
    pub dense: bool,
    pub relative_residual: f64,
    pub refinement_steps: usize,
    /// Set when refinement was needed to reach the tolerance.
    pub condition_warning: bool,
}

enum Factor {
    Dense(faer::linalg::solvers::PartialPivLu<f64>),
    Sparse(faer::sparse::linalg::solvers::Lu<usize, f64>),
}

impl Factor {
    fn dense(matrix: &SparseMatrix) -> Self {
        let n = matrix.n;
        let mut m = faer::Mat::<f64>::zeros(n, n);
        for &(r, c, v) in &matrix.entries {
            m[(r, c)] += v;
        }
        Self::Dense(m.partial_piv_lu())
    }

    fn sparse(n: usize, entries: impl Iterator<Item = (usize, usize, f64)>) -> Result<Self> {
        let t: Vec<Triplet<usize, usize, f64>> = entries.map(|(r, c, v)| Triplet::new(r, c, v)).collect();
        let a = SparseColMat::<usize, f64>::try_new_from_triplets(n, n, &t)
            .map_err(|e| VemError::SolverFailure(format!("sparse matrix construction: {e:?}")))?;
        let lu = a
            .sp_lu()
            .map_err(|e| VemError::SingularMatrix(format!("sparse LU failed: {e:?}")))?;
        Ok(Self::Sparse(lu))
    }

    fn solve(&self, b: &DVector<f64>) -> DVector<f64> {
        let rhs = faer::Col::<f64>::from_fn(b.len(), |i| b[i]);
        let x = match self {
            Self::Dense(lu) => lu.solve(&rhs),
            Self::Sparse(lu) => lu.solve(&rhs),
        };
        DVector::from_fn(b.len(), |i, _| x[i])
    }
}

/// Inverse of a matrix whose last row and column are dense, applied
/// through a sparse factorization of the leading block.
///
/// The leading block may be singular; `pin` names an index whose diagonal
/// is shifted by `s` to make it invertible, and the shift is removed again
/// with a rank-one update.
struct BorderedInverse {
    inner: Factor,
    row: Vec<(usize, f64)>,
    w: DVector<f64>,
    denom: f64,
    pin: usize,
    shift: f64,
    q: DVector<f64>,
    qden: f64,
}

impl BorderedInverse {
    fn new(matrix: &SparseMatrix, pin: usize) -> Result<Self> {
        let m = matrix.n - 1;
        let mut col = DVector::zeros(m);
        let mut row = Vec::new();
        let mut corner = 0.0;
        let mut shift: f64 = 0.0;
        for &(r, c, v) in &matrix.entries {
            match (r == m, c == m) {
                (true, true) => corner += v,
                (true, false) => row.push((c, v)),
                (false, true) => col[r] += v,
                _ if r == pin => shift = shift.max(v.abs()),
                _ => {}
            }
        }
        if shift == 0.0 {
            shift = 1.0;
        }
        let inner = Factor::sparse(
            m,
            matrix
                .entries
                .iter()
                .copied()
                .filter(|&(r, c, _)| r < m && c < m)
                .chain([(pin, pin, shift)]),
        )?;
        let w = inner.solve(&col);
        let denom = row.iter().map(|&(c, v)| v * w[c]).sum::<f64>() - corner;
        let mut inv = Self {
            inner,
            row,
            w,
            denom,
            pin,
            shift,
            q: DVector::zeros(0),
            qden: 0.0,
        };
        let mut e = DVector::zeros(m + 1);
        e[pin] = 1.0;
        inv.q = inv.apply_shifted(&e);
        inv.qden = 1.0 - shift * inv.q[pin];
        if !(inv.denom.is_finite() && inv.denom != 0.0 && inv.qden.is_finite() && inv.qden != 0.0) {
            return Err(VemError::SingularMatrix("bordered system has no unique solution".into()));
        }
        Ok(inv)
    }

    /// Inverse of the bordered matrix with the shifted leading block.
    fn apply_shifted(&self, b: &DVector<f64>) -> DVector<f64> {
        let m = b.len() - 1;
        let y = self.inner.solve(&b.rows(0, m).into_owned());
        let mu = (self.row.iter().map(|&(c, v)| v * y[c]).sum::<f64>() - b[m]) / self.denom;
        let mut x = DVector::zeros(m + 1);
        x.rows_mut(0, m).copy_from(&(y - &self.w * mu));
        x[m] = mu;
        x
    }

    fn solve(&self, b: &DVector<f64>) -> DVector<f64> {
        let z = self.apply_shifted(b);
        let t = self.shift * z[self.pin] / self.qden;
        z + &self.q * t
    }
}

/// Residual-checked solve with up to three refinement steps.
fn refine(
    matrix: &SparseMatrix,
    rhs: &DVector<f64>,
    inverse: impl Fn(&DVector<f64>) -> DVector<f64>,
    dense: bool,
) -> Result<(DVector<f64>, SolveReport)> {
    let bnorm = rhs.norm();
    let rel = |r: &DVector<f64>| if bnorm > 0.0 { r.norm() / bnorm } else { r.norm() };
    let mut x = inverse(rhs);
    if x.iter().any(|v| !v.is_finite()) {
        return Err(VemError::SingularMatrix(
            "factorization produced non-finite values (missing pressure constraint or disconnected mesh?)"
                .into(),
        ));
    }
    let mut r = rhs - matrix.mul(&x);
    let mut res = rel(&r);
    let mut steps = 0;
    while res > 1e-13 && steps < 3 {
        let next_x = &x + inverse(&r);
        let next_r = rhs - matrix.mul(&next_x);
        let next = rel(&next_r);
        steps += 1;
        if !(next < res) {
            break;
        }
        (x, r, res) = (next_x, next_r, next);
    }
    if !res.is_finite() {
        return Err(VemError::SingularMatrix("non-finite residual".into()));
    }
    if res > RESIDUAL_TOL {
        return Err(VemError::SolverFailure(format!(
            "relative residual {res:.3e} exceeds {RESIDUAL_TOL:e} after {steps} refinement steps"
        )));
    }
    Ok((
        x,
        SolveReport {
            unknowns: matrix.n,
            nonzeros: matrix.nnz(),
            dense,
            relative_residual: res,
            refinement_steps: steps,
            condition_warning: steps > 1,
        },
    ))
}

fn check_rhs(matrix: &SparseMatrix, rhs: &DVector<f64>) -> Result<()> {
    if rhs.len() != matrix.n {
        return Err(VemError::DimensionMismatch(format!(
            "matrix of size {} with right-hand side of length {}",
            matrix.n,
            rhs.len()
        )));
    }
    Ok(())
}

/// Direct solve of a general sparse system with residual verification and
/// up to three refinement steps.
pub fn solve_linear(matrix: &SparseMatrix, rhs: &DVector<f64>) -> Result<(DVector<f64>, SolveReport)> {
    check_rhs(matrix, rhs)?;
    let dense = matrix.n < DENSE_LIMIT;
    let factor = if dense {
        Factor::dense(matrix)
    } else {
        Factor::sparse(matrix.n, matrix.entries.iter().copied())?
    };
    refine(matrix, rhs, |b| factor.solve(b), dense)
}

/// Solve of an assembled system. Large systems keep the dense λ row and
/// column out of the sparse factorization, which would otherwise fill in.
pub fn solve(system: &GlobalSystem, k: usize) -> Result<(Solution, SolveReport)> {
    check_rhs(&system.matrix, &system.rhs)?;
    let (x, report) = if system.dim() < DENSE_LIMIT {
        solve_linear(&system.matrix, &system.rhs)?
    } else {
        let inv = BorderedInverse::new(&system.matrix, 2 * system.n_scalar)?;
        refine(&system.matrix, &system.rhs, |b| inv.solve(b), false)?
    };
    Ok((Solution::from_vector(k, system.n_scalar, &x), report))
}

/// Assembly, boundary conditions and solve in one call.
pub fn solve_problem(
    disc: &Discretization,
    problem: &OseenProblem,
    params: &StabilizationParams,
    variant: ConvectiveVariant,
) -> Result<(Solution, SolveReport)> {
    problem.validate_load()?;
    let mut sys = assemble(disc, problem, params, variant)?;
    apply_dirichlet(&mut sys, disc, |x| (problem.dirichlet)(x));
    solve(&sys, disc.k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::generate_structured_quads;
    use crate::problems::{example1, stokes_patch_with};
    use crate::Vec2;

    #[test]
    fn zero_data_gives_zero_solution() {
        let m = generate_structured_quads(1).unwrap();
        let disc = Discretization::new(&m, 1).unwrap();
        let mut p = stokes_patch_with(1, 1.0).unwrap();
        p.load = std::sync::Arc::new(|_| Vec2::zeros());
        p.dirichlet = std::sync::Arc::new(|_| Vec2::zeros());
        p.exact = None;
        let (sol, rep) = solve_problem(&disc, &p, &Default::default(), ConvectiveVariant::Skew).unwrap();
        assert_eq!(sol.to_vector().amax(), 0.0);
        assert_eq!(rep.relative_residual, 0.0);
    }

    #[test]
    fn dimension_counts() {
        let m = generate_structured_quads(5).unwrap();
        let disc = Discretization::new(&m, 1).unwrap();
        let sys = assemble(&disc, &example1(1.0, 1.0), &Default::default(), ConvectiveVariant::Skew).unwrap();
        assert_eq!(sys.dim(), 109);
    }

    #[test]
    fn stokes_velocity_block_is_symmetric() {
        let m = generate_structured_quads(3).unwrap();
        let disc = Discretization::new(&m, 2).unwrap();
        let p = stokes_patch_with(2, 1.0).unwrap();
        let sys = assemble(&disc, &p, &Default::default(), ConvectiveVariant::Skew).unwrap();
        let n = disc.n_scalar();
        let a = sys.matrix.dense_block(0, 2 * n, 0, 2 * n);
        assert!((&a - a.transpose()).amax() <= 1e-12 * a.amax());
    }

    #[test]
    fn dense_and_sparse_agree() {
        let m = generate_structured_quads(4).unwrap();
        let disc = Discretization::new(&m, 2).unwrap();
        let mut sys = assemble(&disc, &example1(1.0, 1.0), &Default::default(), ConvectiveVariant::Skew).unwrap();
        apply_dirichlet(&mut sys, &disc, |_| Vec2::zeros());
        let (x, rep) = solve_linear(&sys.matrix, &sys.rhs).unwrap();
        assert!(rep.dense);
        let t: Vec<Triplet<usize, usize, f64>> =
            sys.matrix.entries.iter().map(|&(r, c, v)| Triplet::new(r, c, v)).collect();
        let a = SparseColMat::<usize, f64>::try_new_from_triplets(sys.matrix.n, sys.matrix.n, &t).unwrap();
        let lu = a.sp_lu().unwrap();
        let y = Factor::Sparse(lu).solve(&sys.rhs);
        assert!((x - y).amax() < 1e-10);
    }

    #[test]
    fn bordered_solve_matches_dense() {
        let m = generate_structured_quads(4).unwrap();
        let disc = Discretization::new(&m, 1).unwrap();
        let p = example1(1e-8, 1.0);
        let mut sys = assemble(&disc, &p, &Default::default(), ConvectiveVariant::Skew).unwrap();
        apply_dirichlet(&mut sys, &disc, |x| (p.dirichlet)(x));
        let (x, _) = solve_linear(&sys.matrix, &sys.rhs).unwrap();
        let inv = BorderedInverse::new(&sys.matrix, 2 * sys.n_scalar).unwrap();
        let (y, rep) = refine(&sys.matrix, &sys.rhs, |b| inv.solve(b), false).unwrap();
        assert!(rep.relative_residual < 1e-12);
        assert!((x - y).amax() < 1e-10);
    }

    #[test]
    fn variant_parsing() {
        assert_eq!("hat".parse::<ConvectiveVariant>().unwrap(), ConvectiveVariant::Hat);
        assert!("upwind".parse::<ConvectiveVariant>().is_err());
    }
}
