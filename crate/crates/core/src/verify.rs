//! Runtime property suites and the independent oracles they use.
//!
//! Each suite checks the invariants of one module on random or generated
//! data and reports a named outcome. [`run`] drives them for the `verify`
//! command.

use std::fmt::Write as _;
use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analysis::{compute_errors, energy_norm_diagnostic};
use crate::forms::{fluctuation, local_a, local_c_hat, local_c_skew, local_d, stabilizer_matrices};
use crate::lps::{local_l1, local_l2, local_l3, StabilizationParams};
use crate::mesh::{format_mesh, parse_mesh, validate, ElementGeometry, MeshFamily, PolyMesh};
use crate::polybasis::{dim, index, multi_index, CalculusTables, MonomialBasis};
use crate::problems::{example1, example2, example3, example4, stokes_patch_with, OseenProblem};
use crate::quadrature::{edge_rule, gauss_legendre, integrate_monomials, polygon_rule, PolygonRule};
use crate::system::{
    assemble, assemble_coupling, assemble_velocity_operator, solve_problem, ConvectiveVariant, Solution,
};
use crate::vemspace::{Discretization, VemElement};
use crate::{Result, Vec2};

/// Shapes produced by [`random_polygon`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolygonKind {
    Triangle,
    Quad,
    Pentagon,
    Hexagon,
    NonConvex,
}

impl PolygonKind {
    pub const ALL: [PolygonKind; 5] = [
        PolygonKind::Triangle,
        PolygonKind::Quad,
        PolygonKind::Pentagon,
        PolygonKind::Hexagon,
        PolygonKind::NonConvex,
    ];
}

/// Random counter-clockwise polygon of the given kind. Convex kinds place
/// vertices on an ellipse at separated random angles; the non-convex kind
/// is a star with alternating radii. Size and position are random.
pub fn random_polygon(rng: &mut impl Rng, kind: PolygonKind) -> ElementGeometry {
    use std::f64::consts::PI;
    let local: Vec<Vec2> = match kind {
        PolygonKind::NonConvex => {
            let m = rng.random_range(3..=5);
            let inner = rng.random_range(0.4..0.7);
            let phase = rng.random_range(0.0..2.0 * PI);
            (0..2 * m)
                .map(|i| {
                    let t = phase + PI * i as f64 / m as f64 + rng.random_range(-0.1..0.1);
                    let r = if i % 2 == 0 { 1.0 } else { inner };
                    Vec2::new(r * t.cos(), r * t.sin())
                })
                .collect()
        }
        _ => {
            let n = match kind {
                PolygonKind::Triangle => 3,
                PolygonKind::Quad => 4,
                PolygonKind::Pentagon => 5,
                _ => 6,
            };
            let phase = rng.random_range(0.0..2.0 * PI);
            let gap = 2.0 * PI / n as f64;
            let aspect = rng.random_range(0.6..1.0);
            (0..n)
                .map(|i| {
                    let t = phase + gap * (i as f64 + rng.random_range(-0.3..0.3));
                    Vec2::new(t.cos(), aspect * t.sin())
                })
                .collect()
        }
    };
    let scale = 10f64.powf(rng.random_range(-2.0..0.0));
    let shift = Vec2::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    ElementGeometry::from_vertices(local.into_iter().map(|p| shift + p * scale).collect())
}

/// Gauss-Legendre nodes and weights on [0, 1] from the eigen-decomposition
/// of the Jacobi matrix, independent of [`crate::quadrature`].
pub fn golub_welsch(n: usize) -> (Vec<f64>, Vec<f64>) {
    let j = DMatrix::from_fn(n, n, |r, c| {
        if r.abs_diff(c) == 1 {
            let k = r.max(c) as f64;
            k / (4.0 * k * k - 1.0).sqrt()
        } else {
            0.0
        }
    });
    let eig = j.symmetric_eigen();
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let v = eig.eigenvectors[(0, i)];
            (0.5 * (eig.eigenvalues[i] + 1.0), v * v)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

/// ∫_E ((x-c_x)/h)^a ((y-c_y)/h)^b by Green's theorem,
/// h² ∮ X^{a+1} Y^b/(a+1) dY, each edge integral by an exact Gauss rule.
pub fn green_monomial_integral(vertices: &[Vec2], center: Vec2, h: f64, a: usize, b: usize) -> f64 {
    let (t, w) = golub_welsch((a + b + 3) / 2);
    let n = vertices.len();
    let mut total = 0.0;
    for i in 0..n {
        let p = (vertices[i] - center) / h;
        let q = (vertices[(i + 1) % n] - center) / h;
        let dy = q.y - p.y;
        let s: f64 = t
            .iter()
            .zip(&w)
            .map(|(&t, &w)| {
                let x = p.x + t * (q.x - p.x);
                let y = p.y + t * dy;
                w * x.powi(a as i32 + 1) * y.powi(b as i32)
            })
            .sum();
        total += s * dy;
    }
    h * h * total / (a + 1) as f64
}

/// Midpoint-rule integral of the same monomial over an `n × n` grid on the
/// bounding box, counting cells whose midpoint lies inside.
pub fn riemann_monomial_integral(geom: &ElementGeometry, center: Vec2, h: f64, a: usize, b: usize, n: usize) -> f64 {
    let (mut lo, mut hi) = (geom.vertices[0], geom.vertices[0]);
    for v in &geom.vertices {
        lo = lo.inf(v);
        hi = hi.sup(v);
    }
    let dx = (hi.x - lo.x) / n as f64;
    let dy = (hi.y - lo.y) / n as f64;
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            let p = Vec2::new(lo.x + (i as f64 + 0.5) * dx, lo.y + (j as f64 + 0.5) * dy);
            if geom.contains(p) {
                let r = (p - center) / h;
                s += r.x.powi(a as i32) * r.y.powi(b as i32);
            }
        }
    }
    s * dx * dy
}

/// Largest relative error of `rule` over all scaled monomials of degree
/// ≤ `degree`, against [`green_monomial_integral`].
pub fn rule_exactness_error(geom: &ElementGeometry, rule: &PolygonRule, degree: usize) -> f64 {
    let basis = MonomialBasis::new(degree, geom.centroid, geom.diameter);
    let mut q = vec![0.0; basis.len()];
    for (&p, &w) in rule.points.iter().zip(&rule.weights) {
        for (o, m) in q.iter_mut().zip(basis.eval(p)) {
            *o += w * m;
        }
    }
    let mut abs = vec![0.0; basis.len()];
    for (&p, &w) in rule.points.iter().zip(&rule.weights) {
        for (o, m) in abs.iter_mut().zip(basis.eval(p)) {
            *o += w * m.abs();
        }
    }
    // relative to ∫|m|, which sets the scale of monomials whose integral cancels
    (0..basis.len())
        .map(|i| {
            let (a, b) = multi_index(i);
            let exact = green_monomial_integral(&geom.vertices, geom.centroid, geom.diameter, a, b);
            (q[i] - exact).abs() / exact.abs().max(abs[i].abs())
        })
        .fold(0.0, f64::max)
}

/// Largest relative error of the projectors of `el` on the DOFs of every
/// monomial of degree ≤ k: Π∇_k, Π⁰_k, Π∇_{k-1} and Π⁰∘∇ must return
/// the exact coefficients.
pub fn projector_reproduction_error(el: &VemElement) -> Result<f64> {
    let k = el.k;
    let nk = dim(k as isize);
    let nk1 = dim(k as isize - 1);
    let p = &el.proj;
    let h = el.basis.h;
    let mut worst: f64 = 0.0;
    for beta in 0..nk {
        let dofs = el.interpolate(|x| el.basis.eval(x)[beta])?;
        let unit = DVector::from_fn(nk, |i, _| if i == beta { 1.0 } else { 0.0 });
        worst = worst.max((&p.pi_nabla_k * &dofs - &unit).amax());
        worst = worst.max((&p.pi0_k * &dofs - &unit).amax());
        if beta < nk1 {
            let unit1 = unit.rows(0, nk1).into_owned();
            worst = worst.max((&p.pi_nabla_km1 * &dofs - unit1).amax());
        }
        let (a, b) = multi_index(beta);
        let mut g = [DVector::zeros(nk), DVector::zeros(nk)];
        if a > 0 {
            g[0][index(a - 1, b)] = a as f64;
        }
        if b > 0 {
            g[1][index(a, b - 1)] = b as f64;
        }
        for d in 0..2 {
            // coefficients scaled by h so that they are O(1)
            worst = worst.max((&p.grad_k[d] * &dofs * h - &g[d]).amax());
            let low = g[d].rows(0, nk1).into_owned();
            worst = worst.max((&p.grad_km1[d] * &dofs * h - low).amax());
        }
    }
    Ok(worst)
}

/// Outcome of one named property.
#[derive(Debug, Clone)]
pub struct PropertyOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

#[derive(Debug, Clone, Default)]
pub struct VerifySummary {
    pub outcomes: Vec<PropertyOutcome>,
}

impl VerifySummary {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }

    pub fn failing(&self) -> Vec<&str> {
        self.outcomes.iter().filter(|o| !o.passed).map(|o| o.name.as_str()).collect()
    }

    pub fn render(&self, verbose: bool) -> String {
        let mut s = String::new();
        for o in &self.outcomes {
            let tag = if o.passed { "PASS" } else { "FAIL" };
            if verbose {
                let _ = writeln!(s, "{tag} {:<28} {:>8.3}s  {}", o.name, o.seconds, o.detail);
            } else {
                let _ = writeln!(s, "{tag} {:<28} {}", o.name, o.detail);
            }
        }
        let failing = self.failing();
        if failing.is_empty() {
            let _ = writeln!(s, "all {} properties passed", self.outcomes.len());
        } else {
            let _ = writeln!(s, "failing properties: {}", failing.join(", "));
        }
        s
    }
}

/// Settings of a verification run.
#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Multiplies every polygon quadrature weight checked by the
    /// quadrature suite. Anything but 1 must make it fail.
    pub quadrature_weight_scale: f64,
    /// Random samples per property.
    pub samples: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            seed: 2024,
            quadrature_weight_scale: 1.0,
            samples: 50,
        }
    }
}

type Check = std::result::Result<String, String>;

fn outcome(name: &str, f: impl FnOnce() -> Check) -> PropertyOutcome {
    let t = Instant::now();
    let r = f();
    let seconds = t.elapsed().as_secs_f64();
    let (passed, detail) = match r {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    PropertyOutcome {
        name: name.to_string(),
        passed,
        detail,
        seconds,
    }
}

fn bound(name: &str, value: f64, limit: f64) -> Check {
    if value <= limit {
        Ok(format!("{name} {value:.2e} <= {limit:.0e}"))
    } else {
        Err(format!("{name} {value:.2e} > {limit:.0e}"))
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn families(seed: u64) -> Vec<MeshFamily> {
    ["squares", "distorted", "voronoi", "nonconvex"]
        .iter()
        .map(|n| MeshFamily::from_name(n, seed).expect("known family"))
        .collect()
}

fn random_kind(i: usize) -> PolygonKind {
    [PolygonKind::Quad, PolygonKind::Pentagon, PolygonKind::Hexagon, PolygonKind::NonConvex][i % 4]
}

pub const SUITES: [&str; 10] = [
    "mesh", "quadrature", "polybasis", "projectors", "forms", "lps", "system", "patch", "problems", "analysis",
];

/// Runs every suite.
pub fn run(opts: &VerifyOptions) -> VerifySummary {
    let mut s = VerifySummary::default();
    for name in SUITES {
        s.outcomes.extend(run_suite(name, opts));
    }
    s
}

/// Runs one suite by name; unknown names give no outcomes.
pub fn run_suite(name: &str, opts: &VerifyOptions) -> Vec<PropertyOutcome> {
    match name {
        "mesh" => mesh_suite(opts),
        "quadrature" => quadrature_suite(opts),
        "polybasis" => polybasis_suite(opts),
        "projectors" => projector_suite(opts),
        "forms" => forms_suite(opts),
        "lps" => lps_suite(opts),
        "system" => system_suite(opts),
        "patch" => patch_suite(opts),
        "problems" => problems_suite(opts),
        "analysis" => analysis_suite(opts),
        _ => Vec::new(),
    }
}

fn mesh_suite(opts: &VerifyOptions) -> Vec<PropertyOutcome> {
    let mut out = Vec::new();
    for fam in families(opts.seed) {
        let name = format!("mesh.{}", fam.name());
        out.push(outcome(&name, || {
            let m = fam.generate(6).map_err(err)?;
            let again = fam.generate(6).map_err(err)?;
            if format_mesh(&m) != format_mesh(&again) {
                return Err("generator is not deterministic".into());
            }
            if m.euler_characteristic() != 1 {
                return Err(format!("V - E + F = {}", m.euler_characteristic()));
            }
            if let Some(c) = (0..m.n_cells()).find(|&c| m.cell_area(c) <= 0.0) {
                return Err(format!("cell {c} has non-positive area"));
            }
            let rep = validate(&m, 0.01);
            if !rep.passed {
                return Err(format!(
                    "regularity failed: edge ratio {:.3}, star ratio {:.3}",
                    rep.worst_edge_ratio, rep.worst_star_ratio
                ));
            }
            let back = parse_mesh(&format_mesh(&m)).map_err(err)?;
            if back != m {
                return Err("file round trip changed the mesh".into());
            }
            Ok(format!("{} cells, regular, deterministic", m.n_cells()))
        }));
    }
    out
}

fn quadrature_suite(opts: &VerifyOptions) -> Vec<PropertyOutcome> {
    let mut out = Vec::new();
    out.push(outcome("quadrature.edge_weights", || {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let mut worst: f64 = 0.0;
        for i in 0..opts.samples {
            let g = random_polygon(&mut rng, PolygonKind::ALL[i % 5]);
            for e in &g.edges {
                for n in 1..=6 {
                    let r = edge_rule(e, &gauss_legendre(n));
                    let s: f64 = r.weights.iter().sum();
                    worst = worst.max((s - e.length).abs() / e.length);
                }
            }
        }
        bound("edge weight sum error", worst, 1e-14)
    }));
    out.push(outcome("quadrature.exactness", || {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed + 1);
        let mut worst: f64 = 0.0;
        for i in 0..opts.samples {
            let g = random_polygon(&mut rng, PolygonKind::ALL[i % 5]);
            for degree in 0..=8 {
                let rule = polygon_rule(&g, degree)
                    .map_err(err)?
                    .with_scaled_weights(opts.quadrature_weight_scale);
                worst = worst.max(rule_exactness_error(&g, &rule, degree));
            }
        }
        bound("monomial integration error", worst, 1e-12)
    }));
    out
}

fn polybasis_suite(opts: &VerifyOptions) -> Vec<PropertyOutcome> {
    let mut out = Vec::new();
    out.push(outcome("polybasis.mass_matrix", || {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed + 2);
        let mut worst: f64 = 0.0;
        for i in 0..opts.samples {
            let g = random_polygon(&mut rng, random_kind(i));
            for k in 1..=3 {
                let basis = MonomialBasis::for_element(k, &g);
                let t = CalculusTables::build(&basis, &g).map_err(err)?;
                let ints = integrate_monomials(&g, k).map_err(err)?;
                for r in 0..basis.len() {
                    for c in 0..basis.len() {
                        let (a1, b1) = multi_index(r);
                        let (a2, b2) = multi_index(c);
                        let v = ints[index(a1 + a2, b1 + b2)];
                        worst = worst.max((t.mass[(r, c)] - v).abs() / t.mass[(0, 0)]);
                    }
                }
            }
        }
        bound("H vs monomial integrals", worst, 1e-13)
    }));
    out.push(outcome("polybasis.gradient", || {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed + 3);
        let mut worst: f64 = 0.0;
        for i in 0..20 {
            let g = random_polygon(&mut rng, random_kind(i));
            let basis = MonomialBasis::for_element(3, &g);
            let p = g.centroid + Vec2::new(rng.random_range(-0.2..0.2), rng.random_range(-0.2..0.2)) * g.diameter;
            let d = 1e-6 * g.diameter;
            let (gx, gy) = basis.grad(p);
            let fx: Vec<f64> = basis
                .eval(p + Vec2::new(d, 0.0))
                .iter()
                .zip(basis.eval(p - Vec2::new(d, 0.0)))
                .map(|(a, b)| (a - b) / (2.0 * d))
                .collect();
            let fy: Vec<f64> = basis
                .eval(p + Vec2::new(0.0, d))
                .iter()
                .zip(basis.eval(p - Vec2::new(0.0, d)))
                .map(|(a, b)| (a - b) / (2.0 * d))
                .collect();
            for j in 0..basis.len() {
                worst = worst.max((gx[j] - fx[j]).abs() * g.diameter);
                worst = worst.max((gy[j] - fy[j]).abs() * g.diameter);
            }
        }
        bound("gradient vs differences", worst, 1e-6)
    }));
    out
}

fn projector_suite(opts: &VerifyOptions) -> Vec<PropertyOutcome> {
    let mut out = Vec::new();
    out.push(outcome("projectors.reproduction", || {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed + 4);
        let mut worst: f64 = 0.0;
        for i in 0..2 * opts.samples {
            let g = random_polygon(&mut rng, random_kind(i));
            for k in 1..=2 {
                let el = VemElement::from_geometry(0, g.clone(), k, None).map_err(err)?;
                worst = worst.max(projector_reproduction_error(&el).map_err(err)?);
            }
        }
        bound("coefficient error", worst, 1e-9)
    }));
    out.push(outcome("projectors.orthogonality", || {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed + 5);
        let mut worst: f64 = 0.0;
        for i in 0..opts.samples {
            let g = random_polygon(&mut rng, random_kind(i));
            for k in 1..=2 {
                let el = VemElement::from_geometry(0, g.clone(), k, None).map_err(err)?;
                let p = &el.proj;
                let n = el.n_dofs();
                let v = DVector::from_fn(n, |_, _| rng.random_range(-1.0..1.0));
                let c = &p.pi_nabla_k * &v;
                // (∇Π∇v, ∇m) = (∇v, ∇m) = B v for the non-constant rows
                let lhs = &el.tables.stiffness * &c;
                let rhs = &p.b_matrix * &v;
                let scale = rhs.amax().max(lhs.amax()).max(1e-300);
                worst = worst.max((lhs - rhs).rows(1, c.len() - 1).amax() / scale);
                // (Π⁰v, m) = ∫ v m for |α| ≤ k
                let m = &el.tables.mass * (&p.pi0_k * &v);
                let mv = &p.moments * &v;
                worst = worst.max((m - &mv).amax() / mv.amax().max(1e-300));
            }
        }
        bound("orthogonality residual", worst, 1e-10)
    }));
    out.push(outcome("projectors.l2_stability", || {
        let mut ratios = Vec::new();
        for n in [2, 4, 8, 16] {
            let m = crate::mesh::generate_distorted_quads(n, 0.2, opts.seed).map_err(err)?;
            let disc = Discretization::new(&m, 2).map_err(err)?;
            let mut worst: f64 = 0.0;
            for el in &disc.elements {
                let p = &el.proj.pi0_k;
                let norm = (p.transpose() * &el.tables.mass * p).symmetric_eigenvalues().max();
                worst = worst.max((norm / el.geom.area).sqrt());
            }
            ratios.push(worst);
        }
        let spread = ratios.iter().cloned().fold(0.0, f64::max) / ratios.iter().cloned().fold(f64::INFINITY, f64::min);
        if spread < 2.0 {
            Ok(format!("‖Π⁰‖ per refinement {ratios:.3?}"))
        } else {
            Err(format!("‖Π⁰‖ grows under refinement: {ratios:.3?}"))
        }
    }));
    out
}

fn monomial_dofs(el: &VemElement) -> Result<Vec<DVector<f64>>> {
    (0..el.basis.len()).map(|b| el.interpolate(|x| el.basis.eval(x)[b])).collect()
}

fn forms_suite(opts: &VerifyOptions) -> Vec<PropertyOutcome> {
    let mut out = Vec::new();
    out.push(outcome("forms.consistency", || {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed + 6);
        let mut worst: f64 = 0.0;
        for i in 0..opts.samples / 2 {
            let g = random_polygon(&mut rng, random_kind(i));
            for k in 1..=2 {
                let el = VemElement::from_geometry(0, g.clone(), k, None).map_err(err)?;
                let n = el.n_dofs();
                let a = local_a(&el, 1.0).view((0, 0), (n, n)).into_owned();
                let d = local_d(&el, 1.0).view((0, 0), (n, n)).into_owned();
                let dofs = monomial_dofs(&el).map_err(err)?;
                let h = el.basis.h;
                let c = el.basis.center;
                let int = |a: isize, b: isize| {
                    if a < 0 || b < 0 {
                        0.0
                    } else {
                        green_monomial_integral(&g.vertices, c, h, a as usize, b as usize)
                    }
                };
                for (r, vr) in dofs.iter().enumerate() {
                    for (s, vs) in dofs.iter().enumerate() {
                        let (a1, b1) = multi_index(r);
                        let (a2, b2) = multi_index(s);
                        let (a1, b1, a2, b2) = (a1 as isize, b1 as isize, a2 as isize, b2 as isize);
                        let exact_a = ((a1 * a2) as f64 * int(a1 + a2 - 2, b1 + b2)
                            + (b1 * b2) as f64 * int(a1 + a2, b1 + b2 - 2))
                            / (h * h);
                        let exact_d = int(a1 + a2, b1 + b2);
                        let ah = vr.dot(&(&a * vs));
                        let dh = vr.dot(&(&d * vs));
                        worst = worst.max((ah - exact_a).abs() / 1f64.max(exact_a.abs()));
                        worst = worst.max((dh - exact_d).abs() / g.area);
                    }
                }
            }
        }
        bound("a_h and d_h on monomials", worst, 1e-10)
    }));
    out.push(outcome("forms.stability_band", || {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed + 7);
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for i in 0..100 {
            let g = random_polygon(&mut rng, random_kind(i));
            let k = 1 + i % 2;
            let el = VemElement::from_geometry(0, g, k, None).map_err(err)?;
            let n = el.n_dofs();
            let a = local_a(&el, 1.0).view((0, 0), (n, n)).into_owned();
            let p = &el.proj;
            let (s, _, _) = stabilizer_matrices(&el);
            let gform = p.pi_nabla_k.transpose() * &el.tables.stiffness * &p.pi_nabla_k
                + fluctuation(&p.dof_pi_nabla_k(), &s);
            let v = DVector::from_fn(n, |_, _| rng.random_range(-1.0..1.0));
            let r = v.dot(&(&a * &v)) / v.dot(&(&gform * &v));
            lo = lo.min(r);
            hi = hi.max(r);
        }
        if lo > 0.0 && hi.is_finite() {
            Ok(format!("a_h / a in [{lo:.3}, {hi:.3}]"))
        } else {
            Err(format!("degenerate band [{lo:.3e}, {hi:.3e}]"))
        }
    }));
    out.push(outcome("forms.antisymmetry", || {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed + 8);
        let field = |x: Vec2| Vec2::new((3.0 * x.y).sin() + 1.0, x.x * x.x - 0.5);
        let mut worst: f64 = 0.0;
        for i in 0..opts.samples / 2 {
            let g = random_polygon(&mut rng, random_kind(i));
            let el = VemElement::from_geometry(0, g, 1 + i % 2, None).map_err(err)?;
            for m in [local_c_skew(&el, field).map_err(err)?, local_c_hat(&el, field).map_err(err)?] {
                worst = worst.max((&m + m.transpose()).amax());
            }
        }
        bound("|C + Cᵀ|", worst, 0.0)
    }));
    out
}

fn lps_suite(opts: &VerifyOptions) -> Vec<PropertyOutcome> {
    let mut out = Vec::new();
    let params = StabilizationParams::default();
    let field = |x: Vec2| Vec2::new(1.0 + x.y, 0.5 - x.x);
    out.push(outcome("lps.psd_and_vanishing", || {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed + 9);
        let mut neg: f64 = 0.0;
        let mut vanish: f64 = 0.0;
        for i in 0..100 {
            let g = random_polygon(&mut rng, PolygonKind::ALL[i % 5]);
            for k in 1..=2 {
                let el = VemElement::from_geometry(0, g.clone(), k, None).map_err(err)?;
                let n = el.n_dofs();
                let l1 = local_l1(&el, field, &params).map_err(err)?;
                let l2 = local_l2(&el, &params);
                let l3 = local_l3(&el, &params);
                for m in [&l1, &l2, &l3] {
                    let dim = m.nrows();
                    let scale = m.amax().max(1e-300);
                    for _ in 0..5 {
                        let v = DVector::from_fn(dim, |_, _| rng.random_range(-1.0..1.0));
                        neg = neg.max(-v.dot(&(m * &v)) / (scale * v.norm_squared()));
                    }
                }
                let dofs = monomial_dofs(&el).map_err(err)?;
                let nk1 = dim(k as isize - 1);
                let z = DVector::zeros(n);
                for (b, d) in dofs.iter().enumerate() {
                    let s1 = l1.amax().max(1e-300) * d.norm_squared();
                    let s3 = l3.amax().max(1e-300) * d.norm_squared();
                    if b < nk1 {
                        for v in [stack(d, &z), stack(&z, d)] {
                            vanish = vanish.max(v.dot(&(&l1 * &v)).abs() / s1);
                        }
                        vanish = vanish.max(d.dot(&(&l3 * d)).abs() / s3);
                    }
                }
                // divergence-free polynomials (x, -y) and (y, x) of degree 1
                let ix = el.interpolate(|p| (p.x - el.basis.center.x) / el.basis.h).map_err(err)?;
                let iy = el.interpolate(|p| (p.y - el.basis.center.y) / el.basis.h).map_err(err)?;
                for v in [stack(&ix, &-&iy), stack(&iy, &ix)] {
                    let s2 = l2.amax().max(1e-300) * v.norm_squared();
                    vanish = vanish.max(v.dot(&(&l2 * &v)).abs() / s2);
                }
            }
        }
        if neg <= 1e-14 && vanish <= 1e-12 {
            Ok(format!("min quadratic form {:.1e}, vanishing residual {vanish:.1e}", -neg))
        } else {
            Err(format!("negative part {neg:.1e}, vanishing residual {vanish:.1e}"))
        }
    }));
    out.push(outcome("lps.triangle_k1", || {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed + 10);
        let mut least = f64::INFINITY;
        for _ in 0..opts.samples {
            let g = random_polygon(&mut rng, PolygonKind::Triangle);
            let el = VemElement::from_geometry(0, g, 1, None).map_err(err)?;
            let l1 = local_l1(&el, |_| Vec2::new(1.0, 0.5), &params).map_err(err)?;
            let m = el.interpolate(|x| el.basis.eval(x)[1]).map_err(err)?;
            let v = stack(&m, &DVector::zeros(3));
            let q = v.dot(&(&l1 * &v)) / (params.tau1(el.geom.diameter) * 1.25);
            least = least.min(q);
        }
        if least > 1e-3 {
            Ok(format!("L1(m10, m10)/(τ1 B²) ≥ {least:.3e}"))
        } else {
            Err(format!("L1 vanishes on a linear: {least:.3e}"))
        }
    }));
    out.push(outcome("lps.l3_scaling", || {
        let mut vals = Vec::new();
        for n in [4, 8, 16] {
            let m = crate::mesh::generate_structured_quads(n).map_err(err)?;
            let disc = Discretization::new(&m, 1).map_err(err)?;
            let v = disc
                .elements
                .iter()
                .map(|el| local_l3(el, &params).amax())
                .fold(0.0, f64::max);
            vals.push(v);
        }
        let r1 = vals[0] / vals[1];
        let r2 = vals[1] / vals[2];
        if (2.0..=8.0).contains(&r1) && (2.0..=8.0).contains(&r2) {
            Ok(format!("max entry ratios per halving {r1:.2}, {r2:.2}"))
        } else {
            Err(format!("L3 does not scale like h²: ratios {r1:.2}, {r2:.2}"))
        }
    }));
    out
}

fn stack(a: &DVector<f64>, b: &DVector<f64>) -> DVector<f64> {
    let n = a.len();
    DVector::from_fn(2 * n, |i, _| if i < n { a[i] } else { b[i - n] })
}

/// Σ_E b_h(v, 1) for random velocities with zero boundary values, largest
/// absolute value over `samples` draws.
pub fn compatibility_defect(disc: &Discretization, samples: usize, seed: u64) -> f64 {
    let n = disc.n_scalar();
    let b = assemble_coupling(disc);
    let ones = DVector::from_element(n, 1.0);
    let b1 = &b * &ones;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let v = DVector::from_fn(2 * n, |i, _| {
            if disc.layout.boundary[i % n] {
                0.0
            } else {
                rng.random_range(-1.0..1.0)
            }
        });
        worst = worst.max(v.dot(&b1).abs());
    }
    worst
}

fn system_suite(opts: &VerifyOptions) -> Vec<PropertyOutcome> {
    let mut out = Vec::new();
    out.push(outcome("system.compatibility", || {
        let m = crate::mesh::generate_structured_quads(8).map_err(err)?;
        let mut worst: f64 = 0.0;
        for k in 1..=2 {
            let disc = Discretization::new(&m, k).map_err(err)?;
            worst = worst.max(compatibility_defect(&disc, 20, opts.seed));
        }
        bound("Σ b_h(v, 1)", worst, 1e-12)
    }));
    out.push(outcome("system.block_structure", || {
        let m = MeshFamily::from_name("voronoi", opts.seed)
            .expect("family")
            .generate(3)
            .map_err(err)?;
        let disc = Discretization::new(&m, 2).map_err(err)?;
        let n = disc.n_scalar();
        let p = example2(1e-2);
        let sys = assemble(&disc, &p, &StabilizationParams::default(), ConvectiveVariant::Skew).map_err(err)?;
        let v = sys.matrix.dense_block(0, 2 * n, 0, 2 * n);
        let field = |x: Vec2| (p.convection)(x);
        let c = assemble_velocity_operator(&disc, |el| local_c_skew(el, field))
            .map_err(err)?
            .to_dense();
        let skew = (&v - v.transpose()) * 0.5;
        let d1 = (skew - c).amax() / v.amax();
        let mut stokes = stokes_patch_with(2, 1.0).map_err(err)?;
        stokes.gamma = 0.0;
        let s = assemble(&disc, &stokes, &StabilizationParams::default(), ConvectiveVariant::Skew).map_err(err)?;
        let sv = s.matrix.dense_block(0, 2 * n, 0, 2 * n);
        let d2 = (&sv - sv.transpose()).amax() / sv.amax();
        bound("skew-part and symmetry defects", d1.max(d2), 1e-12)
    }));
    out
}

fn patch_suite(opts: &VerifyOptions) -> Vec<PropertyOutcome> {
    let mut out = Vec::new();
    for fam in families(opts.seed) {
        out.push(outcome(&format!("patch.{}", fam.name()), || {
            let m = fam.generate(4).map_err(err)?;
            let mut worst: f64 = 0.0;
            for k in 1..=2 {
                let p = stokes_patch_with(k, 1.0).map_err(err)?;
                let disc = Discretization::new(&m, k).map_err(err)?;
                let (sol, _) = solve_problem(&disc, &p, &StabilizationParams::default(), ConvectiveVariant::Skew)
                    .map_err(err)?;
                let e = compute_errors(&disc, &sol, &p).map_err(err)?;
                worst = worst.max(e.measures().into_iter().fold(0.0, f64::max));
            }
            bound("largest error", worst, 1e-8)
        }));
    }
    out
}

fn problem_list() -> Result<Vec<OseenProblem>> {
    Ok(vec![
        example1(1.0, 1.0),
        example1(1e-8, 1.0),
        example1(0.0, 0.0),
        example2(1.0),
        example2(1e-8),
        example3(1e-8, 0.1, 0.1)?,
        example3(0.0, 1.1, 1.1)?,
        example4(1e-2)?,
        example4(1e-6)?,
        stokes_patch_with(1, 1.0)?,
        stokes_patch_with(2, 1.0)?,
    ])
}

fn problems_suite(opts: &VerifyOptions) -> Vec<PropertyOutcome> {
    vec![outcome("problems.residual", || {
        let mut worst: f64 = 0.0;
        for p in problem_list().map_err(err)? {
            let r = p.residual_check(opts.samples, opts.seed).unwrap_or(0.0);
            if !(r <= 1e-8) {
                return Err(format!("{} (mu = {}) residual {r:.2e}", p.id, p.mu));
            }
            worst = worst.max(r);
        }
        bound("PDE residual", worst, 1e-8)
    })]
}

fn interpolated_solution(disc: &Discretization, p: &OseenProblem) -> Result<Solution> {
    let ex = p.exact.as_ref().expect("exact data");
    Ok(Solution {
        k: disc.k,
        u1: disc.interpolate(|x| (ex.u)(x).x)?,
        u2: disc.interpolate(|x| (ex.u)(x).y)?,
        p: disc.interpolate(|x| (ex.p)(x))?,
        lambda: 0.0,
    })
}

fn relative_change(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    (0..3).map(|i| (a[i] - b[i]).abs() / a[i].abs().max(1e-300)).fold(0.0, f64::max)
}

fn analysis_suite(opts: &VerifyOptions) -> Vec<PropertyOutcome> {
    let mut out = Vec::new();
    out.push(outcome("analysis.invariance", || {
        let p = example1(1.0, 1.0);
        let m: PolyMesh = MeshFamily::from_name("distorted", opts.seed)
            .expect("family")
            .generate(5)
            .map_err(err)?;
        let mut worst: f64 = 0.0;
        for k in 1..=2 {
            let disc = Discretization::new(&m, k).map_err(err)?;
            let base = compute_errors(&disc, &interpolated_solution(&disc, &p).map_err(err)?, &p)
                .map_err(err)?
                .measures();
            let rt = parse_mesh(&format_mesh(&m)).map_err(err)?;
            let order: Vec<usize> = (0..m.n_cells()).rev().collect();
            for other in [rt, m.with_cell_order(&order).map_err(err)?] {
                let d = Discretization::new(&other, k).map_err(err)?;
                let e = compute_errors(&d, &interpolated_solution(&d, &p).map_err(err)?, &p)
                    .map_err(err)?
                    .measures();
                worst = worst.max(relative_change(&base, &e));
            }
            let mut shifted = interpolated_solution(&disc, &p).map_err(err)?;
            shifted.p.add_scalar_mut(3.5);
            let e = compute_errors(&disc, &shifted, &p).map_err(err)?.measures();
            worst = worst.max(relative_change(&base, &e));
        }
        bound("relative change", worst, 1e-12)
    }));
    out.push(outcome("analysis.energy_norm", || {
        let m = crate::mesh::generate_structured_quads(4).map_err(err)?;
        let disc = Discretization::new(&m, 2).map_err(err)?;
        let p = example1(1e-2, 1.0);
        let params = StabilizationParams::default();
        let s = interpolated_solution(&disc, &p).map_err(err)?;
        let e1 = energy_norm_diagnostic(&disc, &s, &p, &params, 1.0).map_err(err)?;
        let mut s2 = s.clone();
        for v in [&mut s2.u1, &mut s2.u2, &mut s2.p] {
            *v *= 2.0;
        }
        let e2 = energy_norm_diagnostic(&disc, &s2, &p, &params, 1.0).map_err(err)?;
        let zero = Solution::zeros(2, disc.n_scalar());
        let e0 = energy_norm_diagnostic(&disc, &zero, &p, &params, 1.0).map_err(err)?;
        // μ = γ = 0, B = 0 and a linear pressure: only α‖q‖² remains
        let mut still = stokes_patch_with(2, 0.0).map_err(err)?;
        still.gamma = 0.0;
        let lin = disc.interpolate(|x| x.x - 0.5).map_err(err)?;
        let q = Solution {
            p: lin,
            ..Solution::zeros(2, disc.n_scalar())
        };
        let eq = energy_norm_diagnostic(&disc, &q, &still, &params, 2.0).map_err(err)?;
        let exact = 2.0 / 12.0;
        let d = ((e2 / e1 - 4.0).abs() / 4.0).max(e0.abs()).max((eq - exact).abs() / exact);
        bound("homogeneity / zero / pressure-only defects", d, 1e-12)
    }));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn green_oracle_on_unit_square() {
        let sq = [
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(1.0, 1.0),
            Vec2::new(0.0, 1.0),
        ];
        for a in 0..5 {
            for b in 0..5 {
                let v = green_monomial_integral(&sq, Vec2::zeros(), 1.0, a, b);
                let exact = 1.0 / ((a + 1) * (b + 1)) as f64;
                assert!((v - exact).abs() < 1e-15, "{a} {b}");
            }
        }
    }

    #[test]
    fn riemann_agrees_with_green() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = random_polygon(&mut rng, PolygonKind::NonConvex);
        let r = riemann_monomial_integral(&g, g.centroid, g.diameter, 2, 1, 400);
        let e = green_monomial_integral(&g.vertices, g.centroid, g.diameter, 2, 1);
        assert!((r - e).abs() < 1e-2 * g.area);
    }

    #[test]
    fn random_polygons_are_simple_and_ccw() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for i in 0..200 {
            let g = random_polygon(&mut rng, PolygonKind::ALL[i % 5]);
            assert!(g.area > 0.0);
            assert!(crate::mesh::is_simple_polygon(&g.vertices));
        }
    }
}
