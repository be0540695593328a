//! Manufactured Oseen problems on the unit square.
//!
//! Loads are hand-derived closed forms; [`OseenProblem::residual_check`]
//! validates them against finite differences of the exact solution.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use nalgebra::Matrix2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Result, Vec2, VemError};

pub type ScalarField = Arc<dyn Fn(Vec2) -> f64 + Send + Sync>;
pub type VectorField = Arc<dyn Fn(Vec2) -> Vec2 + Send + Sync>;
/// Velocity gradient with entry (i, j) = ∂_j u_i.
pub type TensorField = Arc<dyn Fn(Vec2) -> Matrix2<f64> + Send + Sync>;

#[derive(Clone)]
pub struct ExactSolution {
    pub u: VectorField,
    pub grad_u: TensorField,
    pub p: ScalarField,
}

#[derive(Clone)]
pub struct OseenProblem {
    pub id: String,
    pub mu: f64,
    pub gamma: f64,
    pub convection: VectorField,
    pub load: VectorField,
    pub dirichlet: VectorField,
    pub exact: Option<ExactSolution>,
    /// Length scale of the solution features; sets the finite-difference step
    /// of the residual check.
    pub length_scale: f64,
    /// Problem with the same load formula used by the residual check when
    /// finite differences at `length_scale` would be swamped by rounding.
    pub residual_reference: Option<Box<OseenProblem>>,
}

impl fmt::Debug for OseenProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OseenProblem")
            .field("id", &self.id)
            .field("mu", &self.mu)
            .field("gamma", &self.gamma)
            .field("has_exact", &self.exact.is_some())
            .finish()
    }
}

/// Parameters accepted by [`by_id`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemParams {
    pub mu: f64,
    pub gamma: f64,
    pub r1: f64,
    pub r2: f64,
    pub k: usize,
}

impl Default for ProblemParams {
    fn default() -> Self {
        Self {
            mu: 1.0,
            gamma: 1.0,
            r1: 0.1,
            r2: 0.1,
            k: 1,
        }
    }
}

pub const PROBLEM_IDS: [&str; 5] = ["example1", "example2", "example3", "example4", "stokes_patch"];

pub fn by_id(id: &str, p: &ProblemParams) -> Result<OseenProblem> {
    match id {
        "example1" => Ok(example1(p.mu, p.gamma)),
        "example2" => Ok(example2(p.mu)),
        "example3" => example3(p.mu, p.r1, p.r2),
        "example4" => example4(p.mu),
        "stokes_patch" => stokes_patch_with(p.k, p.mu),
        "custom" => Err(VemError::Domain(
            "the custom problem is built through `OseenProblem::custom`".into(),
        )),
        other => Err(VemError::Domain(format!(
            "unknown problem `{other}` (expected one of {})",
            PROBLEM_IDS.join(", ")
        ))),
    }
}

fn check_nonneg(name: &str, v: f64) -> Result<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(VemError::Domain(format!("{name} must be finite and non-negative, got {v}")))
    }
}

/// Builds a problem from exact fields and hand-derived second derivatives.
/// `lap_u` is Δu and `grad_p` is ∇p; the load is assembled from them.
#[allow(clippy::too_many_arguments)]
fn from_exact(
    id: &str,
    mu: f64,
    gamma: f64,
    b: VectorField,
    u: VectorField,
    grad_u: TensorField,
    lap_u: VectorField,
    p: ScalarField,
    grad_p: VectorField,
) -> OseenProblem {
    let load: VectorField = {
        let (b, u, grad_u) = (b.clone(), u.clone(), grad_u.clone());
        Arc::new(move |x| -mu * lap_u(x) + grad_u(x) * b(x) + gamma * u(x) + grad_p(x))
    };
    OseenProblem {
        id: id.to_string(),
        mu,
        gamma,
        convection: b,
        load,
        dirichlet: u.clone(),
        exact: Some(ExactSolution { u, grad_u, p }),
        length_scale: 1.0,
        residual_reference: None,
    }
}

impl OseenProblem {
    /// User-supplied fields; the exact solution is optional.
    pub fn custom(
        mu: f64,
        gamma: f64,
        convection: VectorField,
        load: VectorField,
        dirichlet: VectorField,
        exact: Option<ExactSolution>,
    ) -> Self {
        Self {
            id: "custom".into(),
            mu,
            gamma,
            convection,
            load,
            dirichlet,
            exact,
            length_scale: 1.0,
            residual_reference: None,
        }
    }

    /// Largest normalized residual of the strong form at `samples` random
    /// interior points, with fourth-order central differences of the exact
    /// solution. Returns `None` without exact data.
    pub fn residual_check(&self, samples: usize, seed: u64) -> Option<f64> {
        if let Some(r) = &self.residual_reference {
            return r.residual_check(samples, seed);
        }
        let ex = self.exact.as_ref()?;
        let h = 1e-3 * self.length_scale;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst: f64 = 0.0;
        let d1 = |f: &dyn Fn(Vec2) -> Vec2, x: Vec2, e: Vec2| {
            (-f(x + 2.0 * h * e) + 8.0 * f(x + h * e) - 8.0 * f(x - h * e) + f(x - 2.0 * h * e))
                / (12.0 * h)
        };
        let d2 = |f: &dyn Fn(Vec2) -> Vec2, x: Vec2, e: Vec2| {
            (-f(x + 2.0 * h * e) + 16.0 * f(x + h * e) - 30.0 * f(x) + 16.0 * f(x - h * e)
                - f(x - 2.0 * h * e))
                / (12.0 * h * h)
        };
        let ex_ = Vec2::new(1.0, 0.0);
        let ey_ = Vec2::new(0.0, 1.0);
        let pv = |x: Vec2| Vec2::new((ex.p)(x), 0.0);
        for _ in 0..samples {
            let x = Vec2::new(rng.random_range(0.05..0.95), rng.random_range(0.05..0.95));
            let u = &*ex.u;
            let ux = d1(u, x, ex_);
            let uy = d1(u, x, ey_);
            let lap = d2(u, x, ex_) + d2(u, x, ey_);
            let b = (self.convection)(x);
            let conv = ux * b.x + uy * b.y;
            let gp = Vec2::new(d1(&pv, x, ex_).x, d1(&pv, x, ey_).x);
            let react = self.gamma * u(x);
            let f = (self.load)(x);
            let res = -self.mu * lap + conv + react + gp - f;
            let scale = f.norm() + self.mu * lap.norm() + conv.norm() + react.norm() + gp.norm();
            worst = worst.max(res.norm() / scale.max(1.0));

            // the tabulated gradient must agree with the differences too
            let g = (ex.grad_u)(x);
            let fd = Matrix2::new(ux.x, uy.x, ux.y, uy.y);
            worst = worst.max((g - fd).norm() / fd.norm().max(1.0));
        }
        Some(worst)
    }

    /// Runs [`Self::residual_check`] on 20 points and rejects loads that do
    /// not match the exact solution.
    pub fn validate_load(&self) -> Result<()> {
        match self.residual_check(20, 0) {
            Some(r) if !(r <= 1e-8) => Err(VemError::Domain(format!(
                "load of `{}` does not match its exact solution (normalized residual {r:.3e})",
                self.id
            ))),
            _ => Ok(()),
        }
    }

    /// max |∇·B| at random points by central differences.
    pub fn convection_divergence(&self, samples: usize, seed: u64) -> f64 {
        let h = 1e-4 * self.length_scale.min(1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = &self.convection;
        (0..samples)
            .map(|_| {
                let x = Vec2::new(rng.random_range(0.05..0.95), rng.random_range(0.05..0.95));
                let e1 = Vec2::new(h, 0.0);
                let e2 = Vec2::new(0.0, h);
                let dx = (-b(x + 2.0 * e1).x + 8.0 * b(x + e1).x - 8.0 * b(x - e1).x + b(x - 2.0 * e1).x)
                    / (12.0 * h);
                let dy = (-b(x + 2.0 * e2).y + 8.0 * b(x + e2).y - 8.0 * b(x - e2).y + b(x - 2.0 * e2).y)
                    / (12.0 * h);
                (dx + dy).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Polynomial solution with B = (1, 1). The pressure equals the second
/// velocity component.
pub fn example1(mu: f64, gamma: f64) -> OseenProblem {
    // u1 = 2 A(x) Q(y), u2 = -2 Q(x) A(y) with A = x²(x-1)², Q = A'/2
    let a = |t: f64| t * t * (t - 1.0) * (t - 1.0);
    let q = |t: f64| t * (2.0 * t - 1.0) * (t - 1.0);
    let dq = |t: f64| 6.0 * t * t - 6.0 * t + 1.0;
    let d2q = |t: f64| 12.0 * t - 6.0;
    let u: VectorField = Arc::new(move |x| Vec2::new(2.0 * a(x.x) * q(x.y), -2.0 * q(x.x) * a(x.y)));
    let grad_u: TensorField = Arc::new(move |x| {
        Matrix2::new(
            4.0 * q(x.x) * q(x.y),
            2.0 * a(x.x) * dq(x.y),
            -2.0 * dq(x.x) * a(x.y),
            -4.0 * q(x.x) * q(x.y),
        )
    });
    let lap_u: VectorField = Arc::new(move |x| {
        Vec2::new(
            4.0 * dq(x.x) * q(x.y) + 2.0 * a(x.x) * d2q(x.y),
            -2.0 * d2q(x.x) * a(x.y) - 4.0 * q(x.x) * dq(x.y),
        )
    });
    let p: ScalarField = Arc::new(move |x| -2.0 * q(x.x) * a(x.y));
    let grad_p: VectorField =
        Arc::new(move |x| Vec2::new(-2.0 * dq(x.x) * a(x.y), -4.0 * q(x.x) * q(x.y)));
    let b: VectorField = Arc::new(|_| Vec2::new(1.0, 1.0));
    from_exact("example1", mu, gamma, b, u, grad_u, lap_u, p, grad_p)
}

/// Trigonometric solution with a variable, divergence-free B and γ = 0.
pub fn example2(mu: f64) -> OseenProblem {
    let tp = 2.0 * PI;
    let b: VectorField = Arc::new(|x| {
        let s = x.x + x.y * x.y;
        let s4 = s * s * s * s;
        Vec2::new(10.0 * x.y * s4 + 1.0 / 3.0, -5.0 * s4 - 0.5)
    });
    let u: VectorField = Arc::new(move |x| {
        Vec2::new(
            (tp * x.x).sin() * (tp * x.y).cos(),
            -(tp * x.x).cos() * (tp * x.y).sin(),
        )
    });
    let grad_u: TensorField = Arc::new(move |x| {
        let (sx, cx) = (tp * x.x).sin_cos();
        let (sy, cy) = (tp * x.y).sin_cos();
        Matrix2::new(tp * cx * cy, -tp * sx * sy, tp * sx * sy, -tp * cx * cy)
    });
    let lap_u: VectorField = {
        let u = u.clone();
        Arc::new(move |x| -2.0 * tp * tp * u(x))
    };
    let p: ScalarField = Arc::new(move |x| (tp * x.x).sin() * (tp * x.y).cos());
    let grad_p: VectorField = Arc::new(move |x| {
        let (sx, cx) = (tp * x.x).sin_cos();
        let (sy, cy) = (tp * x.y).sin_cos();
        Vec2::new(tp * cx * cy, -tp * sx * sy)
    });
    from_exact("example2", mu, 0.0, b, u, grad_u, lap_u, p, grad_p)
}

/// Exponentially stretched coordinate a(t) = (e^{rt} - 1)/(e^r - 1) with
/// θ = 2πa, and the profiles built from it.
#[derive(Debug, Clone, Copy)]
struct Stretch {
    r: f64,
    denom: f64,
}

impl Stretch {
    fn new(r: f64) -> Self {
        Self { r, denom: r.exp_m1() }
    }

    /// (θ, a', a'', a''').
    fn eval(&self, t: f64) -> (f64, f64, f64, f64) {
        let e = (self.r * t).exp();
        let a = (self.r * t).exp_m1() / self.denom;
        let a1 = self.r * e / self.denom;
        (2.0 * PI * a, a1, self.r * a1, self.r * self.r * a1)
    }

    /// 1 - cos θ.
    fn c(&self, t: f64) -> f64 {
        1.0 - self.eval(t).0.cos()
    }

    /// S = sin θ · a' and its first two derivatives.
    fn s(&self, t: f64) -> (f64, f64, f64) {
        let (th, a1, a2, a3) = self.eval(t);
        let (st, ct) = th.sin_cos();
        let th1 = 2.0 * PI * a1;
        let th2 = 2.0 * PI * a2;
        let s0 = st * a1;
        let s1 = ct * th1 * a1 + st * a2;
        let s2 = -st * th1 * th1 * a1 + ct * (th2 * a1 + 2.0 * th1 * a2) + st * a3;
        (s0, s1, s2)
    }
}

/// Vortex flow u = B from the stream function (1 - cos θ1)(1 - cos θ2)/(4π²),
/// γ = 1.
pub fn example3(mu: f64, r1: f64, r2: f64) -> Result<OseenProblem> {
    if !(r1 > 0.0 && r2 > 0.0) {
        return Err(VemError::Domain(format!("r1 and r2 must be positive, got {r1}, {r2}")));
    }
    let sx = Stretch::new(r1);
    let sy = Stretch::new(r2);
    let k = 1.0 / (2.0 * PI);
    let u: VectorField = Arc::new(move |x| {
        Vec2::new(k * sx.c(x.x) * sy.s(x.y).0, -k * sx.s(x.x).0 * sy.c(x.y))
    });
    let grad_u: TensorField = Arc::new(move |x| {
        let (px, px1, _) = sx.s(x.x);
        let (py, py1, _) = sy.s(x.y);
        let (cx, cy) = (sx.c(x.x), sy.c(x.y));
        Matrix2::new(px * py, k * cx * py1, -k * px1 * cy, -px * py)
    });
    let lap_u: VectorField = Arc::new(move |x| {
        let (px, px1, px2) = sx.s(x.x);
        let (py, py1, py2) = sy.s(x.y);
        let (cx, cy) = (sx.c(x.x), sy.c(x.y));
        Vec2::new(px1 * py + k * cx * py2, -k * px2 * cy - px * py1)
    });
    let p: ScalarField = Arc::new(move |x| sx.s(x.x).0 * sy.s(x.y).0);
    let grad_p: VectorField = Arc::new(move |x| {
        let (px, px1, _) = sx.s(x.x);
        let (py, py1, _) = sy.s(x.y);
        Vec2::new(px1 * py, px * py1)
    });
    let b = u.clone();
    let mut prob = from_exact("example3", mu, 1.0, b, u, grad_u, lap_u, p, grad_p);
    prob.length_scale = 1.0 / (1.0 + r1.max(r2));
    Ok(prob)
}

/// Centre of the Example 3 vortex.
pub fn vortex_center(r1: f64, r2: f64) -> Vec2 {
    let c = |r: f64| ((r.exp() + 1.0) / 2.0).ln() / r;
    Vec2::new(c(r1), c(r2))
}

/// (1 - e^{t/μ})/(1 - e^{1/μ}) and its derivative, without overflow.
pub fn layer(t: f64, mu: f64) -> (f64, f64) {
    let scale = ((t - 1.0) / mu).exp() / (-(-1.0 / mu).exp_m1());
    (scale * (-(-t / mu).exp_m1()), scale / mu)
}

/// Boundary layers at x = 1 and y = 1 with B = (1, 1), γ = 0.
pub fn example4(mu: f64) -> Result<OseenProblem> {
    if !(mu > 0.0) {
        return Err(VemError::Domain(format!("example4 needs mu > 0, got {mu}")));
    }
    let u: VectorField = Arc::new(move |x| Vec2::new(x.y - layer(x.y, mu).0, x.x - layer(x.x, mu).0));
    let grad_u: TensorField = Arc::new(move |x| {
        Matrix2::new(0.0, 1.0 - layer(x.y, mu).1, 1.0 - layer(x.x, mu).1, 0.0)
    });
    let b: VectorField = Arc::new(|_| Vec2::new(1.0, 1.0));
    let mut prob = OseenProblem {
        id: "example4".into(),
        mu,
        gamma: 0.0,
        convection: b,
        // -μΔu cancels the layer part of (∇u)B exactly
        load: Arc::new(|_| Vec2::new(2.0, 0.0)),
        dirichlet: u.clone(),
        exact: Some(ExactSolution {
            u,
            grad_u,
            p: Arc::new(|x| x.x - x.y),
        }),
        length_scale: mu.sqrt().min(1.0),
        residual_reference: None,
    };
    if mu < 1e-2 {
        prob.residual_reference = Some(Box::new(example4(1e-1)?));
    }
    Ok(prob)
}

/// Stokes patch test with μ = 1.
pub fn stokes_patch(k: usize) -> Result<OseenProblem> {
    stokes_patch_with(k, 1.0)
}

/// Divergence-free polynomial velocity of degree k and pressure of degree
/// k-1: u = (y, x), p = 0 for k = 1; u = (y², x²), p = x + y - 1 for k = 2.
pub fn stokes_patch_with(k: usize, mu: f64) -> Result<OseenProblem> {
    check_nonneg("mu", mu)?;
    let b: VectorField = Arc::new(|_| Vec2::zeros());
    match k {
        1 => Ok(from_exact(
            "stokes_patch",
            mu,
            0.0,
            b,
            Arc::new(|x| Vec2::new(x.y, x.x)),
            Arc::new(|_| Matrix2::new(0.0, 1.0, 1.0, 0.0)),
            Arc::new(|_| Vec2::zeros()),
            Arc::new(|_| 0.0),
            Arc::new(|_| Vec2::zeros()),
        )),
        2 => Ok(from_exact(
            "stokes_patch",
            mu,
            0.0,
            b,
            Arc::new(|x| Vec2::new(x.y * x.y, x.x * x.x)),
            Arc::new(|x| Matrix2::new(0.0, 2.0 * x.y, 2.0 * x.x, 0.0)),
            Arc::new(|_| Vec2::new(2.0, 2.0)),
            Arc::new(|x| x.x + x.y - 1.0),
            Arc::new(|_| Vec2::new(1.0, 1.0)),
        )),
        _ => Err(VemError::Domain(format!("stokes_patch is defined for k = 1, 2, got {k}"))),
    }
}
