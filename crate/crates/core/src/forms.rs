//! Element matrices of the discrete bilinear forms.
//!
//! Rows index test functions and columns trial functions. Vector-valued
//! local vectors are ordered `[component 1 | component 2]`, each block
//! following the scalar local DOF order of [`crate::vemspace`].

use nalgebra::{DMatrix, DVector};

use crate::polybasis::dim;
use crate::quadrature::polygon_rule;
use crate::vemspace::VemElement;
use crate::{Result, Vec2};

/// Interior quadrature degree for terms with non-polynomial data.
pub fn data_degree(k: usize) -> usize {
    2 * k + 4
}

/// Points per edge for boundary terms with non-polynomial data.
pub fn data_edge_points(k: usize) -> usize {
    k + 4
}

/// Copies a scalar matrix onto both velocity components.
pub fn block_diag2(s: &DMatrix<f64>) -> DMatrix<f64> {
    let (r, c) = s.shape();
    let mut m = DMatrix::zeros(2 * r, 2 * c);
    m.view_mut((0, 0), (r, c)).copy_from(s);
    m.view_mut((r, c), (r, c)).copy_from(s);
    m
}

/// `(I - P)ᵀ S (I - P)` for a DOF-space projector `P`.
pub fn fluctuation(p: &DMatrix<f64>, s: &DMatrix<f64>) -> DMatrix<f64> {
    let n = p.nrows();
    let f = DMatrix::identity(n, n) - p;
    f.transpose() * s * f
}

/// S∇ (identity), S0 (|E| identity) and S_p (identity).
pub fn stabilizer_matrices(el: &VemElement) -> (DMatrix<f64>, DMatrix<f64>, DMatrix<f64>) {
    let n = el.n_dofs();
    let id = DMatrix::identity(n, n);
    (id.clone(), &id * el.geom.area, id)
}

/// Scalar diffusion matrix without μ.
pub fn scalar_stiffness(el: &VemElement) -> DMatrix<f64> {
    let p = &el.proj;
    let h1 = el.tables.mass_block(el.k as isize - 1);
    let (s_nabla, _, _) = stabilizer_matrices(el);
    let mut a = p.grad_km1[0].transpose() * &h1 * &p.grad_km1[0]
        + p.grad_km1[1].transpose() * &h1 * &p.grad_km1[1];
    a += fluctuation(&p.dof_pi_nabla_k(), &s_nabla);
    a
}

pub fn local_a(el: &VemElement, mu: f64) -> DMatrix<f64> {
    block_diag2(&(scalar_stiffness(el) * mu))
}

/// Velocity-pressure coupling, 2N_E × N_E: entry ((c, i), j) is
/// ∫_E Π⁰_{k-1}(∇·φ_i e_c) Π⁰_k ψ_j.
pub fn local_b(el: &VemElement) -> DMatrix<f64> {
    let p = &el.proj;
    let n = el.n_dofs();
    let nk1 = dim(el.k as isize - 1);
    let nk = dim(el.k as isize);
    let h = el.tables.mass.view((0, 0), (nk1, nk));
    let q = h * &p.pi0_k;
    let mut b = DMatrix::zeros(2 * n, n);
    for c in 0..2 {
        b.view_mut((c * n, 0), (n, n)).copy_from(&(p.grad_km1[c].transpose() * &q));
    }
    b
}

/// Scalar convective matrix before antisymmetrization, including the
/// boundary correction ∫_∂E (B·n)(φ_c - Π⁰_k φ_c) Π⁰_k φ_r.
pub fn convective_scalar(el: &VemElement, field: impl Fn(Vec2) -> Vec2) -> Result<DMatrix<f64>> {
    let p = &el.proj;
    let n = el.n_dofs();
    let rule = polygon_rule(&el.geom, data_degree(el.k))?;
    let vals = el.basis.eval_points(&rule.points) * &p.pi0_k;
    let (gx, gy) = el.basis.grad_points(&rule.points);
    let gx = gx * &p.pi0_k;
    let gy = gy * &p.pi0_k;
    let mut test = vals.clone();
    let mut trial = DMatrix::zeros(rule.len(), n);
    for (q, (&x, &w)) in rule.points.iter().zip(&rule.weights).enumerate() {
        let b = field(x);
        test.row_mut(q).scale_mut(w);
        let row = gx.row(q) * b.x + gy.row(q) * b.y;
        trial.row_mut(q).copy_from(&row);
    }
    let mut c = test.transpose() * trial;

    for tr in VemElement::edge_traces_with(&el.geom, el.k, data_edge_points(el.k)) {
        let pi = el.basis.eval_points(&tr.rule.points) * &p.pi0_k;
        for (q, (&x, &w)) in tr.rule.points.iter().zip(&tr.rule.weights).enumerate() {
            let bn = field(x).dot(&tr.normal) * w;
            if bn == 0.0 {
                continue;
            }
            let mut jump: Vec<f64> = (0..n).map(|j| -pi[(q, j)]).collect();
            for (l, &j) in tr.dofs.iter().enumerate() {
                jump[j] += tr.values[(q, l)];
            }
            for r in 0..n {
                let s = bn * pi[(q, r)];
                if s != 0.0 {
                    for (col, jv) in jump.iter().enumerate() {
                        c[(r, col)] += s * jv;
                    }
                }
            }
        }
    }
    Ok(c)
}

fn antisymmetric_part(c: &DMatrix<f64>) -> DMatrix<f64> {
    (c - c.transpose()) * 0.5
}

/// ½[c(w, z) - c(z, w)] on both components.
pub fn local_c_skew(el: &VemElement, field: impl Fn(Vec2) -> Vec2) -> Result<DMatrix<f64>> {
    Ok(block_diag2(&antisymmetric_part(&convective_scalar(el, field)?)))
}

/// Antisymmetrized ∫_E (Π⁰_{k-1}∇w) B · Π⁰_k z.
pub fn local_c_hat(el: &VemElement, field: impl Fn(Vec2) -> Vec2) -> Result<DMatrix<f64>> {
    let p = &el.proj;
    let n = el.n_dofs();
    let rule = polygon_rule(&el.geom, data_degree(el.k))?;
    let vals = el.basis.eval_points(&rule.points) * &p.pi0_k;
    let low = crate::polybasis::MonomialBasis::new(el.k - 1, el.basis.center, el.basis.h);
    let lv = low.eval_points(&rule.points);
    let gx = &lv * &p.grad_km1[0];
    let gy = &lv * &p.grad_km1[1];
    let mut test = vals;
    let mut trial = DMatrix::zeros(rule.len(), n);
    for (q, (&x, &w)) in rule.points.iter().zip(&rule.weights).enumerate() {
        let b = field(x);
        test.row_mut(q).scale_mut(w);
        trial.row_mut(q).copy_from(&(gx.row(q) * b.x + gy.row(q) * b.y));
    }
    let c = test.transpose() * trial;
    Ok(block_diag2(&antisymmetric_part(&c)))
}

/// Scalar mass matrix without γ.
pub fn scalar_mass(el: &VemElement) -> DMatrix<f64> {
    let p = &el.proj;
    let (_, s0, _) = stabilizer_matrices(el);
    let mut m = p.pi0_k.transpose() * &el.tables.mass * &p.pi0_k;
    m += fluctuation(&p.dof_pi0_k(), &s0);
    m
}

pub fn local_d(el: &VemElement, gamma: f64) -> DMatrix<f64> {
    block_diag2(&(scalar_mass(el) * gamma))
}

/// F_E[(c, j)] = ∫_E f_c Π⁰_k φ_j.
pub fn local_load(el: &VemElement, f: impl Fn(Vec2) -> Vec2) -> Result<DVector<f64>> {
    let n = el.n_dofs();
    let rule = polygon_rule(&el.geom, data_degree(el.k))?;
    let vals = el.basis.eval_points(&rule.points) * &el.proj.pi0_k;
    let mut out = DVector::zeros(2 * n);
    for (q, (&x, &w)) in rule.points.iter().zip(&rule.weights).enumerate() {
        let fv = f(x);
        for j in 0..n {
            out[j] += w * fv.x * vals[(q, j)];
            out[n + j] += w * fv.y * vals[(q, j)];
        }
    }
    Ok(out)
}
