//! Local projection stabilization: velocity-gradient fluctuations (L1),
//! divergence (L2) and pressure-gradient fluctuations (L3).

use nalgebra::DMatrix;

use crate::forms::{block_diag2, data_degree, data_edge_points, fluctuation, stabilizer_matrices};
use crate::quadrature::polygon_rule;
use crate::vemspace::VemElement;
use crate::{Result, Vec2};

/// User constants of τ1 = c1 h_E, τ2 = c2, τ3 = c3 h_E².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilizationParams {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

impl Default for StabilizationParams {
    fn default() -> Self {
        Self {
            c1: 1.0,
            c2: 1.0,
            c3: 1.0,
        }
    }
}

impl StabilizationParams {
    pub fn tau1(&self, h: f64) -> f64 {
        self.c1 * h
    }

    pub fn tau2(&self, _h: f64) -> f64 {
        self.c2
    }

    pub fn tau3(&self, h: f64) -> f64 {
        self.c3 * h * h
    }

    /// All constants switched off.
    pub fn none() -> Self {
        Self {
            c1: 0.0,
            c2: 0.0,
            c3: 0.0,
        }
    }
}

/// max |B| over interior and edge quadrature points and the vertices.
pub fn sampled_sup_norm(el: &VemElement, field: impl Fn(Vec2) -> Vec2) -> Result<f64> {
    let rule = polygon_rule(&el.geom, data_degree(el.k))?;
    let mut m: f64 = 0.0;
    for &x in &rule.points {
        m = m.max(field(x).norm());
    }
    for tr in VemElement::edge_traces_with(&el.geom, el.k, data_edge_points(el.k)) {
        for &x in &tr.rule.points {
            m = m.max(field(x).norm());
        }
    }
    for &x in &el.geom.vertices {
        m = m.max(field(x).norm());
    }
    Ok(m)
}

pub fn local_l1(
    el: &VemElement,
    field: impl Fn(Vec2) -> Vec2,
    params: &StabilizationParams,
) -> Result<DMatrix<f64>> {
    let b = sampled_sup_norm(el, field)?;
    let scale = params.tau1(el.geom.diameter) * b * b;
    let (s_nabla, _, _) = stabilizer_matrices(el);
    Ok(block_diag2(&(fluctuation(&el.proj.dof_pi_nabla_km1(), &s_nabla) * scale)))
}

pub fn local_l2(el: &VemElement, params: &StabilizationParams) -> DMatrix<f64> {
    let p = &el.proj;
    let n = el.n_dofs();
    let h1 = el.tables.mass_block(el.k as isize - 1);
    let mut div = DMatrix::zeros(p.grad_km1[0].nrows(), 2 * n);
    div.columns_mut(0, n).copy_from(&p.grad_km1[0]);
    div.columns_mut(n, n).copy_from(&p.grad_km1[1]);
    let (s_nabla, _, _) = stabilizer_matrices(el);
    let mut l = div.transpose() * h1 * div;
    l += block_diag2(&fluctuation(&p.dof_pi_nabla_k(), &s_nabla));
    l * params.tau2(el.geom.diameter)
}

pub fn local_l3(el: &VemElement, params: &StabilizationParams) -> DMatrix<f64> {
    let p = &el.proj;
    let n = el.n_dofs();
    let nk1 = p.grad_km1[0].nrows();
    let (_, _, s_p) = stabilizer_matrices(el);
    let mut l = DMatrix::zeros(n, n);
    for d in 0..2 {
        let mut r = p.grad_k[d].clone();
        let low = r.rows(0, nk1) - &p.grad_km1[d];
        r.rows_mut(0, nk1).copy_from(&low);
        l += r.transpose() * &el.tables.mass * r;
    }
    l += fluctuation(&p.dof_pi_nabla_km1(), &s_p);
    l * params.tau3(el.geom.diameter)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::ElementGeometry;
    use approx::assert_relative_eq;
    use nalgebra::DVector;

    fn element(v: Vec<Vec2>, k: usize) -> VemElement {
        VemElement::from_geometry(0, ElementGeometry::from_vertices(v), k, None).unwrap()
    }

    fn unit_square(k: usize) -> VemElement {
        element(
            vec![
                Vec2::new(0.0, 0.0),
                Vec2::new(1.0, 0.0),
                Vec2::new(1.0, 1.0),
                Vec2::new(0.0, 1.0),
            ],
            k,
        )
    }

    fn stack(a: &DVector<f64>, b: &DVector<f64>) -> DVector<f64> {
        let n = a.len();
        DVector::from_fn(2 * n, |i, _| if i < n { a[i] } else { b[i - n] })
    }

    #[test]
    fn l1_nonzero_for_linear_on_triangle() {
        let el = element(
            vec![Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)],
            1,
        );
        let l1 = local_l1(&el, |_| Vec2::new(1.0, 1.0), &StabilizationParams::default()).unwrap();
        let m = el.interpolate(|x| el.basis.eval(x)[1]).unwrap();
        let v = stack(&m, &DVector::zeros(3));
        assert!((v.transpose() * &l1 * &v)[0] > 1e-3);
        let zero = local_l1(&el, |_| Vec2::zeros(), &StabilizationParams::default()).unwrap();
        assert_eq!(zero.amax(), 0.0);
    }

    #[test]
    fn l2_divergence_of_xy() {
        let el = unit_square(1);
        let x = el.interpolate(|p| p.x).unwrap();
        let y = el.interpolate(|p| p.y).unwrap();
        let v = stack(&x, &y);
        let l2 = local_l2(&el, &StabilizationParams::default());
        assert_relative_eq!((v.transpose() * &l2 * &v)[0], 4.0 * el.geom.area, epsilon = 1e-12);
        let w = stack(&x, &(-y));
        assert!((w.transpose() * &l2 * &w)[0].abs() < 1e-13);
    }

    #[test]
    fn l3_linear_pressure_on_square() {
        let el = unit_square(1);
        let p = el.interpolate(|x| el.basis.eval(x)[1]).unwrap();
        let l3 = local_l3(&el, &StabilizationParams::default());
        assert!((p.transpose() * &l3 * &p)[0] > 1e-3);
        let one = el.interpolate(|_| 1.0).unwrap();
        assert!((&l3 * one).amax() < 1e-13);
    }
}
