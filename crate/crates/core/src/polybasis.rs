//! Scaled monomials m_β(x) = ((x - x_E)/h_E)^β in graded-lexicographic order.
//!
//! Index `d(d+1)/2 + b` holds β = (d - b, b), so for degree 2 the order is
//! 1, x, y, x², xy, y².

use nalgebra::DMatrix;

use crate::mesh::ElementGeometry;
use crate::quadrature::polygon_rule;
use crate::{Result, Vec2};

/// Dimension of the polynomials of degree ≤ k; zero for negative k.
pub fn dim(k: isize) -> usize {
    if k < 0 {
        0
    } else {
        let k = k as usize;
        (k + 1) * (k + 2) / 2
    }
}

pub fn index(a: usize, b: usize) -> usize {
    let d = a + b;
    d * (d + 1) / 2 + b
}

pub fn multi_index(i: usize) -> (usize, usize) {
    let mut d = 0;
    while (d + 1) * (d + 2) / 2 <= i {
        d += 1;
    }
    let b = i - d * (d + 1) / 2;
    (d - b, b)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonomialBasis {
    pub degree: usize,
    pub center: Vec2,
    pub h: f64,
}

impl MonomialBasis {
    pub fn new(degree: usize, center: Vec2, h: f64) -> Self {
        Self { degree, center, h }
    }

    pub fn for_element(degree: usize, geom: &ElementGeometry) -> Self {
        Self::new(degree, geom.centroid, geom.diameter)
    }

    pub fn len(&self) -> usize {
        dim(self.degree as isize)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn powers(&self, p: Vec2) -> (Vec<f64>, Vec<f64>) {
        let s = (p - self.center) / self.h;
        let mut px = vec![1.0; self.degree + 1];
        let mut py = vec![1.0; self.degree + 1];
        for i in 1..=self.degree {
            px[i] = px[i - 1] * s.x;
            py[i] = py[i - 1] * s.y;
        }
        (px, py)
    }

    pub fn eval(&self, p: Vec2) -> Vec<f64> {
        let (px, py) = self.powers(p);
        let mut out = Vec::with_capacity(self.len());
        for d in 0..=self.degree {
            for b in 0..=d {
                out.push(px[d - b] * py[b]);
            }
        }
        out
    }

    /// Gradients of every monomial at `p`.
    pub fn grad(&self, p: Vec2) -> (Vec<f64>, Vec<f64>) {
        let (px, py) = self.powers(p);
        let n = self.len();
        let mut gx = Vec::with_capacity(n);
        let mut gy = Vec::with_capacity(n);
        for d in 0..=self.degree {
            for b in 0..=d {
                let a = d - b;
                gx.push(if a > 0 { a as f64 * px[a - 1] * py[b] / self.h } else { 0.0 });
                gy.push(if b > 0 { b as f64 * px[a] * py[b - 1] / self.h } else { 0.0 });
            }
        }
        (gx, gy)
    }

    /// Row per point, column per monomial.
    pub fn eval_points(&self, points: &[Vec2]) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(points.len(), self.len());
        for (i, &p) in points.iter().enumerate() {
            for (j, v) in self.eval(p).into_iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn grad_points(&self, points: &[Vec2]) -> (DMatrix<f64>, DMatrix<f64>) {
        let mut mx = DMatrix::zeros(points.len(), self.len());
        let mut my = DMatrix::zeros(points.len(), self.len());
        for (i, &p) in points.iter().enumerate() {
            let (gx, gy) = self.grad(p);
            for j in 0..self.len() {
                mx[(i, j)] = gx[j];
                my[(i, j)] = gy[j];
            }
        }
        (mx, my)
    }
}

/// Derivative maps and Gram matrices of a degree-k basis on one element.
#[derive(Debug, Clone)]
pub struct CalculusTables {
    pub degree: usize,
    /// Column β holds the coefficients of ∂m_β/∂x in the degree k-1 basis
    /// (n_{k-1} × n_k), including the 1/h_E factor.
    pub grad_x: DMatrix<f64>,
    pub grad_y: DMatrix<f64>,
    /// Laplacian into the degree k-2 basis (n_{k-2} × n_k).
    pub laplacian: DMatrix<f64>,
    /// H_{αβ} = ∫_E m_α m_β.
    pub mass: DMatrix<f64>,
    /// G̃_{αβ} = ∫_E ∇m_α · ∇m_β.
    pub stiffness: DMatrix<f64>,
}

impl CalculusTables {
    pub fn build(basis: &MonomialBasis, geom: &ElementGeometry) -> Result<Self> {
        let k = basis.degree;
        let n = basis.len();
        let n1 = dim(k as isize - 1);
        let n2 = dim(k as isize - 2);
        let h = basis.h;

        let mut grad_x = DMatrix::zeros(n1, n);
        let mut grad_y = DMatrix::zeros(n1, n);
        let mut laplacian = DMatrix::zeros(n2, n);
        for j in 0..n {
            let (a, b) = multi_index(j);
            if a > 0 {
                grad_x[(index(a - 1, b), j)] = a as f64 / h;
            }
            if b > 0 {
                grad_y[(index(a, b - 1), j)] = b as f64 / h;
            }
            if a > 1 {
                laplacian[(index(a - 2, b), j)] += (a * (a - 1)) as f64 / (h * h);
            }
            if b > 1 {
                laplacian[(index(a, b - 2), j)] += (b * (b - 1)) as f64 / (h * h);
            }
        }

        let rule = polygon_rule(geom, 2 * k)?;
        let v = basis.eval_points(&rule.points);
        let mut vw = v.clone();
        for (i, &w) in rule.weights.iter().enumerate() {
            vw.row_mut(i).scale_mut(w);
        }
        let mut mass = v.transpose() * vw;
        symmetrize(&mut mass);

        let h1 = mass.view((0, 0), (n1, n1));
        let mut stiffness = grad_x.transpose() * h1 * &grad_x + grad_y.transpose() * h1 * &grad_y;
        symmetrize(&mut stiffness);

        Ok(Self {
            degree: k,
            grad_x,
            grad_y,
            laplacian,
            mass,
            stiffness,
        })
    }

    /// Leading block of the mass matrix for degree ≤ d.
    pub fn mass_block(&self, d: isize) -> DMatrix<f64> {
        let n = dim(d);
        self.mass.view((0, 0), (n, n)).into_owned()
    }
}

pub(crate) fn symmetrize(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            let s = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = s;
            m[(j, i)] = s;
        }
    }
}
