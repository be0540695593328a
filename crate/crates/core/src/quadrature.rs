//! Gauss rules on [-1, 1], mapped edge rules and polygon rules built from
//! triangulations.

use crate::mesh::{signed_area, ElementGeometry, EdgeGeometry};
use crate::polybasis::MonomialBasis;
use crate::{Result, Vec2, VemError};

/// A rule on the reference interval [-1, 1] with ascending nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule1D {
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule1D {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.points.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// Legendre polynomial P_n and its derivative at `x`.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Gauss-Legendre rule with `n` points, exact for degree 2n-1.
pub fn gauss_legendre(n: usize) -> QuadratureRule1D {
    assert!(n >= 1, "Gauss-Legendre needs at least one point");
    let mut points = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        points[i] = -x;
        points[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        points[n / 2] = 0.0;
    }
    QuadratureRule1D { points, weights }
}

/// Gauss-Lobatto rule with `n >= 2` points including both endpoints, exact
/// for degree 2n-3.
pub fn gauss_lobatto(n: usize) -> QuadratureRule1D {
    assert!(n >= 2, "Gauss-Lobatto needs at least two points");
    let deg = n - 1;
    let mut points = vec![0.0; n];
    let mut weights = vec![0.0; n];
    points[0] = -1.0;
    points[n - 1] = 1.0;
    let w_end = 2.0 / (n as f64 * deg as f64);
    weights[0] = w_end;
    weights[n - 1] = w_end;
    // interior nodes are the roots of P'_{n-1}
    for i in 1..n.div_ceil(2) {
        let mut x = -(std::f64::consts::PI * i as f64 / deg as f64).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(deg, x);
            // P'' from the Legendre ODE
            let d2p = (2.0 * x * dp - (deg * (deg + 1)) as f64 * p) / (1.0 - x * x);
            let dx = dp / d2p;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (p, _) = legendre(deg, x);
        let w = 2.0 / ((n * deg) as f64 * p * p);
        points[i] = x;
        points[n - 1 - i] = -x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        let (p, _) = legendre(deg, 0.0);
        points[n / 2] = 0.0;
        weights[n / 2] = 2.0 / ((n * deg) as f64 * p * p);
    }
    QuadratureRule1D { points, weights }
}

/// Physical points and weights of a 1D rule mapped onto an edge.
#[derive(Debug, Clone)]
pub struct EdgeRule {
    /// Reference abscissae in [-1, 1], start of the edge at -1.
    pub reference: Vec<f64>,
    pub points: Vec<Vec2>,
    pub weights: Vec<f64>,
}

pub fn edge_rule(edge: &EdgeGeometry, rule: &QuadratureRule1D) -> EdgeRule {
    let half = 0.5 * edge.length;
    EdgeRule {
        reference: rule.points.clone(),
        points: rule.points.iter().map(|&t| edge.point_at(t)).collect(),
        weights: rule.weights.iter().map(|&w| w * half).collect(),
    }
}

/// Quadrature points and weights on a polygon.
#[derive(Debug, Clone)]
pub struct PolygonRule {
    pub points: Vec<Vec2>,
    pub weights: Vec<f64>,
    pub degree: usize,
}

impl PolygonRule {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(Vec2) -> f64) -> f64 {
        self.points.iter().zip(&self.weights).map(|(&p, &w)| w * f(p)).sum()
    }

    /// Copy with every weight multiplied by `factor`. Fault injection for
    /// the verification suite.
    pub fn with_scaled_weights(&self, factor: f64) -> Self {
        Self {
            points: self.points.clone(),
            weights: self.weights.iter().map(|w| w * factor).collect(),
            degree: self.degree,
        }
    }
}

/// Collapsed Gauss rule on a triangle, exact for polynomials of degree `degree`.
pub fn triangle_rule(a: Vec2, b: Vec2, c: Vec2, degree: usize) -> (Vec<Vec2>, Vec<f64>) {
    // the Duffy Jacobian adds one degree in the collapsed direction
    let n = (degree + 2).div_ceil(2);
    let g = gauss_legendre(n);
    let area = 0.5 * ((b - a).x * (c - a).y - (b - a).y * (c - a).x);
    let mut points = Vec::with_capacity(n * n);
    let mut weights = Vec::with_capacity(n * n);
    for (&s, &ws) in g.points.iter().zip(&g.weights) {
        let u = 0.5 * (s + 1.0);
        for (&t, &wt) in g.points.iter().zip(&g.weights) {
            let v = 0.5 * (t + 1.0) * (1.0 - u);
            points.push(a + (b - a) * u + (c - a) * v);
            // reference triangle area is 1/2, the two maps contribute 1/4
            weights.push(0.25 * ws * wt * (1.0 - u) * 2.0 * area);
        }
    }
    (points, weights)
}

/// Triangulates a simple counter-clockwise polygon by ear clipping.
pub fn ear_clip(vertices: &[Vec2]) -> Result<Vec<[usize; 3]>> {
    let n = vertices.len();
    if n < 3 || !crate::mesh::is_simple_polygon(vertices) {
        return Err(VemError::TriangulationFailure(
            "polygon is not simple".into(),
        ));
    }
    let scale = signed_area(vertices).abs();
    let mut idx: Vec<usize> = (0..n).collect();
    let mut tris = Vec::with_capacity(n - 2);
    while idx.len() > 3 {
        let m = idx.len();
        let mut clipped = false;
        for i in 0..m {
            let (ia, ib, ic) = (idx[(i + m - 1) % m], idx[i], idx[(i + 1) % m]);
            let (a, b, c) = (vertices[ia], vertices[ib], vertices[ic]);
            let turn = (b - a).x * (c - b).y - (b - a).y * (c - b).x;
            if turn <= 1e-14 * scale {
                continue;
            }
            let tri = [a, b, c];
            let blocked = idx.iter().any(|&j| {
                j != ia && j != ib && j != ic && point_in_closed_triangle(&tri, vertices[j])
            });
            if blocked {
                continue;
            }
            tris.push([ia, ib, ic]);
            idx.remove(i);
            clipped = true;
            break;
        }
        if !clipped {
            return Err(VemError::TriangulationFailure(
                "no ear found".into(),
            ));
        }
    }
    tris.push([idx[0], idx[1], idx[2]]);
    Ok(tris)
}

fn point_in_closed_triangle(t: &[Vec2; 3], p: Vec2) -> bool {
    let s = |a: Vec2, b: Vec2| (b - a).x * (p - a).y - (b - a).y * (p - a).x;
    let d1 = s(t[0], t[1]);
    let d2 = s(t[1], t[2]);
    let d3 = s(t[2], t[0]);
    d1 >= 0.0 && d2 >= 0.0 && d3 >= 0.0
}

/// Rule on `geom` exact for polynomials of total degree `degree`.
///
/// Triangles are fanned from the centroid; if any fan triangle is not
/// positively oriented the polygon is ear-clipped instead.
pub fn polygon_rule(geom: &ElementGeometry, degree: usize) -> Result<PolygonRule> {
    let v = &geom.vertices;
    let n = v.len();
    let tol = 1e-12 * geom.area.abs();
    let fan_ok = (0..n).all(|i| signed_area(&[geom.centroid, v[i], v[(i + 1) % n]]) > tol);
    let mut points = Vec::new();
    let mut weights = Vec::new();
    if fan_ok {
        for i in 0..n {
            let (p, w) = triangle_rule(geom.centroid, v[i], v[(i + 1) % n], degree);
            points.extend(p);
            weights.extend(w);
        }
    } else {
        for [a, b, c] in ear_clip(v)? {
            let (p, w) = triangle_rule(v[a], v[b], v[c], degree);
            points.extend(p);
            weights.extend(w);
        }
    }
    Ok(PolygonRule {
        points,
        weights,
        degree,
    })
}

/// ∫_E m_α for every scaled monomial with |α| ≤ 2k, in graded-lex order.
pub fn integrate_monomials(geom: &ElementGeometry, k: usize) -> Result<Vec<f64>> {
    let basis = MonomialBasis::new(2 * k, geom.centroid, geom.diameter);
    let rule = polygon_rule(geom, 2 * k)?;
    let mut out = vec![0.0; basis.len()];
    for (&p, &w) in rule.points.iter().zip(&rule.weights) {
        for (o, m) in out.iter_mut().zip(basis.eval(p)) {
            *o += w * m;
        }
    }
    Ok(out)
}
