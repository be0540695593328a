//! Local enhanced virtual element spaces: degrees of freedom, interpolation
//! and the computable polynomial projectors.
//!
//! Local DOF order on a cell with n_v vertices:
//!
//! * `0..n_v` vertex values in the cell's counter-clockwise order;
//! * `n_v + i(k-1) + j` the j-th interior Gauss-Lobatto node on local edge
//!   i, counted from the edge's start vertex;
//! * `n_v k + α` the scaled moment (1/|E|)∫_E v m_α, |α| ≤ k-2.
//!
//! Global scalar numbering lists all vertices, then the interior edge nodes
//! of every edge (ordered from its lower to its higher vertex index), then
//! the moments of every cell.

use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::mesh::{ElementGeometry, PolyMesh};
use crate::polybasis::{dim, CalculusTables, MonomialBasis};
use crate::quadrature::{edge_rule, gauss_legendre, gauss_lobatto, polygon_rule, EdgeRule};
use crate::{Result, Vec2, VemError};

/// Largest tolerated condition estimate of the per-element G and H matrices.
pub const MAX_CONDITION: f64 = 1e12;

/// Number of local DOFs of a cell with `n_v` vertices.
pub fn local_dof_count(n_v: usize, k: usize) -> usize {
    n_v * k + dim(k as isize - 2)
}

#[derive(Debug, Clone)]
pub struct DofLayout {
    pub k: usize,
    pub n_vertex_dofs: usize,
    pub n_edge_dofs: usize,
    pub n_moment_dofs: usize,
    /// Local to global map per cell.
    pub cell_dofs: Vec<Vec<usize>>,
    /// True for vertex and edge-node DOFs on the domain boundary.
    pub boundary: Vec<bool>,
    /// Location of point-value DOFs; `None` for moments.
    pub position: Vec<Option<Vec2>>,
}

impl DofLayout {
    pub fn n_scalar(&self) -> usize {
        self.n_vertex_dofs + self.n_edge_dofs + self.n_moment_dofs
    }
}

/// Interior Gauss-Lobatto abscissae on [-1, 1] used for edge DOFs.
fn interior_lobatto(k: usize) -> Vec<f64> {
    let r = gauss_lobatto(k + 1);
    r.points[1..k].to_vec()
}

pub fn build_dof_layout(mesh: &PolyMesh, k: usize) -> DofLayout {
    assert!(k >= 1, "polynomial degree must be at least 1");
    let nv = mesh.n_vertices();
    let ne = mesh.n_edges();
    let per_edge = k - 1;
    let per_cell = dim(k as isize - 2);
    let n_edge_dofs = ne * per_edge;
    let n_moment_dofs = mesh.n_cells() * per_cell;
    let nodes = interior_lobatto(k);

    let mut position: Vec<Option<Vec2>> = mesh.vertices().iter().map(|&p| Some(p)).collect();
    let mut boundary: Vec<bool> = mesh.boundary_vertex_flags().to_vec();
    for (e, edge) in mesh.edges().iter().enumerate() {
        let a = mesh.vertex(edge.vertices[0]);
        let b = mesh.vertex(edge.vertices[1]);
        for &t in &nodes {
            position.push(Some(a + (b - a) * (0.5 * (t + 1.0))));
            boundary.push(mesh.is_boundary_edge(e));
        }
    }
    position.extend(std::iter::repeat_n(None, n_moment_dofs));
    boundary.extend(std::iter::repeat_n(false, n_moment_dofs));

    let cell_dofs = (0..mesh.n_cells())
        .map(|c| {
            let cell = mesh.cell(c);
            let mut d = cell.to_vec();
            for ce in mesh.cell_edges(c) {
                for j in 0..per_edge {
                    let g = if ce.aligned { j } else { per_edge - 1 - j };
                    d.push(nv + ce.edge * per_edge + g);
                }
            }
            for a in 0..per_cell {
                d.push(nv + n_edge_dofs + c * per_cell + a);
            }
            d
        })
        .collect();

    DofLayout {
        k,
        n_vertex_dofs: nv,
        n_edge_dofs,
        n_moment_dofs,
        cell_dofs,
        boundary,
        position,
    }
}

/// Per-element projection matrices mapping local DOFs to monomial
/// coefficients (columns are DOFs).
#[derive(Debug, Clone)]
pub struct ProjectorSet {
    /// D_{iβ} = dof_i(m_β), N_E × n_k.
    pub dof_matrix: DMatrix<f64>,
    /// Right-hand side of the Π∇_k system, n_k × N_E.
    pub b_matrix: DMatrix<f64>,
    /// Left-hand side of the Π∇_k system, n_k × n_k.
    pub g_matrix: DMatrix<f64>,
    pub pi_nabla_k: DMatrix<f64>,
    pub pi_nabla_km1: DMatrix<f64>,
    pub pi0_k: DMatrix<f64>,
    /// C_{αj} = ∫_E φ_j m_α for |α| ≤ k, n_k × N_E.
    pub moments: DMatrix<f64>,
    /// Π⁰_{k-1} ∂_x and Π⁰_{k-1} ∂_y, each n_{k-1} × N_E.
    pub grad_km1: [DMatrix<f64>; 2],
    /// Π⁰_k ∂_x and Π⁰_k ∂_y, each n_k × N_E.
    pub grad_k: [DMatrix<f64>; 2],
    /// max(cond G, cond H).
    pub condition: f64,
    /// Relative mismatch between G and B·D.
    pub consistency_residual: f64,
}

impl ProjectorSet {
    /// Π̂∇_k = D Π∇_k in DOF space.
    pub fn dof_pi_nabla_k(&self) -> DMatrix<f64> {
        &self.dof_matrix * &self.pi_nabla_k
    }

    pub fn dof_pi_nabla_km1(&self) -> DMatrix<f64> {
        let n = self.pi_nabla_km1.nrows();
        self.dof_matrix.columns(0, n) * &self.pi_nabla_km1
    }

    pub fn dof_pi0_k(&self) -> DMatrix<f64> {
        &self.dof_matrix * &self.pi0_k
    }
}

/// Traces of the local basis on one edge sampled at quadrature points.
#[derive(Debug, Clone)]
pub struct EdgeTrace {
    pub rule: EdgeRule,
    pub normal: Vec2,
    /// Local DOFs living on the edge, from start to end vertex (k+1 entries).
    pub dofs: Vec<usize>,
    /// values[(q, l)] = trace of φ_{dofs[l]} at point q.
    pub values: DMatrix<f64>,
}

fn lagrange_values(nodes: &[f64], t: f64) -> Vec<f64> {
    (0..nodes.len())
        .map(|i| {
            nodes
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &tj)| (t - tj) / (nodes[i] - tj))
                .product()
        })
        .collect()
}

/// One element of the discretization with its projectors.
#[derive(Debug, Clone)]
pub struct VemElement {
    pub cell: usize,
    pub k: usize,
    pub geom: ElementGeometry,
    pub basis: MonomialBasis,
    pub tables: CalculusTables,
    /// Global scalar DOF of each local DOF.
    pub dofs: Vec<usize>,
    /// Positions of the vertex and edge-node DOFs.
    pub nodes: Vec<Vec2>,
    pub proj: ProjectorSet,
}

fn condition_number(m: &DMatrix<f64>) -> f64 {
    let s = m.singular_values();
    let max = s.max();
    let min = s.min();
    if min <= 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

fn rel_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).amax() / a.amax().max(f64::MIN_POSITIVE)
}

impl VemElement {
    /// Builds the element for a polygon given by its vertices. `dofs` is the
    /// local-to-global map; pass `None` for a standalone element.
    pub fn from_geometry(
        cell: usize,
        geom: ElementGeometry,
        k: usize,
        dofs: Option<Vec<usize>>,
    ) -> Result<Self> {
        assert!(k >= 1, "polynomial degree must be at least 1");
        let n_v = geom.n_vertices();
        let n_loc = local_dof_count(n_v, k);
        let nk = dim(k as isize);
        let nk1 = dim(k as isize - 1);
        let nk2 = dim(k as isize - 2);
        let area = geom.area;
        let basis = MonomialBasis::for_element(k, &geom);
        let tables = CalculusTables::build(&basis, &geom)?;

        let inner = interior_lobatto(k);
        let mut nodes: Vec<Vec2> = geom.vertices.clone();
        for e in &geom.edges {
            for &t in &inner {
                nodes.push(e.point_at(t));
            }
        }

        let mut d = DMatrix::zeros(n_loc, nk);
        for (i, &p) in nodes.iter().enumerate() {
            for (b, v) in basis.eval(p).into_iter().enumerate() {
                d[(i, b)] = v;
            }
        }
        for a in 0..nk2 {
            for b in 0..nk {
                d[(n_v * k + a, b)] = tables.mass[(a, b)] / area;
            }
        }

        let traces = Self::edge_traces(&geom, k);
        let perimeter = geom.perimeter();
        let moment = |a: usize| n_v * k + a;

        // right-hand side of the H1 projection onto degree ≤ deg
        let h1_rhs = |deg: usize| -> DMatrix<f64> {
            let nd = dim(deg as isize);
            let mut b = DMatrix::zeros(nd, n_loc);
            for tr in &traces {
                for (q, (&x, &w)) in tr.rule.points.iter().zip(&tr.rule.weights).enumerate() {
                    let (gx, gy) = basis.grad(x);
                    for (l, &j) in tr.dofs.iter().enumerate() {
                        let phi = tr.values[(q, l)];
                        b[(0, j)] += w * phi / perimeter;
                        for beta in 1..nd {
                            b[(beta, j)] += w * (gx[beta] * tr.normal.x + gy[beta] * tr.normal.y) * phi;
                        }
                    }
                }
            }
            for beta in 1..nd {
                for a in 0..nk2 {
                    b[(beta, moment(a))] -= area * tables.laplacian[(a, beta)];
                }
            }
            b
        };

        // boundary averages of the monomials
        let mut avg = vec![0.0; nk];
        for tr in &traces {
            for (&x, &w) in tr.rule.points.iter().zip(&tr.rule.weights) {
                for (a, m) in avg.iter_mut().zip(basis.eval(x)) {
                    *a += w * m / perimeter;
                }
            }
        }
        let h1_lhs = |deg: usize| -> DMatrix<f64> {
            let nd = dim(deg as isize);
            let mut g = tables.stiffness.view((0, 0), (nd, nd)).into_owned();
            for b in 0..nd {
                g[(0, b)] = avg[b];
            }
            g
        };

        let singular = |cond: f64| VemError::SingularProjector { cell, cond };

        let b_k = h1_rhs(k);
        let g_k = h1_lhs(k);
        let mut condition = condition_number(&g_k);
        let mut consistency_residual = rel_diff(&g_k, &(&b_k * &d));
        if condition > MAX_CONDITION {
            return Err(singular(condition));
        }
        let pi_nabla_k = g_k.clone().lu().solve(&b_k).ok_or_else(|| singular(condition))?;

        let b_k1 = h1_rhs(k - 1);
        let g_k1 = h1_lhs(k - 1);
        consistency_residual =
            consistency_residual.max(rel_diff(&g_k1, &(&b_k1 * d.columns(0, nk1))));
        let pi_nabla_km1 = g_k1.lu().solve(&b_k1).ok_or_else(|| singular(condition))?;

        let mass = &tables.mass;
        condition = condition.max(condition_number(mass));
        if condition > MAX_CONDITION {
            return Err(singular(condition));
        }
        let mut c = mass * &pi_nabla_k;
        for a in 0..nk2 {
            c.row_mut(a).fill(0.0);
            c[(a, moment(a))] = area;
        }
        let mass_chol = mass.clone().cholesky().ok_or_else(|| singular(condition))?;
        let pi0_k = mass_chol.solve(&c);

        // Π⁰_deg ∂_dir via integration by parts
        let grad_proj = |deg: usize| -> Result<[DMatrix<f64>; 2]> {
            let nd = dim(deg as isize);
            let hd = tables.mass_block(deg as isize);
            let chol = hd.cholesky().ok_or_else(|| singular(condition))?;
            let mut out = [DMatrix::zeros(nd, n_loc), DMatrix::zeros(nd, n_loc)];
            for (dir, gm) in [&tables.grad_x, &tables.grad_y].into_iter().enumerate() {
                let e = &mut out[dir];
                for a in 0..nd {
                    for g in 0..nk1 {
                        let coef = gm[(g, a)];
                        if coef != 0.0 {
                            for j in 0..n_loc {
                                e[(a, j)] -= coef * c[(g, j)];
                            }
                        }
                    }
                }
                for tr in &traces {
                    let nc = if dir == 0 { tr.normal.x } else { tr.normal.y };
                    for (q, (&x, &w)) in tr.rule.points.iter().zip(&tr.rule.weights).enumerate() {
                        let m = basis.eval(x);
                        for (l, &j) in tr.dofs.iter().enumerate() {
                            let phi = tr.values[(q, l)];
                            for a in 0..nd {
                                e[(a, j)] += w * m[a] * nc * phi;
                            }
                        }
                    }
                }
                *e = chol.solve(e);
            }
            Ok(out)
        };
        let grad_km1 = grad_proj(k - 1)?;
        let grad_k = grad_proj(k)?;

        let dofs = dofs.unwrap_or_else(|| (0..n_loc).collect());
        if dofs.len() != n_loc {
            return Err(VemError::DimensionMismatch(format!(
                "cell {cell}: {} global DOFs for {n_loc} local DOFs",
                dofs.len()
            )));
        }

        Ok(Self {
            cell,
            k,
            geom,
            basis,
            tables,
            dofs,
            nodes,
            proj: ProjectorSet {
                dof_matrix: d,
                b_matrix: b_k,
                g_matrix: g_k,
                pi_nabla_k,
                pi_nabla_km1,
                pi0_k,
                moments: c,
                grad_km1,
                grad_k,
                condition,
                consistency_residual,
            },
        })
    }

    /// Edge traces sampled at a (k+2)-point Gauss-Legendre rule, exact for
    /// products of a degree-k trace with a degree-k polynomial.
    pub fn edge_traces(geom: &ElementGeometry, k: usize) -> Vec<EdgeTrace> {
        Self::edge_traces_with(geom, k, k + 2)
    }

    pub fn edge_traces_with(geom: &ElementGeometry, k: usize, points: usize) -> Vec<EdgeTrace> {
        let n_v = geom.n_vertices();
        let nodes = gauss_lobatto(k + 1).points;
        let gl = gauss_legendre(points);
        geom.edges
            .iter()
            .enumerate()
            .map(|(i, e)| {
                let rule = edge_rule(e, &gl);
                let mut dofs = vec![i];
                dofs.extend((0..k - 1).map(|j| n_v + i * (k - 1) + j));
                dofs.push((i + 1) % n_v);
                let mut values = DMatrix::zeros(rule.points.len(), k + 1);
                for (q, &t) in rule.reference.iter().enumerate() {
                    for (l, v) in lagrange_values(&nodes, t).into_iter().enumerate() {
                        values[(q, l)] = v;
                    }
                }
                EdgeTrace {
                    rule,
                    normal: e.normal,
                    dofs,
                    values,
                }
            })
            .collect()
    }

    pub fn n_dofs(&self) -> usize {
        self.dofs.len()
    }

    /// Local DOFs of a smooth function: point values and moments computed
    /// with a degree 2k+4 rule.
    pub fn interpolate(&self, f: impl Fn(Vec2) -> f64) -> Result<DVector<f64>> {
        let n = self.n_dofs();
        let mut v = DVector::zeros(n);
        for (i, &p) in self.nodes.iter().enumerate() {
            v[i] = f(p);
        }
        let nk2 = dim(self.k as isize - 2);
        if nk2 > 0 {
            let rule = polygon_rule(&self.geom, 2 * self.k + 4)?;
            let off = self.nodes.len();
            for (&p, &w) in rule.points.iter().zip(&rule.weights) {
                let fv = f(p) * w / self.geom.area;
                let m = self.basis.eval(p);
                for a in 0..nk2 {
                    v[off + a] += fv * m[a];
                }
            }
        }
        Ok(v)
    }

    /// Text dump of D, B, G and H for golden comparisons.
    pub fn debug_dump(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "cell {} k {} ndofs {}", self.cell, self.k, self.n_dofs());
        for (name, m) in [
            ("D", &self.proj.dof_matrix),
            ("B", &self.proj.b_matrix),
            ("G", &self.proj.g_matrix),
            ("H", &self.tables.mass),
        ] {
            let _ = writeln!(s, "{name} {} {}", m.nrows(), m.ncols());
            for r in 0..m.nrows() {
                let row: Vec<String> = (0..m.ncols()).map(|c| format!("{:.16e}", m[(r, c)])).collect();
                let _ = writeln!(s, "{}", row.join(" "));
            }
        }
        s
    }
}

/// Mesh, layout and all element projectors for a fixed degree.
#[derive(Debug, Clone)]
pub struct Discretization {
    pub mesh: PolyMesh,
    pub k: usize,
    pub layout: DofLayout,
    pub elements: Vec<VemElement>,
}

impl Discretization {
    pub fn new(mesh: &PolyMesh, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(VemError::Domain("polynomial degree must be at least 1".into()));
        }
        let layout = build_dof_layout(mesh, k);
        let elements = (0..mesh.n_cells())
            .into_par_iter()
            .map(|c| {
                VemElement::from_geometry(c, mesh.cell_geometry(c), k, Some(layout.cell_dofs[c].clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            mesh: mesh.clone(),
            k,
            layout,
            elements,
        })
    }

    pub fn n_scalar(&self) -> usize {
        self.layout.n_scalar()
    }

    /// Global scalar DOFs of a smooth function.
    pub fn interpolate(&self, f: impl Fn(Vec2) -> f64 + Sync) -> Result<DVector<f64>> {
        let mut v = DVector::zeros(self.n_scalar());
        for (i, p) in self.layout.position.iter().enumerate() {
            if let Some(p) = p {
                v[i] = f(*p);
            }
        }
        if self.k >= 2 {
            let local: Vec<DVector<f64>> = self
                .elements
                .par_iter()
                .map(|e| e.interpolate(&f))
                .collect::<Result<_>>()?;
            for (e, l) in self.elements.iter().zip(local) {
                let off = e.nodes.len();
                for a in off..e.n_dofs() {
                    v[e.dofs[a]] = l[a];
                }
            }
        }
        Ok(v)
    }

    /// Restriction of a global scalar vector to the local DOFs of element `e`.
    pub fn gather(&self, e: usize, global: &DVector<f64>) -> DVector<f64> {
        let el = &self.elements[e];
        DVector::from_iterator(el.n_dofs(), el.dofs.iter().map(|&g| global[g]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::generate_structured_quads;
    use crate::polybasis::{index, multi_index};

    fn pentagon() -> ElementGeometry {
        ElementGeometry::from_vertices(vec![
            Vec2::new(0.1, 0.0),
            Vec2::new(0.9, 0.15),
            Vec2::new(1.0, 0.7),
            Vec2::new(0.5, 1.0),
            Vec2::new(0.0, 0.6),
        ])
    }

    #[test]
    fn dof_counts() {
        let m = generate_structured_quads(2).unwrap();
        assert_eq!(build_dof_layout(&m, 1).n_scalar(), 9);
        let m = generate_structured_quads(1).unwrap();
        assert_eq!(build_dof_layout(&m, 2).n_scalar(), 9);
        assert_eq!(local_dof_count(6, 2), 13);
        assert_eq!(local_dof_count(4, 1), 4);
    }

    #[test]
    fn shared_edge_nodes_coincide() {
        let m = generate_structured_quads(3).unwrap();
        for k in [2, 3] {
            let disc = Discretization::new(&m, k).unwrap();
            for e in &disc.elements {
                for (l, &g) in e.dofs.iter().enumerate().take(e.nodes.len()) {
                    let p = disc.layout.position[g].unwrap();
                    assert!((p - e.nodes[l]).norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn projectors_reproduce_monomials() {
        for k in 1..=3 {
            let el = VemElement::from_geometry(0, pentagon(), k, None).unwrap();
            let p = &el.proj;
            assert!(p.consistency_residual < 1e-10, "{}", p.consistency_residual);
            let nk = dim(k as isize);
            for b in 0..nk {
                let dofs = el.interpolate(|x| el.basis.eval(x)[b]).unwrap();
                let dcol = p.dof_matrix.column(b);
                assert!((&dofs - dcol).amax() < 1e-12);
                let unit = |n: usize| DVector::from_fn(n, |i, _| if i == b { 1.0 } else { 0.0 });
                assert!((&p.pi_nabla_k * &dofs - unit(nk)).amax() < 1e-10);
                assert!((&p.pi0_k * &dofs - unit(nk)).amax() < 1e-10);
                let (a, bb) = multi_index(b);
                let h = el.basis.h;
                let mut gx = DVector::zeros(nk);
                let mut gy = DVector::zeros(nk);
                if a > 0 {
                    gx[index(a - 1, bb)] = a as f64 / h;
                }
                if bb > 0 {
                    gy[index(a, bb - 1)] = bb as f64 / h;
                }
                assert!((&p.grad_k[0] * &dofs - &gx).amax() < 1e-9);
                assert!((&p.grad_k[1] * &dofs - &gy).amax() < 1e-9);
            }
        }
    }

    #[test]
    fn h1_projector_is_idempotent() {
        let el = VemElement::from_geometry(0, pentagon(), 2, None).unwrap();
        let p = el.proj.dof_pi_nabla_k();
        assert!((&p * &p - &p).amax() < 1e-10);
    }

    #[test]
    fn constant_interpolation() {
        let el = VemElement::from_geometry(0, pentagon(), 2, None).unwrap();
        let v = el.interpolate(|_| 1.0).unwrap();
        assert!(v.iter().all(|&x| (x - 1.0).abs() < 1e-14));
    }
}
