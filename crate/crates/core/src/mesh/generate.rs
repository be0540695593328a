//! Deterministic mesh families on the unit square.
//!
//! * structured squares,
//! * squares with randomly displaced interior vertices,
//! * clipped Voronoi tessellations smoothed by Lloyd iterations,
//! * squares split into two interlocking non-convex cells.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::geometry::{signed_area, ElementGeometry};
use super::PolyMesh;
use crate::{Result, Vec2, VemError};

const MAX_REDRAWS: usize = 100;

/// `n x n` axis-aligned squares covering the unit square.
pub fn generate_structured_quads(n: usize) -> Result<PolyMesh> {
    if n == 0 {
        return Err(VemError::Domain("structured mesh needs n >= 1".into()));
    }
    let (vertices, cells) = structured_layout(n);
    PolyMesh::new(vertices, cells)
}

fn structured_layout(n: usize) -> (Vec<Vec2>, Vec<Vec<usize>>) {
    let idx = |i: usize, j: usize| j * (n + 1) + i;
    let mut vertices = Vec::with_capacity((n + 1) * (n + 1));
    for j in 0..=n {
        for i in 0..=n {
            vertices.push(Vec2::new(i as f64 / n as f64, j as f64 / n as f64));
        }
    }
    let mut cells = Vec::with_capacity(n * n);
    for j in 0..n {
        for i in 0..n {
            cells.push(vec![idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1)]);
        }
    }
    (vertices, cells)
}

/// Structured squares whose interior vertices are moved by a random offset
/// of length at most `amplitude / n`. Boundary vertices stay put.
///
/// A draw that produces an invalid cell is rejected and redrawn from the
/// same random stream, up to 100 times.
pub fn generate_distorted_quads(n: usize, amplitude: f64, seed: u64) -> Result<PolyMesh> {
    if !(0.0..0.5).contains(&amplitude) {
        return Err(VemError::Domain(format!(
            "distortion amplitude {amplitude} outside [0, 0.5)"
        )));
    }
    if n == 0 {
        return Err(VemError::Domain("distorted mesh needs n >= 1".into()));
    }
    let (base, cells) = structured_layout(n);
    if amplitude == 0.0 {
        return PolyMesh::new(base, cells);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let radius = amplitude / n as f64;
    let mut last_err = None;
    for _ in 0..MAX_REDRAWS {
        let mut vertices = base.clone();
        for j in 1..n {
            for i in 1..n {
                let r = radius * rng.random::<f64>().sqrt();
                let theta = std::f64::consts::TAU * rng.random::<f64>();
                vertices[j * (n + 1) + i] += Vec2::new(r * theta.cos(), r * theta.sin());
            }
        }
        match PolyMesh::new(vertices, cells.clone()) {
            Ok(mesh) => return Ok(mesh),
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.unwrap_or_else(|| VemError::GenerationFailure("distortion failed".into())))
}

/// Each square of an `n x n` grid split by a zigzag line into two
/// interlocking non-convex cells. The zigzag direction alternates in a
/// checkerboard pattern.
pub fn generate_nonconvex(n: usize) -> Result<PolyMesh> {
    if n == 0 {
        return Err(VemError::Domain("non-convex mesh needs n >= 1".into()));
    }
    let s = 1.0 / n as f64;
    let delta = 0.2 * s;
    let grid = |i: usize, j: usize| j * (n + 1) + i;
    let n_grid = (n + 1) * (n + 1);
    // midpoints of horizontal grid edges
    let hmid = |i: usize, j: usize| n_grid + j * n + i;
    let n_hmid = n * (n + 1);
    let zig = |i: usize, j: usize, which: usize| n_grid + n_hmid + 2 * (j * n + i) + which;

    let mut vertices = Vec::with_capacity(n_grid + n_hmid + 2 * n * n);
    for j in 0..=n {
        for i in 0..=n {
            vertices.push(Vec2::new(i as f64 * s, j as f64 * s));
        }
    }
    for j in 0..=n {
        for i in 0..n {
            vertices.push(Vec2::new((i as f64 + 0.5) * s, j as f64 * s));
        }
    }
    for j in 0..n {
        for i in 0..n {
            let sigma = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
            let xm = (i as f64 + 0.5) * s;
            let y0 = j as f64 * s;
            vertices.push(Vec2::new(xm + sigma * delta, y0 + s / 3.0));
            vertices.push(Vec2::new(xm - sigma * delta, y0 + 2.0 * s / 3.0));
        }
    }

    let mut cells = Vec::with_capacity(2 * n * n);
    for j in 0..n {
        for i in 0..n {
            cells.push(vec![
                grid(i, j),
                hmid(i, j),
                zig(i, j, 0),
                zig(i, j, 1),
                hmid(i, j + 1),
                grid(i, j + 1),
            ]);
            cells.push(vec![
                hmid(i, j),
                grid(i + 1, j),
                grid(i + 1, j + 1),
                hmid(i, j + 1),
                zig(i, j, 1),
                zig(i, j, 0),
            ]);
        }
    }
    PolyMesh::new(vertices, cells)
}

/// Clipped Voronoi tessellation of `n_seeds` uniformly drawn sites after
/// `lloyd_iterations` centroidal relaxation steps.
pub fn generate_voronoi(n_seeds: usize, lloyd_iterations: usize, seed: u64) -> Result<PolyMesh> {
    if n_seeds < 4 {
        return Err(VemError::Domain(format!(
            "Voronoi mesh needs at least 4 seeds, got {n_seeds}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let seeds: Vec<Vec2> = (0..n_seeds)
        .map(|_| Vec2::new(rng.random::<f64>(), rng.random::<f64>()))
        .collect();
    generate_voronoi_from_seeds(seeds, lloyd_iterations)
}

/// Voronoi tessellation of the unit square for explicit sites.
pub fn generate_voronoi_from_seeds(mut seeds: Vec<Vec2>, lloyd_iterations: usize) -> Result<PolyMesh> {
    if seeds.len() < 4 {
        return Err(VemError::Domain("Voronoi mesh needs at least 4 seeds".into()));
    }
    if seeds
        .iter()
        .any(|s| !(0.0..=1.0).contains(&s.x) || !(0.0..=1.0).contains(&s.y))
    {
        return Err(VemError::Domain("Voronoi seeds must lie in the unit square".into()));
    }
    for _ in 0..lloyd_iterations {
        let cells = voronoi_cells(&seeds)?;
        seeds = cells
            .iter()
            .map(|poly| ElementGeometry::from_vertices(poly.clone()).centroid)
            .collect();
    }
    let polygons = voronoi_cells(&seeds)?;
    let mesh = merge_polygons(&polygons)?;
    check_unit_square_boundary(&mesh)?;
    Ok(mesh)
}

/// Keeps the part of a convex polygon with `(x - origin) . normal <= 0`.
fn clip_half_plane(poly: &[Vec2], origin: Vec2, normal: Vec2) -> Vec<Vec2> {
    let n = poly.len();
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        let da = (a - origin).dot(&normal);
        let db = (b - origin).dot(&normal);
        if da <= 0.0 {
            out.push(a);
        }
        if (da < 0.0 && db > 0.0) || (da > 0.0 && db < 0.0) {
            let t = da / (da - db);
            out.push(a + (b - a) * t);
        }
    }
    out
}

fn voronoi_cells(seeds: &[Vec2]) -> Result<Vec<Vec<Vec2>>> {
    let n = seeds.len();
    let nb = ((n as f64).sqrt().floor() as usize).max(1);
    let cs = 1.0 / nb as f64;
    let bucket_of = |p: Vec2| {
        let bx = ((p.x * nb as f64) as usize).min(nb - 1);
        let by = ((p.y * nb as f64) as usize).min(nb - 1);
        (bx, by)
    };
    let mut buckets = vec![Vec::new(); nb * nb];
    for (i, &s) in seeds.iter().enumerate() {
        let (bx, by) = bucket_of(s);
        buckets[by * nb + bx].push(i);
    }

    let square = [
        Vec2::new(0.0, 0.0),
        Vec2::new(1.0, 0.0),
        Vec2::new(1.0, 1.0),
        Vec2::new(0.0, 1.0),
    ];
    let mut cells = Vec::with_capacity(n);
    for (i, &si) in seeds.iter().enumerate() {
        let mut poly = square.to_vec();
        let (cx, cy) = bucket_of(si);
        let mut ring = 0usize;
        loop {
            let lo_x = cx.saturating_sub(ring);
            let hi_x = (cx + ring).min(nb - 1);
            let lo_y = cy.saturating_sub(ring);
            let hi_y = (cy + ring).min(nb - 1);
            for by in lo_y..=hi_y {
                for bx in lo_x..=hi_x {
                    let on_ring = bx.abs_diff(cx) == ring || by.abs_diff(cy) == ring;
                    if !on_ring {
                        continue;
                    }
                    for &j in &buckets[by * nb + bx] {
                        if j == i {
                            continue;
                        }
                        let sj = seeds[j];
                        let d = sj - si;
                        if d.norm() == 0.0 {
                            return Err(VemError::GenerationFailure(format!(
                                "coincident Voronoi seeds {i} and {j}"
                            )));
                        }
                        poly = clip_half_plane(&poly, 0.5 * (si + sj), d);
                    }
                }
            }
            let reach = poly.iter().map(|p| (p - si).norm()).fold(0.0, f64::max);
            if ring as f64 * cs >= 2.0 * reach || ring > nb {
                break;
            }
            ring += 1;
        }
        if poly.len() < 3 || signed_area(&poly) <= 0.0 {
            return Err(VemError::GenerationFailure(format!(
                "Voronoi cell {i} degenerated after clipping"
            )));
        }
        cells.push(poly);
    }
    Ok(cells)
}

/// Identifies coincident polygon corners and builds a conforming mesh.
fn merge_polygons(polygons: &[Vec<Vec2>]) -> Result<PolyMesh> {
    const TOL: f64 = 1e-10;
    const BIN: f64 = 1e-8;
    let snap = |x: f64| {
        if x.abs() < 1e-13 {
            0.0
        } else if (x - 1.0).abs() < 1e-13 {
            1.0
        } else {
            x
        }
    };
    let mut vertices: Vec<Vec2> = Vec::new();
    let mut bins: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    let mut cells = Vec::with_capacity(polygons.len());
    for (c, poly) in polygons.iter().enumerate() {
        let mut cell: Vec<usize> = Vec::with_capacity(poly.len());
        for p in poly {
            let p = Vec2::new(snap(p.x), snap(p.y));
            let key = ((p.x / BIN).floor() as i64, (p.y / BIN).floor() as i64);
            let mut found = None;
            'search: for dx in -1..=1 {
                for dy in -1..=1 {
                    if let Some(list) = bins.get(&(key.0 + dx, key.1 + dy)) {
                        for &v in list {
                            if (vertices[v] - p).norm() <= TOL {
                                found = Some(v);
                                break 'search;
                            }
                        }
                    }
                }
            }
            let v = match found {
                Some(v) => v,
                None => {
                    vertices.push(p);
                    bins.entry(key).or_default().push(vertices.len() - 1);
                    vertices.len() - 1
                }
            };
            if cell.last() != Some(&v) {
                cell.push(v);
            }
        }
        while cell.len() > 1 && cell.first() == cell.last() {
            cell.pop();
        }
        if cell.len() < 3 {
            return Err(VemError::GenerationFailure(format!(
                "cell {c} collapsed while merging vertices"
            )));
        }
        cells.push(cell);
    }
    PolyMesh::new(vertices, cells).map_err(|e| VemError::GenerationFailure(e.to_string()))
}

/// Every boundary edge must run along a side of the unit square; catches
/// hanging nodes that the topology check alone would accept.
fn check_unit_square_boundary(mesh: &PolyMesh) -> Result<()> {
    let on_side = |a: Vec2, b: Vec2| {
        (a.x == 0.0 && b.x == 0.0)
            || (a.x == 1.0 && b.x == 1.0)
            || (a.y == 0.0 && b.y == 0.0)
            || (a.y == 1.0 && b.y == 1.0)
    };
    for e in mesh.edges().iter().filter(|e| e.is_boundary()) {
        let a = mesh.vertex(e.vertices[0]);
        let b = mesh.vertex(e.vertices[1]);
        if !on_side(a, b) {
            return Err(VemError::GenerationFailure(format!(
                "non-conforming interior edge between {a:?} and {b:?}"
            )));
        }
    }
    if (mesh.domain_area() - 1.0).abs() > 1e-10 {
        return Err(VemError::GenerationFailure("cells do not cover the unit square".into()));
    }
    Ok(())
}

/// Named mesh families indexed by a refinement parameter `n`
/// (roughly `1/n` mesh size).
#[derive(Debug, Clone, PartialEq)]
pub enum MeshFamily {
    Squares,
    Distorted { amplitude: f64, seed: u64 },
    /// `n * n` seeds per level.
    Voronoi { lloyd_iterations: usize, seed: u64 },
    NonConvex,
}

impl MeshFamily {
    pub fn generate(&self, n: usize) -> Result<PolyMesh> {
        match *self {
            MeshFamily::Squares => generate_structured_quads(n),
            MeshFamily::Distorted { amplitude, seed } => generate_distorted_quads(n, amplitude, seed),
            MeshFamily::Voronoi {
                lloyd_iterations,
                seed,
            } => generate_voronoi((n * n).max(4), lloyd_iterations, seed),
            MeshFamily::NonConvex => generate_nonconvex(n),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            MeshFamily::Squares => "squares",
            MeshFamily::Distorted { .. } => "distorted",
            MeshFamily::Voronoi { .. } => "voronoi",
            MeshFamily::NonConvex => "nonconvex",
        }
    }

    /// Families with the default parameters used by the convergence studies.
    pub fn from_name(name: &str, seed: u64) -> Option<Self> {
        match name {
            "squares" | "structured" => Some(MeshFamily::Squares),
            "distorted" => Some(MeshFamily::Distorted {
                amplitude: 0.25,
                seed,
            }),
            "voronoi" => Some(MeshFamily::Voronoi {
                lloyd_iterations: 20,
                seed,
            }),
            "nonconvex" | "non-convex" => Some(MeshFamily::NonConvex),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{validate, write_mesh};

    fn area_sum(m: &PolyMesh) -> f64 {
        (0..m.n_cells()).map(|c| m.cell_area(c)).sum()
    }

    #[test]
    fn structured_counts() {
        let m = generate_structured_quads(1).unwrap();
        assert_eq!((m.n_cells(), m.n_vertices()), (1, 4));
        assert_eq!(m.boundary_edge_flags().iter().filter(|&&b| b).count(), 4);

        let m = generate_structured_quads(2).unwrap();
        assert_eq!((m.n_cells(), m.n_vertices()), (4, 9));
        assert!((area_sum(&m) - 1.0).abs() < 1e-15);

        let m = generate_structured_quads(5).unwrap();
        for c in 0..m.n_cells() {
            assert!((m.cell_geometry(c).diameter - 2f64.sqrt() / 5.0).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_amplitude_is_structured() {
        assert_eq!(
            generate_distorted_quads(4, 0.0, 9).unwrap(),
            generate_structured_quads(4).unwrap()
        );
    }

    #[test]
    fn distorted_is_valid_and_deterministic() {
        let a = generate_distorted_quads(4, 0.3, 42).unwrap();
        assert!((area_sum(&a) - 1.0).abs() < 1e-12);
        let b = generate_distorted_quads(4, 0.3, 42).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let (pa, pb) = (dir.path().join("a.mesh"), dir.path().join("b.mesh"));
        write_mesh(&a, &pa).unwrap();
        write_mesh(&b, &pb).unwrap();
        assert_eq!(std::fs::read(pa).unwrap(), std::fs::read(pb).unwrap());
        for v in 0..a.n_vertices() {
            if a.is_boundary_vertex(v) {
                let p = a.vertex(v);
                assert!(p.x == 0.0 || p.x == 1.0 || p.y == 0.0 || p.y == 1.0);
            }
        }
    }

    #[test]
    fn distorted_rejects_large_amplitude() {
        assert!(generate_distorted_quads(4, 0.5, 1).is_err());
    }

    #[test]
    fn symmetric_voronoi_seeds_give_squares() {
        let seeds = vec![
            Vec2::new(0.25, 0.25),
            Vec2::new(0.75, 0.25),
            Vec2::new(0.25, 0.75),
            Vec2::new(0.75, 0.75),
        ];
        let m = generate_voronoi_from_seeds(seeds, 0).unwrap();
        assert_eq!(m.n_cells(), 4);
        assert_eq!(m.n_vertices(), 9);
        for c in 0..4 {
            assert!((m.cell_area(c) - 0.25).abs() < 1e-15);
            assert_eq!(m.cell(c).len(), 4);
        }
    }

    #[test]
    fn voronoi_with_lloyd() {
        let m = generate_voronoi(64, 3, 7).unwrap();
        assert_eq!(m.n_cells(), 64);
        assert!((area_sum(&m) - 1.0).abs() < 1e-10);
        assert_eq!(m.euler_characteristic(), 1);
        for c in 0..m.n_cells() {
            assert!(m.cell_geometry(c).is_convex());
        }
        assert!(validate(&m, 0.0).passed);
    }

    #[test]
    fn lloyd_evens_out_cell_sizes() {
        let spread = |m: &PolyMesh| {
            let h: Vec<f64> = (0..m.n_cells()).map(|c| m.cell_geometry(c).diameter).collect();
            h.iter().cloned().fold(0.0, f64::max) / h.iter().cloned().fold(f64::INFINITY, f64::min)
        };
        let raw = generate_voronoi(100, 0, 3).unwrap();
        let relaxed = generate_voronoi(100, 5, 3).unwrap();
        assert_eq!(raw.n_cells(), relaxed.n_cells());
        assert!(spread(&relaxed) < spread(&raw));
    }

    #[test]
    fn nonconvex_cells() {
        let m = generate_nonconvex(2).unwrap();
        assert_eq!(m.n_cells(), 8);
        for c in 0..m.n_cells() {
            let g = m.cell_geometry(c);
            assert!(!g.reflex_vertices().is_empty(), "cell {c} is convex");
        }
        for n in [1, 3, 4, 7] {
            let m = generate_nonconvex(n).unwrap();
            assert!((area_sum(&m) - 1.0).abs() < 1e-12);
            assert_eq!(m.euler_characteristic(), 1);
        }
    }

    #[test]
    fn generators_satisfy_euler_relation() {
        for m in [
            generate_structured_quads(6).unwrap(),
            generate_distorted_quads(6, 0.3, 1).unwrap(),
            generate_voronoi(50, 2, 11).unwrap(),
            generate_nonconvex(6).unwrap(),
        ] {
            assert_eq!(m.euler_characteristic(), 1);
        }
    }
}
