use super::geometry::{cross, ElementGeometry};
use super::PolyMesh;
use crate::Vec2;

/// Shape-regularity measures of one cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CellRegularity {
    pub diameter: f64,
    /// Shortest edge divided by the diameter.
    pub min_edge_ratio: f64,
    /// Radius of the largest disc inside the kernel, centered at one of the
    /// sampled candidate points, divided by the diameter. Zero when no
    /// candidate lies in the kernel.
    pub star_ratio: f64,
    pub convex: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegularityReport {
    pub theta: f64,
    pub cells: Vec<CellRegularity>,
    pub h: f64,
    pub worst_edge_ratio: f64,
    pub worst_star_ratio: f64,
    /// True if some cell is non-convex.
    pub has_concave_cells: bool,
    pub passed: bool,
}

/// Signed distance from `p` to the supporting line of each edge, positive
/// inside. The minimum is the radius of the largest disc centered at `p`
/// contained in the kernel (negative if `p` is outside the kernel).
fn kernel_radius(g: &ElementGeometry, p: Vec2) -> f64 {
    g.edges
        .iter()
        .map(|e| cross(e.end - e.start, p - e.start) / e.length)
        .fold(f64::INFINITY, f64::min)
}

fn star_ratio(g: &ElementGeometry) -> f64 {
    let (mut lo, mut hi) = (g.vertices[0], g.vertices[0]);
    for v in &g.vertices {
        lo = lo.inf(v);
        hi = hi.sup(v);
    }
    let mut candidates = vec![g.centroid];
    for i in 1..=5 {
        for j in 1..=5 {
            candidates.push(Vec2::new(
                lo.x + (hi.x - lo.x) * i as f64 / 6.0,
                lo.y + (hi.y - lo.y) * j as f64 / 6.0,
            ));
        }
    }
    let best = candidates
        .into_iter()
        .map(|p| kernel_radius(g, p))
        .fold(f64::NEG_INFINITY, f64::max);
    (best / g.diameter).max(0.0)
}

/// Checks both shape-regularity conditions against `theta`: every edge at
/// least `theta h_E` long, and every cell star-shaped with respect to a disc
/// of radius at least `theta h_E`. The mesh is not modified.
pub fn validate(mesh: &PolyMesh, theta: f64) -> RegularityReport {
    let cells: Vec<CellRegularity> = (0..mesh.n_cells())
        .map(|c| {
            let g = mesh.cell_geometry(c);
            let min_edge = g.edges.iter().map(|e| e.length).fold(f64::INFINITY, f64::min);
            CellRegularity {
                diameter: g.diameter,
                min_edge_ratio: min_edge / g.diameter,
                star_ratio: star_ratio(&g),
                convex: g.is_convex(),
            }
        })
        .collect();
    let h = cells.iter().map(|c| c.diameter).fold(0.0, f64::max);
    let worst_edge_ratio = cells.iter().map(|c| c.min_edge_ratio).fold(f64::INFINITY, f64::min);
    let worst_star_ratio = cells.iter().map(|c| c.star_ratio).fold(f64::INFINITY, f64::min);
    let has_concave_cells = cells.iter().any(|c| !c.convex);
    let passed = worst_edge_ratio >= theta && worst_star_ratio >= theta && worst_star_ratio > 0.0;
    RegularityReport {
        theta,
        cells,
        h,
        worst_edge_ratio,
        worst_star_ratio,
        has_concave_cells,
        passed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{generate_nonconvex, generate_structured_quads};

    #[test]
    fn squares_pass() {
        let r = validate(&generate_structured_quads(4).unwrap(), 0.3);
        assert!(r.passed);
        assert!((r.worst_edge_ratio - 0.5f64.sqrt()).abs() < 1e-14);
        assert!(!r.has_concave_cells);
        // inscribed disc of a square: radius s/2, diameter s*sqrt(2)
        assert!((r.worst_star_ratio - 0.5 / 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn sliver_fails() {
        let v = vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(1.0, 1.0),
            Vec2::new(1.0 - 1e-6, 1.0),
            Vec2::new(0.0, 1.0),
        ];
        let mesh = PolyMesh::new(v, vec![vec![0, 1, 2, 3, 4]]).unwrap();
        let r = validate(&mesh, 0.1);
        assert!(!r.passed);
        assert!(r.worst_edge_ratio < 1e-5);
    }

    #[test]
    fn nonconvex_cells_are_star_shaped() {
        let r = validate(&generate_nonconvex(4).unwrap(), 0.05);
        assert!(r.has_concave_cells);
        assert!(r.worst_star_ratio > 0.0);
        assert!(r.passed, "worst star ratio {}", r.worst_star_ratio);
    }
}
