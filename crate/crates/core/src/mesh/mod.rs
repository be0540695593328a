//! Polygonal meshes of planar, simply connected domains.

mod generate;
mod geometry;
mod io;
mod regularity;

pub use generate::{
    generate_distorted_quads, generate_nonconvex, generate_structured_quads, generate_voronoi,
    generate_voronoi_from_seeds, MeshFamily,
};
pub use geometry::{is_simple_polygon, signed_area, EdgeGeometry, ElementGeometry};
pub use io::{format_mesh, parse_mesh, read_mesh, write_mesh};
pub use regularity::{validate, CellRegularity, RegularityReport};

use std::collections::HashMap;

use crate::{Result, Vec2, VemError};

/// An undirected mesh edge. `vertices[0] < vertices[1]` fixes the global
/// orientation used for edge degrees of freedom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub vertices: [usize; 2],
    /// First entry is always present; the second is `None` on the boundary.
    pub cells: [Option<usize>; 2],
}

impl Edge {
    pub fn is_boundary(&self) -> bool {
        self.cells[1].is_none()
    }
}

/// Reference from a cell's local edge to the global edge list.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CellEdge {
    pub edge: usize,
    /// True when the counter-clockwise traversal of the cell runs from
    /// `vertices[0]` to `vertices[1]` of the global edge.
    pub aligned: bool,
}

/// A conforming polygonal mesh.
///
/// Cells are vertex cycles in counter-clockwise order. Edge topology and the
/// boundary flags are derived on construction and never stored on disk.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyMesh {
    vertices: Vec<Vec2>,
    cells: Vec<Vec<usize>>,
    edges: Vec<Edge>,
    cell_edges: Vec<Vec<CellEdge>>,
    boundary_edge: Vec<bool>,
    boundary_vertex: Vec<bool>,
}

impl PolyMesh {
    /// Builds the topology and checks the structural invariants: every cell
    /// is a simple counter-clockwise polygon, each edge borders one or two
    /// cells with opposite orientations, and the cell areas add up to the
    /// area enclosed by the boundary edges.
    pub fn new(vertices: Vec<Vec2>, cells: Vec<Vec<usize>>) -> Result<Self> {
        let nv = vertices.len();
        for (c, cell) in cells.iter().enumerate() {
            if cell.len() < 3 {
                return Err(VemError::DegenerateCell {
                    cell: c,
                    reason: format!("{} vertices", cell.len()),
                });
            }
            if let Some(&bad) = cell.iter().find(|&&v| v >= nv) {
                return Err(VemError::InvalidMesh(format!(
                    "cell {c} references vertex {bad} but only {nv} vertices exist"
                )));
            }
            if !vertices.iter().all(|p| p.x.is_finite() && p.y.is_finite()) {
                return Err(VemError::InvalidMesh("non-finite vertex coordinate".into()));
            }
            let poly: Vec<Vec2> = cell.iter().map(|&v| vertices[v]).collect();
            if signed_area(&poly) <= 0.0 {
                return Err(VemError::DegenerateCell {
                    cell: c,
                    reason: "not counter-clockwise".into(),
                });
            }
            if !is_simple_polygon(&poly) {
                return Err(VemError::DegenerateCell {
                    cell: c,
                    reason: "self-intersecting".into(),
                });
            }
        }

        let mut edge_index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut edges: Vec<Edge> = Vec::new();
        let mut cell_edges = Vec::with_capacity(cells.len());
        for (c, cell) in cells.iter().enumerate() {
            let m = cell.len();
            let mut local = Vec::with_capacity(m);
            for i in 0..m {
                let a = cell[i];
                let b = cell[(i + 1) % m];
                let key = (a.min(b), a.max(b));
                let aligned = a < b;
                let e = match edge_index.get(&key) {
                    Some(&e) => {
                        let edge = &mut edges[e];
                        if edge.cells[1].is_some() {
                            return Err(VemError::InvalidMesh(format!(
                                "edge ({}, {}) shared by more than two cells",
                                key.0, key.1
                            )));
                        }
                        let other = edge.cells[0].expect("first cell always set");
                        let other_aligned = cell_edges_lookup(&cell_edges, other, e)
                            .expect("edge recorded for its first cell");
                        if other_aligned == aligned {
                            return Err(VemError::InvalidMesh(format!(
                                "cells {other} and {c} traverse edge ({}, {}) in the same direction",
                                key.0, key.1
                            )));
                        }
                        edge.cells[1] = Some(c);
                        e
                    }
                    None => {
                        edges.push(Edge {
                            vertices: [key.0, key.1],
                            cells: [Some(c), None],
                        });
                        edge_index.insert(key, edges.len() - 1);
                        edges.len() - 1
                    }
                };
                local.push(CellEdge { edge: e, aligned });
            }
            cell_edges.push(local);
        }

        let boundary_edge: Vec<bool> = edges.iter().map(Edge::is_boundary).collect();
        let mut boundary_vertex = vec![false; nv];
        for e in edges.iter().filter(|e| e.is_boundary()) {
            boundary_vertex[e.vertices[0]] = true;
            boundary_vertex[e.vertices[1]] = true;
        }

        let mesh = Self {
            vertices,
            cells,
            edges,
            cell_edges,
            boundary_edge,
            boundary_vertex,
        };

        let cell_area: f64 = (0..mesh.n_cells()).map(|c| mesh.cell_area(c)).sum();
        let domain_area = mesh.domain_area();
        if ((cell_area - domain_area) / domain_area).abs() > 1e-12 {
            return Err(VemError::InvalidMesh(format!(
                "cells cover area {cell_area} but the boundary encloses {domain_area}"
            )));
        }
        Ok(mesh)
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn vertex(&self, v: usize) -> Vec2 {
        self.vertices[v]
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn cell(&self, c: usize) -> &[usize] {
        &self.cells[c]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn cell_edges(&self, c: usize) -> &[CellEdge] {
        &self.cell_edges[c]
    }

    pub fn is_boundary_edge(&self, e: usize) -> bool {
        self.boundary_edge[e]
    }

    pub fn is_boundary_vertex(&self, v: usize) -> bool {
        self.boundary_vertex[v]
    }

    pub fn boundary_edge_flags(&self) -> &[bool] {
        &self.boundary_edge
    }

    pub fn boundary_vertex_flags(&self) -> &[bool] {
        &self.boundary_vertex
    }

    pub fn cell_polygon(&self, c: usize) -> Vec<Vec2> {
        self.cells[c].iter().map(|&v| self.vertices[v]).collect()
    }

    pub fn cell_geometry(&self, c: usize) -> ElementGeometry {
        ElementGeometry::from_vertices(self.cell_polygon(c))
    }

    pub fn cell_area(&self, c: usize) -> f64 {
        signed_area(&self.cell_polygon(c))
    }

    /// Area enclosed by the boundary edges, oriented as in their cells.
    pub fn domain_area(&self) -> f64 {
        let mut a = 0.0;
        for (c, cell) in self.cells.iter().enumerate() {
            let m = cell.len();
            for (i, ce) in self.cell_edges[c].iter().enumerate() {
                if self.boundary_edge[ce.edge] {
                    let p = self.vertices[cell[i]];
                    let q = self.vertices[cell[(i + 1) % m]];
                    a += p.x * q.y - q.x * p.y;
                }
            }
        }
        0.5 * a
    }

    /// Largest element diameter.
    pub fn h_max(&self) -> f64 {
        (0..self.n_cells())
            .map(|c| self.cell_geometry(c).diameter)
            .fold(0.0, f64::max)
    }

    /// V - E + F; equals 1 for a tiling of a simply connected domain.
    pub fn euler_characteristic(&self) -> i64 {
        self.n_vertices() as i64 - self.n_edges() as i64 + self.n_cells() as i64
    }

    /// The same mesh with cells listed in a different order. Used to check
    /// that results do not depend on element numbering.
    pub fn with_cell_order(&self, order: &[usize]) -> Result<Self> {
        if order.len() != self.n_cells() {
            return Err(VemError::DimensionMismatch(format!(
                "permutation of length {} for {} cells",
                order.len(),
                self.n_cells()
            )));
        }
        let cells = order.iter().map(|&c| self.cells[c].clone()).collect();
        Self::new(self.vertices.clone(), cells)
    }
}

fn cell_edges_lookup(cell_edges: &[Vec<CellEdge>], cell: usize, edge: usize) -> Option<bool> {
    cell_edges
        .get(cell)?
        .iter()
        .find(|ce| ce.edge == edge)
        .map(|ce| ce.aligned)
}
