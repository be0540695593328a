use crate::Vec2;

/// One oriented edge of a polygon, traversed counter-clockwise.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeGeometry {
    pub start: Vec2,
    pub end: Vec2,
    pub length: f64,
    /// Unit outward normal.
    pub normal: Vec2,
}

impl EdgeGeometry {
    pub fn point_at(&self, t: f64) -> Vec2 {
        // t in [-1, 1]
        self.start + (self.end - self.start) * (0.5 * (t + 1.0))
    }
}

/// Geometric data of a single polygonal element.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementGeometry {
    pub vertices: Vec<Vec2>,
    pub area: f64,
    pub centroid: Vec2,
    /// Maximum pairwise vertex distance.
    pub diameter: f64,
    pub edges: Vec<EdgeGeometry>,
}

/// Twice the signed area of a polygon (positive for counter-clockwise).
pub fn signed_area(vertices: &[Vec2]) -> f64 {
    let n = vertices.len();
    let mut a = 0.0;
    for i in 0..n {
        let p = vertices[i];
        let q = vertices[(i + 1) % n];
        a += p.x * q.y - q.x * p.y;
    }
    0.5 * a
}

pub(crate) fn cross(a: Vec2, b: Vec2) -> f64 {
    a.x * b.y - a.y * b.x
}

impl ElementGeometry {
    /// Builds the geometry of a counter-clockwise polygon. Orientation is not
    /// checked here; see [`crate::mesh::PolyMesh`] for validation.
    pub fn from_vertices(vertices: Vec<Vec2>) -> Self {
        let n = vertices.len();
        let area = signed_area(&vertices);

        // centroid relative to the first vertex for better cancellation
        let o = vertices[0];
        let mut c = Vec2::zeros();
        let mut a2 = 0.0;
        for i in 0..n {
            let p = vertices[i] - o;
            let q = vertices[(i + 1) % n] - o;
            let w = cross(p, q);
            a2 += w;
            c += (p + q) * w;
        }
        let centroid = o + c / (3.0 * a2);

        let mut diameter: f64 = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                diameter = diameter.max((vertices[i] - vertices[j]).norm());
            }
        }

        let edges = (0..n)
            .map(|i| {
                let start = vertices[i];
                let end = vertices[(i + 1) % n];
                let d = end - start;
                let length = d.norm();
                EdgeGeometry {
                    start,
                    end,
                    length,
                    normal: Vec2::new(d.y, -d.x) / length,
                }
            })
            .collect();

        Self {
            vertices,
            area,
            centroid,
            diameter,
            edges,
        }
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn perimeter(&self) -> f64 {
        self.edges.iter().map(|e| e.length).sum()
    }

    /// Even-odd point location; points on the boundary may go either way.
    pub fn contains(&self, p: Vec2) -> bool {
        point_in_polygon(&self.vertices, p)
    }

    /// Indices of reflex (interior angle > pi) vertices.
    pub fn reflex_vertices(&self) -> Vec<usize> {
        let n = self.vertices.len();
        (0..n)
            .filter(|&i| {
                let prev = self.vertices[(i + n - 1) % n];
                let cur = self.vertices[i];
                let next = self.vertices[(i + 1) % n];
                cross(cur - prev, next - cur) < -1e-14 * self.diameter * self.diameter
            })
            .collect()
    }

    pub fn is_convex(&self) -> bool {
        self.reflex_vertices().is_empty()
    }
}

pub(crate) fn point_in_polygon(vertices: &[Vec2], p: Vec2) -> bool {
    let n = vertices.len();
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let a = vertices[i];
        let b = vertices[j];
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if p.x < x {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

/// Proper or touching intersection test for closed segments `ab` and `cd`.
pub(crate) fn segments_intersect(a: Vec2, b: Vec2, c: Vec2, d: Vec2) -> bool {
    let scale = (b - a).norm().max((d - c).norm());
    let eps = 1e-14 * scale * scale;
    let o1 = cross(b - a, c - a);
    let o2 = cross(b - a, d - a);
    let o3 = cross(d - c, a - c);
    let o4 = cross(d - c, b - c);
    let sgn = |v: f64| {
        if v > eps {
            1
        } else if v < -eps {
            -1
        } else {
            0
        }
    };
    let (s1, s2, s3, s4) = (sgn(o1), sgn(o2), sgn(o3), sgn(o4));
    if s1 * s2 < 0 && s3 * s4 < 0 {
        return true;
    }
    let on_segment = |p: Vec2, q: Vec2, r: Vec2| {
        r.x >= p.x.min(q.x) - eps.sqrt()
            && r.x <= p.x.max(q.x) + eps.sqrt()
            && r.y >= p.y.min(q.y) - eps.sqrt()
            && r.y <= p.y.max(q.y) + eps.sqrt()
    };
    (s1 == 0 && on_segment(a, b, c))
        || (s2 == 0 && on_segment(a, b, d))
        || (s3 == 0 && on_segment(c, d, a))
        || (s4 == 0 && on_segment(c, d, b))
}

/// True if the closed polygon has no self-intersections and no repeated
/// vertices.
pub fn is_simple_polygon(vertices: &[Vec2]) -> bool {
    let n = vertices.len();
    if n < 3 {
        return false;
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if vertices[i] == vertices[j] {
                return false;
            }
        }
    }
    for i in 0..n {
        let a = vertices[i];
        let b = vertices[(i + 1) % n];
        for j in (i + 1)..n {
            // skip edges sharing a vertex with edge i
            if j == i + 1 || (i == 0 && j == n - 1) {
                continue;
            }
            let c = vertices[j];
            let d = vertices[(j + 1) % n];
            if segments_intersect(a, b, c, d) {
                return false;
            }
        }
    }
    true
}
