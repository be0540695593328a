//! Line-oriented text format:
//!
//! ```text
//! polymesh 1
//! vertices <Nv>
//! <x> <y>
//! ...
//! cells <Nc>
//! <m> <i1> ... <im>
//! ...
//! ```
//!
//! Coordinates are written with the shortest decimal representation that
//! parses back to the same `f64`, so a write/read cycle is bit exact.
//! Blank lines and `#` comments are ignored; CRLF line endings are accepted.

use std::fmt::Write as _;
use std::path::Path;

use super::PolyMesh;
use crate::{Result, Vec2, VemError};

pub fn format_mesh(mesh: &PolyMesh) -> String {
    let mut out = String::new();
    out.push_str("polymesh 1\n");
    let _ = writeln!(out, "vertices {}", mesh.n_vertices());
    for p in mesh.vertices() {
        let _ = writeln!(out, "{} {}", p.x, p.y);
    }
    let _ = writeln!(out, "cells {}", mesh.n_cells());
    for cell in mesh.cells() {
        let _ = write!(out, "{}", cell.len());
        for v in cell {
            let _ = write!(out, " {v}");
        }
        out.push('\n');
    }
    out
}

pub fn write_mesh(mesh: &PolyMesh, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, format_mesh(mesh))?;
    Ok(())
}

pub fn read_mesh(path: impl AsRef<Path>) -> Result<PolyMesh> {
    let text = std::fs::read_to_string(path)?;
    parse_mesh(&text)
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    /// Next non-empty line with comments stripped, plus its 1-based number.
    fn next_content(&mut self) -> Option<(usize, &'a str)> {
        for (i, raw) in self.inner.by_ref() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if !line.is_empty() {
                return Some((i + 1, line));
            }
        }
        None
    }

    fn expect(&mut self, what: &str, last_line: usize) -> Result<(usize, &'a str)> {
        self.next_content().ok_or_else(|| VemError::Parse {
            line: last_line + 1,
            msg: format!("unexpected end of file, expected {what}"),
        })
    }
}

fn parse_header(line: usize, text: &str, keyword: &str) -> Result<usize> {
    let mut it = text.split_whitespace();
    match (it.next(), it.next(), it.next()) {
        (Some(k), Some(n), None) if k == keyword => n.parse().map_err(|_| VemError::Parse {
            line,
            msg: format!("invalid {keyword} count `{n}`"),
        }),
        _ => Err(VemError::Parse {
            line,
            msg: format!("expected `{keyword} <count>`, found `{text}`"),
        }),
    }
}

pub fn parse_mesh(text: &str) -> Result<PolyMesh> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
    };
    let (ln, magic) = lines.expect("`polymesh 1`", 0)?;
    if magic.split_whitespace().collect::<Vec<_>>() != ["polymesh", "1"] {
        return Err(VemError::Parse {
            line: ln,
            msg: format!("expected `polymesh 1`, found `{magic}`"),
        });
    }

    let (ln, header) = lines.expect("vertex count", ln)?;
    let nv = parse_header(ln, header, "vertices")?;
    let mut last = ln;
    let mut vertices = Vec::with_capacity(nv);
    for i in 0..nv {
        let (ln, l) = lines.expect(&format!("vertex {i}"), last)?;
        last = ln;
        let fields: Vec<&str> = l.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(VemError::Parse {
                line: ln,
                msg: format!("vertex {i}: expected 2 coordinates, found {}", fields.len()),
            });
        }
        let coord = |k: usize| -> Result<f64> {
            let v: f64 = fields[k].parse().map_err(|_| VemError::Parse {
                line: ln,
                msg: format!("vertex {i}: field {} `{}` is not a number", k + 1, fields[k]),
            })?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(VemError::Parse {
                    line: ln,
                    msg: format!("vertex {i}: non-finite coordinate"),
                })
            }
        };
        vertices.push(Vec2::new(coord(0)?, coord(1)?));
    }

    let (ln, header) = lines.expect("cell count", last)?;
    let nc = parse_header(ln, header, "cells")?;
    last = ln;
    let mut cells = Vec::with_capacity(nc);
    for c in 0..nc {
        let (ln, l) = lines.expect(&format!("cell {c}"), last)?;
        last = ln;
        let fields: Vec<usize> = l
            .split_whitespace()
            .enumerate()
            .map(|(k, f)| {
                f.parse().map_err(|_| VemError::Parse {
                    line: ln,
                    msg: format!("cell {c}: field {} `{f}` is not a non-negative integer", k + 1),
                })
            })
            .collect::<Result<_>>()?;
        let (&m, idx) = fields.split_first().ok_or_else(|| VemError::Parse {
            line: ln,
            msg: format!("cell {c}: empty line"),
        })?;
        if idx.len() != m {
            return Err(VemError::Parse {
                line: ln,
                msg: format!("cell {c}: declares {m} vertices but lists {}", idx.len()),
            });
        }
        if let Some(&bad) = idx.iter().find(|&&v| v >= nv) {
            return Err(VemError::Parse {
                line: ln,
                msg: format!("cell {c}: vertex index {bad} out of range (0..{nv})"),
            });
        }
        cells.push(idx.to_vec());
    }
    if let Some((ln, extra)) = lines.next_content() {
        return Err(VemError::Parse {
            line: ln,
            msg: format!("trailing content `{extra}`"),
        });
    }
    PolyMesh::new(vertices, cells)
}
