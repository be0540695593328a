//! Equal-order virtual element discretization of the generalized Oseen
//! problem
//!
//! ```text
//!   -mu Lap u + (grad u) B + gamma u + grad p = f,   div u = 0,   u = g on the boundary,
//! ```
//!
//! on general polygonal meshes, stabilized by local projection terms for the
//! velocity gradient, the divergence and the pressure gradient.
//!
//! The crate is organized bottom-up:
//!
//! * [`mesh`] polygonal meshes, generators, regularity checks and the text format;
//! * [`quadrature`] Gauss rules on edges and polygons;
//! * [`polybasis`] scaled monomials and their calculus tables;
//! * [`vemspace`] degrees of freedom and the computable polynomial projectors;
//! * [`forms`] and [`lps`] element matrices;
//! * [`system`] global assembly, Dirichlet data and the sparse solve;
//! * [`problems`] manufactured test problems;
//! * [`analysis`] error measures, energy norm and convergence tables;
//! * [`verify`] runtime property suites used by the command line front-end.

pub mod analysis;
pub mod error;
pub mod forms;
pub mod lps;
pub mod mesh;
pub mod polybasis;
pub mod problems;
pub mod quadrature;
pub mod system;
pub mod vemspace;
pub mod verify;

pub use error::{Result, VemError};

/// Points and vectors in the plane.
pub type Vec2 = nalgebra::Vector2<f64>;
