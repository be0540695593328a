use std::sync::Arc;

use nalgebra::Matrix2;
use oseen_vem::analysis::compute_errors;
use oseen_vem::lps::StabilizationParams;
use oseen_vem::mesh::MeshFamily;
use oseen_vem::problems::{ExactSolution, OseenProblem};
use oseen_vem::system::{solve_problem, ConvectiveVariant};
use oseen_vem::vemspace::Discretization;
use oseen_vem::Vec2;

const MU: f64 = 1e-8;

/// u = (y², x²), p = x + y - 1 under B = (1, 1), γ = 1.
fn quadratic_oseen() -> OseenProblem {
    let u = Arc::new(|x: Vec2| Vec2::new(x.y * x.y, x.x * x.x));
    let exact = ExactSolution {
        u: u.clone(),
        grad_u: Arc::new(|x| Matrix2::new(0.0, 2.0 * x.y, 2.0 * x.x, 0.0)),
        p: Arc::new(|x| x.x + x.y - 1.0),
    };
    let load = Arc::new(|x: Vec2| {
        Vec2::new(-2.0 * MU + 2.0 * x.y + x.y * x.y + 1.0, -2.0 * MU + 2.0 * x.x + x.x * x.x + 1.0)
    });
    OseenProblem::custom(MU, 1.0, Arc::new(|_| Vec2::new(1.0, 1.0)), load, u, Some(exact))
}

fn largest_error(family: &str, params: &StabilizationParams, variant: ConvectiveVariant) -> f64 {
    let p = quadratic_oseen();
    let mesh = MeshFamily::from_name(family, 3).unwrap().generate(4).unwrap();
    let disc = Discretization::new(&mesh, 2).unwrap();
    let (sol, _) = solve_problem(&disc, &p, params, variant).unwrap();
    let e = compute_errors(&disc, &sol, &p).unwrap();
    e.measures().into_iter().fold(0.0, f64::max)
}

#[test]
fn skew_form_is_exact_without_gradient_term() {
    let params = StabilizationParams {
        c1: 0.0,
        ..StabilizationParams::default()
    };
    for family in ["squares", "distorted", "voronoi", "nonconvex"] {
        let e = largest_error(family, &params, ConvectiveVariant::Skew);
        assert!(e < 1e-9, "{family}: {e:e}");
    }
}

#[test]
fn hat_form_is_exact_on_squares() {
    let params = StabilizationParams {
        c1: 0.0,
        ..StabilizationParams::default()
    };
    let e = largest_error("squares", &params, ConvectiveVariant::Hat);
    assert!(e < 1e-9, "{e:e}");
}

// The velocity-gradient term measures fluctuations of Π∇_{k-1}, which are
// non-zero on degree-k polynomials, so the patch is not reproduced.
#[test]
fn gradient_term_perturbs_quadratic_solution() {
    let e = largest_error("squares", &StabilizationParams::default(), ConvectiveVariant::Skew);
    assert!(e > 1e-3, "{e:e}");
}
