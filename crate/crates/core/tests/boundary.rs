mod common;

use bellman_sq::boundary::{alpha, eta_f0, lb, mb, rescale_pair, theta_f0, z, NormalizedPoint};
use bellman_sq::special::sharp_constant;
use bellman_sq::verify::{check_boundary_shapes, check_discrete_shape, Shape};
use common::{phi_oracle, psi_oracle};

#[test]
fn alpha_and_z_match_quadrature() {
    for i in 0..=120 {
        let tau = i as f64 / 100.0;
        let a = (phi_oracle(tau) / phi_oracle(1.0)).min(1.0);
        let zz = if tau >= 1.0 { tau } else { psi_oracle(tau) / psi_oracle(1.0) };
        assert!((alpha(tau) - a).abs() < 1e-12, "alpha({tau})");
        assert!((z(tau) - zz).abs() < 1e-12, "z({tau})");
    }
    assert!((alpha(0.5) - 0.560_906_425).abs() < 1e-9);
    assert!((z(0.5) - 0.767_674_749).abs() < 1e-9);
}

#[test]
fn curves_are_continuous_at_the_kink() {
    assert!((alpha(1.0 - 1e-12) - 1.0).abs() < 1e-11);
    assert!((z(1.0 - 1e-12) - 1.0).abs() < 1e-11);
    assert_eq!(alpha(1.0), 1.0);
    assert_eq!(z(1.0), 1.0);
}

#[test]
fn scaled_functions_follow_the_normalization() {
    for &(f, lambda) in &[(0.3, 1.0), (-0.3, 4.0), (2.5, 1.0), (0.0, 9.0)] {
        let root = f64::sqrt(lambda);
        assert_eq!(mb(f, lambda).unwrap(), alpha(f64::abs(f) / root));
        assert!((lb(f, lambda).unwrap() - root * z(f64::abs(f) / root)).abs() < 1e-15);
    }
    assert_eq!(lb(0.0, 1.0).unwrap(), 1.0 / sharp_constant());
    assert!(mb(0.0, 0.0).is_err());
    assert!(lb(0.0, -1.0).is_err());
}

#[test]
fn duality_on_a_fine_grid() {
    for i in 0..=1000 {
        let p = i as f64 / 1000.0;
        assert!((theta_f0(eta_f0(p).unwrap()) - p).abs() < 1e-10);
    }
    assert!(eta_f0(1.5).is_err());
}

#[test]
fn rescale_pair_is_the_child_map() {
    let (lo, hi) = rescale_pair(0.2, 0.6).unwrap();
    assert!((lo - (0.2 - 0.6) / 0.8).abs() < 1e-15);
    assert!((hi - (0.2 + 0.6) / 0.8).abs() < 1e-15);
    assert!(rescale_pair(0.0, 1.0).is_err());
}

#[test]
fn normalized_points_are_validated() {
    assert!(NormalizedPoint::theta_side(0.5, 0.4).is_err());
    assert!(NormalizedPoint::theta_side(-0.4, 0.4).is_ok());
    assert!(NormalizedPoint::eta_side(3.0, 1.1).is_err());
    assert!(NormalizedPoint::eta_side(3.0, 1.0).is_ok());
}

#[test]
fn library_shape_reports_pass() {
    for report in check_boundary_shapes() {
        assert!(report.passed, "{report}");
    }
}

#[test]
fn shapes_from_the_quadrature_oracle() {
    let n = 1000;
    let in_s: Vec<(f64, f64)> = (0..=n)
        .map(|i| {
            let tau = i as f64 / n as f64;
            (phi_oracle(tau), alpha(tau))
        })
        .collect();
    assert!(check_discrete_shape(&in_s, Shape::Concave, 1e-12).unwrap().passed);
    let in_t: Vec<(f64, f64)> = (0..=n)
        .map(|i| {
            let tau = i as f64 / n as f64;
            (tau / psi_oracle(tau), z(tau) / psi_oracle(tau))
        })
        .collect();
    assert!(check_discrete_shape(&in_t, Shape::Convex, 1e-12).unwrap().passed);
}

#[test]
fn discrete_shape_detects_violations() {
    let convex: Vec<(f64, f64)> = (0..50).map(|i| (i as f64, (i as f64).powi(2))).collect();
    assert!(check_discrete_shape(&convex, Shape::Convex, 0.0).unwrap().passed);
    assert!(!check_discrete_shape(&convex, Shape::Concave, 0.0).unwrap().passed);
    assert!(check_discrete_shape(&convex, Shape::Nondecreasing, 0.0).unwrap().passed);
    assert!(!check_discrete_shape(&convex, Shape::Nonincreasing, 0.0).unwrap().passed);
}
