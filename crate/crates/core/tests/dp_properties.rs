mod common;

use std::f64::consts::FRAC_1_SQRT_2;
use std::sync::OnceLock;

use bellman_sq::boundary::{eta_f0, theta_f0, NormalizedPoint};
use bellman_sq::dp::{
    extract_witness, f0_convergence, refinement_gap, solve_eta_levels, solve_theta_levels,
    BellmanGrid, GridSpec, INFEASIBLE,
};
use bellman_sq::special::sharp_constant;

fn spec(steps: usize) -> GridSpec {
    GridSpec {
        tau_max: 1.0,
        tau_steps: steps,
        axis_steps: steps,
        split_candidates: steps,
        refine: false,
    }
}

fn theta_levels() -> &'static [BellmanGrid] {
    static LEVELS: OnceLock<Vec<BellmanGrid>> = OnceLock::new();
    LEVELS.get_or_init(|| solve_theta_levels(spec(24), 5).unwrap())
}

fn eta_levels() -> &'static [BellmanGrid] {
    static LEVELS: OnceLock<Vec<BellmanGrid>> = OnceLock::new();
    LEVELS.get_or_init(|| solve_eta_levels(spec(24), 5).unwrap())
}

fn each_node(grid: &BellmanGrid, mut f: impl FnMut(usize, usize)) {
    for i in 0..=grid.spec().tau_steps {
        for j in 0..=grid.spec().axis_steps {
            f(i, j);
        }
    }
}

#[test]
fn theta_is_nondecreasing_in_depth() {
    for pair in theta_levels().windows(2) {
        each_node(&pair[1], |i, j| {
            assert!(pair[1].value(i, j) >= pair[0].value(i, j) - 1e-12, "({i}, {j})");
        });
    }
}

#[test]
fn eta_is_nonincreasing_in_depth() {
    for pair in eta_levels().windows(2) {
        each_node(&pair[1], |i, j| {
            assert!(pair[1].value(i, j) <= pair[0].value(i, j) + 1e-12, "({i}, {j})");
        });
    }
}

#[test]
fn values_stay_in_range() {
    for grid in theta_levels() {
        each_node(grid, |i, j| {
            let v = grid.value(i, j);
            assert!((0.0..=1.0).contains(&v));
        });
    }
    for grid in eta_levels() {
        each_node(grid, |i, j| {
            assert!(grid.value(i, j) >= grid.spec().tau(i) - 1e-12);
        });
    }
}

#[test]
fn obstacle_consistency() {
    for grid in &theta_levels()[1..] {
        for i in 0..=grid.spec().tau_steps {
            assert_eq!(grid.value(i, grid.spec().axis_steps), 1.0);
        }
    }
    for grid in &eta_levels()[1..] {
        for i in 0..=grid.spec().tau_steps {
            let tau = grid.spec().tau(i);
            assert!(grid.value(i, grid.spec().axis_steps) <= tau.max(1.0) + 1e-12);
            assert_eq!(grid.value(i, 0), tau);
        }
    }
}

#[test]
fn queries_are_even_in_tau() {
    let theta = &theta_levels()[4];
    let eta = &eta_levels()[4];
    for k in 0..40 {
        let tau = k as f64 * 0.0237;
        let axis = 0.1 + k as f64 * 0.0213;
        assert_eq!(theta.value_at(tau, axis), theta.value_at(-tau, axis));
        assert_eq!(eta.value_at(tau, axis), eta.value_at(-tau, axis));
    }
}

#[test]
fn sandwich_at_zero_mean() {
    let coarse = solve_theta_levels(spec(16), 4).unwrap();
    let fine = solve_theta_levels(spec(16).refined(), 4).unwrap();
    let eps = refinement_gap(&coarse[4], &fine[4], true);
    for row in f0_convergence(&coarse) {
        assert!(row.value <= theta_f0(row.point) + eps + 1e-12, "{row:?}");
    }
    let coarse = solve_eta_levels(spec(16), 4).unwrap();
    let fine = solve_eta_levels(spec(16).refined(), 4).unwrap();
    let eps = refinement_gap(&coarse[4], &fine[4], true);
    for row in f0_convergence(&coarse) {
        assert!(row.value >= eta_f0(row.point).unwrap() - eps - 1e-12, "{row:?}");
    }
}

#[test]
fn depth_two_matches_brute_force() {
    let h = FRAC_1_SQRT_2 / 50.0;
    let levels = solve_theta_levels(spec(32), 2).unwrap();
    let grid = &levels[2];
    let cell = 1.0 / 32.0;
    for j in 0..=32 {
        let gamma = j as f64 * cell;
        let near_break = [0.5, FRAC_1_SQRT_2]
            .iter()
            .any(|b| gamma < *b + cell && gamma > *b - cell);
        if near_break {
            continue;
        }
        let want = common::depth_two_theta(gamma, h);
        assert_eq!(grid.value(0, j), want, "gamma={gamma}");
    }
    let levels = solve_eta_levels(spec(32), 2).unwrap();
    let got = levels[2].value(0, 32);
    let want = common::depth_two_eta(1.0, h);
    assert!((want - FRAC_1_SQRT_2).abs() < 1e-12);
    assert!((got - want).abs() <= 2.0 * cell, "{got} vs {want}");
    // The lattice misses the amplitude 1 by less than one spacing.
    let want = common::depth_two_eta(0.5, h);
    assert!((levels[2].value(0, 16) - want).abs() <= h, "{want}");
}

#[test]
fn theta_witnesses_are_admissible() {
    let levels = theta_levels();
    let cell = 1.0 / 24.0;
    for &(tau, gamma) in &[(0.0, 0.5), (0.0, 0.75), (0.25, 0.5), (-0.25, 0.5), (0.5, 0.9)] {
        let w = extract_witness(levels, NormalizedPoint::theta_side(tau, gamma).unwrap()).unwrap();
        assert!((w.measured_f - tau).abs() <= cell, "f at ({tau}, {gamma})");
        assert!(w.measured_big_f <= gamma + cell, "F at ({tau}, {gamma})");
        let dp = levels[5].value_at(tau, gamma);
        assert!(w.measured_p >= dp - 2.0 * cell, "p at ({tau}, {gamma}): {} vs {dp}", w.measured_p);
        if tau == 0.0 {
            assert!(w.ratio.unwrap() <= sharp_constant());
        }
    }
}

#[test]
fn eta_witnesses_are_admissible() {
    let levels = eta_levels();
    let cell = 1.0 / 24.0;
    for &(tau, j) in &[(0.0, 24), (0.0, 12), (0.5, 18), (-0.5, 18)] {
        let p = j as f64 / 24.0;
        let dp = levels[5].value((f64::abs(tau) * 24.0).round() as usize, j);
        assert!(dp < INFEASIBLE);
        let w = extract_witness(levels, NormalizedPoint::eta_side(tau, p).unwrap()).unwrap();
        assert!((w.measured_f - tau).abs() <= cell);
        assert!(w.measured_p >= p - 1e-12, "p at ({tau}, {p})");
        assert!((w.measured_big_f - dp).abs() <= 2.0 * cell, "F at ({tau}, {p})");
    }
}

#[test]
fn deterministic_across_runs() {
    let a = solve_theta_levels(spec(12), 3).unwrap();
    let b = solve_theta_levels(spec(12), 3).unwrap();
    for (x, y) in a.iter().zip(&b) {
        each_node(x, |i, j| assert_eq!(x.value(i, j).to_bits(), y.value(i, j).to_bits()));
    }
}
