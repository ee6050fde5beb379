use bellman_sq::boundary::lb;
use bellman_sq::dyadic::{level_statistics, DyadicIndex, HaarExpansion};
use bellman_sq::extremal::{complete_to_full_measure, dyadic_rational_witness};
use bellman_sq::special::sharp_constant;
use bellman_sq::verify::{
    certify_subsolution, certify_supersolution, CertificateKind, StepKind, TerminalKind,
};
use bellman_sq::Error;
use proptest::prelude::*;

fn expansion(depth: u32, mean: f64, amps: &[f64]) -> HaarExpansion {
    let pairs = amps
        .iter()
        .enumerate()
        .map(|(i, &d)| (DyadicIndex::from_rank(i as u64 + 1).unwrap(), d));
    HaarExpansion::from_amplitudes(depth, mean, pairs).unwrap()
}

fn linear(_f: f64, big_f: f64, lambda: f64) -> f64 {
    if lambda <= 0.0 {
        1.0
    } else {
        (sharp_constant() * big_f / lambda.sqrt()).min(1.0)
    }
}

fn lb_or_nan(f: f64, lambda: f64) -> f64 {
    lb(f, lambda).unwrap_or(f64::NAN)
}

#[test]
fn trivial_supersolution_holds() {
    let e = expansion(3, 0.0, &[0.5, -0.2, 0.9, 0.1, 0.3, -0.7, 0.4]);
    let c = certify_supersolution(|_, _, _| 1.0, &e, 1.0).unwrap();
    assert_eq!(c.kind, CertificateKind::Supersolution);
    assert!(c.holds(0.0));
    assert_eq!(c.measured, level_statistics(&e, 1.0).level_measure);
}

#[test]
fn single_jump_is_an_obstacle_block() {
    let e = expansion(1, 0.0, &[1.0]);
    let c = certify_supersolution(linear, &e, 1.0).unwrap();
    assert_eq!(c.nodes.len(), 1);
    assert_eq!(c.nodes[0].kind, StepKind::Obstacle);
    assert_eq!(c.measured, 1.0);
    assert_eq!(c.final_rhs, 1.0);
    assert!(c.holds(1e-12));
}

#[test]
fn lb_certifies_full_measure_witnesses() {
    let floor = 1.0 / sharp_constant();
    for n in 1..=6u32 {
        let w = dyadic_rational_witness(0.0, 1.0, 1 << n, n).unwrap();
        let c = certify_subsolution(lb_or_nan, &w.expansion, 1.0).unwrap();
        assert_eq!(c.kind, CertificateKind::Subsolution);
        assert!(c.holds(1e-12), "n={n}: {c:?}");
        assert!(c.measured >= floor - 1e-9);
        assert!((c.final_lhs - floor).abs() < 1e-15);
        assert!(c.repeated_subtrees > 0 || n == 1);
    }
}

#[test]
fn subsolution_requires_full_measure() {
    let w = dyadic_rational_witness(0.0, 1.0, 1, 2).unwrap();
    let err = certify_subsolution(lb_or_nan, &w.expansion, 1.0).unwrap_err();
    assert!(matches!(err, Error::NotFullMeasure { .. }));
}

#[test]
fn outside_terminals_cover_the_complement() {
    let e = expansion(2, 0.0, &[0.5, 0.9, 0.1]);
    let c = certify_supersolution(|_, _, _| 1.0, &e, 1.0).unwrap();
    let outside: f64 = c
        .terminals
        .iter()
        .filter(|t| t.kind == TerminalKind::OutsideE)
        .map(|t| t.measure)
        .sum();
    let hit: f64 = c
        .terminals
        .iter()
        .filter(|t| t.kind == TerminalKind::ObstacleHit)
        .map(|t| t.measure)
        .sum();
    assert_eq!(outside + hit, 1.0);
    assert_eq!(hit, c.measured);
}

fn arb_case() -> impl Strategy<Value = (u32, Vec<f64>, f64)> {
    (1u32..=7).prop_flat_map(|depth| {
        (
            Just(depth),
            prop::collection::vec(-1.2..1.2f64, (1usize << depth) - 1),
            0.1..3.0f64,
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn rhs_dominates_the_measured_level_set((depth, amps, lambda) in arb_case()) {
        let e = expansion(depth, 0.0, &amps);
        let c = certify_supersolution(linear, &e, lambda).unwrap();
        prop_assert!(c.final_rhs >= c.measured);
        prop_assert_eq!(c.measured, level_statistics(&e, lambda).level_measure);
    }

    #[test]
    fn certificates_are_deterministic((depth, amps, lambda) in arb_case()) {
        let e = expansion(depth, 0.0, &amps);
        let a = certify_supersolution(linear, &e, lambda).unwrap();
        let b = certify_supersolution(linear, &e, lambda).unwrap();
        prop_assert_eq!(a, b);
        let full = complete_to_full_measure(&e, lambda).unwrap();
        let a = certify_subsolution(lb_or_nan, &full, lambda).unwrap();
        let b = certify_subsolution(lb_or_nan, &full, lambda).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn lb_is_a_subsolution_on_completed_witnesses(
        (depth, amps, lambda) in arb_case(),
        mean in -1.0..1.0f64,
    ) {
        let e = expansion(depth, mean, &amps);
        let full = complete_to_full_measure(&e, lambda).unwrap();
        let c = certify_subsolution(lb_or_nan, &full, lambda).unwrap();
        prop_assert!(c.holds(1e-9), "{:?}", (c.min_slack, c.final_lhs, c.final_rhs, c.measured));
    }
}
