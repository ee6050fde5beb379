use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{sweep, VerificationReport};
use crate::dyadic::{
    analyze, concatenate, level_set_measure, scale, square_function, synthesize, DyadicIndex,
    HaarExpansion, Subtree,
};

const AMPLITUDE_RANGE: f64 = 10.0;

fn rng_for(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

fn random_tree(rng: &mut ChaCha8Rng, levels: u32) -> Subtree {
    if levels == 0 {
        return Subtree::Flat;
    }
    let d = rng.gen_range(-AMPLITUDE_RANGE..=AMPLITUDE_RANGE);
    let left = random_tree(rng, levels - 1);
    let right = random_tree(rng, levels - 1);
    Subtree::split(d, left, right)
}

fn random_expansion(rng: &mut ChaCha8Rng, depth: u32) -> HaarExpansion {
    let mean = rng.gen_range(-AMPLITUDE_RANGE..=AMPLITUDE_RANGE);
    let tree = random_tree(rng, depth);
    HaarExpansion::from_tree(depth, mean, tree).expect("height equals depth")
}

fn all_indices(depth: u32) -> impl Iterator<Item = DyadicIndex> {
    (1u64..1 << depth).map(|r| DyadicIndex::from_rank(r).expect("rank in range"))
}

/// Randomized identities of the Haar engine over `trials` dense expansions:
/// round trip, discrete Parseval, concatenation and scaling of level sets.
pub fn check_haar_properties(trials: usize, depth: u32, seed: u64) -> Vec<VerificationReport> {
    assert!((1..=crate::dyadic::MAX_DENSE_DEPTH).contains(&depth));
    let round_trip = sweep("haar_round_trip", trials, 1e-12, |t| {
        let mut rng = rng_for(seed, t.row());
        let e = random_expansion(&mut rng, depth);
        let back = analyze(&synthesize(&e));
        let mut worst = (back.mean() - e.mean()).abs();
        for idx in all_indices(depth) {
            worst = worst.max((back.amplitude(idx) - e.amplitude(idx)).abs());
        }
        t.record(worst, &[t.row() as f64]);
    });

    let energy = sweep("haar_energy", trials, 1e-10, |t| {
        let mut rng = rng_for(seed ^ 0x9e37_79b9, t.row());
        let e = random_expansion(&mut rng, depth);
        let s = synthesize(&e);
        let n = s.samples().len() as f64;
        let mean = s.samples().iter().sum::<f64>() / n;
        let square = s.samples().iter().map(|v| v * v).sum::<f64>() / n;
        let sq_mean = square_function(&e).samples().iter().sum::<f64>() / n;
        let v = (sq_mean - (square - mean * mean))
            .abs()
            .max((sq_mean - e.energy()).abs());
        t.record(v, &[t.row() as f64]);
    });

    let concat = sweep("haar_concatenation", trials, 0.0, |t| {
        let mut rng = rng_for(seed ^ 0x7f4a_7c15, t.row());
        let a = random_expansion(&mut rng, depth - 1);
        let b = random_expansion(&mut rng, depth - 1);
        let c = concatenate(&a, &b).expect("equal depths");
        let jump = 0.25 * (a.mean() - b.mean()).powi(2);
        let (sa, sb) = (square_function(&a), square_function(&b));
        let expected = sa.samples().iter().chain(sb.samples()).map(|s| s + jump);
        let exact = square_function(&c)
            .samples()
            .iter()
            .zip(expected)
            .all(|(x, y)| *x == y);
        t.record(if exact { 0.0 } else { 1.0 }, &[t.row() as f64]);
    });

    let homogeneity = sweep("haar_homogeneity", trials, 0.0, |t| {
        let mut rng = rng_for(seed ^ 0x2545_f491, t.row());
        let e = random_expansion(&mut rng, depth);
        let k: i32 = rng.gen_range(-8..=8);
        let factor = if rng.gen_bool(0.5) { -1.0 } else { 1.0 } * 2f64.powi(k);
        let lambda = rng.gen_range(0.1..(depth as f64 * 50.0));
        let scaled = scale(&e, factor).expect("nonzero factor");
        let base = square_function(&e);
        let v = (level_set_measure(&square_function(&scaled), factor * factor * lambda)
            - level_set_measure(&base, lambda))
        .abs();
        let monotone = level_set_measure(&base, 1.5 * lambda) <= level_set_measure(&base, lambda);
        t.record(if monotone { v } else { 1.0 }, &[t.row() as f64]);
    });

    vec![round_trip, energy, concat, homogeneity]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_passes() {
        for r in check_haar_properties(20, 6, 7) {
            assert!(r.passed, "{r}");
            assert_eq!(r.points_checked, 20);
        }
    }
}
