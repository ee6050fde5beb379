//! Explicit test functions: obstacle witnesses, witnesses with a dyadic-rational
//! level-set measure, and the Bollobás iteration that plants copies of a
//! mean-zero seed into the cells where its square function is still below `λ`.

use std::collections::HashMap;

use crate::dyadic::{level_statistics, HaarExpansion, Subtree, MAX_LEVEL};
use crate::{Error, Result};

/// Amplitudes meant to reach `λ` exactly are inflated by this factor.
const HIT: f64 = 1.0 + 1e-12;

/// Default cap on the depth of Bollobás iterates.
pub const DEFAULT_MAX_DEPTH: u32 = 24;

/// An expansion together with its measured statistics at level `λ`.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub expansion: HaarExpansion,
    pub lambda: f64,
    pub measured_f: f64,
    pub measured_big_f: f64,
    /// `|{S²φ ≥ λ}|`.
    pub measured_p: f64,
    /// `√λ·p/F`, `None` when `F = 0`.
    pub ratio: Option<f64>,
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::domain(
            "lambda",
            format!("must be positive and finite, got {lambda}"),
        ));
    }
    Ok(())
}

/// Measures `e` directly on its tree.
pub fn measure_stats(e: &HaarExpansion, lambda: f64) -> Result<Witness> {
    check_lambda(lambda)?;
    let stats = level_statistics(e, lambda);
    let ratio = (stats.abs_mean > 0.0)
        .then(|| lambda.sqrt() * stats.level_measure / stats.abs_mean);
    Ok(Witness {
        expansion: e.clone(),
        lambda,
        measured_f: stats.mean,
        measured_big_f: stats.abs_mean,
        measured_p: stats.level_measure,
        ratio,
    })
}

/// `φ = f + F·h_J` at `λ = F²`: a single jump fills the whole level set.
pub fn obstacle_witness(f: f64, big_f: f64) -> Result<Witness> {
    if !(big_f >= f.abs()) || !(big_f > 0.0) || !big_f.is_finite() {
        return Err(Error::domain(
            "F",
            format!("need F >= |f| and F > 0, got f={f}, F={big_f}"),
        ));
    }
    let e = HaarExpansion::from_tree(1, f, Subtree::split(big_f * HIT, Subtree::Flat, Subtree::Flat))?;
    measure_stats(&e, big_f * big_f)
}

/// Leftmost `count` cells of a subtree spanning `levels` levels carry `amp`.
fn planted(levels: u32, count: u64, amp: f64, full: &mut HashMap<u32, Subtree>) -> Subtree {
    if count == 0 {
        return Subtree::Flat;
    }
    if levels == 0 {
        return Subtree::split(amp, Subtree::Flat, Subtree::Flat);
    }
    let half = 1u64 << (levels - 1);
    if count == 2 * half {
        if let Some(t) = full.get(&levels) {
            return t.clone();
        }
    }
    let left = planted(levels - 1, count.min(half), amp, full);
    let right = planted(levels - 1, count.saturating_sub(half), amp, full);
    let out = Subtree::split(0.0, left, right);
    if count == 2 * half {
        full.insert(levels, out.clone());
    }
    out
}

/// `φ = f + √λ·Σ h_I` over the first `k` intervals of generation `N`, so that
/// `|{S²φ ≥ λ}| = k/2^N`.
pub fn dyadic_rational_witness(f: f64, lambda: f64, k: u64, n: u32) -> Result<Witness> {
    check_lambda(lambda)?;
    if n + 1 > MAX_LEVEL {
        return Err(Error::DepthTooLarge {
            requested: n + 1,
            max: MAX_LEVEL,
        });
    }
    if k == 0 || k > 1u64 << n {
        return Err(Error::domain(
            "k",
            format!("need 1 <= k <= 2^{n}, got {k}"),
        ));
    }
    let tree = planted(n, k, lambda.sqrt() * HIT, &mut HashMap::new());
    let e = HaarExpansion::from_tree(n + 1, f, tree)?;
    measure_stats(&e, lambda)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BollobasOptions {
    /// Iterates deeper than this are not built.
    pub max_depth: u32,
}

impl Default for BollobasOptions {
    fn default() -> Self {
        BollobasOptions {
            max_depth: DEFAULT_MAX_DEPTH,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BollobasRun {
    /// The seed followed by each completed iterate.
    pub iterates: Vec<Witness>,
    /// Set when the depth cap stopped the iteration early.
    pub truncated: bool,
}

struct Grafter<'a> {
    seed: &'a Subtree,
    lambda: f64,
    memo: HashMap<(usize, u32, u64), Subtree>,
}

impl Grafter<'_> {
    /// Rebuilds `node`, whose finest cells lie `remaining` levels below, with a
    /// zero-amplitude node over two seed copies in every cell where `S² < λ`.
    fn graft(&mut self, node: &Subtree, remaining: u32, above: f64) -> Subtree {
        let key = (node.key(), remaining, above.to_bits());
        if let Some(done) = self.memo.get(&key) {
            return done.clone();
        }
        let out = match node {
            Subtree::Flat if above >= self.lambda => Subtree::Flat,
            Subtree::Flat if remaining == 0 => {
                Subtree::split(0.0, self.seed.clone(), self.seed.clone())
            }
            Subtree::Flat => {
                let child = self.graft(&Subtree::Flat, remaining - 1, above);
                Subtree::split(0.0, child.clone(), child)
            }
            Subtree::Split(n) => {
                let below = above + n.amplitude * n.amplitude;
                let left = self.graft(&n.left, remaining - 1, below);
                let right = self.graft(&n.right, remaining - 1, below);
                Subtree::split(n.amplitude, left, right)
            }
        };
        self.memo.insert(key, out.clone());
        out
    }
}

/// The Bollobás iteration: each step plants, in every finest cell with
/// `S² < λ`, a zero jump over two copies of the original seed.
///
/// Depth grows by `seed.depth() + 1` per step. If the next iterate would exceed
/// `options.max_depth` the run stops early with `truncated` set.
pub fn bollobas_iterate(
    seed: &HaarExpansion,
    lambda: f64,
    steps: usize,
    options: &BollobasOptions,
) -> Result<BollobasRun> {
    check_lambda(lambda)?;
    if steps == 0 {
        return Err(Error::domain("steps", "need at least one step"));
    }
    let first = measure_stats(seed, lambda)?;
    if first.measured_f.abs() > 1e-12 * first.measured_big_f.max(1.0) {
        return Err(Error::domain(
            "seed",
            format!("mean must be 0, got {}", first.measured_f),
        ));
    }
    if !(first.measured_p > 0.0 && first.measured_p < 1.0) {
        return Err(Error::domain(
            "seed",
            format!("level-set measure must lie in (0, 1), got {}", first.measured_p),
        ));
    }
    let mut iterates = vec![first];
    let mut truncated = false;
    for step in 1..=steps {
        let current = &iterates[step - 1].expansion;
        let depth = current.depth() + seed.depth() + 1;
        if depth > options.max_depth.min(MAX_LEVEL) {
            log::warn!(
                "stopping after {} of {steps} steps: iterate {step} needs depth {depth} (max {})",
                step - 1,
                options.max_depth
            );
            truncated = true;
            break;
        }
        let mut grafter = Grafter {
            seed: seed.tree(),
            lambda,
            memo: HashMap::new(),
        };
        let tree = grafter.graft(current.tree(), current.depth(), 0.0);
        let next = HaarExpansion::from_tree(depth, current.mean(), tree)?;
        iterates.push(measure_stats(&next, lambda)?);
    }
    Ok(BollobasRun {
        iterates,
        truncated,
    })
}

/// Adds, in every finest cell with `S² < λ`, one jump that lifts `S²` to `λ`.
/// The result has depth `e.depth() + 1` and `S² ≥ λ` everywhere.
pub fn complete_to_full_measure(e: &HaarExpansion, lambda: f64) -> Result<HaarExpansion> {
    check_lambda(lambda)?;
    fn walk(
        node: &Subtree,
        remaining: u32,
        above: f64,
        lambda: f64,
        memo: &mut HashMap<(usize, u32, u64), Subtree>,
    ) -> Subtree {
        let key = (node.key(), remaining, above.to_bits());
        if let Some(done) = memo.get(&key) {
            return done.clone();
        }
        let out = match node {
            Subtree::Flat if above >= lambda => Subtree::Flat,
            Subtree::Flat if remaining == 0 => Subtree::split(
                (lambda - above).sqrt() * HIT,
                Subtree::Flat,
                Subtree::Flat,
            ),
            Subtree::Flat => {
                let child = walk(&Subtree::Flat, remaining - 1, above, lambda, memo);
                Subtree::split(0.0, child.clone(), child)
            }
            Subtree::Split(n) => {
                let below = above + n.amplitude * n.amplitude;
                let left = walk(&n.left, remaining - 1, below, lambda, memo);
                let right = walk(&n.right, remaining - 1, below, lambda, memo);
                Subtree::split(n.amplitude, left, right)
            }
        };
        memo.insert(key, out.clone());
        out
    }
    let tree = walk(e.tree(), e.depth(), 0.0, lambda, &mut HashMap::new());
    HaarExpansion::from_tree(e.depth() + 1, e.mean(), tree)
}
