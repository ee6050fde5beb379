//! Finite Haar expansions on the unit dyadic tree.
//!
//! A function with finite Haar expansion is stored as its mean plus one
//! martingale-difference amplitude per dyadic interval. Sign convention: the
//! amplitude `d_I` is added on the left half of `I` and subtracted on the right
//! half,
//!
//! ```text
//! ⟨φ⟩_left(I) = ⟨φ⟩_I + d_I,    ⟨φ⟩_right(I) = ⟨φ⟩_I − d_I,
//! ```
//!
//! so the L²-normalized Haar coefficient against `h_I = (1_left − 1_right)/√|I|`
//! is `(φ, h_I) = d_I·√|I|`. Amplitudes do not change when a subtree is moved to a
//! different interval, which makes copy-planting a pure graft.
//!
//! Storage is a persistent binary tree whose subtrees are reference counted and
//! freely shared: planting the same copy into a million cells costs one node per
//! cell, not one subtree per cell. Subtrees without any nonzero amplitude are
//! collapsed into [`Subtree::Flat`].
//!
//! Dense views ([`StepFunction`], [`SquareProfile`]) exist for depths up to
//! [`MAX_DENSE_DEPTH`]; [`level_statistics`] measures arbitrarily deep sparse
//! expansions directly on the tree.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::{Error, Result};

/// Deepest level a [`DyadicIndex`] may address.
pub const MAX_LEVEL: u32 = 62;

/// Largest depth for which dense sample vectors are materialized.
pub const MAX_DENSE_DEPTH: u32 = 26;

/// A dyadic subinterval `[j·2^{-k}, (j+1)·2^{-k})` of the unit interval.
///
/// The derived ordering is the lexicographic order of the classical Haar system:
/// by level, then by position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DyadicIndex {
    level: u32,
    position: u64,
}

impl DyadicIndex {
    pub const ROOT: DyadicIndex = DyadicIndex {
        level: 0,
        position: 0,
    };

    pub fn new(level: u32, position: u64) -> Result<Self> {
        if level > MAX_LEVEL || position >= (1u64 << level) {
            return Err(Error::InvalidIndex { level, position });
        }
        Ok(DyadicIndex { level, position })
    }

    pub fn level(self) -> u32 {
        self.level
    }

    pub fn position(self) -> u64 {
        self.position
    }

    /// Rank `2^level + position` in the lexicographic Haar ordering (root = 1).
    pub fn rank(self) -> u64 {
        (1u64 << self.level) + self.position
    }

    pub fn from_rank(rank: u64) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidIndex {
                level: 0,
                position: 0,
            });
        }
        let level = 63 - rank.leading_zeros();
        DyadicIndex::new(level, rank - (1u64 << level))
    }

    pub fn left(self) -> Self {
        debug_assert!(self.level < MAX_LEVEL);
        DyadicIndex {
            level: self.level + 1,
            position: 2 * self.position,
        }
    }

    pub fn right(self) -> Self {
        debug_assert!(self.level < MAX_LEVEL);
        DyadicIndex {
            level: self.level + 1,
            position: 2 * self.position + 1,
        }
    }

    pub fn parent(self) -> Option<Self> {
        (self.level > 0).then(|| DyadicIndex {
            level: self.level - 1,
            position: self.position / 2,
        })
    }

    /// Lebesgue measure `2^{-level}` (exact).
    pub fn measure(self) -> f64 {
        dyadic_measure(self.level)
    }

    /// Whether `other` is a (non-strict) descendant of `self`.
    pub fn contains(self, other: DyadicIndex) -> bool {
        other.level >= self.level && other.position >> (other.level - self.level) == self.position
    }
}

impl fmt::Display for DyadicIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}/2^{}, {}/2^{})",
            self.position,
            self.level,
            self.position + 1,
            self.level
        )
    }
}

pub(crate) fn dyadic_measure(level: u32) -> f64 {
    debug_assert!(level <= 1000);
    f64::from_bits(((1023 - level as u64) & 0x7ff) << 52)
}

/// Shared amplitude subtree. `Flat` means every amplitude below is zero.
#[derive(Clone, Debug, Default)]
pub(crate) enum Subtree {
    #[default]
    Flat,
    Split(Arc<Node>),
}

#[derive(Debug)]
pub(crate) struct Node {
    pub(crate) amplitude: f64,
    pub(crate) left: Subtree,
    pub(crate) right: Subtree,
}

impl Subtree {
    pub(crate) fn split(amplitude: f64, left: Subtree, right: Subtree) -> Subtree {
        if amplitude == 0.0 && left.is_flat() && right.is_flat() {
            Subtree::Flat
        } else {
            Subtree::Split(Arc::new(Node {
                amplitude,
                left,
                right,
            }))
        }
    }

    pub(crate) fn is_flat(&self) -> bool {
        matches!(self, Subtree::Flat)
    }

    /// Identity of the shared node, used as a memo key. `Flat` maps to 0.
    pub(crate) fn key(&self) -> usize {
        match self {
            Subtree::Flat => 0,
            Subtree::Split(node) => Arc::as_ptr(node) as usize,
        }
    }

    /// Number of levels spanned below this node (0 for `Flat`).
    fn height(&self, memo: &mut HashMap<usize, u32>) -> u32 {
        match self {
            Subtree::Flat => 0,
            Subtree::Split(node) => {
                if let Some(&h) = memo.get(&self.key()) {
                    return h;
                }
                let h = 1 + node.left.height(memo).max(node.right.height(memo));
                memo.insert(self.key(), h);
                h
            }
        }
    }

    fn set(&self, remaining: u32, position: u64, amplitude: f64) -> Subtree {
        let (amp, left, right) = match self {
            Subtree::Flat => (0.0, Subtree::Flat, Subtree::Flat),
            Subtree::Split(node) => (node.amplitude, node.left.clone(), node.right.clone()),
        };
        if remaining == 0 {
            return Subtree::split(amplitude, left, right);
        }
        let go_right = (position >> (remaining - 1)) & 1 == 1;
        if go_right {
            Subtree::split(amp, left, right.set(remaining - 1, position, amplitude))
        } else {
            Subtree::split(amp, left.set(remaining - 1, position, amplitude), right)
        }
    }
}

impl PartialEq for Subtree {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Subtree::Flat, Subtree::Flat) => true,
            (Subtree::Split(a), Subtree::Split(b)) => {
                Arc::ptr_eq(a, b)
                    || (a.amplitude == b.amplitude && a.left == b.left && a.right == b.right)
            }
            _ => false,
        }
    }
}

/// A function on the unit interval with finite Haar expansion up to `depth`:
/// its mean plus amplitudes on all dyadic intervals of level `< depth`.
#[derive(Clone, Debug, PartialEq)]
pub struct HaarExpansion {
    depth: u32,
    mean: f64,
    tree: Subtree,
}

impl HaarExpansion {
    pub fn constant(depth: u32, mean: f64) -> Result<Self> {
        check_depth(depth)?;
        Ok(HaarExpansion {
            depth,
            mean,
            tree: Subtree::Flat,
        })
    }

    /// Builds an expansion from `(interval, amplitude)` pairs. Later pairs for
    /// the same interval overwrite earlier ones.
    pub fn from_amplitudes<I>(depth: u32, mean: f64, amplitudes: I) -> Result<Self>
    where
        I: IntoIterator<Item = (DyadicIndex, f64)>,
    {
        let mut e = HaarExpansion::constant(depth, mean)?;
        for (index, amplitude) in amplitudes {
            e = e.with_amplitude(index, amplitude)?;
        }
        Ok(e)
    }

    pub(crate) fn from_tree(depth: u32, mean: f64, tree: Subtree) -> Result<Self> {
        check_depth(depth)?;
        let height = tree.height(&mut HashMap::new());
        if height > depth {
            return Err(Error::DepthTooLarge {
                requested: height,
                max: depth,
            });
        }
        Ok(HaarExpansion { depth, mean, tree })
    }

    /// Returns a copy with the amplitude at `index` replaced.
    pub fn with_amplitude(&self, index: DyadicIndex, amplitude: f64) -> Result<Self> {
        if index.level >= self.depth {
            return Err(Error::AmplitudeBeyondDepth {
                index,
                depth: self.depth,
            });
        }
        Ok(HaarExpansion {
            depth: self.depth,
            mean: self.mean,
            tree: self.tree.set(index.level, index.position, amplitude),
        })
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// `⟨φ⟩_J`.
    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub(crate) fn tree(&self) -> &Subtree {
        &self.tree
    }

    pub fn amplitude(&self, index: DyadicIndex) -> f64 {
        let mut node = &self.tree;
        for step in (0..=index.level).rev() {
            match node {
                Subtree::Flat => return 0.0,
                Subtree::Split(n) => {
                    if step == 0 {
                        return n.amplitude;
                    }
                    node = if (index.position >> (step - 1)) & 1 == 1 {
                        &n.right
                    } else {
                        &n.left
                    };
                }
            }
        }
        unreachable!("loop returns at step 0")
    }

    /// All nonzero amplitudes in lexicographic order.
    ///
    /// Shared subtrees are expanded, so this is proportional to the number of
    /// nonzero amplitudes, not to the number of stored nodes.
    pub fn amplitudes(&self) -> Vec<(DyadicIndex, f64)> {
        let mut out = Vec::new();
        let mut frontier = vec![(DyadicIndex::ROOT, &self.tree)];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for (index, node) in frontier {
                if let Subtree::Split(n) = node {
                    if n.amplitude != 0.0 {
                        out.push((index, n.amplitude));
                    }
                    if !n.left.is_flat() {
                        next.push((index.left(), &n.left));
                    }
                    if !n.right.is_flat() {
                        next.push((index.right(), &n.right));
                    }
                }
            }
            frontier = next;
        }
        out
    }

    /// `Σ_I d_I²·|I|`, the variance of the synthesized function.
    pub fn energy(&self) -> f64 {
        fn walk(node: &Subtree, weight: f64, memo: &mut HashMap<usize, f64>) -> f64 {
            match node {
                Subtree::Flat => 0.0,
                Subtree::Split(n) => {
                    let key = node.key();
                    let unit = match memo.get(&key) {
                        Some(&v) => v,
                        None => {
                            let v = n.amplitude * n.amplitude
                                + 0.5 * walk(&n.left, 1.0, memo)
                                + 0.5 * walk(&n.right, 1.0, memo);
                            memo.insert(key, v);
                            v
                        }
                    };
                    weight * unit
                }
            }
        }
        walk(&self.tree, 1.0, &mut HashMap::new())
    }
}

fn check_depth(depth: u32) -> Result<()> {
    if depth > MAX_LEVEL {
        return Err(Error::DepthTooLarge {
            requested: depth,
            max: MAX_LEVEL,
        });
    }
    Ok(())
}

/// Values of a step function on the `2^depth` consecutive cells of level `depth`.
#[derive(Clone, Debug, PartialEq)]
pub struct StepFunction {
    depth: u32,
    samples: Vec<f64>,
}

impl StepFunction {
    pub fn new(samples: Vec<f64>) -> Result<Self> {
        let n = samples.len();
        if n == 0 || !n.is_power_of_two() {
            return Err(Error::domain(
                "samples",
                format!("length {n} is not a power of two"),
            ));
        }
        let depth = n.trailing_zeros();
        if depth > MAX_DENSE_DEPTH {
            return Err(Error::DepthTooLarge {
                requested: depth,
                max: MAX_DENSE_DEPTH,
            });
        }
        Ok(StepFunction { depth, samples })
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }
}

/// The square function `S²_J φ` sampled on the cells of level `depth`.
#[derive(Clone, Debug, PartialEq)]
pub struct SquareProfile {
    depth: u32,
    samples: Vec<f64>,
}

impl SquareProfile {
    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }
}

fn dense_len(depth: u32) -> usize {
    assert!(
        depth <= MAX_DENSE_DEPTH,
        "depth {depth} is too deep for a dense view (max {MAX_DENSE_DEPTH}); use level_statistics"
    );
    1usize << depth
}

/// Cell values of the expansion at its finest level.
///
/// # Panics
///
/// If `e.depth() > MAX_DENSE_DEPTH`.
pub fn synthesize(e: &HaarExpansion) -> StepFunction {
    fn fill(node: &Subtree, value: f64, out: &mut [f64]) {
        match node {
            Subtree::Flat => out.fill(value),
            Subtree::Split(n) => {
                let (l, r) = out.split_at_mut(out.len() / 2);
                fill(&n.left, value + n.amplitude, l);
                fill(&n.right, value - n.amplitude, r);
            }
        }
    }
    let mut samples = vec![0.0; dense_len(e.depth)];
    fill(&e.tree, e.mean, &mut samples);
    StepFunction {
        depth: e.depth,
        samples,
    }
}

/// Inverse of [`synthesize`].
pub fn analyze(s: &StepFunction) -> HaarExpansion {
    fn build(samples: &[f64]) -> (f64, Subtree) {
        if samples.len() == 1 {
            return (samples[0], Subtree::Flat);
        }
        let (l, r) = samples.split_at(samples.len() / 2);
        let (ml, tl) = build(l);
        let (mr, tr) = build(r);
        (0.5 * (ml + mr), Subtree::split(0.5 * (ml - mr), tl, tr))
    }
    let (mean, tree) = build(&s.samples);
    HaarExpansion {
        depth: s.depth,
        mean,
        tree,
    }
}

/// `S²_J φ` on the finest cells: the sum of `d_I²` over all ancestors `I`.
///
/// Squares are accumulated from the deepest ancestor upward, so the profile of a
/// concatenation is exactly `d_J² +` the profile of each half.
///
/// # Panics
///
/// If `e.depth() > MAX_DENSE_DEPTH`.
pub fn square_function(e: &HaarExpansion) -> SquareProfile {
    fn fill(node: &Subtree, out: &mut [f64]) {
        match node {
            Subtree::Flat => out.fill(0.0),
            Subtree::Split(n) => {
                let half = out.len() / 2;
                let (l, r) = out.split_at_mut(half);
                fill(&n.left, l);
                fill(&n.right, r);
                let sq = n.amplitude * n.amplitude;
                out.iter_mut().for_each(|x| *x += sq);
            }
        }
    }
    let mut samples = vec![0.0; dense_len(e.depth)];
    fill(&e.tree, &mut samples);
    SquareProfile {
        depth: e.depth,
        samples,
    }
}

/// `|{x : S²φ(x) ≥ λ}|`, normalized to the unit interval. Comparison is exact.
pub fn level_set_measure(sq: &SquareProfile, lambda: f64) -> f64 {
    assert!(lambda > 0.0, "level must be positive, got {lambda}");
    let hits = sq.samples.iter().filter(|&&s| s >= lambda).count();
    hits as f64 / sq.samples.len() as f64
}

/// `(⟨φ⟩, ⟨|φ|⟩)` of a step function.
pub fn averages(s: &StepFunction) -> (f64, f64) {
    let n = s.samples.len() as f64;
    let sum: f64 = s.samples.iter().sum();
    let abs: f64 = s.samples.iter().map(|v| v.abs()).sum();
    (sum / n, abs / n)
}

/// Places `left` on the left half and `right` on the right half of a new root.
pub fn concatenate(left: &HaarExpansion, right: &HaarExpansion) -> Result<HaarExpansion> {
    if left.depth != right.depth {
        return Err(Error::DepthMismatch {
            left: left.depth,
            right: right.depth,
        });
    }
    HaarExpansion::from_tree(
        left.depth + 1,
        0.5 * (left.mean + right.mean),
        Subtree::split(
            0.5 * (left.mean - right.mean),
            left.tree.clone(),
            right.tree.clone(),
        ),
    )
}

/// `tφ`: mean and every amplitude multiplied by `t`.
pub fn scale(e: &HaarExpansion, t: f64) -> Result<HaarExpansion> {
    if t == 0.0 || !t.is_finite() {
        return Err(Error::domain("t", format!("scale factor must be finite and nonzero, got {t}")));
    }
    Ok(HaarExpansion {
        depth: e.depth,
        mean: t * e.mean,
        tree: scale_tree(&e.tree, t),
    })
}

pub(crate) fn scale_tree(node: &Subtree, t: f64) -> Subtree {
    fn walk(node: &Subtree, t: f64, memo: &mut HashMap<usize, Subtree>) -> Subtree {
        match node {
            Subtree::Flat => Subtree::Flat,
            Subtree::Split(n) => {
                if let Some(done) = memo.get(&node.key()) {
                    return done.clone();
                }
                let out = Subtree::split(
                    t * n.amplitude,
                    walk(&n.left, t, memo),
                    walk(&n.right, t, memo),
                );
                memo.insert(node.key(), out.clone());
                out
            }
        }
    }
    walk(node, t, &mut HashMap::new())
}

/// Mean, absolute mean and level-set measure of an expansion.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LevelStatistics {
    pub mean: f64,
    pub abs_mean: f64,
    /// `|{S²φ ≥ λ}|`.
    pub level_measure: f64,
}

/// Measures an expansion of any depth directly on its tree.
///
/// The square function is accumulated from the root downward here, while
/// [`square_function`] accumulates upward; the two agree up to rounding in the
/// last bit.
pub fn level_statistics(e: &HaarExpansion, lambda: f64) -> LevelStatistics {
    assert!(lambda > 0.0, "level must be positive, got {lambda}");
    let mut cache = StatsCache::default();
    let (mean, abs_mean) = cache.averages(&e.tree, e.mean);
    let level_measure = cache.level_measure(&e.tree, 0.0, lambda);
    LevelStatistics {
        mean,
        abs_mean,
        level_measure,
    }
}

/// Memoized subtree statistics, keyed on shared-node identity.
#[derive(Default)]
pub(crate) struct StatsCache {
    averages: HashMap<(usize, u64), (f64, f64)>,
    levels: HashMap<(usize, u64, u64), f64>,
}

impl StatsCache {
    /// `(⟨φ⟩_I, ⟨|φ|⟩_I)` for the subtree rooted at `I` with `⟨φ⟩_I = value`.
    pub(crate) fn averages(&mut self, node: &Subtree, value: f64) -> (f64, f64) {
        match node {
            Subtree::Flat => (value, value.abs()),
            Subtree::Split(n) => {
                let key = (node.key(), value.to_bits());
                if let Some(&v) = self.averages.get(&key) {
                    return v;
                }
                let (ml, al) = self.averages(&n.left, value + n.amplitude);
                let (mr, ar) = self.averages(&n.right, value - n.amplitude);
                let v = (0.5 * (ml + mr), 0.5 * (al + ar));
                self.averages.insert(key, v);
                v
            }
        }
    }

    /// Relative measure of `{S² ≥ λ}` inside the subtree, where `above` is the
    /// sum of squared amplitudes of its strict ancestors.
    pub(crate) fn level_measure(&mut self, node: &Subtree, above: f64, lambda: f64) -> f64 {
        match node {
            Subtree::Flat => {
                if above >= lambda {
                    1.0
                } else {
                    0.0
                }
            }
            Subtree::Split(n) => {
                let key = (node.key(), above.to_bits(), lambda.to_bits());
                if let Some(&v) = self.levels.get(&key) {
                    return v;
                }
                let s = above + n.amplitude * n.amplitude;
                let v = 0.5
                    * (self.level_measure(&n.left, s, lambda)
                        + self.level_measure(&n.right, s, lambda));
                self.levels.insert(key, v);
                v
            }
        }
    }
}
