//! Finite-depth Bellman recursion for the normalized functions
//!
//! ```text
//! θ(τ, γ) = M(τ, γ, 1),     η(τ, p) = L(τ, p, 1),
//! ```
//!
//! restricted to Haar expansions of depth at most `N`. Both grids cover
//! `τ ∈ [0, tau_max]` (evenness in `τ` supplies the rest) and the second axis
//! `γ ∈ [0, 1]` or `p ∈ [0, 1]`.
//!
//! One level of θ maximizes
//!
//! ```text
//! ½[θ⁽ⁿ⁻¹⁾((τ+a)/s, (γ+b)/s) + θ⁽ⁿ⁻¹⁾((τ−a)/s, (γ−b)/s)],   s = √(1 − a²),
//! ```
//!
//! over `0 ≤ a ≤ γ` and `γ ± b ≥ |τ ± a|`. The children only need `⟨|φ|⟩ ≤ F`,
//! which does not change the supremum because `M` is nondecreasing in `F`.
//! One level of η minimizes `(s/2)[η⁽ⁿ⁻¹⁾((τ+a)/s, p₊) + η⁽ⁿ⁻¹⁾((τ−a)/s, p₋)]`
//! over `0 ≤ a < 1` and `p₊ + p₋ = 2p`, with `p₊` restricted to grid nodes.
//!
//! For θ the search yields lower bounds and for η upper bounds; interpolation
//! is the one uncontrolled error, see [`refinement_gap`].

use std::collections::HashMap;

use rayon::prelude::*;

use crate::boundary::{eta_f0, theta_f0, NormalizedPoint};
use crate::dyadic::{scale_tree, HaarExpansion, Subtree};
use crate::extremal::{measure_stats, Witness};
use crate::{Error, Result};

/// Stand-in for `+∞` in η: no expansion of the given depth reaches `p`.
pub const INFEASIBLE: f64 = 1e6;

const OBSTACLE_EPS: f64 = 1e-12;
const SNAP: f64 = 1e-9;
const HIT: f64 = 1.0 + 1e-12;
const GOLDEN_ITERATIONS: usize = 40;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub tau_max: f64,
    pub tau_steps: usize,
    /// Intervals along `γ` (θ) or `p` (η).
    pub axis_steps: usize,
    /// Trial values per split parameter.
    pub split_candidates: usize,
    /// Golden-section polish of `a` around the best grid candidate.
    pub refine: bool,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            tau_max: 1.0,
            tau_steps: 256,
            axis_steps: 256,
            split_candidates: 128,
            refine: false,
        }
    }
}

impl GridSpec {
    pub fn validate(&self, kind: GridKind) -> Result<()> {
        if self.tau_steps < 2 || self.axis_steps < 2 || self.split_candidates < 2 {
            return Err(Error::domain(
                "steps",
                format!(
                    "tau_steps, axis_steps and split_candidates must be at least 2, got {}, {}, {}",
                    self.tau_steps, self.axis_steps, self.split_candidates
                ),
            ));
        }
        let limit = match kind {
            GridKind::Theta => 1.0,
            GridKind::Eta => 2.0,
        };
        if !(self.tau_max > 0.0 && self.tau_max <= limit) {
            return Err(Error::domain(
                "tau_max",
                format!("must lie in (0, {limit}] for {kind:?}, got {}", self.tau_max),
            ));
        }
        Ok(())
    }

    /// The same spec with both grid steps halved.
    pub fn refined(&self) -> GridSpec {
        GridSpec {
            tau_steps: 2 * self.tau_steps,
            axis_steps: 2 * self.axis_steps,
            ..*self
        }
    }

    pub fn tau(&self, i: usize) -> f64 {
        self.tau_max * i as f64 / self.tau_steps as f64
    }

    pub fn axis(&self, j: usize) -> f64 {
        j as f64 / self.axis_steps as f64
    }

    fn columns(&self) -> usize {
        self.axis_steps + 1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GridKind {
    Theta,
    Eta,
}

/// How the optimum at one cell was attained.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SplitRecord {
    /// No split: depth 0, `p = 0`, or nothing to gain.
    Terminal,
    /// θ: `γ ≥ 1`, one jump of size `√λ` fills the level set.
    Obstacle,
    /// η at `p = 1`: one jump of size `√λ`, cost `max(|τ|, 1)`.
    Completion,
    /// `b` is the split of `γ` for θ and `p₊` for η.
    Split { a: f64, b: f64 },
}

/// Values of θ⁽ⁿ⁾ or η⁽ⁿ⁾ on the grid nodes, with the optimal split per node.
#[derive(Clone, Debug, PartialEq)]
pub struct BellmanGrid {
    kind: GridKind,
    depth: usize,
    spec: GridSpec,
    values: Vec<f64>,
    splits: Vec<SplitRecord>,
}

fn locate(x: f64, max: f64, steps: usize) -> (usize, f64) {
    let u = (x / max * steps as f64).max(0.0);
    let r = u.round();
    let u = if (u - r).abs() < SNAP { r } else { u };
    let i = (u.floor() as usize).min(steps - 1);
    (i, u - i as f64)
}

impl BellmanGrid {
    pub fn kind(&self) -> GridKind {
        self.kind
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    /// Node value at `(τ_i, axis_j)`; [`INFEASIBLE`] marks unreachable η cells.
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.spec.columns() + j]
    }

    pub fn split(&self, i: usize, j: usize) -> SplitRecord {
        self.splits[i * self.spec.columns() + j]
    }

    /// Value at an arbitrary point, with evenness in `τ`, the known boundary
    /// values outside the grid, and bilinear interpolation inside it.
    pub fn value_at(&self, tau: f64, axis: f64) -> f64 {
        match self.kind {
            GridKind::Theta => self.theta_at(tau, axis),
            GridKind::Eta => {
                let (j, fv) = locate(axis.min(1.0), 1.0, self.spec.axis_steps);
                let lo = self.eta_node(tau, j);
                if fv == 0.0 {
                    return lo;
                }
                let hi = self.eta_node(tau, j + 1);
                if lo >= INFEASIBLE || hi >= INFEASIBLE {
                    INFEASIBLE
                } else {
                    lo + fv * (hi - lo)
                }
            }
        }
    }

    fn theta_at(&self, tau: f64, gamma: f64) -> f64 {
        if self.depth == 0 {
            return 0.0;
        }
        if gamma >= 1.0 - OBSTACLE_EPS {
            return 1.0;
        }
        let t = tau.abs();
        if t > self.spec.tau_max + SNAP {
            return 0.0;
        }
        let (i, fu) = locate(t.min(self.spec.tau_max), self.spec.tau_max, self.spec.tau_steps);
        let (j, fv) = locate(gamma, 1.0, self.spec.axis_steps);
        let v00 = self.value(i, j);
        let v01 = self.value(i, j + 1);
        let v10 = self.value(i + 1, j);
        let v11 = self.value(i + 1, j + 1);
        let low = v00 + fv * (v01 - v00);
        let high = v10 + fv * (v11 - v10);
        (low + fu * (high - low)).clamp(0.0, 1.0)
    }

    /// η on column `j`, interpolated linearly in `τ`.
    fn eta_node(&self, tau: f64, j: usize) -> f64 {
        let t = tau.abs();
        if j == 0 {
            return t;
        }
        if self.depth == 0 {
            return INFEASIBLE;
        }
        if t > self.spec.tau_max + SNAP {
            return t;
        }
        let (i, fu) = locate(t.min(self.spec.tau_max), self.spec.tau_max, self.spec.tau_steps);
        let v0 = self.value(i, j);
        if fu == 0.0 {
            return v0;
        }
        let v1 = self.value(i + 1, j);
        if v0 >= INFEASIBLE || v1 >= INFEASIBLE {
            INFEASIBLE
        } else {
            v0 + fu * (v1 - v0)
        }
    }
}

fn odd(n: usize) -> usize {
    n | 1
}

fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..GOLDEN_ITERATIONS {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Best θ split at `(τ, γ)` with `τ ≥ 0`, using the previous level for the children.
fn theta_search(prev: &BellmanGrid, spec: &GridSpec, tau: f64, gamma: f64) -> (f64, SplitRecord) {
    let gamma = gamma.max(tau);
    if gamma >= 1.0 - OBSTACLE_EPS {
        return (1.0, SplitRecord::Obstacle);
    }
    if prev.depth == 0 {
        return (0.0, SplitRecord::Terminal);
    }
    let k_count = spec.split_candidates;
    let m_count = odd(spec.split_candidates);
    let pair = |a: f64, b: f64| {
        let s = (1.0 - a * a).sqrt();
        let v = 0.5
            * (prev.theta_at((tau + a) / s, (gamma + b) / s)
                + prev.theta_at((tau - a) / s, (gamma - b) / s));
        v.clamp(0.0, 1.0)
    };
    let b_range = |a: f64| {
        let lo = tau + a - gamma;
        (lo, (gamma - (tau - a).abs()).max(lo))
    };
    let best_over_b = |a: f64| {
        let (lo, hi) = b_range(a);
        let mut best = (f64::NEG_INFINITY, lo);
        for m in 0..m_count {
            let b = if m + 1 == m_count {
                hi
            } else {
                lo + (hi - lo) * (m as f64 / (m_count - 1) as f64)
            };
            let v = pair(a, b);
            if v > best.0 {
                best = (v, b);
            }
        }
        best
    };
    let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
    for k in 0..k_count {
        let a = if k + 1 == k_count {
            gamma
        } else {
            gamma * (k as f64 / (k_count - 1) as f64)
        };
        let (v, b) = best_over_b(a);
        if v > best.0 {
            best = (v, a, b);
            if v >= 1.0 {
                break;
            }
        }
    }
    if spec.refine && best.0 < 1.0 {
        let h = gamma / (k_count - 1) as f64;
        let (a, v) = golden_max(
            |a| best_over_b(a).0,
            (best.1 - h).max(0.0),
            (best.1 + h).min(gamma),
        );
        if v > best.0 {
            best = (v, a, best_over_b(a).1);
        }
    }
    (best.0, SplitRecord::Split { a: best.1, b: best.2 })
}

fn p_offsets(j: usize, spec: &GridSpec) -> Vec<isize> {
    let w = j.min(spec.axis_steps - j) as isize;
    let m_count = odd(spec.split_candidates) as isize;
    if 2 * w < m_count {
        return (-w..=w).collect();
    }
    let mut out: Vec<isize> = (0..m_count)
        .map(|i| (-w as f64 + 2.0 * w as f64 * i as f64 / (m_count - 1) as f64).round() as isize)
        .collect();
    out.dedup();
    out
}

/// Best η split at `(τ, p_j)` with `τ ≥ 0`, using the previous level for the children.
fn eta_search(prev: &BellmanGrid, spec: &GridSpec, tau: f64, j: usize) -> (f64, SplitRecord) {
    if j == 0 {
        return (tau, SplitRecord::Terminal);
    }
    let offsets = p_offsets(j, spec);
    let k_count = spec.split_candidates;
    let best_over_p = |a: f64| {
        let s = (1.0 - a * a).sqrt();
        let mut best = (INFEASIBLE, 0usize);
        for &m in &offsets {
            let (jp, jm) = ((j as isize + m) as usize, (j as isize - m) as usize);
            let l = prev.eta_node((tau + a) / s, jp);
            let r = prev.eta_node((tau - a) / s, jm);
            if l >= INFEASIBLE || r >= INFEASIBLE {
                continue;
            }
            let v = 0.5 * s * (l + r);
            if v < best.0 {
                best = (v, jp);
            }
        }
        best
    };
    let mut best = (INFEASIBLE, SplitRecord::Terminal);
    if prev.depth > 0 {
        for k in 0..k_count {
            let a = k as f64 / k_count as f64;
            let (v, jp) = best_over_p(a);
            if v < best.0 {
                best = (v, SplitRecord::Split { a, b: spec.axis(jp) });
            }
        }
        if let (true, SplitRecord::Split { a, .. }) = (spec.refine, best.1) {
            let h = 1.0 / k_count as f64;
            let hi = (a + h).min(1.0 - h / 2.0);
            let (a_new, neg) = golden_max(|x| -best_over_p(x).0, (a - h).max(0.0), hi);
            if -neg < best.0 {
                let jp = best_over_p(a_new).1;
                best = (-neg, SplitRecord::Split { a: a_new, b: spec.axis(jp) });
            }
        }
    }
    if j == spec.axis_steps {
        let c = tau.max(1.0);
        if c < best.0 {
            best = (c, SplitRecord::Completion);
        }
    }
    best
}

fn base_grid(kind: GridKind, spec: GridSpec) -> BellmanGrid {
    let cells = (spec.tau_steps + 1) * spec.columns();
    let values = match kind {
        GridKind::Theta => vec![0.0; cells],
        GridKind::Eta => (0..cells)
            .map(|c| {
                let (i, j) = (c / spec.columns(), c % spec.columns());
                if j == 0 {
                    spec.tau(i)
                } else {
                    INFEASIBLE
                }
            })
            .collect(),
    };
    BellmanGrid {
        kind,
        depth: 0,
        spec,
        values,
        splits: vec![SplitRecord::Terminal; cells],
    }
}

fn next_level(prev: &BellmanGrid) -> BellmanGrid {
    let spec = prev.spec;
    let rows: Vec<Vec<(f64, SplitRecord)>> = (0..=spec.tau_steps)
        .into_par_iter()
        .map(|i| {
            let tau = spec.tau(i);
            (0..spec.columns())
                .map(|j| match prev.kind {
                    GridKind::Theta => theta_search(prev, &spec, tau, spec.axis(j)),
                    GridKind::Eta => eta_search(prev, &spec, tau, j),
                })
                .collect()
        })
        .collect();
    let (values, splits) = rows.into_iter().flatten().unzip();
    BellmanGrid {
        kind: prev.kind,
        depth: prev.depth + 1,
        spec,
        values,
        splits,
    }
}

fn solve_levels(kind: GridKind, spec: GridSpec, depth: usize) -> Result<Vec<BellmanGrid>> {
    spec.validate(kind)?;
    let mut levels = vec![base_grid(kind, spec)];
    for n in 1..=depth {
        let next = next_level(&levels[n - 1]);
        log::debug!("{kind:?} level {n} done");
        levels.push(next);
    }
    Ok(levels)
}

/// θ⁽⁰⁾, …, θ⁽ᴺ⁾.
pub fn solve_theta_levels(spec: GridSpec, depth: usize) -> Result<Vec<BellmanGrid>> {
    solve_levels(GridKind::Theta, spec, depth)
}

/// η⁽⁰⁾, …, η⁽ᴺ⁾.
pub fn solve_eta_levels(spec: GridSpec, depth: usize) -> Result<Vec<BellmanGrid>> {
    solve_levels(GridKind::Eta, spec, depth)
}

pub fn solve_theta(spec: GridSpec, depth: usize) -> Result<BellmanGrid> {
    Ok(solve_theta_levels(spec, depth)?.pop().expect("depth 0 is always present"))
}

pub fn solve_eta(spec: GridSpec, depth: usize) -> Result<BellmanGrid> {
    Ok(solve_eta_levels(spec, depth)?.pop().expect("depth 0 is always present"))
}

/// One row of the `f = 0` convergence table.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub depth: usize,
    /// `γ` or `p`.
    pub point: f64,
    /// `+∞` where η is infeasible.
    pub value: f64,
    /// Distance to the closed form: `θ₀(γ) − θ` or `η − η₀(p)`.
    pub gap: f64,
}

/// The `τ = 0` column of every level against its closed form.
pub fn f0_convergence(levels: &[BellmanGrid]) -> Vec<ConvergenceRow> {
    let mut rows = Vec::new();
    for grid in levels {
        for j in 0..grid.spec.columns() {
            let point = grid.spec.axis(j);
            let raw = grid.value(0, j);
            let value = if raw >= INFEASIBLE { f64::INFINITY } else { raw };
            let gap = match grid.kind {
                GridKind::Theta => theta_f0(point) - value,
                GridKind::Eta => value - eta_f0(point).expect("axis in [0, 1]"),
            };
            rows.push(ConvergenceRow {
                depth: grid.depth,
                point,
                value,
                gap,
            });
        }
    }
    rows
}

/// Largest change at the nodes of `coarse` when the grid is refined to `fine`,
/// ignoring infeasible cells. With `f0_only`, only the `τ = 0` column is compared.
pub fn refinement_gap(coarse: &BellmanGrid, fine: &BellmanGrid, f0_only: bool) -> f64 {
    let rows = if f0_only { 0..1 } else { 0..coarse.spec.tau_steps + 1 };
    let mut gap: f64 = 0.0;
    for i in rows {
        for j in 0..coarse.spec.columns() {
            let c = coarse.value(i, j);
            let f = fine.value_at(coarse.spec.tau(i), coarse.spec.axis(j));
            if c < INFEASIBLE && f < INFEASIBLE {
                gap = gap.max((c - f).abs());
            }
        }
    }
    gap
}

fn check_family(grids: &[BellmanGrid]) -> Result<(GridKind, GridSpec)> {
    let first = grids
        .first()
        .ok_or_else(|| Error::domain("grids", "need at least the depth-0 grid"))?;
    for (n, g) in grids.iter().enumerate() {
        if g.depth != n || g.kind != first.kind || g.spec != first.spec {
            return Err(Error::domain(
                "grids",
                format!("grid {n} does not continue the family (depth {}, {:?})", g.depth, g.kind),
            ));
        }
    }
    Ok((first.kind, first.spec))
}

type Memo = HashMap<(usize, u64, u64, u64), Subtree>;

fn theta_build(
    grids: &[BellmanGrid],
    n: usize,
    tau: f64,
    gamma: f64,
    sigma: f64,
    memo: &mut Memo,
) -> Subtree {
    if tau < 0.0 {
        return scale_tree(&theta_build(grids, n, -tau, gamma, sigma, memo), -1.0);
    }
    if n == 0 {
        return Subtree::Flat;
    }
    let key = (n, tau.to_bits(), gamma.to_bits(), sigma.to_bits());
    if let Some(done) = memo.get(&key) {
        return done.clone();
    }
    let spec = grids[0].spec;
    let out = match theta_search(&grids[n - 1], &spec, tau, gamma).1 {
        SplitRecord::Obstacle => Subtree::split(sigma * HIT, Subtree::Flat, Subtree::Flat),
        SplitRecord::Split { a, b } => {
            let gamma = gamma.max(tau);
            let s = (1.0 - a * a).sqrt();
            let left = theta_build(grids, n - 1, (tau + a) / s, (gamma + b) / s, sigma * s, memo);
            let right = theta_build(grids, n - 1, (tau - a) / s, (gamma - b) / s, sigma * s, memo);
            Subtree::split(sigma * a, left, right)
        }
        SplitRecord::Terminal | SplitRecord::Completion => Subtree::Flat,
    };
    memo.insert(key, out.clone());
    out
}

fn eta_build(
    grids: &[BellmanGrid],
    n: usize,
    tau: f64,
    j: usize,
    sigma: f64,
    memo: &mut Memo,
) -> Result<Subtree> {
    if tau < 0.0 {
        return Ok(scale_tree(&eta_build(grids, n, -tau, j, sigma, memo)?, -1.0));
    }
    if j == 0 {
        return Ok(Subtree::Flat);
    }
    let key = (n, tau.to_bits(), j as u64, sigma.to_bits());
    if let Some(done) = memo.get(&key) {
        return Ok(done.clone());
    }
    let spec = grids[0].spec;
    let (value, record) = if n == 0 {
        (INFEASIBLE, SplitRecord::Terminal)
    } else {
        eta_search(&grids[n - 1], &spec, tau, j)
    };
    let out = match record {
        _ if value >= INFEASIBLE => {
            return Err(Error::domain(
                "start",
                format!("p = {} is unreachable at depth {n} from tau = {tau}", spec.axis(j)),
            ))
        }
        SplitRecord::Completion => Subtree::split(sigma * HIT, Subtree::Flat, Subtree::Flat),
        SplitRecord::Split { a, b } => {
            let jp = (b * spec.axis_steps as f64).round() as usize;
            let jm = 2 * j - jp;
            let s = (1.0 - a * a).sqrt();
            let left = eta_build(grids, n - 1, (tau + a) / s, jp, sigma * s, memo)?;
            let right = eta_build(grids, n - 1, (tau - a) / s, jm, sigma * s, memo)?;
            Subtree::split(sigma * a, left, right)
        }
        SplitRecord::Terminal | SplitRecord::Obstacle => Subtree::Flat,
    };
    memo.insert(key, out.clone());
    Ok(out)
}

/// Backtracks the optimal splits from `start` into a concrete expansion of
/// depth `N = grids.len() − 1` and measures it at `λ = 1`.
///
/// Splits are recomputed at the exact child coordinates rather than read off
/// the nearest node. For η, `start.gamma_or_p` must be a grid node. A θ start
/// with `γ ≥ 1` yields the depth-1 obstacle witness.
pub fn extract_witness(grids: &[BellmanGrid], start: NormalizedPoint) -> Result<Witness> {
    let (kind, spec) = check_family(grids)?;
    let depth = grids.len() - 1;
    let NormalizedPoint {
        tau,
        gamma_or_p: axis,
    } = start;
    let outside = || Error::OutsideGrid { tau, axis };
    if !(tau.abs() <= spec.tau_max + SNAP) || !(0.0..=1.0).contains(&axis) {
        return Err(outside());
    }
    let mut memo = Memo::new();
    let expansion = match kind {
        GridKind::Theta => {
            if axis < tau.abs() {
                return Err(outside());
            }
            if axis >= 1.0 - OBSTACLE_EPS {
                HaarExpansion::from_tree(
                    1,
                    tau,
                    Subtree::split(axis.max(1.0) * HIT, Subtree::Flat, Subtree::Flat),
                )?
            } else {
                let tree = theta_build(grids, depth, tau, axis, 1.0, &mut memo);
                HaarExpansion::from_tree(depth as u32, tau, tree)?
            }
        }
        GridKind::Eta => {
            let u = axis * spec.axis_steps as f64;
            if (u - u.round()).abs() > SNAP {
                return Err(outside());
            }
            let tree = eta_build(grids, depth, tau, u.round() as usize, 1.0, &mut memo)?;
            HaarExpansion::from_tree(depth as u32, tau, tree)?
        }
    };
    measure_stats(&expansion, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn small() -> GridSpec {
        GridSpec {
            tau_max: 1.0,
            tau_steps: 16,
            axis_steps: 16,
            split_candidates: 16,
            refine: false,
        }
    }

    #[test]
    fn spec_validation() {
        assert!(GridSpec::default().validate(GridKind::Theta).is_ok());
        let wide = GridSpec {
            tau_max: 1.5,
            ..small()
        };
        assert!(wide.validate(GridKind::Theta).is_err());
        assert!(wide.validate(GridKind::Eta).is_ok());
        let coarse = GridSpec {
            tau_steps: 1,
            ..small()
        };
        assert!(coarse.validate(GridKind::Eta).is_err());
    }

    #[test]
    fn theta_depth_one_is_the_obstacle_indicator() {
        let g = solve_theta(small(), 1).unwrap();
        for i in 0..=16 {
            for j in 0..=16 {
                // Cells below the diagonal are evaluated at γ = τ.
                let expected = if j == 16 || i == 16 { 1.0 } else { 0.0 };
                assert_eq!(g.value(i, j), expected, "({i}, {j})");
            }
        }
    }

    #[test]
    fn eta_depth_one() {
        let spec = small();
        let g = solve_eta(spec, 1).unwrap();
        for i in 0..=16 {
            let tau = spec.tau(i);
            assert_eq!(g.value(i, 0), tau);
            assert_eq!(g.value(i, 16), tau.max(1.0));
            assert_eq!(g.value(i, 8), INFEASIBLE);
        }
    }

    #[test]
    fn depth_two_reaches_the_hand_construction() {
        let t = solve_theta(small(), 2).unwrap();
        assert_eq!(t.value_at(0.0, FRAC_1_SQRT_2 + 1.0 / 16.0), 1.0);
        let e = solve_eta(small(), 2).unwrap();
        assert!((e.value(0, 16) - FRAC_1_SQRT_2).abs() < 2.0 / 16.0);
        assert!((e.value(0, 8) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn evenness_and_monotonicity() {
        let levels = solve_theta_levels(small(), 3).unwrap();
        for w in levels.windows(2) {
            for (a, b) in w[0].values.iter().zip(&w[1].values) {
                assert!(b >= a);
            }
        }
        let g = &levels[3];
        assert_eq!(g.value_at(0.3, 0.6), g.value_at(-0.3, 0.6));
        let levels = solve_eta_levels(small(), 3).unwrap();
        for w in levels.windows(2) {
            for (a, b) in w[0].values.iter().zip(&w[1].values) {
                assert!(b <= a);
            }
        }
    }

    #[test]
    fn obstacle_start_gives_depth_one_witness() {
        let levels = solve_theta_levels(small(), 2).unwrap();
        let w = extract_witness(&levels, NormalizedPoint::theta_side(0.0, 1.0).unwrap()).unwrap();
        assert_eq!(w.expansion.depth(), 1);
        assert_eq!(w.measured_p, 1.0);
    }

    #[test]
    fn outside_start_rejected() {
        let levels = solve_eta_levels(small(), 2).unwrap();
        let bad = NormalizedPoint {
            tau: 0.0,
            gamma_or_p: 0.51,
        };
        assert!(matches!(
            extract_witness(&levels, bad),
            Err(Error::OutsideGrid { .. })
        ));
        assert!(extract_witness(&[], bad).is_err());
    }
}
