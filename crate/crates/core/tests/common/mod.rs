//! Independent reference computations shared by the integration tests.
//!
//! Nothing here calls into the library's numerics.

#![allow(dead_code)]

/// Nodes and weights of 5-point Gauss–Legendre on `[-1, 1]`.
const GL5: [(f64, f64); 5] = [
    (0.0, 0.568_888_888_888_888_9),
    (-0.538_469_310_105_683_1, 0.478_628_670_499_366_47),
    (0.538_469_310_105_683_1, 0.478_628_670_499_366_47),
    (-0.906_179_845_938_664, 0.236_926_885_056_189_08),
    (0.906_179_845_938_664, 0.236_926_885_056_189_08),
];

/// `∫_a^b f` by composite 5-point Gauss–Legendre on `panels` equal panels.
pub fn gauss_legendre(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for k in 0..panels {
        let mid = a + (k as f64 + 0.5) * h;
        let half = 0.5 * h;
        let panel: f64 = GL5.iter().map(|&(x, w)| w * f(mid + half * x)).sum();
        total += half * panel;
    }
    total
}

/// `∫_0^τ e^{−x²/2} dx`.
pub fn phi_oracle(tau: f64) -> f64 {
    let panels = ((tau.abs() * 64.0).ceil() as usize).max(8);
    gauss_legendre(|x| (-0.5 * x * x).exp(), 0.0, tau, panels)
}

pub fn psi_oracle(tau: f64) -> f64 {
    tau * phi_oracle(tau) + (-0.5 * tau * tau).exp()
}

/// Cell values of `mean + Σ d_I h_I`, with amplitudes listed in rank order
/// (`1` is the root, `2r` and `2r + 1` the children of `r`). The left child
/// takes `+d`.
pub fn naive_synthesize(depth: u32, mean: f64, amplitudes: &[f64]) -> Vec<f64> {
    let cells = 1usize << depth;
    (0..cells)
        .map(|x| {
            let mut v = mean;
            for level in 0..depth {
                let position = x >> (depth - level);
                let rank = (1usize << level) + position;
                let left = (x >> (depth - level - 1)) & 1 == 0;
                let d = amplitudes[rank - 1];
                v += if left { d } else { -d };
            }
            v
        })
        .collect()
}

/// `S²` on each finest cell, same layout as [`naive_synthesize`].
pub fn naive_square(depth: u32, amplitudes: &[f64]) -> Vec<f64> {
    let cells = 1usize << depth;
    (0..cells)
        .map(|x| {
            (0..depth)
                .map(|level| {
                    let rank = (1usize << level) + (x >> (depth - level));
                    amplitudes[rank - 1].powi(2)
                })
                .sum()
        })
        .collect()
}

/// Best level-set measure at `λ = 1` over depth-2 functions with mean `0` and
/// `⟨|φ|⟩ ≤ gamma`, by exhaustive search on an amplitude lattice of spacing `h`.
///
/// Amplitudes are `d₀` at the root and `d₁, d₂` at its children; cells are
/// `d₀ + d₁, d₀ − d₁, −d₀ + d₂, −d₀ − d₂`.
pub fn depth_two_theta(gamma: f64, h: f64) -> f64 {
    let steps = (1.5 / h).round() as i64;
    let mut best: f64 = 0.0;
    for i in 0..=steps {
        let d0 = i as f64 * h;
        for j in 0..=steps {
            let d1 = j as f64 * h;
            for k in 0..=steps {
                let d2 = k as f64 * h;
                let cells = [d0 + d1, d0 - d1, -d0 + d2, -d0 - d2];
                let big_f = cells.iter().map(|c| c.abs()).sum::<f64>() / 4.0;
                if big_f > gamma + 1e-12 {
                    continue;
                }
                let s = [d0 * d0 + d1 * d1, d0 * d0 + d2 * d2];
                let hit = s.iter().filter(|&&v| v >= 1.0 - 1e-12).count() as f64 / 2.0;
                best = best.max(hit);
            }
        }
    }
    best
}

/// Smallest `⟨|φ|⟩` over depth-2 mean-zero functions whose level set at `λ = 1`
/// has measure at least `p`, on the same lattice as [`depth_two_theta`].
pub fn depth_two_eta(p: f64, h: f64) -> f64 {
    let steps = (1.5 / h).round() as i64;
    let mut best = f64::INFINITY;
    for i in 0..=steps {
        let d0 = i as f64 * h;
        for j in 0..=steps {
            let d1 = j as f64 * h;
            for k in 0..=steps {
                let d2 = k as f64 * h;
                let s = [d0 * d0 + d1 * d1, d0 * d0 + d2 * d2];
                let hit = s.iter().filter(|&&v| v >= 1.0 - 1e-12).count() as f64 / 2.0;
                if hit < p {
                    continue;
                }
                let cells = [d0 + d1, d0 - d1, -d0 + d2, -d0 - d2];
                let big_f = cells.iter().map(|c| c.abs()).sum::<f64>() / 4.0;
                best = best.min(big_f);
            }
        }
    }
    best
}

/// Sign changes of `p` (ascending coefficients) over `points` equally spaced
/// samples of `(a, b]`. Exact zeros are skipped, so a simple root that lands
/// on a sample still counts once.
pub fn sign_scan_roots(coefficients: &[i64], a: f64, b: f64, points: usize) -> usize {
    let eval = |x: f64| {
        coefficients
            .iter()
            .rev()
            .fold(0.0, |acc, &c| acc * x + c as f64)
    };
    let mut count = 0;
    let mut prev = eval(a);
    for i in 1..=points {
        let x = a + (b - a) * i as f64 / points as f64;
        let v = eval(x);
        if v != 0.0 && prev != 0.0 && v.signum() != prev.signum() {
            count += 1;
        }
        if v != 0.0 {
            prev = v;
        }
    }
    count
}

/// `p·(1 + (1 − p) + … + (1 − p)^n)`.
pub fn geometric_sum(p: f64, n: usize) -> f64 {
    (0..=n).map(|k| p * (1.0 - p).powi(k as i32)).sum()
}
