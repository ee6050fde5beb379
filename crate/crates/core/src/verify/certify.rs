use std::collections::HashMap;

use crate::dyadic::{level_statistics, DyadicIndex, HaarExpansion, StatsCache, Subtree};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertificateKind {
    Supersolution,
    Subsolution,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepKind {
    /// The descent continued into both children.
    Split,
    /// `λ_I ≤ d_I²`: the whole of `I` lies in the level set.
    Obstacle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TerminalKind {
    ObstacleHit,
    /// A constant block on which `S² < λ`.
    OutsideE,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NodeRecord {
    pub index: DyadicIndex,
    pub f: f64,
    pub big_f: f64,
    /// `λ_I = λ − Σ d_K²` over the strict ancestors `K` of `I`.
    pub lambda: f64,
    pub step_slack: f64,
    pub kind: StepKind,
}

/// A maximal block of finest cells on which the descent stopped.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TerminalRecord {
    pub index: DyadicIndex,
    pub kind: TerminalKind,
    pub f: f64,
    pub lambda: f64,
    pub measure: f64,
}

/// Record of one descent.
///
/// A subtree shared by several cells with identical `(f_I, λ_I)` is recorded
/// once; later visits only bump `repeated_subtrees` and reuse its totals.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub lambda: f64,
    pub nodes: Vec<NodeRecord>,
    pub terminals: Vec<TerminalRecord>,
    /// `m(f, F, λ)` or `ℓ(f, λ)` at the root.
    pub final_lhs: f64,
    /// The telescoped sum over terminal blocks.
    pub final_rhs: f64,
    /// `|E|` for a supersolution, `⟨|w|⟩` for a subsolution, measured directly.
    pub measured: f64,
    /// Smallest per-node slack, `+∞` when no node was split.
    pub min_slack: f64,
    pub repeated_subtrees: usize,
}

impl Certificate {
    pub fn slacks_hold(&self, tol: f64) -> bool {
        self.min_slack >= -tol
    }

    /// The chain of final inequalities: `m ≥ rhs ≥ |E|`, or `ℓ ≤ rhs` and `ℓ ≤ ⟨|w|⟩`.
    pub fn bound_holds(&self, tol: f64) -> bool {
        match self.kind {
            CertificateKind::Supersolution => {
                self.final_lhs >= self.final_rhs - tol && self.final_rhs >= self.measured
            }
            CertificateKind::Subsolution => {
                self.final_lhs <= self.final_rhs + tol && self.final_lhs <= self.measured + tol
            }
        }
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.slacks_hold(tol) && self.bound_holds(tol)
    }
}

enum Candidate<'a> {
    Super(&'a dyn Fn(f64, f64, f64) -> f64),
    Sub(&'a dyn Fn(f64, f64) -> f64),
}

struct Descent<'a> {
    candidate: Candidate<'a>,
    lambda: f64,
    cache: StatsCache,
    memo: HashMap<(usize, u64, u64), (f64, f64)>,
    nodes: Vec<NodeRecord>,
    terminals: Vec<TerminalRecord>,
    repeats: usize,
}

impl Descent<'_> {
    fn m(&self, f: f64, big_f: f64, lambda: f64) -> Result<f64> {
        let Candidate::Super(m) = self.candidate else {
            unreachable!("supersolution candidate")
        };
        let value = m(f, big_f, lambda);
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::CandidateOutOfRange {
                value,
                f,
                big_f,
                lambda,
            });
        }
        Ok(value)
    }

    fn l(&self, f: f64, lambda: f64) -> Result<f64> {
        let Candidate::Sub(l) = self.candidate else {
            unreachable!("subsolution candidate")
        };
        let value = l(f, lambda);
        if !(value >= 0.0) || !value.is_finite() {
            return Err(Error::domain(
                "candidate",
                format!("returned {value} at (f={f}, lambda={lambda}); expected a finite value >= 0"),
            ));
        }
        Ok(value)
    }

    /// Returns the block total relative to `|I|` and the smallest slack below `I`.
    fn visit(&mut self, index: DyadicIndex, node: &Subtree, f: f64, above: f64) -> Result<(f64, f64)> {
        let key = (node.key(), f.to_bits(), above.to_bits());
        if let Some(&done) = self.memo.get(&key) {
            self.repeats += 1;
            return Ok(done);
        }
        let lambda_i = self.lambda - above;
        let big_f = self.cache.averages(node, f).1;
        let super_kind = matches!(self.candidate, Candidate::Super(_));
        let out = match node {
            Subtree::Flat => {
                if !super_kind {
                    return Err(Error::NotFullMeasure {
                        cell: index,
                        remaining: lambda_i,
                    });
                }
                let value = self.m(f, f.abs(), lambda_i)?;
                self.terminals.push(TerminalRecord {
                    index,
                    kind: TerminalKind::OutsideE,
                    f,
                    lambda: lambda_i,
                    measure: index.measure(),
                });
                (value, f64::INFINITY)
            }
            Subtree::Split(n) => {
                let d = n.amplitude;
                let below = above + d * d;
                let (fl, fr) = (f + d, f - d);
                if below >= self.lambda {
                    let slack = if super_kind {
                        self.m(f, big_f, lambda_i)? - 1.0
                    } else {
                        0.5 * (fl.abs() + fr.abs()) - self.l(f, lambda_i)?
                    };
                    self.nodes.push(NodeRecord {
                        index,
                        f,
                        big_f,
                        lambda: lambda_i,
                        step_slack: slack,
                        kind: StepKind::Obstacle,
                    });
                    self.terminals.push(TerminalRecord {
                        index,
                        kind: TerminalKind::ObstacleHit,
                        f,
                        lambda: lambda_i,
                        measure: index.measure(),
                    });
                    (if super_kind { 1.0 } else { big_f }, slack)
                } else {
                    let child_lambda = self.lambda - below;
                    let slack = if super_kind {
                        let bl = self.cache.averages(&n.left, fl).1;
                        let br = self.cache.averages(&n.right, fr).1;
                        self.m(f, big_f, lambda_i)?
                            - 0.5 * (self.m(fl, bl, child_lambda)? + self.m(fr, br, child_lambda)?)
                    } else {
                        0.5 * (self.l(fl, child_lambda)? + self.l(fr, child_lambda)?)
                            - self.l(f, lambda_i)?
                    };
                    self.nodes.push(NodeRecord {
                        index,
                        f,
                        big_f,
                        lambda: lambda_i,
                        step_slack: slack,
                        kind: StepKind::Split,
                    });
                    let (rl, sl) = self.visit(index.left(), &n.left, fl, below)?;
                    let (rr, sr) = self.visit(index.right(), &n.right, fr, below)?;
                    (0.5 * (rl + rr), slack.min(sl).min(sr))
                }
            }
        };
        self.memo.insert(key, out);
        Ok(out)
    }
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

fn run(candidate: Candidate<'_>, w: &HaarExpansion, lambda: f64) -> Result<Certificate> {
    check_lambda(lambda)?;
    let mut descent = Descent {
        candidate,
        lambda,
        cache: StatsCache::default(),
        memo: HashMap::new(),
        nodes: Vec::new(),
        terminals: Vec::new(),
        repeats: 0,
    };
    let (rhs, min_slack) = descent.visit(DyadicIndex::ROOT, w.tree(), w.mean(), 0.0)?;
    let stats = level_statistics(w, lambda);
    let (kind, final_lhs, measured) = match descent.candidate {
        Candidate::Super(_) => (
            CertificateKind::Supersolution,
            descent.m(w.mean(), stats.abs_mean, lambda)?,
            stats.level_measure,
        ),
        Candidate::Sub(_) => (
            CertificateKind::Subsolution,
            descent.l(w.mean(), lambda)?,
            stats.abs_mean,
        ),
    };
    Ok(Certificate {
        kind,
        lambda,
        nodes: descent.nodes,
        terminals: descent.terminals,
        final_lhs,
        final_rhs: rhs,
        measured,
        min_slack,
        repeated_subtrees: descent.repeats,
    })
}

/// Runs the supersolution descent for a candidate `m(f, F, λ)` on `w`.
///
/// At each node either `λ_I ≤ d_I²` (the block lies in `E` and `m` is compared
/// with its obstacle value 1) or the main-inequality slack
/// `m(f_I, F_I, λ_I) − ½(m(f_{I−}, F_{I−}, λ_I − d_I²) + m(f_{I+}, F_{I+}, λ_I − d_I²))`
/// is recorded and the descent continues. `m` must be pure and map into `[0, 1]`.
pub fn certify_supersolution(
    m: impl Fn(f64, f64, f64) -> f64,
    w: &HaarExpansion,
    lambda: f64,
) -> Result<Certificate> {
    run(Candidate::Super(&m), w, lambda)
}

/// Runs the subsolution descent for a candidate `ℓ(f, λ)` on a `w` with
/// `S² ≥ λ` everywhere.
///
/// Where `λ_I ≤ d_I²` the children are charged `|f_{I±}|`, otherwise
/// `ℓ(f_{I±}, λ_I − d_I²)`; the slack is the children's average minus `ℓ(f_I, λ_I)`.
pub fn certify_subsolution(
    l: impl Fn(f64, f64) -> f64,
    w: &HaarExpansion,
    lambda: f64,
) -> Result<Certificate> {
    run(Candidate::Sub(&l), w, lambda)
}
