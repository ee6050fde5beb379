//! Numerical verification of the inequalities behind the boundary formulas, exact
//! Sturm root counting, and supersolution/subsolution certificates.
//!
//! Grid sweeps only sample their domains: a passing report is evidence, not a
//! proof. Every report states the largest observed violation (positive means the
//! inequality failed by that much) and where it happened.

mod certify;
mod haar;
mod shape;
mod sturm;
mod sweeps;

use std::fmt;

use rayon::prelude::*;

pub use certify::{
    certify_subsolution, certify_supersolution, Certificate, CertificateKind, NodeRecord,
    StepKind, TerminalKind, TerminalRecord,
};
pub use haar::check_haar_properties;
pub use shape::{check_boundary_shapes, check_discrete_shape, Shape};
pub use sturm::{sturm_root_count, RationalPolynomial};
pub use sweeps::{
    check_duality, check_g_monotone, check_l_main_inequality, check_named_subsolution_pieces,
    check_phi_midpoint, check_supersolution_alpha, EDGE_EPS, OPEN_EPS,
};

/// Default pass threshold for pointwise inequality sweeps.
pub const SWEEP_TOLERANCE: f64 = 1e-12;

const SAMPLING_NOTE: &str = "grid sampling: passing is necessary, not sufficient";

/// Outcome of one verification.
#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub name: String,
    pub points_checked: usize,
    /// Largest violation seen; positive means the inequality failed there.
    pub max_violation: f64,
    pub worst_point: Vec<f64>,
    pub tolerance: f64,
    pub passed: bool,
    pub note: String,
}

impl VerificationReport {
    pub(crate) fn new(
        name: impl Into<String>,
        points_checked: usize,
        max_violation: f64,
        worst_point: Vec<f64>,
        tolerance: f64,
        note: impl Into<String>,
    ) -> Self {
        VerificationReport {
            name: name.into(),
            points_checked,
            max_violation,
            worst_point,
            tolerance,
            passed: max_violation <= tolerance,
            note: note.into(),
        }
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let point: Vec<String> = self.worst_point.iter().map(|x| format!("{x:.6}")).collect();
        write!(
            f,
            "{:<28} {:>4} points={:<9} max_violation={:+.3e} tol={:.0e} at ({})",
            self.name,
            if self.passed { "PASS" } else { "FAIL" },
            self.points_checked,
            self.max_violation,
            self.tolerance,
            point.join(", ")
        )
    }
}

/// Running maximum of violations within one sweep row.
pub(crate) struct Tracker {
    row: usize,
    seen: usize,
    worst: Worst,
}

#[derive(Clone, Copy)]
struct Worst {
    violation: f64,
    order: (usize, usize),
    point: [f64; 2],
    dims: usize,
}

impl Worst {
    const NONE: Worst = Worst {
        violation: f64::NEG_INFINITY,
        order: (usize::MAX, usize::MAX),
        point: [f64::NAN; 2],
        dims: 0,
    };

    /// Larger violation wins; ties go to the earlier point, so the reduction
    /// does not depend on how rows were scheduled.
    fn pick(a: Worst, b: Worst) -> Worst {
        if a.violation > b.violation || (a.violation == b.violation && a.order <= b.order) {
            a
        } else {
            b
        }
    }
}

impl Tracker {
    fn new(row: usize) -> Self {
        Tracker {
            row,
            seen: 0,
            worst: Worst::NONE,
        }
    }

    /// Records one sample. NaN counts as an infinite violation.
    pub(crate) fn record(&mut self, violation: f64, point: &[f64]) {
        let violation = if violation.is_nan() {
            f64::INFINITY
        } else {
            violation
        };
        let mut p = [f64::NAN; 2];
        p[..point.len()].copy_from_slice(point);
        let candidate = Worst {
            violation,
            order: (self.row, self.seen),
            point: p,
            dims: point.len(),
        };
        self.seen += 1;
        self.worst = Worst::pick(self.worst, candidate);
    }
}

/// Runs `row` for every row index in parallel and reduces to one report.
pub(crate) fn sweep<F>(name: &str, rows: usize, tolerance: f64, row: F) -> VerificationReport
where
    F: Fn(&mut Tracker) + Sync,
{
    let (count, worst) = (0..rows)
        .into_par_iter()
        .map(|i| {
            let mut t = Tracker::new(i);
            row(&mut t);
            (t.seen, t.worst)
        })
        .reduce(
            || (0, Worst::NONE),
            |(ca, wa), (cb, wb)| (ca + cb, Worst::pick(wa, wb)),
        );
    let max_violation = if count == 0 {
        f64::NEG_INFINITY
    } else {
        worst.violation
    };
    VerificationReport::new(
        name,
        count,
        max_violation,
        worst.point[..worst.dims].to_vec(),
        tolerance,
        SAMPLING_NOTE,
    )
}

impl Tracker {
    pub(crate) fn row(&self) -> usize {
        self.row
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_reduction_is_order_independent() {
        // Every row produces the same maximum; the earliest row must win.
        let r = sweep("ties", 64, 0.0, |t| {
            let i = t.row() as f64;
            t.record(1.0, &[i, 0.0]);
            t.record(0.5, &[i, 1.0]);
        });
        assert_eq!(r.points_checked, 128);
        assert_eq!(r.max_violation, 1.0);
        assert_eq!(r.worst_point, vec![0.0, 0.0]);
        assert!(!r.passed);
    }

    #[test]
    fn nan_is_a_failure() {
        let r = sweep("nan", 2, 1e-12, |t| t.record(f64::NAN, &[t.row() as f64]));
        assert!(!r.passed);
        assert_eq!(r.max_violation, f64::INFINITY);
    }
}
