use std::error::Error as StdError;
use std::fs;
use std::io::Write;
use std::path::Path;

use bellman_sq::boundary::{alpha, eta_f0, lb, mb, theta_f0, z};
use bellman_sq::dp::{self, BellmanGrid, GridKind, GridSpec, INFEASIBLE};
use bellman_sq::dyadic::{DyadicIndex, HaarExpansion};
use bellman_sq::extremal::{bollobas_iterate, dyadic_rational_witness, BollobasOptions};
use bellman_sq::special::sharp_constant;
use bellman_sq::verify::{self, RationalPolynomial, VerificationReport};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::format::fmt_g;
use crate::{
    BollobasArgs, BoundaryArgs, CertifyArgs, Command, Curve, DpArgs, Kind, Mode, Suite,
    VerifyArgs, EXIT_OK, EXIT_VIOLATION,
};

type CmdResult = Result<i32, Box<dyn StdError>>;

pub struct Context {
    pub precision: usize,
}

impl Context {
    fn g(&self, x: f64) -> String {
        fmt_g(x, self.precision)
    }
}

pub fn dispatch(ctx: &Context, command: Command, out: &mut dyn Write) -> CmdResult {
    match command {
        Command::Constant => {
            writeln!(out, "{}", ctx.g(sharp_constant()))?;
            Ok(EXIT_OK)
        }
        Command::Boundary(a) => boundary(ctx, &a, out),
        Command::Verify(a) => verify_suites(&a, out),
        Command::Dp(a) => dp_command(ctx, &a, out),
        Command::Bollobas(a) => bollobas(ctx, &a, out),
        Command::Certify(a) => certify(ctx, &a, out),
    }
}

fn usage(msg: impl Into<String>) -> Box<dyn StdError> {
    msg.into().into()
}

fn boundary(ctx: &Context, a: &BoundaryArgs, out: &mut dyn Write) -> CmdResult {
    if a.steps == 0 || !(a.min <= a.max) || !a.min.is_finite() || !a.max.is_finite() {
        return Err(usage("need finite --min <= --max and --steps >= 1"));
    }
    if matches!(a.curve, Curve::Alpha | Curve::Z | Curve::Theta0) && a.min < 0.0 {
        return Err(usage("this curve is defined for x >= 0"));
    }
    writeln!(out, "x,value")?;
    for i in 0..=a.steps {
        let x = if i == a.steps {
            a.max
        } else {
            a.min + (a.max - a.min) * i as f64 / a.steps as f64
        };
        let v = match a.curve {
            Curve::Mb => mb(x, a.lambda)?,
            Curve::Lb => lb(x, a.lambda)?,
            Curve::Theta0 => theta_f0(x),
            Curve::Eta0 => eta_f0(x)?,
            Curve::Alpha => alpha(x),
            Curve::Z => z(x),
        };
        writeln!(out, "{},{}", ctx.g(x), ctx.g(v))?;
    }
    Ok(EXIT_OK)
}

/// `246x⁴ − 486x³ + 233x² − 12x − 8`.
pub fn quartic() -> RationalPolynomial {
    RationalPolynomial::from_integers(&[-8, -12, 233, -486, 246])
}

fn sturm_report() -> Result<VerificationReport, Box<dyn StdError>> {
    let p = quartic();
    let zero = BigRational::from_integer(BigInt::from(0));
    let one = BigRational::from_integer(BigInt::from(1));
    let roots = verify::sturm_root_count(&p, &zero, &one)?;
    let at_zero = p.evaluate(&zero);
    let negative = at_zero < zero;
    let passed = roots == 0 && negative;
    Ok(VerificationReport {
        name: "sturm_quartic".into(),
        points_checked: 1,
        max_violation: if passed { 0.0 } else { 1.0 },
        worst_point: vec![0.0],
        tolerance: 0.0,
        passed,
        note: format!("p(x) = {p}: {roots} roots in (0, 1], p(0) = {at_zero}"),
    })
}

fn suite_reports(suite: Suite, a: &VerifyArgs) -> Result<Vec<VerificationReport>, Box<dyn StdError>> {
    let n = a.steps as usize;
    Ok(match suite {
        Suite::Phi => vec![verify::check_phi_midpoint(n)],
        Suite::Alpha => vec![verify::check_supersolution_alpha(n)],
        Suite::G => vec![verify::check_g_monotone(n)],
        Suite::LMain => vec![verify::check_l_main_inequality(n)],
        Suite::Pieces => verify::check_named_subsolution_pieces(n),
        Suite::Sturm => vec![sturm_report()?],
        Suite::Duality => vec![verify::check_duality(n)],
        Suite::HaarProps => verify::check_haar_properties(a.trials, 10, a.seed),
        Suite::Shape => verify::check_boundary_shapes(),
    })
}

const ALL_SUITES: [Suite; 9] = [
    Suite::Phi,
    Suite::Alpha,
    Suite::G,
    Suite::LMain,
    Suite::Pieces,
    Suite::Sturm,
    Suite::Duality,
    Suite::HaarProps,
    Suite::Shape,
];

fn verify_suites(a: &VerifyArgs, out: &mut dyn Write) -> CmdResult {
    let suites: Vec<Suite> = match a.suite {
        Some(s) => vec![s],
        None => ALL_SUITES.to_vec(),
    };
    let mut failed = 0;
    let mut total = 0;
    for suite in suites {
        for report in suite_reports(suite, a)? {
            writeln!(out, "{report}")?;
            if report.name == "sturm_quartic" {
                writeln!(out, "    {}", report.note)?;
            }
            total += 1;
            if !report.passed {
                failed += 1;
            }
        }
    }
    writeln!(
        out,
        "{} of {total} checks passed; sweeps sample their domains and are evidence, not proof",
        total - failed
    )?;
    Ok(if failed == 0 { EXIT_OK } else { EXIT_VIOLATION })
}

fn dp_command(ctx: &Context, a: &DpArgs, out: &mut dyn Write) -> CmdResult {
    let spec = GridSpec {
        tau_max: a.tau_max,
        tau_steps: a.tau_steps,
        axis_steps: a.axis_steps,
        split_candidates: a.splits,
        refine: a.refine,
    };
    let levels = match a.kind {
        Kind::Theta => dp::solve_theta_levels(spec, a.depth)?,
        Kind::Eta => dp::solve_eta_levels(spec, a.depth)?,
    };
    let mut table = Vec::new();
    write_convergence(ctx, &levels, &mut table)?;
    out.write_all(&table)?;
    if let Some(dir) = &a.output_dir {
        fs::create_dir_all(dir)?;
        let name = match a.kind {
            Kind::Theta => "theta",
            Kind::Eta => "eta",
        };
        fs::write(dir.join(format!("{name}_convergence.csv")), &table)?;
        let last = levels.last().expect("depth 0 grid present");
        write_grid(ctx, last, &dir.join(format!("{name}_grid.csv")))?;
    }
    Ok(EXIT_OK)
}

fn write_convergence(ctx: &Context, levels: &[BellmanGrid], out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(out, "depth,point,value,gap")?;
    for row in dp::f0_convergence(levels) {
        writeln!(
            out,
            "{},{},{},{}",
            row.depth,
            ctx.g(row.point),
            ctx.g(row.value),
            ctx.g(row.gap)
        )?;
    }
    Ok(())
}

fn write_grid(ctx: &Context, grid: &BellmanGrid, path: &Path) -> std::io::Result<()> {
    let spec = grid.spec();
    let mut buf = Vec::new();
    writeln!(buf, "tau,axis,value")?;
    for i in 0..=spec.tau_steps {
        for j in 0..=spec.axis_steps {
            let v = grid.value(i, j);
            let v = if grid.kind() == GridKind::Eta && v >= INFEASIBLE {
                f64::INFINITY
            } else {
                v
            };
            writeln!(buf, "{},{},{}", ctx.g(spec.tau(i)), ctx.g(spec.axis(j)), ctx.g(v))?;
        }
    }
    fs::write(path, buf)
}

fn bollobas(ctx: &Context, a: &BollobasArgs, out: &mut dyn Write) -> CmdResult {
    let seed = dyadic_rational_witness(0.0, a.lambda, a.seed_k, a.seed_n)?;
    let options = BollobasOptions {
        max_depth: a.max_depth,
    };
    let run = bollobas_iterate(&seed.expansion, a.lambda, a.steps, &options)?;
    writeln!(out, "step,p,F,ratio,depth")?;
    for (step, w) in run.iterates.iter().enumerate() {
        writeln!(
            out,
            "{step},{},{},{},{}",
            ctx.g(w.measured_p),
            ctx.g(w.measured_big_f),
            ctx.g(w.ratio.unwrap_or(f64::NAN)),
            w.expansion.depth()
        )?;
    }
    Ok(EXIT_OK)
}

/// A depth-`depth` expansion with mean 0 and every amplitude drawn uniformly
/// from `[-amplitude, amplitude]`, from stream `case` of `seed`.
pub fn random_mean_zero_expansion(
    depth: u32,
    amplitude: f64,
    seed: u64,
    case: u64,
) -> bellman_sq::Result<HaarExpansion> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(case);
    let count = (1u64 << depth) - 1;
    let mut pairs = Vec::with_capacity(count as usize);
    for rank in 1..=count {
        let d = if amplitude > 0.0 {
            rng.gen_range(-amplitude..=amplitude)
        } else {
            0.0
        };
        pairs.push((DyadicIndex::from_rank(rank)?, d));
    }
    HaarExpansion::from_amplitudes(depth, 0.0, pairs)
}

/// `min(Ψ(1)·F/√λ, 1)`.
pub fn linear_majorant(_f: f64, big_f: f64, lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    (sharp_constant() * big_f / lambda.sqrt()).min(1.0)
}

fn certify(ctx: &Context, a: &CertifyArgs, out: &mut dyn Write) -> CmdResult {
    if !(a.lambda > 0.0) || !(a.amplitude >= 0.0) || !(a.tolerance >= 0.0) {
        return Err(usage("need --lambda > 0, --amplitude >= 0, --tolerance >= 0"));
    }
    let rows: Vec<bellman_sq::Result<(usize, bellman_sq::verify::Certificate)>> = match a.mode {
        Mode::Super => (0..a.count)
            .into_par_iter()
            .map(|case| {
                let w = random_mean_zero_expansion(a.depth, a.amplitude, a.seed, case as u64)?;
                let c = verify::certify_supersolution(linear_majorant, &w, a.lambda)?;
                Ok((case, c))
            })
            .collect(),
        Mode::Sub => (1..=a.depth)
            .into_par_iter()
            .map(|n| {
                let w = dyadic_rational_witness(a.f, a.lambda, 1u64 << n, n)?;
                let c = verify::certify_subsolution(
                    |f, lambda| lb(f, lambda).unwrap_or(f64::NAN),
                    &w.expansion,
                    a.lambda,
                )?;
                Ok((n as usize, c))
            })
            .collect(),
    };
    writeln!(out, "case,nodes,min_slack,final_lhs,final_rhs,measured,holds")?;
    let mut failed = 0;
    for row in rows {
        let (case, c) = row?;
        let holds = c.holds(a.tolerance);
        if !holds {
            failed += 1;
        }
        writeln!(
            out,
            "{case},{},{},{},{},{},{holds}",
            c.nodes.len(),
            ctx.g(c.min_slack),
            ctx.g(c.final_lhs),
            ctx.g(c.final_rhs),
            ctx.g(c.measured)
        )?;
    }
    Ok(if failed == 0 { EXIT_OK } else { EXIT_VIOLATION })
}

#[cfg(test)]
mod tests {
    use super::*;
    use bellman_sq::special::psi;

    #[test]
    fn quartic_is_negative_at_zero() {
        let zero = BigRational::from_integer(BigInt::from(0));
        assert_eq!(quartic().evaluate(&zero), BigRational::from_integer(BigInt::from(-8)));
        assert_eq!(quartic().to_string(), "246x^4 - 486x^3 + 233x^2 - 12x - 8");
    }

    #[test]
    fn random_witness_has_mean_zero_and_bounded_amplitudes() {
        let e = random_mean_zero_expansion(6, 0.5, 3, 7).unwrap();
        assert_eq!(e.mean(), 0.0);
        assert_eq!(e.depth(), 6);
        assert!(e.amplitudes().iter().all(|&(_, d)| d.abs() <= 0.5));
        assert_eq!(e, random_mean_zero_expansion(6, 0.5, 3, 7).unwrap());
        assert_ne!(e, random_mean_zero_expansion(6, 0.5, 3, 8).unwrap());
    }

    #[test]
    fn majorant_is_capped() {
        assert_eq!(linear_majorant(0.0, 10.0, 1.0), 1.0);
        assert!((linear_majorant(0.0, 0.5, 1.0) - psi(1.0).unwrap() / 2.0).abs() < 1e-15);
    }
}
