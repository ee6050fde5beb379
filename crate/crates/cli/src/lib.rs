//! Command-line driver for `bellman-sq`.
//!
//! Exit codes: 0 on success, 1 when a verification reports a violation, 2 on
//! usage errors.

mod commands;
mod config;
mod format;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use commands::random_mean_zero_expansion;
pub use format::fmt_g;

/// Environment variable read for the thread count when `--threads` is absent.
pub const THREADS_ENV: &str = "BELLMAN_SQ_THREADS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Threads {
    Auto,
    Count(usize),
}

impl FromStr for Threads {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "auto" {
            return Ok(Threads::Auto);
        }
        match s.parse::<usize>() {
            Ok(n) if n > 0 => Ok(Threads::Count(n)),
            _ => Err(format!("expected a positive integer or `auto`, got `{s}`")),
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "bellman-sq",
    version,
    about = "Bellman functions for the weak (1,1) inequality of the dyadic square function",
    args_override_self = true
)]
struct Cli {
    /// Flat key = value file whose keys mirror flag names; explicit flags win.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Significant digits in numeric output.
    #[arg(long, global = true, default_value_t = 12, value_parser = clap::value_parser!(u32).range(1..=17))]
    precision: u32,

    /// Worker threads: a positive integer or `auto`.
    #[arg(long, global = true, value_name = "N|auto")]
    threads: Option<Threads>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the sharp constant Ψ(1) = Φ(1) + e^{-1/2}.
    Constant,
    /// Emit a boundary curve as CSV `x,value`.
    Boundary(BoundaryArgs),
    /// Run verification suites and print a report table.
    Verify(VerifyArgs),
    /// Solve the finite-depth dynamic program for θ or η.
    Dp(DpArgs),
    /// Run the Bollobás iteration from a dyadic-rational seed.
    Bollobas(BollobasArgs),
    /// Certify candidate super- or subsolutions on concrete witnesses.
    Certify(CertifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Curve {
    Mb,
    Lb,
    Theta0,
    Eta0,
    Alpha,
    Z,
}

#[derive(Args, Debug)]
struct BoundaryArgs {
    #[arg(long, value_enum)]
    curve: Curve,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    min: f64,
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    max: f64,
    /// Number of intervals; `steps + 1` points are printed.
    #[arg(long, default_value_t = 200)]
    steps: usize,
    /// Level used by `mb` and `lb`.
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    Phi,
    Alpha,
    #[value(name = "G")]
    G,
    #[value(name = "L-main")]
    LMain,
    Pieces,
    Sturm,
    Duality,
    HaarProps,
    Shape,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Suite to run; all suites when absent.
    #[arg(long, value_enum)]
    suite: Option<Suite>,
    /// Grid steps per axis for the sweeps.
    #[arg(long, default_value_t = 512, value_parser = clap::value_parser!(u64).range(2..))]
    steps: u64,
    /// Random expansions for `haar-props`.
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    /// Seed for `haar-props`.
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Theta,
    Eta,
}

#[derive(Args, Debug)]
struct DpArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    #[arg(long)]
    depth: usize,
    #[arg(long, default_value_t = 256)]
    tau_steps: usize,
    #[arg(long, default_value_t = 256)]
    axis_steps: usize,
    #[arg(long, default_value_t = 128)]
    splits: usize,
    #[arg(long, default_value_t = 1.0)]
    tau_max: f64,
    /// Polish the best split by golden-section search.
    #[arg(long)]
    refine: bool,
    /// Also write `<kind>_grid.csv` and `<kind>_convergence.csv` here.
    #[arg(long, value_name = "DIR")]
    output_dir: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BollobasArgs {
    #[arg(long, default_value_t = 1)]
    seed_k: u64,
    #[arg(long = "seed-N", default_value_t = 1)]
    seed_n: u32,
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    #[arg(long, default_value_t = 12)]
    steps: usize,
    #[arg(long, default_value_t = bellman_sq::extremal::DEFAULT_MAX_DEPTH)]
    max_depth: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Super,
    Sub,
}

#[derive(Args, Debug)]
struct CertifyArgs {
    #[arg(long, value_enum)]
    mode: Mode,
    /// `super`: random mean-zero witnesses to certify.
    #[arg(long, default_value_t = 100)]
    count: usize,
    /// `super`: depth of each witness; `sub`: largest generation `N`.
    #[arg(long, default_value_t = 8)]
    depth: u32,
    /// `super`: amplitudes are drawn from `[-amplitude, amplitude]`.
    #[arg(long, default_value_t = 0.5)]
    amplitude: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    /// `sub`: mean of the witnesses.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    f: f64,
    /// Slack tolerance.
    #[arg(long, default_value_t = 1e-12)]
    tolerance: f64,
}

/// Parses `argv` (program name first) and runs the command, writing to the
/// given streams. Returns the process exit code.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let argv: Vec<String> = argv
        .into_iter()
        .map(|a| a.into().to_string_lossy().into_owned())
        .collect();
    let argv = match config::with_config(argv) {
        Ok(a) => a,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    return EXIT_OK;
                }
                _ => EXIT_USAGE,
            };
            let _ = write!(err, "{}", e.render());
            return code;
        }
    };
    let threads = cli.threads.or_else(|| {
        std::env::var(THREADS_ENV)
            .ok()
            .and_then(|v| v.parse::<Threads>().ok())
    });
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(Threads::Count(n)) = threads {
        pool = pool.num_threads(n);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: cannot start thread pool: {e}");
            return EXIT_USAGE;
        }
    };
    let ctx = commands::Context {
        precision: cli.precision as usize,
    };
    let mut buf = Vec::new();
    let result = pool.install(|| {
        commands::dispatch(&ctx, cli.command, &mut buf).map_err(|e| e.to_string())
    });
    let _ = out.write_all(&buf);
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

/// [`run_with`] on standard output and standard error.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let mut out = stdout.lock();
    let mut err = stderr.lock();
    run_with(argv, &mut out, &mut err)
}
