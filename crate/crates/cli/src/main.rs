mod output;
mod suite;

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{ArgGroup, Args, Parser, Subcommand};
use hyperiso_core::comparison::winding_integral_w;
use hyperiso_core::competitors::competitor_sweep;
use hyperiso_core::curvature_ode::{
    reconstruct_curve, solve_bvp_a_zero, solve_linear_bvp, solve_riccati, DEFAULT_THETA_START,
};
use hyperiso_core::profile::verify_ball_minimality;
use hyperiso_core::{Check, DensitySpec, Eta, Profile};

use output::{emit, num};
use suite::Suite;

const INPUT_ERROR: u8 = 2;
const VERIFICATION_FAILURE: u8 = 1;

/// Weighted isoperimetric profiles on the hyperbolic disc.
#[derive(Parser)]
#[command(name = "hyperiso", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate `v, r, I(v)` for centred balls.
    Profile(ProfileArgs),
    /// Run verification suites and print a JSON report.
    Verify(VerifyArgs),
    /// Dump a solution of the boundary ODE.
    Ode(OdeArgs),
    /// Compare random symmetric competitors with the centred ball.
    Compete(CompeteArgs),
}

#[derive(Args)]
struct DensityArg {
    /// JSON file with `lambda_nodes` and optional `log_scale`.
    #[arg(long)]
    density: PathBuf,
}

impl DensityArg {
    fn load(&self) -> Result<DensitySpec> {
        let text = fs::read_to_string(&self.density)
            .with_context(|| format!("reading {}", self.density.display()))?;
        DensitySpec::from_json(&text).with_context(|| format!("parsing {}", self.density.display()))
    }
}

#[derive(Args)]
struct ProfileArgs {
    #[command(flatten)]
    density: DensityArg,
    #[arg(long)]
    vmin: f64,
    #[arg(long)]
    vmax: f64,
    /// Number of volumes, endpoints included.
    #[arg(long)]
    steps: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    density: DensityArg,
    #[arg(long, requires = "b")]
    a: Option<f64>,
    #[arg(long, requires = "a")]
    b: Option<f64>,
    #[arg(long, value_enum, default_value = "all")]
    suite: Suite,
    /// Seed for the randomized profile checks.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
#[command(group(ArgGroup::new("problem").required(true).args(["eta", "riccati", "from_zero"])))]
struct OdeArgs {
    #[command(flatten)]
    density: DensityArg,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    b: f64,
    /// Boundary signature such as `1,-1`.
    #[arg(long, allow_hyphen_values = true)]
    eta: Option<Eta>,
    /// Solve the Riccati form `w = 1/u` of the `(1,1)` problem.
    #[arg(long)]
    riccati: bool,
    /// The problem `u(0) = 0`, `u(b) = 1`.
    #[arg(long)]
    from_zero: bool,
    #[arg(long, default_value_t = 101)]
    samples: usize,
    /// Append the turning of the boundary curve as a comment line.
    #[arg(long)]
    winding: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CompeteArgs {
    #[command(flatten)]
    density: DensityArg,
    #[arg(long)]
    volume: f64,
    #[arg(long)]
    trials: usize,
    #[arg(long)]
    max_annuli: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Profile(args) => cmd_profile(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Ode(args) => cmd_ode(args),
        Command::Compete(args) => cmd_compete(args),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(INPUT_ERROR)
        }
    }
}

fn cmd_profile(args: &ProfileArgs) -> Result<ExitCode> {
    let d = args.density.load()?;
    if args.steps < 2 {
        bail!("--steps must be at least 2");
    }
    if !(args.vmin.is_finite()
        && args.vmax.is_finite()
        && 0.0 <= args.vmin
        && args.vmin < args.vmax)
    {
        bail!("need 0 <= vmin < vmax");
    }
    let p = Profile::new(d)?;
    let mut csv = String::from("v,r,I\n");
    for k in 0..args.steps {
        let v = args.vmin + (args.vmax - args.vmin) * k as f64 / (args.steps - 1) as f64;
        let r = p.ball_radius_for_volume(v)?;
        writeln!(csv, "{},{},{}", num(v), num(r), num(p.profile_i(v)?))?;
    }
    emit(&csv, args.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: &VerifyArgs) -> Result<ExitCode> {
    let d = args.density.load()?;
    let intervals = match (args.a, args.b) {
        (Some(a), Some(b)) => {
            if !(0.0 <= a && a < b && b < 1.0) {
                bail!("need 0 <= a < b < 1");
            }
            vec![(a, b)]
        }
        _ => suite::default_lattice(),
    };
    let report = suite::run(&d, &intervals, args.suite, args.seed);
    emit(&(report.to_json() + "\n"), args.out.as_deref())?;
    Ok(exit_for(report.all_passed()))
}

fn exit_for(passed: bool) -> ExitCode {
    if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(VERIFICATION_FAILURE)
    }
}

fn cmd_ode(args: &OdeArgs) -> Result<ExitCode> {
    let d = args.density.load()?;
    if args.samples < 2 {
        bail!("--samples must be at least 2");
    }
    let a = args.a.unwrap_or(0.0);
    let b = args.b;
    if args.from_zero && a != 0.0 {
        bail!("--from-zero solves on [0, b]; drop --a or set it to 0");
    }
    if !args.from_zero && a == 0.0 {
        bail!("a = 0 supports only --from-zero");
    }
    let taus: Vec<f64> = (0..args.samples)
        .map(|k| {
            if k + 1 == args.samples {
                b
            } else {
                a + (b - a) * k as f64 / (args.samples - 1) as f64
            }
        })
        .collect();
    let mut csv = String::new();
    let winding = if args.riccati {
        let ric = solve_riccati(&d, a, b)?;
        writeln!(
            csv,
            "# a={} b={} riccati lambda={}",
            num(a),
            num(b),
            num(ric.multiplier())
        )?;
        csv.push_str("tau,w\n");
        for &t in &taus {
            writeln!(csv, "{},{}", num(t), num(ric.w(t)?))?;
        }
        args.winding.then(|| winding_integral_w(&ric))
    } else {
        let (sol, label) = match args.eta {
            Some(eta) => (solve_linear_bvp(&d, a, b, eta)?, eta.to_string()),
            None => (solve_bvp_a_zero(&d, b)?, "(0,1)".to_string()),
        };
        writeln!(
            csv,
            "# a={} b={} eta={} lambda={}",
            num(a),
            num(b),
            label,
            num(sol.multiplier())
        )?;
        csv.push_str("tau,u\n");
        for &t in &taus {
            writeln!(csv, "{},{}", num(t), num(sol.u(t)?))?;
        }
        args.winding
            .then(|| reconstruct_curve(&sol, DEFAULT_THETA_START).map(|c| c.winding))
    };
    match winding {
        Some(Ok(w)) => writeln!(csv, "# winding={}", num(w))?,
        Some(Err(e)) => writeln!(csv, "# winding=undefined ({e})")?,
        None => {}
    }
    emit(&csv, args.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_compete(args: &CompeteArgs) -> Result<ExitCode> {
    let d = args.density.load()?;
    if args.trials == 0 {
        bail!("--trials must be at least 1");
    }
    if args.max_annuli == 0 {
        bail!("--max-annuli must be at least 1");
    }
    if !(args.tol.is_finite() && args.tol >= 0.0) {
        bail!("--tol must be finite and non-negative");
    }
    let p = Profile::new(d)?;
    if !(args.volume.is_finite() && args.volume > 0.0 && args.volume < p.max_volume()) {
        bail!("--volume must lie in (0, {})", num(p.max_volume()));
    }
    let competitors = competitor_sweep(&p, args.volume, args.trials, args.max_annuli, args.seed)?;
    let mut report = verify_ball_minimality(&p, args.volume, &competitors, args.tol)?;
    let control = report.checks[0].clone();
    let min_slack = report.checks[1..]
        .iter()
        .map(|c| c.slack)
        .fold(f64::INFINITY, f64::min);
    let tag = format!("compete[seed={},v={}]", args.seed, args.volume);
    report.push(Check::equal(
        format!("{tag}:control"),
        control.lhs,
        control.rhs,
        args.tol,
    ));
    report.push(Check::at_least(
        format!("{tag}:min-slack"),
        min_slack,
        0.0,
        args.tol,
    ));
    emit(&(report.to_json() + "\n"), args.out.as_deref())?;
    Ok(exit_for(report.all_passed()))
}
