//! Command-line front end for the qubit feedback model: trajectories,
//! parameter sweeps, steady-state scans, the formula cross-validation
//! campaign and figure data, all written as CSV.

pub mod config;
pub mod figure;
pub mod sweep;
pub mod values;

use std::f64::consts::FRAC_PI_2;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use qfb_core::campaign::{self, Family, FormulaId, ValidationGrid};
use qfb_core::Method;

use config::{parse_bool, parse_usize, Config};
use sweep::{parse_axis, parse_family, Axis, Fixed, SteadySpec, SweepSpec};
use values::{parse_alpha_list, parse_number, parse_number_list, usage, Range, UsageError};

#[derive(Debug, Parser)]
#[command(name = "qfb", version, about = "Qubit under homodyne feedback: dynamics, steady states and uncertainty tightness")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Settings file of `key = value` lines; flags take precedence
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Worker threads for sweeps [default: available cores]
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    /// Log more (-v info, -vv debug)
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate the master equation and write one row per time and initial state
    Evolve(EvolveArgs),
    /// Sweep one parameter (time, lambda, beta, mu or alpha)
    Sweep(SweepArgs),
    /// Scan numeric steady states against the printed long-time limits
    Steady(SteadyArgs),
    /// Cross-validate every closed-form expression against numerics
    Verify(VerifyArgs),
    /// Write the data behind one figure to fig<N>.csv
    Figure(FigureArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FeedbackKind {
    Xy,
    Z,
}

impl From<FeedbackKind> for Family {
    fn from(k: FeedbackKind) -> Family {
        match k {
            FeedbackKind::Xy => Family::Xy,
            FeedbackKind::Z => Family::Z,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodKind {
    Rk4,
    Rk45,
}

/// Model parameters. Each accepts a value, a comma list or `start:stop:step`;
/// angles accept multiples of pi such as `pi/2`.
#[derive(Debug, Clone, Default, Args)]
pub struct ModelArgs {
    /// Feedback family [default: xy]
    #[arg(long, value_enum)]
    pub feedback: Option<FeedbackKind>,
    /// XY feedback strength [default: 1]
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    /// XY feedback angle [default: pi/2]
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<String>,
    /// Z feedback strength [default: 1]
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<String>,
    /// Initial states: angles or ground, superposition, excited [default: all three]
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct IntegratorArgs {
    /// Integrator [default: rk4]
    #[arg(long, value_enum)]
    pub method: Option<MethodKind>,
    /// RK4 step [default: 1e-3]
    #[arg(long)]
    pub dt: Option<f64>,
    /// RK45 local error tolerance [default: 1e-10]
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct EvolveArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub integrator: IntegratorArgs,
    /// Final time [default: 6]
    #[arg(long)]
    pub t_max: Option<f64>,
    /// Spacing of recorded times [default: 0.01]
    #[arg(long)]
    pub step: Option<f64>,
    /// Append the printed closed-form U and Y
    #[arg(long)]
    pub analytic: bool,
    /// Output file [default: stdout]
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub integrator: IntegratorArgs,
    /// Swept parameter [default: time]
    #[arg(long, value_enum)]
    pub axis: Option<Axis>,
    /// Axis start [default: per axis]
    #[arg(long, allow_hyphen_values = true)]
    pub start: Option<String>,
    /// Axis stop [default: per axis]
    #[arg(long, allow_hyphen_values = true)]
    pub stop: Option<String>,
    /// Axis step [default: per axis]
    #[arg(long)]
    pub step: Option<String>,
    /// Evaluation time when the axis is not time [default: 0.5]
    #[arg(long)]
    pub t: Option<f64>,
    /// Append the printed closed-form U and Y
    #[arg(long)]
    pub analytic: bool,
    /// Output file [default: stdout]
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SteadyArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Swept parameter: lambda, beta or mu [default: lambda for xy, mu for z]
    #[arg(long, value_enum)]
    pub axis: Option<Axis>,
    /// Axis start [default: per axis]
    #[arg(long, allow_hyphen_values = true)]
    pub start: Option<String>,
    /// Axis stop [default: per axis]
    #[arg(long, allow_hyphen_values = true)]
    pub stop: Option<String>,
    /// Axis step [default: per axis]
    #[arg(long)]
    pub step: Option<String>,
    /// Output file [default: stdout]
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Restrict to one family [default: both]
    #[arg(long, value_enum)]
    pub feedback: Option<FeedbackKind>,
    /// Override the grid's initial angles
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    /// Override the XY strengths
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    /// Override the XY angles
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<String>,
    /// Override the Z strengths
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<String>,
    /// Override the comparison times
    #[arg(long)]
    pub t: Option<String>,
    /// Absolute tolerance for CONFIRMED [default: 1e-6]
    #[arg(long)]
    pub tol: Option<f64>,
    /// Also write the report to this file
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    /// Figure number
    #[arg(value_parser = clap::value_parser!(u8).range(2..=10))]
    pub id: u8,
    /// Output directory [default: .]
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses the process arguments, runs, and maps errors to exit codes:
/// 2 for usage errors, 1 for everything else.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    init_logging(cli.verbose);
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn init_logging(verbose: u8) {
    let level = match verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    // Builder::new does not read the environment
    let _ = env_logger::Builder::new().filter_level(level).format_timestamp(None).try_init();
}

pub fn run(cli: Cli) -> Result<ExitCode> {
    let cfg = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    let jobs = cfg.pick(cli.jobs, "jobs", parse_usize)?;
    if jobs == Some(0) {
        return Err(usage("--jobs must be at least 1").into());
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.unwrap_or(0)).build()?;
    pool.install(|| match &cli.command {
        Command::Evolve(a) => cmd_evolve(a, &cfg),
        Command::Sweep(a) => cmd_sweep(a, &cfg),
        Command::Steady(a) => cmd_steady(a, &cfg),
        Command::Verify(a) => cmd_verify(a, &cfg),
        Command::Figure(a) => cmd_figure(a),
    })
}

fn write_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?;
            log::info!("wrote {}", path.display());
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

fn resolve_family(flag: Option<FeedbackKind>, cfg: &Config) -> Result<Family, UsageError> {
    Ok(cfg.pick(flag.map(Family::from), "feedback", parse_family)?.unwrap_or(Family::Xy))
}

fn resolve_fixed(m: &ModelArgs, cfg: &Config) -> Result<Fixed, UsageError> {
    let list = |flag: &Option<String>, key: &str, default: Vec<f64>| -> Result<Vec<f64>, UsageError> {
        Ok(cfg.pick_str(flag.as_deref(), key, parse_number_list)?.unwrap_or(default))
    };
    Ok(Fixed {
        alphas: cfg.pick_str(m.alpha.as_deref(), "alpha", parse_alpha_list)?.unwrap_or(figure::THREE_STATES.to_vec()),
        lambdas: list(&m.lambda, "lambda", vec![1.0])?,
        betas: list(&m.beta, "beta", vec![FRAC_PI_2])?,
        mus: list(&m.mu, "mu", vec![1.0])?,
    })
}

fn resolve_method(a: &IntegratorArgs, cfg: &Config) -> Result<Method, UsageError> {
    let kind = cfg.pick(a.method, "method", |s| {
        MethodKind::from_str(s.trim(), true).map_err(|_| usage(format!("unknown method {s:?}")))
    })?;
    let dt = cfg.pick(a.dt, "dt", parse_number)?;
    let tol = cfg.pick(a.tol, "tol", parse_number)?;
    let method = match kind.unwrap_or(MethodKind::Rk4) {
        MethodKind::Rk4 => Method::Rk4 { step: dt.unwrap_or(Method::DEFAULT_STEP) },
        MethodKind::Rk45 => Method::rk45(tol.unwrap_or(1e-10)),
    };
    match method {
        Method::Rk4 { step } if !(step > 0.0 && step.is_finite()) => {
            Err(usage(format!("--dt must be positive, got {step}")))
        }
        Method::Rk45 { tolerance, .. } if !(tolerance > 0.0 && tolerance.is_finite()) => {
            Err(usage(format!("--tol must be positive, got {tolerance}")))
        }
        m => Ok(m),
    }
}

/// Axis range from `--start/--stop/--step`, each falling back to the config and then the axis default.
fn resolve_range(
    axis: Axis,
    start: Option<&str>,
    stop: Option<&str>,
    step: Option<&str>,
    cfg: &Config,
) -> Result<Range, UsageError> {
    let d = axis.default_range();
    let item = if axis == Axis::Alpha { values::parse_alpha } else { parse_number };
    let r = Range {
        start: cfg.pick_str(start, "start", item)?.unwrap_or(d.start),
        stop: cfg.pick_str(stop, "stop", item)?.unwrap_or(d.stop),
        step: cfg.pick_str(step, "step", parse_number)?.unwrap_or(d.step),
    };
    r.validate()?;
    Ok(r)
}

/// A flag for the swept parameter would be silently replaced by the axis values.
fn check_axis_conflict(axis: Axis, m: &ModelArgs) -> Result<(), UsageError> {
    let given = match axis {
        Axis::Time => false,
        Axis::Lambda => m.lambda.is_some(),
        Axis::Beta => m.beta.is_some(),
        Axis::Mu => m.mu.is_some(),
        Axis::Alpha => m.alpha.is_some(),
    };
    if given {
        return Err(usage(format!(
            "--{0} conflicts with --axis {0}; set the range with --start/--stop/--step",
            axis.name()
        )));
    }
    Ok(())
}

fn cmd_evolve(a: &EvolveArgs, cfg: &Config) -> Result<ExitCode> {
    let t_max = cfg.pick(a.t_max, "t-max", parse_number)?.unwrap_or(6.0);
    let step = cfg.pick(a.step, "step", parse_number)?.unwrap_or(0.01);
    let spec = SweepSpec {
        family: resolve_family(a.model.feedback, cfg)?,
        axis: Axis::Time,
        range: Range::new(0.0, t_max, step)?,
        fixed: resolve_fixed(&a.model, cfg)?,
        t: t_max,
        method: resolve_method(&a.integrator, cfg)?,
        analytic: a.analytic || cfg.pick(None, "analytic", parse_bool)?.unwrap_or(false),
    };
    write_output(a.out.as_deref(), &spec.csv()?)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_sweep(a: &SweepArgs, cfg: &Config) -> Result<ExitCode> {
    let axis = cfg.pick(a.axis, "axis", parse_axis)?.unwrap_or(Axis::Time);
    check_axis_conflict(axis, &a.model)?;
    let spec = SweepSpec {
        family: resolve_family(a.model.feedback, cfg)?,
        axis,
        range: resolve_range(axis, a.start.as_deref(), a.stop.as_deref(), a.step.as_deref(), cfg)?,
        fixed: resolve_fixed(&a.model, cfg)?,
        t: cfg.pick(a.t, "t", parse_number)?.unwrap_or(figure::EARLY_TIME),
        method: resolve_method(&a.integrator, cfg)?,
        analytic: a.analytic || cfg.pick(None, "analytic", parse_bool)?.unwrap_or(false),
    };
    write_output(a.out.as_deref(), &spec.csv()?)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_steady(a: &SteadyArgs, cfg: &Config) -> Result<ExitCode> {
    let family = resolve_family(a.model.feedback, cfg)?;
    let default_axis = match family {
        Family::Xy => Axis::Lambda,
        Family::Z => Axis::Mu,
    };
    let axis = cfg.pick(a.axis, "axis", parse_axis)?.unwrap_or(default_axis);
    check_axis_conflict(axis, &a.model)?;
    let fixed = resolve_fixed(&a.model, cfg)?;
    let spec = SteadySpec {
        family,
        axis,
        range: resolve_range(axis, a.start.as_deref(), a.stop.as_deref(), a.step.as_deref(), cfg)?,
        lambdas: fixed.lambdas,
        betas: fixed.betas,
    };
    write_output(a.out.as_deref(), &spec.csv()?)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(a: &VerifyArgs, cfg: &Config) -> Result<ExitCode> {
    let families = match cfg.pick(a.feedback.map(Family::from), "feedback", parse_family)? {
        Some(f) => vec![f],
        None => vec![Family::Xy, Family::Z],
    };
    let tol = cfg.pick(a.tol, "tol", parse_number)?.unwrap_or(campaign::CAMPAIGN_TOL);
    if tol <= 0.0 {
        return Err(usage("--tol must be positive").into());
    }
    let alphas = cfg.pick_str(a.alpha.as_deref(), "alpha", parse_alpha_list)?;
    let times = cfg.pick_str(a.t.as_deref(), "t", parse_number_list)?;
    let lambdas = cfg.pick_str(a.lambda.as_deref(), "lambda", parse_number_list)?;
    let betas = cfg.pick_str(a.beta.as_deref(), "beta", parse_number_list)?;
    let mus = cfg.pick_str(a.mu.as_deref(), "mu", parse_number_list)?;

    let mut statuses = Vec::new();
    for family in families {
        let mut grid = ValidationGrid::default_for(family);
        let custom = alphas.is_some() || times.is_some() || lambdas.is_some() || betas.is_some() || mus.is_some();
        if custom {
            grid.id = format!("{}-custom", grid.id);
        }
        if let Some(v) = &alphas {
            grid.alphas = v.clone();
        }
        if let Some(v) = &times {
            if v.iter().any(|&t| t < 0.0) {
                return Err(usage("comparison times must be >= 0").into());
            }
            let mut v = v.clone();
            v.sort_by(f64::total_cmp);
            grid.times = v;
        }
        match family {
            Family::Xy => {
                if let Some(v) = &lambdas {
                    grid.strengths = v.clone();
                }
                if let Some(v) = &betas {
                    grid.betas = v.clone();
                }
            }
            Family::Z => {
                if let Some(v) = &mus {
                    grid.strengths = v.clone();
                }
            }
        }
        let points = grid.points(family);
        log::info!("{} grid: {} points", grid.id, points.len());
        let outcomes: Vec<_> = points.par_iter().map(|p| campaign::evaluate_point(p, &grid.times)).collect();
        statuses.extend(campaign::summarize(&grid.id, tol, FormulaId::of_family(family), outcomes));
    }

    let passed = campaign::must_confirm_passed(&statuses);
    let mut report = campaign::render_report(&statuses);
    report.push_str(if passed { "MUST-CONFIRM: pass\n" } else { "MUST-CONFIRM: FAIL\n" });
    print!("{report}");
    if let Some(path) = &a.out {
        std::fs::write(path, &report).with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(if passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_figure(a: &FigureArgs) -> Result<ExitCode> {
    let preset = figure::preset(a.id).ok_or_else(|| usage(format!("no figure {}", a.id)))?;
    let dir = a.out.clone().unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let path = dir.join(figure::file_name(a.id));
    write_output(Some(&path), &preset.csv()?)?;
    eprintln!("{}", path.display());
    Ok(ExitCode::SUCCESS)
}
