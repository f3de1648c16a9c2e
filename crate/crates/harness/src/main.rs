use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use locrec::limits::{self, LimitSpec, Locality, NoiseModel};
use locrec::{Algorithm, Family, MatrixMode, RecoveryConfig, SmallWorldWeights, WeightProfile};
use locrec_harness::config::merge_config;
use locrec_harness::experiment::radius_from_exponent;
use locrec_harness::record::render_csv;
use locrec_harness::{
    bench, haplosim, sweep, BenchRow, Experiment, ExperimentPlan, HaploMode, HaploOptions,
    ModelSpec, NoiseSpec, CSV_HEADER,
};

#[derive(Parser)]
#[command(name = "locrec", version, about = "Community recovery from local parity samples")]
struct Cli {
    /// Read defaults from a `key = value` file (flags take precedence).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print D*, 1 - exp(-D*) and m* for a model.
    Limits(LimitsArgs),
    /// Run one trial and print its record.
    Trial(TrialArgs),
    /// Run trials over a grid of m/m* ratios.
    Sweep(SweepArgs),
    /// Time recovery on rings for several radius exponents.
    Bench(BenchArgs),
    /// Haplotype-style simulations (mate pairs or linked-read fragments).
    Haplosim(HaploArgs),
    /// Check the numerics against independent oracles.
    Selftest,
}

fn positive_f64(s: &str) -> std::result::Result<f64, String> {
    let x: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(format!("must be positive, got {s}"))
    }
}

/// Flip probabilities live in [0, 0.5).
fn probability(s: &str) -> std::result::Result<f64, String> {
    let x: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if (0.0..0.5).contains(&x) {
        Ok(x)
    } else {
        Err(format!("must lie in [0, 0.5), got {s}"))
    }
}

#[derive(Args)]
struct LimitsArgs {
    #[arg(long)]
    family: Family,
    #[arg(long)]
    n: usize,
    /// Locality radius; the regime is inferred from (n, r).
    #[arg(long, conflicts_with_all = ["beta", "gamma"])]
    r: Option<usize>,
    /// Exact exponent for r = n^beta.
    #[arg(long, conflicts_with = "gamma")]
    beta: Option<f64>,
    /// Exact fraction for r = gamma n (lines).
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long, value_parser = probability, conflicts_with = "multilink")]
    theta: Option<f64>,
    /// Sample width L for multi-linked samples.
    #[arg(long, requires = "p")]
    multilink: Option<usize>,
    /// Per-vertex error rate for multi-linked samples.
    #[arg(long, value_parser = probability)]
    p: Option<f64>,
    /// Use the beta regime when r < n^threshold (lines) or r^2 < n^threshold (grids).
    #[arg(long, default_value_t = limits::DEFAULT_REGIME_THRESHOLD)]
    threshold: f64,
    #[arg(long)]
    no_header: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum MatrixModeArg {
    First,
    Aggregate,
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long)]
    family: Family,
    #[arg(long)]
    n: usize,
    #[arg(long, conflicts_with = "r_exp")]
    r: Option<usize>,
    /// Radius as ceil(n^e).
    #[arg(long)]
    r_exp: Option<f64>,
    /// Pairwise flip probability (default 0.1 unless --multilink).
    #[arg(long, value_parser = probability, conflicts_with = "multilink")]
    theta: Option<f64>,
    #[arg(long, requires = "p")]
    multilink: Option<usize>,
    #[arg(long, value_parser = probability)]
    p: Option<f64>,
    /// uniform | poisson-halfr | file:PATH (one weight per distance 1, 2, ...).
    #[arg(long, default_value = "uniform")]
    weight_profile: String,
    /// Small-world weight on long-range edges (default r/n).
    #[arg(long)]
    w0: Option<f64>,
    /// Small-world weight on ring edges (default 1).
    #[arg(long)]
    w1: Option<f64>,
    #[command(flatten)]
    recovery: RecoveryArgs,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RecoveryArgs {
    #[arg(long, default_value = "expanding")]
    algo: Algorithm,
    /// Stitching window (even); default r rounded down to even.
    #[arg(long)]
    window: Option<usize>,
    /// Refinement cap; default ceil(log2 n) + 2.
    #[arg(long)]
    t_max: Option<usize>,
    #[arg(long, value_enum, default_value = "first")]
    matrix_mode: MatrixModeArg,
    #[arg(long)]
    no_early_stop: bool,
}

impl RecoveryArgs {
    fn config(&self) -> RecoveryConfig {
        RecoveryConfig {
            algorithm: self.algo,
            t_max: self.t_max,
            window: self.window,
            matrix_mode: match self.matrix_mode {
                MatrixModeArg::First => MatrixMode::FirstSample,
                MatrixModeArg::Aggregate => MatrixMode::Aggregate,
            },
            early_stop: !self.no_early_stop,
            ..RecoveryConfig::default()
        }
    }
}

#[derive(Args)]
struct TrialArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, value_parser = positive_f64)]
    m_ratio: f64,
    /// Trial index; with the same --seed this reproduces the matching sweep row.
    #[arg(long, default_value_t = 0)]
    trial_index: usize,
    /// Write the drawn samples to PATH.
    #[arg(long, value_name = "PATH")]
    dump_samples: Option<PathBuf>,
    /// Fill the runtime_ms column.
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, value_delimiter = ',', required = true, value_parser = positive_f64)]
    m_ratios: Vec<f64>,
    #[arg(long, default_value_t = 10)]
    trials: usize,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Fill the runtime_ms column (output is then no longer reproducible).
    #[arg(long)]
    timing: bool,
    #[arg(long)]
    no_summary: bool,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, default_value = "ring")]
    family: Family,
    #[arg(long, default_value_t = 100_000)]
    n: usize,
    #[arg(long, value_delimiter = ',', default_value = "0.2,0.25,0.5,0.75")]
    r_exp: Vec<f64>,
    #[arg(long, default_value_t = 1.5, value_parser = positive_f64)]
    m_ratio: f64,
    #[arg(long, default_value_t = 0.1, value_parser = probability)]
    theta: f64,
    #[arg(long, default_value_t = 1)]
    trials: usize,
    #[command(flatten)]
    recovery: RecoveryArgs,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum HaploModeArg {
    Matepair,
    Tenx,
}

#[derive(Args)]
struct HaploArgs {
    #[arg(long, value_enum)]
    mode: HaploModeArg,
    #[arg(long, default_value_t = 10_000)]
    n: usize,
    /// Per-read error rate.
    #[arg(long, default_value_t = 0.01, value_parser = probability)]
    p: f64,
    /// Mean of the Poisson gap between mate-paired positions.
    #[arg(long, default_value_t = 3.5)]
    gap_mean: f64,
    /// Gaps are truncated to 1..=max-gap.
    #[arg(long, default_value_t = 9)]
    max_gap: usize,
    #[arg(long, default_value_t = 100)]
    fragment_length: usize,
    /// Mean number of reads per fragment.
    #[arg(long, default_value_t = 9.0)]
    reads_mean: f64,
    #[arg(long, value_delimiter = ',', default_value = "1.5", value_parser = positive_f64)]
    m_ratios: Vec<f64>,
    #[arg(long, default_value_t = 10)]
    trials: usize,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long)]
    timing: bool,
    #[command(flatten)]
    recovery: RecoveryArgs,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn open_out(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn resolve_radius(family: Family, n: usize, r: Option<usize>, r_exp: Option<f64>) -> Result<usize> {
    match (r, r_exp) {
        (Some(r), _) => Ok(r),
        (None, Some(e)) => Ok(radius_from_exponent(n, e)),
        (None, None) if family == Family::Complete => Ok(n.saturating_sub(1)),
        (None, None) => bail!("--r or --r-exp is required for {family} graphs"),
    }
}

fn build_plan(model: &ModelArgs, m_ratios: Vec<f64>, trials: usize, timing: bool) -> Result<ExperimentPlan> {
    let r = resolve_radius(model.family, model.n, model.r, model.r_exp)?;
    let noise = match (model.multilink, model.p) {
        (Some(width), Some(p)) => NoiseSpec::Multilink { width, p },
        _ => NoiseSpec::Theta(model.theta.unwrap_or(0.1)),
    };
    let profile = match model.weight_profile.as_str() {
        "uniform" => WeightProfile::Uniform,
        "poisson-halfr" => WeightProfile::PoissonPmf { mean: r as f64 / 2.0 },
        other => match other.strip_prefix("file:") {
            Some(path) => {
                let text = std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
                let table = text
                    .split_whitespace()
                    .map(|t| t.parse::<f64>().with_context(|| format!("bad weight '{t}' in {path}")))
                    .collect::<Result<Vec<_>>>()?;
                WeightProfile::Table(table)
            }
            None => bail!("unknown weight profile '{other}'"),
        },
    };
    if profile != WeightProfile::Uniform && !matches!(noise, NoiseSpec::Theta(_)) {
        bail!("weight profiles apply to pairwise samples only");
    }
    let small_world = (model.family == Family::SmallWorld).then(|| {
        SmallWorldWeights::new(
            model.w0.unwrap_or(r as f64 / model.n as f64),
            model.w1.unwrap_or(1.0),
        )
    });
    Ok(ExperimentPlan {
        model: ModelSpec {
            family: model.family,
            n: model.n,
            r,
            small_world,
            profile,
        },
        noise,
        m_ratios,
        trials,
        master_seed: model.seed,
        recovery: model.recovery.config(),
        timing,
    })
}

fn experiment(plan: ExperimentPlan) -> Result<Experiment> {
    let exp = Experiment::new(plan)?;
    for w in exp.warnings() {
        eprintln!("warning: {w}");
    }
    Ok(exp)
}

fn run_limits(args: &LimitsArgs) -> Result<()> {
    let locality = match (args.r, args.beta, args.gamma) {
        (Some(r), _, _) => Locality::Radius(r),
        (None, Some(b), _) => Locality::Beta(b),
        (None, None, Some(g)) => Locality::Gamma(g),
        (None, None, None) if args.family == Family::Complete => Locality::Radius(args.n - 1),
        _ => bail!("one of --r, --beta or --gamma is required"),
    };
    let noise = match (args.multilink, args.p, args.theta) {
        (Some(width), Some(p), _) => NoiseModel::Multilink { width, p },
        (None, _, Some(theta)) => NoiseModel::Theta(theta),
        _ => bail!("give --theta, or --multilink with --p"),
    };
    let spec = LimitSpec {
        family: args.family,
        n: args.n,
        locality,
        noise,
    };
    let report = limits::evaluate(&spec, args.threshold)?;
    let r_field = match locality {
        Locality::Radius(r) => r.to_string(),
        Locality::Beta(b) => format!("n^{b}"),
        Locality::Gamma(g) => format!("{g}n"),
    };
    let (noise_field, width_field) = match noise {
        NoiseModel::Theta(t) => (t, String::new()),
        NoiseModel::Multilink { width, p } => (p, width.to_string()),
        NoiseModel::MultilinkAsymptotic { .. } => unreachable!("not reachable from the CLI"),
    };
    let mut out = open_out(&args.out)?;
    if !args.no_header {
        writeln!(out, "family,n,r,theta_or_p,L,dstar,hellinger,mstar")?;
    }
    writeln!(
        out,
        "{},{},{},{},{},{},{},{}",
        args.family, args.n, r_field, noise_field, width_field, report.dstar, report.hellinger, report.mstar
    )?;
    out.flush()?;
    Ok(())
}

fn run_trial(args: &TrialArgs) -> Result<()> {
    let plan = build_plan(&args.model, vec![args.m_ratio], 1, args.timing)?;
    let exp = experiment(plan)?;
    let outcome = match &args.dump_samples {
        Some(path) => {
            let mut f = BufWriter::new(
                File::create(path).with_context(|| format!("creating {}", path.display()))?,
            );
            let o = exp.run_trial_full(args.m_ratio, args.trial_index, Some(&mut f))?;
            f.flush()?;
            o
        }
        None => exp.run_trial_full(args.m_ratio, args.trial_index, None)?,
    };
    let mut out = open_out(&args.model.out)?;
    writeln!(out, "{CSV_HEADER}")?;
    writeln!(out, "{}", outcome.record.csv_row())?;
    out.flush()?;
    Ok(())
}

fn run_sweep(args: &SweepArgs) -> Result<()> {
    let plan = build_plan(&args.model, args.m_ratios.clone(), args.trials, args.timing)?;
    let exp = experiment(plan)?;
    let records = sweep(&exp, args.jobs)?;
    let mut out = open_out(&args.model.out)?;
    out.write_all(render_csv(&records, !args.no_summary).as_bytes())?;
    out.flush()?;
    Ok(())
}

fn run_bench(args: &BenchArgs) -> Result<()> {
    let plan = ExperimentPlan {
        model: ModelSpec {
            family: args.family,
            n: args.n,
            r: 1,
            small_world: None,
            profile: WeightProfile::Uniform,
        },
        noise: NoiseSpec::Theta(args.theta),
        m_ratios: vec![args.m_ratio],
        trials: args.trials,
        master_seed: args.seed,
        recovery: args.recovery.config(),
        timing: true,
    };
    let rows = bench(&plan, &args.r_exp, args.m_ratio)?;
    let mut out = open_out(&args.out)?;
    writeln!(out, "{}", BenchRow::HEADER)?;
    for row in &rows {
        writeln!(out, "{}", row.csv_row())?;
    }
    out.flush()?;
    Ok(())
}

fn run_haplosim(args: &HaploArgs) -> Result<()> {
    let options = HaploOptions {
        mode: match args.mode {
            HaploModeArg::Matepair => HaploMode::MatePair,
            HaploModeArg::Tenx => HaploMode::TenX,
        },
        n: args.n,
        p: args.p,
        gap_mean: args.gap_mean,
        max_gap: args.max_gap,
        fragment_length: args.fragment_length,
        reads_mean: args.reads_mean,
        m_ratios: args.m_ratios.clone(),
        trials: args.trials,
        master_seed: args.seed,
        recovery: args.recovery.config(),
        timing: args.timing,
    };
    let records = haplosim(&options, args.jobs)?;
    let mut out = open_out(&args.out)?;
    out.write_all(render_csv(&records, true).as_bytes())?;
    out.flush()?;
    Ok(())
}

fn run_selftest() -> Result<bool> {
    let reports = locrec::oracle::run_selftest();
    let mut out = io::stdout().lock();
    for r in &reports {
        writeln!(out, "{r}")?;
    }
    let failed = reports.iter().filter(|r| !r.pass).count();
    writeln!(out, "{} checks, {failed} failed", reports.len())?;
    Ok(failed == 0)
}

fn main() -> ExitCode {
    let argv = match merge_config(std::env::args().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let cli = Cli::try_parse_from(argv).unwrap_or_else(|e| e.exit());
    let result = match &cli.command {
        Command::Limits(a) => run_limits(a),
        Command::Trial(a) => run_trial(a),
        Command::Sweep(a) => run_sweep(a),
        Command::Bench(a) => run_bench(a),
        Command::Haplosim(a) => run_haplosim(a),
        Command::Selftest => match run_selftest() {
            Ok(true) => Ok(()),
            Ok(false) => return ExitCode::from(1),
            Err(e) => Err(e),
        },
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
