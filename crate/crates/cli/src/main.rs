//! `koon-gphcs`: goodness of fit, censored-data analysis, simulation studies
//! and system-reliability evaluation for K-out-of-N:G systems of Weibull
//! components.
//!
//! Exit codes: 0 success, 2 usage error, 3 data error, 4 numerical failure.

mod output;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use koon_gphcs::analysis::{self, AnalysisSettings, InputMode};
use koon_gphcs::bayes::{CredibleMethod, McmcOptions, PriorSpec};
use koon_gphcs::dataset::{aircon_progressive_removals, load_dataset, Dataset};
use koon_gphcs::koon::system_reliability;
use koon_gphcs::mcsim::{self, build_scheme, Design, SchemeId};
use koon_gphcs::{CensoringPlan, Error, SystemSpec, WeibullParams};

const THREADS_ENV: &str = "KOON_GPHCS_THREADS";

#[derive(Parser, Debug)]
#[command(name = "koon-gphcs", version, about = "Weibull K-out-of-N:G reliability under generalized progressive hybrid censoring")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fit a complete-sample Weibull model and run a Kolmogorov-Smirnov test.
    Gof(GofArgs),
    /// Censor a data set under a GPHC plan and report MLE and Bayes inference.
    Analyze(Box<AnalyzeArgs>),
    /// Run a Monte Carlo design and write estimate/interval tables and CSV.
    Simulate(SimulateArgs),
    /// Print the K-out-of-N system reliability at time t.
    Reliability(ReliabilityArgs),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct DataSource {
    /// Data file: positive values separated by commas, whitespace or newlines.
    #[arg(long)]
    data: Option<PathBuf>,
    /// Bundled data set: `aircon` or `aircon-progressive`.
    #[arg(long)]
    bundled: Option<String>,
}

impl DataSource {
    fn load(&self) -> Result<Dataset, Failure> {
        let spec = match (&self.data, &self.bundled) {
            (Some(p), _) => p.display().to_string(),
            (None, Some(name)) => format!("bundled:{name}"),
            (None, None) => unreachable!("clap requires one source"),
        };
        load_dataset(&spec).map_err(|e| match e {
            Error::Domain(_) => Failure::Usage(e.to_string()),
            Error::Io(e) => Failure::Io(format!("{spec}: {e}")),
            e => Failure::Data(e),
        })
    }
}

#[derive(Args, Debug)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GofArgs {
    #[command(flatten)]
    source: DataSource,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SchemeArg {
    #[value(name = "I")]
    I,
    #[value(name = "II")]
    II,
    #[value(name = "III")]
    III,
}

impl From<SchemeArg> for SchemeId {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::I => SchemeId::I,
            SchemeArg::II => SchemeId::II,
            SchemeArg::III => SchemeId::III,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
enum HpdArg {
    #[default]
    Minwidth,
    Percentile,
}

impl From<HpdArg> for CredibleMethod {
    fn from(h: HpdArg) -> Self {
        match h {
            HpdArg::Minwidth => CredibleMethod::MinWidth,
            HpdArg::Percentile => CredibleMethod::Percentile,
        }
    }
}

/// Four comma-separated gamma hyperparameters `a,b,c,d`.
#[derive(Clone, Copy, Debug)]
struct PriorArg(PriorSpec);

impl FromStr for PriorArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let v: Vec<f64> = s
            .split(',')
            .map(|x| x.trim().parse::<f64>().map_err(|e| format!("'{x}': {e}")))
            .collect::<Result<_, _>>()?;
        let [a, b, c, d] = v[..] else {
            return Err(format!("expected four values a,b,c,d, got {}", v.len()));
        };
        PriorSpec::new(a, b, c, d).map(PriorArg).map_err(|e| e.to_string())
    }
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    #[command(flatten)]
    source: DataSource,
    /// Treat the data as an already-observed progressive Type-II sample of
    /// length m (implied by `--bundled aircon-progressive`).
    #[arg(long)]
    progressive: bool,
    /// Units on test.
    #[arg(long)]
    n: Option<usize>,
    /// Planned number of failures.
    #[arg(long)]
    m: Option<usize>,
    /// Guaranteed number of failures.
    #[arg(long)]
    k: usize,
    /// Time threshold.
    #[arg(long = "T")]
    threshold: f64,
    /// Standard removal scheme.
    #[arg(long, value_enum, conflicts_with = "removals")]
    scheme: Option<SchemeArg>,
    /// Explicit removals R_1,...,R_m.
    #[arg(long, value_delimiter = ',')]
    removals: Option<Vec<usize>>,
    /// Components in the system.
    #[arg(long = "N", default_value_t = 5)]
    big_n: u32,
    /// Components required to work.
    #[arg(long = "K", default_value_t = 3)]
    big_k: u32,
    /// Mission time for the reliability estimates.
    #[arg(long)]
    t: f64,
    /// Gamma prior hyperparameters a,b (alpha) and c,d (beta).
    #[arg(long, conflicts_with = "noninformative")]
    prior: Option<PriorArg>,
    /// Near-flat gamma priors (all hyperparameters 1e-4); the default.
    #[arg(long)]
    noninformative: bool,
    /// Retained MCMC draws.
    #[arg(long = "B", default_value_t = 10_000)]
    draws: usize,
    #[arg(long, default_value_t = 2_000)]
    burn_in: usize,
    /// One minus the interval level.
    #[arg(long, default_value_t = 0.05)]
    gamma: f64,
    #[arg(long, value_enum, default_value_t = HpdArg::Minwidth)]
    hpd_method: HpdArg,
    /// Random seed; drawn from system entropy when omitted.
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    /// Design file (JSON, `{"cells": [...]}`).
    #[arg(long)]
    design: PathBuf,
    /// Desk-scale profile: 1000 replications, B = 2000, burn-in 500.
    #[arg(long)]
    fast: bool,
    /// Replace every cell's seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Replace every cell's credible-interval method.
    #[arg(long, value_enum)]
    hpd_method: Option<HpdArg>,
    /// Output directory for `estimates.txt`, `intervals.txt`, `report.csv`
    /// and `report.json`.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct ReliabilityArgs {
    #[arg(long)]
    alpha: f64,
    /// Rate parameter, time^(-alpha).
    #[arg(long)]
    beta: f64,
    #[arg(long = "N")]
    big_n: u32,
    #[arg(long = "K")]
    big_k: u32,
    #[arg(long)]
    t: f64,
}

/// Error with its exit-code category.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Data(Error),
    Numerical(Error),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Data(_) | Failure::Io(_) => 3,
            Failure::Numerical(_) => 4,
        }
    }

    fn usage(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }

    /// Classifies an error raised while processing data.
    fn from_run(e: Error) -> Self {
        if e.is_numerical() {
            Failure::Numerical(e)
        } else {
            Failure::Data(e)
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "usage error: {m}"),
            Failure::Data(e) => write!(f, "data error: {e}"),
            Failure::Numerical(e) => write!(f, "numerical failure: {e}"),
            Failure::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gof(a) => cmd_gof(&a),
        Command::Analyze(a) => cmd_analyze(&a),
        Command::Simulate(a) => cmd_simulate(&a),
        Command::Reliability(a) => cmd_reliability(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("koon-gphcs: {f}");
            ExitCode::from(f.code())
        }
    }
}

fn emit(output: &OutputArgs, text: String) -> Result<(), Failure> {
    match &output.out {
        Some(path) => write_file(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

fn cmd_gof(args: &GofArgs) -> Result<(), Failure> {
    let data = args.source.load()?;
    let (fit, ks) = analysis::goodness_of_fit(&data.times).map_err(Failure::from_run)?;
    let text = match args.output.format {
        Format::Text => output::gof_text(&data, &fit, &ks),
        Format::Json => to_json(&serde_json::json!({
            "source": data.source,
            "n": data.times.len(),
            "fit": fit,
            "beta_parameterization": analysis::BETA_LABEL,
            "ks": ks,
        })),
    };
    emit(&args.output, text)
}

fn analyze_settings(args: &AnalyzeArgs, data: &Dataset) -> Result<AnalysisSettings, Failure> {
    let bundled_progressive = args.bundled_name() == Some("aircon-progressive");
    let mode = if args.progressive || bundled_progressive {
        InputMode::Progressive
    } else {
        InputMode::Raw
    };
    let m = match (args.m, mode) {
        (Some(m), _) => m,
        (None, InputMode::Progressive) => data.times.len(),
        (None, InputMode::Raw) => return Err(Failure::Usage("--m is required for raw data".into())),
    };
    let n = match (args.n, bundled_progressive) {
        (Some(n), _) => n,
        (None, true) => 30,
        (None, false) if mode == InputMode::Raw => data.times.len(),
        (None, false) => return Err(Failure::Usage("--n is required for progressive input".into())),
    };
    let removals = match (&args.removals, args.scheme) {
        (Some(r), _) => r.clone(),
        (None, Some(s)) => build_scheme(s.into(), n, m).map_err(Failure::usage)?,
        (None, None) if bundled_progressive && n == 30 && m == 20 => aircon_progressive_removals(),
        (None, None) => {
            return Err(Failure::Usage("give either --scheme or --removals".into()));
        }
    };
    let plan = CensoringPlan::new(n, m, args.k, args.threshold, removals).map_err(Failure::usage)?;
    let spec = SystemSpec::new(args.big_n, args.big_k).map_err(Failure::usage)?;
    if !(args.t.is_finite() && args.t > 0.0) {
        return Err(Failure::Usage(format!("--t must be > 0, got {}", args.t)));
    }
    if !(args.gamma > 0.0 && args.gamma < 1.0) {
        return Err(Failure::Usage(format!("--gamma must be in (0, 1), got {}", args.gamma)));
    }
    if (args.draws as f64) * args.gamma < 2.0 {
        return Err(Failure::Usage(format!(
            "--B {} is too small for --gamma {}",
            args.draws, args.gamma
        )));
    }
    let prior = args.prior.map(|p| p.0).unwrap_or_else(PriorSpec::noninformative);
    Ok(AnalysisSettings {
        plan,
        mode,
        spec,
        t: args.t,
        prior,
        mcmc: McmcOptions {
            draws: args.draws,
            burn_in: args.burn_in,
            ..McmcOptions::default()
        },
        gamma: args.gamma,
        hpd_method: args.hpd_method.into(),
        seed: args.seed.unwrap_or_else(rand::random),
    })
}

impl AnalyzeArgs {
    fn bundled_name(&self) -> Option<&str> {
        self.source.bundled.as_deref()
    }
}

fn cmd_analyze(args: &AnalyzeArgs) -> Result<(), Failure> {
    let data = args.source.load()?;
    let settings = analyze_settings(args, &data)?;
    let sample = analysis::build_sample(&data.times, &settings).map_err(Failure::Data)?;
    let report = analysis::analyze_sample(sample, &settings).map_err(Failure::from_run)?;
    let text = match args.output.format {
        Format::Text => output::analysis_text(&data, &report),
        Format::Json => to_json(&report),
    };
    emit(&args.output, text)
}

fn worker_threads() -> Result<Option<usize>, Failure> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&t| t > 0)
            .map(Some)
            .ok_or_else(|| Failure::Usage(format!("{THREADS_ENV} must be a positive integer, got '{v}'"))),
        Err(_) => Ok(None),
    }
}

fn cmd_simulate(args: &SimulateArgs) -> Result<(), Failure> {
    let text = fs::read_to_string(&args.design)
        .map_err(|e| Failure::Io(format!("{}: {e}", args.design.display())))?;
    let mut design = Design::from_json(&text).map_err(Failure::Data)?;
    if args.fast {
        design = design.fast();
    }
    for cell in &mut design.cells {
        if let Some(seed) = args.seed {
            cell.seed = seed;
        }
        if let Some(h) = args.hpd_method {
            cell.hpd_method = h.into();
        }
    }
    let threads = worker_threads()?;
    let reports = mcsim::run_design(&design.cells, threads).map_err(Failure::from_run)?;

    fs::create_dir_all(&args.out).map_err(|e| Failure::Io(format!("{}: {e}", args.out.display())))?;
    let header = output::simulate_header(&design, args.fast);
    write_file(
        &args.out.join("estimates.txt"),
        &format!("{header}\n{}", mcsim::render_estimate_table(&reports)),
    )?;
    write_file(
        &args.out.join("intervals.txt"),
        &format!("{header}\n{}", mcsim::render_interval_table(&reports)),
    )?;
    write_file(&args.out.join("report.csv"), &mcsim::to_csv(&reports))?;
    write_file(&args.out.join("report.json"), &to_json(&reports))?;
    eprintln!(
        "koon-gphcs: {} cell(s) written to {}",
        reports.len(),
        args.out.display()
    );
    Ok(())
}

fn cmd_reliability(args: &ReliabilityArgs) -> Result<(), Failure> {
    let p = WeibullParams::new(args.alpha, args.beta).map_err(Failure::usage)?;
    let spec = SystemSpec::new(args.big_n, args.big_k).map_err(Failure::usage)?;
    if !(args.t.is_finite() && args.t >= 0.0) {
        return Err(Failure::Usage(format!("--t must be >= 0, got {}", args.t)));
    }
    let r = system_reliability(&spec, &p, args.t).map_err(Failure::usage)?;
    println!("{r:.6}");
    Ok(())
}
