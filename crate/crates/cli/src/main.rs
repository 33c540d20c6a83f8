use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use transord::gof::{self, KTransform, TestKind, TestSpec};
use transord::ineq::{self, GiniMethod, WeightFn};
use transord::mc::{self, DominanceSpec, GridSpec};
use transord::orders::{self, OrderCheckReport, OrderKind, DEFAULT_TOLERANCE};
use transord::shape::{self, TransformGraph};
use transord::{EmpiricalDist, Error, ParametricModel, SeedSpec};

const EXIT_REJECT: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_DATA: u8 = 65;
const EXIT_INTERNAL: u8 = 70;

/// Transform stochastic orders, inequality measures, shape-constrained
/// minorants and goodness-of-fit tests for the generalized hazard.
///
/// Samples are read from CSV files with a single column headed `x`.
/// Structured results are printed as JSON, series as CSV.
#[derive(Debug, Parser)]
#[command(name = "transord", version, max_term_width = 100)]
struct Cli {
    /// Master seed for every Monte Carlo step
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for simulations (default: all cores)
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Write the result here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// JSON configuration with `experiment`, `test`, `measure` or `order` sections
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Inequality measure of a sample
    Ineq(IneqArgs),
    /// Check an extended transform order or the Lorenz order between two samples
    OrderCheck(OrderArgs),
    /// Transform graph of a sample and its convex or star-shaped minorant, as CSV
    Shape(ShapeArgs),
    /// Goodness-of-fit test for a convex or star-shaped generalized hazard (exit 2 on rejection)
    Gof(GofArgs),
    /// Monte Carlo experiments
    #[command(subcommand)]
    Simulate(SimulateCommand),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum Measure {
    Gini,
    GenEntropy,
    GenGini,
    RelMad,
    RelRange,
    Cv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum Method {
    Lstat,
    Pairs,
    Lorenz,
}

#[derive(Debug, Args)]
struct IneqArgs {
    /// Measure to compute
    #[arg(long)]
    measure: Option<Measure>,
    /// Entropy parameter (gen-entropy)
    #[arg(long)]
    r: Option<f64>,
    /// Distortion exponent, at least 1 (gen-gini)
    #[arg(long)]
    k: Option<f64>,
    /// Gini formula (gini) [default: lstat]
    #[arg(long)]
    method: Option<Method>,
    /// Sample CSV
    #[arg(long)]
    input: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum OrderArg {
    St,
    Convex,
    Star,
    Superadditive,
    Dispersive,
    Lorenz,
}

impl From<OrderArg> for OrderKind {
    fn from(k: OrderArg) -> Self {
        match k {
            OrderArg::St => Self::UsualStochastic,
            OrderArg::Convex => Self::ConvexTransform,
            OrderArg::Star => Self::Star,
            OrderArg::Superadditive => Self::Superadditive,
            OrderArg::Dispersive => Self::Dispersive,
            OrderArg::Lorenz => Self::Lorenz,
        }
    }
}

#[derive(Debug, Args)]
struct OrderArgs {
    /// Order to check
    #[arg(long)]
    kind: Option<OrderArg>,
    /// Sample of the dominating distribution F
    #[arg(long)]
    f: PathBuf,
    /// Sample of the reference distribution G
    #[arg(long)]
    g: PathBuf,
    /// Absolute tolerance of the inequality checks [default: 1e-9]
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Minorant {
    /// Anchor points of the transform graph
    None,
    Gcm,
    Gsm,
}

#[derive(Debug, Args)]
struct ShapeArgs {
    /// Series to print
    #[arg(long, value_enum, default_value_t = Minorant::Gcm)]
    minorant: Minorant,
    /// Reference distribution G, e.g. exponential, weibull:2, beta:1,2, burr:1,2
    #[arg(long, default_value = "exponential")]
    g: ParametricModel,
    /// Sample CSV
    #[arg(long)]
    input: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum GofKind {
    Convex,
    Star,
    /// Deshpande's J_p test of exponentiality against IHRA
    Deshpande,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum KArg {
    Identity,
    G,
}

#[derive(Debug, Args)]
struct GofArgs {
    /// Test to run
    #[arg(long)]
    kind: Option<GofKind>,
    /// Reference distribution G [default: exponential]
    #[arg(long)]
    g: Option<ParametricModel>,
    /// Transform applied to both sides of the statistic [default: g]
    #[arg(long = "K")]
    k: Option<KArg>,
    /// Upper-tail restriction of the star test [default: 0]
    #[arg(long)]
    nu: Option<f64>,
    /// Significance level [default: 0.1]
    #[arg(long)]
    alpha: Option<f64>,
    /// Null replicates [default: 10000]
    #[arg(long)]
    sims: Option<usize>,
    /// J_p parameter (deshpande) [default: 0.5]
    #[arg(long)]
    p: Option<f64>,
    /// Resample the null from the isotonic estimate instead of G
    #[arg(long)]
    bootstrap: bool,
    /// Sample CSV
    #[arg(long)]
    input: PathBuf,
}

#[derive(Debug, Subcommand)]
enum SimulateCommand {
    /// Sampling distributions of a functional under two models (CSV x,cdfF,cdfG,stderr)
    Dominance(SimArgs),
    /// Rejection rates over a model grid (CSV family,params,n,test,rate,runs,stderr)
    Grid(SimArgs),
}

#[derive(Debug, Args)]
struct SimArgs {
    /// Paper-scale replication counts instead of desk scale
    #[arg(long)]
    full_scale: bool,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct Config {
    seed: Option<u64>,
    out: Option<PathBuf>,
    #[serde(default)]
    verbosity: u8,
    experiment: Option<Experiment>,
    test: Option<TestSection>,
    measure: Option<MeasureSection>,
    order: Option<OrderSection>,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
enum Experiment {
    Dominance(DominanceSpec),
    Grid(GridSpec),
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct TestSection {
    kind: Option<GofKind>,
    g: Option<ParametricModel>,
    k: Option<KArg>,
    nu: Option<f64>,
    alpha: Option<f64>,
    sims: Option<usize>,
    p: Option<f64>,
    #[serde(default)]
    bootstrap: bool,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct MeasureSection {
    name: Option<Measure>,
    r: Option<f64>,
    k: Option<f64>,
    method: Option<Method>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct OrderSection {
    kind: Option<OrderArg>,
    tol: Option<f64>,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Data(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter(_)
            | Error::InvalidProbability(_)
            | Error::InvalidWeight(_)
            | Error::InvalidDistortion(_) => Self::Usage(e.to_string()),
            Error::Pool(_) => Self::Internal(e.to_string()),
            _ => Self::Data(e.to_string()),
        }
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

/// Rendered output plus the exit code to report after writing it.
struct Output {
    body: Vec<u8>,
    code: u8,
}

fn json<T: Serialize>(value: &T) -> Outcome<Vec<u8>> {
    let mut body = serde_json::to_vec_pretty(value).map_err(|e| Failure::Internal(e.to_string()))?;
    body.push(b'\n');
    Ok(body)
}

fn read_sample(path: &Path) -> Outcome<EmpiricalDist> {
    let file = File::open(path).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))?;
    EmpiricalDist::read_csv(BufReader::new(file)).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
}

fn load_config(path: Option<&Path>) -> Outcome<Config> {
    let Some(path) = path else {
        return Ok(Config::default());
    };
    let file = File::open(path).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))?;
    serde_json::from_reader(BufReader::new(file)).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn missing(what: &str) -> Failure {
    Failure::Usage(format!("missing {what} (flag or config)"))
}

#[derive(Serialize)]
struct MeasureOutput {
    value: f64,
    measure: Measure,
    n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    r: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    k: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    method: Option<Method>,
}

fn run_ineq(args: &IneqArgs, cfg: &Config) -> Outcome<Output> {
    let sec = cfg.measure.as_ref();
    let measure = args.measure.or(sec.and_then(|s| s.name)).ok_or_else(|| missing("--measure"))?;
    let sample = read_sample(&args.input)?;
    let mut out = MeasureOutput {
        value: 0.0,
        measure,
        n: sample.len(),
        r: None,
        k: None,
        method: None,
    };
    out.value = match measure {
        Measure::Gini => {
            let method = args.method.or(sec.and_then(|s| s.method)).unwrap_or(Method::Lstat);
            out.method = Some(method);
            let method = match method {
                Method::Lstat => GiniMethod::LStat,
                Method::Pairs => GiniMethod::Pairs,
                Method::Lorenz => GiniMethod::Lorenz,
            };
            ineq::gini(&sample, method)?
        }
        Measure::GenEntropy => {
            let r = args.r.or(sec.and_then(|s| s.r)).ok_or_else(|| missing("--r"))?;
            out.r = Some(r);
            ineq::gen_entropy(&sample, r)?
        }
        Measure::GenGini => {
            let k = args.k.or(sec.and_then(|s| s.k)).ok_or_else(|| missing("--k"))?;
            out.k = Some(k);
            ineq::generalized_gini(&sample, k)?
        }
        Measure::RelMad => ineq::relative_mad(&sample)?,
        Measure::RelRange => ineq::linear_measure(&sample, &WeightFn::RelativeRange)?,
        Measure::Cv => ineq::coefficient_of_variation(&sample)?,
    };
    Ok(Output {
        body: json(&out)?,
        code: 0,
    })
}

#[derive(Serialize)]
struct OrderOutput {
    #[serde(flatten)]
    report: OrderCheckReport,
    kind: OrderKind,
    n: usize,
}

fn run_order(args: &OrderArgs, cfg: &Config) -> Outcome<Output> {
    let sec = cfg.order.as_ref();
    let kind: OrderKind = args.kind.or(sec.and_then(|s| s.kind)).ok_or_else(|| missing("--kind"))?.into();
    let tol = args.tol.or(sec.and_then(|s| s.tol)).unwrap_or(DEFAULT_TOLERANCE);
    let f = read_sample(&args.f)?;
    let g = read_sample(&args.g)?;
    let report = orders::check_extended_order(kind, &f, &g, tol)?;
    Ok(Output {
        body: json(&OrderOutput { report, kind, n: f.len() })?,
        code: 0,
    })
}

fn run_shape(args: &ShapeArgs) -> Outcome<Output> {
    let sample = read_sample(&args.input)?;
    let graph = TransformGraph::from_sample(&sample, &args.g, sample.len())?;
    let points: Vec<(f64, f64)> = match args.minorant {
        Minorant::None => graph.abscissas().iter().copied().zip(graph.ordinates().iter().copied()).collect(),
        Minorant::Gcm => {
            let m = shape::gcm(&graph)?;
            m.breakpoints().iter().copied().zip(m.values().iter().copied()).collect()
        }
        Minorant::Gsm => shape::gsm(&graph)?.segments(),
    };
    let mut body = String::from("x,value\n");
    for (x, y) in points {
        body.push_str(&format!("{x},{y}\n"));
    }
    Ok(Output {
        body: body.into_bytes(),
        code: 0,
    })
}

fn run_gof(args: &GofArgs, cfg: &Config, seed: u64) -> Outcome<Output> {
    let default = TestSection::default();
    let sec = cfg.test.as_ref().unwrap_or(&default);
    let kind = args.kind.or(sec.kind).ok_or_else(|| missing("--kind"))?;
    let alpha = args.alpha.or(sec.alpha).unwrap_or(0.1);
    let sims = args.sims.or(sec.sims).unwrap_or(10_000);
    let sample = read_sample(&args.input)?;
    let seed = SeedSpec::new(seed, 0);
    let result = if kind == GofKind::Deshpande {
        let p = args.p.or(sec.p).unwrap_or(0.5);
        gof::deshpande_test(&sample, p, alpha, sims, seed)?
    } else {
        let k = match args.k.or(sec.k).unwrap_or(KArg::G) {
            KArg::Identity => KTransform::Identity,
            KArg::G => KTransform::ApplyG,
        };
        let spec = TestSpec {
            kind: if kind == GofKind::Star { TestKind::Star } else { TestKind::Convex },
            g: args.g.clone().or_else(|| sec.g.clone()).unwrap_or(ParametricModel::UnitExponential),
            k,
            nu: args.nu.or(sec.nu).unwrap_or(0.0),
            alpha,
            sims,
            seed,
        };
        if args.bootstrap || sec.bootstrap {
            gof::run_bootstrap_test(&sample, &spec)?
        } else {
            gof::run_test(&sample, &spec)?
        }
    };
    Ok(Output {
        body: json(&result)?,
        code: if result.reject { EXIT_REJECT } else { 0 },
    })
}

fn run_simulate(cmd: &SimulateCommand, cfg: &Config, seed: Option<u64>) -> Outcome<Output> {
    let mut body = Vec::new();
    match cmd {
        SimulateCommand::Dominance(args) => {
            let mut spec = match &cfg.experiment {
                Some(Experiment::Dominance(s)) => s.clone(),
                Some(Experiment::Grid(_)) => return Err(Failure::Usage("config holds a grid experiment".into())),
                None => DominanceSpec::counterexample(100_000, SeedSpec::default()),
            };
            if args.full_scale {
                spec.reps = 1_000_000;
            }
            if let Some(s) = seed {
                spec.seed.master_seed = s;
            }
            mc::dominance_experiment(&spec)?.write_csv(&mut body)?;
        }
        SimulateCommand::Grid(args) => {
            let mut spec = match &cfg.experiment {
                Some(Experiment::Grid(s)) => s.clone(),
                Some(Experiment::Dominance(_)) => {
                    return Err(Failure::Usage("config holds a dominance experiment".into()))
                }
                None => GridSpec::desk_default(SeedSpec::default()),
            };
            if args.full_scale {
                spec.runs = 2000;
                spec.ns = vec![10, 50, 100, 200, 300];
            }
            if let Some(s) = seed {
                spec.seed.master_seed = s;
            }
            mc::rejection_grid(&spec)?.write_csv(&mut body)?;
        }
    }
    Ok(Output { body, code: 0 })
}

fn dispatch(cli: &Cli) -> Outcome<(Output, Option<PathBuf>)> {
    let cfg = load_config(cli.config.as_deref())?;
    let seed = cli.seed.or(cfg.seed);
    let started = Instant::now();
    let run = || match &cli.command {
        Command::Ineq(a) => run_ineq(a, &cfg),
        Command::OrderCheck(a) => run_order(a, &cfg),
        Command::Shape(a) => run_shape(a),
        Command::Gof(a) => run_gof(a, &cfg, seed.unwrap_or(0)),
        Command::Simulate(c) => run_simulate(c, &cfg, seed),
    };
    let output = match cli.workers {
        Some(0) => return Err(Failure::Usage("--workers must be positive".into())),
        Some(w) => mc::with_workers(w, run)??,
        None => run()?,
    };
    if cfg.verbosity > 0 {
        eprintln!("finished in {:.3} s", started.elapsed().as_secs_f64());
    }
    Ok((output, cli.out.clone().or(cfg.out)))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (output, path) = match dispatch(&cli) {
        Ok(r) => r,
        Err(failure) => {
            let (code, msg) = match failure {
                Failure::Usage(m) => (EXIT_USAGE, m),
                Failure::Data(m) => (EXIT_DATA, m),
                Failure::Internal(m) => (EXIT_INTERNAL, m),
            };
            eprintln!("error: {msg}");
            return ExitCode::from(code);
        }
    };
    let written = match path {
        Some(p) => std::fs::write(&p, &output.body).map_err(|e| format!("{}: {e}", p.display())),
        None => io::stdout().write_all(&output.body).map_err(|e| e.to_string()),
    };
    match written {
        Ok(()) => ExitCode::from(output.code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_DATA)
        }
    }
}
