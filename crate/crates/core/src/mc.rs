//! Monte Carlo experiments: stochastic dominance of sample functionals and
//! rejection-rate grids for the shape tests.

use std::collections::HashMap;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dist::{label_tag, Distribution, EmpiricalDist, ParametricModel, SeedSpec, UniformStream};
use crate::error::{Error, Result};
use crate::gof::{self, KTransform, TestKind, TestSpec};
use crate::ineq::{gen_entropy, generalized_gini, gini, linear_measure, relative_mad, GiniMethod, WeightFn};
use crate::orders::{check_extended_order, check_lorenz, OrderKind, DEFAULT_TOLERANCE};

/// Convex `φ` for the transformed expectation `Σ φ(X_i / X̄) / n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConvexPreset {
    /// `|x - 1|`
    AbsDeviation,
    /// `x^2`
    Square,
    /// `x ln x`
    XLogX,
    /// `-ln x`
    NegLog,
}

impl ConvexPreset {
    pub fn eval(self, x: f64) -> f64 {
        match self {
            Self::AbsDeviation => (x - 1.0).abs(),
            Self::Square => x * x,
            Self::XLogX => {
                if x == 0.0 {
                    0.0
                } else {
                    x * x.ln()
                }
            }
            Self::NegLog => -x.ln(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum Functional {
    // empty braces so that unknown keys are rejected
    Gini {},
    GenEntropy { r: f64 },
    GenGini { k: f64 },
    RelRange {},
    RelMad {},
    Convex { phi: ConvexPreset },
}

impl Functional {
    pub fn eval(&self, sample: &EmpiricalDist) -> Result<f64> {
        match *self {
            Self::Gini {} => gini(sample, GiniMethod::LStat),
            Self::GenEntropy { r } => gen_entropy(sample, r),
            Self::GenGini { k } => generalized_gini(sample, k),
            Self::RelRange {} => linear_measure(sample, &WeightFn::RelativeRange),
            Self::RelMad {} => relative_mad(sample),
            Self::Convex { phi } => crate::ineq::transformed_expectation(sample, |x| phi.eval(x)),
        }
    }

    /// Whether the functional always lies in `[0, 1]`.
    fn unit_range(&self) -> bool {
        matches!(self, Self::Gini {} | Self::GenGini { .. })
    }
}

pub const DEFAULT_GRID_POINTS: usize = 512;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DominanceSpec {
    pub model_f: ParametricModel,
    pub model_g: ParametricModel,
    pub functional: Functional,
    pub n: usize,
    pub reps: usize,
    /// Evaluation points; defaults to 512 equally spaced points on `[0, 1]`
    /// for Gini-type functionals and on the pooled range otherwise.
    #[serde(default)]
    pub grid: Option<Vec<f64>>,
    #[serde(default)]
    pub seed: SeedSpec,
}

impl DominanceSpec {
    /// Gini of size-3 samples from the two six-point uniform supports whose
    /// sampling distributions cross.
    pub fn counterexample(reps: usize, seed: SeedSpec) -> Self {
        Self {
            model_f: ParametricModel::DiscreteUniform {
                support: vec![1.0, 3.5, 6.0, 6.5, 9.0, 11.0],
            },
            model_g: ParametricModel::DiscreteUniform {
                support: vec![2.0, 3.0, 5.0, 7.0, 7.5, 10.0],
            },
            functional: Functional::Gini {},
            n: 3,
            reps,
            grid: None,
            seed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// No grid point with `cdfF - cdfG > 3 se`.
    Dominates,
    /// Some point with `cdfF - cdfG > 3 se` and some with `cdfG - cdfF > 3 se`.
    Crosses,
    /// Violations only in the direction `cdfF > cdfG`.
    Dominated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominanceReport {
    pub grid: Vec<f64>,
    pub cdf_f: Vec<f64>,
    pub cdf_g: Vec<f64>,
    pub mc_stderr: Vec<f64>,
    /// `max (cdfF - cdfG)^+` over the grid.
    pub max_violation: f64,
    pub verdict: Verdict,
    pub reps: usize,
}

/// Standard-error multiple used by every Monte Carlo verdict.
pub const SE_MULTIPLE: f64 = 3.0;

impl DominanceReport {
    /// Whether `cdfF - cdfG <= mult * se` at every grid point.
    pub fn dominates_within(&self, mult: f64) -> bool {
        self.cdf_f
            .iter()
            .zip(&self.cdf_g)
            .zip(&self.mc_stderr)
            .all(|((f, g), se)| f - g <= mult * se)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["x", "cdfF", "cdfG", "stderr"])?;
        for i in 0..self.grid.len() {
            w.write_record([
                self.grid[i].to_string(),
                self.cdf_f[i].to_string(),
                self.cdf_g[i].to_string(),
                self.mc_stderr[i].to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![lo];
    }
    (0..points)
        .map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64)
        .collect()
}

/// Empirical CDF of `values` (any order) at each point of a sorted grid.
pub fn ecdf_on_grid(values: &EmpiricalDist, grid: &[f64]) -> Vec<f64> {
    let v = values.sorted();
    grid.iter()
        .map(|&x| v.partition_point(|&y| y <= x) as f64 / v.len() as f64)
        .collect()
}

fn replicate_values(model: &ParametricModel, functional: &Functional, n: usize, reps: usize, seed: SeedSpec) -> Result<EmpiricalDist> {
    let values = (0..reps as u64)
        .into_par_iter()
        .map(|r| functional.eval(&model.draw(n, seed.with_stream(r))?))
        .collect::<Result<Vec<f64>>>()?;
    EmpiricalDist::new(values)
}

/// Binomial standard error of the difference of two independent ECDFs.
fn diff_stderr(pf: f64, pg: f64, reps: usize) -> f64 {
    ((pf * (1.0 - pf) + pg * (1.0 - pg)) / reps as f64).sqrt()
}

/// Compares two ECDFs point by point with a `SE_MULTIPLE` buffer.
pub fn compare_ecdfs(grid: Vec<f64>, cdf_f: Vec<f64>, cdf_g: Vec<f64>, mc_stderr: Vec<f64>, reps: usize) -> DominanceReport {
    let mut max_violation = 0.0f64;
    let (mut above, mut below) = (false, false);
    for i in 0..grid.len() {
        let d = cdf_f[i] - cdf_g[i];
        max_violation = max_violation.max(d);
        above |= d > SE_MULTIPLE * mc_stderr[i];
        below |= -d > SE_MULTIPLE * mc_stderr[i];
    }
    let verdict = match (above, below) {
        (false, _) => Verdict::Dominates,
        (true, true) => Verdict::Crosses,
        (true, false) => Verdict::Dominated,
    };
    DominanceReport {
        grid,
        cdf_f,
        cdf_g,
        mc_stderr,
        max_violation,
        verdict,
        reps,
    }
}

/// Compares the sampling distributions of `functional` under `F` and `G`.
///
/// `F` replicates use stream `r` of `seed.derive(1)`, `G` replicates stream
/// `r` of `seed.derive(2)`.
pub fn dominance_experiment(spec: &DominanceSpec) -> Result<DominanceReport> {
    if spec.reps == 0 {
        return Err(Error::InvalidParameter("reps must be at least 1".into()));
    }
    if spec.n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    if let Some(grid) = &spec.grid {
        if grid.is_empty() || grid.iter().any(|x| !x.is_finite()) || grid.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidParameter("grid must be nonempty, finite and sorted".into()));
        }
    }
    let tf = replicate_values(&spec.model_f, &spec.functional, spec.n, spec.reps, spec.seed.derive(1))?;
    let tg = replicate_values(&spec.model_g, &spec.functional, spec.n, spec.reps, spec.seed.derive(2))?;
    let grid = match &spec.grid {
        Some(g) => g.clone(),
        None if spec.functional.unit_range() => linspace(0.0, 1.0, DEFAULT_GRID_POINTS),
        None => linspace(tf.min().min(tg.min()), tf.max().max(tg.max()), DEFAULT_GRID_POINTS),
    };
    let cdf_f = ecdf_on_grid(&tf, &grid);
    let cdf_g = ecdf_on_grid(&tg, &grid);
    let se = cdf_f
        .iter()
        .zip(&cdf_g)
        .map(|(&pf, &pg)| diff_stderr(pf, pg, spec.reps))
        .collect();
    Ok(compare_ecdfs(grid, cdf_f, cdf_g, se, spec.reps))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "test", rename_all = "snake_case", deny_unknown_fields)]
pub enum GridTest {
    /// Restricted star test with `K = G`.
    Star { nu: f64 },
    /// Convex test with `K = G`.
    Convex {},
    Deshpande { p: f64 },
}

impl GridTest {
    pub fn label(&self) -> String {
        match self {
            Self::Star { nu } => format!("tstar(nu={nu})"),
            Self::Convex {} => "tconvex".to_string(),
            Self::Deshpande { p } => format!("jp(p={p})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub models: Vec<ParametricModel>,
    pub ns: Vec<usize>,
    pub tests: Vec<GridTest>,
    /// Reference distribution of the shape tests.
    #[serde(default = "default_reference")]
    pub g: ParametricModel,
    pub alpha: f64,
    pub runs: usize,
    /// Null replicates per `(test, n)`.
    pub sims: usize,
    #[serde(default)]
    pub seed: SeedSpec,
}

fn default_reference() -> ParametricModel {
    ParametricModel::UnitExponential
}

impl GridSpec {
    /// Weibull, beta and Burr alternatives at desk scale.
    pub fn desk_default(seed: SeedSpec) -> Self {
        let mut models: Vec<ParametricModel> = [0.5, 0.8, 1.0, 1.5].iter().map(|&a| ParametricModel::Weibull { a }).collect();
        for a in [0.5, 0.7, 1.0] {
            for b in [2.0, 3.0] {
                models.push(ParametricModel::Beta { a, b });
            }
        }
        for a in [1.0, 2.0] {
            for b in [0.8, 1.5, 2.0] {
                models.push(ParametricModel::Burr { a, b });
            }
        }
        Self {
            models,
            ns: vec![10, 50, 100],
            tests: vec![GridTest::Star { nu: 0.05 }, GridTest::Deshpande { p: 0.5 }],
            g: ParametricModel::UnitExponential,
            alpha: 0.1,
            runs: 500,
            sims: 10_000,
            seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RejectionRow {
    pub family: String,
    pub params: String,
    pub n: usize,
    pub test: String,
    pub rate: f64,
    pub runs: usize,
    pub stderr: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RejectionTable {
    pub rows: Vec<RejectionRow>,
}

impl RejectionTable {
    pub fn find(&self, family: &str, params: &str, n: usize, test: &str) -> Option<&RejectionRow> {
        self.rows
            .iter()
            .find(|r| r.family == family && r.params == params && r.n == n && r.test == test)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["family", "params", "n", "test", "rate", "runs", "stderr"])?;
        for r in &self.rows {
            w.write_record([
                r.family.clone(),
                r.params.clone(),
                r.n.to_string(),
                r.test.clone(),
                r.rate.to_string(),
                r.runs.to_string(),
                r.stderr.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

fn grid_test_spec(spec: &GridSpec, test: &GridTest) -> Option<TestSpec> {
    let (kind, nu) = match *test {
        GridTest::Star { nu } => (TestKind::Star, nu),
        GridTest::Convex {} => (TestKind::Convex, 0.0),
        GridTest::Deshpande { .. } => return None,
    };
    Some(TestSpec {
        kind,
        g: spec.g.clone(),
        k: KTransform::ApplyG,
        nu,
        alpha: spec.alpha,
        sims: spec.sims,
        seed: spec.seed.derive(label_tag(&test.label())),
    })
}

fn grid_null(spec: &GridSpec, test: &GridTest, n: usize) -> Result<EmpiricalDist> {
    match (grid_test_spec(spec, test), test) {
        (Some(ts), _) => gof::null_distribution(&ts, n),
        (None, GridTest::Deshpande { p }) => gof::deshpande_null(n, *p, spec.sims, spec.seed.derive(label_tag(&test.label()))),
        _ => unreachable!(),
    }
}

fn grid_statistic(spec: &GridSpec, test: &GridTest, sample: &EmpiricalDist) -> Result<f64> {
    match (grid_test_spec(spec, test), test) {
        (Some(ts), _) => ts.statistic(sample),
        (None, GridTest::Deshpande { p }) => gof::deshpande_j(sample, *p),
        _ => unreachable!(),
    }
}

/// Seed of the samples drawn for one `(model, n)` cell; shared by all tests.
pub fn cell_seed(spec: &GridSpec, model: &ParametricModel, n: usize) -> SeedSpec {
    spec.seed
        .derive(label_tag(&format!("{}:{}", model.family_name(), model.params_label())))
        .derive(n as u64)
}

pub fn rejection_grid(spec: &GridSpec) -> Result<RejectionTable> {
    rejection_grid_with_cache(spec, true)
}

/// Like [`rejection_grid`]; `cache = false` recomputes each null per row,
/// which gives the same table.
pub fn rejection_grid_with_cache(spec: &GridSpec, cache: bool) -> Result<RejectionTable> {
    if !(spec.alpha > 0.0 && spec.alpha < 1.0) {
        return Err(Error::InvalidParameter(format!("alpha must lie in (0, 1), got {}", spec.alpha)));
    }
    if spec.runs == 0 || spec.sims == 0 {
        return Err(Error::InvalidParameter("runs and sims must be positive".into()));
    }
    let mut criticals: HashMap<(usize, usize), f64> = HashMap::new();
    let mut table = RejectionTable::default();
    for model in &spec.models {
        for &n in &spec.ns {
            let seed = cell_seed(spec, model, n);
            let samples = (0..spec.runs as u64)
                .into_par_iter()
                .map(|r| model.draw(n, seed.with_stream(r)))
                .collect::<Result<Vec<_>>>()?;
            for (ti, test) in spec.tests.iter().enumerate() {
                let c = match (cache, criticals.get(&(ti, n))) {
                    (true, Some(&c)) => c,
                    _ => {
                        let c = gof::critical_value(&grid_null(spec, test, n)?, spec.alpha)?;
                        if cache {
                            criticals.insert((ti, n), c);
                        }
                        c
                    }
                };
                let rejections = samples
                    .par_iter()
                    .map(|s| grid_statistic(spec, test, s).map(|t| usize::from(t >= c)))
                    .collect::<Result<Vec<_>>>()?
                    .into_iter()
                    .sum::<usize>();
                let rate = rejections as f64 / spec.runs as f64;
                table.rows.push(RejectionRow {
                    family: model.family_name().to_string(),
                    params: model.params_label(),
                    n,
                    test: test.label(),
                    rate,
                    runs: spec.runs,
                    stderr: (rate * (1.0 - rate) / spec.runs as f64).sqrt(),
                });
            }
        }
    }
    Ok(table)
}

/// Runs `f` on a dedicated pool of `workers` threads.
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Pool(e.to_string()))?;
    Ok(pool.install(f))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lemma1Summary {
    pub generated: usize,
    /// Pairs passing the extended star check.
    pub filtered: usize,
    /// Filtered pairs where the Lorenz check fails.
    pub counterexamples: Vec<(EmpiricalDist, EmpiricalDist)>,
}

impl Lemma1Summary {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

fn positive_sample(u: &mut UniformStream, n: usize) -> Vec<f64> {
    // log-uniform spread over four decades, rounded to create occasional ties
    (0..n)
        .map(|_| {
            let x = 10f64.powf(4.0 * u.next_uniform() - 2.0);
            if u.next_uniform() < 0.2 {
                (x * 4.0).ceil() / 4.0
            } else {
                x
            }
        })
        .collect()
}

/// One random pair; `case` cycles through independent pairs, pairs built by
/// a star-shaped transform, and perturbed versions of those.
fn lemma1_pair(seed: SeedSpec) -> Result<(EmpiricalDist, EmpiricalDist)> {
    let mut u = seed.uniforms();
    let n = 1 + (u.next_uniform() * 12.0) as usize;
    let case = seed.stream_id % 3;
    let g = positive_sample(&mut u, n);
    let f = match case {
        0 => positive_sample(&mut u, n),
        _ => {
            // F-sample as y * r(y) with r nondecreasing: a star-shaped image
            let mut sorted = g.clone();
            sorted.sort_by(f64::total_cmp);
            let mut ratio = 0.1 + u.next_uniform();
            let mut out = Vec::with_capacity(n);
            for &y in &sorted {
                ratio += u.next_uniform() * u.next_uniform();
                let x = y * ratio;
                out.push(if case == 2 { x * (1.0 + 0.05 * (u.next_uniform() - 0.5)) } else { x });
            }
            out
        }
    };
    Ok((EmpiricalDist::new(f)?, EmpiricalDist::new(g)?))
}

/// Extended star order should imply Lorenz order on every generated pair.
pub fn lemma1_property_run(count: usize, seed: SeedSpec) -> Result<Lemma1Summary> {
    let results = (0..count as u64)
        .into_par_iter()
        .map(|r| {
            let (f, g) = lemma1_pair(seed.with_stream(r))?;
            let star = check_extended_order(OrderKind::Star, &f, &g, DEFAULT_TOLERANCE)?;
            if !star.holds {
                return Ok((false, None));
            }
            let lorenz = check_lorenz(&f, &g)?;
            Ok((true, (!lorenz.holds).then_some((f, g))))
        })
        .collect::<Result<Vec<_>>>()?;
    let filtered = results.iter().filter(|r| r.0).count();
    let counterexamples = results.into_iter().filter_map(|r| r.1).collect();
    Ok(Lemma1Summary {
        generated: count,
        filtered,
        counterexamples,
    })
}
