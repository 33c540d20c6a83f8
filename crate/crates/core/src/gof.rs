//! Goodness-of-fit tests for convexity and star-shapedness of the
//! generalized hazard `G^{-1} ∘ F`.
//!
//! The statistics compare the left-limit values of `G^{-1} ∘ F_n` with its
//! greatest convex (or star-shaped) minorant at the order statistics. Under
//! the null the least favourable distribution is `G` itself, so critical
//! values come from simulating samples of `G`; a sharper bootstrap null
//! resamples from the isotonic estimate `G ∘ M` instead.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dist::{ceil_count, Distribution, EmpiricalDist, ParametricModel, SeedSpec};
use crate::error::{Error, Result};
use crate::shape::{gcm, gsm, PiecewiseLinearFn, StarMinorant, TransformGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestKind {
    /// `H_0`: `G^{-1} ∘ F` is convex.
    Convex,
    /// `H_0`: `G^{-1} ∘ F` is star-shaped.
    Star,
}

/// Strictly increasing transform `K` applied to both sides of the statistic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KTransform {
    Identity,
    /// `K = G`, giving a Kolmogorov–Smirnov type statistic.
    ApplyG,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestSpec {
    pub kind: TestKind,
    pub g: ParametricModel,
    pub k: KTransform,
    /// Upper-tail restriction level; only used by the star test.
    pub nu: f64,
    pub alpha: f64,
    /// Number of null replicates.
    pub sims: usize,
    pub seed: SeedSpec,
}

impl TestSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidParameter(format!("alpha must lie in (0, 1), got {}", self.alpha)));
        }
        if !(0.0..=1.0).contains(&self.nu) {
            return Err(Error::InvalidParameter(format!("nu must lie in [0, 1], got {}", self.nu)));
        }
        if self.kind == TestKind::Convex && self.nu != 0.0 {
            return Err(Error::InvalidParameter("nu applies to the star test only".into()));
        }
        if self.sims == 0 {
            return Err(Error::InvalidParameter("sims must be positive".into()));
        }
        if self.g.support().0 != 0.0 || !self.g.is_continuous() {
            return Err(Error::InvalidParameter("G must be continuous with G(0) = 0".into()));
        }
        Ok(())
    }

    /// Statistic of this spec evaluated on `sample`.
    pub fn statistic(&self, sample: &EmpiricalDist) -> Result<f64> {
        match self.kind {
            TestKind::Convex => stat_convex(sample, &self.g, self.k),
            TestKind::Star => stat_star(sample, &self.g, self.k, self.nu),
        }
    }
}

/// Which null distribution produced the critical value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NullKind {
    LeastFavorable,
    Bootstrap,
    Exponential,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "test", rename_all = "snake_case")]
pub enum TestEcho {
    Shape(TestSpec),
    Deshpande { p: f64, alpha: f64, sims: usize, seed: SeedSpec },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub statistic: f64,
    /// `+inf` (serialized as `null`) when no null value has tail mass `<= alpha`.
    pub critical_value: f64,
    pub p_value: f64,
    pub reject: bool,
    pub n: usize,
    pub null: NullKind,
    pub spec: TestEcho,
}

fn k_apply(k: KTransform, g: &ParametricModel, y: f64) -> f64 {
    match k {
        KTransform::Identity => y,
        KTransform::ApplyG => g.cdf(y),
    }
}

/// `K ∘ G^{-1}((i-1)/n)`; for `K = G` this is `(i-1)/n` exactly.
fn k_level(k: KTransform, graph_value: f64, level: f64) -> f64 {
    match k {
        KTransform::Identity => graph_value,
        KTransform::ApplyG => level,
    }
}

/// `sup_{i=2..n-1} (K∘G^{-1}((i-1)/n) - K∘(G^{-1}∘F_n)_c(X_(i)))`.
pub fn stat_convex(sample: &EmpiricalDist, g: &ParametricModel, k: KTransform) -> Result<f64> {
    let n = sample.len();
    if n < 4 {
        return Err(Error::NoTestableIndices { n, n_nu: n });
    }
    let graph = TransformGraph::from_sample(sample, g, n)?;
    let minorant = gcm(&graph)?;
    let xs = sample.sorted();
    let mut sup = 0.0f64;
    for i in 2..n {
        let level = (i - 1) as f64 / n as f64;
        let lhs = k_level(k, g.quantile(level)?, level);
        let rhs = k_apply(k, g, minorant.eval_unchecked(xs[i - 1]));
        sup = sup.max(lhs - rhs);
    }
    Ok(sup)
}

/// `n_ν = ⌈n(1 - ν)⌉`, so that `X_(n_ν) = F_n^{-1}(1 - ν)`.
pub fn restricted_size(n: usize, nu: f64) -> usize {
    ceil_count(n, 1.0 - nu).clamp(0, n)
}

/// Star-shapedness statistic restricted to `{x <= X_(n_ν)}`.
///
/// The minorant is recomputed from the truncated graph (anchors with index
/// `<= n_ν`) and the supremum runs over `i = 2..n_ν-1`. With `ν = 0` this is
/// the unrestricted statistic.
pub fn stat_star(sample: &EmpiricalDist, g: &ParametricModel, k: KTransform, nu: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&nu) {
        return Err(Error::InvalidParameter(format!("nu must lie in [0, 1], got {nu}")));
    }
    let n = sample.len();
    let n_nu = restricted_size(n, nu);
    if n_nu < 3 {
        return Err(Error::NoTestableIndices { n, n_nu });
    }
    let xs = sample.sorted();
    if xs[0] <= 0.0 {
        return Err(Error::Domain {
            index: 0,
            value: xs[0],
            requirement: "strictly positive for the star test",
        });
    }
    let graph = TransformGraph::from_sample(sample, g, n_nu)?;
    let minorant = gsm(&graph)?;
    let mut sup = 0.0f64;
    for i in 2..n_nu {
        let level = (i - 1) as f64 / n as f64;
        let lhs = k_level(k, g.quantile(level)?, level);
        let rhs = k_apply(k, g, minorant.eval_unchecked(xs[i - 1]));
        sup = sup.max(lhs - rhs);
    }
    Ok(sup)
}

fn simulate<D, F>(source: &D, n: usize, sims: usize, master: u64, stat: F) -> Result<EmpiricalDist>
where
    D: Distribution + Sync,
    F: Fn(&EmpiricalDist) -> Result<f64> + Sync,
{
    let values = (0..sims as u64)
        .into_par_iter()
        .map(|r| {
            let sample = source.draw(n, SeedSpec::new(master, r))?;
            stat(&sample)
        })
        .collect::<Result<Vec<f64>>>()?;
    EmpiricalDist::new(values)
}

/// Least-favourable null: `sims` statistics on size-`n` samples of `G`,
/// replicate `r` drawn from stream `r` of the spec's master seed.
pub fn null_distribution(spec: &TestSpec, n: usize) -> Result<EmpiricalDist> {
    spec.validate()?;
    simulate(&spec.g, n, spec.sims, spec.seed.master_seed, |s| spec.statistic(s))
}

/// Smallest null value `c` whose upper-tail fraction `#{T >= c}/m` is at
/// most `alpha`; `+inf` when there is none.
pub fn critical_value(null: &EmpiricalDist, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidParameter(format!("alpha must lie in (0, 1], got {alpha}")));
    }
    let v = null.sorted();
    let m = v.len();
    let allowed = ((alpha * m as f64) + 1e-9).floor() as usize;
    if allowed == 0 {
        return Ok(f64::INFINITY);
    }
    let allowed = allowed.min(m);
    let c = v[m - allowed];
    let first = v.partition_point(|&x| x < c);
    if m - first <= allowed {
        return Ok(c);
    }
    let above = v.partition_point(|&x| x <= c);
    Ok(if above == m { f64::INFINITY } else { v[above] })
}

/// Fraction of null values `>= statistic`.
pub fn p_value(null: &EmpiricalDist, statistic: f64) -> f64 {
    let v = null.sorted();
    let below = v.partition_point(|&x| x < statistic);
    (v.len() - below) as f64 / v.len() as f64
}

fn decide(statistic: f64, null: &EmpiricalDist, alpha: f64, n: usize, kind: NullKind, spec: TestEcho) -> Result<TestResult> {
    let critical_value = critical_value(null, alpha)?;
    Ok(TestResult {
        statistic,
        critical_value,
        p_value: p_value(null, statistic),
        reject: statistic >= critical_value,
        n,
        null: kind,
        spec,
    })
}

/// Test against the least-favourable null simulated from `G`.
pub fn run_test(sample: &EmpiricalDist, spec: &TestSpec) -> Result<TestResult> {
    spec.validate()?;
    let statistic = spec.statistic(sample)?;
    let null = null_distribution(spec, sample.len())?;
    decide(statistic, &null, spec.alpha, sample.len(), NullKind::LeastFavorable, TestEcho::Shape(spec.clone()))
}

/// Test against the bootstrap null resampled from the isotonic estimate.
pub fn run_bootstrap_test(sample: &EmpiricalDist, spec: &TestSpec) -> Result<TestResult> {
    spec.validate()?;
    let statistic = spec.statistic(sample)?;
    let null = bootstrap_null(sample, spec)?;
    decide(statistic, &null, spec.alpha, sample.len(), NullKind::Bootstrap, TestEcho::Shape(spec.clone()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
enum Minorant {
    Convex(PiecewiseLinearFn),
    Star(StarMinorant),
}

/// Isotonic estimate `G ∘ M` of `F`, with `M` the greatest convex or
/// star-shaped minorant of `G^{-1} ∘ F_n`.
///
/// `M` only reaches `G^{-1}((n-1)/n)` at `X_(n)`, so the remaining mass sits
/// as an atom at `X_(n)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IsotonicEstimate {
    g: ParametricModel,
    minorant: Minorant,
    top: f64,
}

impl IsotonicEstimate {
    pub fn upper_end(&self) -> f64 {
        self.top
    }

    fn minorant_at(&self, x: f64) -> f64 {
        match &self.minorant {
            Minorant::Convex(m) => m.eval_unchecked(x),
            Minorant::Star(m) => m.eval_unchecked(x),
        }
    }
}

impl Distribution for IsotonicEstimate {
    fn cdf(&self, x: f64) -> f64 {
        if x.is_nan() {
            return f64::NAN;
        }
        if x < 0.0 {
            0.0
        } else if x >= self.top {
            1.0
        } else {
            self.g.cdf(self.minorant_at(x))
        }
    }

    fn quantile(&self, p: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidProbability(p));
        }
        let y = self.g.quantile(p)?;
        let x = match &self.minorant {
            Minorant::Convex(m) => m.inverse_left(y),
            Minorant::Star(m) => m.inverse_left(y),
        };
        Ok(x.unwrap_or(self.top))
    }
}

pub fn isotonic_estimate(sample: &EmpiricalDist, g: &ParametricModel, kind: TestKind) -> Result<IsotonicEstimate> {
    let graph = TransformGraph::from_sample(sample, g, sample.len())?;
    let minorant = match kind {
        TestKind::Convex => Minorant::Convex(gcm(&graph)?),
        TestKind::Star => {
            if sample.min() <= 0.0 {
                return Err(Error::Domain {
                    index: 0,
                    value: sample.min(),
                    requirement: "strictly positive for the star test",
                });
            }
            Minorant::Star(gsm(&graph)?)
        }
    };
    Ok(IsotonicEstimate {
        g: g.clone(),
        minorant,
        top: sample.max(),
    })
}

/// Bootstrap null: `sims` statistics on size-`n` resamples from the isotonic
/// estimate of `sample`. The star estimate uses the unrestricted minorant.
pub fn bootstrap_null(sample: &EmpiricalDist, spec: &TestSpec) -> Result<EmpiricalDist> {
    spec.validate()?;
    let estimate = isotonic_estimate(sample, &spec.g, spec.kind)?;
    simulate(&estimate, sample.len(), spec.sims, spec.seed.master_seed, |s| spec.statistic(s))
}

/// Deshpande's U-statistic `Σ_{i≠j} 1{X_i > p X_j} / (n(n-1))`.
pub fn deshpande_j(sample: &EmpiricalDist, p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidParameter(format!("p must lie in (0, 1), got {p}")));
    }
    let xs = sample.sorted();
    let n = xs.len();
    if n < 2 {
        return Err(Error::TooFewPoints { need: 2, got: n });
    }
    if let Some(index) = xs.iter().position(|&x| x <= 0.0) {
        return Err(Error::Domain {
            index,
            value: xs[index],
            requirement: "strictly positive",
        });
    }
    let mut count = 0usize;
    for &xj in xs {
        let threshold = p * xj;
        let greater = n - xs.partition_point(|&x| x <= threshold);
        // X_j > p X_j always holds for positive X_j
        count += greater - 1;
    }
    Ok(count as f64 / (n * (n - 1)) as f64)
}

/// Null distribution of `J_p` under the unit exponential.
pub fn deshpande_null(n: usize, p: f64, sims: usize, seed: SeedSpec) -> Result<EmpiricalDist> {
    if sims == 0 {
        return Err(Error::InvalidParameter("sims must be positive".into()));
    }
    simulate(&ParametricModel::UnitExponential, n, sims, seed.master_seed, |s| deshpande_j(s, p))
}

/// Exponentiality against IHRA alternatives; rejects for large `J_p`.
pub fn deshpande_test(sample: &EmpiricalDist, p: f64, alpha: f64, sims: usize, seed: SeedSpec) -> Result<TestResult> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    let statistic = deshpande_j(sample, p)?;
    let null = deshpande_null(sample.len(), p, sims, seed)?;
    decide(
        statistic,
        &null,
        alpha,
        sample.len(),
        NullKind::Exponential,
        TestEcho::Deshpande { p, alpha, sims, seed },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[f64]) -> EmpiricalDist {
        EmpiricalDist::new(v.to_vec()).unwrap()
    }

    fn spec(kind: TestKind, k: KTransform, nu: f64) -> TestSpec {
        TestSpec {
            kind,
            g: ParametricModel::UnitExponential,
            k,
            nu,
            alpha: 0.1,
            sims: 500,
            seed: SeedSpec::new(11, 0),
        }
    }

    /// Brute-force GCM value at `x`: minimum over all chords through anchor
    /// pairs bracketing `x`.
    fn brute_gcm(t: &[f64], v: &[f64], x: f64) -> f64 {
        let mut best = f64::INFINITY;
        for a in 0..t.len() {
            for b in a..t.len() {
                if t[a] <= x && x <= t[b] {
                    let val = if a == b { v[a] } else { v[a] + (v[b] - v[a]) * (x - t[a]) / (t[b] - t[a]) };
                    best = best.min(val);
                }
            }
        }
        best
    }

    #[test]
    fn convex_statistic_brute_force() {
        let sample = s(&[1.0, 2.0, 3.0, 10.0]);
        let n = 4.0;
        let t = [0.0, 1.0, 2.0, 3.0, 10.0];
        let v: Vec<f64> = [0.0, 0.0, 1.0 / n, 2.0 / n, 3.0 / n].iter().map(|p: &f64| -(-p).ln_1p()).collect();
        let expected = (2..4)
            .map(|i| v[i] - brute_gcm(&t, &v, t[i]))
            .fold(0.0f64, f64::max);
        // anchors by hand: (0,0),(1,0),(2,-ln 3/4),(3,-ln 1/2),(10,-ln 1/4)
        assert!((v[2] - (-(0.75f64).ln())).abs() < 1e-15);
        let got = stat_convex(&sample, &ParametricModel::UnitExponential, KTransform::Identity).unwrap();
        assert!((got - expected).abs() < 1e-14, "{got} vs {expected}");
        assert!(got > 0.0);
    }

    #[test]
    fn convex_statistic_zero_for_convex_anchors() {
        // v_i = -ln(1-(i-1)/n) is convex in i, so equally spaced X_(i) give a convex graph
        let sample = s(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        for k in [KTransform::Identity, KTransform::ApplyG] {
            let t = stat_convex(&sample, &ParametricModel::UnitExponential, k).unwrap();
            assert!(t.abs() < 1e-15, "{t}");
        }
    }

    #[test]
    fn small_samples_are_rejected() {
        let g = ParametricModel::UnitExponential;
        assert!(matches!(
            stat_convex(&s(&[1.0, 2.0, 3.0]), &g, KTransform::Identity),
            Err(Error::NoTestableIndices { .. })
        ));
        assert!(matches!(
            stat_star(&s(&[1.0, 2.0]), &g, KTransform::ApplyG, 0.0),
            Err(Error::NoTestableIndices { .. })
        ));
        assert!(matches!(
            stat_star(&s(&[1.0, 2.0, 3.0, 4.0]), &g, KTransform::ApplyG, 0.5),
            Err(Error::NoTestableIndices { .. })
        ));
    }

    #[test]
    fn star_requires_positive_sample() {
        let g = ParametricModel::UnitExponential;
        assert!(stat_star(&s(&[0.0, 1.0, 2.0, 3.0]), &g, KTransform::ApplyG, 0.0).is_err());
        assert!(stat_convex(&s(&[-1.0, 1.0, 2.0, 3.0]), &g, KTransform::ApplyG).is_err());
    }

    #[test]
    fn star_statistic_zero_for_star_shaped_graph() {
        let sample = s(&[1.0, 2.0, 3.0, 4.0, 5.0]);
        let t = stat_star(&sample, &ParametricModel::UnitExponential, KTransform::ApplyG, 0.0).unwrap();
        assert!(t.abs() < 1e-15);
    }

    #[test]
    fn star_nu_zero_is_unrestricted() {
        let sample = ParametricModel::weibull(0.6).unwrap().draw(40, SeedSpec::new(3, 0)).unwrap();
        let g = ParametricModel::UnitExponential;
        let a = stat_star(&sample, &g, KTransform::ApplyG, 0.0).unwrap();
        let graph = TransformGraph::from_sample(&sample, &g, 40).unwrap();
        let m = gsm(&graph).unwrap();
        let manual = (2..40)
            .map(|i| (i - 1) as f64 / 40.0 - g.cdf(m.eval(sample.sorted()[i - 1]).unwrap()))
            .fold(0.0f64, f64::max);
        assert!((a - manual).abs() < 1e-15);
    }

    #[test]
    fn restricted_size_convention() {
        assert_eq!(restricted_size(10, 0.05), 10);
        assert_eq!(restricted_size(50, 0.05), 48);
        assert_eq!(restricted_size(100, 0.05), 95);
        assert_eq!(restricted_size(7, 0.0), 7);
    }

    #[test]
    fn critical_value_examples() {
        let null = s(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0]);
        assert_eq!(critical_value(&null, 0.1).unwrap(), 10.0);
        assert_eq!(critical_value(&null, 0.25).unwrap(), 9.0);
        assert_eq!(critical_value(&null, 1.0).unwrap(), 1.0);
        assert_eq!(critical_value(&null, 0.05).unwrap(), f64::INFINITY);
        let mut prev = f64::INFINITY;
        for k in 1..=20 {
            let c = critical_value(&null, k as f64 / 20.0).unwrap();
            assert!(c <= prev);
            prev = c;
        }
        // ties: tail of 3 = {3, 3, 4} has mass 0.6 > 0.5, so the next value up
        let tied = s(&[1.0, 2.0, 3.0, 3.0, 4.0]);
        assert_eq!(critical_value(&tied, 0.5).unwrap(), 4.0);
        assert!(critical_value(&null, 0.0).is_err());
    }

    #[test]
    fn p_value_counts_ties() {
        let null = s(&[1.0, 2.0, 2.0, 3.0]);
        assert_eq!(p_value(&null, 2.0), 0.75);
        assert_eq!(p_value(&null, 3.5), 0.0);
        assert_eq!(p_value(&null, 0.0), 1.0);
    }

    #[test]
    fn null_is_deterministic_and_nonnegative() {
        let sp = spec(TestKind::Convex, KTransform::Identity, 0.0);
        let a = null_distribution(&sp, 50).unwrap();
        let b = null_distribution(&sp, 50).unwrap();
        assert_eq!(a, b);
        assert!(a.min() >= 0.0);
        assert!(a.quantile(0.5).unwrap() > 0.0);
    }

    #[test]
    fn reject_matches_critical_value() {
        let sp = spec(TestKind::Star, KTransform::ApplyG, 0.05);
        let sample = ParametricModel::weibull(0.5).unwrap().draw(60, SeedSpec::new(8, 0)).unwrap();
        let r = run_test(&sample, &sp).unwrap();
        assert_eq!(r.reject, r.statistic >= r.critical_value);
        assert!((0.0..=1.0).contains(&r.p_value));
        let convex = s(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let r = run_test(&convex, &spec(TestKind::Convex, KTransform::ApplyG, 0.0)).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert!(!r.reject);
    }

    #[test]
    fn isotonic_estimate_properties() {
        let sample = ParametricModel::weibull(1.5).unwrap().draw(30, SeedSpec::new(5, 0)).unwrap();
        let g = ParametricModel::UnitExponential;
        for kind in [TestKind::Convex, TestKind::Star] {
            let est = isotonic_estimate(&sample, &g, kind).unwrap();
            for k in 0..=300 {
                let x = sample.max() * 1.05 * k as f64 / 300.0;
                assert!(est.cdf(x) <= sample.cdf(x) + 1e-12, "{kind:?} x={x}");
            }
            let a = est.draw(30, SeedSpec::new(1, 2)).unwrap();
            assert_eq!(a, est.draw(30, SeedSpec::new(1, 2)).unwrap());
            assert!(a.max() <= sample.max());
        }
    }

    #[test]
    fn isotonic_estimate_on_convex_anchors() {
        let sample = s(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let est = isotonic_estimate(&sample, &ParametricModel::UnitExponential, TestKind::Convex).unwrap();
        for (i, &x) in sample.sorted().iter().enumerate() {
            let left_limit = i as f64 / 6.0;
            let want = if i == 5 { 1.0 } else { left_limit };
            assert!((est.cdf(x) - want).abs() < 1e-12, "i={i}");
        }
    }

    #[test]
    fn deshpande_examples() {
        assert_eq!(deshpande_j(&s(&[1.0, 2.0]), 0.5).unwrap(), 0.5);
        assert_eq!(deshpande_j(&s(&[3.0, 3.0, 3.0]), 0.5).unwrap(), 1.0);
        assert!(deshpande_j(&s(&[1.0]), 0.5).is_err());
        assert!(deshpande_j(&s(&[0.0, 1.0]), 0.5).is_err());
        // brute force on a random sample
        let sample = ParametricModel::UnitExponential.draw(25, SeedSpec::new(4, 4)).unwrap();
        let xs = sample.sorted();
        let mut count = 0;
        for i in 0..xs.len() {
            for j in 0..xs.len() {
                if i != j && xs[i] > 0.3 * xs[j] {
                    count += 1;
                }
            }
        }
        let want = count as f64 / (25.0 * 24.0);
        assert!((deshpande_j(&sample, 0.3).unwrap() - want).abs() < 1e-15);
    }

    #[test]
    fn deshpande_test_is_deterministic() {
        let sample = ParametricModel::weibull(2.0).unwrap().draw(40, SeedSpec::new(1, 0)).unwrap();
        let a = deshpande_test(&sample, 0.5, 0.1, 300, SeedSpec::new(9, 0)).unwrap();
        let b = deshpande_test(&sample, 0.5, 0.1, 300, SeedSpec::new(9, 0)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn spec_validation() {
        let mut sp = spec(TestKind::Convex, KTransform::Identity, 0.0);
        sp.alpha = 1.0;
        assert!(sp.validate().is_err());
        let mut sp = spec(TestKind::Convex, KTransform::Identity, 0.2);
        assert!(sp.validate().is_err());
        sp.kind = TestKind::Star;
        assert!(sp.validate().is_ok());
        sp.g = ParametricModel::discrete_uniform(vec![1.0]).unwrap();
        assert!(sp.validate().is_err());
    }
}
