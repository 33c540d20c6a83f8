//! Inequality functionals of empirical distributions.
//!
//! Lorenz curves, transformed expectations (generalized entropy, relative
//! mean deviation), distorted expectations (L-statistics) including the Gini
//! index and its generalizations, and linear inequality measures.

use serde::Serialize;

use crate::dist::EmpiricalDist;
use crate::error::{Error, Result};
use crate::shape::PiecewiseLinearFn;

fn require_nonnegative_mean(sample: &EmpiricalDist) -> Result<f64> {
    if let Some(index) = sample.sorted().iter().position(|&x| x < 0.0) {
        return Err(Error::Domain {
            index,
            value: sample.sorted()[index],
            requirement: "nonnegative",
        });
    }
    let mean = sample.mean();
    if mean > 0.0 {
        Ok(mean)
    } else {
        Err(Error::ZeroMean)
    }
}

fn require_positive_mean(sample: &EmpiricalDist) -> Result<f64> {
    let mean = sample.mean();
    if mean > 0.0 {
        Ok(mean)
    } else {
        Err(Error::ZeroMean)
    }
}

/// Piecewise-linear Lorenz curve with breakpoints `i/n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LorenzCurve {
    curve: PiecewiseLinearFn,
}

impl LorenzCurve {
    pub fn eval(&self, p: f64) -> Result<f64> {
        self.curve.eval(p)
    }

    pub fn breakpoints(&self) -> &[f64] {
        self.curve.breakpoints()
    }

    pub fn values(&self) -> &[f64] {
        self.curve.values()
    }

    pub fn as_polyline(&self) -> &PiecewiseLinearFn {
        &self.curve
    }
}

pub fn lorenz_curve(sample: &EmpiricalDist) -> Result<LorenzCurve> {
    require_nonnegative_mean(sample)?;
    let xs = sample.sorted();
    let n = xs.len();
    let total: f64 = xs.iter().sum();
    let mut ps = Vec::with_capacity(n + 1);
    let mut ls = Vec::with_capacity(n + 1);
    ps.push(0.0);
    ls.push(0.0);
    let mut acc = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        acc += x;
        ps.push((i + 1) as f64 / n as f64);
        ls.push(acc / total);
    }
    // exact endpoint
    ls[n] = 1.0;
    Ok(LorenzCurve {
        curve: PiecewiseLinearFn::new(ps, ls)?,
    })
}

/// `Σ φ(X_i / X̄) / n`.
pub fn transformed_expectation<F>(sample: &EmpiricalDist, phi: F) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let mean = require_positive_mean(sample)?;
    let xs = sample.sorted();
    let mut acc = 0.0;
    for (index, &x) in xs.iter().enumerate() {
        let value = phi(x / mean);
        if !value.is_finite() {
            return Err(Error::UndefinedTransform { index, value: x });
        }
        acc += value;
    }
    Ok(acc / xs.len() as f64)
}

/// Generalized entropy index of order `r`.
///
/// `r = 0` is the mean log deviation, `r = 1` the Theil index, and otherwise
/// `(Σ (X_i/X̄)^r / n - 1) / (r (r - 1))`, so that every branch vanishes on a
/// constant sample and `(2 I_2)^{1/2}` is the coefficient of variation with
/// divisor `n`.
pub fn gen_entropy(sample: &EmpiricalDist, r: f64) -> Result<f64> {
    if !r.is_finite() {
        return Err(Error::InvalidParameter(format!("entropy order must be finite, got {r}")));
    }
    let strict = r == 0.0 || r == 1.0 || r < 0.0;
    if strict {
        if let Some(index) = sample.sorted().iter().position(|&x| x <= 0.0) {
            return Err(Error::Domain {
                index,
                value: sample.sorted()[index],
                requirement: "strictly positive for this entropy order",
            });
        }
    } else {
        require_nonnegative_mean(sample)?;
    }
    if r == 0.0 {
        transformed_expectation(sample, |x| -x.ln())
    } else if r == 1.0 {
        transformed_expectation(sample, |x| x * x.ln())
    } else {
        let m = transformed_expectation(sample, |x| x.powf(r))?;
        Ok((m - 1.0) / (r * (r - 1.0)))
    }
}

/// Relative mean absolute deviation `Σ |X_i - X̄| / (n X̄)`.
pub fn relative_mad(sample: &EmpiricalDist) -> Result<f64> {
    require_nonnegative_mean(sample)?;
    transformed_expectation(sample, |x| (x - 1.0).abs())
}

/// Coefficient of variation with divisor `n`.
pub fn coefficient_of_variation(sample: &EmpiricalDist) -> Result<f64> {
    let mean = require_positive_mean(sample)?;
    let xs = sample.sorted();
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / xs.len() as f64;
    Ok(var.sqrt() / mean)
}

/// Distortion function `H` on [0, 1] with `H(0) = 0`, `H(1) = 1`.
#[derive(Debug, Clone, PartialEq)]
pub enum DistortionFn {
    /// `H(p) = 1 - (1 - p)^k`, `k >= 1`.
    PowerDual(f64),
    /// Linear interpolation of nondecreasing values on a grid over [0, 1].
    Tabulated(PiecewiseLinearFn),
}

impl DistortionFn {
    pub fn power_dual(k: f64) -> Result<Self> {
        if !(k.is_finite() && k >= 1.0) {
            return Err(Error::InvalidDistortion(format!("power k must be >= 1, got {k}")));
        }
        Ok(Self::PowerDual(k))
    }

    pub fn identity() -> Self {
        Self::PowerDual(1.0)
    }

    pub fn tabulated(grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let f = PiecewiseLinearFn::new(grid, values)
            .map_err(|e| Error::InvalidDistortion(e.to_string()))?;
        if f.domain() != (0.0, 1.0) {
            return Err(Error::InvalidDistortion("grid must span exactly [0, 1]".into()));
        }
        let vals = f.values();
        if vals[0] != 0.0 || vals[vals.len() - 1] != 1.0 {
            return Err(Error::InvalidDistortion("H(0) must be 0 and H(1) must be 1".into()));
        }
        if vals.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidDistortion("values must be nondecreasing".into()));
        }
        Ok(Self::Tabulated(f))
    }

    pub fn eval(&self, p: f64) -> f64 {
        match self {
            Self::PowerDual(k) => {
                if p >= 1.0 {
                    1.0
                } else {
                    1.0 - (1.0 - p).powf(*k)
                }
            }
            Self::Tabulated(f) => f.eval_unchecked(p.clamp(0.0, 1.0)),
        }
    }
}

/// L-statistic `(1/X̄) Σ X_(i) [H(i/n) - H((i-1)/n)]`.
pub fn distorted_expectation(sample: &EmpiricalDist, h: &DistortionFn) -> Result<f64> {
    let mean = require_nonnegative_mean(sample)?;
    let xs = sample.sorted();
    let n = xs.len() as f64;
    let mut prev = 0.0;
    let mut acc = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        let next = h.eval((i + 1) as f64 / n);
        acc += x * (next - prev);
        prev = next;
    }
    Ok(acc / mean)
}

/// Route used to evaluate the Gini index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GiniMethod {
    /// `1 - Σ X_(i)(2n - 2i + 1) / (n² X̄)`.
    LStat,
    /// `Σ_i Σ_j |X_i - X_j| / (2 n² X̄)`.
    Pairs,
    /// `1 - 2 ∫ L(p) dp` over the Lorenz polyline.
    Lorenz,
}

pub fn gini(sample: &EmpiricalDist, method: GiniMethod) -> Result<f64> {
    let mean = require_nonnegative_mean(sample)?;
    let xs = sample.sorted();
    let n = xs.len();
    let nf = n as f64;
    let value = match method {
        GiniMethod::LStat => {
            let weighted: f64 = xs
                .iter()
                .enumerate()
                .map(|(i, &x)| x * (2 * n - 2 * (i + 1) + 1) as f64)
                .sum();
            1.0 - weighted / (nf * nf * mean)
        }
        GiniMethod::Pairs => {
            let mut acc = 0.0;
            for &a in xs {
                for &b in xs {
                    acc += (a - b).abs();
                }
            }
            acc / (2.0 * nf * nf * mean)
        }
        GiniMethod::Lorenz => 1.0 - 2.0 * lorenz_curve(sample)?.as_polyline().integral(),
    };
    Ok(value)
}

/// `Γ_H = 1 - E_H` with `H(p) = 1 - (1 - p)^k`.
pub fn generalized_gini(sample: &EmpiricalDist, k: f64) -> Result<f64> {
    if !(k.is_finite() && k >= 1.0) {
        return Err(Error::InvalidParameter(format!("generalized Gini needs k >= 1, got {k}")));
    }
    Ok(1.0 - distorted_expectation(sample, &DistortionFn::PowerDual(k))?)
}

/// Nondecreasing weight function on [0, 1] with zero integral.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightFn {
    /// `w(p) = 2p - 1`.
    Gini,
    /// Zero on (0, 1) with atoms -1 at 0 and +1 at 1.
    RelativeRange,
    /// Linear interpolation of tabulated values over [0, 1].
    Tabulated(PiecewiseLinearFn),
}

impl WeightFn {
    pub fn tabulated(grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let f = PiecewiseLinearFn::new(grid, values).map_err(|e| Error::InvalidWeight(e.to_string()))?;
        if f.domain() != (0.0, 1.0) {
            return Err(Error::InvalidWeight("grid must span exactly [0, 1]".into()));
        }
        if f.values().windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidWeight("weights must be nondecreasing".into()));
        }
        let integral = f.integral();
        if integral.abs() > 1e-9 {
            return Err(Error::InvalidWeight(format!("weights must integrate to 0, got {integral}")));
        }
        Ok(Self::Tabulated(f))
    }
}

/// Integral of a polyline from its left end up to `p`.
fn polyline_primitive(f: &PiecewiseLinearFn, p: f64) -> f64 {
    let xs = f.breakpoints();
    let ys = f.values();
    let mut acc = 0.0;
    for k in 0..xs.len() - 1 {
        let (x0, x1) = (xs[k], xs[k + 1]);
        if p <= x0 {
            break;
        }
        let right = p.min(x1);
        let y_right = ys[k] + (ys[k + 1] - ys[k]) * (right - x0) / (x1 - x0);
        acc += 0.5 * (right - x0) * (ys[k] + y_right);
    }
    acc
}

/// Linear inequality measure `(1/μ) ∫ F^{-1}(p) w(p) dp`, integrated exactly
/// against the step quantile of the sample.
pub fn linear_measure(sample: &EmpiricalDist, w: &WeightFn) -> Result<f64> {
    let mean = require_nonnegative_mean(sample)?;
    let xs = sample.sorted();
    let n = xs.len();
    let nf = n as f64;
    let value = match w {
        WeightFn::Gini => {
            // ∫_{(i-1)/n}^{i/n} (2p - 1) dp = (2i - 1 - n) / n²
            let acc: f64 = xs
                .iter()
                .enumerate()
                .map(|(i, &x)| x * (2.0 * (i + 1) as f64 - 1.0 - nf))
                .sum();
            acc / (nf * nf * mean)
        }
        WeightFn::RelativeRange => (xs[n - 1] - xs[0]) / mean,
        WeightFn::Tabulated(f) => {
            let mut prev = 0.0;
            let mut acc = 0.0;
            for (i, &x) in xs.iter().enumerate() {
                let next = polyline_primitive(f, (i + 1) as f64 / nf);
                acc += x * (next - prev);
                prev = next;
            }
            acc / mean
        }
    };
    Ok(value)
}
