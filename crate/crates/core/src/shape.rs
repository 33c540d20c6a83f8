//! Shape-constrained minorants of empirical generalized hazard functions.
//!
//! A [`TransformGraph`] holds the left-limit vertices of the step function
//! `G^{-1} ∘ F_n`, anchored at the origin. Its greatest convex minorant is the
//! lower convex hull of those vertices ([`gcm`], with [`gcm_pava`] as an
//! independent route through pooled slopes) and its greatest star-shaped
//! minorant is a fan of rays from the origin with suffix-minimum slopes
//! ([`gsm`]).

use serde::Serialize;

use crate::dist::{Distribution, EmpiricalDist, ParametricModel};
use crate::error::{Error, Result};

/// Continuous polyline through `(x_i, y_i)` with strictly increasing `x`.
///
/// Evaluation outside `[x_0, x_last]` is an error; there is no extrapolation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PiecewiseLinearFn {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl PiecewiseLinearFn {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::SizeMismatch {
                left: xs.len(),
                right: ys.len(),
            });
        }
        if xs.is_empty() {
            return Err(Error::TooFewPoints { need: 1, got: 0 });
        }
        if let Some(index) = xs.iter().chain(&ys).position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index: index % xs.len() });
        }
        if let Some(i) = xs.windows(2).position(|w| w[0] >= w[1]) {
            return Err(Error::Domain {
                index: i + 1,
                value: xs[i + 1],
                requirement: "strictly greater than the previous breakpoint",
            });
        }
        Ok(Self { xs, ys })
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.xs
    }

    pub fn values(&self) -> &[f64] {
        &self.ys
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.xs[0], self.xs[self.xs.len() - 1])
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        let (lo, hi) = self.domain();
        if !(lo..=hi).contains(&x) {
            return Err(Error::OutsideDomain { x, lo, hi });
        }
        Ok(self.eval_unchecked(x))
    }

    pub(crate) fn eval_unchecked(&self, x: f64) -> f64 {
        let j = self.xs.partition_point(|&b| b < x);
        if j < self.xs.len() && self.xs[j] == x {
            return self.ys[j];
        }
        if j == 0 {
            return self.ys[0];
        }
        if j == self.xs.len() {
            return self.ys[j - 1];
        }
        let (x0, x1) = (self.xs[j - 1], self.xs[j]);
        let (y0, y1) = (self.ys[j - 1], self.ys[j]);
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }

    /// Smallest `x` with `f(x) >= y` for a nondecreasing polyline, or `None`
    /// when `y` exceeds the maximum.
    pub fn inverse_left(&self, y: f64) -> Option<f64> {
        let j = self.ys.partition_point(|&v| v < y);
        if j == self.ys.len() {
            return None;
        }
        if j == 0 {
            return Some(self.xs[0]);
        }
        let (x0, x1) = (self.xs[j - 1], self.xs[j]);
        let (y0, y1) = (self.ys[j - 1], self.ys[j]);
        Some((x0 + (x1 - x0) * (y - y0) / (y1 - y0)).clamp(x0, x1))
    }

    /// Exact integral over the whole domain (trapezoid rule on breakpoints).
    pub fn integral(&self) -> f64 {
        self.xs
            .windows(2)
            .zip(self.ys.windows(2))
            .map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1]))
            .sum()
    }
}

/// Anchor points `(t_i, v_i)`, `i = 0..n`, with `(t_0, v_0) = (0, 0)`,
/// `t` strictly increasing and `v` nondecreasing.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransformGraph {
    t: Vec<f64>,
    v: Vec<f64>,
}

impl TransformGraph {
    pub fn new(t: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        if t.len() != v.len() {
            return Err(Error::SizeMismatch {
                left: t.len(),
                right: v.len(),
            });
        }
        if t.len() < 2 {
            return Err(Error::TooFewPoints { need: 2, got: t.len() });
        }
        if let Some(index) = t.iter().chain(&v).position(|x| !x.is_finite()) {
            return Err(Error::NonFinite { index: index % t.len() });
        }
        if t[0] != 0.0 || v[0] != 0.0 {
            return Err(Error::InvalidParameter("transform graph must start at the origin".into()));
        }
        if let Some(i) = t.windows(2).position(|w| w[0] >= w[1]) {
            return Err(Error::Domain {
                index: i + 1,
                value: t[i + 1],
                requirement: "strictly greater than the previous abscissa",
            });
        }
        if let Some(i) = v.windows(2).position(|w| w[0] > w[1]) {
            return Err(Error::Domain {
                index: i + 1,
                value: v[i + 1],
                requirement: "no smaller than the previous ordinate",
            });
        }
        Ok(Self { t, v })
    }

    /// Left-limit vertices `(X_(i), G^{-1}((i-1)/n))` of `G^{-1} ∘ F_n` for
    /// `i = 1..=upto`, plus the origin.
    ///
    /// Tied observations collapse onto one abscissa keeping the lowest
    /// ordinate. `G` must be continuous with `G(0) = 0`, and the sample must
    /// lie in its support.
    pub fn from_sample(sample: &EmpiricalDist, g: &ParametricModel, upto: usize) -> Result<Self> {
        if !g.is_continuous() {
            return Err(Error::InvalidParameter("reference distribution G must be continuous".into()));
        }
        let (lo, hi) = g.support();
        if lo != 0.0 {
            return Err(Error::InvalidParameter("reference distribution G must satisfy G(0) = 0".into()));
        }
        let xs = sample.sorted();
        let n = xs.len();
        let upto = upto.min(n);
        let mut t = Vec::with_capacity(upto + 1);
        let mut v = Vec::with_capacity(upto + 1);
        t.push(0.0);
        v.push(0.0);
        for (i, &x) in xs.iter().enumerate().take(upto) {
            if x < 0.0 || x > hi {
                return Err(Error::Domain {
                    index: i,
                    value: x,
                    requirement: "inside the support of G",
                });
            }
            if x == t[t.len() - 1] {
                continue;
            }
            t.push(x);
            v.push(g.quantile(i as f64 / n as f64)?);
        }
        Self::new(t, v)
    }

    pub fn abscissas(&self) -> &[f64] {
        &self.t
    }

    pub fn ordinates(&self) -> &[f64] {
        &self.v
    }

    /// Number of anchors including the origin.
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    /// Same graph with every abscissa multiplied by `c > 0`.
    pub fn scaled_abscissas(&self, c: f64) -> Result<Self> {
        Self::new(self.t.iter().map(|x| x * c).collect(), self.v.clone())
    }
}

/// Empirical hazard graph: `G` is the unit exponential, so
/// `v_i = -ln(1 - (i-1)/n)`.
pub fn empirical_hazard(sample: &EmpiricalDist) -> Result<TransformGraph> {
    if let Some(i) = sample.sorted().iter().position(|&x| x <= 0.0) {
        return Err(Error::Domain {
            index: i,
            value: sample.sorted()[i],
            requirement: "strictly positive",
        });
    }
    TransformGraph::from_sample(sample, &ParametricModel::UnitExponential, sample.len())
}

fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Greatest convex minorant via the monotone-chain lower hull.
pub fn gcm(g: &TransformGraph) -> Result<PiecewiseLinearFn> {
    if g.len() < 2 {
        return Err(Error::TooFewPoints { need: 2, got: g.len() });
    }
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(g.len());
    for p in g.t.iter().copied().zip(g.v.iter().copied()) {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    let (xs, ys) = hull.into_iter().unzip();
    PiecewiseLinearFn::new(xs, ys)
}

/// Greatest convex minorant via pool-adjacent-violators on segment slopes.
///
/// Adjacent segments whose slopes decrease are merged into their chord until
/// the slope sequence is nondecreasing; the result passes through every
/// surviving block endpoint.
pub fn gcm_pava(g: &TransformGraph) -> Result<PiecewiseLinearFn> {
    if g.len() < 2 {
        return Err(Error::TooFewPoints { need: 2, got: g.len() });
    }
    // blocks hold (start anchor, end anchor); slope is the chord slope
    let slope = |a: usize, b: usize| (g.v[b] - g.v[a]) / (g.t[b] - g.t[a]);
    let mut blocks: Vec<(usize, usize)> = Vec::with_capacity(g.len());
    for k in 0..g.len() - 1 {
        blocks.push((k, k + 1));
        while blocks.len() >= 2 {
            let (a1, b1) = blocks[blocks.len() - 2];
            let (a2, b2) = blocks[blocks.len() - 1];
            if slope(a1, b1) > slope(a2, b2) {
                blocks.pop();
                blocks.pop();
                blocks.push((a1, b2));
            } else {
                break;
            }
        }
    }
    let mut xs = Vec::with_capacity(blocks.len() + 1);
    let mut ys = Vec::with_capacity(blocks.len() + 1);
    xs.push(g.t[blocks[0].0]);
    ys.push(g.v[blocks[0].0]);
    for &(_, b) in &blocks {
        xs.push(g.t[b]);
        ys.push(g.v[b]);
    }
    PiecewiseLinearFn::new(xs, ys)
}

/// Greatest star-shaped minorant: `alpha_i · x` on `(t_{i-1}, t_i]`.
///
/// The value at a knot `t_i` is taken from the ray of the interval it closes,
/// `alpha_i · t_i`, which never exceeds the anchor `v_i`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StarMinorant {
    knots: Vec<f64>,
    slopes: Vec<f64>,
}

impl StarMinorant {
    /// Knots `t_0 = 0 < t_1 < ... < t_n`.
    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    /// Ray slopes `alpha_1..alpha_n`, nondecreasing.
    pub fn slopes(&self) -> &[f64] {
        &self.slopes
    }

    pub fn domain(&self) -> (f64, f64) {
        (0.0, self.knots[self.knots.len() - 1])
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        let (lo, hi) = self.domain();
        if !(lo..=hi).contains(&x) {
            return Err(Error::OutsideDomain { x, lo, hi });
        }
        Ok(self.eval_unchecked(x))
    }

    pub(crate) fn eval_unchecked(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        // first knot >= x closes the interval containing x
        let i = self.knots.partition_point(|&k| k < x).clamp(1, self.slopes.len());
        self.slopes[i - 1] * x
    }

    /// Smallest `x` with `M(x) >= y`, or `None` when `y` exceeds the maximum.
    pub fn inverse_left(&self, y: f64) -> Option<f64> {
        if y <= 0.0 {
            return Some(0.0);
        }
        for (i, &alpha) in self.slopes.iter().enumerate() {
            let right = self.knots[i + 1];
            if alpha * right >= y {
                return Some((y / alpha).max(self.knots[i]).min(right));
            }
        }
        None
    }

    /// Segment endpoints `(t_{i-1}, alpha_i t_{i-1}), (t_i, alpha_i t_i)`;
    /// abscissas repeat where the minorant jumps.
    pub fn segments(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::with_capacity(2 * self.slopes.len());
        for (i, &alpha) in self.slopes.iter().enumerate() {
            out.push((self.knots[i], alpha * self.knots[i]));
            out.push((self.knots[i + 1], alpha * self.knots[i + 1]));
        }
        out
    }
}

pub fn gsm(g: &TransformGraph) -> Result<StarMinorant> {
    if g.len() < 2 {
        return Err(Error::TooFewPoints { need: 2, got: g.len() });
    }
    let ratios: Vec<f64> = g.t[1..].iter().zip(&g.v[1..]).map(|(t, v)| v / t).collect();
    let mut slopes = vec![0.0; ratios.len()];
    let mut running = f64::INFINITY;
    for j in (0..ratios.len()).rev() {
        running = running.min(ratios[j]);
        slopes[j] = running;
    }
    Ok(StarMinorant {
        knots: g.t.clone(),
        slopes,
    })
}
