//! Randomized privacy primitives under weight-differential privacy: two
//! weight functions on the same public topology are neighbors when they
//! differ by at most `mu` on every edge.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, SpanningTree};
use crate::rng::RandomSource;

/// Lower clamp applied to released weights.
pub const CLAMP_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrivacyBudget {
    epsilon: f64,
    mu: f64,
}

impl PrivacyBudget {
    /// `epsilon` may be `+inf` (no privacy); both must be positive.
    pub fn new(epsilon: f64, mu: f64) -> Result<Self> {
        if epsilon.is_nan() || epsilon <= 0.0 {
            return Err(Error::InvalidParameter(format!("epsilon must be positive, got {epsilon}")));
        }
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(Error::InvalidParameter(format!("mu must be positive and finite, got {mu}")));
        }
        Ok(PrivacyBudget { epsilon, mu })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn with_epsilon(&self, epsilon: f64) -> Result<Self> {
        PrivacyBudget::new(epsilon, self.mu)
    }
}

/// Sensitivity of the negative-gap utility: `2 * mu`.
///
/// Moving every weight by at most `mu` moves `w(r)` by at most `mu` and the
/// range minimum by at most `mu`.
pub fn utility_sensitivity(budget: &PrivacyBudget) -> f64 {
    2.0 * budget.mu()
}

/// Inverse-CDF Laplace draw: `loc - scale * sgn(u) * ln(1 - 2|u|)` with
/// `u` uniform in `(-1/2, 1/2)`.
pub fn laplace_sample(rng: &mut RandomSource, location: f64, scale: f64) -> Result<f64> {
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::InvalidParameter(format!("Laplace scale must be positive, got {scale}")));
    }
    let u = loop {
        let u = rng.uniform() - 0.5;
        if u != -0.5 {
            break u;
        }
    };
    Ok(location - scale * u.signum() * (1.0 - 2.0 * u.abs()).ln())
}

pub fn laplace_density(x: f64, location: f64, scale: f64) -> f64 {
    (-(x - location).abs() / scale).exp() / (2.0 * scale)
}

/// `-|w(r) - min_{r' in range} w(r')|`.
pub fn utility_u(weights: &[f64], range: &[EdgeId], r: EdgeId) -> Result<f64> {
    if range.is_empty() {
        return Err(Error::EmptyRange);
    }
    if !range.contains(&r) {
        return Err(Error::InvalidParameter(format!("edge {r} is not in the range")));
    }
    let min = range.iter().map(|&e| weights[e]).fold(f64::INFINITY, f64::min);
    Ok(-(weights[r] - min).abs())
}

/// Exact output distribution of the exponential mechanism over `range`,
/// aligned with `range`. An infinite `epsilon_step` puts uniform mass on the
/// utility maximizers.
pub fn exponential_probabilities(
    weights: &[f64],
    range: &[EdgeId],
    epsilon_step: f64,
    delta_u: f64,
) -> Result<Vec<f64>> {
    if range.is_empty() {
        return Err(Error::EmptyRange);
    }
    if epsilon_step.is_nan() || epsilon_step <= 0.0 || delta_u.is_nan() || delta_u <= 0.0 {
        return Err(Error::InvalidParameter("epsilon and sensitivity must be positive".into()));
    }
    let min = range.iter().map(|&e| weights[e]).fold(f64::INFINITY, f64::min);
    let mut utilities = Vec::with_capacity(range.len());
    for &e in range {
        let u = -(weights[e] - min).abs();
        if !u.is_finite() {
            return Err(Error::NonFiniteUtility(e));
        }
        utilities.push(u);
    }
    let best = utilities.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut probs: Vec<f64> = if epsilon_step.is_infinite() {
        utilities.iter().map(|&u| if u == best { 1.0 } else { 0.0 }).collect()
    } else {
        let factor = epsilon_step / (2.0 * delta_u);
        utilities.iter().map(|&u| (factor * (u - best)).exp()).collect()
    };
    let total: f64 = probs.iter().sum();
    probs.iter_mut().for_each(|p| *p /= total);
    Ok(probs)
}

/// Picks an edge of `range` with probability proportional to
/// `exp(epsilon_step * u(r) / (2 * delta_u))`.
pub fn exponential_mechanism(
    rng: &mut RandomSource,
    weights: &[f64],
    range: &[EdgeId],
    epsilon_step: f64,
    delta_u: f64,
) -> Result<EdgeId> {
    let probs = exponential_probabilities(weights, range, epsilon_step, delta_u)?;
    let target = rng.uniform();
    let mut acc = 0.0;
    for (i, p) in probs.iter().enumerate() {
        acc += p;
        if target < acc {
            return Ok(range[i]);
        }
    }
    // rounding left a sliver above the last cumulative sum
    let last = probs.iter().rposition(|&p| p > 0.0).expect("some mass");
    Ok(range[last])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightReleaseParams {
    scale: f64,
    tau: f64,
    p: f64,
}

impl WeightReleaseParams {
    pub fn new(scale: f64, tau: f64, p: f64) -> Result<Self> {
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::InvalidParameter(format!("noise scale must be positive, got {scale}")));
        }
        if !(tau >= 0.0 && tau.is_finite()) {
            return Err(Error::InvalidParameter(format!("tau must be >= 0, got {tau}")));
        }
        if !(p >= 1.0 && p.is_finite()) {
            return Err(Error::InvalidParameter(format!("p must be >= 1, got {p}")));
        }
        Ok(WeightReleaseParams { scale, tau, p })
    }

    /// Shift and divisor chosen from a public upper bound on raw weights:
    /// `tau = 5s + w_pub_max`, `p = max(1, w_pub_max + 2 tau)`. A weight in
    /// `[0, w_pub_max]` plus noise within `5s` then lands in `(0, 1]`; a
    /// single Laplace draw leaves that band with probability `exp(-5)`.
    pub fn derived(scale: f64, w_pub_max: f64) -> Result<Self> {
        if !(w_pub_max > 0.0 && w_pub_max.is_finite()) {
            return Err(Error::InvalidParameter(format!("w_pub_max must be positive, got {w_pub_max}")));
        }
        let tau = 5.0 * scale + w_pub_max;
        let p = (w_pub_max + 2.0 * tau).max(1.0);
        WeightReleaseParams::new(scale, tau, p)
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Noise-free image of a weight.
    pub fn normalize(&self, w: f64) -> f64 {
        (w + self.tau) / self.p
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReleasedTree {
    pub tree: SpanningTree,
    /// Edges whose sanitized weight fell outside `(0, 1]` and was clamped.
    pub clamped: usize,
}

impl ReleasedTree {
    pub fn clamp_rate(&self) -> f64 {
        self.clamped as f64 / self.tree.edges().len().max(1) as f64
    }
}

/// Unclamped sanitized weights `(w + Y + tau) / p`, one Laplace draw per
/// entry in order.
pub fn sanitize_weights(rng: &mut RandomSource, weights: &[f64], params: &WeightReleaseParams) -> Vec<f64> {
    weights
        .iter()
        .map(|&w| {
            let noisy = laplace_sample(rng, w, params.scale).expect("scale validated");
            (noisy + params.tau) / params.p
        })
        .collect()
}

/// Releases the tree with sanitized weights, clamped into `[1e-9, 1]`.
pub fn weight_release(
    rng: &mut RandomSource,
    tree: &SpanningTree,
    params: &WeightReleaseParams,
) -> Result<ReleasedTree> {
    let raw = tree.weights().ok_or(Error::MissingWeights)?;
    let mut clamped = 0;
    let released: Vec<f64> = sanitize_weights(rng, raw, params)
        .into_iter()
        .map(|w| {
            if w > 0.0 && w <= 1.0 {
                w
            } else {
                clamped += 1;
                w.clamp(CLAMP_FLOOR, 1.0)
            }
        })
        .collect();
    Ok(ReleasedTree { tree: tree.clone().with_weights(released)?, clamped })
}
