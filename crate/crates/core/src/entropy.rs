//! The uncertainty measure `I = (1 - Σ p_i^q) / (q(q-1))` and its baselines.
//!
//! All sums use `0^q = 0` and `0·ln 0 = 0`, so the measures are continuous on
//! the boundary of the simplex. Terms are evaluated as
//! `p·(1 - p^{q-1}) = -p·expm1((q-1) ln p)`, which equals `p - p^q` on the
//! simplex and stays accurate as `q → 1`.

use crate::error::{Error, Result};
use crate::qfactor::{inverse_q_factor, Distribution, QParam, Spectrum};
use crate::shift::shifted_distribution;

/// `Σ p_i (1 - p_i^{k-1}) / (k - 1)`, the common numerator of the Tsallis
/// entropy and the uncertainty measure.
fn deformed_sum(probs: &[f64], k: f64) -> f64 {
    let km1 = k - 1.0;
    let s = probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * (km1 * p.ln()).exp_m1())
        .sum::<f64>()
        / km1;
    positive_zero(s)
}

fn shannon(probs: &[f64]) -> f64 {
    positive_zero(
        -probs
            .iter()
            .filter(|&&p| p > 0.0)
            .map(|&p| p * p.ln())
            .sum::<f64>(),
    )
}

/// Maps `-0.0` to `0.0`.
fn positive_zero(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x
    }
}

/// `I(p) = (1 - Σ p_i^q) / (q(q-1))`; `-Σ p_i ln p_i` at `q = 1`.
///
/// Zero exactly on degenerate distributions, positive otherwise, and concave
/// on the simplex for every `q > 0`.
pub fn uncertainty(p: &Distribution, q: QParam) -> f64 {
    if q.is_classical() {
        return shannon(p.probs());
    }
    positive_zero(deformed_sum(p.probs(), q.value()) / q.value())
}

/// Boltzmann-Gibbs entropy `-Σ p_i ln p_i` (with `k = 1`).
pub fn bg_entropy(p: &Distribution) -> f64 {
    shannon(p.probs())
}

/// Tsallis entropy `S = (1 - Σ p_i^{q̃}) / (q̃ - 1)` at the literal index `q̃`.
///
/// No `q̃ = 2 - q` conversion is applied here. With the same numeric index,
/// `tsallis_entropy(p, q) == q · uncertainty(p, q)`.
pub fn tsallis_entropy(p: &Distribution, q_tilde: f64) -> Result<f64> {
    if !(q_tilde.is_finite() && q_tilde > 0.0) {
        return Err(Error::InvalidQ(q_tilde));
    }
    if q_tilde == 1.0 {
        return Ok(shannon(p.probs()));
    }
    Ok(deformed_sum(p.probs(), q_tilde))
}

/// `max_p I(p)` over `W` states, attained at the uniform distribution:
/// `(1 - W^{1-q}) / (q(q-1))`, or `ln W` at `q = 1`.
pub fn max_uncertainty(w: usize, q: QParam) -> Result<f64> {
    if w == 0 {
        return Err(Error::Empty);
    }
    let ln_w = (w as f64).ln();
    if q.is_classical() {
        return Ok(ln_w);
    }
    let qv = q.value();
    Ok(-((1.0 - qv) * ln_w).exp_m1() / (qv * (qv - 1.0)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompositionResult {
    pub i_a: f64,
    pub i_b: f64,
    /// `I(A) + I(B) - q(q-1) I(A) I(B)`
    pub formula_value: f64,
    /// `I` evaluated on the product distribution `p_i(A) p_j(B)`.
    pub direct_value: f64,
    /// `-q(q-1) I(A) I(B)`
    pub nonextensive_term: f64,
}

impl CompositionResult {
    pub fn discrepancy(&self) -> f64 {
        (self.formula_value - self.direct_value).abs()
    }
}

/// Checks the composition law for independent subsystems `A` and `B`.
pub fn compose(p_a: &Distribution, p_b: &Distribution, q: QParam) -> Result<CompositionResult> {
    let i_a = uncertainty(p_a, q);
    let i_b = uncertainty(p_b, q);
    let nonextensive_term = if q.is_classical() {
        0.0
    } else {
        -q.value() * (q.value() - 1.0) * i_a * i_b
    };
    let joint: Vec<f64> = p_a
        .probs()
        .iter()
        .flat_map(|&a| p_b.probs().iter().map(move |&b| a * b))
        .collect();
    let direct_value = uncertainty(&Distribution::new(joint)?, q);
    Ok(CompositionResult {
        i_a,
        i_b,
        formula_value: i_a + i_b + nonextensive_term,
        direct_value,
        nonextensive_term,
    })
}

/// Columnar numeric table: a grid column followed by one column per series.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl SweepTable {
    pub fn column(&self, j: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r[j]).collect()
    }

    /// Largest discrete second difference of column `j`; concave columns give
    /// a value `≤ 0` up to rounding.
    pub fn max_second_difference(&self, j: usize) -> f64 {
        self.column(j)
            .windows(3)
            .map(|w| w[0] - 2.0 * w[1] + w[2])
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Header used for the entropy column at index `q`.
pub fn sweep_header(q: QParam) -> String {
    format!("I_q={}", q.value())
}

/// `I((p₁, 1 - p₁), q)` on a uniform grid `p₁ = i/(n-1)`, `i = 0..n`.
pub fn two_state_sweep(q_list: &[QParam], n_points: usize) -> Result<SweepTable> {
    if n_points < 3 {
        return Err(Error::InvalidArgument(format!(
            "sweep needs at least 3 points, got {n_points}"
        )));
    }
    let mut headers = vec!["p1".to_string()];
    headers.extend(q_list.iter().map(|&q| sweep_header(q)));
    let last = (n_points - 1) as f64;
    let rows = (0..n_points)
        .map(|i| {
            let p1 = i as f64 / last;
            let p = Distribution::new(vec![p1, 1.0 - p1])?;
            let mut row = Vec::with_capacity(q_list.len() + 1);
            row.push(p1);
            row.extend(q_list.iter().map(|&q| uncertainty(&p, q)));
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepTable { headers, rows })
}

/// `I(p + h·dp) - I(p)` without cancellation in the power terms.
fn uncertainty_increment(probs: &[f64], dp: &[f64], step: f64, q: QParam) -> f64 {
    if q.is_classical() {
        // Δ(-p ln p) = -(δ ln(p + δ) + p ln(1 + δ/p))
        return -probs
            .iter()
            .zip(dp)
            .map(|(&p, &d)| {
                let delta = step * d;
                delta * (p + delta).ln() + p * (delta / p).ln_1p()
            })
            .sum::<f64>();
    }
    let qv = q.value();
    let change: f64 = probs
        .iter()
        .zip(dp)
        .map(|(&p, &d)| p.powf(qv) * (qv * (step * d / p).ln_1p()).exp_m1())
        .sum();
    -change / (qv * (qv - 1.0))
}

/// First-order check of `dI = Σ x_i dp_i` at the self-normalized distribution
/// of `spectrum`, along the zero-sum tangent `dp`:
/// `|[I(p + h·dp) - I(p)]/h - Σ x_i dp_i|`, with `x_i` recovered from `p_i`
/// through the inverse q-factor.
pub fn varentropy_residual(spectrum: &Spectrum, q: QParam, dp: &[f64], step: f64) -> Result<f64> {
    if dp.len() != spectrum.len() {
        return Err(Error::InvalidArgument(format!(
            "tangent has {} entries, spectrum has {}",
            dp.len(),
            spectrum.len()
        )));
    }
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::InvalidArgument(format!("step must be positive, got {step}")));
    }
    let l1: f64 = dp.iter().map(|d| d.abs()).sum();
    if !l1.is_finite() || dp.iter().sum::<f64>().abs() > 1e-12 * (1.0 + l1) {
        return Err(Error::InvalidArgument("tangent must sum to zero".into()));
    }

    let (p, sol) = shifted_distribution(spectrum, q)?;
    let probs = p.probs();
    if probs.iter().any(|&pi| pi <= 0.0) {
        return Err(Error::InvalidArgument(
            "distribution has a zero-probability state".into(),
        ));
    }
    let moved: Vec<f64> = probs.iter().zip(dp).map(|(p, d)| p + step * d).collect();
    if let Err(e) = Distribution::new(moved) {
        return Err(Error::Step(e.to_string()));
    }

    let directional = probs
        .iter()
        .zip(dp)
        .map(|(&pi, &d)| Ok(inverse_q_factor(pi, q, sol.a0)? * d))
        .sum::<Result<f64>>()?;
    let slope = uncertainty_increment(probs, dp, step, q) / step;
    Ok((slope - directional).abs())
}
