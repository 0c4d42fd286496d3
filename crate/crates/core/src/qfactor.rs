//! Domain types and the deformed exponential `[1 - (q-1)x]^{1/(q-1)}`.

use std::fmt;

use crate::error::{Error, Result};

/// Slack allowed on `Σ p_i = 1` when a [`Distribution`] is constructed.
pub const NORMALIZATION_TOL: f64 = 1e-9;

/// Which side of the classical limit a [`QParam`] lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QClass {
    /// `0 < q < 1`
    SubUnit,
    /// `q == 1` (Boltzmann-Gibbs)
    Classical,
    /// `q > 1`
    SuperUnit,
}

/// The nonextensive parameter `q > 0`.
///
/// This is the index of the symmetric form `[1 - (q-1)x]^{1/(q-1)}`. The
/// Tsallis index `q̃` used by [`crate::tsallis_entropy`] and the escort
/// distribution is related by `q = 2 - q̃`; see [`QParam::from_tsallis_index`].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct QParam(f64);

impl QParam {
    pub const CLASSICAL: QParam = QParam(1.0);

    pub fn new(q: f64) -> Result<Self> {
        if q.is_finite() && q > 0.0 {
            Ok(QParam(q))
        } else {
            Err(Error::InvalidQ(q))
        }
    }

    /// Converts a Tsallis index `q̃` into `q = 2 - q̃`. Fails when `q̃ >= 2`.
    pub fn from_tsallis_index(q_tilde: f64) -> Result<Self> {
        Self::new(2.0 - q_tilde)
    }

    /// The Tsallis index `q̃ = 2 - q`.
    pub fn tsallis_index(self) -> f64 {
        2.0 - self.0
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// Exact comparison against 1, no tolerance band.
    pub fn class(self) -> QClass {
        if self.0 < 1.0 {
            QClass::SubUnit
        } else if self.0 == 1.0 {
            QClass::Classical
        } else {
            QClass::SuperUnit
        }
    }

    #[inline]
    pub fn is_classical(self) -> bool {
        self.0 == 1.0
    }
}

impl fmt::Display for QParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl TryFrom<f64> for QParam {
    type Error = Error;

    fn try_from(q: f64) -> Result<Self> {
        QParam::new(q)
    }
}

/// Values `x_1..x_W` of the random variable (or energies) over `W` microstates.
///
/// Duplicates are kept: every formula sums over microstates, not levels.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    values: Vec<f64>,
    min: f64,
    max: f64,
}

impl Spectrum {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Empty);
        }
        if let Some((idx, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite { idx, value });
        }
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Ok(Spectrum { values, min, max })
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Number of microstates `W`.
    #[inline]
    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Always false; a spectrum has at least one state.
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn min(&self) -> f64 {
        self.min
    }

    #[inline]
    pub fn max(&self) -> f64 {
        self.max
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    /// `{β·x_i}`.
    pub fn scaled(&self, beta: f64) -> Result<Spectrum> {
        Spectrum::new(self.values.iter().map(|x| beta * x).collect())
    }

    /// `{x_i + c}`.
    pub fn translated(&self, c: f64) -> Result<Spectrum> {
        Spectrum::new(self.values.iter().map(|x| x + c).collect())
    }
}

impl TryFrom<Vec<f64>> for Spectrum {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Spectrum::new(values)
    }
}

/// A probability vector over `W` microstates.
///
/// Entries lie in `[0, 1]` and sum to 1 within [`NORMALIZATION_TOL`]. The
/// vector is stored exactly as given, without renormalization.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    probs: Vec<f64>,
}

impl Distribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::Empty);
        }
        if let Some((idx, &value)) = probs
            .iter()
            .enumerate()
            .find(|(_, p)| !(0.0..=1.0).contains(*p))
        {
            return Err(Error::Range { idx, value });
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::Normalization { sum });
        }
        Ok(Distribution { probs })
    }

    pub fn uniform(w: usize) -> Result<Self> {
        if w == 0 {
            return Err(Error::Empty);
        }
        Ok(Distribution {
            probs: vec![1.0 / w as f64; w],
        })
    }

    #[inline]
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.probs
    }

    /// `Σ p_i v_i`.
    pub fn expectation(&self, values: &[f64]) -> f64 {
        self.probs.iter().zip(values).map(|(p, v)| p * v).sum()
    }

    /// True when one entry carries all the mass.
    pub fn is_degenerate(&self) -> bool {
        self.probs.iter().filter(|&&p| p > 0.0).count() == 1
    }
}

impl AsRef<[f64]> for Distribution {
    fn as_ref(&self) -> &[f64] {
        &self.probs
    }
}

/// Validates a raw probability list.
pub fn validate_distribution(probs: &[f64]) -> Result<Distribution> {
    Distribution::new(probs.to_vec())
}

/// Negative-base policy for [`q_factor`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    /// A negative base is an error.
    #[default]
    Strict,
    /// A negative base evaluates to 0.
    Cutoff,
}

/// `[1 - (q-1)x]^{1/(q-1)}`, or `exp(-x)` at `q = 1`.
pub fn q_factor(x: f64, q: QParam, mode: Mode) -> Result<f64> {
    match deformed_power(x, q, 0.0) {
        Err(Error::Domain { .. }) if mode == Mode::Cutoff => Ok(0.0),
        r => r,
    }
}

/// `[1 - (q-1)x]^{1/(q-1) - offset}` in strict mode. At `q = 1` this is
/// `exp(-x)` for any offset, which is the limit of both the factor and its
/// derivative with respect to `-x`.
pub(crate) fn deformed_power(x: f64, q: QParam, offset: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::NonFinite { idx: 0, value: x });
    }
    if q.is_classical() {
        return Ok((-x).exp());
    }
    let qm1 = q.value() - 1.0;
    let t = -qm1 * x;
    let base = 1.0 + t;
    let exponent = 1.0 / qm1 - offset;
    if base < 0.0 {
        return Err(Error::Domain {
            x,
            q: q.value(),
            base,
        });
    }
    if base == 0.0 {
        return if exponent > 0.0 {
            Ok(0.0)
        } else if exponent == 0.0 {
            Ok(1.0)
        } else {
            Err(Error::Singularity("zero base with negative exponent"))
        };
    }
    // ln_1p keeps the q -> 1 approach accurate.
    Ok((exponent * t.ln_1p()).exp())
}

/// Inverts the normalized factor: `x = (1 - p^{q-1})/(q-1) + a`, or
/// `-ln p + a` at `q = 1`.
pub fn inverse_q_factor(p: f64, q: QParam, a: f64) -> Result<f64> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidProbability(p));
    }
    if q.is_classical() {
        return Ok(-p.ln() + a);
    }
    let qm1 = q.value() - 1.0;
    Ok(-(qm1 * p.ln()).exp_m1() / qm1 + a)
}
