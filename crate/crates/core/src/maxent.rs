//! Maximum-entropy side: the Lagrange-multiplier form of the q-exponential,
//! inversion of β against a target mean energy, and the self-referential
//! escort distribution used as a contrast.
//!
//! Stationarity of `L = I - α Σ p_i - β Σ p_i ε_i` gives
//! `p_i = [(1-q)α - (q-1)βε_i]^{1/(q-1)}`, which is the shifted q-exponential
//! with `x_i = βε_i` and `a = -α - 1/(q-1)`. At `q = 1` the gradient of
//! `-Σ p ln p` is `-ln p - 1`, so `p_i = exp(-1 - α - βε_i)` and `a = -1 - α`.

use crate::error::{Error, Result};
use crate::qfactor::{Distribution, QParam, Spectrum};
use crate::shift::{feasibility, shifted_distribution, ShiftSolution};

/// Multipliers of the normalization (`alpha`) and energy (`beta`) constraints.
#[derive(Debug, Clone, PartialEq)]
pub struct LagrangeParams {
    pub alpha: f64,
    pub beta: f64,
    pub energies: Spectrum,
}

impl LagrangeParams {
    /// The α consistent with a solved shift `a0` on `{β ε_i}`.
    pub fn from_shift(q: QParam, energies: Spectrum, beta: f64, a0: f64) -> Self {
        let alpha = if q.is_classical() {
            -1.0 - a0
        } else {
            -a0 - 1.0 / (q.value() - 1.0)
        };
        LagrangeParams {
            alpha,
            beta,
            energies,
        }
    }

    /// The shift `a` implied by α.
    pub fn shift(&self, q: QParam) -> f64 {
        if q.is_classical() {
            -1.0 - self.alpha
        } else {
            -self.alpha - 1.0 / (q.value() - 1.0)
        }
    }

    /// `x_i = β ε_i`
    pub fn scaled_values(&self) -> Vec<f64> {
        self.energies.values().iter().map(|e| self.beta * e).collect()
    }
}

/// Evaluates the stationary distribution directly from `(α, β)`.
///
/// Fails with [`Error::Domain`] when a base is negative and with
/// [`Error::Normalization`] when α is not the normalizing multiplier.
pub fn lagrange_distribution(q: QParam, params: &LagrangeParams) -> Result<Distribution> {
    let (alpha, beta) = (params.alpha, params.beta);
    let probs = params
        .energies
        .values()
        .iter()
        .map(|&e| {
            if q.is_classical() {
                return Ok((-1.0 - alpha - beta * e).exp());
            }
            let qm1 = q.value() - 1.0;
            let base = -qm1 * (alpha + beta * e);
            if base < 0.0 {
                return Err(Error::Domain {
                    x: beta * e,
                    q: q.value(),
                    base,
                });
            }
            Ok(base.powf(1.0 / qm1))
        })
        .collect::<Result<Vec<_>>>()?;
    Distribution::new(probs)
}

/// The MaxEnt distribution at multiplier β: the self-normalized q-exponential
/// on `{β ε_i}`.
pub fn maxent_distribution(
    q: QParam,
    energies: &Spectrum,
    beta: f64,
) -> Result<(Distribution, ShiftSolution)> {
    if !beta.is_finite() {
        return Err(Error::InvalidArgument(format!("beta must be finite, got {beta}")));
    }
    shifted_distribution(&energies.scaled(beta)?, q)
}

/// Result of [`solve_beta`].
#[derive(Debug, Clone, PartialEq)]
pub struct BetaSolution {
    pub beta: f64,
    pub distribution: Distribution,
    pub shift: ShiftSolution,
    /// `Σ p_i ε_i`
    pub achieved_u: f64,
    pub iterations: usize,
}

const BETA_MAX_EXPANSIONS: u32 = 48;
const BETA_MAX_ITER: usize = 400;
/// Candidates at the feasibility limit are pulled inside by this relative amount.
const FEASIBLE_CLIP: f64 = 1e-12;

/// Largest `|β|` on each side for which `{β ε_i}` stays feasible (`q > 1`).
fn feasible_beta_limits(q: QParam, energies: &Spectrum) -> (f64, f64) {
    if q.value() <= 1.0 {
        return (f64::NEG_INFINITY, f64::INFINITY);
    }
    let qm1 = q.value() - 1.0;
    let e = 1.0 / qm1;
    // endpoint value of {βε} scales as |β|^{1/(q-1)}
    let sum_pos: f64 = energies
        .values()
        .iter()
        .map(|&x| (qm1 * (energies.max() - x)).powf(e))
        .sum();
    let sum_neg: f64 = energies
        .values()
        .iter()
        .map(|&x| (qm1 * (x - energies.min())).powf(e))
        .sum();
    let limit = |s: f64| if s > 0.0 { s.powf(-qm1) } else { f64::INFINITY };
    (-limit(sum_neg), limit(sum_pos))
}

/// Finds β such that the MaxEnt distribution has mean energy `target_u`.
///
/// The energy constraint is bracketed by expanding a symmetric interval
/// around β = 0 (clipped to feasible β for `q > 1`) and then bisected; no
/// monotonicity of `U(β)` is assumed.
pub fn solve_beta(
    q: QParam,
    energies: &Spectrum,
    target_u: f64,
    tol: f64,
) -> Result<BetaSolution> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let (lo_e, hi_e) = (energies.min(), energies.max());
    let degenerate = lo_e == hi_e;
    let inside = if degenerate {
        target_u == lo_e
    } else {
        target_u > lo_e && target_u < hi_e
    };
    if !inside {
        return Err(Error::TargetRange {
            target: target_u,
            lo: lo_e,
            hi: hi_e,
        });
    }

    let mut iterations = 0usize;
    let mut eval = |beta: f64| -> Result<(f64, Distribution, ShiftSolution)> {
        iterations += 1;
        let (p, sol) = maxent_distribution(q, energies, beta)?;
        let u = p.expectation(energies.values());
        Ok((u - target_u, p, sol))
    };

    let (g0, p0, s0) = eval(0.0)?;
    if degenerate || g0.abs() <= tol {
        return Ok(BetaSolution {
            beta: 0.0,
            achieved_u: target_u + g0,
            distribution: p0,
            shift: s0,
            iterations: 1,
        });
    }

    let (limit_neg, limit_pos) = feasible_beta_limits(q, energies);
    let clip = |b: f64, limit: f64| {
        if b.abs() >= limit.abs() {
            limit * (1.0 - FEASIBLE_CLIP)
        } else {
            b
        }
    };

    // inner keeps the sign of g0, outer has the opposite sign
    let mut bracket = None;
    let mut inner = [0.0f64, 0.0f64];
    let mut clipped = [false, false];
    for k in 0..BETA_MAX_EXPANSIONS {
        let b = 2f64.powi(k as i32);
        for (side, (sign, limit)) in [(1.0, limit_pos), (-1.0, limit_neg)].into_iter().enumerate() {
            if clipped[side] {
                continue;
            }
            let mut cand = clip(sign * b, limit);
            clipped[side] = cand != sign * b;
            // right at the limit the shift root sits within rounding of the
            // domain endpoint, so retreat until it can be resolved
            let mut retreat = FEASIBLE_CLIP;
            let evaluated = loop {
                match eval(cand) {
                    Err(Error::Convergence { .. }) if clipped[side] && retreat < 1e-4 => {
                        retreat *= 100.0;
                        cand = limit * (1.0 - retreat);
                    }
                    other => break other,
                }
            };
            let (g, ..) = match evaluated {
                Ok(v) => v,
                Err(Error::Infeasible { .. }) => {
                    clipped[side] = true;
                    continue;
                }
                Err(e) => return Err(e),
            };
            if g.abs() <= tol || g.signum() != g0.signum() {
                bracket = Some((inner[side], cand, g));
                break;
            }
            inner[side] = cand;
        }
        if bracket.is_some() || (clipped[0] && clipped[1]) {
            break;
        }
    }
    let Some((mut b_in, mut b_out, g_out)) = bracket else {
        return Err(Error::Bracket {
            lo: inner[1],
            hi: inner[0],
        });
    };

    if g_out.abs() <= tol {
        let (g, p, s) = eval(b_out)?;
        return Ok(BetaSolution {
            beta: b_out,
            achieved_u: target_u + g,
            distribution: p,
            shift: s,
            iterations,
        });
    }

    let mut best: Option<(f64, f64, Distribution, ShiftSolution)> = None;
    for _ in 0..BETA_MAX_ITER {
        let mid = 0.5 * (b_in + b_out);
        if mid == b_in || mid == b_out {
            break;
        }
        let (g, p, s) = eval(mid)?;
        if best.as_ref().is_none_or(|b| g.abs() < b.1.abs()) {
            best = Some((mid, g, p, s));
        }
        if g.abs() <= tol {
            break;
        }
        if g.signum() == g0.signum() {
            b_in = mid;
        } else {
            b_out = mid;
        }
    }
    match best {
        Some((beta, g, distribution, shift)) if g.abs() <= tol => Ok(BetaSolution {
            beta,
            achieved_u: target_u + g,
            distribution,
            shift,
            iterations,
        }),
        Some((_, g, ..)) => Err(Error::Convergence {
            iterations,
            residual: g,
        }),
        None => Err(Error::Convergence {
            iterations,
            residual: g_out,
        }),
    }
}

/// `max_i |∂I/∂p_i - α - β ε_i|` at the MaxEnt distribution, with α
/// reconstructed from the solved shift.
pub fn stationarity_residual(q: QParam, energies: &Spectrum, beta: f64) -> Result<f64> {
    let (p, sol) = maxent_distribution(q, energies, beta)?;
    if p.probs().iter().any(|&pi| pi <= 0.0) {
        return Err(Error::InvalidArgument(
            "stationarity needs every probability > 0".into(),
        ));
    }
    let params = LagrangeParams::from_shift(q, energies.clone(), beta, sol.a0);
    let qv = q.value();
    Ok(p.probs()
        .iter()
        .zip(energies.values())
        .map(|(&pi, &e)| {
            let grad = if q.is_classical() {
                -pi.ln() - 1.0
            } else {
                -pi.powf(qv - 1.0) / (qv - 1.0)
            };
            (grad - params.alpha - beta * e).abs()
        })
        .fold(0.0, f64::max))
}

/// Settings for [`escort_distribution`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EscortOptions {
    /// Weight of the new iterate, in `(0, 1]`.
    pub damping: f64,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for EscortOptions {
    fn default() -> Self {
        EscortOptions {
            damping: 0.5,
            tol: 1e-10,
            max_iter: 10_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EscortSolution {
    pub p: Distribution,
    /// `max_i |T(p)_i - p_i|`
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn escort_bases(p: &[f64], q_tilde: f64, x: &[f64]) -> Vec<f64> {
    let weights: Vec<f64> = p.iter().map(|&pi| pi.powf(q_tilde)).collect();
    let s: f64 = weights.iter().sum();
    let mean = weights.iter().zip(x).map(|(w, xi)| w * xi).sum::<f64>() / s;
    x.iter()
        .map(|&xi| 1.0 - (1.0 - q_tilde) * (xi - mean) / s)
        .collect()
}

/// One undamped application of the self-referential map
/// `T(p)_i ∝ [1 - (1-q̃)(x_i - x̄)/Σ_j p_j^{q̃}]^{1/(1-q̃)}` with escort mean
/// `x̄ = Σ p_i^{q̃} x_i / Σ p_j^{q̃}`. Negative brackets are cut off to 0.
pub fn escort_map(p: &[f64], q_tilde: f64, x: &[f64]) -> Result<Vec<f64>> {
    let exponent = 1.0 / (1.0 - q_tilde);
    let u: Vec<f64> = escort_bases(p, q_tilde, x)
        .into_iter()
        .map(|b| if b < 0.0 { 0.0 } else { b.powf(exponent) })
        .collect();
    let z: f64 = u.iter().sum();
    if !(z.is_finite() && z > 0.0) {
        return Err(Error::Singularity("escort partition function is not finite and positive"));
    }
    Ok(u.into_iter().map(|ui| ui / z).collect())
}

/// Damped fixed-point solve of the escort distribution from the uniform start.
pub fn escort_distribution(
    q_tilde: f64,
    energies: &Spectrum,
    beta: f64,
    opts: &EscortOptions,
) -> Result<EscortSolution> {
    if !(q_tilde.is_finite() && q_tilde > 0.0) {
        return Err(Error::InvalidQ(q_tilde));
    }
    if !(opts.damping > 0.0 && opts.damping <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "damping must lie in (0, 1], got {}",
            opts.damping
        )));
    }
    if !beta.is_finite() {
        return Err(Error::InvalidArgument(format!("beta must be finite, got {beta}")));
    }
    let x: Vec<f64> = energies.values().iter().map(|e| beta * e).collect();

    if q_tilde == 1.0 {
        let x_min = x.iter().copied().fold(f64::INFINITY, f64::min);
        let w: Vec<f64> = x.iter().map(|xi| (-(xi - x_min)).exp()).collect();
        let z: f64 = w.iter().sum();
        return Ok(EscortSolution {
            p: Distribution::new(w.into_iter().map(|wi| wi / z).collect())?,
            residual: 0.0,
            iterations: 0,
            converged: true,
        });
    }

    let n = x.len();
    let mut p = vec![1.0 / n as f64; n];
    let mut residual = f64::INFINITY;
    for iterations in 0..=opts.max_iter {
        let t = escort_map(&p, q_tilde, &x)?;
        residual = t
            .iter()
            .zip(&p)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        if residual <= opts.tol {
            if let Some(&base) = escort_bases(&p, q_tilde, &x).iter().find(|&&b| b < 0.0) {
                return Err(Error::Domain {
                    x: f64::NAN,
                    q: q_tilde,
                    base,
                });
            }
            return Ok(EscortSolution {
                p: Distribution::new(p)?,
                residual,
                iterations,
                converged: true,
            });
        }
        if iterations == opts.max_iter {
            break;
        }
        for (pi, ti) in p.iter_mut().zip(&t) {
            *pi = (1.0 - opts.damping) * *pi + opts.damping * ti;
        }
    }
    Err(Error::NonConvergence {
        iterations: opts.max_iter,
        residual,
        last: p,
    })
}

/// Whether `{β ε_i}` admits a real shift at `q`.
pub fn beta_feasible(q: QParam, energies: &Spectrum, beta: f64) -> Result<bool> {
    Ok(feasibility(&energies.scaled(beta)?, q).feasible)
}
