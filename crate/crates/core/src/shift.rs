//! The partition sum `f(a) = Σ [1 - (q-1)(x_i - a)]^{1/(q-1)}` and the shift
//! `a₀` that makes it equal to 1, so that the q-exponential weights are
//! already a normalized distribution.
//!
//! `f` is strictly increasing on its domain. For `0 < q < 1` the domain is
//! `a < x_min + 1/(1-q)`, `f → 0` as `a → -∞` and `f` diverges at the
//! endpoint, so a root always exists. For `q > 1` the domain is
//! `a ≥ x_max - 1/(q-1)` and `f` grows without bound, so a root exists iff
//! `f` at the endpoint is at most 1.

use crate::error::{Error, Result};
use crate::qfactor::{deformed_power, Distribution, Mode, QClass, QParam, Spectrum};

/// Every successful solve satisfies `|f(a₀) - 1| ≤ RESIDUAL_CONTRACT`.
pub const RESIDUAL_CONTRACT: f64 = 1e-10;

/// Bracket width at which bisection hands over to Newton.
const NEWTON_HANDOFF_WIDTH: f64 = 1e-8;

/// Relative distance kept from an open domain endpoint.
const DOMAIN_MARGIN: f64 = 1e-13;

/// Upper bound on bracket-expansion steps; each doubles the step.
const MAX_EXPANSIONS: usize = 1100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Bisection,
    BisectionThenNewton,
    ClosedForm,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Bisection => "bisection",
            Method::BisectionThenNewton => "bisection_then_newton",
            Method::ClosedForm => "closed_form",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShiftSolution {
    pub a0: f64,
    /// `f(a₀) - 1`
    pub residual: f64,
    /// Final enclosing interval.
    pub bracket: (f64, f64),
    pub iterations: usize,
    pub method: Method,
}

/// Existence test for `q > 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeasibilityReport {
    /// `f` at the domain endpoint `a = x_max - 1/(q-1)`:
    /// `Σ [(q-1)(x_max - x_i)]^{1/(q-1)}`.
    pub endpoint_value: f64,
    /// The coarser bound `W [(q-1)(x_max - x_min)]^{1/(q-1)}`; it always
    /// dominates `endpoint_value`, so `paper_bound ≤ 1` is sufficient but not
    /// necessary.
    pub paper_bound: f64,
    /// `endpoint_value ≤ 1`
    pub feasible: bool,
}

impl FeasibilityReport {
    /// Whether the coarse sufficient condition holds.
    pub fn bound_satisfied(&self) -> bool {
        self.paper_bound <= 1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftOptions {
    /// Target for `|f(a₀) - 1|`; values above [`RESIDUAL_CONTRACT`] are clamped to it.
    pub tol: f64,
    pub max_iter: usize,
    /// Use the analytic shift at `q = 1` and `q = 2`.
    pub closed_forms: bool,
}

impl Default for ShiftOptions {
    fn default() -> Self {
        ShiftOptions {
            tol: 1e-12,
            max_iter: 200,
            closed_forms: true,
        }
    }
}

/// The finite endpoint of the domain of `f`, if any: an upper bound for
/// `q < 1`, a lower bound for `q > 1`.
pub fn domain_endpoint(spectrum: &Spectrum, q: QParam) -> Option<f64> {
    let inv = 1.0 / (q.value() - 1.0);
    match q.class() {
        QClass::SubUnit => Some(spectrum.min() - inv),
        QClass::SuperUnit => Some(spectrum.max() - inv),
        QClass::Classical => None,
    }
}

/// `f(a)`; at `q = 1`, `Σ exp(-(x_i - a))`.
pub fn partition_value(a: f64, spectrum: &Spectrum, q: QParam) -> Result<f64> {
    spectrum
        .values()
        .iter()
        .try_fold(0.0, |acc, &x| Ok(acc + deformed_power(x - a, q, 0.0)?))
}

/// `f'(a) = Σ [1 - (q-1)(x_i - a)]^{1/(q-1) - 1}`.
pub fn partition_derivative(a: f64, spectrum: &Spectrum, q: QParam) -> Result<f64> {
    spectrum
        .values()
        .iter()
        .try_fold(0.0, |acc, &x| Ok(acc + deformed_power(x - a, q, 1.0)?))
}

pub fn feasibility(spectrum: &Spectrum, q: QParam) -> FeasibilityReport {
    if q.class() != QClass::SuperUnit {
        return FeasibilityReport {
            endpoint_value: 0.0,
            paper_bound: 0.0,
            feasible: true,
        };
    }
    let qm1 = q.value() - 1.0;
    let exponent = 1.0 / qm1;
    let x_max = spectrum.max();
    let endpoint_value: f64 = spectrum
        .values()
        .iter()
        .map(|&x| (qm1 * (x_max - x)).powf(exponent))
        .sum();
    let paper_bound =
        spectrum.len() as f64 * (qm1 * (x_max - spectrum.min())).powf(exponent);
    FeasibilityReport {
        endpoint_value,
        paper_bound,
        feasible: endpoint_value <= 1.0,
    }
}

/// Solves `f(a₀) = 1` with default options.
pub fn solve_shift(spectrum: &Spectrum, q: QParam) -> Result<ShiftSolution> {
    solve_shift_with(spectrum, q, &ShiftOptions::default())
}

pub fn solve_shift_with(
    spectrum: &Spectrum,
    q: QParam,
    opts: &ShiftOptions,
) -> Result<ShiftSolution> {
    if !(opts.tol > 0.0 && opts.tol.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive and finite, got {}",
            opts.tol
        )));
    }
    let tol = opts.tol.min(RESIDUAL_CONTRACT);

    if spectrum.len() == 1 {
        return closed(spectrum, q, spectrum.values()[0]);
    }

    let mut endpoint = domain_endpoint(spectrum, q);
    if q.class() == QClass::SuperUnit {
        let report = feasibility(spectrum, q);
        if !report.feasible {
            return Err(Error::Infeasible {
                endpoint_value: report.endpoint_value,
            });
        }
        // lowest representable shift at which every base is non-negative
        let end = admissible_lower_endpoint(spectrum, q, endpoint.unwrap_or_default())?;
        if partition_value(end, spectrum, q)? >= 1.0 {
            // endpoint value is 1 up to rounding: the crossing is the endpoint
            return closed(spectrum, q, end);
        }
        endpoint = Some(end);
    }

    if opts.closed_forms {
        let w = spectrum.len() as f64;
        if q.is_classical() {
            let x_min = spectrum.min();
            let lse: f64 = spectrum
                .values()
                .iter()
                .map(|x| (-(x - x_min)).exp())
                .sum::<f64>()
                .ln();
            return closed(spectrum, q, x_min - lse);
        }
        if q.value() == 2.0 {
            let a0 = (1.0 - w + spectrum.sum()) / w;
            return closed(spectrum, q, a0.max(endpoint.unwrap_or(a0)));
        }
    }

    let f = |a: f64| partition_value(a, spectrum, q).map(|v| v - 1.0);
    let mut iterations = 0usize;

    // Establish lo < hi with f(lo) ≤ 1 ≤ f(hi).
    let (mut lo, mut hi) = match q.class() {
        QClass::SubUnit => {
            let end = endpoint.expect("sub-unit q has an upper endpoint");
            let mut hi = end - DOMAIN_MARGIN * (1.0 + end.abs());
            let mut step = 1.0;
            let mut lo = hi - step;
            while f(lo)? > 0.0 {
                hi = lo;
                step *= 2.0;
                lo = hi - step;
                iterations += 1;
                if iterations > MAX_EXPANSIONS {
                    return Err(Error::Convergence {
                        iterations,
                        residual: f(lo)?,
                    });
                }
            }
            (lo, hi)
        }
        QClass::SuperUnit => {
            let mut lo = endpoint.expect("super-unit q has a lower endpoint");
            let mut step = 1.0;
            let mut hi = lo + step;
            while f(hi)? < 0.0 {
                lo = hi;
                step *= 2.0;
                hi = lo + step;
                iterations += 1;
                if iterations > MAX_EXPANSIONS {
                    return Err(Error::Convergence {
                        iterations,
                        residual: f(hi)?,
                    });
                }
            }
            (lo, hi)
        }
        // f(x_min) ≥ 1 and f(x_min - ln W) ≤ 1
        QClass::Classical => (spectrum.min() - (spectrum.len() as f64).ln(), spectrum.min()),
    };

    let mut r_lo = f(lo)?;
    let mut r_hi = f(hi)?;
    let mut used_newton = false;
    let mut a = 0.5 * (lo + hi);

    for _ in 0..opts.max_iter {
        iterations += 1;
        let r = f(a)?;
        if r.abs() <= tol {
            return Ok(finish(a, r, (lo, hi), iterations, used_newton));
        }
        if r < 0.0 {
            lo = a;
            r_lo = r;
        } else {
            hi = a;
            r_hi = r;
        }

        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            // Bracket has collapsed to adjacent doubles.
            let (a, r) = if r_lo.abs() <= r_hi.abs() { (lo, r_lo) } else { (hi, r_hi) };
            if r.abs() <= RESIDUAL_CONTRACT {
                return Ok(finish(a, r, (lo, hi), iterations, used_newton));
            }
            return Err(Error::Convergence {
                iterations,
                residual: r,
            });
        }

        a = mid;
        if hi - lo <= NEWTON_HANDOFF_WIDTH * (1.0 + mid.abs()) {
            // Newton from the better bracket end; rejected steps keep the midpoint.
            let (pivot, rp) = if r_lo.abs() <= r_hi.abs() { (lo, r_lo) } else { (hi, r_hi) };
            if let Ok(d) = partition_derivative(pivot, spectrum, q) {
                let cand = pivot - rp / d;
                if d.is_finite() && d > 0.0 && cand > lo && cand < hi {
                    a = cand;
                    used_newton = true;
                }
            }
        }
    }

    let r = f(a)?;
    if r.abs() <= RESIDUAL_CONTRACT {
        return Ok(finish(a, r, (lo, hi), iterations, used_newton));
    }
    Err(Error::Convergence {
        iterations,
        residual: r,
    })
}

fn admissible_lower_endpoint(spectrum: &Spectrum, q: QParam, end: f64) -> Result<f64> {
    let mut a = end;
    for _ in 0..64 {
        match partition_value(a, spectrum, q) {
            Err(Error::Domain { .. }) => a = a.next_up(),
            Err(e) => return Err(e),
            Ok(_) => return Ok(a),
        }
    }
    Err(Error::Singularity("domain endpoint not representable"))
}

fn finish(a: f64, r: f64, bracket: (f64, f64), iterations: usize, newton: bool) -> ShiftSolution {
    ShiftSolution {
        a0: a,
        residual: r,
        bracket,
        iterations,
        method: if newton {
            Method::BisectionThenNewton
        } else {
            Method::Bisection
        },
    }
}

fn closed(spectrum: &Spectrum, q: QParam, a0: f64) -> Result<ShiftSolution> {
    let residual = partition_value(a0, spectrum, q)? - 1.0;
    if residual.abs() > RESIDUAL_CONTRACT {
        return Err(Error::Convergence {
            iterations: 0,
            residual,
        });
    }
    Ok(ShiftSolution {
        a0,
        residual,
        bracket: (a0, a0),
        iterations: 0,
        method: Method::ClosedForm,
    })
}

/// The self-normalized distribution `p_i = [1 - (q-1)(x_i - a₀)]^{1/(q-1)}`,
/// in spectrum order.
pub fn shifted_distribution(
    spectrum: &Spectrum,
    q: QParam,
) -> Result<(Distribution, ShiftSolution)> {
    shifted_distribution_with(spectrum, q, &ShiftOptions::default())
}

pub fn shifted_distribution_with(
    spectrum: &Spectrum,
    q: QParam,
    opts: &ShiftOptions,
) -> Result<(Distribution, ShiftSolution)> {
    let sol = solve_shift_with(spectrum, q, opts)?;
    let probs = spectrum
        .values()
        .iter()
        .map(|&x| crate::qfactor::q_factor(x - sol.a0, q, Mode::Strict))
        .collect::<Result<Vec<_>>>()?;
    Ok((Distribution::new(probs)?, sol))
}
