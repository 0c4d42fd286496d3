//! Subcommand bodies. Each returns an [`Outcome`] for `main` to emit.

use std::fs;
use std::path::Path;

use serde_json::{json, Value};

use qexp::{
    bg_entropy, compose, escort_distribution, feasibility, max_uncertainty, maxent_distribution,
    shifted_distribution, shifted_distribution_with, solve_beta, stationarity_residual,
    tsallis_entropy, two_state_sweep, uncertainty, Distribution, EscortOptions, LagrangeParams,
    QClass, QParam, ShiftOptions, Spectrum, RESIDUAL_CONTRACT,
};

use crate::args::{ComposeArgs, EntropyArgs, EscortArgs, MaxentArgs, ShiftArgs, SweepArgs};
use crate::input::{parse_list, InputError, SpectrumFile};
use crate::report::{exit, num, nums, RunReport, Status};
use crate::sweep::{partition_table, write_csv};

/// What a subcommand wants written, and the process exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: Option<String>,
    pub code: i32,
}

/// Formula and product-distribution values of the composition law must agree
/// this closely.
pub const COMPOSITION_TOL: f64 = 1e-12;
/// Bound on the Lagrangian gradient at a MaxEnt solution.
pub const STATIONARITY_TOL: f64 = 1e-8;

/// Status and exit code for a library error.
pub fn classify(e: &qexp::Error) -> (Status, i32) {
    use qexp::Error::*;
    match e {
        Infeasible { .. } => (Status::Infeasible, exit::MATH),
        Convergence { .. }
        | NonConvergence { .. }
        | Bracket { .. }
        | TargetRange { .. }
        | Domain { .. }
        | Singularity(_) => (Status::Error, exit::MATH),
        _ => (Status::Error, exit::INPUT),
    }
}

fn emit(report: RunReport, code: i32) -> Outcome {
    let stderr = report.error.clone();
    Outcome {
        stdout: report.render(),
        stderr,
        code,
    }
}

fn fail(mut report: RunReport, e: &qexp::Error) -> Outcome {
    let (status, code) = classify(e);
    report.status = status;
    report.error = Some(e.to_string());
    emit(report, code)
}

fn input_fail(mut report: RunReport, e: &InputError) -> Outcome {
    report.status = Status::Error;
    report.error = Some(e.to_string());
    emit(report, exit::INPUT)
}

/// Downgrades an ok report whose numbers break an advertised contract.
fn enforce(mut report: RunReport, violations: Vec<String>) -> Outcome {
    if violations.is_empty() {
        return emit(report, exit::OK);
    }
    report.status = Status::Error;
    report.error = Some(format!("contract violated: {}", violations.join("; ")));
    emit(report, exit::MATH)
}

fn load(path: &Path) -> Result<Spectrum, InputError> {
    SpectrumFile::load(path)?.spectrum()
}

fn parse_q(v: f64) -> Result<QParam, InputError> {
    QParam::new(v).map_err(InputError::Invalid)
}

fn probs_arg(s: &str) -> Result<Distribution, InputError> {
    let v = parse_list(s).map_err(InputError::Parse)?;
    Distribution::new(v).map_err(InputError::Invalid)
}

fn feasibility_json(spectrum: &Spectrum, q: QParam) -> Value {
    let r = feasibility(spectrum, q);
    json!({
        "endpoint_value": num(r.endpoint_value),
        "paper_bound": num(r.paper_bound),
        "feasible": r.feasible,
        "bound_satisfied": r.bound_satisfied(),
    })
}

pub fn shift(args: &ShiftArgs) -> Outcome {
    let inputs = json!({
        "spectrum": args.spectrum.display().to_string(),
        "tol": args.tol,
        "max_iter": args.max_iter,
        "closed_forms": !args.no_closed_form,
    });
    let mut report = RunReport::new("shift", inputs, Some(args.q));
    let (spectrum, q) = match load(&args.spectrum).and_then(|s| Ok((s, parse_q(args.q)?))) {
        Ok(v) => v,
        Err(e) => return input_fail(report, &e),
    };
    let opts = ShiftOptions {
        tol: args.tol,
        max_iter: args.max_iter,
        closed_forms: !args.no_closed_form,
    };
    let mut results = serde_json::Map::new();
    if q.class() == QClass::SuperUnit {
        results.insert("feasibility".into(), feasibility_json(&spectrum, q));
    }
    let (p, sol) = match shifted_distribution_with(&spectrum, q, &opts) {
        Ok(v) => v,
        Err(e) => {
            report.results = Value::Object(results);
            return fail(report, &e);
        }
    };
    results.insert("a0".into(), num(sol.a0));
    results.insert("residual".into(), num(sol.residual));
    results.insert("method".into(), json!(sol.method.as_str()));
    results.insert("bracket".into(), nums(&[sol.bracket.0, sol.bracket.1]));
    results.insert("iterations".into(), json!(sol.iterations));
    results.insert("p".into(), nums(p.probs()));
    report.results = Value::Object(results);

    let mut v = Vec::new();
    if sol.residual.abs() > RESIDUAL_CONTRACT {
        v.push(format!("|f(a0) - 1| = {:e}", sol.residual.abs()));
    }
    enforce(report, v)
}

pub fn entropy(args: &EntropyArgs) -> Outcome {
    let inputs = json!({
        "probs": args.probs,
        "spectrum": args.spectrum.as_ref().map(|p| p.display().to_string()),
    });
    let mut report = RunReport::new("entropy", inputs, Some(args.q));
    let q = match parse_q(args.q) {
        Ok(q) => q,
        Err(e) => return input_fail(report, &e),
    };
    let mut results = serde_json::Map::new();
    let p = match (&args.probs, &args.spectrum) {
        (Some(list), None) => match probs_arg(list) {
            Ok(p) => p,
            Err(e) => return input_fail(report, &e),
        },
        (None, Some(path)) => {
            let spectrum = match load(path) {
                Ok(s) => s,
                Err(e) => return input_fail(report, &e),
            };
            match shifted_distribution(&spectrum, q) {
                Ok((p, sol)) => {
                    results.insert("a0".into(), num(sol.a0));
                    results.insert("shift_residual".into(), num(sol.residual));
                    p
                }
                Err(e) => {
                    if q.class() == QClass::SuperUnit {
                        results.insert("feasibility".into(), feasibility_json(&spectrum, q));
                    }
                    report.results = Value::Object(results);
                    return fail(report, &e);
                }
            }
        }
        _ => {
            return Outcome {
                stdout: String::new(),
                stderr: Some("exactly one of --probs or --spectrum is required".into()),
                code: exit::USAGE,
            }
        }
    };
    let i = uncertainty(&p, q);
    let tsallis = match tsallis_entropy(&p, q.value()) {
        Ok(t) => t,
        Err(e) => return fail(report, &e),
    };
    results.insert("p".into(), nums(p.probs()));
    results.insert("uncertainty".into(), num(i));
    results.insert("tsallis".into(), num(tsallis));
    results.insert("bg".into(), num(bg_entropy(&p)));
    if let Ok(m) = max_uncertainty(p.len(), q) {
        results.insert("max_uncertainty".into(), num(m));
    }
    report.results = Value::Object(results);
    let mut v = Vec::new();
    if i.is_nan() || i < 0.0 {
        v.push(format!("negative uncertainty {i}"));
    }
    enforce(report, v)
}

pub fn sweep(args: &SweepArgs) -> Outcome {
    let inputs = json!({
        "q": args.q,
        "n": args.n,
        "out": args.out.as_ref().map(|p| p.display().to_string()),
        "partition": args.partition,
        "spectrum": args.spectrum.as_ref().map(|p| p.display().to_string()),
        "a_min": args.a_min,
        "a_max": args.a_max,
    });
    let mut report = RunReport::new("sweep", inputs, None);
    let qs = match args.q.iter().map(|&v| parse_q(v)).collect::<Result<Vec<_>, _>>() {
        Ok(qs) => qs,
        Err(e) => return input_fail(report, &e),
    };

    let table = if args.partition {
        let [q] = qs[..] else {
            return Outcome {
                stdout: String::new(),
                stderr: Some("--partition takes exactly one q".into()),
                code: exit::USAGE,
            };
        };
        report.q = Some(q.value());
        let spectrum = match args.spectrum.as_deref().map(load) {
            Some(Ok(s)) => s,
            Some(Err(e)) => return input_fail(report, &e),
            None => unreachable!("clap requires --spectrum with --partition"),
        };
        let (a_min, a_max) = (args.a_min.unwrap_or_default(), args.a_max.unwrap_or_default());
        partition_table(&spectrum, q, a_min, a_max, args.n)
    } else {
        two_state_sweep(&qs, args.n)
    };
    let table = match table {
        Ok(t) => t,
        Err(e) => return fail(report, &e),
    };
    let csv = write_csv(&table);

    let Some(out) = &args.out else {
        return Outcome {
            stdout: csv,
            stderr: None,
            code: exit::OK,
        };
    };
    if let Err(e) = fs::write(out, &csv) {
        report.status = Status::Error;
        report.error = Some(format!("{}: {e}", out.display()));
        return emit(report, exit::INPUT);
    }
    let mut results = serde_json::Map::new();
    results.insert("path".into(), json!(out.display().to_string()));
    results.insert("headers".into(), json!(table.headers));
    results.insert("rows".into(), json!(table.rows.len()));
    if !args.partition {
        let second: Vec<f64> = (1..table.headers.len())
            .map(|j| table.max_second_difference(j))
            .collect();
        results.insert("max_second_difference".into(), nums(&second));
    }
    report.results = Value::Object(results);
    emit(report, exit::OK)
}

pub fn maxent(args: &MaxentArgs) -> Outcome {
    let inputs = json!({
        "spectrum": args.spectrum.display().to_string(),
        "beta": args.beta,
        "target_u": args.target_u,
        "tol": args.tol,
    });
    let mut report = RunReport::new("maxent", inputs, Some(args.q));
    let (energies, q) = match load(&args.spectrum).and_then(|s| Ok((s, parse_q(args.q)?))) {
        Ok(v) => v,
        Err(e) => return input_fail(report, &e),
    };
    let solved = match (args.beta, args.target_u) {
        (Some(beta), None) => maxent_distribution(q, &energies, beta).map(|(p, s)| (beta, p, s)),
        (None, Some(u)) => {
            solve_beta(q, &energies, u, args.tol).map(|b| (b.beta, b.distribution, b.shift))
        }
        _ => {
            return Outcome {
                stdout: String::new(),
                stderr: Some("exactly one of --beta or --target-u is required".into()),
                code: exit::USAGE,
            }
        }
    };
    let (beta, p, sol) = match solved {
        Ok(v) => v,
        Err(e) => return fail(report, &e),
    };
    let achieved_u = p.expectation(energies.values());
    let params = LagrangeParams::from_shift(q, energies.clone(), beta, sol.a0);
    let stationarity = stationarity_residual(q, &energies, beta).ok();

    report.results = json!({
        "p": nums(p.probs()),
        "achieved_u": num(achieved_u),
        "beta": num(beta),
        "a0": num(sol.a0),
        "alpha": num(params.alpha),
        "shift_residual": num(sol.residual),
        "stationarity_residual": stationarity.map(num),
        "uncertainty": num(uncertainty(&p, q)),
    });
    let mut v = Vec::new();
    if let Some(r) = stationarity {
        if r > STATIONARITY_TOL {
            v.push(format!("stationarity residual {r:e}"));
        }
    }
    if let Some(u) = args.target_u {
        if (achieved_u - u).abs() > args.tol {
            v.push(format!("|U - target| = {:e}", (achieved_u - u).abs()));
        }
    }
    enforce(report, v)
}

pub fn compose_cmd(args: &ComposeArgs) -> Outcome {
    let inputs = json!({"a": args.a, "b": args.b});
    let report = RunReport::new("compose", inputs, Some(args.q));
    let parsed = (|| Ok((probs_arg(&args.a)?, probs_arg(&args.b)?, parse_q(args.q)?)))();
    let (pa, pb, q) = match parsed {
        Ok(v) => v,
        Err(e) => return input_fail(report, &e),
    };
    let c = match compose(&pa, &pb, q) {
        Ok(c) => c,
        Err(e) => return fail(report, &e),
    };
    let mut report = report;
    report.results = json!({
        "i_a": num(c.i_a),
        "i_b": num(c.i_b),
        "formula_value": num(c.formula_value),
        "direct_value": num(c.direct_value),
        "nonextensive_term": num(c.nonextensive_term),
        "discrepancy": num(c.discrepancy()),
        "agree": c.discrepancy() <= COMPOSITION_TOL,
    });
    let mut v = Vec::new();
    if c.discrepancy() > COMPOSITION_TOL {
        v.push(format!("composition discrepancy {:e}", c.discrepancy()));
    }
    enforce(report, v)
}

pub fn escort(args: &EscortArgs) -> Outcome {
    let inputs = json!({
        "spectrum": args.spectrum.display().to_string(),
        "q_tilde": args.q_tilde,
        "beta": args.beta,
        "damping": args.damping,
        "max_iter": args.max_iter,
        "tol": args.tol,
    });
    let mut report = RunReport::new("escort", inputs, Some(args.q_tilde));
    let energies = match load(&args.spectrum) {
        Ok(s) => s,
        Err(e) => return input_fail(report, &e),
    };
    let opts = EscortOptions {
        damping: args.damping,
        tol: args.tol,
        max_iter: args.max_iter,
    };
    let sol = match escort_distribution(args.q_tilde, &energies, args.beta, &opts) {
        Ok(s) => s,
        Err(e) => {
            if let qexp::Error::NonConvergence {
                iterations,
                residual,
                last,
            } = &e
            {
                report.results = json!({
                    "p": nums(last),
                    "residual": num(*residual),
                    "iterations": iterations,
                    "converged": false,
                });
            }
            return fail(report, &e);
        }
    };

    // non-self-referential q-exponential at the same numeric index
    let reference = QParam::new(args.q_tilde)
        .and_then(|q| maxent_distribution(q, &energies, args.beta));
    let (reference_p, difference, max_difference) = match &reference {
        Ok((m, _)) => {
            let d: Vec<f64> = sol.p.probs().iter().zip(m.probs()).map(|(a, b)| a - b).collect();
            let max = d.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
            (nums(m.probs()), nums(&d), num(max))
        }
        Err(_) => (Value::Null, Value::Null, Value::Null),
    };
    report.results = json!({
        "p": nums(sol.p.probs()),
        "residual": num(sol.residual),
        "iterations": sol.iterations,
        "converged": sol.converged,
        "q_exponential_p": reference_p,
        "difference": difference,
        "max_difference": max_difference,
    });
    let mut v = Vec::new();
    if sol.residual > args.tol {
        v.push(format!("escort residual {:e}", sol.residual));
    }
    enforce(report, v)
}
