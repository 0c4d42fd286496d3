use serde_json::{Map, Number, Value};

use crate::format::fmt17;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    Infeasible,
    Error,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Infeasible => "infeasible",
            Status::Error => "error",
        }
    }
}

/// Exit codes: 0 ok, 1 input or IO error, 2 infeasible or not converged,
/// 64 usage error.
pub mod exit {
    pub const OK: i32 = 0;
    pub const INPUT: i32 = 1;
    pub const MATH: i32 = 2;
    pub const USAGE: i32 = 64;
}

/// One JSON object per invocation.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub command: String,
    pub inputs: Value,
    pub q: Option<f64>,
    pub results: Value,
    pub status: Status,
    pub error: Option<String>,
}

impl RunReport {
    pub fn new(command: impl Into<String>, inputs: Value, q: Option<f64>) -> Self {
        RunReport {
            command: command.into(),
            inputs,
            q,
            results: Value::Object(Map::new()),
            status: Status::Ok,
            error: None,
        }
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("command".into(), Value::String(self.command.clone()));
        m.insert("inputs".into(), self.inputs.clone());
        m.insert("q".into(), self.q.map(num).unwrap_or(Value::Null));
        m.insert("results".into(), self.results.clone());
        m.insert("status".into(), Value::String(self.status.as_str().into()));
        if let Some(e) = &self.error {
            m.insert("error".into(), Value::String(e.clone()));
        }
        render_floats(Value::Object(m))
    }

    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("serializable");
        s.push('\n');
        s
    }
}

/// A JSON number carrying the 17-significant-digit rendering of `x`;
/// non-finite values become `null`.
pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    match fmt17(x).parse::<Number>() {
        Ok(n) => Value::Number(n),
        Err(_) => Value::Null,
    }
}

pub fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().copied().map(num).collect())
}

/// Rewrites every floating-point number in `v` to 17 significant digits.
fn render_floats(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => num(n.as_f64().unwrap_or(f64::NAN)),
        Value::Array(a) => Value::Array(a.into_iter().map(render_floats).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, render_floats(v))).collect()),
        other => other,
    }
}
