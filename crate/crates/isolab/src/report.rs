//! Machine-readable command reports.
//!
//! Reports are JSON objects with lexicographically sorted keys. Reals are
//! written in scientific notation with 17 significant digits, complex
//! numbers as `[re, im]`, and non-finite reals as `null`.

use std::str::FromStr;

use isolab_core::linalg::ComplexMatrix;
use num_complex::Complex64;
use serde_json::{Map, Number, Value};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    // Normalize negative zero so equal values print identically.
    let x = if x == 0.0 { 0.0 } else { x };
    Number::from_str(&format!("{x:.16e}"))
        .map(Value::Number)
        .expect("scientific notation is a JSON number")
}

pub fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| num(x)).collect())
}

pub fn complex(z: Complex64) -> Value {
    Value::Array(vec![num(z.re), num(z.im)])
}

pub fn complex_vec(zs: &[Complex64]) -> Value {
    Value::Array(zs.iter().map(|&z| complex(z)).collect())
}

/// Rows of `[re, im]` pairs.
pub fn complex_matrix(m: &ComplexMatrix) -> Value {
    Value::Array((0..m.rows()).map(|r| complex_vec(m.row(r))).collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    command: String,
    inputs: Map<String, Value>,
    results: Map<String, Value>,
    seed: Option<u64>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            inputs: Map::new(),
            results: Map::new(),
            seed: None,
        }
    }

    pub fn input(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.inputs.insert(key.to_string(), value.into());
        self
    }

    pub fn result(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.results.insert(key.to_string(), value.into());
        self
    }

    pub fn seed(&mut self, seed: u64) -> &mut Self {
        self.seed = Some(seed);
        self
    }

    pub fn results(&self) -> &Map<String, Value> {
        &self.results
    }

    pub fn to_value(&self) -> Value {
        let mut top = Map::new();
        top.insert("command".into(), Value::from(self.command.clone()));
        top.insert("inputs".into(), Value::Object(self.inputs.clone()));
        top.insert("results".into(), Value::Object(self.results.clone()));
        top.insert("version".into(), Value::from(VERSION));
        if let Some(s) = self.seed {
            top.insert("seed".into(), Value::from(s));
        }
        Value::Object(top)
    }

    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("report serializes");
        s.push('\n');
        s
    }
}
