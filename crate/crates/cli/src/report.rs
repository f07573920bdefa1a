use std::io::Write;

use moditer_core::C64;
use serde::Serialize;
use serde_json::Value;

/// Rounds to 15 significant digits so repeated runs print identical bytes.
pub fn round15(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.14e}").parse().unwrap_or(x)
}

pub fn complex(z: C64) -> [f64; 2] {
    [round15(z.re), round15(z.im)]
}

#[derive(Clone, Debug, Serialize)]
pub struct Config {
    pub order: usize,
    pub height: f64,
    pub panels: usize,
    pub tol: f64,
    pub cutoff: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct NamedValue {
    pub name: String,
    pub value: [f64; 2],
    pub error: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub lhs: [f64; 2],
    pub rhs: [f64; 2],
    pub diff: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    /// Passes when `|lhs - rhs| <= tolerance * max(1, |rhs|)` or, with
    /// `relative`, `<= tolerance * |rhs|`.
    pub fn new(name: impl Into<String>, lhs: C64, rhs: C64, tolerance: f64, relative: bool) -> Self {
        let diff = (lhs - rhs).norm();
        let scale = if relative { rhs.norm() } else { rhs.norm().max(1.0) };
        Check {
            name: name.into(),
            lhs: complex(lhs),
            rhs: complex(rhs),
            diff: round15(diff),
            tolerance,
            pass: diff <= tolerance * scale,
        }
    }

    pub fn exact(name: impl Into<String>, pass: bool) -> Self {
        let one = C64::new(if pass { 1.0 } else { 0.0 }, 0.0);
        Check {
            name: name.into(),
            lhs: complex(one),
            rhs: [1.0, 0.0],
            diff: if pass { 0.0 } else { 1.0 },
            tolerance: 0.0,
            pass,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub subcommand: String,
    pub inputs: Value,
    pub config: Config,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub values: Vec<NamedValue>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub passed: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failed: Option<usize>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub details: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
}

impl RunReport {
    pub fn new(subcommand: &str, inputs: Value, config: Config) -> Self {
        RunReport {
            subcommand: subcommand.to_string(),
            inputs,
            config,
            values: Vec::new(),
            checks: Vec::new(),
            passed: None,
            failed: None,
            details: Value::Null,
            wall_time_s: None,
        }
    }

    pub fn value(&mut self, name: impl Into<String>, value: C64, error: f64) {
        self.values.push(NamedValue {
            name: name.into(),
            value: complex(value),
            error: round15(error),
        });
    }

    pub fn check(&mut self, check: Check) {
        self.checks.push(check);
        let passed = self.checks.iter().filter(|c| c.pass).count();
        self.passed = Some(passed);
        self.failed = Some(self.checks.len() - passed);
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.pass)
    }

    pub fn write_json(&self, out: &mut impl Write) -> std::io::Result<()> {
        serde_json::to_writer_pretty(&mut *out, self)?;
        writeln!(out)
    }

    /// One row per value and per check.
    pub fn write_csv(&self, out: &mut impl Write) -> std::io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["kind", "name", "re", "im", "error", "rhs_re", "rhs_im", "tolerance", "pass"])?;
        for v in &self.values {
            w.write_record([
                "value".to_string(),
                v.name.clone(),
                v.value[0].to_string(),
                v.value[1].to_string(),
                v.error.to_string(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
            ])?;
        }
        for c in &self.checks {
            w.write_record([
                "check".to_string(),
                c.name.clone(),
                c.lhs[0].to_string(),
                c.lhs[1].to_string(),
                c.diff.to_string(),
                c.rhs[0].to_string(),
                c.rhs[1].to_string(),
                c.tolerance.to_string(),
                c.pass.to_string(),
            ])?;
        }
        if let Value::Object(map) = &self.details {
            for (k, v) in map {
                let text = match v {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                };
                w.write_record(["detail", k, &text, "", "", "", "", "", ""])?;
            }
        }
        w.flush()
    }
}
