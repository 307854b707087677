//! Command reports with deterministic field order, rendered as text, JSON or CSV.

use clap::ValueEnum;
use num_complex::Complex64;
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Pass,
    Fail,
    /// The check could not run within its coverage or tail budget.
    Budget(String),
    Error(String),
}

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub measured: Option<f64>,
    pub tolerance: f64,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    command: String,
    params: Map<String, Value>,
    values: Map<String, Value>,
    checks: Vec<Check>,
    wall_time: Option<f64>,
}

pub fn complex(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

fn text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Object(m) if m.len() == 2 && m.contains_key("re") && m.contains_key("im") => {
            let re = m["re"].as_f64().unwrap_or(f64::NAN);
            let im = m["im"].as_f64().unwrap_or(f64::NAN);
            format!("{re:e} {} {:e}i", if im < 0.0 { '-' } else { '+' }, im.abs())
        }
        Value::Array(items) => items.iter().map(text).collect::<Vec<_>>().join(", "),
        other => other.to_string(),
    }
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.into(),
            ..Default::default()
        }
    }

    pub fn param(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.params.insert(key.into(), value.into());
        self
    }

    pub fn value(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.values.insert(key.into(), value.into());
        self
    }

    pub fn check(&mut self, name: impl Into<String>, measured: Option<f64>, tolerance: f64, outcome: Outcome) {
        self.checks.push(Check {
            name: name.into(),
            measured,
            tolerance,
            outcome,
        });
    }

    /// Records `measured < tolerance` as the outcome.
    pub fn bound(&mut self, name: impl Into<String>, measured: f64, tolerance: f64) {
        let outcome = if measured < tolerance { Outcome::Pass } else { Outcome::Fail };
        self.check(name, Some(measured), tolerance, outcome);
    }

    pub fn checks(&self) -> &[Check] {
        &self.checks
    }

    pub fn set_wall_time(&mut self, seconds: f64) {
        self.wall_time = Some(seconds);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut root = Map::new();
                root.insert("command".into(), self.command.clone().into());
                root.insert("parameters".into(), Value::Object(self.params.clone()));
                root.insert("values".into(), Value::Object(self.values.clone()));
                if !self.checks.is_empty() {
                    let checks = self
                        .checks
                        .iter()
                        .map(|c| {
                            let (status, detail) = status(&c.outcome);
                            json!({
                                "name": c.name,
                                "measured": c.measured,
                                "tolerance": c.tolerance,
                                "status": status,
                                "detail": detail,
                            })
                        })
                        .collect();
                    root.insert("checks".into(), Value::Array(checks));
                }
                if let Some(t) = self.wall_time {
                    root.insert("wall_time_s".into(), t.into());
                }
                let mut s = serde_json::to_string_pretty(&Value::Object(root)).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Text => {
                let mut out = format!("{}\n", self.command);
                for (k, v) in &self.params {
                    out += &format!("  {k} = {}\n", text(v));
                }
                for (k, v) in &self.values {
                    out += &format!("{k}: {}\n", text(v));
                }
                for c in &self.checks {
                    let (status, detail) = status(&c.outcome);
                    let measured = c.measured.map_or("-".to_string(), |m| format!("{m:.3e}"));
                    out += &format!("[{status}] {}  measured {measured}  tolerance {:.1e}", c.name, c.tolerance);
                    if let Some(d) = detail {
                        out += &format!("  ({d})");
                    }
                    out.push('\n');
                }
                if let Some(t) = self.wall_time {
                    out += &format!("wall time: {t:.3} s\n");
                }
                out
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(["section", "key", "value"]).expect("in-memory write");
                for (k, v) in &self.params {
                    w.write_record(["parameter", k, &text(v)]).expect("in-memory write");
                }
                for (k, v) in &self.values {
                    w.write_record(["value", k, &text(v)]).expect("in-memory write");
                }
                for c in &self.checks {
                    let (status, _) = status(&c.outcome);
                    let measured = c.measured.map_or(String::new(), |m| format!("{m:e}"));
                    w.write_record(["check", &c.name, &format!("{status} {measured}")]).expect("in-memory write");
                }
                String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 output")
            }
        }
    }
}

fn status(o: &Outcome) -> (&'static str, Option<String>) {
    match o {
        Outcome::Pass => ("PASS", None),
        Outcome::Fail => ("FAIL", None),
        Outcome::Budget(m) => ("BUDGET", Some(m.clone())),
        Outcome::Error(m) => ("ERROR", Some(m.clone())),
    }
}
