use std::time::Duration;

use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Sat,
    Unsat,
    Timeout,
    Error,
    Ok,
    Fail,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Sat => "SAT",
            Verdict::Unsat => "UNSAT",
            Verdict::Timeout => "TIMEOUT",
            Verdict::Error => "ERROR",
            Verdict::Ok => "OK",
            Verdict::Fail => "FAIL",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Sat => 10,
            Verdict::Unsat => 20,
            Verdict::Timeout => 30,
            Verdict::Error => 1,
            Verdict::Ok => 0,
            Verdict::Fail => 2,
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Stats {
    pub n: usize,
    pub m: usize,
    pub k: usize,
}

#[derive(Debug)]
pub struct RunReport {
    pub verdict: Verdict,
    pub witness: Option<String>,
    pub wall: Duration,
    pub stats: Stats,
    pub seed: u64,
    /// Extra `key: value` lines, in order.
    pub notes: Vec<(String, Value)>,
}

impl RunReport {
    pub fn new(verdict: Verdict, stats: Stats, seed: u64) -> Self {
        RunReport {
            verdict,
            witness: None,
            wall: Duration::ZERO,
            stats,
            seed,
            notes: Vec::new(),
        }
    }

    pub fn note(&mut self, key: &str, value: impl Into<Value>) {
        self.notes.push((key.to_string(), value.into()));
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "verdict": self.verdict.label(),
            "witness": self.witness,
            "wall_ms": self.wall.as_secs_f64() * 1e3,
            "n": self.stats.n,
            "m": self.stats.m,
            "k": self.stats.k,
            "seed": self.seed,
        });
        for (key, value) in &self.notes {
            v[key] = value.clone();
        }
        v
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("verdict: {}\n", self.verdict.label());
        if let Some(w) = &self.witness {
            out.push_str(&format!("witness: {w}\n"));
        }
        out.push_str(&format!(
            "n: {}  m: {}  k: {}\nwall: {:.3} ms\nseed: {}\n",
            self.stats.n,
            self.stats.m,
            self.stats.k,
            self.wall.as_secs_f64() * 1e3,
            self.seed
        ));
        for (key, value) in &self.notes {
            match value {
                Value::String(s) => out.push_str(&format!("{key}: {s}\n")),
                other => out.push_str(&format!("{key}: {other}\n")),
            }
        }
        out
    }
}
