use std::fmt::Write as _;

use reflect_core::constants::Sweep;
use reflect_core::coxeter::{CoxeterGraph, Weight};
use serde_json::{json, Value};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    InvariantViolation,
    InputError,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::InvariantViolation => "invariant-violation",
            Status::InputError => "input-error",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::InvariantViolation => 1,
            Status::InputError => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CommandResult {
    pub command: String,
    pub status: Status,
    pub payload: Value,
    pub diagnostics: Vec<String>,
}

impl CommandResult {
    pub fn ok(command: &str, payload: Value) -> Self {
        Self { command: command.into(), status: Status::Ok, payload, diagnostics: Vec::new() }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "status": self.status.as_str(),
            "payload": self.payload,
            "diagnostics": self.diagnostics,
        })
    }

    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("JSON values serialise");
        s.push('\n');
        s
    }
}

/// Fixed nine-decimal formatting, independent of locale.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        let s = format!("{x:.9}");
        if s == "-0.000000000" {
            "0.000000000".into()
        } else {
            s
        }
    }
}

pub fn weight_label(w: Weight) -> String {
    match w {
        Weight::Finite(m) => m.to_string(),
        Weight::Infinite => "inf".into(),
    }
}

pub fn weight_json(w: Weight) -> Value {
    match w {
        Weight::Finite(m) => json!(m),
        Weight::Infinite => json!("inf"),
    }
}

/// Undirected DOT graph; vertices `r1, r2, …` in reflection order, edges in
/// lexicographic order, labelled by their weight.
pub fn dot(graph: &CoxeterGraph, labels: &[String]) -> String {
    let mut s = String::from("graph coxeter {\n");
    for i in 0..graph.len() {
        let _ = writeln!(s, "  r{} [label=\"{}\"];", i + 1, i + 1);
    }
    let mut edges: Vec<_> = graph.edges.iter().map(|e| (e.i.min(e.j), e.i.max(e.j), e.weight)).collect();
    edges.sort_by_key(|&(i, j, _)| (i, j));
    for (i, j, w) in edges {
        let _ = writeln!(s, "  r{} -- r{} [label=\"{}\"];", i + 1, j + 1, weight_label(w));
    }
    for (k, label) in labels.iter().enumerate() {
        let _ = writeln!(s, "  // component {}: {}", k + 1, label);
    }
    s.push_str("}\n");
    s
}

pub fn sweep_csv(sweep: &Sweep) -> String {
    let mut s = String::from("p,c,restarts,seed\n");
    for row in &sweep.rows {
        let _ = writeln!(s, "{},{},{},{}", fmt_num(row.p), fmt_num(row.c), sweep.restarts, sweep.seed);
    }
    s
}
