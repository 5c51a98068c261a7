//! JSON reports and the plain-text summary.
//!
//! Key order follows struct field order and maps are `BTreeMap`s, so equal
//! inputs serialize to equal bytes. Wall-clock data lives only under
//! `timings_ms`.

use std::collections::BTreeMap;
use std::fmt::Write;

use cfgi_core::closure::Method;
use cfgi_core::{ClosureResult, CnfGrammar, LabelSet, Rhs};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::pipeline::{Instance, MethodRun, Outcome, RunOutcome};

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OpStats {
    pub unions: usize,
    pub products: usize,
    pub stars: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MethodReport {
    pub method: String,
    /// `ok`, `cap-exceeded`, `budget-exceeded` or `error`.
    pub status: String,
    pub included: Option<bool>,
    pub counterexample: Option<String>,
    pub counterexample_len: Option<usize>,
    /// True when the verdict only covers words up to a length bound.
    pub bounded: bool,
    pub failing_line: Option<u8>,
    pub failing_vertex: Option<String>,
    pub failing_set: Option<Vec<String>>,
    pub ops: Option<OpStats>,
    pub max_set_size: Option<usize>,
    pub note: Option<String>,
    pub error: Option<String>,
}

impl MethodReport {
    pub fn from_run(run: &MethodRun, g: &CnfGrammar, vertex_names: &[String]) -> Self {
        let mut r = MethodReport {
            method: run.method.name().to_string(),
            status: "ok".to_string(),
            included: None,
            counterexample: None,
            counterexample_len: None,
            bounded: false,
            failing_line: None,
            failing_vertex: None,
            failing_set: None,
            ops: None,
            max_set_size: None,
            note: None,
            error: None,
        };
        match &run.result {
            Err(e) => {
                r.status = e.status().to_string();
                r.error = Some(e.to_string());
            }
            Ok(v) => {
                let d = &v.diagnostics;
                r.included = Some(v.included);
                r.counterexample = v.counterexample.as_ref().map(|w| g.render_word(w));
                r.counterexample_len = v.counterexample.as_ref().map(Vec::len);
                r.bounded = d.bounded;
                r.failing_line = d.failing_line;
                r.failing_vertex = d.failing_vertex.map(|j| {
                    vertex_names
                        .get(j)
                        .cloned()
                        .unwrap_or_else(|| j.to_string())
                });
                r.failing_set = d
                    .failing_set
                    .as_ref()
                    .map(|s: &LabelSet| s.render(vertex_names));
                r.ops = d.counts.map(|c| OpStats {
                    unions: c.unions,
                    products: c.products,
                    stars: c.stars,
                });
                r.max_set_size = d.max_set_size;
                r.note = d.note.map(str::to_string);
            }
        }
        r
    }
}

/// Pairwise agreement of finished methods; `None` when either side failed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Agreement {
    pub methods: Vec<String>,
    pub matrix: Vec<Vec<Option<bool>>>,
}

impl Agreement {
    pub fn of(runs: &[MethodRun]) -> Self {
        let verdicts: Vec<Option<bool>> = runs
            .iter()
            .map(|r| r.result.as_ref().ok().map(|v| v.included))
            .collect();
        let matrix = verdicts
            .iter()
            .map(|a| {
                verdicts
                    .iter()
                    .map(|b| match (a, b) {
                        (Some(x), Some(y)) => Some(x == y),
                        _ => None,
                    })
                    .collect()
            })
            .collect();
        Agreement {
            methods: runs.iter().map(|r| r.method.name().to_string()).collect(),
            matrix,
        }
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.matrix.len();
        (0..n).all(|i| (0..n).all(|j| self.matrix[i][j] == self.matrix[j][i]))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InputSummary {
    pub grammar_sha256: Option<String>,
    pub group_sha256: Option<String>,
    pub group_kind: String,
    pub rank: usize,
    pub nonterminals: Vec<String>,
    pub terminals: Vec<String>,
    pub productions: Vec<String>,
    pub morphism: Vec<String>,
    pub arcs: Option<usize>,
    pub arcs_with_multiplicity: Option<usize>,
}

pub fn render_rules(g: &CnfGrammar) -> Vec<String> {
    let nts = g.nonterminals();
    g.rules()
        .iter()
        .map(|r| {
            let rhs = match r.rhs {
                Rhs::Pair(b, c) => format!("{} {}", nts[b], nts[c]),
                Rhs::Terminal(t) => format!("'{}'", g.terminals()[t]),
                Rhs::Empty => "eps".to_string(),
            };
            format!("{} -> {}", nts[r.lhs], rhs)
        })
        .collect()
}

impl InputSummary {
    pub fn of(inst: &Instance, grammar_src: Option<&[u8]>, group_src: Option<&[u8]>) -> Self {
        let g = &inst.grammar;
        let diagram = (!g.is_empty_language())
            .then(|| inst.diagram().ok())
            .flatten();
        InputSummary {
            grammar_sha256: grammar_src.map(sha256_hex),
            group_sha256: group_src.map(sha256_hex),
            group_kind: inst.backend.kind().to_string(),
            rank: inst.backend.rank(),
            nonterminals: g.nonterminals().to_vec(),
            terminals: g.terminals().to_vec(),
            productions: render_rules(g),
            morphism: g
                .terminals()
                .iter()
                .zip(inst.morphism.images())
                .map(|(t, w)| format!("{t} -> {}", cfgi_core::group::render_letters(w)))
                .collect(),
            arcs: diagram.as_ref().map(|d| d.arcs().len()),
            arcs_with_multiplicity: diagram.as_ref().map(|d| d.multiset_len()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosureStats {
    pub vertices: usize,
    pub unions: usize,
    pub products: usize,
    pub max_set_size: usize,
}

impl From<&ClosureResult> for ClosureStats {
    fn from(c: &ClosureResult) -> Self {
        ClosureStats {
            vertices: c.size,
            unions: c.counts.unions,
            products: c.counts.products,
            max_set_size: c.max_set_size,
        }
    }
}

/// Report of a single `decide` run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub outcome: String,
    pub exit_code: u8,
    pub inputs: InputSummary,
    pub verdicts: Vec<MethodReport>,
    pub agreement: Agreement,
    pub closure: Option<ClosureStats>,
    pub timings_ms: BTreeMap<String, f64>,
}

fn ms(d: std::time::Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

impl Report {
    pub fn build(inst: &Instance, out: &RunOutcome, inputs: InputSummary) -> Self {
        let outcome = Outcome::of(&out.runs);
        let names = inst
            .diagram()
            .map(|d| d.names().to_vec())
            .unwrap_or_else(|_| inst.grammar.nonterminals().to_vec());
        let mut timings_ms = BTreeMap::new();
        if out.closure.is_some() {
            timings_ms.insert("closure".to_string(), ms(out.closure_elapsed));
        }
        for r in &out.runs {
            timings_ms.insert(r.method.name().to_string(), ms(r.elapsed));
        }
        Report {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            outcome: outcome.name().to_string(),
            exit_code: outcome.exit_code(),
            inputs,
            verdicts: out
                .runs
                .iter()
                .map(|r| MethodReport::from_run(r, &inst.grammar, &names))
                .collect(),
            agreement: Agreement::of(&out.runs),
            closure: out.closure.as_ref().map(ClosureStats::from),
            timings_ms,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Human-readable table, one row per method.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:<12} {:<16} {:<9} counterexample",
            "method", "status", "included"
        );
        for v in &self.verdicts {
            let inc = v.included.map_or("-".to_string(), |b| b.to_string());
            let cex = v.counterexample.clone().unwrap_or_else(|| "-".to_string());
            let _ = writeln!(s, "{:<12} {:<16} {:<9} {}", v.method, v.status, inc, cex);
        }
        if let Some(c) = &self.closure {
            let stars = self
                .verdicts
                .iter()
                .filter_map(|v| v.ops.as_ref().map(|o| o.stars))
                .max()
                .unwrap_or(0);
            let _ = writeln!(
                s,
                "closure: {} vertices, {} unions, {} products, {} stars, max set {}",
                c.vertices, c.unions, c.products, stars, c.max_set_size
            );
        }
        let _ = writeln!(s, "outcome: {} (exit {})", self.outcome, self.exit_code);
        s
    }
}

/// Methods run by `decide` when none are requested.
pub const DEFAULT_METHODS: [Method; 2] = [Method::Filtered, Method::Witness];
