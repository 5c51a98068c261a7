//! Runs several methods over many instances and tallies where they disagree.

use std::collections::BTreeMap;

use cfgi_core::closure::Method;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::pipeline::{run_methods, Config, Instance, Outcome};
use crate::random::{random_instance, Bounds};
use crate::report::{render_rules, MethodReport};

pub const DIFFERENTIAL_METHODS: [Method; 4] = [
    Method::Faithful,
    Method::Filtered,
    Method::Witness,
    Method::Enumeration,
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InstanceRow {
    pub index: usize,
    pub productions: Vec<String>,
    pub rank: usize,
    pub morphism: Vec<String>,
    pub outcome: String,
    pub verdicts: Vec<MethodReport>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct PairTally {
    pub agree: usize,
    pub disagree: usize,
    /// One side did not finish.
    pub incomplete: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub instances: usize,
    pub outcomes: BTreeMap<String, usize>,
    /// Keyed `"<method>/<method>"` in request order.
    pub pairs: BTreeMap<String, PairTally>,
    pub empty_languages: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DifferentialReport {
    pub seed: Option<u64>,
    pub bounds: Option<Bounds>,
    pub methods: Vec<String>,
    pub summary: Summary,
    pub instances: Vec<InstanceRow>,
    pub timings_ms: BTreeMap<String, f64>,
}

impl DifferentialReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Exit code: 2 if any instance saw disagreement, 4 if any method ran out
    /// of budget, 0 otherwise.
    pub fn exit_code(&self) -> u8 {
        let count = |k: &str| self.summary.outcomes.get(k).copied().unwrap_or(0);
        if count(Outcome::Disagree.name()) > 0 {
            2
        } else if count(Outcome::BudgetExceeded.name()) > 0 {
            4
        } else {
            0
        }
    }

    pub fn summary_text(&self) -> String {
        let mut s = format!("instances: {}\n", self.summary.instances);
        for (k, v) in &self.summary.outcomes {
            s.push_str(&format!("  {k}: {v}\n"));
        }
        for (k, t) in &self.summary.pairs {
            s.push_str(&format!(
                "  {k}: agree {} disagree {} incomplete {}\n",
                t.agree, t.disagree, t.incomplete
            ));
        }
        s
    }
}

/// Runs `methods` on each instance, in order.
pub fn run_instances(
    instances: &[Instance],
    methods: &[Method],
    cfg: &Config,
) -> DifferentialReport {
    let started = std::time::Instant::now();
    let mut summary = Summary::default();
    let mut rows = Vec::with_capacity(instances.len());
    for (i, a) in methods.iter().enumerate() {
        for b in &methods[i + 1..] {
            summary
                .pairs
                .insert(format!("{}/{}", a.name(), b.name()), PairTally::default());
        }
    }
    for (index, inst) in instances.iter().enumerate() {
        let out = run_methods(inst, methods, cfg);
        let outcome = Outcome::of(&out.runs);
        *summary
            .outcomes
            .entry(outcome.name().to_string())
            .or_default() += 1;
        if inst.grammar.is_empty_language() {
            summary.empty_languages += 1;
        }
        let verdicts: Vec<Option<bool>> = out
            .runs
            .iter()
            .map(|r| r.result.as_ref().ok().map(|v| v.included))
            .collect();
        for i in 0..methods.len() {
            for j in i + 1..methods.len() {
                let key = format!("{}/{}", methods[i].name(), methods[j].name());
                let t = summary.pairs.get_mut(&key).expect("pair registered");
                match (verdicts[i], verdicts[j]) {
                    (Some(x), Some(y)) if x == y => t.agree += 1,
                    (Some(_), Some(_)) => t.disagree += 1,
                    _ => t.incomplete += 1,
                }
            }
        }
        let names = inst
            .diagram()
            .map(|d| d.names().to_vec())
            .unwrap_or_else(|_| inst.grammar.nonterminals().to_vec());
        rows.push(InstanceRow {
            index,
            productions: render_rules(&inst.grammar),
            rank: inst.backend.rank(),
            morphism: inst
                .grammar
                .terminals()
                .iter()
                .zip(inst.morphism.images())
                .map(|(t, w)| format!("{t} -> {}", cfgi_core::group::render_letters(w)))
                .collect(),
            outcome: outcome.name().to_string(),
            verdicts: out
                .runs
                .iter()
                .map(|r| MethodReport::from_run(r, &inst.grammar, &names))
                .collect(),
        });
    }
    summary.instances = instances.len();
    let mut timings_ms = BTreeMap::new();
    timings_ms.insert("total".to_string(), started.elapsed().as_secs_f64() * 1e3);
    DifferentialReport {
        seed: None,
        bounds: None,
        methods: methods.iter().map(|m| m.name().to_string()).collect(),
        summary,
        instances: rows,
        timings_ms,
    }
}

/// The `count` instances a seeded run uses.
pub fn generate(count: usize, seed: u64, bounds: &Bounds) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| random_instance(&mut rng, bounds))
        .collect()
}

pub fn differential_run(
    count: usize,
    seed: u64,
    bounds: &Bounds,
    methods: &[Method],
    cfg: &Config,
) -> DifferentialReport {
    let mut r = run_instances(&generate(count, seed, bounds), methods, cfg);
    r.seed = Some(seed);
    r.bounds = Some(*bounds);
    r
}
