//! From parsed inputs to per-method verdicts.

use std::time::{Duration, Instant};

use cfgi_core::closure::{decide_from_closure, Method};
use cfgi_core::grammar::{prune_useless, to_cnf};
use cfgi_core::oracle::{
    anisimov_decide, enumeration_decide, witness_decide, OracleError, PumpingBudget,
};
use cfgi_core::{
    build_diagram, initial_matrix, kleene_closure, ClosureError, ClosureResult, CnfGrammar,
    Diagram, Grammar, GrammarError, GroupBackend, GroupError, Mode, Morphism, Verdict,
};
use thiserror::Error;

use crate::format::GroupSpec;

/// A pruned CNF grammar together with its target group and morphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub grammar: CnfGrammar,
    pub backend: GroupBackend,
    pub morphism: Morphism,
}

impl Instance {
    /// Normalizes and prunes `g`, then resolves the morphism against the
    /// terminals that survive pruning.
    pub fn prepare(g: &Grammar, spec: &GroupSpec) -> Result<Self, GroupError> {
        let grammar = prune_useless(&to_cnf(g));
        let morphism = Morphism::resolve(grammar.terminals(), &spec.map, &spec.backend)?;
        Ok(Instance {
            grammar,
            backend: spec.backend.clone(),
            morphism,
        })
    }

    pub fn diagram(&self) -> Result<Diagram, GroupError> {
        build_diagram(&self.grammar, &self.morphism, &self.backend)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Config {
    pub max_set_size: usize,
    pub max_word_len: usize,
    /// Word cap for the bounded enumeration.
    pub max_words: usize,
    pub pumping_p: Option<usize>,
    pub pumping_q: Option<usize>,
    pub max_oracle_nodes: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            max_set_size: 100_000,
            max_word_len: 8,
            max_words: 1_000_000,
            pumping_p: None,
            pumping_q: None,
            max_oracle_nodes: PumpingBudget::DEFAULT_NODES,
        }
    }
}

impl Config {
    pub fn pumping(&self, g: &CnfGrammar) -> PumpingBudget {
        let d = PumpingBudget::for_grammar(g);
        PumpingBudget {
            p: self.pumping_p.unwrap_or(d.p),
            q: self.pumping_q.unwrap_or(d.q),
            max_nodes: self.max_oracle_nodes,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MethodError {
    #[error(transparent)]
    Closure(#[from] ClosureError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Grammar(#[from] GrammarError),
}

impl MethodError {
    /// `cap-exceeded` for label-set caps, `budget-exceeded` for search budgets.
    pub fn status(&self) -> &'static str {
        match self {
            MethodError::Closure(ClosureError::Morphism(_)) => "error",
            MethodError::Closure(_) => "cap-exceeded",
            MethodError::Oracle(OracleError::Grammar(_)) | MethodError::Grammar(_) => {
                "budget-exceeded"
            }
            MethodError::Oracle(OracleError::BudgetExceeded(_)) => "budget-exceeded",
        }
    }
}

#[derive(Debug, Clone)]
pub struct MethodRun {
    pub method: Method,
    pub result: Result<Verdict, MethodError>,
    pub elapsed: Duration,
}

/// Output of [`run_methods`]: one run per requested method, in request order.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub runs: Vec<MethodRun>,
    /// The shared closure, when a closure method ran and it fit the cap.
    pub closure: Option<ClosureResult>,
    pub closure_elapsed: Duration,
}

pub fn run_methods(inst: &Instance, methods: &[Method], cfg: &Config) -> RunOutcome {
    let g = &inst.grammar;
    let (b, m) = (&inst.backend, &inst.morphism);
    let needs_closure = methods
        .iter()
        .any(|m| matches!(m, Method::Faithful | Method::Filtered));
    let t = Instant::now();
    let closure: Option<Result<(Diagram, ClosureResult), ClosureError>> =
        (needs_closure && !g.is_empty_language()).then(|| {
            let d = build_diagram(g, m, b)?;
            let c = kleene_closure(&initial_matrix(&d), cfg.max_set_size)?;
            Ok((d, c))
        });
    let closure_elapsed = t.elapsed();
    if let Some(Ok((_, c))) = &closure {
        log::debug!(
            "closure: {} unions, {} products, max set {}",
            c.counts.unions,
            c.counts.products,
            c.max_set_size
        );
    }

    let mut runs = Vec::with_capacity(methods.len());
    for &method in methods {
        let t = Instant::now();
        let result: Result<Verdict, MethodError> = match method {
            Method::Faithful | Method::Filtered => {
                let mode = if method == Method::Faithful {
                    Mode::Faithful
                } else {
                    Mode::Filtered
                };
                match &closure {
                    None => Ok(empty_language_verdict(method)),
                    Some(Err(e)) => Err(e.clone().into()),
                    Some(Ok((d, c))) => decide_from_closure(d, c.clone(), mode, cfg.max_set_size)
                        .map_err(Into::into),
                }
            }
            Method::Witness => Ok(witness_decide(g, b, m)),
            Method::Anisimov => anisimov_decide(g, b, m, cfg.pumping(g)).map_err(Into::into),
            Method::Enumeration => {
                enumeration_decide(g, b, m, cfg.max_word_len, cfg.max_words).map_err(Into::into)
            }
        };
        let elapsed = t.elapsed();
        log::info!(
            "{}: {:?} in {:?}",
            method.name(),
            result.as_ref().map(|v| v.included),
            elapsed
        );
        runs.push(MethodRun {
            method,
            result,
            elapsed,
        });
    }
    RunOutcome {
        runs,
        closure: closure.and_then(|c| c.ok()).map(|(_, c)| c),
        closure_elapsed,
    }
}

fn empty_language_verdict(method: Method) -> Verdict {
    let mut v = Verdict::new(method, true);
    v.diagnostics.note = Some("empty language");
    v
}

/// Overall outcome of a set of runs; maps one-to-one onto exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Outcome {
    AgreeTrue,
    AgreeFalse,
    Disagree,
    BudgetExceeded,
}

impl Outcome {
    /// Disagreement among the methods that finished wins over a budget
    /// failure of another method.
    pub fn of(runs: &[MethodRun]) -> Outcome {
        let done: Vec<bool> = runs
            .iter()
            .filter_map(|r| r.result.as_ref().ok().map(|v| v.included))
            .collect();
        let any_true = done.iter().any(|&x| x);
        let any_false = done.iter().any(|&x| !x);
        if any_true && any_false {
            Outcome::Disagree
        } else if done.len() < runs.len() {
            Outcome::BudgetExceeded
        } else if any_false {
            Outcome::AgreeFalse
        } else {
            Outcome::AgreeTrue
        }
    }

    pub fn exit_code(self) -> u8 {
        match self {
            Outcome::AgreeTrue => 0,
            Outcome::AgreeFalse => 1,
            Outcome::Disagree => 2,
            Outcome::BudgetExceeded => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Outcome::AgreeTrue => "agree-true",
            Outcome::AgreeFalse => "agree-false",
            Outcome::Disagree => "disagree",
            Outcome::BudgetExceeded => "budget-exceeded",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::{parse_grammar, parse_group};

    fn sab(map: &str) -> Instance {
        let g = parse_grammar("start: S\nS -> A B\nA -> 'a'\nB -> 'b'\n").unwrap();
        let s = parse_group(&format!("kind: free\nrank: 1\nmap: {map}")).unwrap();
        Instance::prepare(&g, &s).unwrap()
    }

    #[test]
    fn discrepancy_instance() {
        let out = run_methods(
            &sab("a -> x1, b -> x1'"),
            &[Method::Faithful, Method::Filtered, Method::Witness],
            &Config::default(),
        );
        let got: Vec<bool> = out
            .runs
            .iter()
            .map(|r| r.result.as_ref().unwrap().included)
            .collect();
        assert_eq!(got, [false, true, true]);
        assert_eq!(Outcome::of(&out.runs).exit_code(), 2);
    }

    #[test]
    fn all_false() {
        let out = run_methods(&sab("a -> x1, b -> x1"), &Method::ALL, &Config::default());
        assert_eq!(Outcome::of(&out.runs), Outcome::AgreeFalse);
    }

    #[test]
    fn cap_maps_to_budget_outcome() {
        let cfg = Config {
            max_set_size: 1,
            ..Config::default()
        };
        let out = run_methods(&sab("a -> x1, b -> x1'"), &[Method::Filtered], &cfg);
        assert_eq!(
            out.runs[0].result.as_ref().unwrap_err().status(),
            "cap-exceeded"
        );
        assert_eq!(Outcome::of(&out.runs).exit_code(), 4);
    }

    #[test]
    fn missing_image_is_reported() {
        let g = parse_grammar("start: S\nS -> A B\nA -> 'a'\nB -> 'b'\n").unwrap();
        let s = parse_group("kind: free\nrank: 1\nmap: a -> x1").unwrap();
        assert_eq!(
            Instance::prepare(&g, &s),
            Err(GroupError::UnmappedTerminal("b".into()))
        );
    }
}
