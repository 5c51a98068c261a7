//! Floyd–Warshall closure over label sets and the inclusion test built on it.
//!
//! Level `k` is computed from an immutable snapshot of level `k - 1`:
//!
//! ```text
//! g[i][j]^k = g[i][j]^(k-1) ∪ g[i][k]^(k-1) · g[k][j]^(k-1)
//! ```
//!
//! After level `n + 1` the start row is tested against `{⟨ε, e⟩}`, then every
//! vertex `j` reachable from the start that carries cycles and reaches the
//! sink is tested via the conjugation product `g[j][j] ⋆ g[j][Z]`.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use thiserror::Error;

use crate::diagram::{build_diagram, initial_matrix, ArcSource, Diagram};
use crate::grammar::{CnfGrammar, Word};
use crate::group::{GroupBackend, GroupError, Morphism};
use crate::semiring::{CapExceeded, LabelSet, ULabel};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClosureError {
    #[error("{source} at entry ({i}, {j}), level {k}")]
    CapExceeded {
        i: usize,
        j: usize,
        k: usize,
        source: CapExceeded,
    },
    #[error("{source} in conjugation check at vertex {j}")]
    StarCapExceeded { j: usize, source: CapExceeded },
    #[error("matrix with {0} entries is not square")]
    NotSquare(usize),
    #[error(transparent)]
    Morphism(#[from] GroupError),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCounts {
    pub unions: usize,
    pub products: usize,
    pub stars: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureResult {
    /// Side length `n + 1`.
    pub size: usize,
    /// Row-major level-`n+1` matrix.
    pub matrix: Vec<LabelSet>,
    pub counts: OpCounts,
    pub max_set_size: usize,
    pub halted_early: bool,
}

impl ClosureResult {
    pub fn entry(&self, i: usize, j: usize) -> &LabelSet {
        &self.matrix[i * self.size + j]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mode {
    /// The tests exactly as stated: compare whole sets with `{⟨ε, e⟩}`.
    Faithful,
    /// Compare only the labels with a balanced bracket component, and
    /// accept any subset of `{⟨ε, e⟩}`.
    Filtered,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    Faithful,
    Filtered,
    Witness,
    Anisimov,
    Enumeration,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::Faithful,
        Method::Filtered,
        Method::Witness,
        Method::Anisimov,
        Method::Enumeration,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Faithful => "faithful",
            Method::Filtered => "filtered",
            Method::Witness => "witness",
            Method::Anisimov => "anisimov",
            Method::Enumeration => "enumeration",
        }
    }

    pub fn from_name(s: &str) -> Option<Method> {
        Method::ALL.into_iter().find(|m| m.name() == s)
    }
}

impl From<Mode> for Method {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Faithful => Method::Faithful,
            Mode::Filtered => Method::Filtered,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Diagnostics {
    /// Which test fired: 7 for the start-row test, 11 for a conjugation test.
    pub failing_line: Option<u8>,
    /// Vertex of the failing conjugation test.
    pub failing_vertex: Option<usize>,
    pub failing_set: Option<LabelSet>,
    pub counts: Option<OpCounts>,
    pub max_set_size: Option<usize>,
    /// Verdict only covers words up to a length bound.
    pub bounded: bool,
    pub note: Option<&'static str>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub included: bool,
    pub method: Method,
    pub counterexample: Option<Word>,
    pub diagnostics: Diagnostics,
}

impl Verdict {
    pub fn new(method: Method, included: bool) -> Self {
        Verdict {
            included,
            method,
            counterexample: None,
            diagnostics: Diagnostics::default(),
        }
    }
}

fn side(len: usize) -> Result<usize, ClosureError> {
    let mut v = 0;
    while v * v < len {
        v += 1;
    }
    if v * v == len {
        Ok(v)
    } else {
        Err(ClosureError::NotSquare(len))
    }
}

/// One level of the recurrence; `k` is the zero-based pivot vertex.
fn step(
    prev: &[LabelSet],
    v: usize,
    k: usize,
    cap: usize,
    counts: &mut OpCounts,
    max_set: &mut usize,
) -> Result<Vec<LabelSet>, ClosureError> {
    let mut next = Vec::with_capacity(prev.len());
    for i in 0..v {
        for j in 0..v {
            let wrap = |source| ClosureError::CapExceeded {
                i,
                j,
                k: k + 1,
                source,
            };
            let through = prev[i * v + k].mul(&prev[k * v + j], cap).map_err(wrap)?;
            counts.products += 1;
            let entry = if through.is_empty() {
                prev[i * v + j].clone()
            } else {
                prev[i * v + j].union(&through, cap).map_err(wrap)?
            };
            counts.unions += 1;
            *max_set = (*max_set).max(entry.len());
            next.push(entry);
        }
    }
    Ok(next)
}

/// Runs all `n + 1` levels and returns the final matrix with operation counts.
pub fn kleene_closure(m0: &[LabelSet], cap: usize) -> Result<ClosureResult, ClosureError> {
    let v = side(m0.len())?;
    let mut counts = OpCounts::default();
    let mut max_set = m0.iter().map(LabelSet::len).max().unwrap_or(0);
    let mut cur = m0.to_vec();
    for k in 0..v {
        cur = step(&cur, v, k, cap, &mut counts, &mut max_set)?;
    }
    Ok(ClosureResult {
        size: v,
        matrix: cur,
        counts,
        max_set_size: max_set,
        halted_early: false,
    })
}

/// Every level `0 ..= n+1` of the closure.
pub fn closure_levels(m0: &[LabelSet], cap: usize) -> Result<Vec<Vec<LabelSet>>, ClosureError> {
    let v = side(m0.len())?;
    let mut counts = OpCounts::default();
    let mut max_set = 0;
    let mut levels = Vec::with_capacity(v + 1);
    levels.push(m0.to_vec());
    for k in 0..v {
        let next = step(&levels[k], v, k, cap, &mut counts, &mut max_set)?;
        levels.push(next);
    }
    Ok(levels)
}

/// Runs the closure on the diagram of `g` and applies the start-row and
/// conjugation tests. `g` must be pruned.
pub fn decide(
    g: &CnfGrammar,
    b: &GroupBackend,
    m: &Morphism,
    mode: Mode,
    cap: usize,
) -> Result<Verdict, ClosureError> {
    let method = Method::from(mode);
    if g.is_empty_language() {
        let mut v = Verdict::new(method, true);
        v.diagnostics.note = Some("empty language");
        return Ok(v);
    }
    let d = build_diagram(g, m, b)?;
    let closure = kleene_closure(&initial_matrix(&d), cap)?;
    decide_from_closure(&d, closure, mode, cap)
}

/// The tests that follow the closure, on an already computed level-`n+1`
/// matrix.
pub fn decide_from_closure(
    d: &Diagram,
    mut closure: ClosureResult,
    mode: Mode,
    cap: usize,
) -> Result<Verdict, ClosureError> {
    let start = 0;
    let z = d.sink();
    let passes = |set: &LabelSet| match mode {
        Mode::Faithful => set.is_empty() || set.is_identity_singleton(),
        Mode::Filtered => set.balanced().within_identity(),
    };
    let fail = |closure: &ClosureResult, line: u8, j: Option<usize>, set: LabelSet| {
        let mut v = Verdict::new(Method::from(mode), false);
        v.diagnostics = Diagnostics {
            failing_line: Some(line),
            failing_vertex: j,
            failing_set: Some(match mode {
                Mode::Faithful => set,
                Mode::Filtered => set.balanced(),
            }),
            counts: Some(closure.counts),
            max_set_size: Some(closure.max_set_size),
            ..Diagnostics::default()
        };
        v
    };

    let row = closure.entry(start, z);
    if !passes(row) {
        let set = row.clone();
        closure.halted_early = true;
        return Ok(fail(&closure, 7, None, set));
    }
    for j in 0..closure.size {
        let (reach, cycles, exit) = (
            closure.entry(start, j),
            closure.entry(j, j),
            closure.entry(j, z),
        );
        if reach.is_empty() || cycles.is_empty() || exit.is_empty() {
            continue;
        }
        let conj = cycles
            .star(exit, cap)
            .map_err(|source| ClosureError::StarCapExceeded { j, source })?;
        closure.counts.stars += 1;
        let ok = match mode {
            Mode::Faithful => conj.is_identity_singleton(),
            Mode::Filtered => conj.balanced().within_identity(),
        };
        if !ok {
            closure.halted_early = true;
            return Ok(fail(&closure, 11, Some(j), conj));
        }
    }
    let mut v = Verdict::new(Method::from(mode), true);
    v.diagnostics.counts = Some(closure.counts);
    v.diagnostics.max_set_size = Some(closure.max_set_size);
    Ok(v)
}

/// A walk as a sequence of indices into [`Diagram::arcs`].
pub type Walk = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("walk enumeration budget of {budget} walks exceeded at level {level}")]
pub struct WalkBudgetExceeded {
    pub budget: usize,
    pub level: usize,
}

/// The literal walk families `K[i][j]^k` for every level `0 ..= max_level`,
/// built by the same recurrence as the closure but on sets of walks.
pub fn walk_levels(
    d: &Diagram,
    max_level: usize,
    budget: usize,
) -> Result<Vec<Vec<BTreeSet<Walk>>>, WalkBudgetExceeded> {
    let v = d.vertex_count();
    let mut level0 = alloc::vec![BTreeSet::new(); v * v];
    for (idx, a) in d.arcs().iter().enumerate() {
        level0[a.from * v + a.to].insert(alloc::vec![idx as u32]);
    }
    let mut levels = alloc::vec![level0];
    for k in 0..max_level.min(v) {
        let prev = &levels[k];
        let mut next = Vec::with_capacity(v * v);
        let mut total = 0usize;
        for i in 0..v {
            for j in 0..v {
                let mut entry = prev[i * v + j].clone();
                for p in &prev[i * v + k] {
                    for q in &prev[k * v + j] {
                        let mut w = p.clone();
                        w.extend_from_slice(q);
                        entry.insert(w);
                    }
                }
                total += entry.len();
                if total > budget {
                    return Err(WalkBudgetExceeded {
                        budget,
                        level: k + 1,
                    });
                }
                next.push(entry);
            }
        }
        levels.push(next);
    }
    Ok(levels)
}

/// The walk family `K[i][j]^k`.
pub fn enumerate_walks(
    d: &Diagram,
    i: usize,
    j: usize,
    k: usize,
    budget: usize,
) -> Result<BTreeSet<Walk>, WalkBudgetExceeded> {
    let v = d.vertex_count();
    let mut levels = walk_levels(d, k, budget)?;
    let last = levels.len() - 1;
    Ok(core::mem::take(&mut levels[last][i * v + j]))
}

/// Product of the arc labels along a walk.
pub fn walk_label(d: &Diagram, b: &GroupBackend, walk: &[u32]) -> ULabel {
    walk.iter().fold(ULabel::identity(b), |acc, &a| {
        acc.mul(&d.arcs()[a as usize].label)
    })
}

/// Terminals read along a walk.
pub fn walk_word(d: &Diagram, walk: &[u32]) -> Word {
    walk.iter()
        .filter_map(|&a| match d.arcs()[a as usize].source {
            ArcSource::Terminal(t) => Some(t),
            _ => None,
        })
        .collect()
}
