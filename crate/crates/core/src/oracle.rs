//! Ground-truth inclusion tests that do not go through the closure.
//!
//! * [`witness_decide`] assigns each nonterminal the group value of one
//!   shortest word it derives and checks every production multiplicatively.
//!   On a pruned grammar this is exact: if all checks pass, every word
//!   derived from `A` evaluates to that value; if one fails, splicing the
//!   two disagreeing derivations into a context of `A` yields a word of the
//!   language outside the group language.
//! * [`anisimov_decide`] checks the finite set of short words plus pumped
//!   words `u w v w'` given by pumping constants `p` and `q`.
//! * [`find_counterexample`] is a bounded search and proves nothing when it
//!   comes back empty.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::closure::{Method, Verdict};
use crate::grammar::{CnfGrammar, GrammarError, Rhs, Word};
use crate::group::{GroupBackend, GroupElem, Morphism};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("oracle budget of {0} nodes exceeded; verdict withheld")]
    BudgetExceeded(usize),
    #[error(transparent)]
    Grammar(#[from] GrammarError),
}

/// Bounds for [`anisimov_decide`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PumpingBudget {
    /// Length bound for the short words.
    pub p: usize,
    /// Bound on `|uwv|` for pumped words.
    pub q: usize,
    /// Cap on stored images, contexts and group checks combined.
    pub max_nodes: usize,
}

impl PumpingBudget {
    pub const DEFAULT_NODES: usize = 2_000_000;

    /// `p = q = 2^n` for a CNF grammar with `n` nonterminals.
    pub fn for_grammar(g: &CnfGrammar) -> Self {
        let n = g.nonterminal_count().min(40) as u32;
        let c = 1usize << n;
        PumpingBudget {
            p: c,
            q: c,
            max_nodes: Self::DEFAULT_NODES,
        }
    }
}

fn concat(parts: &[&[usize]]) -> Word {
    parts.iter().flat_map(|p| p.iter().copied()).collect()
}

/// Shortest `(x, y)` with `S ⇒ x A y`, for every reachable `A`.
fn shortest_contexts(g: &CnfGrammar, witness: &[Option<Word>]) -> Vec<Option<(Word, Word)>> {
    let mut ctx: Vec<Option<(Word, Word)>> = vec![None; g.nonterminal_count()];
    ctx[0] = Some((Vec::new(), Vec::new()));
    let key = |c: &(Word, Word)| (c.0.len() + c.1.len(), c.clone());
    loop {
        let mut changed = false;
        for r in g.rules() {
            let Rhs::Pair(b, c) = r.rhs else { continue };
            let Some((x, y)) = ctx[r.lhs].clone() else {
                continue;
            };
            let (Some(wb), Some(wc)) = (&witness[b], &witness[c]) else {
                continue;
            };
            let cands = [
                (b, (x.clone(), concat(&[wc, &y]))),
                (c, (concat(&[&x, wb]), y.clone())),
            ];
            for (target, cand) in cands {
                let better = match &ctx[target] {
                    None => true,
                    Some(old) => key(&cand) < key(old),
                };
                if better {
                    ctx[target] = Some(cand);
                    changed = true;
                }
            }
        }
        if !changed {
            return ctx;
        }
    }
}

/// Given two words derivable from `a` with different group values, returns a
/// word of `L(S)` whose value is not the identity.
fn lift_disagreement(
    g: &CnfGrammar,
    b: &GroupBackend,
    m: &Morphism,
    a: usize,
    first: &[usize],
    second: &[usize],
) -> Option<Word> {
    let witness = g.shortest_words();
    let ctx = shortest_contexts(g, &witness);
    let (x, y) = ctx[a].as_ref()?;
    let mut cands = [concat(&[x, first, y]), concat(&[x, second, y])];
    cands.sort_by(|p, q| (p.len(), p).cmp(&(q.len(), q)));
    cands.into_iter().find(|w| !m.eval(b, w).is_identity())
}

pub fn witness_decide(g: &CnfGrammar, b: &GroupBackend, m: &Morphism) -> Verdict {
    if g.is_empty_language() {
        let mut v = Verdict::new(Method::Witness, true);
        v.diagnostics.note = Some("empty language");
        return v;
    }
    let witness = g.shortest_words();
    let phi: Vec<Option<GroupElem>> = witness
        .iter()
        .map(|w| w.as_ref().map(|w| m.eval(b, w)))
        .collect();
    let fail = |cex: Option<Word>| {
        let mut v = Verdict::new(Method::Witness, false);
        v.counterexample = cex;
        v
    };
    let Some(start_value) = &phi[0] else {
        return Verdict::new(Method::Witness, true);
    };
    if !start_value.is_identity() {
        return fail(witness[0].clone());
    }
    for r in g.rules() {
        let (Some(lhs_value), Some(lhs_word)) = (&phi[r.lhs], &witness[r.lhs]) else {
            continue;
        };
        let (value, word) = match r.rhs {
            Rhs::Terminal(t) => (m.eval(b, &[t]), vec![t]),
            Rhs::Empty => (b.identity(), Vec::new()),
            Rhs::Pair(x, y) => match (&phi[x], &phi[y], &witness[x], &witness[y]) {
                (Some(px), Some(py), Some(wx), Some(wy)) => (px.mul(py), concat(&[wx, wy])),
                _ => continue,
            },
        };
        if value != *lhs_value {
            return fail(lift_disagreement(g, b, m, r.lhs, lhs_word, &word));
        }
    }
    Verdict::new(Method::Witness, true)
}

type ImageTable = Vec<Vec<BTreeMap<GroupElem, Word>>>;

struct Counter {
    used: usize,
    max: usize,
}

impl Counter {
    fn add(&mut self, k: usize) -> Result<(), OracleError> {
        self.used += k;
        if self.used > self.max {
            Err(OracleError::BudgetExceeded(self.max))
        } else {
            Ok(())
        }
    }
}

/// Fills `table[·][len]` (group images of words of exactly that length,
/// each with one representative word).
fn fill_length(
    g: &CnfGrammar,
    b: &GroupBackend,
    m: &Morphism,
    table: &mut ImageTable,
    len: usize,
    counter: &mut Counter,
) -> Result<(), OracleError> {
    for row in table.iter_mut() {
        row.push(BTreeMap::new());
    }
    loop {
        let mut fresh: Vec<(usize, GroupElem, Word)> = Vec::new();
        for r in g.rules() {
            match r.rhs {
                Rhs::Empty if len == 0 => fresh.push((r.lhs, b.identity(), Vec::new())),
                Rhs::Terminal(t) if len == 1 => fresh.push((r.lhs, m.eval(b, &[t]), vec![t])),
                Rhs::Pair(x, y) => {
                    for i in 0..=len {
                        for (gx, wx) in &table[x][i] {
                            for (gy, wy) in &table[y][len - i] {
                                let gv = gx.mul(gy);
                                if !table[r.lhs][len].contains_key(&gv) {
                                    fresh.push((r.lhs, gv, concat(&[wx, wy])));
                                }
                            }
                        }
                        counter.add(table[x][i].len() * table[y][len - i].len() / 8)?;
                    }
                }
                _ => {}
            }
        }
        let mut changed = false;
        for (a, gv, w) in fresh {
            if let alloc::collections::btree_map::Entry::Vacant(e) = table[a][len].entry(gv) {
                e.insert(w);
                counter.add(1)?;
                changed = true;
            }
        }
        if !changed {
            return Ok(());
        }
    }
}

/// Key of a pumping context: images of `u` and `v` and `|uv|`.
type CtxKey = (GroupElem, GroupElem, usize);

pub fn anisimov_decide(
    g: &CnfGrammar,
    b: &GroupBackend,
    m: &Morphism,
    budget: PumpingBudget,
) -> Result<Verdict, OracleError> {
    if g.is_empty_language() {
        let mut v = Verdict::new(Method::Anisimov, true);
        v.diagnostics.note = Some("empty language");
        return Ok(v);
    }
    let n = g.nonterminal_count();
    let mut counter = Counter {
        used: 0,
        max: budget.max_nodes,
    };
    let fail = |cex: Option<Word>, note: &'static str| {
        let mut v = Verdict::new(Method::Anisimov, false);
        v.counterexample = cex;
        v.diagnostics.note = Some(note);
        v
    };

    // Short words: every word of length ≤ p must evaluate to the identity.
    let top = budget.p.max(budget.q);
    let mut table: ImageTable = vec![Vec::new(); n];
    for len in 0..=top {
        fill_length(g, b, m, &mut table, len, &mut counter)?;
        if len <= budget.p {
            if let Some((_, w)) = table[0][len].iter().find(|(gv, _)| !gv.is_identity()) {
                return Ok(fail(Some(w.clone()), "short word"));
            }
        }
    }

    // Pumped words: A ⇒ uAv, A ⇒ w, |uwv| ≤ q, then u w v w' must be e.
    let mut parents: Vec<Vec<(usize, bool, usize)>> = vec![Vec::new(); n];
    for r in g.rules() {
        if let Rhs::Pair(x, y) = r.rhs {
            // (lhs, child is the left one, sibling)
            parents[x].push((r.lhs, true, y));
            parents[y].push((r.lhs, false, x));
        }
    }
    let min_len: Vec<usize> = (0..n)
        .map(|a| {
            (0..=top)
                .find(|&l| !table[a][l].is_empty())
                .unwrap_or(usize::MAX)
        })
        .collect();
    for a in 0..n {
        if min_len[a] > budget.q {
            continue;
        }
        let room = budget.q - min_len[a];
        let mut ctx: Vec<BTreeMap<CtxKey, (Word, Word)>> = vec![BTreeMap::new(); n];
        let id = b.identity();
        ctx[a].insert((id.clone(), id, 0), (Vec::new(), Vec::new()));
        let mut queue: VecDeque<(usize, CtxKey)> = VecDeque::new();
        queue.push_back((a, (b.identity(), b.identity(), 0)));
        while let Some((child, key)) = queue.pop_front() {
            let (u, v) = ctx[child][&key].clone();
            let (gu, gv, l) = key;
            for &(lhs, left, sib) in &parents[child] {
                for (lw, row) in table[sib].iter().enumerate().take(room - l + 1) {
                    for (gw, ww) in row {
                        let (nk, nw) = if left {
                            (
                                (gu.clone(), gv.mul(gw), l + lw),
                                (u.clone(), concat(&[&v, ww])),
                            )
                        } else {
                            (
                                (gw.mul(&gu), gv.clone(), l + lw),
                                (concat(&[ww, &u]), v.clone()),
                            )
                        };
                        if !ctx[lhs].contains_key(&nk) {
                            ctx[lhs].insert(nk.clone(), nw);
                            queue.push_back((lhs, nk));
                            counter.add(1)?;
                        }
                    }
                }
            }
        }
        for ((gu, gv, l), (u, v)) in &ctx[a] {
            if *l == 0 {
                continue;
            }
            for row in table[a].iter().take(budget.q - l + 1) {
                counter.add(row.len())?;
                for (gw, w) in row {
                    let pumped = gu.mul(gw).mul(gv);
                    if pumped.mul(&gw.inv()).is_identity() {
                        continue;
                    }
                    let uwv = concat(&[u, w, v]);
                    return Ok(fail(lift_disagreement(g, b, m, a, &uwv, w), "pumped word"));
                }
            }
        }
    }
    Ok(Verdict::new(Method::Anisimov, true))
}

/// First word of length ≤ `max_len` in length-lexicographic order whose
/// image is not the identity.
pub fn find_counterexample(
    g: &CnfGrammar,
    b: &GroupBackend,
    m: &Morphism,
    max_len: usize,
    cap: usize,
) -> Result<Option<Word>, GrammarError> {
    if g.is_empty_language() {
        return Ok(None);
    }
    let mut by_len = g.words_by_length(max_len, cap)?;
    let start: Vec<BTreeSet<Word>> = core::mem::take(&mut by_len[0]);
    Ok(start
        .into_iter()
        .flatten()
        .find(|w| !m.eval(b, w).is_identity()))
}

/// Verdict form of [`find_counterexample`]; `included` only means that no
/// counterexample up to `max_len` exists.
pub fn enumeration_decide(
    g: &CnfGrammar,
    b: &GroupBackend,
    m: &Morphism,
    max_len: usize,
    cap: usize,
) -> Result<Verdict, GrammarError> {
    let cex = find_counterexample(g, b, m, max_len, cap)?;
    let mut v = Verdict::new(Method::Enumeration, cex.is_none());
    v.counterexample = cex;
    v.diagnostics.bounded = true;
    Ok(v)
}
