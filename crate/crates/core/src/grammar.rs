//! Context-free grammars: construction, conversion to Chomsky normal form,
//! pruning of useless symbols and bounded derivation enumeration.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

/// A terminal word, as indices into the grammar's terminal list.
pub type Word = Vec<usize>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrammarError {
    #[error("symbol `{0}` is used but has no productions")]
    UndeclaredSymbol(String),
    #[error("start symbol `{0}` has no productions")]
    StartWithoutProductions(String),
    #[error("terminal `{0}` has the same name as a nonterminal")]
    NameClash(String),
    #[error("nonterminal index {0} out of range")]
    BadNonterminal(usize),
    #[error("derivation budget of {cap} entries exceeded")]
    BudgetExceeded { cap: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    Nonterminal(usize),
    Terminal(usize),
}

/// A production with an arbitrary right side; an empty `rhs` is `A -> ε`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Production {
    pub lhs: usize,
    pub rhs: Vec<Symbol>,
}

/// A general context-free grammar. Nonterminal 0 is the start symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grammar {
    nonterminals: Vec<String>,
    terminals: Vec<String>,
    productions: Vec<Production>,
}

/// Right-hand side symbol used by [`GrammarBuilder`].
#[derive(Debug, Clone, Copy)]
pub enum Sym<'a> {
    N(&'a str),
    T(&'a str),
}

/// Builds a [`Grammar`] from named rules.
///
/// Nonterminals are numbered start first, then in the order their first
/// production appears. Terminals are numbered by first use.
#[derive(Debug, Clone)]
pub struct GrammarBuilder {
    start: String,
    rules: Vec<(String, Vec<(bool, String)>)>,
}

impl GrammarBuilder {
    pub fn new(start: &str) -> Self {
        GrammarBuilder {
            start: start.to_string(),
            rules: Vec::new(),
        }
    }

    /// Adds `lhs -> rhs`; an empty slice is an ε-production.
    pub fn rule(mut self, lhs: &str, rhs: &[Sym<'_>]) -> Self {
        self.push_rule(lhs, rhs);
        self
    }

    pub fn push_rule(&mut self, lhs: &str, rhs: &[Sym<'_>]) {
        let rhs = rhs
            .iter()
            .map(|s| match *s {
                Sym::N(n) => (false, n.to_string()),
                Sym::T(t) => (true, t.to_string()),
            })
            .collect();
        self.rules.push((lhs.to_string(), rhs));
    }

    pub fn build(self) -> Result<Grammar, GrammarError> {
        let mut nonterminals = vec![self.start.clone()];
        let mut nt_index = BTreeMap::new();
        nt_index.insert(self.start.clone(), 0usize);
        for (lhs, _) in &self.rules {
            if !nt_index.contains_key(lhs) {
                nt_index.insert(lhs.clone(), nonterminals.len());
                nonterminals.push(lhs.clone());
            }
        }
        if !self.rules.iter().any(|(lhs, _)| *lhs == self.start) {
            return Err(GrammarError::StartWithoutProductions(self.start));
        }
        let mut terminals: Vec<String> = Vec::new();
        let mut t_index = BTreeMap::new();
        let mut productions = Vec::with_capacity(self.rules.len());
        for (lhs, rhs) in &self.rules {
            let mut symbols = Vec::with_capacity(rhs.len());
            for (is_terminal, name) in rhs {
                if *is_terminal {
                    if nt_index.contains_key(name) {
                        return Err(GrammarError::NameClash(name.clone()));
                    }
                    let idx = *t_index.entry(name.clone()).or_insert_with(|| {
                        terminals.push(name.clone());
                        terminals.len() - 1
                    });
                    symbols.push(Symbol::Terminal(idx));
                } else {
                    let idx = nt_index
                        .get(name)
                        .ok_or_else(|| GrammarError::UndeclaredSymbol(name.clone()))?;
                    symbols.push(Symbol::Nonterminal(*idx));
                }
            }
            productions.push(Production {
                lhs: nt_index[lhs],
                rhs: symbols,
            });
        }
        Ok(Grammar {
            nonterminals,
            terminals,
            productions,
        })
    }
}

impl Grammar {
    pub fn builder(start: &str) -> GrammarBuilder {
        GrammarBuilder::new(start)
    }

    pub fn nonterminals(&self) -> &[String] {
        &self.nonterminals
    }

    pub fn terminals(&self) -> &[String] {
        &self.terminals
    }

    pub fn productions(&self) -> &[Production] {
        &self.productions
    }

    /// Returns the grammar unchanged as a [`CnfGrammar`] if every production
    /// already has one of the shapes `A -> BC`, `A -> a` or `A -> ε`.
    pub fn as_cnf(&self) -> Option<CnfGrammar> {
        let mut rules = Vec::with_capacity(self.productions.len());
        for p in &self.productions {
            let rhs = match p.rhs.as_slice() {
                [] => Rhs::Empty,
                [Symbol::Terminal(t)] => Rhs::Terminal(*t),
                [Symbol::Nonterminal(b), Symbol::Nonterminal(c)] => Rhs::Pair(*b, *c),
                _ => return None,
            };
            rules.push(Rule { lhs: p.lhs, rhs });
        }
        Some(CnfGrammar {
            nonterminals: self.nonterminals.clone(),
            terminals: self.terminals.clone(),
            rules: dedup_in_order(rules),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rhs {
    Pair(usize, usize),
    Terminal(usize),
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rule {
    pub lhs: usize,
    pub rhs: Rhs,
}

/// A grammar in Chomsky normal form (with `A -> ε` admitted). Nonterminal 0
/// is the start symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfGrammar {
    nonterminals: Vec<String>,
    terminals: Vec<String>,
    rules: Vec<Rule>,
}

impl CnfGrammar {
    /// Assembles a CNF grammar from raw parts. Duplicate rules are dropped.
    pub fn new(
        nonterminals: Vec<String>,
        terminals: Vec<String>,
        rules: Vec<Rule>,
    ) -> Result<Self, GrammarError> {
        if nonterminals.is_empty() {
            return Err(GrammarError::BadNonterminal(0));
        }
        let n = nonterminals.len();
        for r in &rules {
            let bad = match r.rhs {
                Rhs::Pair(b, c) => [r.lhs, b, c].into_iter().find(|&x| x >= n),
                _ => (r.lhs >= n).then_some(r.lhs),
            };
            if let Some(x) = bad {
                return Err(GrammarError::BadNonterminal(x));
            }
            if let Rhs::Terminal(t) = r.rhs {
                if t >= terminals.len() {
                    return Err(GrammarError::UndeclaredSymbol(alloc::format!("#{t}")));
                }
            }
        }
        Ok(CnfGrammar {
            nonterminals,
            terminals,
            rules: dedup_in_order(rules),
        })
    }

    pub fn nonterminals(&self) -> &[String] {
        &self.nonterminals
    }

    pub fn nonterminal_count(&self) -> usize {
        self.nonterminals.len()
    }

    pub fn terminals(&self) -> &[String] {
        &self.terminals
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    /// True when the start symbol has no productions, i.e. `L = ∅` after pruning.
    pub fn is_empty_language(&self) -> bool {
        !self.rules.iter().any(|r| r.lhs == 0)
    }

    pub fn render_word(&self, w: &[usize]) -> String {
        if w.is_empty() {
            return "ε".to_string();
        }
        let mut s = String::new();
        let multi = self.terminals.iter().any(|t| t.chars().count() > 1);
        for (i, &t) in w.iter().enumerate() {
            if multi && i > 0 {
                s.push(' ');
            }
            s.push_str(&self.terminals[t]);
        }
        s
    }

    pub fn nullable(&self) -> Vec<bool> {
        let mut nullable = vec![false; self.nonterminals.len()];
        loop {
            let mut changed = false;
            for r in &self.rules {
                if nullable[r.lhs] {
                    continue;
                }
                let yes = match r.rhs {
                    Rhs::Empty => true,
                    Rhs::Terminal(_) => false,
                    Rhs::Pair(b, c) => nullable[b] && nullable[c],
                };
                if yes {
                    nullable[r.lhs] = true;
                    changed = true;
                }
            }
            if !changed {
                return nullable;
            }
        }
    }

    /// One shortest derivable word per nonterminal (`None` if unproductive).
    /// Ties are broken towards the lexicographically smallest word.
    pub fn shortest_words(&self) -> Vec<Option<Word>> {
        let mut best: Vec<Option<Word>> = vec![None; self.nonterminals.len()];
        loop {
            let mut changed = false;
            for r in &self.rules {
                let cand = match r.rhs {
                    Rhs::Empty => Some(Vec::new()),
                    Rhs::Terminal(t) => Some(vec![t]),
                    Rhs::Pair(b, c) => match (&best[b], &best[c]) {
                        (Some(u), Some(v)) => {
                            let mut w = u.clone();
                            w.extend_from_slice(v);
                            Some(w)
                        }
                        _ => None,
                    },
                };
                if let Some(w) = cand {
                    let better = match &best[r.lhs] {
                        None => true,
                        Some(old) => (w.len(), &w) < (old.len(), old),
                    };
                    if better {
                        best[r.lhs] = Some(w);
                        changed = true;
                    }
                }
            }
            if !changed {
                return best;
            }
        }
    }

    /// Membership test `A ⇒ word`, CYK with ε-aware splits.
    pub fn derives(&self, a: usize, word: &[usize]) -> bool {
        let n = self.nonterminals.len();
        let len = word.len();
        // table[i][l] = nonterminals deriving word[i..i+l]
        let mut table = vec![vec![vec![false; n]; len + 1]; len + 1];
        for l in 0..=len {
            for i in 0..=(len - l) {
                loop {
                    let mut changed = false;
                    for r in &self.rules {
                        if table[i][l][r.lhs] {
                            continue;
                        }
                        let yes = match r.rhs {
                            Rhs::Empty => l == 0,
                            Rhs::Terminal(t) => l == 1 && word[i] == t,
                            Rhs::Pair(b, c) => {
                                (0..=l).any(|k| table[i][k][b] && table[i + k][l - k][c])
                            }
                        };
                        if yes {
                            table[i][l][r.lhs] = true;
                            changed = true;
                        }
                    }
                    if !changed {
                        break;
                    }
                }
            }
        }
        table[0][len][a]
    }

    /// Words derivable from every nonterminal, grouped by exact length, up to
    /// `max_len`. Fails once more than `cap` words have been produced.
    pub fn words_by_length(
        &self,
        max_len: usize,
        cap: usize,
    ) -> Result<Vec<Vec<BTreeSet<Word>>>, GrammarError> {
        let n = self.nonterminals.len();
        let mut sets: Vec<Vec<BTreeSet<Word>>> = vec![vec![BTreeSet::new(); max_len + 1]; n];
        let mut total = 0usize;
        for l in 0..=max_len {
            loop {
                let mut fresh: Vec<(usize, Word)> = Vec::new();
                for r in &self.rules {
                    match r.rhs {
                        Rhs::Empty if l == 0 => fresh.push((r.lhs, Vec::new())),
                        Rhs::Terminal(t) if l == 1 => fresh.push((r.lhs, vec![t])),
                        Rhs::Pair(b, c) => {
                            for i in 0..=l {
                                for u in &sets[b][i] {
                                    for v in &sets[c][l - i] {
                                        let mut w = u.clone();
                                        w.extend_from_slice(v);
                                        if !sets[r.lhs][l].contains(&w) {
                                            fresh.push((r.lhs, w));
                                        }
                                    }
                                }
                                if total + fresh.len() > cap {
                                    return Err(GrammarError::BudgetExceeded { cap });
                                }
                            }
                        }
                        _ => {}
                    }
                }
                let mut changed = false;
                for (a, w) in fresh {
                    if sets[a][l].insert(w) {
                        total += 1;
                        changed = true;
                    }
                }
                if total > cap {
                    return Err(GrammarError::BudgetExceeded { cap });
                }
                if !changed {
                    break;
                }
            }
        }
        Ok(sets)
    }

    /// Exactly `{ α : A ⇒ α, |α| ≤ max_len }`.
    pub fn enumerate_words(
        &self,
        a: usize,
        max_len: usize,
        cap: usize,
    ) -> Result<BTreeSet<Word>, GrammarError> {
        if a >= self.nonterminals.len() {
            return Err(GrammarError::BadNonterminal(a));
        }
        let mut sets = self.words_by_length(max_len, cap)?;
        Ok(sets.swap_remove(a).into_iter().flatten().collect())
    }

    /// All `(u, v)` with `A ⇒ uAv`, `uv ≠ ε` and `|uv| ≤ max_len`.
    pub fn pump_pairs(
        &self,
        a: usize,
        max_len: usize,
        cap: usize,
    ) -> Result<BTreeSet<(Word, Word)>, GrammarError> {
        let n = self.nonterminals.len();
        if a >= n {
            return Err(GrammarError::BadNonterminal(a));
        }
        let words: Vec<Vec<Word>> = self
            .words_by_length(max_len, cap)?
            .into_iter()
            .map(|by_len| by_len.into_iter().flatten().collect())
            .collect();
        // ctx[x] = { (u, v) : x ⇒ u a v }
        let mut ctx: Vec<BTreeSet<(Word, Word)>> = vec![BTreeSet::new(); n];
        ctx[a].insert((Vec::new(), Vec::new()));
        let mut total = 1usize;
        loop {
            let mut fresh: Vec<(usize, (Word, Word))> = Vec::new();
            for r in &self.rules {
                let Rhs::Pair(b, c) = r.rhs else { continue };
                for (u, v) in &ctx[b] {
                    for w in &words[c] {
                        if u.len() + v.len() + w.len() > max_len {
                            continue;
                        }
                        let mut v2 = v.clone();
                        v2.extend_from_slice(w);
                        fresh.push((r.lhs, (u.clone(), v2)));
                    }
                }
                for (u, v) in &ctx[c] {
                    for w in &words[b] {
                        if u.len() + v.len() + w.len() > max_len {
                            continue;
                        }
                        let mut u2 = w.clone();
                        u2.extend_from_slice(u);
                        fresh.push((r.lhs, (u2, v.clone())));
                    }
                }
            }
            let mut changed = false;
            for (x, pair) in fresh {
                if ctx[x].insert(pair) {
                    total += 1;
                    changed = true;
                }
            }
            if total > cap {
                return Err(GrammarError::BudgetExceeded { cap });
            }
            if !changed {
                break;
            }
        }
        let mut out = core::mem::take(&mut ctx[a]);
        out.remove(&(Vec::new(), Vec::new()));
        Ok(out)
    }
}

fn dedup_in_order<T: Ord + Clone>(items: Vec<T>) -> Vec<T> {
    let mut seen = BTreeSet::new();
    items
        .into_iter()
        .filter(|x| seen.insert(x.clone()))
        .collect()
}

fn fresh_name(used: &mut BTreeSet<String>, base: &str) -> String {
    let base: String = base
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect();
    let mut name = base.clone();
    let mut k = 2;
    while used.contains(&name) {
        name = alloc::format!("{base}_{k}");
        k += 1;
    }
    used.insert(name.clone());
    name
}

/// Converts a grammar to Chomsky normal form.
///
/// Steps: terminal wrapping in long right sides, binarisation, ε-removal and
/// unit-production removal. The language is preserved; if `ε ∈ L` the only
/// remaining ε-production sits on the start symbol, which is replaced by a
/// fresh start when the old one occurs on some right side. An input already
/// in CNF without ε-productions is returned unchanged.
pub fn to_cnf(g: &Grammar) -> CnfGrammar {
    let mut nts: Vec<String> = g.nonterminals.clone();
    let mut used: BTreeSet<String> = nts.iter().chain(g.terminals.iter()).cloned().collect();
    let mut prods: Vec<(usize, Vec<Symbol>)> = dedup_in_order(
        g.productions
            .iter()
            .map(|p| (p.lhs, p.rhs.clone()))
            .collect(),
    );

    // Terminals inside right sides of length >= 2 get wrapper nonterminals.
    let mut wrapper: BTreeMap<usize, usize> = BTreeMap::new();
    let mut wrapper_rules = Vec::new();
    for (_, rhs) in prods.iter_mut() {
        if rhs.len() < 2 {
            continue;
        }
        for s in rhs.iter_mut() {
            if let Symbol::Terminal(t) = *s {
                let nt = *wrapper.entry(t).or_insert_with(|| {
                    let name = fresh_name(&mut used, &alloc::format!("T_{}", g.terminals[t]));
                    nts.push(name);
                    wrapper_rules.push((nts.len() - 1, vec![Symbol::Terminal(t)]));
                    nts.len() - 1
                });
                *s = Symbol::Nonterminal(nt);
            }
        }
    }
    prods.extend(wrapper_rules);

    // Binarise.
    let mut binary = Vec::with_capacity(prods.len());
    for (lhs, rhs) in prods {
        if rhs.len() <= 2 {
            binary.push((lhs, rhs));
            continue;
        }
        let mut head = lhs;
        let k = rhs.len();
        for (i, s) in rhs.iter().take(k - 2).enumerate() {
            let name = fresh_name(&mut used, &alloc::format!("{}_{}", nts[lhs], i + 1));
            nts.push(name);
            let next = nts.len() - 1;
            binary.push((head, vec![*s, Symbol::Nonterminal(next)]));
            head = next;
        }
        binary.push((head, vec![rhs[k - 2], rhs[k - 1]]));
    }
    let prods = dedup_in_order(binary);

    // ε-removal.
    let n = nts.len();
    let mut nullable = vec![false; n];
    loop {
        let mut changed = false;
        for (lhs, rhs) in &prods {
            if !nullable[*lhs]
                && rhs
                    .iter()
                    .all(|s| matches!(s, Symbol::Nonterminal(b) if nullable[*b]))
            {
                nullable[*lhs] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let start_on_rhs = prods
        .iter()
        .any(|(_, rhs)| rhs.contains(&Symbol::Nonterminal(0)));
    let mut no_eps = Vec::with_capacity(prods.len());
    for (lhs, rhs) in &prods {
        match rhs.as_slice() {
            [] => {
                if *lhs == 0 && !start_on_rhs {
                    no_eps.push((*lhs, Vec::new()));
                }
            }
            [x, y] => {
                no_eps.push((*lhs, rhs.clone()));
                if matches!(x, Symbol::Nonterminal(b) if nullable[*b]) {
                    no_eps.push((*lhs, vec![*y]));
                }
                if matches!(y, Symbol::Nonterminal(c) if nullable[*c]) {
                    no_eps.push((*lhs, vec![*x]));
                }
            }
            _ => no_eps.push((*lhs, rhs.clone())),
        }
    }
    let mut prods = dedup_in_order(no_eps);
    if nullable[0] && start_on_rhs {
        // Fresh start at index 0; shift everything else by one.
        let name = fresh_name(&mut used, &alloc::format!("{}0", nts[0]));
        nts.insert(0, name);
        let shift = |s: Symbol| match s {
            Symbol::Nonterminal(b) => Symbol::Nonterminal(b + 1),
            t => t,
        };
        prods = prods
            .into_iter()
            .map(|(lhs, rhs)| (lhs + 1, rhs.into_iter().map(shift).collect()))
            .collect();
        prods.insert(0, (0, Vec::new()));
        prods.insert(1, (0, vec![Symbol::Nonterminal(1)]));
    }

    // Unit removal.
    let n = nts.len();
    let is_unit = |rhs: &[Symbol]| matches!(rhs, [Symbol::Nonterminal(_)]);
    let mut unit_edges: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (lhs, rhs) in &prods {
        if let [Symbol::Nonterminal(b)] = rhs.as_slice() {
            unit_edges[*lhs].push(*b);
        }
    }
    let mut out: Vec<(usize, Vec<Symbol>)> = prods
        .iter()
        .filter(|(_, rhs)| !is_unit(rhs))
        .cloned()
        .collect();
    for a in 0..n {
        if unit_edges[a].is_empty() {
            continue;
        }
        let mut seen = vec![false; n];
        seen[a] = true;
        let mut queue: VecDeque<usize> = unit_edges[a].iter().copied().collect();
        while let Some(b) = queue.pop_front() {
            if seen[b] {
                continue;
            }
            seen[b] = true;
            queue.extend(unit_edges[b].iter().copied());
            for (lhs, rhs) in &prods {
                if *lhs == b && !is_unit(rhs) {
                    // ε stays on the start symbol only.
                    if rhs.is_empty() && a != 0 {
                        continue;
                    }
                    out.push((a, rhs.clone()));
                }
            }
        }
    }

    let rules = out
        .into_iter()
        .map(|(lhs, rhs)| {
            let rhs = match rhs.as_slice() {
                [] => Rhs::Empty,
                [Symbol::Terminal(t)] => Rhs::Terminal(*t),
                [Symbol::Nonterminal(b), Symbol::Nonterminal(c)] => Rhs::Pair(*b, *c),
                _ => unreachable!("normalisation leaves only CNF shapes"),
            };
            Rule { lhs, rhs }
        })
        .collect();
    CnfGrammar {
        nonterminals: nts,
        terminals: g.terminals.clone(),
        rules: dedup_in_order(rules),
    }
}

/// Removes unproductive and unreachable nonterminals and unused terminals.
///
/// If the start symbol is unproductive the result has no rules at all and
/// [`CnfGrammar::is_empty_language`] holds.
pub fn prune_useless(g: &CnfGrammar) -> CnfGrammar {
    let n = g.nonterminals.len();
    let mut productive = vec![false; n];
    loop {
        let mut changed = false;
        for r in &g.rules {
            if productive[r.lhs] {
                continue;
            }
            let yes = match r.rhs {
                Rhs::Pair(b, c) => productive[b] && productive[c],
                _ => true,
            };
            if yes {
                productive[r.lhs] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    if !productive[0] {
        return CnfGrammar {
            nonterminals: vec![g.nonterminals[0].clone()],
            terminals: Vec::new(),
            rules: Vec::new(),
        };
    }
    let live: Vec<Rule> = g
        .rules
        .iter()
        .filter(|r| match r.rhs {
            Rhs::Pair(b, c) => productive[r.lhs] && productive[b] && productive[c],
            _ => productive[r.lhs],
        })
        .copied()
        .collect();
    let mut reachable = vec![false; n];
    reachable[0] = true;
    let mut stack = vec![0usize];
    while let Some(a) = stack.pop() {
        for r in live.iter().filter(|r| r.lhs == a) {
            if let Rhs::Pair(b, c) = r.rhs {
                for x in [b, c] {
                    if !reachable[x] {
                        reachable[x] = true;
                        stack.push(x);
                    }
                }
            }
        }
    }
    let mut nt_map = vec![usize::MAX; n];
    let mut nonterminals = Vec::new();
    for a in 0..n {
        if reachable[a] {
            nt_map[a] = nonterminals.len();
            nonterminals.push(g.nonterminals[a].clone());
        }
    }
    let kept: Vec<Rule> = live.into_iter().filter(|r| reachable[r.lhs]).collect();
    let mut used_t = vec![false; g.terminals.len()];
    for r in &kept {
        if let Rhs::Terminal(t) = r.rhs {
            used_t[t] = true;
        }
    }
    let mut t_map = vec![usize::MAX; g.terminals.len()];
    let mut terminals = Vec::new();
    for (t, name) in g.terminals.iter().enumerate() {
        if used_t[t] {
            t_map[t] = terminals.len();
            terminals.push(name.clone());
        }
    }
    let rules = kept
        .into_iter()
        .map(|r| Rule {
            lhs: nt_map[r.lhs],
            rhs: match r.rhs {
                Rhs::Pair(b, c) => Rhs::Pair(nt_map[b], nt_map[c]),
                Rhs::Terminal(t) => Rhs::Terminal(t_map[t]),
                Rhs::Empty => Rhs::Empty,
            },
        })
        .collect();
    CnfGrammar {
        nonterminals,
        terminals,
        rules,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Sym::{N, T};

    pub(crate) fn example1() -> Grammar {
        Grammar::builder("S")
            .rule("S", &[N("S"), N("S")])
            .rule("S", &[N("A"), N("B")])
            .rule("S", &[N("B"), N("A")])
            .rule("S", &[N("A"), N("D")])
            .rule("S", &[N("B"), N("C")])
            .rule("C", &[N("S"), N("A")])
            .rule("D", &[N("S"), N("B")])
            .rule("A", &[T("a")])
            .rule("B", &[T("b")])
            .build()
            .unwrap()
    }

    fn words(g: &CnfGrammar, max: usize) -> BTreeSet<String> {
        g.enumerate_words(0, max, 1_000_000)
            .unwrap()
            .iter()
            .map(|w| g.render_word(w))
            .collect()
    }

    #[test]
    fn builder_orders_start_first() {
        let g = example1();
        assert_eq!(g.nonterminals(), ["S", "C", "D", "A", "B"]);
        assert_eq!(g.productions().len(), 9);
        assert_eq!(g.terminals(), ["a", "b"]);
    }

    #[test]
    fn builder_errors() {
        let e = Grammar::builder("S").rule("S", &[N("X")]).build();
        assert_eq!(e, Err(GrammarError::UndeclaredSymbol("X".into())));
        let e = Grammar::builder("S").rule("A", &[T("a")]).build();
        assert_eq!(e, Err(GrammarError::StartWithoutProductions("S".into())));
        let e = Grammar::builder("S").rule("S", &[T("S")]).build();
        assert_eq!(e, Err(GrammarError::NameClash("S".into())));
    }

    #[test]
    fn cnf_wraps_terminals() {
        let g = Grammar::builder("S")
            .rule("S", &[T("a"), T("b")])
            .build()
            .unwrap();
        let c = to_cnf(&g);
        assert_eq!(c.nonterminals(), ["S", "T_a", "T_b"]);
        assert!(c.rules().contains(&Rule {
            lhs: 0,
            rhs: Rhs::Pair(1, 2)
        }));
        assert!(c.rules().contains(&Rule {
            lhs: 1,
            rhs: Rhs::Terminal(0)
        }));
        assert!(c.rules().contains(&Rule {
            lhs: 2,
            rhs: Rhs::Terminal(1)
        }));
        assert_eq!(words(&c, 8), ["ab".to_string()].into_iter().collect());
    }

    #[test]
    fn cnf_fixed_point() {
        let g = example1();
        assert_eq!(to_cnf(&g), g.as_cnf().unwrap());
    }

    #[test]
    fn cnf_removes_unit_chain() {
        let g = Grammar::builder("S")
            .rule("S", &[N("A")])
            .rule("A", &[T("a")])
            .build()
            .unwrap();
        let c = to_cnf(&g);
        assert!(c.rules().contains(&Rule {
            lhs: 0,
            rhs: Rhs::Terminal(0)
        }));
        assert!(c
            .rules()
            .iter()
            .all(|r| r.lhs != 0 || r.rhs == Rhs::Terminal(0)));
        let p = prune_useless(&c);
        assert_eq!(p.nonterminals(), ["S"]);
    }

    #[test]
    fn cnf_epsilon_gets_fresh_start() {
        // S -> a S b | ε
        let g = Grammar::builder("S")
            .rule("S", &[T("a"), N("S"), T("b")])
            .rule("S", &[])
            .build()
            .unwrap();
        let c = to_cnf(&g);
        assert_eq!(c.nonterminals()[0], "S0");
        let eps: Vec<_> = c.rules().iter().filter(|r| r.rhs == Rhs::Empty).collect();
        assert_eq!(eps.len(), 1);
        assert_eq!(eps[0].lhs, 0);
        let w = words(&c, 6);
        let expected: BTreeSet<String> = ["ε", "ab", "aabb", "aaabbb"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(w, expected);
    }

    #[test]
    fn prune_removes_unproductive() {
        let g = Grammar::builder("S")
            .rule("S", &[T("a")])
            .rule("S", &[N("U"), N("S")])
            .rule("U", &[N("U"), N("U")])
            .build()
            .unwrap();
        let p = prune_useless(&to_cnf(&g));
        assert_eq!(p.nonterminals(), ["S"]);
        assert_eq!(p.rules().len(), 1);
    }

    #[test]
    fn prune_keeps_example1() {
        let c = to_cnf(&example1());
        assert_eq!(prune_useless(&c), c);
    }

    #[test]
    fn prune_flags_empty_language() {
        let g = Grammar::builder("S")
            .rule("S", &[N("S"), N("S")])
            .build()
            .unwrap();
        let p = prune_useless(&to_cnf(&g));
        assert!(p.is_empty_language());
        assert!(p.rules().is_empty());
    }

    #[test]
    fn enumerate_example1() {
        let c = to_cnf(&example1());
        let w = words(&c, 4);
        assert_eq!(w.len(), 8);
        assert!(w
            .iter()
            .all(|s| s.matches('a').count() == s.matches('b').count()));
        assert!(words(&c, 1).is_empty());
        let single = to_cnf(&Grammar::builder("S").rule("S", &[T("a")]).build().unwrap());
        assert_eq!(words(&single, 3), ["a".to_string()].into_iter().collect());
    }

    #[test]
    fn enumerate_budget() {
        let c = to_cnf(&example1());
        assert_eq!(
            c.enumerate_words(0, 10, 50),
            Err(GrammarError::BudgetExceeded { cap: 50 })
        );
    }

    #[test]
    fn pump_pairs_examples() {
        let acyclic = to_cnf(
            &Grammar::builder("S")
                .rule("S", &[N("A"), N("B")])
                .rule("A", &[T("a")])
                .rule("B", &[T("b")])
                .build()
                .unwrap(),
        );
        assert!(acyclic.pump_pairs(0, 6, 10_000).unwrap().is_empty());

        let c = to_cnf(&example1());
        // a = 0, b = 1; S ⇒ SS ⇒ S ab
        assert!(c
            .pump_pairs(0, 2, 10_000)
            .unwrap()
            .contains(&(vec![], vec![0, 1])));

        let g = to_cnf(
            &Grammar::builder("S")
                .rule("S", &[N("A"), N("S")])
                .rule("A", &[T("a")])
                .rule("S", &[T("b")])
                .build()
                .unwrap(),
        );
        let a = g.terminals().iter().position(|t| t == "a").unwrap();
        assert!(g
            .pump_pairs(0, 3, 10_000)
            .unwrap()
            .contains(&(vec![a], vec![])));
    }

    #[test]
    fn derives_matches_enumeration() {
        let c = to_cnf(&example1());
        let all = c.enumerate_words(0, 6, 100_000).unwrap();
        for len in 0..=6usize {
            for bits in 0..(1u32 << len) {
                let w: Word = (0..len).map(|i| ((bits >> i) & 1) as usize).collect();
                assert_eq!(c.derives(0, &w), all.contains(&w), "{w:?}");
            }
        }
    }
}
