use std::collections::BTreeSet;

use cfgi_core::closure::{closure_levels, walk_label, walk_levels};
use cfgi_core::grammar::{prune_useless, to_cnf, GrammarBuilder};
use cfgi_core::oracle::{anisimov_decide, find_counterexample, witness_decide, PumpingBudget};
use cfgi_core::{
    build_diagram, initial_matrix, Bracket, CnfGrammar, Grammar, GroupBackend, LabelSet, Letter,
    Morphism, Rhs, Rule, Sym, TWord, ULabel,
};
use proptest::prelude::*;

fn brackets() -> impl Strategy<Value = Vec<Bracket>> {
    prop::collection::vec(
        (0..3usize, any::<bool>()).prop_map(|(n, c)| {
            if c {
                Bracket::close(n)
            } else {
                Bracket::open(n)
            }
        }),
        0..20,
    )
}

fn letters(rank: u32, max: usize) -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec(
        (0..rank, any::<bool>()).prop_map(|(g, i)| Letter::new(g, i)),
        0..=max,
    )
}

fn label() -> impl Strategy<Value = ULabel> {
    (
        letters(2, 3),
        prop::collection::vec((0..2usize, any::<bool>()), 0..3),
    )
        .prop_map(|(g, t)| {
            let raw: Vec<Bracket> = t
                .into_iter()
                .map(|(n, c)| {
                    if c {
                        Bracket::close(n)
                    } else {
                        Bracket::open(n)
                    }
                })
                .collect();
            ULabel::new(GroupBackend::Free { rank: 2 }.canon(&g), TWord::canon(&raw))
        })
}

fn label_set() -> impl Strategy<Value = LabelSet> {
    prop::collection::vec(label(), 0..=8).prop_map(|v| v.into_iter().collect())
}

/// Pushes openers and pops on a matching closer.
fn stack_balanced(w: &[Bracket]) -> bool {
    let mut stack = Vec::new();
    for &b in w {
        if !b.is_close() {
            stack.push(b.nonterminal());
        } else if stack.last() == Some(&b.nonterminal()) {
            stack.pop();
        } else {
            return false;
        }
    }
    stack.is_empty()
}

const NT: [&str; 3] = ["S", "A", "B"];
const TS: [&str; 2] = ["a", "b"];

/// Arbitrary grammars over `S, A, B` and `a, b`; every nonterminal gets at
/// least one production.
fn grammar() -> impl Strategy<Value = Grammar> {
    let rhs = prop::collection::vec((any::<bool>(), 0..3usize), 0..=3);
    (1..=3usize, prop::collection::vec((0..3usize, rhs), 1..=6)).prop_map(|(n, extra)| {
        let mut b = GrammarBuilder::new("S");
        let mut rules: Vec<(usize, Vec<(bool, usize)>)> =
            (0..n).map(|i| (i, vec![(true, i % 2)])).collect();
        rules.extend(extra.into_iter().map(|(l, r)| (l % n, r)));
        for (lhs, rhs) in &rules {
            let syms: Vec<Sym<'_>> = rhs
                .iter()
                .map(|&(t, i)| {
                    if t {
                        Sym::T(TS[i % 2])
                    } else {
                        Sym::N(NT[i % n])
                    }
                })
                .collect();
            b.push_rule(NT[*lhs], &syms);
        }
        b.build().expect("every nonterminal has a production")
    })
}

fn cnf_grammar() -> impl Strategy<Value = CnfGrammar> {
    let rhs = prop_oneof![
        4 => (0..4usize, 0..4usize).prop_map(|(b, c)| (0, b, c)),
        4 => (0..2usize).prop_map(|t| (1, t, 0)),
        1 => Just((2, 0, 0)),
    ];
    (1..=4usize, prop::collection::vec((0..4usize, rhs), 1..=8)).prop_map(|(n, raw)| {
        let rules = raw
            .into_iter()
            .enumerate()
            .map(|(i, (l, (kind, x, y)))| Rule {
                lhs: if i == 0 { 0 } else { l % n },
                rhs: match kind {
                    0 => Rhs::Pair(x % n, y % n),
                    1 => Rhs::Terminal(x),
                    _ => Rhs::Empty,
                },
            })
            .collect();
        let nts = NT
            .iter()
            .chain(&["C"])
            .take(n)
            .map(|s| s.to_string())
            .collect();
        prune_useless(
            &CnfGrammar::new(nts, TS.iter().map(|s| s.to_string()).collect(), rules).unwrap(),
        )
    })
}

fn instance() -> impl Strategy<Value = (CnfGrammar, GroupBackend, Morphism)> {
    (
        cnf_grammar(),
        1..=2u32,
        prop::collection::vec(letters(2, 2), 2),
    )
        .prop_map(|(g, rank, imgs)| {
            let images = imgs
                .into_iter()
                .take(g.terminals().len())
                .map(|w| {
                    w.into_iter()
                        .map(|l| Letter::new(l.gen % rank, l.inverse))
                        .collect()
                })
                .collect();
            (
                g,
                GroupBackend::Free {
                    rank: rank as usize,
                },
                Morphism::from_images(images),
            )
        })
}

fn rendered(g: &CnfGrammar, max: usize) -> BTreeSet<String> {
    g.enumerate_words(0, max, 1_000_000)
        .unwrap()
        .iter()
        .map(|w| g.render_word(w))
        .collect()
}

/// Substring recognizer on the unnormalized grammar: `table[i][j]` holds the
/// nonterminals deriving `w[i..j]`, grown to a fixpoint.
fn general_derives(g: &Grammar, w: &[usize]) -> bool {
    let len = w.len();
    let n = g.nonterminals().len();
    let mut table = vec![vec![vec![false; n]; len + 1]; len + 1];
    loop {
        let mut changed = false;
        for i in 0..=len {
            for j in i..=len {
                for p in g.productions() {
                    if table[i][j][p.lhs] {
                        continue;
                    }
                    let mut reach = vec![false; len + 1];
                    reach[i] = true;
                    for s in &p.rhs {
                        let mut next = vec![false; len + 1];
                        for q in (i..=j).filter(|&q| reach[q]) {
                            match s {
                                cfgi_core::Symbol::Terminal(t) => {
                                    if q < j && w[q] == *t {
                                        next[q + 1] = true;
                                    }
                                }
                                cfgi_core::Symbol::Nonterminal(a) => {
                                    for r in q..=j {
                                        if table[q][r][*a] {
                                            next[r] = true;
                                        }
                                    }
                                }
                            }
                        }
                        reach = next;
                    }
                    if reach[j] {
                        table[i][j][p.lhs] = true;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            return table[0][len][0];
        }
    }
}

fn rendered_general(g: &Grammar, max: usize) -> BTreeSet<String> {
    let k = g.terminals().len();
    let mut out = BTreeSet::new();
    let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..=max {
        for w in &layer {
            if general_derives(g, w) {
                let s: String = w.iter().map(|&t| g.terminals()[t].as_str()).collect();
                out.insert(if s.is_empty() { "ε".to_string() } else { s });
            }
        }
        layer = layer
            .iter()
            .flat_map(|w| (0..k).map(move |t| w.iter().copied().chain([t]).collect()))
            .collect();
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn balanced_matches_stack_matcher(w in brackets()) {
        prop_assert_eq!(TWord::canon(&w).is_balanced(), stack_balanced(&w));
    }

    #[test]
    fn bracket_canon_is_idempotent(w in brackets()) {
        let c = TWord::canon(&w);
        prop_assert_eq!(TWord::canon(c.as_slice()), c.clone());
        prop_assert_eq!(c.inv().inv(), c);
    }

    #[test]
    fn labels_are_built_modulo_the_group(
        a1 in letters(2, 4), a2 in letters(2, 4), t1 in brackets(), t2 in brackets()
    ) {
        let b = GroupBackend::Free { rank: 2 };
        let joined: Vec<Letter> = a1.iter().chain(&a2).copied().collect();
        let tj: Vec<Bracket> = t1.iter().chain(&t2).copied().collect();
        let l1 = ULabel::new(b.canon(&a1), TWord::canon(&t1));
        let l2 = ULabel::new(b.canon(&a2), TWord::canon(&t2));
        prop_assert_eq!(l1.mul(&l2), ULabel::new(b.canon(&joined), TWord::canon(&tj)));
    }

    #[test]
    fn star_is_a_union_of_conjugations(v in label_set(), w in label_set()) {
        let cap = usize::MAX;
        let mut expect = LabelSet::empty();
        for x in w.iter() {
            let conj = LabelSet::singleton(x.inv()).mul(&v, cap).unwrap()
                .mul(&LabelSet::singleton(x.clone()), cap).unwrap();
            expect = expect.union(&conj, cap).unwrap();
        }
        prop_assert_eq!(v.star(&w, cap).unwrap(), expect);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn cnf_preserves_language(g in grammar()) {
        let cnf = to_cnf(&g);
        prop_assert_eq!(rendered(&cnf, 8), rendered_general(&g, 8));
        for r in cnf.rules() {
            if r.rhs == Rhs::Empty {
                prop_assert_eq!(r.lhs, 0);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn prune_is_idempotent_and_keeps_words(g in cnf_grammar()) {
        prop_assert_eq!(prune_useless(&g), g.clone());
        if !g.is_empty_language() {
            for w in g.shortest_words() {
                prop_assert!(w.is_some());
            }
        }
    }

    #[test]
    fn pump_pairs_pump(g in cnf_grammar()) {
        let witness = g.shortest_words();
        for (a, w) in witness.iter().enumerate() {
            let Some(w) = w else { continue };
            for (u, v) in g.pump_pairs(a, 5, 100_000).unwrap() {
                prop_assert!(!(u.is_empty() && v.is_empty()));
                let uwv: Vec<usize> = u.iter().chain(w).chain(&v).copied().collect();
                prop_assert!(g.derives(a, &uwv));
            }
        }
    }

    #[test]
    fn closure_entries_are_walk_labels((g, b, m) in instance()) {
        prop_assume!(!g.is_empty_language());
        let d = build_diagram(&g, &m, &b).unwrap();
        let walks = walk_levels(&d, d.vertex_count(), 2_000_000).unwrap();
        let labels = closure_levels(&initial_matrix(&d), 100_000).unwrap();
        for (k, (wl, ll)) in walks.iter().zip(&labels).enumerate() {
            for (ws, ls) in wl.iter().zip(ll) {
                let got: LabelSet = ws.iter().map(|w| walk_label(&d, &b, w)).collect();
                prop_assert_eq!(&got, ls);
                prop_assert!(ws.iter().all(|w| w.len() <= 1 << k));
            }
        }
    }

    #[test]
    fn oracles_agree((g, b, m) in instance()) {
        let w = witness_decide(&g, &b, &m);
        let a = anisimov_decide(&g, &b, &m, PumpingBudget::for_grammar(&g)).unwrap();
        prop_assert_eq!(a.included, w.included);
        let found = find_counterexample(&g, &b, &m, 6, 1_000_000).unwrap();
        if w.included {
            prop_assert!(found.is_none());
        } else {
            let cex = w.counterexample.unwrap();
            prop_assert!(g.derives(0, &cex));
            prop_assert!(!m.eval(&b, &cex).is_identity());
        }
        if let Some(cex) = found {
            prop_assert!(!w.included);
            prop_assert!(!m.eval(&b, &cex).is_identity());
        }
    }

    #[test]
    fn witness_ignores_rule_order((g, b, m) in instance(), rot in 0..8usize) {
        let mut rules = g.rules().to_vec();
        if !rules.is_empty() {
            let k = rot % rules.len();
            rules.rotate_left(k);
        }
        rules.reverse();
        let shuffled = CnfGrammar::new(g.nonterminals().to_vec(), g.terminals().to_vec(), rules).unwrap();
        prop_assert_eq!(
            witness_decide(&shuffled, &b, &m).included,
            witness_decide(&g, &b, &m).included
        );
    }
}
