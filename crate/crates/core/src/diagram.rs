//! The transition diagram of a CNF grammar.
//!
//! Vertices are the nonterminals in grammar order plus a fresh sink `Z` at
//! index `n`. A production `A -> a` (or `A -> ε`) gives an arc `A → Z`
//! labelled `⟨a, e⟩`; a production `A -> BC` gives `A → B` labelled `⟨ε, C⟩`
//! and `Z → C` labelled `⟨ε, C'⟩`. There are no other arcs.

use alloc::string::String;
use alloc::vec::Vec;

use crate::dyck::{Bracket, TWord};
use crate::grammar::{CnfGrammar, Rhs};
use crate::group::{GroupBackend, GroupError, Morphism};
use crate::semiring::{LabelSet, ULabel};

/// Which production shape produced an arc.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArcSource {
    Terminal(usize),
    Empty,
    /// `A → B` of `A -> BC`, pushing `C`.
    Open(usize),
    /// `Z → C` of `A -> BC`, popping `C`.
    Close(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arc {
    pub from: usize,
    pub to: usize,
    pub label: ULabel,
    /// Production shape of the first occurrence.
    pub source: ArcSource,
    /// How many productions yield this `(from, to, label)` triple.
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagram {
    names: Vec<String>,
    arcs: Vec<Arc>,
}

impl Diagram {
    /// Number of vertices, `n + 1`.
    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    /// Index of the sink `Z`.
    pub fn sink(&self) -> usize {
        self.names.len() - 1
    }

    /// Vertex names; the last one is the sink.
    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Distinct arcs in construction order.
    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    /// Size of the arc multiset before deduplication.
    pub fn multiset_len(&self) -> usize {
        self.arcs.iter().map(|a| a.multiplicity).sum()
    }
}

pub fn build_diagram(
    g: &CnfGrammar,
    m: &Morphism,
    b: &GroupBackend,
) -> Result<Diagram, GroupError> {
    for (t, name) in g.terminals().iter().enumerate() {
        let Some(image) = m.images().get(t) else {
            return Err(GroupError::UnmappedTerminal(name.clone()));
        };
        b.check_word(image)?;
    }
    let n = g.nonterminal_count();
    let sink = n;
    let mut names: Vec<String> = g.nonterminals().to_vec();
    let mut sink_name = String::from("Z");
    while names.contains(&sink_name) {
        sink_name.push('_');
    }
    names.push(sink_name);

    let mut arcs: Vec<Arc> = Vec::new();
    let mut add = |from: usize, to: usize, label: ULabel, source: ArcSource| match arcs
        .iter_mut()
        .find(|a| a.from == from && a.to == to && a.label == label)
    {
        Some(a) => a.multiplicity += 1,
        None => arcs.push(Arc {
            from,
            to,
            label,
            source,
            multiplicity: 1,
        }),
    };
    for r in g.rules() {
        match r.rhs {
            Rhs::Terminal(t) => add(
                r.lhs,
                sink,
                ULabel::new(m.eval(b, &[t]), TWord::empty()),
                ArcSource::Terminal(t),
            ),
            Rhs::Empty => add(r.lhs, sink, ULabel::identity(b), ArcSource::Empty),
            Rhs::Pair(x, y) => {
                add(
                    r.lhs,
                    x,
                    ULabel::new(b.identity(), TWord::letter(Bracket::open(y))),
                    ArcSource::Open(y),
                );
                add(
                    sink,
                    y,
                    ULabel::new(b.identity(), TWord::letter(Bracket::close(y))),
                    ArcSource::Close(y),
                );
            }
        }
    }
    Ok(Diagram { names, arcs })
}

/// Row-major `(n+1) × (n+1)` matrix; entry `(i, j)` holds the labels of the
/// arcs from vertex `i` to vertex `j`.
pub fn initial_matrix(d: &Diagram) -> Vec<LabelSet> {
    let v = d.vertex_count();
    let mut m = alloc::vec![LabelSet::empty(); v * v];
    for a in &d.arcs {
        m[a.from * v + a.to].insert(a.label.clone());
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::{to_cnf, Grammar, Sym::N, Sym::T};
    use crate::group::parse_letter_word;
    use alloc::vec;

    fn sab() -> CnfGrammar {
        to_cnf(
            &Grammar::builder("S")
                .rule("S", &[N("A"), N("B")])
                .rule("A", &[T("a")])
                .rule("B", &[T("b")])
                .build()
                .unwrap(),
        )
    }

    fn pm() -> (GroupBackend, Morphism) {
        (
            GroupBackend::Free { rank: 1 },
            Morphism::from_images(vec![
                parse_letter_word("x1").unwrap(),
                parse_letter_word("x1'").unwrap(),
            ]),
        )
    }

    #[test]
    fn sab_arcs() {
        let (b, m) = pm();
        let d = build_diagram(&sab(), &m, &b).unwrap();
        // S=0, A=1, B=2, Z=3
        assert_eq!(d.sink(), 3);
        let got: Vec<(usize, usize, ULabel)> = d
            .arcs()
            .iter()
            .map(|a| (a.from, a.to, a.label.clone()))
            .collect();
        let e = b.identity();
        let x1 = b.canon(&parse_letter_word("x1").unwrap());
        let x1i = b.canon(&parse_letter_word("x1'").unwrap());
        assert_eq!(
            got,
            vec![
                (
                    0,
                    1,
                    ULabel::new(e.clone(), TWord::letter(Bracket::open(2)))
                ),
                (3, 2, ULabel::new(e, TWord::letter(Bracket::close(2)))),
                (1, 3, ULabel::new(x1.clone(), TWord::empty())),
                (2, 3, ULabel::new(x1i, TWord::empty())),
            ]
        );
        // row-major, 4 vertices
        let m0 = initial_matrix(&d);
        assert_eq!(m0[1].len(), 1);
        assert!(m0[4 + 3].contains(&ULabel::new(x1, TWord::empty())));
        assert!(m0[3].is_empty());
    }

    #[test]
    fn epsilon_arc_is_identity() {
        let g = CnfGrammar::new(
            vec!["S".into()],
            vec![],
            vec![crate::grammar::Rule {
                lhs: 0,
                rhs: Rhs::Empty,
            }],
        )
        .unwrap();
        let b = GroupBackend::Free { rank: 1 };
        let d = build_diagram(&g, &Morphism::from_images(vec![]), &b).unwrap();
        assert_eq!(d.arcs().len(), 1);
        assert!(d.arcs()[0].label.is_identity());
        assert_eq!((d.arcs()[0].from, d.arcs()[0].to), (0, 1));
    }

    #[test]
    fn parallel_equal_arcs_collapse() {
        let g = to_cnf(
            &Grammar::builder("S")
                .rule("S", &[T("a")])
                .rule("S", &[T("b")])
                .build()
                .unwrap(),
        );
        let b = GroupBackend::Free { rank: 1 };
        let x1 = parse_letter_word("x1").unwrap();
        let d = build_diagram(&g, &Morphism::from_images(vec![x1.clone(), x1]), &b).unwrap();
        assert_eq!(d.multiset_len(), 2);
        assert_eq!(initial_matrix(&d)[1].len(), 1);
    }

    #[test]
    fn morphism_errors_propagate() {
        let b = GroupBackend::Free { rank: 1 };
        let short = Morphism::from_images(vec![parse_letter_word("x1").unwrap()]);
        assert_eq!(
            build_diagram(&sab(), &short, &b),
            Err(GroupError::UnmappedTerminal("b".into()))
        );
        let far = Morphism::from_images(vec![
            parse_letter_word("x1").unwrap(),
            parse_letter_word("x2").unwrap(),
        ]);
        assert!(build_diagram(&sab(), &far, &b).is_err());
    }
}
