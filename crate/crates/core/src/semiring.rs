//! Labels `⟨g, ω⟩ ∈ G × T` and the semiring of finite label sets.
//!
//! The terminal-word coordinate is kept as a canonical group element, so a
//! label is an element of the quotient of `Σ* × T` by group equality. Every
//! test the closure performs compares against `⟨ε, e⟩` modulo the group,
//! which makes the quotient verdict-preserving.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use crate::dyck::TWord;
use crate::group::{GroupBackend, GroupElem};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("label set cap {cap} exceeded in {op} of sets with {left} and {right} elements")]
pub struct CapExceeded {
    pub op: &'static str,
    pub left: usize,
    pub right: usize,
    pub cap: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ULabel {
    pub g: GroupElem,
    pub t: TWord,
}

impl ULabel {
    pub fn new(g: GroupElem, t: TWord) -> Self {
        ULabel { g, t }
    }

    /// `1_U = ⟨ε, e⟩`.
    pub fn identity(backend: &GroupBackend) -> Self {
        ULabel {
            g: backend.identity(),
            t: TWord::empty(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.t.is_empty() && self.g.is_identity()
    }

    /// Componentwise product `⟨α₁α₂, ω₁ω₂⟩`.
    pub fn mul(&self, other: &ULabel) -> ULabel {
        ULabel {
            g: self.g.mul(&other.g),
            t: self.t.mul(&other.t),
        }
    }

    /// `u' = ⟨α', ω'⟩`.
    pub fn inv(&self) -> ULabel {
        ULabel {
            g: self.g.inv(),
            t: self.t.inv(),
        }
    }

    /// `<group-word>|<bracket-word>`.
    pub fn render(&self, names: &[String]) -> String {
        alloc::format!("{}|{}", self.g, self.t.render(names))
    }
}

/// A finite set of labels; an element of the semiring `S_U`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LabelSet(BTreeSet<ULabel>);

impl FromIterator<ULabel> for LabelSet {
    fn from_iter<I: IntoIterator<Item = ULabel>>(iter: I) -> Self {
        LabelSet(iter.into_iter().collect())
    }
}

impl LabelSet {
    pub fn empty() -> Self {
        LabelSet(BTreeSet::new())
    }

    pub fn singleton(u: ULabel) -> Self {
        let mut s = BTreeSet::new();
        s.insert(u);
        LabelSet(s)
    }

    pub fn insert(&mut self, u: ULabel) -> bool {
        self.0.insert(u)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, u: &ULabel) -> bool {
        self.0.contains(u)
    }

    pub fn iter(&self) -> impl Iterator<Item = &ULabel> {
        self.0.iter()
    }

    pub fn is_superset(&self, other: &LabelSet) -> bool {
        self.0.is_superset(&other.0)
    }

    pub fn union(&self, other: &LabelSet, cap: usize) -> Result<LabelSet, CapExceeded> {
        let out: BTreeSet<ULabel> = self.0.union(&other.0).cloned().collect();
        if out.len() > cap {
            return Err(CapExceeded {
                op: "union",
                left: self.len(),
                right: other.len(),
                cap,
            });
        }
        Ok(LabelSet(out))
    }

    /// `{ u ∘ v : u ∈ self, v ∈ other }`.
    pub fn mul(&self, other: &LabelSet, cap: usize) -> Result<LabelSet, CapExceeded> {
        let mut out = BTreeSet::new();
        for u in &self.0 {
            for v in &other.0 {
                out.insert(u.mul(v));
            }
            if out.len() > cap {
                return Err(CapExceeded {
                    op: "product",
                    left: self.len(),
                    right: other.len(),
                    cap,
                });
            }
        }
        Ok(LabelSet(out))
    }

    /// `self ⋆ other = { w' v w : v ∈ self, w ∈ other }`.
    pub fn star(&self, other: &LabelSet, cap: usize) -> Result<LabelSet, CapExceeded> {
        let mut out = BTreeSet::new();
        for w in &other.0 {
            let w_inv = w.inv();
            for v in &self.0 {
                out.insert(w_inv.mul(v).mul(w));
            }
            if out.len() > cap {
                return Err(CapExceeded {
                    op: "star",
                    left: self.len(),
                    right: other.len(),
                    cap,
                });
            }
        }
        Ok(LabelSet(out))
    }

    /// Labels whose bracket component is balanced.
    pub fn balanced(&self) -> LabelSet {
        LabelSet(
            self.0
                .iter()
                .filter(|u| u.t.is_balanced())
                .cloned()
                .collect(),
        )
    }

    /// `self = {1_U}`.
    pub fn is_identity_singleton(&self) -> bool {
        self.0.len() == 1 && self.0.iter().all(ULabel::is_identity)
    }

    /// `self ⊆ {1_U}`.
    pub fn within_identity(&self) -> bool {
        self.0.iter().all(ULabel::is_identity)
    }

    /// Rendered labels, sorted by `(group part, bracket part)` text.
    pub fn render(&self, names: &[String]) -> Vec<String> {
        let mut rows: Vec<(String, String)> = self
            .0
            .iter()
            .map(|u| (alloc::format!("{}", u.g), u.t.render(names)))
            .collect();
        rows.sort();
        rows.into_iter()
            .map(|(g, t)| alloc::format!("{g}|{t}"))
            .collect()
    }
}
