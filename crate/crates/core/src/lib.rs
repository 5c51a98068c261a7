//! Deciding whether a context-free language is contained in a group language.
//!
//! The crate is `no_std` and only needs `alloc`. A grammar in Chomsky normal
//! form is turned into a labelled transition diagram whose arc labels live in
//! the monoid `G × T`, where `G` is the target group and `T` is the bracket
//! monoid over the nonterminals with the one-sided relation `AA' = e`. A
//! Floyd–Warshall style closure over finite label sets then yields the
//! inclusion verdict. Independent oracles in [`oracle`] provide ground truth.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod closure;
pub mod diagram;
pub mod dyck;
pub mod grammar;
pub mod group;
pub mod oracle;
pub mod semiring;

pub use closure::{decide, kleene_closure, ClosureError, ClosureResult, Mode, OpCounts, Verdict};
pub use diagram::{build_diagram, initial_matrix, Diagram};
pub use dyck::{Bracket, TWord};
pub use grammar::{CnfGrammar, Grammar, GrammarError, Rhs, Rule, Sym, Symbol, Word};
pub use group::{GroupBackend, GroupElem, GroupError, Letter, Morphism, Perm};
pub use semiring::{CapExceeded, LabelSet, ULabel};
