//! The bracket monoid `T` over `N ∪ N'` with the one-sided relation `AA' = e`.
//!
//! Only an opener followed by its own closer cancels. `A'A` is irreducible,
//! which is what separates `T` from the free group on the nonterminals.

use alloc::string::String;
use alloc::vec::Vec;

/// An opener `A_i` or closer `A_i'`, packed as `(i << 1) | closer`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bracket(u32);

impl Bracket {
    pub fn open(nt: usize) -> Self {
        Bracket((nt as u32) << 1)
    }

    pub fn close(nt: usize) -> Self {
        Bracket(((nt as u32) << 1) | 1)
    }

    pub fn nonterminal(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn is_close(self) -> bool {
        self.0 & 1 == 1
    }

    /// Toggles opener/closer.
    pub fn prime(self) -> Self {
        Bracket(self.0 ^ 1)
    }

    /// True when `self` followed by `next` is a redex `A A'`.
    fn cancels_with(self, next: Bracket) -> bool {
        !self.is_close() && next.0 == self.0 | 1
    }
}

/// A canonical element of `T`: a bracket word with no factor `A A'`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TWord(Vec<Bracket>);

impl TWord {
    pub fn empty() -> Self {
        TWord(Vec::new())
    }

    /// Normal form of an arbitrary bracket word (single stack pass).
    pub fn canon(raw: &[Bracket]) -> Self {
        let mut out = TWord(Vec::with_capacity(raw.len()));
        for &b in raw {
            out.push(b);
        }
        out
    }

    pub fn letter(b: Bracket) -> Self {
        TWord(alloc::vec![b])
    }

    fn push(&mut self, b: Bracket) {
        match self.0.last() {
            Some(&top) if top.cancels_with(b) => {
                self.0.pop();
            }
            _ => self.0.push(b),
        }
    }

    pub fn as_slice(&self) -> &[Bracket] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `t_canon(self ++ other)`; cancellation can only happen at the seam.
    pub fn mul(&self, other: &TWord) -> TWord {
        let mut out = TWord(Vec::with_capacity(self.0.len() + other.0.len()));
        out.0.extend_from_slice(&self.0);
        for &b in &other.0 {
            out.push(b);
        }
        out
    }

    /// Reverse and toggle every letter, then canonicalise.
    pub fn inv(&self) -> TWord {
        let raw: Vec<Bracket> = self.0.iter().rev().map(|b| b.prime()).collect();
        TWord::canon(&raw)
    }

    /// True iff the word is `e`, i.e. lies in the restricted Dyck language.
    pub fn is_balanced(&self) -> bool {
        self.0.is_empty()
    }

    /// Openers as the nonterminal name, closers with a trailing `'`;
    /// letters are space separated, `ε` for the empty word.
    pub fn render(&self, names: &[String]) -> String {
        if self.0.is_empty() {
            return String::from("ε");
        }
        let mut s = String::new();
        for (i, b) in self.0.iter().enumerate() {
            if i > 0 {
                s.push(' ');
            }
            match names.get(b.nonterminal()) {
                Some(n) => s.push_str(n),
                None => s.push_str(&alloc::format!("A{}", b.nonterminal() + 1)),
            }
            if b.is_close() {
                s.push('\'');
            }
        }
        s
    }
}
