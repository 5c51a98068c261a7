//! Group backends over the paired alphabet `x1 … xm, x1' … xm'`.
//!
//! Every backend has an exact canonical form, so element equality is plain
//! structural equality of [`GroupElem`] values.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("terminal `{0}` has no image under the morphism")]
    UnmappedTerminal(String),
    #[error("generator {letter} out of range for rank {rank}")]
    GeneratorOutOfRange { letter: String, rank: usize },
    #[error("malformed generator word `{0}`")]
    BadWord(String),
    #[error("malformed permutation: {0}")]
    MalformedPermutation(String),
}

/// A generator `x_i` or its formal inverse `x_i'`. `gen` is zero-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub gen: u32,
    pub inverse: bool,
}

impl Letter {
    pub fn new(gen: u32, inverse: bool) -> Self {
        Letter { gen, inverse }
    }

    /// `(a')' = a`.
    pub fn prime(self) -> Self {
        Letter {
            gen: self.gen,
            inverse: !self.inverse,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.gen + 1)?;
        if self.inverse {
            f.write_str("'")?;
        }
        Ok(())
    }
}

/// Formal inverse of a word: reverse it and prime every letter.
pub fn inverse_word(w: &[Letter]) -> Vec<Letter> {
    w.iter().rev().map(|l| l.prime()).collect()
}

pub fn render_letters(w: &[Letter]) -> String {
    if w.is_empty() {
        return "ε".to_string();
    }
    let mut s = String::new();
    for l in w {
        s.push_str(&l.to_string());
    }
    s
}

/// Parses `x1x2'`, `x1 x2'`, `eps`, `ε` or the empty string.
pub fn parse_letter_word(text: &str) -> Result<Vec<Letter>, GroupError> {
    let t = text.trim();
    if t.is_empty() || t == "eps" || t == "ε" {
        return Ok(Vec::new());
    }
    let bad = || GroupError::BadWord(text.to_string());
    let bytes = t.as_bytes();
    let mut i = 0;
    let mut out = Vec::new();
    while i < bytes.len() {
        if bytes[i].is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if bytes[i] != b'x' {
            return Err(bad());
        }
        i += 1;
        let start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        let idx: u32 = t[start..i].parse().map_err(|_| bad())?;
        if idx == 0 {
            return Err(bad());
        }
        let inverse = i < bytes.len() && bytes[i] == b'\'';
        if inverse {
            i += 1;
        }
        out.push(Letter::new(idx - 1, inverse));
    }
    Ok(out)
}

/// A permutation of `{0 … d-1}` stored as its image table.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm(Vec<u32>);

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm((0..degree as u32).collect())
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self, GroupError> {
        let mut seen = vec![false; images.len()];
        for &x in &images {
            let x = x as usize;
            if x >= images.len() || seen[x] {
                return Err(GroupError::MalformedPermutation(alloc::format!(
                    "{images:?}"
                )));
            }
            seen[x] = true;
        }
        Ok(Perm(images))
    }

    /// Parses cycle notation over the points `1 … degree`, e.g. `(1 2 3)(4 5)`.
    /// `()` or an empty string is the identity.
    pub fn parse_cycles(degree: usize, text: &str) -> Result<Self, GroupError> {
        let err = |why: &str| GroupError::MalformedPermutation(alloc::format!("{why} in `{text}`"));
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut moved = vec![false; degree];
        let mut rest = text.trim();
        while !rest.is_empty() {
            let Some(body) = rest.strip_prefix('(') else {
                return Err(err("expected `(`"));
            };
            let close = body.find(')').ok_or_else(|| err("unclosed cycle"))?;
            let mut cycle = Vec::new();
            for tok in body[..close].split(|c: char| c.is_whitespace() || c == ',') {
                if tok.is_empty() {
                    continue;
                }
                let p: usize = tok.parse().map_err(|_| err("bad point"))?;
                if p == 0 || p > degree {
                    return Err(err("point out of range"));
                }
                if moved[p - 1] {
                    return Err(err("repeated point"));
                }
                moved[p - 1] = true;
                cycle.push(p - 1);
            }
            for k in 0..cycle.len() {
                images[cycle[k]] = cycle[(k + 1) % cycle.len()] as u32;
            }
            rest = body[close + 1..].trim_start();
        }
        Ok(Perm(images))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        Perm(self.0.iter().map(|&x| other.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut r = vec![0u32; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            r[x as usize] = i as u32;
        }
        Perm(r)
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return f.write_str("ε");
        }
        let mut seen = vec![false; self.0.len()];
        for start in 0..self.0.len() {
            if seen[start] || self.0[start] as usize == start {
                continue;
            }
            f.write_str("(")?;
            let mut x = start;
            let mut first = true;
            while !seen[x] {
                seen[x] = true;
                if !first {
                    f.write_str(" ")?;
                }
                write!(f, "{}", x + 1)?;
                first = false;
                x = self.0[x] as usize;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupBackend {
    Free {
        rank: usize,
    },
    FreeAbelian {
        rank: usize,
    },
    /// Generator `x_i` acts as `generators[i]`.
    Permutation {
        degree: usize,
        generators: Vec<Perm>,
    },
}

/// Canonical group element. Products are computed without the backend since
/// each variant carries everything it needs.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GroupElem {
    /// Freely reduced word.
    Free(Vec<Letter>),
    /// Exponent vector.
    Abelian(Vec<i64>),
    Perm(Perm),
}

impl GroupElem {
    pub fn mul(&self, other: &GroupElem) -> GroupElem {
        match (self, other) {
            (GroupElem::Free(a), GroupElem::Free(b)) => {
                let mut out = a.clone();
                for &l in b {
                    if out.last() == Some(&l.prime()) {
                        out.pop();
                    } else {
                        out.push(l);
                    }
                }
                GroupElem::Free(out)
            }
            (GroupElem::Abelian(a), GroupElem::Abelian(b)) => {
                GroupElem::Abelian(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            (GroupElem::Perm(a), GroupElem::Perm(b)) => GroupElem::Perm(a.then(b)),
            _ => panic!("multiplying elements of different groups"),
        }
    }

    pub fn inv(&self) -> GroupElem {
        match self {
            GroupElem::Free(w) => GroupElem::Free(inverse_word(w)),
            GroupElem::Abelian(v) => GroupElem::Abelian(v.iter().map(|x| -x).collect()),
            GroupElem::Perm(p) => GroupElem::Perm(p.inverse()),
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            GroupElem::Free(w) => w.is_empty(),
            GroupElem::Abelian(v) => v.iter().all(|&x| x == 0),
            GroupElem::Perm(p) => p.is_identity(),
        }
    }
}

impl fmt::Display for GroupElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElem::Free(w) => f.write_str(&render_letters(w)),
            GroupElem::Abelian(v) => {
                if self.is_identity() {
                    return f.write_str("ε");
                }
                for (i, &e) in v.iter().enumerate() {
                    match e {
                        0 => {}
                        1 => write!(f, "x{}", i + 1)?,
                        -1 => write!(f, "x{}'", i + 1)?,
                        e if e > 0 => write!(f, "x{}^{}", i + 1, e)?,
                        e => write!(f, "x{}'^{}", i + 1, -e)?,
                    }
                }
                Ok(())
            }
            GroupElem::Perm(p) => write!(f, "{p}"),
        }
    }
}

impl GroupBackend {
    pub fn rank(&self) -> usize {
        match self {
            GroupBackend::Free { rank } | GroupBackend::FreeAbelian { rank } => *rank,
            GroupBackend::Permutation { generators, .. } => generators.len(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            GroupBackend::Free { .. } => "free",
            GroupBackend::FreeAbelian { .. } => "free-abelian",
            GroupBackend::Permutation { .. } => "permutation",
        }
    }

    pub fn identity(&self) -> GroupElem {
        match self {
            GroupBackend::Free { .. } => GroupElem::Free(Vec::new()),
            GroupBackend::FreeAbelian { rank } => GroupElem::Abelian(vec![0; *rank]),
            GroupBackend::Permutation { degree, .. } => GroupElem::Perm(Perm::identity(*degree)),
        }
    }

    pub fn check_word(&self, w: &[Letter]) -> Result<(), GroupError> {
        let rank = self.rank();
        match w.iter().find(|l| l.gen as usize >= rank) {
            Some(l) => Err(GroupError::GeneratorOutOfRange {
                letter: l.to_string(),
                rank,
            }),
            None => Ok(()),
        }
    }

    /// Canonical form of the element a word represents. Letters must be
    /// within rank (see [`GroupBackend::check_word`]).
    pub fn canon(&self, w: &[Letter]) -> GroupElem {
        match self {
            GroupBackend::Free { .. } => {
                let mut out: Vec<Letter> = Vec::with_capacity(w.len());
                for &l in w {
                    if out.last() == Some(&l.prime()) {
                        out.pop();
                    } else {
                        out.push(l);
                    }
                }
                GroupElem::Free(out)
            }
            GroupBackend::FreeAbelian { rank } => {
                let mut v = vec![0i64; *rank];
                for l in w {
                    v[l.gen as usize] += if l.inverse { -1 } else { 1 };
                }
                GroupElem::Abelian(v)
            }
            GroupBackend::Permutation { degree, generators } => {
                let mut p = Perm::identity(*degree);
                for l in w {
                    let g = &generators[l.gen as usize];
                    p = if l.inverse {
                        p.then(&g.inverse())
                    } else {
                        p.then(g)
                    };
                }
                GroupElem::Perm(p)
            }
        }
    }

    pub fn mul(&self, a: &GroupElem, b: &GroupElem) -> GroupElem {
        a.mul(b)
    }

    pub fn inv(&self, g: &GroupElem) -> GroupElem {
        g.inv()
    }

    pub fn is_identity(&self, g: &GroupElem) -> bool {
        g.is_identity()
    }
}

/// Terminal → generator-word map, resolved against a grammar's terminal list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    images: Vec<Vec<Letter>>,
}

impl Morphism {
    pub fn from_images(images: Vec<Vec<Letter>>) -> Self {
        Morphism { images }
    }

    /// Resolves named entries against `terminals`. A terminal without an entry
    /// whose own name is a generator word (`x1`, `x2'`, …) maps to itself.
    pub fn resolve(
        terminals: &[String],
        entries: &BTreeMap<String, Vec<Letter>>,
        backend: &GroupBackend,
    ) -> Result<Self, GroupError> {
        let mut images = Vec::with_capacity(terminals.len());
        for t in terminals {
            let image = match entries.get(t) {
                Some(w) => w.clone(),
                None => match parse_letter_word(t) {
                    Ok(w) if !w.is_empty() => w,
                    _ => return Err(GroupError::UnmappedTerminal(t.clone())),
                },
            };
            backend.check_word(&image)?;
            images.push(image);
        }
        Ok(Morphism { images })
    }

    pub fn images(&self) -> &[Vec<Letter>] {
        &self.images
    }

    pub fn image(&self, terminal: usize) -> &[Letter] {
        &self.images[terminal]
    }

    /// Homomorphic image of a terminal word.
    pub fn apply(&self, word: &[usize]) -> Vec<Letter> {
        word.iter()
            .flat_map(|&t| self.images[t].iter().copied())
            .collect()
    }

    /// `canon(apply(word))`.
    pub fn eval(&self, backend: &GroupBackend, word: &[usize]) -> GroupElem {
        backend.canon(&self.apply(word))
    }
}
