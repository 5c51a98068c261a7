//! Text formats for grammars and group specifications.
//!
//! Grammar files:
//!
//! ```text
//! # comment
//! start: S
//! S -> A B | 'a'
//! A -> 'a'
//! B -> eps
//! ```
//!
//! Group files:
//!
//! ```text
//! kind: permutation
//! degree: 3
//! gen x1: (1 2 3)
//! map: a -> x1, b -> x1'
//! ```

use std::collections::{BTreeMap, BTreeSet};

use cfgi_core::grammar::GrammarBuilder;
use cfgi_core::group::parse_letter_word;
use cfgi_core::{Grammar, GrammarError, GroupBackend, GroupError, Letter, Perm, Sym};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: symbol `{name}` is used but has no productions")]
    Undeclared { line: usize, name: String },
    #[error("missing `start:` declaration")]
    MissingStart,
    #[error("line {line}: {source}")]
    Group { line: usize, source: GroupError },
    #[error("missing `{0}:` declaration")]
    MissingField(&'static str),
    #[error(transparent)]
    Grammar(#[from] GrammarError),
}

fn syntax(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        msg: msg.into(),
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
    .trim()
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    N(String),
    T(String),
}

fn tokenize_alt(line: usize, alt: &str) -> Result<Option<Vec<Tok>>, ParseError> {
    let alt = alt.trim();
    if alt.is_empty() {
        return Err(syntax(line, "empty right-hand side (use `eps` for ε)"));
    }
    if alt == "eps" || alt == "ε" {
        return Ok(None);
    }
    let mut out = Vec::new();
    let mut rest = alt;
    while !rest.is_empty() {
        if let Some(r) = rest.strip_prefix('\'') {
            let end = r
                .find('\'')
                .ok_or_else(|| syntax(line, "unterminated terminal quote"))?;
            let name = &r[..end];
            if name.is_empty() || name.chars().any(char::is_whitespace) {
                return Err(syntax(line, format!("bad terminal '{name}'")));
            }
            out.push(Tok::T(name.to_string()));
            rest = r[end + 1..].trim_start();
        } else {
            let end = rest
                .find(|c: char| c.is_whitespace() || c == '\'')
                .unwrap_or(rest.len());
            let name = &rest[..end];
            if name == "eps" || name == "ε" {
                return Err(syntax(line, "`eps` must stand alone"));
            }
            if !is_ident(name) {
                return Err(syntax(line, format!("bad symbol `{name}`")));
            }
            out.push(Tok::N(name.to_string()));
            rest = rest[end..].trim_start();
        }
    }
    Ok(Some(out))
}

/// Nonterminals come out start first, then in order of first definition.
pub fn parse_grammar(text: &str) -> Result<Grammar, ParseError> {
    let mut start: Option<String> = None;
    let mut rules: Vec<(usize, String, Vec<Tok>)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = strip_comment(raw);
        if body.is_empty() {
            continue;
        }
        if let Some(s) = body.strip_prefix("start:") {
            let s = s.trim();
            if !is_ident(s) {
                return Err(syntax(line, format!("bad start symbol `{s}`")));
            }
            if start.is_some() {
                return Err(syntax(line, "duplicate `start:` declaration"));
            }
            start = Some(s.to_string());
            continue;
        }
        let (lhs, rhs) = body
            .split_once("->")
            .ok_or_else(|| syntax(line, "expected `<NT> -> ...`"))?;
        let lhs = lhs.trim();
        if !is_ident(lhs) {
            return Err(syntax(line, format!("bad nonterminal `{lhs}`")));
        }
        for alt in rhs.split('|') {
            let toks = tokenize_alt(line, alt)?.unwrap_or_default();
            rules.push((line, lhs.to_string(), toks));
        }
    }
    let start = start.ok_or(ParseError::MissingStart)?;
    let defined: BTreeSet<&str> = rules.iter().map(|(_, l, _)| l.as_str()).collect();
    for (line, _, toks) in &rules {
        for t in toks {
            if let Tok::N(n) = t {
                if !defined.contains(n.as_str()) {
                    return Err(ParseError::Undeclared {
                        line: *line,
                        name: n.clone(),
                    });
                }
            }
        }
    }
    let mut b = GrammarBuilder::new(&start);
    for (_, lhs, toks) in &rules {
        let syms: Vec<Sym<'_>> = toks
            .iter()
            .map(|t| match t {
                Tok::N(n) => Sym::N(n),
                Tok::T(t) => Sym::T(t),
            })
            .collect();
        b.push_rule(lhs, &syms);
    }
    Ok(b.build()?)
}

/// A parsed group file: the backend plus the named terminal images.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupSpec {
    pub backend: GroupBackend,
    pub map: BTreeMap<String, Vec<Letter>>,
}

fn parse_count(line: usize, field: &str, v: &str) -> Result<usize, ParseError> {
    v.trim()
        .parse()
        .map_err(|_| syntax(line, format!("bad {field} `{}`", v.trim())))
}

pub fn parse_group(text: &str) -> Result<GroupSpec, ParseError> {
    let mut kind: Option<(usize, String)> = None;
    let mut rank: Option<(usize, usize)> = None;
    let mut degree: Option<(usize, usize)> = None;
    let mut gens: BTreeMap<usize, (usize, String)> = BTreeMap::new();
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = strip_comment(raw);
        if body.is_empty() {
            continue;
        }
        let (key, value) = body
            .split_once(':')
            .ok_or_else(|| syntax(line, "expected `<key>: <value>`"))?;
        let key = key.trim();
        match key {
            "kind" => kind = Some((line, value.trim().to_string())),
            "rank" => rank = Some((line, parse_count(line, "rank", value)?)),
            "degree" => degree = Some((line, parse_count(line, "degree", value)?)),
            "map" => {
                for entry in value.split(',') {
                    if entry.trim().is_empty() {
                        continue;
                    }
                    let (t, w) = entry
                        .split_once("->")
                        .ok_or_else(|| syntax(line, format!("bad map entry `{}`", entry.trim())))?;
                    let t = t.trim().trim_matches('\'');
                    if t.is_empty() {
                        return Err(syntax(line, "empty terminal in map"));
                    }
                    let word = parse_letter_word(w)
                        .map_err(|source| ParseError::Group { line, source })?;
                    if map.insert(t.to_string(), word).is_some() {
                        return Err(syntax(line, format!("terminal `{t}` mapped twice")));
                    }
                }
            }
            _ => {
                let Some(g) = key.strip_prefix("gen") else {
                    return Err(syntax(line, format!("unknown key `{key}`")));
                };
                let letters = parse_letter_word(g)
                    .ok()
                    .filter(|w| w.len() == 1 && !w[0].inverse)
                    .ok_or_else(|| syntax(line, format!("bad generator name `{}`", g.trim())))?;
                let idx = letters[0].gen as usize;
                if gens.insert(idx, (line, value.trim().to_string())).is_some() {
                    return Err(syntax(
                        line,
                        format!("generator x{} defined twice", idx + 1),
                    ));
                }
            }
        }
    }
    let (kind_line, kind) = kind.ok_or(ParseError::MissingField("kind"))?;
    let backend = match kind.as_str() {
        "free" | "free-abelian" => {
            if let Some((line, _)) = degree.or(gens.values().next().map(|(l, _)| (*l, 0))) {
                return Err(syntax(
                    line,
                    format!("`degree`/`gen` not valid for kind {kind}"),
                ));
            }
            let (_, rank) = rank.ok_or(ParseError::MissingField("rank"))?;
            if kind == "free" {
                GroupBackend::Free { rank }
            } else {
                GroupBackend::FreeAbelian { rank }
            }
        }
        "permutation" => {
            if let Some((line, _)) = rank {
                return Err(syntax(
                    line,
                    "`rank` not valid for kind permutation; use `gen` lines",
                ));
            }
            let (_, degree) = degree.ok_or(ParseError::MissingField("degree"))?;
            let mut generators = Vec::with_capacity(gens.len());
            for (expect, (idx, (line, cycles))) in gens.iter().enumerate() {
                if *idx != expect {
                    return Err(syntax(*line, format!("generator x{} missing", expect + 1)));
                }
                let p = Perm::parse_cycles(degree, cycles).map_err(|source| ParseError::Group {
                    line: *line,
                    source,
                })?;
                generators.push(p);
            }
            GroupBackend::Permutation { degree, generators }
        }
        other => return Err(syntax(kind_line, format!("unknown group kind `{other}`"))),
    };
    for word in map.values() {
        backend
            .check_word(word)
            .map_err(|source| ParseError::Group { line: 0, source })?;
    }
    Ok(GroupSpec { backend, map })
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const EXAMPLE1: &str = "\
start: S
S -> S S
S -> A B
S -> B A
S -> A D
S -> B C
C -> S A
D -> S B
A -> 'a'
B -> 'b'
";

    #[test]
    fn example1_grammar() {
        let g = parse_grammar(EXAMPLE1).unwrap();
        assert_eq!(g.nonterminals(), ["S", "C", "D", "A", "B"]);
        assert_eq!(g.productions().len(), 9);
        assert_eq!(g.terminals(), ["a", "b"]);
    }

    #[test]
    fn minimal_and_alternatives() {
        let g = parse_grammar("start: S\nS -> 'a'").unwrap();
        assert_eq!((g.nonterminals().len(), g.productions().len()), (1, 1));
        let g = parse_grammar("# c\nstart: S\nS -> 'a' S 'b' | eps # tail").unwrap();
        assert_eq!(g.productions().len(), 2);
        assert!(g.productions()[1].rhs.is_empty());
    }

    #[test]
    fn grammar_errors() {
        assert!(matches!(
            parse_grammar("start: S\nS ->"),
            Err(ParseError::Syntax { line: 2, .. })
        ));
        assert_eq!(parse_grammar("S -> 'a'"), Err(ParseError::MissingStart));
        assert_eq!(
            parse_grammar("start: S\nS -> A\n"),
            Err(ParseError::Undeclared {
                line: 2,
                name: "A".into()
            })
        );
        assert!(matches!(
            parse_grammar("start: S\nS -> 'a\n"),
            Err(ParseError::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            parse_grammar("start: S\nS = 'a'\n"),
            Err(ParseError::Syntax { .. })
        ));
        assert!(matches!(
            parse_grammar("start: S\nT -> 'a'\n"),
            Err(ParseError::Grammar(GrammarError::StartWithoutProductions(
                _
            )))
        ));
    }

    #[test]
    fn free_group_spec() {
        let s = parse_group("kind: free\nrank: 1\nmap: a -> x1, b -> x1'").unwrap();
        assert_eq!(s.backend, GroupBackend::Free { rank: 1 });
        assert_eq!(s.map["b"], vec![Letter::new(0, true)]);
        let s = parse_group("kind: free-abelian\nrank: 2\nmap: 'a' -> x1 x2'\n").unwrap();
        assert_eq!(s.backend.kind(), "free-abelian");
        assert_eq!(s.map["a"].len(), 2);
    }

    #[test]
    fn permutation_spec() {
        let s = parse_group("kind: permutation\ndegree: 3\ngen x1: (1 2 3)\nmap: a -> x1").unwrap();
        assert_eq!(s.backend.rank(), 1);
        assert_eq!(s.backend.kind(), "permutation");
    }

    #[test]
    fn group_errors() {
        assert!(matches!(
            parse_group("kind: braid\nrank: 1"),
            Err(ParseError::Syntax { line: 1, .. })
        ));
        assert!(matches!(
            parse_group("kind: permutation\ndegree: 3\ngen x1: (1 4)\n"),
            Err(ParseError::Group { line: 3, .. })
        ));
        assert!(parse_group("kind: free\nrank: 1\nmap: a -> x2").is_err());
        assert_eq!(
            parse_group("rank: 1"),
            Err(ParseError::MissingField("kind"))
        );
        assert!(parse_group("kind: permutation\ndegree: 2\ngen x2: (1 2)").is_err());
    }
}
