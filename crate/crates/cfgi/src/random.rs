//! Seeded random instances for differential testing.

use cfgi_core::grammar::prune_useless;
use cfgi_core::{CnfGrammar, GroupBackend, Letter, Morphism, Rhs, Rule};
use rand::Rng;
use serde::Serialize;

use crate::pipeline::Instance;

/// Size limits for generated instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Bounds {
    pub max_nonterminals: usize,
    pub max_productions: usize,
    pub max_terminals: usize,
    pub max_rank: usize,
    /// Longest terminal image, in letters.
    pub max_image_len: usize,
    /// Allow `A -> eps` productions.
    pub epsilon: bool,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_nonterminals: 4,
            max_productions: 8,
            max_terminals: 2,
            max_rank: 2,
            max_image_len: 2,
            epsilon: true,
        }
    }
}

const NAMES: [&str; 8] = ["S", "A", "B", "C", "D", "E", "F", "G"];
const TERMINALS: [&str; 4] = ["a", "b", "c", "d"];

/// A pruned CNF grammar within `bounds`. The language may be empty.
pub fn random_grammar<R: Rng>(rng: &mut R, bounds: &Bounds) -> CnfGrammar {
    let n = rng.gen_range(1..=bounds.max_nonterminals.clamp(1, NAMES.len()));
    let t = rng.gen_range(1..=bounds.max_terminals.clamp(1, TERMINALS.len()));
    let count = rng.gen_range(1..=bounds.max_productions.max(1));
    let mut rules = Vec::with_capacity(count);
    for i in 0..count {
        let lhs = if i == 0 { 0 } else { rng.gen_range(0..n) };
        let roll = rng.gen_range(0..20);
        let rhs = if roll < 9 {
            Rhs::Pair(rng.gen_range(0..n), rng.gen_range(0..n))
        } else if roll < 19 || !bounds.epsilon {
            Rhs::Terminal(rng.gen_range(0..t))
        } else {
            Rhs::Empty
        };
        rules.push(Rule { lhs, rhs });
    }
    let g = CnfGrammar::new(
        NAMES[..n].iter().map(|s| s.to_string()).collect(),
        TERMINALS[..t].iter().map(|s| s.to_string()).collect(),
        rules,
    )
    .expect("indices are in range");
    prune_useless(&g)
}

/// Free group of rank `1..=max_rank` with random images for every terminal
/// of `g`. Half of the images are single letters.
pub fn random_free_morphism<R: Rng>(
    rng: &mut R,
    g: &CnfGrammar,
    bounds: &Bounds,
) -> (GroupBackend, Morphism) {
    let rank = rng.gen_range(1..=bounds.max_rank.max(1));
    let images = (0..g.terminals().len())
        .map(|_| {
            let len = if rng.gen_bool(0.5) {
                1
            } else {
                rng.gen_range(0..=bounds.max_image_len)
            };
            (0..len)
                .map(|_| Letter::new(rng.gen_range(0..rank) as u32, rng.gen_bool(0.5)))
                .collect()
        })
        .collect();
    (GroupBackend::Free { rank }, Morphism::from_images(images))
}

pub fn random_instance<R: Rng>(rng: &mut R, bounds: &Bounds) -> Instance {
    let grammar = random_grammar(rng, bounds);
    let (backend, morphism) = random_free_morphism(rng, &grammar, bounds);
    Instance {
        grammar,
        backend,
        morphism,
    }
}
