//! Brute-force ground truth.
//!
//! Everything here is deliberately naive and shares no code with the parser
//! or the product construction beyond the data types, so the two can be
//! checked against each other.

use std::collections::{BTreeMap, BTreeSet};

use crate::automaton::Automaton;
use crate::freecat::Path;
use crate::grammar::Grammar;
use crate::species::{enumerate_closed_trees, DerivationTree};

/// Words of length ≤ `max_len` derivable from every color.
///
/// Saturates one word set per color: a sweep applies every node to every
/// tuple of already-known child words and stops once nothing new appears.
/// A child's word is never longer than its parent's, so pruning at
/// `max_len` loses nothing and ε/unit cycles cannot make the sweep diverge.
pub fn color_languages(g: &Grammar, max_len: usize) -> BTreeMap<String, BTreeSet<Path>> {
    let mut langs: BTreeMap<String, BTreeSet<Path>> =
        g.species().colors().iter().map(|c| (c.clone(), BTreeSet::new())).collect();
    loop {
        let mut changed = false;
        for n in g.species().nodes() {
            let rule = &g.rules()[&n.name];
            if rule.len() > max_len {
                continue;
            }
            let pools: Vec<Vec<Path>> = n.inputs.iter().map(|c| langs[c].iter().cloned().collect()).collect();
            let mut found = Vec::new();
            let mut chosen = Vec::new();
            splice_words(rule.segments(), &pools, max_len - rule.len(), &mut chosen, &mut found);
            let target = langs.get_mut(&n.output).expect("declared color");
            for w in found {
                changed |= target.insert(w);
            }
        }
        if !changed {
            return langs;
        }
    }
}

fn splice_words<'a>(
    segments: &[Path],
    pools: &'a [Vec<Path>],
    budget: usize,
    chosen: &mut Vec<&'a Path>,
    out: &mut Vec<Path>,
) {
    let k = chosen.len();
    if k == pools.len() {
        let mut gens = segments[0].gens().to_vec();
        for (child, seg) in chosen.iter().zip(&segments[1..]) {
            gens.extend(child.gens().iter().cloned());
            gens.extend(seg.gens().iter().cloned());
        }
        let last = segments.last().expect("at least one segment");
        out.push(Path::from_parts(segments[0].src(), last.dst(), gens));
        return;
    }
    for w in &pools[k] {
        if w.len() <= budget {
            chosen.push(w);
            splice_words(segments, pools, budget - w.len(), chosen, out);
            chosen.pop();
        }
    }
}

/// `L(G)` cut off at `max_len` generators.
pub fn enumerate_language(g: &Grammar, max_len: usize) -> BTreeSet<Path> {
    color_languages(g, max_len).remove(g.start()).unwrap_or_default()
}

/// Paths `initial → final` in the image of the automaton, found by
/// breadth-first search over (state, path) pairs.
pub fn enumerate_regular_language(m: &Automaton, max_len: usize) -> BTreeSet<Path> {
    let mut out = BTreeSet::new();
    let Ok(start_over) = m.state_over(m.initial()) else {
        return out;
    };
    let mut frontier: BTreeSet<(String, Path)> = BTreeSet::from([(m.initial().to_string(), Path::identity(start_over))]);
    for depth in 0..=max_len {
        let mut next = BTreeSet::new();
        for (q, w) in &frontier {
            if q == m.final_state() {
                out.insert(w.clone());
            }
            if depth == max_len {
                continue;
            }
            for t in m.transitions().iter().filter(|t| &t.src == q) {
                let g = m.base().generator(&t.over).expect("validated automaton");
                let mut gens = w.gens().to_vec();
                gens.push(g.name.clone());
                next.insert((t.dst.clone(), Path::from_parts(w.src(), g.dst.clone(), gens)));
            }
        }
        frontier = next;
    }
    out
}

/// Closed trees of the start color with at most `max_nodes` nodes that
/// evaluate to `w`.
pub fn trees_deriving(g: &Grammar, w: &Path, max_nodes: usize) -> Vec<DerivationTree> {
    trees_deriving_from(g, g.start(), w, max_nodes)
}

pub fn trees_deriving_from(g: &Grammar, color: &str, w: &Path, max_nodes: usize) -> Vec<DerivationTree> {
    enumerate_closed_trees(g.species(), color, max_nodes)
        .into_iter()
        .filter(|t| g.eval_closed(t).is_ok_and(|v| &v == w))
        .collect()
}

/// Colors deriving `w`, by the same saturation as [`color_languages`].
pub fn colors_deriving(g: &Grammar, w: &Path) -> BTreeSet<String> {
    color_languages(g, w.len())
        .into_iter()
        .filter(|(_, ws)| ws.contains(w))
        .map(|(c, _)| c)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn words(ws: &BTreeSet<Path>) -> Vec<String> {
        ws.iter().map(Path::to_word_string).collect()
    }

    #[test]
    fn grammar_languages() {
        assert_eq!(words(&enumerate_language(&fixtures::g_ab(), 8)), ["ab", "aabb", "aaabbb", "aaaabbbb"]);
        assert_eq!(words(&enumerate_language(&fixtures::g_amb(), 3)), ["a", "aa", "aaa"]);
        assert!(enumerate_language(&fixtures::g_empty(), 8).is_empty());
        assert_eq!(words(&enumerate_language(&fixtures::g_eps(), 4)), ["ε", "ab", "aabb"]);
        assert_eq!(words(&enumerate_language(&fixtures::g_end(), 5)), ["ab$", "aabb$"]);
        // a unit cycle saturates instead of diverging
        assert_eq!(words(&enumerate_language(&fixtures::g_unit_cycle(), 3)), ["a"]);
    }

    #[test]
    fn regular_languages() {
        let even = enumerate_regular_language(&fixtures::m_evena(), 3);
        assert_eq!(words(&even), ["ε", "b", "aa", "bb", "aab", "aba", "baa", "bbb"]);
        let cat = fixtures::g_ab().category().clone();
        let w = cat.word("*", "aabb").unwrap();
        let single = enumerate_regular_language(&crate::automaton::interval_automaton(&cat, &w).unwrap(), 6);
        assert_eq!(words(&single), ["aabb"]);
    }

    #[test]
    fn catalan_parse_counts() {
        let g = fixtures::g_amb();
        let counts: Vec<usize> = (1..=5)
            .map(|n| trees_deriving(&g, &g.category().word("*", &"a".repeat(n)).unwrap(), 2 * n).len())
            .collect();
        assert_eq!(counts, [1, 1, 2, 5, 14]);
    }
}
