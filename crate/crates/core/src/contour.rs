//! Contour categories of species and the Chomsky–Schützenberger
//! decomposition.
//!
//! The contour category of a free operad is free on its corners: a node
//! `x : R₁…Rₙ → R` contributes arrows `(x,i) : Rᵢ↓ → Rᵢ₊₁↑` for
//! `0 ≤ i ≤ n`, with `R₀↓ = R↑` and `Rₙ₊₁↑ = R↓`. Walking around a tree
//! reads off its contour word. Every grammar is the image of the universal
//! grammar of its species under a functor out of the contour category, and
//! recoloring the species by gap types splits that image into a
//! gap-type-colored contour language cut down by a finite automaton.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::automaton::Automaton;
use crate::error::{Error, Result};
use crate::freecat::{FiniteGraph, FreeFunctor, Generator, Path};
use crate::grammar::Grammar;
use crate::oracle;
use crate::product;
use crate::species::{DerivationTree, Node, Species, SpeciesMap};
use crate::spliced::{GapType, SplicedArrow};

pub const UP: &str = "↑";
pub const DOWN: &str = "↓";

pub fn up(color: &str) -> String {
    format!("{color}{UP}")
}

pub fn down(color: &str) -> String {
    format!("{color}{DOWN}")
}

/// Generator name of the corner `(x,i)`.
pub fn corner(node: &str, i: usize) -> String {
    format!("{node}_{i}")
}

/// Splits a corner name back into node and index.
pub fn decode_corner(name: &str) -> Option<(&str, usize)> {
    let (node, i) = name.rsplit_once('_')?;
    Some((node, i.parse().ok()?))
}

/// Source and target of the corner `(x,i)`.
fn corner_type(n: &Node, i: usize) -> (String, String) {
    let src = if i == 0 { up(&n.output) } else { down(&n.inputs[i - 1]) };
    let dst = if i == n.arity() { down(&n.output) } else { up(&n.inputs[i]) };
    (src, dst)
}

/// The free category on the corners of `s`.
pub fn contour_category(s: &Species) -> FiniteGraph {
    let objects = s.colors().iter().flat_map(|c| [up(c), down(c)]).collect();
    let generators = s
        .nodes()
        .iter()
        .flat_map(|n| {
            (0..=n.arity()).map(move |i| {
                let (src, dst) = corner_type(n, i);
                Generator::new(corner(&n.name, i), src, dst)
            })
        })
        .collect();
    FiniteGraph::new(objects, generators).expect("corner names are unique")
}

/// The universal grammar `U(S,S₀)`: colors `R ⊏ (R↑,R↓)` and nodes
/// `x ↦ (x,0)−(x,1)−…−(x,n)`.
pub fn universal_grammar(s: &Species, start: &str) -> Result<Grammar> {
    let category = contour_category(s);
    let color_types = s.colors().iter().map(|c| (c.clone(), GapType::new(up(c), down(c)))).collect();
    let rules = s
        .nodes()
        .iter()
        .map(|n| {
            let outer = GapType::new(up(&n.output), down(&n.output));
            let gaps = n.inputs.iter().map(|c| GapType::new(up(c), down(c))).collect();
            let segments = (0..=n.arity())
                .map(|i| {
                    let (src, dst) = corner_type(n, i);
                    Path::from_parts(src, dst, vec![corner(&n.name, i)])
                })
                .collect();
            (n.name.clone(), SplicedArrow::from_parts(outer, gaps, segments))
        })
        .collect();
    Grammar::new(category, s.clone(), start, color_types, rules)
}

/// The contour word of a closed tree: its value in the universal grammar.
pub fn contour_word(s: &Species, t: &DerivationTree) -> Result<Path> {
    let root = t.check(s)?;
    universal_grammar(s, &root)?.eval_closed(t)
}

/// The functor `q_G` out of the contour category: `R↑ ↦ A`, `R↓ ↦ B` for
/// `R ⊏ (A,B)`, and `(x,i) ↦` the i-th segment of `φ(x)`.
pub fn contour_interpretation(g: &Grammar) -> Result<FreeFunctor> {
    let s = g.species();
    let mut objects = BTreeMap::new();
    for c in s.colors() {
        let t = g.gap_type(c)?;
        objects.insert(up(c), t.left.clone());
        objects.insert(down(c), t.right.clone());
    }
    let mut generators = BTreeMap::new();
    for n in s.nodes() {
        for (i, seg) in g.rule(&n.name)?.segments().iter().enumerate() {
            generators.insert(corner(&n.name, i), seg.clone());
        }
    }
    FreeFunctor::new(contour_category(s), g.category().clone(), objects, generators)
}

/// `φ = φ_nodes ∘ φ_colors`: the grammar recolored by gap types, and the
/// species map recoloring it.
#[derive(Debug, Clone)]
pub struct ChromaticFactorization {
    /// Colors are the gap types `(A,B)` occurring in the grammar.
    pub g_nodes: Grammar,
    /// Identity on nodes, `R ↦ φ(R)` on colors.
    pub colors: SpeciesMap,
}

pub fn chromatic_factorization(g: &Grammar) -> Result<ChromaticFactorization> {
    let mut color_map = BTreeMap::new();
    let mut new_colors: Vec<String> = Vec::new();
    let mut color_types = BTreeMap::new();
    for c in g.species().colors() {
        let t = g.gap_type(c)?;
        let name = t.to_string();
        if !new_colors.contains(&name) {
            new_colors.push(name.clone());
            color_types.insert(name.clone(), t.clone());
        }
        color_map.insert(c.clone(), name);
    }
    let nodes: Vec<Node> = g
        .species()
        .nodes()
        .iter()
        .map(|n| Node {
            name: n.name.clone(),
            inputs: n.inputs.iter().map(|c| color_map[c].clone()).collect(),
            output: color_map[&n.output].clone(),
        })
        .collect();
    let node_map = nodes.iter().map(|n| (n.name.clone(), n.name.clone())).collect();
    let species = Species::new(new_colors, nodes)?;
    let start = color_map[g.start()].clone();
    let g_nodes = Grammar::new(g.category().clone(), species, start, color_types, g.rules().clone())?;
    Ok(ChromaticFactorization {
        g_nodes,
        colors: SpeciesMap { color_map, node_map },
    })
}

/// `M_colors`: the contour category of the grammar's species, lying over
/// the contour category of the recolored species by the contour of
/// `φ_colors`; from `S↑` to `S↓`. States and transitions are listed in the
/// same order as [`contour_category`], so the state graph is exactly the
/// contour category of the grammar's species.
pub fn colors_automaton(g: &Grammar) -> Result<Automaton> {
    let f = chromatic_factorization(g)?;
    let s = g.species();
    let base = contour_category(f.g_nodes.species());
    let mut b = Automaton::builder(base, &up(g.start()), &down(g.start()));
    for c in s.colors() {
        let image = &f.colors.color_map[c];
        b = b.state(&up(c), &up(image)).state(&down(c), &down(image));
    }
    for n in s.nodes() {
        for i in 0..=n.arity() {
            let (src, dst) = corner_type(n, i);
            let name = corner(&n.name, i);
            b = b.transition(&name, &src, &dst, &name);
        }
    }
    b.build()
}

/// The three pieces of the decomposition `L(G) = q(L(U) ∩ L(M))`.
#[derive(Debug, Clone)]
pub struct CsDecomposition {
    /// Universal grammar of the gap-type-colored species.
    pub universal: Grammar,
    /// The automaton `M_colors` over the universal grammar's category.
    pub colors: Automaton,
    /// `q_{G_nodes}` from the universal grammar's category to `G`'s.
    pub interpretation: FreeFunctor,
}

pub fn cs_decompose(g: &Grammar) -> Result<CsDecomposition> {
    let f = chromatic_factorization(g)?;
    let universal = universal_grammar(f.g_nodes.species(), f.g_nodes.start())?;
    let colors = colors_automaton(g)?;
    let interpretation = contour_interpretation(&f.g_nodes)?;
    Ok(CsDecomposition {
        universal,
        colors,
        interpretation,
    })
}

impl CsDecomposition {
    /// A grammar for `q(L(U) ∩ L(M))`, built with the pullback.
    pub fn recombined(&self) -> Result<Grammar> {
        let meet = product::intersect(&self.universal, &self.colors)?;
        crate::grammar::functorial_image(&meet, &self.interpretation)
    }

    /// `q(L(U) ∩ L(M))` computed from enumerations alone: contour words of
    /// at most `contour_bound` corners, filtered by the automaton, mapped by
    /// `q`, kept when at most `max_len` long.
    pub fn image_by_contours(&self, contour_bound: usize, max_len: usize) -> BTreeSet<Path> {
        oracle::enumerate_language(&self.universal, contour_bound)
            .into_iter()
            .filter(|cw| self.colors.accepts(cw))
            .map(|cw| self.interpretation.apply(&cw).expect("contour path"))
            .filter(|w| w.len() <= max_len)
            .collect()
    }
}

/// Outcome of the bounded decomposition check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsCheck {
    pub language: BTreeSet<Path>,
    pub decomposed: BTreeSet<Path>,
}

impl CsCheck {
    pub fn holds(&self) -> bool {
        self.language == self.decomposed
    }
}

/// Compares `L(G)` with `q(L(U) ∩ L(M))` on paths of at most `max_len`
/// generators.
pub fn cs_check_bounded(g: &Grammar, max_len: usize) -> Result<CsCheck> {
    let d = cs_decompose(g)?;
    Ok(CsCheck {
        language: oracle::enumerate_language(g, max_len),
        decomposed: oracle::enumerate_language(&d.recombined()?, max_len),
    })
}

/// One bracket of the Dyck encoding, annotated by its corner.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DyckLetter {
    pub open: bool,
    pub node: String,
    pub index: usize,
}

impl fmt::Display for DyckLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = if self.open { '[' } else { ']' };
        write!(f, "{b}({},{})", self.node, self.index)
    }
}

/// Splits every corner `(x,i)` of an n-ary node into two letters: first
/// `[` if `i = 0` else `]` (arriving at the node), then `[` if `i < n` else
/// `]` (leaving it).
pub fn dyck_translate(s: &Species, cw: &Path) -> Result<Vec<DyckLetter>> {
    let mut out = Vec::with_capacity(2 * cw.len());
    for name in cw.gens() {
        let (node, i) = decode_corner(name).ok_or_else(|| Error::UnknownGenerator(name.clone()))?;
        let n = s.node(node).ok_or_else(|| Error::UnknownNode(node.to_string()))?;
        if i > n.arity() {
            return Err(Error::IndexOutOfRange { index: i, arity: n.arity() });
        }
        out.push(DyckLetter {
            open: i == 0,
            node: node.to_string(),
            index: i,
        });
        out.push(DyckLetter {
            open: i < n.arity(),
            node: node.to_string(),
            index: i,
        });
    }
    Ok(out)
}

/// Inverse of [`dyck_translate`]: regroups letters into corners, checking
/// both orientation rules, and rebuilds the path in the contour category.
pub fn dyck_decode(s: &Species, letters: &[DyckLetter]) -> Result<Path> {
    if letters.is_empty() || !letters.len().is_multiple_of(2) {
        return Err(Error::Invalid(format!("cannot regroup {} letters into corners", letters.len())));
    }
    let mut gens = Vec::with_capacity(letters.len() / 2);
    for pair in letters.chunks(2) {
        let (a, b) = (&pair[0], &pair[1]);
        if (a.node.as_str(), a.index) != (b.node.as_str(), b.index) {
            return Err(Error::Invalid(format!("letters {a} and {b} belong to different corners")));
        }
        let n = s.node(&a.node).ok_or_else(|| Error::UnknownNode(a.node.clone()))?;
        if a.index > n.arity() {
            return Err(Error::IndexOutOfRange {
                index: a.index,
                arity: n.arity(),
            });
        }
        if a.open != (a.index == 0) || b.open != (a.index < n.arity()) {
            return Err(Error::Invalid(format!("orientation of {a}{b} breaks the bracket rule")));
        }
        gens.push(corner(&a.node, a.index));
    }
    let cat = contour_category(s);
    let first = cat.generator(&gens[0]).expect("corner of the species");
    cat.path(&first.src.clone(), &gens)
}

/// The bare bracket string.
pub fn brackets(letters: &[DyckLetter]) -> String {
    letters.iter().map(|l| if l.open { '[' } else { ']' }).collect()
}

/// Whether the brackets balance without the depth going negative.
pub fn is_balanced(letters: &[DyckLetter]) -> bool {
    let mut depth = 0i64;
    for l in letters {
        depth += if l.open { 1 } else { -1 };
        if depth < 0 {
            return false;
        }
    }
    depth == 0
}

/// Index pairs `(open, close)` of matching brackets, or `None` when
/// unbalanced.
pub fn matching_pairs(letters: &[DyckLetter]) -> Option<Vec<(usize, usize)>> {
    let mut stack = Vec::new();
    let mut out = Vec::new();
    for (k, l) in letters.iter().enumerate() {
        if l.open {
            stack.push(k);
        } else {
            out.push((stack.pop()?, k));
        }
    }
    stack.is_empty().then_some(out)
}
