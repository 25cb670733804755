//! Colored non-symmetric species and the free operad over them.
//!
//! Operations of the free operad are [`DerivationTree`]s: nodes of the
//! species grafted together, with explicit [`DerivationTree::Leaf`]s for the
//! open inputs. A tree without leaves is closed (a constant).

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Node {
    pub name: String,
    pub inputs: Vec<String>,
    pub output: String,
}

impl Node {
    pub fn new<S: Into<String>>(name: impl Into<String>, inputs: Vec<S>, output: impl Into<String>) -> Self {
        Node {
            name: name.into(),
            inputs: inputs.into_iter().map(Into::into).collect(),
            output: output.into(),
        }
    }

    pub fn arity(&self) -> usize {
        self.inputs.len()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct SpeciesRepr {
    colors: Vec<String>,
    nodes: Vec<Node>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SpeciesRepr", into = "SpeciesRepr")]
pub struct Species {
    colors: Vec<String>,
    nodes: Vec<Node>,
    color_index: BTreeMap<String, usize>,
    node_index: BTreeMap<String, usize>,
}

impl TryFrom<SpeciesRepr> for Species {
    type Error = Error;

    fn try_from(repr: SpeciesRepr) -> Result<Self> {
        Species::new(repr.colors, repr.nodes)
    }
}

impl From<Species> for SpeciesRepr {
    fn from(s: Species) -> Self {
        SpeciesRepr {
            colors: s.colors,
            nodes: s.nodes,
        }
    }
}

impl Species {
    pub fn new(colors: Vec<String>, nodes: Vec<Node>) -> Result<Self> {
        let mut s = Species::empty();
        for c in colors {
            s.add_color(c)?;
        }
        for n in nodes {
            s.add_node(n)?;
        }
        Ok(s)
    }

    pub fn empty() -> Self {
        Species {
            colors: Vec::new(),
            nodes: Vec::new(),
            color_index: BTreeMap::new(),
            node_index: BTreeMap::new(),
        }
    }

    pub fn add_color(&mut self, name: impl Into<String>) -> Result<()> {
        let name = name.into();
        if self.color_index.contains_key(&name) {
            return Err(Error::Duplicate(name));
        }
        self.color_index.insert(name.clone(), self.colors.len());
        self.colors.push(name);
        Ok(())
    }

    pub fn add_node(&mut self, node: Node) -> Result<()> {
        if self.node_index.contains_key(&node.name) {
            return Err(Error::Duplicate(node.name));
        }
        for c in node.inputs.iter().chain([&node.output]) {
            if !self.has_color(c) {
                return Err(Error::UnknownColor(c.clone()));
            }
        }
        self.node_index.insert(node.name.clone(), self.nodes.len());
        self.nodes.push(node);
        Ok(())
    }

    pub fn colors(&self) -> &[String] {
        &self.colors
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn has_color(&self, c: &str) -> bool {
        self.color_index.contains_key(c)
    }

    pub fn node(&self, name: &str) -> Option<&Node> {
        self.node_index.get(name).map(|&i| &self.nodes[i])
    }

    pub fn color_position(&self, c: &str) -> Option<usize> {
        self.color_index.get(c).copied()
    }

    pub fn node_position(&self, name: &str) -> Option<usize> {
        self.node_index.get(name).copied()
    }

    pub fn max_arity(&self) -> usize {
        self.nodes.iter().map(Node::arity).max().unwrap_or(0)
    }

    /// Colors that root at least one closed tree.
    pub fn productive_colors(&self) -> BTreeSet<String> {
        let mut productive = BTreeSet::new();
        loop {
            let before = productive.len();
            for n in &self.nodes {
                if n.inputs.iter().all(|c| productive.contains(c)) {
                    productive.insert(n.output.clone());
                }
            }
            if productive.len() == before {
                return productive;
            }
        }
    }
}

/// A map of species: colors to colors, nodes to nodes.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SpeciesMap {
    pub color_map: BTreeMap<String, String>,
    pub node_map: BTreeMap<String, String>,
}

impl SpeciesMap {
    pub fn identity(s: &Species) -> Self {
        SpeciesMap {
            color_map: s.colors().iter().map(|c| (c.clone(), c.clone())).collect(),
            node_map: s.nodes().iter().map(|n| (n.name.clone(), n.name.clone())).collect(),
        }
    }
}

/// One node whose image breaks the commuting square of a species map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MapViolation {
    pub node: String,
    pub expected_inputs: Vec<String>,
    pub expected_output: String,
    pub actual_inputs: Vec<String>,
    pub actual_output: String,
}

impl fmt::Display for MapViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "node `{}`: expected ({}) → {}, found ({}) → {}",
            self.node,
            self.expected_inputs.join(","),
            self.expected_output,
            self.actual_inputs.join(","),
            self.actual_output
        )
    }
}

/// Checks that `map` sends every node `x : R₁…Rₙ → R` of `domain` to a node
/// of `codomain` typed `φ(R₁)…φ(Rₙ) → φ(R)`.
pub fn validate_species_map(
    domain: &Species,
    codomain: &Species,
    map: &SpeciesMap,
) -> std::result::Result<(), Vec<MapViolation>> {
    let mut violations = Vec::new();
    let image = |c: &String| map.color_map.get(c).cloned().unwrap_or_else(|| format!("?{c}"));
    for n in domain.nodes() {
        let expected_inputs: Vec<String> = n.inputs.iter().map(image).collect();
        let expected_output = image(&n.output);
        let (actual_inputs, actual_output) = match map.node_map.get(&n.name).and_then(|m| codomain.node(m)) {
            Some(target) => (target.inputs.clone(), target.output.clone()),
            None => (Vec::new(), "<missing>".to_string()),
        };
        if actual_inputs != expected_inputs || actual_output != expected_output {
            violations.push(MapViolation {
                node: n.name.clone(),
                expected_inputs,
                expected_output,
                actual_inputs,
                actual_output,
            });
        }
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}

/// An operation of the free operad on a species.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum DerivationTree {
    Leaf(String),
    Apply { node: String, children: Vec<DerivationTree> },
}

impl DerivationTree {
    pub fn leaf(color: impl Into<String>) -> Self {
        DerivationTree::Leaf(color.into())
    }

    pub fn apply(node: impl Into<String>, children: Vec<DerivationTree>) -> Self {
        DerivationTree::Apply {
            node: node.into(),
            children,
        }
    }

    pub fn constant(node: impl Into<String>) -> Self {
        DerivationTree::apply(node, Vec::new())
    }

    /// Number of `Apply` nodes.
    pub fn node_count(&self) -> usize {
        match self {
            DerivationTree::Leaf(_) => 0,
            DerivationTree::Apply { children, .. } => 1 + children.iter().map(Self::node_count).sum::<usize>(),
        }
    }

    pub fn is_closed(&self) -> bool {
        match self {
            DerivationTree::Leaf(_) => false,
            DerivationTree::Apply { children, .. } => children.iter().all(Self::is_closed),
        }
    }

    /// Colors of the free leaves, left to right.
    pub fn leaves(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<String>) {
        match self {
            DerivationTree::Leaf(c) => out.push(c.clone()),
            DerivationTree::Apply { children, .. } => children.iter().for_each(|t| t.collect_leaves(out)),
        }
    }

    /// Checks the typing of the tree and returns its root color.
    pub fn check(&self, species: &Species) -> Result<String> {
        match self {
            DerivationTree::Leaf(c) => {
                if species.has_color(c) {
                    Ok(c.clone())
                } else {
                    Err(Error::UnknownColor(c.clone()))
                }
            }
            DerivationTree::Apply { node, children } => {
                let n = species.node(node).ok_or_else(|| Error::UnknownNode(node.clone()))?;
                if n.arity() != children.len() {
                    return Err(Error::TypeMismatch {
                        expected: format!("{} children under `{node}`", n.arity()),
                        found: children.len().to_string(),
                    });
                }
                for (want, child) in n.inputs.iter().zip(children) {
                    let got = child.check(species)?;
                    if &got != want {
                        return Err(Error::TypeMismatch {
                            expected: want.clone(),
                            found: got,
                        });
                    }
                }
                Ok(n.output.clone())
            }
        }
    }

    /// Partial composition `self ∘ᵢ s`: replaces the `i`-th free leaf.
    pub fn substitute(&self, species: &Species, i: usize, s: &DerivationTree) -> Result<DerivationTree> {
        let leaves = self.leaves();
        let want = leaves.get(i).ok_or(Error::IndexOutOfRange {
            index: i,
            arity: leaves.len(),
        })?;
        let got = s.check(species)?;
        if &got != want {
            return Err(Error::TypeMismatch {
                expected: want.clone(),
                found: got,
            });
        }
        let mut counter = 0;
        Ok(self.graft(i, s, &mut counter))
    }

    fn graft(&self, i: usize, s: &DerivationTree, counter: &mut usize) -> DerivationTree {
        match self {
            DerivationTree::Leaf(_) => {
                let here = *counter;
                *counter += 1;
                if here == i {
                    s.clone()
                } else {
                    self.clone()
                }
            }
            DerivationTree::Apply { node, children } => DerivationTree::Apply {
                node: node.clone(),
                children: children.iter().map(|t| t.graft(i, s, counter)).collect(),
            },
        }
    }

    fn preorder<'a>(&'a self, out: &mut Vec<(bool, &'a str)>) {
        match self {
            DerivationTree::Leaf(c) => out.push((false, c)),
            DerivationTree::Apply { node, children } => {
                out.push((true, node));
                children.iter().for_each(|t| t.preorder(out));
            }
        }
    }

    pub fn to_repr(&self) -> TreeRepr {
        match self {
            DerivationTree::Leaf(c) => TreeRepr::Leaf { leaf: c.clone() },
            DerivationTree::Apply { node, children } => TreeRepr::Apply {
                rule: node.clone(),
                children: children.iter().map(Self::to_repr).collect(),
            },
        }
    }
}

/// Canonical order: node count, then preorder sequence of labels.
impl Ord for DerivationTree {
    fn cmp(&self, other: &Self) -> Ordering {
        self.node_count().cmp(&other.node_count()).then_with(|| {
            let (mut a, mut b) = (Vec::new(), Vec::new());
            self.preorder(&mut a);
            other.preorder(&mut b);
            a.cmp(&b)
        })
    }
}

impl PartialOrd for DerivationTree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for DerivationTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DerivationTree::Leaf(c) => write!(f, "<{c}>"),
            DerivationTree::Apply { node, children } => {
                f.write_str(node)?;
                if !children.is_empty() {
                    f.write_str("(")?;
                    for (k, t) in children.iter().enumerate() {
                        if k > 0 {
                            f.write_str(",")?;
                        }
                        write!(f, "{t}")?;
                    }
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TreeRepr {
    Leaf {
        leaf: String,
    },
    Apply {
        rule: String,
        #[serde(default)]
        children: Vec<TreeRepr>,
    },
}

impl From<TreeRepr> for DerivationTree {
    fn from(r: TreeRepr) -> Self {
        match r {
            TreeRepr::Leaf { leaf } => DerivationTree::Leaf(leaf),
            TreeRepr::Apply { rule, children } => {
                DerivationTree::apply(rule, children.into_iter().map(Into::into).collect())
            }
        }
    }
}

impl Serialize for DerivationTree {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_repr().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DerivationTree {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        TreeRepr::deserialize(deserializer).map(Into::into)
    }
}

/// All closed trees of root `color` with at most `max_nodes` nodes, in
/// canonical order.
pub fn enumerate_closed_trees(species: &Species, color: &str, max_nodes: usize) -> Vec<DerivationTree> {
    // by_size[k][c] = closed trees of color c with exactly k nodes
    let mut by_size: Vec<BTreeMap<&str, Vec<DerivationTree>>> = vec![BTreeMap::new()];
    for size in 1..=max_nodes {
        let mut level: BTreeMap<&str, Vec<DerivationTree>> = BTreeMap::new();
        for n in species.nodes() {
            let mut built = Vec::new();
            for_each_composition(size - 1, n.arity(), &mut |parts| {
                let pools: Vec<&[DerivationTree]> = n
                    .inputs
                    .iter()
                    .zip(parts)
                    .map(|(c, &k)| by_size[k].get(c.as_str()).map(Vec::as_slice).unwrap_or(&[]))
                    .collect();
                cartesian(&pools, &mut |children| {
                    built.push(DerivationTree::apply(n.name.clone(), children.to_vec()));
                });
            });
            level.entry(n.output.as_str()).or_default().extend(built);
        }
        for trees in level.values_mut() {
            trees.sort();
        }
        by_size.push(level);
    }
    by_size
        .into_iter()
        .flat_map(|mut level| level.remove(color).unwrap_or_default())
        .collect()
}

/// Calls `f` with every way of writing `total` as an ordered sum of `parts`
/// positive integers.
pub(crate) fn for_each_composition(total: usize, parts: usize, f: &mut dyn FnMut(&[usize])) {
    fn go(remaining: usize, slots: usize, acc: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if slots == 0 {
            if remaining == 0 {
                f(acc);
            }
            return;
        }
        for k in 1..=remaining.saturating_sub(slots - 1) {
            acc.push(k);
            go(remaining - k, slots - 1, acc, f);
            acc.pop();
        }
    }
    go(total, parts, &mut Vec::with_capacity(parts), f);
}

/// Calls `f` with every tuple drawn from `pools`, in lexicographic order.
pub(crate) fn cartesian<T: Clone>(pools: &[&[T]], f: &mut dyn FnMut(&[T])) {
    fn go<T: Clone>(pools: &[&[T]], acc: &mut Vec<T>, f: &mut dyn FnMut(&[T])) {
        match pools.split_first() {
            None => f(acc),
            Some((first, rest)) => {
                for x in first.iter() {
                    acc.push(x.clone());
                    go(rest, acc, f);
                    acc.pop();
                }
            }
        }
    }
    if pools.iter().any(|p| p.is_empty()) {
        return;
    }
    go(pools, &mut Vec::with_capacity(pools.len()), f);
}
