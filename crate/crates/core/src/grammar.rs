//! Context-free grammars of arrows.
//!
//! A grammar pairs a finite pointed species with a species map into the
//! spliced-arrow operad of a free category: every color `R` refines a gap
//! type `(A,B)` and every node `x : R₁…Rₙ → R` is sent to an n-ary spliced
//! arrow `w₀−…−wₙ` of matching type. Its language is the set of paths
//! obtained by evaluating the closed derivation trees rooted at the start
//! color.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freecat::{FiniteGraph, FreeFunctor, Path, STAR};
use crate::oracle;
use crate::species::{DerivationTree, Node, Species};
use crate::spliced::{GapType, SplicedArrow};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grammar {
    category: FiniteGraph,
    species: Species,
    start: String,
    color_types: BTreeMap<String, GapType>,
    rules: BTreeMap<String, SplicedArrow>,
}

/// One problem found by [`Grammar::validate`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub item: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.item, self.message)
    }
}

impl Grammar {
    /// Assembles and validates a grammar.
    pub fn new(
        category: FiniteGraph,
        species: Species,
        start: impl Into<String>,
        color_types: BTreeMap<String, GapType>,
        rules: BTreeMap<String, SplicedArrow>,
    ) -> Result<Self> {
        let g = Grammar::from_parts(category, species, start, color_types, rules);
        g.validate().map_err(|vs| {
            Error::Invalid(vs.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))
        })?;
        Ok(g)
    }

    /// Assembles a grammar without validating it.
    pub fn from_parts(
        category: FiniteGraph,
        species: Species,
        start: impl Into<String>,
        color_types: BTreeMap<String, GapType>,
        rules: BTreeMap<String, SplicedArrow>,
    ) -> Self {
        Grammar {
            category,
            species,
            start: start.into(),
            color_types,
            rules,
        }
    }

    /// Checks that the rule assignment is a species map into the spliced
    /// arrows of the category, listing every offending color and node.
    pub fn validate(&self) -> std::result::Result<(), Vec<Violation>> {
        let mut out = Vec::new();
        let mut bad = |item: &str, message: String| {
            out.push(Violation {
                item: item.to_string(),
                message,
            })
        };
        if !self.species.has_color(&self.start) {
            bad(&self.start, "start color is not declared".into());
        }
        for c in self.species.colors() {
            match self.color_types.get(c) {
                None => bad(c, "color has no gap type".into()),
                Some(t) => {
                    if let Err(e) = t.check_in(&self.category) {
                        bad(c, e.to_string());
                    }
                }
            }
        }
        for n in self.species.nodes() {
            let Some(rule) = self.rules.get(&n.name) else {
                bad(&n.name, "node has no spliced arrow".into());
                continue;
            };
            if rule.arity() != n.arity() {
                bad(&n.name, format!("arity {} but spliced arrow has {} gaps", n.arity(), rule.arity()));
                continue;
            }
            if let Some(t) = self.color_types.get(&n.output) {
                if rule.outer() != t {
                    bad(&n.name, format!("output {} refines {t} but spliced arrow has outer type {}", n.output, rule.outer()));
                }
            }
            for (k, (c, gap)) in n.inputs.iter().zip(rule.gaps()).enumerate() {
                if let Some(t) = self.color_types.get(c) {
                    if gap != t {
                        bad(&n.name, format!("input {k} ({c}) refines {t} but gap {k} has type {gap}"));
                    }
                }
            }
            if let Err(e) = rule.check_in(&self.category) {
                bad(&n.name, e.to_string());
            }
        }
        for name in self.rules.keys() {
            if self.species.node(name).is_none() {
                bad(name, "spliced arrow for an undeclared node".into());
            }
        }
        if out.is_empty() {
            Ok(())
        } else {
            Err(out)
        }
    }

    pub fn category(&self) -> &FiniteGraph {
        &self.category
    }

    pub fn species(&self) -> &Species {
        &self.species
    }

    pub fn start(&self) -> &str {
        &self.start
    }

    pub fn gap_type(&self, color: &str) -> Result<&GapType> {
        self.color_types
            .get(color)
            .ok_or_else(|| Error::UnknownColor(color.to_string()))
    }

    pub fn start_type(&self) -> &GapType {
        &self.color_types[&self.start]
    }

    pub fn color_types(&self) -> &BTreeMap<String, GapType> {
        &self.color_types
    }

    pub fn rule(&self, node: &str) -> Result<&SplicedArrow> {
        self.rules.get(node).ok_or_else(|| Error::UnknownNode(node.to_string()))
    }

    pub fn rules(&self) -> &BTreeMap<String, SplicedArrow> {
        &self.rules
    }

    /// Evaluates a derivation tree homomorphically: leaves become identity
    /// spliced arrows and nodes splice their children's values.
    pub fn eval_tree(&self, t: &DerivationTree) -> Result<SplicedArrow> {
        match t {
            DerivationTree::Leaf(c) => Ok(SplicedArrow::identity(self.gap_type(c)?)),
            DerivationTree::Apply { node, children } => {
                let n = self.species.node(node).ok_or_else(|| Error::UnknownNode(node.clone()))?;
                if n.arity() != children.len() {
                    return Err(Error::TypeMismatch {
                        expected: format!("{} children under `{node}`", n.arity()),
                        found: children.len().to_string(),
                    });
                }
                let values = children.iter().map(|c| self.eval_tree(c)).collect::<Result<Vec<_>>>()?;
                self.rule(node)?.compose_parallel(&values)
            }
        }
    }

    /// Evaluates a closed tree to the path it derives.
    pub fn eval_closed(&self, t: &DerivationTree) -> Result<Path> {
        let v = self.eval_tree(t)?;
        v.as_constant()
            .cloned()
            .ok_or_else(|| Error::Invalid(format!("tree {t} is not closed")))
    }

    pub fn properties(&self) -> Properties {
        let nodes = self.species.nodes();
        let linear = nodes.iter().all(|n| n.arity() <= 1);
        let unary_shape = |pred: &dyn Fn(&SplicedArrow) -> bool| {
            linear
                && nodes
                    .iter()
                    .filter(|n| n.arity() == 1)
                    .all(|n| self.rules.get(&n.name).is_some_and(pred))
        };
        let left_linear = unary_shape(&|r| r.segments()[0].is_empty());
        let right_linear = unary_shape(&|r| r.segments()[1].is_empty());
        let bilinear = nodes.iter().all(|n| n.arity() <= 2);
        let cnf = nodes.iter().all(|n| {
            let rule = &self.rules[&n.name];
            match n.arity() {
                2 => rule.is_empty() && !n.inputs.contains(&self.start),
                0 => rule.len() == 1 || (rule.is_empty() && n.output == self.start),
                _ => false,
            }
        });
        let productive = self.species.productive_colors();
        let reachable = self.reachable_colors(&productive);
        let useful = productive.intersection(&reachable).cloned().collect();
        Properties {
            linear,
            left_linear,
            right_linear,
            bilinear,
            cnf,
            nullable: self.nullable_colors(),
            productive,
            reachable,
            useful,
        }
    }

    /// Least fixed point: `R` is nullable when some node into `R` has only
    /// empty segments and only nullable inputs.
    pub fn nullable_colors(&self) -> BTreeSet<String> {
        let mut nullable = BTreeSet::new();
        loop {
            let before = nullable.len();
            for n in self.species.nodes() {
                if self.rules[&n.name].is_empty() && n.inputs.iter().all(|c| nullable.contains(c)) {
                    nullable.insert(n.output.clone());
                }
            }
            if nullable.len() == before {
                return nullable;
            }
        }
    }

    /// Colors `R` admitting an open tree `R → start`: the start itself, and
    /// every input of a node into a reachable color whose sibling inputs are
    /// all productive.
    pub fn reachable_colors(&self, productive: &BTreeSet<String>) -> BTreeSet<String> {
        let mut reachable = BTreeSet::new();
        if self.species.has_color(&self.start) {
            reachable.insert(self.start.clone());
        }
        loop {
            let before = reachable.len();
            for n in self.species.nodes() {
                if !reachable.contains(&n.output) {
                    continue;
                }
                for (k, c) in n.inputs.iter().enumerate() {
                    let siblings_closed = n
                        .inputs
                        .iter()
                        .enumerate()
                        .all(|(j, other)| j == k || productive.contains(other));
                    if siblings_closed {
                        reachable.insert(c.clone());
                    }
                }
            }
            if reachable.len() == before {
                return reachable;
            }
        }
    }

    /// The same grammar with every color and node name passed through
    /// `rename`.
    pub fn renamed(&self, rename: impl Fn(&str) -> String) -> Grammar {
        let species = Species::new(
            self.species.colors().iter().map(|c| rename(c)).collect(),
            self.species
                .nodes()
                .iter()
                .map(|n| Node {
                    name: rename(&n.name),
                    inputs: n.inputs.iter().map(|c| rename(c)).collect(),
                    output: rename(&n.output),
                })
                .collect(),
        )
        .expect("renaming must stay injective");
        Grammar {
            category: self.category.clone(),
            species,
            start: rename(&self.start),
            color_types: self.color_types.iter().map(|(c, t)| (rename(c), t.clone())).collect(),
            rules: self.rules.iter().map(|(n, r)| (rename(n), r.clone())).collect(),
        }
    }

    /// The same species over a new start color.
    pub fn with_start(&self, start: &str) -> Result<Grammar> {
        if !self.species.has_color(start) {
            return Err(Error::UnknownColor(start.to_string()));
        }
        let mut g = self.clone();
        g.start = start.to_string();
        Ok(g)
    }

    pub fn to_repr(&self) -> GrammarRepr {
        GrammarRepr {
            category: self.category.clone(),
            nonterminals: self
                .species
                .colors()
                .iter()
                .map(|c| {
                    let t = &self.color_types[c];
                    NonterminalRepr {
                        name: c.clone(),
                        left: t.left.clone(),
                        right: t.right.clone(),
                    }
                })
                .collect(),
            start: self.start.clone(),
            rules: self
                .species
                .nodes()
                .iter()
                .map(|n| RuleRepr {
                    name: n.name.clone(),
                    output: n.output.clone(),
                    inputs: n.inputs.clone(),
                    splice: self.rules[&n.name].segments().iter().map(|s| s.gens().to_vec()).collect(),
                })
                .collect(),
        }
    }

    /// Classical export, for grammars over a one-object category.
    pub fn to_classical(&self) -> Result<ClassicalGrammar> {
        if self.category.objects().len() != 1 {
            return Err(Error::Invalid("classical export needs a one-object category".into()));
        }
        let productions = self
            .species
            .nodes()
            .iter()
            .map(|n| {
                let rule = &self.rules[&n.name];
                let mut rhs = Vec::new();
                for (k, seg) in rule.segments().iter().enumerate() {
                    if k > 0 {
                        rhs.push(Symbol::Nonterminal(n.inputs[k - 1].clone()));
                    }
                    rhs.extend(seg.gens().iter().cloned().map(Symbol::Terminal));
                }
                Production {
                    lhs: n.output.clone(),
                    rhs,
                }
            })
            .collect();
        Ok(ClassicalGrammar {
            alphabet: self.category.generators().iter().map(|g| g.name.clone()).collect(),
            nonterminals: self.species.colors().to_vec(),
            start: self.start.clone(),
            productions,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Properties {
    pub linear: bool,
    pub left_linear: bool,
    pub right_linear: bool,
    pub bilinear: bool,
    pub cnf: bool,
    pub nullable: BTreeSet<String>,
    pub productive: BTreeSet<String>,
    pub reachable: BTreeSet<String>,
    pub useful: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonterminalRepr {
    pub name: String,
    pub left: String,
    pub right: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleRepr {
    pub name: String,
    pub output: String,
    #[serde(default)]
    pub inputs: Vec<String>,
    pub splice: Vec<Vec<String>>,
}

/// Serialized grammar. Also serves as a builder for fixtures.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrammarRepr {
    pub category: FiniteGraph,
    pub nonterminals: Vec<NonterminalRepr>,
    pub start: String,
    pub rules: Vec<RuleRepr>,
}

impl GrammarRepr {
    pub fn new(category: FiniteGraph, start: impl Into<String>) -> Self {
        GrammarRepr {
            category,
            nonterminals: Vec::new(),
            start: start.into(),
            rules: Vec::new(),
        }
    }

    pub fn nonterminal(mut self, name: &str, left: &str, right: &str) -> Self {
        self.nonterminals.push(NonterminalRepr {
            name: name.into(),
            left: left.into(),
            right: right.into(),
        });
        self
    }

    /// Adds a rule; each segment is a list of generator names.
    pub fn rule(mut self, name: &str, inputs: &[&str], output: &str, splice: &[&[&str]]) -> Self {
        self.rules.push(RuleRepr {
            name: name.into(),
            output: output.into(),
            inputs: inputs.iter().map(|s| s.to_string()).collect(),
            splice: splice
                .iter()
                .map(|seg| seg.iter().map(|s| s.to_string()).collect())
                .collect(),
        });
        self
    }

    pub fn build(&self) -> Result<Grammar> {
        Grammar::from_repr(self)
    }
}

impl Grammar {
    pub fn from_repr(repr: &GrammarRepr) -> Result<Grammar> {
        let species = Species::new(
            repr.nonterminals.iter().map(|n| n.name.clone()).collect(),
            repr.rules
                .iter()
                .map(|r| Node {
                    name: r.name.clone(),
                    inputs: r.inputs.clone(),
                    output: r.output.clone(),
                })
                .collect(),
        )?;
        let color_types: BTreeMap<String, GapType> = repr
            .nonterminals
            .iter()
            .map(|n| (n.name.clone(), GapType::new(&n.left, &n.right)))
            .collect();
        for t in color_types.values() {
            t.check_in(&repr.category)?;
        }
        let mut rules = BTreeMap::new();
        for r in &repr.rules {
            let outer = color_types[&r.output].clone();
            let gaps: Vec<GapType> = r.inputs.iter().map(|c| color_types[c].clone()).collect();
            let arrow = SplicedArrow::from_segments(&repr.category, outer, gaps, &r.splice)
                .map_err(|e| Error::Invalid(format!("rule `{}`: {e}", r.name)))?;
            rules.insert(r.name.clone(), arrow);
        }
        Grammar::new(repr.category.clone(), species, repr.start.clone(), color_types, rules)
    }
}

impl Serialize for Grammar {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_repr().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Grammar {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = GrammarRepr::deserialize(deserializer)?;
        Grammar::from_repr(&repr).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Symbol {
    Terminal(String),
    Nonterminal(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Production {
    pub lhs: String,
    pub rhs: Vec<Symbol>,
}

/// A grammar in the textbook sense: terminals, nonterminals, productions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassicalGrammar {
    pub alphabet: Vec<String>,
    pub nonterminals: Vec<String>,
    pub start: String,
    pub productions: Vec<Production>,
}

impl ClassicalGrammar {
    /// Parses lines `R -> w0 R1 w1 … Rn wn`, with `|` separating
    /// alternatives, `_` for the empty word and `#` starting a comment.
    ///
    /// Tokens are whitespace-separated. A token that appears on some
    /// left-hand side is a nonterminal; every other token is a terminal. The
    /// first left-hand side is the start symbol.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (lhs, rhs) = line.split_once("->").ok_or_else(|| Error::Syntax {
                line: k + 1,
                message: "expected `R -> ...`".into(),
            })?;
            let lhs = lhs.trim();
            if lhs.is_empty() || lhs.contains(char::is_whitespace) {
                return Err(Error::Syntax {
                    line: k + 1,
                    message: format!("bad left-hand side `{lhs}`"),
                });
            }
            lines.push((lhs.to_string(), rhs.to_string()));
        }
        let first = lines.first().ok_or(Error::Syntax {
            line: 0,
            message: "no productions".into(),
        })?;
        let start = first.0.clone();
        let mut nonterminals: Vec<String> = Vec::new();
        for (lhs, _) in &lines {
            if !nonterminals.contains(lhs) {
                nonterminals.push(lhs.clone());
            }
        }
        let mut alphabet: Vec<String> = Vec::new();
        let mut productions = Vec::new();
        for (lhs, rhs) in &lines {
            for alt in rhs.split('|') {
                let mut symbols = Vec::new();
                for tok in alt.split_whitespace() {
                    if tok == "_" {
                        continue;
                    }
                    if nonterminals.iter().any(|n| n == tok) {
                        symbols.push(Symbol::Nonterminal(tok.to_string()));
                    } else {
                        if !alphabet.iter().any(|a| a == tok) {
                            alphabet.push(tok.to_string());
                        }
                        symbols.push(Symbol::Terminal(tok.to_string()));
                    }
                }
                productions.push(Production {
                    lhs: lhs.clone(),
                    rhs: symbols,
                });
            }
        }
        alphabet.sort();
        Ok(ClassicalGrammar {
            alphabet,
            nonterminals,
            start,
            productions,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for p in &self.productions {
            let rhs: Vec<&str> = p
                .rhs
                .iter()
                .map(|s| match s {
                    Symbol::Terminal(t) | Symbol::Nonterminal(t) => t.as_str(),
                })
                .collect();
            let rhs = if rhs.is_empty() { "_".to_string() } else { rhs.join(" ") };
            out.push_str(&format!("{} -> {}\n", p.lhs, rhs));
        }
        out
    }
}

/// Transcribes a classical grammar over `M[Σ]`: the production
/// `R → w₀R₁w₁…Rₙwₙ` becomes a node `R₁…Rₙ → R` sent to `w₀−…−wₙ`.
/// Productions of `R` are named `R.0`, `R.1`, … in order.
pub fn import_classical(cg: &ClassicalGrammar) -> Result<Grammar> {
    let category = FiniteGraph::monoid(&cg.alphabet)?;
    let mut repr = GrammarRepr::new(category, cg.start.clone());
    for n in &cg.nonterminals {
        repr = repr.nonterminal(n, STAR, STAR);
    }
    let mut counters: BTreeMap<&str, usize> = BTreeMap::new();
    for p in &cg.productions {
        if !cg.nonterminals.contains(&p.lhs) {
            return Err(Error::UnknownColor(p.lhs.clone()));
        }
        let k = counters.entry(p.lhs.as_str()).or_default();
        let name = format!("{}.{}", p.lhs, k);
        *k += 1;
        let mut inputs = Vec::new();
        let mut splice: Vec<Vec<String>> = vec![Vec::new()];
        for s in &p.rhs {
            match s {
                Symbol::Terminal(t) => {
                    if !cg.alphabet.contains(t) {
                        return Err(Error::UnknownGenerator(t.clone()));
                    }
                    splice.last_mut().expect("non-empty").push(t.clone());
                }
                Symbol::Nonterminal(r) => {
                    if !cg.nonterminals.contains(r) {
                        return Err(Error::UnknownColor(r.clone()));
                    }
                    inputs.push(r.clone());
                    splice.push(Vec::new());
                }
            }
        }
        repr.rules.push(RuleRepr {
            name,
            output: p.lhs.clone(),
            inputs,
            splice,
        });
    }
    repr.build()
}

fn same_category(a: &FiniteGraph, b: &FiniteGraph) -> Result<()> {
    if a != b {
        return Err(Error::Invalid("grammars live over different categories".into()));
    }
    Ok(())
}

/// Union: both grammars side by side (suffixed `#u1` and `#u2`) under a
/// fresh start `S` with unary nodes `i1 : S#u1 → S`, `i2 : S#u2 → S`, both
/// sent to the identity spliced arrow.
pub fn union(g1: &Grammar, g2: &Grammar) -> Result<Grammar> {
    same_category(&g1.category, &g2.category)?;
    if g1.start_type() != g2.start_type() {
        return Err(Error::TypeMismatch {
            expected: g1.start_type().to_string(),
            found: g2.start_type().to_string(),
        });
    }
    let parts = [g1.renamed(|n| format!("{n}#u1")), g2.renamed(|n| format!("{n}#u2"))];
    let start_type = g1.start_type().clone();
    let mut out = disjoint_sum(&g1.category, &parts, "S", &start_type)?;
    for (k, part) in parts.iter().enumerate() {
        let name = format!("i{}", k + 1);
        out.species.add_node(Node::new(name.clone(), vec![part.start.clone()], "S"))?;
        out.rules.insert(name, SplicedArrow::identity(&start_type));
    }
    out.validate().map_err(|v| Error::Invalid(format!("{v:?}")))?;
    Ok(out)
}

fn disjoint_sum(category: &FiniteGraph, parts: &[Grammar], start: &str, start_type: &GapType) -> Result<Grammar> {
    let mut species = Species::empty();
    let mut color_types = BTreeMap::new();
    let mut rules = BTreeMap::new();
    for part in parts {
        for c in part.species.colors() {
            species.add_color(c.clone())?;
        }
        color_types.extend(part.color_types.clone());
        rules.extend(part.rules.clone());
    }
    for part in parts {
        for n in part.species.nodes() {
            species.add_node(n.clone())?;
        }
    }
    species.add_color(start)?;
    color_types.insert(start.to_string(), start_type.clone());
    Ok(Grammar::from_parts(category.clone(), species, start, color_types, rules))
}

/// Spliced concatenation `w₀L₁w₁…Lₙwₙ`: the grammars side by side (the
/// k-th suffixed `#cat{k}`) under a fresh start `S` with one node
/// `x : S₁…Sₙ → S` sent to `op`.
pub fn spliced_concat(category: &FiniteGraph, op: &SplicedArrow, gs: &[Grammar]) -> Result<Grammar> {
    if gs.len() != op.arity() {
        return Err(Error::TypeMismatch {
            expected: format!("{} grammars", op.arity()),
            found: gs.len().to_string(),
        });
    }
    op.check_in(category)?;
    for (gap, g) in op.gaps().iter().zip(gs) {
        same_category(category, &g.category)?;
        if gap != g.start_type() {
            return Err(Error::TypeMismatch {
                expected: gap.to_string(),
                found: g.start_type().to_string(),
            });
        }
    }
    let parts: Vec<Grammar> = gs
        .iter()
        .enumerate()
        .map(|(k, g)| g.renamed(|n| format!("{n}#cat{}", k + 1)))
        .collect();
    let mut out = disjoint_sum(category, &parts, "S", op.outer())?;
    out.species
        .add_node(Node::new("x", parts.iter().map(|p| p.start.clone()).collect(), "S"))?;
    out.rules.insert("x".to_string(), op.clone());
    out.validate().map_err(|v| Error::Invalid(format!("{v:?}")))?;
    Ok(out)
}

/// Functorial image: same species and start, every spliced arrow pushed
/// along `f`.
pub fn functorial_image(g: &Grammar, f: &FreeFunctor) -> Result<Grammar> {
    same_category(&g.category, f.domain())?;
    let color_types = g
        .color_types
        .iter()
        .map(|(c, t)| Ok((c.clone(), GapType::new(f.map_object(&t.left)?, f.map_object(&t.right)?))))
        .collect::<Result<BTreeMap<_, _>>>()?;
    let rules = g
        .rules
        .iter()
        .map(|(n, r)| Ok((n.clone(), r.map(f)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    Grammar::new(f.codomain().clone(), g.species.clone(), g.start.clone(), color_types, rules)
}

/// A bilinear grammar together with the bookkeeping needed to carry
/// derivations back and forth.
#[derive(Debug, Clone)]
pub struct Bilinearization {
    pub grammar: Grammar,
    /// New chain node → (original node, position in its chain).
    pub chain: BTreeMap<String, (String, usize)>,
    /// Colors introduced for the chains.
    pub intermediate: BTreeSet<String>,
}

pub fn chain_color(node: &str, i: usize) -> String {
    format!("I({node},{i})")
}

pub fn chain_node(node: &str, i: usize) -> String {
    format!("{node}#{i}")
}

/// Bilinear normal form. Nullary nodes are kept; a node
/// `x : R₁…Rₙ → R` with `n > 0` and spliced arrow `w₀−…−wₙ` is replaced by
/// colors `I(x,0)…I(x,n−1)` refining `(A,Aᵢ)`, a nullary node `x#0` sent to
/// `w₀`, and binary nodes `x#i : I(x,i−1), Rᵢ → I(x,i)` sent to
/// `id_A − id_{Aᵢ} − wᵢ`, where `I(x,n)` is `R`.
pub fn bilinearize(g: &Grammar) -> Result<Bilinearization> {
    let mut species = Species::empty();
    let mut color_types = g.color_types.clone();
    let mut rules = BTreeMap::new();
    let mut chain = BTreeMap::new();
    let mut intermediate = BTreeSet::new();
    for c in g.species.colors() {
        species.add_color(c.clone())?;
    }
    let mut new_nodes = Vec::new();
    for x in g.species.nodes() {
        let rule = &g.rules[&x.name];
        let n = x.arity();
        if n == 0 {
            new_nodes.push(x.clone());
            rules.insert(x.name.clone(), rule.clone());
            continue;
        }
        let a = &rule.outer().left;
        for i in 0..n {
            let color = chain_color(&x.name, i);
            species.add_color(color.clone())?;
            color_types.insert(color.clone(), GapType::new(a, &rule.gaps()[i].left));
            intermediate.insert(color);
        }
        let first = chain_node(&x.name, 0);
        new_nodes.push(Node::new::<String>(first.clone(), vec![], chain_color(&x.name, 0)));
        rules.insert(first.clone(), SplicedArrow::constant(rule.segments()[0].clone()));
        chain.insert(first, (x.name.clone(), 0));
        for i in 1..=n {
            let name = chain_node(&x.name, i);
            let output = if i == n { x.output.clone() } else { chain_color(&x.name, i) };
            let input_gap = &rule.gaps()[i - 1];
            let acc = GapType::new(a, &input_gap.left);
            let out_type = color_types[&output].clone();
            let arrow = SplicedArrow::new(
                out_type,
                vec![acc, input_gap.clone()],
                vec![Path::identity(a), Path::identity(&input_gap.left), rule.segments()[i].clone()],
            )?;
            new_nodes.push(Node::new(name.clone(), vec![chain_color(&x.name, i - 1), x.inputs[i - 1].clone()], output));
            rules.insert(name.clone(), arrow);
            chain.insert(name, (x.name.clone(), i));
        }
    }
    for n in new_nodes {
        species.add_node(n)?;
    }
    let grammar = Grammar::new(g.category.clone(), species, g.start.clone(), color_types, rules)?;
    Ok(Bilinearization {
        grammar,
        chain,
        intermediate,
    })
}

impl Bilinearization {
    /// The image of an original derivation: `x(t₁…tₙ)` becomes
    /// `x#n(…x#1(x#0, t₁)…, tₙ)`.
    pub fn forward_tree(&self, t: &DerivationTree) -> DerivationTree {
        match t {
            DerivationTree::Leaf(_) => t.clone(),
            DerivationTree::Apply { node, children } => {
                if children.is_empty() && !self.chain.contains_key(&chain_node(node, 0)) {
                    return t.clone();
                }
                let mut acc = DerivationTree::constant(chain_node(node, 0));
                for (i, c) in children.iter().enumerate() {
                    acc = DerivationTree::apply(chain_node(node, i + 1), vec![acc, self.forward_tree(c)]);
                }
                acc
            }
        }
    }

    /// Inverse of [`Bilinearization::forward_tree`] on trees rooted at an
    /// original color.
    pub fn backward_tree(&self, t: &DerivationTree) -> Result<DerivationTree> {
        match t {
            DerivationTree::Leaf(_) => Ok(t.clone()),
            DerivationTree::Apply { node, children } => match self.chain.get(node) {
                None => Ok(t.clone()),
                Some((orig, _)) => {
                    let mut args = Vec::new();
                    let mut cur = t;
                    loop {
                        match cur {
                            DerivationTree::Apply { node, children } => match self.chain.get(node) {
                                Some((o, 0)) if o == orig && children.is_empty() => break,
                                Some((o, _)) if o == orig && children.len() == 2 => {
                                    args.push(self.backward_tree(&children[1])?);
                                    cur = &children[0];
                                }
                                _ => return Err(Error::Invalid(format!("malformed chain under `{orig}`"))),
                            },
                            DerivationTree::Leaf(_) => {
                                return Err(Error::Invalid(format!("open chain under `{orig}`")))
                            }
                        }
                    }
                    args.reverse();
                    let _ = children;
                    Ok(DerivationTree::apply(orig.clone(), args))
                }
            },
        }
    }
}

/// Compares the languages of two grammars up to `max_len` generators and
/// returns the first path (canonical order) in exactly one of them.
pub fn check_equiv_bounded(g1: &Grammar, g2: &Grammar, max_len: usize) -> Result<Option<Path>> {
    same_category(&g1.category, &g2.category)?;
    if g1.start_type() != g2.start_type() {
        return Err(Error::TypeMismatch {
            expected: g1.start_type().to_string(),
            found: g2.start_type().to_string(),
        });
    }
    let l1 = oracle::enumerate_language(g1, max_len);
    let l2 = oracle::enumerate_language(g2, max_len);
    Ok(l1.symmetric_difference(&l2).next().cloned())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::freecat::{end_marked, TOP};

    fn words(ws: &BTreeSet<Path>) -> Vec<String> {
        ws.iter().map(Path::to_word_string).collect()
    }

    #[test]
    fn fixtures_validate() {
        assert!(fixtures::g_ab().validate().is_ok());
        assert!(fixtures::g_amb().validate().is_ok());
        assert!(fixtures::g_end().validate().is_ok());
        assert!(fixtures::g_eps().validate().is_ok());
    }

    #[test]
    fn retyped_rule_is_reported() {
        let g = fixtures::g_ab();
        let cat = end_marked(g.category()).unwrap();
        let mut rules = g.rules().clone();
        let bad = SplicedArrow::from_parts(
            GapType::new(STAR, TOP),
            vec![GapType::new(STAR, STAR)],
            vec![Path::from_parts(STAR, STAR, vec!["a".into()]), Path::from_parts(STAR, TOP, vec!["b".into()])],
        );
        rules.insert("r1".into(), bad);
        let broken = Grammar::from_parts(cat, g.species().clone(), "S", g.color_types().clone(), rules);
        let report = broken.validate().unwrap_err();
        assert!(report.iter().any(|v| v.item == "r1"), "{report:?}");
    }

    #[test]
    fn end_rule_grammar_validates() {
        let g = fixtures::g_end();
        assert_eq!(g.start_type(), &GapType::new(STAR, TOP));
        assert_eq!(g.rule("0").unwrap().to_string(), "ε−$");
    }

    #[test]
    fn classical_import_transcribes_rules() {
        let cg = ClassicalGrammar::parse("S -> a S b | a b").unwrap();
        let g = import_classical(&cg).unwrap();
        let renamed = fixtures::g_ab().renamed(|n| match n {
            "r1" => "S.0".into(),
            "r0" => "S.1".into(),
            other => other.into(),
        });
        assert_eq!(g.to_repr().rules, renamed.to_repr().rules);
        assert_eq!(ClassicalGrammar::parse(&g.to_classical().unwrap().to_text()).unwrap(), cg);

        let eps = import_classical(&ClassicalGrammar::parse("S -> _").unwrap()).unwrap();
        assert!(eps.rule("S.0").unwrap().as_constant().unwrap().is_empty());
    }

    #[test]
    fn classical_import_rejects_unknown_symbols() {
        let mut cg = ClassicalGrammar::parse("S -> a S").unwrap();
        cg.productions[0].rhs.push(Symbol::Terminal("z".into()));
        assert_eq!(import_classical(&cg).unwrap_err(), Error::UnknownGenerator("z".into()));
        assert!(matches!(ClassicalGrammar::parse("S a b"), Err(Error::Syntax { line: 1, .. })));
    }

    #[test]
    fn three_color_four_node_grammar() {
        let cg = ClassicalGrammar::parse("E -> E + T | T\nT -> T * F\nF -> x").unwrap();
        let g = import_classical(&cg).unwrap();
        assert_eq!(g.species().colors().len(), 3);
        assert_eq!(g.species().nodes().len(), 4);
    }

    #[test]
    fn eval_examples() {
        let g = fixtures::g_ab();
        let t = DerivationTree::apply("r1", vec![DerivationTree::constant("r0")]);
        assert_eq!(g.eval_closed(&t).unwrap().to_word_string(), "aabb");
        assert_eq!(g.eval_tree(&DerivationTree::leaf("S")).unwrap().to_string(), "ε−ε");
        let amb = fixtures::g_amb();
        let t = DerivationTree::apply("m", vec![DerivationTree::constant("c"), DerivationTree::constant("c")]);
        assert_eq!(amb.eval_closed(&t).unwrap().to_word_string(), "aa");
    }

    #[test]
    fn property_examples() {
        let p = fixtures::g_ab().properties();
        assert!(p.linear && p.bilinear && !p.cnf);
        assert!(p.nullable.is_empty());
        assert_eq!(p.useful, BTreeSet::from(["S".to_string()]));
        assert!(!p.left_linear && !p.right_linear);

        let p = fixtures::g_amb().properties();
        assert!(!p.linear && p.bilinear && p.nullable.is_empty());

        let p = fixtures::g_eps().properties();
        assert_eq!(p.nullable, BTreeSet::from(["S".to_string()]));

        let cnf = import_classical(&ClassicalGrammar::parse("S -> A B\nA -> a\nB -> b").unwrap()).unwrap();
        assert!(cnf.properties().cnf);
        let right = import_classical(&ClassicalGrammar::parse("S -> a S | b").unwrap()).unwrap();
        let p = right.properties();
        assert!(p.right_linear && !p.left_linear);
    }

    #[test]
    fn useless_colors() {
        let g = import_classical(&ClassicalGrammar::parse("S -> a | B S\nB -> B b\nC -> c").unwrap()).unwrap();
        let p = g.properties();
        assert_eq!(p.productive, BTreeSet::from(["S".to_string(), "C".to_string()]));
        assert_eq!(p.useful, BTreeSet::from(["S".to_string()]));
        assert!(!p.reachable.contains("C"));
    }

    #[test]
    fn union_of_singletons() {
        let a = import_classical(&ClassicalGrammar::parse("S -> a\nT -> b").unwrap()).unwrap();
        let b = a.with_start("T").unwrap();
        let u = union(&a, &b).unwrap();
        assert_eq!(words(&oracle::enumerate_language(&u, 4)), ["a", "b"]);
    }

    #[test]
    fn union_rejects_mismatched_starts() {
        let e = fixtures::g_end();
        let other = e.with_start("E").unwrap();
        assert!(matches!(union(&e, &other), Err(Error::TypeMismatch { .. })));
    }

    #[test]
    fn concat_wraps_language() {
        let cd = FiniteGraph::monoid(&["a", "b", "c", "d"]).unwrap();
        let g = fixtures::g_ab_over(&cd);
        let op = SplicedArrow::from_segments(&cd, GapType::new(STAR, STAR), vec![GapType::new(STAR, STAR)], &[vec!["c".into()], vec!["d".into()]]).unwrap();
        let cat = spliced_concat(&cd, &op, &[g]).unwrap();
        assert_eq!(words(&oracle::enumerate_language(&cat, 8)), ["cabd", "caabbd", "caaabbbd"]);
        let w = SplicedArrow::constant(cd.path(STAR, &["c", "d"]).unwrap());
        let nullary = spliced_concat(&cd, &w, &[]).unwrap();
        assert_eq!(words(&oracle::enumerate_language(&nullary, 8)), ["cd"]);
    }

    #[test]
    fn image_collapses_letters() {
        let g = fixtures::g_ab();
        let x = FiniteGraph::monoid(&["x"]).unwrap();
        let f = FreeFunctor::new(
            g.category().clone(),
            x.clone(),
            [(STAR.into(), STAR.into())].into(),
            [("a".into(), x.path(STAR, &["x"]).unwrap()), ("b".into(), x.path(STAR, &["x"]).unwrap())].into(),
        )
        .unwrap();
        let img = functorial_image(&g, &f).unwrap();
        assert_eq!(words(&oracle::enumerate_language(&img, 8)), ["xx", "xxxx", "xxxxxx", "xxxxxxxx"]);
        let id = functorial_image(&g, &FreeFunctor::identity(g.category())).unwrap();
        assert_eq!(id, g);
    }

    #[test]
    fn bilinearize_ternary_node() {
        let cat = FiniteGraph::monoid(&["p", "q", "r", "s"]).unwrap();
        let g = GrammarRepr::new(cat, "R")
            .nonterminal("R", STAR, STAR)
            .rule("x", &["R", "R", "R"], "R", &[&["p"], &["q"], &["r"], &["s"]])
            .rule("c", &[], "R", &[&[]])
            .build()
            .unwrap();
        let b = bilinearize(&g).unwrap();
        let bg = &b.grammar;
        assert!(bg.properties().bilinear);
        for i in 0..3 {
            assert_eq!(bg.gap_type(&chain_color("x", i)).unwrap(), &GapType::new(STAR, STAR));
        }
        assert_eq!(bg.rule("x#0").unwrap().to_string(), "p");
        assert_eq!(bg.rule("x#1").unwrap().to_string(), "ε−ε−q");
        assert_eq!(bg.rule("x#3").unwrap().to_string(), "ε−ε−s");
        assert_eq!(bg.species().node("x#3").unwrap().output, "R");
        assert_eq!(bg.species().node("x#2").unwrap().inputs, ["I(x,1)", "R"]);
        assert_eq!(bg.rule("c").unwrap(), g.rule("c").unwrap());
    }

    #[test]
    fn bilinear_tree_translation_round_trips() {
        let g = fixtures::g_amb();
        let b = bilinearize(&g).unwrap();
        for t in crate::species::enumerate_closed_trees(g.species(), "S", 7) {
            let fwd = b.forward_tree(&t);
            assert_eq!(fwd.check(b.grammar.species()).unwrap(), "S");
            assert_eq!(b.grammar.eval_closed(&fwd).unwrap(), g.eval_closed(&t).unwrap());
            assert_eq!(b.backward_tree(&fwd).unwrap(), t);
        }
    }

    #[test]
    fn bounded_equivalence() {
        let g = fixtures::g_ab();
        assert_eq!(check_equiv_bounded(&g, &bilinearize(&g).unwrap().grammar, 8).unwrap(), None);
        assert_eq!(check_equiv_bounded(&g, &g, 6).unwrap(), None);
        let amb = fixtures::g_amb_over(g.category());
        let cex = check_equiv_bounded(&g, &amb, 2).unwrap().unwrap();
        assert_eq!(cex.to_word_string(), "a");
    }

    #[test]
    fn grammar_json_round_trip() {
        let g = fixtures::g_end();
        let text = serde_json::to_string(&g).unwrap();
        let back: Grammar = serde_json::from_str(&text).unwrap();
        assert_eq!(back, g);
    }
}
