//! Generalized CYK parsing over free categories.
//!
//! A word `w` of a free category factors only at its positions, so the
//! parse matrix is indexed by spans `(i,j)` with `0 ≤ i ≤ j ≤ |w|`. An item
//! `(R,i,j)` holds when `R` derives the sub-path `w_{i,j}`; it is derived
//! by the inference rule
//!
//! ```text
//!   (R₁,a₁,b₁) … (Rₙ,aₙ,bₙ)      w_{i,j} = w₀ u₁ w₁ … uₙ wₙ
//!   ─────────────────────────────────────────────────────   x : R₁…Rₙ → R,  φ(x) = w₀−…−wₙ
//!                    (R,i,j)
//! ```
//!
//! and the chart is its least fixed point. Spans are filled in order of
//! length; a child span is either strictly shorter or the span itself (when
//! all other segments and children are empty), so each span is saturated
//! locally. Spans of equal length are independent and may be filled in
//! parallel.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::freecat::Path;
use crate::grammar::{bilinearize, Bilinearization, Grammar};
use crate::species::DerivationTree;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ParseItem {
    pub color: String,
    pub i: usize,
    pub j: usize,
}

impl ParseItem {
    pub fn new(color: impl Into<String>, i: usize, j: usize) -> Self {
        ParseItem {
            color: color.into(),
            i,
            j,
        }
    }
}

impl fmt::Display for ParseItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.color, self.i, self.j)
    }
}

/// One way of deriving an item: a node and the items its inputs derive.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Alternative {
    pub node: String,
    pub children: Vec<ParseItem>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Match every node directly, scanning all placements of its segments.
    Direct,
    /// Parse the bilinear normal form and carry the forest back.
    #[default]
    Bilinear,
}

/// Order in which nodes are tried while saturating a span. The chart does
/// not depend on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AgendaOrder {
    #[default]
    Forward,
    Reversed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ParserConfig {
    pub strategy: Strategy,
    pub execution: Execution,
    pub agenda: AgendaOrder,
}

/// Every item of a word with all its alternatives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chart {
    word: Path,
    len: usize,
    // cells[i * (len + 1) + j]: color → alternatives
    cells: Vec<BTreeMap<String, Vec<Alternative>>>,
}

impl Chart {
    fn cell(&self, i: usize, j: usize) -> &BTreeMap<String, Vec<Alternative>> {
        &self.cells[i * (self.len + 1) + j]
    }

    pub fn word(&self) -> &Path {
        &self.word
    }

    pub fn colors_at(&self, i: usize, j: usize) -> BTreeSet<String> {
        self.cell(i, j).keys().cloned().collect()
    }

    pub fn items(&self) -> BTreeSet<ParseItem> {
        let mut out = BTreeSet::new();
        for i in 0..=self.len {
            for j in i..=self.len {
                for c in self.cell(i, j).keys() {
                    out.insert(ParseItem::new(c.clone(), i, j));
                }
            }
        }
        out
    }

    pub fn alternatives(&self, item: &ParseItem) -> &[Alternative] {
        if item.i > item.j || item.j > self.len {
            return &[];
        }
        self.cell(item.i, item.j).get(&item.color).map(Vec::as_slice).unwrap_or(&[])
    }
}

/// A grammar prepared for parsing.
#[derive(Debug, Clone)]
pub struct Parser {
    grammar: Grammar,
    bilinear: Option<Bilinearization>,
    config: ParserConfig,
}

impl Parser {
    pub fn new(g: &Grammar) -> Result<Self> {
        Parser::with_config(g, ParserConfig::default())
    }

    pub fn with_config(g: &Grammar, config: ParserConfig) -> Result<Self> {
        let bilinear = match config.strategy {
            Strategy::Direct => None,
            Strategy::Bilinear => Some(bilinearize(g)?),
        };
        Ok(Parser {
            grammar: g.clone(),
            bilinear,
            config,
        })
    }

    pub fn grammar(&self) -> &Grammar {
        &self.grammar
    }

    /// The grammar the chart is computed for.
    pub fn working_grammar(&self) -> &Grammar {
        self.bilinear.as_ref().map_or(&self.grammar, |b| &b.grammar)
    }

    /// The least fixed point of the inference rule on `w`, over the working
    /// grammar.
    pub fn chart(&self, w: &Path) -> Result<Chart> {
        let g = self.working_grammar();
        g.category().check_path(w)?;
        let positions = g.category().positions(w)?;
        let n = w.len();
        let mut chart = Chart {
            word: w.clone(),
            len: n,
            cells: vec![BTreeMap::new(); (n + 1) * (n + 1)],
        };
        let mut order: Vec<usize> = (0..g.species().nodes().len()).collect();
        if self.config.agenda == AgendaOrder::Reversed {
            order.reverse();
        }
        let matcher = Matcher {
            g,
            word: w.gens(),
            positions: &positions,
            order: &order,
        };
        for span in 0..=n {
            let filled = self
                .config
                .execution
                .map_range(n + 1 - span, |i| matcher.fill(&chart, i, i + span));
            for (i, cell) in filled.into_iter().enumerate() {
                chart.cells[i * (n + 1) + i + span] = cell;
            }
        }
        Ok(chart)
    }

    /// Colors of the original grammar deriving all of `w`.
    pub fn recognize(&self, w: &Path) -> Result<BTreeSet<String>> {
        let chart = self.chart(w)?;
        let mut colors = chart.colors_at(0, w.len());
        if let Some(b) = &self.bilinear {
            colors.retain(|c| !b.intermediate.contains(c));
        }
        Ok(colors)
    }

    /// Membership of `w` in the language of the start color.
    pub fn accepts(&self, w: &Path) -> Result<bool> {
        Ok(self.recognize(w)?.contains(self.grammar.start()))
    }

    /// The packed forest of all derivations of `w` from the start color,
    /// expressed over the original grammar.
    pub fn parse_forest(&self, w: &Path) -> Result<ParseForest> {
        let chart = self.chart(w)?;
        let root = ParseItem::new(self.grammar.start(), 0, w.len());
        type Lookup<'a> = Box<dyn Fn(&ParseItem) -> Vec<Alternative> + 'a>;
        let lookup: Lookup = match &self.bilinear {
            None => Box::new(|item: &ParseItem| chart.alternatives(item).to_vec()),
            Some(b) => Box::new(move |item: &ParseItem| unchain(&chart, b, item)),
        };
        let mut nodes = BTreeMap::new();
        let mut stack = Vec::new();
        if !lookup(&root).is_empty() {
            stack.push(root.clone());
        }
        while let Some(item) = stack.pop() {
            if nodes.contains_key(&item) {
                continue;
            }
            let mut alts = lookup(&item);
            alts.sort();
            alts.dedup();
            for a in &alts {
                for c in &a.children {
                    if !nodes.contains_key(c) {
                        stack.push(c.clone());
                    }
                }
            }
            nodes.insert(item, alts);
        }
        Ok(ParseForest {
            word: w.clone(),
            root,
            nodes,
        })
    }
}

/// Alternatives of an original-color item read off the bilinear chart: every
/// chain `x#n(…x#1(x#0, c₁)…, cₙ)` becomes one alternative `x(c₁…cₙ)`.
fn unchain(chart: &Chart, b: &Bilinearization, item: &ParseItem) -> Vec<Alternative> {
    let mut out = Vec::new();
    for alt in chart.alternatives(item) {
        match b.chain.get(&alt.node) {
            None => out.push(alt.clone()),
            Some((orig, k)) => {
                let (acc, last) = (&alt.children[0], &alt.children[1]);
                for mut prefix in chain_prefixes(chart, b, orig, k - 1, acc) {
                    prefix.push(last.clone());
                    out.push(Alternative {
                        node: orig.clone(),
                        children: prefix,
                    });
                }
            }
        }
    }
    out
}

fn chain_prefixes(chart: &Chart, b: &Bilinearization, orig: &str, k: usize, item: &ParseItem) -> Vec<Vec<ParseItem>> {
    let mut out = Vec::new();
    for alt in chart.alternatives(item) {
        match b.chain.get(&alt.node) {
            Some((o, 0)) if o == orig && k == 0 => out.push(Vec::new()),
            Some((o, m)) if o == orig && *m == k && k > 0 => {
                for mut prefix in chain_prefixes(chart, b, orig, k - 1, &alt.children[0]) {
                    prefix.push(alt.children[1].clone());
                    out.push(prefix);
                }
            }
            _ => {}
        }
    }
    out
}

struct Matcher<'a> {
    g: &'a Grammar,
    word: &'a [String],
    positions: &'a [String],
    order: &'a [usize],
}

impl Matcher<'_> {
    /// Saturates span `(i,j)` given every shorter span, then collects all
    /// alternatives against the saturated cell.
    fn fill(&self, chart: &Chart, i: usize, j: usize) -> BTreeMap<String, Vec<Alternative>> {
        let nodes = self.g.species().nodes();
        let mut local: BTreeSet<String> = BTreeSet::new();
        loop {
            let mut changed = false;
            for &k in self.order {
                let n = &nodes[k];
                if local.contains(&n.output) {
                    continue;
                }
                let mut found = Vec::new();
                self.matches(chart, &local, k, i, j, true, &mut found);
                if !found.is_empty() {
                    local.insert(n.output.clone());
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let mut cell: BTreeMap<String, Vec<Alternative>> = BTreeMap::new();
        for (k, n) in nodes.iter().enumerate() {
            if !local.contains(&n.output) {
                continue;
            }
            let mut found = Vec::new();
            self.matches(chart, &local, k, i, j, false, &mut found);
            let alts = cell.entry(n.output.clone()).or_default();
            alts.extend(found.into_iter().map(|children| Alternative {
                node: n.name.clone(),
                children,
            }));
        }
        for alts in cell.values_mut() {
            alts.sort();
        }
        cell
    }

    #[allow(clippy::too_many_arguments)]
    fn matches(
        &self,
        chart: &Chart,
        local: &BTreeSet<String>,
        node: usize,
        i: usize,
        j: usize,
        first_only: bool,
        out: &mut Vec<Vec<ParseItem>>,
    ) {
        let n = &self.g.species().nodes()[node];
        let rule = &self.g.rules()[&n.name];
        let segs = rule.segments();
        let Some(p) = self.place(&segs[0], i, j) else {
            return;
        };
        let ctx = Placement {
            chart,
            local,
            span: (i, j),
            inputs: &n.inputs,
            segs,
            rest_len: suffix_lengths(segs),
        };
        let mut acc = Vec::with_capacity(n.arity());
        self.extend(&ctx, p, &mut acc, first_only, out);
    }

    fn extend(&self, ctx: &Placement<'_>, p: usize, acc: &mut Vec<ParseItem>, first_only: bool, out: &mut Vec<Vec<ParseItem>>) {
        if first_only && !out.is_empty() {
            return;
        }
        let k = acc.len();
        let (_, j) = ctx.span;
        if k == ctx.inputs.len() {
            if p == j {
                out.push(acc.clone());
            }
            return;
        }
        let color = &ctx.inputs[k];
        let seg = &ctx.segs[k + 1];
        let latest = j.saturating_sub(ctx.rest_len[k + 1]);
        for b in p..=latest {
            if !ctx.holds(color, p, b) {
                continue;
            }
            if let Some(next) = self.place(seg, b, j) {
                acc.push(ParseItem::new(color.clone(), p, b));
                self.extend(ctx, next, acc, first_only, out);
                acc.pop();
            }
        }
    }

    /// Places segment `seg` at position `p`, returning where it ends.
    fn place(&self, seg: &Path, p: usize, j: usize) -> Option<usize> {
        let end = p + seg.len();
        if end > j || self.positions[p] != seg.src() || self.word[p..end] != *seg.gens() {
            return None;
        }
        Some(end)
    }
}

struct Placement<'a> {
    chart: &'a Chart,
    local: &'a BTreeSet<String>,
    span: (usize, usize),
    inputs: &'a [String],
    segs: &'a [Path],
    // rest_len[k] = total length of segments k..
    rest_len: Vec<usize>,
}

impl Placement<'_> {
    fn holds(&self, color: &str, a: usize, b: usize) -> bool {
        if (a, b) == self.span {
            self.local.contains(color)
        } else {
            self.chart.cell(a, b).contains_key(color)
        }
    }
}

fn suffix_lengths(segs: &[Path]) -> Vec<usize> {
    let mut out = vec![0; segs.len() + 1];
    for k in (0..segs.len()).rev() {
        out[k] = out[k + 1] + segs[k].len();
    }
    out
}

/// Number of parses: exact, or infinite when the forest has a cycle.
/// Finite counts saturate at `u128::MAX`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ParseCount {
    Finite(u128),
    Infinite,
}

impl fmt::Display for ParseCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseCount::Finite(n) => write!(f, "{n}"),
            ParseCount::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for ParseCount {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ParseCount::Finite(n) if *n <= u64::MAX as u128 => s.serialize_u64(*n as u64),
            ParseCount::Finite(n) => s.serialize_str(&n.to_string()),
            ParseCount::Infinite => s.serialize_str("inf"),
        }
    }
}

/// Shared packed forest of the derivations of one word from the start
/// color. Only items reachable from the root are kept.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseForest {
    word: Path,
    root: ParseItem,
    nodes: BTreeMap<ParseItem, Vec<Alternative>>,
}

impl ParseForest {
    pub fn word(&self) -> &Path {
        &self.word
    }

    pub fn root(&self) -> &ParseItem {
        &self.root
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn items(&self) -> impl Iterator<Item = &ParseItem> {
        self.nodes.keys()
    }

    pub fn alternatives(&self, item: &ParseItem) -> &[Alternative] {
        self.nodes.get(item).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Whether some item can be derived from itself, i.e. the word has
    /// infinitely many parses.
    pub fn is_cyclic(&self) -> bool {
        self.topological_order().is_none()
    }

    /// Items with every child before its parent, or `None` on a cycle.
    fn topological_order(&self) -> Option<Vec<&ParseItem>> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            Open,
            Done,
        }
        let mut marks: BTreeMap<&ParseItem, Mark> = BTreeMap::new();
        let mut order = Vec::with_capacity(self.nodes.len());
        for start in self.nodes.keys() {
            if marks.contains_key(start) {
                continue;
            }
            // explicit stack of (item, next child index)
            let mut stack: Vec<(&ParseItem, usize)> = vec![(start, 0)];
            marks.insert(start, Mark::Open);
            while let Some((item, next)) = stack.pop() {
                let children: Vec<&ParseItem> = self.nodes[item].iter().flat_map(|a| &a.children).collect();
                if next < children.len() {
                    stack.push((item, next + 1));
                    let c = children[next];
                    match marks.get(c) {
                        Some(Mark::Open) => return None,
                        Some(Mark::Done) => {}
                        None => {
                            marks.insert(c, Mark::Open);
                            stack.push((c, 0));
                        }
                    }
                } else {
                    marks.insert(item, Mark::Done);
                    order.push(item);
                }
            }
        }
        Some(order)
    }

    pub fn count(&self) -> ParseCount {
        if self.is_empty() {
            return ParseCount::Finite(0);
        }
        let Some(order) = self.topological_order() else {
            return ParseCount::Infinite;
        };
        let mut counts: BTreeMap<&ParseItem, u128> = BTreeMap::new();
        for item in order {
            let total = self.nodes[item].iter().fold(0u128, |sum, alt| {
                let product = alt
                    .children
                    .iter()
                    .fold(1u128, |p, c| p.saturating_mul(counts[c]));
                sum.saturating_add(product)
            });
            counts.insert(item, total);
        }
        ParseCount::Finite(counts[&self.root])
    }

    /// The first `limit` parse trees in canonical order (node count, then
    /// preorder). Fails on a cyclic forest.
    pub fn enumerate(&self, limit: usize) -> Result<Vec<DerivationTree>> {
        if limit == 0 || self.is_empty() {
            return Ok(Vec::new());
        }
        let order = self.topological_order().ok_or(Error::InfiniteAmbiguity)?;
        // smallest and largest tree size below each item
        let mut bounds: BTreeMap<&ParseItem, (usize, usize)> = BTreeMap::new();
        for item in &order {
            let mut lo = usize::MAX;
            let mut hi = 0usize;
            for alt in &self.nodes[*item] {
                let (mut a, mut b) = (1usize, 1usize);
                for c in &alt.children {
                    a = a.saturating_add(bounds[c].0);
                    b = b.saturating_add(bounds[c].1);
                }
                lo = lo.min(a);
                hi = hi.max(b);
            }
            bounds.insert(item, (lo, hi));
        }
        let mut unfold = Unfolder {
            forest: self,
            bounds: &bounds,
            limit,
            memo: BTreeMap::new(),
        };
        let (lo, hi) = bounds[&self.root];
        let mut out = Vec::new();
        for size in lo..=hi {
            let trees = unfold.trees(&self.root, size);
            out.extend(trees.iter().take(limit - out.len()).cloned());
            if out.len() >= limit {
                break;
            }
        }
        Ok(out)
    }
}

struct Unfolder<'a> {
    forest: &'a ParseForest,
    bounds: &'a BTreeMap<&'a ParseItem, (usize, usize)>,
    limit: usize,
    memo: BTreeMap<(ParseItem, usize), Vec<DerivationTree>>,
}

impl Unfolder<'_> {
    /// The first `limit` trees of exactly `size` nodes below `item`.
    ///
    /// Within one size the canonical order is preorder order, and preorder
    /// words of trees are prefix-free, so the trees of one alternative are
    /// ordered lexicographically by their children; the first `limit` of
    /// such a product only use the first `limit` trees of each child.
    fn trees(&mut self, item: &ParseItem, size: usize) -> Vec<DerivationTree> {
        let key = (item.clone(), size);
        if let Some(t) = self.memo.get(&key) {
            return t.clone();
        }
        let (lo, hi) = self.bounds[item];
        let mut found = Vec::new();
        if (lo..=hi).contains(&size) {
            for alt in &self.forest.nodes[item] {
                let child_bounds: Vec<(usize, usize)> = alt.children.iter().map(|c| self.bounds[c]).collect();
                let mut splits = Vec::new();
                sizes_within(size - 1, &child_bounds, &mut Vec::new(), &mut splits);
                for split in splits {
                    let pools: Vec<Vec<DerivationTree>> = alt
                        .children
                        .iter()
                        .zip(&split)
                        .map(|(c, &s)| self.trees(c, s))
                        .collect();
                    let mut acc = Vec::new();
                    lex_product(&pools, self.limit, &mut acc, &mut |children| {
                        found.push(DerivationTree::apply(alt.node.clone(), children.to_vec()));
                    });
                }
            }
            found.sort();
            found.dedup();
            found.truncate(self.limit);
        }
        self.memo.insert(key, found.clone());
        found
    }
}

/// Splits `total` into one size per child, each within the child's bounds.
fn sizes_within(total: usize, bounds: &[(usize, usize)], acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    match bounds.split_first() {
        None => {
            if total == 0 {
                out.push(acc.clone());
            }
        }
        Some((&(lo, hi), rest)) => {
            let rest_lo: usize = rest.iter().map(|b| b.0).sum();
            let rest_hi: usize = rest.iter().fold(0usize, |s, b| s.saturating_add(b.1));
            for s in lo..=hi.min(total) {
                let left = total - s;
                if left < rest_lo || left > rest_hi {
                    continue;
                }
                acc.push(s);
                sizes_within(left, rest, acc, out);
                acc.pop();
            }
        }
    }
}

/// Calls `f` on the first `limit` tuples of the lexicographic product.
fn lex_product(pools: &[Vec<DerivationTree>], limit: usize, acc: &mut Vec<DerivationTree>, f: &mut dyn FnMut(&[DerivationTree])) -> usize {
    let Some((first, rest)) = pools.split_first() else {
        f(acc);
        return 1;
    };
    let mut emitted = 0;
    for t in first {
        if emitted >= limit {
            break;
        }
        acc.push(t.clone());
        emitted += lex_product(rest, limit - emitted, acc, f);
        acc.pop();
    }
    emitted
}

/// Colors deriving `w`, with the default configuration.
pub fn recognize(g: &Grammar, w: &Path) -> Result<BTreeSet<String>> {
    Parser::new(g)?.recognize(w)
}

pub fn parse_forest(g: &Grammar, w: &Path) -> Result<ParseForest> {
    Parser::new(g)?.parse_forest(w)
}

pub fn count_parses(forest: &ParseForest) -> ParseCount {
    forest.count()
}

pub fn enumerate_parses(forest: &ParseForest, limit: usize) -> Result<Vec<DerivationTree>> {
    forest.enumerate(limit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::freecat::STAR;

    fn word(g: &Grammar, s: &str) -> Path {
        g.category().word(STAR, s).unwrap()
    }

    fn configs() -> Vec<ParserConfig> {
        let mut out = Vec::new();
        for strategy in [Strategy::Direct, Strategy::Bilinear] {
            for execution in [Execution::Sequential, Execution::Parallel] {
                out.push(ParserConfig {
                    strategy,
                    execution,
                    agenda: AgendaOrder::Forward,
                });
            }
        }
        out
    }

    #[test]
    fn recognizes_anbn() {
        let g = fixtures::g_ab();
        for config in configs() {
            let p = Parser::with_config(&g, config).unwrap();
            assert_eq!(p.recognize(&word(&g, "aabb")).unwrap(), BTreeSet::from(["S".to_string()]));
            assert!(p.recognize(&word(&g, "aab")).unwrap().is_empty());
            assert!(p.recognize(&word(&g, "")).unwrap().is_empty());
        }
    }

    #[test]
    fn forests_and_counts() {
        let amb = fixtures::g_amb();
        for config in configs() {
            let p = Parser::with_config(&amb, config).unwrap();
            let f = p.parse_forest(&word(&amb, "aaa")).unwrap();
            assert_eq!(f.count(), ParseCount::Finite(2));
            assert_eq!(f.enumerate(10).unwrap().len(), 2);
            assert_eq!(p.parse_forest(&word(&amb, "aaaa")).unwrap().enumerate(10).unwrap().len(), 5);
            assert_eq!(p.parse_forest(&word(&amb, "aaaaa")).unwrap().count(), ParseCount::Finite(14));
        }
        let g = fixtures::g_ab();
        let f = parse_forest(&g, &word(&g, "aabb")).unwrap();
        assert_eq!(f.enumerate(10).unwrap(), [DerivationTree::apply("r1", vec![DerivationTree::constant("r0")])]);
        assert_eq!(parse_forest(&g, &word(&g, "aaabbb")).unwrap().count(), ParseCount::Finite(1));
        let none = parse_forest(&g, &word(&g, "abab")).unwrap();
        assert!(none.is_empty());
        assert_eq!(none.count(), ParseCount::Finite(0));
        assert!(f.enumerate(0).unwrap().is_empty());
    }

    #[test]
    fn unit_cycle_is_flagged() {
        let g = fixtures::g_unit_cycle();
        for config in configs() {
            let f = Parser::with_config(&g, config).unwrap().parse_forest(&word(&g, "a")).unwrap();
            assert!(f.is_cyclic());
            assert_eq!(f.count(), ParseCount::Infinite);
            assert_eq!(f.enumerate(3).unwrap_err(), Error::InfiniteAmbiguity);
        }
    }

    #[test]
    fn enumeration_is_canonical_and_truncated() {
        let g = fixtures::g_amb();
        let f = parse_forest(&g, &word(&g, "aaaaa")).unwrap();
        let all = f.enumerate(100).unwrap();
        assert_eq!(all.len(), 14);
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(all, sorted);
        for limit in [1, 3, 7, 13] {
            assert_eq!(f.enumerate(limit).unwrap(), all[..limit]);
        }
        for t in &all {
            assert_eq!(g.eval_closed(t).unwrap(), word(&g, "aaaaa"));
        }
    }

    #[test]
    fn agenda_order_does_not_matter() {
        for (_, g) in fixtures::parser_fixtures() {
            for strategy in [Strategy::Direct, Strategy::Bilinear] {
                let fwd = Parser::with_config(&g, ParserConfig { strategy, ..Default::default() }).unwrap();
                let rev = Parser::with_config(
                    &g,
                    ParserConfig {
                        strategy,
                        agenda: AgendaOrder::Reversed,
                        ..Default::default()
                    },
                )
                .unwrap();
                for w in crate::freecat::enumerate_all_paths(g.category(), 4) {
                    assert_eq!(fwd.chart(&w).unwrap().items(), rev.chart(&w).unwrap().items());
                }
            }
        }
    }

    #[test]
    fn end_marked_words() {
        let g = fixtures::g_end();
        let w = g.category().path(STAR, &["a", "b", "$"]).unwrap();
        assert_eq!(recognize(&g, &w).unwrap(), BTreeSet::from(["S".to_string()]));
        let inner = g.category().path(STAR, &["a", "b"]).unwrap();
        assert_eq!(recognize(&g, &inner).unwrap(), BTreeSet::from(["E".to_string()]));
    }

    #[test]
    fn foreign_words_are_rejected() {
        let g = fixtures::g_ab();
        let w = Path::from_parts(STAR, STAR, vec!["x".into()]);
        assert!(recognize(&g, &w).is_err());
    }
}
