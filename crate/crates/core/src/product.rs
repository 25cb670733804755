//! Pullback of a grammar along an automaton.
//!
//! The pullback grammar lives over the automaton's state graph. Its colors
//! are triples `(q,R,q')` with `φ(R) = (p(q), p(q'))`, and its nodes are
//! pairs of a node `x` of the grammar and a lift of `φ(x) = w₀−…−wₙ` to
//! runs `α₀−…−αₙ`. Its language is the set of runs `initial → final` whose
//! image lies in `L(G)`; pushing it forward along the automaton gives a
//! grammar for `L(G) ∩ L(M)`.

use std::collections::{BTreeMap, BTreeSet};

use crate::automaton::{Automaton, LiftedOperation};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::freecat::Path;
use crate::grammar::{functorial_image, Grammar};
use crate::species::{Node, Species};
use crate::spliced::{GapType, SplicedArrow};

pub fn pullback_color(q: &str, color: &str, q2: &str) -> String {
    format!("({q},{color},{q2})")
}

fn run_label(run: &Path) -> String {
    format!("{}>{}>{}", run.src(), run.gens().join("."), run.dst())
}

/// Name of the node lifting `x` along the given runs, e.g.
/// `r1(e>a.e>o,o>b.o>o)`.
pub fn pullback_node(x: &str, runs: &[Path]) -> String {
    let labels: Vec<String> = runs.iter().map(run_label).collect();
    format!("{x}({})", labels.join(","))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PullbackOptions {
    /// Restrict the result to useful colors.
    pub trim: bool,
    pub execution: Execution,
}

impl Default for PullbackOptions {
    fn default() -> Self {
        PullbackOptions {
            trim: true,
            execution: Execution::default(),
        }
    }
}

/// The pullback grammar, trimmed.
pub fn pullback_grammar(g: &Grammar, m: &Automaton) -> Result<Grammar> {
    pullback_grammar_with(g, m, PullbackOptions::default())
}

pub fn pullback_grammar_with(g: &Grammar, m: &Automaton, opts: PullbackOptions) -> Result<Grammar> {
    if g.category() != m.base() {
        return Err(Error::Invalid("grammar and automaton live over different categories".into()));
    }
    let start_type = g.start_type();
    let ends = GapType::new(m.state_over(m.initial())?, m.state_over(m.final_state())?);
    if start_type != &ends {
        return Err(Error::TypeMismatch {
            expected: start_type.to_string(),
            found: ends.to_string(),
        });
    }
    let states = m.state_graph();
    let mut species = Species::empty();
    let mut color_types = BTreeMap::new();
    for r in g.species().colors() {
        let t = g.gap_type(r)?;
        for q in m.states_over(&t.left) {
            for q2 in m.states_over(&t.right) {
                let c = pullback_color(q, r, q2);
                species.add_color(c.clone())?;
                color_types.insert(c, GapType::new(q, q2));
            }
        }
    }
    let lift = m.words_lift();
    let per_node: Vec<Vec<LiftedOperation>> = opts
        .execution
        .map(g.species().nodes(), |n| lift.operations_over(&g.rules()[&n.name]));
    let mut rules = BTreeMap::new();
    for (n, ops) in g.species().nodes().iter().zip(per_node) {
        for op in ops {
            let name = pullback_node(&n.name, &op.runs);
            let inputs: Vec<String> = op
                .gaps
                .iter()
                .zip(&n.inputs)
                .map(|((q, q2), r)| pullback_color(q, r, q2))
                .collect();
            let output = pullback_color(&op.outer.0, &n.output, &op.outer.1);
            let arrow = SplicedArrow::new(
                GapType::new(&op.outer.0, &op.outer.1),
                op.gaps.iter().map(|(q, q2)| GapType::new(q, q2)).collect(),
                op.runs,
            )?;
            species.add_node(Node::new(name.clone(), inputs, output))?;
            rules.insert(name, arrow);
        }
    }
    let start = pullback_color(m.initial(), g.start(), m.final_state());
    let pb = Grammar::new(states, species, start, color_types, rules)?;
    Ok(if opts.trim { trim(&pb) } else { pb })
}

/// Restricts a grammar to its useful colors and the nodes between them.
/// When the start itself is useless the result has the start color alone.
pub fn trim(g: &Grammar) -> Grammar {
    let useful: BTreeSet<String> = g.properties().useful;
    let keep = |c: &String| useful.contains(c) || c == g.start();
    let colors: Vec<String> = g.species().colors().iter().filter(|c| keep(c)).cloned().collect();
    let nodes: Vec<Node> = g
        .species()
        .nodes()
        .iter()
        .filter(|n| useful.contains(&n.output) && n.inputs.iter().all(|c| useful.contains(c)))
        .cloned()
        .collect();
    let rules = nodes.iter().map(|n| (n.name.clone(), g.rules()[&n.name].clone())).collect();
    let color_types = colors.iter().map(|c| (c.clone(), g.color_types()[c].clone())).collect();
    let species = Species::new(colors, nodes).expect("sub-species of a valid species");
    Grammar::from_parts(g.category().clone(), species, g.start(), color_types, rules)
}

/// A grammar for `L(G) ∩ L(M)` over the base category: the functorial image
/// of the pullback along the automaton.
pub fn intersect(g: &Grammar, m: &Automaton) -> Result<Grammar> {
    intersect_with(g, m, PullbackOptions::default())
}

pub fn intersect_with(g: &Grammar, m: &Automaton, opts: PullbackOptions) -> Result<Grammar> {
    functorial_image(&pullback_grammar_with(g, m, opts)?, &m.projection())
}
