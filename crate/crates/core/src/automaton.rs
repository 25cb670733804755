//! Finite-state automata over free categories, tree automata over free
//! operads, and the lift of an automaton to spliced arrows.
//!
//! An automaton is a finite state graph together with a functor onto the
//! base category sending states to objects and transitions to generators.
//! Because every transition lies over a single generator, the functor is
//! finitary and has unique lifting of factorizations; the accepted paths are
//! the images of state paths from the initial to the final state.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freecat::{enumerate_all_paths, end_marked, FiniteGraph, FreeFunctor, Generator, Path, TOP, END_MARKER};
use crate::species::{DerivationTree, Species};
use crate::spliced::SplicedArrow;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct State {
    pub name: String,
    pub over: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transition {
    pub name: String,
    pub src: String,
    pub dst: String,
    pub over: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "AutomatonRepr", into = "AutomatonRepr")]
pub struct Automaton {
    base: FiniteGraph,
    states: Vec<State>,
    transitions: Vec<Transition>,
    initial: String,
    final_state: String,
    // (source state, generator) → transition indices
    index: BTreeMap<(String, String), Vec<usize>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AutomatonRepr {
    pub base: FiniteGraph,
    pub states: Vec<State>,
    pub transitions: Vec<Transition>,
    pub initial: String,
    #[serde(rename = "final")]
    pub final_state: String,
}

impl TryFrom<AutomatonRepr> for Automaton {
    type Error = Error;

    fn try_from(r: AutomatonRepr) -> Result<Self> {
        Automaton::new(r.base, r.states, r.transitions, r.initial, r.final_state)
    }
}

impl From<Automaton> for AutomatonRepr {
    fn from(m: Automaton) -> Self {
        AutomatonRepr {
            base: m.base,
            states: m.states,
            transitions: m.transitions,
            initial: m.initial,
            final_state: m.final_state,
        }
    }
}

/// Incremental construction of an [`Automaton`].
#[derive(Debug, Clone)]
pub struct AutomatonBuilder {
    repr: AutomatonRepr,
}

impl AutomatonBuilder {
    pub fn state(mut self, name: &str, over: &str) -> Self {
        self.repr.states.push(State {
            name: name.into(),
            over: over.into(),
        });
        self
    }

    pub fn transition(mut self, name: &str, src: &str, dst: &str, over: &str) -> Self {
        self.repr.transitions.push(Transition {
            name: name.into(),
            src: src.into(),
            dst: dst.into(),
            over: over.into(),
        });
        self
    }

    pub fn build(self) -> Result<Automaton> {
        Automaton::try_from(self.repr)
    }
}

impl Automaton {
    pub fn new(
        base: FiniteGraph,
        states: Vec<State>,
        transitions: Vec<Transition>,
        initial: impl Into<String>,
        final_state: impl Into<String>,
    ) -> Result<Self> {
        let mut over: BTreeMap<&str, &str> = BTreeMap::new();
        for s in &states {
            if !base.has_object(&s.over) {
                return Err(Error::UnknownObject(s.over.clone()));
            }
            if over.insert(&s.name, &s.over).is_some() {
                return Err(Error::Duplicate(s.name.clone()));
            }
        }
        let mut names = BTreeSet::new();
        let mut index: BTreeMap<(String, String), Vec<usize>> = BTreeMap::new();
        for (k, t) in transitions.iter().enumerate() {
            if !names.insert(t.name.as_str()) {
                return Err(Error::Duplicate(t.name.clone()));
            }
            let g = base
                .generator(&t.over)
                .ok_or_else(|| Error::UnknownGenerator(t.over.clone()))?;
            for (q, want) in [(&t.src, &g.src), (&t.dst, &g.dst)] {
                let lies_over = over.get(q.as_str()).ok_or_else(|| Error::UnknownState(q.clone()))?;
                if lies_over != want {
                    return Err(Error::TypeMismatch {
                        expected: format!("transition `{}` between states over {} → {}", t.name, g.src, g.dst),
                        found: format!("state `{q}` over {lies_over}"),
                    });
                }
            }
            index.entry((t.src.clone(), t.over.clone())).or_default().push(k);
        }
        let initial = initial.into();
        let final_state = final_state.into();
        for q in [&initial, &final_state] {
            if !over.contains_key(q.as_str()) {
                return Err(Error::UnknownState(q.clone()));
            }
        }
        Ok(Automaton {
            base,
            states,
            transitions,
            initial,
            final_state,
            index,
        })
    }

    pub fn builder(base: FiniteGraph, initial: &str, final_state: &str) -> AutomatonBuilder {
        AutomatonBuilder {
            repr: AutomatonRepr {
                base,
                states: Vec::new(),
                transitions: Vec::new(),
                initial: initial.into(),
                final_state: final_state.into(),
            },
        }
    }

    pub fn base(&self) -> &FiniteGraph {
        &self.base
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn initial(&self) -> &str {
        &self.initial
    }

    pub fn final_state(&self) -> &str {
        &self.final_state
    }

    pub fn state_over(&self, q: &str) -> Result<&str> {
        self.states
            .iter()
            .find(|s| s.name == q)
            .map(|s| s.over.as_str())
            .ok_or_else(|| Error::UnknownState(q.to_string()))
    }

    /// States lying over `object`, in declaration order.
    pub fn states_over<'a>(&'a self, object: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.states.iter().filter(move |s| s.over == object).map(|s| s.name.as_str())
    }

    /// Transitions out of `q` lying over generator `g`.
    pub fn step<'a>(&'a self, q: &str, g: &str) -> impl Iterator<Item = &'a Transition> + 'a {
        self.index
            .get(&(q.to_string(), g.to_string()))
            .into_iter()
            .flatten()
            .map(|&k| &self.transitions[k])
    }

    /// The state graph `Q`, whose paths are runs.
    pub fn state_graph(&self) -> FiniteGraph {
        FiniteGraph::new(
            self.states.iter().map(|s| s.name.clone()).collect(),
            self.transitions
                .iter()
                .map(|t| Generator::new(t.name.clone(), t.src.clone(), t.dst.clone()))
                .collect(),
        )
        .expect("validated automaton")
    }

    /// The functor `Q → C` the automaton consists of.
    pub fn projection(&self) -> FreeFunctor {
        FreeFunctor::new(
            self.state_graph(),
            self.base.clone(),
            self.states.iter().map(|s| (s.name.clone(), s.over.clone())).collect(),
            self.transitions
                .iter()
                .map(|t| {
                    let g = self.base.generator(&t.over).expect("validated automaton");
                    (t.name.clone(), Path::from_generator(g))
                })
                .collect(),
        )
        .expect("validated automaton")
    }

    /// Whether `w` lifts to a run from the initial to the final state.
    pub fn accepts(&self, w: &Path) -> bool {
        self.accepts_between(w, &self.initial, &self.final_state)
    }

    pub fn accepts_between(&self, w: &Path, from: &str, to: &str) -> bool {
        if self.state_over(from).ok() != Some(w.src()) {
            return false;
        }
        let mut current: BTreeSet<&str> = BTreeSet::from([from]);
        for g in w.gens() {
            current = current
                .iter()
                .flat_map(|q| self.step(q, g).map(|t| t.dst.as_str()))
                .collect();
            if current.is_empty() {
                return false;
            }
        }
        current.contains(to)
    }

    /// Every run `from → to` over `w`, as paths of the state graph, in
    /// lexicographic order of transition names along the run.
    pub fn enumerate_runs(&self, w: &Path, from: &str, to: &str) -> Vec<Path> {
        self.runs_from(w, from)
            .into_iter()
            .filter(|(end, _)| end == to)
            .map(|(_, run)| run)
            .collect()
    }

    /// Every run over `w` starting at `from`, with its end state.
    pub fn runs_from(&self, w: &Path, from: &str) -> Vec<(String, Path)> {
        if self.state_over(from).ok() != Some(w.src()) {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut names = Vec::with_capacity(w.len());
        self.extend_runs(w.gens(), from, from, &mut names, &mut out);
        out
    }

    fn extend_runs(&self, rest: &[String], start: &str, at: &str, names: &mut Vec<String>, out: &mut Vec<(String, Path)>) {
        match rest.split_first() {
            None => out.push((at.to_string(), Path::from_parts(start, at, names.clone()))),
            Some((g, tail)) => {
                let mut ts: Vec<&Transition> = self.step(at, g).collect();
                ts.sort_by(|a, b| a.name.cmp(&b.name));
                for t in ts {
                    names.push(t.name.clone());
                    self.extend_runs(tail, start, &t.dst, names, out);
                    names.pop();
                }
            }
        }
    }

    /// All runs over `w`, from every state over its source.
    pub fn run_table(&self, w: &Path) -> Vec<(String, String, Path)> {
        self.states_over(w.src())
            .flat_map(|q| {
                self.runs_from(w, q)
                    .into_iter()
                    .map(move |(end, run)| (q.to_string(), end, run))
            })
            .collect()
    }

    /// The lift to spliced arrows, queried lazily.
    pub fn words_lift(&self) -> WordsLift<'_> {
        WordsLift { m: self }
    }
}

/// The automaton lifted to spliced arrows. Its colors are pairs of states
/// `(q,q')`; an operation over `w₀−…−wₙ` is a choice of state pairs for
/// the outer type and each gap together with a run over each segment.
#[derive(Debug, Clone, Copy)]
pub struct WordsLift<'a> {
    m: &'a Automaton,
}

/// One lifted operation over a spliced arrow.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct LiftedOperation {
    pub outer: (String, String),
    pub gaps: Vec<(String, String)>,
    pub runs: Vec<Path>,
}

impl<'a> WordsLift<'a> {
    /// Lifts of `f` with the given outer and gap state pairs: one tuple of
    /// runs per combination, segment `k` running from the right state of
    /// gap `k−1` (or the outer left state) to the left state of gap `k` (or
    /// the outer right state).
    pub fn lifts(&self, f: &SplicedArrow, outer: (&str, &str), gaps: &[(&str, &str)]) -> Vec<Vec<Path>> {
        if gaps.len() != f.arity() {
            return Vec::new();
        }
        let per_segment: Vec<Vec<Path>> = f
            .segments()
            .iter()
            .enumerate()
            .map(|(k, seg)| {
                let from = if k == 0 { outer.0 } else { gaps[k - 1].1 };
                let to = if k == f.arity() { outer.1 } else { gaps[k].0 };
                self.m.enumerate_runs(seg, from, to)
            })
            .collect();
        let pools: Vec<&[Path]> = per_segment.iter().map(Vec::as_slice).collect();
        let mut out = Vec::new();
        crate::species::cartesian(&pools, &mut |runs| out.push(runs.to_vec()));
        out
    }

    /// Whether the constant `w` is accepted between the initial and final
    /// states.
    pub fn accepts_constant(&self, w: &Path) -> bool {
        let c = SplicedArrow::constant(w.clone());
        !self.lifts(&c, (self.m.initial(), self.m.final_state()), &[]).is_empty()
    }

    /// Every lifted operation over `f`. Gap pairs range over all states
    /// lying over the gap's objects; the runs determine the rest.
    pub fn operations_over(&self, f: &SplicedArrow) -> Vec<LiftedOperation> {
        let tables: Vec<Vec<(String, String, Path)>> = f.segments().iter().map(|s| self.m.run_table(s)).collect();
        let mut out = Vec::new();
        let mut gaps = Vec::new();
        let mut runs = Vec::new();
        for (start, end, run) in &tables[0] {
            runs.push(run.clone());
            self.continue_operations(f, &tables, start, end, &mut gaps, &mut runs, &mut out);
            runs.pop();
        }
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn continue_operations(
        &self,
        f: &SplicedArrow,
        tables: &[Vec<(String, String, Path)>],
        start: &str,
        at: &str,
        gaps: &mut Vec<(String, String)>,
        runs: &mut Vec<Path>,
        out: &mut Vec<LiftedOperation>,
    ) {
        let k = gaps.len();
        if k == f.arity() {
            out.push(LiftedOperation {
                outer: (start.to_string(), at.to_string()),
                gaps: gaps.clone(),
                runs: runs.clone(),
            });
            return;
        }
        for resume in self.m.states_over(&f.gaps()[k].right) {
            gaps.push((at.to_string(), resume.to_string()));
            for (s, end, run) in &tables[k + 1] {
                if s == resume {
                    runs.push(run.clone());
                    self.continue_operations(f, tables, start, end, gaps, runs, out);
                    runs.pop();
                }
            }
            gaps.pop();
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassicalTransition {
    pub src: String,
    /// `None` is an ε-transition, which the import rejects.
    pub symbol: Option<String>,
    pub dst: String,
}

/// A textbook NFA: alphabet, states, transitions, one initial state and a
/// set of accepting states.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassicalNfa {
    pub alphabet: Vec<String>,
    pub states: Vec<String>,
    pub transitions: Vec<ClassicalTransition>,
    pub initial: String,
    pub accepting: Vec<String>,
}

impl ClassicalNfa {
    /// Subset simulation; ε-transitions are followed.
    pub fn accepts(&self, word: &[String]) -> bool {
        fn closure<'a>(nfa: &'a ClassicalNfa, mut set: BTreeSet<&'a str>) -> BTreeSet<&'a str> {
            loop {
                let before = set.len();
                let more: Vec<&str> = nfa
                    .transitions
                    .iter()
                    .filter(|t| t.symbol.is_none() && set.contains(t.src.as_str()))
                    .map(|t| t.dst.as_str())
                    .collect();
                set.extend(more);
                if set.len() == before {
                    return set;
                }
            }
        }
        let mut current = closure(self, BTreeSet::from([self.initial.as_str()]));
        for a in word {
            let next = self
                .transitions
                .iter()
                .filter(|t| t.symbol.as_ref() == Some(a) && current.contains(t.src.as_str()))
                .map(|t| t.dst.as_str())
                .collect();
            current = closure(self, next);
        }
        self.accepting.iter().any(|q| current.contains(q.as_str()))
    }
}

/// Name of the fresh final state added by [`import_classical`].
pub const FINAL_STATE: &str = "⊤";

/// Imports a classical NFA as an automaton over `end_marked(Σ)`: every
/// state lies over `*`, a fresh final state `⊤` lies over `⊤`, and each
/// accepting state gets a `$`-transition to it. Transitions are named `t0`,
/// `t1`, … in input order and the end transitions `$.q`.
pub fn import_classical(nfa: &ClassicalNfa) -> Result<Automaton> {
    let sigma = FiniteGraph::monoid(&nfa.alphabet)?;
    let base = end_marked(&sigma)?;
    let star = crate::freecat::STAR;
    let mut b = Automaton::builder(base, &nfa.initial, FINAL_STATE);
    for q in &nfa.states {
        b = b.state(q, star);
    }
    b = b.state(FINAL_STATE, TOP);
    for (k, t) in nfa.transitions.iter().enumerate() {
        let sym = t.symbol.as_ref().ok_or_else(|| Error::EpsilonTransition(t.src.clone()))?;
        b = b.transition(&format!("t{k}"), &t.src, &t.dst, sym);
    }
    for q in &nfa.accepting {
        b = b.transition(&format!("{END_MARKER}.{q}"), q, FINAL_STATE, END_MARKER);
    }
    b.build()
}

/// The automaton whose state graph is the interval category of `w`: states
/// `0…n` over the objects `w` passes through and transitions `t1…tn`, so
/// that it recognizes exactly `{w}`.
pub fn interval_automaton(c: &FiniteGraph, w: &Path) -> Result<Automaton> {
    c.check_path(w)?;
    let objects = c.positions(w)?;
    let n = w.len();
    let mut b = Automaton::builder(c.clone(), "0", &n.to_string());
    for (i, o) in objects.iter().enumerate() {
        b = b.state(&i.to_string(), o);
    }
    for (i, g) in w.gens().iter().enumerate() {
        b = b.transition(&format!("t{}", i + 1), &i.to_string(), &(i + 1).to_string(), g);
    }
    b.build()
}

/// A factorization of `F(α)` that does not lift exactly once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UlfViolation {
    pub path: Path,
    pub prefix: Path,
    pub suffix: Path,
    pub lifts: usize,
}

/// Checks unique lifting of factorizations on every domain path with at
/// most `max_len` generators: each split `F(α) = u·v` must come from exactly
/// one split `α = α₁·α₂` with `F(α₁) = u` and `F(α₂) = v`.
#[allow(clippy::result_large_err)]
pub fn ulf_check_bounded(f: &FreeFunctor, max_len: usize) -> std::result::Result<(), UlfViolation> {
    for alpha in enumerate_all_paths(f.domain(), max_len) {
        let image = f.apply(&alpha).expect("domain path");
        let dom_pos = f.domain().positions(&alpha).expect("domain path");
        let img_pos = f.codomain().positions(&image).expect("codomain path");
        let pieces: Vec<(Path, Path)> = (0..=alpha.len())
            .map(|k| {
                (
                    f.apply(&alpha.slice(&dom_pos, 0, k)).expect("domain path"),
                    f.apply(&alpha.slice(&dom_pos, k, alpha.len())).expect("domain path"),
                )
            })
            .collect();
        for m in 0..=image.len() {
            let u = image.slice(&img_pos, 0, m);
            let v = image.slice(&img_pos, m, image.len());
            let lifts = pieces.iter().filter(|(a, b)| a == &u && b == &v).count();
            if lifts != 1 {
                return Err(UlfViolation {
                    path: alpha,
                    prefix: u,
                    suffix: v,
                    lifts,
                });
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeTransition {
    pub node: String,
    pub inputs: Vec<String>,
    pub output: String,
}

/// A bottom-up nondeterministic tree automaton over the free operad of a
/// species.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeAutomaton {
    pub base: Species,
    pub states: Vec<String>,
    pub transitions: Vec<TreeTransition>,
    pub accept: String,
}

impl TreeAutomaton {
    pub fn new(base: Species, states: Vec<String>, transitions: Vec<TreeTransition>, accept: impl Into<String>) -> Result<Self> {
        let accept = accept.into();
        for t in &transitions {
            let n = base.node(&t.node).ok_or_else(|| Error::UnknownNode(t.node.clone()))?;
            if n.arity() != t.inputs.len() {
                return Err(Error::TypeMismatch {
                    expected: format!("{} input states for `{}`", n.arity(), t.node),
                    found: t.inputs.len().to_string(),
                });
            }
            for q in t.inputs.iter().chain([&t.output]) {
                if !states.contains(q) {
                    return Err(Error::UnknownState(q.clone()));
                }
            }
        }
        if !states.contains(&accept) {
            return Err(Error::UnknownState(accept));
        }
        Ok(TreeAutomaton {
            base,
            states,
            transitions,
            accept,
        })
    }

    /// States reachable at the root of a closed tree.
    pub fn run(&self, t: &DerivationTree) -> Result<BTreeSet<String>> {
        match t {
            DerivationTree::Leaf(c) => Err(Error::Invalid(format!("open leaf <{c}> in a closed tree"))),
            DerivationTree::Apply { node, children } => {
                let below = children.iter().map(|c| self.run(c)).collect::<Result<Vec<_>>>()?;
                Ok(self
                    .transitions
                    .iter()
                    .filter(|tr| &tr.node == node && tr.inputs.iter().zip(&below).all(|(q, s)| s.contains(q)))
                    .map(|tr| tr.output.clone())
                    .collect())
            }
        }
    }

    pub fn accepts(&self, t: &DerivationTree) -> Result<bool> {
        Ok(self.run(t)?.contains(&self.accept))
    }
}
