//! Small grammars, automata and species used by the tests, benches and
//! documentation.

use crate::automaton::{Automaton, ClassicalNfa, ClassicalTransition};
use crate::freecat::{end_marked, FiniteGraph, STAR, TOP};
use crate::grammar::{Grammar, GrammarRepr};
use crate::species::{DerivationTree, Node, Species};

fn sigma(letters: &[&str]) -> FiniteGraph {
    FiniteGraph::monoid(letters).expect("distinct letters")
}

/// `S → aSb | ab` over `M[{a,b}]`: the language `{aⁿbⁿ : n ≥ 1}`.
pub fn g_ab() -> Grammar {
    g_ab_over(&sigma(&["a", "b"]))
}

/// [`g_ab`] over any one-object category containing `a` and `b`.
pub fn g_ab_over(cat: &FiniteGraph) -> Grammar {
    GrammarRepr::new(cat.clone(), "S")
        .nonterminal("S", STAR, STAR)
        .rule("r1", &["S"], "S", &[&["a"], &["b"]])
        .rule("r0", &[], "S", &[&["a", "b"]])
        .build()
        .expect("fixture")
}

/// `S → a | SS` over `M[{a}]`: every nonempty word, with Catalan-many parses.
pub fn g_amb() -> Grammar {
    g_amb_over(&sigma(&["a"]))
}

pub fn g_amb_over(cat: &FiniteGraph) -> Grammar {
    GrammarRepr::new(cat.clone(), "S")
        .nonterminal("S", STAR, STAR)
        .rule("c", &[], "S", &[&["a"]])
        .rule("m", &["S", "S"], "S", &[&[], &[], &[]])
        .build()
        .expect("fixture")
}

/// `S → ε | aSb`.
pub fn g_eps() -> Grammar {
    GrammarRepr::new(sigma(&["a", "b"]), "S")
        .nonterminal("S", STAR, STAR)
        .rule("e", &[], "S", &[&[]])
        .rule("r1", &["S"], "S", &[&["a"], &["b"]])
        .build()
        .expect("fixture")
}

/// `S → a | S` with the unit node sent to `ε−ε`: infinitely many parses of `a`.
pub fn g_unit_cycle() -> Grammar {
    GrammarRepr::new(sigma(&["a"]), "S")
        .nonterminal("S", STAR, STAR)
        .rule("c", &[], "S", &[&["a"]])
        .rule("u", &["S"], "S", &[&[], &[]])
        .build()
        .expect("fixture")
}

/// A color with no closed derivations.
pub fn g_empty() -> Grammar {
    GrammarRepr::new(sigma(&["a", "b"]), "S")
        .nonterminal("S", STAR, STAR)
        .rule("r1", &["S"], "S", &[&["a"], &["b"]])
        .build()
        .expect("fixture")
}

/// [`g_ab`] inside `E ⊏ (*,*)`, closed off by the end rule
/// `0 : E → S` sent to `ε−$` with `S ⊏ (*,⊤)`.
pub fn g_end() -> Grammar {
    let cat = end_marked(&sigma(&["a", "b"])).expect("fixture");
    GrammarRepr::new(cat, "S")
        .nonterminal("E", STAR, STAR)
        .nonterminal("S", STAR, TOP)
        .rule("r1", &["E"], "E", &[&["a"], &["b"]])
        .rule("r0", &[], "E", &[&["a", "b"]])
        .rule("0", &["E"], "S", &[&[], &["$"]])
        .build()
        .expect("fixture")
}

/// The grammars the parser and bilinearization are checked on.
pub fn parser_fixtures() -> Vec<(&'static str, Grammar)> {
    vec![("g_ab", g_ab()), ("g_amb", g_amb()), ("g_eps", g_eps()), ("g_end", g_end())]
}

/// States `e`, `o` over `*`; `a` flips the parity, `b` keeps it.
pub fn m_evena() -> Automaton {
    m_evena_over(&sigma(&["a", "b"]))
}

pub fn m_evena_over(base: &FiniteGraph) -> Automaton {
    Automaton::builder(base.clone(), "e", "e")
        .state("e", STAR)
        .state("o", STAR)
        .transition("a.e", "e", "o", "a")
        .transition("a.o", "o", "e", "a")
        .transition("b.e", "e", "e", "b")
        .transition("b.o", "o", "o", "b")
        .build()
        .expect("fixture")
}

/// One state looping on every generator of a one-object category.
pub fn m_all(base: &FiniteGraph) -> Automaton {
    let mut b = Automaton::builder(base.clone(), "q", "q").state("q", STAR);
    for g in base.generators() {
        b = b.transition(&format!("{}.q", g.name), "q", "q", &g.name);
    }
    b.build().expect("fixture")
}

/// Classical NFA for `(a|b)*a`.
pub fn nfa_ends_in_a() -> ClassicalNfa {
    let t = |src: &str, sym: &str, dst: &str| ClassicalTransition {
        src: src.into(),
        symbol: Some(sym.into()),
        dst: dst.into(),
    };
    ClassicalNfa {
        alphabet: vec!["a".into(), "b".into()],
        states: vec!["p".into(), "q".into()],
        transitions: vec![t("p", "a", "p"), t("p", "b", "p"), t("p", "a", "q")],
        initial: "p".into(),
        accepting: vec!["q".into()],
    }
}

/// Classical NFA for words with an even number of `a`s, accepting at the
/// initial state.
pub fn nfa_even_a() -> ClassicalNfa {
    let t = |src: &str, sym: &str, dst: &str| ClassicalTransition {
        src: src.into(),
        symbol: Some(sym.into()),
        dst: dst.into(),
    };
    ClassicalNfa {
        alphabet: vec!["a".into(), "b".into()],
        states: vec!["e".into(), "o".into()],
        transitions: vec![t("e", "a", "o"), t("o", "a", "e"), t("e", "b", "e"), t("o", "b", "o")],
        initial: "e".into(),
        accepting: vec!["e".into()],
    }
}

/// One color `1` and nodes `a/3, c/2, f/1, b, d, e, g/0`.
pub fn spc_sample() -> Species {
    let node = |name: &str, arity: usize| Node::new(name, vec!["1"; arity], "1");
    Species::new(
        vec!["1".into()],
        vec![
            node("a", 3),
            node("b", 0),
            node("c", 2),
            node("d", 0),
            node("e", 0),
            node("f", 1),
            node("g", 0),
        ],
    )
    .expect("fixture")
}

/// The tree `a(b, c(d, e), f(g))`.
pub fn sample_tree() -> DerivationTree {
    use DerivationTree as T;
    T::apply(
        "a",
        vec![
            T::constant("b"),
            T::apply("c", vec![T::constant("d"), T::constant("e")]),
            T::apply("f", vec![T::constant("g")]),
        ],
    )
}
