//! Randomized laws: spliced-arrow composition, tree substitution, functors,
//! and parser/oracle agreement on random grammars.

use std::collections::{BTreeMap, BTreeSet};

use catgram::fixtures;
use catgram::freecat::{enumerate_all_paths, FiniteGraph, FreeFunctor, Path, STAR};
use catgram::grammar::{bilinearize, import_classical, ClassicalGrammar};
use catgram::oracle;
use catgram::parser::{AgendaOrder, ParseCount, Parser, ParserConfig, Strategy as ParseStrategy};
use catgram::species::DerivationTree;
use catgram::spliced::{GapType, SplicedArrow};
use proptest::prelude::*;

fn ab() -> FiniteGraph {
    FiniteGraph::monoid(&["a", "b"]).unwrap()
}

fn word() -> impl Strategy<Value = Vec<&'static str>> {
    prop::collection::vec(prop::sample::select(vec!["a", "b"]), 0..3)
}

fn arrow(max_arity: usize) -> impl Strategy<Value = SplicedArrow> {
    arrow_between(0, max_arity)
}

fn arrow_between(min_arity: usize, max_arity: usize) -> impl Strategy<Value = SplicedArrow> {
    (min_arity..=max_arity).prop_flat_map(|n| {
        prop::collection::vec(word(), n + 1).prop_map(move |segs| {
            let star = GapType::new(STAR, STAR);
            let segs: Vec<Vec<String>> = segs.iter().map(|s| s.iter().map(|g| g.to_string()).collect()).collect();
            SplicedArrow::from_segments(&ab(), star.clone(), vec![star; n], &segs).unwrap()
        })
    })
}

fn id() -> SplicedArrow {
    SplicedArrow::identity(&GapType::new(STAR, STAR))
}

proptest! {
    #[test]
    fn spliced_associativity(f in arrow(3), g in arrow(3), h in arrow(3), i in 0usize..3, j in 0usize..3) {
        prop_assume!(i < f.arity() && j < g.arity());
        let left = f.compose_partial(i, &g).unwrap().compose_partial(i + j, &h).unwrap();
        let right = f.compose_partial(i, &g.compose_partial(j, &h).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn spliced_interchange(f in arrow_between(2, 3), g in arrow(3), h in arrow(3), i in 0usize..2, j in 1usize..3) {
        prop_assume!(i < j && j < f.arity());
        let left = f.compose_partial(i, &g).unwrap().compose_partial(j + g.arity() - 1, &h).unwrap();
        let right = f.compose_partial(j, &h).unwrap().compose_partial(i, &g).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn spliced_units(f in arrow(3)) {
        prop_assert_eq!(id().compose_partial(0, &f).unwrap(), f.clone());
        for i in 0..f.arity() {
            prop_assert_eq!(f.compose_partial(i, &id()).unwrap(), f.clone());
        }
    }

    #[test]
    fn parallel_is_iterated_partial(f in arrow(3), gs in prop::collection::vec(arrow(2), 3)) {
        let gs = &gs[..f.arity()];
        let mut iterated = f.clone();
        for (k, g) in gs.iter().enumerate().rev() {
            iterated = iterated.compose_partial(k, g).unwrap();
        }
        prop_assert_eq!(f.compose_parallel(gs).unwrap(), iterated);
    }

    #[test]
    fn length_is_additive(f in arrow(3), g in arrow(3), i in 0usize..3) {
        prop_assume!(i < f.arity());
        prop_assert_eq!(f.compose_partial(i, &g).unwrap().len(), f.len() + g.len());
    }
}

fn functor(images: &[Vec<&str>; 2]) -> FreeFunctor {
    let cod = FiniteGraph::monoid(&["a", "b"]).unwrap();
    let objects = BTreeMap::from([(STAR.to_string(), STAR.to_string())]);
    let gens = BTreeMap::from([
        ("a".to_string(), cod.path(STAR, &images[0]).unwrap()),
        ("b".to_string(), cod.path(STAR, &images[1]).unwrap()),
    ]);
    FreeFunctor::new(ab(), cod, objects, gens).unwrap()
}

proptest! {
    #[test]
    fn functor_laws(img_a in word(), img_b in word(), p in word(), q in word(), f in arrow(2), g in arrow(2), i in 0usize..2) {
        let func = functor(&[img_a, img_b]);
        let (p, q) = (ab().path(STAR, &p).unwrap(), ab().path(STAR, &q).unwrap());
        let pq = p.compose(&q).unwrap();
        prop_assert_eq!(func.apply(&pq).unwrap(), func.apply(&p).unwrap().compose(&func.apply(&q).unwrap()).unwrap());
        prop_assert_eq!(func.apply(&Path::identity(STAR)).unwrap(), Path::identity(STAR));
        prop_assume!(i < f.arity());
        let composite = f.compose_partial(i, &g).unwrap().map(&func).unwrap();
        prop_assert_eq!(composite, f.map(&func).unwrap().compose_partial(i, &g.map(&func).unwrap()).unwrap());
    }
}

/// Open trees over the species of `S → a | SS`.
fn amb_tree() -> impl Strategy<Value = DerivationTree> {
    let leaf = prop_oneof![Just(DerivationTree::leaf("S")), Just(DerivationTree::constant("c"))];
    leaf.prop_recursive(4, 16, 2, |inner| {
        (inner.clone(), inner).prop_map(|(l, r)| DerivationTree::apply("m", vec![l, r]))
    })
}

proptest! {
    #[test]
    fn substitution_commutes_with_evaluation(t in amb_tree(), s in amb_tree(), i in 0usize..8) {
        let g = fixtures::g_amb();
        prop_assume!(i < t.leaves().len());
        let grafted = t.substitute(g.species(), i, &s).unwrap();
        prop_assert_eq!(grafted.node_count(), t.node_count() + s.node_count());
        let lhs = g.eval_tree(&grafted).unwrap();
        let rhs = g.eval_tree(&t).unwrap().compose_partial(i, &g.eval_tree(&s).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

/// Grammars over nonterminals `S`, `A`, `B` with short right-hand sides,
/// including empty and unit productions.
fn classical_grammar() -> impl Strategy<Value = ClassicalGrammar> {
    let symbol = prop::sample::select(vec!["a", "b", "S", "A", "B"]);
    let rhs = prop::collection::vec(symbol, 0..4);
    let alts = prop::collection::vec(rhs, 1..4);
    (alts.clone(), alts.clone(), alts).prop_map(|(s, a, b)| {
        let mut text = String::from("S -> a b\n");
        for (lhs, alts) in [("S", s), ("A", a), ("B", b)] {
            for rhs in alts {
                let rhs = if rhs.is_empty() { "_".to_string() } else { rhs.join(" ") };
                text.push_str(&format!("{lhs} -> {rhs}\n"));
            }
        }
        ClassicalGrammar::parse(&text).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn parser_agrees_with_oracle(cg in classical_grammar()) {
        let g = import_classical(&cg).unwrap();
        let direct = Parser::with_config(&g, ParserConfig { strategy: ParseStrategy::Direct, ..Default::default() }).unwrap();
        let bilinear = Parser::new(&g).unwrap();
        let reversed = Parser::with_config(&g, ParserConfig { agenda: AgendaOrder::Reversed, ..Default::default() }).unwrap();
        for w in enumerate_all_paths(g.category(), 5) {
            let expected = oracle::colors_deriving(&g, &w);
            prop_assert_eq!(&direct.recognize(&w).unwrap(), &expected, "{}", w);
            prop_assert_eq!(&bilinear.recognize(&w).unwrap(), &expected, "{}", w);
            prop_assert_eq!(bilinear.chart(&w).unwrap().items(), reversed.chart(&w).unwrap().items());

            let fd = direct.parse_forest(&w).unwrap();
            let fb = bilinear.parse_forest(&w).unwrap();
            prop_assert_eq!(fd.count(), fb.count(), "{}", w);
            prop_assert_eq!(fd.is_empty(), !expected.contains(g.start()));
            if let ParseCount::Finite(k @ 0..=2000) = fd.count() {
                let trees = fd.enumerate(usize::MAX).unwrap();
                prop_assert_eq!(trees.len() as u128, k);
                let distinct: BTreeSet<_> = trees.iter().collect();
                prop_assert_eq!(distinct.len(), trees.len());
                for t in &trees {
                    prop_assert_eq!(&g.eval_closed(t).unwrap(), &w);
                }
                prop_assert!(oracle::trees_deriving(&g, &w, 7).len() as u128 <= k);
            }
        }
    }

    #[test]
    fn bilinearization_preserves_languages(cg in classical_grammar()) {
        let g = import_classical(&cg).unwrap();
        let b = bilinearize(&g).unwrap();
        prop_assert!(b.grammar.properties().bilinear);
        prop_assert_eq!(oracle::enumerate_language(&g, 5), oracle::enumerate_language(&b.grammar, 5));
    }
}
