//! Smoke checks on parser cost: the bilinear form keeps rules at arity ≤ 2
//! and the chart at O(|colors|·n²) items, so doubling the input should not
//! blow up the running time by much more than the cubic factor.

use std::time::{Duration, Instant};

use catgram::fixtures;
use catgram::freecat::STAR;
use catgram::parser::{Parser, ParserConfig, Strategy};

fn anbn(n: usize) -> String {
    "a".repeat(n) + &"b".repeat(n)
}

#[test]
fn working_grammar_is_bilinear() {
    let g = fixtures::g_ab();
    let p = Parser::new(&g).unwrap();
    assert!(p.working_grammar().properties().bilinear);
    assert!(p.working_grammar().species().max_arity() <= 2);
}

#[test]
fn chart_size_is_quadratic() {
    let g = fixtures::g_ab();
    let p = Parser::new(&g).unwrap();
    let colors = p.working_grammar().species().colors().len();
    for n in [4, 8, 16, 32] {
        let w = g.category().word(STAR, &anbn(n)).unwrap();
        let len = w.len();
        let items = p.chart(&w).unwrap().items().len();
        assert!(items <= colors * (len + 1) * (len + 2) / 2, "n={n}: {items} items");
        assert!(p.accepts(&w).unwrap());
    }
}

fn time(p: &Parser, word: &str) -> Duration {
    let w = p.grammar().category().word(STAR, word).unwrap();
    let start = Instant::now();
    for _ in 0..3 {
        assert!(p.accepts(&w).unwrap());
    }
    start.elapsed()
}

#[test]
fn doubling_stays_polynomial() {
    let g = fixtures::g_amb();
    let p = Parser::with_config(&g, ParserConfig { strategy: Strategy::Bilinear, ..Default::default() }).unwrap();
    let small = time(&p, &"a".repeat(24));
    let large = time(&p, &"a".repeat(48));
    // cubic growth gives 8×; allow generous slack for timer noise
    let ratio = large.as_secs_f64() / small.as_secs_f64().max(1e-6);
    assert!(ratio < 40.0, "ratio {ratio:.1}");
}
