use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use catgram::exec::Execution;
use catgram::fixtures;
use catgram::freecat::STAR;
use catgram::parser::{Parser, ParserConfig};
use catgram::product::{pullback_grammar_with, PullbackOptions};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn parse_anbn(c: &mut Criterion) {
    let g = fixtures::g_ab();
    let mut group = c.benchmark_group("parse_anbn");
    for n in [16, 48] {
        let w = g.category().word(STAR, &("a".repeat(n) + &"b".repeat(n))).unwrap();
        for (label, execution) in MODES {
            let p = Parser::with_config(&g, ParserConfig { execution, ..Default::default() }).unwrap();
            group.bench_with_input(BenchmarkId::new(label, n), &w, |b, w| b.iter(|| p.parse_forest(w).unwrap()));
        }
    }
    group.finish();
}

fn parse_ambiguous(c: &mut Criterion) {
    let g = fixtures::g_amb();
    let w = g.category().word(STAR, &"a".repeat(40)).unwrap();
    let mut group = c.benchmark_group("parse_ambiguous");
    for (label, execution) in MODES {
        let p = Parser::with_config(&g, ParserConfig { execution, ..Default::default() }).unwrap();
        group.bench_function(label, |b| b.iter(|| p.recognize(&w).unwrap()));
    }
    group.finish();
}

fn pullback(c: &mut Criterion) {
    let m = fixtures::m_evena();
    let g = fixtures::g_amb_over(m.base());
    let mut group = c.benchmark_group("pullback");
    for (label, execution) in MODES {
        let opts = PullbackOptions { trim: false, execution };
        group.bench_function(label, |b| b.iter(|| pullback_grammar_with(&g, &m, opts).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, parse_anbn, parse_ambiguous, pullback);
criterion_main!(benches);
