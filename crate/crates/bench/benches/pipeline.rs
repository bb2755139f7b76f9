use bipartid::automata::{bir_forbidden_words, build_avoidance_dfa, derive_transfer_system};
use bipartid::cylindric::cw_family;
use bipartid::data;
use bipartid::holonomic::*;
use bipartid::partitions::{enumerate_2colored, gen_fun, Conditions};
use criterion::{black_box, criterion_group, criterion_main, Criterion};

fn series(c: &mut Criterion) {
    let mut g = c.benchmark_group("series");
    g.sample_size(10);
    g.bench_function("enumerate BIR mod q^30", |b| {
        b.iter(|| gen_fun(&enumerate_2colored(black_box(29), Conditions::BIR), 30).unwrap())
    });
    g.bench_function("AG sum BIR mod q^25", |b| b.iter(|| evaluate_ag_sum(&bir_sum(), black_box(25)).unwrap()));
    g.bench_function("cylindric family mod q^30", |b| b.iter(|| cw_family(3, 3, black_box(30)).unwrap()));
    g.finish();
}

fn automaton(c: &mut Criterion) {
    let words = bir_forbidden_words();
    c.bench_function("minimal automaton", |b| b.iter(|| build_avoidance_dfa(black_box(&words)).unwrap()));
    let sys = derive_transfer_system(&build_avoidance_dfa(&words).unwrap());
    c.bench_function("uncouple 5x5 system", |b| {
        b.iter(|| uncouple_polynomial_system(black_box(&sys.matrix), 3, 0).unwrap())
    });
}

fn certificates(c: &mut Criterion) {
    let mut g = c.benchmark_group("certificates");
    g.sample_size(10);
    for name in ["g111", "bir"] {
        let term = data::certificate_term(name).unwrap();
        let cert = data::certificate_source(name).unwrap().emended().unwrap().compile().unwrap();
        g.bench_function(format!("verify {name}"), |b| b.iter(|| verify_certificate(&term, black_box(&cert)).unwrap()));
    }
    let term = data::certificate_term("g111").unwrap();
    let cert = data::certificate_source("g111").unwrap().emended().unwrap().compile().unwrap();
    let template = CelineTemplate::from_certificate(&cert, 0);
    g.bench_function("celine g111 on printed support", |b| b.iter(|| celine_solve(&term, black_box(&template)).unwrap()));
    g.finish();
}

criterion_group!(benches, series, automaton, certificates);
criterion_main!(benches);
