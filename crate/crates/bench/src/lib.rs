//! Criterion benchmarks for the hot paths of `bchdual-core`.

use std::hint::black_box;

use bchdual_core::dualtools::{self, sweep};
use bchdual_core::mindist::{exhaustive_min_weight, lightest_codeword, SearchConfig};
use bchdual_core::{
    analyze, dual_code_params, generator_matrix, BchFamily, BchSpec, CodeContext, CosetTable, LambdaKind,
};
use criterion::{BenchmarkId, Criterion};

const ONE: LambdaKind = LambdaKind::DivisorOfQMinus1(1);

pub fn cosets(c: &mut Criterion) {
    let mut g = c.benchmark_group("coset_table");
    for (q, n) in [(2u64, 4095u64), (3, 6560), (7, 16806)] {
        g.bench_with_input(BenchmarkId::from_parameter(format!("q{q}_n{n}")), &(q, n), |b, &(q, n)| {
            b.iter(|| CosetTable::new(black_box(n), q).unwrap())
        });
    }
    g.finish();
}

pub fn bounds(c: &mut Criterion) {
    let fam = BchFamily::new(3, 9, LambdaKind::PowerForm(3)).unwrap();
    let table = fam.coset_table().unwrap();
    c.bench_function("analyze_q3_m9_s3_delta389", |b| {
        let spec = fam.with_delta(389).unwrap();
        b.iter(|| analyze(black_box(&spec), &table).unwrap())
    });
    c.bench_function("closed_i_delta_q5_m4_lambda2", |b| {
        let fam = BchFamily::new(5, 4, LambdaKind::DivisorOfQMinus1(2)).unwrap();
        b.iter(|| {
            for d in 2..=fam.n() {
                black_box(dualtools::i_delta_closed(&fam.with_delta(d).unwrap()).unwrap());
            }
        })
    });
    let mut g = c.benchmark_group("dually_sweep");
    g.sample_size(10);
    g.bench_function("q3_m9_s3_full", |b| b.iter(|| sweep(&fam, &table, 2, fam.n()).unwrap()));
    g.finish();
}

pub fn distance(c: &mut Criterion) {
    let mut g = c.benchmark_group("min_distance");
    g.sample_size(10);
    for (q, m, delta) in [(2u64, 6u32, 5u64), (5, 2, 3), (3, 3, 5)] {
        let spec = BchSpec::new(q, m, ONE, delta).unwrap();
        let cx = CodeContext::new(spec.family()).unwrap();
        let gen = generator_matrix(&dual_code_params(&spec, &cx).unwrap());
        g.bench_function(format!("exhaustive_q{q}_m{m}_delta{delta}"), |b| {
            b.iter(|| exhaustive_min_weight(&gen, cx.scalars(), 1 << 26).unwrap())
        });
    }
    let spec = BchSpec::new(2, 6, ONE, 15).unwrap();
    let cx = CodeContext::new(spec.family()).unwrap();
    let gen = generator_matrix(&dual_code_params(&spec, &cx).unwrap());
    g.bench_function("information_set_q2_m6_delta15", |b| {
        let cfg = SearchConfig { trials: 256, seed: 1, info_weight: 2 };
        b.iter(|| lightest_codeword(&gen, cx.scalars(), 0, &cfg).unwrap())
    });
    g.finish();
}

pub fn benchmarks(c: &mut Criterion) {
    cosets(c);
    bounds(c);
    distance(c);
}
