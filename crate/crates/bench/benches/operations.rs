use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use ultragram_bench::{families, half_line, precision};
use ultragram_core::{
    analyze_extension, is_valuation_independent, nearest_point, orthogonalize, GroupElement,
    Series, SubfieldPresentation, DEFAULT_DEGREE_CAP,
};

fn independence(c: &mut Criterion) {
    let (a, k) = half_line(5);
    let p = precision(40, 6);
    let mut g = c.benchmark_group("independence");
    for len in [2, 4, 8] {
        let fams = families(a, 16, len, 1);
        g.bench_with_input(BenchmarkId::from_parameter(len), &fams, |b, fams| {
            b.iter(|| {
                for f in fams {
                    let _ = black_box(is_valuation_independent(&k, f, &p));
                }
            })
        });
    }
    g.finish();
}

fn orthogonalization(c: &mut Criterion) {
    let (a, k) = half_line(5);
    let m = SubfieldPresentation::completion(a, a.field, GroupElement::rational(1, 1))
        .expect("completion");
    let p = precision(30, 6);
    let fams = families(a, 16, 4, 2);
    c.bench_function("orthogonalize/rational_functions", |b| {
        b.iter(|| {
            for f in &fams {
                let _ = black_box(orthogonalize(&k, f, &p));
            }
        })
    });
    c.bench_function("orthogonalize/completion", |b| {
        b.iter(|| {
            for f in &fams {
                let _ = black_box(orthogonalize(&m, f, &p));
            }
        })
    });
}

fn immediate_evidence(c: &mut Criterion) {
    let (a, k) = half_line(3);
    let x = Series::artin_schreier(a, 3, GroupElement::rational(1, 1));
    let mut g = c.benchmark_group("artin_schreier_evidence");
    for terms in [4usize, 6, 8] {
        let ceiling = 3i64.pow(terms as u32) + 1;
        let p = precision(ceiling, terms);
        g.bench_with_input(BenchmarkId::from_parameter(terms), &p, |b, p| {
            b.iter(|| black_box(nearest_point(&k, &x, &[Series::one(a)], p)))
        });
    }
    g.finish();
}

fn extension(c: &mut Criterion) {
    let (a, k) = half_line(5);
    let p = precision(20, 6);
    let h = Series::monomial(a, a.field.one(), GroupElement::rational(1, 3));
    c.bench_function("analyze_extension/cube_root", |b| {
        b.iter(|| {
            black_box(analyze_extension(
                &k,
                std::slice::from_ref(&h),
                &p,
                DEFAULT_DEGREE_CAP,
            ))
        })
    });
}

fn builtins(c: &mut Criterion) {
    let mut g = c.benchmark_group("builtin");
    for name in ultragram_cli::builtins::names() {
        let s = ultragram_cli::builtins::builtin(name).expect("builtin");
        g.bench_function(name, |b| {
            b.iter(|| black_box(ultragram_cli::run(&s).map(|(r, _)| r.structured())))
        });
    }
    g.finish();
}

criterion_group!(
    benches,
    independence,
    orthogonalization,
    immediate_evidence,
    extension,
    builtins
);
criterion_main!(benches);
