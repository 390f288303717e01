use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use dafn_core::numeric::GaussianRational;
use dafn_core::products::{boxdot_product, ck_product, ck_quotient, ExpandableFunction};

fn poly(n: usize) -> ExpandableFunction {
    ExpandableFunction::polynomial((0..=n).map(|k| GaussianRational::from((k + 1) as i64)).collect())
}

fn products(c: &mut Criterion) {
    let mut g = c.benchmark_group("products");
    g.sample_size(10);
    for n in [4, 8, 12] {
        let (f, h) = (poly(n), poly(n / 2));
        g.bench_with_input(BenchmarkId::new("ck", n), &n, |b, _| b.iter(|| ck_product(black_box(&f), black_box(&h)).unwrap()));
        g.bench_with_input(BenchmarkId::new("boxdot", n), &n, |b, _| b.iter(|| boxdot_product(black_box(&f), black_box(&h))));
        g.bench_with_input(BenchmarkId::new("quotient", n), &n, |b, &n| {
            b.iter(|| ck_quotient(black_box(&f), black_box(&poly(1)), 2 * n).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, products);
criterion_main!(benches);
