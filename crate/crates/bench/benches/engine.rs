use criterion::{black_box, criterion_group, criterion_main, Criterion};

use fanocalc::{
    compute_basket_ci, expand_product_quotient, h21_hypersurface, milnor_series, verify_all, CascadeResolver,
    Catalog, FamilyKey, VerifyOptions,
};
use fanocalc_bench::hypersurfaces;

fn series(c: &mut Criterion) {
    c.bench_function("milnor X66 to socle", |b| {
        b.iter(|| milnor_series(black_box(&[1, 5, 6, 22, 33]), 66, 200).unwrap())
    });
    c.bench_function("product quotient order 200", |b| {
        b.iter(|| expand_product_quotient(black_box(&[12, 14]), black_box(&[2, 3, 4, 5, 6, 7]), 200))
    });
}

fn baskets(c: &mut Criterion) {
    let catalog = Catalog::shipped();
    let rows = hypersurfaces(&catalog);
    c.bench_function("h21 of 95 hypersurfaces", |b| {
        b.iter(|| {
            for r in &rows {
                black_box(h21_hypersurface(r.ambient.weights(), r.model.degrees()[0]).unwrap());
            }
        })
    });
    c.bench_function("baskets of 95 hypersurfaces", |b| {
        b.iter(|| {
            for r in &rows {
                black_box(compute_basket_ci(&r.ambient, r.model.degrees()).unwrap());
            }
        })
    });
}

fn catalogue(c: &mut Criterion) {
    let catalog = Catalog::shipped();
    c.bench_function("load shipped catalogue", |b| b.iter(Catalog::shipped));
    c.bench_function("cascade 20523", |b| {
        b.iter(|| {
            CascadeResolver::new(&catalog)
                .resolve(&FamilyKey::grdb(20523))
                .unwrap()
        })
    });
    let mut group = c.benchmark_group("verify_all");
    group.sample_size(10);
    for jobs in [1, 0] {
        group.bench_function(format!("jobs={jobs}"), |b| {
            b.iter(|| verify_all(&catalog, &VerifyOptions::default().with_parallelism(jobs)))
        });
    }
    group.finish();
}

criterion_group!(benches, series, baskets, catalogue);
criterion_main!(benches);
