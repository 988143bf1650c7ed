use criterion::{criterion_group, criterion_main, Criterion};
use monodromy_core::certifier::{certify, is_infinite, orbit_span, Budgets};
use monodromy_core::coverrep::{build_curve_rep, wedge_rep};
use monodromy_core::exactla::{signature, wedge_power};
use monodromy_core::invariants::Params;
use monodromy_core::pham::{character_support, pl_coefficient};
use monodromy_core::CycloNum;
use std::hint::black_box;

fn cyclotomic(c: &mut Criterion) {
    let a = &CycloNum::root_of_unity(60, 7) + &CycloNum::from_ratio(60, 3, 5);
    let b = &CycloNum::root_of_unity(60, 11) - &CycloNum::from_int(60, 2);
    c.bench_function("cyclo/mul_60", |bench| bench.iter(|| black_box(&a) * black_box(&b)));
    c.bench_function("cyclo/inv_60", |bench| bench.iter(|| black_box(&a).inv().unwrap()));
}

fn pham(c: &mut Criterion) {
    c.bench_function("pham/support_r5_n3", |bench| {
        bench.iter(|| {
            for mu in character_support(3, 5).unwrap().support {
                black_box(pl_coefficient(&mu).unwrap());
            }
        })
    });
}

fn curve(c: &mut Criterion) {
    c.bench_function("coverrep/build_8_4_1", |bench| {
        bench.iter(|| build_curve_rep(8, 4, 1).unwrap())
    });
    let rep = build_curve_rep(10, 5, 2).unwrap();
    c.bench_function("exactla/signature_10_5_2", |bench| {
        bench.iter(|| signature(&rep.form, 128).unwrap())
    });
    c.bench_function("exactla/wedge2_dim8", |bench| {
        bench.iter(|| wedge_power(&rep.generators[0], 2).unwrap())
    });
    c.bench_function("coverrep/wedge_rep_8_4_2_n3", |bench| {
        let curve = build_curve_rep(8, 4, 2).unwrap();
        bench.iter(|| wedge_rep(&curve, 3).unwrap())
    });
}

fn certifier(c: &mut Criterion) {
    let rep = build_curve_rep(8, 4, 1).unwrap();
    c.bench_function("certifier/orbit_span_8_4_1", |bench| {
        bench.iter(|| orbit_span(&rep, &rep.cycles[..1], 10_000).unwrap())
    });
    c.bench_function("certifier/is_infinite_8_4_1", |bench| {
        bench.iter(|| is_infinite(&rep, 10_000).unwrap())
    });
    let mut g = c.benchmark_group("certify");
    g.sample_size(10);
    for p in [
        Params::new(1, 6, 3, 1),
        Params::new(1, 8, 4, 2),
        Params::new(2, 6, 3, 1),
    ] {
        g.bench_function(p.to_string(), |bench| {
            bench.iter(|| certify(&p, &Budgets::default()).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, cyclotomic, pham, curve, certifier);
criterion_main!(benches);
