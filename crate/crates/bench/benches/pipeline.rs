use std::hint::black_box;

use anick_core::anick::builtins::{chinese, example42, iyudu_shkarin};
use anick_core::anick::{anick_resolution, betti, materialize, minimal_section7};
use anick_core::bimodule::Algebra;
use anick_core::hpl::random::{random_sdr, random_small_perturbation};
use anick_core::hpl::verify_hpl;
use anick_core::morse::morse_reduce;
use anick_core::{Field, GroebnerData};
use criterion::{criterion_group, criterion_main, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const Q: Field = Field::Rational;

fn groebner(c: &mut Criterion) {
    let p = chinese(Q, 3).unwrap();
    c.bench_function("verify chinese:3 basis", |b| b.iter(|| GroebnerData::new(black_box(&p)).unwrap()));
}

fn resolution(c: &mut Criterion) {
    let mut group = c.benchmark_group("resolution");
    let e42 = GroebnerData::new(&example42(Q).unwrap()).unwrap();
    group.bench_function("example42 length 5 cap 6", |b| b.iter(|| anick_resolution(&e42, 5, Some(6)).unwrap()));
    let c3 = GroebnerData::new(&chinese(Q, 3).unwrap()).unwrap();
    group.bench_function("chinese:3 full with Betti", |b| {
        b.iter(|| {
            let res = anick_resolution(&c3, 6, None).unwrap();
            betti(&res, c3.quiver())
        })
    });
    let is = GroebnerData::new(&iyudu_shkarin(Q, 6).unwrap()).unwrap();
    group.bench_function("iyudu-shkarin:6 length 5 cap 8", |b| b.iter(|| anick_resolution(&is, 5, Some(8)).unwrap()));
    group.finish();
}

fn morse(c: &mut Criterion) {
    let mut group = c.benchmark_group("morse");
    let e42 = GroebnerData::new(&example42(Q).unwrap()).unwrap();
    let alg = Algebra::new(&e42);
    let bar = materialize(&alg, 5).unwrap();
    group.bench_function("explicit bar example42 degree 5", |b| {
        b.iter(|| morse_reduce(&bar.complex, &bar.matching, &alg).unwrap())
    });
    let is = GroebnerData::new(&iyudu_shkarin(Q, 6).unwrap()).unwrap();
    let alg = Algebra::new(&is);
    let res = anick_resolution(&is, 5, Some(8)).unwrap();
    group.bench_function("second matching iyudu-shkarin:6", |b| b.iter(|| minimal_section7(&alg, &res).unwrap()));
    group.finish();
}

fn hpl(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let d = random_sdr(Q, 4, 6, &mut rng);
    let delta = random_small_perturbation(&d, 200, &mut rng).unwrap();
    c.bench_function("verify_hpl random SDR", |b| b.iter(|| verify_hpl(&d, &delta, None).unwrap()));
}

criterion_group!(benches, groebner, resolution, morse, hpl);
criterion_main!(benches);
