use ckm_bench::{euclidean_frame, quadrilateral, regular_frame, tetragon, triangle, LMN};
use ckm_core::{
    circumconic_through, conic_intersections, miquel_point_affine, miquel_point_regular, tetragon_miquel_triple,
    Tolerance,
};
use criterion::{black_box, criterion_group, criterion_main, Criterion};

fn kernel(c: &mut Criterion) {
    let scene = quadrilateral();
    c.bench_function("miquel_point_regular", |b| b.iter(|| miquel_point_regular(black_box(&scene)).unwrap()));

    let euclid = euclidean_frame();
    c.bench_function("miquel_point_affine", |b| {
        b.iter(|| miquel_point_affine(black_box(LMN), black_box(&euclid)).unwrap())
    });

    let tet = tetragon();
    c.bench_function("tetragon_miquel_triple", |b| b.iter(|| tetragon_miquel_triple(black_box(&tet)).unwrap()));

    let frame = regular_frame();
    let [p, q, r] = triangle();
    c.bench_function("circumconic_through", |b| {
        b.iter(|| circumconic_through(black_box(&p), black_box(&q), black_box(&r), &frame).unwrap())
    });

    let tol = Tolerance::default();
    let c1 = circumconic_through(&p, &q, &r, &frame).unwrap();
    let c2 = frame.structure().phi();
    c.bench_function("conic_intersections", |b| {
        b.iter(|| conic_intersections(black_box(&c1), black_box(&c2), &tol).unwrap())
    });
}

fn suites(c: &mut Criterion) {
    let mut g = c.benchmark_group("suite_100_trials");
    for name in ["thm1", "thm3", "fundamentals"] {
        g.bench_function(name, |b| b.iter(|| ckm::suites::run_suite(name, 100, 0, 1).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, kernel, suites);
criterion_main!(benches);
