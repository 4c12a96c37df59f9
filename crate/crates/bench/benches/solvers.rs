use criterion::{black_box, criterion_group, criterion_main, Criterion};
use kinetic_virial::ansatz::{brute_force_moment, ev_moments, Moment};
use kinetic_virial::einstein_vlasov::{build_ev_static, ev_bounds_report};
use kinetic_virial::nordstrom_vlasov::{build_nv_static_with, nv_report, NvShooting};
use kinetic_virial::vlasov_poisson::{build_vp_polytrope, vp_report};
use kinetic_virial::{AnsatzProfile, BuildOptions, Model, Tolerances};

fn builds(c: &mut Criterion) {
    let tol = Tolerances::default();
    let mut g = c.benchmark_group("build");
    g.sample_size(10);
    g.bench_function("vp k=1", |b| {
        b.iter(|| {
            build_vp_polytrope(
                black_box(&AnsatzProfile::isotropic(1.0, 1.0, -1.0)),
                1.0,
                &tol,
            )
            .unwrap()
        })
    });
    g.bench_function("nv k=1 cutoff", |b| {
        let a = AnsatzProfile::isotropic(1.0, 1.0, 0.9);
        b.iter(|| {
            build_nv_static_with(black_box(&a), NvShooting::Cutoff, &BuildOptions::default())
                .unwrap()
        })
    });
    g.bench_function("ev k=1", |b| {
        b.iter(|| {
            build_ev_static(
                black_box(&AnsatzProfile::isotropic(1.0, 1.0, 0.9)),
                -0.3,
                &tol,
            )
            .unwrap()
        })
    });
    g.bench_function("ev shell", |b| {
        b.iter(|| {
            build_ev_static(
                black_box(&AnsatzProfile::shell(1.0, 1.0, 0.9, 0.5, 1.0)),
                -0.3,
                &tol,
            )
            .unwrap()
        })
    });
    g.finish();
}

fn reports(c: &mut Criterion) {
    let tol = Tolerances::default();
    let vp = build_vp_polytrope(&AnsatzProfile::isotropic(1.0, 1.0, -1.0), 1.0, &tol).unwrap();
    let nv = build_nv_static_with(
        &AnsatzProfile::isotropic(1.0, 1.0, 0.9),
        NvShooting::Cutoff,
        &BuildOptions::default(),
    )
    .unwrap();
    let ev = build_ev_static(&AnsatzProfile::isotropic(1.0, 1.0, 0.9), -0.3, &tol).unwrap();
    let mut g = c.benchmark_group("report");
    g.sample_size(10);
    g.bench_function("vp", |b| {
        b.iter(|| vp_report(black_box(&vp), &[[1.0, 0.0, 0.0]]).unwrap())
    });
    g.bench_function("nv", |b| b.iter(|| nv_report(black_box(&nv), &[]).unwrap()));
    g.bench_function("ev", |b| {
        b.iter(|| ev_bounds_report(black_box(&ev)).unwrap())
    });
    g.finish();
}

fn moments(c: &mut Criterion) {
    let a = AnsatzProfile::shell(1.0, 1.0, 0.9, 0.5, 1.0);
    c.bench_function("ev moments reduced", |b| {
        b.iter(|| ev_moments(black_box(&a), -0.5, 2.0, 1e-12).unwrap())
    });
    c.bench_function("ev moment brute force", |b| {
        b.iter(|| brute_force_moment(black_box(&a), -0.5, 2.0, Moment::Energy, Model::Ev))
    });
}

criterion_group!(benches, builds, reports, moments);
criterion_main!(benches);
