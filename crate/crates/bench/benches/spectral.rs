use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use dicke_mpemba::liouville::{
    build_liouvillian, overlap_coeffs, spectral_decompose, SpectralPropagator,
};
use dicke_mpemba::mpemba::{random_pure_state, sample_trajectory, uniform_grid};
use dicke_mpemba::{DensityMatrix, DickeModel, DickeParams, LindbladGenerator, MeasureKind};

fn liouvillian(n: usize) -> dicke_mpemba::CMatrix {
    let p = DickeParams::new(3.0, 1.0, 1.0, 1.0, n).unwrap();
    build_liouvillian(&LindbladGenerator::from_model(&DickeModel::single(&p).unwrap()).unwrap())
}

fn decompose(c: &mut Criterion) {
    let mut group = c.benchmark_group("spectral_decompose");
    group.sample_size(10);
    for n in [1, 4, 8, 12] {
        let lv = liouvillian(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &lv, |b, lv| {
            b.iter(|| spectral_decompose(black_box(lv)).unwrap())
        });
    }
    group.finish();
}

fn evolve(c: &mut Criterion) {
    let n = 8;
    let spec = spectral_decompose(&liouvillian(n)).unwrap();
    let rho = DensityMatrix::pure(&random_pure_state(1, n + 1).unwrap())
        .unwrap()
        .into_inner();
    let coeffs = overlap_coeffs(&spec, &rho).unwrap();
    let prop = SpectralPropagator::new(&spec, &coeffs).unwrap();
    c.bench_function("propagator_at_n8", |b| {
        b.iter(|| prop.at(black_box(3.7)).unwrap())
    });

    let times = uniform_grid(50.0, 500).unwrap();
    c.bench_function("trace_distance_trajectory_n8_500", |b| {
        b.iter(|| {
            sample_trajectory(
                &spec,
                &rho,
                MeasureKind::TraceDistanceToSteady,
                black_box(&times),
                None,
            )
            .unwrap()
        })
    });
}

criterion_group!(benches, decompose, evolve);
criterion_main!(benches);
