use criterion::{black_box, criterion_group, criterion_main, Criterion};
use pfl_bench::{ik_target, sample_q, small_sweep, unit_direction};
use pfl_core::sweep::run_sweep;
use pfl_core::{
    inverse_kinematics, mass_matrix, reflected_mass, simulate, BodyRegionTable, CollisionScenario, HumanMass,
    IkOptions, IkTarget, ManipulatorModel, ReflectedMassQuery,
};

fn dynamics(c: &mut Criterion) {
    let model = ManipulatorModel::reference();
    let q = sample_q(&model);
    c.bench_function("mass_matrix", |b| {
        b.iter(|| mass_matrix(&model, black_box(&q)).unwrap())
    });

    let query = ReflectedMassQuery {
        q: q.clone(),
        u: unit_direction(),
        point: model.flange,
    };
    c.bench_function("reflected_mass", |b| {
        b.iter(|| reflected_mass(&model, black_box(&query)).unwrap())
    });

    let target = IkTarget::pose(ik_target());
    let opts = IkOptions::default();
    c.bench_function("ik_from_home", |b| {
        b.iter(|| inverse_kinematics(&model, &model.flange, black_box(&target), &model.home, &opts).unwrap())
    });
}

fn collision(c: &mut Criterion) {
    let s = CollisionScenario::new(5.5, HumanMass::Finite(4.4), 75_000.0, 0.2).unwrap();
    let period = s.natural_period();
    c.bench_function("simulate_1000_steps", |b| {
        b.iter(|| simulate(black_box(&s), period / 1000.0, period).unwrap())
    });
}

fn sweep(c: &mut Criterion) {
    let model = ManipulatorModel::reference();
    let table = BodyRegionTable::reference();
    let cfg = small_sweep();
    let mut g = c.benchmark_group("sweep");
    g.sample_size(10);
    g.bench_function("grid_32x8", |b| {
        b.iter(|| run_sweep(&model, &table, black_box(&cfg)).unwrap())
    });
    g.finish();
}

criterion_group!(benches, dynamics, collision, sweep);
criterion_main!(benches);
