mod common;

use common::*;
use nalgebra::{DMatrix, DVector, Vector3};
use pfl_core::dynamics::*;
use proptest::prelude::*;

#[test]
fn crba_matches_jacobian_sum_on_reference_arm() {
    let model = ManipulatorModel::reference();
    let mut rng = rng(11);
    for _ in 0..200 {
        let q = random_q(&model, &mut rng, 0.0);
        let fast = mass_matrix(&model, &q).unwrap();
        let slow = mass_matrix_by_jacobians(&model, &q);
        assert!((&fast - &slow).norm() < 1e-10 * slow.norm(), "{fast} vs {slow}");
    }
}

#[test]
fn mass_matrix_symmetric_positive_definite() {
    let model = ManipulatorModel::reference();
    let mut rng = rng(12);
    for _ in 0..1000 {
        let q = random_q(&model, &mut rng, 0.0);
        let m = mass_matrix(&model, &q).unwrap();
        assert!((&m - m.transpose()).norm() < 1e-12);
        assert!(m.clone().symmetric_eigenvalues().min() > 0.0);
    }
}

#[test]
fn jacobian_matches_finite_differences() {
    let model = ManipulatorModel::reference();
    let mut rng = rng(13);
    let h = 1e-6;
    for _ in 0..1000 {
        let q = random_q(&model, &mut rng, 1e-3);
        let dir = DVector::from_iterator(7, (0..7).map(|_| rand::Rng::gen_range(&mut rng, -1.0..1.0))).normalize();
        let j = point_jacobian(&model, &q, &model.flange).unwrap();
        let fd = (model.point_position(&(&q + &dir * h), &model.flange)
            - model.point_position(&(&q - &dir * h), &model.flange))
            / (2.0 * h);
        let jd = &j * &dir;
        assert!((Vector3::new(jd[0], jd[1], jd[2]) - fd).norm() < 1e-6);
    }
}

#[test]
fn reflected_mass_equals_minimum_kinetic_energy() {
    let model = ManipulatorModel::reference();
    let mut rng = rng(14);
    for _ in 0..1000 {
        let q = random_q(&model, &mut rng, 0.0);
        let u = random_unit(&mut rng);
        let mu = reflected_mass(
            &model,
            &ReflectedMassQuery {
                q: q.clone(),
                u,
                point: model.flange,
            },
        )
        .unwrap();
        let m = mass_matrix(&model, &q).unwrap();
        let jv: DMatrix<f64> = point_jacobian(&model, &q, &model.flange).unwrap().resize(3, 7, 0.0);
        let ke = min_kinetic_energy_for_unit_speed(&m, &jv, &u);
        assert!(((0.5 * mu - ke) / ke).abs() < 1e-8, "{mu} vs {}", 2.0 * ke);
    }
}

#[test]
fn gantry_kinetic_energy_oracle() {
    let model = fixtures::xy_gantry(3.0, 2.0);
    let q = DVector::from_vec(vec![0.1, 0.2]);
    let u = Vector3::new(1.0, 1.0, 0.0).normalize();
    let mu = reflected_mass(
        &model,
        &ReflectedMassQuery {
            q,
            u,
            point: model.flange,
        },
    )
    .unwrap();
    // 1/m_u = u_x^2/5 + u_y^2/2
    assert!((mu - 1.0 / (0.5 / 5.0 + 0.5 / 2.0)).abs() < 1e-12);
}

#[test]
fn inverse_kinematics_round_trip() {
    let model = ManipulatorModel::reference();
    let mut rng = rng(15);
    let opts = IkOptions::default();
    for _ in 0..1000 {
        let q = random_q(&model, &mut rng, 0.0);
        let target = model.point_position(&q, &model.flange);
        let sol = inverse_kinematics(&model, &model.flange, &IkTarget::position(target), &model.home, &opts).unwrap();
        assert!(model.within_limits(&sol.q));
        assert!((model.point_position(&sol.q, &model.flange) - target).norm() < 1e-4);
    }
}

#[test]
fn iso_mass_is_configuration_independent_but_reflected_mass_is_not() {
    let model = ManipulatorModel::reference();
    let mut rng = rng(16);
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for _ in 0..200 {
        let q = random_q(&model, &mut rng, 0.0);
        let mu = reflected_mass(
            &model,
            &ReflectedMassQuery {
                q,
                u: Vector3::z(),
                point: model.flange,
            },
        )
        .unwrap();
        lo = lo.min(mu);
        hi = hi.max(mu);
    }
    assert!(hi / lo >= 2.0, "spread {lo}..{hi}");
    assert_eq!(iso_effective_mass(&model, 0.0).unwrap(), 0.5 * model.moving_mass());
}

#[test]
fn model_file_round_trip_from_reader() {
    let model = ManipulatorModel::load(ManipulatorModel::reference_toml().as_bytes()).unwrap();
    assert_eq!(model, ManipulatorModel::reference());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reflected_mass_even_in_direction(seed in any::<u64>()) {
        let model = ManipulatorModel::reference();
        let mut rng = rng(seed);
        let q = random_q(&model, &mut rng, 0.0);
        let u = random_unit(&mut rng);
        let li = inverse_cartesian_inertia(&model, &q, &model.flange).unwrap();
        let a = directional_mass(&li, &u).unwrap();
        let b = directional_mass(&li, &(-u)).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * a);
    }

    #[test]
    fn planar_mass_matrix_closed_form(q1 in -3.0f64..3.0, q2 in -3.0f64..3.0,
                                      m1 in 0.1f64..10.0, m2 in 0.1f64..10.0) {
        let (l1, lc1, lc2, i1, i2) = (0.7, 0.3, 0.25, 0.04, 0.02);
        let model = fixtures::planar_two_link([m1, m2], [l1, 0.5], [lc1, lc2], [i1, i2]);
        let m = mass_matrix(&model, &DVector::from_vec(vec![q1, q2])).unwrap();
        let c2 = q2.cos();
        let m11 = m1 * lc1 * lc1 + i1 + m2 * (l1 * l1 + lc2 * lc2 + 2.0 * l1 * lc2 * c2) + i2;
        let m12 = m2 * (lc2 * lc2 + l1 * lc2 * c2) + i2;
        let m22 = m2 * lc2 * lc2 + i2;
        prop_assert!((m[(0, 0)] - m11).abs() < 1e-10);
        prop_assert!((m[(0, 1)] - m12).abs() < 1e-10);
        prop_assert!((m[(1, 1)] - m22).abs() < 1e-10);
    }
}
