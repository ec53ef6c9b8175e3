#![allow(dead_code)]

use nalgebra::{DMatrix, DVector, Matrix3, Vector3};
use pfl_core::dynamics::{spatial_jacobian_at, ContactPoint, ManipulatorModel};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform configuration, kept `margin` inside every joint limit.
pub fn random_q(model: &ManipulatorModel, rng: &mut impl Rng, margin: f64) -> DVector<f64> {
    DVector::from_iterator(
        model.dof(),
        model
            .joints
            .iter()
            .map(|j| rng.gen_range(j.lower + margin..j.upper - margin)),
    )
}

pub fn random_unit(rng: &mut impl Rng) -> Vector3<f64> {
    loop {
        let v = Vector3::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        let n = v.norm();
        if n > 1e-3 && n <= 1.0 {
            return v / n;
        }
    }
}

/// Sum over links of m Jv^T Jv + Jw^T I_world Jw, each Jacobian taken at the
/// link's centre of mass.
pub fn mass_matrix_by_jacobians(model: &ManipulatorModel, q: &DVector<f64>) -> DMatrix<f64> {
    let n = model.dof();
    let chain = model.kinematics(q);
    let mut m = DMatrix::zeros(n, n);
    for (i, joint) in model.joints.iter().enumerate() {
        let com = ContactPoint {
            link: i,
            offset: joint.link.com,
        };
        let j = spatial_jacobian_at(model, &chain, &com);
        let jv = j.rows(0, 3).into_owned();
        let jw = j.rows(3, 3).into_owned();
        let r = chain.frames[i].rotation.to_rotation_matrix().into_inner();
        let iw: Matrix3<f64> = r * joint.link.inertia * r.transpose();
        m += joint.link.mass * jv.transpose() * &jv + jw.transpose() * iw * &jw;
    }
    m
}

/// Minimum kinetic energy needed for unit Cartesian speed along `u`, from the
/// KKT system [[M, g], [g^T, 0]] with g = Jv^T u.
pub fn min_kinetic_energy_for_unit_speed(m: &DMatrix<f64>, jv: &DMatrix<f64>, u: &Vector3<f64>) -> f64 {
    let n = m.nrows();
    let g = jv.transpose() * DVector::from_column_slice(u.as_slice());
    let mut kkt = DMatrix::zeros(n + 1, n + 1);
    kkt.view_mut((0, 0), (n, n)).copy_from(m);
    kkt.view_mut((0, n), (n, 1)).copy_from(&g);
    kkt.view_mut((n, 0), (1, n)).copy_from(&g.transpose());
    let mut rhs = DVector::zeros(n + 1);
    rhs[n] = 1.0;
    let sol = kkt.lu().solve(&rhs).expect("KKT system is regular");
    let qd = sol.rows(0, n).into_owned();
    0.5 * (qd.transpose() * m * &qd)[(0, 0)]
}
