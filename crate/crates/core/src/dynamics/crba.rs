use nalgebra::{DMatrix, DVector, Matrix3, Vector3};

use super::model::{ChainState, JointType, ManipulatorModel};
use crate::error::Result;

/// Joint-space inertia matrix by the composite-rigid-body recursion.
pub fn mass_matrix(model: &ManipulatorModel, q: &DVector<f64>) -> Result<DMatrix<f64>> {
    model.check_limits(q)?;
    Ok(mass_matrix_at(model, &model.kinematics(q)))
}

/// Same as [`mass_matrix`] for precomputed kinematics.
///
/// Composite bodies are accumulated from the tip in world coordinates as
/// (mass, first moment, inertia about the world origin).
pub fn mass_matrix_at(model: &ManipulatorModel, chain: &ChainState) -> DMatrix<f64> {
    let n = model.dof();
    let mut out = DMatrix::zeros(n, n);
    let mut mass = 0.0;
    let mut first = Vector3::zeros();
    let mut inertia = Matrix3::zeros();

    for j in (0..n).rev() {
        let link = &model.joints[j].link;
        let frame = &chain.frames[j];
        let c = frame.transform_point(&link.com.into()).coords;
        let r = frame.rotation.to_rotation_matrix();
        let r = r.matrix();
        mass += link.mass;
        first += link.mass * c;
        inertia +=
            r * link.inertia * r.transpose() + link.mass * (Matrix3::identity() * c.norm_squared() - c * c.transpose());

        // momentum of the composite when joint j moves at unit rate
        let a = chain.axes[j];
        let (omega, v0) = match model.joints[j].joint_type {
            JointType::Revolute => (a, chain.origins[j].cross(&a)),
            JointType::Prismatic => (Vector3::zeros(), a),
        };
        let p = mass * v0 + omega.cross(&first);
        let l = inertia * omega + first.cross(&v0);

        for i in 0..=j {
            let ai = chain.axes[i];
            let v = match model.joints[i].joint_type {
                JointType::Revolute => ai.dot(&(l - chain.origins[i].cross(&p))),
                JointType::Prismatic => ai.dot(&p),
            };
            out[(i, j)] = v;
            out[(j, i)] = v;
        }
    }
    out
}
