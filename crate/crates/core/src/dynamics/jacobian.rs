use nalgebra::{DVector, Matrix3xX, Matrix6xX};

use super::model::{ChainState, ContactPoint, JointType, ManipulatorModel};
use crate::error::Result;

/// Linear-velocity Jacobian of `point` at `q`.
pub fn point_jacobian(model: &ManipulatorModel, q: &DVector<f64>, point: &ContactPoint) -> Result<Matrix3xX<f64>> {
    model.check_limits(q)?;
    Ok(point_jacobian_at(model, &model.kinematics(q), point))
}

pub fn point_jacobian_at(model: &ManipulatorModel, chain: &ChainState, point: &ContactPoint) -> Matrix3xX<f64> {
    let n = model.dof();
    let p = chain.point(point);
    let mut jac = Matrix3xX::zeros(n);
    for j in 0..=point.link {
        let a = chain.axes[j];
        let col = match model.joints[j].joint_type {
            JointType::Revolute => a.cross(&(p - chain.origins[j])),
            JointType::Prismatic => a,
        };
        jac.set_column(j, &col);
    }
    jac
}

/// Geometric Jacobian, linear rows first.
pub fn spatial_jacobian_at(model: &ManipulatorModel, chain: &ChainState, point: &ContactPoint) -> Matrix6xX<f64> {
    let n = model.dof();
    let p = chain.point(point);
    let mut jac = Matrix6xX::zeros(n);
    for j in 0..=point.link {
        let a = chain.axes[j];
        let (lin, ang) = match model.joints[j].joint_type {
            JointType::Revolute => (a.cross(&(p - chain.origins[j])), a),
            JointType::Prismatic => (a, nalgebra::Vector3::zeros()),
        };
        jac.fixed_view_mut::<3, 1>(0, j).copy_from(&lin);
        jac.fixed_view_mut::<3, 1>(3, j).copy_from(&ang);
    }
    jac
}

/// Yoshikawa measure sqrt(det(J J^T)) of the translational Jacobian.
pub fn manipulability(jv: &Matrix3xX<f64>) -> f64 {
    (jv * jv.transpose()).determinant().max(0.0).sqrt()
}
