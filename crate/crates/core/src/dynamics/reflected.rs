use nalgebra::{DVector, Matrix3, Vector3};

use super::crba::mass_matrix_at;
use super::jacobian::point_jacobian_at;
use super::model::{ChainState, ContactPoint, ManipulatorModel};
use crate::error::{Error, Result};

/// Below this value of u^T Lambda^-1 u [1/kg] the direction counts as locked.
pub const SINGULAR_DIRECTION_EPS: f64 = 1e-9;
/// Allowed deviation of ‖u‖ from 1.
pub const UNIT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct ReflectedMassQuery {
    pub q: DVector<f64>,
    pub u: Vector3<f64>,
    pub point: ContactPoint,
}

/// Translational block J M^-1 J^T of the inverse Cartesian inertia.
pub fn inverse_cartesian_inertia(
    model: &ManipulatorModel,
    q: &DVector<f64>,
    point: &ContactPoint,
) -> Result<Matrix3<f64>> {
    model.check_limits(q)?;
    inverse_cartesian_inertia_at(model, &model.kinematics(q), point)
}

pub fn inverse_cartesian_inertia_at(
    model: &ManipulatorModel,
    chain: &ChainState,
    point: &ContactPoint,
) -> Result<Matrix3<f64>> {
    let m = mass_matrix_at(model, chain);
    let chol = m
        .cholesky()
        .ok_or_else(|| Error::Model("joint-space inertia matrix is not positive definite".into()))?;
    let jv = point_jacobian_at(model, chain, point);
    // X = L^-1 J^T, so J M^-1 J^T = X^T X
    let x = chol
        .l()
        .solve_lower_triangular(&jv.transpose())
        .expect("cholesky factor is invertible");
    let out = x.transpose() * x;
    Ok(Matrix3::from_iterator(out.iter().copied()))
}

/// m_u = 1 / (u^T Lambda^-1 u) for a given inverse Cartesian inertia.
pub fn directional_mass(lambda_inv: &Matrix3<f64>, u: &Vector3<f64>) -> Result<f64> {
    if (u.norm() - 1.0).abs() > UNIT_TOLERANCE {
        return Err(Error::domain(format!(
            "direction must be a unit vector, |u| = {}",
            u.norm()
        )));
    }
    let d = u.dot(&(lambda_inv * u));
    if !(d >= SINGULAR_DIRECTION_EPS) {
        return Err(Error::ConstrainedDirection(d));
    }
    Ok(1.0 / d)
}

/// Effective mass perceived at the contact point along `query.u`.
pub fn reflected_mass(model: &ManipulatorModel, query: &ReflectedMassQuery) -> Result<f64> {
    let li = inverse_cartesian_inertia(model, &query.q, &query.point)?;
    directional_mass(&li, &query.u)
}

/// Constant approximation: half the moving mass plus payload.
pub fn iso_effective_mass(model: &ManipulatorModel, payload: f64) -> Result<f64> {
    if !(payload >= 0.0 && payload.is_finite()) {
        return Err(Error::domain(format!("payload must be non-negative, got {payload}")));
    }
    Ok(0.5 * model.moving_mass() + payload)
}
