use nalgebra::{DMatrix, DVector, Isometry3, UnitQuaternion, Vector3};

use super::jacobian::spatial_jacobian_at;
use super::model::{ContactPoint, ManipulatorModel};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IkOptions {
    pub damping: f64,
    /// Largest joint increment per iteration, rad (or m).
    pub max_step: f64,
    pub max_iterations: usize,
    pub position_tolerance: f64,
    pub orientation_tolerance: f64,
}

impl Default for IkOptions {
    fn default() -> Self {
        IkOptions {
            damping: 1e-3,
            max_step: 0.2,
            max_iterations: 200,
            position_tolerance: 1e-4,
            orientation_tolerance: 1e-3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IkTarget {
    pub position: Vector3<f64>,
    /// World orientation of the contact frame; position-only when `None`.
    pub orientation: Option<UnitQuaternion<f64>>,
}

impl IkTarget {
    pub fn position(p: Vector3<f64>) -> Self {
        IkTarget {
            position: p,
            orientation: None,
        }
    }

    pub fn pose(pose: Isometry3<f64>) -> Self {
        IkTarget {
            position: pose.translation.vector,
            orientation: Some(pose.rotation),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IkSolution {
    pub q: DVector<f64>,
    pub iterations: usize,
    pub position_error: f64,
    pub orientation_error: f64,
}

/// Damped least squares on the pose error of `point`, clamped to joint limits.
pub fn inverse_kinematics(
    model: &ManipulatorModel,
    point: &ContactPoint,
    target: &IkTarget,
    seed: &DVector<f64>,
    opts: &IkOptions,
) -> Result<IkSolution> {
    if seed.len() != model.dof() {
        return Err(Error::domain(format!(
            "seed has {} entries for {} joints",
            seed.len(),
            model.dof()
        )));
    }
    let rows = if target.orientation.is_some() { 6 } else { 3 };
    let lambda2 = opts.damping * opts.damping;
    let mut q = seed.clone();
    model.clamp_to_limits(&mut q);
    let mut pos_err = f64::INFINITY;
    let mut rot_err = 0.0;

    for it in 0..=opts.max_iterations {
        let chain = model.kinematics(&q);
        let pose = chain.point_pose(point);
        let ep = target.position - pose.translation.vector;
        let eo = target
            .orientation
            .map(|r| (r * pose.rotation.inverse()).scaled_axis())
            .unwrap_or_else(Vector3::zeros);
        pos_err = ep.norm();
        rot_err = eo.norm();
        if pos_err < opts.position_tolerance && rot_err < opts.orientation_tolerance {
            return Ok(IkSolution {
                q,
                iterations: it,
                position_error: pos_err,
                orientation_error: rot_err,
            });
        }
        if it == opts.max_iterations {
            break;
        }
        let full = spatial_jacobian_at(model, &chain, point);
        let jac: DMatrix<f64> = full.rows(0, rows).into_owned().resize(rows, model.dof(), 0.0);
        let mut e = DVector::zeros(rows);
        e.rows_mut(0, 3).copy_from(&ep);
        if rows == 6 {
            e.rows_mut(3, 3).copy_from(&eo);
        }
        let mut a = &jac * jac.transpose();
        for i in 0..rows {
            a[(i, i)] += lambda2;
        }
        let y = match a.cholesky() {
            Some(c) => c.solve(&e),
            None => break,
        };
        let mut dq = jac.transpose() * y;
        let biggest = dq.amax();
        if biggest > opts.max_step {
            dq *= opts.max_step / biggest;
        }
        q += dq;
        model.clamp_to_limits(&mut q);
    }
    Err(Error::Unreachable {
        iterations: opts.max_iterations,
        position_error: pos_err.max(if rot_err.is_finite() { 0.0 } else { f64::INFINITY }),
    })
}
