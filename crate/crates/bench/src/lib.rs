//! Shared inputs for the criterion benches.

use nalgebra::{DVector, Isometry3, Translation3, Vector3};
use pfl_core::sweep::{downward_orientation, SweepConfig, WorkspaceBox};
use pfl_core::ManipulatorModel;

/// A reachable, non-singular configuration away from home.
pub fn sample_q(model: &ManipulatorModel) -> DVector<f64> {
    let mut q = model.home.clone();
    for (i, v) in q.iter_mut().enumerate() {
        *v += 0.15 * ((i as f64) * 1.7).sin();
    }
    model.clamp_to_limits(&mut q);
    q
}

pub fn ik_target() -> Isometry3<f64> {
    Isometry3::from_parts(Translation3::new(0.45, 0.15, 0.35), downward_orientation())
}

pub fn unit_direction() -> Vector3<f64> {
    Vector3::new(1.0, 1.0, -0.5).normalize()
}

/// 4 x 4 x 2 grid, 8 directions.
pub fn small_sweep() -> SweepConfig {
    SweepConfig {
        spacing: 0.1,
        workspace: WorkspaceBox {
            min: [0.2, -0.15, 0.3],
            max: [0.5, 0.15, 0.4],
        },
        n_directions: 8,
        ..SweepConfig::default()
    }
}
