#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN
//! Power-and-force-limiting analysis: body-region thresholds, impact
//! mechanics, admissible speeds, reflected mass of serial arms, workspace
//! sweeps and a runtime velocity/energy filter.

pub mod body_data;
pub mod collision;
pub mod dynamics;
pub mod error;
pub mod filter;
pub mod limits;
pub mod sweep;

pub use body_data::{
    elastic_energy, BindingCriterion, BodyRegion, BodyRegionParams, BodyRegionTable, ContactMode,
    DEFAULT_CONTACT_AREA_CM2,
};
pub use collision::{
    common_velocity, energy_transfer, peak_contact_state, simulate, simulate_with, CollisionOutcome, CollisionScenario,
    CollisionTrajectory, HumanMass, PeakContact, PostPeak, SimOptions, TrajectorySample,
};
pub use dynamics::{
    inverse_kinematics, iso_effective_mass, mass_matrix, point_jacobian, reflected_mass, ContactPoint, IkOptions,
    IkTarget, ManipulatorModel, ReflectedMassQuery,
};
pub use error::{Error, ErrorKind, Result};
pub use filter::{
    filter_velocity, simulate_loop, tank_init, tank_step, FilterConfig, LoopLog, NominalProfile, PlantState, TankState,
};
pub use limits::{
    compute_limit, is_admissible, v0_max_clamped, v0_max_free, velocity_bounds, LimitQuery, SpeedLimit, VelocityBounds,
};
pub use sweep::{run_sweep, scaling_report, MassSource, ScalingReport, SweepConfig, SweepResult, Variant};
