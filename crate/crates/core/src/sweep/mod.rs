//! Workspace grid sweep of admissible speeds.

mod directions;
mod export;
mod report;
mod run;
mod stats;

pub use directions::direction_set;
pub use export::{boxstats_json, write_samples_csv};
pub use report::{scaling_report, ScalingReport, ScalingRow, WORST_CASE_REGION};
pub use run::{
    downward_orientation, run_sweep, run_sweep_with_progress, Distribution, MassSource, PointRecord, SweepConfig,
    SweepMeta, SweepResult, Variant, WorkspaceBox, SINGULAR_MANIPULABILITY,
};
pub use stats::{quantile_sorted, BoxStats};
