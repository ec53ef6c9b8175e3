use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};

use nalgebra::{DVector, UnitQuaternion, Vector3};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::directions::direction_set;
use super::stats::BoxStats;
use crate::body_data::{BodyRegion, BodyRegionTable, ContactMode, DEFAULT_CONTACT_AREA_CM2};
use crate::dynamics::{
    directional_mass, inverse_cartesian_inertia_at, inverse_kinematics, iso_effective_mass, manipulability,
    point_jacobian_at, IkOptions, IkTarget, ManipulatorModel,
};
use crate::error::{Error, Result};
use crate::limits::{compute_limit, LimitQuery};

/// Points whose translational manipulability falls below this are flagged.
pub const SINGULAR_MANIPULABILITY: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MassSource {
    /// Configuration- and direction-dependent reflected mass.
    Directional,
    /// Half the moving mass plus payload.
    Constant,
}

impl MassSource {
    pub fn id(self) -> &'static str {
        match self {
            MassSource::Directional => "directional",
            MassSource::Constant => "constant",
        }
    }
}

impl fmt::Display for MassSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for MassSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "directional" | "reflected" => Ok(MassSource::Directional),
            "constant" | "iso" => Ok(MassSource::Constant),
            other => Err(Error::domain(format!("unknown mass source '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Variant {
    pub mode: ContactMode,
    #[serde(rename = "mass")]
    pub mass_source: MassSource,
}

impl Variant {
    pub const fn new(mode: ContactMode, mass_source: MassSource) -> Self {
        Variant { mode, mass_source }
    }

    pub const BASELINE: Variant = Variant::new(ContactMode::Transient, MassSource::Directional);

    /// Every mode with both mass sources.
    pub fn all() -> Vec<Variant> {
        ContactMode::ALL
            .iter()
            .flat_map(|&m| {
                [
                    Variant::new(m, MassSource::Directional),
                    Variant::new(m, MassSource::Constant),
                ]
            })
            .collect()
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.mode, self.mass_source)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorkspaceBox {
    pub min: [f64; 3],
    pub max: [f64; 3],
}

impl Default for WorkspaceBox {
    fn default() -> Self {
        WorkspaceBox {
            min: [-0.8, -0.8, 0.05],
            max: [0.8, 0.8, 1.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    /// Grid spacing, m.
    pub spacing: f64,
    pub workspace: WorkspaceBox,
    pub n_directions: usize,
    pub variants: Vec<Variant>,
    /// cm².
    pub contact_area: f64,
    /// Added to the constant effective mass, kg.
    pub payload: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            spacing: 0.05,
            workspace: WorkspaceBox::default(),
            n_directions: 20,
            variants: Variant::all(),
            contact_area: DEFAULT_CONTACT_AREA_CM2,
            payload: 0.0,
        }
    }
}

impl SweepConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: SweepConfig = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.spacing > 0.0 && self.spacing.is_finite()) {
            return Err(Error::Sweep(format!(
                "grid spacing must be positive, got {}",
                self.spacing
            )));
        }
        for a in 0..3 {
            let (lo, hi) = (self.workspace.min[a], self.workspace.max[a]);
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(Error::Sweep(format!("workspace box axis {a}: min {lo} > max {hi}")));
            }
        }
        if self.n_directions == 0 {
            return Err(Error::Sweep("n_directions must be at least 1".into()));
        }
        if self.variants.is_empty() {
            return Err(Error::Sweep("no variants requested".into()));
        }
        if !(self.contact_area > 0.0) {
            return Err(Error::Sweep("contact area must be positive".into()));
        }
        if !(self.payload >= 0.0) {
            return Err(Error::Sweep("payload must be non-negative".into()));
        }
        Ok(())
    }

    /// Coordinates along each axis; the upper bound is included when it
    /// falls on the grid.
    pub fn axes(&self) -> [Vec<f64>; 3] {
        let axis = |a: usize| {
            let (lo, hi) = (self.workspace.min[a], self.workspace.max[a]);
            let n = ((hi - lo) / self.spacing + 1e-9).floor() as usize + 1;
            (0..n).map(|i| lo + i as f64 * self.spacing).collect::<Vec<_>>()
        };
        [axis(0), axis(1), axis(2)]
    }

    pub fn grid_len(&self) -> usize {
        self.axes().iter().map(Vec::len).product()
    }
}

/// Flange pointing down with its x axis along world x.
pub fn downward_orientation() -> UnitQuaternion<f64> {
    UnitQuaternion::from_axis_angle(&Vector3::x_axis(), std::f64::consts::PI)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointRecord {
    /// Grid index (ix, iy, iz).
    pub index: [usize; 3],
    pub position: [f64; 3],
    pub q: Vec<f64>,
    pub manipulability: f64,
    pub singular: bool,
    /// Reflected mass per direction, kg; `None` for a locked direction.
    pub masses: Vec<Option<f64>>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SweepMeta {
    pub grid_points: usize,
    pub reachable: usize,
    pub unreachable: usize,
    pub singular: usize,
    /// Directions skipped because the contact point cannot move along them.
    pub constrained_samples: usize,
    pub n_directions: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Distribution {
    pub region: BodyRegion,
    pub variant: Variant,
    /// v0,max samples, m/s, in grid order then direction order.
    pub samples: Vec<f64>,
    pub stats: BoxStats,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub config: SweepConfig,
    /// Constant effective mass used for `MassSource::Constant`, kg.
    pub constant_mass: f64,
    pub meta: SweepMeta,
    pub points: Vec<PointRecord>,
    /// Summary of all directional masses, kg.
    pub mass_stats: BoxStats,
    pub distributions: Vec<Distribution>,
}

impl SweepResult {
    pub fn distribution(&self, region: BodyRegion, variant: Variant) -> Option<&Distribution> {
        self.distributions
            .iter()
            .find(|d| d.region == region && d.variant == variant)
    }

    pub fn mean(&self, region: BodyRegion, variant: Variant) -> Option<f64> {
        self.distribution(region, variant).map(|d| d.stats.mean)
    }

    /// Directional mass samples in grid order.
    pub fn mass_samples(&self) -> Vec<f64> {
        self.points
            .iter()
            .flat_map(|p| p.masses.iter().flatten().copied())
            .collect()
    }
}

pub fn run_sweep(model: &ManipulatorModel, table: &BodyRegionTable, config: &SweepConfig) -> Result<SweepResult> {
    run_sweep_with_progress(model, table, config, &|_, _| {})
}

/// As [`run_sweep`]; `progress(done_rows, total_rows)` is called from worker
/// threads as grid rows complete.
pub fn run_sweep_with_progress(
    model: &ManipulatorModel,
    table: &BodyRegionTable,
    config: &SweepConfig,
    progress: &(dyn Fn(usize, usize) + Sync),
) -> Result<SweepResult> {
    config.validate()?;
    let directions = direction_set(config.n_directions)?;
    let [xs, ys, zs] = config.axes();
    let rows: Vec<(usize, usize)> = (0..zs.len())
        .flat_map(|iz| (0..ys.len()).map(move |iy| (iy, iz)))
        .collect();
    let done = AtomicUsize::new(0);
    let orientation = downward_orientation();
    let opts = IkOptions::default();

    // Each row along x is warm-started from home, then from its predecessor.
    let per_row: Vec<(Vec<PointRecord>, usize)> = rows
        .par_iter()
        .map(|&(iy, iz)| {
            let mut out = Vec::with_capacity(xs.len());
            let mut unreachable = 0;
            let mut seed = model.home.clone();
            for (ix, &x) in xs.iter().enumerate() {
                let target = IkTarget {
                    position: Vector3::new(x, ys[iy], zs[iz]),
                    orientation: Some(orientation),
                };
                let solved = inverse_kinematics(model, &model.flange, &target, &seed, &opts)
                    .or_else(|_| inverse_kinematics(model, &model.flange, &target, &model.home, &opts));
                let sol = match solved {
                    Ok(s) => s,
                    Err(_) => {
                        unreachable += 1;
                        continue;
                    }
                };
                out.push(evaluate_point(
                    model,
                    &sol.q,
                    [ix, iy, iz],
                    target.position,
                    &directions,
                ));
                seed = sol.q;
            }
            let n = done.fetch_add(1, Ordering::Relaxed) + 1;
            progress(n, rows.len());
            (out, unreachable)
        })
        .collect();

    let mut meta = SweepMeta {
        grid_points: xs.len() * ys.len() * zs.len(),
        n_directions: directions.len(),
        ..SweepMeta::default()
    };
    let mut points = Vec::new();
    for (row, unreachable) in per_row {
        meta.unreachable += unreachable;
        points.extend(row);
    }
    meta.reachable = points.len();
    meta.singular = points.iter().filter(|p| p.singular).count();
    meta.constrained_samples = points
        .iter()
        .map(|p| p.masses.iter().filter(|m| m.is_none()).count())
        .sum();
    if points.is_empty() {
        return Err(Error::Sweep("no reachable grid points in the workspace box".into()));
    }

    let masses: Vec<f64> = points.iter().flat_map(|p| p.masses.iter().flatten().copied()).collect();
    let mass_stats = BoxStats::from_samples(&masses)
        .ok_or_else(|| Error::Sweep("every sampled direction is kinematically locked".into()))?;
    let constant_mass = iso_effective_mass(model, config.payload)?;

    let mut distributions = Vec::new();
    for &region in BodyRegion::ALL.iter() {
        for &variant in &config.variants {
            let speed = |m: f64| {
                compute_limit(
                    &LimitQuery::new(region, variant.mode, m).with_area(config.contact_area),
                    table,
                )
                .map(|l| l.v0_max)
            };
            let samples = match variant.mass_source {
                MassSource::Directional => masses.iter().map(|&m| speed(m)).collect::<Result<Vec<_>>>()?,
                MassSource::Constant => vec![speed(constant_mass)?],
            };
            let stats = BoxStats::from_samples(&samples).expect("non-empty sample");
            distributions.push(Distribution {
                region,
                variant,
                samples,
                stats,
            });
        }
    }

    Ok(SweepResult {
        config: config.clone(),
        constant_mass,
        meta,
        points,
        mass_stats,
        distributions,
    })
}

fn evaluate_point(
    model: &ManipulatorModel,
    q: &DVector<f64>,
    index: [usize; 3],
    position: Vector3<f64>,
    directions: &[Vector3<f64>],
) -> PointRecord {
    let chain = model.kinematics(q);
    let jv = point_jacobian_at(model, &chain, &model.flange);
    let w = manipulability(&jv);
    let masses = match inverse_cartesian_inertia_at(model, &chain, &model.flange) {
        Ok(li) => directions.iter().map(|u| directional_mass(&li, u).ok()).collect(),
        Err(_) => vec![None; directions.len()],
    };
    PointRecord {
        index,
        position: position.into(),
        q: q.iter().copied().collect(),
        manipulability: w,
        singular: w < SINGULAR_MANIPULABILITY,
        masses,
    }
}
