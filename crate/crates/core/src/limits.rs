//! From pain thresholds to pre-collision speed and energy limits.
//!
//! At maximum compression the tissue stores `ΔK = ½ μ v0²` (μ the reduced
//! mass). Requiring `ΔK ≤ U_s,max = F²/(2k)` bounds the approach speed. When
//! the body segment is clamped the whole robot energy is transferable and the
//! condition becomes `K0 ≤ U_s,max`.

use serde::Serialize;

use crate::body_data::{BindingCriterion, BodyRegion, BodyRegionTable, ContactMode, DEFAULT_CONTACT_AREA_CM2};
use crate::collision::HumanMass;
use crate::error::{Error, Result};

/// Absolute slack on the admissibility comparison, m/s.
pub const ADMISSIBLE_TOLERANCE: f64 = 1e-12;

fn require_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be positive, got {v}")))
    }
}

/// Largest approach speed whose transferred energy stays within `u_s_max`
/// when the human segment (mass `m_h`) is free to recoil.
pub fn v0_max_free(u_s_max: f64, m_r: f64, m_h: HumanMass) -> Result<f64> {
    require_positive("elastic energy budget", u_s_max)?;
    require_positive("robot mass", m_r)?;
    let m_h = m_h.finite().ok_or(Error::ClampedHumanMass)?;
    require_positive("human mass", m_h)?;
    Ok((2.0 * u_s_max * (m_r + m_h) / (m_r * m_h)).sqrt())
}

/// Largest approach speed when the human segment cannot recoil: `K0 ≤ U_s,max`.
pub fn v0_max_clamped(u_s_max: f64, m_r: f64) -> Result<f64> {
    require_positive("elastic energy budget", u_s_max)?;
    require_positive("robot mass", m_r)?;
    Ok((2.0 * u_s_max / m_r).sqrt())
}

/// Bracket on the free-recoil speed limit from the lighter of the two masses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VelocityBounds {
    /// `F/√(k·min(m_r, m_h))`, never attained for finite masses.
    pub lower: f64,
    /// `√2` times the lower bound, attained when the masses are equal.
    pub upper: f64,
}

impl VelocityBounds {
    /// `lower < v ≤ upper`.
    pub fn contains(&self, v: f64) -> bool {
        self.lower < v && v <= self.upper
    }
}

/// Bounds on [`v0_max_free`] from `1/min < 1/m_r + 1/m_h ≤ 2/min`.
pub fn velocity_bounds(u_s_max: f64, m_r: f64, m_h: f64) -> Result<VelocityBounds> {
    require_positive("elastic energy budget", u_s_max)?;
    require_positive("robot mass", m_r)?;
    require_positive("human mass", m_h)?;
    let lighter = m_r.min(m_h);
    Ok(VelocityBounds {
        lower: (2.0 * u_s_max / lighter).sqrt(),
        upper: (4.0 * u_s_max / lighter).sqrt(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LimitQuery {
    pub region: BodyRegion,
    pub mode: ContactMode,
    /// cm².
    pub contact_area: f64,
    /// Robot effective mass, kg.
    pub robot_mass: f64,
}

impl LimitQuery {
    pub fn new(region: BodyRegion, mode: ContactMode, robot_mass: f64) -> Self {
        LimitQuery {
            region,
            mode,
            contact_area: DEFAULT_CONTACT_AREA_CM2,
            robot_mass,
        }
    }

    pub fn with_area(mut self, contact_area: f64) -> Self {
        self.contact_area = contact_area;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpeedLimit {
    pub region: BodyRegion,
    pub mode: ContactMode,
    pub robot_mass: f64,
    pub contact_area: f64,
    /// Effective force limit, N.
    pub force_limit: f64,
    pub v0_max: f64,
    pub k0_max: f64,
    pub u_s_max: f64,
    pub binding_criterion: BindingCriterion,
}

/// Speed and energy limit for one region, contact mode and robot mass.
///
/// Transient and free quasi-static contact bound the transferred energy
/// (`ΔK ≤ U_s,max`); clamped contact bounds the robot's whole kinetic energy
/// with the quasi-static threshold (`K0 ≤ U_s,max`).
pub fn compute_limit(q: &LimitQuery, table: &BodyRegionTable) -> Result<SpeedLimit> {
    require_positive("robot mass", q.robot_mass)?;
    let params = table.params(q.region)?;
    let (qs_force, binding) = params.governing_force(q.contact_area)?;
    let force_limit = qs_force * params.mode_multiplier(q.mode);
    let u_s_max = force_limit * force_limit / (2.0 * params.stiffness);
    let v0_max = match q.mode {
        ContactMode::Transient | ContactMode::QuasiStaticFree => v0_max_free(u_s_max, q.robot_mass, params.m_h)?,
        ContactMode::QuasiStaticClamped => v0_max_clamped(u_s_max, q.robot_mass)?,
    };
    Ok(SpeedLimit {
        region: q.region,
        mode: q.mode,
        robot_mass: q.robot_mass,
        contact_area: q.contact_area,
        force_limit,
        v0_max,
        k0_max: 0.5 * q.robot_mass * v0_max * v0_max,
        u_s_max,
        binding_criterion: binding,
    })
}

/// `v0 ≤ v0_max`, boundary inclusive.
pub fn is_admissible(v0: f64, limit: &SpeedLimit) -> bool {
    v0 <= limit.v0_max + ADMISSIBLE_TOLERANCE
}
