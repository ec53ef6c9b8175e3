//! Two-mass/spring impact model.
//!
//! The robot (effective mass `m_r`) hits an initially resting human body
//! segment (effective mass `m_h`) through a linear spring of stiffness `k`
//! that represents tissue deformation. Closed forms give the state at maximum
//! compression; [`simulate`] integrates the same model with fixed-step RK4 so
//! the closed forms can be cross-checked and post-peak behaviour varied.

use std::f64::consts::PI;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Effective mass of the impacted body segment.
///
/// `Clamped` encodes a segment that cannot recoil (pinned against the
/// environment). It is never turned into a float infinity; every formula
/// that depends on it has an explicit clamped branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HumanMass {
    Finite(f64),
    Clamped,
}

impl HumanMass {
    pub fn finite(self) -> Option<f64> {
        match self {
            HumanMass::Finite(m) => Some(m),
            HumanMass::Clamped => None,
        }
    }

    pub fn is_clamped(self) -> bool {
        matches!(self, HumanMass::Clamped)
    }

    /// Reduced mass `m_r m_h / (m_r + m_h)`; equals `m_r` when clamped.
    pub fn reduced_with(self, robot_mass: f64) -> f64 {
        match self {
            HumanMass::Finite(m_h) => robot_mass * m_h / (robot_mass + m_h),
            HumanMass::Clamped => robot_mass,
        }
    }
}

impl fmt::Display for HumanMass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HumanMass::Finite(m) => write!(f, "{m}"),
            HumanMass::Clamped => f.write_str("inf"),
        }
    }
}

impl FromStr for HumanMass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") {
            return Ok(HumanMass::Clamped);
        }
        let m: f64 = t
            .parse()
            .map_err(|_| Error::domain(format!("cannot parse human mass '{t}'")))?;
        if !m.is_finite() || m <= 0.0 {
            return Err(Error::domain(format!("human mass must be positive or 'inf', got {t}")));
        }
        Ok(HumanMass::Finite(m))
    }
}

impl Serialize for HumanMass {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            HumanMass::Finite(m) => serializer.serialize_f64(*m),
            HumanMass::Clamped => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for HumanMass {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Num(m) if m.is_finite() && m > 0.0 => Ok(HumanMass::Finite(m)),
            Raw::Num(m) => Err(serde::de::Error::custom(format!("invalid human mass {m}"))),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CollisionScenario {
    /// Robot effective mass, kg.
    pub robot_mass: f64,
    pub human_mass: HumanMass,
    /// Tissue stiffness, N/m.
    pub stiffness: f64,
    /// Relative approach speed, m/s.
    pub approach_speed: f64,
}

impl CollisionScenario {
    pub fn new(robot_mass: f64, human_mass: HumanMass, stiffness: f64, approach_speed: f64) -> Result<Self> {
        let s = CollisionScenario {
            robot_mass,
            human_mass,
            stiffness,
            approach_speed,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.robot_mass.is_finite() && self.robot_mass > 0.0) {
            return Err(Error::domain(format!(
                "robot mass must be positive, got {}",
                self.robot_mass
            )));
        }
        if let HumanMass::Finite(m) = self.human_mass {
            if !(m.is_finite() && m > 0.0) {
                return Err(Error::domain(format!("human mass must be positive, got {m}")));
            }
        }
        if !(self.stiffness.is_finite() && self.stiffness > 0.0) {
            return Err(Error::domain(format!(
                "stiffness must be positive, got {}",
                self.stiffness
            )));
        }
        if !(self.approach_speed.is_finite() && self.approach_speed >= 0.0) {
            return Err(Error::domain(format!(
                "approach speed must be non-negative, got {}",
                self.approach_speed
            )));
        }
        Ok(())
    }

    pub fn reduced_mass(&self) -> f64 {
        self.human_mass.reduced_with(self.robot_mass)
    }

    /// Kinetic energy of the robot before contact, J.
    pub fn initial_energy(&self) -> f64 {
        0.5 * self.robot_mass * self.approach_speed * self.approach_speed
    }

    /// Period of the relative oscillation while the spring is engaged.
    pub fn natural_period(&self) -> f64 {
        2.0 * PI * (self.reduced_mass() / self.stiffness).sqrt()
    }
}

/// Velocity shared by both masses at maximum compression (momentum conservation).
pub fn common_velocity(s: &CollisionScenario) -> f64 {
    match s.human_mass {
        HumanMass::Finite(m_h) => s.robot_mass * s.approach_speed / (s.robot_mass + m_h),
        HumanMass::Clamped => 0.0,
    }
}

/// Kinetic energy lost by the system between first contact and maximum
/// compression, i.e. the energy stored in the spring at its peak.
pub fn energy_transfer(s: &CollisionScenario) -> f64 {
    0.5 * s.reduced_mass() * s.approach_speed * s.approach_speed
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PeakContact {
    /// Maximum spring compression, m.
    pub compression: f64,
    /// Spring force at maximum compression, N.
    pub force: f64,
    /// Time from first contact to maximum compression, s. Zero when degenerate.
    pub time: f64,
    /// Set when there is no impact (`v0 = 0`) and the peak time is undefined.
    pub degenerate: bool,
}

/// Closed-form state at maximum compression. The relative motion is a
/// harmonic oscillation with reduced mass `mu`, so the peak is reached a
/// quarter period after contact.
pub fn peak_contact_state(s: &CollisionScenario) -> PeakContact {
    let ratio = (s.reduced_mass() / s.stiffness).sqrt();
    let compression = s.approach_speed * ratio;
    let degenerate = s.approach_speed == 0.0;
    PeakContact {
        compression,
        force: s.stiffness * compression,
        time: if degenerate { 0.0 } else { 0.5 * PI * ratio },
        degenerate,
    }
}

/// Behaviour of the contact after maximum compression.
///
/// None of these alter anything up to the peak, which is what the safety
/// condition depends on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PostPeak {
    /// Compression-only spring: elastic unloading, then the bodies separate
    /// and move ballistically once the compression returns to zero.
    #[default]
    Release,
    /// Spring stays attached and can carry tension; the bodies keep oscillating.
    Attached,
    /// Fully plastic: the bodies lock together at maximum compression.
    Stick,
}

impl FromStr for PostPeak {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "release" => Ok(PostPeak::Release),
            "attached" => Ok(PostPeak::Attached),
            "stick" => Ok(PostPeak::Stick),
            other => Err(Error::domain(format!(
                "unknown post-peak behaviour '{other}' (expected release, attached or stick)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectorySample {
    pub t: f64,
    pub v_r: f64,
    pub v_h: f64,
    /// Compression `x_r - x_h`, m. Negative once the bodies have separated.
    pub dx: f64,
    /// Whether the spring carries load at this sample.
    #[serde(skip)]
    pub engaged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CollisionTrajectory {
    pub dt: f64,
    pub samples: Vec<TrajectorySample>,
}

impl CollisionTrajectory {
    /// Kinetic plus stored elastic energy at sample `i`.
    pub fn mechanical_energy(&self, s: &CollisionScenario, i: usize) -> f64 {
        let p = &self.samples[i];
        let kinetic_h = match s.human_mass {
            HumanMass::Finite(m_h) => 0.5 * m_h * p.v_h * p.v_h,
            HumanMass::Clamped => 0.0,
        };
        let elastic = if p.engaged {
            0.5 * s.stiffness * p.dx * p.dx
        } else {
            0.0
        };
        0.5 * s.robot_mass * p.v_r * p.v_r + kinetic_h + elastic
    }

    /// Writes the `t,v_r,v_h,dx` CSV.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["t", "v_r", "v_h", "dx"])?;
        for p in &self.samples {
            w.write_record([
                format!("{:.9}", p.t),
                format!("{:.12e}", p.v_r),
                format!("{:.12e}", p.v_h),
                format!("{:.12e}", p.dx),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CollisionOutcome {
    pub v_star: f64,
    pub t_star: f64,
    pub dx_max: f64,
    pub f_peak: f64,
    pub delta_k: f64,
    pub k0: f64,
    pub k_star: f64,
    pub degenerate: bool,
}

impl CollisionOutcome {
    /// Closed-form outcome, used as the reference for the integrator.
    pub fn analytic(s: &CollisionScenario) -> Self {
        let peak = peak_contact_state(s);
        let k0 = s.initial_energy();
        let delta_k = energy_transfer(s);
        CollisionOutcome {
            v_star: common_velocity(s),
            t_star: peak.time,
            dx_max: peak.compression,
            f_peak: peak.force,
            delta_k,
            k0,
            k_star: k0 - delta_k,
            degenerate: peak.degenerate,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimOptions {
    /// Step size, s. Defaults to a thousandth of the natural period.
    pub dt: Option<f64>,
    /// Simulated duration, s. Defaults to one natural period.
    pub horizon: Option<f64>,
    pub post_peak: PostPeak,
}

impl Default for SimOptions {
    fn default() -> Self {
        SimOptions {
            dt: None,
            horizon: None,
            post_peak: PostPeak::Release,
        }
    }
}

/// Integrates the impact with explicit step size and horizon.
pub fn simulate(s: &CollisionScenario, dt: f64, horizon: f64) -> Result<(CollisionTrajectory, CollisionOutcome)> {
    simulate_with(
        s,
        &SimOptions {
            dt: Some(dt),
            horizon: Some(horizon),
            post_peak: PostPeak::Release,
        },
    )
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Phase {
    Loading,
    Unloading,
    Separated,
    Locked,
}

#[derive(Debug, Clone, Copy)]
struct State {
    dx: f64,
    v_r: f64,
    v_h: f64,
}

struct Dynamics {
    m_r: f64,
    m_h: Option<f64>,
    k: f64,
}

impl Dynamics {
    fn deriv(&self, s: State, phase: Phase, post: PostPeak) -> State {
        let force = match phase {
            Phase::Loading | Phase::Unloading => match post {
                // Compression-only: the spring never pulls.
                PostPeak::Release if phase == Phase::Unloading => self.k * s.dx.max(0.0),
                _ => self.k * s.dx,
            },
            Phase::Separated | Phase::Locked => 0.0,
        };
        if phase == Phase::Locked {
            return State {
                dx: 0.0,
                v_r: 0.0,
                v_h: 0.0,
            };
        }
        State {
            dx: s.v_r - s.v_h,
            v_r: -force / self.m_r,
            v_h: self.m_h.map_or(0.0, |m| force / m),
        }
    }

    fn rk4(&self, s: State, h: f64, phase: Phase, post: PostPeak) -> State {
        let add = |a: State, b: State, c: f64| State {
            dx: a.dx + c * b.dx,
            v_r: a.v_r + c * b.v_r,
            v_h: a.v_h + c * b.v_h,
        };
        let k1 = self.deriv(s, phase, post);
        let k2 = self.deriv(add(s, k1, h / 2.0), phase, post);
        let k3 = self.deriv(add(s, k2, h / 2.0), phase, post);
        let k4 = self.deriv(add(s, k3, h), phase, post);
        State {
            dx: s.dx + h / 6.0 * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx),
            v_r: s.v_r + h / 6.0 * (k1.v_r + 2.0 * k2.v_r + 2.0 * k3.v_r + k4.v_r),
            v_h: s.v_h + h / 6.0 * (k1.v_h + 2.0 * k2.v_h + 2.0 * k3.v_h + k4.v_h),
        }
    }

    /// Finds the fraction of a step at which `g` changes sign, by bisection
    /// over single RK4 sub-steps from the step start.
    fn locate(&self, s: State, h: f64, phase: Phase, post: PostPeak, g: impl Fn(State) -> f64) -> (f64, State) {
        let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
        let g0 = g(s);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            let sm = self.rk4(s, mid * h, phase, post);
            if (g(sm) > 0.0) == (g0 > 0.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (hi, self.rk4(s, hi * h, phase, post))
    }
}

/// Integrates the impact with fixed-step RK4.
///
/// Maximum compression is located as the zero crossing of the relative
/// velocity inside the step where it occurs, and the outcome is read from
/// the integrated state there. The release of a compression-only spring is
/// located the same way, so the switch to ballistic motion happens exactly
/// at zero compression.
pub fn simulate_with(s: &CollisionScenario, opts: &SimOptions) -> Result<(CollisionTrajectory, CollisionOutcome)> {
    s.validate()?;
    let period = s.natural_period();
    let dt = opts.dt.unwrap_or(period / 1000.0);
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::domain(format!("step size must be positive, got {dt}")));
    }
    if dt >= period / 10.0 {
        return Err(Error::StepTooLarge { dt, period });
    }
    let horizon = opts.horizon.unwrap_or(period);
    let analytic = CollisionOutcome::analytic(s);
    if !(horizon.is_finite() && horizon >= analytic.t_star) {
        return Err(Error::domain(format!(
            "horizon {horizon} s ends before maximum compression at {} s",
            analytic.t_star
        )));
    }

    let dynamics = Dynamics {
        m_r: s.robot_mass,
        m_h: s.human_mass.finite(),
        k: s.stiffness,
    };
    let post = opts.post_peak;
    let k0 = s.initial_energy();
    let steps = (horizon / dt).round() as usize;
    let mut samples = Vec::with_capacity(steps + 1);

    let mut state = State {
        dx: 0.0,
        v_r: s.approach_speed,
        v_h: 0.0,
    };
    let mut phase = Phase::Loading;
    let record = |t: f64, st: State, ph: Phase| TrajectorySample {
        t,
        v_r: st.v_r,
        v_h: st.v_h,
        dx: st.dx,
        engaged: matches!(ph, Phase::Loading | Phase::Unloading | Phase::Locked),
    };
    samples.push(record(0.0, state, phase));

    if s.approach_speed == 0.0 {
        for i in 1..=steps {
            samples.push(record(i as f64 * dt, state, phase));
        }
        let outcome = CollisionOutcome {
            v_star: 0.0,
            t_star: 0.0,
            dx_max: 0.0,
            f_peak: 0.0,
            delta_k: 0.0,
            k0: 0.0,
            k_star: 0.0,
            degenerate: true,
        };
        return Ok((CollisionTrajectory { dt, samples }, outcome));
    }

    let relative = |st: State| st.v_r - st.v_h;
    let mut peak: Option<(f64, State)> = None;

    for i in 0..steps {
        let t0 = i as f64 * dt;
        let mut remaining = dt;
        let mut t = t0;
        let mut cur = state;
        // At most two events (peak, release) can fall inside one step.
        for _ in 0..3 {
            let next = dynamics.rk4(cur, remaining, phase, post);
            match phase {
                Phase::Loading if relative(next) <= 0.0 => {
                    let (frac, at_peak) = dynamics.locate(cur, remaining, phase, post, relative);
                    t += frac * remaining;
                    remaining -= frac * remaining;
                    peak = Some((t, at_peak));
                    cur = at_peak;
                    phase = match post {
                        PostPeak::Stick => {
                            let m_h = dynamics.m_h.unwrap_or(f64::INFINITY);
                            let v = if m_h.is_finite() {
                                (dynamics.m_r * cur.v_r + m_h * cur.v_h) / (dynamics.m_r + m_h)
                            } else {
                                0.0
                            };
                            cur.v_r = v;
                            cur.v_h = if dynamics.m_h.is_some() { v } else { 0.0 };
                            Phase::Locked
                        }
                        _ => Phase::Unloading,
                    };
                }
                Phase::Unloading if post == PostPeak::Release && next.dx <= 0.0 => {
                    let (frac, at_release) = dynamics.locate(cur, remaining, phase, post, |st| st.dx);
                    t += frac * remaining;
                    remaining -= frac * remaining;
                    cur = at_release;
                    cur.dx = 0.0;
                    phase = Phase::Separated;
                }
                _ => {
                    cur = next;
                    remaining = 0.0;
                }
            }
            if remaining <= 0.0 {
                break;
            }
        }
        if remaining > 0.0 {
            cur = dynamics.rk4(cur, remaining, phase, post);
        }
        let _ = t;
        state = cur;
        samples.push(record((i + 1) as f64 * dt, state, phase));
    }

    let (t_star, at_peak) =
        peak.ok_or_else(|| Error::domain(format!("maximum compression not reached within horizon {horizon} s")))?;
    let kinetic_h = dynamics.m_h.map_or(0.0, |m| 0.5 * m * at_peak.v_h * at_peak.v_h);
    let k_star = 0.5 * dynamics.m_r * at_peak.v_r * at_peak.v_r + kinetic_h;
    let outcome = CollisionOutcome {
        v_star: 0.5 * (at_peak.v_r + at_peak.v_h),
        t_star,
        dx_max: at_peak.dx,
        f_peak: s.stiffness * at_peak.dx,
        delta_k: k0 - k_star,
        k0,
        k_star,
        degenerate: false,
    };
    Ok((CollisionTrajectory { dt, samples }, outcome))
}
