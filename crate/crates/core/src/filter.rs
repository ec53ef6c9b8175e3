//! Runtime velocity clamp and virtual energy tank, with a 1-DoF test plant.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits::SpeedLimit;

/// Tank bookkeeping resolution, J. All ledger arithmetic is integer.
pub const ENERGY_QUANTUM: f64 = 1e-12;

fn to_quanta(e: f64) -> u128 {
    if e <= 0.0 {
        0
    } else {
        (e / ENERGY_QUANTUM).round() as u128
    }
}

/// Rounds down so a draw never exceeds the request.
fn to_quanta_floor(e: f64) -> u128 {
    if e <= 0.0 {
        0
    } else {
        (e / ENERGY_QUANTUM).floor() as u128
    }
}

fn from_quanta(q: u128) -> f64 {
    q as f64 * ENERGY_QUANTUM
}

/// Virtual energy tank. Extraction is gated; with recycling enabled,
/// dissipated energy flows back up to the initial budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TankState {
    energy: u128,
    initial_budget: u128,
    injected: u128,
    recycled: u128,
    pub recycling_enabled: bool,
}

impl TankState {
    pub fn energy(&self) -> f64 {
        from_quanta(self.energy)
    }

    pub fn initial_budget(&self) -> f64 {
        from_quanta(self.initial_budget)
    }

    pub fn cumulative_injected(&self) -> f64 {
        from_quanta(self.injected)
    }

    pub fn cumulative_recycled(&self) -> f64 {
        from_quanta(self.recycled)
    }

    /// Raw ledger in quanta: (energy, budget, injected, recycled).
    pub fn ledger(&self) -> (u128, u128, u128, u128) {
        (self.energy, self.initial_budget, self.injected, self.recycled)
    }

    pub fn with_recycling(mut self, on: bool) -> Self {
        self.recycling_enabled = on;
        self
    }

    /// Grant up to `requested_power` for `dt`. Returns the granted power.
    pub fn step(&mut self, requested_power: f64, dt: f64, power_cap: Option<f64>) -> Result<f64> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::domain(format!("time step must be positive, got {dt}")));
        }
        if requested_power.is_nan() {
            return Err(Error::domain("requested power is NaN"));
        }
        if requested_power <= 0.0 {
            if self.recycling_enabled && requested_power < 0.0 {
                let room = self.initial_budget.saturating_sub(self.energy);
                let back = to_quanta_floor(-requested_power * dt).min(room);
                self.energy += back;
                self.recycled += back;
            }
            return Ok(requested_power);
        }
        let mut p = requested_power;
        if let Some(cap) = power_cap {
            p = p.min(cap.max(0.0));
        }
        let drawn = to_quanta_floor(p * dt).min(self.energy);
        self.energy -= drawn;
        self.injected += drawn;
        Ok(from_quanta(drawn) / dt)
    }
}

pub fn tank_init(budget: f64) -> Result<TankState> {
    if !(budget >= 0.0 && budget.is_finite()) {
        return Err(Error::domain(format!("tank budget must be non-negative, got {budget}")));
    }
    let q = to_quanta(budget);
    Ok(TankState {
        energy: q,
        initial_budget: q,
        injected: 0,
        recycled: 0,
        recycling_enabled: false,
    })
}

/// Functional form of [`TankState::step`].
pub fn tank_step(state: &TankState, requested_power: f64, dt: f64, power_cap: Option<f64>) -> Result<(f64, TankState)> {
    let mut next = *state;
    let granted = next.step(requested_power, dt, power_cap)?;
    Ok((granted, next))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FilterConfig {
    pub speed_limit: SpeedLimit,
    /// Control period, s.
    pub period: f64,
    /// W.
    pub power_cap: Option<f64>,
    /// Clamp nominal commands to the speed limit.
    pub velocity_filter: bool,
    /// Proportional velocity-loop gain, 1/s.
    pub gain: f64,
}

impl FilterConfig {
    pub fn new(speed_limit: SpeedLimit, period: f64) -> Self {
        FilterConfig {
            speed_limit,
            period,
            power_cap: None,
            velocity_filter: true,
            gain: 50.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.period > 0.0 && self.period.is_finite()) {
            return Err(Error::domain(format!(
                "control period must be positive, got {}",
                self.period
            )));
        }
        if !(self.gain > 0.0) {
            return Err(Error::domain("controller gain must be positive"));
        }
        Ok(())
    }
}

/// Minimal-deviation command satisfying |v| ≤ v0_max.
pub fn filter_velocity(nominal: f64, cfg: &FilterConfig) -> f64 {
    let v = cfg.speed_limit.v0_max;
    nominal.clamp(-v, v)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlantState {
    /// Effective mass along the motion, kg.
    pub mass: f64,
    pub velocity: f64,
    pub position: f64,
}

impl PlantState {
    pub fn at_rest(mass: f64) -> Self {
        PlantState {
            mass,
            velocity: 0.0,
            position: 0.0,
        }
    }

    pub fn kinetic_energy(&self) -> f64 {
        0.5 * self.mass * self.velocity * self.velocity
    }
}

/// Nominal velocity command as a function of time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum NominalProfile {
    Constant {
        speed: f64,
    },
    /// Linear ramp from zero, saturating at `speed`.
    Ramp {
        speed: f64,
        rise_time: f64,
    },
    Sine {
        amplitude: f64,
        frequency: f64,
    },
}

impl NominalProfile {
    pub fn at(&self, t: f64) -> f64 {
        match *self {
            NominalProfile::Constant { speed } => speed,
            NominalProfile::Ramp { speed, rise_time } => {
                if rise_time <= 0.0 {
                    speed
                } else {
                    speed * (t / rise_time).min(1.0)
                }
            }
            NominalProfile::Sine { amplitude, frequency } => {
                amplitude * (2.0 * std::f64::consts::PI * frequency * t).sin()
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LoopRow {
    pub t: f64,
    pub v_nominal: f64,
    pub v_commanded: f64,
    /// Plant velocity at `t`.
    pub v: f64,
    pub ke: f64,
    pub tank_energy: f64,
    pub injected_cum: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoopLog {
    pub rows: Vec<LoopRow>,
    pub plant: PlantState,
    pub tank: TankState,
}

impl LoopLog {
    pub fn peak_speed(&self) -> f64 {
        self.rows.iter().map(|r| r.v.abs()).fold(0.0, f64::max)
    }

    pub fn peak_kinetic_energy(&self) -> f64 {
        self.rows.iter().map(|r| r.ke).fold(0.0, f64::max)
    }

    /// Columns `t,v_nominal,v_commanded,v,ke,tank_energy,injected_cum`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "t",
            "v_nominal",
            "v_commanded",
            "v",
            "ke",
            "tank_energy",
            "injected_cum",
        ])?;
        for r in &self.rows {
            w.write_record(
                [
                    r.t,
                    r.v_nominal,
                    r.v_commanded,
                    r.v,
                    r.ke,
                    r.tank_energy,
                    r.injected_cum,
                ]
                .map(|v| v.to_string()),
            )?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Run the filter → P-controller → tank → plant loop for `duration`.
///
/// The actuator changes kinetic energy only through the tank: each step asks
/// for the power that would bring the plant to the controller's target
/// velocity and applies whatever energy is granted.
pub fn simulate_loop(
    plant: PlantState,
    nominal: &NominalProfile,
    cfg: &FilterConfig,
    tank: TankState,
    duration: f64,
) -> Result<LoopLog> {
    cfg.validate()?;
    if !(plant.mass > 0.0) {
        return Err(Error::domain("plant mass must be positive"));
    }
    if !(duration >= 0.0) {
        return Err(Error::domain("duration must be non-negative"));
    }
    let dt = cfg.period;
    let steps = (duration / dt).round() as usize;
    let alpha = (cfg.gain * dt).min(1.0);
    let mut plant = plant;
    let mut tank = tank;
    let mut rows = Vec::with_capacity(steps + 1);
    let command = |t: f64| {
        let v_nom = nominal.at(t);
        let v_cmd = if cfg.velocity_filter {
            filter_velocity(v_nom, cfg)
        } else {
            v_nom
        };
        (v_nom, v_cmd)
    };
    let (v_nom0, v_cmd0) = command(0.0);
    rows.push(LoopRow {
        t: 0.0,
        v_nominal: v_nom0,
        v_commanded: v_cmd0,
        v: plant.velocity,
        ke: plant.kinetic_energy(),
        tank_energy: tank.energy(),
        injected_cum: tank.cumulative_injected(),
    });

    for k in 0..steps {
        let t = k as f64 * dt;
        let (_, v_cmd) = command(t);
        let v = plant.velocity;
        let target = v + alpha * (v_cmd - v);
        let ke = plant.kinetic_energy();
        let ke_target = 0.5 * plant.mass * target * target;

        let reverses = v * target < 0.0;
        let (base, sign) = if reverses {
            tank.step(-ke / dt, dt, cfg.power_cap)?;
            (0.0, target.signum())
        } else {
            (ke, if v != 0.0 { v.signum() } else { target.signum() })
        };
        let new_ke = if ke_target >= base {
            let granted = tank.step((ke_target - base) / dt, dt, cfg.power_cap)?;
            base + granted * dt
        } else {
            tank.step((ke_target - base) / dt, dt, cfg.power_cap)?;
            ke_target
        };
        let new_v = sign * (2.0 * new_ke / plant.mass).sqrt();
        plant.position += 0.5 * (v + new_v) * dt;
        plant.velocity = new_v;

        let t1 = (k + 1) as f64 * dt;
        let (v_nom1, v_cmd1) = command(t1);
        rows.push(LoopRow {
            t: t1,
            v_nominal: v_nom1,
            v_commanded: v_cmd1,
            v: plant.velocity,
            ke: plant.kinetic_energy(),
            tank_energy: tank.energy(),
            injected_cum: tank.cumulative_injected(),
        });
    }
    Ok(LoopLog { rows, plant, tank })
}
