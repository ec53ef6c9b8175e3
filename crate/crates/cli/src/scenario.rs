use pfl_core::{BodyRegion, ContactMode, NominalProfile, SpeedLimit};
use serde::{Deserialize, Serialize};

/// A number, or a keyword resolved at run time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Quantity {
    Value(f64),
    Keyword(String),
}

/// Filter-loop scenario file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FilterScenario {
    pub region: String,
    pub mode: ContactMode,
    /// kg, or "iso".
    #[serde(default = "iso")]
    pub robot_mass: Quantity,
    #[serde(default)]
    pub payload: f64,
    #[serde(default = "one")]
    pub contact_area: f64,
    /// Control period, s.
    #[serde(default = "millisecond")]
    pub period: f64,
    /// s.
    pub duration: f64,
    #[serde(default = "default_gain")]
    pub gain: f64,
    #[serde(default = "yes")]
    pub velocity_filter: bool,
    #[serde(default)]
    pub recycling: bool,
    pub power_cap: Option<f64>,
    /// J, or "k0_max" / "u_s_max" of the selected limit.
    #[serde(default = "k0_max")]
    pub budget: Quantity,
    pub nominal: NominalProfile,
}

fn iso() -> Quantity {
    Quantity::Keyword("iso".into())
}
fn k0_max() -> Quantity {
    Quantity::Keyword("k0_max".into())
}
fn one() -> f64 {
    1.0
}
fn millisecond() -> f64 {
    1e-3
}
fn default_gain() -> f64 {
    50.0
}
fn yes() -> bool {
    true
}

impl FilterScenario {
    pub fn region(&self) -> pfl_core::Result<BodyRegion> {
        self.region.parse()
    }

    pub fn budget(&self, limit: &SpeedLimit) -> pfl_core::Result<f64> {
        match &self.budget {
            Quantity::Value(v) => Ok(*v),
            Quantity::Keyword(k) => match k.as_str() {
                "k0_max" => Ok(limit.k0_max),
                "u_s_max" => Ok(limit.u_s_max),
                other => Err(pfl_core::Error::Schema(format!(
                    "budget must be a number, \"k0_max\" or \"u_s_max\", got \"{other}\""
                ))),
            },
        }
    }
}
