//! Per-body-region biomechanical thresholds and the force/energy budgets
//! derived from them.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Read;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::collision::HumanMass;
use crate::error::{Error, Result};

/// Contact area assumed by the tabulated force limits, cm².
pub const DEFAULT_CONTACT_AREA_CM2: f64 = 1.0;

const REFERENCE_TABLE: &str = include_str!("../data/body_regions_iso_ts_15066.csv");

const HEADER: [&str; 6] = [
    "region",
    "f_max_qs_N",
    "p_max_qs_N_per_cm2",
    "k_N_per_mm",
    "m_h_kg",
    "transient_mult",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BodyRegion {
    SkullForehead,
    Face,
    Neck,
    BackShoulders,
    Chest,
    Abdomen,
    Pelvis,
    UpperArmsElbows,
    LowerArmsWrists,
    HandsFingers,
    ThighsKnees,
    LowerLegs,
}

impl BodyRegion {
    pub const ALL: [BodyRegion; 12] = [
        BodyRegion::SkullForehead,
        BodyRegion::Face,
        BodyRegion::Neck,
        BodyRegion::BackShoulders,
        BodyRegion::Chest,
        BodyRegion::Abdomen,
        BodyRegion::Pelvis,
        BodyRegion::UpperArmsElbows,
        BodyRegion::LowerArmsWrists,
        BodyRegion::HandsFingers,
        BodyRegion::ThighsKnees,
        BodyRegion::LowerLegs,
    ];

    /// Machine identifier used in files and on the command line.
    pub fn id(self) -> &'static str {
        match self {
            BodyRegion::SkullForehead => "skull_forehead",
            BodyRegion::Face => "face",
            BodyRegion::Neck => "neck",
            BodyRegion::BackShoulders => "back_shoulders",
            BodyRegion::Chest => "chest",
            BodyRegion::Abdomen => "abdomen",
            BodyRegion::Pelvis => "pelvis",
            BodyRegion::UpperArmsElbows => "upper_arms_elbows",
            BodyRegion::LowerArmsWrists => "lower_arms_wrists",
            BodyRegion::HandsFingers => "hands_fingers",
            BodyRegion::ThighsKnees => "thighs_knees",
            BodyRegion::LowerLegs => "lower_legs",
        }
    }

    pub fn display_name(self) -> &'static str {
        match self {
            BodyRegion::SkullForehead => "Skull/Forehead",
            BodyRegion::Face => "Face",
            BodyRegion::Neck => "Neck",
            BodyRegion::BackShoulders => "Back/Shoulders",
            BodyRegion::Chest => "Chest",
            BodyRegion::Abdomen => "Abdomen",
            BodyRegion::Pelvis => "Pelvis",
            BodyRegion::UpperArmsElbows => "Upper arms/elbows",
            BodyRegion::LowerArmsWrists => "Lower arms/wrists",
            BodyRegion::HandsFingers => "Hands/fingers",
            BodyRegion::ThighsKnees => "Thighs/knees",
            BodyRegion::LowerLegs => "Lower legs",
        }
    }

    pub fn valid_names() -> String {
        BodyRegion::ALL.iter().map(|r| r.id()).collect::<Vec<_>>().join(", ")
    }
}

impl fmt::Display for BodyRegion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for BodyRegion {
    type Err = Error;

    /// Accepts the identifier or the display name, case-insensitively.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        BodyRegion::ALL
            .into_iter()
            .find(|r| r.id().eq_ignore_ascii_case(t) || r.display_name().eq_ignore_ascii_case(t))
            .ok_or_else(|| Error::UnknownRegion {
                given: t.to_string(),
                valid: BodyRegion::valid_names(),
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContactMode {
    /// Brief impact phase; thresholds scaled by the region's transient multiplier.
    Transient,
    /// Sustained contact where the body segment can recoil.
    QuasiStaticFree,
    /// Sustained contact with the body segment pinned against the environment.
    QuasiStaticClamped,
}

impl ContactMode {
    pub const ALL: [ContactMode; 3] = [
        ContactMode::Transient,
        ContactMode::QuasiStaticFree,
        ContactMode::QuasiStaticClamped,
    ];

    pub fn id(self) -> &'static str {
        match self {
            ContactMode::Transient => "transient",
            ContactMode::QuasiStaticFree => "quasi_static_free",
            ContactMode::QuasiStaticClamped => "quasi_static_clamped",
        }
    }

    pub fn short_label(self) -> &'static str {
        match self {
            ContactMode::Transient => "T",
            ContactMode::QuasiStaticFree => "QS",
            ContactMode::QuasiStaticClamped => "QS-clamped",
        }
    }
}

impl fmt::Display for ContactMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for ContactMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "transient" | "t" => Ok(ContactMode::Transient),
            "quasi_static_free" | "qs_free" | "free" | "qs" => Ok(ContactMode::QuasiStaticFree),
            "quasi_static_clamped" | "qs_clamped" | "clamped" => Ok(ContactMode::QuasiStaticClamped),
            other => Err(Error::domain(format!(
                "unknown contact mode '{other}' (expected transient, quasi_static_free or quasi_static_clamped)"
            ))),
        }
    }
}

/// Which threshold produced the effective force limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BindingCriterion {
    Force,
    Pressure,
}

impl fmt::Display for BindingCriterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BindingCriterion::Force => "force",
            BindingCriterion::Pressure => "pressure",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BodyRegionParams {
    pub region: BodyRegion,
    /// Quasi-static force limit, N.
    pub f_max_qs: f64,
    /// Quasi-static pressure limit, N/cm².
    pub p_max_qs: f64,
    /// Tissue stiffness, N/m.
    pub stiffness: f64,
    pub m_h: HumanMass,
    pub transient_multiplier: f64,
}

impl BodyRegionParams {
    pub fn new(
        region: BodyRegion,
        f_max_qs: f64,
        p_max_qs: f64,
        stiffness: f64,
        m_h: HumanMass,
        transient_multiplier: f64,
    ) -> Result<Self> {
        let p = BodyRegionParams {
            region,
            f_max_qs,
            p_max_qs,
            stiffness,
            m_h,
            transient_multiplier,
        };
        p.check().map_err(|(column, message)| Error::InvalidValue {
            row: 0,
            column: column.to_string(),
            message,
        })?;
        Ok(p)
    }

    fn check(&self) -> std::result::Result<(), (&'static str, String)> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(self.f_max_qs) {
            return Err((
                HEADER[1],
                format!("force limit must be positive, got {}", self.f_max_qs),
            ));
        }
        if !positive(self.p_max_qs) {
            return Err((
                HEADER[2],
                format!("pressure limit must be positive, got {}", self.p_max_qs),
            ));
        }
        if !positive(self.stiffness) {
            return Err((HEADER[3], format!("stiffness must be positive, got {}", self.stiffness)));
        }
        if let HumanMass::Finite(m) = self.m_h {
            if !positive(m) {
                return Err((HEADER[4], format!("effective mass must be positive or inf, got {m}")));
            }
        }
        if !(self.transient_multiplier.is_finite() && self.transient_multiplier >= 1.0) {
            return Err((
                HEADER[5],
                format!("transient multiplier must be >= 1, got {}", self.transient_multiplier),
            ));
        }
        Ok(())
    }

    /// Force limit for the given contact, N: the stricter of the force and
    /// pressure criteria, scaled by the transient multiplier for transient
    /// contact.
    pub fn effective_force_limit(&self, mode: ContactMode, contact_area: f64) -> Result<f64> {
        let (force, _) = self.governing_force(contact_area)?;
        Ok(force * self.mode_multiplier(mode))
    }

    /// Quasi-static force limit and the criterion that produced it.
    pub fn governing_force(&self, contact_area: f64) -> Result<(f64, BindingCriterion)> {
        if !(contact_area.is_finite() && contact_area > 0.0) {
            return Err(Error::domain(format!(
                "contact area must be positive, got {contact_area} cm²"
            )));
        }
        let from_pressure = contact_area * self.p_max_qs;
        if self.f_max_qs <= from_pressure {
            Ok((self.f_max_qs, BindingCriterion::Force))
        } else {
            Ok((from_pressure, BindingCriterion::Pressure))
        }
    }

    pub fn mode_multiplier(&self, mode: ContactMode) -> f64 {
        match mode {
            ContactMode::Transient => self.transient_multiplier,
            ContactMode::QuasiStaticFree | ContactMode::QuasiStaticClamped => 1.0,
        }
    }

    /// Largest elastic energy the tissue can store without exceeding the
    /// effective force limit, J.
    pub fn max_elastic_energy(&self, mode: ContactMode, contact_area: f64) -> Result<f64> {
        Ok(elastic_energy(
            self.effective_force_limit(mode, contact_area)?,
            self.stiffness,
        ))
    }
}

/// Energy `F²/(2k)` stored in a linear spring loaded to force `F`.
pub fn elastic_energy(force: f64, stiffness: f64) -> f64 {
    force * force / (2.0 * stiffness)
}

/// Validated set of body-region parameters. Immutable once loaded.
#[derive(Debug, Clone, PartialEq)]
pub struct BodyRegionTable {
    entries: BTreeMap<BodyRegion, BodyRegionParams>,
    pub source_label: String,
}

impl BodyRegionTable {
    /// The bundled reference table.
    pub fn reference() -> Self {
        Self::from_csv_str(REFERENCE_TABLE, "bundled reference table").expect("bundled body table is valid")
    }

    pub fn reference_csv() -> &'static str {
        REFERENCE_TABLE
    }

    pub fn load<R: Read>(source: R, source_label: impl Into<String>) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .has_headers(true)
            .from_reader(source);

        let headers = reader.headers()?.clone();
        let got: Vec<&str> = headers.iter().collect();
        if got != HEADER {
            return Err(Error::Schema(format!(
                "expected header '{}', found '{}'",
                HEADER.join(","),
                got.join(",")
            )));
        }

        let mut entries = BTreeMap::new();
        for (i, record) in reader.records().enumerate() {
            let record = record?;
            // Data rows are numbered from 1, the header being row 0.
            let row = i + 1;
            let field = |c: usize| record.get(c).unwrap_or("").trim();
            let number = |c: usize| -> Result<f64> {
                field(c).parse::<f64>().map_err(|_| Error::InvalidValue {
                    row,
                    column: HEADER[c].to_string(),
                    message: format!("not a number: '{}'", field(c)),
                })
            };

            let region: BodyRegion = field(0).parse().map_err(|e: Error| Error::InvalidValue {
                row,
                column: HEADER[0].to_string(),
                message: e.to_string(),
            })?;
            let m_h: HumanMass = field(4).parse().map_err(|e: Error| Error::InvalidValue {
                row,
                column: HEADER[4].to_string(),
                message: e.to_string(),
            })?;
            let params = BodyRegionParams {
                region,
                f_max_qs: number(1)?,
                p_max_qs: number(2)?,
                // Files carry N/mm.
                stiffness: number(3)? * 1000.0,
                m_h,
                transient_multiplier: number(5)?,
            };
            params.check().map_err(|(column, message)| Error::InvalidValue {
                row,
                column: column.to_string(),
                message,
            })?;
            if entries.insert(region, params).is_some() {
                return Err(Error::Schema(format!("duplicate region: {}", region.display_name())));
            }
        }

        if let Some(missing) = BodyRegion::ALL.iter().find(|r| !entries.contains_key(r)) {
            return Err(Error::MissingRegion(missing.display_name().to_string()));
        }

        Ok(BodyRegionTable {
            entries,
            source_label: source_label.into(),
        })
    }

    pub fn from_csv_str(text: &str, source_label: impl Into<String>) -> Result<Self> {
        Self::load(text.as_bytes(), source_label)
    }

    /// Replaces (or inserts) one region's parameters.
    pub fn with_region(mut self, params: BodyRegionParams) -> Self {
        self.entries.insert(params.region, params);
        self
    }

    pub fn get(&self, region: BodyRegion) -> Option<&BodyRegionParams> {
        self.entries.get(&region)
    }

    pub fn params(&self, region: BodyRegion) -> Result<&BodyRegionParams> {
        self.get(region)
            .ok_or_else(|| Error::MissingRegion(region.display_name().to_string()))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries in canonical region order.
    pub fn iter(&self) -> impl Iterator<Item = &BodyRegionParams> {
        self.entries.values()
    }
}
