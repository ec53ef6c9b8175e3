use std::io::Write;

use serde::Serialize;

use super::run::{SweepResult, Variant};
use crate::body_data::BodyRegion;
use crate::error::{Error, Result};

/// Region every contact is assumed to hit when the body part is unknown.
pub const WORST_CASE_REGION: BodyRegion = BodyRegion::Face;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingRow {
    pub region: BodyRegion,
    /// Mean transient limit with the directional mass, m/s.
    pub baseline_mean: f64,
    /// Variant mean / baseline mean × 100, in `ScalingReport::variants` order.
    pub scaling: Vec<f64>,
    /// Worst-case region's variant mean / this region's baseline × 100.
    pub worst_case: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingReport {
    pub variants: Vec<Variant>,
    pub rows: Vec<ScalingRow>,
}

impl ScalingReport {
    pub fn row(&self, region: BodyRegion) -> Option<&ScalingRow> {
        self.rows.iter().find(|r| r.region == region)
    }

    fn column(&self, variant: Variant) -> Result<usize> {
        self.variants
            .iter()
            .position(|&v| v == variant)
            .ok_or_else(|| Error::MissingCombination(variant.to_string()))
    }

    pub fn scaling(&self, region: BodyRegion, variant: Variant) -> Result<f64> {
        let c = self.column(variant)?;
        let row = self
            .row(region)
            .ok_or_else(|| Error::MissingRegion(region.display_name().into()))?;
        Ok(row.scaling[c])
    }

    pub fn worst_case(&self, region: BodyRegion, variant: Variant) -> Result<f64> {
        let c = self.column(variant)?;
        let row = self
            .row(region)
            .ok_or_else(|| Error::MissingRegion(region.display_name().into()))?;
        Ok(row.worst_case[c])
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["region".to_string(), "baseline_mean_m_per_s".to_string()];
        header.extend(
            self.variants
                .iter()
                .map(|v| format!("pct_{}_{}", v.mode, v.mass_source)),
        );
        header.extend(
            self.variants
                .iter()
                .map(|v| format!("worst_pct_{}_{}", v.mode, v.mass_source)),
        );
        w.write_record(&header)?;
        for row in &self.rows {
            let mut rec = vec![row.region.id().to_string(), row.baseline_mean.to_string()];
            rec.extend(row.scaling.iter().map(f64::to_string));
            rec.extend(row.worst_case.iter().map(f64::to_string));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Percentages of every swept variant relative to the transient,
/// directional-mass baseline.
pub fn scaling_report(result: &SweepResult) -> Result<ScalingReport> {
    let variants = result.config.variants.clone();
    let mean = |region: BodyRegion, variant: Variant| {
        result
            .mean(region, variant)
            .ok_or_else(|| Error::MissingCombination(format!("{} {}", region.id(), variant)))
    };
    let mut rows = Vec::with_capacity(BodyRegion::ALL.len());
    for &region in BodyRegion::ALL.iter() {
        let baseline = mean(region, Variant::BASELINE)?;
        let mut scaling = Vec::with_capacity(variants.len());
        let mut worst_case = Vec::with_capacity(variants.len());
        for &v in &variants {
            scaling.push(100.0 * mean(region, v)? / baseline);
            worst_case.push(100.0 * mean(WORST_CASE_REGION, v)? / baseline);
        }
        rows.push(ScalingRow {
            region,
            baseline_mean: baseline,
            scaling,
            worst_case,
        });
    }
    Ok(ScalingReport { variants, rows })
}
