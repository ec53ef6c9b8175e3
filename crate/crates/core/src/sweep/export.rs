use std::io::Write;

use serde::Serialize;

use super::run::{SweepMeta, SweepResult};
use super::stats::BoxStats;
use crate::body_data::{BodyRegion, ContactMode};
use crate::error::Result;

/// Long-format samples: `region,mode,mass_source,sample`.
pub fn write_samples_csv<W: Write>(result: &SweepResult, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["region", "mode", "mass_source", "sample"])?;
    for d in &result.distributions {
        let (r, m, s) = (d.region.id(), d.variant.mode.id(), d.variant.mass_source.id());
        for v in &d.samples {
            w.write_record([r, m, s, v.to_string().as_str()])?;
        }
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct BoxEntry<'a> {
    region: BodyRegion,
    display_name: &'a str,
    mode: ContactMode,
    mass_source: &'a str,
    stats: &'a BoxStats,
}

#[derive(Serialize)]
struct BoxFile<'a> {
    meta: &'a SweepMeta,
    constant_mass_kg: f64,
    reflected_mass_kg: &'a BoxStats,
    distributions: Vec<BoxEntry<'a>>,
}

/// Boxplot statistics for every region and variant.
pub fn boxstats_json(result: &SweepResult) -> Result<String> {
    let file = BoxFile {
        meta: &result.meta,
        constant_mass_kg: result.constant_mass,
        reflected_mass_kg: &result.mass_stats,
        distributions: result
            .distributions
            .iter()
            .map(|d| BoxEntry {
                region: d.region,
                display_name: d.region.display_name(),
                mode: d.variant.mode,
                mass_source: d.variant.mass_source.id(),
                stats: &d.stats,
            })
            .collect(),
    };
    Ok(serde_json::to_string_pretty(&file)?)
}
