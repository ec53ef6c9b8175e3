use std::fmt::Write as _;
use std::io::Write;

use pfl_core::sweep::{boxstats_json, run_sweep_with_progress, scaling_report, write_samples_csv, SweepConfig};
use pfl_core::{
    compute_limit, iso_effective_mass, simulate_loop, simulate_with, tank_init, BodyRegion, CollisionOutcome,
    CollisionScenario, FilterConfig, LimitQuery, PlantState, SimOptions, SpeedLimit,
};
use serde_json::json;

use crate::args::{parse_modes, Cli, FilterArgs, Format, LimitsArgs, SimulateArgs, SweepArgs};
use crate::inputs;
use crate::manifest::RunManifest;
use crate::plot;
use crate::scenario::{FilterScenario, Quantity};
use crate::{CliError, CliResult};

/// Write to stdout; a closed pipe (e.g. `| head`) is not an error.
fn stdout(text: &str) -> CliResult<()> {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        r => Ok(r?),
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> CliResult<String> {
    Ok(serde_json::to_string_pretty(v).map_err(pfl_core::Error::from)?)
}

pub fn simulate(cli: &Cli, a: &SimulateArgs) -> CliResult<()> {
    let mut manifest = RunManifest::new(
        "simulate",
        json!({
            "mr": a.mr, "mh": a.mh.to_string(), "k": a.k, "v0": a.v0,
            "dt": a.dt, "horizon": a.horizon, "post_peak": a.post_peak,
        }),
    );
    let s = CollisionScenario::new(a.mr, a.mh, a.k, a.v0)?;
    let opts = SimOptions {
        dt: a.dt,
        horizon: a.horizon,
        post_peak: a.post_peak,
    };
    let (traj, outcome) = simulate_with(&s, &opts)?;
    let out = inputs::out_dir(cli)?;

    let mut csv = Vec::new();
    traj.write_csv(&mut csv)?;
    manifest.emit(out, "trajectory.csv", &csv)?;
    let report = json!({
        "scenario": s,
        "simulated": outcome,
        "analytic": CollisionOutcome::analytic(&s),
        "dt": traj.dt,
        "samples": traj.samples.len(),
    });
    let text = to_json(&report)?;
    manifest.emit(out, "outcome.json", text.as_bytes())?;
    manifest.emit(
        out,
        "trajectory.svg",
        plot::trajectory_svg(&traj, outcome.t_star).as_bytes(),
    )?;
    manifest.write(out)?;
    stdout(&format!("{text}\n"))
}

fn robot_mass(cli: &Cli, text: &str, payload: f64, manifest: &mut RunManifest) -> CliResult<f64> {
    if text.eq_ignore_ascii_case("iso") {
        let model = inputs::robot(cli, manifest)?;
        Ok(iso_effective_mass(&model, payload)?)
    } else {
        text.trim()
            .parse::<f64>()
            .map_err(|_| CliError::Usage(format!("--mass must be a number in kg or `iso`, got `{text}`")))
    }
}

fn limit_rows_csv(limits: &[SpeedLimit]) -> String {
    let mut s = String::from(
        "region,mode,robot_mass_kg,contact_area_cm2,force_limit_N,binding,u_s_max_J,v0_max_m_per_s,k0_max_J\n",
    );
    for l in limits {
        s.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            l.region.id(),
            l.mode,
            l.robot_mass,
            l.contact_area,
            l.force_limit,
            l.binding_criterion,
            l.u_s_max,
            l.v0_max,
            l.k0_max
        ));
    }
    s
}

pub fn limits(cli: &Cli, a: &LimitsArgs) -> CliResult<()> {
    let mut manifest = RunManifest::new(
        "limits",
        json!({
            "region": a.region, "mode": a.mode, "mass": a.mass, "payload": a.payload, "area": a.area,
        }),
    );
    let table = inputs::body_table(cli, &mut manifest)?;
    let regions: Vec<BodyRegion> = if a.region.eq_ignore_ascii_case("all") {
        BodyRegion::ALL.to_vec()
    } else {
        a.region.split(',').map(str::parse).collect::<pfl_core::Result<_>>()?
    };
    let modes = parse_modes(&a.mode)?;
    let mass = robot_mass(cli, &a.mass, a.payload, &mut manifest)?;
    let mut rows = Vec::with_capacity(regions.len() * modes.len());
    for &mode in &modes {
        for &region in &regions {
            rows.push(compute_limit(
                &LimitQuery::new(region, mode, mass).with_area(a.area),
                &table,
            )?);
        }
    }
    let out = inputs::out_dir(cli)?;
    let (name, text) = match cli.format {
        Format::Csv => ("limits.csv", limit_rows_csv(&rows)),
        Format::Json => ("limits.json", to_json(&rows)?),
    };
    manifest.emit(out, name, text.as_bytes())?;
    manifest.write(out)?;
    if cli.format == Format::Json {
        stdout(&format!("{text}\n"))
    } else {
        stdout(&text)
    }
}

pub fn sweep(cli: &Cli, a: &SweepArgs) -> CliResult<()> {
    let mut manifest = RunManifest::new("sweep", serde_json::Value::Null);
    let text = inputs::config_text(&a.config, &mut manifest)?;
    let config = SweepConfig::from_toml_str(&text)?;
    manifest.config = serde_json::to_value(&config).map_err(pfl_core::Error::from)?;
    let table = inputs::body_table(cli, &mut manifest)?;
    let model = inputs::robot(cli, &mut manifest)?;

    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = a.threads {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))?;
    eprintln!(
        "sweep: {} grid points x {} directions on {} threads",
        config.grid_len(),
        config.n_directions,
        pool.current_num_threads()
    );
    let progress = |done: usize, total: usize| {
        let step = (total / 20).max(1);
        if done % step == 0 || done == total {
            eprintln!("sweep: {done}/{total} rows");
        }
    };
    let result = pool.install(|| run_sweep_with_progress(&model, &table, &config, &progress))?;
    let report = scaling_report(&result)?;
    eprintln!(
        "sweep: {} reachable, {} unreachable, {} singular",
        result.meta.reachable, result.meta.unreachable, result.meta.singular
    );

    let out = inputs::out_dir(cli)?;
    let mut samples = Vec::new();
    write_samples_csv(&result, &mut samples)?;
    manifest.emit(out, "sweep_result.csv", &samples)?;
    let mut scaling = Vec::new();
    report.write_csv(&mut scaling)?;
    manifest.emit(out, "scaling_report.csv", &scaling)?;
    if cli.format == Format::Json {
        manifest.emit(out, "scaling_report.json", to_json(&report)?.as_bytes())?;
    }
    manifest.emit(out, "boxstats.json", boxstats_json(&result)?.as_bytes())?;
    manifest.emit(out, "boxplot.svg", plot::boxplot_svg(&result).as_bytes())?;
    manifest.write(out)?;

    let mut table = String::new();
    let _ = writeln!(table, "{:<20} {:>10}  scaling % / worst-case %", "region", "v_avg m/s");
    for row in &report.rows {
        let cols: Vec<String> = row
            .scaling
            .iter()
            .zip(&row.worst_case)
            .map(|(s, w)| format!("{s:.0}/{w:.0}"))
            .collect();
        let _ = writeln!(
            table,
            "{:<20} {:>10.3}  {}",
            row.region.display_name(),
            row.baseline_mean,
            cols.join(" ")
        );
    }
    let labels: Vec<String> = report.variants.iter().map(|v| v.to_string()).collect();
    let _ = writeln!(table, "columns: {}", labels.join(", "));
    stdout(&table)
}

pub fn filter(cli: &Cli, a: &FilterArgs) -> CliResult<()> {
    let mut manifest = RunManifest::new("filter", serde_json::Value::Null);
    let text = inputs::config_text(&a.scenario, &mut manifest)?;
    let sc: FilterScenario = toml::from_str(&text).map_err(pfl_core::Error::from)?;
    manifest.config = serde_json::to_value(&sc).map_err(pfl_core::Error::from)?;
    let table = inputs::body_table(cli, &mut manifest)?;
    let mass = match &sc.robot_mass {
        Quantity::Value(v) => *v,
        Quantity::Keyword(k) => robot_mass(cli, k, sc.payload, &mut manifest)?,
    };
    let region = sc.region()?;
    let limit = compute_limit(
        &LimitQuery::new(region, sc.mode, mass).with_area(sc.contact_area),
        &table,
    )?;
    let budget = sc.budget(&limit)?;
    let cfg = FilterConfig {
        power_cap: sc.power_cap,
        velocity_filter: sc.velocity_filter,
        gain: sc.gain,
        ..FilterConfig::new(limit, sc.period)
    };
    let tank = tank_init(budget)?.with_recycling(sc.recycling);
    let log = simulate_loop(PlantState::at_rest(mass), &sc.nominal, &cfg, tank, sc.duration)?;

    let out = inputs::out_dir(cli)?;
    let mut csv = Vec::new();
    log.write_csv(&mut csv)?;
    manifest.emit(out, "filter_log.csv", &csv)?;
    let summary = json!({
        "region": region,
        "mode": sc.mode,
        "robot_mass": mass,
        "v0_max": limit.v0_max,
        "k0_max": limit.k0_max,
        "u_s_max": limit.u_s_max,
        "budget": budget,
        "peak_speed": log.peak_speed(),
        "peak_kinetic_energy": log.peak_kinetic_energy(),
        "final_tank_energy": log.tank.energy(),
        "cumulative_injected": log.tank.cumulative_injected(),
        "cumulative_recycled": log.tank.cumulative_recycled(),
        "speed_limit_respected": log.peak_speed() <= limit.v0_max + 1e-12,
    });
    let text = to_json(&summary)?;
    manifest.emit(out, "filter_summary.json", text.as_bytes())?;
    manifest.emit(out, "filter_log.svg", plot::filter_svg(&log, limit.v0_max).as_bytes())?;
    manifest.write(out)?;
    stdout(&format!("{text}\n"))
}
