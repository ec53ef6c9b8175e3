use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use serde_json::Value;
use sha2::{Digest, Sha256};

fn pfl(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pfl"))
        .arg("--out")
        .arg(out)
        .args(args)
        .output()
        .expect("spawn pfl")
}

fn config(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("configs")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * b.abs()
}

#[test]
fn simulate_reports_post_impact_speed() {
    let dir = tempfile::tempdir().unwrap();
    let o = pfl(
        dir.path(),
        &[
            "simulate", "--mr", "3", "--mh", "1", "--k", "5", "--v0", "1", "--dt", "1e-4",
        ],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&dir.path().join("outcome.json"));
    let v_star = v["simulated"]["v_star"].as_f64().unwrap();
    assert!(close(v_star, 0.75, 1e-3), "v* = {v_star}");
    for f in ["trajectory.csv", "trajectory.svg", "manifest_simulate.json"] {
        assert!(dir.path().join(f).is_file(), "{f} missing");
    }
}

#[test]
fn clamped_human_accepted_as_inf() {
    let dir = tempfile::tempdir().unwrap();
    let o = pfl(
        dir.path(),
        &["simulate", "--mr", "2", "--mh", "inf", "--k", "1000", "--v0", "0.5"],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&dir.path().join("outcome.json"));
    // all kinetic energy ends up in the spring
    assert!(v["simulated"]["v_star"].as_f64().unwrap().abs() < 1e-6);
}

#[test]
fn missing_argument_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = pfl(dir.path(), &["simulate", "--mr", "1", "--mh", "1", "--v0", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn invalid_physics_is_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = pfl(
        dir.path(),
        &["simulate", "--mr=-1", "--mh", "1", "--k", "1", "--v0", "1"],
    );
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn limits_lists_every_region() {
    let dir = tempfile::tempdir().unwrap();
    let o = pfl(dir.path(), &["limits"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(dir.path().join("limits.csv")).unwrap();
    assert_eq!(text.lines().count(), 13);
    assert_eq!(String::from_utf8(o.stdout).unwrap(), text);

    let o = pfl(
        dir.path(),
        &["--format", "json", "limits", "--mode", "all", "--mass", "10"],
    );
    assert!(o.status.success());
    let rows = json(&dir.path().join("limits.json"));
    assert_eq!(rows.as_array().unwrap().len(), 36);
}

#[test]
fn unknown_region_names_the_valid_ones() {
    let dir = tempfile::tempdir().unwrap();
    let o = pfl(dir.path(), &["limits", "--region", "elbow"]);
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("hands_fingers") && err.contains("skull_forehead"), "{err}");
}

#[test]
fn contact_area_scales_pressure_bound_speed() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("table.csv");
    fs::write(
        &table,
        "region,f_max_qs_N,p_max_qs_N_per_cm2,k_N_per_mm,m_h_kg,transient_mult\n\
         skull_forehead,1000,100,150,4.4,1\nface,650,65,75,4.4,1\nneck,1000,100,50,1.2,2\n\
         back_shoulders,1000,100,35,40,2\nchest,1000,100,25,40,2\nabdomen,1000,100,10,40,2\n\
         pelvis,1000,100,25,40,2\nupper_arms_elbows,1000,100,30,3,2\nlower_arms_wrists,1000,100,40,2,2\n\
         hands_fingers,1000,100,75,0.6,2\nthighs_knees,1000,100,50,75,2\nlower_legs,1000,100,60,75,2\n",
    )
    .unwrap();
    let speed = |area: &str| {
        let o = pfl(
            dir.path(),
            &[
                "--body-table",
                table.to_str().unwrap(),
                "--format",
                "json",
                "limits",
                "--region",
                "face",
                "--mass",
                "5",
                "--area",
                area,
            ],
        );
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let rows = json(&dir.path().join("limits.json"));
        assert_eq!(rows[0]["binding_criterion"], "pressure");
        rows[0]["v0_max"].as_f64().unwrap()
    };
    let (one, two) = (speed("1"), speed("2"));
    assert!(close(two, 2.0 * one, 1e-12), "{one} {two}");
}

#[test]
fn smoke_sweep_is_fast_complete_and_repeatable() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let cfg = config("sweep_smoke.toml");
    let t0 = Instant::now();
    let o = pfl(a.path(), &["sweep", &cfg]);
    assert!(t0.elapsed() < Duration::from_secs(5));
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for f in [
        "sweep_result.csv",
        "scaling_report.csv",
        "boxstats.json",
        "boxplot.svg",
        "manifest_sweep.json",
    ] {
        assert!(a.path().join(f).is_file(), "{f} missing");
    }
    let o = pfl(b.path(), &["sweep", &cfg, "--threads", "3"]);
    assert!(o.status.success());
    for f in ["sweep_result.csv", "scaling_report.csv", "boxstats.json"] {
        assert_eq!(
            fs::read(a.path().join(f)).unwrap(),
            fs::read(b.path().join(f)).unwrap(),
            "{f} differs"
        );
    }
}

#[test]
fn filter_caps_face_speed() {
    for (name, target) in [("filter_face_transient.toml", 0.15), ("filter_face_clamped.toml", 0.10)] {
        let dir = tempfile::tempdir().unwrap();
        let o = pfl(dir.path(), &["filter", &config(name)]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let s = json(&dir.path().join("filter_summary.json"));
        let peak = s["peak_speed"].as_f64().unwrap();
        assert!(close(peak, target, 0.05), "{name}: {peak}");
        assert_eq!(s["speed_limit_respected"], true);
    }
}

#[test]
fn empty_tank_never_moves() {
    let dir = tempfile::tempdir().unwrap();
    let o = pfl(dir.path(), &["filter", &config("filter_zero_budget.toml")]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(dir.path().join("filter_log.csv")).unwrap();
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let v = header.iter().position(|h| *h == "v").unwrap();
    let mut n = 0;
    for line in lines {
        assert_eq!(line.split(',').nth(v).unwrap().parse::<f64>().unwrap(), 0.0);
        n += 1;
    }
    assert!(n >= 1000);
}

#[test]
fn passivity_scenario_keeps_tank_nonnegative() {
    let dir = tempfile::tempdir().unwrap();
    let o = pfl(dir.path(), &["filter", &config("filter_passivity.toml")]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let s = json(&dir.path().join("filter_summary.json"));
    assert!(s["final_tank_energy"].as_f64().unwrap() >= 0.0);
}

#[test]
fn manifest_digests_match_files() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config("filter_face_transient.toml");
    let o = pfl(dir.path(), &["filter", &cfg]);
    assert!(o.status.success());
    let m = json(&dir.path().join("manifest_filter.json"));
    assert_eq!(m["subcommand"], "filter");
    let sha = |bytes: &[u8]| hex::encode(Sha256::digest(bytes));

    let inputs = m["inputs"].as_array().unwrap();
    let scenario = inputs
        .iter()
        .find(|i| i["source"].as_str().unwrap().ends_with("filter_face_transient.toml"))
        .expect("scenario recorded");
    assert_eq!(scenario["sha256"], sha(&fs::read(&cfg).unwrap()));

    let outputs = m["outputs"].as_array().unwrap();
    assert_eq!(outputs.len(), 3);
    for out in outputs {
        let path = dir.path().join(out["source"].as_str().unwrap());
        assert_eq!(out["sha256"], sha(&fs::read(path).unwrap()));
    }
}
