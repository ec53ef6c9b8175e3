use pfl_core::*;
use proptest::prelude::*;

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

#[test]
fn every_region_and_mode_hits_its_force_limit() {
    let table = BodyRegionTable::reference();
    for &region in BodyRegion::ALL.iter() {
        for &mode in ContactMode::ALL.iter() {
            let lim = compute_limit(&LimitQuery::new(region, mode, 5.545), &table).unwrap();
            let p = table.params(region).unwrap();
            let m_h = match mode {
                ContactMode::QuasiStaticClamped => HumanMass::Clamped,
                _ => p.m_h,
            };
            let s = CollisionScenario::new(5.545, m_h, p.stiffness, lim.v0_max).unwrap();
            let (_, out) = simulate_with(&s, &SimOptions::default()).unwrap();
            assert!(rel(out.f_peak, lim.force_limit) < 5e-3, "{region} {mode}");
            assert!(rel(out.delta_k, lim.u_s_max) < 5e-3, "{region} {mode}");
        }
    }
}

#[test]
fn post_peak_behaviour_never_changes_admissibility() {
    let table = BodyRegionTable::reference();
    let lim = compute_limit(&LimitQuery::new(BodyRegion::Neck, ContactMode::Transient, 3.0), &table).unwrap();
    let p = table.params(BodyRegion::Neck).unwrap();
    let s = CollisionScenario::new(3.0, p.m_h, p.stiffness, lim.v0_max).unwrap();
    let peaks: Vec<f64> = [PostPeak::Release, PostPeak::Attached, PostPeak::Stick]
        .iter()
        .map(|&post_peak| {
            let opts = SimOptions {
                post_peak,
                horizon: Some(2.0 * s.natural_period()),
                ..SimOptions::default()
            };
            simulate_with(&s, &opts).unwrap().1.f_peak
        })
        .collect();
    assert!(peaks.iter().all(|&f| f == peaks[0]));
    assert!(is_admissible(lim.v0_max, &lim));
}

#[test]
fn body_table_round_trips_through_csv() {
    let table = BodyRegionTable::load(BodyRegionTable::reference_csv().as_bytes(), "copy").unwrap();
    assert_eq!(table.len(), 12);
    for p in table.iter() {
        assert_eq!(Some(p), BodyRegionTable::reference().get(p.region));
    }
}

#[test]
fn doubling_area_doubles_speed_when_pressure_binds() {
    let base = BodyRegionTable::reference();
    let face = *base.params(BodyRegion::Face).unwrap();
    let pressure_bound = BodyRegionParams { p_max_qs: 30.0, ..face };
    let table = base.with_region(pressure_bound);
    let q = LimitQuery::new(BodyRegion::Face, ContactMode::Transient, 5.545);
    let one = compute_limit(&q, &table).unwrap();
    let two = compute_limit(&q.with_area(2.0), &table).unwrap();
    assert_eq!(one.binding_criterion, BindingCriterion::Pressure);
    assert!(rel(two.v0_max, 2.0 * one.v0_max) < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn simulation_agrees_with_closed_form(m_r in 0.5f64..100.0, m_h in 0.5f64..100.0,
                                          log_k in 2.0f64..6.0, v0 in 0.05f64..3.0) {
        let s = CollisionScenario::new(m_r, HumanMass::Finite(m_h), 10f64.powf(log_k), v0).unwrap();
        let (traj, out) = simulate_with(&s, &SimOptions::default()).unwrap();
        let peak = peak_contact_state(&s);
        prop_assert!(rel(out.dx_max, peak.compression) < 1e-3);
        prop_assert!(rel(out.f_peak, peak.force) < 1e-3);
        prop_assert!(rel(out.delta_k, energy_transfer(&s)) < 1e-3);
        prop_assert!(rel(out.v_star, common_velocity(&s)) < 1e-3);
        let k0 = s.initial_energy();
        for i in 0..traj.samples.len() {
            prop_assert!(rel(traj.mechanical_energy(&s, i), k0) < 1e-6);
        }
    }

    #[test]
    fn limit_inverts_transfer(u in 1e-3f64..50.0, m_r in 0.5f64..50.0, m_h in 0.5f64..80.0) {
        let v = v0_max_free(u, m_r, HumanMass::Finite(m_h)).unwrap();
        let s = CollisionScenario::new(m_r, HumanMass::Finite(m_h), 1e4, v).unwrap();
        prop_assert!(rel(energy_transfer(&s), u) < 1e-12);
        prop_assert!(v0_max_clamped(u, m_r).unwrap() <= v);
        let b = velocity_bounds(u, m_r, m_h).unwrap();
        prop_assert!(b.contains(v));
    }
}
