use helixkit::classify::{axis_angle, brute_force_axis, verify_axis, HelixKind, DEFAULT_BUDGET};
use helixkit::report::{analyze, AnalysisConfig};
use helixkit::synthesize::{
    generic_negative, integrate_frenet, make_inclined_fixture, make_v2_fixture, make_vn_fixture,
};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn verdicts_axes_and_oracle_agree(kind in 0usize..4, n in 3usize..=4, seed in 0u64..10_000) {
        let p = match kind {
            0 => make_inclined_fixture(n, seed),
            1 => make_vn_fixture(n, seed),
            2 => make_v2_fixture(n, seed),
            _ => generic_negative(n, seed),
        }
        .unwrap();
        let spec = helixkit::expr::CurveSpec::synthetic(p);
        let analysis = analyze("fixture", &spec, &AnalysisConfig::default()).unwrap();
        let report = &analysis.report;
        if kind < 3 {
            prop_assert_eq!(report.is_helix(HelixKind::ALL[[0, 2, 1][kind]]), Some(true));
        }
        for k in HelixKind::ALL {
            let verdicts: Vec<bool> = report.verdicts.iter().filter(|v| v.kind == k).map(|v| v.is_helix).collect();
            prop_assert!(verdicts.iter().all(|&v| v == verdicts[0]), "{k:?} methods disagree");
            let oracle = brute_force_axis(
                &analysis.apparatus,
                k.frame_index(n),
                64,
                &report.tolerances,
                DEFAULT_BUDGET,
            )
            .unwrap();
            prop_assert_eq!(oracle.is_some(), verdicts[0], "{:?} oracle", k);
            if let (Some(o), Some(Some(a))) = (oracle, report.axis.get(&k)) {
                prop_assert!(axis_angle(&o.x, &a.x) <= 1e-3);
                prop_assert!(verify_axis(&analysis.apparatus, &a.x, k.frame_index(n), &report.tolerances).pass);
            }
        }
    }
}

#[test]
fn oracle_rejects_directions_perpendicular_to_the_frame_vector() {
    // this inclined curve has an axis orthogonal to V_2; only the excluded
    // right angle makes <V_2, X> constant
    let (_, app) = integrate_frenet(&make_inclined_fixture(4, 18).unwrap()).unwrap();
    let tol = helixkit::classify::Tolerances::default();
    for r in [16, 64, 128] {
        assert!(brute_force_axis(&app, 2, r, &tol, DEFAULT_BUDGET).unwrap().is_none(), "R = {r}");
    }
    assert!(brute_force_axis(&app, 1, 64, &tol, DEFAULT_BUDGET).unwrap().is_some());
}
