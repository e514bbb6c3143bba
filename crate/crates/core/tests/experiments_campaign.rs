use proptest::prelude::*;

use arctan_flow::diagnostics::wiener_norm;
use arctan_flow::dynamics::{InitialSpec, Mode, ModelKind, SimConfig};
use arctan_flow::experiments::{
    decay_experiment, link_experiment, link_experiment_with, viscosity_sweep, LinkOptions,
    TimeRescaling, DECAY_REGIME_MAX,
};
use arctan_flow::spectral::{Field, PeriodicGrid};
use arctan_flow::Error;

fn cos_profile(n: usize) -> Field {
    Field::from_fn(PeriodicGrid::new(n).unwrap(), f64::cos).unwrap()
}

/// One or two random modes, rescaled so that `‖profile‖_{A¹} = 1`.
fn unit_profile() -> impl Strategy<Value = Field> {
    prop::collection::vec((1u32..=4, -1.0f64..1.0, -1.0f64..1.0), 1..=2).prop_map(|modes| {
        let grid = PeriodicGrid::new(64).unwrap();
        let raw = Field::from_fn(grid, |x| {
            modes
                .iter()
                .map(|&(k, a, b)| a * (k as f64 * x).cos() + b * (k as f64 * x).sin())
                .sum::<f64>()
        })
        .unwrap();
        let a1 = wiener_norm(&raw, 1.0).unwrap().max(1e-3);
        raw.scale(1.0 / a1)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn decay_is_monotone_inside_regime(
        profile in unit_profile(),
        mean in 0.5f64..2.0,
        r in 0.01f64..=DECAY_REGIME_MAX,
    ) {
        let amp = r * mean;
        let (rep, _) = decay_experiment(mean, &profile, amp, 4.0).unwrap();
        prop_assert!(rep.monotone_a1, "{:?}", rep);
        prop_assert!(rep.delta_a1 > 0.0);
        prop_assert!(rep.monotone_linf && rep.linf_below_a0, "{:?}", rep);
    }
}

#[test]
fn decay_persists_when_mean_doubles() {
    let profile = cos_profile(64);
    let (one, _) = decay_experiment(1.0, &profile, 0.15, 5.0).unwrap();
    let (two, _) = decay_experiment(2.0, &profile, 0.30, 5.0).unwrap();
    assert!((one.r0 - two.r0).abs() < 1e-12);
    assert!(one.pass && two.pass);
    assert!(one.delta_a1 > 0.0 && two.delta_a1 > 0.0);
}

#[test]
fn canonical_viscosity_sweep() {
    let base = SimConfig::new(
        ModelKind::Arctan,
        128,
        0.5,
        InitialSpec::modes(
            1.0,
            vec![Mode {
                k: 1,
                cos_amp: 0.3,
                sin_amp: 0.0,
            }],
        ),
    );
    let rep = viscosity_sweep(&base, &[0.1, 0.05, 0.025, 0.0125]).unwrap();
    assert!(rep.pass);
    assert!(
        rep.check("strictly_decreasing").unwrap().passed,
        "{:?}",
        rep.errors
    );
    let json: serde_json::Value = serde_json::from_str(&rep.to_json().unwrap()).unwrap();
    assert_eq!(json["parameters"].as_array().unwrap().len(), 4);
    assert_eq!(json["errors"].as_array().unwrap().len(), 3);
}

#[test]
fn link_order_and_negative_control() {
    let profile = cos_profile(64);
    let amps = [0.08, 0.04, 0.02];
    let rep = link_experiment(1.0, &profile, &amps, 1.0).unwrap();
    let p = rep.order.unwrap();
    assert!((2.7..=3.3).contains(&p), "order {p}");
    assert!(rep.pass);
    for w in rep.errors.windows(2) {
        assert!((w[0] / w[1] - 8.0).abs() < 1.0);
    }

    let fault = LinkOptions {
        rescaling: TimeRescaling::Identity,
        ..LinkOptions::default()
    };
    // with mean 1 the fault changes nothing
    let same = link_experiment_with(1.0, &profile, &amps, 1.0, &fault).unwrap();
    assert_eq!(same.errors, rep.errors);
    let bad = link_experiment_with(2.0, &profile, &amps, 1.0, &fault).unwrap();
    assert!(bad.order.unwrap() < 1.5);
    assert!(!bad.pass);
    let good = link_experiment(2.0, &profile, &amps, 1.0).unwrap();
    assert!(good.pass, "{:?}", good.order);
}

#[test]
fn link_positivity_guidance() {
    match link_experiment(0.5, &cos_profile(32), &[0.6, 0.3], 1.0) {
        Err(Error::InvalidParameter { name, reason }) => {
            assert_eq!(name, "amp_list");
            assert!(reason.contains("shrink"));
        }
        other => panic!("{other:?}"),
    }
}
