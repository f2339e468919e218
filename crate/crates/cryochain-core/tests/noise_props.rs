//! Property tests for the calibration math: conversion round trips,
//! Y-factor inversion, cable-model convergence, and the de-embed oracle
//! (forward-model a full chain, then recover the injected DUT noise).

use cryochain_core::noisecal::{
    cable_effective_te, deembed_dut_te, y_factor_te, y_from_te, DeembedContext, NoiseMeasurement,
    NoiseSource,
};
use cryochain_core::rfnet::{
    attenuator_te, cascade_noise, nf_from_te, te_from_nf, CableThermalModel, ChainElement,
    FrequencyGrid, SignalChain,
};
use proptest::prelude::*;

fn close_rel(a: f64, b: f64, rel: f64) {
    let tol = rel * b.abs().max(1e-30);
    assert!((a - b).abs() <= tol, "{a} vs {b} (rel {rel})");
}

proptest! {
    #[test]
    fn nf_te_round_trip(nf_db in 0.0_f64..40.0) {
        let te = te_from_nf(nf_db).unwrap();
        prop_assert!(te >= 0.0);
        let back = nf_from_te(te).unwrap();
        prop_assert!((back - nf_db).abs() <= 1e-12 * nf_db.max(1.0));
    }

    #[test]
    fn attenuator_te_monotone_in_loss(loss in 0.0_f64..40.0, bump in 0.001_f64..5.0, t in 0.1_f64..400.0) {
        let base = attenuator_te(loss, t).unwrap();
        let more = attenuator_te(loss + bump, t).unwrap();
        prop_assert!(more > base);
    }

    #[test]
    fn y_factor_inverts_forward_model(
        te in 0.0_f64..5000.0,
        t_cold in 0.5_f64..300.0,
        excess in 1.0_f64..10_000.0,
    ) {
        let t_hot = t_cold + excess;
        let src = NoiseSource::from_temperatures(t_hot, t_cold).unwrap();
        let y = y_from_te(&src, te).unwrap();
        let m = NoiseMeasurement::from_y(src, y).unwrap();
        let back = y_factor_te(&m).unwrap();
        prop_assert!((back - te).abs() <= 1e-9 * te.max(1.0), "{back} vs {te}");
    }

    #[test]
    fn distributed_cable_converges_from_64_to_128(
        loss_db in 0.0_f64..20.0,
        t_in in 3.0_f64..300.0,
        t_out in 3.0_f64..300.0,
    ) {
        let at = |n: u32| {
            cable_effective_te(loss_db, t_in, t_out, &CableThermalModel::Distributed { segments: n })
                .unwrap()
        };
        let coarse = at(64);
        let fine = at(128);
        // Scale against a floor so a 0 dB cable (0 K exactly) passes too.
        prop_assert!((fine - coarse).abs() <= 1e-3 * fine.abs().max(1e-9));
    }

    #[test]
    fn distributed_cable_with_uniform_temperature_is_an_attenuator(
        loss_db in 0.0_f64..30.0,
        t in 0.0_f64..400.0,
        segments in 1u32..200,
    ) {
        let te = cable_effective_te(loss_db, t, t, &CableThermalModel::Distributed { segments })
            .unwrap();
        let want = attenuator_te(loss_db, t).unwrap();
        prop_assert!((te - want).abs() <= 1e-9 * want.max(1e-9), "{te} vs {want}");
    }

    // Central oracle: build source->DUT->backend, read off the cascade's
    // system temperature, then de-embed and compare with what was injected.
    #[test]
    fn deembed_recovers_injected_dut_te(
        cable_loss in 0.0_f64..10.0,
        t_top in 3.0_f64..300.0,
        t_bottom in 3.0_f64..300.0,
        pad_loss in 0.0_f64..20.0,
        pad_t in 3.0_f64..300.0,
        te_dut in 2.0_f64..20.0,
        dut_gain_db in 10.0_f64..45.0,
        backend_te in 0.0_f64..2000.0,
        backend_gain_db in 0.0_f64..40.0,
    ) {
        let input_elements = vec![
            ChainElement::cable(
                "line",
                cable_loss,
                t_top,
                t_bottom,
                CableThermalModel::Distributed { segments: 64 },
            ),
            ChainElement::attenuator("pad", pad_loss, pad_t),
        ];
        let mut full = input_elements.clone();
        full.push(ChainElement::amplifier_db("dut", dut_gain_db, te_dut));
        full.push(ChainElement::amplifier_db("backend", backend_gain_db, backend_te));

        let grid = FrequencyGrid::new(vec![6.0e9]).unwrap();
        let report = cascade_noise(&SignalChain::new(full).unwrap(), &grid).unwrap();
        let te_sys = report.te_k[0];

        let ctx = DeembedContext {
            input_chain: SignalChain::new(input_elements).unwrap(),
            backend_te_k: backend_te,
            dut_gain_db,
        };
        let recovered = deembed_dut_te(te_sys, &ctx, 6.0e9).unwrap().te_dut_k;
        prop_assert!(
            (recovered - te_dut).abs() <= 1e-6 * te_dut,
            "recovered {recovered}, injected {te_dut}"
        );
    }

    #[test]
    fn deembed_monotone_in_system_and_backend_temperatures(
        te_sys in 500.0_f64..2000.0,
        backend_te in 0.0_f64..500.0,
    ) {
        let ctx = |backend: f64| DeembedContext {
            input_chain: SignalChain::new(vec![ChainElement::attenuator("pad", 20.0, 3.6)])
                .unwrap(),
            backend_te_k: backend,
            dut_gain_db: 30.0,
        };
        let base = deembed_dut_te(te_sys, &ctx(backend_te), 6.0e9).unwrap().te_dut_k;
        let hotter_sys = deembed_dut_te(te_sys + 50.0, &ctx(backend_te), 6.0e9).unwrap().te_dut_k;
        prop_assert!(hotter_sys > base);
        let hotter_backend = deembed_dut_te(te_sys, &ctx(backend_te + 50.0), 6.0e9);
        match hotter_backend {
            Ok(res) => prop_assert!(res.te_dut_k < base),
            // Larger backend subtraction can legitimately cross zero.
            Err(cryochain_core::noisecal::NoiseCalError::OvercorrectedDeembed { .. }) => {}
            Err(e) => return Err(TestCaseError::fail(format!("unexpected error {e}"))),
        }
    }

    // Splitting a chain anywhere and Friis-combining the halves by hand
    // reproduces the full cascade.
    #[test]
    fn cascade_noise_composes_across_a_cut(
        loss1 in 0.0_f64..10.0,
        t1 in 1.0_f64..300.0,
        gain2 in 0.0_f64..40.0,
        te2 in 0.0_f64..100.0,
        loss3 in 0.0_f64..10.0,
        t3 in 1.0_f64..300.0,
        gain4 in 0.0_f64..30.0,
        te4 in 0.0_f64..500.0,
    ) {
        let grid = FrequencyGrid::new(vec![5.0e9]).unwrap();
        let front = vec![
            ChainElement::attenuator("a", loss1, t1),
            ChainElement::amplifier_db("b", gain2, te2),
        ];
        let back = vec![
            ChainElement::attenuator("c", loss3, t3),
            ChainElement::amplifier_db("d", gain4, te4),
        ];
        let mut all = front.clone();
        all.extend(back.clone());

        let whole = cascade_noise(&SignalChain::new(all).unwrap(), &grid).unwrap();
        let head = cascade_noise(&SignalChain::new(front).unwrap(), &grid).unwrap();
        let tail = cascade_noise(&SignalChain::new(back).unwrap(), &grid).unwrap();

        let head_gain = cryochain_core::rfnet::db_to_linear(head.gain_db[0]);
        let combined = head.te_k[0] + tail.te_k[0] / head_gain;
        prop_assert!(
            (combined - whole.te_k[0]).abs() <= 1e-9 * whole.te_k[0].max(1.0),
            "{combined} vs {}", whole.te_k[0]
        );
        let gain_sum = head.gain_db[0] + tail.gain_db[0];
        prop_assert!((gain_sum - whole.gain_db[0]).abs() <= 1e-9);
    }

    #[test]
    fn contributions_sum_to_the_total(
        loss in 0.0_f64..20.0,
        t in 1.0_f64..300.0,
        gain in 10.0_f64..45.0,
        te in 0.0_f64..50.0,
        backend_te in 0.0_f64..500.0,
    ) {
        let grid = FrequencyGrid::linspace(4.0e9, 8.0e9, 7).unwrap();
        let chain = SignalChain::new(vec![
            ChainElement::attenuator("pad", loss, t),
            ChainElement::amplifier_db("lna", gain, te),
            ChainElement::amplifier_db("backend", 20.0, backend_te),
        ])
        .unwrap();
        let report = cascade_noise(&chain, &grid).unwrap();
        for fi in 0..grid.len() {
            let sum: f64 = report.contributions.iter().map(|c| c.te_k[fi]).sum();
            prop_assert!((sum - report.te_k[fi]).abs() <= 1e-9 * report.te_k[fi].max(1.0));
        }
    }
}

#[test]
fn cold_attenuator_reference_values() {
    close_rel(attenuator_te(20.0, 3.6).unwrap(), 356.4, 1e-12);
    let m = CableThermalModel::Midpoint { t_mid_k: 40.0 };
    close_rel(cable_effective_te(6.0, 296.0, 3.6, &m).unwrap(), 119.24286822139895, 1e-12);
}

// The distributed model should land between the two thermal extremes and
// react to which end of the gradient faces the signal input.
#[test]
fn distributed_cable_orientation_matters() {
    let d = CableThermalModel::Distributed { segments: 64 };
    let hot_first = cable_effective_te(6.0, 296.0, 3.6, &d).unwrap();
    let cold_first = cable_effective_te(6.0, 3.6, 296.0, &d).unwrap();
    // Later segments weigh more; a cold output end suppresses them.
    assert!(hot_first < cold_first, "{hot_first} vs {cold_first}");
    let uniform_cold = attenuator_te(6.0, 3.6).unwrap();
    let uniform_hot = attenuator_te(6.0, 296.0).unwrap();
    for v in [hot_first, cold_first] {
        assert!(v > uniform_cold && v < uniform_hot);
    }
}
