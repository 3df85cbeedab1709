use std::f64::consts::PI;

use impa_core::array::ArraySpec;
use impa_core::network::{
    bandwidth, calibrate_pump, cascade, default_band, gain_profile, input_reflection,
    instability_threshold, jpa_termination, line_matrix, saturation_scaling, series_element_matrix,
    Band,
};
use impa_core::{DeviceDesign, Error, SnailParams};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};

fn device() -> DeviceDesign {
    let cell = SnailParams::new(0.18, 3, 80e-12).unwrap();
    let array = ArraySpec::new(cell, 67, 30e-15).unwrap();
    DeviceDesign::tuned(array, 87.0, 59.0, 6.4e9, 50.0).unwrap()
}

fn branch_resonance(d: &DeviceDesign) -> f64 {
    1.0 / (2.0 * PI * (d.l_array() * d.array.capacitance()).sqrt())
}

#[test]
fn termination_at_branch_resonance() {
    let d = device();
    let f = branch_resonance(&d);
    let z = jpa_termination(&d, f);
    assert!(z.norm() < 1e-9, "{z}");
    let pumped = d.with_pump(5.0).unwrap();
    let z = jpa_termination(&pumped, f);
    assert_eq!(z.re, -5.0);
    assert!(z.im.abs() < 1e-9);
}

#[test]
fn branch_reactance_changes_sign_once() {
    let d = device();
    let f0 = branch_resonance(&d);
    let signs: Vec<f64> = (0..10_000)
        .map(|i| f0 * (0.2 + 1.6 * i as f64 / 9_999.0))
        .map(|f| jpa_termination(&d, f).im.signum())
        .collect();
    let changes = signs.windows(2).filter(|w| w[0] != w[1]).count();
    assert_eq!(changes, 1);
}

#[test]
fn pump_off_is_lossless_mirror() {
    let d = device();
    let band = default_band(6.4e9);
    let p = band.profile(&d).unwrap();
    assert_eq!(p.samples().len(), 2001);
    for s in p.samples() {
        assert!((s.gamma.norm() - 1.0).abs() < 1e-9);
        assert!(s.gain_db.abs() < 1e-6);
    }
}

#[test]
fn lossy_lines_are_passive() {
    let d = device().with_line_loss(0.5).unwrap();
    let p = gain_profile(&d, 5.4e9, 7.4e9, 401).unwrap();
    assert!(p.samples().iter().all(|s| s.gamma.norm() < 1.0));
}

#[test]
fn small_pump_amplifies_at_peak() {
    let d = device().with_pump(10.0).unwrap();
    let p = default_band(6.4e9).profile(&d).unwrap();
    assert!(p.peak().unwrap().gamma.norm() > 1.0);
}

#[test]
fn peak_gain_increases_with_pump() {
    let base = device();
    let band = default_band(6.4e9);
    let critical = instability_threshold(&base, band).unwrap();
    let peaks: Vec<f64> = (0..12)
        .map(|i| critical * (0.02 + 0.08 * i as f64))
        .map(|rp| {
            band.profile(&base.with_pump(rp).unwrap())
                .unwrap()
                .peak()
                .unwrap()
                .gain_db
        })
        .collect();
    assert!(peaks.windows(2).all(|w| w[1] > w[0]), "{peaks:?}");
}

#[test]
fn instability_point_of_device() {
    // at center the λ/2 section is transparent and the λ/4 section presents 87²/50
    let critical = instability_threshold(&device(), default_band(6.4e9)).unwrap();
    assert!((critical - 87.0 * 87.0 / 50.0).abs() < 1e-6, "{critical}");
}

#[test]
fn calibration_closes_the_loop() {
    let d = device();
    let band = default_band(6.4e9);
    let rp = calibrate_pump(&d, 20.0, band).unwrap();
    let peak = band
        .profile(&d.with_pump(rp).unwrap())
        .unwrap()
        .peak()
        .unwrap()
        .gain_db;
    assert!((peak - 20.0).abs() <= 0.01);
    let critical = instability_threshold(&d, band).unwrap();
    assert!(rp < critical);
}

#[test]
fn calibration_monotone_in_target() {
    let d = device();
    let band = Band {
        f_start: 5.4e9,
        f_stop: 7.4e9,
        points: 801,
    };
    let targets = [0.01, 1.0, 5.0, 10.0, 15.0, 20.0, 25.0];
    let pumps: Vec<f64> = targets
        .iter()
        .map(|&t| calibrate_pump(&d, t, band).unwrap())
        .collect();
    assert!(pumps[0] < 1.0);
    assert!(pumps.windows(2).all(|w| w[1] > w[0]), "{pumps:?}");
}

#[test]
fn absurd_gain_is_unstable() {
    match calibrate_pump(&device(), 200.0, default_band(6.4e9)) {
        Err(Error::Unstable { critical_rp }) => assert!((critical_rp - 151.38).abs() < 1e-6),
        other => panic!("expected Unstable, got {other:?}"),
    }
    assert!(calibrate_pump(&device(), 0.0, default_band(6.4e9)).is_err());
}

#[test]
fn calibrated_profile_shape() {
    let d = device();
    let band = default_band(6.4e9);
    let rp = calibrate_pump(&d, 20.0, band).unwrap();
    let p = band.profile(&d.with_pump(rp).unwrap()).unwrap();
    assert!(p.local_maxima(17.0).len() >= 2);
    assert!(bandwidth(&p, 17.0) >= 150e6);
    // designed bandwidth from the recorded prototype fit
    let bw = 0.176_724_137_931_034_48 * 6.4e9;
    let peak = p.peak().unwrap().frequency;
    assert!((peak - 6.4e9).abs() <= 2.0 * bw);
    // thresholds: bandwidth never grows as the bar rises
    let widths: Vec<f64> = (0..40).map(|i| bandwidth(&p, i as f64 * 0.5)).collect();
    assert!(widths.windows(2).all(|w| w[1] <= w[0]));
}

#[test]
fn reflection_sweep_matches_pointwise() {
    let d = device().with_pump(80.0).unwrap();
    let p = gain_profile(&d, 6.0e9, 6.8e9, 17).unwrap();
    for s in p.samples() {
        assert_eq!(s.gamma, input_reflection(&d, s.frequency).unwrap());
    }
    assert!(gain_profile(&d, 6.8e9, 6.0e9, 17).is_err());
    assert!(gain_profile(&d, 6.0e9, 6.8e9, 1).is_err());
}

#[test]
fn saturation_law_is_multiplicative() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(7);
    for _ in 0..100 {
        let (a, b, c, e): (f64, f64, f64, f64) = (
            rng.gen_range(0.1..10.0),
            rng.gen_range(0.1..10.0),
            rng.gen_range(0.1..10.0),
            rng.gen_range(0.1..10.0),
        );
        let joint = saturation_scaling(a * b, c * e).unwrap();
        let split = saturation_scaling(a, c).unwrap() * saturation_scaling(b, e).unwrap();
        assert!((joint / split - 1.0).abs() < 1e-14);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn line_determinant_is_one(z in 1.0f64..1000.0, theta in -10.0f64..10.0) {
        let det = line_matrix(z, theta).determinant();
        prop_assert!((det - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn cascades_stay_reciprocal(
        z1 in 10.0f64..200.0, t1 in 0.0f64..6.3,
        z2 in 10.0f64..200.0, t2 in 0.0f64..6.3,
        x in -500.0f64..500.0,
    ) {
        let m = cascade(&[
            line_matrix(z1, t1),
            series_element_matrix(Complex64::new(0.0, x)),
            line_matrix(z2, t2),
        ]).unwrap();
        prop_assert!((m.determinant() - Complex64::new(1.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn pump_off_reflection_is_unit(f in 1e9f64..12e9) {
        let g = input_reflection(&device(), f).unwrap();
        prop_assert!((g.norm() - 1.0).abs() < 1e-9);
    }
}
