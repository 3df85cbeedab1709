use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_impa");

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn device() -> String {
    fixture("device.toml").display().to_string()
}

fn scratch(name: &str) -> PathBuf {
    Path::new(env!("CARGO_TARGET_TMPDIR")).join(format!("cli-{name}"))
}

fn impa(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn assert_diagnostic(out: &Output, code: i32, needle: &str) {
    assert_eq!(
        out.status.code(),
        Some(code),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let err = String::from_utf8_lossy(&out.stderr);
    assert_eq!(
        err.trim_end().lines().count(),
        1,
        "diagnostic spans lines: {err}"
    );
    assert!(err.starts_with("error["), "{err}");
    assert!(err.contains(needle), "expected {needle:?} in {err}");
}

fn rows(csv: &str) -> Vec<Vec<f64>> {
    csv.lines()
        .skip(1)
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect()
}

fn write_spec(name: &str, text: &str) -> String {
    let path = scratch(name);
    std::fs::write(&path, text).unwrap();
    path.display().to_string()
}

#[test]
fn characterize_three_points() {
    let csv = stdout(&impa(&["characterize", "--spec", &device(), "--grid", "3"]));
    let header = csv.lines().next().unwrap();
    assert_eq!(
        header,
        "flux_fraction_Phi0,phi_min_rad,c2_EJ,c3_EJ,c4_EJ,g3_Hz,g4_Hz,L_s_pH,f0_GHz"
    );
    let r = rows(&csv);
    assert_eq!(r.len(), 3);
    assert_eq!(r[1][0], 0.25);
    assert_eq!(r[0][3], 0.0);
    assert_eq!(r[2][3], 0.0);
    assert!(r[1][3] < 0.0);
    assert!((r[0][8] - 8.992).abs() < 1e-3);
}

#[test]
fn characterize_rejects_empty_grid() {
    assert_diagnostic(
        &impa(&["characterize", "--spec", &device(), "--grid", "0"]),
        2,
        "empty grid",
    );
}

#[test]
fn csv_is_lf_without_trailing_delimiter() {
    let csv = stdout(&impa(&["tune", "--spec", &device(), "--grid", "5"]));
    assert!(!csv.contains('\r'));
    assert!(csv.ends_with('\n'));
    assert!(csv.lines().all(|l| !l.ends_with(',')));
}

#[test]
fn design_matches_array_impedance() {
    let json: serde_json::Value = serde_json::from_str(&stdout(&impa(&[
        "design",
        "--spec",
        &device(),
        "--target-ghz",
        "6.4",
    ])))
    .unwrap();
    let z_jpa = json["z_jpa_ohm"].as_f64().unwrap();
    let l = json["l_array_H"].as_f64().unwrap();
    assert!((z_jpa - (l / 30e-15).sqrt()).abs() / z_jpa < 1e-9);
    assert!(
        (json["x_slope_ohm"].as_f64().unwrap() - std::f64::consts::FRAC_PI_2 * z_jpa).abs() < 1e-6
    );
    assert!((json["z_quarter_ohm"].as_f64().unwrap() - 87.0).abs() < 0.15 * 87.0);
    assert!((json["l_array_nH"].as_f64().unwrap() - l * 1e9).abs() < 1e-9);
}

#[test]
fn design_fitted_prototype_recovers_quarter_section() {
    let out = impa(&[
        "design",
        "--spec",
        &device(),
        "--ripple-db",
        "0.65",
        "--fbw",
        "0.17672413793103448",
    ]);
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let zq = json["z_quarter_ohm"].as_f64().unwrap();
    assert!((zq - 87.0).abs() < 0.15 * 87.0, "{zq}");
}

#[test]
fn design_out_of_range_target() {
    assert_diagnostic(
        &impa(&["design", "--spec", &device(), "--target-ghz", "20"]),
        1,
        "outside tunable range",
    );
}

#[test]
fn gain_pump_off_is_flat() {
    let csv = stdout(&impa(&["gain", "--spec", &device(), "--grid", "401"]));
    assert_eq!(
        csv.lines().next().unwrap(),
        "frequency_GHz,gain_dB,re_gamma,im_gamma"
    );
    let r = rows(&csv);
    assert_eq!(r.len(), 401);
    assert!(r.iter().all(|row| row[1].abs() < 1e-6));
}

#[test]
fn gain_calibrated_summary() {
    let csv = scratch("gain.csv");
    let summary = scratch("gain_summary.json");
    let out = impa(&[
        "gain",
        "--spec",
        &device(),
        "--gain-db",
        "20",
        "--threshold-db",
        "17",
        "--out",
        csv.to_str().unwrap(),
        "--summary",
        summary.to_str().unwrap(),
    ]);
    assert!(stdout(&out).is_empty());
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&summary).unwrap()).unwrap();
    assert!(json["bandwidth_Hz"].as_f64().unwrap() > 0.0);
    assert!((json["peak_gain_dB"].as_f64().unwrap() - 20.0).abs() < 0.01);
    assert!(json["pump_rp_ohm"].as_f64().unwrap() < json["critical_rp_ohm"].as_f64().unwrap());
    assert_eq!(rows(&std::fs::read_to_string(&csv).unwrap()).len(), 2001);
}

#[test]
fn gain_summary_goes_to_stdout_when_csv_is_redirected() {
    let csv = scratch("gain_redirect.csv");
    let out = impa(&[
        "gain",
        "--spec",
        &device(),
        "--rp",
        "100",
        "--grid",
        "101",
        "--out",
        csv.to_str().unwrap(),
    ]);
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["pump_rp_ohm"].as_f64(), Some(100.0));
}

#[test]
fn gain_unstable_reports_critical_pump() {
    let out = impa(&[
        "gain",
        "--spec",
        &device(),
        "--gain-db",
        "200",
        "--grid",
        "201",
    ]);
    assert_diagnostic(&out, 1, "instability point r_p = 151.3");
    let out = impa(&["gain", "--spec", &device(), "--rp", "160", "--grid", "201"]);
    assert_diagnostic(&out, 1, "instability");
}

#[test]
fn gain_rejects_decimal_comma() {
    assert_diagnostic(
        &impa(&["gain", "--spec", &device(), "--gain-db", "11,5"]),
        2,
        "11,5",
    );
}

#[test]
fn gain_rejects_both_pump_options() {
    let out = impa(&[
        "gain",
        "--spec",
        &device(),
        "--gain-db",
        "20",
        "--rp",
        "100",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn tune_is_monotone() {
    let csv = stdout(&impa(&["tune", "--spec", &device(), "--grid", "101"]));
    assert_eq!(
        csv.lines().next().unwrap(),
        "flux_fraction_Phi0,coil_current_mA,f0_GHz"
    );
    let r = rows(&csv);
    assert_eq!(r.len(), 101);
    assert!(r.windows(2).all(|w| w[1][2] <= w[0][2]));
    assert!((r[100][1] - 2.5).abs() < 1e-12);
}

#[test]
fn tune_single_point_is_zero_flux_maximum() {
    let spec = write_spec(
        "no_coil.toml",
        std::fs::read_to_string(fixture("device.toml"))
            .unwrap()
            .split("[[coil_calibration]]")
            .next()
            .unwrap(),
    );
    let csv = stdout(&impa(&["tune", "--spec", &spec, "--grid", "1"]));
    assert_eq!(csv.lines().next().unwrap(), "flux_fraction_Phi0,f0_GHz");
    let r = rows(&csv);
    assert_eq!(r.len(), 1);
    assert!((r[0][1] - 8.992).abs() < 1e-3);
}

#[test]
fn tune_degenerate_calibration() {
    let out = impa(&["tune", "--spec", &device(), "--coil-cal", "1,0.1,1,0.3"]);
    assert_diagnostic(&out, 2, "coincide");
}

#[test]
fn saturation_laws() {
    for (ic, q, ratio, db) in [
        ("1", "1", 1.0, 0.0),
        ("2", "1", 4.0, 6.0206),
        ("1", "2", 0.125, -9.0309),
    ] {
        let json: serde_json::Value = serde_json::from_str(&stdout(&impa(&[
            "saturation",
            "--ic-ratio",
            ic,
            "--q-ratio",
            q,
        ])))
        .unwrap();
        assert_eq!(json["power_ratio"].as_f64(), Some(ratio));
        assert!((json["power_ratio_db"].as_f64().unwrap() - db).abs() < 1e-4);
    }
    assert_diagnostic(
        &impa(&["saturation", "--ic-ratio", "0", "--q-ratio", "1"]),
        2,
        "ic_ratio",
    );
    assert_diagnostic(
        &impa(&["saturation", "--ic-ratio", "1", "--q-ratio", "-1"]),
        2,
        "q_ratio",
    );
}

#[test]
fn spec_errors_name_the_field() {
    let base = std::fs::read_to_string(fixture("device.toml")).unwrap();
    let spec = write_spec(
        "bad_field.toml",
        &base.replace("capacitance_fF = 30.0", "capacitance_fF = 0.0"),
    );
    assert_diagnostic(
        &impa(&["characterize", "--spec", &spec]),
        2,
        "array.capacitance_fF",
    );
    let spec = write_spec(
        "unknown.toml",
        &base.replace("n_large = 3", "n_large = 3\nbeta = 1.0"),
    );
    assert_diagnostic(&impa(&["characterize", "--spec", &spec]), 2, "beta");
    let spec = write_spec("comma.toml", &base.replace("alpha = 0.18", "alpha = 0,18"));
    assert_diagnostic(
        &impa(&["characterize", "--spec", &spec]),
        2,
        "line 5, column 10",
    );
    assert_diagnostic(
        &impa(&["characterize", "--spec", "/nonexistent.toml"]),
        2,
        "cannot read",
    );
}

#[test]
fn svg_is_written_on_request() {
    let svg = scratch("tune.svg");
    let out = impa(&[
        "tune",
        "--spec",
        &device(),
        "--grid",
        "11",
        "--svg",
        svg.to_str().unwrap(),
    ]);
    let csv = stdout(&out);
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg"));
    assert_eq!(text.matches("<polyline").count(), 1);
    let polyline = text.lines().find(|l| l.starts_with("<polyline")).unwrap();
    let n_points = polyline
        .split("points=\"")
        .nth(1)
        .unwrap()
        .split(' ')
        .count();
    assert_eq!(n_points, rows(&csv).len());
}
