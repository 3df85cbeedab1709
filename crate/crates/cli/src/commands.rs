use std::path::PathBuf;

use clap::Args;
use impa_core::array::{
    characteristic_impedance, flux_for_frequency, resonance_frequency, tunability_curve,
};
use impa_core::network::{bandwidth, calibrate_pump, instability_threshold, saturation_scaling};
use impa_core::snail::{cell_inductance, g_coefficients, taylor_coefficients};
use impa_core::synthesis::synthesize;
use impa_core::{sweep, Band, CoilCalibration, DeviceDesign, Error, FluxBias, PrototypeSpec};

use crate::error::CliError;
use crate::format::{emit, Csv, JsonObject};
use crate::spec_file::DeviceSpecFile;
use crate::svg::{line_plot, Series};

#[derive(Debug, Args)]
pub struct SpecArg {
    /// Device specification file (TOML)
    #[arg(long, value_name = "PATH")]
    pub spec: PathBuf,
}

#[derive(Debug, Args)]
pub struct Output {
    /// Write the table here instead of stdout
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Also write an SVG plot of the table
    #[arg(long, value_name = "PATH")]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct FluxGrid {
    /// Number of flux points
    #[arg(long, default_value_t = 101)]
    pub grid: usize,
    /// First flux fraction, units of the flux quantum
    #[arg(long, default_value_t = 0.0)]
    pub flux_min: f64,
    /// Last flux fraction, units of the flux quantum
    #[arg(long, default_value_t = 0.5)]
    pub flux_max: f64,
}

impl FluxGrid {
    fn points(&self) -> Result<Vec<f64>, CliError> {
        if self.grid == 0 {
            return Err(CliError::input("empty grid: --grid must be at least 1"));
        }
        finite("--flux-min", self.flux_min)?;
        finite("--flux-max", self.flux_max)?;
        if self.grid > 1 && self.flux_min >= self.flux_max {
            return Err(CliError::input(format!(
                "--flux-min ({}) must be below --flux-max ({})",
                self.flux_min, self.flux_max
            )));
        }
        Ok(sweep::linspace(self.flux_min, self.flux_max, self.grid))
    }
}

fn finite(name: &str, v: f64) -> Result<(), CliError> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(CliError::input(format!("{name} must be finite, got {v}")))
    }
}

fn positive(name: &str, v: f64) -> Result<(), CliError> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(CliError::input(format!("{name} must be positive, got {v}")))
    }
}

fn write_svg(
    path: &Option<PathBuf>,
    x_label: &str,
    y_label: &str,
    series: &[Series<'_>],
) -> Result<(), CliError> {
    match path {
        Some(p) => emit(Some(p), &line_plot(x_label, y_label, series)),
        None => Ok(()),
    }
}

#[derive(Debug, Args)]
pub struct CharacterizeArgs {
    #[command(flatten)]
    pub spec: SpecArg,
    #[command(flatten)]
    pub grid: FluxGrid,
    #[command(flatten)]
    pub output: Output,
}

pub fn characterize(args: &CharacterizeArgs) -> Result<(), CliError> {
    let spec = DeviceSpecFile::load(&args.spec.spec)?;
    let fluxes = args.grid.points()?;
    let array = spec.array;
    let rows = sweep::try_map(&fluxes, |&frac| -> Result<[f64; 9], CliError> {
        let at = |e: Error| CliError::from_core(e, format!("flux fraction {frac}"));
        let flux = FluxBias::from_fraction(frac);
        let t = taylor_coefficients(flux, &array.cell).map_err(at)?;
        let (g3, g4) =
            g_coefficients(flux, &array.cell, array.m_snails(), array.capacitance()).map_err(at)?;
        let l_s = cell_inductance(flux, &array.cell).map_err(at)?;
        let f0 = resonance_frequency(&array, flux).map_err(at)?;
        Ok([
            frac,
            t.phi_min,
            t.c2,
            t.c3,
            t.c4,
            g3,
            g4,
            l_s * 1e12,
            f0 * 1e-9,
        ])
    })?;

    let mut csv = Csv::new(&[
        "flux_fraction_Phi0",
        "phi_min_rad",
        "c2_EJ",
        "c3_EJ",
        "c4_EJ",
        "g3_Hz",
        "g4_Hz",
        "L_s_pH",
        "f0_GHz",
    ]);
    for r in &rows {
        csv.row(r);
    }
    emit(args.output.out.as_deref(), &csv.into_string())?;

    let column = |k: usize| rows.iter().map(|r| (r[0], r[k])).collect::<Vec<_>>();
    write_svg(
        &args.output.svg,
        "flux fraction (Phi0)",
        "potential coefficient (E_J)",
        &[
            Series {
                label: "c2",
                points: column(2),
            },
            Series {
                label: "c3",
                points: column(3),
            },
            Series {
                label: "c4",
                points: column(4),
            },
        ],
    )
}

#[derive(Debug, Args)]
pub struct DesignArgs {
    #[command(flatten)]
    pub spec: SpecArg,
    /// Chebyshev prototype order
    #[arg(long, default_value_t = 2)]
    pub order: usize,
    /// Passband ripple, dB
    #[arg(long, default_value_t = 0.65)]
    pub ripple_db: f64,
    /// Fractional bandwidth
    #[arg(long, default_value_t = 0.177)]
    pub fbw: f64,
    /// Center frequency, GHz (defaults to the transformer center in the spec)
    #[arg(long)]
    pub target_ghz: Option<f64>,
    /// Write the JSON here instead of stdout
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

pub fn design(args: &DesignArgs) -> Result<(), CliError> {
    let spec = DeviceSpecFile::load(&args.spec.spec)?;
    let center = match args.target_ghz {
        Some(ghz) => {
            positive("--target-ghz", ghz)?;
            ghz * 1e9
        }
        None => spec.center_frequency,
    };
    let ctx = |e: Error| CliError::from_core(e, "design");
    let proto = PrototypeSpec::chebyshev(
        args.order,
        args.ripple_db,
        args.fbw,
        center,
        spec.source_impedance,
    )
    .map_err(ctx)?;
    let frac = flux_for_frequency(&spec.array, center).map_err(ctx)?;
    let flux = FluxBias::from_fraction(frac);
    let l_array = impa_core::array::array_inductance(&spec.array, flux).map_err(ctx)?;
    let z_jpa = characteristic_impedance(&spec.array, flux).map_err(ctx)?;
    let t = synthesize(&proto, &spec.array, flux).map_err(ctx)?;

    let mut json = JsonObject::new();
    json.num("b_slope_S", t.b_slope)?
        .num("center_frequency_GHz", center * 1e-9)?
        .num("center_frequency_Hz", center)?
        .num("fractional_bandwidth", args.fbw)?
        .num("l_array_H", l_array)?
        .num("l_array_nH", l_array * 1e9)?
        .num("operating_flux_Phi0", frac)?
        .int("order", args.order as u64)
        .num("ripple_dB", args.ripple_db)?
        .num("source_impedance_ohm", spec.source_impedance)?
        .num("x_slope_ohm", t.x_slope)?
        .num("z_half_ohm", t.z_half)?
        .num("z_jpa_ohm", z_jpa)?
        .num("z_quarter_ohm", t.z_quarter)?;
    for (k, g) in proto.g_values().iter().enumerate() {
        json.num(&format!("g_{k}"), *g)?;
    }
    emit(args.out.as_deref(), &json.render())
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct GainArgs {
    #[command(flatten)]
    pub spec: SpecArg,
    /// Calibrate the pump to this peak gain, dB
    #[arg(long, conflicts_with = "rp")]
    pub gain_db: Option<f64>,
    /// Explicit pump strength (negative resistance), ohms; 0 means pump off
    #[arg(long)]
    pub rp: Option<f64>,
    /// Gain level that defines the bandwidth, dB
    #[arg(long, default_value_t = 17.0)]
    pub threshold_db: f64,
    /// Sweep start, GHz (defaults to center - 1 GHz)
    #[arg(long)]
    pub f_min_ghz: Option<f64>,
    /// Sweep stop, GHz (defaults to center + 1 GHz)
    #[arg(long)]
    pub f_max_ghz: Option<f64>,
    /// Number of frequency points
    #[arg(long, default_value_t = 2001)]
    pub grid: usize,
    /// Loss per transformer section at the center frequency, dB
    #[arg(long, default_value_t = 0.0)]
    pub line_loss_db: f64,
    /// Write the JSON summary here (with --out and no --summary it goes to stdout)
    #[arg(long, value_name = "PATH")]
    pub summary: Option<PathBuf>,
    #[command(flatten)]
    pub output: Output,
}

pub fn gain(args: &GainArgs) -> Result<(), CliError> {
    let spec = DeviceSpecFile::load(&args.spec.spec)?;
    if args.grid == 0 {
        return Err(CliError::input("empty grid: --grid must be at least 1"));
    }
    finite("--threshold-db", args.threshold_db)?;
    let center = spec.center_frequency;
    let f_start = args.f_min_ghz.map_or(center - 1e9, |g| g * 1e9);
    let f_stop = args.f_max_ghz.map_or(center + 1e9, |g| g * 1e9);
    positive("--f-min-ghz", f_start)?;
    positive("--f-max-ghz", f_stop)?;
    if args.grid > 1 && f_start >= f_stop {
        return Err(CliError::input("--f-min-ghz must be below --f-max-ghz"));
    }
    let band = Band {
        f_start,
        f_stop,
        points: args.grid,
    };

    let ctx = |e: Error| CliError::from_core(e, "gain");
    let design = DeviceDesign::tuned(
        spec.array,
        spec.z_quarter,
        spec.z_half,
        center,
        spec.source_impedance,
    )
    .and_then(|d| d.with_line_loss(args.line_loss_db))
    .map_err(ctx)?;
    let critical = instability_threshold(&design, band);
    let rp = match (args.gain_db, args.rp) {
        (Some(target), _) => calibrate_pump(&design, target, band).map_err(ctx)?,
        (None, Some(rp)) => rp,
        (None, None) => 0.0,
    };
    if let Some(c) = critical {
        if rp >= c {
            return Err(ctx(Error::Unstable { critical_rp: c }));
        }
    }
    let pumped = design.with_pump(rp).map_err(ctx)?;
    let profile = band.profile(&pumped).map_err(ctx)?;

    let mut csv = Csv::new(&["frequency_GHz", "gain_dB", "re_gamma", "im_gamma"]);
    for s in profile.samples() {
        csv.row(&[s.frequency * 1e-9, s.gain_db, s.gamma.re, s.gamma.im]);
    }
    emit(args.output.out.as_deref(), &csv.into_string())?;

    let peak = profile
        .peak()
        .ok_or_else(|| CliError::numerical("gain: empty profile"))?;
    let bw = bandwidth(&profile, args.threshold_db);
    let mut json = JsonObject::new();
    json.num("bandwidth_Hz", bw)?
        .num("bandwidth_MHz", bw * 1e-6)?
        .num("center_frequency_Hz", center)?
        .int(
            "local_maxima",
            profile.local_maxima(args.threshold_db).len() as u64,
        )
        .num("operating_flux_Phi0", design.operating_flux.frac())?
        .num("peak_frequency_GHz", peak.frequency * 1e-9)?
        .num("peak_frequency_Hz", peak.frequency)?
        .num("peak_gain_dB", peak.gain_db)?
        .num("pump_rp_ohm", rp)?
        .num("threshold_dB", args.threshold_db)?
        .num("z_jpa_ohm", design.transformer.z_jpa_target)?;
    if let Some(c) = critical {
        json.num("critical_rp_ohm", c)?;
    }
    match (&args.summary, &args.output.out) {
        (Some(path), _) => emit(Some(path), &json.render())?,
        (None, Some(_)) => emit(None, &json.render())?,
        (None, None) => {}
    }

    let points = profile
        .samples()
        .iter()
        .map(|s| (s.frequency * 1e-9, s.gain_db))
        .collect();
    write_svg(
        &args.output.svg,
        "frequency (GHz)",
        "gain (dB)",
        &[Series {
            label: "gain",
            points,
        }],
    )
}

#[derive(Debug, Args)]
pub struct TuneArgs {
    #[command(flatten)]
    pub spec: SpecArg,
    #[command(flatten)]
    pub grid: FluxGrid,
    /// Coil calibration `I1_mA,FLUX1,I2_mA,FLUX2`; overrides the spec file
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub coil_cal: Option<Vec<f64>>,
    #[command(flatten)]
    pub output: Output,
}

pub fn tune(args: &TuneArgs) -> Result<(), CliError> {
    let spec = DeviceSpecFile::load(&args.spec.spec)?;
    let fluxes = args.grid.points()?;
    let coil = match &args.coil_cal {
        Some(v) => {
            if v.len() != 4 {
                return Err(CliError::input(format!(
                    "--coil-cal expects 4 comma-separated values, got {}",
                    v.len()
                )));
            }
            for x in v {
                finite("--coil-cal", *x)?;
            }
            Some(
                CoilCalibration::new((v[0] * 1e-3, v[1]), (v[2] * 1e-3, v[3]))
                    .map_err(|e| CliError::from_core(e, "--coil-cal"))?,
            )
        }
        None => spec.coil()?,
    };
    let curve =
        tunability_curve(&spec.array, &fluxes).map_err(|e| CliError::from_core(e, "tune"))?;

    let mut csv = match coil {
        Some(_) => Csv::new(&["flux_fraction_Phi0", "coil_current_mA", "f0_GHz"]),
        None => Csv::new(&["flux_fraction_Phi0", "f0_GHz"]),
    };
    for &(frac, f0) in curve.samples() {
        match &coil {
            Some(c) => {
                let current = c.current_at(frac).ok_or_else(|| {
                    CliError::input("coil calibration has the same flux at both points")
                })?;
                csv.row(&[frac, current * 1e3, f0 * 1e-9]);
            }
            None => csv.row(&[frac, f0 * 1e-9]),
        }
    }
    emit(args.output.out.as_deref(), &csv.into_string())?;

    let points = curve
        .samples()
        .iter()
        .map(|&(x, f)| (x, f * 1e-9))
        .collect();
    write_svg(
        &args.output.svg,
        "flux fraction (Phi0)",
        "resonance (GHz)",
        &[Series {
            label: "f0",
            points,
        }],
    )
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct SaturationArgs {
    /// Critical current relative to the reference device
    #[arg(long)]
    pub ic_ratio: f64,
    /// External quality factor relative to the reference device
    #[arg(long)]
    pub q_ratio: f64,
    /// Write the JSON here instead of stdout
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

pub fn saturation(args: &SaturationArgs) -> Result<(), CliError> {
    let ratio = saturation_scaling(args.ic_ratio, args.q_ratio)
        .map_err(|e| CliError::from_core(e, "saturation"))?;
    let mut json = JsonObject::new();
    json.num("ic_ratio", args.ic_ratio)?
        .num("power_ratio", ratio)?
        .num("power_ratio_db", 10.0 * ratio.log10())?
        .num("q_ratio", args.q_ratio)?;
    emit(args.out.as_deref(), &json.render())
}
