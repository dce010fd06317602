//! Calibration of the dispersive shift and ZZ-versus-detuning sweeps.

use rayon::prelude::*;

use crate::circuit::{BusSpec, DeviceSpec, QubitSpec, TcqSpec};
use crate::error::{Error, Result};
use crate::hamiltonian::{
    bus_bundle, compose_bundles, qubit_bundle, ChargingConvention, SubsystemBundle,
};
use crate::observables::{
    chi, computational_labels, device_spectrum, labeled_spectrum, mode_frequencies,
    static_zz_levels, LabelOptions, Side,
};

/// Coupling element (1/F) between each qubit and the bus used by default.
pub const DEFAULT_GINT: f64 = 6.5e11;
/// `|chi| / 2` both qubit kinds are calibrated to by default (Hz).
pub const DEFAULT_CHI_HALF_TARGET: f64 = 1.0e6;
pub const DEFAULT_CHI_TOLERANCE: f64 = 1.0e3;
pub const DEFAULT_RETUNE_TOLERANCE: f64 = 1.0e4;
pub const MAX_CALIBRATION_ITERATIONS: usize = 60;
const MAX_RETUNE_ITERATIONS: usize = 40;
const BRACKET_STEP: f64 = 1.08;
const MAX_BRACKET_SAMPLES: usize = 40;

/// How a relative junction mismatch `r` splits a total Josephson energy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AsymmetryDefinition {
    /// `ej1,2 = total (1 +- r) / 2`.
    #[default]
    MeanDeviation,
    /// `ej1 / ej2 = 1 + 2r` at fixed total. Agrees with the mean deviation to first order.
    Ratio,
}

impl AsymmetryDefinition {
    pub fn name(self) -> &'static str {
        match self {
            AsymmetryDefinition::MeanDeviation => "mean-deviation",
            AsymmetryDefinition::Ratio => "ratio",
        }
    }
}

impl std::str::FromStr for AsymmetryDefinition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mean-deviation" => Ok(AsymmetryDefinition::MeanDeviation),
            "ratio" => Ok(AsymmetryDefinition::Ratio),
            other => Err(Error::invalid(
                "asymmetry_definition",
                format!("unknown definition `{other}`"),
            )),
        }
    }
}

/// Splits `ej_total` into `(ej1, ej2)` with relative mismatch `r`.
pub fn apply_asymmetry(ej_total: f64, r: f64) -> Result<(f64, f64)> {
    apply_asymmetry_with(ej_total, r, AsymmetryDefinition::MeanDeviation)
}

pub fn apply_asymmetry_with(
    ej_total: f64,
    r: f64,
    definition: AsymmetryDefinition,
) -> Result<(f64, f64)> {
    if !(ej_total.is_finite() && ej_total > 0.0) {
        return Err(Error::invalid(
            "ej_total",
            format!("must be positive and finite, got {ej_total}"),
        ));
    }
    if !(r.is_finite() && r.abs() < 1.0) {
        return Err(Error::invalid(
            "asymmetry",
            format!("|r| must be below 1, got {r}"),
        ));
    }
    Ok(match definition {
        AsymmetryDefinition::MeanDeviation => {
            (0.5 * ej_total * (1.0 + r), 0.5 * ej_total * (1.0 - r))
        }
        AsymmetryDefinition::Ratio => {
            let ej2 = ej_total / (2.0 + 2.0 * r);
            (ej_total - ej2, ej2)
        }
    })
}

/// Which TCQ mode a sweep detunes and measures ZZ on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ModeBasis {
    #[default]
    A,
    B,
}

impl ModeBasis {
    pub fn name(self) -> &'static str {
        match self {
            ModeBasis::A => "A",
            ModeBasis::B => "B",
        }
    }
}

impl std::str::FromStr for ModeBasis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(ModeBasis::A),
            "B" | "b" => Ok(ModeBasis::B),
            other => Err(Error::invalid(
                "mode_basis",
                format!("expected A or B, got `{other}`"),
            )),
        }
    }
}

/// Total Josephson energy of a qubit (both junctions for a TCQ).
pub fn total_ej(qubit: &QubitSpec) -> f64 {
    match qubit {
        QubitSpec::Tcq(t) => t.ej_total(),
        QubitSpec::Transmon(t) => t.ej,
    }
}

/// `qubit` with its total Josephson energy replaced. A TCQ is split with
/// mismatch `r`; a transmon ignores `r`.
pub fn with_total_ej(
    qubit: &QubitSpec,
    ej_total: f64,
    r: f64,
    definition: AsymmetryDefinition,
) -> Result<QubitSpec> {
    Ok(match qubit {
        QubitSpec::Tcq(t) => {
            let (ej1, ej2) = apply_asymmetry_with(ej_total, r, definition)?;
            QubitSpec::Tcq(TcqSpec {
                ej1,
                ej2,
                ..t.clone()
            })
        }
        QubitSpec::Transmon(t) => {
            if !(ej_total.is_finite() && ej_total > 0.0) {
                return Err(Error::invalid(
                    "ej",
                    format!("must be positive and finite, got {ej_total}"),
                ));
            }
            let mut t = t.clone();
            t.ej = ej_total;
            QubitSpec::Transmon(t)
        }
    })
}

/// Transition frequency and truncated level index of the selected mode.
/// A transmon always reports its 0-1 transition.
pub fn mode_level(
    qubit: &QubitSpec,
    basis: ModeBasis,
    convention: ChargingConvention,
) -> Result<(f64, usize)> {
    match qubit {
        QubitSpec::Tcq(t) => {
            let m = mode_frequencies(t, convention)?;
            Ok(match basis {
                ModeBasis::A => (m.f_a, m.a_level),
                ModeBasis::B => (m.f_b, m.b_level),
            })
        }
        QubitSpec::Transmon(_) => {
            let b = qubit_bundle(qubit, convention)?;
            Ok((b.level_energies[1], 1))
        }
    }
}

/// Dispersive shift of one qubit coupled alone to the bus, the other port
/// holding a one-level vacuum.
pub fn isolated_chi(
    qubit: &QubitSpec,
    bus: &BusSpec,
    gint: f64,
    basis: ModeBasis,
    convention: ChargingConvention,
) -> Result<f64> {
    let (_, level) = mode_level(qubit, basis, convention)?;
    let qb = qubit_bundle(qubit, convention)?;
    let bb = bus_bundle(bus)?;
    let composite = compose_bundles(&qb, &SubsystemBundle::vacuum(), &bb, gint, 0.0, convention)?;
    let spectrum = labeled_spectrum(&composite, LabelOptions::default())?;
    chi(&spectrum, Side::Left, level)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationOptions {
    /// Search interval on the total Josephson energy (Hz). `None` scans
    /// upward from below the current value until the target is crossed.
    pub bracket: Option<(f64, f64)>,
    pub tolerance: f64,
    pub max_iterations: usize,
    pub basis: ModeBasis,
    pub convention: ChargingConvention,
}

impl Default for CalibrationOptions {
    fn default() -> Self {
        Self {
            bracket: None,
            tolerance: DEFAULT_CHI_TOLERANCE,
            max_iterations: MAX_CALIBRATION_ITERATIONS,
            basis: ModeBasis::A,
            convention: ChargingConvention::Standard,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Calibration {
    /// The template with the calibrated qubit (symmetric junctions for a TCQ).
    pub device: DeviceSpec,
    pub ej_total: f64,
    pub chi: f64,
    pub target: f64,
    pub frequency: f64,
    pub iterations: usize,
    pub converged: bool,
    pub samples: Vec<(f64, f64)>,
}

/// Tunes the total Josephson energy of `side` until `|chi| / 2` of its
/// selected mode matches `target` within `options.tolerance`.
pub fn calibrate_chi(
    template: &DeviceSpec,
    target: f64,
    side: Side,
    options: &CalibrationOptions,
) -> Result<Calibration> {
    template.validate()?;
    if !(target.is_finite() && target >= 0.0) {
        return Err(Error::invalid(
            "target",
            format!("|chi|/2 target must be non-negative, got {target}"),
        ));
    }
    let (qubit, gint) = match side {
        Side::Left => (&template.left, template.gint_left),
        Side::Right => (&template.right, template.gint_right),
    };
    let conv = options.convention;
    let mut samples = Vec::new();
    let mut eval = |ej: f64| -> Result<f64> {
        let q = with_total_ej(qubit, ej, 0.0, AsymmetryDefinition::MeanDeviation)?;
        let c = isolated_chi(&q, &template.bus, gint, options.basis, conv)?;
        let residual = 0.5 * c.abs() - target;
        samples.push((ej, residual));
        Ok(residual)
    };

    let (mut lo, mut hi) = match options.bracket {
        Some((lo, hi)) if lo > 0.0 && hi > lo => (lo, hi),
        Some((lo, hi)) => {
            return Err(Error::invalid(
                "bracket",
                format!("need 0 < lo < hi, got ({lo}, {hi})"),
            ))
        }
        None => (0.0, 0.0),
    };
    let mut iterations = 0;
    let mut best;

    if options.bracket.is_some() {
        let mid = 0.5 * (lo + hi);
        let f_mid = eval(mid)?;
        iterations += 1;
        best = (mid, f_mid);
        if f_mid.abs() > options.tolerance {
            let (f_lo, f_hi) = (eval(lo)?, eval(hi)?);
            if f_lo > 0.0 || f_hi < 0.0 {
                return Err(Error::CalibrationBracket { samples });
            }
            if !(f_lo <= f_mid && f_mid <= f_hi) {
                return Err(Error::NonMonotone { ej: mid });
            }
            if f_mid < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    } else {
        // walk away from the starting point in small geometric steps so the
        // bracket stays on the branch the template already sits on
        let mut ej = total_ej(qubit);
        let mut f = eval(ej)?;
        best = (ej, f);
        let step = if f < 0.0 {
            BRACKET_STEP
        } else {
            1.0 / BRACKET_STEP
        };
        let mut n = 1;
        while best.1.abs() > options.tolerance && n < MAX_BRACKET_SAMPLES {
            let next = ej * step;
            let f_next = eval(next)?;
            n += 1;
            if (f_next - f) * (step - 1.0) < -options.tolerance {
                return Err(Error::NonMonotone { ej: next });
            }
            best = (next, f_next);
            if (f_next < 0.0) != (f < 0.0) {
                (lo, hi) = if step > 1.0 { (ej, next) } else { (next, ej) };
                break;
            }
            ej = next;
            f = f_next;
        }
        if lo == 0.0 && best.1.abs() > options.tolerance {
            return Err(Error::CalibrationBracket { samples });
        }
    }

    let (mut f_lo, mut f_hi) = (f64::NEG_INFINITY, f64::INFINITY);
    while best.1.abs() > options.tolerance && iterations < options.max_iterations {
        let mid = 0.5 * (lo + hi);
        let f = eval(mid)?;
        iterations += 1;
        best = (mid, f);
        if f < f_lo - options.tolerance || f > f_hi + options.tolerance {
            return Err(Error::NonMonotone { ej: mid });
        }
        if f < 0.0 {
            lo = mid;
            f_lo = f;
        } else {
            hi = mid;
            f_hi = f;
        }
    }

    let (ej_total, residual) = best;
    let qubit = with_total_ej(qubit, ej_total, 0.0, AsymmetryDefinition::MeanDeviation)?;
    let (frequency, _) = mode_level(&qubit, options.basis, conv)?;
    // residuals only carry |chi|; recover the sign at the chosen point
    let chi = isolated_chi(&qubit, &template.bus, gint, options.basis, conv)?;
    let mut device = template.clone();
    match side {
        Side::Left => device.left = qubit,
        Side::Right => device.right = qubit,
    }
    Ok(Calibration {
        device,
        ej_total,
        chi,
        target,
        frequency,
        iterations,
        converged: residual.abs() <= options.tolerance,
        samples,
    })
}

/// Result of retuning one qubit onto a target mode frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct Retuned {
    pub qubit: QubitSpec,
    pub frequency: f64,
    pub level: usize,
    pub iterations: usize,
}

/// Secant search on the total Josephson energy of `qubit` (keeping mismatch
/// `r`) so the selected mode sits at `target` within `tolerance`.
pub fn retune_mode(
    qubit: &QubitSpec,
    target: f64,
    r: f64,
    definition: AsymmetryDefinition,
    basis: ModeBasis,
    tolerance: f64,
    convention: ChargingConvention,
) -> Result<Retuned> {
    let eval = |ej: f64| -> Result<(f64, usize)> {
        mode_level(&with_total_ej(qubit, ej, r, definition)?, basis, convention)
    };
    let mut x0 = total_ej(qubit);
    let (f0, _) = eval(x0)?;
    // frequencies scale roughly as sqrt(EJ)
    let mut x1 = x0 * (target / f0).powi(2);
    let mut e0 = f0 - target;
    let mut achieved = f0;
    for iteration in 1..=MAX_RETUNE_ITERATIONS {
        let (f1, level) = eval(x1)?;
        achieved = f1;
        let e1 = f1 - target;
        if e1.abs() <= tolerance {
            return Ok(Retuned {
                qubit: with_total_ej(qubit, x1, r, definition)?,
                frequency: f1,
                level,
                iterations: iteration,
            });
        }
        let slope = (e1 - e0) / (x1 - x0);
        let mut x2 = if slope.is_finite() && slope > 0.0 {
            x1 - e1 / slope
        } else {
            x1 * (target / f1).powi(2)
        };
        x2 = x2.clamp(0.5 * x1, 2.0 * x1);
        (x0, e0, x1) = (x1, e1, x2);
    }
    Err(Error::Retune {
        target,
        achieved,
        iterations: MAX_RETUNE_ITERATIONS,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    /// Device whose left qubit is held fixed. The right qubit starts from the
    /// same parameters and is retuned at each detuning.
    pub template: DeviceSpec,
    /// Detunings of the right qubit's selected mode from the left's (Hz).
    pub detunings: Vec<f64>,
    /// Junction mismatch applied to every TCQ in the sweep.
    pub asymmetry: f64,
    pub asymmetry_definition: AsymmetryDefinition,
    pub basis: ModeBasis,
    pub convention: ChargingConvention,
    pub retune_tolerance: f64,
    pub parallel: bool,
}

impl SweepConfig {
    pub fn new(template: DeviceSpec, detunings: Vec<f64>) -> Self {
        Self {
            template,
            detunings,
            asymmetry: 0.0,
            asymmetry_definition: AsymmetryDefinition::MeanDeviation,
            basis: ModeBasis::A,
            convention: ChargingConvention::Standard,
            retune_tolerance: DEFAULT_RETUNE_TOLERANCE,
            parallel: true,
        }
    }
}

/// `start..=stop` in steps of `step` (Hz), computed by index so endpoints are exact.
pub fn detuning_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && step.is_finite() && start.is_finite() && stop.is_finite() && stop >= start) {
        return Err(Error::invalid(
            "detuning_grid",
            format!("bad grid {start}..{stop} step {step}"),
        ));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|k| start + k as f64 * step).collect())
}

/// -400 MHz to +400 MHz in 10 MHz steps.
pub fn default_detuning_grid() -> Vec<f64> {
    detuning_grid(-400e6, 400e6, 10e6).expect("static grid is valid")
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub detuning: f64,
    pub zz: f64,
    /// Achieved frequency of the right qubit's selected mode.
    pub f_right: f64,
    pub ej_right: f64,
    /// Smallest label overlap among the four computational states.
    pub assignment_quality: f64,
    pub converged: bool,
    pub diagnostic: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub f_left: f64,
    /// Human-readable echo of the inputs (key, value).
    pub metadata: Vec<(String, String)>,
}

/// Static ZZ as a function of detuning between the two qubits' selected modes.
pub fn zz_vs_detuning(config: &SweepConfig) -> Result<SweepResult> {
    config.template.validate()?;
    if config.detunings.is_empty() {
        return Err(Error::invalid("detunings", "empty grid"));
    }
    if !(config.retune_tolerance > 0.0) {
        return Err(Error::invalid("retune_tolerance", "must be positive"));
    }
    let r = config.asymmetry;
    let def = config.asymmetry_definition;
    let conv = config.convention;
    let left = with_total_ej(
        &config.template.left,
        total_ej(&config.template.left),
        r,
        def,
    )?;
    let (f_left, left_level) = mode_level(&left, config.basis, conv)?;
    let right_start = with_total_ej(
        &config.template.right,
        total_ej(&config.template.right),
        r,
        def,
    )?;

    let row = |&detuning: &f64| -> SweepRow {
        let failed = |msg: String, f_right: f64, ej_right: f64| SweepRow {
            detuning,
            zz: f64::NAN,
            f_right,
            ej_right,
            assignment_quality: 0.0,
            converged: false,
            diagnostic: Some(msg),
        };
        let target = f_left + detuning;
        let tuned = match retune_mode(
            &right_start,
            target,
            r,
            def,
            config.basis,
            config.retune_tolerance,
            conv,
        ) {
            Ok(t) => t,
            Err(e) => return failed(e.to_string(), f64::NAN, f64::NAN),
        };
        let ej_right = total_ej(&tuned.qubit);
        let device = DeviceSpec {
            left: left.clone(),
            right: tuned.qubit,
            ..config.template.clone()
        };
        let spectrum = match device_spectrum(&device, conv) {
            Ok(s) => s,
            Err(e) => return failed(e.to_string(), tuned.frequency, ej_right),
        };
        let quality = spectrum.quality_of(&computational_labels(left_level, tuned.level));
        match static_zz_levels(&spectrum, left_level, tuned.level) {
            Ok(zz) => SweepRow {
                detuning,
                zz,
                f_right: tuned.frequency,
                ej_right,
                assignment_quality: quality,
                converged: true,
                diagnostic: None,
            },
            Err(e) => SweepRow {
                assignment_quality: quality,
                ..failed(e.to_string(), tuned.frequency, ej_right)
            },
        }
    };
    let rows: Vec<SweepRow> = if config.parallel {
        config.detunings.par_iter().map(row).collect()
    } else {
        config.detunings.iter().map(row).collect()
    };

    let kind = |q: &QubitSpec| match q {
        QubitSpec::Tcq(_) => "tcq",
        QubitSpec::Transmon(_) => "transmon",
    };
    let metadata = vec![
        ("left_kind".into(), kind(&left).into()),
        ("right_kind".into(), kind(&right_start).into()),
        ("ej_left_total_hz".into(), format!("{:e}", total_ej(&left))),
        ("f_left_hz".into(), format!("{f_left:e}")),
        ("mode_basis".into(), config.basis.name().into()),
        ("asymmetry".into(), format!("{r:e}")),
        ("asymmetry_definition".into(), def.name().into()),
        (
            "gint_left_per_farad".into(),
            format!("{:e}", config.template.gint_left),
        ),
        (
            "gint_right_per_farad".into(),
            format!("{:e}", config.template.gint_right),
        ),
        (
            "bus_frequency_hz".into(),
            format!("{:e}", config.template.bus.frequency),
        ),
        (
            "bus_fock_dim".into(),
            config.template.bus.fock_dim.to_string(),
        ),
        (
            "retune_tolerance_hz".into(),
            format!("{:e}", config.retune_tolerance),
        ),
        ("convention".into(), conv.name().into()),
    ];
    Ok(SweepResult {
        rows,
        f_left,
        metadata,
    })
}

/// The same sweep for a pair of transmons; rejects TCQ templates.
pub fn transmon_baseline(config: &SweepConfig) -> Result<SweepResult> {
    let is_transmon = |q: &QubitSpec| matches!(q, QubitSpec::Transmon(_));
    if !(is_transmon(&config.template.left) && is_transmon(&config.template.right)) {
        return Err(Error::invalid(
            "template",
            "transmon baseline needs transmons on both sides",
        ));
    }
    zz_vs_detuning(config)
}

/// Doubles the bus Fock dimension until static ZZ moves by less than
/// `tolerance` Hz. Returns the converged dimension and its ZZ.
pub fn converge_fock_dim(
    device: &DeviceSpec,
    convention: ChargingConvention,
    tolerance: f64,
    max_fock_dim: usize,
) -> Result<(usize, f64)> {
    let zz_at = |fock_dim: usize| -> Result<f64> {
        let mut d = device.clone();
        d.bus.fock_dim = fock_dim;
        static_zz_levels(&device_spectrum(&d, convention)?, 1, 1)
    };
    let mut dim = device.bus.fock_dim.max(2);
    let mut zz = zz_at(dim)?;
    while 2 * dim <= max_fock_dim {
        let next = zz_at(2 * dim)?;
        dim *= 2;
        if (next - zz).abs() < tolerance {
            return Ok((dim, next));
        }
        zz = next;
    }
    Err(Error::invalid(
        "fock_dim",
        format!("ZZ not converged within {tolerance} Hz up to fock_dim {dim}"),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::TransmonSpec;

    const FF: f64 = 1e-15;
    const GHZ: f64 = 1e9;

    fn transmon(ej: f64) -> QubitSpec {
        QubitSpec::Transmon(TransmonSpec {
            keep_levels: 5,
            ..TransmonSpec::new(70.0 * FF, ej)
        })
    }

    fn transmon_device() -> DeviceSpec {
        DeviceSpec {
            left: transmon(11.2 * GHZ),
            right: transmon(11.2 * GHZ),
            bus: BusSpec::new(6.0 * GHZ),
            gint_left: DEFAULT_GINT,
            gint_right: DEFAULT_GINT,
        }
    }

    #[test]
    fn asymmetry_splits() {
        let (a, b) = apply_asymmetry(20e9, 0.1).unwrap();
        assert!((a - 11e9).abs() < 1e-3 && (b - 9e9).abs() < 1e-3);
        assert_eq!(apply_asymmetry(20e9, 0.0).unwrap(), (10e9, 10e9));
        assert!(apply_asymmetry(20e9, 1.0).is_err());
        assert!(apply_asymmetry(-1.0, 0.1).is_err());
    }

    #[test]
    fn ratio_definition_agrees_to_first_order() {
        for r in [1e-4, 1e-3, 1e-2] {
            let (a, b) = apply_asymmetry(2.0, r).unwrap();
            let (c, d) = apply_asymmetry_with(2.0, r, AsymmetryDefinition::Ratio).unwrap();
            assert!((c + d - 2.0).abs() < 1e-15);
            assert!((c / d - 1.0 - 2.0 * r).abs() < 1e-12);
            // first-order agreement: the gap scales as r^2
            assert!((a - c).abs() < 2.0 * r * r, "{r}: {a} {c}");
            assert!((b - d).abs() < 2.0 * r * r);
        }
    }

    #[test]
    fn grid_endpoints() {
        let g = default_detuning_grid();
        assert_eq!(g.len(), 81);
        assert_eq!(g[0], -400e6);
        assert_eq!(g[40], 0.0);
        assert_eq!(*g.last().unwrap(), 400e6);
    }

    #[test]
    fn zero_target_without_coupling_returns_midpoint() {
        let mut d = transmon_device();
        d.gint_left = 0.0;
        let opts = CalibrationOptions {
            bracket: Some((8e9, 14e9)),
            ..Default::default()
        };
        let c = calibrate_chi(&d, 0.0, Side::Left, &opts).unwrap();
        assert_eq!(c.ej_total, 11e9);
        assert!(c.converged);
        assert!(c.chi.abs() < 1e-6);
    }

    #[test]
    fn calibration_reaches_target() {
        let c = calibrate_chi(
            &transmon_device(),
            1e6,
            Side::Left,
            &CalibrationOptions::default(),
        )
        .unwrap();
        assert!(c.converged);
        assert!((0.5 * c.chi.abs() - 1e6).abs() <= 1e3, "{}", c.chi);
        assert!(c.frequency < 6e9);
        assert!(c.iterations <= MAX_CALIBRATION_ITERATIONS);
    }

    #[test]
    fn unreachable_target_reports_samples() {
        let opts = CalibrationOptions {
            bracket: Some((10e9, 10.5e9)),
            ..Default::default()
        };
        match calibrate_chi(&transmon_device(), 1e6, Side::Left, &opts) {
            Err(Error::CalibrationBracket { samples }) => assert!(samples.len() >= 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn retune_hits_target() {
        let q = transmon(11e9);
        let (f0, _) = mode_level(&q, ModeBasis::A, ChargingConvention::Standard).unwrap();
        let t = retune_mode(
            &q,
            f0 + 123e6,
            0.0,
            AsymmetryDefinition::MeanDeviation,
            ModeBasis::A,
            1e4,
            ChargingConvention::Standard,
        )
        .unwrap();
        assert!((t.frequency - f0 - 123e6).abs() <= 1e4);
        assert!(total_ej(&t.qubit) > 11e9);
    }

    #[test]
    fn serial_and_parallel_sweeps_match() {
        let mut cfg = SweepConfig::new(transmon_device(), vec![-150e6, 50e6, 250e6]);
        let a = transmon_baseline(&cfg).unwrap();
        cfg.parallel = false;
        let b = transmon_baseline(&cfg).unwrap();
        assert_eq!(a, b);
        for row in &a.rows {
            assert!(row.converged, "{row:?}");
            assert!((row.f_right - a.f_left - row.detuning).abs() <= 1e4);
        }
    }

    #[test]
    fn baseline_rejects_tcq() {
        let mut d = transmon_device();
        d.left = QubitSpec::Tcq(TcqSpec::new(45.0 * FF, 45.0 * FF, 20.0 * FF, 8e9, 8e9));
        assert!(transmon_baseline(&SweepConfig::new(d, vec![0.0])).is_err());
    }

    #[test]
    fn fock_dim_convergence() {
        let mut d = transmon_device();
        d.right = transmon(12.5 * GHZ);
        d.bus.fock_dim = 3;
        let (dim, _) = converge_fock_dim(&d, ChargingConvention::Standard, 100.0, 24).unwrap();
        assert!(dim >= 6);
    }
}
