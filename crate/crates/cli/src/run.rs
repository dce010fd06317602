//! Command dispatch and CSV rendering.

use std::f64::consts::PI;
use std::fmt;

use tcqsim::hamiltonian::{bus_bundle, compose_bundles, qubit_bundle, SubsystemBundle};
use tcqsim::observables::{
    chi, device_spectrum, labeled_spectrum, mode_frequencies, static_zz_levels, LabelOptions,
};
use tcqsim::rip::{
    amplitude_for_phase, cz_point, echoed_rip, ramsey_trace, state_phases, QubitState,
};
use tcqsim::sweep::{
    calibrate_chi, detuning_grid, total_ej, transmon_baseline, zz_vs_detuning, Calibration,
    CalibrationOptions,
};
use tcqsim::{ChiPair, DeviceSpec, QubitSpec, RipPulse, Side, SweepConfig};

use crate::config::{Command, RunConfig};

#[derive(Debug)]
pub enum RunError {
    Compute(tcqsim::Error),
    Io(std::io::Error),
    Csv(csv::Error),
}

impl RunError {
    pub fn module(&self) -> &'static str {
        match self {
            RunError::Compute(e) => e.module(),
            RunError::Io(_) | RunError::Csv(_) => "io",
        }
    }
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Compute(e) => e.fmt(f),
            RunError::Io(e) => e.fmt(f),
            RunError::Csv(e) => e.fmt(f),
        }
    }
}

impl std::error::Error for RunError {}

impl From<tcqsim::Error> for RunError {
    fn from(e: tcqsim::Error) -> Self {
        RunError::Compute(e)
    }
}

impl From<std::io::Error> for RunError {
    fn from(e: std::io::Error) -> Self {
        RunError::Io(e)
    }
}

impl From<csv::Error> for RunError {
    fn from(e: csv::Error) -> Self {
        RunError::Csv(e)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(usize),
    Text(String),
    Bool(bool),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Float(x) => sci(*x),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }
}

/// Fixed scientific notation, independent of locale.
pub fn sci(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.12e}")
    } else {
        x.to_string()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub metadata: Vec<(String, String)>,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    fn new(header: Vec<&'static str>) -> Self {
        Self {
            metadata: Vec::new(),
            header,
            rows: Vec::new(),
        }
    }

    fn meta(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.metadata.push((key.into(), value.into()));
    }

    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let k = self.header.iter().position(|h| *h == name)?;
        Some(self.rows.iter().map(|r| &r[k]).collect())
    }
}

pub const TIMESTAMP_KEY: &str = "timestamp";

/// `#`-prefixed metadata, then the header, then rows. `timestamp` is written
/// as its own line so reruns differ only there.
pub fn render_csv(table: &Table, timestamp: Option<&str>) -> Result<String, RunError> {
    let mut out = String::new();
    let mut meta = |k: &str, v: &str| {
        // keep each entry on one comment line
        let v = v.replace(['\n', '\r'], " ");
        out.push_str(&format!("# {k}: {v}\n"));
    };
    let mut rest = table.metadata.iter();
    for (k, v) in rest.by_ref().take(4) {
        meta(k, v);
    }
    if let Some(ts) = timestamp {
        meta(TIMESTAMP_KEY, ts);
    }
    for (k, v) in rest {
        meta(k, v);
    }
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(&table.header)?;
    for row in &table.rows {
        w.write_record(row.iter().map(Cell::render))?;
    }
    let body = w.into_inner().map_err(|e| RunError::Io(e.into_error()))?;
    out.push_str(&String::from_utf8(body).expect("csv output is UTF-8"));
    Ok(out)
}

fn calibrate(config: &RunConfig) -> Result<(DeviceSpec, Option<Calibration>), RunError> {
    if !config.calibration.enabled {
        return Ok((config.device.clone(), None));
    }
    let opts = CalibrationOptions {
        tolerance: config.numerics.chi_tolerance,
        basis: config.calibration.mode,
        convention: config.convention,
        ..CalibrationOptions::default()
    };
    let c = calibrate_chi(
        &config.device,
        config.calibration.target,
        config.calibration.side,
        &opts,
    )?;
    Ok((c.device.clone(), Some(c)))
}

fn calibration_meta(table: &mut Table, c: &Option<Calibration>) {
    if let Some(c) = c {
        table.meta("calibration.ej_total_hz", sci(c.ej_total));
        table.meta("calibration.chi_half_hz", sci(0.5 * c.chi.abs()));
        table.meta("calibration.iterations", c.iterations.to_string());
        table.meta("calibration.converged", c.converged.to_string());
    }
}

fn side_name(s: Side) -> &'static str {
    match s {
        Side::Left => "left",
        Side::Right => "right",
    }
}

/// Runs `config.command` and returns its table. Metadata starts with tool,
/// version, command and convention.
pub fn execute(config: &RunConfig) -> Result<Table, RunError> {
    let mut table = match config.command {
        Command::Spectrum => spectrum(config)?,
        Command::Chi => chi_table(config)?,
        Command::ZzSweep | Command::TransmonBaseline => sweep(config)?,
        Command::Calibrate => calibration(config)?,
        Command::Rip => rip(config)?,
        Command::Ramsey => ramsey(config)?,
    };
    let mut meta = vec![
        ("tool".to_string(), "tcqsim".to_string()),
        ("version".to_string(), tcqsim::VERSION.to_string()),
        ("command".to_string(), config.command.name().to_string()),
        (
            "convention".to_string(),
            config.convention.name().to_string(),
        ),
    ];
    meta.append(&mut table.metadata);
    meta.extend(config.echo());
    table.metadata = meta;
    Ok(table)
}

fn spectrum(config: &RunConfig) -> Result<Table, RunError> {
    let (device, cal) = calibrate(config)?;
    let s = device_spectrum(&device, config.convention)?;
    let mut t = Table::new(vec![
        "index",
        "energy_hz",
        "left_level",
        "right_level",
        "bus_photons",
        "overlap",
        "ambiguous",
    ]);
    calibration_meta(&mut t, &cal);
    t.meta("assignment_quality", sci(s.assignment_quality));
    if let Ok(zz) = static_zz_levels(&s, 1, 1) {
        t.meta("static_zz_hz", sci(zz));
    }
    for k in 0..s.len() {
        let (l, r, n) = s.labels[k];
        t.rows.push(vec![
            Cell::Int(k),
            Cell::Float(s.energies[k]),
            Cell::Int(l),
            Cell::Int(r),
            Cell::Int(n),
            Cell::Float(s.overlaps[k]),
            Cell::Bool(s.ambiguous[k]),
        ]);
    }
    Ok(t)
}

fn chi_table(config: &RunConfig) -> Result<Table, RunError> {
    let (device, cal) = calibrate(config)?;
    let mut t = Table::new(vec![
        "side",
        "mode",
        "level",
        "frequency_hz",
        "chi_hz",
        "two_chi_hz",
    ]);
    calibration_meta(&mut t, &cal);
    // identical qubits hybridize through the bus, so each one is evaluated
    // against the bus with the other port empty
    t.meta("chi.partner", "vacuum");
    let bus = bus_bundle(&device.bus)?;
    let ports = [
        (Side::Left, &device.left, device.gint_left),
        (Side::Right, &device.right, device.gint_right),
    ];
    for (side, qubit, gint) in ports {
        let modes = match qubit {
            QubitSpec::Tcq(q) => {
                let m = mode_frequencies(q, config.convention)?;
                vec![("A", m.a_level), ("B", m.b_level)]
            }
            QubitSpec::Transmon(_) => vec![("01", 1)],
        };
        let qb = qubit_bundle(qubit, config.convention)?;
        let composite = compose_bundles(
            &qb,
            &SubsystemBundle::vacuum(),
            &bus,
            gint,
            0.0,
            config.convention,
        )?;
        let s = labeled_spectrum(&composite, LabelOptions::default())?;
        for (mode, level) in modes {
            let freq = s
                .energy((level, 0, 0))
                .and_then(|e| Ok(e - s.energy((0, 0, 0))?));
            let c = chi(&s, Side::Left, level);
            if let Err(e) = c.as_ref().and(freq.as_ref()) {
                t.meta(
                    format!("{}.{mode}.diagnostic", side_name(side)),
                    e.to_string(),
                );
            }
            let c = c.unwrap_or(f64::NAN);
            t.rows.push(vec![
                Cell::Text(side_name(side).into()),
                Cell::Text(mode.into()),
                Cell::Int(level),
                Cell::Float(freq.unwrap_or(f64::NAN)),
                Cell::Float(c),
                Cell::Float(2.0 * c),
            ]);
        }
    }
    Ok(t)
}

fn sweep(config: &RunConfig) -> Result<Table, RunError> {
    let (device, cal) = calibrate(config)?;
    let s = &config.sweep;
    let mut sc = SweepConfig::new(
        device,
        detuning_grid(s.detuning_start, s.detuning_stop, s.detuning_step)?,
    );
    sc.asymmetry = s.asymmetry;
    sc.asymmetry_definition = s.asymmetry_definition;
    sc.basis = s.mode;
    sc.convention = config.convention;
    sc.retune_tolerance = config.numerics.retune_tolerance;
    let result = if config.command == Command::TransmonBaseline {
        transmon_baseline(&sc)?
    } else {
        zz_vs_detuning(&sc)?
    };

    let mut t = Table::new(vec![
        "detuning_hz",
        "zz_hz",
        "f_a_right_hz",
        "assignment_quality",
        "converged",
    ]);
    calibration_meta(&mut t, &cal);
    for (k, v) in &result.metadata {
        t.meta(format!("sweep.{k}"), v.clone());
    }
    let failed = result.rows.iter().filter(|r| !r.converged).count();
    t.meta("sweep.rows_failed", failed.to_string());
    for (i, row) in result.rows.iter().enumerate() {
        if let Some(d) = &row.diagnostic {
            t.meta(format!("row.{i}.diagnostic"), d.clone());
        }
        t.rows.push(vec![
            Cell::Float(row.detuning),
            Cell::Float(row.zz),
            Cell::Float(row.f_right),
            Cell::Float(row.assignment_quality),
            Cell::Bool(row.converged),
        ]);
    }
    Ok(t)
}

fn calibration(config: &RunConfig) -> Result<Table, RunError> {
    let mut forced = config.clone();
    forced.calibration.enabled = true;
    let (device, cal) = calibrate(&forced)?;
    let c = cal.expect("calibration was forced on");
    let side = config.calibration.side;
    let qubit = match side {
        Side::Left => &device.left,
        Side::Right => &device.right,
    };
    let mut t = Table::new(vec![
        "side",
        "ej_total_hz",
        "frequency_hz",
        "chi_hz",
        "chi_half_hz",
        "target_hz",
        "iterations",
        "converged",
    ]);
    t.meta("calibration.samples", c.samples.len().to_string());
    t.rows.push(vec![
        Cell::Text(side_name(side).into()),
        Cell::Float(total_ej(qubit)),
        Cell::Float(c.frequency),
        Cell::Float(c.chi),
        Cell::Float(0.5 * c.chi.abs()),
        Cell::Float(c.target),
        Cell::Int(c.iterations),
        Cell::Bool(c.converged),
    ]);
    Ok(t)
}

fn rip_inputs(config: &RunConfig) -> Result<(RipPulse, ChiPair), RunError> {
    let r = &config.rip;
    let chis = ChiPair {
        left: r.chi_left,
        right: r.chi_right,
    };
    let mut pulse = r.pulse();
    if r.auto_amplitude {
        pulse.amplitude = amplitude_for_phase(&pulse, &chis, PI, r.echo)?;
    }
    Ok((pulse, chis))
}

fn rip(config: &RunConfig) -> Result<Table, RunError> {
    let (pulse, chis) = rip_inputs(config)?;
    let result = if config.rip.echo {
        echoed_rip(&pulse, &chis)?
    } else {
        state_phases(&pulse, &chis)?
    };
    let mut t = Table::new(vec!["state", "pull_hz", "phase_rad", "residual_photons"]);
    t.meta("rip.amplitude_hz", sci(pulse.amplitude));
    t.meta("rip.entangling_phase_rad", sci(result.entangling_phase));
    t.meta(
        "rip.single_qubit_phase_left_rad",
        sci(result.single_qubit_phases.0),
    );
    t.meta(
        "rip.single_qubit_phase_right_rad",
        sci(result.single_qubit_phases.1),
    );
    t.meta("rip.step_sensitivity_rad", sci(result.step_sensitivity));
    t.meta("rip.drive_duration_s", sci(result.drive_duration));
    t.meta(
        "rip.sequence_duration_s",
        sci(result.gate_duration(config.rip.echo_duration)),
    );
    for s in QubitState::ALL {
        let k = s as usize;
        t.rows.push(vec![
            Cell::Text(s.name().into()),
            Cell::Float(chis.pull(s)),
            Cell::Float(result.phases[k]),
            Cell::Float(result.residual_photons[k]),
        ]);
    }
    Ok(t)
}

fn ramsey(config: &RunConfig) -> Result<Table, RunError> {
    let (pulse, chis) = rip_inputs(config)?;
    let r = &config.ramsey;
    // the same index-based grid as the detuning sweep
    let taus = detuning_grid(r.tau_start, r.tau_stop, r.tau_step)?;
    let trace = ramsey_trace(&pulse, &chis, &taus)?;
    let mut t = Table::new(vec![
        "tau_s",
        "phase_left0_rad",
        "phase_left1_rad",
        "z_left0",
        "z_left1",
        "contrast_left0",
        "contrast_left1",
        "entangling_phase_rad",
    ]);
    t.meta("rip.amplitude_hz", sci(pulse.amplitude));
    match cz_point(&trace) {
        Some(tau) => {
            t.meta("ramsey.cz_tau_s", sci(tau));
            t.meta("ramsey.cz_drive_duration_s", sci(2.0 * tau));
            t.meta(
                "ramsey.cz_sequence_duration_s",
                sci(2.0 * tau + config.rip.echo_duration),
            );
        }
        None => t.meta("ramsey.cz_tau_s", "not reached on grid"),
    }
    for p in &trace {
        t.rows.push(vec![
            Cell::Float(p.tau),
            Cell::Float(p.phase_left0),
            Cell::Float(p.phase_left1),
            Cell::Float(p.z_left0),
            Cell::Float(p.z_left1),
            Cell::Float(p.contrast_left0),
            Cell::Float(p.contrast_left1),
            Cell::Float(p.entangling_phase),
        ]);
    }
    Ok(t)
}
