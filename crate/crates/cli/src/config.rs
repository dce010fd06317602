//! Line-oriented run configuration.
//!
//! ```text
//! command = zz-sweep
//! [left]
//! kind = tcq
//! c1 = 45 fF
//! ej1 = 8.1 GHz
//! [sweep]
//! asymmetry = 0.1
//! ```
//!
//! Keys before the first `[block]` header are global. Physical values must
//! carry a unit suffix; internally everything is farads, hertz and seconds.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use tcqsim::circuit::{DEFAULT_CHARGE_CUTOFF, DEFAULT_FOCK_DIM, DEFAULT_KEEP_LEVELS};
use tcqsim::sweep::{
    AsymmetryDefinition, DEFAULT_CHI_HALF_TARGET, DEFAULT_CHI_TOLERANCE, DEFAULT_GINT,
    DEFAULT_RETUNE_TOLERANCE,
};
use tcqsim::{
    BusSpec, ChargingConvention, DeviceSpec, ModeBasis, PulseShape, QubitSpec, RipPulse, Side,
    TcqSpec, TransmonSpec,
};

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl ConfigError {
    fn at(line: usize, message: impl Into<String>) -> Self {
        Self {
            line: Some(line),
            message: message.into(),
        }
    }

    fn global(message: impl Into<String>) -> Self {
        Self {
            line: None,
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Spectrum,
    Chi,
    ZzSweep,
    TransmonBaseline,
    Calibrate,
    Rip,
    Ramsey,
}

impl Command {
    pub const ALL: [Command; 7] = [
        Command::Spectrum,
        Command::Chi,
        Command::ZzSweep,
        Command::TransmonBaseline,
        Command::Calibrate,
        Command::Rip,
        Command::Ramsey,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Chi => "chi",
            Command::ZzSweep => "zz-sweep",
            Command::TransmonBaseline => "transmon-baseline",
            Command::Calibrate => "calibrate",
            Command::Rip => "rip",
            Command::Ramsey => "ramsey",
        }
    }

    fn calibrates_by_default(self) -> bool {
        matches!(
            self,
            Command::ZzSweep | Command::TransmonBaseline | Command::Calibrate
        )
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Command::ALL.iter().map(|c| c.name()).collect();
                format!(
                    "unknown command `{s}` (expected one of {})",
                    names.join(", ")
                )
            })
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Numerics {
    pub charge_cutoff: usize,
    pub keep_levels: usize,
    pub retune_tolerance: f64,
    pub chi_tolerance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationParams {
    pub enabled: bool,
    pub side: Side,
    /// Target of `|chi| / 2` (Hz).
    pub target: f64,
    pub mode: ModeBasis,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepParams {
    pub detuning_start: f64,
    pub detuning_stop: f64,
    pub detuning_step: f64,
    pub asymmetry: f64,
    pub asymmetry_definition: AsymmetryDefinition,
    pub mode: ModeBasis,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShapeKind {
    Square,
    RaisedCosine,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RipParams {
    pub shape: ShapeKind,
    pub edge: f64,
    pub amplitude: f64,
    pub detuning: f64,
    pub duration: f64,
    pub kappa: f64,
    pub dt: Option<f64>,
    pub chi_left: f64,
    pub chi_right: f64,
    pub echo: bool,
    /// Rescale the amplitude so the entangling phase reaches pi.
    pub auto_amplitude: bool,
    /// Time spent on echo pulses, added to the reported sequence length.
    pub echo_duration: f64,
}

impl RipParams {
    pub fn pulse(&self) -> RipPulse {
        RipPulse {
            shape: match self.shape {
                ShapeKind::Square => PulseShape::Square,
                ShapeKind::RaisedCosine => PulseShape::RaisedCosine { edge: self.edge },
            },
            amplitude: self.amplitude,
            detuning: self.detuning,
            duration: self.duration,
            kappa: self.kappa,
            dt: self.dt,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RamseyParams {
    pub tau_start: f64,
    pub tau_stop: f64,
    pub tau_step: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub output: Option<String>,
    pub convention: ChargingConvention,
    pub numerics: Numerics,
    /// Qubit truncations always mirror `numerics`.
    pub device: DeviceSpec,
    pub calibration: CalibrationParams,
    pub sweep: SweepParams,
    pub rip: RipParams,
    pub ramsey: RamseyParams,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Dim {
    Capacitance,
    Frequency,
    Time,
    InverseCapacitance,
}

impl Dim {
    /// Accepted suffixes with their power-of-ten scale.
    fn units(self) -> &'static [(&'static str, i32)] {
        match self {
            Dim::Capacitance => &[("F", 0), ("pF", -12), ("fF", -15)],
            Dim::Frequency => &[("Hz", 0), ("kHz", 3), ("MHz", 6), ("GHz", 9)],
            Dim::Time => &[("s", 0), ("ms", -3), ("us", -6), ("µs", -6), ("ns", -9)],
            Dim::InverseCapacitance => &[("1/F", 0), ("1/fF", 15)],
        }
    }

    fn name(self) -> &'static str {
        match self {
            Dim::Capacitance => "capacitance",
            Dim::Frequency => "frequency",
            Dim::Time => "time",
            Dim::InverseCapacitance => "inverse capacitance",
        }
    }

    /// Units tried, largest first, when writing values back out.
    fn display_units(self) -> &'static [(&'static str, i32)] {
        match self {
            Dim::Capacitance => &[("fF", -15)],
            Dim::Frequency => &[("GHz", 9), ("MHz", 6), ("kHz", 3), ("Hz", 0)],
            Dim::Time => &[("us", -6), ("ns", -9)],
            Dim::InverseCapacitance => &[("1/F", 0)],
        }
    }
}

#[derive(Debug, Clone)]
struct Entry {
    section: String,
    key: String,
    value: String,
    line: usize,
    used: bool,
}

struct Entries {
    items: Vec<Entry>,
}

impl Entries {
    fn lex(text: &str) -> Result<Self, ConfigError> {
        let mut items: Vec<Entry> = Vec::new();
        let mut seen_sections = std::collections::HashSet::new();
        let mut section = String::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            if let Some(rest) = content.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| {
                        ConfigError::at(line, format!("malformed block header `{content}`"))
                    })?
                    .trim();
                if !SECTIONS.contains(&name) {
                    return Err(ConfigError::at(line, format!("unknown block `[{name}]`")));
                }
                if !seen_sections.insert(name.to_string()) {
                    return Err(ConfigError::at(
                        line,
                        format!("block `[{name}]` appears twice"),
                    ));
                }
                section = name.to_string();
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| {
                ConfigError::at(line, format!("expected `key = value`, got `{content}`"))
            })?;
            let (key, value) = (key.trim(), value.trim());
            if key.is_empty() {
                return Err(ConfigError::at(line, "empty key"));
            }
            if let Some(prev) = items.iter().find(|e| e.section == section && e.key == key) {
                return Err(ConfigError::at(
                    line,
                    format!("duplicate key `{key}` (first set on line {})", prev.line),
                ));
            }
            items.push(Entry {
                section: section.clone(),
                key: key.to_string(),
                value: value.to_string(),
                line,
                used: false,
            });
        }
        Ok(Self { items })
    }

    fn take(&mut self, section: &str, key: &str) -> Option<(String, usize)> {
        let e = self
            .items
            .iter_mut()
            .find(|e| e.section == section && e.key == key)?;
        e.used = true;
        Some((e.value.clone(), e.line))
    }

    fn parsed<T>(
        &mut self,
        section: &str,
        key: &str,
        default: T,
        f: impl Fn(&str) -> Result<T, String>,
    ) -> Result<T, ConfigError> {
        match self.take(section, key) {
            None => Ok(default),
            Some((v, line)) => f(&v).map_err(|m| ConfigError::at(line, format!("`{key}`: {m}"))),
        }
    }

    fn quantity(
        &mut self,
        section: &str,
        key: &str,
        dim: Dim,
        default: f64,
    ) -> Result<f64, ConfigError> {
        self.parsed(section, key, default, |v| parse_quantity(v, dim))
    }

    fn number(&mut self, section: &str, key: &str, default: f64) -> Result<f64, ConfigError> {
        self.parsed(section, key, default, parse_plain)
    }

    fn count(&mut self, section: &str, key: &str, default: usize) -> Result<usize, ConfigError> {
        self.parsed(section, key, default, |v| {
            v.parse::<usize>()
                .map_err(|_| format!("expected a non-negative integer, got `{v}`"))
        })
    }

    fn flag(&mut self, section: &str, key: &str, default: bool) -> Result<bool, ConfigError> {
        self.parsed(section, key, default, |v| match v {
            "true" => Ok(true),
            "false" => Ok(false),
            other => Err(format!("expected true or false, got `{other}`")),
        })
    }

    fn choice<T: FromStr>(&mut self, section: &str, key: &str, default: T) -> Result<T, ConfigError>
    where
        T::Err: fmt::Display,
    {
        self.parsed(section, key, default, |v| {
            v.parse::<T>().map_err(|e| e.to_string())
        })
    }

    fn reject_unused(&self) -> Result<(), ConfigError> {
        match self.items.iter().find(|e| !e.used) {
            Some(e) if e.section.is_empty() => {
                Err(ConfigError::at(e.line, format!("unknown key `{}`", e.key)))
            }
            Some(e) => Err(ConfigError::at(
                e.line,
                format!("unknown key `{}` in block [{}]", e.key, e.section),
            )),
            None => Ok(()),
        }
    }
}

const SECTIONS: [&str; 9] = [
    "numerics",
    "left",
    "right",
    "bus",
    "coupling",
    "calibration",
    "sweep",
    "rip",
    "ramsey",
];
const REQUIRED: [&str; 1] = ["command"];

fn parse_plain(v: &str) -> Result<f64, String> {
    let x: f64 = v
        .parse()
        .map_err(|_| format!("expected a plain number, got `{v}`"))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(format!("value must be finite, got `{v}`"))
    }
}

/// Parses `num` times `10^exp10` by shifting the decimal exponent, so
/// `2.5 us` is exactly the double nearest 2.5e-6.
fn parse_scaled(num: &str, exp10: i32) -> Result<f64, String> {
    parse_plain(num)?;
    let (mantissa, exponent) = match num.find(['e', 'E']) {
        Some(i) => (
            &num[..i],
            num[i + 1..]
                .parse::<i32>()
                .map_err(|_| format!("bad exponent in `{num}`"))?,
        ),
        None => (num, 0),
    };
    parse_plain(&format!("{mantissa}e{}", exponent + exp10))
}

fn parse_quantity(v: &str, dim: Dim) -> Result<f64, String> {
    let mut parts = v.split_whitespace();
    let (num, unit) = match (parts.next(), parts.next(), parts.next()) {
        (Some(n), Some(u), None) => (n, u),
        (Some(_), None, _) => return Err(format!("missing {} unit in `{v}`", dim.name())),
        _ => return Err(format!("expected `<number> <unit>`, got `{v}`")),
    };
    let exp10 = dim
        .units()
        .iter()
        .find(|(name, _)| *name == unit)
        .map(|&(_, e)| e)
        .ok_or_else(|| {
            let names: Vec<_> = dim.units().iter().map(|(n, _)| *n).collect();
            format!(
                "unit `{unit}` is not a {} unit (use {})",
                dim.name(),
                names.join(", ")
            )
        })?;
    parse_scaled(num, exp10)
}

/// Shortest round-trip digits of `x` expressed in units of `10^exp10`.
fn shift_decimal(x: f64, exp10: i32) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:e}");
    let (mantissa, exponent) = sci
        .split_once('e')
        .expect("LowerExp always has an exponent");
    let k = exponent.parse::<i32>().expect("integer exponent") - exp10;
    let (sign, mantissa) = mantissa
        .strip_prefix('-')
        .map_or(("", mantissa), |m| ("-", m));
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    if !(-6..=6).contains(&k) {
        return format!("{sign}{mantissa}e{k}");
    }
    let point = k + 1;
    let body = if point <= 0 {
        format!("0.{}{digits}", "0".repeat((-point) as usize))
    } else if point as usize >= digits.len() {
        format!("{digits}{}", "0".repeat(point as usize - digits.len()))
    } else {
        format!(
            "{}.{}",
            &digits[..point as usize],
            &digits[point as usize..]
        )
    };
    format!("{sign}{body}")
}

fn format_quantity(x: f64, dim: Dim) -> String {
    let units = dim.display_units();
    let &(unit, exp10) = units
        .iter()
        .find(|(_, e)| x.abs() >= 10f64.powi(*e))
        .unwrap_or(&units[units.len() - 1]);
    format!("{} {unit}", shift_decimal(x, exp10))
}

fn parse_side(v: &str) -> Result<Side, String> {
    match v {
        "left" => Ok(Side::Left),
        "right" => Ok(Side::Right),
        other => Err(format!("expected left or right, got `{other}`")),
    }
}

fn side_name(s: Side) -> &'static str {
    match s {
        Side::Left => "left",
        Side::Right => "right",
    }
}

fn parse_shape(v: &str) -> Result<ShapeKind, String> {
    match v {
        "square" => Ok(ShapeKind::Square),
        "raised-cosine" => Ok(ShapeKind::RaisedCosine),
        other => Err(format!("expected square or raised-cosine, got `{other}`")),
    }
}

fn shape_name(s: ShapeKind) -> &'static str {
    match s {
        ShapeKind::Square => "square",
        ShapeKind::RaisedCosine => "raised-cosine",
    }
}

/// Default device qubit: a symmetric TCQ with 45/45/20 fF, or a 70 fF transmon.
pub fn default_tcq() -> TcqSpec {
    TcqSpec::new(45e-15, 45e-15, 20e-15, 8.1e9, 8.1e9)
}

pub fn default_transmon() -> TransmonSpec {
    TransmonSpec::new(70e-15, 11.2e9)
}

fn parse_qubit(
    e: &mut Entries,
    section: &str,
    default_transmon_kind: bool,
    n: &Numerics,
) -> Result<QubitSpec, ConfigError> {
    let kind = e.parsed(
        section,
        "kind",
        if default_transmon_kind {
            "transmon"
        } else {
            "tcq"
        }
        .to_string(),
        |v| match v {
            "tcq" | "transmon" => Ok(v.to_string()),
            other => Err(format!("expected tcq or transmon, got `{other}`")),
        },
    )?;
    let mut q = if kind == "tcq" {
        let d = default_tcq();
        QubitSpec::Tcq(TcqSpec {
            c1: e.quantity(section, "c1", Dim::Capacitance, d.c1)?,
            c2: e.quantity(section, "c2", Dim::Capacitance, d.c2)?,
            cs: e.quantity(section, "cs", Dim::Capacitance, d.cs)?,
            ej1: e.quantity(section, "ej1", Dim::Frequency, d.ej1)?,
            ej2: e.quantity(section, "ej2", Dim::Frequency, d.ej2)?,
            ng1: e.number(section, "ng1", d.ng1)?,
            ng2: e.number(section, "ng2", d.ng2)?,
            ..d
        })
    } else {
        let d = default_transmon();
        QubitSpec::Transmon(TransmonSpec {
            c: e.quantity(section, "c", Dim::Capacitance, d.c)?,
            ej: e.quantity(section, "ej", Dim::Frequency, d.ej)?,
            ng: e.number(section, "ng", d.ng)?,
            ..d
        })
    };
    q.set_truncation(n.charge_cutoff, n.keep_levels);
    Ok(q)
}

/// Parses a configuration that must name its own command.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    parse_config_for(text, None)
}

/// Parses a configuration for `command`. A `command` key in the file, if any,
/// must agree with it.
pub fn parse_config_for(text: &str, command: Option<Command>) -> Result<RunConfig, ConfigError> {
    let mut e = Entries::lex(text)?;
    let command = match (e.take("", "command"), command) {
        (None, None) => {
            return Err(ConfigError::global(format!(
                "missing required key(s): {}",
                REQUIRED.join(", ")
            )));
        }
        (None, Some(c)) => c,
        (Some((v, line)), requested) => {
            let c: Command = v.parse().map_err(|m: String| ConfigError::at(line, m))?;
            if let Some(r) = requested.filter(|&r| r != c) {
                return Err(ConfigError::at(
                    line,
                    format!("file is for `{c}` but `{r}` was requested"),
                ));
            }
            c
        }
    };
    let output = e.take("", "output").map(|(v, _)| v);
    let convention = e.choice("", "convention", ChargingConvention::Standard)?;

    let numerics = Numerics {
        charge_cutoff: e.count("numerics", "cutoff", DEFAULT_CHARGE_CUTOFF)?,
        keep_levels: e.count("numerics", "keep_levels", DEFAULT_KEEP_LEVELS)?,
        retune_tolerance: e.quantity(
            "numerics",
            "retune_tolerance",
            Dim::Frequency,
            DEFAULT_RETUNE_TOLERANCE,
        )?,
        chi_tolerance: e.quantity(
            "numerics",
            "chi_tolerance",
            Dim::Frequency,
            DEFAULT_CHI_TOLERANCE,
        )?,
    };
    let transmons = command == Command::TransmonBaseline;
    let left = parse_qubit(&mut e, "left", transmons, &numerics)?;
    let right = parse_qubit(&mut e, "right", transmons, &numerics)?;
    let bus = BusSpec {
        frequency: e.quantity("bus", "frequency", Dim::Frequency, 6e9)?,
        fock_dim: e.count("bus", "fock_dim", DEFAULT_FOCK_DIM)?,
        charge_zpf: e.number("bus", "charge_zpf", 1.0)?,
    };
    let device = DeviceSpec {
        left,
        right,
        bus,
        gint_left: e.quantity(
            "coupling",
            "gint_left",
            Dim::InverseCapacitance,
            DEFAULT_GINT,
        )?,
        gint_right: e.quantity(
            "coupling",
            "gint_right",
            Dim::InverseCapacitance,
            DEFAULT_GINT,
        )?,
    };
    let calibration = CalibrationParams {
        enabled: e.flag("calibration", "enabled", command.calibrates_by_default())?,
        side: e.parsed("calibration", "side", Side::Left, parse_side)?,
        target: e.quantity(
            "calibration",
            "target",
            Dim::Frequency,
            DEFAULT_CHI_HALF_TARGET,
        )?,
        mode: e.choice("calibration", "mode", ModeBasis::A)?,
    };
    let sweep = SweepParams {
        detuning_start: e.quantity("sweep", "detuning_start", Dim::Frequency, -400e6)?,
        detuning_stop: e.quantity("sweep", "detuning_stop", Dim::Frequency, 400e6)?,
        detuning_step: e.quantity("sweep", "detuning_step", Dim::Frequency, 10e6)?,
        asymmetry: e.number("sweep", "asymmetry", 0.0)?,
        asymmetry_definition: e.choice(
            "sweep",
            "asymmetry_definition",
            AsymmetryDefinition::MeanDeviation,
        )?,
        mode: e.choice("sweep", "mode", ModeBasis::A)?,
    };
    let dt = match e.take("rip", "dt") {
        None => None,
        Some((v, line)) => Some(
            parse_quantity(&v, Dim::Time)
                .map_err(|m| ConfigError::at(line, format!("`dt`: {m}")))?,
        ),
    };
    let rip = RipParams {
        shape: e.parsed("rip", "shape", ShapeKind::RaisedCosine, parse_shape)?,
        edge: e.quantity("rip", "edge", Dim::Time, 100e-9)?,
        amplitude: e.quantity("rip", "amplitude", Dim::Frequency, 1e6)?,
        detuning: e.quantity("rip", "detuning", Dim::Frequency, -3e6)?,
        duration: e.quantity("rip", "duration", Dim::Time, 1000e-9)?,
        kappa: e.quantity("rip", "kappa", Dim::Frequency, 0.0)?,
        dt,
        chi_left: e.quantity("rip", "chi_left", Dim::Frequency, 5e6)?,
        chi_right: e.quantity("rip", "chi_right", Dim::Frequency, 8.5e6)?,
        echo: e.flag("rip", "echo", true)?,
        auto_amplitude: e.flag("rip", "auto_amplitude", false)?,
        echo_duration: e.quantity("rip", "echo_duration", Dim::Time, 0.0)?,
    };
    let ramsey = RamseyParams {
        tau_start: e.quantity("ramsey", "tau_start", Dim::Time, 200e-9)?,
        tau_stop: e.quantity("ramsey", "tau_stop", Dim::Time, 1200e-9)?,
        tau_step: e.quantity("ramsey", "tau_step", Dim::Time, 10e-9)?,
    };
    e.reject_unused()?;

    let config = RunConfig {
        command,
        output,
        convention,
        numerics,
        device,
        calibration,
        sweep,
        rip,
        ramsey,
    };
    config.validate()?;
    Ok(config)
}

impl RunConfig {
    /// Checks physical parameters; errors name the offending block.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let wrap = |block: &str, r: tcqsim::Result<()>| {
            r.map_err(|e| ConfigError::global(format!("[{block}] {e}")))
        };
        wrap("left", self.device.left.validate())?;
        wrap("right", self.device.right.validate())?;
        wrap("bus", self.device.bus.validate())?;
        wrap("coupling", self.device.validate())?;
        wrap("rip", self.rip.pulse().validate())?;
        let s = &self.sweep;
        if !(s.detuning_step > 0.0 && s.detuning_stop >= s.detuning_start) {
            return Err(ConfigError::global(
                "[sweep] need detuning_step > 0 and detuning_stop >= detuning_start",
            ));
        }
        if !(s.asymmetry.abs() < 1.0) {
            return Err(ConfigError::global("[sweep] asymmetry must lie in (-1, 1)"));
        }
        let r = &self.ramsey;
        if !(r.tau_step > 0.0 && r.tau_start > 0.0 && r.tau_stop >= r.tau_start) {
            return Err(ConfigError::global(
                "[ramsey] need tau_start > 0, tau_step > 0 and tau_stop >= tau_start",
            ));
        }
        let n = &self.numerics;
        if !(n.retune_tolerance > 0.0 && n.chi_tolerance > 0.0) {
            return Err(ConfigError::global(
                "[numerics] tolerances must be positive",
            ));
        }
        Ok(())
    }

    /// Writes every setting explicitly, so `parse_config` reads back an equal config.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        let mut kv = |k: &str, v: String| writeln!(out, "{k} = {v}").expect("writing to a String");
        kv("command", self.command.name().into());
        if let Some(o) = &self.output {
            kv("output", o.clone());
        }
        kv("convention", self.convention.name().into());
        let q = |x, d| format_quantity(x, d);
        let mut blocks: Vec<(&str, Vec<(&str, String)>)> = Vec::new();
        let n = &self.numerics;
        blocks.push((
            "numerics",
            vec![
                ("cutoff", n.charge_cutoff.to_string()),
                ("keep_levels", n.keep_levels.to_string()),
                ("retune_tolerance", q(n.retune_tolerance, Dim::Frequency)),
                ("chi_tolerance", q(n.chi_tolerance, Dim::Frequency)),
            ],
        ));
        for (name, qubit) in [("left", &self.device.left), ("right", &self.device.right)] {
            let body = match qubit {
                QubitSpec::Tcq(t) => vec![
                    ("kind", "tcq".to_string()),
                    ("c1", q(t.c1, Dim::Capacitance)),
                    ("c2", q(t.c2, Dim::Capacitance)),
                    ("cs", q(t.cs, Dim::Capacitance)),
                    ("ej1", q(t.ej1, Dim::Frequency)),
                    ("ej2", q(t.ej2, Dim::Frequency)),
                    ("ng1", t.ng1.to_string()),
                    ("ng2", t.ng2.to_string()),
                ],
                QubitSpec::Transmon(t) => vec![
                    ("kind", "transmon".to_string()),
                    ("c", q(t.c, Dim::Capacitance)),
                    ("ej", q(t.ej, Dim::Frequency)),
                    ("ng", t.ng.to_string()),
                ],
            };
            blocks.push((name, body));
        }
        let b = &self.device.bus;
        blocks.push((
            "bus",
            vec![
                ("frequency", q(b.frequency, Dim::Frequency)),
                ("fock_dim", b.fock_dim.to_string()),
                ("charge_zpf", b.charge_zpf.to_string()),
            ],
        ));
        blocks.push((
            "coupling",
            vec![
                (
                    "gint_left",
                    q(self.device.gint_left, Dim::InverseCapacitance),
                ),
                (
                    "gint_right",
                    q(self.device.gint_right, Dim::InverseCapacitance),
                ),
            ],
        ));
        let c = &self.calibration;
        blocks.push((
            "calibration",
            vec![
                ("enabled", c.enabled.to_string()),
                ("side", side_name(c.side).into()),
                ("target", q(c.target, Dim::Frequency)),
                ("mode", c.mode.name().into()),
            ],
        ));
        let s = &self.sweep;
        blocks.push((
            "sweep",
            vec![
                ("detuning_start", q(s.detuning_start, Dim::Frequency)),
                ("detuning_stop", q(s.detuning_stop, Dim::Frequency)),
                ("detuning_step", q(s.detuning_step, Dim::Frequency)),
                ("asymmetry", s.asymmetry.to_string()),
                ("asymmetry_definition", s.asymmetry_definition.name().into()),
                ("mode", s.mode.name().into()),
            ],
        ));
        let r = &self.rip;
        let mut rip = vec![
            ("shape", shape_name(r.shape).to_string()),
            ("edge", q(r.edge, Dim::Time)),
            ("amplitude", q(r.amplitude, Dim::Frequency)),
            ("detuning", q(r.detuning, Dim::Frequency)),
            ("duration", q(r.duration, Dim::Time)),
            ("kappa", q(r.kappa, Dim::Frequency)),
        ];
        if let Some(dt) = r.dt {
            rip.push(("dt", q(dt, Dim::Time)));
        }
        rip.extend([
            ("chi_left", q(r.chi_left, Dim::Frequency)),
            ("chi_right", q(r.chi_right, Dim::Frequency)),
            ("echo", r.echo.to_string()),
            ("auto_amplitude", r.auto_amplitude.to_string()),
            ("echo_duration", q(r.echo_duration, Dim::Time)),
        ]);
        blocks.push(("rip", rip));
        let m = &self.ramsey;
        blocks.push((
            "ramsey",
            vec![
                ("tau_start", q(m.tau_start, Dim::Time)),
                ("tau_stop", q(m.tau_stop, Dim::Time)),
                ("tau_step", q(m.tau_step, Dim::Time)),
            ],
        ));
        for (name, body) in blocks {
            writeln!(out, "\n[{name}]").expect("writing to a String");
            for (k, v) in body {
                writeln!(out, "{k} = {v}").expect("writing to a String");
            }
        }
        out
    }

    /// Flattened `(block.key, value)` pairs for output metadata.
    pub fn echo(&self) -> Vec<(String, String)> {
        let mut section = String::new();
        let mut pairs = Vec::new();
        for line in self.serialize().lines() {
            let line = line.trim();
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                section = format!("{name}.");
            } else if let Some((k, v)) = line.split_once('=') {
                pairs.push((
                    format!("config.{section}{}", k.trim()),
                    v.trim().to_string(),
                ));
            }
        }
        pairs
    }
}
