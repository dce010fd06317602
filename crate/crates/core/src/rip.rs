//! Resonator-induced phase gate: a detuned drive on the bus whose
//! qubit-state-dependent pull imprints conditional phases.
//!
//! The bus is treated as a classical coherent amplitude `alpha` in the frame
//! of the drive. For qubit state `s` the cavity sits `detuning + pull(s)`
//! away from the drive, and the state acquires
//! `theta = -2 pi \int Re[eps* alpha] dt`.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Steps per pulse when no explicit time step is given.
pub const DEFAULT_STEPS: usize = 2000;
const MIN_STEPS: usize = 100;
const MAX_AMPLITUDE: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PulseShape {
    Square,
    /// Half-cosine ramps of length `edge` (s) at both ends.
    RaisedCosine {
        edge: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RipPulse {
    pub shape: PulseShape,
    /// Peak drive strength (Hz).
    pub amplitude: f64,
    /// Drive frequency minus bare bus frequency (Hz).
    pub detuning: f64,
    /// Length of one drive segment (s).
    pub duration: f64,
    /// Bus energy decay rate (Hz).
    pub kappa: f64,
    /// Integration step (s). `None` uses `duration / DEFAULT_STEPS`.
    pub dt: Option<f64>,
}

impl RipPulse {
    pub fn square(amplitude: f64, detuning: f64, duration: f64) -> Self {
        Self {
            shape: PulseShape::Square,
            amplitude,
            detuning,
            duration,
            kappa: 0.0,
            dt: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |name, v: f64| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::invalid(name, format!("must be finite, got {v}")))
            }
        };
        finite("amplitude", self.amplitude)?;
        finite("detuning", self.detuning)?;
        if self.amplitude != 0.0 && self.detuning == 0.0 {
            return Err(Error::invalid(
                "detuning",
                "a nonzero drive must be detuned from the bus",
            ));
        }
        if !(self.duration.is_finite() && self.duration > 0.0) {
            return Err(Error::invalid(
                "duration",
                format!("must be positive, got {}", self.duration),
            ));
        }
        if !(self.kappa.is_finite() && self.kappa >= 0.0) {
            return Err(Error::invalid(
                "kappa",
                format!("must be non-negative, got {}", self.kappa),
            ));
        }
        if let PulseShape::RaisedCosine { edge } = self.shape {
            if !(edge > 0.0 && 2.0 * edge <= self.duration) {
                return Err(Error::invalid(
                    "edge",
                    format!("need 0 < edge <= duration / 2, got {edge}"),
                ));
            }
        }
        if let Some(dt) = self.dt {
            if !(dt > 0.0 && dt <= self.duration / MIN_STEPS as f64) {
                return Err(Error::invalid(
                    "dt",
                    format!("need 0 < dt <= duration / {MIN_STEPS}, got {dt}"),
                ));
            }
        }
        Ok(())
    }

    pub fn steps(&self) -> usize {
        match self.dt {
            Some(dt) => (self.duration / dt).round().max(MIN_STEPS as f64) as usize,
            None => DEFAULT_STEPS,
        }
    }

    /// Normalized envelope in `[0, 1]`.
    pub fn envelope(&self, t: f64) -> f64 {
        if !(0.0..=self.duration).contains(&t) {
            return 0.0;
        }
        match self.shape {
            PulseShape::Square => 1.0,
            PulseShape::RaisedCosine { edge } => {
                let d = t.min(self.duration - t);
                if d >= edge {
                    1.0
                } else {
                    0.5 * (1.0 - (PI * d / edge).cos())
                }
            }
        }
    }

    pub fn drive(&self, t: f64) -> f64 {
        self.amplitude * self.envelope(t)
    }

    fn with_steps(&self, steps: usize) -> RipPulse {
        RipPulse {
            dt: Some(self.duration / steps as f64),
            ..self.clone()
        }
    }
}

/// Dispersive shifts of the two qubits on the bus. The cavity pull is
/// `2 chi_left s_left + 2 chi_right s_right`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiPair {
    pub left: f64,
    pub right: f64,
}

impl ChiPair {
    pub fn pull(&self, state: QubitState) -> f64 {
        let (l, r) = state.bits();
        2.0 * self.left * l as f64 + 2.0 * self.right * r as f64
    }
}

/// Computational state `|left right>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QubitState {
    S00,
    S01,
    S10,
    S11,
}

impl QubitState {
    pub const ALL: [QubitState; 4] = [
        QubitState::S00,
        QubitState::S01,
        QubitState::S10,
        QubitState::S11,
    ];

    pub fn bits(self) -> (u8, u8) {
        match self {
            QubitState::S00 => (0, 0),
            QubitState::S01 => (0, 1),
            QubitState::S10 => (1, 0),
            QubitState::S11 => (1, 1),
        }
    }

    pub fn flipped(self) -> QubitState {
        match self {
            QubitState::S00 => QubitState::S11,
            QubitState::S01 => QubitState::S10,
            QubitState::S10 => QubitState::S01,
            QubitState::S11 => QubitState::S00,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            QubitState::S00 => "00",
            QubitState::S01 => "01",
            QubitState::S10 => "10",
            QubitState::S11 => "11",
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub alpha: Vec<Complex64>,
    /// Accumulated phase at each time.
    pub phase: Vec<f64>,
}

impl Trajectory {
    pub fn final_alpha(&self) -> Complex64 {
        *self
            .alpha
            .last()
            .expect("trajectory has at least the initial point")
    }

    pub fn final_phase(&self) -> f64 {
        *self
            .phase
            .last()
            .expect("trajectory has at least the initial point")
    }

    pub fn residual_photons(&self) -> f64 {
        self.final_alpha().norm_sqr()
    }
}

/// Integrates the driven bus from vacuum with fixed-step RK4.
pub fn cavity_trajectory(pulse: &RipPulse, pull: f64) -> Result<Trajectory> {
    pulse.validate()?;
    if !pull.is_finite() {
        return Err(Error::invalid("pull", "must be finite"));
    }
    let steps = pulse.steps();
    let h = pulse.duration / steps as f64;
    let rotation = Complex64::new(-PI * pulse.kappa, -2.0 * PI * (pulse.detuning + pull));
    let minus_i_2pi = Complex64::new(0.0, -2.0 * PI);
    let rhs = |t: f64, a: Complex64| -> (Complex64, f64) {
        // the last stage can land a rounding error past the end of the pulse
        let eps = pulse.drive(t.min(pulse.duration));
        (rotation * a + minus_i_2pi * eps, -2.0 * PI * eps * a.re)
    };

    let mut times = Vec::with_capacity(steps + 1);
    let mut alpha = Vec::with_capacity(steps + 1);
    let mut phase = Vec::with_capacity(steps + 1);
    let (mut a, mut theta) = (Complex64::new(0.0, 0.0), 0.0);
    times.push(0.0);
    alpha.push(a);
    phase.push(theta);
    for k in 0..steps {
        let t = k as f64 * h;
        let (ka1, kt1) = rhs(t, a);
        let (ka2, kt2) = rhs(t + 0.5 * h, a + ka1 * (0.5 * h));
        let (ka3, kt3) = rhs(t + 0.5 * h, a + ka2 * (0.5 * h));
        let (ka4, kt4) = rhs(t + h, a + ka3 * h);
        a += (ka1 + ka2 * 2.0 + ka3 * 2.0 + ka4) * (h / 6.0);
        theta += (kt1 + 2.0 * kt2 + 2.0 * kt3 + kt4) * (h / 6.0);
        let t_next = (k + 1) as f64 * h;
        if !(a.norm() <= MAX_AMPLITUDE && theta.is_finite()) {
            return Err(Error::Integrator {
                t: t_next,
                amplitude: a.norm(),
            });
        }
        times.push(t_next);
        alpha.push(a);
        phase.push(theta);
    }
    Ok(Trajectory {
        times,
        alpha,
        phase,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RipResult {
    /// Phase of each computational state, indexed in `QubitState::ALL` order.
    pub phases: [f64; 4],
    pub entangling_phase: f64,
    pub single_qubit_phases: (f64, f64),
    /// Photons left in the bus at the end of a segment, per state (the larger
    /// of the two segments when echoed).
    pub residual_photons: [f64; 4],
    /// Bus amplitude after the last segment, per state.
    pub final_alpha: [Complex64; 4],
    /// Largest phase change when the step is halved.
    pub step_sensitivity: f64,
    /// Total drive time (one or two segments).
    pub drive_duration: f64,
    /// Sampled bus amplitudes per state, filled by the traced variants.
    pub trajectories: Vec<Trajectory>,
}

impl RipResult {
    pub fn phase(&self, state: QubitState) -> f64 {
        self.phases[state.index()]
    }

    /// Duration including the echo pulses between and after segments.
    pub fn gate_duration(&self, echo_pulses: f64) -> f64 {
        self.drive_duration + echo_pulses
    }

    fn from_phases(
        phases: [f64; 4],
        final_alpha: [Complex64; 4],
        step_sensitivity: f64,
        drive_duration: f64,
    ) -> Self {
        let [p00, p01, p10, p11] = phases;
        RipResult {
            phases,
            entangling_phase: p00 + p11 - p01 - p10,
            single_qubit_phases: (0.5 * (p10 + p11 - p00 - p01), 0.5 * (p01 + p11 - p00 - p10)),
            residual_photons: final_alpha.map(|a| a.norm_sqr()),
            final_alpha,
            step_sensitivity,
            drive_duration,
            trajectories: Vec::new(),
        }
    }
}

fn segment(pulse: &RipPulse, chis: &ChiPair, state: QubitState) -> Result<(f64, Complex64, f64)> {
    let traj = cavity_trajectory(pulse, chis.pull(state))?;
    let fine = cavity_trajectory(&pulse.with_steps(2 * pulse.steps()), chis.pull(state))?;
    Ok((
        traj.final_phase(),
        traj.final_alpha(),
        (fine.final_phase() - traj.final_phase()).abs(),
    ))
}

/// One drive segment without echo.
pub fn state_phases(pulse: &RipPulse, chis: &ChiPair) -> Result<RipResult> {
    let mut phases = [0.0; 4];
    let mut alphas = [Complex64::new(0.0, 0.0); 4];
    let mut sensitivity: f64 = 0.0;
    for s in QubitState::ALL {
        let (p, a, d) = segment(pulse, chis, s)?;
        phases[s.index()] = p;
        alphas[s.index()] = a;
        sensitivity = sensitivity.max(d);
    }
    Ok(RipResult::from_phases(
        phases,
        alphas,
        sensitivity,
        pulse.duration,
    ))
}

/// `state_phases` keeping the four sampled trajectories.
pub fn state_phases_traced(pulse: &RipPulse, chis: &ChiPair) -> Result<RipResult> {
    let mut r = state_phases(pulse, chis)?;
    r.trajectories = QubitState::ALL
        .iter()
        .map(|&s| cavity_trajectory(pulse, chis.pull(s)))
        .collect::<Result<_>>()?;
    Ok(r)
}

/// Two segments with both qubits flipped in between. Each segment starts
/// from an empty bus, which a ring-down between segments provides.
pub fn echoed_rip(pulse: &RipPulse, chis: &ChiPair) -> Result<RipResult> {
    let single = state_phases(pulse, chis)?;
    let mut phases = [0.0; 4];
    let mut alphas = [Complex64::new(0.0, 0.0); 4];
    let mut residual = [0.0; 4];
    for s in QubitState::ALL {
        phases[s.index()] = single.phase(s) + single.phase(s.flipped());
        alphas[s.index()] = single.final_alpha[s.flipped().index()];
        residual[s.index()] =
            single.residual_photons[s.index()].max(single.residual_photons[s.flipped().index()]);
    }
    let mut r = RipResult::from_phases(
        phases,
        alphas,
        2.0 * single.step_sensitivity,
        2.0 * pulse.duration,
    );
    // the first segment's leftover photons matter as much as the second's
    r.residual_photons = residual;
    Ok(r)
}

/// Rescales the drive so the entangling phase reaches `target` in magnitude.
/// Phases are quadratic in the drive strength, so one evaluation suffices.
pub fn amplitude_for_phase(
    pulse: &RipPulse,
    chis: &ChiPair,
    target: f64,
    echoed: bool,
) -> Result<f64> {
    if !(target.is_finite() && target > 0.0) {
        return Err(Error::invalid(
            "target",
            format!("must be positive, got {target}"),
        ));
    }
    let reference = if pulse.amplitude != 0.0 {
        pulse.amplitude
    } else {
        1e6
    };
    let trial = RipPulse {
        amplitude: reference,
        ..pulse.clone()
    };
    let result = if echoed {
        echoed_rip(&trial, chis)?
    } else {
        state_phases(&trial, chis)?
    };
    let e = result.entangling_phase.abs();
    if !(e > 0.0) {
        return Err(Error::invalid(
            "chis",
            "entangling phase vanishes for this pulse",
        ));
    }
    Ok(reference.abs() * (target / e).sqrt())
}

#[derive(Debug, Clone, PartialEq)]
pub struct RamseyPoint {
    pub tau: f64,
    /// Right qubit phase after the echoed sequence with the left qubit in 0 and in 1.
    pub phase_left0: f64,
    pub phase_left1: f64,
    /// Predicted Ramsey signal of the right qubit for each left state.
    pub z_left0: f64,
    pub z_left1: f64,
    /// `exp(-2 n)` with `n` the larger residual photon number of the pair.
    pub contrast_left0: f64,
    pub contrast_left1: f64,
    pub entangling_phase: f64,
}

/// Echoed-sequence Ramsey prediction for the right qubit versus segment length.
pub fn ramsey_trace(pulse: &RipPulse, chis: &ChiPair, taus: &[f64]) -> Result<Vec<RamseyPoint>> {
    if taus.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::invalid("tau_grid", "must be strictly increasing"));
    }
    taus.iter()
        .map(|&tau| {
            let r = echoed_rip(
                &RipPulse {
                    duration: tau,
                    ..pulse.clone()
                },
                chis,
            )?;
            let n = &r.residual_photons;
            let phase_left0 = r.phases[1] - r.phases[0];
            let phase_left1 = r.phases[3] - r.phases[2];
            let contrast_left0 = (-2.0 * n[0].max(n[1])).exp();
            let contrast_left1 = (-2.0 * n[2].max(n[3])).exp();
            Ok(RamseyPoint {
                tau,
                phase_left0,
                phase_left1,
                z_left0: contrast_left0 * phase_left0.cos(),
                z_left1: contrast_left1 * phase_left1.cos(),
                contrast_left0,
                contrast_left1,
                entangling_phase: r.entangling_phase,
            })
        })
        .collect()
}

/// First segment length on a trace where the echoed entangling phase reaches
/// pi in magnitude, linearly interpolated between grid points.
pub fn cz_point(trace: &[RamseyPoint]) -> Option<f64> {
    let target = std::f64::consts::PI;
    trace.windows(2).find_map(|w| {
        let (a, b) = (w[0].entangling_phase.abs(), w[1].entangling_phase.abs());
        (a < target && b >= target)
            .then(|| w[0].tau + (target - a) / (b - a) * (w[1].tau - w[0].tau))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const MHZ: f64 = 1e6;
    const NS: f64 = 1e-9;

    fn chis() -> ChiPair {
        ChiPair {
            left: 2.5 * MHZ,
            right: 4.25 * MHZ,
        }
    }

    #[test]
    fn zero_drive_gives_zero_phase() {
        let r = echoed_rip(&RipPulse::square(0.0, -30.0 * MHZ, 400.0 * NS), &chis()).unwrap();
        assert_eq!(r.phases, [0.0; 4]);
        assert_eq!(r.entangling_phase, 0.0);
    }

    #[test]
    fn square_pulse_matches_closed_form() {
        // alpha(t) = eps/d (exp(-i 2 pi d t) - 1), theta = 2 pi eps^2/d (t - sin(2 pi d t)/(2 pi d))
        let (eps, d, tau) = (3.0 * MHZ, -25.0 * MHZ, 333.0 * NS);
        let traj = cavity_trajectory(&RipPulse::square(eps, d, tau), 0.0).unwrap();
        let w = 2.0 * PI * d;
        let alpha = eps / d * (Complex64::new(0.0, -w * tau).exp() - 1.0);
        let theta = 2.0 * PI * eps * eps / d * (tau - (w * tau).sin() / w);
        assert!(
            (traj.final_alpha() - alpha).norm() < 1e-6,
            "{} {}",
            traj.final_alpha(),
            alpha
        );
        assert!(
            (traj.final_phase() - theta).abs() < 1e-6,
            "{} {theta}",
            traj.final_phase()
        );
    }

    #[test]
    fn echo_cancels_single_qubit_phases() {
        let p = RipPulse {
            shape: PulseShape::RaisedCosine { edge: 40.0 * NS },
            ..RipPulse::square(4.0 * MHZ, -30.0 * MHZ, 300.0 * NS)
        };
        let single = state_phases(&p, &chis()).unwrap();
        let echo = echoed_rip(&p, &chis()).unwrap();
        assert_eq!(echo.phase(QubitState::S00), echo.phase(QubitState::S11));
        assert_eq!(echo.phase(QubitState::S01), echo.phase(QubitState::S10));
        assert!(
            echo.single_qubit_phases.0.abs() < 1e-12 && echo.single_qubit_phases.1.abs() < 1e-12
        );
        assert!((echo.entangling_phase - 2.0 * single.entangling_phase).abs() < 1e-12);
        assert!(single.single_qubit_phases.0.abs() > 1e-3);
    }

    #[test]
    fn drive_scaling_is_quadratic() {
        let p = RipPulse::square(2.0 * MHZ, -20.0 * MHZ, 500.0 * NS);
        let a = state_phases(&p, &chis()).unwrap();
        let b = state_phases(
            &RipPulse {
                amplitude: 6.0 * MHZ,
                ..p.clone()
            },
            &chis(),
        )
        .unwrap();
        for k in 0..4 {
            assert!((b.phases[k] - 9.0 * a.phases[k]).abs() < 1e-9 * b.phases[k].abs().max(1.0));
        }
        let eps = amplitude_for_phase(&p, &chis(), PI, true).unwrap();
        let r = echoed_rip(
            &RipPulse {
                amplitude: eps,
                ..p
            },
            &chis(),
        )
        .unwrap();
        assert!((r.entangling_phase.abs() - PI).abs() < 1e-9);
    }

    #[test]
    fn decay_damps_residual_photons() {
        let p = RipPulse::square(3.0 * MHZ, -20.0 * MHZ, 2000.0 * NS);
        let lossy = RipPulse {
            kappa: 2.0 * MHZ,
            ..p.clone()
        };
        let a = cavity_trajectory(&p, 0.0).unwrap();
        let b = cavity_trajectory(&lossy, 0.0).unwrap();
        // steady state |eps / (d - i kappa / 2)|^2
        let steady = 9.0 / (400.0 + 1.0);
        assert!(
            (b.residual_photons() - steady).abs() < 1e-3 * steady,
            "{}",
            b.residual_photons()
        );
        assert!(a.residual_photons() > 0.0);
    }

    #[test]
    fn step_refinement_is_small() {
        let r = state_phases(
            &RipPulse::square(3.0 * MHZ, -20.0 * MHZ, 500.0 * NS),
            &chis(),
        )
        .unwrap();
        assert!(r.step_sensitivity < 1e-6, "{}", r.step_sensitivity);
    }

    #[test]
    fn invalid_pulses_rejected() {
        let p = RipPulse::square(1.0, 1.0, 100.0 * NS);
        assert!(RipPulse {
            duration: 0.0,
            ..p.clone()
        }
        .validate()
        .is_err());
        assert!(RipPulse {
            dt: Some(10.0 * NS),
            ..p.clone()
        }
        .validate()
        .is_err());
        assert!(RipPulse {
            shape: PulseShape::RaisedCosine { edge: 60.0 * NS },
            ..p.clone()
        }
        .validate()
        .is_err());
        assert!(RipPulse { kappa: -1.0, ..p }.validate().is_err());
    }

    #[test]
    fn ramsey_contrast_and_phase() {
        let p = RipPulse::square(3.0 * MHZ, -30.0 * MHZ, 100.0 * NS);
        let pts = ramsey_trace(&p, &chis(), &[100.0 * NS, 200.0 * NS]).unwrap();
        for pt in &pts {
            assert!(pt.z_left0.abs() <= 1.0 && pt.z_left1.abs() <= 1.0);
            assert!((pt.phase_left1 - pt.phase_left0 - pt.entangling_phase).abs() < 1e-12);
        }
        assert!(ramsey_trace(&p, &chis(), &[200.0 * NS, 100.0 * NS]).is_err());
        let off = ramsey_trace(
            &RipPulse {
                amplitude: 0.0,
                ..p
            },
            &chis(),
            &[100.0 * NS, 150.0 * NS],
        )
        .unwrap();
        assert!(off.iter().all(|pt| pt.z_left0 == 1.0 && pt.z_left1 == 1.0));
    }

    #[test]
    fn steady_state_stark_rate() {
        let (eps, d) = (1.0 * MHZ, -20.0 * MHZ);
        let p = RipPulse {
            kappa: 4.0 * MHZ,
            ..RipPulse::square(eps, d, 2000.0 * NS)
        };
        let tr = cavity_trajectory(&p, 5.0 * MHZ).unwrap();
        let k = tr.times.len() - 1;
        let rate = (tr.phase[k] - tr.phase[k - 100]) / (tr.times[k] - tr.times[k - 100]);
        // with loss the rate is 2 pi eps^2 (d + pull) / ((d + pull)^2 + kappa^2 / 4)
        let det = d + 5.0 * MHZ;
        let expected = 2.0 * PI * eps * eps * det / (det * det + 4.0 * MHZ * MHZ);
        assert!((rate / expected - 1.0).abs() < 1e-3, "{rate} {expected}");
    }

    #[test]
    fn adiabatic_edges_leave_few_photons() {
        let d = -10.0 * MHZ;
        let p = RipPulse {
            shape: PulseShape::RaisedCosine {
                edge: 5.0 / d.abs(),
            },
            ..RipPulse::square(2.0 * MHZ, d, 1500.0 * NS)
        };
        let tr = cavity_trajectory(&p, 0.0).unwrap();
        let peak = tr.alpha.iter().map(|a| a.norm_sqr()).fold(0.0, f64::max);
        assert!(
            tr.residual_photons() < 1e-3 * peak,
            "{} {peak}",
            tr.residual_photons()
        );
    }

    #[test]
    fn swapping_chis_keeps_entangling_phase() {
        let p = RipPulse::square(3.0 * MHZ, -30.0 * MHZ, 300.0 * NS);
        let c = chis();
        let a = echoed_rip(&p, &c).unwrap();
        let b = echoed_rip(
            &p,
            &ChiPair {
                left: c.right,
                right: c.left,
            },
        )
        .unwrap();
        assert!((a.entangling_phase - b.entangling_phase).abs() < 1e-12);
        let none = state_phases(
            &p,
            &ChiPair {
                left: 0.0,
                right: 0.0,
            },
        )
        .unwrap();
        assert!(none.phases.iter().all(|&x| x == none.phases[0]));
        assert_eq!(none.entangling_phase, 0.0);
    }

    #[test]
    fn on_resonance_drive_rejected() {
        assert!(RipPulse::square(1.0 * MHZ, 0.0, 100.0 * NS)
            .validate()
            .is_err());
        assert!(RipPulse::square(0.0, 0.0, 100.0 * NS).validate().is_ok());
    }

    #[test]
    fn traced_result_has_four_trajectories() {
        let r = state_phases_traced(
            &RipPulse::square(1.0 * MHZ, -5.0 * MHZ, 100.0 * NS),
            &chis(),
        )
        .unwrap();
        assert_eq!(r.trajectories.len(), 4);
        assert_eq!(r.trajectories[3].final_phase(), r.phases[3]);
    }

    #[test]
    fn cz_interpolation() {
        let p = RipPulse::square(4.0 * MHZ, -8.0 * MHZ, 100.0 * NS);
        let taus: Vec<f64> = (1..=200).map(|k| k as f64 * 5.0 * NS).collect();
        let trace = ramsey_trace(&p, &chis(), &taus).unwrap();
        let tau = cz_point(&trace).expect("phase reaches pi on this grid");
        let e = echoed_rip(&RipPulse { duration: tau, ..p }, &chis()).unwrap();
        assert!(
            (e.entangling_phase.abs() - PI).abs() < 0.05,
            "{}",
            e.entangling_phase
        );
    }
}
