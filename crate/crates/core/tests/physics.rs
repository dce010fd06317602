use tcqsim::observables::{device_spectrum, static_zz_levels};
use tcqsim::sweep::{
    calibrate_chi, total_ej, transmon_baseline, zz_vs_detuning, CalibrationOptions,
};
use tcqsim::{
    BusSpec, ChargingConvention, DeviceSpec, QubitSpec, Side, SweepConfig, TcqSpec, TransmonSpec,
};

const CONV: ChargingConvention = ChargingConvention::Standard;

fn transmon_pair(gint: f64) -> DeviceSpec {
    let t: QubitSpec = TransmonSpec::new(70e-15, 11.2e9).into();
    DeviceSpec {
        left: t.clone(),
        right: t,
        bus: BusSpec::new(6e9),
        gint_left: gint,
        gint_right: gint,
    }
}

fn slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let num: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    num / lx.iter().map(|a| (a - mx).powi(2)).sum::<f64>()
}

#[test]
fn zz_vanishes_at_least_quadratically_in_the_coupling() {
    let gints = [2e10, 4e10, 8e10];
    let zz: Vec<f64> = gints
        .iter()
        .map(|&g| {
            let mut d = transmon_pair(g);
            if let QubitSpec::Transmon(t) = &mut d.right {
                t.ej = 12.0e9;
            }
            static_zz_levels(&device_spectrum(&d, CONV).unwrap(), 1, 1)
                .unwrap()
                .abs()
        })
        .collect();
    let s = slope(&gints, &zz);
    assert!(s >= 1.9, "slope {s}, zz {zz:?}");
}

#[test]
fn calibration_is_idempotent() {
    let opts = CalibrationOptions::default();
    let first = calibrate_chi(&transmon_pair(6.5e11), 1e6, Side::Left, &opts).unwrap();
    let second = calibrate_chi(&first.device, 1e6, Side::Left, &opts).unwrap();
    let (a, b) = (total_ej(&first.device.left), total_ej(&second.device.left));
    assert!(first.converged && second.converged);
    assert!(((a - b) / a).abs() < 1e-4, "{a} then {b}");
    assert!((0.5 * second.chi.abs() - 1e6).abs() <= 1e3);
}

#[test]
fn uncoupled_transmons_show_no_zz() {
    let config = SweepConfig::new(transmon_pair(0.0), vec![-100e6, 0.0, 100e6]);
    let result = transmon_baseline(&config).unwrap();
    for row in &result.rows {
        assert!(row.zz.abs() < 1e-3, "{row:?}");
    }
}

#[test]
fn sweep_retunes_the_right_qubit_onto_the_grid() {
    let t = TcqSpec::new(45e-15, 45e-15, 20e-15, 8.1e9, 8.1e9);
    let d = DeviceSpec {
        left: t.clone().into(),
        right: t.into(),
        bus: BusSpec::new(6e9),
        gint_left: 6.5e11,
        gint_right: 6.5e11,
    };
    let config = SweepConfig::new(d, vec![-100e6, 100e6]);
    let result = zz_vs_detuning(&config).unwrap();
    for row in &result.rows {
        assert!(row.converged);
        assert!(
            (row.f_right - result.f_left - row.detuning).abs() <= 1e4,
            "{row:?}"
        );
        assert!(row.zz.abs() < 100.0, "{row:?}");
    }
    assert!(result.rows[0].ej_right < result.rows[1].ej_right);
}
