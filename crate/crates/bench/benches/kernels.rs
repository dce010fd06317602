use criterion::{black_box, criterion_group, criterion_main, Criterion};

use tcqsim::hamiltonian::tcq_hamiltonian;
use tcqsim::linalg::eigh;
use tcqsim::observables::{device_spectrum, static_zz};
use tcqsim::rip::echoed_rip;
use tcqsim::{BusSpec, ChargingConvention, ChiPair, DeviceSpec, QubitSpec, RipPulse, TcqSpec};

const FF: f64 = 1e-15;

fn tcq(ej: f64) -> TcqSpec {
    TcqSpec::new(45.0 * FF, 45.0 * FF, 20.0 * FF, ej, ej)
}

fn bench_eigh(c: &mut Criterion) {
    let h = tcq_hamiltonian(&tcq(8.1e9), ChargingConvention::Standard).unwrap();
    c.bench_function("eigh_tcq_289", |b| b.iter(|| eigh(black_box(&h)).unwrap()));
}

fn bench_zz_point(c: &mut Criterion) {
    let device = DeviceSpec {
        left: QubitSpec::Tcq(tcq(8.1e9)),
        right: QubitSpec::Tcq(tcq(8.3e9)),
        bus: BusSpec::new(6e9),
        gint_left: 6.5e11,
        gint_right: 6.5e11,
    };
    let mut g = c.benchmark_group("composite");
    g.sample_size(10);
    g.bench_function("zz_point_tcq_pair", |b| {
        b.iter(|| {
            static_zz(&device_spectrum(black_box(&device), ChargingConvention::Standard).unwrap())
                .unwrap()
        })
    });
    g.finish();
}

fn bench_rip(c: &mut Criterion) {
    let pulse = RipPulse::square(2e6, -3e6, 1e-6);
    let chis = ChiPair {
        left: 5e6,
        right: 8.5e6,
    };
    c.bench_function("echoed_rip_2000_steps", |b| {
        b.iter(|| echoed_rip(black_box(&pulse), &chis).unwrap())
    });
}

criterion_group!(benches, bench_eigh, bench_zz_point, bench_rip);
criterion_main!(benches);
