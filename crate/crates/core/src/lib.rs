//! Charge-basis simulation of tunable coupling qubits on a shared bus:
//! circuit reduction, truncated Hamiltonians, dressed spectra, static ZZ
//! sweeps and the resonator-induced phase gate.

pub mod circuit;
pub mod error;
pub mod hamiltonian;
pub mod linalg;
pub mod observables;
pub mod rip;
pub mod sweep;

pub use circuit::{BusSpec, DeviceSpec, QubitSpec, TcqSpec, TransmonSpec};
pub use error::{Error, Result};
pub use hamiltonian::{ChargingConvention, ProductLabel};
pub use linalg::OperatorMatrix;
pub use observables::{LabeledSpectrum, Side};
pub use rip::{ChiPair, PulseShape, RipPulse, RipResult};
pub use sweep::{ModeBasis, SweepConfig, SweepResult, SweepRow};

/// Crate version recorded in output metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
