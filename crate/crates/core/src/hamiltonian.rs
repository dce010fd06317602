//! Charge-basis Hamiltonians, two-stage truncation and the coupled
//! qubit-bus-qubit Hamiltonian.
//!
//! All Hamiltonians are in Hz. Product bases are ordered left ⊗ right ⊗ bus
//! and charge bases run from `-cutoff` to `+cutoff`.

use crate::circuit::{
    BusSpec, DeviceSpec, QubitSpec, TcqSpec, TransmonSpec, ELEMENTARY_CHARGE, PLANCK,
};
use crate::error::{Error, Result};
use crate::linalg::{congruence_transform, eigh, OperatorMatrix, DEFAULT_MAX_DIM};

/// Prefactors turning inverse-capacitance coefficients (1/F) into Hz.
///
/// `Standard` uses (2e)^2/h for every quadratic charge term, which gives
/// `4 E_C n^2` in the single-junction limit. `LiteralPi` uses 4 pi e^2/h for
/// the junction self terms and 8 pi e^2/h for the cross and bus terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ChargingConvention {
    #[default]
    Standard,
    LiteralPi,
}

impl ChargingConvention {
    fn e2_over_h() -> f64 {
        ELEMENTARY_CHARGE * ELEMENTARY_CHARGE / PLANCK
    }

    /// Multiplies `g11`, `g22` (and the transmon's 1/2C).
    pub fn self_prefactor(self) -> f64 {
        match self {
            ChargingConvention::Standard => 4.0 * Self::e2_over_h(),
            ChargingConvention::LiteralPi => 4.0 * std::f64::consts::PI * Self::e2_over_h(),
        }
    }

    /// Multiplies `g12`.
    pub fn cross_prefactor(self) -> f64 {
        match self {
            ChargingConvention::Standard => 4.0 * Self::e2_over_h(),
            ChargingConvention::LiteralPi => 8.0 * std::f64::consts::PI * Self::e2_over_h(),
        }
    }

    /// Multiplies `gint`.
    pub fn coupling_prefactor(self) -> f64 {
        self.cross_prefactor()
    }

    pub fn name(self) -> &'static str {
        match self {
            ChargingConvention::Standard => "standard",
            ChargingConvention::LiteralPi => "literal-pi",
        }
    }
}

impl std::str::FromStr for ChargingConvention {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "standard" => Ok(ChargingConvention::Standard),
            "literal-pi" => Ok(ChargingConvention::LiteralPi),
            other => Err(format!(
                "unknown convention `{other}` (expected standard | literal-pi)"
            )),
        }
    }
}

/// Diagonal charge operator `n - ng` on `-cutoff..=cutoff`.
pub fn number_operator(cutoff: usize, ng: f64) -> OperatorMatrix {
    let n = cutoff as i64;
    let diag: Vec<f64> = (-n..=n).map(|k| k as f64 - ng).collect();
    OperatorMatrix::from_diagonal(&diag).with_tag("charge")
}

/// `cos(phi)` in the charge basis: 1/2 on the first off-diagonals.
pub fn cos_phi_operator(cutoff: usize) -> OperatorMatrix {
    let dim = 2 * cutoff + 1;
    OperatorMatrix::from_fn(dim, |i, j| if i.abs_diff(j) == 1 { 0.5 } else { 0.0 })
        .with_tag("charge")
}

fn check_cutoff(cutoff: usize) -> Result<()> {
    if cutoff == 0 {
        return Err(Error::invalid("charge_cutoff", "must be at least 1"));
    }
    Ok(())
}

/// Two-junction Hamiltonian on the (2N+1)^2 product charge basis, junction 1
/// being the slow index.
pub fn tcq_hamiltonian(spec: &TcqSpec, convention: ChargingConvention) -> Result<OperatorMatrix> {
    spec.validate()?;
    let g = spec.coefficients()?;
    let cutoff = spec.charge_cutoff;
    let size = 2 * cutoff + 1;
    let dim = size * size;
    let n1: Vec<f64> = number_operator(cutoff, spec.ng1).diagonal();
    let n2: Vec<f64> = number_operator(cutoff, spec.ng2).diagonal();
    let k_self = convention.self_prefactor();
    let k_cross = convention.cross_prefactor();

    let mut h = OperatorMatrix::zeros(dim).with_tag("charge");
    for a in 0..size {
        for b in 0..size {
            let p = a * size + b;
            h[(p, p)] = k_self * (g.g11 * n1[a] * n1[a] + g.g22 * n2[b] * n2[b])
                - k_cross * g.g12 * n1[a] * n2[b];
            // -EJ cos(phi) shifts one Cooper pair across the junction
            if a + 1 < size {
                let q = (a + 1) * size + b;
                h[(p, q)] = -0.5 * spec.ej1;
                h[(q, p)] = -0.5 * spec.ej1;
            }
            if b + 1 < size {
                let q = a * size + b + 1;
                h[(p, q)] = -0.5 * spec.ej2;
                h[(q, p)] = -0.5 * spec.ej2;
            }
        }
    }
    h.check_symmetric()?;
    Ok(h)
}

/// Single-junction Hamiltonian `4 E_C (n - ng)^2 - E_J cos(phi)` (standard convention).
pub fn transmon_hamiltonian(
    spec: &TransmonSpec,
    convention: ChargingConvention,
) -> Result<OperatorMatrix> {
    spec.validate()?;
    check_cutoff(spec.charge_cutoff)?;
    let k = convention.self_prefactor() / (2.0 * spec.c);
    let n = number_operator(spec.charge_cutoff, spec.ng).diagonal();
    let mut h = cos_phi_operator(spec.charge_cutoff).scaled(-spec.ej);
    for (i, ni) in n.iter().enumerate() {
        h[(i, i)] = k * ni * ni;
    }
    h.check_symmetric()?;
    Ok(h)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubsystemKind {
    Tcq,
    Transmon,
    Bus,
    /// One-level placeholder with no coupling; used to study a single qubit
    /// against the bus.
    Vacuum,
}

/// A subsystem reduced to its lowest levels.
#[derive(Debug, Clone)]
pub struct SubsystemBundle {
    /// Diagonal, ascending, ground at 0.
    pub h: OperatorMatrix,
    /// Junction-1 charge for a TCQ, the junction charge for a transmon, the
    /// oscillator charge for the bus.
    pub n1: OperatorMatrix,
    /// Junction-2 charge (TCQ only).
    pub n2: Option<OperatorMatrix>,
    pub level_energies: Vec<f64>,
    pub kind: SubsystemKind,
}

impl SubsystemBundle {
    pub fn dim(&self) -> usize {
        self.h.dim()
    }

    pub fn vacuum() -> Self {
        SubsystemBundle {
            h: OperatorMatrix::zeros(1),
            n1: OperatorMatrix::zeros(1),
            n2: None,
            level_energies: vec![0.0],
            kind: SubsystemKind::Vacuum,
        }
    }

    /// Operator the bus charge multiplies: `n1 - n2` for a TCQ, the charge otherwise.
    pub fn coupling_operator(&self) -> OperatorMatrix {
        match (&self.kind, &self.n2) {
            (SubsystemKind::Tcq, Some(n2)) => {
                let mut op = self.n1.clone();
                op.add_scaled(n2, -1.0)
                    .expect("bundle operators share a dimension");
                op
            }
            _ => self.n1.clone(),
        }
    }

    /// `n1 + n2` for a TCQ; used to tell the two modes apart.
    pub fn symmetric_charge(&self) -> Option<OperatorMatrix> {
        let n2 = self.n2.as_ref()?;
        let mut op = self.n1.clone();
        op.add_scaled(n2, 1.0).ok()?;
        Some(op)
    }
}

/// Diagonalizes `h`, keeps the `keep` lowest levels and projects each charge
/// operator onto them.
pub fn truncate_subsystem(
    h: &OperatorMatrix,
    charge_ops: &[&OperatorMatrix],
    keep: usize,
    kind: SubsystemKind,
) -> Result<SubsystemBundle> {
    if keep == 0 || keep > h.dim() {
        return Err(Error::invalid(
            "keep_levels",
            format!("must lie in 1..={}, got {keep}", h.dim()),
        ));
    }
    let eig = eigh(h)?;
    let basis = &eig.vectors[..keep];
    let ground = eig.values[0];
    let level_energies: Vec<f64> = eig.values[..keep].iter().map(|e| e - ground).collect();
    let mut projected = charge_ops
        .iter()
        .map(|op| congruence_transform(op, basis).map(|m| m.with_tag("eigen")))
        .collect::<Result<Vec<_>>>()?
        .into_iter();
    let n1 = projected
        .next()
        .unwrap_or_else(|| OperatorMatrix::zeros(keep));
    let n2 = projected.next();
    Ok(SubsystemBundle {
        h: OperatorMatrix::from_diagonal(&level_energies).with_tag("eigen"),
        n1,
        n2,
        level_energies,
        kind,
    })
}

/// Junction charge operators of a TCQ on its product charge basis.
pub fn tcq_charge_operators(spec: &TcqSpec) -> (OperatorMatrix, OperatorMatrix) {
    let size = 2 * spec.charge_cutoff + 1;
    let id = OperatorMatrix::identity(size);
    let n1 = crate::linalg::kron(&number_operator(spec.charge_cutoff, 0.0), &id).expect("small");
    let n2 = crate::linalg::kron(&id, &number_operator(spec.charge_cutoff, 0.0)).expect("small");
    (n1.with_tag("charge"), n2.with_tag("charge"))
}

pub fn tcq_bundle(spec: &TcqSpec, convention: ChargingConvention) -> Result<SubsystemBundle> {
    let h = tcq_hamiltonian(spec, convention)?;
    let (n1, n2) = tcq_charge_operators(spec);
    truncate_subsystem(&h, &[&n1, &n2], spec.keep_levels, SubsystemKind::Tcq)
}

pub fn transmon_bundle(
    spec: &TransmonSpec,
    convention: ChargingConvention,
) -> Result<SubsystemBundle> {
    let h = transmon_hamiltonian(spec, convention)?;
    let n = number_operator(spec.charge_cutoff, 0.0);
    truncate_subsystem(&h, &[&n], spec.keep_levels, SubsystemKind::Transmon)
}

pub fn qubit_bundle(spec: &QubitSpec, convention: ChargingConvention) -> Result<SubsystemBundle> {
    match spec {
        QubitSpec::Tcq(t) => tcq_bundle(t, convention),
        QubitSpec::Transmon(t) => transmon_bundle(t, convention),
    }
}

/// Harmonic bus in a real gauge: `h = diag(0, f, 2f, ...)` and charge
/// `zpf * sqrt(k+1)` on both first off-diagonals.
pub fn bus_bundle(spec: &BusSpec) -> Result<SubsystemBundle> {
    spec.validate()?;
    let dim = spec.fock_dim;
    let level_energies: Vec<f64> = (0..dim).map(|k| k as f64 * spec.frequency).collect();
    let n1 = OperatorMatrix::from_fn(dim, |i, j| {
        if i.abs_diff(j) == 1 {
            spec.charge_zpf * (i.max(j) as f64).sqrt()
        } else {
            0.0
        }
    })
    .with_tag("fock");
    Ok(SubsystemBundle {
        h: OperatorMatrix::from_diagonal(&level_energies).with_tag("fock"),
        n1,
        n2: None,
        level_energies,
        kind: SubsystemKind::Bus,
    })
}

/// Product-basis label: (left level, right level, bus photon number).
pub type ProductLabel = (usize, usize, usize);

/// Coupled Hamiltonian together with the labels of its product basis.
#[derive(Debug, Clone)]
pub struct Composite {
    pub h: OperatorMatrix,
    pub labels: Vec<ProductLabel>,
    pub dims: (usize, usize, usize),
}

impl Composite {
    pub fn index_of(&self, (i, j, n): ProductLabel) -> Option<usize> {
        let (_, dr, db) = self.dims;
        if i >= self.dims.0 || j >= dr || n >= db {
            return None;
        }
        Some((i * dr + j) * db + n)
    }
}

/// Assembles `H'_L + H'_R + H_bus + K gint_L c_L n_bus + K gint_R c_R n_bus`.
pub fn compose_bundles(
    left: &SubsystemBundle,
    right: &SubsystemBundle,
    bus: &SubsystemBundle,
    gint_left: f64,
    gint_right: f64,
    convention: ChargingConvention,
) -> Result<Composite> {
    let (dl, dr, db) = (left.dim(), right.dim(), bus.dim());
    let dim = dl * dr * db;
    if dim > DEFAULT_MAX_DIM {
        return Err(Error::DimensionOverflow {
            dim,
            max: DEFAULT_MAX_DIM,
        });
    }
    let k = convention.coupling_prefactor();
    let cl = left.coupling_operator().scaled(k * gint_left);
    let cr = right.coupling_operator().scaled(k * gint_right);
    let nb = &bus.n1;
    let index = |i: usize, j: usize, n: usize| (i * dr + j) * db + n;

    let mut h = OperatorMatrix::zeros(dim).with_tag("product");
    let mut labels = Vec::with_capacity(dim);
    for i in 0..dl {
        for j in 0..dr {
            for n in 0..db {
                let p = index(i, j, n);
                h[(p, p)] =
                    left.level_energies[i] + right.level_energies[j] + bus.level_energies[n];
                labels.push((i, j, n));
            }
        }
    }
    for n in 0..db {
        for m in 0..db {
            let bnm = nb[(n, m)];
            if bnm == 0.0 {
                continue;
            }
            for i in 0..dl {
                for i2 in 0..dl {
                    let c = cl[(i, i2)] * bnm;
                    if c == 0.0 {
                        continue;
                    }
                    for j in 0..dr {
                        h[(index(i, j, n), index(i2, j, m))] += c;
                    }
                }
            }
            for j in 0..dr {
                for j2 in 0..dr {
                    let c = cr[(j, j2)] * bnm;
                    if c == 0.0 {
                        continue;
                    }
                    for i in 0..dl {
                        h[(index(i, j, n), index(i, j2, m))] += c;
                    }
                }
            }
        }
    }
    h.symmetrize();
    Ok(Composite {
        h,
        labels,
        dims: (dl, dr, db),
    })
}

pub fn compose_total(device: &DeviceSpec, convention: ChargingConvention) -> Result<Composite> {
    device.validate()?;
    let left = qubit_bundle(&device.left, convention)?;
    let right = qubit_bundle(&device.right, convention)?;
    let bus = bus_bundle(&device.bus)?;
    compose_bundles(
        &left,
        &right,
        &bus,
        device.gint_left,
        device.gint_right,
        convention,
    )
}
