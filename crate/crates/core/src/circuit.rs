//! Device parameter records and inverse-capacitance coefficients.
//!
//! Capacitances are in farads, energies and frequencies in hertz (E/h).
//! Charges are in Cooper pairs.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::linalg::{cholesky, inverse_spd, OperatorMatrix};

/// Elementary charge (C), exact SI value.
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
/// Planck constant (J s), exact SI value.
pub const PLANCK: f64 = 6.626_070_15e-34;
/// Reduced Planck constant (J s).
pub const HBAR: f64 = PLANCK / (2.0 * std::f64::consts::PI);

pub const DEFAULT_CHARGE_CUTOFF: usize = 8;
pub const DEFAULT_KEEP_LEVELS: usize = 8;
pub const DEFAULT_FOCK_DIM: usize = 5;

/// Name reserved for the ground terminal in a [`CapacitanceNetwork`].
pub const GROUND: &str = "gnd";

fn positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(
            name,
            format!("must be positive and finite, got {value:e}"),
        ))
    }
}

fn finite(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(name, format!("must be finite, got {value}")))
    }
}

/// Two series junctions: junction 1 between the top and middle pads (shunt
/// `c1`), junction 2 between the middle and bottom pads (shunt `c2`), and
/// `cs` between the top and bottom pads.
#[derive(Debug, Clone, PartialEq)]
pub struct TcqSpec {
    pub c1: f64,
    pub c2: f64,
    pub cs: f64,
    pub ej1: f64,
    pub ej2: f64,
    pub ng1: f64,
    pub ng2: f64,
    pub charge_cutoff: usize,
    pub keep_levels: usize,
}

impl TcqSpec {
    pub fn new(c1: f64, c2: f64, cs: f64, ej1: f64, ej2: f64) -> Self {
        TcqSpec {
            c1,
            c2,
            cs,
            ej1,
            ej2,
            ng1: 0.0,
            ng2: 0.0,
            charge_cutoff: DEFAULT_CHARGE_CUTOFF,
            keep_levels: DEFAULT_KEEP_LEVELS,
        }
    }

    pub fn validate(&self) -> Result<()> {
        positive("c1", self.c1)?;
        positive("c2", self.c2)?;
        positive("cs", self.cs)?;
        positive("ej1", self.ej1)?;
        positive("ej2", self.ej2)?;
        finite("ng1", self.ng1)?;
        finite("ng2", self.ng2)?;
        if self.charge_cutoff < 4 {
            return Err(Error::invalid(
                "charge_cutoff",
                format!("must be at least 4, got {}", self.charge_cutoff),
            ));
        }
        let basis = (2 * self.charge_cutoff + 1).pow(2);
        if self.keep_levels == 0 || self.keep_levels > basis {
            return Err(Error::invalid(
                "keep_levels",
                format!("must lie in 1..={basis}, got {}", self.keep_levels),
            ));
        }
        Ok(())
    }

    pub fn coefficients(&self) -> Result<InverseCapacitance> {
        inverse_capacitance_coeffs_closed_form(self.c1, self.c2, self.cs)
    }

    pub fn ej_total(&self) -> f64 {
        self.ej1 + self.ej2
    }
}

/// Single junction shunted by `c`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransmonSpec {
    pub c: f64,
    pub ej: f64,
    pub ng: f64,
    pub charge_cutoff: usize,
    pub keep_levels: usize,
}

impl TransmonSpec {
    pub fn new(c: f64, ej: f64) -> Self {
        TransmonSpec {
            c,
            ej,
            ng: 0.0,
            charge_cutoff: DEFAULT_CHARGE_CUTOFF,
            keep_levels: DEFAULT_KEEP_LEVELS,
        }
    }

    pub fn validate(&self) -> Result<()> {
        positive("c", self.c)?;
        positive("ej", self.ej)?;
        finite("ng", self.ng)?;
        if self.charge_cutoff == 0 {
            return Err(Error::invalid("charge_cutoff", "must be positive"));
        }
        let basis = 2 * self.charge_cutoff + 1;
        if self.keep_levels == 0 || self.keep_levels > basis {
            return Err(Error::invalid(
                "keep_levels",
                format!("must lie in 1..={basis}, got {}", self.keep_levels),
            ));
        }
        Ok(())
    }

    /// Charging energy e^2 / (2 C h) in Hz.
    pub fn charging_energy(&self) -> f64 {
        ELEMENTARY_CHARGE * ELEMENTARY_CHARGE / (2.0 * self.c * PLANCK)
    }
}

/// Bus resonator as an ideal harmonic oscillator.
///
/// Only the product of `charge_zpf` with the coupling coefficient is
/// physical; the two are kept separate so either can be swept.
#[derive(Debug, Clone, PartialEq)]
pub struct BusSpec {
    pub frequency: f64,
    pub fock_dim: usize,
    /// Zero-point charge fluctuation in Cooper pairs.
    pub charge_zpf: f64,
}

impl BusSpec {
    pub fn new(frequency: f64) -> Self {
        BusSpec {
            frequency,
            fock_dim: DEFAULT_FOCK_DIM,
            charge_zpf: 1.0,
        }
    }

    /// Zero-point charge of an LC mode with total capacitance `capacitance`:
    /// sqrt(hbar w C / 2) / 2e.
    pub fn from_capacitance(frequency: f64, capacitance: f64) -> Self {
        let omega = 2.0 * std::f64::consts::PI * frequency;
        let q_zpf = (HBAR * omega * capacitance / 2.0).sqrt();
        BusSpec {
            frequency,
            fock_dim: DEFAULT_FOCK_DIM,
            charge_zpf: q_zpf / (2.0 * ELEMENTARY_CHARGE),
        }
    }

    pub fn validate(&self) -> Result<()> {
        positive("bus.frequency", self.frequency)?;
        positive("bus.charge_zpf", self.charge_zpf)?;
        if self.fock_dim < 2 {
            return Err(Error::invalid(
                "bus.fock_dim",
                format!("must be at least 2, got {}", self.fock_dim),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum QubitSpec {
    Tcq(TcqSpec),
    Transmon(TransmonSpec),
}

impl QubitSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            QubitSpec::Tcq(t) => t.validate(),
            QubitSpec::Transmon(t) => t.validate(),
        }
    }

    pub fn charge_cutoff(&self) -> usize {
        match self {
            QubitSpec::Tcq(t) => t.charge_cutoff,
            QubitSpec::Transmon(t) => t.charge_cutoff,
        }
    }

    pub fn keep_levels(&self) -> usize {
        match self {
            QubitSpec::Tcq(t) => t.keep_levels,
            QubitSpec::Transmon(t) => t.keep_levels,
        }
    }

    pub fn set_truncation(&mut self, charge_cutoff: usize, keep_levels: usize) {
        match self {
            QubitSpec::Tcq(t) => {
                t.charge_cutoff = charge_cutoff;
                t.keep_levels = keep_levels;
            }
            QubitSpec::Transmon(t) => {
                t.charge_cutoff = charge_cutoff;
                t.keep_levels = keep_levels;
            }
        }
    }
}

impl From<TcqSpec> for QubitSpec {
    fn from(t: TcqSpec) -> Self {
        QubitSpec::Tcq(t)
    }
}

impl From<TransmonSpec> for QubitSpec {
    fn from(t: TransmonSpec) -> Self {
        QubitSpec::Transmon(t)
    }
}

/// Two qubits sharing one bus. `gint_*` are inverse-capacitance coupling
/// elements (1/F) multiplying `n_bus (n1 - n2)` for a TCQ or `n_bus n` for a
/// transmon.
#[derive(Debug, Clone, PartialEq)]
pub struct DeviceSpec {
    pub left: QubitSpec,
    pub right: QubitSpec,
    pub bus: BusSpec,
    pub gint_left: f64,
    pub gint_right: f64,
}

impl DeviceSpec {
    pub fn validate(&self) -> Result<()> {
        self.left.validate()?;
        self.right.validate()?;
        self.bus.validate()?;
        finite("gint_left", self.gint_left)?;
        finite("gint_right", self.gint_right)?;
        Ok(())
    }

    /// The same device with left and right exchanged.
    pub fn mirrored(&self) -> DeviceSpec {
        DeviceSpec {
            left: self.right.clone(),
            right: self.left.clone(),
            bus: self.bus.clone(),
            gint_left: self.gint_right,
            gint_right: self.gint_left,
        }
    }
}

/// The three charging coefficients of one TCQ (1/F). The charging energy is
/// `g11 n1^2 + g22 n2^2 - g12 n1 n2` in units of (2e)^2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InverseCapacitance {
    pub g11: f64,
    pub g22: f64,
    pub g12: f64,
}

pub fn inverse_capacitance_coeffs_closed_form(
    c1: f64,
    c2: f64,
    cs: f64,
) -> Result<InverseCapacitance> {
    positive("c1", c1)?;
    positive("c2", c2)?;
    positive("cs", cs)?;
    let det = c1 * c2 + cs * (c1 + c2);
    Ok(InverseCapacitance {
        g11: (cs + c2) / (2.0 * det),
        g22: (cs + c1) / (2.0 * det),
        g12: cs / det,
    })
}

/// Josephson energy E_J / h = I_c / (4 pi e) in Hz.
pub fn critical_current_to_ej(ic: f64) -> Result<f64> {
    positive("ic", ic)?;
    Ok(ic / (4.0 * std::f64::consts::PI * ELEMENTARY_CHARGE))
}

/// Lumped capacitor network. Edges may terminate on [`GROUND`].
#[derive(Debug, Clone, PartialEq)]
pub struct CapacitanceNetwork {
    pub node_names: Vec<String>,
    pub edges: Vec<(String, String, f64)>,
}

impl CapacitanceNetwork {
    pub fn new<S: Into<String>>(nodes: impl IntoIterator<Item = S>) -> Self {
        CapacitanceNetwork {
            node_names: nodes.into_iter().map(Into::into).collect(),
            edges: Vec::new(),
        }
    }

    pub fn capacitor(mut self, a: &str, b: &str, c: f64) -> Self {
        self.edges.push((a.to_string(), b.to_string(), c));
        self
    }

    fn index_of(&self, name: &str) -> Result<Option<usize>> {
        if name == GROUND {
            return Ok(None);
        }
        self.node_names
            .iter()
            .position(|n| n == name)
            .map(Some)
            .ok_or_else(|| Error::UnknownNode(name.to_string()))
    }

    fn validate(&self) -> Result<Vec<(Option<usize>, Option<usize>, f64)>> {
        let mut seen = HashMap::new();
        for (i, n) in self.node_names.iter().enumerate() {
            if n == GROUND {
                return Err(Error::InvalidNetwork(format!(
                    "`{GROUND}` is reserved for ground"
                )));
            }
            if seen.insert(n.as_str(), i).is_some() {
                return Err(Error::InvalidNetwork(format!("duplicate node `{n}`")));
            }
        }
        let mut resolved = Vec::with_capacity(self.edges.len());
        for (a, b, c) in &self.edges {
            if !(*c > 0.0 && c.is_finite()) {
                return Err(Error::InvalidNetwork(format!(
                    "capacitor {a}-{b} has value {c:e}"
                )));
            }
            let (ia, ib) = (self.index_of(a)?, self.index_of(b)?);
            if ia == ib {
                return Err(Error::InvalidNetwork(format!("self-edge on `{a}`")));
            }
            resolved.push((ia, ib, *c));
        }
        Ok(resolved)
    }
}

/// Nodal (Maxwell) capacitance matrix, ground eliminated.
pub fn maxwell_matrix(network: &CapacitanceNetwork) -> Result<OperatorMatrix> {
    let edges = network.validate()?;
    let n = network.node_names.len();
    if n == 0 {
        return Err(Error::InvalidNetwork("no nodes".into()));
    }

    // every node needs a capacitive path to ground
    let mut adjacency = vec![Vec::new(); n];
    let mut grounded = vec![false; n];
    for &(a, b, _) in &edges {
        match (a, b) {
            (Some(a), Some(b)) => {
                adjacency[a].push(b);
                adjacency[b].push(a);
            }
            (Some(a), None) | (None, Some(a)) => grounded[a] = true,
            (None, None) => {}
        }
    }
    let mut reached = grounded.clone();
    let mut queue: VecDeque<usize> = (0..n).filter(|&i| grounded[i]).collect();
    while let Some(i) = queue.pop_front() {
        for &j in &adjacency[i] {
            if !reached[j] {
                reached[j] = true;
                queue.push_back(j);
            }
        }
    }
    if let Some(pivot) = reached.iter().position(|r| !r) {
        return Err(Error::SingularMatrix { pivot, value: 0.0 });
    }

    let mut m = OperatorMatrix::zeros(n).with_tag("node");
    for &(a, b, c) in &edges {
        if let Some(a) = a {
            m[(a, a)] += c;
        }
        if let Some(b) = b {
            m[(b, b)] += c;
        }
        if let (Some(a), Some(b)) = (a, b) {
            m[(a, b)] -= c;
            m[(b, a)] -= c;
        }
    }
    cholesky(&m)?;
    Ok(m)
}

/// Which network nodes form each TCQ and which node is each bus. Every TCQ's
/// bottom pad is the ground terminal.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeMap {
    /// (top, middle) node names per TCQ.
    pub tcqs: Vec<(String, String)>,
    pub buses: Vec<String>,
}

/// Coupling of one TCQ to one bus (1/F).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BusCoupling {
    /// Coefficient of `n_bus (n1 - n2)`: the antisymmetric part of the raw elements.
    pub gint: f64,
    /// Raw inverse-capacitance element between junction 1 charge and bus charge.
    pub g1_bus: f64,
    pub g2_bus: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TcqCoefficients {
    pub charging: InverseCapacitance,
    /// One entry per bus in `NodeMap::buses` order.
    pub bus: Vec<BusCoupling>,
}

/// Inverts the Maxwell matrix in junction coordinates.
///
/// Node fluxes are `phi_top = phi1 + phi2`, `phi_mid = phi2` per TCQ, and the
/// bus node flux is kept as is. The capacitance matrix in those coordinates is
/// `A^T C A`; its inverse `G` gives `H = q^T G q / 2`. Nodes not named in the
/// map are eliminated along with their charges set to zero. The bus charge
/// sign is chosen so that the first TCQ couples with `gint >= 0`.
pub fn network_to_tcq_coeffs(
    network: &CapacitanceNetwork,
    map: &NodeMap,
) -> Result<Vec<TcqCoefficients>> {
    let c = maxwell_matrix(network)?;
    let n = c.dim();
    let idx = |name: &str| -> Result<usize> {
        network
            .index_of(name)?
            .ok_or_else(|| Error::InvalidNetwork("ground cannot be a mapped node".into()))
    };

    // coordinate list: per TCQ (phi1, phi2), then buses, then any leftover nodes
    let mut a = vec![vec![0.0; n]; n]; // a[node][coord]
    let mut used = vec![false; n];
    let mut coord = 0;
    for (top, mid) in &map.tcqs {
        let (t, m) = (idx(top)?, idx(mid)?);
        if used[t] || used[m] || t == m {
            return Err(Error::InvalidNetwork(format!(
                "node reused in TCQ ({top}, {mid})"
            )));
        }
        used[t] = true;
        used[m] = true;
        a[t][coord] = 1.0;
        a[t][coord + 1] = 1.0;
        a[m][coord + 1] = 1.0;
        coord += 2;
    }
    let bus_start = coord;
    for bus in &map.buses {
        let b = idx(bus)?;
        if used[b] {
            return Err(Error::InvalidNetwork(format!("bus node `{bus}` reused")));
        }
        used[b] = true;
        a[b][coord] = 1.0;
        coord += 1;
    }
    for (node, u) in used.iter().enumerate() {
        if !u {
            a[node][coord] = 1.0;
            coord += 1;
        }
    }

    // A^T C A
    let transformed = OperatorMatrix::from_fn(n, |p, q| {
        let mut s = 0.0;
        for i in 0..n {
            if a[i][p] == 0.0 {
                continue;
            }
            for j in 0..n {
                s += a[i][p] * c[(i, j)] * a[j][q];
            }
        }
        s
    });
    let g = inverse_spd(&transformed)?;

    let mut bus_sign = vec![1.0; map.buses.len()];
    if !map.tcqs.is_empty() {
        for (k, sign) in bus_sign.iter_mut().enumerate() {
            let b = bus_start + k;
            if g[(0, b)] - g[(1, b)] < 0.0 {
                *sign = -1.0;
            }
        }
    }

    Ok((0..map.tcqs.len())
        .map(|t| {
            let (j1, j2) = (2 * t, 2 * t + 1);
            let bus = (0..map.buses.len())
                .map(|k| {
                    let b = bus_start + k;
                    let g1 = bus_sign[k] * g[(j1, b)];
                    let g2 = bus_sign[k] * g[(j2, b)];
                    BusCoupling {
                        gint: 0.5 * (g1 - g2),
                        g1_bus: g1,
                        g2_bus: g2,
                    }
                })
                .collect();
            TcqCoefficients {
                charging: InverseCapacitance {
                    g11: 0.5 * g[(j1, j1)],
                    g22: 0.5 * g[(j2, j2)],
                    g12: -g[(j1, j2)],
                },
                bus,
            }
        })
        .collect())
}

/// Single TCQ with its bottom pad grounded.
pub fn single_tcq_network(c1: f64, c2: f64, cs: f64) -> (CapacitanceNetwork, NodeMap) {
    let net = CapacitanceNetwork::new(["top", "mid"])
        .capacitor("top", "mid", c1)
        .capacitor("mid", GROUND, c2)
        .capacitor("top", GROUND, cs);
    let map = NodeMap {
        tcqs: vec![("top".into(), "mid".into())],
        buses: vec![],
    };
    (net, map)
}

/// Two TCQs whose middle pads couple to one bus node through `cc`.
pub fn coupled_pair_network(
    tcq: (f64, f64, f64),
    cc: f64,
    c_bus: f64,
) -> (CapacitanceNetwork, NodeMap) {
    let (c1, c2, cs) = tcq;
    let net = CapacitanceNetwork::new(["top1", "mid1", "top2", "mid2", "bus"])
        .capacitor("top1", "mid1", c1)
        .capacitor("mid1", GROUND, c2)
        .capacitor("top1", GROUND, cs)
        .capacitor("top2", "mid2", c1)
        .capacitor("mid2", GROUND, c2)
        .capacitor("top2", GROUND, cs)
        .capacitor("bus", GROUND, c_bus)
        .capacitor("mid1", "bus", cc)
        .capacitor("mid2", "bus", cc);
    let map = NodeMap {
        tcqs: vec![
            ("top1".into(), "mid1".into()),
            ("top2".into(), "mid2".into()),
        ],
        buses: vec!["bus".into()],
    };
    (net, map)
}

#[cfg(test)]
mod tests {
    use super::*;

    const FF: f64 = 1e-15;

    #[test]
    fn closed_form_at_reference_capacitances() {
        let g = inverse_capacitance_coeffs_closed_form(45.0 * FF, 45.0 * FF, 20.0 * FF).unwrap();
        // with capacitances in fF: det = 45*45 + 20*90 = 3825
        let per_ff = 1.0 / FF;
        assert!((g.g11 / per_ff - 65.0 / (2.0 * 3825.0)).abs() < 1e-15);
        assert!((g.g22 / per_ff - 65.0 / (2.0 * 3825.0)).abs() < 1e-15);
        assert!((g.g12 / per_ff - 20.0 / 3825.0).abs() < 1e-15);
        assert!((g.g11 / per_ff - 8.4967e-3).abs() < 1e-7);
        assert!((g.g12 / per_ff - 5.2288e-3).abs() < 1e-7);
    }

    #[test]
    fn closed_form_limits() {
        let g = inverse_capacitance_coeffs_closed_form(30.0 * FF, 30.0 * FF, 7.0 * FF).unwrap();
        assert_eq!(g.g11, g.g22);
        let tiny = inverse_capacitance_coeffs_closed_form(45.0 * FF, 45.0 * FF, 1e-9 * FF).unwrap();
        assert!(tiny.g12 / tiny.g11 < 1e-9);
        assert!(matches!(
            inverse_capacitance_coeffs_closed_form(0.0, 1.0, 1.0),
            Err(Error::InvalidParameter { name: "c1", .. })
        ));
        assert!(inverse_capacitance_coeffs_closed_form(1.0, 1.0, -1.0).is_err());
    }

    #[test]
    fn maxwell_small_cases() {
        let (net, _) = single_tcq_network(45.0 * FF, 40.0 * FF, 20.0 * FF);
        let m = maxwell_matrix(&net).unwrap();
        let expected = [65.0 * FF, -45.0 * FF, -45.0 * FF, 85.0 * FF];
        for (a, b) in m.entries().iter().zip(expected) {
            assert!((a - b).abs() < 1e-28);
        }

        let single = CapacitanceNetwork::new(["a"]).capacitor("a", GROUND, 3.0 * FF);
        assert_eq!(maxwell_matrix(&single).unwrap().entries(), &[3.0 * FF]);
    }

    #[test]
    fn maxwell_errors() {
        let floating = CapacitanceNetwork::new(["a", "b"]).capacitor("a", "b", FF);
        assert!(matches!(
            maxwell_matrix(&floating),
            Err(Error::SingularMatrix { .. })
        ));
        let unknown = CapacitanceNetwork::new(["a"]).capacitor("a", "z", FF);
        assert!(matches!(maxwell_matrix(&unknown), Err(Error::UnknownNode(n)) if n == "z"));
        let selfie = CapacitanceNetwork::new(["a"])
            .capacitor("a", "a", FF)
            .capacitor("a", GROUND, FF);
        assert!(matches!(
            maxwell_matrix(&selfie),
            Err(Error::InvalidNetwork(_))
        ));
        let negative = CapacitanceNetwork::new(["a"]).capacitor("a", GROUND, -FF);
        assert!(matches!(
            maxwell_matrix(&negative),
            Err(Error::InvalidNetwork(_))
        ));
    }

    #[test]
    fn seven_node_network_is_positive_definite() {
        // bottom pads as explicit nodes with a large capacitance to ground
        let net = CapacitanceNetwork::new(["top1", "mid1", "bot1", "top2", "mid2", "bot2", "bus"])
            .capacitor("top1", "mid1", 45.0 * FF)
            .capacitor("mid1", "bot1", 45.0 * FF)
            .capacitor("top1", "bot1", 20.0 * FF)
            .capacitor("bot1", GROUND, 500.0 * FF)
            .capacitor("top2", "mid2", 45.0 * FF)
            .capacitor("mid2", "bot2", 45.0 * FF)
            .capacitor("top2", "bot2", 20.0 * FF)
            .capacitor("bot2", GROUND, 500.0 * FF)
            .capacitor("bus", GROUND, 400.0 * FF)
            .capacitor("mid1", "bus", 2.0 * FF)
            .capacitor("mid2", "bus", 2.0 * FF);
        let m = maxwell_matrix(&net).unwrap();
        assert_eq!(m.dim(), 7);
        assert!(cholesky(&m).is_ok());
    }

    #[test]
    fn network_path_reproduces_closed_form() {
        let (net, map) = single_tcq_network(45.0 * FF, 45.0 * FF, 20.0 * FF);
        let coeffs = network_to_tcq_coeffs(&net, &map).unwrap();
        let closed =
            inverse_capacitance_coeffs_closed_form(45.0 * FF, 45.0 * FF, 20.0 * FF).unwrap();
        let g = coeffs[0].charging;
        assert!(((g.g11 - closed.g11) / closed.g11).abs() < 1e-12);
        assert!(((g.g22 - closed.g22) / closed.g22).abs() < 1e-12);
        assert!(((g.g12 - closed.g12) / closed.g12).abs() < 1e-12);
    }

    #[test]
    fn bus_coupling_limit_and_fixture() {
        let closed =
            inverse_capacitance_coeffs_closed_form(45.0 * FF, 45.0 * FF, 20.0 * FF).unwrap();
        let (net, map) =
            coupled_pair_network((45.0 * FF, 45.0 * FF, 20.0 * FF), 1.0 * FF, 400.0 * FF);
        let coeffs = network_to_tcq_coeffs(&net, &map).unwrap();
        let c = &coeffs[0];
        assert!(c.bus[0].gint > 0.0);
        // loading by 1 fF perturbs charging at O(Cc / C1)
        let rel = (c.charging.g11 - closed.g11).abs() / closed.g11;
        assert!(rel > 1e-4 && rel < 1.0 / 45.0, "rel {rel}");
        assert!(((c.charging.g11 - coeffs[1].charging.g11) / c.charging.g11).abs() < 1e-12);
        // regression fixture for the 1 fF / 400 fF pair network
        let gint_per_ff = c.bus[0].gint * FF;
        assert!(
            ((gint_per_ff - GINT_FIXTURE_PER_FF) / GINT_FIXTURE_PER_FF).abs() < 1e-9,
            "gint {gint_per_ff:e} /fF"
        );

        let (weak, map) =
            coupled_pair_network((45.0 * FF, 45.0 * FF, 20.0 * FF), 1e-9 * FF, 400.0 * FF);
        let w = network_to_tcq_coeffs(&weak, &map).unwrap();
        assert!(w[0].bus[0].gint.abs() < 2e-9 * c.bus[0].gint);
    }

    const GINT_FIXTURE_PER_FF: f64 = 2.717_999_552_329_485e-5;

    #[test]
    fn critical_current_relation() {
        let ej = critical_current_to_ej(30e-9).unwrap();
        assert!((ej / 1e9 - 14.90).abs() < 0.005, "{ej}");
        let ej2 = critical_current_to_ej(60e-9).unwrap();
        assert!((ej2 - 2.0 * ej).abs() < 1e-6);
        assert!(critical_current_to_ej(0.0).is_err());
        assert!(critical_current_to_ej(-1e-9).is_err());
    }

    #[test]
    fn parameter_validation() {
        let mut t = TcqSpec::new(45.0 * FF, 45.0 * FF, 20.0 * FF, 10e9, 10e9);
        assert!(t.validate().is_ok());
        t.charge_cutoff = 3;
        assert!(t.validate().is_err());
        t.charge_cutoff = 4;
        t.keep_levels = 82;
        assert!(t.validate().is_err());
        t.keep_levels = 81;
        assert!(t.validate().is_ok());
        assert!(TransmonSpec::new(70.0 * FF, 0.0).validate().is_err());
        let mut bus = BusSpec::new(6e9);
        bus.fock_dim = 1;
        assert!(bus.validate().is_err());
    }

    #[test]
    fn transmon_charging_energy() {
        let ec = TransmonSpec::new(70.0 * FF, 10e9).charging_energy();
        assert!((ec / 1e9 - 0.277).abs() < 0.001, "{ec}");
    }
}
