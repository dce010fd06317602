//! Dressed-state labeling and the derived observables: static ZZ,
//! longitudinal couplings, mode frequencies and photon-number peaks.

use std::collections::HashMap;

use crate::circuit::{DeviceSpec, TcqSpec};
use crate::error::{Error, Result};
use crate::hamiltonian::{compose_total, tcq_bundle, ChargingConvention, Composite, ProductLabel};
use crate::linalg::{eigh, Eigen};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LabelOptions {
    /// Assignments with a smaller squared overlap are flagged ambiguous.
    pub overlap_floor: f64,
    /// Two candidates closer than this are a tie.
    pub tie_tolerance: f64,
}

impl Default for LabelOptions {
    fn default() -> Self {
        LabelOptions {
            overlap_floor: 0.5,
            tie_tolerance: 1e-6,
        }
    }
}

/// Coupled-system eigenvalues, each tagged with the product state it
/// overlaps most.
#[derive(Debug, Clone)]
pub struct LabeledSpectrum {
    /// Ascending energies (Hz).
    pub energies: Vec<f64>,
    /// `labels[k]` belongs to `energies[k]`.
    pub labels: Vec<ProductLabel>,
    /// Squared overlap of eigenstate k with its label.
    pub overlaps: Vec<f64>,
    pub ambiguous: Vec<bool>,
    /// Minimum overlap over all labeled states.
    pub assignment_quality: f64,
    by_label: HashMap<ProductLabel, usize>,
}

impl LabeledSpectrum {
    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    /// Eigen index carrying `label`, if any.
    pub fn position(&self, label: ProductLabel) -> Option<usize> {
        self.by_label.get(&label).copied()
    }

    /// Energy of the unambiguous state labeled `label`.
    pub fn energy(&self, label: ProductLabel) -> Result<f64> {
        let k = self.position(label).ok_or_else(|| Error::StateNotFound {
            label,
            detail: "label outside the product basis".into(),
        })?;
        if self.ambiguous[k] {
            return Err(Error::StateNotFound {
                label,
                detail: format!(
                    "assignment ambiguous (overlap {:.4}, eigen index {k})",
                    self.overlaps[k]
                ),
            });
        }
        Ok(self.energies[k])
    }

    /// Minimum overlap among the listed labels (0 if one is missing).
    pub fn quality_of(&self, labels: &[ProductLabel]) -> f64 {
        labels
            .iter()
            .map(|l| self.position(*l).map_or(0.0, |k| self.overlaps[k]))
            .fold(1.0, f64::min)
    }
}

/// Greedy maximum-overlap assignment of eigenstates to product labels.
///
/// Candidate pairs are visited in descending overlap (ties: lower energy,
/// then lower product index); each eigenstate and each label is used once.
pub fn label_states(
    eig: &Eigen,
    labels: &[ProductLabel],
    options: LabelOptions,
) -> LabeledSpectrum {
    let n = eig.len();
    assert_eq!(labels.len(), n, "one product label per basis vector");

    let mut pairs: Vec<(f64, u32, u32)> = Vec::with_capacity(n * n);
    let mut best_two = vec![(0.0_f64, 0.0_f64); n];
    for (k, v) in eig.vectors.iter().enumerate() {
        for (p, c) in v.iter().enumerate() {
            let o = c * c;
            pairs.push((o, k as u32, p as u32));
            let b = &mut best_two[k];
            if o > b.0 {
                *b = (o, b.0);
            } else if o > b.1 {
                b.1 = o;
            }
        }
    }
    pairs.sort_unstable_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));

    let mut assigned: Vec<Option<usize>> = vec![None; n];
    let mut overlaps = vec![0.0; n];
    let mut label_used = vec![false; n];
    let mut remaining = n;
    for (o, k, p) in pairs {
        let (k, p) = (k as usize, p as usize);
        if assigned[k].is_some() || label_used[p] {
            continue;
        }
        assigned[k] = Some(p);
        overlaps[k] = o;
        label_used[p] = true;
        remaining -= 1;
        if remaining == 0 {
            break;
        }
    }

    let mut by_label = HashMap::with_capacity(n);
    let mut out_labels = Vec::with_capacity(n);
    let mut ambiguous = Vec::with_capacity(n);
    for k in 0..n {
        let p = assigned[k].expect("complete assignment");
        out_labels.push(labels[p]);
        by_label.insert(labels[p], k);
        let (first, second) = best_two[k];
        ambiguous
            .push(overlaps[k] < options.overlap_floor || first - second < options.tie_tolerance);
    }
    let assignment_quality = overlaps.iter().copied().fold(1.0, f64::min);
    LabeledSpectrum {
        energies: eig.values.clone(),
        labels: out_labels,
        overlaps,
        ambiguous,
        assignment_quality,
        by_label,
    }
}

/// Diagonalizes a composite and labels its eigenstates.
pub fn labeled_spectrum(composite: &Composite, options: LabelOptions) -> Result<LabeledSpectrum> {
    let eig = eigh(&composite.h)?;
    Ok(label_states(&eig, &composite.labels, options))
}

pub fn device_spectrum(
    device: &DeviceSpec,
    convention: ChargingConvention,
) -> Result<LabeledSpectrum> {
    labeled_spectrum(&compose_total(device, convention)?, LabelOptions::default())
}

/// `(E11 + E00 - E10 - E01) / 2` with the bus in vacuum and level 1 of each qubit.
pub fn static_zz(spectrum: &LabeledSpectrum) -> Result<f64> {
    static_zz_levels(spectrum, 1, 1)
}

/// Static ZZ between arbitrary excited levels of the two qubits.
pub fn static_zz_levels(spectrum: &LabeledSpectrum, left: usize, right: usize) -> Result<f64> {
    let e00 = spectrum.energy((0, 0, 0))?;
    let e10 = spectrum.energy((left, 0, 0))?;
    let e01 = spectrum.energy((0, right, 0))?;
    let e11 = spectrum.energy((left, right, 0))?;
    Ok(0.5 * (e11 + e00 - e10 - e01))
}

/// The four states entering the ZZ expression.
pub fn computational_labels(left: usize, right: usize) -> [ProductLabel; 4] {
    [(0, 0, 0), (left, 0, 0), (0, right, 0), (left, right, 0)]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    fn label(self, level: usize, photons: usize) -> ProductLabel {
        match self {
            Side::Left => (level, 0, photons),
            Side::Right => (0, level, photons),
        }
    }
}

/// Half the per-photon shift of `level` on `side`.
pub fn chi(spectrum: &LabeledSpectrum, side: Side, level: usize) -> Result<f64> {
    let e = |lvl, n| spectrum.energy(side.label(lvl, n));
    let shifted = e(level, 1)? - e(0, 1)?;
    let bare = e(level, 0)? - e(0, 0)?;
    Ok(0.5 * (shifted - bare))
}

/// Half the per-photon shift of the joint excitation `(left, right)`.
pub fn joint_chi(spectrum: &LabeledSpectrum, left: usize, right: usize) -> Result<f64> {
    let shifted = spectrum.energy((left, right, 1))? - spectrum.energy((0, 0, 1))?;
    let bare = spectrum.energy((left, right, 0))? - spectrum.energy((0, 0, 0))?;
    Ok(0.5 * (shifted - bare))
}

/// `f01 + 2 chi n` for `n = 0..=n_max`.
pub fn photon_splitting_peaks(f01: f64, chi: f64, n_max: usize) -> Vec<f64> {
    (0..=n_max).map(|n| f01 + 2.0 * chi * n as f64).collect()
}

/// Mode structure of one bare TCQ.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeFrequencies {
    pub f_a: f64,
    pub f_b: f64,
    pub alpha_a: f64,
    pub alpha_b: f64,
    /// Truncated-level index of the first A excitation.
    pub a_level: usize,
    pub b_level: usize,
    /// Smallest ratio between dominant and subdominant dipole element used
    /// to classify a level; close to 1 means the modes are strongly mixed.
    pub dominance: f64,
}

const CLASSIFY_LEVELS: usize = 16;
const MIN_DOMINANCE: f64 = 2.0;

/// A mode carries `n1 + n2` from the ground state, B mode carries `n1 - n2`.
pub fn mode_frequencies(tcq: &TcqSpec, convention: ChargingConvention) -> Result<ModeFrequencies> {
    let mut spec = tcq.clone();
    spec.keep_levels = CLASSIFY_LEVELS.min((2 * spec.charge_cutoff + 1).pow(2));
    let bundle = tcq_bundle(&spec, convention)?;
    let anti = bundle.coupling_operator();
    let sym = bundle
        .symmetric_charge()
        .expect("tcq bundle has two charges");
    let e = &bundle.level_energies;
    let levels = e.len();

    let scale = (1..levels)
        .map(|k| anti[(0, k)].abs().max(sym[(0, k)].abs()))
        .fold(0.0, f64::max);
    let significant = 1e-3 * scale;
    let classify = |want_sym: bool| -> Option<(usize, f64)> {
        (1..levels).find_map(|k| {
            let (s, d) = (sym[(0, k)].abs(), anti[(0, k)].abs());
            let (main, other) = if want_sym { (s, d) } else { (d, s) };
            (main > significant && main > other).then(|| (k, main / other.max(f64::MIN_POSITIVE)))
        })
    };
    let (a_level, dom_a) =
        classify(true).ok_or_else(|| Error::AmbiguousMode("no level carries n1 + n2".into()))?;
    let (b_level, dom_b) =
        classify(false).ok_or_else(|| Error::AmbiguousMode("no level carries n1 - n2".into()))?;
    let dominance = dom_a.min(dom_b);
    if dominance < MIN_DOMINANCE {
        return Err(Error::AmbiguousMode(format!(
            "dipole dominance {dominance:.3} below {MIN_DOMINANCE} (levels {a_level}, {b_level})"
        )));
    }

    let second = |from: usize, op: &crate::linalg::OperatorMatrix| -> Option<usize> {
        (1..levels)
            .filter(|&k| k != from && k != a_level && k != b_level && e[k] > e[from])
            .max_by(|&x, &y| op[(from, x)].abs().total_cmp(&op[(from, y)].abs()))
    };
    let alpha = |level: usize, op| second(level, op).map_or(f64::NAN, |k| e[k] - 2.0 * e[level]);
    Ok(ModeFrequencies {
        f_a: e[a_level],
        f_b: e[b_level],
        alpha_a: alpha(a_level, &sym),
        alpha_b: alpha(b_level, &anti),
        a_level,
        b_level,
        dominance,
    })
}
