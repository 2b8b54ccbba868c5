//! Exact dense simulation of pulse sequences on pure states and deviation
//! density matrices.
//!
//! Diagonal primitives (CZ layers, Ising evolution) are applied as phase
//! kernels computed from bit parities; everything else lowers to single-spin
//! 2x2 gates applied pairwise over the amplitude (or matrix) index space.

use crate::error::{Error, Result};
use crate::linalg::{self, c, Mat2, C64};
use crate::model::{
    site_mask, ChainState, DeviationState, PauliAxis, PauliString, Primitive, PulseSequence,
    SignalLabel, SiteReadout, SpectrumReport, validate_sequence,
};

/// A state the simulator can evolve.
pub trait SpinState: Clone {
    fn n(&self) -> usize;
    fn apply_local(&mut self, site: usize, u: &Mat2);
    fn apply_diagonal(&mut self, phases: &[C64]);
    /// Single-site Pauli expectation; deviation states are normalized so a
    /// unit-coefficient term reads 1.0.
    fn pauli_expectation(&self, site: usize, axis: PauliAxis) -> f64;
    fn polarization(&self) -> f64;
}

impl SpinState for ChainState {
    fn n(&self) -> usize {
        self.n
    }

    fn apply_local(&mut self, site: usize, u: &Mat2) {
        let mask = site_mask(self.n, site);
        let a = &mut self.amplitudes;
        for i0 in (0..a.len()).filter(|i| i & mask == 0) {
            let i1 = i0 | mask;
            let (x, y) = (a[i0], a[i1]);
            a[i0] = u[(0, 0)] * x + u[(0, 1)] * y;
            a[i1] = u[(1, 0)] * x + u[(1, 1)] * y;
        }
    }

    fn apply_diagonal(&mut self, phases: &[C64]) {
        for (a, p) in self.amplitudes.iter_mut().zip(phases) {
            *a *= p;
        }
    }

    fn pauli_expectation(&self, site: usize, axis: PauliAxis) -> f64 {
        let mask = site_mask(self.n, site);
        let a = &self.amplitudes;
        (0..a.len())
            .filter(|i| i & mask == 0)
            .map(|i0| {
                let (x, y) = (a[i0], a[i0 | mask]);
                match axis {
                    PauliAxis::X => 2.0 * (x.conj() * y).re,
                    PauliAxis::Y => 2.0 * (x.conj() * y).im,
                    PauliAxis::Z => x.norm_sqr() - y.norm_sqr(),
                }
            })
            .sum()
    }

    fn polarization(&self) -> f64 {
        1.0
    }
}

impl SpinState for DeviationState {
    fn n(&self) -> usize {
        self.n
    }

    fn apply_local(&mut self, site: usize, u: &Mat2) {
        let mask = site_mask(self.n, site);
        let d = &mut self.deviation;
        let dim = d.nrows();
        let pairs: Vec<usize> = (0..dim).filter(|i| i & mask == 0).collect();
        // rows: u * D
        for col in 0..dim {
            for &r0 in &pairs {
                let r1 = r0 | mask;
                let (x, y) = (d[(r0, col)], d[(r1, col)]);
                d[(r0, col)] = u[(0, 0)] * x + u[(0, 1)] * y;
                d[(r1, col)] = u[(1, 0)] * x + u[(1, 1)] * y;
            }
        }
        // columns: (u D) * u^dagger
        for &c0 in &pairs {
            let c1 = c0 | mask;
            for row in 0..dim {
                let (x, y) = (d[(row, c0)], d[(row, c1)]);
                d[(row, c0)] = x * u[(0, 0)].conj() + y * u[(0, 1)].conj();
                d[(row, c1)] = x * u[(1, 0)].conj() + y * u[(1, 1)].conj();
            }
        }
    }

    fn apply_diagonal(&mut self, phases: &[C64]) {
        let dim = self.deviation.nrows();
        for col in 0..dim {
            let pc = phases[col].conj();
            for row in 0..dim {
                self.deviation[(row, col)] *= phases[row] * pc;
            }
        }
    }

    fn pauli_expectation(&self, site: usize, axis: PauliAxis) -> f64 {
        let mask = site_mask(self.n, site);
        let d = &self.deviation;
        let dim = d.nrows();
        // tr(sigma D) summed over the pairs sigma connects
        let tr: C64 = (0..dim)
            .map(|a| {
                let bit = a & mask != 0;
                match axis {
                    PauliAxis::X => d[(a ^ mask, a)],
                    PauliAxis::Y => d[(a ^ mask, a)] * if bit { linalg::I } else { -linalg::I },
                    PauliAxis::Z => d[(a, a)] * if bit { -1.0 } else { 1.0 },
                }
            })
            .sum();
        tr.re / dim as f64
    }

    fn polarization(&self) -> f64 {
        self.polarization
    }
}

enum Action {
    Local(Vec<(usize, Mat2)>),
    Diagonal(Vec<C64>),
}

/// Sign pattern of CZ on the bonds whose bit is set in `bond_mask`; bond
/// `(j, j+1)` is bit `n - j - 1` of `b & (b >> 1)`.
fn cz_phases(n: usize, bond_mask: usize) -> Vec<C64> {
    (0..1usize << n)
        .map(|b| {
            if (b & (b >> 1) & bond_mask).count_ones() % 2 == 1 {
                c(-1.0)
            } else {
                c(1.0)
            }
        })
        .collect()
}

fn bond_bit(n: usize, j: usize) -> usize {
    1usize << (n - j - 1)
}

fn lower(prim: &Primitive, n: usize) -> Action {
    let all_bonds = if n >= 2 { (1usize << (n - 1)) - 1 } else { 0 };
    match prim {
        Primitive::GlobalH => Action::Local((1..=n).map(|s| (s, linalg::hadamard())).collect()),
        Primitive::GlobalRot { axis, angle } => {
            let u = linalg::rotation(*axis, *angle);
            Action::Local((1..=n).map(|s| (s, u)).collect())
        }
        Primitive::EdgeRot { end, axis, angle } => {
            Action::Local(vec![(end.site(n), linalg::rotation(*axis, *angle))])
        }
        Primitive::SiteRot { site, axis, angle } => Action::Local(vec![(*site, linalg::rotation(*axis, *angle))]),
        Primitive::SiteH { site } => Action::Local(vec![(*site, linalg::hadamard())]),
        Primitive::CZLayer => Action::Diagonal(cz_phases(n, all_bonds)),
        Primitive::MaskedCZLayer { excluded_bond } => {
            let j = match excluded_bond {
                crate::model::End::Head => 1,
                crate::model::End::Tail => n - 1,
            };
            Action::Diagonal(cz_phases(n, all_bonds & !bond_bit(n, j)))
        }
        Primitive::BondCZ { site } => Action::Diagonal(cz_phases(n, bond_bit(n, *site))),
        Primitive::IsingEvolve { duration, couplings } => {
            let phases = (0..1usize << n)
                .map(|b| {
                    let diff = b ^ (b >> 1);
                    let energy: f64 = couplings
                        .j
                        .iter()
                        .enumerate()
                        .map(|(k, jk)| if diff & bond_bit(n, k + 1) != 0 { -jk } else { *jk })
                        .sum();
                    C64::from_polar(1.0, -duration * energy)
                })
                .collect();
            Action::Diagonal(phases)
        }
    }
}

fn check_primitive(prim: &Primitive, n: usize) -> Result<()> {
    let seq = PulseSequence::new(n, vec![prim.clone()]);
    validate_sequence(&seq).into_runnable()
}

fn apply_unchecked<S: SpinState>(state: &mut S, prim: &Primitive) {
    match lower(prim, state.n()) {
        Action::Local(gates) => {
            for (site, u) in &gates {
                state.apply_local(*site, u);
            }
        }
        Action::Diagonal(phases) => state.apply_diagonal(&phases),
    }
}

pub fn init_basis(n: usize, bits: &str) -> Result<ChainState> {
    ChainState::basis(n, bits)
}

pub fn init_deviation(n: usize, terms: &[PauliString], polarization: f64) -> Result<DeviationState> {
    DeviationState::from_terms(n, terms, polarization)
}

pub fn apply<S: SpinState>(state: &S, prim: &Primitive) -> Result<S> {
    check_primitive(prim, state.n())?;
    let mut out = state.clone();
    apply_unchecked(&mut out, prim);
    Ok(out)
}

fn check_sequence(n: usize, seq: &PulseSequence) -> Result<()> {
    if seq.n != n {
        return Err(Error::DimensionMismatch { expected: n, found: seq.n });
    }
    validate_sequence(seq).into_runnable()
}

pub fn run<S: SpinState>(state: &S, seq: &PulseSequence) -> Result<S> {
    check_sequence(state.n(), seq)?;
    let mut out = state.clone();
    for p in &seq.steps {
        apply_unchecked(&mut out, p);
    }
    Ok(out)
}

/// Independent phase flips on every spin: `rho -> (1-e) rho + e Z rho Z`.
/// Entry `(a, b)` is damped by `(1 - 2e)` per site where `a` and `b` differ.
pub fn dephase(state: &mut DeviationState, epsilon: f64) {
    let dim = state.deviation.nrows();
    let factor = 1.0 - 2.0 * epsilon;
    let powers: Vec<f64> = (0..=state.n).map(|k| factor.powi(k as i32)).collect();
    for col in 0..dim {
        for row in 0..dim {
            let k = (row ^ col).count_ones() as usize;
            if k > 0 {
                state.deviation[(row, col)] *= powers[k];
            }
        }
    }
}

pub fn run_noisy(state: &DeviationState, seq: &PulseSequence, epsilon: f64) -> Result<DeviationState> {
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::InvalidArgument(format!("dephasing probability {epsilon} outside [0, 1]")));
    }
    check_sequence(state.n, seq)?;
    let mut out = state.clone();
    for p in &seq.steps {
        apply_unchecked(&mut out, p);
        if epsilon > 0.0 {
            dephase(&mut out, epsilon);
        }
    }
    Ok(out)
}

pub fn expect<S: SpinState>(state: &S, site: usize, axis: PauliAxis) -> Result<f64> {
    if site == 0 || site > state.n() {
        return Err(Error::SiteOutOfRange { site, n: state.n() });
    }
    Ok(state.pauli_expectation(site, axis))
}

/// Per-site readout; `readout_axes` holds one axis per site, or a single axis
/// used for every site.
pub fn spectrum<S: SpinState>(state: &S, readout_axes: &[PauliAxis], threshold: f64) -> Result<SpectrumReport> {
    let n = state.n();
    if !(threshold > 0.0) {
        return Err(Error::InvalidArgument(format!("labeling threshold must be positive, got {threshold}")));
    }
    if readout_axes.len() != n && readout_axes.len() != 1 {
        return Err(Error::DimensionMismatch { expected: n, found: readout_axes.len() });
    }
    let sites = (1..=n)
        .map(|site| {
            let axis = readout_axes[if readout_axes.len() == 1 { 0 } else { site - 1 }];
            let [sx, sy, sz] = PauliAxis::ALL.map(|a| state.pauli_expectation(site, a));
            let mut r = SiteReadout { site, sx, sy, sz, readout_axis: axis, label: SignalLabel::NoSignal };
            r.label = SignalLabel::from_value(r.readout(), threshold);
            r
        })
        .collect();
    Ok(SpectrumReport { polarization: state.polarization(), threshold, sites })
}

/// Reduced density matrix of one site.
pub fn reduced_density(state: &ChainState, site: usize) -> Result<Mat2> {
    if site == 0 || site > state.n {
        return Err(Error::SiteOutOfRange { site, n: state.n });
    }
    let [x, y, z] = PauliAxis::ALL.map(|a| state.pauli_expectation(site, a));
    let rho = Mat2::identity() + linalg::pauli(PauliAxis::X) * c(x) + linalg::pauli(PauliAxis::Y) * c(y)
        + linalg::pauli(PauliAxis::Z) * c(z);
    Ok(rho * c(0.5))
}

/// Outcome distribution of measuring `sites` in the computational basis;
/// outcome index has the first listed site most significant.
pub fn register_probabilities(state: &ChainState, sites: &[usize]) -> Result<Vec<f64>> {
    if let Some(&site) = sites.iter().find(|&&s| s == 0 || s > state.n) {
        return Err(Error::SiteOutOfRange { site, n: state.n });
    }
    let k = sites.len();
    let mut probs = vec![0.0; 1 << k];
    for (i, a) in state.amplitudes.iter().enumerate() {
        let outcome = sites
            .iter()
            .enumerate()
            .filter(|(_, &s)| i & site_mask(state.n, s) != 0)
            .map(|(pos, _)| 1usize << (k - 1 - pos))
            .sum::<usize>();
        probs[outcome] += a.norm_sqr();
    }
    Ok(probs)
}
