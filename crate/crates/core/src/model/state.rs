use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use super::pauli::{PauliAxis, PauliString};
use super::site_mask;
use crate::error::{Error, Result};
use crate::linalg::{c, Mat, C64, I, ONE, ZERO};

pub const MAX_STATE_SPINS: usize = 14;
pub const MAX_DEVIATION_SPINS: usize = 10;

/// Pure state of `n` spins; index bit `n - j` holds site `j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainState {
    pub n: usize,
    pub amplitudes: Vec<C64>,
}

impl ChainState {
    pub fn from_amplitudes(n: usize, amplitudes: Vec<C64>) -> Result<Self> {
        check_cap("state-vector", n, MAX_STATE_SPINS)?;
        if amplitudes.len() != 1 << n {
            return Err(Error::DimensionMismatch { expected: 1 << n, found: amplitudes.len() });
        }
        Ok(Self { n, amplitudes })
    }

    /// Product state from a string over `0 1 + -`, one character per site.
    pub fn basis(n: usize, bits: &str) -> Result<Self> {
        check_cap("state-vector", n, MAX_STATE_SPINS)?;
        let chars: Vec<char> = bits.chars().collect();
        if chars.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: chars.len() });
        }
        let h = c(FRAC_1_SQRT_2);
        let mut amps = vec![ONE];
        for ch in chars {
            let (a0, a1) = match ch {
                '0' => (ONE, ZERO),
                '1' => (ZERO, ONE),
                '+' => (h, h),
                '-' | '\u{2212}' => (h, -h),
                other => return Err(Error::InvalidBasisChar(other)),
            };
            amps = amps.iter().flat_map(|&a| [a * a0, a * a1]).collect();
        }
        Ok(Self { n, amplitudes: amps })
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn inner(&self, other: &ChainState) -> C64 {
        self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn fidelity(&self, other: &ChainState) -> f64 {
        self.inner(other).norm_sqr()
    }

    pub fn probability(&self, index: usize) -> f64 {
        self.amplitudes[index].norm_sqr()
    }
}

/// NMR-style mixed state `1 + p * deviation`. Only the deviation evolves
/// observably.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeviationState {
    pub n: usize,
    pub polarization: f64,
    pub deviation: Mat,
}

impl DeviationState {
    /// `sum_k coefficient_k * (tensor product of the k-th string's Paulis)`.
    pub fn from_terms(n: usize, terms: &[PauliString], polarization: f64) -> Result<Self> {
        check_cap("deviation-matrix", n, MAX_DEVIATION_SPINS)?;
        for t in terms {
            t.check(n)?;
        }
        let dim = 1usize << n;
        let mut deviation = Mat::zeros(dim, dim);
        for t in terms {
            // a Pauli string has one non-zero per column: flip the X/Y bits,
            // pick up a phase from the Y/Z factors
            let flip: usize = t
                .factors
                .iter()
                .filter(|(_, a)| **a != PauliAxis::Z)
                .map(|(&s, _)| site_mask(n, s))
                .sum();
            for col in 0..dim {
                let row = col ^ flip;
                let mut amp = c(t.coefficient);
                for (&s, &axis) in &t.factors {
                    let bit = col & site_mask(n, s) != 0;
                    amp *= match (axis, bit) {
                        (PauliAxis::X, _) => ONE,
                        (PauliAxis::Y, false) => I,
                        (PauliAxis::Y, true) => -I,
                        (PauliAxis::Z, false) => ONE,
                        (PauliAxis::Z, true) => -ONE,
                    };
                }
                deviation[(row, col)] += amp;
            }
        }
        Ok(Self { n, polarization, deviation })
    }

    /// Deviation of the pseudo-pure state built on `psi`, scaled so that
    /// single-spin expectations match those of `psi`.
    pub fn pseudo_pure(psi: &ChainState, polarization: f64) -> Result<Self> {
        let n = psi.n;
        check_cap("deviation-matrix", n, MAX_DEVIATION_SPINS)?;
        let dim = 1usize << n;
        let scale = dim as f64;
        let mut deviation = Mat::from_fn(dim, dim, |r, col| {
            psi.amplitudes[r] * psi.amplitudes[col].conj() * scale
        });
        for d in 0..dim {
            deviation[(d, d)] -= c(scale / dim as f64);
        }
        Ok(Self { n, polarization, deviation })
    }

    pub fn hermiticity_error(&self) -> f64 {
        crate::linalg::max_abs_diff(&self.deviation, &self.deviation.adjoint())
    }

    /// `tr(A B) / 2^n`, so a unit-coefficient Pauli string has unit norm.
    pub fn overlap(&self, other: &DeviationState) -> f64 {
        let dim = 1usize << self.n;
        let tr: C64 = (0..dim)
            .flat_map(|r| (0..dim).map(move |k| (r, k)))
            .map(|(r, k)| self.deviation[(r, k)] * other.deviation[(k, r)])
            .sum();
        tr.re / dim as f64
    }

    /// Sum of absolute eigenvalues of the Hermitian part.
    pub fn trace_norm(&self) -> f64 {
        let h = (&self.deviation + self.deviation.adjoint()) * c(0.5);
        h.symmetric_eigenvalues().iter().map(|e| e.abs()).sum()
    }
}

fn check_cap(what: &'static str, n: usize, cap: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("chain must have at least one spin".into()));
    }
    if n > cap {
        return Err(Error::CapExceeded { what, n, cap });
    }
    Ok(())
}
