//! Shared domain types.
//!
//! Sites are numbered `1..=n`; site 1 is the most significant bit of a basis
//! index, so `|b_1 b_2 ... b_n>` has index `sum_j b_j 2^(n-j)`.

mod circuit;
mod layout;
mod pauli;
mod primitive;
mod report;
mod sequence;
mod state;

pub use circuit::{BooleanOracleSpec, LogicalCircuit, LogicalGate};
pub use layout::{density, BlockLayout};
pub use pauli::{PauliAxis, PauliString};
pub use primitive::{CouplingProfile, End, Primitive};
pub use report::{CostReport, SignalLabel, SiteReadout, SpectrumReport};
pub use sequence::{
    validate_sequence, AxisRotation, ByproductRecord, PauliImage, PulseSequence,
    ValidationReport, Violation, ViolationKind,
};
pub use state::{ChainState, DeviationState, MAX_DEVIATION_SPINS, MAX_STATE_SPINS};

/// Bit mask of `site` inside a basis index of an `n`-spin register.
#[inline]
pub(crate) fn site_mask(n: usize, site: usize) -> usize {
    1usize << (n - site)
}
