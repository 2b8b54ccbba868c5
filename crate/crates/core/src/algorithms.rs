//! Deutsch and Deutsch-Jozsa run through compiled global-control sequences,
//! with a cross-check against the logical circuit simulated directly.

use serde::{Deserialize, Serialize};

use crate::compiler;
use crate::error::{Error, Result};
use crate::linalg::{C64, ZERO};
use crate::model::{
    BlockLayout, BooleanOracleSpec, ChainState, LogicalCircuit, LogicalGate, PauliAxis, Primitive, PulseSequence,
    SpectrumReport,
};
use crate::oracle;
use crate::simulator;

/// Labels below this magnitude read as no signal.
pub const READOUT_THRESHOLD: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    Constant,
    Balanced,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::Constant => "constant",
            Classification::Balanced => "balanced",
        }
    }
}

#[derive(Clone, Debug)]
pub struct AlgorithmResult {
    pub function: BooleanOracleSpec,
    pub classification: Classification,
    pub report: SpectrumReport,
    /// Outcome distribution of the input register (Deutsch-Jozsa only).
    pub register_probabilities: Vec<f64>,
    pub layout: BlockLayout,
    pub circuit: LogicalCircuit,
    /// Compiled circuit, without the readout pulse.
    pub sequence: PulseSequence,
    /// Physical state after `sequence`.
    pub final_state: ChainState,
}

/// `X` on `target` when `on` holds.
fn flip_if(on: bool, target: usize) -> Option<LogicalGate> {
    on.then_some(LogicalGate::RotX { q: target, angle: std::f64::consts::PI })
}

/// Deutsch's circuit on two logical qubits, the second being the target,
/// without the final Hadamards.
pub fn deutsch_circuit(f: &BooleanOracleSpec) -> Result<LogicalCircuit> {
    if f.arity != 1 {
        return Err(Error::InvalidArgument(format!("Deutsch needs a one-bit function, got arity {}", f.arity)));
    }
    let mut c = LogicalCircuit::new(2);
    c.push(LogicalGate::RotX { q: 2, angle: std::f64::consts::PI });
    c.push(LogicalGate::H { q: 1 });
    c.push(LogicalGate::H { q: 2 });
    // f(x) = f(0) xor (f(0) xor f(1)) x
    let (f0, f1) = (f.eval(0), f.eval(1));
    c.gates.extend(flip_if(f0, 2));
    if f0 != f1 {
        c.push(LogicalGate::CNOT { control: 1, target: 2 });
    }
    Ok(c)
}

fn run_compiled(circuit: &LogicalCircuit, layout: &BlockLayout) -> Result<(PulseSequence, ChainState)> {
    let seq = compiler::compile(circuit, layout)?;
    let init = simulator::init_basis(layout.n, &"0".repeat(layout.n))?;
    let out = simulator::run(&init, &seq)?;
    Ok((seq, out))
}

/// Deutsch on the three-spin layout with the buffer in the middle. A global
/// Hadamard read pulse follows the circuit, after which the head spin is
/// `+1` for constant functions and `-1` for balanced ones, the buffer reads
/// zero and the tail spin `-1`.
pub fn deutsch(f: &BooleanOracleSpec) -> Result<AlgorithmResult> {
    f.validate()?;
    let circuit = deutsch_circuit(f)?;
    let layout = compiler::make_layout(2, 1)?;
    let (sequence, final_state) = run_compiled(&circuit, &layout)?;
    let read = simulator::apply(&final_state, &Primitive::GlobalH)?;
    let report = simulator::spectrum(&read, &[PauliAxis::Z], READOUT_THRESHOLD)?;
    let classification =
        if report.site(1).sz > 0.0 { Classification::Constant } else { Classification::Balanced };
    Ok(AlgorithmResult {
        function: f.clone(),
        classification,
        report,
        register_probabilities: Vec::new(),
        layout,
        circuit,
        sequence,
        final_state,
    })
}

/// Deutsch-Jozsa circuit on a register of two qubits and a target third.
/// The oracle is built from the algebraic normal form of `f`, which for
/// constant and balanced two-bit functions has no product term.
pub fn deutsch_jozsa_circuit(f: &BooleanOracleSpec) -> Result<LogicalCircuit> {
    if f.arity != 2 {
        return Err(Error::InvalidArgument(format!("Deutsch-Jozsa needs a two-bit function, got arity {}", f.arity)));
    }
    if !f.is_constant() && !f.is_balanced() {
        return Err(Error::NotConstantOrBalanced(f.to_string()));
    }
    let c0 = f.eval(0);
    let c2 = f.eval(0b01) != c0;
    let c1 = f.eval(0b10) != c0;
    let mut c = LogicalCircuit::new(3);
    c.push(LogicalGate::RotX { q: 3, angle: std::f64::consts::PI });
    for q in 1..=3 {
        c.push(LogicalGate::H { q });
    }
    c.gates.extend(flip_if(c0, 3));
    if c1 {
        c.push(LogicalGate::CNOT { control: 1, target: 3 });
    }
    if c2 {
        c.push(LogicalGate::CNOT { control: 2, target: 3 });
    }
    c.push(LogicalGate::H { q: 1 });
    c.push(LogicalGate::H { q: 2 });
    Ok(c)
}

/// Deutsch-Jozsa on a single three-spin block. Constant iff the register
/// returns to `|00>`.
pub fn deutsch_jozsa(f: &BooleanOracleSpec) -> Result<AlgorithmResult> {
    f.validate()?;
    let circuit = deutsch_jozsa_circuit(f)?;
    let layout = compiler::make_layout(3, 3)?;
    let (sequence, final_state) = run_compiled(&circuit, &layout)?;
    let report = simulator::spectrum(&final_state, &[PauliAxis::Z], READOUT_THRESHOLD)?;
    let register_probabilities =
        simulator::register_probabilities(&final_state, &[layout.site_of(1), layout.site_of(2)])?;
    let classification =
        if register_probabilities[0] > 0.5 { Classification::Constant } else { Classification::Balanced };
    Ok(AlgorithmResult {
        function: f.clone(),
        classification,
        report,
        register_probabilities,
        layout,
        circuit,
        sequence,
        final_state,
    })
}

/// Largest amplitude difference between the compiled run, with its declared
/// byproduct undone, and the logical circuit applied directly to `|0...0>`
/// and embedded with buffers in `|0>`. Compared after global phase
/// alignment.
pub fn cross_check(result: &AlgorithmResult) -> Result<f64> {
    let n = result.layout.n;
    let mut phys = nalgebra::DVector::from_vec(result.final_state.amplitudes.clone());
    if let Some(b) = &result.sequence.byproduct {
        phys = oracle::byproduct_matrix(b, n).adjoint() * phys;
    }
    let u = oracle::pad_identity(
        &oracle::circuit_unitary(&result.circuit)?,
        result.layout.capacity() - result.circuit.n_logical,
    );
    let idx = oracle::logical_basis_indices(&result.layout);
    let mut want = nalgebra::DVector::from_element(1 << n, ZERO);
    for (k, &i) in idx.iter().enumerate() {
        want[i] = u[(k, 0)];
    }
    let phase = {
        let t: C64 = want.iter().zip(phys.iter()).map(|(a, b)| b.conj() * a).sum();
        if t.norm() > 0.0 { t / t.norm() } else { C64::new(1.0, 0.0) }
    };
    Ok(want.iter().zip(phys.iter()).map(|(a, b)| (a - b * phase).norm()).fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ByproductRecord, SignalLabel};

    fn spec(s: &str) -> BooleanOracleSpec {
        s.parse().unwrap()
    }

    #[test]
    fn deutsch_constant() {
        let r = deutsch(&spec("f00")).unwrap();
        assert_eq!(r.classification, Classification::Constant);
        assert_eq!(r.report.labels(), vec![SignalLabel::Absorption, SignalLabel::NoSignal, SignalLabel::Emission]);
        assert!(cross_check(&r).unwrap() < 1e-9);
    }

    #[test]
    fn deutsch_balanced() {
        let r = deutsch(&spec("f01")).unwrap();
        assert_eq!(r.classification, Classification::Balanced);
        assert_eq!(r.report.site(1).label, SignalLabel::Emission);
    }

    #[test]
    fn deutsch_rejects_wrong_arity() {
        assert!(deutsch(&spec("f0011")).is_err());
        assert!(deutsch_jozsa(&spec("f01")).is_err());
    }

    #[test]
    fn dj_constant_and_balanced() {
        let r = deutsch_jozsa(&spec("f1111")).unwrap();
        assert_eq!(r.classification, Classification::Constant);
        assert!(r.register_probabilities[0] > 0.999);
        let r = deutsch_jozsa(&spec("f0011")).unwrap();
        assert_eq!(r.classification, Classification::Balanced);
        assert!(r.register_probabilities[0b10] > 0.999);
        assert!(cross_check(&r).unwrap() < 1e-9);
    }

    #[test]
    fn dj_rejects_unbalanced() {
        assert!(matches!(deutsch_jozsa(&spec("f0001")), Err(Error::NotConstantOrBalanced(_))));
    }

    #[test]
    fn corrupted_byproduct_is_detected() {
        let mut r = deutsch(&spec("f00")).unwrap();
        r.sequence.byproduct = Some(ByproductRecord::from_site_unitaries(
            [(1, crate::linalg::rotation(PauliAxis::Y, std::f64::consts::FRAC_PI_2))],
            0.0,
        ));
        assert!(cross_check(&r).unwrap() > 0.1);
    }
}
