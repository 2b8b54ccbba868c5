use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant")]
pub enum LogicalGate {
    H { q: usize },
    RotZ { q: usize, angle: f64 },
    RotX { q: usize, angle: f64 },
    CZ { q1: usize, q2: usize },
    CNOT { control: usize, target: usize },
}

impl LogicalGate {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            LogicalGate::H { q } | LogicalGate::RotZ { q, .. } | LogicalGate::RotX { q, .. } => vec![q],
            LogicalGate::CZ { q1, q2 } => vec![q1, q2],
            LogicalGate::CNOT { control, target } => vec![control, target],
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LogicalCircuit {
    pub n_logical: usize,
    pub gates: Vec<LogicalGate>,
}

impl LogicalCircuit {
    pub fn new(n_logical: usize) -> Self {
        Self { n_logical, gates: Vec::new() }
    }

    pub fn with(mut self, gate: LogicalGate) -> Self {
        self.gates.push(gate);
        self
    }

    pub fn push(&mut self, gate: LogicalGate) {
        self.gates.push(gate);
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_logical == 0 {
            return Err(Error::InvalidArgument("circuit has no qubits".into()));
        }
        for (i, g) in self.gates.iter().enumerate() {
            let qs = g.qubits();
            if let Some(&q) = qs.iter().find(|&&q| q == 0 || q > self.n_logical) {
                return Err(Error::InvalidArgument(format!(
                    "gate {i}: qubit {q} outside 1..={}",
                    self.n_logical
                )));
            }
            if qs.len() == 2 && qs[0] == qs[1] {
                return Err(Error::InvalidArgument(format!("gate {i}: two-qubit gate on a single qubit")));
            }
            match *g {
                LogicalGate::RotZ { angle, .. } | LogicalGate::RotX { angle, .. } if !angle.is_finite() => {
                    return Err(Error::InvalidArgument(format!("gate {i}: non-finite angle")));
                }
                _ => {}
            }
        }
        Ok(())
    }
}

/// Truth table of a Boolean function on 1 or 2 input bits; entry `x` is
/// `f(x)` with the first input bit most significant (`f0011` means f(1,x)=1).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BooleanOracleSpec {
    pub arity: usize,
    pub truth_table: Vec<u8>,
}

impl BooleanOracleSpec {
    pub fn new(truth_table: Vec<u8>) -> Result<Self> {
        let arity = match truth_table.len() {
            2 => 1,
            4 => 2,
            k => return Err(Error::InvalidArgument(format!("truth table of length {k}; expected 2 or 4"))),
        };
        let spec = Self { arity, truth_table };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=2).contains(&self.arity) || self.truth_table.len() != 1 << self.arity {
            return Err(Error::InvalidArgument(format!(
                "arity {} with {} truth-table entries",
                self.arity,
                self.truth_table.len()
            )));
        }
        if self.truth_table.iter().any(|&b| b > 1) {
            return Err(Error::InvalidArgument("truth-table entries must be 0 or 1".into()));
        }
        Ok(())
    }

    pub fn eval(&self, x: usize) -> bool {
        self.truth_table[x] == 1
    }

    pub fn is_constant(&self) -> bool {
        self.truth_table.iter().all(|&b| b == self.truth_table[0])
    }

    pub fn is_balanced(&self) -> bool {
        2 * self.truth_table.iter().filter(|&&b| b == 1).count() == self.truth_table.len()
    }

    /// All functions of the given arity, in truth-table order.
    pub fn all(arity: usize) -> Vec<Self> {
        let len = 1usize << arity;
        (0..1usize << len)
            .map(|bits| Self {
                arity,
                truth_table: (0..len).map(|i| ((bits >> (len - 1 - i)) & 1) as u8).collect(),
            })
            .collect()
    }
}

impl fmt::Display for BooleanOracleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("f")?;
        for b in &self.truth_table {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl FromStr for BooleanOracleSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim().strip_prefix('f').unwrap_or(s.trim());
        let table = body
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::InvalidArgument(format!("unknown function name {s:?}"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Self::new(table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_names() {
        let f: BooleanOracleSpec = "f01".parse().unwrap();
        assert_eq!(f.arity, 1);
        assert!(!f.eval(0) && f.eval(1));
        let g: BooleanOracleSpec = "0011".parse().unwrap();
        assert_eq!(g.arity, 2);
        assert!(g.is_balanced());
        assert_eq!(g.to_string(), "f0011");
        assert!("f012".parse::<BooleanOracleSpec>().is_err());
        assert!("f001".parse::<BooleanOracleSpec>().is_err());
    }

    #[test]
    fn enumerates_two_constant_six_balanced() {
        let all = BooleanOracleSpec::all(2);
        assert_eq!(all.len(), 16);
        assert_eq!(all.iter().filter(|f| f.is_constant()).count(), 2);
        assert_eq!(all.iter().filter(|f| f.is_balanced()).count(), 6);
    }

    #[test]
    fn circuit_validation() {
        let ok = LogicalCircuit::new(3).with(LogicalGate::CNOT { control: 1, target: 3 });
        assert!(ok.validate().is_ok());
        assert!(LogicalCircuit::new(2).with(LogicalGate::CZ { q1: 2, q2: 2 }).validate().is_err());
        assert!(LogicalCircuit::new(2).with(LogicalGate::H { q: 3 }).validate().is_err());
    }

    #[test]
    fn gate_json() {
        let g = LogicalGate::CNOT { control: 1, target: 3 };
        assert_eq!(serde_json::to_string(&g).unwrap(), r#"{"variant":"CNOT","control":1,"target":3}"#);
    }
}
