use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::pauli::PauliAxis;
use super::primitive::Primitive;
use crate::error::{Error, Result};
use crate::linalg::{self, Mat2};

/// An ordered program of primitives for an `n`-spin chain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PulseSequence {
    pub n: usize,
    pub steps: Vec<Primitive>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub byproduct: Option<ByproductRecord>,
    pub global_control_compliant: bool,
}

impl PulseSequence {
    pub fn new(n: usize, steps: Vec<Primitive>) -> Self {
        let global_control_compliant = steps.iter().all(|p| p.is_global_control(n));
        Self { n, steps, byproduct: None, global_control_compliant }
    }

    pub fn empty(n: usize) -> Self {
        Self::new(n, Vec::new())
    }

    pub fn with_byproduct(mut self, byproduct: ByproductRecord) -> Self {
        self.byproduct = Some(byproduct);
        self
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn push(&mut self, p: Primitive) {
        self.global_control_compliant &= p.is_global_control(self.n);
        self.steps.push(p);
    }

    pub fn extend(&mut self, steps: impl IntoIterator<Item = Primitive>) {
        for p in steps {
            self.push(p);
        }
    }

    /// Concatenation; the byproduct of the result is dropped.
    pub fn then(mut self, other: &PulseSequence) -> Self {
        assert_eq!(self.n, other.n, "concatenating sequences of different chain lengths");
        self.byproduct = None;
        self.extend(other.steps.iter().cloned());
        self
    }

    /// The sequence undoing this one: inverted primitives in reverse order.
    pub fn reversed(&self) -> Result<PulseSequence> {
        let steps = self.steps.iter().rev().map(Primitive::inverse).collect::<Result<Vec<_>>>()?;
        Ok(PulseSequence::new(self.n, steps))
    }

    /// Site-reversed copy (head and tail exchanged).
    pub fn mirrored(&self) -> PulseSequence {
        let mut out = PulseSequence::new(self.n, self.steps.iter().map(|p| p.mirrored(self.n)).collect());
        out.byproduct = self.byproduct.as_ref().map(|b| b.mirrored(self.n));
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxisRotation {
    pub axis: PauliAxis,
    pub angle: f64,
}

/// Heisenberg image of one single-site Pauli under a sequence:
/// `U sigma_axis^site U^dagger = sign * sigma_image_axis^image_site`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PauliImage {
    pub site: usize,
    pub axis: PauliAxis,
    pub image_site: usize,
    pub image_axis: PauliAxis,
    pub sign: i8,
}

/// Tensor product of single-spin unitaries `B` such that a sequence's net
/// unitary is `B * target`. Each site's rotations apply in list order.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ByproductRecord {
    pub corrections: BTreeMap<usize, Vec<AxisRotation>>,
    pub global_phase: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pauli_map: Vec<PauliImage>,
}

impl ByproductRecord {
    pub fn identity() -> Self {
        Self::default()
    }

    /// Builds a record from per-site unitaries; sites whose unitary is the
    /// identity up to phase get no entry.
    pub fn from_site_unitaries(sites: impl IntoIterator<Item = (usize, Mat2)>, global_phase: f64) -> Self {
        let corrections = sites
            .into_iter()
            .filter_map(|(site, u)| {
                let rots: Vec<_> = linalg::rotations_of(&u)
                    .into_iter()
                    .map(|(axis, angle)| AxisRotation { axis, angle })
                    .collect();
                (!rots.is_empty()).then_some((site, rots))
            })
            .collect();
        Self { corrections, global_phase, pauli_map: Vec::new() }
    }

    pub fn is_trivial(&self) -> bool {
        self.corrections.values().all(Vec::is_empty)
    }

    pub fn site_unitary(&self, site: usize) -> Mat2 {
        self.corrections
            .get(&site)
            .map(|rots| {
                rots.iter()
                    .fold(Mat2::identity(), |acc, r| linalg::rotation(r.axis, r.angle) * acc)
            })
            .unwrap_or_else(Mat2::identity)
    }

    pub fn mirrored(&self, n: usize) -> Self {
        Self {
            corrections: self.corrections.iter().map(|(&s, r)| (n + 1 - s, r.clone())).collect(),
            global_phase: self.global_phase,
            pauli_map: self
                .pauli_map
                .iter()
                .map(|p| PauliImage { site: n + 1 - p.site, image_site: n + 1 - p.image_site, ..*p })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ViolationKind {
    EmptyChain,
    SiteOutOfRange { site: usize },
    NonFiniteParameter,
    NegativeDuration,
    NoBonds,
    CouplingMismatch { expected: usize, found: usize },
    NonTerminalSelectivePulse { site: usize },
    SelectiveCoupling { bond: (usize, usize) },
    ComplianceFlagMismatch { declared: bool, actual: bool },
    ByproductSiteOutOfRange { site: usize },
}

impl ViolationKind {
    /// Structural violations make a sequence unrunnable; the remaining kinds
    /// only record departures from global control.
    pub fn is_structural(&self) -> bool {
        !matches!(
            self,
            ViolationKind::NonTerminalSelectivePulse { .. } | ViolationKind::SelectiveCoupling { .. }
        )
    }
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ViolationKind::EmptyChain => write!(f, "chain has no spins"),
            ViolationKind::SiteOutOfRange { site } => write!(f, "site {site} out of range"),
            ViolationKind::NonFiniteParameter => write!(f, "non-finite angle or duration"),
            ViolationKind::NegativeDuration => write!(f, "negative evolution time"),
            ViolationKind::NoBonds => write!(f, "bond operation on a chain without bonds"),
            ViolationKind::CouplingMismatch { expected, found } => {
                write!(f, "coupling profile has {found} bonds, chain has {expected}")
            }
            ViolationKind::NonTerminalSelectivePulse { site } => {
                write!(f, "non-terminal selective pulse (site {site})")
            }
            ViolationKind::SelectiveCoupling { bond: (a, b) } => {
                write!(f, "selective coupling gate on bond ({a},{b})")
            }
            ViolationKind::ComplianceFlagMismatch { declared, actual } => {
                write!(f, "global_control_compliant declared {declared} but is {actual}")
            }
            ViolationKind::ByproductSiteOutOfRange { site } => {
                write!(f, "byproduct correction on site {site} out of range")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    /// Index into `steps`, or `None` for sequence-level problems.
    pub step: Option<usize>,
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.step {
            Some(i) => write!(f, "step {i}: {}", self.kind),
            None => write!(f, "{}", self.kind),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    /// Whether every step is a global pulse or a pulse selective on a
    /// terminal spin.
    pub compliant: bool,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn structural(&self) -> impl Iterator<Item = &Violation> {
        self.violations.iter().filter(|v| v.kind.is_structural())
    }

    pub fn into_runnable(self) -> Result<()> {
        let bad: Vec<_> = self.violations.into_iter().filter(|v| v.kind.is_structural()).collect();
        if bad.is_empty() {
            Ok(())
        } else {
            Err(Error::MalformedSequence(bad))
        }
    }
}

pub fn validate_sequence(seq: &PulseSequence) -> ValidationReport {
    let n = seq.n;
    let mut violations = Vec::new();
    if n == 0 {
        violations.push(Violation { step: None, kind: ViolationKind::EmptyChain });
    }
    for (i, p) in seq.steps.iter().enumerate() {
        violations.extend(p.check(n).into_iter().map(|kind| Violation { step: Some(i), kind }));
    }
    let compliant = seq.steps.iter().all(|p| p.is_global_control(n));
    if compliant != seq.global_control_compliant {
        violations.push(Violation {
            step: None,
            kind: ViolationKind::ComplianceFlagMismatch { declared: seq.global_control_compliant, actual: compliant },
        });
    }
    if let Some(b) = &seq.byproduct {
        for &site in b.corrections.keys().filter(|&&s| s == 0 || s > n) {
            violations.push(Violation { step: None, kind: ViolationKind::ByproductSiteOutOfRange { site } });
        }
    }
    ValidationReport { violations, compliant }
}
