use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::pauli::PauliAxis;
use super::sequence::ViolationKind;
use crate::error::{Error, Result};

/// One terminal of the chain: site 1 (`Head`) or site n (`Tail`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum End {
    Head,
    Tail,
}

impl End {
    pub fn site(self, n: usize) -> usize {
        match self {
            End::Head => 1,
            End::Tail => n,
        }
    }

    pub fn flipped(self) -> End {
        match self {
            End::Head => End::Tail,
            End::Tail => End::Head,
        }
    }
}

impl fmt::Display for End {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            End::Head => "head",
            End::Tail => "tail",
        })
    }
}

/// Nearest-neighbour Ising couplings `J_j` for bonds `(j, j+1)`, in rad/s.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CouplingProfile {
    pub n: usize,
    #[serde(rename = "J")]
    pub j: Vec<f64>,
}

impl CouplingProfile {
    pub fn new(j: Vec<f64>) -> Self {
        Self { n: j.len() + 1, j }
    }

    pub fn uniform(n: usize, j: f64) -> Self {
        Self { n, j: vec![j; n.saturating_sub(1)] }
    }

    /// The common coupling if all bonds are equal (exactly, or within a
    /// relative 1e-12).
    pub fn uniform_value(&self) -> Option<f64> {
        let first = *self.j.first()?;
        self.j
            .iter()
            .all(|&x| (x - first).abs() <= 1e-12 * first.abs().max(1.0))
            .then_some(first)
    }

    pub fn reversed(&self) -> Self {
        Self { n: self.n, j: self.j.iter().rev().copied().collect() }
    }
}

/// The control instruction set. The first six variants are available under
/// global control (global pulses plus pulses selective on a terminal spin);
/// `SiteRot`, `SiteH` and `BondCZ` address arbitrary sites and only appear in
/// baseline constructions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant")]
pub enum Primitive {
    GlobalH,
    GlobalRot { axis: PauliAxis, angle: f64 },
    CZLayer,
    MaskedCZLayer { excluded_bond: End },
    EdgeRot { end: End, axis: PauliAxis, angle: f64 },
    IsingEvolve { duration: f64, couplings: CouplingProfile },
    SiteRot { site: usize, axis: PauliAxis, angle: f64 },
    SiteH { site: usize },
    BondCZ { site: usize },
}

impl Primitive {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Primitive::GlobalH => "GlobalH",
            Primitive::GlobalRot { .. } => "GlobalRot",
            Primitive::CZLayer => "CZLayer",
            Primitive::MaskedCZLayer { .. } => "MaskedCZLayer",
            Primitive::EdgeRot { .. } => "EdgeRot",
            Primitive::IsingEvolve { .. } => "IsingEvolve",
            Primitive::SiteRot { .. } => "SiteRot",
            Primitive::SiteH { .. } => "SiteH",
            Primitive::BondCZ { .. } => "BondCZ",
        }
    }

    /// The single site a selective pulse addresses, if any.
    pub fn addressed_site(&self, n: usize) -> Option<usize> {
        match *self {
            Primitive::EdgeRot { end, .. } => Some(end.site(n)),
            Primitive::SiteRot { site, .. } | Primitive::SiteH { site } => Some(site),
            _ => None,
        }
    }

    pub fn is_edge_selective(&self, n: usize) -> bool {
        matches!(self.addressed_site(n), Some(s) if s == 1 || s == n)
    }

    pub fn is_global_control(&self, n: usize) -> bool {
        match self {
            Primitive::BondCZ { .. } => false,
            Primitive::SiteRot { .. } | Primitive::SiteH { .. } => self.is_edge_selective(n),
            _ => true,
        }
    }

    /// Every way in which this step is ill-formed or outside global control
    /// on an `n`-spin chain.
    pub fn check(&self, n: usize) -> Vec<ViolationKind> {
        let mut out = Vec::new();
        let site_ok = |site: usize, out: &mut Vec<ViolationKind>| {
            if site == 0 || site > n {
                out.push(ViolationKind::SiteOutOfRange { site });
                false
            } else {
                true
            }
        };
        match self {
            Primitive::GlobalH | Primitive::CZLayer => {}
            Primitive::GlobalRot { angle, .. } | Primitive::EdgeRot { angle, .. } => {
                if !angle.is_finite() {
                    out.push(ViolationKind::NonFiniteParameter);
                }
            }
            Primitive::MaskedCZLayer { .. } => {
                if n < 2 {
                    out.push(ViolationKind::NoBonds);
                }
            }
            Primitive::IsingEvolve { duration, couplings } => {
                if !duration.is_finite() || couplings.j.iter().any(|j| !j.is_finite()) {
                    out.push(ViolationKind::NonFiniteParameter);
                } else if *duration < 0.0 {
                    out.push(ViolationKind::NegativeDuration);
                }
                if couplings.n != n || couplings.j.len() + 1 != n {
                    out.push(ViolationKind::CouplingMismatch {
                        expected: n.saturating_sub(1),
                        found: couplings.j.len(),
                    });
                }
            }
            Primitive::SiteRot { site, angle, .. } => {
                if !angle.is_finite() {
                    out.push(ViolationKind::NonFiniteParameter);
                }
                if site_ok(*site, &mut out) && *site != 1 && *site != n {
                    out.push(ViolationKind::NonTerminalSelectivePulse { site: *site });
                }
            }
            Primitive::SiteH { site } => {
                if site_ok(*site, &mut out) && *site != 1 && *site != n {
                    out.push(ViolationKind::NonTerminalSelectivePulse { site: *site });
                }
            }
            Primitive::BondCZ { site } => {
                if *site == 0 || *site + 1 > n {
                    out.push(ViolationKind::SiteOutOfRange { site: *site });
                } else {
                    out.push(ViolationKind::SelectiveCoupling { bond: (*site, site + 1) });
                }
            }
        }
        out
    }

    /// The primitive undoing this one, up to global phase. Ising evolution is
    /// reversed by running on to the end of its period, which exists only for
    /// uniform couplings.
    pub fn inverse(&self) -> Result<Primitive> {
        Ok(match self.clone() {
            p @ (Primitive::GlobalH
            | Primitive::CZLayer
            | Primitive::MaskedCZLayer { .. }
            | Primitive::SiteH { .. }
            | Primitive::BondCZ { .. }) => p,
            Primitive::GlobalRot { axis, angle } => Primitive::GlobalRot { axis, angle: -angle },
            Primitive::EdgeRot { end, axis, angle } => Primitive::EdgeRot { end, axis, angle: -angle },
            Primitive::SiteRot { site, axis, angle } => Primitive::SiteRot { site, axis, angle: -angle },
            Primitive::IsingEvolve { duration, couplings } => {
                let j = couplings
                    .uniform_value()
                    .filter(|j| *j != 0.0)
                    .ok_or_else(|| Error::NotReversible("Ising evolution with non-uniform couplings".into()))?;
                // exp(-i pi sum zz) is a global phase
                let period = PI / j.abs();
                let rem = period - duration.rem_euclid(period);
                Primitive::IsingEvolve { duration: rem % period, couplings }
            }
        })
    }

    /// The same primitive after relabelling site `j` as `n + 1 - j`.
    pub fn mirrored(&self, n: usize) -> Primitive {
        match self.clone() {
            Primitive::MaskedCZLayer { excluded_bond } => {
                Primitive::MaskedCZLayer { excluded_bond: excluded_bond.flipped() }
            }
            Primitive::EdgeRot { end, axis, angle } => Primitive::EdgeRot { end: end.flipped(), axis, angle },
            Primitive::IsingEvolve { duration, couplings } => {
                Primitive::IsingEvolve { duration, couplings: couplings.reversed() }
            }
            Primitive::SiteRot { site, axis, angle } => Primitive::SiteRot { site: n + 1 - site, axis, angle },
            Primitive::SiteH { site } => Primitive::SiteH { site: n + 1 - site },
            Primitive::BondCZ { site } => Primitive::BondCZ { site: n - site },
            p => p,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compliance_classification() {
        assert!(Primitive::GlobalH.is_global_control(3));
        assert!(Primitive::EdgeRot { end: End::Tail, axis: PauliAxis::X, angle: 1.0 }.is_global_control(3));
        assert!(Primitive::SiteH { site: 3 }.is_global_control(3));
        assert!(!Primitive::SiteH { site: 2 }.is_global_control(3));
        assert!(!Primitive::BondCZ { site: 1 }.is_global_control(3));
    }

    #[test]
    fn mirrored_is_an_involution() {
        let n = 5;
        let prims = [
            Primitive::MaskedCZLayer { excluded_bond: End::Head },
            Primitive::EdgeRot { end: End::Head, axis: PauliAxis::Y, angle: 0.2 },
            Primitive::IsingEvolve { duration: 0.3, couplings: CouplingProfile::new(vec![1.0, 2.0, 3.0, 4.0]) },
            Primitive::SiteRot { site: 2, axis: PauliAxis::Z, angle: 0.1 },
            Primitive::BondCZ { site: 1 },
        ];
        for p in prims {
            assert_eq!(p.mirrored(n).mirrored(n), p);
        }
        assert_eq!(Primitive::BondCZ { site: 1 }.mirrored(5), Primitive::BondCZ { site: 4 });
    }

    #[test]
    fn non_uniform_ising_has_no_inverse() {
        let p = Primitive::IsingEvolve { duration: 0.1, couplings: CouplingProfile::new(vec![1.0, 2.0]) };
        assert!(p.inverse().is_err());
        let q = Primitive::IsingEvolve { duration: 0.25, couplings: CouplingProfile::uniform(3, 1.0) };
        match q.inverse().unwrap() {
            Primitive::IsingEvolve { duration, .. } => assert!((duration - (PI - 0.25)).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn serde_uses_variant_tag() {
        let p = Primitive::EdgeRot { end: End::Head, axis: PauliAxis::X, angle: 0.5 };
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"variant":"EdgeRot","end":"head","axis":"X","angle":0.5}"#);
        let c = serde_json::to_string(&CouplingProfile::uniform(3, 2.0)).unwrap();
        assert_eq!(c, r#"{"n":3,"J":[2.0,2.0]}"#);
    }
}
