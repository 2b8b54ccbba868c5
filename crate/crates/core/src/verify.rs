//! Oracle-backed property suite behind `chainqc verify`.

use rayon::prelude::*;
use serde::Serialize;

use crate::algorithms::{self, Classification};
use crate::error::{Error, Result};
use crate::model::{BooleanOracleSpec, CouplingProfile, End, Primitive, PulseSequence};
use crate::oracle;
use crate::protocol;

/// Largest chain the suite will build dense unitaries for.
pub const MAX_VERIFY_SPINS: usize = 8;
pub const EQUIV_TOL: f64 = 1e-9;

#[derive(Clone, Debug, Serialize)]
pub struct PropertyResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifySummary {
    pub max_spins: usize,
    pub passed: usize,
    pub failed: usize,
    pub results: Vec<PropertyResult>,
}

impl VerifySummary {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct VerifyOptions {
    /// Checks the mirror against a deliberately wrong period (negative control).
    pub corrupt: bool,
}

fn check(name: impl Into<String>, f: impl FnOnce() -> Result<(bool, String)>) -> PropertyResult {
    let name = name.into();
    match f() {
        Ok((passed, detail)) => PropertyResult { name, passed, detail },
        Err(e) => PropertyResult { name, passed: false, detail: format!("error: {e}") },
    }
}

fn declared_error(seq: &PulseSequence, target: &crate::linalg::Mat) -> Result<f64> {
    let u = oracle::unitary_of(seq)?;
    let b = seq.byproduct.clone().unwrap_or_default();
    Ok(oracle::phase_distance(&u, &(oracle::byproduct_matrix(&b, seq.n) * target)))
}

fn tol_detail(err: f64) -> (bool, String) {
    (err < EQUIV_TOL, format!("max deviation {err:.2e}"))
}

type Job = Box<dyn Fn() -> PropertyResult + Send + Sync>;

fn jobs(k: usize, opts: VerifyOptions) -> Vec<Job> {
    let mut out: Vec<Job> = Vec::new();
    for n in 2..=k {
        out.push(Box::new(move || {
            check(format!("mirror period n={n}"), || {
                let (found, _) = oracle::find_mirror_period(n, 4 * (n + 1))?;
                let frozen = protocol::mirror_period(n) + usize::from(opts.corrupt);
                Ok((found == frozen, format!("search {found}, frozen {frozen}")))
            })
        }));
        out.push(Box::new(move || {
            check(format!("mirror byproduct n={n}"), || {
                Ok(tol_detail(declared_error(&protocol::mirror_cycle(n)?, &oracle::reversal_permutation(n))?))
            })
        }));
    }
    for n in 2..=k.min(6) {
        out.push(Box::new(move || {
            check(format!("CZ synthesis n={n}"), || {
                let seq = protocol::synth_cz_layer(n, &CouplingProfile::uniform(n, 1.0))?;
                Ok(tol_detail(declared_error(&seq, &oracle::primitive_matrix(&Primitive::CZLayer, n)?)?))
            })
        }));
    }
    if k >= 3 {
        for ratio in [1.2, 1.5, 2.0, 3.0] {
            out.push(Box::new(move || {
                check(format!("partial refocus J_AB/J_BC={ratio}"), || {
                    let seq = protocol::partial_refocus(&CouplingProfile::new(vec![ratio, 1.0]), 0.7)?;
                    let want = Primitive::IsingEvolve { duration: 0.7, couplings: CouplingProfile::uniform(3, 1.0) };
                    Ok(tol_detail(declared_error(&seq, &oracle::primitive_matrix(&want, 3)?)?))
                })
            }));
        }
    }
    for n in 3..=k.min(6) {
        out.push(Box::new(move || {
            check(format!("freeze step n={n}"), || {
                let masked = oracle::unitary_of(&protocol::freeze_step_masked(n, End::Head)?)?;
                Ok(tol_detail(declared_error(&protocol::freeze_step(n, End::Head)?, &masked)?))
            })
        }));
    }
    for n in 2..=k.min(5) {
        out.push(Box::new(move || {
            check(format!("swap words n={n}"), || {
                let mut worst: f64 = 0.0;
                for j in 1..n {
                    let seq = protocol::swap_pair(n, j)?;
                    worst = worst.max(declared_error(&seq, &oracle::swap_sites(n, j, j + 1))?);
                }
                Ok(tol_detail(worst))
            })
        }));
    }
    if k >= 3 {
        out.push(Box::new(|| {
            check("inter-block CZ", || {
                let want = oracle::cz_between(3, 1, 3) * oracle::cz_between(3, 2, 3);
                Ok(tol_detail(declared_error(&protocol::inter_block_cz()?, &want)?))
            })
        }));
        out.push(Box::new(|| {
            check("Deutsch cross-check", || {
                let mut worst: f64 = 0.0;
                let mut ok = true;
                for f in BooleanOracleSpec::all(1) {
                    let r = algorithms::deutsch(&f)?;
                    let expect = if f.is_constant() { Classification::Constant } else { Classification::Balanced };
                    ok &= r.classification == expect;
                    worst = worst.max(algorithms::cross_check(&r)?);
                }
                Ok((ok && worst < EQUIV_TOL, format!("classification {}, max deviation {worst:.2e}", if ok { "exact" } else { "wrong" })))
            })
        }));
        out.push(Box::new(|| {
            check("Deutsch-Jozsa cross-check", || {
                let mut worst: f64 = 0.0;
                let mut ok = true;
                for f in BooleanOracleSpec::all(2).into_iter().filter(|f| f.is_constant() || f.is_balanced()) {
                    let r = algorithms::deutsch_jozsa(&f)?;
                    let expect = if f.is_constant() { Classification::Constant } else { Classification::Balanced };
                    ok &= r.classification == expect;
                    worst = worst.max(algorithms::cross_check(&r)?);
                }
                Ok((ok && worst < EQUIV_TOL, format!("classification {}, max deviation {worst:.2e}", if ok { "exact" } else { "wrong" })))
            })
        }));
    }
    out
}

/// Runs every property for chains of up to `max_spins` spins.
pub fn run_suite(max_spins: usize, opts: VerifyOptions) -> Result<VerifySummary> {
    if max_spins < 2 {
        return Err(Error::InvalidArgument(format!("max spins must be at least 2, got {max_spins}")));
    }
    if max_spins > MAX_VERIFY_SPINS {
        return Err(Error::CapExceeded { what: "verification", n: max_spins, cap: MAX_VERIFY_SPINS });
    }
    let results: Vec<PropertyResult> = jobs(max_spins, opts).par_iter().map(|j| j()).collect();
    let passed = results.iter().filter(|r| r.passed).count();
    Ok(VerifySummary { max_spins, passed, failed: results.len() - passed, results })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_passes() {
        let s = run_suite(4, VerifyOptions::default()).unwrap();
        assert!(s.all_passed(), "{:#?}", s.results.iter().filter(|r| !r.passed).collect::<Vec<_>>());
    }

    #[test]
    fn corruption_fails() {
        let s = run_suite(3, VerifyOptions { corrupt: true }).unwrap();
        assert!(!s.all_passed());
    }

    #[test]
    fn cap() {
        assert!(run_suite(12, VerifyOptions::default()).is_err());
    }
}
