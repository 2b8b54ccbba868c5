//! Global-control building blocks as pulse sequences: mirror cycles, CZ from
//! Ising evolution, partial refocusing, edge freezing, the inter-block CZ of
//! the three-spin demo, and the swap words that permute qubits inside a block.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::linalg::{self, Mat2};
use crate::model::{ByproductRecord, CouplingProfile, End, PauliAxis, Primitive, PulseSequence};
use crate::oracle;
use crate::pauli_frame;

fn check_n(n: usize, min: usize) -> Result<()> {
    if n < min {
        return Err(Error::InvalidArgument(format!("need at least {min} spins, got {n}")));
    }
    Ok(())
}

/// Edge pulses realizing `u` on the `end` spin, up to phase.
pub fn edge_steps(end: End, u: &Mat2) -> Vec<Primitive> {
    linalg::rotations_of(u)
        .into_iter()
        .map(|(axis, angle)| Primitive::EdgeRot { end, axis, angle })
        .collect()
}

/// Global pulses realizing `u` on every spin, up to phase.
pub fn global_steps(u: &Mat2) -> Vec<Primitive> {
    linalg::rotations_of(u)
        .into_iter()
        .map(|(axis, angle)| Primitive::GlobalRot { axis, angle })
        .collect()
}

/// CZ on every bond from uniform Ising evolution plus Z corrections. Interior
/// spins have two bonds and need twice the terminal correction, which is
/// applied globally and then topped up on the two ends.
pub fn synth_cz_layer(n: usize, couplings: &CouplingProfile) -> Result<PulseSequence> {
    check_n(n, 2)?;
    if couplings.n != n || couplings.j.len() != n - 1 {
        return Err(Error::DimensionMismatch { expected: n, found: couplings.n });
    }
    let j = couplings
        .uniform_value()
        .filter(|j| *j > 0.0)
        .ok_or_else(|| Error::InvalidArgument("CZ synthesis needs uniform positive couplings".into()))?;
    Ok(PulseSequence::new(
        n,
        vec![
            Primitive::IsingEvolve { duration: PI / (4.0 * j), couplings: couplings.clone() },
            Primitive::GlobalRot { axis: PauliAxis::Z, angle: -PI },
            Primitive::EdgeRot { end: End::Head, axis: PauliAxis::Z, angle: FRAC_PI_2 },
            Primitive::EdgeRot { end: End::Tail, axis: PauliAxis::Z, angle: FRAC_PI_2 },
        ],
    )
    .with_byproduct(ByproductRecord::identity()))
}

/// Three-spin evolution under `J_AB > J_BC` that emulates uniform coupling
/// `J_BC` for time `t`, by echoing the head spin part way through.
pub fn partial_refocus(couplings: &CouplingProfile, t: f64) -> Result<PulseSequence> {
    if couplings.n != 3 || couplings.j.len() != 2 {
        return Err(Error::DimensionMismatch { expected: 3, found: couplings.n });
    }
    let (jab, jbc) = (couplings.j[0], couplings.j[1]);
    if !(jbc > 0.0) || !(t >= 0.0) {
        return Err(Error::InvalidArgument("couplings must be positive and t non-negative".into()));
    }
    if jab < jbc {
        return Err(Error::InvalidArgument(format!(
            "cannot scale J_AB = {jab} up to J_BC = {jbc}: refocusing only shortens couplings"
        )));
    }
    let ising = |duration| Primitive::IsingEvolve { duration, couplings: couplings.clone() };
    if jab == jbc {
        return Ok(PulseSequence::new(3, vec![ising(t)]));
    }
    let r = jbc / jab;
    let flip = Primitive::EdgeRot { end: End::Head, axis: PauliAxis::X, angle: PI };
    Ok(PulseSequence::new(
        3,
        vec![ising(t * (1.0 + r) / 2.0), flip.clone(), ising(t * (1.0 - r) / 2.0), flip],
    ))
}

/// Steps per mirror: `[CZLayer, GlobalH]` repeated `n + 1` times maps spin
/// `j` to spin `n + 1 - j` exactly. Confirmed by `oracle::find_mirror_period`
/// for `2 <= n <= 8`.
pub fn mirror_period(n: usize) -> usize {
    n + 1
}

pub fn mirror_cycle(n: usize) -> Result<PulseSequence> {
    check_n(n, 2)?;
    let steps = (0..mirror_period(n)).flat_map(|_| [Primitive::CZLayer, Primitive::GlobalH]).collect();
    let mut seq = PulseSequence::new(n, steps);
    let mut rec = ByproductRecord::identity();
    rec.pauli_map = pauli_frame::single_site_images(&seq).unwrap_or_default();
    seq.byproduct = Some(rec);
    Ok(seq)
}

/// Undoes `GlobalH` on the edge spin: `H = i Rx(pi) Ry(pi/2)`.
fn edge_unhadamard(end: End) -> [Primitive; 2] {
    [
        Primitive::EdgeRot { end, axis: PauliAxis::Y, angle: FRAC_PI_2 },
        Primitive::EdgeRot { end, axis: PauliAxis::X, angle: PI },
    ]
}

/// One mirror step acting on all spins but the `end` one, built from Ising
/// evolution with an X echo on the frozen spin.
///
/// For `n = 3` the result is exact. For longer chains the spin next to the
/// frozen one is interior as far as the global Z correction goes but has a
/// single active bond, leaving it with `Rx(-pi/2)` (after the Hadamard),
/// which is declared in the byproduct.
pub fn freeze_step(n: usize, end: End) -> Result<PulseSequence> {
    check_n(n, 3)?;
    let head = freeze_step_head(n);
    Ok(if end == End::Head { head } else { head.mirrored() })
}

fn freeze_step_head(n: usize) -> PulseSequence {
    let couplings = CouplingProfile::uniform(n, 1.0);
    let half = Primitive::IsingEvolve { duration: PI / 8.0, couplings };
    let echo = Primitive::EdgeRot { end: End::Head, axis: PauliAxis::X, angle: PI };
    // sites 2..n form a chain of n-1 spins; its interior needs twice the
    // terminal Z correction
    let c = if n == 3 { 1.0 } else { 2.0 };
    let mut steps = vec![
        half.clone(),
        echo.clone(),
        half,
        echo,
        Primitive::GlobalRot { axis: PauliAxis::Z, angle: -c * FRAC_PI_2 },
        Primitive::EdgeRot { end: End::Head, axis: PauliAxis::Z, angle: c * FRAC_PI_2 },
    ];
    if n > 3 {
        steps.push(Primitive::EdgeRot { end: End::Tail, axis: PauliAxis::Z, angle: FRAC_PI_2 });
    }
    steps.push(Primitive::GlobalH);
    steps.extend(edge_unhadamard(End::Head));
    let byproduct = if n == 3 {
        ByproductRecord::identity()
    } else {
        ByproductRecord::from_site_unitaries([(2, linalg::rotation(PauliAxis::X, -FRAC_PI_2))], 0.0)
    };
    PulseSequence::new(n, steps).with_byproduct(byproduct)
}

/// The same frozen step using the masked CZ layer directly.
pub fn freeze_step_masked(n: usize, end: End) -> Result<PulseSequence> {
    check_n(n, 3)?;
    let mut steps = vec![Primitive::MaskedCZLayer { excluded_bond: end }, Primitive::GlobalH];
    steps.extend(edge_unhadamard(end));
    Ok(PulseSequence::new(n, steps).with_byproduct(ByproductRecord::identity()))
}

/// CZ between the qubits at sites 1 and 3 of a three-spin chain whose middle
/// spin is a buffer in `|0>`. The head qubit is frozen while three frozen
/// steps swap spins 2 and 3, one CZ layer couples it to the incoming qubit,
/// and the transport is unwound. The full unitary is `CZ_13 CZ_23`, which
/// acts as `CZ_13` while the buffer holds `|0>`.
pub fn inter_block_cz() -> Result<PulseSequence> {
    let step = freeze_step(3, End::Head)?;
    let transport = step.clone().then(&step).then(&step);
    let mut seq = transport.clone();
    seq.push(Primitive::CZLayer);
    let seq = seq.then(&transport.reversed()?);
    Ok(seq.with_byproduct(ByproductRecord::identity()))
}

/// Generators of the intra-block swap word.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SwapGen {
    U1,
    U2,
    Sx,
    Sz,
}

impl SwapGen {
    pub const ALL: [SwapGen; 4] = [SwapGen::U1, SwapGen::U2, SwapGen::Sx, SwapGen::Sz];

    pub fn name(self) -> &'static str {
        match self {
            SwapGen::U1 => "U1",
            SwapGen::U2 => "U2",
            SwapGen::Sx => "Sx",
            SwapGen::Sz => "Sz",
        }
    }
}

/// Shortest word swapping two adjacent spins up to local gates, found by
/// `oracle::word_search` over `SwapGen::ALL`.
pub const SWAP_WORD: [SwapGen; 5] = [SwapGen::U1, SwapGen::Sx, SwapGen::U2, SwapGen::Sz, SwapGen::U1];

/// `exp(-i pi/4 X_j Z_{j+1})`: `CZ Sx^1 CZ` for `j = 1`, then nested
/// conjugation by `CZ H` to step along the chain.
pub fn u2_at(j: usize) -> Vec<Primitive> {
    let mut steps = vec![
        Primitive::CZLayer,
        Primitive::EdgeRot { end: End::Head, axis: PauliAxis::X, angle: FRAC_PI_2 },
        Primitive::CZLayer,
    ];
    for _ in 1..j {
        let mut next = vec![Primitive::CZLayer, Primitive::GlobalH];
        next.extend(steps);
        next.extend([Primitive::GlobalH, Primitive::CZLayer]);
        steps = next;
    }
    steps
}

/// `exp(-i pi/4 Z_j X_{j+1})`.
pub fn u1_at(j: usize) -> Vec<Primitive> {
    let mut steps = vec![Primitive::GlobalH];
    steps.extend(u2_at(j));
    steps.push(Primitive::GlobalH);
    steps
}

pub fn gen_steps(g: SwapGen, j: usize) -> Vec<Primitive> {
    match g {
        SwapGen::U1 => u1_at(j),
        SwapGen::U2 => u2_at(j),
        SwapGen::Sx => vec![Primitive::GlobalRot { axis: PauliAxis::X, angle: FRAC_PI_2 }],
        SwapGen::Sz => vec![Primitive::GlobalRot { axis: PauliAxis::Z, angle: FRAC_PI_2 }],
    }
}

/// Local factors of the swap word: on the swapped pair the word acts as
/// `(A (x) B) SWAP`, and every other spin receives `C`.
#[derive(Clone, Copy, Debug)]
pub struct SwapFactors {
    pub a: Mat2,
    pub b: Mat2,
    pub c: Mat2,
}

pub fn swap_factors() -> &'static SwapFactors {
    static FACTORS: OnceLock<SwapFactors> = OnceLock::new();
    FACTORS.get_or_init(|| {
        let steps = SWAP_WORD.iter().flat_map(|g| gen_steps(*g, 1)).collect();
        let u = oracle::unitary_of(&PulseSequence::new(2, steps)).expect("two-spin unitary");
        let rec = oracle::equiv_up_to_local(&u, &oracle::swap_matrix(), 2).expect("swap word is a swap up to locals");
        let c = SWAP_WORD.iter().fold(Mat2::identity(), |acc, g| match g {
            SwapGen::Sx => linalg::rotation(PauliAxis::X, FRAC_PI_2) * acc,
            SwapGen::Sz => linalg::rotation(PauliAxis::Z, FRAC_PI_2) * acc,
            _ => acc,
        });
        SwapFactors { a: rec.site_unitary(1), b: rec.site_unitary(2), c }
    })
}

/// Swap of spins `j` and `j + 1` on an `n`-spin chain, with its byproduct.
pub fn swap_pair(n: usize, j: usize) -> Result<PulseSequence> {
    check_n(n, 2)?;
    if j == 0 || j >= n {
        return Err(Error::SiteOutOfRange { site: j + 1, n });
    }
    let steps = SWAP_WORD.iter().flat_map(|g| gen_steps(*g, j)).collect();
    let f = swap_factors();
    let sites = (1..=n).map(|s| {
        let u = if s == j {
            f.a
        } else if s == j + 1 {
            f.b
        } else {
            f.c
        };
        (s, u)
    });
    Ok(PulseSequence::new(n, steps).with_byproduct(ByproductRecord::from_site_unitaries(sites, 0.0)))
}

/// Swap of the first two qubits of a block of `m` spins at the chain head.
pub fn swap12_block(m: usize) -> Result<PulseSequence> {
    swap_pair(m, 1)
}

/// Swap of qubits 2 and 3 of a block of `m >= 3` spins at the chain head.
pub fn swap23_block(m: usize) -> Result<PulseSequence> {
    check_n(m, 3)?;
    swap_pair(m, 2)
}

/// `perm`, then `edge_gate`, then `perm` undone. The spurious local gates of
/// the permutation cancel against its reversal.
pub fn sandwich_correct(perm: &PulseSequence, edge_gate: &Primitive) -> Result<PulseSequence> {
    if !matches!(edge_gate, Primitive::EdgeRot { .. }) {
        return Err(Error::InvalidArgument(format!("expected an edge rotation, got {}", edge_gate.kind_name())));
    }
    let mut seq = PulseSequence::new(perm.n, perm.steps.clone());
    seq.push(edge_gate.clone());
    Ok(seq.then(&perm.reversed()?).with_byproduct(ByproductRecord::identity()))
}

/// The same operation on a block anchored at the chain tail.
pub fn tail_variant(seq: &PulseSequence) -> PulseSequence {
    seq.mirrored()
}

/// Generators for `oracle::word_search` on an `m`-spin block.
pub fn swap_word_generators(m: usize) -> Result<Vec<(String, linalg::Mat)>> {
    SwapGen::ALL
        .iter()
        .map(|g| Ok((g.name().to_string(), oracle::unitary_of(&PulseSequence::new(m, gen_steps(*g, 1)))?)))
        .collect()
}

/// Re-derives the swap word by breadth-first search.
pub fn discover_swap_word(m: usize, max_len: usize) -> Result<Vec<SwapGen>> {
    let gens = swap_word_generators(m)?;
    let (word, _) = oracle::word_search(&gens, &oracle::swap_sites(m, 1, 2), m, max_len)?;
    Ok(word.into_iter().map(|i| SwapGen::ALL[i]).collect())
}

/// `exp(-i pi/4 X1 Z2)` duration used by `u2_at`, exposed for tests.
pub const U2_ANGLE: f64 = FRAC_PI_4;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, Mat};
    use crate::model::validate_sequence;

    fn unitary(seq: &PulseSequence) -> Mat {
        oracle::unitary_of(seq).unwrap()
    }

    fn two_body(n: usize, j: usize, a: PauliAxis, b: PauliAxis) -> Mat {
        let mut ops = vec![Mat2::identity(); n];
        ops[j - 1] = linalg::pauli(a);
        ops[j] = linalg::pauli(b);
        let p = oracle::kron_all(&ops);
        let id = Mat::identity(1 << n, 1 << n);
        id * c(U2_ANGLE.cos()) - p * crate::linalg::C64::new(0.0, U2_ANGLE.sin())
    }

    #[test]
    fn cz_synthesis_small() {
        for n in 2..=4 {
            let seq = synth_cz_layer(n, &CouplingProfile::uniform(n, 1.3)).unwrap();
            let cz = oracle::primitive_matrix(&Primitive::CZLayer, n).unwrap();
            assert!(oracle::equal_phase(&unitary(&seq), &cz, 1e-10), "n = {n}");
            assert!(seq.global_control_compliant);
        }
        assert!(synth_cz_layer(1, &CouplingProfile::uniform(1, 1.0)).is_err());
        assert!(synth_cz_layer(3, &CouplingProfile::new(vec![1.0, 2.0])).is_err());
    }

    #[test]
    fn refocus_durations() {
        let seq = partial_refocus(&CouplingProfile::new(vec![2.0, 1.0]), 1.0).unwrap();
        let Primitive::IsingEvolve { duration: t1, .. } = seq.steps[0] else { panic!() };
        let Primitive::IsingEvolve { duration: t2, .. } = seq.steps[2] else { panic!() };
        assert!((t1 - 0.75).abs() < 1e-15 && (t2 - 0.25).abs() < 1e-15);
        assert_eq!(partial_refocus(&CouplingProfile::new(vec![1.0, 1.0]), 1.0).unwrap().len(), 1);
        assert!(partial_refocus(&CouplingProfile::new(vec![1.0, 2.0]), 1.0).is_err());
    }

    #[test]
    fn refocus_three_to_one() {
        let cp = CouplingProfile::new(vec![3.0, 1.0]);
        let seq = partial_refocus(&cp, 1.0).unwrap();
        let Primitive::IsingEvolve { duration: t1, .. } = seq.steps[0] else { panic!() };
        assert!((t1 - 2.0 / 3.0).abs() < 1e-15);
        let want = Primitive::IsingEvolve { duration: 1.0, couplings: CouplingProfile::uniform(3, 1.0) };
        let want = oracle::primitive_matrix(&want, 3).unwrap();
        assert!(oracle::equal_phase(&unitary(&seq), &want, 1e-12));
    }

    #[test]
    fn mirror_two_spins_is_swap() {
        let seq = mirror_cycle(2).unwrap();
        assert_eq!(seq.len(), 6);
        assert!(crate::linalg::max_abs_diff(&unitary(&seq), &oracle::swap_matrix()) < 1e-12);
    }

    #[test]
    fn mirror_pauli_map_reverses_sites() {
        let seq = mirror_cycle(5).unwrap();
        let map = &seq.byproduct.as_ref().unwrap().pauli_map;
        assert_eq!(map.len(), 15);
        assert!(map.iter().all(|im| im.image_site == 6 - im.site));
    }

    #[test]
    fn echo_around_cz_is_local_z() {
        let x1 = Primitive::EdgeRot { end: End::Head, axis: PauliAxis::X, angle: PI };
        let seq = PulseSequence::new(2, vec![Primitive::CZLayer, x1.clone(), Primitive::CZLayer, x1]);
        let z2 = oracle::on_site(2, 2, &linalg::pauli(PauliAxis::Z));
        assert!(oracle::equal_phase(&unitary(&seq), &z2, 1e-12));
    }

    #[test]
    fn freeze_three_spins_exact() {
        for end in [End::Head, End::Tail] {
            let a = unitary(&freeze_step(3, end).unwrap());
            let b = unitary(&freeze_step_masked(3, end).unwrap());
            assert!(oracle::equal_phase(&a, &b, 1e-10));
        }
    }

    #[test]
    fn freeze_byproduct_accounts_for_difference() {
        for n in 4..=5 {
            let echo = freeze_step(n, End::Head).unwrap();
            let masked = unitary(&freeze_step_masked(n, End::Head).unwrap());
            let b = oracle::byproduct_matrix(echo.byproduct.as_ref().unwrap(), n);
            assert!(oracle::equal_phase(&unitary(&echo), &(b * masked), 1e-10));
        }
    }

    #[test]
    fn inter_block_cz_on_buffer_subspace() {
        let seq = inter_block_cz().unwrap();
        assert!(seq.global_control_compliant);
        let u = unitary(&seq);
        let want = oracle::cz_between(3, 1, 3) * oracle::cz_between(3, 2, 3);
        assert!(oracle::equal_phase(&u, &want, 1e-10));
    }

    #[test]
    fn nested_u2_is_two_body() {
        for n in 2..=4 {
            for j in 1..n {
                let u = unitary(&PulseSequence::new(n, u2_at(j)));
                assert!(oracle::equal_phase(&u, &two_body(n, j, PauliAxis::X, PauliAxis::Z), 1e-10));
                let u = unitary(&PulseSequence::new(n, u1_at(j)));
                assert!(oracle::equal_phase(&u, &two_body(n, j, PauliAxis::Z, PauliAxis::X), 1e-10));
            }
        }
    }

    #[test]
    fn swap_byproducts_verify() {
        for n in 2..=5 {
            for j in 1..n {
                let seq = swap_pair(n, j).unwrap();
                let b = oracle::byproduct_matrix(seq.byproduct.as_ref().unwrap(), n);
                let want = b * oracle::swap_sites(n, j, j + 1);
                assert!(oracle::equal_phase(&unitary(&seq), &want, 1e-9), "n = {n}, j = {j}");
            }
        }
    }

    #[test]
    fn swap_word_head_factor_is_trivial() {
        let f = swap_factors();
        assert!(linalg::rotations_of(&f.a).is_empty());
    }

    #[test]
    fn frozen_word_matches_search() {
        assert_eq!(discover_swap_word(2, 6).unwrap(), SWAP_WORD.to_vec());
        assert_eq!(discover_swap_word(3, 6).unwrap(), SWAP_WORD.to_vec());
    }

    #[test]
    fn sandwich_empty_is_edge_gate() {
        let g = Primitive::EdgeRot { end: End::Head, axis: PauliAxis::Y, angle: 0.7 };
        let seq = sandwich_correct(&PulseSequence::empty(3), &g).unwrap();
        assert_eq!(seq.steps, vec![g]);
        assert!(sandwich_correct(&PulseSequence::empty(3), &Primitive::GlobalH).is_err());
    }

    #[test]
    fn tail_variant_involution() {
        let s = swap12_block(3).unwrap();
        let t = tail_variant(&s);
        assert_eq!(tail_variant(&t), s);
        assert_eq!(t.global_control_compliant, s.global_control_compliant);
        assert!(validate_sequence(&t).is_clean());
    }
}
