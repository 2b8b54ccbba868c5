//! Dense reference unitaries built from Kronecker products, independent of
//! the simulator's bit-level kernels, plus the local-equivalence and
//! word-search machinery used to certify constructions.

use std::collections::HashSet;

use nalgebra::{DVector, Matrix4};
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{self, c, Mat, Mat2, C64, ONE, ZERO};
use crate::model::{
    BlockLayout, ByproductRecord, End, LogicalCircuit, LogicalGate, PauliAxis, Primitive, PulseSequence,
};

/// Largest chain for which full unitaries are built.
pub const MAX_UNITARY_SPINS: usize = 10;

/// Relative size of the second operator-Schmidt coefficient above which an
/// operator is declared non-local.
pub const FACTOR_TOL: f64 = 1e-6;

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("chain must have at least one spin".into()));
    }
    if n > MAX_UNITARY_SPINS {
        return Err(Error::CapExceeded { what: "unitary", n, cap: MAX_UNITARY_SPINS });
    }
    Ok(())
}

fn eye(dim: usize) -> Mat {
    Mat::identity(dim, dim)
}

/// `ops[0] (x) ops[1] (x) ...`, site 1 first.
pub fn kron_all(ops: &[Mat2]) -> Mat {
    ops.iter().fold(eye(1), |acc, m| linalg::kron(&acc, &linalg::to_dyn(m)))
}

/// `u` on `site`, identity elsewhere.
pub fn on_site(n: usize, site: usize, u: &Mat2) -> Mat {
    let mut ops = vec![Mat2::identity(); n];
    ops[site - 1] = *u;
    kron_all(&ops)
}

fn projector(bit: usize) -> Mat2 {
    if bit == 0 {
        Mat2::new(ONE, ZERO, ZERO, ZERO)
    } else {
        Mat2::new(ZERO, ZERO, ZERO, ONE)
    }
}

/// Controlled-`u` between arbitrary sites.
fn controlled(n: usize, control: usize, target: usize, u: &Mat2) -> Mat {
    let mut idle = vec![Mat2::identity(); n];
    idle[control - 1] = projector(0);
    let mut active = vec![Mat2::identity(); n];
    active[control - 1] = projector(1);
    active[target - 1] = *u;
    kron_all(&idle) + kron_all(&active)
}

pub fn cz_between(n: usize, a: usize, b: usize) -> Mat {
    controlled(n, a, b, &linalg::pauli(PauliAxis::Z))
}

fn cz_bonds(n: usize, bonds: impl Iterator<Item = usize>) -> Mat {
    bonds.fold(eye(1 << n), |acc, j| cz_between(n, j, j + 1) * acc)
}

/// `sum_j J_j Z_j Z_{j+1}` as a dense matrix.
fn ising_hamiltonian(n: usize, j: &[f64]) -> Mat {
    let z = linalg::pauli(PauliAxis::Z);
    let mut h = Mat::zeros(1 << n, 1 << n);
    for (k, jk) in j.iter().enumerate() {
        let mut ops = vec![Mat2::identity(); n];
        ops[k] = z;
        ops[k + 1] = z;
        h += kron_all(&ops) * c(*jk);
    }
    h
}

pub fn primitive_matrix(prim: &Primitive, n: usize) -> Result<Mat> {
    check_n(n)?;
    let bad = prim.check(n);
    if bad.iter().any(|v| v.is_structural()) {
        return Err(Error::InvalidArgument(format!("primitive {} invalid for n = {n}", prim.kind_name())));
    }
    Ok(match prim {
        Primitive::GlobalH => kron_all(&vec![linalg::hadamard(); n]),
        Primitive::GlobalRot { axis, angle } => kron_all(&vec![linalg::rotation(*axis, *angle); n]),
        Primitive::EdgeRot { end, axis, angle } => on_site(n, end.site(n), &linalg::rotation(*axis, *angle)),
        Primitive::SiteRot { site, axis, angle } => on_site(n, *site, &linalg::rotation(*axis, *angle)),
        Primitive::SiteH { site } => on_site(n, *site, &linalg::hadamard()),
        Primitive::CZLayer => cz_bonds(n, 1..n),
        Primitive::MaskedCZLayer { excluded_bond } => {
            let skip = if *excluded_bond == End::Head { 1 } else { n - 1 };
            cz_bonds(n, (1..n).filter(|&j| j != skip))
        }
        Primitive::BondCZ { site } => cz_between(n, *site, site + 1),
        Primitive::IsingEvolve { duration, couplings } => {
            // the Hamiltonian is diagonal, so exponentiate entrywise
            let h = ising_hamiltonian(n, &couplings.j);
            Mat::from_diagonal(&DVector::from_fn(1 << n, |i, _| C64::from_polar(1.0, -duration * h[(i, i)].re)))
        }
    })
}

/// Net unitary of a sequence, first step rightmost.
pub fn unitary_of(seq: &PulseSequence) -> Result<Mat> {
    check_n(seq.n)?;
    seq.steps
        .iter()
        .try_fold(eye(1 << seq.n), |acc, p| Ok(primitive_matrix(p, seq.n)? * acc))
}

/// Phase `e^{i phi}` aligning `v` to `u`, read off the largest-magnitude
/// entry of `v`.
pub fn alignment_phase(u: &Mat, v: &Mat) -> C64 {
    let Some((k, _)) = v.iter().enumerate().max_by(|a, b| a.1.norm().total_cmp(&b.1.norm())) else {
        return ONE;
    };
    let r = u.as_slice()[k] / v.as_slice()[k];
    if r.norm() > 0.0 && r.is_finite() {
        r / r.norm()
    } else {
        ONE
    }
}

/// `max |u - e^{i phi} v|` at the aligned phase.
pub fn phase_distance(u: &Mat, v: &Mat) -> f64 {
    if u.shape() != v.shape() {
        return f64::INFINITY;
    }
    linalg::max_abs_diff(u, &(v * alignment_phase(u, v)))
}

/// `u = e^{i phi} v` within `tol`.
pub fn equal_phase(u: &Mat, v: &Mat, tol: f64) -> bool {
    phase_distance(u, v) <= tol
}

fn normalize_su2(m: &Mat2) -> Mat2 {
    let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    m / det.sqrt()
}

/// Splits `m` as `phase * (u_1 (x) ... (x) u_n)` with each `u_k` in SU(2).
pub fn factor_local(m: &Mat, n: usize) -> Result<(C64, Vec<Mat2>)> {
    let dim = 1usize << n;
    if m.shape() != (dim, dim) {
        return Err(Error::DimensionMismatch { expected: n, found: (m.nrows().max(1)).ilog2() as usize });
    }
    let mut rest = m.clone();
    let mut factors = Vec::with_capacity(n);
    for k in (1..n).rev() {
        let sub = 1usize << k;
        // rows of R indexed by (a, b) of the leading spin, columns by the rest
        let r = |ab: usize, col: usize| {
            let (a, b) = (ab >> 1, ab & 1);
            rest[(a * sub + col / sub, b * sub + col % sub)]
        };
        let cols = sub * sub;
        let gram = Matrix4::from_fn(|p, q| (0..cols).map(|col| r(p, col) * r(q, col).conj()).sum::<C64>());
        let eig = gram.symmetric_eigen();
        let mut order: Vec<usize> = (0..4).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        let (s1, s2) = (eig.eigenvalues[order[0]].max(0.0), eig.eigenvalues[order[1]].max(0.0));
        if s1 <= 0.0 || (s2 / s1).sqrt() > FACTOR_TOL {
            return Err(Error::NotFactorizable { sigma2: (s2.max(0.0) / s1.max(1e-300)).sqrt() });
        }
        let u = eig.eigenvectors.column(order[0]).into_owned();
        let lead = Mat2::new(u[0], u[1], u[2], u[3]);
        // project the rest onto u: rest = sum_ab conj(u_ab) R_ab
        let mut next = Mat::zeros(sub, sub);
        for ab in 0..4 {
            let w = u[ab].conj();
            if w.norm() == 0.0 {
                continue;
            }
            for col in 0..cols {
                next[(col / sub, col % sub)] += w * r(ab, col);
            }
        }
        factors.push(lead);
        rest = next;
    }
    factors.push(linalg::to_mat2(&rest));
    let factors: Vec<Mat2> = factors.iter().map(normalize_su2).collect();
    let recon = kron_all(&factors);
    let phase = alignment_phase(m, &recon);
    let err = linalg::max_abs_diff(m, &(recon * phase));
    if err > 1e-6 * (1.0 + m.norm()) {
        return Err(Error::NotFactorizable { sigma2: err });
    }
    Ok((phase, factors))
}

/// The byproduct `B` with `u = B * target` if `B` is a product of
/// single-spin unitaries.
pub fn equiv_up_to_local(u: &Mat, target: &Mat, n: usize) -> Result<ByproductRecord> {
    let b = u * target.adjoint();
    let (_, factors) = factor_local(&b, n)?;
    let mut rec = ByproductRecord::from_site_unitaries(factors.into_iter().enumerate().map(|(i, f)| (i + 1, f)), 0.0);
    let phase = alignment_phase(&b, &byproduct_matrix(&rec, n));
    rec.global_phase = phase.arg();
    Ok(rec)
}

pub fn byproduct_matrix(rec: &ByproductRecord, n: usize) -> Mat {
    let sites: Vec<Mat2> = (1..=n).map(|s| rec.site_unitary(s)).collect();
    kron_all(&sites) * C64::from_polar(1.0, rec.global_phase)
}

/// `P |b_1 ... b_n> = |b_n ... b_1>`.
pub fn reversal_permutation(n: usize) -> Mat {
    let dim = 1usize << n;
    let mut p = Mat::zeros(dim, dim);
    for b in 0..dim {
        let rev = (0..n).filter(|i| b >> i & 1 == 1).map(|i| 1usize << (n - 1 - i)).sum::<usize>();
        p[(rev, b)] = ONE;
    }
    p
}

/// Exchange of sites `a` and `b`.
pub fn swap_sites(n: usize, a: usize, b: usize) -> Mat {
    let dim = 1usize << n;
    let (ma, mb) = (1usize << (n - a), 1usize << (n - b));
    let mut p = Mat::zeros(dim, dim);
    for x in 0..dim {
        let (ba, bb) = (x & ma != 0, x & mb != 0);
        let y = if ba != bb { x ^ ma ^ mb } else { x };
        p[(y, x)] = ONE;
    }
    p
}

pub fn swap_matrix() -> Mat {
    swap_sites(2, 1, 2)
}

/// Smallest `k >= 1` such that `k` repetitions of `[CZLayer, GlobalH]` equal
/// the reversal permutation up to single-spin unitaries.
pub fn find_mirror_period(n: usize, max_k: usize) -> Result<(usize, ByproductRecord)> {
    check_n(n)?;
    let step = unitary_of(&PulseSequence::new(n, vec![Primitive::CZLayer, Primitive::GlobalH]))?;
    let target = reversal_permutation(n);
    let mut w = eye(1 << n);
    for k in 1..=max_k {
        w = &step * w;
        if let Ok(rec) = equiv_up_to_local(&w, &target, n) {
            return Ok((k, rec));
        }
    }
    Err(Error::NoPeriodFound { n, max_k })
}

/// Hash key of `m` up to global phase.
fn phase_key(m: &Mat) -> Vec<i64> {
    let pivot = m.iter().copied().find(|x| x.norm() > 1e-3).unwrap_or(ONE);
    let ph = pivot.conj() / pivot.norm();
    m.iter()
        .flat_map(|x| {
            let y = x * ph;
            [(y.re * 1e7).round() as i64, (y.im * 1e7).round() as i64]
        })
        .collect()
}

/// Breadth-first search for the shortest word over `generators` (given as
/// `(label, unitary)`) whose product equals `target` up to single-spin
/// unitaries. Words are in time order and ties go to the
/// lexicographically first word by generator index.
pub fn word_search(
    generators: &[(String, Mat)],
    target: &Mat,
    n: usize,
    max_len: usize,
) -> Result<(Vec<usize>, ByproductRecord)> {
    let dim = 1usize << n;
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut frontier: Vec<(Vec<usize>, Mat)> = vec![(Vec::new(), eye(dim))];
    seen.insert(phase_key(&frontier[0].1));
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(frontier.len() * generators.len());
        for (word, m) in &frontier {
            for (g, (_, gm)) in generators.iter().enumerate() {
                let prod = gm * m;
                if seen.insert(phase_key(&prod)) {
                    let mut w = word.clone();
                    w.push(g);
                    next.push((w, prod));
                }
            }
        }
        next.sort_by(|a, b| a.0.cmp(&b.0));
        if let Some(i) = next.par_iter().position_first(|(_, m)| equiv_up_to_local(m, target, n).is_ok()) {
            let (word, m) = &next[i];
            return Ok((word.clone(), equiv_up_to_local(m, target, n)?));
        }
        frontier = next;
    }
    Err(Error::WordNotFound { max_len })
}

fn gate_matrix(n: usize, gate: &LogicalGate) -> Mat {
    match *gate {
        LogicalGate::H { q } => on_site(n, q, &linalg::hadamard()),
        LogicalGate::RotZ { q, angle } => on_site(n, q, &linalg::rotation(PauliAxis::Z, angle)),
        LogicalGate::RotX { q, angle } => on_site(n, q, &linalg::rotation(PauliAxis::X, angle)),
        LogicalGate::CZ { q1, q2 } => cz_between(n, q1, q2),
        LogicalGate::CNOT { control, target } => controlled(n, control, target, &linalg::pauli(PauliAxis::X)),
    }
}

/// Ideal unitary of a logical circuit on `n_logical` qubits.
pub fn circuit_unitary(circuit: &LogicalCircuit) -> Result<Mat> {
    circuit.validate()?;
    check_n(circuit.n_logical)?;
    Ok(circuit
        .gates
        .iter()
        .fold(eye(1 << circuit.n_logical), |acc, g| gate_matrix(circuit.n_logical, g) * acc))
}

/// Physical basis index of each logical basis state (all layout qubits,
/// buffers in `|0>`).
pub fn logical_basis_indices(layout: &BlockLayout) -> Vec<usize> {
    let k = layout.capacity();
    (0..1usize << k)
        .map(|x| {
            (1..=k)
                .filter(|q| x >> (k - q) & 1 == 1)
                .map(|q| 1usize << (layout.n - layout.site_of(q)))
                .sum()
        })
        .collect()
}

/// Block of a physical operator acting on the logical subspace.
pub fn restrict(u: &Mat, indices: &[usize]) -> Mat {
    Mat::from_fn(indices.len(), indices.len(), |r, col| u[(indices[r], indices[col])])
}

/// `u (x) I` on `extra` trailing idle qubits.
pub fn pad_identity(u: &Mat, extra: usize) -> Mat {
    linalg::kron(u, &eye(1 << extra))
}

/// Haar-random unitary via QR of a complex Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Mat {
    let g = Mat::from_fn(dim, dim, |_, _| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..dim {
        let d = r[(j, j)];
        let ph = if d.norm() > 0.0 { d / d.norm() } else { ONE };
        for i in 0..dim {
            q[(i, j)] *= ph;
        }
    }
    q
}

pub fn random_su2<R: Rng + ?Sized>(rng: &mut R) -> Mat2 {
    normalize_su2(&linalg::to_mat2(&random_unitary(2, rng)))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use rand::SeedableRng;

    use super::*;
    use crate::model::CouplingProfile;

    #[test]
    fn cz_layer_is_diagonal_sign() {
        let u = primitive_matrix(&Primitive::CZLayer, 3).unwrap();
        let expect = [1.0, 1.0, 1.0, -1.0, 1.0, 1.0, -1.0, 1.0];
        for (i, e) in expect.iter().enumerate() {
            assert!((u[(i, i)] - c(*e)).norm() < 1e-15);
        }
    }

    #[test]
    fn ising_quarter_period_is_cz_up_to_local() {
        let ising = Primitive::IsingEvolve { duration: PI / 4.0, couplings: CouplingProfile::uniform(2, 1.0) };
        let u = primitive_matrix(&ising, 2).unwrap();
        let cz = primitive_matrix(&Primitive::CZLayer, 2).unwrap();
        assert!(equiv_up_to_local(&u, &cz, 2).is_ok());
    }

    #[test]
    fn factor_roundtrip() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        let fs: Vec<Mat2> = (0..4).map(|_| random_su2(&mut rng)).collect();
        let m = kron_all(&fs) * C64::from_polar(1.0, 0.4);
        let (ph, got) = factor_local(&m, 4).unwrap();
        assert!(linalg::max_abs_diff(&m, &(kron_all(&got) * ph)) < 1e-10);
    }

    #[test]
    fn entangling_is_not_factorizable() {
        let cz = primitive_matrix(&Primitive::CZLayer, 2).unwrap();
        assert!(matches!(factor_local(&cz, 2), Err(Error::NotFactorizable { .. })));
    }

    #[test]
    fn byproduct_reconstructs() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        let local = kron_all(&[random_su2(&mut rng), random_su2(&mut rng), random_su2(&mut rng)]);
        let t = random_unitary(8, &mut rng);
        let u = &local * &t * C64::from_polar(1.0, -1.1);
        let rec = equiv_up_to_local(&u, &t, 3).unwrap();
        assert!(linalg::max_abs_diff(&u, &(byproduct_matrix(&rec, 3) * &t)) < 1e-9);
    }

    #[test]
    fn two_spin_mirror_is_swap() {
        let (k, rec) = find_mirror_period(2, 8).unwrap();
        assert_eq!(k, 3);
        assert!(rec.is_trivial());
        assert_eq!(reversal_permutation(2), swap_matrix());
    }

    #[test]
    fn random_unitary_is_unitary() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(1);
        let u = random_unitary(8, &mut rng);
        assert!(linalg::max_abs_diff(&(u.adjoint() * &u), &eye(8)) < 1e-12);
    }

    #[test]
    fn cnot_on_distant_sites() {
        let mut c = LogicalCircuit::new(3);
        c.push(LogicalGate::CNOT { control: 1, target: 3 });
        let u = circuit_unitary(&c).unwrap();
        assert_eq!(u[(0b101, 0b100)], ONE);
        assert_eq!(u[(0b010, 0b010)], ONE);
    }

    #[test]
    fn logical_indices_skip_buffers() {
        let l = BlockLayout::new(2, 2).unwrap();
        assert_eq!(logical_basis_indices(&l)[0b1111], 0b11011);
    }

    #[test]
    fn word_search_finds_hadamard() {
        let gens = vec![
            ("S".to_string(), on_site(1, 1, &linalg::rotation(PauliAxis::Z, PI / 2.0))),
            ("R".to_string(), on_site(1, 1, &linalg::rotation(PauliAxis::Y, PI / 2.0))),
        ];
        // any single-spin target is reached at length 1 up to local
        let (w, _) = word_search(&gens, &eye(2), 1, 3).unwrap();
        assert_eq!(w, vec![0]);
    }
}
