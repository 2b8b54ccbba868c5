//! Compilation of logical circuits on block layouts into global-control
//! pulse sequences, cost accounting, and the SWAP-network baseline.
//!
//! Every gate is compiled as route, act at the edge, unwind. Routing swaps
//! adjacent spins with the swap word, which leaves local gates behind; the
//! router tracks them so the edge action can be conjugated into the right
//! frame, and the unwinding cancels them exactly.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::linalg::{self, Mat2};
use crate::model::{
    validate_sequence, BlockLayout, ByproductRecord, CostReport, End, LogicalCircuit, LogicalGate, PauliAxis,
    Primitive, PulseSequence,
};
use crate::protocol;

/// `ceil(n_logical / M)` blocks of `M`.
pub fn make_layout(n_logical: usize, m: usize) -> Result<BlockLayout> {
    if n_logical == 0 {
        return Err(Error::InvalidArgument("layout needs at least one logical qubit".into()));
    }
    if m == 0 {
        return Err(Error::InvalidArgument("block size must be at least 1".into()));
    }
    BlockLayout::new(m, n_logical.div_ceil(m))
}

/// Head-anchored routing state. `occupant[s - 1]` is the starting site of
/// the spin now at `s`; the physical state is `(x) locals` applied to the
/// permuted logical state.
struct Router {
    n: usize,
    steps: Vec<Primitive>,
    locals: Vec<Mat2>,
    occupant: Vec<usize>,
}

impl Router {
    fn new(n: usize) -> Self {
        Self { n, steps: Vec::new(), locals: vec![Mat2::identity(); n], occupant: (1..=n).collect() }
    }

    fn site_of(&self, start: usize) -> usize {
        self.occupant.iter().position(|&o| o == start).expect("tracked spin") + 1
    }

    fn swap(&mut self, j: usize) {
        let f = protocol::swap_factors();
        for g in protocol::SWAP_WORD {
            self.steps.extend(protocol::gen_steps(g, j));
        }
        let (lj, lk) = (self.locals[j - 1], self.locals[j]);
        for (i, l) in self.locals.iter_mut().enumerate() {
            if i + 1 != j && i + 1 != j + 1 {
                *l = f.c * *l;
            }
        }
        self.locals[j - 1] = f.a * lk;
        self.locals[j] = f.b * lj;
        self.occupant.swap(j - 1, j);
    }

    /// Moves the spin that started at `start` down to `site`.
    fn bring(&mut self, start: usize, site: usize) {
        let mut s = self.site_of(start);
        while s > site {
            self.swap(s - 1);
            s -= 1;
        }
    }

    fn emit_edge(&mut self, u: &Mat2) {
        self.steps.extend(protocol::edge_steps(End::Head, u));
    }

    fn emit_global(&mut self, u: &Mat2) {
        self.steps.extend(protocol::global_steps(u));
    }

    /// Appends the inverse of everything emitted so far, which restores the
    /// permutation and clears every tracked local.
    fn finish(self, routed: usize) -> Result<Vec<Primitive>> {
        let forward = PulseSequence::new(self.n, self.steps[..routed].to_vec());
        let mut steps = self.steps;
        steps.extend(forward.reversed()?.steps);
        Ok(steps)
    }
}

fn gate_2x2(gate: &LogicalGate) -> Option<Mat2> {
    Some(match *gate {
        LogicalGate::H { .. } => linalg::hadamard(),
        LogicalGate::RotZ { angle, .. } => linalg::rotation(PauliAxis::Z, angle),
        LogicalGate::RotX { angle, .. } => linalg::rotation(PauliAxis::X, angle),
        _ => return None,
    })
}

/// Single-spin `u` on the spin at `site`, routed to the head.
fn single_head(n: usize, site: usize, u: &Mat2) -> Result<Vec<Primitive>> {
    let mut r = Router::new(n);
    r.bring(site, 1);
    let routed = r.steps.len();
    let l = r.locals[0];
    r.emit_edge(&(l * u * l.adjoint()));
    r.finish(routed)
}

/// Runs a head-anchored builder on the site-reversed chain and mirrors the
/// result back.
fn via_tail(n: usize, build: impl FnOnce(&dyn Fn(usize) -> usize) -> Result<Vec<Primitive>>) -> Result<Vec<Primitive>> {
    let flip = move |s: usize| n + 1 - s;
    let steps = build(&flip)?;
    Ok(PulseSequence::new(n, steps).mirrored().steps)
}

/// Nearer chain edge for `site`, head on ties.
pub fn nearer_end(n: usize, site: usize) -> End {
    if site - 1 <= n - site {
        End::Head
    } else {
        End::Tail
    }
}

fn single(n: usize, site: usize, u: &Mat2) -> Result<Vec<Primitive>> {
    match nearer_end(n, site) {
        End::Head => single_head(n, site, u),
        End::Tail => via_tail(n, |f| single_head(n, f(site), u)),
    }
}

/// `exp(i pi/4 Z_x Z_y) Rz_x(pi/2)` with both spins routed to the head, `x`
/// first. The coupling is `U2` rotated into the tracked frames: a global
/// rotation aligns site 2's frame with `Z` and an edge rotation aligns
/// site 1's with `-X`.
fn zz_head(n: usize, x: usize, y: usize) -> Result<Vec<Primitive>> {
    let mut r = Router::new(n);
    r.bring(x, 1);
    let y_site = r.site_of(y);
    r.bring(y, 2);
    debug_assert!(y_site >= 2);
    let routed = r.steps.len();
    let (l1, l2) = (r.locals[0], r.locals[1]);
    let z = linalg::pauli(PauliAxis::Z);
    let v = linalg::z_to_axis(linalg::bloch_of(&(l2 * z * l2.adjoint())));
    let m1 = linalg::bloch_of(&(v.adjoint() * l1 * z * l1.adjoint() * v)).map(|c| -c);
    let e = linalg::x_to_axis(m1);
    r.emit_global(&v.adjoint());
    r.emit_edge(&e.adjoint());
    r.steps.extend(protocol::u2_at(1));
    r.emit_edge(&e);
    r.emit_global(&v);
    r.emit_edge(&(l1 * linalg::rotation(PauliAxis::Z, FRAC_PI_2) * l1.adjoint()));
    r.finish(routed)
}

/// CZ between the spins at `a` and `b`: a routed `ZZ` coupling with one
/// edge Z correction, then the other Z correction compiled on its own.
fn cz(n: usize, a: usize, b: usize) -> Result<Vec<Primitive>> {
    let mut best: Option<Vec<Primitive>> = None;
    for end in [End::Head, End::Tail] {
        for (x, y) in [(a, b), (b, a)] {
            let mut steps = match end {
                End::Head => zz_head(n, x, y)?,
                End::Tail => via_tail(n, |f| zz_head(n, f(x), f(y)))?,
            };
            steps.extend(single(n, y, &linalg::rotation(PauliAxis::Z, FRAC_PI_2))?);
            if best.as_ref().is_none_or(|b| steps.len() < b.len()) {
                best = Some(steps);
            }
        }
    }
    Ok(best.expect("four candidates"))
}

/// The three-spin layout with one qubit at each end and a buffer between.
fn is_demo_layout(layout: &BlockLayout) -> bool {
    layout.m == 1 && layout.b == 2
}

fn compile_cz(layout: &BlockLayout, q1: usize, q2: usize) -> Result<Vec<Primitive>> {
    if is_demo_layout(layout) {
        return Ok(protocol::inter_block_cz()?.steps);
    }
    cz(layout.n, layout.site_of(q1), layout.site_of(q2))
}

fn compile_gate(layout: &BlockLayout, gate: &LogicalGate) -> Result<Vec<Primitive>> {
    let n = layout.n;
    match *gate {
        LogicalGate::H { q } | LogicalGate::RotZ { q, .. } | LogicalGate::RotX { q, .. } => {
            single(n, layout.site_of(q), &gate_2x2(gate).expect("single-qubit gate"))
        }
        LogicalGate::CZ { q1, q2 } => compile_cz(layout, q1, q2),
        LogicalGate::CNOT { control, target } => {
            let h = single(n, layout.site_of(target), &linalg::hadamard())?;
            let mut steps = h.clone();
            steps.extend(compile_cz(layout, control, target)?);
            steps.extend(h);
            Ok(steps)
        }
    }
}

/// Compiles `circuit` onto `layout`. The result acts as the circuit on the
/// logical qubits (idle qubit slots untouched) while buffers hold `|0>`,
/// with no residual byproduct.
pub fn compile(circuit: &LogicalCircuit, layout: &BlockLayout) -> Result<PulseSequence> {
    circuit.validate()?;
    layout.validate()?;
    if circuit.n_logical > layout.capacity() {
        return Err(Error::CapacityExceeded { needed: circuit.n_logical, capacity: layout.capacity() });
    }
    let mut seq = PulseSequence::empty(layout.n);
    for g in &circuit.gates {
        seq.extend(compile_gate(layout, g)?);
    }
    Ok(seq.with_byproduct(ByproductRecord::identity()))
}

/// Primitive counts, selective-pulse counts and storage density.
pub fn cost(seq: &PulseSequence, layout: &BlockLayout) -> CostReport {
    let n = seq.n;
    let mut counts = BTreeMap::new();
    for p in &seq.steps {
        *counts.entry(p.kind_name().to_string()).or_insert(0) += 1;
    }
    let edge = seq.steps.iter().filter(|p| p.is_edge_selective(n)).count();
    let interior = seq
        .steps
        .iter()
        .filter(|p| p.addressed_site(n).is_some() && !p.is_edge_selective(n))
        .count();
    let mut pairs = 0;
    let mut i = 0;
    while i + 1 < seq.steps.len() {
        if seq.steps[i] == Primitive::CZLayer && seq.steps[i + 1] == Primitive::GlobalH {
            pairs += 1;
            i += 2;
        } else {
            i += 1;
        }
    }
    CostReport {
        counts,
        total_steps: seq.len(),
        edge_selective_pulses: edge,
        interior_selective_pulses: interior,
        mirror_cycles: pairs / protocol::mirror_period(n.max(1)),
        storage_density: layout.density(),
        compliant: validate_sequence(seq).is_clean(),
    }
}

/// SWAP of spins `j`, `j + 1` as three CNOTs, each a CZ between Hadamards on
/// the target.
fn swap_gates(j: usize) -> [Primitive; 9] {
    let (a, b) = (j, j + 1);
    [
        Primitive::SiteH { site: b },
        Primitive::BondCZ { site: j },
        Primitive::SiteH { site: b },
        Primitive::SiteH { site: a },
        Primitive::BondCZ { site: j },
        Primitive::SiteH { site: a },
        Primitive::SiteH { site: b },
        Primitive::BondCZ { site: j },
        Primitive::SiteH { site: b },
    ]
}

/// Chain reversal by odd-even transposition with individually addressed
/// spins and bonds. Not implementable under global control.
pub fn swap_network_mirror(n: usize) -> Result<PulseSequence> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 spins, got {n}")));
    }
    // dest[s - 1]: where the spin now at s must end up
    let mut dest: Vec<usize> = (1..=n).rev().collect();
    let mut steps = Vec::new();
    for round in 0..n {
        for j in (1 + round % 2..n).step_by(2) {
            if dest[j - 1] > dest[j] {
                steps.extend(swap_gates(j));
                dest.swap(j - 1, j);
            }
        }
    }
    Ok(PulseSequence::new(n, steps))
}
