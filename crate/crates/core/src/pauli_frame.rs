//! Heisenberg-picture propagation of Pauli strings through Clifford
//! primitives (H, CZ, and rotations by multiples of pi/2).

use std::f64::consts::FRAC_PI_2;

use crate::model::{End, PauliAxis, PauliImage, Primitive, PulseSequence};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum P1 {
    I,
    X,
    Y,
    Z,
}

impl P1 {
    fn from_axis(a: PauliAxis) -> Self {
        match a {
            PauliAxis::X => P1::X,
            PauliAxis::Y => P1::Y,
            PauliAxis::Z => P1::Z,
        }
    }

    fn axis(self) -> Option<PauliAxis> {
        match self {
            P1::I => None,
            P1::X => Some(PauliAxis::X),
            P1::Y => Some(PauliAxis::Y),
            P1::Z => Some(PauliAxis::Z),
        }
    }

    fn has_x(self) -> bool {
        matches!(self, P1::X | P1::Y)
    }

    /// `self * other = i^k * result`.
    fn mul(self, other: P1) -> (u8, P1) {
        use P1::*;
        match (self, other) {
            (I, p) | (p, I) => (0, p),
            (a, b) if a == b => (0, I),
            (X, Y) => (1, Z),
            (Y, X) => (3, Z),
            (Y, Z) => (1, X),
            (Z, Y) => (3, X),
            (Z, X) => (1, Y),
            (X, Z) => (3, Y),
            _ => unreachable!(),
        }
    }
}

/// A Hermitian Pauli string `i^phase * P_1 ... P_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PauliFrame {
    phase: u8,
    ops: Vec<P1>,
}

impl PauliFrame {
    pub fn single(n: usize, site: usize, axis: PauliAxis) -> Self {
        let mut ops = vec![P1::I; n];
        ops[site - 1] = P1::from_axis(axis);
        Self { phase: 0, ops }
    }

    /// `+1` or `-1`.
    pub fn sign(&self) -> i8 {
        if self.phase == 0 {
            1
        } else {
            -1
        }
    }

    /// Site and axis if the string acts on exactly one site.
    pub fn as_single(&self) -> Option<(usize, PauliAxis)> {
        let mut it = self.ops.iter().enumerate().filter(|(_, p)| **p != P1::I);
        let (i, p) = it.next()?;
        if it.next().is_some() {
            return None;
        }
        Some((i + 1, p.axis()?))
    }

    fn conj_h(&mut self, site: usize) {
        let p = &mut self.ops[site - 1];
        *p = match *p {
            P1::X => P1::Z,
            P1::Z => P1::X,
            P1::Y => {
                self.phase = (self.phase + 2) % 4;
                P1::Y
            }
            P1::I => P1::I,
        };
    }

    fn conj_cz(&mut self, j: usize) {
        let (a, b) = (self.ops[j - 1], self.ops[j]);
        if b.has_x() {
            let (k, r) = a.mul(P1::Z);
            self.ops[j - 1] = r;
            self.phase = (self.phase + k) % 4;
        }
        if a.has_x() {
            let (k, r) = P1::Z.mul(b);
            self.ops[j] = r;
            self.phase = (self.phase + k) % 4;
        }
    }

    /// Conjugation by a rotation through `quarter_turns * pi/2`.
    fn conj_rot(&mut self, site: usize, axis: PauliAxis, quarter_turns: i64) {
        let a = P1::from_axis(axis);
        for _ in 0..quarter_turns.rem_euclid(4) {
            let p = self.ops[site - 1];
            if p == P1::I || p == a {
                return;
            }
            // R_a(pi/2) p R_a(pi/2)^dag = -i a p
            let (k, r) = a.mul(p);
            self.ops[site - 1] = r;
            self.phase = (self.phase + k + 3) % 4;
        }
    }

    /// Propagates through one primitive, or returns `None` if it is not
    /// Clifford.
    pub fn conjugate(&mut self, prim: &Primitive) -> Option<()> {
        let n = self.ops.len();
        match prim {
            Primitive::GlobalH => (1..=n).for_each(|s| self.conj_h(s)),
            Primitive::SiteH { site } => self.conj_h(*site),
            Primitive::CZLayer => (1..n).for_each(|j| self.conj_cz(j)),
            Primitive::MaskedCZLayer { excluded_bond } => {
                let skip = match excluded_bond {
                    End::Head => 1,
                    End::Tail => n - 1,
                };
                (1..n).filter(|&j| j != skip).for_each(|j| self.conj_cz(j));
            }
            Primitive::BondCZ { site } => self.conj_cz(*site),
            Primitive::GlobalRot { axis, angle } => {
                let q = quarter_turns(*angle)?;
                (1..=n).for_each(|s| self.conj_rot(s, *axis, q));
            }
            Primitive::EdgeRot { end, axis, angle } => self.conj_rot(end.site(n), *axis, quarter_turns(*angle)?),
            Primitive::SiteRot { site, axis, angle } => self.conj_rot(*site, *axis, quarter_turns(*angle)?),
            Primitive::IsingEvolve { .. } => return None,
        }
        Some(())
    }
}

fn quarter_turns(angle: f64) -> Option<i64> {
    let q = angle / FRAC_PI_2;
    let r = q.round();
    ((q - r).abs() < 1e-9).then_some(r as i64)
}

/// Images of every single-site Pauli under a Clifford sequence, or `None` if
/// some step is not Clifford or some image is not single-site.
pub fn single_site_images(seq: &PulseSequence) -> Option<Vec<PauliImage>> {
    let mut out = Vec::with_capacity(3 * seq.n);
    for site in 1..=seq.n {
        for axis in PauliAxis::ALL {
            let mut f = PauliFrame::single(seq.n, site, axis);
            for p in &seq.steps {
                f.conjugate(p)?;
            }
            let (image_site, image_axis) = f.as_single()?;
            out.push(PauliImage { site, axis, image_site, image_axis, sign: f.sign() });
        }
    }
    Some(out)
}
