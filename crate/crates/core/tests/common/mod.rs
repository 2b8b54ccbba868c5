//! Reference matrices written straight from their definitions: product
//! operators element by element, diagonal operators from spin values
//! `s = 1 - 2b`. Shares nothing with the simulator kernels or the
//! Kronecker-based oracle.

#![allow(dead_code)]

use chainqc::model::{End, PauliAxis, Primitive};
use nalgebra::{DMatrix, DVector, Matrix2};
use num_complex::Complex64 as C;

pub type M = DMatrix<C>;

pub fn bit(x: usize, n: usize, site: usize) -> usize {
    (x >> (n - site)) & 1
}

fn spin(x: usize, n: usize, site: usize) -> f64 {
    1.0 - 2.0 * bit(x, n, site) as f64
}

pub fn rot(axis: PauliAxis, angle: f64) -> Matrix2<C> {
    let (s, c) = (angle / 2.0).sin_cos();
    let (c, s) = (C::new(c, 0.0), C::new(s, 0.0));
    let i = C::i();
    match axis {
        PauliAxis::X => Matrix2::new(c, -i * s, -i * s, c),
        PauliAxis::Y => Matrix2::new(c, -s, s, c),
        PauliAxis::Z => Matrix2::new(c - i * s, C::new(0.0, 0.0), C::new(0.0, 0.0), c + i * s),
    }
}

pub fn had() -> Matrix2<C> {
    let h = C::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    Matrix2::new(h, h, h, -h)
}

/// `<a| u_1 (x) ... (x) u_n |b> = prod_s <a_s|u_s|b_s>`; `None` is identity.
pub fn product(n: usize, ops: &[Option<Matrix2<C>>]) -> M {
    let dim = 1 << n;
    M::from_fn(dim, dim, |a, b| {
        let mut amp = C::new(1.0, 0.0);
        for s in 1..=n {
            let (x, y) = (bit(a, n, s), bit(b, n, s));
            amp *= match &ops[s - 1] {
                Some(u) => u[(x, y)],
                None if x == y => C::new(1.0, 0.0),
                None => return C::new(0.0, 0.0),
            };
        }
        amp
    })
}

pub fn diagonal(n: usize, f: impl Fn(usize) -> C) -> M {
    M::from_diagonal(&DVector::from_fn(1 << n, |x, _| f(x)))
}

/// `prod_{bonds} CZ`: sign flips once per bond with both spins down.
pub fn cz_bonds(n: usize, bonds: &[usize]) -> M {
    diagonal(n, |x| {
        let k = bonds.iter().filter(|&&j| bit(x, n, j) == 1 && bit(x, n, j + 1) == 1).count();
        C::new(if k % 2 == 0 { 1.0 } else { -1.0 }, 0.0)
    })
}

pub fn cz_pair(n: usize, a: usize, b: usize) -> M {
    diagonal(n, |x| C::new(if bit(x, n, a) == 1 && bit(x, n, b) == 1 { -1.0 } else { 1.0 }, 0.0))
}

pub fn ising(n: usize, j: &[f64], t: f64) -> M {
    diagonal(n, |x| {
        let e: f64 = (1..n).map(|k| j[k - 1] * spin(x, n, k) * spin(x, n, k + 1)).sum();
        C::from_polar(1.0, -t * e)
    })
}

fn at(n: usize, site: usize, u: Matrix2<C>) -> M {
    let mut ops = vec![None; n];
    ops[site - 1] = Some(u);
    product(n, &ops)
}

pub fn primitive(n: usize, p: &Primitive) -> M {
    match p {
        Primitive::GlobalH => product(n, &vec![Some(had()); n]),
        Primitive::GlobalRot { axis, angle } => product(n, &vec![Some(rot(*axis, *angle)); n]),
        Primitive::EdgeRot { end, axis, angle } => {
            at(n, if *end == End::Head { 1 } else { n }, rot(*axis, *angle))
        }
        Primitive::SiteRot { site, axis, angle } => at(n, *site, rot(*axis, *angle)),
        Primitive::SiteH { site } => at(n, *site, had()),
        Primitive::CZLayer => cz_bonds(n, &(1..n).collect::<Vec<_>>()),
        Primitive::MaskedCZLayer { excluded_bond } => {
            let skip = if *excluded_bond == End::Head { 1 } else { n - 1 };
            cz_bonds(n, &(1..n).filter(|&j| j != skip).collect::<Vec<_>>())
        }
        Primitive::BondCZ { site } => cz_bonds(n, &[*site]),
        Primitive::IsingEvolve { duration, couplings } => ising(n, &couplings.j, *duration),
    }
}

pub fn unitary(n: usize, steps: &[Primitive]) -> M {
    steps.iter().fold(M::identity(1 << n, 1 << n), |acc, p| primitive(n, p) * acc)
}

/// `P |b_1 ... b_n> = |b_n ... b_1>`.
pub fn reversal(n: usize) -> M {
    let dim = 1 << n;
    M::from_fn(dim, dim, |a, b| {
        let mirrored = (1..=n).all(|s| bit(a, n, s) == bit(b, n, n + 1 - s));
        C::new(if mirrored { 1.0 } else { 0.0 }, 0.0)
    })
}

/// `max |u - e^{i phi} v|` with the phase taken from the largest entry of `v`.
pub fn phase_dist(u: &M, v: &M) -> f64 {
    let (k, _) = v.iter().enumerate().max_by(|a, b| a.1.norm().total_cmp(&b.1.norm())).unwrap();
    let r = u.as_slice()[k] / v.as_slice()[k];
    let ph = r / r.norm();
    u.iter().zip(v.iter()).map(|(a, b)| (a - b * ph).norm()).fold(0.0, f64::max)
}

pub fn max_diff(u: &M, v: &M) -> f64 {
    u.iter().zip(v.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
}
