//! Small dense helpers shared by the simulator, the oracle and the protocol
//! builders: single-spin gate matrices, Kronecker products and the Z-Y-Z
//! Euler decomposition used to turn arbitrary single-spin unitaries back into
//! rotation pulses.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;

use crate::model::PauliAxis;

pub type C64 = Complex64;
pub type Mat2 = Matrix2<C64>;
pub type Mat = DMatrix<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Angles below this magnitude are dropped when emitting rotation pulses.
pub const ANGLE_EPS: f64 = 1e-12;

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn identity2() -> Mat2 {
    Mat2::identity()
}

pub fn pauli(axis: PauliAxis) -> Mat2 {
    match axis {
        PauliAxis::X => Mat2::new(ZERO, ONE, ONE, ZERO),
        PauliAxis::Y => Mat2::new(ZERO, -I, I, ZERO),
        PauliAxis::Z => Mat2::new(ONE, ZERO, ZERO, -ONE),
    }
}

pub fn hadamard() -> Mat2 {
    let h = c(FRAC_1_SQRT_2);
    Mat2::new(h, h, h, -h)
}

/// `exp(-i angle/2 sigma_axis)`.
pub fn rotation(axis: PauliAxis, angle: f64) -> Mat2 {
    let (s, co) = (angle / 2.0).sin_cos();
    Mat2::identity() * c(co) - pauli(axis) * C64::new(0.0, s)
}

pub fn kron(a: &Mat, b: &Mat) -> Mat {
    a.kronecker(b)
}

pub fn to_dyn(m: &Mat2) -> Mat {
    Mat::from_fn(2, 2, |r, col| m[(r, col)])
}

pub fn to_mat2(m: &Mat) -> Mat2 {
    debug_assert_eq!(m.shape(), (2, 2));
    Mat2::new(m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)])
}

/// Wrap an angle into `(-pi, pi]`.
pub fn wrap_angle(a: f64) -> f64 {
    let mut x = a.rem_euclid(2.0 * PI);
    if x > PI {
        x -= 2.0 * PI;
    }
    x
}

/// Euler angles `(phase, alpha, beta, gamma)` with
/// `u = e^{i phase} Rz(alpha) Ry(beta) Rz(gamma)`.
pub fn zyz_angles(u: &Mat2) -> (f64, f64, f64, f64) {
    let det = u[(0, 0)] * u[(1, 1)] - u[(0, 1)] * u[(1, 0)];
    let phase = det.arg() / 2.0;
    let v = u * C64::from_polar(1.0, -phase);
    let (c00, c10) = (v[(0, 0)], v[(1, 0)]);
    let beta = 2.0 * c10.norm().atan2(c00.norm());
    let (alpha, gamma);
    if c00.norm() < 1e-12 {
        // alpha - gamma fixed, sum free
        alpha = 2.0 * c10.arg();
        gamma = 0.0;
    } else if c10.norm() < 1e-12 {
        alpha = 2.0 * v[(1, 1)].arg();
        gamma = 0.0;
    } else {
        let sum = 2.0 * v[(1, 1)].arg();
        let diff = 2.0 * c10.arg();
        alpha = (sum + diff) / 2.0;
        gamma = (sum - diff) / 2.0;
    }
    (phase, alpha, beta, gamma)
}

/// Rotation pulses, in time order, realizing `u` up to global phase.
pub fn rotations_of(u: &Mat2) -> Vec<(PauliAxis, f64)> {
    let (_, alpha, beta, gamma) = zyz_angles(u);
    let beta = wrap_angle(beta);
    let mut out = Vec::with_capacity(3);
    if beta.abs() < ANGLE_EPS {
        let z = wrap_angle(alpha + gamma);
        if z.abs() >= ANGLE_EPS {
            out.push((PauliAxis::Z, z));
        }
        return out;
    }
    for (axis, a) in [(PauliAxis::Z, gamma), (PauliAxis::Y, beta), (PauliAxis::Z, alpha)] {
        let a = wrap_angle(a);
        if a.abs() >= ANGLE_EPS {
            out.push((axis, a));
        }
    }
    out
}

/// Product of rotations given in time order.
pub fn compose_rotations(rots: &[(PauliAxis, f64)]) -> Mat2 {
    rots.iter()
        .fold(Mat2::identity(), |acc, &(axis, a)| rotation(axis, a) * acc)
}

/// Bloch vector of `u sigma_z u^dagger`.
pub fn conjugated_z_axis(u: &Mat2) -> [f64; 3] {
    bloch_of(&(u * pauli(PauliAxis::Z) * u.adjoint()))
}

/// Pauli components `(tr(X m)/2, tr(Y m)/2, tr(Z m)/2)` of a 2x2 matrix.
pub fn bloch_of(m: &Mat2) -> [f64; 3] {
    [PauliAxis::X, PauliAxis::Y, PauliAxis::Z].map(|a| ((pauli(a) * m).trace() / 2.0).re)
}

/// A unitary `v` with `v sigma_z v^dagger = n . sigma` for a unit vector `n`.
pub fn z_to_axis(n: [f64; 3]) -> Mat2 {
    let theta = n[0].hypot(n[1]).atan2(n[2]);
    let phi = n[1].atan2(n[0]);
    rotation(PauliAxis::Z, phi) * rotation(PauliAxis::Y, theta)
}

/// A unitary `e` with `e sigma_x e^dagger = n . sigma` for a unit vector `n`.
pub fn x_to_axis(n: [f64; 3]) -> Mat2 {
    let theta = n[0].hypot(n[1]).atan2(n[2]);
    let phi = n[1].atan2(n[0]);
    rotation(PauliAxis::Z, phi) * rotation(PauliAxis::Y, theta - PI / 2.0)
}

pub fn max_abs_diff(a: &Mat, b: &Mat) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &Mat2, b: &Mat2, tol: f64) -> bool {
        (a - b).iter().all(|z| z.norm() < tol)
    }

    fn equal_phase(a: &Mat2, b: &Mat2) -> bool {
        let k = (0..4).max_by(|&i, &j| b[i].norm().total_cmp(&b[j].norm())).unwrap();
        let ph = a[k] / b[k];
        close(a, &(b * ph), 1e-10)
    }

    #[test]
    fn rotation_conventions() {
        // S_x = exp(-i pi/4 sigma_x)
        let sx = rotation(PauliAxis::X, PI / 2.0);
        let expect = (Mat2::identity() - pauli(PauliAxis::X) * I) * c(FRAC_1_SQRT_2);
        assert!(close(&sx, &expect, 1e-14));
        assert!(close(&(hadamard() * hadamard()), &Mat2::identity(), 1e-14));
    }

    #[test]
    fn zyz_round_trip_on_assorted_unitaries() {
        let samples = [
            hadamard(),
            pauli(PauliAxis::X),
            pauli(PauliAxis::Y),
            rotation(PauliAxis::Z, 0.3),
            rotation(PauliAxis::X, 1.1) * rotation(PauliAxis::Y, -0.4) * rotation(PauliAxis::Z, 2.9),
            Mat2::identity() * C64::from_polar(1.0, 0.7),
        ];
        for u in samples {
            let rebuilt = compose_rotations(&rotations_of(&u));
            assert!(equal_phase(&rebuilt, &u), "{u}");
        }
    }

    #[test]
    fn identity_emits_no_pulses() {
        assert!(rotations_of(&(Mat2::identity() * I)).is_empty());
        assert_eq!(rotations_of(&rotation(PauliAxis::Z, PI)).len(), 1);
    }

    #[test]
    fn axis_maps() {
        for n in [[1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, -1.0], [0.6, 0.0, 0.8]] {
            let v = z_to_axis(n);
            let got = conjugated_z_axis(&v);
            let e = x_to_axis(n);
            let got_x = bloch_of(&(e * pauli(PauliAxis::X) * e.adjoint()));
            for k in 0..3 {
                assert!((got[k] - n[k]).abs() < 1e-12);
                assert!((got_x[k] - n[k]).abs() < 1e-12);
            }
        }
    }
}
