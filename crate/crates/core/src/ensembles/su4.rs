use std::f64::consts::TAU;

use num_complex::Complex64 as C64;

use crate::circuit::{Mat2, Mat4};
use crate::rng::CounterRng;

fn u3(theta: f64, phi: f64, lambda: f64) -> Mat2 {
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    [
        [C64::new(c, 0.0), -C64::from_polar(s, lambda)],
        [C64::from_polar(s, phi), C64::from_polar(c, phi + lambda)],
    ]
}

/// Single-qubit Euler rotation with three angles uniform in `[0, 2π)`.
pub fn random_u3(rng: &mut CounterRng) -> Mat2 {
    let a = [rng.next_f64(), rng.next_f64(), rng.next_f64()].map(|v| v * TAU);
    u3(a[0], a[1], a[2])
}

fn kron(a: &Mat2, b: &Mat2) -> Mat4 {
    let mut out = [[C64::new(0.0, 0.0); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = a[i >> 1][j >> 1] * b[i & 1][j & 1];
        }
    }
    out
}

fn mul4(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut out = [[C64::new(0.0, 0.0); 4]; 4];
    for i in 0..4 {
        for k in 0..4 {
            for j in 0..4 {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

/// `exp(i(a XX + b YY + c ZZ))`.
fn canonical(a: f64, b: f64, c: f64) -> Mat4 {
    let paulis: [Mat2; 3] = {
        let (z, o, i) = (C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 1.0));
        [[[z, o], [o, z]], [[z, -i], [i, z]], [[o, z], [z, -o]]]
    };
    let mut out = [[C64::new(0.0, 0.0); 4]; 4];
    for (i, row) in out.iter_mut().enumerate() {
        row[i] = C64::new(1.0, 0.0);
    }
    // the three terms commute, so the exponential factorises
    for (angle, p) in [a, b, c].into_iter().zip(&paulis) {
        let pp = kron(p, p);
        let mut f = [[C64::new(0.0, 0.0); 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                let id = if i == j { angle.cos() } else { 0.0 };
                f[i][j] = C64::new(id, 0.0) + C64::new(0.0, angle.sin()) * pp[i][j];
            }
        }
        out = mul4(&out, &f);
    }
    out
}

/// Two-qubit unitary `(A⊗B) · exp(i(aXX+bYY+cZZ)) · (C⊗D)` from 15 angles uniform in `[0, 2π)`.
///
/// Reproducible but not Haar distributed.
pub fn random_su4(rng: &mut CounterRng) -> Mat4 {
    let outer = (random_u3(rng), random_u3(rng));
    let angles = [rng.next_f64(), rng.next_f64(), rng.next_f64()].map(|v| v * TAU);
    let inner = (random_u3(rng), random_u3(rng));
    let mid = canonical(angles[0], angles[1], angles[2]);
    mul4(&mul4(&kron(&outer.0, &outer.1), &mid), &kron(&inner.0, &inner.1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::unitarity_deviation;

    #[test]
    fn draws_are_unitary() {
        let mut rng = CounterRng::new(3);
        for _ in 0..20 {
            let u = random_u3(&mut rng);
            assert!(unitarity_deviation(&[u[0][0], u[0][1], u[1][0], u[1][1]], 2) < 1e-12);
            let v = random_su4(&mut rng);
            let flat: Vec<C64> = v.iter().flatten().copied().collect();
            assert!(unitarity_deviation(&flat, 4) < 1e-12);
        }
    }

    #[test]
    fn canonical_zero_is_identity() {
        let m = canonical(0.0, 0.0, 0.0);
        for (i, row) in m.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                assert!((v - C64::new((i == j) as u8 as f64, 0.0)).norm() < 1e-15);
            }
        }
    }
}
