//! Conversion between the composed flip channel `E3 ∘ E2 ∘ E1` and the
//! equivalent Pauli mixture `(1 − εx − εy − εz) ρ + εx XρX + εy YρY + εz ZρZ`.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PauliMixture {
    pub ex: f64,
    pub ey: f64,
    pub ez: f64,
}

const NEWTON_BUDGET: usize = 100;
const NEWTON_TOL: f64 = 1e-12;

fn check_rates(e: [f64; 3]) -> Result<()> {
    for (k, v) in e.iter().enumerate() {
        if !(0.0..0.5).contains(v) {
            return Err(Error::InvalidParameter(format!("e{} = {v} is outside [0, 0.5)", k + 1)));
        }
    }
    Ok(())
}

fn forward_raw(e1: f64, e2: f64, e3: f64) -> [f64; 3] {
    let ez = e1 * (1.0 - e2) * (1.0 - e3) + (1.0 - e1) * e2 * e3;
    let ex = e2 * (1.0 - e1) * (1.0 - e3) + (1.0 - e2) * e1 * e3;
    let ey = e3 * (1.0 - e1) * (1.0 - e2) + (1.0 - e3) * e1 * e2;
    [ex, ey, ez]
}

/// Mixture weights produced by successive Z, X and Y flips with rates `e1`, `e2`, `e3`.
pub fn mixture_forward(e1: f64, e2: f64, e3: f64) -> Result<PauliMixture> {
    check_rates([e1, e2, e3])?;
    let [ex, ey, ez] = forward_raw(e1, e2, e3);
    Ok(PauliMixture { ex, ey, ez })
}

/// Jacobian of `(e1, e2, e3) ↦ (εz, εx, εy)`, rows in that output order.
fn jacobian(e: [f64; 3]) -> [[f64; 3]; 3] {
    let [e1, e2, e3] = e;
    // each output has the form f(a, b, c) = a(1−b)(1−c) + (1−a)bc
    let grad = |a: f64, b: f64, c: f64| {
        [
            (1.0 - b) * (1.0 - c) - b * c,
            -a * (1.0 - c) + (1.0 - a) * c,
            -a * (1.0 - b) + (1.0 - a) * b,
        ]
    };
    let gz = grad(e1, e2, e3); // wrt (e1, e2, e3)
    let gx = grad(e2, e1, e3); // wrt (e2, e1, e3)
    let gy = grad(e3, e1, e2); // wrt (e3, e1, e2)
    [[gz[0], gz[1], gz[2]], [gx[1], gx[0], gx[2]], [gy[1], gy[2], gy[0]]]
}

fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Determinant of the forward map's Jacobian, outputs ordered `(εz, εx, εy)`.
///
/// Equals `(1−2e1)(1−2e2)(1−2e3)`; the magnitude is `|(2e1−1)(2e2−1)(2e3−1)|`
/// and it only vanishes when some rate reaches 1/2.
pub fn mixture_jacobian_det(e1: f64, e2: f64, e3: f64) -> f64 {
    det3(&jacobian([e1, e2, e3]))
}

fn solve3(m: &[[f64; 3]; 3], rhs: [f64; 3]) -> Option<[f64; 3]> {
    let d = det3(m);
    if d.abs() < 1e-300 {
        return None;
    }
    let mut out = [0.0; 3];
    for (col, slot) in out.iter_mut().enumerate() {
        let mut mc = *m;
        for row in 0..3 {
            mc[row][col] = rhs[row];
        }
        *slot = det3(&mc) / d;
    }
    Some(out)
}

/// Rates `(e1, e2, e3)` reproducing a target Pauli mixture, by damped Newton
/// iteration started at `(εz, εx, εy)`.
pub fn mixture_inverse(ex: f64, ey: f64, ez: f64) -> Result<[f64; 3]> {
    if [ex, ey, ez].iter().any(|v| !v.is_finite() || *v < 0.0) || ex + ey + ez > 1.0 {
        return Err(Error::Unreachable(format!("({ex}, {ey}, {ez}) is not a Pauli mixture")));
    }
    let target = [ez, ex, ey];
    let residual = |e: [f64; 3]| {
        let [fx, fy, fz] = forward_raw(e[0], e[1], e[2]);
        [fz - target[0], fx - target[1], fy - target[2]]
    };
    let norm = |r: [f64; 3]| r.iter().fold(0.0f64, |a, v| a.max(v.abs()));

    let mut e = target;
    let mut r = residual(e);
    for _ in 0..NEWTON_BUDGET {
        if norm(r) < NEWTON_TOL {
            break;
        }
        let step = solve3(&jacobian(e), r)
            .ok_or_else(|| Error::Unreachable("singular Jacobian (a rate reached 1/2)".into()))?;
        let mut lambda = 1.0;
        loop {
            let cand = [e[0] - lambda * step[0], e[1] - lambda * step[1], e[2] - lambda * step[2]];
            let rc = residual(cand);
            if norm(rc) < norm(r) || lambda < 1e-6 {
                e = cand;
                r = rc;
                break;
            }
            lambda *= 0.5;
        }
    }
    if norm(r) >= NEWTON_TOL {
        return Err(Error::Unreachable(format!(
            "Newton iteration did not converge (residual {:.3e})",
            norm(r)
        )));
    }
    // snap roundoff just below zero
    for v in e.iter_mut() {
        if *v < 0.0 && *v > -1e-14 {
            *v = 0.0;
        }
    }
    check_rates(e).map_err(|_| Error::Unreachable(format!("solution {e:?} leaves [0, 0.5)")))?;
    Ok(e)
}
