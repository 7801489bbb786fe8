//! Exponent recovery from the radial indicial system.
//!
//! A fibre mode with eigenvalue `λ²` in degree `k` reduces the model equation
//! to `x u' = A u` with
//!
//! ```text
//! A = [ −k       λ        ]
//!     [  λ   −(f − k − 2a) ]
//! ```
//!
//! whose eigenvalues are the indicial roots. In `t = ln x` this is constant
//! coefficient; we march a fundamental matrix from `x = 1` down to `x₀` with
//! an adaptive Dormand–Prince 5(4) pair, re-orthonormalising at every grid
//! node, and fit the accumulated log-stretch of each column over the last
//! decade.

use alloc::vec::Vec;

use crate::error::RadialError;
use crate::Q;

use super::LogGrid;

const LOCAL_TOL: f64 = 1e-10;

type State = [f64; 4];

fn apply(a: &[[f64; 2]; 2], y: &State) -> State {
    // Y' = A Y, Y column-major as [y00, y10, y01, y11]
    [
        a[0][0] * y[0] + a[0][1] * y[1],
        a[1][0] * y[0] + a[1][1] * y[1],
        a[0][0] * y[2] + a[0][1] * y[3],
        a[1][0] * y[2] + a[1][1] * y[3],
    ]
}

fn axpy(y: &State, terms: &[(f64, &State)], h: f64) -> State {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..4 {
            out[i] += h * c * k[i];
        }
    }
    out
}

struct Step {
    y: State,
    err: f64,
}

fn dp45(a: &[[f64; 2]; 2], y: &State, h: f64) -> Step {
    let k1 = apply(a, y);
    let k2 = apply(a, &axpy(y, &[(1.0 / 5.0, &k1)], h));
    let k3 = apply(a, &axpy(y, &[(3.0 / 40.0, &k1), (9.0 / 40.0, &k2)], h));
    let k4 = apply(a, &axpy(y, &[(44.0 / 45.0, &k1), (-56.0 / 15.0, &k2), (32.0 / 9.0, &k3)], h));
    let k5 = apply(
        a,
        &axpy(y, &[(19372.0 / 6561.0, &k1), (-25360.0 / 2187.0, &k2), (64448.0 / 6561.0, &k3), (-212.0 / 729.0, &k4)], h),
    );
    let k6 = apply(
        a,
        &axpy(
            y,
            &[(9017.0 / 3168.0, &k1), (-355.0 / 33.0, &k2), (46732.0 / 5247.0, &k3), (49.0 / 176.0, &k4), (-5103.0 / 18656.0, &k5)],
            h,
        ),
    );
    let y5 = axpy(
        y,
        &[(35.0 / 384.0, &k1), (500.0 / 1113.0, &k3), (125.0 / 192.0, &k4), (-2187.0 / 6784.0, &k5), (11.0 / 84.0, &k6)],
        h,
    );
    let k7 = apply(a, &y5);
    let e = [
        71.0 / 57600.0,
        0.0,
        -71.0 / 16695.0,
        71.0 / 1920.0,
        -17253.0 / 339200.0,
        22.0 / 525.0,
        -1.0 / 40.0,
    ];
    let ks = [&k1, &k2, &k3, &k4, &k5, &k6, &k7];
    let mut err = 0.0f64;
    for i in 0..4 {
        let diff: f64 = ks.iter().zip(e).map(|(k, c)| c * k[i]).sum::<f64>() * h;
        let scale = LOCAL_TOL * (1.0 + y[i].abs().max(y5[i].abs()));
        err = err.max(diff.abs() / scale);
    }
    Step { y: y5, err }
}

/// Integrates from `t0` to `t1` (either direction); returns the state and the
/// last accepted step size.
fn integrate(a: &[[f64; 2]; 2], mut y: State, t0: f64, t1: f64, mut h: f64, steps: &mut usize) -> Result<(State, f64), RadialError> {
    let dir = if t1 < t0 { -1.0 } else { 1.0 };
    let mut t = t0;
    h = h.abs().max(1e-6) * dir;
    while (t1 - t) * dir > 0.0 {
        if (t + h - t1) * dir > 0.0 {
            h = t1 - t;
        }
        let step = dp45(a, &y, h);
        let factor = if step.err == 0.0 { 5.0 } else { (0.9 * libm::pow(step.err, -0.2)).clamp(0.2, 5.0) };
        if step.err <= 1.0 {
            t += h;
            y = step.y;
            *steps += 1;
        }
        h *= factor;
        if h.abs() < 1e-14 * (1.0 + t.abs()) {
            return Err(RadialError::StepUnderflow(libm::exp(t)));
        }
    }
    Ok((y, h))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModeExponents {
    pub minus: f64,
    pub plus: f64,
    /// Vanishing discriminant.
    pub double_root: bool,
    /// `γ₊ − γ₋` from the matrix entries.
    pub separation: f64,
    /// The recessive transient has decayed below 1e−3 on the fitting decade,
    /// `(10x₀)^{2(γ₊−γ₋)} ≤ 1e−3`; outside this the 1e−3 contract does not apply.
    pub within_contract: bool,
    pub steps: usize,
}

/// The coefficient matrix of the radial system.
pub fn indicial_matrix(k: usize, lambda2: f64, f: usize, a: &Q) -> [[f64; 2]; 2] {
    let lambda = libm::sqrt(lambda2);
    let a = crate::cochain::q_to_f64(a);
    [[-(k as f64), lambda], [lambda, -(f as f64 - k as f64 - 2.0 * a)]]
}

pub(crate) fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

pub fn mode_exponent(k: usize, lambda2: f64, f: usize, a: &Q, x0: f64) -> Result<ModeExponents, RadialError> {
    mode_exponent_on(k, lambda2, f, a, &LogGrid::new(x0, LogGrid::DEFAULT_PER_DECADE)?)
}

pub fn mode_exponent_on(k: usize, lambda2: f64, f: usize, a: &Q, grid: &LogGrid) -> Result<ModeExponents, RadialError> {
    if !(lambda2 >= 0.0) || !lambda2.is_finite() {
        return Err(RadialError::BadProfile);
    }
    let mat = indicial_matrix(k, lambda2, f, a);
    let split = mat[0][0] - mat[1][1];
    let double_root = lambda2 == 0.0 && split == 0.0;
    let separation = libm::sqrt(split * split + 4.0 * lambda2);
    let within_contract = !double_root && libm::pow(10.0 * grid.x0(), 2.0 * separation) <= 1e-3;

    // march from x = 1 down through the grid nodes
    let ts: Vec<f64> = grid.points().iter().rev().map(|x| libm::log(*x)).collect();
    // orthonormal start, rotated off the coordinate axes so a diagonal A
    // still mixes into the dominant direction
    let (sn, cs) = (libm::sin(0.6), libm::cos(0.6));
    let mut y: State = [cs, sn, -sn, cs];
    let (mut l1, mut l2) = (0.0f64, 0.0f64);
    let mut h = 1e-2;
    let mut steps = 0;
    let last_decade = libm::log(grid.x0()) + core::f64::consts::LN_10 * (1.0 + 1e-12);
    let (mut fit_t, mut fit_1, mut fit_2) = (Vec::new(), Vec::new(), Vec::new());
    for w in ts.windows(2) {
        let (next, h_last) = integrate(&mat, y, w[0], w[1], h, &mut steps)?;
        h = h_last;
        // Gram–Schmidt on the columns
        let r11 = libm::hypot(next[0], next[1]);
        let q1 = [next[0] / r11, next[1] / r11];
        let proj = q1[0] * next[2] + q1[1] * next[3];
        let v = [next[2] - proj * q1[0], next[3] - proj * q1[1]];
        let r22 = libm::hypot(v[0], v[1]);
        y = [q1[0], q1[1], v[0] / r22, v[1] / r22];
        l1 += libm::log(r11);
        l2 += libm::log(r22);
        if w[1] <= last_decade {
            fit_t.push(w[1]);
            fit_1.push(l1);
            fit_2.push(l2);
        }
    }
    if fit_t.len() < 3 {
        return Err(RadialError::Quadrature(fit_t.len()));
    }
    // the column that grows fastest toward x = 0 carries the smaller root
    let (s1, s2) = (slope(&fit_t, &fit_1), slope(&fit_t, &fit_2));
    Ok(ModeExponents { minus: s1.min(s2), plus: s1.max(s2), double_root, separation, within_contract, steps })
}
