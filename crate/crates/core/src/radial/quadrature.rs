//! Piecewise Lagrange quadrature and differentiation on nonuniform grids.
//! Integrals are exact for cubics, derivatives at nodes for quartics.

use alloc::vec::Vec;

use crate::error::RadialError;

const GAUSS: f64 = 0.577_350_269_189_625_8; // 1/√3

fn lagrange(nodes: &[f64], values: &[f64], t: f64) -> f64 {
    let mut sum = 0.0;
    for (m, (&xm, &ym)) in nodes.iter().zip(values).enumerate() {
        let mut w = 1.0;
        for (l, &xl) in nodes.iter().enumerate() {
            if l != m {
                w *= (t - xl) / (xm - xl);
            }
        }
        sum += w * ym;
    }
    sum
}

fn window(i: usize, n: usize, width: usize, back: usize) -> usize {
    i.saturating_sub(back).min(n - width)
}

/// `∫_u^v` of the cubic through the four nodes around interval `j`.
fn piece(xs: &[f64], ys: &[f64], j: usize, u: f64, v: f64) -> f64 {
    let s = window(j, xs.len(), 4, 1);
    let (mid, half) = (0.5 * (u + v), 0.5 * (v - u));
    let nodes = &xs[s..s + 4];
    let vals = &ys[s..s + 4];
    half * (lagrange(nodes, vals, mid - half * GAUSS) + lagrange(nodes, vals, mid + half * GAUSS))
}

pub(crate) fn check_grid(xs: &[f64], ys: &[f64]) -> Result<(), RadialError> {
    if xs.len() != ys.len() || xs.windows(2).any(|w| !(w[0] < w[1])) || xs.iter().chain(ys).any(|v| !v.is_finite()) {
        return Err(RadialError::BadProfile);
    }
    if xs.len() < 5 {
        return Err(RadialError::Quadrature(xs.len()));
    }
    Ok(())
}

/// Running integral anchored at `c`: `K_i = ∫_c^{x_i} y`, plus the interval
/// increments `∫_{x_i}^{x_{i+1}} y`.
pub(crate) struct Cumulative {
    pub values: Vec<f64>,
    pub increments: Vec<f64>,
}

pub(crate) fn cumulative(xs: &[f64], ys: &[f64], c: f64) -> Result<Cumulative, RadialError> {
    check_grid(xs, ys)?;
    let n = xs.len();
    let increments: Vec<f64> = (0..n - 1).map(|j| piece(xs, ys, j, xs[j], xs[j + 1])).collect();
    let mut prefix = Vec::with_capacity(n);
    prefix.push(0.0);
    for inc in &increments {
        prefix.push(prefix.last().unwrap() + inc);
    }
    let j = xs.partition_point(|&x| x <= c).saturating_sub(1).min(n - 2);
    let anchor = prefix[j] + piece(xs, ys, j, xs[j], c);
    let values = prefix.iter().map(|p| p - anchor).collect();
    Ok(Cumulative { values, increments })
}

/// `∫_{x_0}^{x_{n-1}} y`.
pub(crate) fn integrate(xs: &[f64], ys: &[f64]) -> Result<f64, RadialError> {
    check_grid(xs, ys)?;
    Ok((0..xs.len() - 1).map(|j| piece(xs, ys, j, xs[j], xs[j + 1])).sum())
}

/// Derivative at every node of a function known through its interval
/// increments. Differences are accumulated locally so large offsets never
/// enter the stencil.
pub(crate) fn derivative_from_increments(xs: &[f64], increments: &[f64]) -> Vec<f64> {
    let n = xs.len();
    (0..n)
        .map(|i| {
            let s = window(i, n, 5, 2);
            let mut local = [0.0f64; 5];
            for (m, slot) in local.iter_mut().enumerate() {
                let node = s + m;
                *slot = if node >= i {
                    increments[i..node].iter().sum()
                } else {
                    -increments[node..i].iter().sum::<f64>()
                };
            }
            let nodes = &xs[s..s + 5];
            let xi = xs[i];
            let at = i - s;
            let mut d = 0.0;
            for m in 0..5 {
                let w = if m == at {
                    (0..5).filter(|&l| l != at).map(|l| 1.0 / (xi - nodes[l])).sum()
                } else {
                    let num: f64 = (0..5).filter(|&l| l != m && l != at).map(|l| xi - nodes[l]).product();
                    let den: f64 = (0..5).filter(|&l| l != m).map(|l| nodes[m] - nodes[l]).product();
                    num / den
                };
                d += w * local[m];
            }
            d
        })
        .collect()
}
