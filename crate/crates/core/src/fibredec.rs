//! Combinatorial Hodge Laplacians on periodic grid fibres.
//!
//! A circle of `n` segments and length `L` carries the cochain complex of the
//! `n`-cycle with diagonal metric weights: vertices get the dual length
//! `h = L/n`, edges get `1/h`. Products of circles use product cells and
//! product weights, so `d` stays an integer incidence matrix and the
//! combinatorial Betti numbers are exact.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::cochain::{standard, CochainComplex, QMatrix};
use crate::error::FibreError;
use crate::spectral::{FibreSpectrum, Provenance, Real, SpectralLine};
use crate::Q;

/// Zero modes are eigenvalues below this fraction of the largest eigenvalue.
pub const ZERO_TOLERANCE: f64 = 1e-8;
/// Residual contract per eigenpair, relative to `‖Δ‖`.
pub const RESIDUAL_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FibreKind {
    Circle,
    Torus,
    /// Product of any number of circles, built by iterated tensor products.
    Product,
}

impl FibreKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FibreKind::Circle => "circle",
            FibreKind::Torus => "torus",
            FibreKind::Product => "product",
        }
    }
}

#[derive(Clone, Debug)]
pub struct DiscreteFibre {
    kind: FibreKind,
    sizes: Vec<usize>,
    lengths: Vec<f64>,
    complex: CochainComplex,
    d: Vec<DMatrix<f64>>,
    weights: Vec<Vec<f64>>,
}

fn circle_weights(n: usize, length: f64) -> Vec<Vec<f64>> {
    let h = length / n as f64;
    vec![vec![h; n], vec![1.0 / h; n]]
}

fn check_factors(sizes: &[usize], lengths: &[f64]) -> Result<(), FibreError> {
    if sizes.len() != lengths.len() || sizes.is_empty() {
        return Err(FibreError::BadLength);
    }
    if let Some(&n) = sizes.iter().find(|&&n| n < 3) {
        return Err(FibreError::DegenerateSize(n));
    }
    if lengths.iter().any(|l| !l.is_finite() || *l <= 0.0) {
        return Err(FibreError::BadLength);
    }
    Ok(())
}

/// Builds a fibre from per-factor segment counts and total lengths.
pub fn build_fibre(kind: FibreKind, sizes: &[usize], lengths: &[f64]) -> Result<DiscreteFibre, FibreError> {
    check_factors(sizes, lengths)?;
    let (complex, weights) = match (kind, sizes.len()) {
        (FibreKind::Circle, 1) => (standard::cycle(sizes[0]), circle_weights(sizes[0], lengths[0])),
        (FibreKind::Torus, 2) => torus_cells(sizes[0], sizes[1], lengths[0], lengths[1]),
        (FibreKind::Product, _) => product_cells(sizes, lengths)?,
        _ => return Err(FibreError::BadLength),
    };
    let d = complex
        .differentials()
        .iter()
        .map(|m| DMatrix::from_row_slice(m.rows(), m.cols(), &m.to_f64_row_major()))
        .collect();
    Ok(DiscreteFibre { kind, sizes: sizes.to_vec(), lengths: lengths.to_vec(), complex, d, weights })
}

pub fn circle(n: usize, length: f64) -> Result<DiscreteFibre, FibreError> {
    build_fibre(FibreKind::Circle, &[n], &[length])
}

pub fn torus(n1: usize, n2: usize, l1: f64, l2: f64) -> Result<DiscreteFibre, FibreError> {
    build_fibre(FibreKind::Torus, &[n1, n2], &[l1, l2])
}

// Explicit torus cells. Vertex (i, j) and face (i, j) sit at i·n2 + j; the
// 1-cochains list the edges along the second factor first, then those along
// the first factor.
fn torus_cells(n1: usize, n2: usize, l1: f64, l2: f64) -> (CochainComplex, Vec<Vec<f64>>) {
    let (h1, h2) = (l1 / n1 as f64, l2 / n2 as f64);
    let at = |i: usize, j: usize| (i % n1) * n2 + (j % n2);
    let cells = n1 * n2;
    let mut d0 = QMatrix::zeros(2 * cells, cells);
    let mut d1 = QMatrix::zeros(cells, 2 * cells);
    let one = Q::from_integer(1.into());
    for i in 0..n1 {
        for j in 0..n2 {
            let v = at(i, j);
            d0.set(v, v, -one.clone());
            d0.set(v, at(i, j + 1), one.clone());
            d0.set(cells + v, v, -one.clone());
            d0.set(cells + v, at(i + 1, j), one.clone());
            // face (i, j): -y(i, j) + y(i+1, j) + x(i, j) - x(i, j+1)
            d1.set(v, v, -one.clone());
            d1.set(v, at(i + 1, j), one.clone());
            d1.set(v, cells + v, one.clone());
            d1.set(v, cells + at(i, j + 1), -one.clone());
        }
    }
    let complex = CochainComplex::new(0, vec![cells, 2 * cells, cells], vec![d0, d1]).expect("torus cells");
    let mut w1 = vec![h1 / h2; cells];
    w1.extend(core::iter::repeat(h2 / h1).take(cells));
    (complex, vec![vec![h1 * h2; cells], w1, vec![1.0 / (h1 * h2); cells]])
}

fn product_cells(sizes: &[usize], lengths: &[f64]) -> Result<(CochainComplex, Vec<Vec<f64>>), FibreError> {
    let mut complex = standard::cycle(sizes[0]);
    let mut weights = circle_weights(sizes[0], lengths[0]);
    for (&n, &l) in sizes.iter().zip(lengths).skip(1) {
        let factor_w = circle_weights(n, l);
        let (next, layout) = complex.tensor_with_layout(&standard::cycle(n))?;
        let mut next_w = Vec::with_capacity(next.dims().len());
        for k in next.degrees() {
            let mut w = Vec::with_capacity(next.dim(k));
            for b in layout.blocks(k) {
                for x in &weights[b.base as usize] {
                    w.extend(factor_w[b.fibre as usize].iter().map(|y| x * y));
                }
            }
            next_w.push(w);
        }
        complex = next;
        weights = next_w;
    }
    Ok((complex, weights))
}

impl DiscreteFibre {
    pub fn kind(&self) -> FibreKind {
        self.kind
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }

    pub fn dimension(&self) -> usize {
        self.sizes.len()
    }

    pub fn complex(&self) -> &CochainComplex {
        &self.complex
    }

    pub fn dims(&self) -> &[usize] {
        self.complex.dims()
    }

    /// Integer incidence matrix `d_q` as floats.
    pub fn d(&self, q: usize) -> &DMatrix<f64> {
        &self.d[q]
    }

    pub fn weights(&self, q: usize) -> &[f64] {
        &self.weights[q]
    }

    /// Exact combinatorial Betti numbers.
    pub fn betti(&self) -> Result<Vec<usize>, FibreError> {
        Ok(self.complex.cohomology_dims()?)
    }

    fn check_degree(&self, q: usize) -> Result<(), FibreError> {
        if q > self.dimension() {
            return Err(FibreError::Degree { degree: q, dim: self.dimension() });
        }
        Ok(())
    }

    // W_{q+1}^{1/2} d_q W_q^{-1/2}
    fn scaled_d(&self, q: usize) -> DMatrix<f64> {
        let mut a = self.d[q].clone();
        let (rows, cols) = a.shape();
        for r in 0..rows {
            let wr = libm::sqrt(self.weights[q + 1][r]);
            for c in 0..cols {
                a[(r, c)] *= wr / libm::sqrt(self.weights[q][c]);
            }
        }
        a
    }

    /// `W^{1/2} (δd + dδ) W^{-1/2}` in degree `q`; symmetric, with the same
    /// spectrum as the weighted Hodge Laplacian.
    pub fn symmetric_laplacian(&self, q: usize) -> Result<DMatrix<f64>, FibreError> {
        self.check_degree(q)?;
        let n = self.dims()[q];
        let mut s = DMatrix::zeros(n, n);
        if q < self.dimension() {
            let a = self.scaled_d(q);
            s += a.transpose() * &a;
        }
        if q > 0 {
            let b = self.scaled_d(q - 1);
            s += &b * b.transpose();
        }
        let t = s.transpose();
        Ok((s + t) * 0.5)
    }

    /// The weighted Laplacian `Δ_q` itself (not symmetric as a matrix).
    pub fn laplacian(&self, q: usize) -> Result<DMatrix<f64>, FibreError> {
        let mut s = self.symmetric_laplacian(q)?;
        let w = &self.weights[q];
        let n = s.nrows();
        for r in 0..n {
            for c in 0..n {
                s[(r, c)] *= libm::sqrt(w[c]) / libm::sqrt(w[r]);
            }
        }
        Ok(s)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumResult {
    pub degree: usize,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Eigenvectors of `Δ_q`, unit length in the weighted inner product,
    /// first nonzero component positive.
    pub eigenvectors: Vec<Vec<f64>>,
    /// Eigenvalues below `ZERO_TOLERANCE · λ_max` over the whole degree.
    pub harmonic_dim: usize,
    pub zero_tolerance: f64,
    /// Largest residual `‖Sv − λv‖` among the reported pairs.
    pub max_residual: f64,
    pub operator_norm: f64,
}

struct Solved {
    values: Vec<f64>,
    vectors: Vec<Vec<f64>>,
    residuals: Vec<f64>,
    norm: f64,
}

fn solve(fibre: &DiscreteFibre, q: usize) -> Result<Solved, FibreError> {
    let s = fibre.symmetric_laplacian(q)?;
    let n = s.nrows();
    let eig = SymmetricEigen::try_new(s.clone(), f64::EPSILON, 0).ok_or(FibreError::NoConvergence(q))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]).then(i.cmp(&j)));
    let norm = eig.eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let bound = RESIDUAL_TOLERANCE * norm.max(f64::MIN_POSITIVE);
    let w = &fibre.weights[q];
    let mut values = Vec::with_capacity(n);
    let mut vectors = Vec::with_capacity(n);
    let mut residuals = Vec::with_capacity(n);
    for (index, &i) in order.iter().enumerate() {
        let lambda = eig.eigenvalues[i];
        let v = eig.eigenvectors.column(i);
        let residual = (&s * v - v * lambda).norm();
        if residual > bound {
            return Err(FibreError::Residual { degree: q, index, residual, bound });
        }
        // back to Δ_q: u = W^{-1/2} v has weighted norm 1
        let mut u: Vec<f64> = v.iter().zip(w).map(|(x, wi)| x / libm::sqrt(*wi)).collect();
        let peak = u.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if let Some(first) = u.iter().find(|x| x.abs() > 1e-12 * peak) {
            if *first < 0.0 {
                u.iter_mut().for_each(|x| *x = -*x);
            }
        }
        values.push(lambda);
        vectors.push(u);
        residuals.push(residual);
    }
    Ok(Solved { values, vectors, residuals, norm })
}

fn harmonic_count(values: &[f64], norm: f64) -> usize {
    values.iter().filter(|v| **v < ZERO_TOLERANCE * norm).count()
}

/// The lowest `count` eigenpairs of the weighted Hodge Laplacian in degree `q`.
pub fn fibre_spectrum(fibre: &DiscreteFibre, q: usize, count: usize) -> Result<SpectrumResult, FibreError> {
    fibre.check_degree(q)?;
    let available = fibre.dims()[q];
    if count > available {
        return Err(FibreError::Count { count, available });
    }
    let solved = solve(fibre, q)?;
    let harmonic_dim = harmonic_count(&solved.values, solved.norm);
    Ok(SpectrumResult {
        degree: q,
        harmonic_dim,
        zero_tolerance: ZERO_TOLERANCE * solved.norm,
        max_residual: solved.residuals[..count].iter().fold(0.0, |m: f64, r| m.max(*r)),
        operator_norm: solved.norm,
        eigenvalues: solved.values[..count].to_vec(),
        eigenvectors: solved.vectors.into_iter().take(count).collect(),
    })
}

/// Full spectrum in every degree with zero modes snapped to an exact 0 after
/// checking their count against the exact Betti numbers. Nonzero eigenvalues
/// agreeing to within their error bounds are merged into one line.
pub fn spectrum_for_predicates(fibre: &DiscreteFibre) -> Result<FibreSpectrum, FibreError> {
    let betti = fibre.betti()?;
    let mut degrees = Vec::with_capacity(fibre.dimension() + 1);
    for q in 0..=fibre.dimension() {
        let solved = solve(fibre, q)?;
        let zeros = harmonic_count(&solved.values, solved.norm);
        let b = betti.get(q).copied().unwrap_or(0);
        if zeros != b {
            return Err(crate::error::SpectrumError::BettiMismatch { degree: q, zeros, betti: b }.into());
        }
        let floor = 16.0 * f64::EPSILON * solved.norm * solved.values.len() as f64;
        let mut lines: Vec<SpectralLine> = Vec::new();
        if zeros > 0 {
            lines.push(SpectralLine { value: Real::Exact(Q::from_integer(0.into())), multiplicity: zeros });
        }
        let mut group: Vec<(f64, f64)> = Vec::new();
        let flush = |group: &mut Vec<(f64, f64)>, lines: &mut Vec<SpectralLine>| {
            if group.is_empty() {
                return;
            }
            let m = group.len();
            let value = group.iter().map(|g| g.0).sum::<f64>() / m as f64;
            let spread = group.iter().fold(0.0f64, |s, g| s.max((g.0 - value).abs()));
            let err = group.iter().fold(spread, |e, g| e.max(g.1 + spread));
            lines.push(SpectralLine { value: Real::Approx { value, err }, multiplicity: m });
            group.clear();
        };
        for (v, r) in solved.values.iter().zip(&solved.residuals).skip(zeros) {
            let err = r.max(floor);
            if let Some(last) = group.last() {
                if (v - last.0).abs() > err + last.1 {
                    flush(&mut group, &mut lines);
                }
            }
            group.push((*v, err));
        }
        flush(&mut group, &mut lines);
        degrees.push(lines);
    }
    Ok(FibreSpectrum::new(degrees, Provenance::Discrete)?)
}
