//! Forms on the truncated cone over the flat torus `(ℝ/2πℤ)²`, one Fourier
//! mode at a time, with polynomial radial coefficients.
//!
//! A tangential `k`-form in mode `m = (m₁, m₂)` is a real vector over the
//! basis `trig(m·y) dy^I`, `trig ∈ {cos, sin}` (only `cos` for `m = 0`),
//! `|I| = k`. A cone form is `ω = α(x) + dx ∧ β(x)` and
//! `dω = d_F α + dx ∧ (α' − d_F β)`.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use crate::error::RadialError;

use super::quadrature;
use super::LogGrid;

/// Polynomial in `x`, ascending coefficients.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Poly(pub Vec<f64>);

impl Poly {
    pub fn eval(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Poly {
        Poly(self.0.iter().enumerate().skip(1).map(|(i, c)| i as f64 * c).collect())
    }

    fn axpy(&mut self, s: f64, other: &Poly) {
        if self.0.len() < other.0.len() {
            self.0.resize(other.0.len(), 0.0);
        }
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += s * b;
        }
    }

    fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, c| m.max(c.abs()))
    }
}

fn masks(k: usize) -> Vec<u8> {
    (0u8..4).filter(|m| m.count_ones() as usize == k).collect()
}

fn trigs(mode: (i64, i64)) -> usize {
    if mode == (0, 0) {
        1
    } else {
        2
    }
}

/// Dimension of the tangential `k`-form space in one mode.
pub fn mode_dim(k: usize, mode: (i64, i64)) -> usize {
    if k > 2 {
        0
    } else {
        trigs(mode) * masks(k).len()
    }
}

/// `λ² = m₁² + m₂²`.
pub fn mode_eigenvalue(mode: (i64, i64)) -> f64 {
    (mode.0 * mode.0 + mode.1 * mode.1) as f64
}

/// The fibre differential on `k`-forms of one mode, a `dim(k+1) × dim(k)` matrix.
pub fn fibre_d(k: usize, mode: (i64, i64)) -> DMatrix<f64> {
    let (src, tgt) = (masks(k), masks(k + 1));
    let t = trigs(mode);
    let mut d = DMatrix::zeros(t * tgt.len(), t * src.len());
    let m = [mode.0 as f64, mode.1 as f64];
    for trig in 0..t {
        // d cos = −sin · Σ m_j dy_j,  d sin = cos · Σ m_j dy_j
        let (to, sign) = if trig == 0 { (1, -1.0) } else { (0, 1.0) };
        if to >= t {
            continue;
        }
        for (si, &mask) in src.iter().enumerate() {
            for j in 0..2u8 {
                if mask & (1 << j) != 0 {
                    continue;
                }
                let swaps = (mask & ((1 << j) - 1)).count_ones();
                let wedge = if swaps % 2 == 0 { 1.0 } else { -1.0 };
                let ti = tgt.iter().position(|&x| x == mask | (1 << j)).unwrap();
                d[(to * tgt.len() + ti, trig * src.len() + si)] += sign * wedge * m[j as usize];
            }
        }
    }
    d
}

fn apply(d: &DMatrix<f64>, v: &[Poly]) -> Vec<Poly> {
    (0..d.nrows())
        .map(|r| {
            let mut p = Poly::default();
            for (c, q) in v.iter().enumerate() {
                if d[(r, c)] != 0.0 {
                    p.axpy(d[(r, c)], q);
                }
            }
            p
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct TorusConeForm {
    pub degree: usize,
    pub mode: (i64, i64),
    /// Tangential part, `mode_dim(degree)` coefficients.
    pub alpha: Vec<Poly>,
    /// Coefficient of `dx ∧`, `mode_dim(degree − 1)` coefficients.
    pub beta: Vec<Poly>,
}

impl TorusConeForm {
    pub fn new(degree: usize, mode: (i64, i64), alpha: Vec<Poly>, beta: Vec<Poly>) -> Result<Self, RadialError> {
        let beta_dim = if degree == 0 { 0 } else { mode_dim(degree - 1, mode) };
        if degree > 3 || alpha.len() != mode_dim(degree, mode) || beta.len() != beta_dim {
            return Err(RadialError::Degree(degree));
        }
        Ok(TorusConeForm { degree, mode, alpha, beta })
    }

    pub fn exterior_derivative(&self) -> TorusConeForm {
        let k = self.degree;
        let alpha = apply(&fibre_d(k, self.mode), &self.alpha);
        let mut beta: Vec<Poly> = self.alpha.iter().map(Poly::derivative).collect();
        if k > 0 {
            for (b, db) in beta.iter_mut().zip(apply(&fibre_d(k - 1, self.mode), &self.beta)) {
                b.axpy(-1.0, &db);
            }
        }
        TorusConeForm { degree: k + 1, mode: self.mode, alpha, beta }
    }

    pub fn is_closed(&self, tol: f64) -> bool {
        let d = self.exterior_derivative();
        d.alpha.iter().chain(&d.beta).all(|p| p.max_abs() <= tol)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Reconstruction {
    pub eta0: Vec<f64>,
    /// Max over grid nodes of `|d_F(η₀ + K_c ω) − α|`.
    pub tangential_error: f64,
    /// Max over grid nodes of `|∂_x K_c ω − β|`.
    pub radial_error: f64,
}

impl Reconstruction {
    pub fn max_error(&self) -> f64 {
        self.tangential_error.max(self.radial_error)
    }
}

/// Rebuilds a closed form from its radial part: solves `d_F η₀ = α(c)`, sets
/// `θ = η₀ + K_c ω` and compares `dθ` with `ω` on the grid.
pub fn reconstruct(omega: &TorusConeForm, c: f64, grid: &LogGrid) -> Result<Reconstruction, RadialError> {
    if !(c > 0.5 && c < 1.0) {
        return Err(RadialError::BadBasepoint(c));
    }
    if omega.degree == 0 {
        return Err(RadialError::Degree(0));
    }
    let k = omega.degree;
    let df = fibre_d(k - 1, omega.mode);
    let alpha_c = DVector::from_iterator(omega.alpha.len(), omega.alpha.iter().map(|p| p.eval(c)));
    let eta0 = df.clone().pseudo_inverse(1e-12).map_err(|_| RadialError::NotExact(f64::NAN))? * &alpha_c;
    let residual = (&df * &eta0 - &alpha_c).amax();
    if residual > 1e-10 * (1.0 + alpha_c.amax()) {
        return Err(RadialError::NotExact(residual));
    }

    let xs = grid.points();
    let mut k_vals = Vec::with_capacity(omega.beta.len());
    let mut radial_error = 0.0f64;
    for b in &omega.beta {
        let ys: Vec<f64> = xs.iter().map(|x| b.eval(*x)).collect();
        let cum = quadrature::cumulative(&xs, &ys, c)?;
        let deriv = quadrature::derivative_from_increments(&xs, &cum.increments);
        radial_error = deriv.iter().zip(&ys).fold(radial_error, |e, (d, y)| e.max((d - y).abs()));
        k_vals.push(cum.values);
    }
    let mut tangential_error = 0.0f64;
    for (i, x) in xs.iter().enumerate() {
        let theta = DVector::from_iterator(eta0.len(), (0..eta0.len()).map(|j| eta0[j] + k_vals[j][i]));
        let dtheta = &df * theta;
        for (r, p) in omega.alpha.iter().enumerate() {
            tangential_error = tangential_error.max((dtheta[r] - p.eval(*x)).abs());
        }
    }
    Ok(Reconstruction { eta0: eta0.iter().copied().collect(), tangential_error, radial_error })
}

/// `dθ` for `θ = θ_α + dx ∧ θ_β` in one mode.
pub fn exact_form(degree: usize, mode: (i64, i64), theta_alpha: Vec<Poly>, theta_beta: Vec<Poly>) -> Result<TorusConeForm, RadialError> {
    Ok(TorusConeForm::new(degree, mode, theta_alpha, theta_beta)?.exterior_derivative())
}

/// Ten exact closed forms on the cone over `T²` with cubic `β`.
pub fn sample_forms() -> Vec<TorusConeForm> {
    let p = |c: &[f64]| Poly(c.to_vec());
    let specs: Vec<(usize, (i64, i64), Vec<Poly>, Vec<Poly>)> = vec![
        (0, (0, 0), vec![p(&[1.0, 2.0, -1.0, 0.5, 0.25])], vec![]),
        (0, (1, 0), vec![p(&[0.0, 1.0, 1.0]), p(&[2.0, 0.0, 0.0, 1.0])], vec![]),
        (0, (1, 2), vec![p(&[1.0, -1.0, 0.0, 0.0, 1.0]), p(&[0.5])], vec![]),
        (0, (0, 3), vec![p(&[0.0, 0.0, 1.0]), p(&[1.0, 1.0, 1.0, 1.0, 1.0])], vec![]),
        (1, (0, 0), vec![p(&[1.0, 1.0]), p(&[0.0, 0.0, 0.0, 0.0, 2.0])], vec![p(&[3.0, -1.0, 0.0, 1.0])]),
        (1, (1, 1), vec![p(&[0.0, 1.0]), p(&[1.0]), p(&[0.0, 0.0, 1.0]), p(&[2.0, -1.0, 0.5])], vec![p(&[1.0, 0.0, 1.0]), p(&[0.0, 0.0, 0.0, -1.0])]),
        (1, (2, -1), vec![p(&[1.0, 2.0, 3.0, 4.0]), p(&[0.0]), p(&[0.0, 1.0]), p(&[-1.0, 0.0, 0.0, 0.0, 1.0])], vec![p(&[0.5, 0.5]), p(&[1.0])]),
        (1, (0, 1), vec![p(&[1.0, 0.0, -2.0]), p(&[0.0, 3.0]), p(&[1.0]), p(&[0.0, 0.0, 1.0, 1.0])], vec![p(&[2.0, 1.0]), p(&[0.0, 0.0, 0.0, 1.0])]),
        (1, (3, 1), vec![p(&[0.0, 0.0, 0.0, 0.0, 1.0]), p(&[1.0, -1.0]), p(&[0.0, 2.0]), p(&[1.0])], vec![p(&[1.0, 1.0, 1.0, 1.0]), p(&[0.0, 1.0])]),
        (0, (2, 2), vec![p(&[-1.0, 0.0, 0.0, 2.0, -0.5]), p(&[0.0, 0.0, 3.0])], vec![]),
    ];
    specs
        .into_iter()
        .map(|(deg, mode, ta, tb)| exact_form(deg, mode, ta, tb).expect("well-formed sample"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fibre_d_squares_to_zero() {
        for mode in [(0, 0), (1, 0), (2, -3)] {
            let dd = fibre_d(1, mode) * fibre_d(0, mode);
            assert!(dd.amax() == 0.0);
        }
    }

    #[test]
    fn samples_are_closed() {
        let forms = sample_forms();
        assert_eq!(forms.len(), 10);
        assert!(forms.iter().all(|w| w.is_closed(1e-12)));
    }

    #[test]
    fn reconstruction_holds() {
        let grid = LogGrid::default();
        for w in sample_forms() {
            let r = reconstruct(&w, 0.75, &grid).unwrap();
            assert!(r.max_error() <= 1e-8, "{r:?}");
        }
    }

    #[test]
    fn harmonic_restriction_is_not_exact() {
        // dy₂ pulled back from the fibre is closed but not exact on F
        let w = TorusConeForm::new(1, (0, 0), vec![Poly(vec![0.0]), Poly(vec![1.0])], vec![Poly(vec![0.0])]).unwrap();
        assert!(w.is_closed(0.0));
        assert!(matches!(reconstruct(&w, 0.75, &LogGrid::default()), Err(RadialError::NotExact(_))));
    }
}
