//! Cone-level checks: weighted local cohomology, the pullback and homotopy
//! operators of the Poincaré lemma, min-domain membership of fibre-harmonic
//! modes, and numerical recovery of indicial exponents.
//!
//! Throughout, `e = f − 2k − 2a` is the exponent of the weighted volume for a
//! `k`-form pulled back from the fibre.

mod ode;
mod quadrature;
pub mod torus;

use alloc::vec::Vec;
use core::cmp::Ordering;

use num_traits::{One, ToPrimitive, Zero};

use crate::cochain::q_to_f64;
use crate::error::RadialError;
use crate::spectral::Real;
use crate::Q;

pub use ode::{indicial_matrix, mode_exponent, mode_exponent_on, ModeExponents};

fn q_int(n: i64) -> Q {
    Q::from_integer(n.into())
}

fn half(n: i64) -> Q {
    Q::new(n.into(), 2.into())
}

/// Equal steps in `log x` from `x₀` to 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogGrid {
    x0: f64,
    per_decade: usize,
}

impl LogGrid {
    pub const DEFAULT_X0: f64 = 1e-4;
    pub const DEFAULT_PER_DECADE: usize = 400;

    pub fn new(x0: f64, per_decade: usize) -> Result<Self, RadialError> {
        if !(x0 > 0.0 && x0 <= 0.1) {
            return Err(RadialError::BadGrid(x0));
        }
        if per_decade < 4 {
            return Err(RadialError::Quadrature(per_decade));
        }
        Ok(LogGrid { x0, per_decade })
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn per_decade(&self) -> usize {
        self.per_decade
    }

    pub fn len(&self) -> usize {
        let decades = -libm::log10(self.x0);
        libm::ceil(decades * self.per_decade as f64 - 1e-9) as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Increasing, first point `x₀`, last point exactly 1.
    pub fn points(&self) -> Vec<f64> {
        let n = self.len() - 1;
        let l0 = libm::log(self.x0);
        (0..=n).map(|i| if i == n { 1.0 } else { libm::exp(l0 * (1.0 - i as f64 / n as f64)) }).collect()
    }
}

impl Default for LogGrid {
    fn default() -> Self {
        LogGrid { x0: Self::DEFAULT_X0, per_decade: Self::DEFAULT_PER_DECADE }
    }
}

/// How a profile's `α` coefficient is known.
#[derive(Clone, Debug, PartialEq)]
pub enum ProfileForm {
    Sampled,
    /// `a(x) = x^γ` exactly.
    Power { gamma: Q },
}

/// Radial coefficients of one fibre mode: `ω = a(x)φ + dx ∧ t(x)ψ`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConeModeProfile {
    degree: usize,
    lambda2: Real,
    xs: Vec<f64>,
    alpha: Vec<f64>,
    beta: Vec<f64>,
    form: ProfileForm,
}

impl ConeModeProfile {
    pub fn from_samples(degree: usize, lambda2: Real, xs: Vec<f64>, alpha: Vec<f64>, beta: Vec<f64>) -> Result<Self, RadialError> {
        quadrature::check_grid(&xs, &alpha)?;
        quadrature::check_grid(&xs, &beta)?;
        if xs[0] <= 0.0 {
            return Err(RadialError::BadProfile);
        }
        Ok(ConeModeProfile { degree, lambda2, xs, alpha, beta, form: ProfileForm::Sampled })
    }

    pub fn from_fn(degree: usize, lambda2: Real, grid: &LogGrid, alpha: impl Fn(f64) -> f64, beta: impl Fn(f64) -> f64) -> Result<Self, RadialError> {
        let xs = grid.points();
        let a = xs.iter().map(|x| alpha(*x)).collect();
        let b = xs.iter().map(|x| beta(*x)).collect();
        Self::from_samples(degree, lambda2, xs, a, b)
    }

    /// Fibre-harmonic mode with `a(x) = x^γ`, `t ≡ 0`, tagged as closed form.
    pub fn power(degree: usize, gamma: Q, grid: &LogGrid) -> Result<Self, RadialError> {
        let g = q_to_f64(&gamma);
        let mut p = Self::from_fn(degree, Real::Exact(Q::zero()), grid, |x| libm::pow(x, g), |_| 0.0)?;
        p.form = ProfileForm::Power { gamma };
        Ok(p)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn lambda2(&self) -> &Real {
        &self.lambda2
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    pub fn form(&self) -> &ProfileForm {
        &self.form
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalCohomologyTable {
    pub f: usize,
    pub a: Q,
    pub max: Vec<usize>,
    pub min: Vec<usize>,
}

/// Weighted cohomology of the truncated cone: `H^k(F)` survives for the max
/// extension when `k < (f+1)/2 − a` and for the min extension when
/// `k ≤ (f−1)/2 − a`.
pub fn local_cohomology(fibre_betti: &[usize], f: usize, a: &Q) -> LocalCohomologyTable {
    let max_cut = half(f as i64 + 1) - a;
    let min_cut = half(f as i64 - 1) - a;
    let keep = |pass: &dyn Fn(&Q) -> bool| (0..=f).map(|k| if pass(&q_int(k as i64)) { fibre_betti.get(k).copied().unwrap_or(0) } else { 0 }).collect();
    LocalCohomologyTable { f, a: a.clone(), max: keep(&|k| *k < max_cut), min: keep(&|k| *k <= min_cut) }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PullbackNorm {
    /// `‖r*η‖² / ‖η‖² = ∫₀¹ x^e dx`.
    Finite(Q),
    Divergent,
}

impl PullbackNorm {
    pub fn is_finite(&self) -> bool {
        matches!(self, PullbackNorm::Finite(_))
    }
}

pub fn volume_exponent(k: usize, f: usize, a: &Q) -> Q {
    q_int(f as i64 - 2 * k as i64) - a * q_int(2)
}

pub fn pullback_norm(k: usize, f: usize, a: &Q) -> PullbackNorm {
    let e = volume_exponent(k, f, a);
    if e > -Q::one() {
        PullbackNorm::Finite((e + Q::one()).recip())
    } else {
        PullbackNorm::Divergent
    }
}

/// `(∫_{1/2}^1 x^e dx)^{-1}`; exact when `e` is an integer.
pub fn slice_constant(k: usize, f: usize, a: &Q) -> Real {
    let e = volume_exponent(k, f, a);
    let e1 = &e + Q::one();
    if e1.is_zero() {
        return Real::Approx { value: 1.0 / core::f64::consts::LN_2, err: f64::EPSILON };
    }
    if e.is_integer() {
        let p = e1.to_integer().to_i64().expect("small exponent");
        // 2^{-(e+1)}
        let two_pow = if p >= 0 { Q::new(1.into(), num_bigint::BigInt::from(2u8).pow(p as u32)) } else { q_int(1i64 << (-p)) };
        return Real::Exact(e1 / (Q::one() - two_pow));
    }
    let ef = q_to_f64(&e1);
    let value = ef / (1.0 - libm::pow(2.0, -ef));
    Real::Approx { value, err: 8.0 * f64::EPSILON * value.abs() }
}

/// Coefficients bounding `‖K_c ω‖² ≤ C ‖β‖²`, with `e = f − 2k + 2 − 2a`.
#[derive(Clone, Debug, PartialEq)]
pub struct NormBound {
    /// `∫₀¹ (x − c(x/c)^e)/(1−e) dx`, or `∫₀¹ x(ln x − ln c) dx` when `e = 1`.
    pub displayed: f64,
    /// The same integrand in absolute value; a valid Cauchy–Schwarz constant.
    pub bound: f64,
    pub log_case: bool,
}

pub fn norm_bound(k: usize, f: usize, a: &Q, c: f64) -> Result<NormBound, RadialError> {
    if k == 0 {
        return Err(RadialError::Degree(0));
    }
    let e = volume_exponent(k - 1, f, a);
    if e <= -Q::one() {
        return Err(RadialError::Unbounded { k: k as i64 });
    }
    if e.is_one() {
        let displayed = -0.25 - 0.5 * libm::log(c);
        return Ok(NormBound { displayed, bound: displayed + 0.5 * c * c, log_case: true });
    }
    let ef = q_to_f64(&e);
    let displayed = (0.5 - libm::pow(c, 1.0 - ef) / (ef + 1.0)) / (1.0 - ef);
    Ok(NormBound { displayed, bound: displayed + c * c / (ef + 1.0), log_case: false })
}

#[derive(Clone, Debug, PartialEq)]
pub struct HomotopyResult {
    pub xs: Vec<f64>,
    /// `K_c ω = ∫_c^x t(s) ds` at the grid nodes.
    pub values: Vec<f64>,
    /// `‖K_c ω‖² / ‖β‖²`, with `β` extended by zero below `x₀`.
    pub norm_ratio: f64,
    pub bound: NormBound,
}

impl HomotopyResult {
    pub fn within_bound(&self) -> bool {
        self.norm_ratio <= self.bound.bound * (1.0 + 1e-9) + 1e-15
    }
}

/// The homotopy operator on one mode, for a `k`-form with `k < (f+3)/2 − a`.
#[allow(non_snake_case)]
pub fn homotopy_K(profile: &ConeModeProfile, f: usize, a: &Q, c: f64) -> Result<HomotopyResult, RadialError> {
    if !(c > 0.5 && c < 1.0) {
        return Err(RadialError::BadBasepoint(c));
    }
    let bound = norm_bound(profile.degree, f, a, c)?;
    let xs = &profile.xs;
    let values = quadrature::cumulative(xs, &profile.beta, c)?.values;
    let e = q_to_f64(&volume_exponent(profile.degree - 1, f, a));
    let weighted = |v: &[f64]| -> Vec<f64> { xs.iter().zip(v).map(|(x, y)| y * y * libm::pow(*x, e)).collect() };
    let beta_norm = quadrature::integrate(xs, &weighted(&profile.beta))?;
    let tail = values[0] * values[0] * libm::pow(xs[0], e + 1.0) / (e + 1.0);
    let k_norm = quadrature::integrate(xs, &weighted(&values))? + tail;
    let norm_ratio = if beta_norm > 0.0 { k_norm / beta_norm } else { 0.0 };
    Ok(HomotopyResult { xs: xs.clone(), values, norm_ratio, bound })
}

/// Where `k` sits relative to the open window `((f−1)/2 − a, (f+1)/2 − a)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WindowPosition {
    Inside,
    Endpoint,
    Outside,
}

pub fn window_position(k: usize, f: usize, a: &Q) -> WindowPosition {
    let lo = half(f as i64 - 1) - a;
    let hi = half(f as i64 + 1) - a;
    let k = q_int(k as i64);
    if k == lo || k == hi {
        WindowPosition::Endpoint
    } else if k > lo && k < hi {
        WindowPosition::Inside
    } else {
        WindowPosition::Outside
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MembershipVerdict {
    Member,
    NotMember,
    /// Fitted exponent within the slope tolerance of 0.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Membership {
    pub verdict: MembershipVerdict,
    pub position: WindowPosition,
    /// Decay exponent fitted on the last decade, when numerics were used.
    pub fitted_slope: Option<f64>,
}

impl Membership {
    pub fn is_member(&self) -> bool {
        self.verdict == MembershipVerdict::Member
    }
}

pub const SLOPE_TOLERANCE: f64 = 1e-3;

/// Whether a fibre-harmonic mode `a(x)φ` in the max domain also lies in the
/// min domain. Only window degrees need `a(x) = o(1)`.
pub fn min_membership(k: usize, f: usize, a: &Q, profile: &ConeModeProfile) -> Result<Membership, RadialError> {
    if !profile.lambda2.is_zero() {
        return Err(RadialError::NotHarmonic(profile.lambda2.to_f64()));
    }
    let position = window_position(k, f, a);
    if position != WindowPosition::Inside {
        return Ok(Membership { verdict: MembershipVerdict::Member, position, fitted_slope: None });
    }
    if let ProfileForm::Power { gamma } = &profile.form {
        let verdict = match gamma.cmp(&Q::zero()) {
            Ordering::Greater => MembershipVerdict::Member,
            _ => MembershipVerdict::NotMember,
        };
        return Ok(Membership { verdict, position, fitted_slope: None });
    }
    let cut = profile.xs[0] * 10.0 * (1.0 + 1e-12);
    let (mut lx, mut ly) = (Vec::new(), Vec::new());
    for (x, v) in profile.xs.iter().zip(&profile.alpha) {
        if *x > cut {
            break;
        }
        lx.push(libm::log(*x));
        ly.push(libm::log(v.abs()));
    }
    if ly.iter().all(|v| *v == f64::NEG_INFINITY) {
        // identically zero near the tip
        return Ok(Membership { verdict: MembershipVerdict::Member, position, fitted_slope: None });
    }
    if lx.len() < 3 || ly.iter().any(|v| !v.is_finite()) {
        return Err(RadialError::BadProfile);
    }
    let s = ode::slope(&lx, &ly);
    let verdict = if s.abs() < SLOPE_TOLERANCE {
        MembershipVerdict::Inconclusive
    } else if s > 0.0 {
        MembershipVerdict::Member
    } else {
        MembershipVerdict::NotMember
    };
    Ok(Membership { verdict, position, fitted_slope: Some(s) })
}

/// Degrees whose constant extension has finite weighted norm; these are the
/// degrees the max table keeps.
pub fn finite_pullback_degrees(f: usize, a: &Q) -> Vec<usize> {
    (0..=f).filter(|k| pullback_norm(*k, f, a).is_finite()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n.into(), d.into())
    }

    #[test]
    fn local_tables() {
        let t = local_cohomology(&[1, 2, 1], 2, &q(0, 1));
        assert_eq!((t.max, t.min), (alloc::vec![1, 2, 0], alloc::vec![1, 0, 0]));
        let t = local_cohomology(&[1, 1], 1, &q(0, 1));
        assert_eq!((t.max, t.min), (alloc::vec![1, 0], alloc::vec![1, 0]));
        assert!(local_cohomology(&[1, 2, 1], 2, &q(3, 2)).max.iter().all(|d| *d == 0));
    }

    #[test]
    fn pullback_and_slice() {
        assert_eq!(pullback_norm(0, 2, &q(0, 1)), PullbackNorm::Finite(q(1, 3)));
        assert_eq!(pullback_norm(1, 2, &q(0, 1)), PullbackNorm::Finite(q(1, 1)));
        assert_eq!(pullback_norm(1, 1, &q(0, 1)), PullbackNorm::Divergent);
        assert_eq!(slice_constant(0, 2, &q(0, 1)), Real::Exact(q(24, 7)));
        assert_eq!(slice_constant(1, 2, &q(0, 1)), Real::Exact(q(2, 1)));
        assert!((slice_constant(1, 1, &q(0, 1)).to_f64() - 1.0 / core::f64::consts::LN_2).abs() < 1e-15);
        // e = −2: ∫_{1/2}^1 x^{-2} = 1
        assert_eq!(slice_constant(2, 2, &q(0, 1)), Real::Exact(q(1, 1)));
    }

    #[test]
    fn homotopy_of_linear_profile() {
        let grid = LogGrid::default();
        let p = ConeModeProfile::from_fn(1, Real::Exact(q(0, 1)), &grid, |_| 0.0, |x| x).unwrap();
        let r = homotopy_K(&p, 2, &q(0, 1), 0.75).unwrap();
        for (x, v) in r.xs.iter().zip(&r.values) {
            assert!((v - (x * x - 0.5625) / 2.0).abs() < 1e-14);
        }
        assert!(r.within_bound());
        let z = ConeModeProfile::from_fn(1, Real::Exact(q(0, 1)), &grid, |_| 0.0, |_| 0.0).unwrap();
        assert!(homotopy_K(&z, 2, &q(0, 1), 0.75).unwrap().values.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn displayed_coefficient_can_be_negative() {
        let b = norm_bound(1, 0, &q(0, 1), 0.75).unwrap(); // e = 0
        assert!(b.displayed < 0.0 && (b.bound - 0.3125).abs() < 1e-15);
        let l = norm_bound(1, 1, &q(0, 1), 0.75).unwrap();
        assert!(l.log_case && l.displayed < 0.0 && l.bound > 0.0);
        assert!(matches!(norm_bound(2, 0, &q(0, 1), 0.75), Err(RadialError::Unbounded { .. })));
    }

    #[test]
    fn membership_examples() {
        let grid = LogGrid::default();
        let one = ConeModeProfile::power(1, q(0, 1), &grid).unwrap();
        let root = ConeModeProfile::power(1, q(1, 2), &grid).unwrap();
        assert!(!min_membership(1, 2, &q(0, 1), &one).unwrap().is_member());
        assert!(min_membership(1, 2, &q(0, 1), &root).unwrap().is_member());
        let m = min_membership(1, 3, &q(0, 1), &one).unwrap();
        assert!(m.is_member() && m.position == WindowPosition::Endpoint);
        let sampled = ConeModeProfile::from_fn(1, Real::Exact(q(0, 1)), &grid, |x| libm::pow(x, 0.25), |_| 0.0).unwrap();
        let m = min_membership(1, 2, &q(0, 1), &sampled).unwrap();
        assert!(m.is_member() && (m.fitted_slope.unwrap() - 0.25).abs() < 1e-9);
        let flat = ConeModeProfile::from_fn(1, Real::Exact(q(0, 1)), &grid, |x| 2.0 + libm::pow(x, 2.0), |_| 0.0).unwrap();
        assert_eq!(min_membership(1, 2, &q(0, 1), &flat).unwrap().verdict, MembershipVerdict::Inconclusive);
    }

    #[test]
    fn grid_shape() {
        let g = LogGrid::default();
        let p = g.points();
        assert_eq!(p.len(), 1601);
        assert_eq!(*p.last().unwrap(), 1.0);
        assert!((p[0] - 1e-4).abs() < 1e-18);
        assert!(matches!(LogGrid::new(0.2, 400), Err(RadialError::BadGrid(_))));
    }
}
