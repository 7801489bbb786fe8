//! Indicial roots of the weighted Hodge–de Rham operator on a cone, the
//! critical weight window, and the self-adjointness predicates.
//!
//! For a fibre eigenvalue `λ²` of `Δ_F` on `k`-forms the indicial roots are
//!
//! ```text
//! γ± = a − f/2 ± ½ √((f − 2a − 2k)² + 4λ²)
//! ```
//!
//! A root lies in the critical window `(a − (f+1)/2, a − (f−1)/2)` exactly
//! when `(f − 2a − 2k)² + 4λ² < 1`.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::cochain::q_to_f64;
use crate::error::SpectrumError;
use crate::Q;

/// A real number known exactly (rational) or as a float with an absolute error bound.
#[derive(Clone, Debug, PartialEq)]
pub enum Real {
    Exact(Q),
    Approx { value: f64, err: f64 },
}

impl Real {
    pub fn exact_int(n: i64) -> Self {
        Real::Exact(Q::from_integer(n.into()))
    }

    pub fn approx(value: f64) -> Self {
        Real::Approx { value, err: 0.0 }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Real::Exact(q) => q_to_f64(q),
            Real::Approx { value, .. } => *value,
        }
    }

    pub fn error_bound(&self) -> f64 {
        match self {
            Real::Exact(_) => 0.0,
            Real::Approx { err, .. } => *err,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Real::Exact(_))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Real::Exact(q) => q.is_zero(),
            Real::Approx { value, .. } => *value == 0.0,
        }
    }

    /// Adds a rational, preserving exactness.
    pub fn add_q(&self, q: &Q) -> Real {
        match self {
            Real::Exact(x) => Real::Exact(x + q),
            Real::Approx { value, err } => Real::Approx { value: value + q_to_f64(q), err: *err + f64::EPSILON * value.abs() },
        }
    }

    /// Three-way comparison with a rational. `None` when the float error band
    /// straddles `q`.
    pub fn compare_q(&self, q: &Q) -> Option<Ordering> {
        match self {
            Real::Exact(x) => Some(x.cmp(q)),
            Real::Approx { value, err } => {
                let t = q_to_f64(q);
                let band = err.max(4.0 * f64::EPSILON * t.abs().max(value.abs()));
                if value - band > t {
                    Some(Ordering::Greater)
                } else if value + band < t {
                    Some(Ordering::Less)
                } else {
                    None
                }
            }
        }
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Real::Exact(q) => write!(f, "{q}"),
            Real::Approx { value, err } => write!(f, "{value:.12} ± {err:.1e}"),
        }
    }
}

/// Exact square root of a nonnegative rational when it is a perfect square.
pub fn exact_sqrt(q: &Q) -> Option<Q> {
    if q.is_negative() {
        return None;
    }
    let root = |n: &BigInt| {
        let r = n.sqrt();
        (&r * &r == *n).then_some(r)
    };
    Some(Q::new(root(q.numer())?, root(q.denom())?))
}

/// Where a spectral value came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    ClosedForm,
    Discrete,
}

/// One eigenvalue `λ²` with its multiplicity.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralLine {
    pub value: Real,
    pub multiplicity: usize,
}

/// Per form degree, the low eigenvalues of the fibre Laplacian.
#[derive(Clone, Debug, PartialEq)]
pub struct FibreSpectrum {
    degrees: Vec<Vec<SpectralLine>>,
    provenance: Provenance,
}

impl FibreSpectrum {
    /// Checks that every eigenvalue is nonnegative and each degree is sorted.
    pub fn new(degrees: Vec<Vec<SpectralLine>>, provenance: Provenance) -> Result<Self, SpectrumError> {
        for (k, lines) in degrees.iter().enumerate() {
            for line in lines {
                if line.value.compare_q(&Q::zero()) == Some(Ordering::Less) {
                    return Err(SpectrumError::Negative { degree: k, value: line.value.to_f64() });
                }
            }
            if lines.windows(2).any(|w| w[0].value.to_f64() > w[1].value.to_f64()) {
                return Err(SpectrumError::Unsorted(k));
            }
        }
        Ok(FibreSpectrum { degrees, provenance })
    }

    pub fn degrees(&self) -> &[Vec<SpectralLine>] {
        &self.degrees
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn top_degree(&self) -> usize {
        self.degrees.len().saturating_sub(1)
    }

    /// Total multiplicity of the exact zero eigenvalue in degree `k`.
    pub fn zero_multiplicity(&self, k: usize) -> usize {
        self.degrees.get(k).map_or(0, |lines| lines.iter().filter(|l| l.value.is_zero()).map(|l| l.multiplicity).sum())
    }

    /// Zero-mode multiplicities must equal the Betti numbers of `F`.
    pub fn check_betti(&self, betti: &[usize]) -> Result<(), SpectrumError> {
        for k in 0..self.degrees.len().max(betti.len()) {
            let zeros = self.zero_multiplicity(k);
            let b = betti.get(k).copied().unwrap_or(0);
            if zeros != b {
                return Err(SpectrumError::BettiMismatch { degree: k, zeros, betti: b });
            }
        }
        Ok(())
    }

    /// Fibre Betti numbers read off the zero modes.
    pub fn betti(&self) -> Vec<usize> {
        (0..self.degrees.len()).map(|k| self.zero_multiplicity(k)).collect()
    }
}

/// Closed-form spectra of flat circles and tori and the unit round 2-sphere.
pub mod closed_form {
    use alloc::collections::BTreeMap;
    use alloc::vec;

    use super::*;

    fn lines(values: BTreeMap<Q, usize>) -> Vec<SpectralLine> {
        values.into_iter().map(|(v, m)| SpectralLine { value: Real::Exact(v), multiplicity: m }).collect()
    }

    /// Circle of length `2π·scale`: `λ² = (m/scale)²`, `|m| ≤ max_mode`, in degrees 0 and 1.
    pub fn circle(scale: &Q, max_mode: u32) -> FibreSpectrum {
        let mut values = BTreeMap::new();
        for m in -(max_mode as i64)..=max_mode as i64 {
            let v = Q::from_integer(m.into()) / scale;
            *values.entry(&v * &v).or_insert(0) += 1;
        }
        let deg = lines(values);
        FibreSpectrum::new(vec![deg.clone(), deg], Provenance::ClosedForm).expect("valid circle spectrum")
    }

    /// Flat torus with periods `2π·s1 × 2π·s2`; 1-forms carry twice the scalar multiplicities.
    pub fn torus(s1: &Q, s2: &Q, max_mode: u32) -> FibreSpectrum {
        let mut values = BTreeMap::new();
        let r = max_mode as i64;
        for m in -r..=r {
            for n in -r..=r {
                let (x, y) = (Q::from_integer(m.into()) / s1, Q::from_integer(n.into()) / s2);
                *values.entry(&x * &x + &y * &y).or_insert(0) += 1;
            }
        }
        let scalar = lines(values);
        let one_forms = scalar.iter().map(|l| SpectralLine { value: l.value.clone(), multiplicity: 2 * l.multiplicity }).collect();
        FibreSpectrum::new(vec![scalar.clone(), one_forms, scalar], Provenance::ClosedForm).expect("valid torus spectrum")
    }

    /// Round sphere of radius `radius`: `l(l+1)/r²`; 1-forms start at `l = 1`
    /// with multiplicity `2(2l+1)`.
    pub fn sphere2(radius: &Q, max_l: u32) -> FibreSpectrum {
        let r2 = radius * radius;
        let value = |l: i64| Q::from_integer((l * (l + 1)).into()) / &r2;
        let scalar: Vec<SpectralLine> = (0..=max_l as i64)
            .map(|l| SpectralLine { value: Real::Exact(value(l)), multiplicity: (2 * l + 1) as usize })
            .collect();
        let one_forms = (1..=max_l as i64)
            .map(|l| SpectralLine { value: Real::Exact(value(l)), multiplicity: (2 * (2 * l + 1)) as usize })
            .collect();
        FibreSpectrum::new(vec![scalar.clone(), one_forms, scalar], Provenance::ClosedForm).expect("valid sphere spectrum")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IndicialRootPair {
    pub minus: Real,
    pub plus: Real,
    pub degree: usize,
    pub lambda2: Real,
    pub weight: Q,
    pub multiplicity: usize,
    /// Vanishing discriminant: `λ = 0` and `k = (f − 2a)/2`.
    pub double_root: bool,
}

fn q_int(n: i64) -> Q {
    Q::from_integer(n.into())
}

/// `(f − 2a − 2k)² + 4λ²`, exact when `λ²` is.
pub fn discriminant(f: usize, a: &Q, k: usize, lambda2: &Real) -> Real {
    let t = q_int(f as i64) - a * q_int(2) - q_int(2 * k as i64);
    let base = &t * &t;
    match lambda2 {
        Real::Exact(l) => Real::Exact(base + l * q_int(4)),
        Real::Approx { value, err } => {
            let v = q_to_f64(&base) + 4.0 * value;
            Real::Approx { value: v, err: 4.0 * err + 2.0 * f64::EPSILON * v.abs() }
        }
    }
}

/// The indicial root pair `γ±` for one fibre eigenvalue.
pub fn indicial_roots(f: usize, a: &Q, k: usize, lambda2: &Real) -> IndicialRootPair {
    let center = a - Q::new((f as i64).into(), 2.into());
    let disc = discriminant(f, a, k, lambda2);
    let (minus, plus) = match &disc {
        Real::Exact(d) => match exact_sqrt(d) {
            Some(s) => {
                let h = s / q_int(2);
                (Real::Exact(&center - &h), Real::Exact(&center + &h))
            }
            None => float_pair(&center, q_to_f64(d), 0.0),
        },
        Real::Approx { value, err } => float_pair(&center, *value, *err),
    };
    let double_root = disc.is_zero();
    IndicialRootPair { minus, plus, degree: k, lambda2: lambda2.clone(), weight: a.clone(), multiplicity: 1, double_root }
}

fn float_pair(center: &Q, disc: f64, disc_err: f64) -> (Real, Real) {
    let c = q_to_f64(center);
    let s = libm::sqrt(disc.max(0.0));
    // d√D = dD / (2√D); fall back to √err near zero
    let sqrt_err = if s > 0.0 { disc_err / (2.0 * s) } else { libm::sqrt(disc_err) };
    let h = 0.5 * s;
    let err = 0.5 * sqrt_err + 4.0 * f64::EPSILON * (c.abs() + h);
    (Real::Approx { value: c - h, err }, Real::Approx { value: c + h, err })
}

/// Outcome of scanning a spectrum for roots in the critical window.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CriticalScan {
    /// Pairs with `(f − 2a − 2k)² + 4λ² < 1`.
    pub critical: Vec<IndicialRootPair>,
    /// Pairs sitting on the window boundary (equality, or a float error band
    /// containing 1); classified as non-critical.
    pub boundary: Vec<IndicialRootPair>,
}

pub fn scan_critical(f: usize, a: &Q, spec: &FibreSpectrum) -> CriticalScan {
    let one = q_int(1);
    let mut scan = CriticalScan::default();
    for (k, lines) in spec.degrees().iter().enumerate() {
        for line in lines {
            let disc = discriminant(f, a, k, &line.value);
            let class = disc.compare_q(&one);
            if class == Some(Ordering::Greater) {
                continue;
            }
            let mut pair = indicial_roots(f, a, k, &line.value);
            pair.multiplicity = line.multiplicity;
            match class {
                Some(Ordering::Less) => scan.critical.push(pair),
                _ => scan.boundary.push(pair),
            }
        }
    }
    scan
}

/// Root pairs strictly inside the critical window.
pub fn critical_roots(f: usize, a: &Q, spec: &FibreSpectrum) -> Vec<IndicialRootPair> {
    scan_critical(f, a, spec).critical
}

/// `D_a` is essentially self-adjoint iff no indicial root lies in the critical window.
pub fn essentially_selfadjoint(f: usize, a: &Q, spec: &FibreSpectrum) -> bool {
    critical_roots(f, a, spec).is_empty()
}

/// The integer inside `((f−1)/2 − a, (f+1)/2 − a)`, if any.
pub fn window_degree(f: usize, a: &Q) -> Option<i64> {
    let lo = Q::new((f as i64 - 1).into(), 2.into()) - a;
    let hi = &lo + q_int(1);
    let q = lo.floor() + q_int(1);
    (q < hi).then(|| q.to_integer().to_i64().expect("small degree"))
}

/// `d_{max,a} = d_{min,a}` on the cone: the window holds no integer, or the
/// fibre has no cohomology in that degree.
pub fn unique_closed_extension_d(f: usize, a: &Q, fibre_betti: &[usize]) -> bool {
    match window_degree(f, a) {
        None => true,
        Some(q) if q < 0 => true,
        Some(q) => fibre_betti.get(q as usize).copied().unwrap_or(0) == 0,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct L2Cutoff {
    /// `x^γ` lies in `x^a L²` near the tip.
    pub member: bool,
    /// `δ(γ) = γ + (f+1)/2 − a`.
    pub critical_weight: Real,
}

pub fn l2_cutoff(gamma: &Real, f: usize, a: &Q) -> L2Cutoff {
    let threshold = a - Q::new((f as i64).into(), 2.into());
    let member = match gamma.compare_q(&threshold) {
        Some(o) => o == Ordering::Greater,
        None => gamma.to_f64() > q_to_f64(&threshold),
    };
    let shift = Q::new((f as i64 + 1).into(), 2.into()) - a;
    L2Cutoff { member, critical_weight: gamma.add_q(&shift) }
}
