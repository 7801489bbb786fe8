//! Intersection cohomology of spaces with simple edge singularities, the
//! weight-to-perversity dictionary for weighted L² de Rham and Hodge
//! cohomology, and numerical checks of the cone-level spectral data.
//!
//! Everything here is pure computation over `alloc`; file formats, reports
//! and the command line live in the `edgehodge` crate.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod cochain;
pub mod error;
pub mod fibredec;
pub mod radial;
pub mod spectral;
pub mod stratified;
pub mod weights;

/// Exact rational scalar used throughout.
pub type Q = num_rational::BigRational;

pub use error::{CochainError, FibreError, RadialError, SpectrumError, StratifiedError};

/// Parses `"p/q"`, `"p"` or a finite decimal such as `"-0.25"` into a rational.
pub fn parse_rational(s: &str) -> Option<Q> {
    use core::str::FromStr;
    let s = s.trim();
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let neg = int.starts_with('-');
        let int_part = num_bigint::BigInt::from_str(if int.is_empty() || int == "-" { "0" } else { int }).ok()?;
        let frac_part = num_bigint::BigInt::from_str(frac).ok()?;
        let scale = num_traits::pow(num_bigint::BigInt::from(10), frac.len());
        let mag = Q::new(frac_part, scale);
        let whole = Q::from_integer(int_part);
        return Some(if neg { whole - mag } else { whole + mag });
    }
    Q::from_str(s).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("3/4"), Some(Q::new(3.into(), 4.into())));
        assert_eq!(parse_rational("-2"), Some(Q::from_integer((-2).into())));
        assert_eq!(parse_rational("-0.25"), Some(Q::new((-1).into(), 4.into())));
        assert_eq!(parse_rational("1.5"), Some(Q::new(3.into(), 2.into())));
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(parse_rational("1/0"), None);
    }
}
