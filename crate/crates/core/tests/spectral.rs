mod common;

use common::*;
use edgehodge_core::spectral::*;
use edgehodge_core::{SpectrumError, Q};
use num_traits::Zero;
use proptest::prelude::*;

fn ex(n: i64, d: i64) -> Real {
    Real::Exact(q(n, d))
}

/// Characteristic polynomial of the radial coefficient matrix, evaluated at `γ`:
/// `γ² + (f − 2a)γ + k(f − k − 2a) − λ²`.
fn char_poly(f: usize, a: &Q, k: usize, l2: &Q, g: &Q) -> Q {
    let (f, k) = (qi(f as i64), qi(k as i64));
    g * g + (&f - a * qi(2)) * g + &k * (&f - &k - a * qi(2)) - l2
}

fn char_poly_f64(f: usize, a: f64, k: usize, l2: f64, g: f64) -> f64 {
    let (f, k) = (f as f64, k as f64);
    g * g + (f - 2.0 * a) * g + k * (f - k - 2.0 * a) - l2
}

#[test]
fn root_examples() {
    let r = indicial_roots(1, &qi(0), 0, &ex(0, 1));
    assert_eq!((r.minus, r.plus), (ex(-1, 1), ex(0, 1)));
    let r = indicial_roots(2, &qi(0), 1, &ex(0, 1));
    assert!(r.double_root);
    assert_eq!((r.minus.clone(), r.plus.clone()), (ex(-1, 1), ex(-1, 1)));
    let r = indicial_roots(3, &q(1, 2), 1, &ex(1, 1));
    assert_eq!((r.minus, r.plus), (ex(-2, 1), ex(0, 1)));
}

#[test]
fn irrational_roots_carry_error_bounds() {
    let r = indicial_roots(1, &qi(0), 0, &ex(1, 1));
    assert!(!r.minus.is_exact());
    let expect = -0.5 - 0.5 * 5f64.sqrt();
    assert!((r.minus.to_f64() - expect).abs() <= r.minus.error_bound().max(1e-15));
    assert!(r.minus.error_bound() < 1e-12);
}

#[test]
fn critical_examples() {
    let circle = closed_form::circle(&qi(1), 4);
    for a in [qi(0), q(1, 4), q(-3, 4)] {
        if window_degree(1, &a).is_none() {
            assert!(critical_roots(1, &a, &circle).is_empty());
        }
    }
    assert!(critical_roots(1, &qi(0), &circle).is_empty());
    assert!(essentially_selfadjoint(1, &qi(0), &circle));

    let torus = closed_form::torus(&qi(1), &qi(1), 3);
    let crit = critical_roots(2, &qi(0), &torus);
    assert_eq!(crit.len(), 1);
    assert_eq!(crit[0].degree, 1);
    assert!(crit[0].double_root && crit[0].lambda2.is_zero());
    assert_eq!(crit[0].minus, ex(-1, 1));
    assert_eq!(crit[0].multiplicity, 2);
    assert!(!essentially_selfadjoint(2, &qi(0), &torus));

    let s2 = closed_form::sphere2(&qi(1), 6);
    let low = s2.degrees()[1].iter().map(|l| l.value.to_f64()).fold(f64::INFINITY, f64::min);
    assert!(low >= 1.0);
    assert_eq!(s2.betti(), [1, 0, 1]);
    assert!(critical_roots(2, &qi(0), &s2).is_empty());
    assert!(essentially_selfadjoint(2, &qi(0), &s2));
}

#[test]
fn window_boundary_is_flagged_not_critical() {
    // (f − 2a − 2k)² + 4λ² = 1 exactly: k = 1, f = 2, a = 0, λ² = 1/4
    let spec = FibreSpectrum::new(
        vec![vec![], vec![SpectralLine { value: ex(1, 4), multiplicity: 1 }], vec![]],
        Provenance::ClosedForm,
    )
    .unwrap();
    let scan = scan_critical(2, &qi(0), &spec);
    assert!(scan.critical.is_empty());
    assert_eq!(scan.boundary.len(), 1);
    assert!(essentially_selfadjoint(2, &qi(0), &spec));
}

#[test]
fn unique_extension_examples() {
    assert!(unique_closed_extension_d(3, &qi(0), &[1, 0, 0, 1]));
    assert!(!unique_closed_extension_d(2, &qi(0), &[1, 2, 1]));
    assert!(!unique_closed_extension_d(2, &qi(1), &[1, 2, 1]));
    assert_eq!(window_degree(2, &qi(1)), Some(0));
    assert!(unique_closed_extension_d(2, &qi(0), &[1, 0, 1]));
}

#[test]
fn l2_cutoff_examples() {
    let c = l2_cutoff(&ex(0, 1), 1, &qi(0));
    assert!(c.member);
    assert_eq!(c.critical_weight, ex(1, 1));
    let c = l2_cutoff(&ex(-1, 2), 1, &qi(0));
    assert!(!c.member);
    let c = l2_cutoff(&ex(-1, 1), 1, &qi(0));
    assert!(!c.member);
    assert_eq!(c.critical_weight, ex(0, 1));
}

#[test]
fn spectrum_validation() {
    let bad = FibreSpectrum::new(vec![vec![SpectralLine { value: ex(-1, 1), multiplicity: 1 }]], Provenance::Discrete);
    assert!(bad.is_err());
    let unsorted = FibreSpectrum::new(
        vec![vec![SpectralLine { value: ex(2, 1), multiplicity: 1 }, SpectralLine { value: ex(1, 1), multiplicity: 1 }]],
        Provenance::Discrete,
    );
    assert!(unsorted.is_err());
    let torus = closed_form::torus(&qi(1), &q(1, 2), 2);
    assert!(torus.check_betti(&[1, 2, 1]).is_ok());
    assert!(matches!(torus.check_betti(&[1, 1, 1]), Err(SpectrumError::BettiMismatch { .. })));
}

fn weight() -> impl Strategy<Value = Q> {
    (-16i64..16, prop_oneof![Just(1i64), Just(2), Just(4), Just(3)]).prop_map(|(n, d)| q(n, d))
}

fn lambda2() -> impl Strategy<Value = Q> {
    prop_oneof![Just(0i64), 0i64..40].prop_flat_map(|n| (Just(n), 1i64..5)).prop_map(|(n, d)| q(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn roots_solve_the_characteristic_polynomial(f in 0usize..8, kk in 0usize..8, a in weight(), l2 in lambda2()) {
        let k = kk.min(f);
        let r = indicial_roots(f, &a, k, &Real::Exact(l2.clone()));
        match (&r.minus, &r.plus) {
            (Real::Exact(m), Real::Exact(p)) => {
                prop_assert!(char_poly(f, &a, k, &l2, m).is_zero());
                prop_assert!(char_poly(f, &a, k, &l2, p).is_zero());
                prop_assert_eq!(m + p, &a * qi(2) - qi(f as i64));
                prop_assert!(m <= p);
            }
            _ => {
                let (m, p) = (r.minus.to_f64(), r.plus.to_f64());
                let (af, l) = (to_f(&a), to_f(&l2));
                let scale = 1.0 + m.abs().max(p.abs());
                prop_assert!(char_poly_f64(f, af, k, l, m).abs() < 1e-12 * scale * scale);
                prop_assert!(char_poly_f64(f, af, k, l, p).abs() < 1e-12 * scale * scale);
                prop_assert!(((m + p) - (2.0 * af - f as f64)).abs() <= 4.0 * f64::EPSILON * scale);
                prop_assert!(m <= p);
            }
        }
    }

    #[test]
    fn zero_eigenvalue_factorisation(f in 0usize..10, kk in 0usize..10, a in weight()) {
        let k = kk.min(f);
        let r = indicial_roots(f, &a, k, &Real::Exact(Q::zero()));
        let (x, y) = (qi(-(k as i64)), qi(k as i64) + &a * qi(2) - qi(f as i64));
        let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
        prop_assert_eq!(r.minus, Real::Exact(lo.clone()));
        prop_assert_eq!(r.plus, Real::Exact(hi.clone()));
        prop_assert_eq!(r.double_root, lo == hi);
    }

    #[test]
    fn reflection_preserves_roots(f in 0usize..10, kk in 0usize..10, n in -10i64..10, l2 in lambda2()) {
        let a = q(n, 2);
        let k = kk.min(f);
        let reflected = qi(f as i64) - &a * qi(2) - qi(k as i64);
        prop_assume!(reflected >= Q::zero());
        let k2: usize = reflected.to_integer().try_into().unwrap();
        let l = Real::Exact(l2);
        let (r1, r2) = (indicial_roots(f, &a, k, &l), indicial_roots(f, &a, k2, &l));
        prop_assert_eq!(discriminant(f, &a, k, &l), discriminant(f, &a, k2, &l));
        prop_assert_eq!(r1.minus, r2.minus);
        prop_assert_eq!(r1.plus, r2.plus);
    }

    #[test]
    fn selfadjoint_implies_unique_extension(
        kind in 0usize..3,
        s in 1i64..6,
        d in 1i64..6,
        a in weight(),
    ) {
        let scale = q(s, d);
        let spec = match kind {
            0 => closed_form::circle(&scale, 4),
            1 => closed_form::torus(&scale, &q(d, s), 3),
            _ => closed_form::sphere2(&scale, 4),
        };
        let f = spec.top_degree();
        if essentially_selfadjoint(f, &a, &spec) {
            prop_assert!(unique_closed_extension_d(f, &a, &spec.betti()));
        }
        let crit = critical_roots(f, &a, &spec);
        if window_degree(f, &a).is_none() {
            prop_assert!(crit.is_empty());
        }
        for pair in crit {
            // both roots inside (a − (f+1)/2, a − (f−1)/2)
            let lo = &a - q(f as i64 + 1, 2);
            let hi = &a - q(f as i64 - 1, 2);
            prop_assert_eq!(pair.minus.compare_q(&lo), Some(std::cmp::Ordering::Greater));
            prop_assert_eq!(pair.plus.compare_q(&hi), Some(std::cmp::Ordering::Less));
        }
    }
}
