mod common;

use common::*;
use edgehodge_core::cochain::{alternating_sum, convolve, standard, CochainComplex, ComplexMap, QMatrix};
use edgehodge_core::CochainError;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn verify_examples() {
    assert!(standard::circle().verify());
    let bad = CochainComplex::new(0, vec![1, 1, 1], vec![QMatrix::from_int_rows(1, &[&[1]]), QMatrix::from_int_rows(1, &[&[1]])]).unwrap();
    assert!(!bad.verify());
    assert!(CochainComplex::zero_differentials(0, vec![3, 0, 5]).verify());
}

#[test]
fn shape_mismatch_is_rejected() {
    let err = CochainComplex::new(0, vec![2, 2], vec![QMatrix::zeros(3, 2)]).unwrap_err();
    assert!(matches!(err, CochainError::ShapeMismatch { .. }));
}

#[test]
fn cohomology_examples() {
    assert_eq!(standard::circle().cohomology_dims().unwrap(), [1, 1]);
    assert_eq!(standard::torus().cohomology_dims().unwrap(), [1, 2, 1]);
    assert_eq!(standard::torus().dims(), [4, 8, 4]);
    assert!(CochainComplex::empty().cohomology_dims().unwrap().is_empty());
    assert_eq!(standard::sphere2().cohomology_dims().unwrap(), [1, 0, 1]);
    for c in [standard::circle(), standard::torus(), standard::sphere2(), standard::cycle(7)] {
        assert_eq!(c.cohomology_dims().unwrap(), betti(&c));
    }
}

#[test]
fn unverified_complex_has_no_cohomology() {
    let bad = CochainComplex::new(0, vec![1, 1, 1], vec![QMatrix::from_int_rows(1, &[&[1]]), QMatrix::from_int_rows(1, &[&[1]])]).unwrap();
    assert_eq!(bad.cohomology_dims(), Err(CochainError::NotAComplex));
}

#[test]
fn tensor_examples() {
    let c = standard::circle();
    assert_eq!(c.tensor(&c).unwrap().cohomology_dims().unwrap(), [1, 2, 1]);
    assert_eq!(c.tensor(&standard::point()).unwrap().cohomology_dims().unwrap(), [1, 1]);
    let cyl = c.tensor(&standard::interval()).unwrap();
    assert_eq!(cyl.cohomology_dims().unwrap(), [1, 1, 0]);
    assert_eq!(betti(&cyl), [1, 1, 0]);
}

#[test]
fn mapping_cone_examples() {
    let c = standard::circle();
    let id = ComplexMap::identity(&c);
    assert!(id.mapping_cone().unwrap().cohomology_dims().unwrap().iter().all(|&h| h == 0));

    let zero = ComplexMap::zero(&c, &c);
    let cone = zero.mapping_cone().unwrap();
    assert_eq!(cone.min_degree(), -1);
    assert_eq!(cone.cohomology_dims().unwrap(), [1, 2, 1]);

    // vertex inclusion pt → S¹ as a restriction S¹ → pt: relative cohomology (0, 1)
    let restrict = ComplexMap::new(c.clone(), standard::point(), 0, vec![QMatrix::from_int_rows(2, &[&[1, 0]])]).unwrap();
    assert!(restrict.is_chain_map());
    let rel = restrict.relative_complex().unwrap();
    let h = rel.cohomology_dims().unwrap();
    let at = |k: i32| if k >= rel.min_degree() && ((k - rel.min_degree()) as usize) < h.len() { h[(k - rel.min_degree()) as usize] } else { 0 };
    assert_eq!((at(0), at(1)), (0, 1));
}

#[test]
fn cone_euler_characteristic() {
    let c = standard::circle();
    let t = standard::torus();
    let unit = QMatrix::from_fn(4, 2, |i, j| if i % 2 == j { qi(1) } else { qi(0) });
    // the projection T² → S¹ onto the first factor, pulled back
    let maps = vec![unit, QMatrix::zeros(8, 2)];
    let phi = ComplexMap::new(c.clone(), t.clone(), 0, maps).unwrap();
    if phi.is_chain_map() {
        let cone = phi.mapping_cone().unwrap();
        assert_eq!(cone.euler_characteristic(), t.euler_characteristic() - c.euler_characteristic());
    }
    let z = ComplexMap::zero(&c, &t);
    assert_eq!(z.mapping_cone().unwrap().euler_characteristic(), t.euler_characteristic() - c.euler_characteristic());
}

/// Pullback along the double cover of the 4-cycle onto the 2-cycle.
fn double_cover() -> ComplexMap {
    let (base, cover) = (standard::cycle(2), standard::cycle(4));
    let fold = QMatrix::from_fn(4, 2, |i, j| if i % 2 == j { qi(1) } else { qi(0) });
    ComplexMap::new(base, cover, 0, vec![fold.clone(), fold]).unwrap()
}

#[test]
fn induced_map_rank_examples() {
    let t = standard::torus();
    let id = ComplexMap::identity(&t);
    for k in 0..3 {
        assert_eq!(id.induced_map_rank(k).unwrap(), t.betti(k).unwrap());
        assert_eq!(ComplexMap::zero(&t, &t).induced_map_rank(k).unwrap(), 0);
    }
    let cover = double_cover();
    assert!(cover.is_chain_map());
    assert_eq!(cover.induced_map_rank(1).unwrap(), 1);
    assert!(matches!(id.induced_map_rank(7), Err(CochainError::DegreeOutOfRange { .. })));
}

#[test]
fn shift_and_composition() {
    let c = standard::circle();
    let s = c.shift_degrees(-2);
    assert_eq!(s.min_degree(), -2);
    assert_eq!(s.cohomology_dims().unwrap(), [1, 1]);
    let cover = double_cover();
    let id = ComplexMap::identity(cover.target());
    assert_eq!(cover.then(&id).unwrap().induced_map_rank(1).unwrap(), 1);
}

fn small_betti() -> impl Strategy<Value = (Vec<usize>, Vec<usize>, u64)> {
    (1usize..=4)
        .prop_flat_map(|top| (prop::collection::vec(0usize..=2, top), prop::collection::vec(0usize..=2, top - 1), any::<u64>()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn basis_change_preserves_cohomology((h, pairs, seed) in small_betti()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let canon = canonical(&h, &pairs);
        let (c, _) = conjugate(&mut rng, &canon.complex);
        prop_assert!(c.verify());
        prop_assert_eq!(c.cohomology_dims().unwrap(), canon.betti.clone());
        prop_assert_eq!(betti(&c), canon.betti);
    }

    #[test]
    fn euler_characteristic_matches((h, pairs, seed) in small_betti()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (c, _) = conjugate(&mut rng, &canonical(&h, &pairs).complex);
        let hd = c.cohomology_dims().unwrap();
        prop_assert_eq!(c.euler_characteristic(), alternating_sum(0, &hd));
    }

    #[test]
    fn kunneth_convolution(
        (h1, p1, s1) in small_betti(),
        (h2, p2, s2) in small_betti(),
    ) {
        let mut r1 = ChaCha8Rng::seed_from_u64(s1);
        let mut r2 = ChaCha8Rng::seed_from_u64(s2);
        let (a, _) = conjugate(&mut r1, &canonical(&h1, &p1).complex);
        let (b, _) = conjugate(&mut r2, &canonical(&h2, &p2).complex);
        let t = a.tensor(&b).unwrap();
        prop_assert!(t.verify());
        prop_assert_eq!(t.cohomology_dims().unwrap(), convolve(&h1, &h2));
    }

    #[test]
    fn tensor_is_associative_on_cohomology(
        (h1, p1, s1) in small_betti(),
        (h2, p2, _s2) in small_betti(),
    ) {
        let mut r = ChaCha8Rng::seed_from_u64(s1);
        let (a, _) = conjugate(&mut r, &canonical(&h1, &p1).complex);
        let b = canonical(&h2, &p2).complex;
        let c = standard::circle();
        let left = a.tensor(&b).unwrap().tensor(&c).unwrap();
        let right = a.tensor(&b.tensor(&c).unwrap()).unwrap();
        prop_assert_eq!(left.cohomology_dims().unwrap(), right.cohomology_dims().unwrap());
    }

    /// A chain map that acts by a random matrix on the harmonic summands and by
    /// zero on the acyclic ones, seen through random bases on both sides.
    #[test]
    fn induced_rank_and_cone_sequence(
        (h, pairs, seed) in small_betti(),
        extra in prop::collection::vec(0usize..=1, 4),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        use rand::Rng;
        let top = h.len();
        let h2: Vec<usize> = (0..top).map(|k| h[k] + extra[k]).collect();
        let src = canonical(&h, &pairs);
        let tgt = canonical(&h2, &pairs);
        let blocks: Vec<Mat> = (0..top)
            .map(|k| (0..h2[k]).map(|_| (0..h[k]).map(|_| qi(rng.gen_range(-1..=1))).collect()).collect())
            .collect();
        let maps: Vec<QMatrix> = (0..top)
            .map(|k| QMatrix::from_fn(tgt.complex.dim(k as i32), src.complex.dim(k as i32), |i, j| {
                if i < h2[k] && j < h[k] { blocks[k][i][j].clone() } else { qi(0) }
            }))
            .collect();
        let (s, ps) = conjugate(&mut rng, &src.complex);
        let (t, pt) = conjugate(&mut rng, &tgt.complex);
        let conj: Vec<QMatrix> = (0..top)
            .map(|k| {
                let (r, c) = (t.dim(k as i32), s.dim(k as i32));
                if r == 0 || c == 0 { return QMatrix::zeros(r, c); }
                let m = mul(&mul(&pt[k], &from_q(&maps[k]), r, c), &inverse(&ps[k]).unwrap(), c, c);
                to_q(r, c, &m)
            })
            .collect();
        let phi = ComplexMap::new(s.clone(), t.clone(), 0, conj).unwrap();
        prop_assert!(phi.is_chain_map());
        let ranks: Vec<usize> = (0..top as i32).map(|k| phi.induced_map_rank(k).unwrap()).collect();
        for k in 0..top {
            let expect = if h[k] == 0 || h2[k] == 0 { 0 } else { rank(&blocks[k], h[k]) };
            prop_assert_eq!(ranks[k], expect);
        }
        // H^k(cone) = coker(φ_k) ⊕ ker(φ_{k+1})
        let cone = phi.mapping_cone().unwrap();
        let hc = cone.cohomology_dims().unwrap();
        for k in -1..top as i32 {
            let idx = (k - cone.min_degree()) as usize;
            let at = |v: &Vec<usize>, i: i32| if i >= 0 && (i as usize) < v.len() { v[i as usize] } else { 0 };
            let rk = |i: i32| if i >= 0 && (i as usize) < top { ranks[i as usize] } else { 0 };
            let expect = at(&h2, k) - rk(k) + at(&h, k + 1) - rk(k + 1);
            prop_assert_eq!(hc.get(idx).copied().unwrap_or(0), expect);
        }
    }
}
