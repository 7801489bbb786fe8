//! Weight-to-perversity dictionary for weighted L² cohomology on incomplete
//! edge metrics, and the perversity formula for complete edge metrics.

use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::StratifiedError;
use crate::stratified::{complete_metric_perversity, middle_perversities, EdgeSpaceModel, Perversity};
use crate::Q;

/// Least integer strictly greater than `t`.
pub fn ceil_strict(t: &Q) -> i64 {
    t.floor().to_integer().to_i64().expect("weight fits in i64") + 1
}

/// Least integer greater than or equal to `t`.
pub fn ceil_weak(t: &Q) -> i64 {
    t.ceil().to_integer().to_i64().expect("weight fits in i64")
}

fn half() -> Q {
    Q::new(1.into(), 2.into())
}

/// Closed extension of `d` on weighted forms, or the minimal Hodge cohomology.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Extension {
    Max,
    Min,
    MinimalHodge,
}

impl Extension {
    pub fn as_str(self) -> &'static str {
        match self {
            Extension::Max => "max",
            Extension::Min => "min",
            Extension::MinimalHodge => "minimal-hodge",
        }
    }
}

/// Perversity computing the maximal weighted de Rham cohomology at weight `a`.
pub fn max_perversity(f: usize, a: &Q) -> Perversity {
    let (_, upper) = middle_perversities(f);
    let shift = if f.is_odd() { ceil_strict(&(a - Q::from_integer(1.into()))) } else { ceil_strict(&(a - half())) };
    upper.shifted(shift)
}

/// Perversity computing the minimal weighted de Rham cohomology at weight `a`.
pub fn min_perversity(f: usize, a: &Q) -> Perversity {
    let (lower, _) = middle_perversities(f);
    let shift = if f.is_odd() { ceil_weak(a) } else { ceil_weak(&(a - half())) };
    lower.shifted(shift)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedReport {
    pub weight: Q,
    pub extension: Extension,
    /// Perversity whose intersection cohomology is reported; for the minimal
    /// Hodge cohomology this is the target of the comparison map.
    pub perversity: Perversity,
    /// Source perversity of the comparison map (minimal Hodge only).
    pub source_perversity: Option<Perversity>,
    pub dims: Vec<usize>,
}

/// `H^*_{max/min}(M, g, a)` through the perversity dictionary.
pub fn weighted_derham_dims(space: &EdgeSpaceModel, a: &Q, ext: Extension) -> Result<WeightedReport, StratifiedError> {
    let perversity = match ext {
        Extension::Max => max_perversity(space.f(), a),
        Extension::Min => min_perversity(space.f(), a),
        Extension::MinimalHodge => return minimal_hodge_dims(space, a),
    };
    let dims = space.ih_dims(&perversity)?.dims;
    Ok(WeightedReport { weight: a.clone(), extension: ext, perversity, source_perversity: None, dims })
}

/// Minimal weighted Hodge cohomology: image of min-perversity IH in
/// max-perversity IH, degreewise.
pub fn minimal_hodge_dims(space: &EdgeSpaceModel, a: &Q) -> Result<WeightedReport, StratifiedError> {
    let src = min_perversity(space.f(), a);
    let tgt = max_perversity(space.f(), a);
    let dims = (0..=space.n()).map(|k| space.ih_map_rank(&src, &tgt, k)).collect::<Result<Vec<_>, _>>()?;
    Ok(WeightedReport {
        weight: a.clone(),
        extension: Extension::MinimalHodge,
        perversity: tgt,
        source_perversity: Some(src),
        dims,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum L2Verdict {
    Finite { dim: usize, perversity: Perversity },
    Infinite,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompleteL2Answer {
    pub degree: usize,
    pub verdict: L2Verdict,
}

/// True iff `k = j + (b+1)/2` for some fibre degree `j` with `H^j(F) ≠ 0`.
pub fn complete_l2_is_infinite(fibre_betti: &[usize], b: usize, k: usize) -> bool {
    if b.is_even() {
        return false;
    }
    let shift = (b + 1) / 2;
    k >= shift && fibre_betti.get(k - shift).is_some_and(|&h| h > 0)
}

/// L² Hodge cohomology of a complete edge metric in degree `k`.
pub fn complete_l2(space: &EdgeSpaceModel, k: usize) -> Result<CompleteL2Answer, StratifiedError> {
    if complete_l2_is_infinite(space.fibre_betti(), space.b(), k) {
        return Ok(CompleteL2Answer { degree: k, verdict: L2Verdict::Infinite });
    }
    let perversity = complete_metric_perversity(space.f(), space.b(), k);
    let dim = space.ih_dim(&perversity, k)?;
    Ok(CompleteL2Answer { degree: k, verdict: L2Verdict::Finite { dim, perversity } })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stratified::builtin;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n.into(), d.into())
    }

    #[test]
    fn strict_and_weak_ceilings() {
        assert_eq!(ceil_strict(&q(-1, 1)), 0);
        assert_eq!(ceil_weak(&q(0, 1)), 0);
        assert_eq!(ceil_strict(&q(-1, 2)), 0);
        assert_eq!(ceil_strict(&q(0, 1)), 1);
        assert_eq!(ceil_weak(&q(-1, 2)), 0);
        assert_eq!(ceil_weak(&q(7, 3)), 3);
    }

    #[test]
    fn zero_weight_is_middle_perversity() {
        for f in 0..6 {
            let (lower, upper) = middle_perversities(f);
            assert_eq!(max_perversity(f, &q(0, 1)), upper, "f = {f}");
            assert_eq!(min_perversity(f, &q(0, 1)), lower, "f = {f}");
        }
    }

    #[test]
    fn half_weights_coincide_for_even_fibres() {
        let (lower, upper) = middle_perversities(2);
        assert_eq!(max_perversity(2, &q(1, 2)), lower);
        assert_eq!(min_perversity(2, &q(1, 2)), lower);
        assert_eq!(max_perversity(2, &q(-1, 2)), upper);
        assert_eq!(min_perversity(2, &q(-1, 2)), upper);
    }

    #[test]
    fn cone_torus_reports() {
        let m = builtin("cone-torus").unwrap();
        let zero = q(0, 1);
        assert_eq!(weighted_derham_dims(&m, &zero, Extension::Max).unwrap().dims, [1, 2, 0, 0]);
        assert_eq!(weighted_derham_dims(&m, &zero, Extension::Min).unwrap().dims, [1, 0, 0, 0]);
        assert_eq!(minimal_hodge_dims(&m, &zero).unwrap().dims, [1, 0, 0, 0]);
    }

    #[test]
    fn complete_metric_verdicts() {
        let m = builtin("edge-torus-over-circle").unwrap();
        let infinite: Vec<usize> =
            (0..=m.n()).filter(|&k| complete_l2(&m, k).unwrap().verdict == L2Verdict::Infinite).collect();
        assert_eq!(infinite, [1, 2, 3]);
        match complete_l2(&m, 0).unwrap().verdict {
            L2Verdict::Finite { perversity, .. } => assert_eq!(perversity.value(), &q(5, 2)),
            L2Verdict::Infinite => panic!("degree 0 is finite"),
        }
        let cone = builtin("cone-torus").unwrap();
        assert!((0..=3).all(|k| matches!(complete_l2(&cone, k).unwrap().verdict, L2Verdict::Finite { .. })));
    }
}
