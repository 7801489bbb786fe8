//! Simple edge spaces and their perversity-indexed intersection cohomology.
//!
//! A model `X` is presented by the regular part `M`, the link bundle
//! `Y = ∂M = B × F`, and the restriction `r: M → Y`. The intersection complex
//! for a perversity `p` is glued at chain level from `M` and the tube complex
//! `B ⊗ τ_{≤c} F`, `c = ⌊f − 1 − p⌋`:
//!
//! ```text
//! IC_p^k = M^k ⊕ T_c^k ⊕ Y^{k−1},   d(m, t, y) = (dm, dt, r(m) − ι(t) − dy)
//! ```
//!
//! so that `IH^{k−1}(Y) → IH^k_p(X) → H^k(M) ⊕ H^k(T_c) → H^k(Y)` is exact.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::cochain::{convolve, standard, CochainComplex, ComplexMap, QMatrix, TensorLayout};
use crate::error::StratifiedError;
use crate::Q;

/// Perversity value at the single relevant codimension `f + 1`.
///
/// Any rational is allowed, including the extended ranges `p ≤ 0` and `p ≥ f`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perversity(pub Q);

impl Perversity {
    pub fn new(value: Q) -> Self {
        Perversity(value)
    }

    pub fn from_int(p: i64) -> Self {
        Perversity(Q::from_integer(p.into()))
    }

    pub fn value(&self) -> &Q {
        &self.0
    }

    /// `self + s` for an integer shift.
    pub fn shifted(&self, s: i64) -> Self {
        Perversity(&self.0 + Q::from_integer(s.into()))
    }

    /// Largest fibre degree kept by the cone truncation: `⌊f − 1 − p⌋`.
    pub fn cutoff(&self, f: usize) -> i64 {
        let t = Q::from_integer((f as i64 - 1).into()) - &self.0;
        t.floor().to_integer().to_i64().unwrap_or(i64::MIN)
    }
}

impl fmt::Display for Perversity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `(lower, upper)` middle perversities at codimension `f + 1`.
pub fn middle_perversities(f: usize) -> (Perversity, Perversity) {
    let f = f as i64;
    if f.is_odd() {
        let m = (f - 1) / 2;
        (Perversity::from_int(m), Perversity::from_int(m))
    } else {
        (Perversity::from_int(f / 2), Perversity::from_int(f / 2 - 1))
    }
}

/// Local intersection cohomology of the cone over `F` in degree `k`:
/// `H^k(F)` when `k ≤ f − 1 − p`, zero otherwise.
pub fn cone_local_ih(fibre_betti: &[usize], f: usize, p: &Perversity, k: usize) -> usize {
    if (k as i64) <= p.cutoff(f) {
        fibre_betti.get(k).copied().unwrap_or(0)
    } else {
        0
    }
}

/// Intersection cohomology dimensions for one perversity, degrees `0..=n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IHReport {
    pub perversity: Perversity,
    pub dims: Vec<usize>,
}

/// Finite presentation of a space with one simple edge stratum.
#[derive(Clone, Debug)]
pub struct EdgeSpaceModel {
    name: String,
    n: usize,
    b: usize,
    f: usize,
    base: CochainComplex,
    fibre: CochainComplex,
    regular: CochainComplex,
    link: CochainComplex,
    restriction: ComplexMap,
    bigrading: TensorLayout,
    fibre_betti: Vec<usize>,
    base_betti: Vec<usize>,
}

impl EdgeSpaceModel {
    /// Checks every model invariant: complexes are verified, `Y = B ⊗ F` with
    /// the given bigrading, `r: M → Y` is a chain map, and `n = b + f + 1`.
    pub fn new(
        name: impl Into<String>,
        base: CochainComplex,
        fibre: CochainComplex,
        regular: CochainComplex,
        link: CochainComplex,
        restriction: ComplexMap,
        bigrading: TensorLayout,
    ) -> Result<Self, StratifiedError> {
        for (label, c) in [("B", &base), ("F", &fibre), ("M", &regular), ("Y", &link)] {
            if !c.verify() {
                return Err(StratifiedError::Model(format!("{label} is not a cochain complex")));
            }
            if c.min_degree() != 0 || c.dims().is_empty() {
                return Err(StratifiedError::Model(format!("{label} must be nonempty and start in degree 0")));
            }
        }
        let (expected, layout) = base.tensor_with_layout(&fibre)?;
        if expected != link || layout != bigrading {
            return Err(StratifiedError::MissingBigrading);
        }
        if restriction.source() != &regular || restriction.target() != &link || !restriction.is_chain_map() {
            return Err(StratifiedError::InconsistentRestriction);
        }
        let b = base.top_degree() as usize;
        let f = fibre.top_degree() as usize;
        let fibre_betti = fibre.cohomology_dims()?;
        let base_betti = base.cohomology_dims()?;
        if link.cohomology_dims()? != convolve(&base_betti, &fibre_betti) {
            return Err(StratifiedError::Model("H(Y) differs from the Künneth convolution".into()));
        }
        if regular.top_degree() as usize > b + f + 1 {
            return Err(StratifiedError::Model("M has degrees above n".into()));
        }
        Ok(EdgeSpaceModel {
            name: name.into(),
            n: b + f + 1,
            b,
            f,
            base,
            fibre,
            regular,
            link,
            restriction,
            bigrading,
            fibre_betti,
            base_betti,
        })
    }

    /// Product link bundle `Y = B ⊗ F` with regular part `M ≃ F` restricting
    /// to every point of `B`: `r(x) = 1_B ⊗ x`. This covers truncated cones
    /// (`B` a point), suspensions (`B` two points) and `D^{b+1}`-capped edges
    /// (`B` a circle).
    pub fn capped_product(name: impl Into<String>, base: CochainComplex, fibre: CochainComplex) -> Result<Self, StratifiedError> {
        let (link, layout) = base.tensor_with_layout(&fibre)?;
        let unit = standard::unit_cocycle(&base);
        let maps = fibre
            .degrees()
            .map(|j| {
                let mut m = QMatrix::zeros(link.dim(j), fibre.dim(j));
                let block = layout.blocks(j).iter().find(|blk| blk.base == 0).expect("degree-0 base block");
                m.put_block(block.offset, 0, &unit.kron(&QMatrix::identity(fibre.dim(j))));
                m
            })
            .collect();
        let restriction = ComplexMap::new(fibre.clone(), link.clone(), 0, maps)?;
        EdgeSpaceModel::new(name, base, fibre.clone(), fibre, link, restriction, layout)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn f(&self) -> usize {
        self.f
    }

    pub fn base(&self) -> &CochainComplex {
        &self.base
    }

    pub fn fibre(&self) -> &CochainComplex {
        &self.fibre
    }

    pub fn regular(&self) -> &CochainComplex {
        &self.regular
    }

    pub fn link(&self) -> &CochainComplex {
        &self.link
    }

    pub fn restriction(&self) -> &ComplexMap {
        &self.restriction
    }

    pub fn bigrading(&self) -> &TensorLayout {
        &self.bigrading
    }

    pub fn fibre_betti(&self) -> &[usize] {
        &self.fibre_betti
    }

    pub fn base_betti(&self) -> &[usize] {
        &self.base_betti
    }

    /// Cutoff clamped to `-1 ..= f`; `-1` is the empty truncation.
    fn clamp_cutoff(&self, p: &Perversity) -> i64 {
        p.cutoff(self.f).clamp(-1, self.f as i64)
    }

    /// Truncated fibre `τ_{≤c} F` and its inclusion into `F`.
    fn truncated_fibre(&self, c: i64) -> (CochainComplex, Vec<QMatrix>) {
        if c < 0 {
            return (CochainComplex::empty(), Vec::new());
        }
        let c = c as usize;
        let f = &self.fibre;
        let (kernel, free) = f.d(c as i32).nullspace_with_free_columns();
        let mut dims: Vec<usize> = (0..c).map(|j| f.dim(j as i32)).collect();
        dims.push(kernel.len());
        let mut d: Vec<QMatrix> = (0..c.saturating_sub(1)).map(|j| f.d(j as i32)).collect();
        if c > 0 {
            // coordinates of d_{c−1}(x) ∈ Z^c are its entries at the free columns
            let full = f.d(c as i32 - 1);
            d.push(QMatrix::from_fn(kernel.len(), full.cols(), |i, j| full.get(free[i], j).clone()));
        }
        let trunc = CochainComplex::new(0, dims, d).expect("truncation shapes");
        let mut incl: Vec<QMatrix> = (0..c).map(|j| QMatrix::identity(f.dim(j as i32))).collect();
        incl.push(QMatrix::from_fn(f.dim(c as i32), kernel.len(), |i, j| kernel[j][i].clone()));
        (trunc, incl)
    }

    /// Tube complex `B ⊗ τ_{≤c} F` with its inclusion into `Y`, degreewise.
    fn tube(&self, c: i64) -> (CochainComplex, TensorLayout, Vec<QMatrix>) {
        let (trunc, incl) = self.truncated_fibre(c);
        let (tube, layout) = self.base.tensor_with_layout(&trunc).expect("verified factors");
        let maps = (0..self.n as i32)
            .map(|k| {
                let mut m = QMatrix::zeros(self.link.dim(k), tube.dim(k));
                for blk in layout.blocks(k) {
                    let target = self
                        .bigrading
                        .blocks(k)
                        .iter()
                        .find(|t| t.base == blk.base && t.fibre == blk.fibre)
                        .expect("tube block inside Y");
                    let piece = QMatrix::identity(self.base.dim(blk.base)).kron(&incl[blk.fibre as usize]);
                    m.put_block(target.offset, blk.offset, &piece);
                }
                m
            })
            .collect();
        (tube, layout, maps)
    }

    /// Chain-level intersection complex for cutoff `c`.
    fn intersection_complex(&self, c: i64) -> IntersectionComplex {
        let (tube, tube_layout, incl) = self.tube(c);
        let (m, y) = (&self.regular, &self.link);
        let top = self.n as i32;
        let part = |k: i32| (m.dim(k), tube.dim(k), y.dim(k - 1));
        let mut dims = Vec::new();
        let mut d = Vec::new();
        for k in 0..=top {
            let (dm, dt, dy) = part(k);
            let (em, et, ey) = part(k + 1);
            dims.push(dm + dt + dy);
            let mut mat = QMatrix::zeros(em + et + ey, dm + dt + dy);
            mat.put_block(0, 0, &m.d(k));
            mat.put_block(em, dm, &tube.d(k));
            mat.put_block(em + et, 0, &self.restriction.at(k));
            let iota = incl.get(k as usize).cloned().unwrap_or_else(|| QMatrix::zeros(y.dim(k), dt));
            mat.put_block(em + et, dm, &iota.neg());
            mat.put_block(em + et, dm + dt, &y.d(k - 1).neg());
            d.push(mat);
        }
        let complex = CochainComplex::new(0, dims, d).expect("intersection complex shapes");
        debug_assert!(complex.verify());
        IntersectionComplex { cutoff: c, complex, tube, tube_layout }
    }

    fn check_degree(&self, k: usize) -> Result<(), StratifiedError> {
        if k > self.n {
            return Err(StratifiedError::Model(format!("degree {k} above n = {}", self.n)));
        }
        Ok(())
    }

    /// `dim IH^k_p(X, B)`.
    pub fn ih_dim(&self, p: &Perversity, k: usize) -> Result<usize, StratifiedError> {
        self.check_degree(k)?;
        let ic = self.intersection_complex(self.clamp_cutoff(p));
        Ok(ic.complex.betti(k as i32)?)
    }

    /// All of `IH^0_p … IH^n_p`.
    pub fn ih_dims(&self, p: &Perversity) -> Result<IHReport, StratifiedError> {
        let ic = self.intersection_complex(self.clamp_cutoff(p));
        let mut dims = ic.complex.cohomology_dims()?;
        dims.resize(self.n + 1, 0);
        Ok(IHReport { perversity: p.clone(), dims })
    }

    /// Cohomology of the tube `B × C(F)`: Künneth convolution of `H(B)` with
    /// the truncated fibre cohomology.
    pub fn tube_ih(&self, p: &Perversity) -> Vec<usize> {
        let c = self.clamp_cutoff(p);
        let trunc: Vec<usize> =
            self.fibre_betti.iter().enumerate().map(|(j, &h)| if (j as i64) <= c { h } else { 0 }).collect();
        let mut dims = convolve(&self.base_betti, &trunc);
        dims.resize(self.n, 0);
        dims
    }

    /// Chain complex of the tube for `p` (exposed for cross-checks).
    pub fn tube_complex(&self, p: &Perversity) -> CochainComplex {
        self.tube(self.clamp_cutoff(p)).0
    }

    /// Chain-level intersection complex for `p` (exposed for cross-checks).
    pub fn intersection_cochains(&self, p: &Perversity) -> CochainComplex {
        self.intersection_complex(self.clamp_cutoff(p)).complex
    }

    /// Rank of the natural map `IH^k_{p_src} → IH^k_{p_tgt}`; requires the
    /// truncation of `p_src` to sit inside that of `p_tgt` (`p_src ≥ p_tgt`).
    pub fn ih_map_rank(&self, p_src: &Perversity, p_tgt: &Perversity, k: usize) -> Result<usize, StratifiedError> {
        self.check_degree(k)?;
        let (c_src, c_tgt) = (self.clamp_cutoff(p_src), self.clamp_cutoff(p_tgt));
        if c_src > c_tgt {
            return Err(StratifiedError::PerversityOrder { src: p_src.to_string(), tgt: p_tgt.to_string() });
        }
        let src = self.intersection_complex(c_src);
        let tgt = self.intersection_complex(c_tgt);
        let map = self.comparison_map(&src, &tgt)?;
        Ok(map.induced_map_rank(k as i32)?)
    }

    fn comparison_map(&self, src: &IntersectionComplex, tgt: &IntersectionComplex) -> Result<ComplexMap, StratifiedError> {
        let (_, incl_src) = self.truncated_fibre(src.cutoff);
        let (_, incl_tgt) = self.truncated_fibre(tgt.cutoff);
        let (m, y) = (&self.regular, &self.link);
        let maps = (0..=self.n as i32)
            .map(|k| {
                let mut mat = QMatrix::zeros(tgt.complex.dim(k), src.complex.dim(k));
                mat.put_block(0, 0, &QMatrix::identity(m.dim(k)));
                for blk in src.tube_layout.blocks(k) {
                    let target = tgt
                        .tube_layout
                        .blocks(k)
                        .iter()
                        .find(|t| t.base == blk.base && t.fibre == blk.fibre)
                        .expect("nested truncations");
                    let j = blk.fibre as usize;
                    let fibre_map = fibre_inclusion(&incl_src[j], &incl_tgt[j]);
                    let piece = QMatrix::identity(self.base.dim(blk.base)).kron(&fibre_map);
                    mat.put_block(m.dim(k) + target.offset, m.dim(k) + blk.offset, &piece);
                }
                let y_src = m.dim(k) + src.tube.dim(k);
                let y_tgt = m.dim(k) + tgt.tube.dim(k);
                mat.put_block(y_tgt, y_src, &QMatrix::identity(y.dim(k - 1)));
                mat
            })
            .collect();
        let map = ComplexMap::new(src.complex.clone(), tgt.complex.clone(), 0, maps)?;
        debug_assert!(map.is_chain_map());
        Ok(map)
    }

    /// Extended-perversity identities: `H^*(M)` for `p ≤ −1` and the relative
    /// cohomology `H^*(M, Y) ≅ H^*(X, X^sing)` for `p ≥ f`.
    pub fn extended_identities(&self, p: &Perversity) -> Result<Vec<usize>, StratifiedError> {
        let v = p.value();
        let mut dims = if *v <= Q::from_integer((-1).into()) {
            self.regular.cohomology_dims()?
        } else if *v >= Q::from_integer((self.f as i64).into()) {
            let rel = self.restriction.relative_complex()?;
            let h = rel.cohomology_dims()?;
            (0..=self.n as i32)
                .map(|k| {
                    let i = k - rel.min_degree();
                    if i >= 0 && (i as usize) < h.len() {
                        h[i as usize]
                    } else {
                        0
                    }
                })
                .collect()
        } else {
            return Err(StratifiedError::NotExtended(p.to_string()));
        };
        dims.resize(self.n + 1, 0);
        Ok(dims)
    }
}

/// Matrix of `τ_{≤c1} F → τ_{≤c2} F` in one degree, given both inclusions into `F`.
fn fibre_inclusion(src: &QMatrix, tgt: &QMatrix) -> QMatrix {
    if src == tgt {
        return QMatrix::identity(src.cols());
    }
    // differing inclusions only occur when src is the cocycle inclusion and tgt is the identity
    debug_assert_eq!(tgt.rows(), tgt.cols());
    src.clone()
}

struct IntersectionComplex {
    cutoff: i64,
    complex: CochainComplex,
    tube: CochainComplex,
    tube_layout: TensorLayout,
}

/// Metadata for one entry of the built-in catalogue.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CatalogueEntry {
    pub name: &'static str,
    pub n: usize,
    pub b: usize,
    pub f: usize,
    pub fibre: &'static str,
    pub base: &'static str,
    pub description: &'static str,
}

pub const CATALOGUE: &[CatalogueEntry] = &[
    CatalogueEntry { name: "cone-circle", n: 2, b: 0, f: 1, fibre: "S^1", base: "point", description: "truncated cone C_1(S^1)" },
    CatalogueEntry { name: "cone-torus", n: 3, b: 0, f: 2, fibre: "T^2", base: "point", description: "truncated cone C_1(T^2)" },
    CatalogueEntry { name: "cone-sphere2", n: 3, b: 0, f: 2, fibre: "S^2", base: "point", description: "truncated cone C_1(S^2)" },
    CatalogueEntry { name: "susp-torus", n: 3, b: 0, f: 2, fibre: "T^2", base: "two points", description: "suspension of T^2, two cone points" },
    CatalogueEntry {
        name: "edge-circle-over-circle",
        n: 3,
        b: 1,
        f: 1,
        fibre: "S^1",
        base: "S^1",
        description: "(D^2 x S^1) glued to S^1 x C(S^1) along S^1 x S^1",
    },
    CatalogueEntry {
        name: "edge-torus-over-circle",
        n: 4,
        b: 1,
        f: 2,
        fibre: "T^2",
        base: "S^1",
        description: "(D^2 x T^2) glued to S^1 x C(T^2) along S^1 x T^2",
    },
];

/// Builds a catalogue space by name.
pub fn builtin(name: &str) -> Result<EdgeSpaceModel, StratifiedError> {
    use standard::*;
    let (base, fibre) = match name {
        "cone-circle" => (point(), circle()),
        "cone-torus" => (point(), torus()),
        "cone-sphere2" => (point(), sphere2()),
        "susp-torus" => (points(2), torus()),
        "edge-circle-over-circle" => (circle(), circle()),
        "edge-torus-over-circle" => (circle(), torus()),
        _ => return Err(StratifiedError::UnknownSpace(name.to_string())),
    };
    EdgeSpaceModel::capped_product(name, base, fibre)
}

/// Names of the built-in spaces whose base is a point.
pub fn cone_space_names() -> Vec<&'static str> {
    CATALOGUE.iter().filter(|e| e.name.starts_with("cone-")).map(|e| e.name).collect()
}

/// Perversity with value `f + b/2 − k`, as used for complete edge metrics.
pub fn complete_metric_perversity(f: usize, b: usize, k: usize) -> Perversity {
    Perversity(Q::new((2 * f as i64 + b as i64 - 2 * k as i64).into(), 2.into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn p(v: i64) -> Perversity {
        Perversity::from_int(v)
    }

    #[test]
    fn middle_perversity_values() {
        assert_eq!(middle_perversities(1), (p(0), p(0)));
        assert_eq!(middle_perversities(2), (p(1), p(0)));
        assert_eq!(middle_perversities(0), (p(0), p(-1)));
        assert_eq!(middle_perversities(3), (p(1), p(1)));
    }

    #[test]
    fn cone_local_truncation() {
        let t2 = [1, 2, 1];
        let got: Vec<usize> = (0..3).map(|k| cone_local_ih(&t2, 2, &p(0), k)).collect();
        assert_eq!(got, vec![1, 2, 0]);
        let got: Vec<usize> = (0..3).map(|k| cone_local_ih(&t2, 2, &p(1), k)).collect();
        assert_eq!(got, vec![1, 0, 0]);
        assert_eq!(cone_local_ih(&[1], 0, &p(0), 0), 0);
        assert_eq!(cone_local_ih(&[1], 0, &p(-1), 0), 1);
    }

    #[test]
    fn rational_cutoff_floors() {
        let half = Perversity(Q::new(5.into(), 2.into()));
        assert_eq!(half.cutoff(2), -2);
        assert_eq!(Perversity(Q::new((-1).into(), 2.into())).cutoff(2), 1);
    }

    #[test]
    fn catalogue_builds_and_matches_metadata() {
        for e in CATALOGUE {
            let m = builtin(e.name).unwrap();
            assert_eq!((m.n(), m.b(), m.f()), (e.n, e.b, e.f), "{}", e.name);
        }
        assert!(matches!(builtin("nope"), Err(StratifiedError::UnknownSpace(_))));
    }

    #[test]
    fn cone_torus_upper_middle() {
        let m = builtin("cone-torus").unwrap();
        let (lower, upper) = middle_perversities(2);
        assert_eq!(m.ih_dims(&upper).unwrap().dims, vec![1, 2, 0, 0]);
        assert_eq!(m.ih_dims(&lower).unwrap().dims, vec![1, 0, 0, 0]);
        assert_eq!(m.ih_map_rank(&lower, &upper, 1).unwrap(), 0);
        assert_eq!(m.ih_map_rank(&lower, &upper, 0).unwrap(), 1);
    }

    #[test]
    fn suspension_is_connected() {
        let m = builtin("susp-torus").unwrap();
        let (lower, upper) = middle_perversities(2);
        assert_eq!(m.ih_dim(&upper, 0).unwrap(), 1);
        assert_eq!(m.ih_map_rank(&lower, &upper, 0).unwrap(), 1);
    }

    #[test]
    fn wrong_perversity_order_is_rejected() {
        let m = builtin("cone-torus").unwrap();
        assert!(matches!(m.ih_map_rank(&p(0), &p(1), 0), Err(StratifiedError::PerversityOrder { .. })));
    }

    #[test]
    fn extended_branches_reject_middle_values() {
        let m = builtin("cone-torus").unwrap();
        assert!(matches!(m.extended_identities(&p(1)), Err(StratifiedError::NotExtended(_))));
        assert_eq!(m.extended_identities(&p(2)).unwrap(), vec![0, 0, 0, 0]);
        assert_eq!(m.extended_identities(&p(-1)).unwrap(), vec![1, 2, 1, 0]);
    }

    #[test]
    fn broken_restriction_is_rejected() {
        let base = standard::point();
        let fibre = standard::circle();
        let (link, layout) = base.tensor_with_layout(&fibre).unwrap();
        // a degree-0 map that is not a chain map
        let bad = QMatrix::from_int_rows(2, &[&[1, 0], &[0, 0]]);
        let r = ComplexMap::new(fibre.clone(), link.clone(), 0, vec![bad, QMatrix::identity(2)]).unwrap();
        let err = EdgeSpaceModel::new("bad", base, fibre.clone(), fibre, link, r, layout).unwrap_err();
        assert_eq!(err, StratifiedError::InconsistentRestriction);
    }
}
