use alloc::vec;
use alloc::vec::Vec;

use num_traits::One;

use super::matrix::{rank_of_vectors, QMatrix};
use crate::error::CochainError;
use crate::Q;

/// A bounded cochain complex of finite-dimensional rational vector spaces.
///
/// Degrees run over `min_degree ..= top_degree()`. `d[i]` is the differential
/// leaving degree `min_degree + i`; the last one maps into the zero space and
/// is stored explicitly as a `0 × dim` matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CochainComplex {
    min_degree: i32,
    dims: Vec<usize>,
    d: Vec<QMatrix>,
}

impl CochainComplex {
    /// Validates matrix shapes against `dims`. The trailing zero differential
    /// may be omitted.
    pub fn new(min_degree: i32, dims: Vec<usize>, mut d: Vec<QMatrix>) -> Result<Self, CochainError> {
        if d.len() + 1 == dims.len() {
            d.push(QMatrix::zeros(0, *dims.last().unwrap()));
        }
        if d.len() != dims.len() {
            return Err(CochainError::DifferentialCount { dims: dims.len(), differentials: d.len() });
        }
        for (i, m) in d.iter().enumerate() {
            let rows = dims.get(i + 1).copied().unwrap_or(0);
            if m.shape() != (rows, dims[i]) {
                return Err(CochainError::ShapeMismatch {
                    degree: min_degree + i as i32,
                    expected: (rows, dims[i]),
                    found: m.shape(),
                });
            }
        }
        Ok(CochainComplex { min_degree, dims, d })
    }

    /// Complex with all differentials zero.
    pub fn zero_differentials(min_degree: i32, dims: Vec<usize>) -> Self {
        let d = (0..dims.len())
            .map(|i| QMatrix::zeros(dims.get(i + 1).copied().unwrap_or(0), dims[i]))
            .collect();
        CochainComplex { min_degree, dims, d }
    }

    pub fn empty() -> Self {
        CochainComplex { min_degree: 0, dims: Vec::new(), d: Vec::new() }
    }

    #[inline]
    pub fn min_degree(&self) -> i32 {
        self.min_degree
    }

    /// Highest degree carried; `min_degree - 1` for the empty complex.
    #[inline]
    pub fn top_degree(&self) -> i32 {
        self.min_degree + self.dims.len() as i32 - 1
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn differentials(&self) -> &[QMatrix] {
        &self.d
    }

    pub fn degrees(&self) -> core::ops::RangeInclusive<i32> {
        self.min_degree..=self.top_degree()
    }

    fn index(&self, degree: i32) -> Option<usize> {
        let i = degree - self.min_degree;
        (i >= 0 && (i as usize) < self.dims.len()).then_some(i as usize)
    }

    /// Dimension in `degree`; zero outside the stored range.
    pub fn dim(&self, degree: i32) -> usize {
        self.index(degree).map_or(0, |i| self.dims[i])
    }

    /// Differential leaving `degree`, as a `dim(degree+1) × dim(degree)` matrix.
    pub fn d(&self, degree: i32) -> QMatrix {
        match self.index(degree) {
            Some(i) => self.d[i].clone(),
            None => QMatrix::zeros(self.dim(degree + 1), self.dim(degree)),
        }
    }

    fn d_ref(&self, degree: i32) -> Option<&QMatrix> {
        self.index(degree).map(|i| &self.d[i])
    }

    /// True iff every composite `d ∘ d` vanishes.
    pub fn verify(&self) -> bool {
        self.d.windows(2).all(|w| w[1].mul(&w[0]).is_zero())
    }

    pub fn euler_characteristic(&self) -> i64 {
        alternating_sum(self.min_degree, &self.dims)
    }

    fn rank_d(&self, degree: i32) -> usize {
        self.d_ref(degree).map_or(0, QMatrix::rank)
    }

    /// `dim ker d_k − rank d_{k−1}` for every stored degree.
    pub fn cohomology_dims(&self) -> Result<Vec<usize>, CochainError> {
        if !self.verify() {
            return Err(CochainError::NotAComplex);
        }
        let ranks: Vec<usize> = self.degrees().map(|k| self.rank_d(k)).collect();
        Ok(self
            .dims
            .iter()
            .enumerate()
            .map(|(i, &n)| n - ranks[i] - if i > 0 { ranks[i - 1] } else { 0 })
            .collect())
    }

    /// Cohomology dimension in a single degree; zero outside the range.
    pub fn betti(&self, degree: i32) -> Result<usize, CochainError> {
        if !self.verify() {
            return Err(CochainError::NotAComplex);
        }
        if self.index(degree).is_none() {
            return Ok(0);
        }
        Ok(self.dim(degree) - self.rank_d(degree) - self.rank_d(degree - 1))
    }

    /// Basis of the cocycles `ker d_k`.
    pub fn cocycles(&self, degree: i32) -> Vec<Vec<Q>> {
        match self.d_ref(degree) {
            Some(d) => d.nullspace(),
            None => Vec::new(),
        }
    }

    /// Same complex with degrees raised by `by`; `H^k` of the result is
    /// `H^{k−by}` of `self`. Differentials pick up the sign `(−1)^by`.
    pub fn shift_degrees(&self, by: i32) -> Self {
        let d = if by.rem_euclid(2) == 1 { self.d.iter().map(QMatrix::neg).collect() } else { self.d.clone() };
        CochainComplex { min_degree: self.min_degree + by, dims: self.dims.clone(), d }
    }

    /// Tensor product with Koszul sign `d(x⊗y) = dx⊗y + (−1)^{|x|} x⊗dy`.
    pub fn tensor(&self, other: &CochainComplex) -> Result<CochainComplex, CochainError> {
        Ok(self.tensor_with_layout(other)?.0)
    }

    /// Tensor product together with the (base degree, fibre degree) block layout.
    pub fn tensor_with_layout(&self, other: &CochainComplex) -> Result<(CochainComplex, TensorLayout), CochainError> {
        if !self.verify() || !other.verify() {
            return Err(CochainError::NotAComplex);
        }
        let layout = TensorLayout::new(self, other);
        if layout.degrees.is_empty() {
            return Ok((CochainComplex::empty(), layout));
        }
        let mut d = Vec::with_capacity(layout.degrees.len());
        for (idx, blocks) in layout.degrees.iter().enumerate() {
            let k = layout.min_degree + idx as i32;
            let target = layout.blocks(k + 1);
            let rows = layout.dim(k + 1);
            let mut m = QMatrix::zeros(rows, layout.dim(k));
            for b in blocks {
                // base direction: (i, j) → (i+1, j)
                if let Some(t) = target.iter().find(|t| t.base == b.base + 1 && t.fibre == b.fibre) {
                    let block = self.d(b.base).kron(&QMatrix::identity(other.dim(b.fibre)));
                    m.put_block(t.offset, b.offset, &block);
                }
                // fibre direction: (i, j) → (i, j+1)
                if let Some(t) = target.iter().find(|t| t.base == b.base && t.fibre == b.fibre + 1) {
                    let mut block = QMatrix::identity(self.dim(b.base)).kron(&other.d(b.fibre));
                    if b.base.rem_euclid(2) == 1 {
                        block = block.neg();
                    }
                    m.put_block(t.offset, b.offset, &block);
                }
            }
            d.push(m);
        }
        let dims = layout.degrees.iter().map(|bs| bs.iter().map(|b| b.len).sum()).collect();
        Ok((CochainComplex { min_degree: layout.min_degree, dims, d }, layout))
    }

    /// Degreewise direct sum; degree ranges are merged.
    pub fn direct_sum(&self, other: &CochainComplex) -> CochainComplex {
        let (lo, hi) = merged_range(&[self, other]);
        let mut dims = Vec::new();
        let mut d = Vec::new();
        for k in lo..=hi {
            dims.push(self.dim(k) + other.dim(k));
            let mut m = QMatrix::zeros(self.dim(k + 1) + other.dim(k + 1), self.dim(k) + other.dim(k));
            m.put_block(0, 0, &self.d(k));
            m.put_block(self.dim(k + 1), self.dim(k), &other.d(k));
            d.push(m);
        }
        CochainComplex { min_degree: lo, dims, d }
    }

    /// Drops degrees at either end whose space is zero-dimensional.
    pub fn trimmed(&self) -> CochainComplex {
        let first = self.dims.iter().position(|&n| n > 0);
        let Some(first) = first else { return CochainComplex::empty() };
        let last = self.dims.iter().rposition(|&n| n > 0).unwrap();
        CochainComplex {
            min_degree: self.min_degree + first as i32,
            dims: self.dims[first..=last].to_vec(),
            d: self.d[first..=last]
                .iter()
                .enumerate()
                .map(|(i, m)| if first + i == last { QMatrix::zeros(0, m.cols()) } else { m.clone() })
                .collect(),
        }
    }
}

/// One `(base degree, fibre degree)` block of a tensor product in a fixed total degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TensorBlock {
    pub base: i32,
    pub fibre: i32,
    pub offset: usize,
    pub len: usize,
}

/// Bigrading of a tensor product: the ordered blocks in each total degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorLayout {
    pub min_degree: i32,
    pub degrees: Vec<Vec<TensorBlock>>,
}

impl TensorLayout {
    fn new(a: &CochainComplex, b: &CochainComplex) -> Self {
        if a.dims.is_empty() || b.dims.is_empty() {
            return TensorLayout { min_degree: 0, degrees: Vec::new() };
        }
        let lo = a.min_degree + b.min_degree;
        let hi = a.top_degree() + b.top_degree();
        let degrees = (lo..=hi)
            .map(|k| {
                let mut offset = 0;
                let mut blocks = Vec::new();
                for i in a.degrees() {
                    let j = k - i;
                    if j < b.min_degree || j > b.top_degree() {
                        continue;
                    }
                    let len = a.dim(i) * b.dim(j);
                    blocks.push(TensorBlock { base: i, fibre: j, offset, len });
                    offset += len;
                }
                blocks
            })
            .collect();
        TensorLayout { min_degree: lo, degrees }
    }

    pub fn blocks(&self, degree: i32) -> &[TensorBlock] {
        let i = degree - self.min_degree;
        if i < 0 || i as usize >= self.degrees.len() {
            &[]
        } else {
            &self.degrees[i as usize]
        }
    }

    pub fn dim(&self, degree: i32) -> usize {
        self.blocks(degree).iter().map(|b| b.len).sum()
    }

    /// `(base, fibre)` bidegree of every basis element in `degree`.
    pub fn labels(&self, degree: i32) -> Vec<(i32, i32)> {
        self.blocks(degree).iter().flat_map(|b| core::iter::repeat_n((b.base, b.fibre), b.len)).collect()
    }
}

/// Degreewise linear maps between two complexes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexMap {
    source: CochainComplex,
    target: CochainComplex,
    min_degree: i32,
    maps: Vec<QMatrix>,
}

impl ComplexMap {
    /// `maps[i]` acts in degree `min_degree + i`; degrees not covered are zero.
    /// Shapes are checked; commutation is checked by [`ComplexMap::is_chain_map`].
    pub fn new(source: CochainComplex, target: CochainComplex, min_degree: i32, maps: Vec<QMatrix>) -> Result<Self, CochainError> {
        for (i, m) in maps.iter().enumerate() {
            let k = min_degree + i as i32;
            let expected = (target.dim(k), source.dim(k));
            if m.shape() != expected {
                return Err(CochainError::ShapeMismatch { degree: k, expected, found: m.shape() });
            }
        }
        Ok(ComplexMap { source, target, min_degree, maps })
    }

    pub fn identity(c: &CochainComplex) -> Self {
        let maps = c.dims.iter().map(|&n| QMatrix::identity(n)).collect();
        ComplexMap { source: c.clone(), target: c.clone(), min_degree: c.min_degree, maps }
    }

    pub fn zero(source: &CochainComplex, target: &CochainComplex) -> Self {
        ComplexMap { source: source.clone(), target: target.clone(), min_degree: 0, maps: Vec::new() }
    }

    pub fn source(&self) -> &CochainComplex {
        &self.source
    }

    pub fn target(&self) -> &CochainComplex {
        &self.target
    }

    pub fn min_degree(&self) -> i32 {
        self.min_degree
    }

    pub fn maps(&self) -> &[QMatrix] {
        &self.maps
    }

    /// The map in `degree`, as a `target.dim × source.dim` matrix.
    pub fn at(&self, degree: i32) -> QMatrix {
        let i = degree - self.min_degree;
        if i >= 0 && (i as usize) < self.maps.len() {
            self.maps[i as usize].clone()
        } else {
            QMatrix::zeros(self.target.dim(degree), self.source.dim(degree))
        }
    }

    /// True iff `d_T ∘ φ = φ ∘ d_S` in every degree.
    pub fn is_chain_map(&self) -> bool {
        let (lo, hi) = merged_range(&[&self.source, &self.target]);
        (lo..=hi).all(|k| self.target.d(k).mul(&self.at(k)) == self.at(k + 1).mul(&self.source.d(k)))
    }

    fn check(&self) -> Result<(), CochainError> {
        if !self.source.verify() || !self.target.verify() {
            return Err(CochainError::NotAComplex);
        }
        if !self.is_chain_map() {
            return Err(CochainError::NotAChainMap);
        }
        Ok(())
    }

    /// Mapping cone `Cone^k = T^k ⊕ S^{k+1}`, `d(t, s) = (d t + φ s, −d s)`.
    ///
    /// Its cohomology sits in the long exact sequence
    /// `H^k(S) → H^k(T) → H^k(Cone) → H^{k+1}(S) → …`.
    pub fn mapping_cone(&self) -> Result<CochainComplex, CochainError> {
        self.check()?;
        let (s, t) = (&self.source, &self.target);
        let lo = t.min_degree.min(s.min_degree - 1);
        let hi = t.top_degree().max(s.top_degree() - 1);
        let mut dims = Vec::new();
        let mut d = Vec::new();
        for k in lo..=hi {
            dims.push(t.dim(k) + s.dim(k + 1));
            let mut m = QMatrix::zeros(t.dim(k + 1) + s.dim(k + 2), t.dim(k) + s.dim(k + 1));
            m.put_block(0, 0, &t.d(k));
            m.put_block(0, t.dim(k), &self.at(k + 1));
            m.put_block(t.dim(k + 1), t.dim(k), &s.d(k + 1).neg());
            d.push(m);
        }
        Ok(CochainComplex { min_degree: lo, dims, d })
    }

    /// Complex computing relative cohomology `H^k(S, T)` of a restriction
    /// `φ: S → T`: the mapping cone shifted up by one degree.
    pub fn relative_complex(&self) -> Result<CochainComplex, CochainError> {
        Ok(self.mapping_cone()?.shift_degrees(1))
    }

    /// Rank of the induced map `H^k(S) → H^k(T)`.
    pub fn induced_map_rank(&self, k: i32) -> Result<usize, CochainError> {
        self.check()?;
        let (lo, hi) = merged_range(&[&self.source, &self.target]);
        if k < lo || k > hi {
            return Err(CochainError::DegreeOutOfRange { degree: k, min: lo, max: hi });
        }
        let phi = self.at(k);
        let boundaries = self.target.d(k - 1).columns();
        let mut vectors: Vec<Vec<Q>> = self.source.cocycles(k).iter().map(|z| phi.mul_vec(z)).collect();
        let base = rank_of_vectors(&boundaries);
        vectors.extend(boundaries);
        if vectors.is_empty() {
            return Ok(0);
        }
        Ok(rank_of_vectors(&vectors) - base)
    }

    /// Composite `other ∘ self`.
    pub fn then(&self, other: &ComplexMap) -> Result<ComplexMap, CochainError> {
        if self.target != other.source {
            return Err(CochainError::NotComposable);
        }
        let (lo, hi) = merged_range(&[&self.source, &other.target]);
        let maps = (lo..=hi).map(|k| other.at(k).mul(&self.at(k))).collect();
        Ok(ComplexMap { source: self.source.clone(), target: other.target.clone(), min_degree: lo, maps })
    }
}

fn merged_range(cs: &[&CochainComplex]) -> (i32, i32) {
    let nonempty: Vec<_> = cs.iter().filter(|c| !c.dims.is_empty()).collect();
    if nonempty.is_empty() {
        return (0, -1);
    }
    let lo = nonempty.iter().map(|c| c.min_degree).min().unwrap();
    let hi = nonempty.iter().map(|c| c.top_degree()).max().unwrap();
    (lo, hi)
}

/// `Σ (−1)^k n_k` for a graded list starting at `min_degree`.
pub fn alternating_sum(min_degree: i32, dims: &[usize]) -> i64 {
    dims.iter()
        .enumerate()
        .map(|(i, &n)| if (min_degree + i as i32).rem_euclid(2) == 0 { n as i64 } else { -(n as i64) })
        .sum()
}

/// Graded convolution `(a * b)_k = Σ_{i+j=k} a_i b_j` of two lists starting in degree 0.
pub fn convolve(a: &[usize], b: &[usize]) -> Vec<usize> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Standard small complexes used as building blocks.
pub mod standard {
    use super::*;

    /// One-point complex, `dims = (1)`.
    pub fn point() -> CochainComplex {
        CochainComplex::zero_differentials(0, vec![1])
    }

    /// `m` isolated points.
    pub fn points(m: usize) -> CochainComplex {
        CochainComplex::zero_differentials(0, vec![m])
    }

    /// Two vertices joined by two edges, both oriented from `v0` to `v1`.
    pub fn circle() -> CochainComplex {
        let d0 = QMatrix::from_int_rows(2, &[&[-1, 1], &[-1, 1]]);
        CochainComplex::new(0, vec![2, 2], vec![d0]).unwrap()
    }

    /// Cycle graph with `n ≥ 1` vertices and edges `i → i+1 (mod n)`.
    pub fn cycle(n: usize) -> CochainComplex {
        assert!(n >= 1);
        let mut d0 = QMatrix::zeros(n, n);
        for e in 0..n {
            let (tail, head) = (e, (e + 1) % n);
            if tail == head {
                continue;
            }
            d0.set(e, tail, -Q::one());
            d0.set(e, head, Q::one());
        }
        CochainComplex::new(0, vec![n, n], vec![d0]).unwrap()
    }

    /// Two vertices and one edge.
    pub fn interval() -> CochainComplex {
        let d0 = QMatrix::from_int_rows(2, &[&[-1, 1]]);
        CochainComplex::new(0, vec![2, 1], vec![d0]).unwrap()
    }

    /// `circle ⊗ circle`, dims (4, 8, 4).
    pub fn torus() -> CochainComplex {
        circle().tensor(&circle()).unwrap()
    }

    /// Boundary of the tetrahedron: simplicial 2-sphere with dims (4, 6, 4).
    pub fn sphere2() -> CochainComplex {
        let verts = 4usize;
        let edges: Vec<[usize; 2]> = vec![[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]];
        let faces: Vec<[usize; 3]> = vec![[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]];
        let mut d0 = QMatrix::zeros(edges.len(), verts);
        for (e, [a, b]) in edges.iter().enumerate() {
            d0.set(e, *a, -Q::one());
            d0.set(e, *b, Q::one());
        }
        let mut d1 = QMatrix::zeros(faces.len(), edges.len());
        for (f, face) in faces.iter().enumerate() {
            // ∂[v0 v1 v2] = [v1 v2] − [v0 v2] + [v0 v1]; coboundary is the transpose
            for (drop, sign) in [(0usize, 1i64), (1, -1), (2, 1)] {
                let mut edge = [0usize; 2];
                let mut n = 0;
                for (i, &v) in face.iter().enumerate() {
                    if i != drop {
                        edge[n] = v;
                        n += 1;
                    }
                }
                let e = edges.iter().position(|x| *x == edge).unwrap();
                d1.set(f, e, Q::from_integer(sign.into()));
            }
        }
        CochainComplex::new(0, vec![4, 6, 4], vec![d0, d1]).unwrap()
    }

    /// Constant 0-cochain `(1, …, 1)` on the vertices of `c`, as a column.
    pub fn unit_cocycle(c: &CochainComplex) -> QMatrix {
        QMatrix::from_fn(c.dim(0), 1, |_, _| Q::one())
    }
}
