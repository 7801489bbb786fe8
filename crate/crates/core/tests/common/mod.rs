//! Test-side oracles: dense Gauss–Jordan over ℚ written independently of the
//! library's sparse elimination, plus random complexes with known cohomology.
#![allow(dead_code)]

use edgehodge_core::cochain::{CochainComplex, ComplexMap, QMatrix};
use edgehodge_core::stratified::{EdgeSpaceModel, Perversity};
use edgehodge_core::Q;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

pub type Mat = Vec<Vec<Q>>;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(n.into())
}

pub fn to_f(x: &Q) -> f64 {
    x.to_f64().unwrap()
}

pub fn from_q(m: &QMatrix) -> Mat {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

pub fn to_q(rows: usize, cols: usize, m: &Mat) -> QMatrix {
    QMatrix::from_fn(rows, cols, |i, j| m[i][j].clone())
}

fn rref(mut m: Mat, cols: usize) -> (Mat, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].clone().recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let t = &m[r][j] * &f;
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

pub fn rank(m: &Mat, cols: usize) -> usize {
    rref(m.clone(), cols).1.len()
}

/// Basis of `{v : m v = 0}`.
pub fn nullspace(m: &Mat, cols: usize) -> Vec<Vec<Q>> {
    let (r, pivots) = rref(m.clone(), cols);
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Q::zero(); cols];
            v[free] = Q::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -r[row][free].clone();
            }
            v
        })
        .collect()
}

pub fn mul(a: &Mat, b: &Mat, inner: usize, cols: usize) -> Mat {
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut s = Q::zero();
                    for k in 0..inner {
                        if !row[k].is_zero() && !b[k][j].is_zero() {
                            s += &row[k] * &b[k][j];
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

pub fn inverse(m: &Mat) -> Option<Mat> {
    let n = m.len();
    let aug: Mat = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    let (r, pivots) = rref(aug, 2 * n);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(r.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Columns given as vectors → matrix with those columns.
pub fn columns_to_mat(cols: &[Vec<Q>], rows: usize) -> Mat {
    (0..rows).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect()
}

/// Betti numbers by dense elimination.
pub fn betti(c: &CochainComplex) -> Vec<usize> {
    c.degrees()
        .map(|k| {
            let dk = c.d(k);
            let dprev = c.d(k - 1);
            c.dim(k) - rank(&from_q(&dk), dk.cols()) - rank(&from_q(&dprev), dprev.cols())
        })
        .collect()
}

/// Cocycles and Betti numbers of the subcomplex of `Y` spanned, in each
/// degree, by the given vectors (which must be closed under `d`).
pub struct Sub {
    pub cocycles: Vec<Vec<Vec<Q>>>,
    pub betti: Vec<usize>,
}

pub fn subcomplex(y: &CochainComplex, spans: &[Vec<Vec<Q>>]) -> Sub {
    let top = spans.len();
    let image_rank = |k: usize| -> (usize, Vec<Vec<Q>>) {
        let dk = from_q(&y.d(k as i32));
        let s = columns_to_mat(&spans[k], y.dim(k as i32));
        let ds = mul(&dk, &s, y.dim(k as i32), spans[k].len());
        let coeffs = nullspace(&ds, spans[k].len());
        let z: Vec<Vec<Q>> = coeffs
            .iter()
            .map(|c| (0..y.dim(k as i32)).map(|i| (0..c.len()).fold(Q::zero(), |acc, j| acc + &s[i][j] * &c[j])).collect())
            .collect();
        (rank(&ds, spans[k].len()), z)
    };
    let mut cocycles = Vec::new();
    let mut ranks = Vec::new();
    for k in 0..top {
        let (r, z) = image_rank(k);
        ranks.push(r);
        cocycles.push(z);
    }
    let betti = (0..top).map(|k| cocycles[k].len() - if k > 0 { ranks[k - 1] } else { 0 }).collect();
    Sub { cocycles, betti }
}

/// `⌊f − 1 − p⌋` clamped to `[−1, f]`, computed here from scratch.
pub fn cutoff(f: usize, p: &Perversity) -> i64 {
    let t = qi(f as i64 - 1) - p.value();
    let fl = t.floor().to_integer();
    let v: i64 = fl.try_into().unwrap_or(if t < Q::zero() { -1 } else { f as i64 });
    v.clamp(-1, f as i64)
}

/// The truncated tube as a subcomplex of `Y = B ⊗ F`: fibre degrees below the
/// cutoff in full, fibre cocycles in the cutoff degree.
pub fn truncated_tube_spans(space: &EdgeSpaceModel, p: &Perversity) -> Vec<Vec<Vec<Q>>> {
    let c = cutoff(space.f(), p);
    let (base, fibre, y) = (space.base(), space.fibre(), space.link());
    let fibre_kernel = |j: i32| {
        let d = fibre.d(j);
        nullspace(&from_q(&d), d.cols())
    };
    (0..space.n())
        .map(|k| {
            let k = k as i32;
            let mut span = Vec::new();
            for blk in space.bigrading().blocks(k) {
                let (i, j) = (blk.base, blk.fibre);
                let fdim = fibre.dim(j);
                let fibre_vecs: Vec<Vec<Q>> = if (j as i64) < c {
                    (0..fdim).map(|t| (0..fdim).map(|s| if s == t { Q::one() } else { Q::zero() }).collect()).collect()
                } else if j as i64 == c {
                    fibre_kernel(j)
                } else {
                    Vec::new()
                };
                for bi in 0..base.dim(i) {
                    for z in &fibre_vecs {
                        let mut v = vec![Q::zero(); y.dim(k)];
                        for (fj, val) in z.iter().enumerate() {
                            v[blk.offset + bi * fdim + fj] = val.clone();
                        }
                        span.push(v);
                    }
                }
            }
            span
        })
        .collect()
}

/// `IH^*_p` by chasing the Mayer–Vietoris sequence of `M ∪ tube` along `Y`.
pub fn ih_by_chase(space: &EdgeSpaceModel, p: &Perversity) -> Vec<usize> {
    let (m, y) = (space.regular(), space.link());
    let n = space.n();
    let tube = subcomplex(y, &truncated_tube_spans(space, p));
    let hy = betti(y);
    let hm = betti(m);
    let restriction: &ComplexMap = space.restriction();
    let psi_rank = |k: usize| -> usize {
        if k >= n {
            return 0;
        }
        let ydim = y.dim(k as i32);
        let b_cols = y.d(k as i32 - 1).columns();
        let r = from_q(&restriction.at(k as i32));
        let zm = {
            let d = m.d(k as i32);
            nullspace(&from_q(&d), d.cols())
        };
        let mut cols: Vec<Vec<Q>> = zm
            .iter()
            .map(|z| (0..ydim).map(|i| (0..z.len()).fold(Q::zero(), |acc, j| acc + &r[i][j] * &z[j])).collect())
            .collect();
        cols.extend(tube.cocycles[k].iter().cloned());
        let with_b: Vec<Vec<Q>> = cols.iter().chain(&b_cols).cloned().collect();
        let rk = |vs: &[Vec<Q>]| if vs.is_empty() { 0 } else { rank(&columns_to_mat(vs, ydim), vs.len()) };
        rk(&with_b) - rk(&b_cols)
    };
    (0..=n)
        .map(|k| {
            let coker = if k == 0 { 0 } else { hy.get(k - 1).copied().unwrap_or(0) - psi_rank(k - 1) };
            let source = hm.get(k).copied().unwrap_or(0) + tube.betti.get(k).copied().unwrap_or(0);
            let ker = source - psi_rank(k);
            coker + ker
        })
        .collect()
}

/// Random invertible integer matrix `L·U` with unit diagonals.
pub fn random_invertible(rng: &mut impl Rng, n: usize) -> Mat {
    let mut l: Mat = vec![vec![Q::zero(); n]; n];
    let mut u: Mat = vec![vec![Q::zero(); n]; n];
    for i in 0..n {
        l[i][i] = Q::one();
        u[i][i] = if rng.gen_bool(0.5) { Q::one() } else { -Q::one() };
        for j in 0..i {
            l[i][j] = qi(rng.gen_range(-2..=2));
            u[j][i] = qi(rng.gen_range(-2..=2));
        }
    }
    mul(&l, &u, n, n)
}

/// A complex with prescribed Betti numbers `h` and acyclic pairs `pairs[k]`
/// between degrees `k` and `k+1`, in its standard basis.
pub struct Canonical {
    pub complex: CochainComplex,
    pub betti: Vec<usize>,
}

pub fn canonical(h: &[usize], pairs: &[usize]) -> Canonical {
    let top = h.len();
    let dims: Vec<usize> = (0..top).map(|k| h[k] + pairs.get(k).copied().unwrap_or(0) + if k > 0 { pairs[k - 1] } else { 0 }).collect();
    // degree k layout: [harmonic h_k | sources of pairs k | targets of pairs k−1]
    let d: Vec<QMatrix> = (0..top)
        .map(|k| {
            let rows = if k + 1 < top { dims[k + 1] } else { 0 };
            let mut m = QMatrix::zeros(rows, dims[k]);
            if k + 1 < top {
                for t in 0..pairs[k] {
                    let src = h[k] + t;
                    let tgt = h[k + 1] + pairs.get(k + 1).copied().unwrap_or(0) + t;
                    m.set(tgt, src, Q::one());
                }
            }
            m
        })
        .collect();
    Canonical { complex: CochainComplex::new(0, dims, d).unwrap(), betti: h.to_vec() }
}

/// `P_{k+1} d_k P_k^{-1}` for random invertible `P_k`; returns the new complex
/// and the change-of-basis matrices.
pub fn conjugate(rng: &mut impl Rng, c: &CochainComplex) -> (CochainComplex, Vec<Mat>) {
    let dims = c.dims().to_vec();
    let ps: Vec<Mat> = dims.iter().map(|&n| random_invertible(rng, n)).collect();
    let d = (0..dims.len())
        .map(|k| {
            let dk = from_q(&c.d(k as i32));
            if k + 1 >= dims.len() || dims[k] == 0 {
                return QMatrix::zeros(if k + 1 < dims.len() { dims[k + 1] } else { 0 }, dims[k]);
            }
            let inv = inverse(&ps[k]).unwrap();
            let t = mul(&mul(&ps[k + 1], &dk, dims[k + 1], dims[k]), &inv, dims[k], dims[k]);
            to_q(dims[k + 1], dims[k], &t)
        })
        .collect();
    (CochainComplex::new(0, dims, d).unwrap(), ps)
}
