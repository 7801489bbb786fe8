//! Executable property suites, one per module, run against a single space.

use std::collections::BTreeMap;

use edgehodge_core::cochain::{convolve, CochainComplex, ComplexMap, QMatrix};
use edgehodge_core::fibredec::{circle, fibre_spectrum, spectrum_for_predicates, DiscreteFibre};
use edgehodge_core::radial::torus::{reconstruct, sample_forms};
use edgehodge_core::radial::{
    finite_pullback_degrees, homotopy_K, local_cohomology, min_membership, mode_exponent_on, pullback_norm, window_position,
    ConeModeProfile, LogGrid, WindowPosition,
};
use edgehodge_core::spectral::{
    discriminant, essentially_selfadjoint, indicial_roots, unique_closed_extension_d, FibreSpectrum, Real,
};
use edgehodge_core::stratified::{complete_metric_perversity, middle_perversities, EdgeSpaceModel, Perversity};
use edgehodge_core::weights::{complete_l2, max_perversity, min_perversity, minimal_hodge_dims, weighted_derham_dims, Extension, L2Verdict};
use edgehodge_core::Q;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Cochain,
    Stratified,
    Weights,
    Spectral,
    Fibredec,
    Radial,
    Cli,
}

impl Suite {
    pub const ALL: [Suite; 7] =
        [Suite::Cochain, Suite::Stratified, Suite::Weights, Suite::Spectral, Suite::Fibredec, Suite::Radial, Suite::Cli];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Cochain => "cochain",
            Suite::Stratified => "stratified",
            Suite::Weights => "weights",
            Suite::Spectral => "spectral",
            Suite::Fibredec => "fibredec",
            Suite::Radial => "radial",
            Suite::Cli => "cli",
        }
    }

    pub fn parse(s: &str) -> Result<Suite, Error> {
        Suite::ALL.into_iter().find(|x| x.as_str() == s).ok_or_else(|| Error::Config(format!("unknown suite `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
    /// The property does not apply to this space.
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub suite: Suite,
    pub name: &'static str,
    pub outcome: Outcome,
    pub detail: String,
}

impl Check {
    pub fn ok(&self) -> bool {
        self.outcome != Outcome::Fail
    }
}

/// Everything a suite may look at.
pub struct Context<'a> {
    pub space: &'a EdgeSpaceModel,
    pub weights: Vec<Q>,
    /// Spectrum used for the predicates; `None` when the fibre is unknown.
    pub spectrum: Option<FibreSpectrum>,
    pub fibre: Option<DiscreteFibre>,
    pub grid: LogGrid,
    pub c: f64,
    pub seed: u64,
}

/// Half-integer weights from −2 to 2, used when the config names none.
pub fn default_weights() -> Vec<Q> {
    (-4..=4).map(|n| Q::new(n.into(), 2.into())).collect()
}

struct Sink {
    suite: Suite,
    checks: Vec<Check>,
}

impl Sink {
    fn check(&mut self, name: &'static str, ok: bool, detail: impl Into<String>) {
        let outcome = if ok { Outcome::Pass } else { Outcome::Fail };
        self.checks.push(Check { suite: self.suite, name, outcome, detail: detail.into() });
    }

    fn skip(&mut self, name: &'static str, why: impl Into<String>) {
        self.checks.push(Check { suite: self.suite, name, outcome: Outcome::Skipped, detail: why.into() });
    }
}

pub fn run_suite(suite: Suite, ctx: &Context) -> Result<Vec<Check>, Error> {
    let mut sink = Sink { suite, checks: Vec::new() };
    match suite {
        Suite::Cochain => cochain(ctx, &mut sink)?,
        Suite::Stratified => stratified(ctx, &mut sink)?,
        Suite::Weights => weights(ctx, &mut sink)?,
        Suite::Spectral => spectral(ctx, &mut sink),
        Suite::Fibredec => fibredec(ctx, &mut sink)?,
        Suite::Radial => radial(ctx, &mut sink)?,
        Suite::Cli => unreachable!("the cli suite is run by the orchestrator"),
    }
    Ok(sink.checks)
}

fn padded(mut v: Vec<usize>, len: usize) -> Vec<usize> {
    v.resize(len.max(v.len()), 0);
    v
}

fn alternating(v: &[usize]) -> i64 {
    v.iter().enumerate().map(|(i, &x)| if i % 2 == 0 { x as i64 } else { -(x as i64) }).sum()
}

/// Random invertible matrix with exact inverse, built from elementary row operations.
fn random_invertible(rng: &mut ChaCha8Rng, n: usize) -> (QMatrix, QMatrix) {
    let mut p = QMatrix::identity(n);
    let mut inv = QMatrix::identity(n);
    if n < 2 {
        return (p, inv);
    }
    for _ in 0..3 * n {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let c = Q::new(rng.gen_range(-3i64..=3).into(), rng.gen_range(1i64..=3).into());
        let e = QMatrix::from_fn(n, n, |r, s| if r == s { Q::from_integer(1.into()) } else if (r, s) == (i, j) { c.clone() } else { Q::from_integer(0.into()) });
        let e_inv = QMatrix::from_fn(n, n, |r, s| if r == s { Q::from_integer(1.into()) } else if (r, s) == (i, j) { -c.clone() } else { Q::from_integer(0.into()) });
        p = e.mul(&p);
        inv = inv.mul(&e_inv);
    }
    (p, inv)
}

fn conjugate(rng: &mut ChaCha8Rng, c: &CochainComplex) -> Result<CochainComplex, Error> {
    let changes: Vec<(QMatrix, QMatrix)> = c.dims().iter().map(|&n| random_invertible(rng, n)).collect();
    let d = c
        .differentials()
        .iter()
        .enumerate()
        .map(|(i, d)| match changes.get(i + 1) {
            Some((p, _)) => p.mul(d).mul(&changes[i].1),
            None => d.clone(),
        })
        .collect();
    Ok(CochainComplex::new(c.min_degree(), c.dims().to_vec(), d)?)
}

fn cochain(ctx: &Context, s: &mut Sink) -> Result<(), Error> {
    let sp = ctx.space;
    let named = [("B", sp.base()), ("F", sp.fibre()), ("M", sp.regular()), ("Y", sp.link())];
    s.check("verify", named.iter().all(|(_, c)| c.verify()), "d∘d = 0 on B, F, M, Y");

    let (lower, upper) = middle_perversities(sp.f());
    let mut euler_ok = true;
    let extra = [sp.intersection_cochains(&lower), sp.intersection_cochains(&upper), sp.tube_complex(&upper)];
    for c in named.iter().map(|(_, c)| *c).chain(extra.iter()) {
        let h = c.cohomology_dims()?;
        let sign = if c.min_degree().rem_euclid(2) == 0 { 1 } else { -1 };
        euler_ok &= c.euler_characteristic() == sign * alternating(&h);
    }
    s.check("euler-characteristic", euler_ok, "χ from dims equals χ from cohomology");

    let y = sp.link().cohomology_dims()?;
    let expected = convolve(sp.base_betti(), sp.fibre_betti());
    s.check("kunneth", padded(y.clone(), expected.len()) == padded(expected.clone(), y.len()), format!("H(Y) = {y:?}"));

    let left = sp.base().tensor(sp.fibre())?.tensor(sp.fibre())?.cohomology_dims()?;
    let right = sp.base().tensor(&sp.fibre().tensor(sp.fibre())?)?.cohomology_dims()?;
    s.check("tensor-associativity", left == right, format!("H((B⊗F)⊗F) = {left:?}"));

    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let mut basis_ok = true;
    for (_, c) in named {
        let h = c.cohomology_dims()?;
        for _ in 0..2 {
            basis_ok &= conjugate(&mut rng, c)?.cohomology_dims()? == h;
        }
    }
    s.check("basis-change", basis_ok, "cohomology unchanged under random conjugation");

    let id = ComplexMap::identity(sp.regular());
    let acyclic = id.mapping_cone()?.cohomology_dims()?.iter().all(|&h| h == 0);
    s.check("cone-of-identity", acyclic, "Cone(id_M) is acyclic");

    // H^k(Cone r) = coker(r_k) ⊕ ker(r_{k+1}) for r: M → Y
    let r = sp.restriction();
    let cone = r.mapping_cone()?;
    let hc = cone.cohomology_dims()?;
    let (hm, hy) = (sp.regular().cohomology_dims()?, sp.link().cohomology_dims()?);
    let at = |v: &[usize], k: i32| if k < 0 { 0 } else { v.get(k as usize).copied().unwrap_or(0) };
    let mut les_ok = true;
    for k in cone.degrees() {
        let top = sp.regular().top_degree().min(sp.link().top_degree());
        let rank = |j: i32| if j < 0 || j > top { Ok(0) } else { r.induced_map_rank(j) };
        let (rk, rk1) = (rank(k)?, rank(k + 1)?);
        let expect = (at(&hy, k) - rk) + (at(&hm, k + 1) - rk1);
        les_ok &= hc[(k - cone.min_degree()) as usize] == expect;
    }
    s.check("cone-exact-sequence", les_ok, "cone cohomology matches the long exact sequence of r: M → Y");
    Ok(())
}

fn perversity_grid(f: usize) -> Vec<Perversity> {
    (-4..=2 * f as i64 + 4).map(|n| Perversity::new(Q::new(n.into(), 2.into()))).collect()
}

/// `H^k(M) ≅ H^{n−k}(M, Y)` for all k; holds exactly when the model closes up
/// to a compact space without boundary.
fn lefschetz_closed(sp: &EdgeSpaceModel) -> Result<bool, Error> {
    let hm = padded(sp.regular().cohomology_dims()?, sp.n() + 1);
    let rel = sp.restriction().relative_complex()?;
    let hr = rel.cohomology_dims()?;
    let rel_at = |k: usize| {
        let i = k as i64 - rel.min_degree() as i64;
        if i < 0 { 0 } else { hr.get(i as usize).copied().unwrap_or(0) }
    };
    Ok((0..=sp.n()).all(|k| hm[k] == rel_at(sp.n() - k)))
}

fn stratified(ctx: &Context, s: &mut Sink) -> Result<(), Error> {
    let sp = ctx.space;
    let n = sp.n();
    let grid = perversity_grid(sp.f());
    let dims: BTreeMap<&Perversity, Vec<usize>> = grid.iter().map(|p| Ok((p, sp.ih_dims(p)?.dims))).collect::<Result<_, Error>>()?;

    let mut rank_ok = true;
    for (i, lo) in grid.iter().enumerate().step_by(2) {
        for hi in grid[i..].iter().step_by(3) {
            for k in 0..=n {
                rank_ok &= sp.ih_map_rank(hi, lo, k)? <= dims[hi][k].min(dims[lo][k]);
            }
        }
    }
    s.check("map-rank-bound", rank_ok, "rank(IH_p' → IH_p) ≤ min of both sides");

    if lefschetz_closed(sp)? {
        let (lower, upper) = middle_perversities(sp.f());
        let mut ok = true;
        for shift in -3..=3 {
            let a = sp.ih_dims(&lower.shifted(shift))?.dims;
            let b = sp.ih_dims(&upper.shifted(-shift))?.dims;
            ok &= (0..=n).all(|j| a[j] == b[n - j]);
        }
        s.check("poincare-duality", ok, "IH^j at lower+s equals IH^{n−j} at upper−s");
    } else {
        s.skip("poincare-duality", "space has boundary");
    }

    let f = sp.f() as i64;
    let low = &dims[&Perversity::from_int(-1)];
    let high = &dims[&Perversity::from_int(f)];
    let saturated = grid.iter().all(|p| {
        let v = p.value();
        (*v > Q::from_integer((-1).into()) || dims[p] == *low) && (*v < Q::from_integer(f.into()) || dims[p] == *high)
    });
    s.check("saturation", saturated, "IH constant for p ≤ −1 and for p ≥ f");

    let mut tube_ok = true;
    for p in &grid {
        let direct = sp.tube_ih(p);
        let brute = sp.tube_complex(p).cohomology_dims()?;
        let len = direct.len().max(brute.len());
        tube_ok &= padded(direct, len) == padded(brute, len);
    }
    s.check("tube-oracle", tube_ok, "tube IH equals cohomology of the truncated tensor complex");

    let mut ext_ok = true;
    for p in grid.iter().filter(|p| *p.value() <= Q::from_integer((-1).into()) || *p.value() >= Q::from_integer(f.into())) {
        ext_ok &= sp.extended_identities(p)? == dims[p];
    }
    s.check("extended-identities", ext_ok, "IH equals H(M) or H(M, Y) outside the middle range");
    Ok(())
}

fn weight_list(ctx: &Context) -> Vec<Q> {
    if ctx.weights.is_empty() {
        default_weights()
    } else {
        ctx.weights.clone()
    }
}

fn weights(ctx: &Context, s: &mut Sink) -> Result<(), Error> {
    let sp = ctx.space;
    let n = sp.n();
    let f = sp.f();
    let mut ws = weight_list(ctx);
    ws.sort();
    ws.dedup();
    let mut reports = Vec::new();
    for a in &ws {
        let max = weighted_derham_dims(sp, a, Extension::Max)?.dims;
        let min = weighted_derham_dims(sp, a, Extension::Min)?.dims;
        let hodge = minimal_hodge_dims(sp, a)?.dims;
        reports.push((a, max, min, hodge));
    }
    let sandwich = reports.iter().all(|(_, max, min, h)| (0..=n).all(|k| h[k] <= max[k].min(min[k])));
    s.check("minimal-hodge-sandwich", sandwich, "minimal Hodge ≤ min(max, min) degreewise");

    if f % 2 == 0 {
        let half = Q::new(1.into(), 2.into());
        let ok = reports.iter().filter(|(a, ..)| (*a - &half).is_integer()).all(|(a, max, min, _)| {
            max_perversity(f, a) == min_perversity(f, a) && max == min
        });
        s.check("half-integer-coincidence", ok, "max = min when a − 1/2 is an integer");
    } else {
        s.skip("half-integer-coincidence", "odd fibre dimension");
    }

    if sp.base_betti() == [1] && sp.base().dims() == [1] {
        let ok = reports.windows(2).all(|w| {
            let (prev, next) = (&w[0], &w[1]);
            (0..=n).all(|k| next.1[k] <= prev.1[k] && next.2[k] <= prev.2[k] && next.3[k] <= prev.3[k])
        });
        s.check("monotone-in-weight", ok, "dims weakly decrease as a increases");
    } else {
        s.skip("monotone-in-weight", "base is not a point");
    }

    let ok = reports
        .iter()
        .filter(|(a, ..)| unique_closed_extension_d(f, a, sp.fibre_betti()))
        .all(|(_, max, min, h)| max == min && h == max);
    s.check("unique-extension-collapse", ok, "max = min = minimal Hodge when d has one closed extension");

    if sp.b() % 2 == 0 {
        let mut ok = true;
        for k in 0..=n {
            let finite = |j| complete_l2(sp, j).map(|x| matches!(x.verdict, L2Verdict::Finite { .. }));
            ok &= finite(k)? == finite(n - k)?;
            let p = complete_metric_perversity(f, sp.b(), k);
            if let L2Verdict::Finite { dim, .. } = complete_l2(sp, k)?.verdict {
                ok &= dim == sp.ih_dim(&p, k)?;
            }
        }
        s.check("complete-l2-symmetry", ok, "finiteness symmetric under k ↔ n − k");
    } else {
        s.skip("complete-l2-symmetry", "odd base dimension");
    }
    Ok(())
}

fn spectral(ctx: &Context, s: &mut Sink) {
    let sp = ctx.space;
    let f = sp.f();
    let Some(spec) = &ctx.spectrum else {
        for name in ["sum-rule", "reflection", "zero-mode-factorization", "self-adjoint-implies-unique"] {
            s.skip(name, "no fibre spectrum available");
        }
        return;
    };
    let ws = weight_list(ctx);
    let mut sum_ok = true;
    let mut refl_ok = true;
    for a in &ws {
        let target = Q::from_integer(2.into()) * a - Q::from_integer((f as i64).into());
        for (k, lines) in spec.degrees().iter().enumerate() {
            for line in lines {
                let pair = indicial_roots(f, a, k, &line.value);
                sum_ok &= match (&pair.minus, &pair.plus) {
                    (Real::Exact(m), Real::Exact(p)) => m + p == target,
                    (m, p) => {
                        let t = edgehodge_core::spectral::Real::Exact(target.clone()).to_f64();
                        (m.to_f64() + p.to_f64() - t).abs() <= m.error_bound() + p.error_bound() + 4.0 * f64::EPSILON * (1.0 + t.abs())
                    }
                };
                // k ↦ f − 2a − k leaves the discriminant fixed
                let mirror = Q::from_integer((f as i64 - k as i64).into()) - Q::from_integer(2.into()) * a;
                if mirror.is_integer() && mirror >= Q::from_integer(0.into()) {
                    if let Ok(kk) = usize::try_from(mirror.to_integer()) {
                        refl_ok &= discriminant(f, a, k, &line.value) == discriminant(f, a, kk, &line.value);
                    }
                }
            }
        }
    }
    s.check("sum-rule", sum_ok, "γ₋ + γ₊ = 2a − f");
    s.check("reflection", refl_ok, "discriminant invariant under k ↦ f − 2a − k");

    let mut fact_ok = true;
    for a in &ws {
        for k in 0..=f {
            let pair = indicial_roots(f, a, k, &Real::exact_int(0));
            let mut want = [-Q::from_integer((k as i64).into()), Q::from_integer((k as i64 - f as i64).into()) + Q::from_integer(2.into()) * a];
            want.sort();
            fact_ok &= matches!((&pair.minus, &pair.plus), (Real::Exact(m), Real::Exact(p)) if [m.clone(), p.clone()] == want);
        }
    }
    s.check("zero-mode-factorization", fact_ok, "λ = 0 roots are −k and k + 2a − f");

    let betti = spec.betti();
    let ok = ws.iter().all(|a| !essentially_selfadjoint(f, a, spec) || unique_closed_extension_d(f, a, &betti));
    s.check("self-adjoint-implies-unique", ok, "essential self-adjointness forces d_max = d_min");
}

fn fibredec(ctx: &Context, s: &mut Sink) -> Result<(), Error> {
    let Some(fibre) = &ctx.fibre else {
        for name in ["exactness", "weighted-symmetry", "snapped-betti", "torus-duality"] {
            s.skip(name, "fibre is not meshed");
        }
        return convergence(s);
    };
    let exact = fibre.complex().verify() && (0..fibre.dimension().saturating_sub(1)).all(|q| (fibre.d(q + 1) * fibre.d(q)).iter().all(|x| *x == 0.0));
    s.check("exactness", exact, "discrete d∘d = 0 exactly");

    let mut sym_ok = true;
    for q in 0..=fibre.dimension() {
        let lap = fibre.laplacian(q)?;
        let w: Vec<f64> = fibre.weights(q).to_vec();
        let mut worst = 0.0f64;
        let mut scale = 0.0f64;
        for i in 0..lap.nrows() {
            for j in 0..lap.ncols() {
                worst = worst.max((w[i] * lap[(i, j)] - w[j] * lap[(j, i)]).abs());
                scale = scale.max((w[i] * lap[(i, j)]).abs());
            }
        }
        sym_ok &= worst <= 4.0 * f64::EPSILON * scale;
    }
    s.check("weighted-symmetry", sym_ok, "W Δ is symmetric");

    let snapped = spectrum_for_predicates(fibre)?.betti();
    let want = ctx.space.fibre_betti();
    s.check("snapped-betti", snapped == want, format!("zero modes {snapped:?}, Betti {want:?}"));

    if fibre.dimension() == 2 {
        let count = fibre.dims()[0];
        let s0 = fibre_spectrum(fibre, 0, count)?;
        let s2 = fibre_spectrum(fibre, 2, count)?;
        let tol = 1e-9 * s0.operator_norm.max(s2.operator_norm);
        let ok = s0.eigenvalues.iter().zip(&s2.eigenvalues).all(|(a, b)| (a - b).abs() <= tol);
        s.check("torus-duality", ok, "degree 0 and degree 2 spectra agree");
    } else {
        s.skip("torus-duality", "fibre is not two-dimensional");
    }
    convergence(s)
}

fn convergence(s: &mut Sink) -> Result<(), Error> {
    let two_pi = 2.0 * std::f64::consts::PI;
    let err = |n: usize| -> Result<f64, Error> { Ok((fibre_spectrum(&circle(n, two_pi)?, 0, 3)?.eigenvalues[2] - 1.0).abs()) };
    let ratio = err(32)? / err(64)?;
    s.check("mesh-convergence", (3.5..=4.5).contains(&ratio), format!("error ratio {ratio:.4}"));
    Ok(())
}

fn radial(ctx: &Context, s: &mut Sink) -> Result<(), Error> {
    let sp = ctx.space;
    let f = sp.f();
    let ws = weight_list(ctx);

    let triangle = ws.iter().all(|a| {
        let table = local_cohomology(sp.fibre_betti(), f, a);
        let finite = finite_pullback_degrees(f, a);
        (0..=f).all(|k| {
            let h = sp.fibre_betti().get(k).copied().unwrap_or(0);
            table.max[k] == if finite.contains(&k) && pullback_norm(k, f, a).is_finite() { h } else { 0 }
        })
    });
    s.check("consistency-triangle", triangle, "max table keeps exactly the finite-norm pullbacks");

    let scan = (0..=5usize).all(|ff| {
        let betti = vec![1; ff + 1];
        default_weights().iter().all(|a| {
            let t = local_cohomology(&betti, ff, a);
            t.min.iter().zip(&t.max).all(|(m, x)| m <= x)
        })
    });
    s.check("min-below-max", scan, "min table ≤ max table for f ≤ 5, |a| ≤ 2");

    let mut worst = 0.0f64;
    for w in sample_forms() {
        worst = worst.max(reconstruct(&w, ctx.c, &ctx.grid)?.max_error());
    }
    s.check("homotopy-reconstruction", worst <= 1e-8, format!("max error {worst:.2e} over 10 forms"));

    let mut bound_ok = true;
    for a in &ws {
        for k in 1..=f + 1 {
            let profile = ConeModeProfile::from_fn(k, Real::exact_int(0), &ctx.grid, |_| 0.0, |x| 1.0 - 2.0 * x + 3.0 * x * x)?;
            match homotopy_K(&profile, f, a, ctx.c) {
                Ok(h) => bound_ok &= h.within_bound(),
                Err(edgehodge_core::RadialError::Unbounded { .. }) => {}
                Err(e) => return Err(e.into()),
            }
        }
    }
    s.check("homotopy-bound", bound_ok, "‖K_c ω‖² within the corrected constant");

    let lambdas: Vec<f64> = match &ctx.spectrum {
        Some(spec) => {
            let mut v: Vec<f64> = spec.degrees().iter().flat_map(|d| d.iter().map(|l| l.value.to_f64())).filter(|x| *x > 0.0).collect();
            v.sort_by(f64::total_cmp);
            v.dedup();
            v.truncate(2);
            std::iter::once(0.0).chain(v).collect()
        }
        None => vec![0.0, 1.0],
    };
    let (mut tested, mut exp_ok) = (0usize, true);
    let mut max_dev = 0.0f64;
    for a in &ws {
        for k in 0..=f {
            for &l2 in &lambdas {
                let e = mode_exponent_on(k, l2, f, a, &ctx.grid)?;
                if !e.within_contract || e.double_root {
                    continue;
                }
                let exact = indicial_roots(f, a, k, &Real::approx(l2));
                let dev = (e.minus - exact.minus.to_f64()).abs().max((e.plus - exact.plus.to_f64()).abs());
                let target = 2.0 * Real::Exact(a.clone()).to_f64() - f as f64;
                max_dev = max_dev.max(dev);
                exp_ok &= dev <= 1e-3 && (e.minus + e.plus - target).abs() <= 2e-3;
                tested += 1;
            }
        }
    }
    s.check("exponent-recovery", exp_ok, format!("{tested} modes, max deviation {max_dev:.2e}"));

    let mut dich_ok = true;
    let mut window = 0;
    for a in &ws {
        for k in 0..=f {
            if window_position(k, f, a) != WindowPosition::Inside {
                continue;
            }
            window += 1;
            let root = ConeModeProfile::power(k, Q::new(1.into(), 2.into()), &ctx.grid)?;
            let constant = ConeModeProfile::power(k, Q::from_integer(0.into()), &ctx.grid)?;
            dich_ok &= min_membership(k, f, a, &root)?.is_member() && !min_membership(k, f, a, &constant)?.is_member();
        }
    }
    s.check("window-dichotomy", dich_ok, format!("{window} window degrees"));
    Ok(())
}
