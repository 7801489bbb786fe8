//! Report builders for each subcommand and the config-driven `run`.

use std::f64::consts::PI;

use edgehodge_core::cochain::CochainComplex;
use edgehodge_core::fibredec::{circle, fibre_spectrum, spectrum_for_predicates, torus, DiscreteFibre};
use edgehodge_core::radial::{
    local_cohomology, mode_exponent_on, norm_bound, pullback_norm, slice_constant, window_position, LogGrid, PullbackNorm, WindowPosition,
};
use edgehodge_core::spectral::{
    closed_form, indicial_roots, scan_critical, unique_closed_extension_d, window_degree, FibreSpectrum, IndicialRootPair, Real,
};
use edgehodge_core::stratified::{EdgeSpaceModel, Perversity, CATALOGUE};
use edgehodge_core::weights::{complete_l2, minimal_hodge_dims, weighted_derham_dims, Extension, L2Verdict};
use edgehodge_core::{RadialError, Q};

use crate::config::{parse_perversity, RunConfig, SuiteToggles};
use crate::error::Error;
use crate::report::{Cell, Report, Section};
use crate::suites::{default_weights, run_suite, Context, Outcome, Suite};

/// Worker count from `EDGEHODGE_THREADS`, else the available parallelism.
pub fn thread_count() -> usize {
    std::env::var("EDGEHODGE_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|n| *n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Maps `f` over `items` on scoped threads; results keep input order.
pub fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let threads = thread_count().min(items.len()).max(1);
    if threads == 1 {
        return items.iter().map(f).collect();
    }
    let chunk = items.len().div_ceil(threads);
    std::thread::scope(|scope| {
        let handles: Vec<_> = items.chunks(chunk).map(|part| scope.spawn(|| part.iter().map(&f).collect::<Vec<R>>())).collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    })
}

fn real_cell(r: &Real) -> Cell {
    match r {
        Real::Exact(q) => Cell::exact(q),
        Real::Approx { value, err } => Cell::numeric(*value, *err),
    }
}

fn opt_cell(v: Option<i64>) -> Cell {
    v.map_or_else(|| Cell::text("-"), Cell::exact)
}

fn yes_no(b: bool) -> Cell {
    Cell::text(if b { "yes" } else { "no" })
}

pub fn list_report() -> Report {
    let mut r = Report::new("built-in spaces");
    let mut s = Section::new("catalogue", &["name", "n", "b", "f", "fibre", "base", "description"]);
    for e in CATALOGUE {
        s.push(vec![
            Cell::text(e.name),
            Cell::exact(e.n),
            Cell::exact(e.b),
            Cell::exact(e.f),
            Cell::text(e.fibre),
            Cell::text(e.base),
            Cell::text(e.description),
        ]);
    }
    r.sections.push(s);
    r
}

fn cohomology(c: &CochainComplex) -> Result<Vec<usize>, Error> {
    Ok(c.cohomology_dims()?)
}

pub fn space_section(space: &EdgeSpaceModel) -> Result<Section, Error> {
    let mut s = Section::new("space", &["name", "n", "b", "f", "H(F)", "H(B)", "H(M)", "H(Y)"]);
    s.push(vec![
        Cell::text(space.name()),
        Cell::exact(space.n()),
        Cell::exact(space.b()),
        Cell::exact(space.f()),
        Cell::dims(space.fibre_betti()),
        Cell::dims(space.base_betti()),
        Cell::dims(&cohomology(space.regular())?),
        Cell::dims(&cohomology(space.link())?),
    ]);
    Ok(s)
}

pub fn ih_section(space: &EdgeSpaceModel, perversities: &[Perversity]) -> Result<Section, Error> {
    let mut s = Section::new("intersection cohomology", &["perversity", "cutoff", "IH"]);
    let rows = par_map(perversities, |p: &Perversity| space.ih_dims(p).map(|r| (p.clone(), r.dims)));
    for row in rows {
        let (p, dims) = row?;
        s.push(vec![Cell::exact(&p), Cell::exact(p.cutoff(space.f()).clamp(-1, space.f() as i64)), Cell::dims(&dims)]);
    }
    Ok(s)
}

pub fn weights_section(space: &EdgeSpaceModel, weights: &[Q]) -> Result<Section, Error> {
    let mut s = Section::new("weighted cohomology", &["a", "extension", "perversity", "dims"]);
    let rows = par_map(weights, |a| -> Result<Vec<_>, Error> {
        Ok(vec![
            weighted_derham_dims(space, a, Extension::Max)?,
            weighted_derham_dims(space, a, Extension::Min)?,
            minimal_hodge_dims(space, a)?,
        ])
    });
    for reports in rows {
        for w in reports? {
            let perversity = match &w.source_perversity {
                Some(src) => Cell::text(format!("{src} -> {}", w.perversity)),
                None => Cell::exact(&w.perversity),
            };
            s.push(vec![Cell::exact(&w.weight), Cell::text(w.extension.as_str()), perversity, Cell::dims(&w.dims)]);
        }
    }
    Ok(s)
}

/// Spectrum for the predicates and, when available, a mesh of the fibre.
pub fn fibre_data(space: &EdgeSpaceModel, cfg: &RunConfig) -> Result<(Option<FibreSpectrum>, Option<DiscreteFibre>), Error> {
    if let Some(fc) = &cfg.fibre {
        let fibre = fc.build()?;
        let spec = spectrum_for_predicates(&fibre)?;
        if spec.betti() != space.fibre_betti() {
            return Err(Error::Model(format!(
                "meshed fibre has Betti numbers {:?}, the model's fibre has {:?}",
                spec.betti(),
                space.fibre_betti()
            )));
        }
        return Ok((Some(spec), Some(fibre)));
    }
    let Some(entry) = CATALOGUE.iter().find(|e| cfg.space.as_deref() == Some(e.name)) else {
        return Ok((None, None));
    };
    let one = Q::from_integer(1.into());
    Ok(match entry.fibre {
        "S^1" => (Some(closed_form::circle(&one, 4)), Some(circle(32, 2.0 * PI)?)),
        "T^2" => (Some(closed_form::torus(&one, &one, 3)), Some(torus(12, 12, 2.0 * PI, 2.0 * PI)?)),
        "S^2" => (Some(closed_form::sphere2(&one, 4)), None),
        _ => (None, None),
    })
}

pub fn spectral_sections(space: &EdgeSpaceModel, weights: &[Q], spec: &FibreSpectrum) -> (Section, Section) {
    let f = space.f();
    let mut pred = Section::new(
        "predicates",
        &["a", "window degree", "d_max = d_min", "essentially self-adjoint", "critical pairs", "boundary pairs"],
    );
    let mut roots = Section::new("critical roots", &["a", "k", "lambda^2", "gamma-", "gamma+", "multiplicity", "window"]);
    let betti = spec.betti();
    let scans = par_map(weights, |a| scan_critical(f, a, spec));
    for (a, scan) in weights.iter().zip(scans) {
        let count = |v: &[IndicialRootPair]| v.iter().map(|p| p.multiplicity).sum::<usize>();
        pred.push(vec![
            Cell::exact(a),
            opt_cell(window_degree(f, a)),
            yes_no(unique_closed_extension_d(f, a, &betti)),
            yes_no(scan.critical.is_empty()),
            Cell::exact(count(&scan.critical)),
            Cell::exact(count(&scan.boundary)),
        ]);
        for (pair, tag) in scan.critical.iter().map(|p| (p, "critical")).chain(scan.boundary.iter().map(|p| (p, "boundary"))) {
            roots.push(vec![
                Cell::exact(a),
                Cell::exact(pair.degree),
                real_cell(&pair.lambda2),
                real_cell(&pair.minus),
                real_cell(&pair.plus),
                Cell::exact(pair.multiplicity),
                Cell::text(tag),
            ]);
        }
    }
    (pred, roots)
}

pub fn complete_section(space: &EdgeSpaceModel, degrees: std::ops::RangeInclusive<usize>) -> Result<Section, Error> {
    let mut s = Section::new("complete metric", &["k", "perversity", "L2 cohomology"]);
    for k in degrees {
        let answer = complete_l2(space, k)?;
        let row = match answer.verdict {
            L2Verdict::Infinite => vec![Cell::exact(k), Cell::text("-"), Cell::text("infinite")],
            L2Verdict::Finite { dim, perversity } => vec![Cell::exact(k), Cell::exact(perversity), Cell::exact(dim)],
        };
        s.push(row);
    }
    Ok(s)
}

/// Cone-level data for each weight: local tables, pullback norms, slice
/// constants, homotopy bounds and recovered exponents.
pub fn cone_lab_sections(f: usize, fibre_betti: &[usize], weights: &[Q], lambdas: &[f64], grid: &LogGrid, c: f64) -> Result<Vec<Section>, Error> {
    let mut tables = Section::new("cone tables", &["a", "max", "min"]);
    let mut degrees = Section::new("cone degrees", &["a", "k", "pullback norm", "slice constant", "window", "K_c bound"]);
    let mut exps = Section::new("radial exponents", &["a", "k", "lambda^2", "gamma- fitted", "gamma+ fitted", "gamma- exact", "gamma+ exact", "contract"]);
    for a in weights {
        let t = local_cohomology(fibre_betti, f, a);
        tables.push(vec![Cell::exact(a), Cell::dims(&t.max), Cell::dims(&t.min)]);
        for k in 0..=f {
            let norm = match pullback_norm(k, f, a) {
                PullbackNorm::Finite(q) => Cell::exact(q),
                PullbackNorm::Divergent => Cell::text("divergent"),
            };
            let window = match window_position(k, f, a) {
                WindowPosition::Inside => "inside",
                WindowPosition::Endpoint => "boundary",
                WindowPosition::Outside => "outside",
            };
            let bound = match norm_bound(k + 1, f, a, c) {
                Ok(b) => Cell::numeric(b.bound, 1e-12),
                Err(RadialError::Unbounded { .. }) => Cell::text("unbounded"),
                Err(e) => return Err(e.into()),
            };
            degrees.push(vec![Cell::exact(a), Cell::exact(k), norm, real_cell(&slice_constant(k, f, a)), Cell::text(window), bound]);
        }
        let cells: Vec<(usize, f64)> = (0..=f).flat_map(|k| lambdas.iter().map(move |l| (k, *l))).collect();
        let fitted = par_map(&cells, |(k, l2)| mode_exponent_on(*k, *l2, f, a, grid));
        for ((k, l2), e) in cells.iter().zip(fitted) {
            let e = e?;
            let exact = indicial_roots(f, a, *k, &Real::approx(*l2));
            exps.push(vec![
                Cell::exact(a),
                Cell::exact(k),
                Cell::numeric(*l2, 0.0),
                Cell::numeric(e.minus, 1e-3),
                Cell::numeric(e.plus, 1e-3),
                real_cell(&exact.minus),
                real_cell(&exact.plus),
                Cell::text(if e.double_root { "double root" } else if e.within_contract { "yes" } else { "no" }),
            ]);
        }
    }
    Ok(vec![tables, degrees, exps])
}

/// `(degree, eigenvalues, harmonic dim, max residual)` for the lowest `count` modes per degree.
pub fn fibre_spec_section(fibre: &DiscreteFibre, count: usize) -> Result<(Section, Vec<edgehodge_core::fibredec::SpectrumResult>), Error> {
    let mut s = Section::new("fibre spectrum", &["degree", "index", "eigenvalue", "harmonic dim"]);
    let mut results = Vec::new();
    for q in 0..=fibre.dimension() {
        let r = fibre_spectrum(fibre, q, count.min(fibre.dims()[q]))?;
        let tol = r.zero_tolerance.max(r.max_residual);
        for (i, v) in r.eigenvalues.iter().enumerate() {
            s.push(vec![Cell::exact(q), Cell::exact(i), Cell::numeric(*v, tol), Cell::exact(r.harmonic_dim)]);
        }
        results.push(r);
    }
    Ok((s, results))
}

fn lambdas_for(spec: Option<&FibreSpectrum>) -> Vec<f64> {
    let mut v: Vec<f64> = spec
        .map(|s| s.degrees().iter().flat_map(|d| d.iter().map(|l| l.value.to_f64())).filter(|x| *x > 0.0).collect())
        .unwrap_or_else(|| vec![1.0]);
    v.sort_by(f64::total_cmp);
    v.dedup_by(|a, b| (*a - *b).abs() <= 1e-9 * b.abs());
    v.truncate(2);
    std::iter::once(0.0).chain(v).collect()
}

pub fn checks_section(space: &EdgeSpaceModel, cfg: &RunConfig, suites: &[Suite], report: &mut Report) -> Result<(), Error> {
    let (spectrum, fibre) = fibre_data(space, cfg)?;
    let weights = cfg.parsed_weights()?;
    let ctx = Context { space, weights, spectrum, fibre, grid: cfg.grid()?, c: cfg.radial.c, seed: 0x5eed };
    let module_suites: Vec<Suite> = suites.iter().copied().filter(|s| *s != Suite::Cli).collect();
    let results = par_map(&module_suites, |s| run_suite(*s, &ctx));
    let mut section = Section::new("checks", &["suite", "check", "status", "detail"]);
    let mut push = |suite: Suite, name: &str, outcome: &Outcome, detail: &str, report: &mut Report| {
        let status = match outcome {
            Outcome::Pass => "PASS",
            Outcome::Fail => "FAIL",
            Outcome::Skipped => "skip",
        };
        report.record(*outcome != Outcome::Fail);
        section.push(vec![Cell::text(suite.as_str()), Cell::text(name), Cell::text(status), Cell::text(detail)]);
    };
    for (suite, checks) in module_suites.iter().zip(results) {
        match checks {
            Ok(checks) => checks.iter().for_each(|c| push(c.suite, c.name, &c.outcome, &c.detail, report)),
            // a numerical breakdown inside a suite is a failed check, not a crash
            Err(Error::Numeric(msg)) => push(*suite, "numerics", &Outcome::Fail, &msg, report),
            Err(e) => return Err(e),
        }
    }
    if suites.contains(&Suite::Cli) {
        let mut plain = cfg.clone();
        plain.suites = SuiteToggles::default();
        let first = run(&plain)?;
        let second = run(&plain)?;
        let same = first.to_json() == second.to_json() && first.to_text() == second.to_text();
        let outcome = if same { Outcome::Pass } else { Outcome::Fail };
        push(Suite::Cli, "determinism", &outcome, "two runs give byte-identical reports", report);
    }
    report.sections.push(section);
    Ok(())
}

/// Builds the full report for one config. The report's `passed` field is set
/// iff at least one suite ran.
pub fn run(cfg: &RunConfig) -> Result<Report, Error> {
    cfg.validate()?;
    let space = cfg.load_space()?;
    let mut report = Report::new(format!("edgehodge report: {}", space.name()));
    report.sections.push(space_section(&space)?);

    if !cfg.perversities.is_empty() {
        let ps = cfg.perversities.iter().map(|p| parse_perversity(p, space.f())).collect::<Result<Vec<_>, _>>()?;
        report.sections.push(ih_section(&space, &ps)?);
    }
    let weights = match cfg.parsed_weights()? {
        w if w.is_empty() => default_weights(),
        w => w,
    };
    report.sections.push(weights_section(&space, &weights)?);
    let (spectrum, _) = fibre_data(&space, cfg)?;
    if let Some(spec) = &spectrum {
        let (pred, roots) = spectral_sections(&space, &weights, spec);
        report.sections.push(pred);
        report.sections.push(roots);
    }
    report.sections.push(complete_section(&space, cfg.degree_range(space.n()))?);
    let grid = cfg.grid()?;
    report.sections.extend(cone_lab_sections(space.f(), space.fibre_betti(), &weights, &lambdas_for(spectrum.as_ref()), &grid, cfg.radial.c)?);

    let suites = cfg.suites.enabled();
    if !suites.is_empty() {
        checks_section(&space, cfg, &suites, &mut report)?;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn par_map_keeps_order() {
        let items: Vec<u32> = (0..37).collect();
        assert_eq!(par_map(&items, |x| x * 2), items.iter().map(|x| x * 2).collect::<Vec<_>>());
    }

    #[test]
    fn default_run_has_expected_sections() {
        let r = run(&RunConfig::for_space("cone-torus")).unwrap();
        let names: Vec<&str> = r.sections.iter().map(|s| s.name.as_str()).collect();
        assert_eq!(
            names,
            ["space", "weighted cohomology", "predicates", "critical roots", "complete metric", "cone tables", "cone degrees", "radial exponents"]
        );
        assert_eq!(r.passed, None);
    }
}
