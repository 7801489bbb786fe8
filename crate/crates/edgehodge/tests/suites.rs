use edgehodge::run::fibre_data;
use edgehodge::suites::{run_suite, Context, Outcome, Suite};
use edgehodge::RunConfig;
use edgehodge_core::fibredec::circle;
use edgehodge_core::radial::LogGrid;
use edgehodge_core::stratified::{builtin, CATALOGUE};

fn context<'a>(space: &'a edgehodge_core::stratified::EdgeSpaceModel, name: &str) -> Context<'a> {
    let (spectrum, fibre) = fibre_data(space, &RunConfig::for_space(name)).unwrap();
    Context { space, weights: Vec::new(), spectrum, fibre, grid: LogGrid::default(), c: 0.75, seed: 7 }
}

#[test]
fn every_builtin_passes_every_module_suite() {
    for entry in CATALOGUE {
        let space = builtin(entry.name).unwrap();
        let ctx = context(&space, entry.name);
        for suite in Suite::ALL.into_iter().filter(|s| *s != Suite::Cli) {
            let checks = run_suite(suite, &ctx).unwrap();
            assert!(!checks.is_empty());
            for c in &checks {
                assert!(c.ok(), "{} {} {}: {}", entry.name, suite.as_str(), c.name, c.detail);
            }
        }
    }
}

#[test]
fn duality_runs_exactly_on_closed_spaces() {
    for entry in CATALOGUE {
        let space = builtin(entry.name).unwrap();
        let checks = run_suite(Suite::Stratified, &context(&space, entry.name)).unwrap();
        let duality = checks.iter().find(|c| c.name == "poincare-duality").unwrap();
        let closed = !entry.name.starts_with("cone-");
        assert_eq!(duality.outcome == Outcome::Pass, closed, "{}", entry.name);
    }
}

#[test]
fn mismatched_mesh_is_caught() {
    let space = builtin("cone-torus").unwrap();
    let mut ctx = context(&space, "cone-torus");
    ctx.fibre = Some(circle(8, 1.0).unwrap());
    let checks = run_suite(Suite::Fibredec, &ctx).unwrap();
    let snapped = checks.iter().find(|c| c.name == "snapped-betti").unwrap();
    assert_eq!(snapped.outcome, Outcome::Fail);
}

#[test]
fn seeds_change_nothing_observable() {
    let space = builtin("edge-circle-over-circle").unwrap();
    let mut ctx = context(&space, "edge-circle-over-circle");
    let a = run_suite(Suite::Cochain, &ctx).unwrap();
    ctx.seed = 12345;
    assert_eq!(run_suite(Suite::Cochain, &ctx).unwrap(), a);
}
