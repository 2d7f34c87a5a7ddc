use std::sync::OnceLock;

use gtoc12_core::synth::{
    fixture_catalog, perturb_solution, FixtureSpec, PerturbKind, PerturbSite, Perturbation,
    SynthesisSpec, Synthesizer,
};
use gtoc12_core::{
    parse_solution, serialize_solution, validate_solution, validate_text, AsteroidCatalog,
    ValidationConfig,
};

fn catalog() -> &'static AsteroidCatalog {
    static CATALOG: OnceLock<AsteroidCatalog> = OnceLock::new();
    CATALOG.get_or_init(|| fixture_catalog(&FixtureSpec::default()))
}

fn synthesizer() -> &'static Synthesizer<'static> {
    static SYNTH: OnceLock<Synthesizer<'static>> = OnceLock::new();
    SYNTH.get_or_init(|| Synthesizer::new(catalog()))
}

#[test]
fn search_finds_planted_families() {
    let families = synthesizer().families();
    assert_eq!(families.len(), FixtureSpec::default().families);
    for f in families {
        assert_eq!(f.members.len(), FixtureSpec::default().family_size);
        assert!(f.arrival.epoch.mjd() - f.departure.epoch.mjd() > 2000.0);
    }
}

#[test]
fn synthesized_solutions_validate() {
    let config = ValidationConfig::default();
    for seed in 0..4 {
        let spec = SynthesisSpec {
            seed,
            ..SynthesisSpec::default()
        };
        let doc = synthesizer().synthesize(&spec).unwrap();
        let text = serialize_solution(&doc).unwrap();
        assert_eq!(parse_solution(&text).unwrap(), doc);
        let report = validate_text(&text, catalog(), &config);
        assert!(report.valid, "seed {seed}: {:#?}", report.violations);
        assert!(report.score.total_j > 0.0);
        for r in &report.per_ship_residuals {
            assert!(
                r.position < 1e-6 && r.velocity < 1e-9 && r.mass < 1e-9,
                "{r:?}"
            );
        }
    }
}

#[test]
fn perturbations_give_one_violation() {
    let config = ValidationConfig::default();
    let doc = synthesizer().synthesize(&SynthesisSpec::default()).unwrap();
    let cases = [
        (PerturbKind::Position, 2000.0, 500.0),
        (PerturbKind::Velocity, 0.002, 0.0005),
        (PerturbKind::Mass, 0.002, 0.0005),
    ];
    for site in [PerturbSite::LaunchReference, PerturbSite::FinalExit] {
        for (kind, big, small) in cases {
            for (magnitude, expect_one) in [(big, true), (small, false)] {
                let p = Perturbation {
                    ship_id: 1,
                    site,
                    kind,
                    magnitude,
                };
                let (bad, expected) = perturb_solution(&doc, &p, 9).unwrap();
                let report = validate_solution(&bad, catalog(), &config);
                let kinds: Vec<_> = report.violations.iter().map(|v| v.kind).collect();
                if expect_one {
                    assert_eq!(kinds, vec![expected], "{p:?}");
                } else {
                    assert!(kinds.is_empty(), "{p:?}: {kinds:?}");
                }
            }
        }
    }
}
