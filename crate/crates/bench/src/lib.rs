//! Inputs shared by the benchmarks.

use gtoc12_core::synth::{fixture_catalog, FixtureSpec, SynthesisSpec, Synthesizer};
use gtoc12_core::{serialize_solution, AsteroidCatalog};

/// The 60,000-row synthetic catalog.
pub fn catalog() -> AsteroidCatalog {
    fixture_catalog(&FixtureSpec::default())
}

/// A 10-ship file where every ship mines one family.
pub fn mining_fleet(catalog: &AsteroidCatalog) -> String {
    let synth = Synthesizer::new(catalog);
    let doc = (0..50)
        .find_map(|seed| {
            synth
                .synthesize(&SynthesisSpec {
                    ships: 10,
                    mining_ships: 10,
                    seed,
                    ..SynthesisSpec::default()
                })
                .ok()
        })
        .expect("fixture catalog has ten families");
    serialize_solution(&doc).unwrap()
}

/// One mining ship and two thrusting ships.
pub fn mixed_fleet(catalog: &AsteroidCatalog) -> String {
    let doc = Synthesizer::new(catalog)
        .synthesize(&SynthesisSpec::default())
        .unwrap();
    serialize_solution(&doc).unwrap()
}
