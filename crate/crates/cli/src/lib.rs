//! Command-line and HTTP front ends for the GTOC 12 validator.

pub mod response;
pub mod service;

use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use gtoc12_core::catalog::CatalogError;
use gtoc12_core::synth::{fixture_catalog, FixtureSpec};
use gtoc12_core::{load_asteroid_catalog, AsteroidCatalog};

pub use response::ValidateResponse;

/// Load the asteroid table from `path`, or build the synthetic fixture
/// catalog when no path is given.
pub fn load_catalog(path: Option<&Path>) -> Result<AsteroidCatalog, CatalogError> {
    match path {
        Some(p) => {
            let file = File::open(p)?;
            load_asteroid_catalog(BufReader::new(file))
        }
        None => {
            log::info!("no catalog given; using the built-in synthetic catalog");
            Ok(fixture_catalog(&FixtureSpec::default()))
        }
    }
}
