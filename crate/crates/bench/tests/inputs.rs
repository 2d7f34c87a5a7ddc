use gtoc12_bench::{catalog, mining_fleet, mixed_fleet};
use gtoc12_core::{validate_text, ValidationConfig};

#[test]
fn bench_inputs_are_valid() {
    let catalog = catalog();
    let config = ValidationConfig::default();
    for text in [mining_fleet(&catalog), mixed_fleet(&catalog)] {
        let report = validate_text(&text, &catalog, &config);
        assert!(report.valid, "{:?}", report.violations);
    }
}
