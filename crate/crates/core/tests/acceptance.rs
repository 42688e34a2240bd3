//! The full acceptance suite, one line per criterion.

use heckesum::acceptance::{run_with, AcceptanceConfig, CRITERIA};

#[test]
fn acceptance_suite() {
    let config = AcceptanceConfig {
        only: Vec::new(),
        cache_dir: std::env::var_os("HECKESUM_CACHE_DIR").map(Into::into),
    };
    let outcomes = run_with(config, |o| println!("{o}"));
    assert_eq!(outcomes.len(), CRITERIA.len());
    let failed: Vec<u32> = outcomes.iter().filter(|o| !o.passed()).map(|o| o.id).collect();
    println!(
        "{} of {} criteria passed",
        outcomes.len() - failed.len(),
        outcomes.len()
    );
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
