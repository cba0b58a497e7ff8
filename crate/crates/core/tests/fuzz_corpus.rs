//! Replays the checked-in fuzz seeds through the same checks as the fuzz targets.

use std::fs;
use std::path::PathBuf;

use qmv_power::data::{load_population_table, load_scenario_config};
use qmv_power::Fraction;

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut out: Vec<(String, String)> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let path = e.unwrap().path();
            let text = fs::read_to_string(&path).unwrap();
            (
                path.file_name().unwrap().to_string_lossy().into_owned(),
                text,
            )
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn population_seeds() {
    let mut accepted = 0;
    for (name, text) in seeds("population_csv") {
        if let Ok(table) = load_population_table(&text) {
            let again = load_population_table(&table.to_csv()).unwrap();
            assert_eq!(again.rows(), table.rows(), "{name}");
            accepted += 1;
        }
    }
    assert!(accepted >= 3);
}

#[test]
fn scenario_seeds() {
    let mut accepted = 0;
    for (name, text) in seeds("scenario_config") {
        if let Ok(config) = load_scenario_config(&text) {
            assert_eq!(
                load_scenario_config(&config.to_text()).unwrap(),
                config,
                "{name}"
            );
            accepted += 1;
        }
    }
    assert!(accepted >= 3);
}

#[test]
fn fraction_seeds() {
    for (name, text) in seeds("fraction") {
        if let Ok(f) = text.parse::<Fraction>() {
            assert_eq!(f.to_string().parse::<Fraction>().unwrap(), f, "{name}");
        }
    }
}
