#![no_main]

use libfuzzer_sys::fuzz_target;
use qmv_power::data::load_population_table;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(table) = load_population_table(text) {
        let again = load_population_table(&table.to_csv()).expect("serialised table reloads");
        assert_eq!(again.rows(), table.rows());
    }
});
