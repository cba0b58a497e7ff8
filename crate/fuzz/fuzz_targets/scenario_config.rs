#![no_main]

use libfuzzer_sys::fuzz_target;
use qmv_power::data::load_scenario_config;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(config) = load_scenario_config(text) {
        let again = load_scenario_config(&config.to_text()).expect("serialised config reloads");
        assert_eq!(again, config);
    }
});
