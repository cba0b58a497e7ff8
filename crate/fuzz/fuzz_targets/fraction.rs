#![no_main]

use libfuzzer_sys::fuzz_target;
use qmv_power::{quota_from_fraction, Fraction};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(f) = text.parse::<Fraction>() {
        assert_eq!(f.to_string().parse::<Fraction>().unwrap(), f);
        let q = quota_from_fraction(u64::MAX, f);
        assert!(q >= 1);
    }
});
