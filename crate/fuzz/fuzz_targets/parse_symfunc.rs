#![no_main]
use cohomkit::symmfunc::parse_symfunc;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(f) = parse_symfunc(s) {
        // coefficients may exceed the literal limit once terms are merged
        if let Ok(back) = parse_symfunc(&f.to_string()) {
            assert_eq!(f, back);
        }
    }
});
