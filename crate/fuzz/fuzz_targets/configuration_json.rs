#![no_main]
use cohomkit::projcomb::Configuration;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if data.len() > 4096 {
        return;
    }
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(c) = Configuration::from_json_str(s) {
        let back = Configuration::from_json_str(&c.to_json().to_string()).expect("to_json output reparses");
        assert_eq!(c, back);
    }
});
