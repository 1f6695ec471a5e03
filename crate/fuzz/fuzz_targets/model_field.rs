#![no_main]
use cohomkit::linalg::Field;
use cohomkit::periodicity::Model;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(m) = s.parse::<Model>() {
        assert_eq!(m.to_string().parse::<Model>().unwrap(), m);
    }
    if let Ok(f) = s.parse::<Field>() {
        assert_eq!(f.to_string().parse::<Field>().unwrap(), f);
    }
});
