#![no_main]
use cohomkit::periodicity::GradedAlgebra;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if data.len() > 4096 {
        return;
    }
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(a) = GradedAlgebra::from_json_str(s) {
        let json = a.to_json();
        let back = GradedAlgebra::from_json_str(&json.to_string()).expect("to_json output reparses");
        assert_eq!(json, back.to_json());
    }
});
