#![no_main]
use cohomkit::symmfunc::SymFunc;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(f) = SymFunc::from_json_str(s) {
        let back = SymFunc::from_json_str(&f.to_json().to_string()).expect("to_json output reparses");
        assert_eq!(f, back);
    }
});
