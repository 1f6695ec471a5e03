#![no_main]
use cohomkit::projcomb::Triangle;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if data.len() > 4096 {
        return;
    }
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(t) = Triangle::from_json_str(s) {
        let back = Triangle::from_json_str(&t.to_json().to_string()).expect("to_json output reparses");
        assert_eq!(t, back);
    }
});
