#![no_main]
use cohomkit::symmfunc::parse_partition;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(p) = parse_partition(s) {
        let back = parse_partition(&p.to_string()).expect("display output reparses");
        assert_eq!(p, back);
    }
});
