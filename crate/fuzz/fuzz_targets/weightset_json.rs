#![no_main]
use cohomkit::weightsets::{WeightOrder, WeightSet};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let order = WeightOrder::standard();
    if let Ok(w) = WeightSet::from_json_str(&order, s) {
        let back = WeightSet::from_json_str(&order, &w.to_json(&order).to_string()).unwrap();
        assert_eq!(w, back);
    }
});
