#![no_main]
use cohomkit::golden::{parse_reference_products, parse_reference_table};
use cohomkit::weightsets::WeightOrder;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(rows) = parse_reference_table(s) {
        let order = WeightOrder::standard();
        for r in &rows {
            let _ = r.weight_set(&order);
        }
    }
    let _ = parse_reference_products(s);
});
