#![no_main]
use libfuzzer_sys::fuzz_target;
use mahlerlab::liouville::witness::verify_witness_json;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        let _ = verify_witness_json(s, 64);
    }
});
