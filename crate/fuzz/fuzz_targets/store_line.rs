#![no_main]
use libfuzzer_sys::fuzz_target;
use mahlerlab::mahler::WnRecord;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(r) = WnRecord::from_json(s) {
            let line = r.to_json();
            assert_eq!(WnRecord::from_json(&line).expect("round trip").to_json(), line);
        }
    }
});
