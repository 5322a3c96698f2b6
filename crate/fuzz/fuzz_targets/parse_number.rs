#![no_main]
use libfuzzer_sys::fuzz_target;
use mahlerlab::numeric::spec::parse_number;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(spec) = parse_number(s) {
            let again = parse_number(&spec.to_string()).expect("printed spec reparses");
            assert_eq!(again.to_string(), spec.to_string());
        }
    }
});
