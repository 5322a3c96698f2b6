#![no_main]
use libfuzzer_sys::fuzz_target;
use mahlerlab::maillet::RationalFunction;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(r) = s.parse::<RationalFunction>() {
            let again: RationalFunction = r.to_string().parse().expect("printed form reparses");
            assert_eq!(again, r);
        }
    }
});
