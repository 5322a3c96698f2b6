#![no_main]
use libfuzzer_sys::fuzz_target;
use mahlerlab::numeric::ball::Ball;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok((b, p)) = Ball::parse(s) {
            let _ = b.to_string_prec(p.clamp(2, 256));
        }
    }
});
