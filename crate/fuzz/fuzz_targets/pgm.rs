#![no_main]

use libfuzzer_sys::fuzz_target;
use pseudospline::format::parse_pgm;

fuzz_target!(|data: &[u8]| {
    if let Ok(r) = parse_pgm(data) {
        assert_eq!(r.pixels.len(), r.width * r.height);
        assert!(r.pixels.iter().all(|&p| p <= r.maxval));
    }
});
