#![no_main]

use libfuzzer_sys::fuzz_target;
use pseudospline::format::{format_fraction, parse_fraction};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(r) = parse_fraction(text) {
        let printed = format_fraction(&r);
        assert_eq!(parse_fraction(&printed).unwrap(), r);
        assert_eq!(format_fraction(&parse_fraction(&printed).unwrap()), printed);
    }
});
