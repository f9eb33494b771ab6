#![no_main]

use libfuzzer_sys::fuzz_target;
use pseudospline::format::{format_fraction, parse_mu_list};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(mu) = parse_mu_list(text) {
        let joined: Vec<String> = mu.iter().map(format_fraction).collect();
        assert_eq!(parse_mu_list(&joined.join(",")).unwrap(), mu);
    }
});
