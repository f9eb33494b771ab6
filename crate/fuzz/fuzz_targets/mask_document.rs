#![no_main]

use libfuzzer_sys::fuzz_target;
use pseudospline::format::MaskDocument;
use pseudospline::mask::MaskMatrix;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(doc) = MaskDocument::parse(text) else { return };
    let reparsed = MaskDocument::parse(&doc.to_json()).expect("printed document parses");
    assert_eq!(reparsed, doc);
    if let Ok(symbol) = doc.to_symbol() {
        let mask = doc.mask().unwrap();
        if !symbol.poly.is_zero() {
            assert_eq!(MaskMatrix::from_symbol(&symbol.poly).unwrap().to_symbol(), mask.to_symbol());
        }
    }
});
