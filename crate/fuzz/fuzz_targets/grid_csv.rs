#![no_main]

use libfuzzer_sys::fuzz_target;
use pseudospline::format::{parse_grid_csv, write_grid_csv};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(grid) = parse_grid_csv(text) {
        let printed = write_grid_csv(&grid);
        let again = parse_grid_csv(&printed).expect("printed grid parses");
        assert_eq!(again, grid);
        assert_eq!(write_grid_csv(&again), printed);
    }
});
