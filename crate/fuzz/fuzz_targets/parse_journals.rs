#![no_main]

use journal_indicators::io;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(journals) = io::parse_journals_csv(text) {
        // own output parses and is a fixed point (NaN-safe, unlike `==`)
        let written = io::write_journals_csv(&journals);
        let again = io::parse_journals_csv(&written).expect("own output parses");
        assert_eq!(io::write_journals_csv(&again), written);
    }
});
