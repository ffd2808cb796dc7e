#![no_main]

//! Input: journals CSV, a NUL byte, partition CSV.

use journal_indicators::io;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Some((journals, partition)) = text.split_once('\0') else {
        return;
    };
    let Ok(journals) = io::parse_journals_csv(journals) else {
        return;
    };
    if let Ok(p) = io::parse_partition_csv(partition, &journals) {
        assert_eq!(p.len(), journals.len());
        let written = io::write_partition_csv(&journals, &p);
        assert_eq!(io::parse_partition_csv(&written, &journals).unwrap(), p);
    }
});
