#![no_main]

use journal_indicators::io;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(table) = io::parse_correlation_csv(text) {
        let k = table.labels.len();
        assert!(table.pearson.len() == k && table.spearman.len() == k);
        let _ = io::write_correlation_csv(&table, None);
    }
});
