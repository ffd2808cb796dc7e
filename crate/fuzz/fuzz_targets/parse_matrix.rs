#![no_main]

use journal_indicators::io;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok((ids, matrix)) = io::parse_matrix_csv(text) {
        assert_eq!(ids.len(), matrix.n());
        assert_eq!(matrix.as_slice().len(), matrix.n() * matrix.n());
        let _ = journal_indicators::structure(&matrix);
    }
});
