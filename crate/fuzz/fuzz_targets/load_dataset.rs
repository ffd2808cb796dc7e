#![no_main]

//! Input: journals CSV, a NUL byte, matrix CSV. Datasets that load are pushed
//! through structure analysis and every indicator.

use journal_indicators::{io, structure, IndicatorSpec, IwNormalization, SolverConfig};
use journal_indicators::{EigenParams, PageRankParams};
use libfuzzer_sys::fuzz_target;

const MAX_JOURNALS: usize = 16;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Some((journals, matrix)) = text.split_once('\0') else {
        return;
    };
    let Ok(dataset) = io::load_dataset(journals, matrix) else {
        return;
    };
    let report = structure(dataset.matrix());
    assert_eq!(
        report.components.iter().map(Vec::len).sum::<usize>(),
        dataset.n()
    );
    if dataset.n() > MAX_JOURNALS {
        return;
    }
    let config = SolverConfig {
        max_iterations: 2_000,
        ..SolverConfig::direct()
    };
    let specs = [
        IndicatorSpec::If,
        IndicatorSpec::Af,
        IndicatorSpec::Ipp(IwNormalization::References),
        IndicatorSpec::Ai(EigenParams::default()),
        IndicatorSpec::Ai(EigenParams::new(1.0).unwrap()),
        IndicatorSpec::Sjr(PageRankParams::SJR_DEFAULT),
    ];
    for spec in specs {
        // errors are fine; panics are not
        if let Ok(v) = spec.compute(&dataset, &config) {
            assert_eq!(v.len(), dataset.n());
        }
    }
});
