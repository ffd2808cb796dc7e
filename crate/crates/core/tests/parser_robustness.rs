//! Replays the fuzz corpus seeds and random mutations of them through the
//! parsers, checking the same properties as the fuzz targets.

use std::fs;
use std::path::PathBuf;

use journal_indicators::{io, structure, IndicatorSpec, IwNormalization, SolverConfig};
use proptest::prelude::*;

fn corpus(target: &str) -> Vec<Vec<u8>> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut entries: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .collect();
    entries.sort();
    entries.into_iter().map(|p| fs::read(p).unwrap()).collect()
}

fn split_nul(text: &str) -> Option<(&str, &str)> {
    text.split_once('\0')
}

fn check_journals(text: &str) {
    if let Ok(journals) = io::parse_journals_csv(text) {
        let written = io::write_journals_csv(&journals);
        let again = io::parse_journals_csv(&written).expect("own output parses");
        assert_eq!(io::write_journals_csv(&again), written);
    }
}

fn check_matrix(text: &str) {
    if let Ok((ids, m)) = io::parse_matrix_csv(text) {
        assert_eq!(ids.len(), m.n());
        let report = structure(&m);
        assert_eq!(report.components.iter().map(Vec::len).sum::<usize>(), m.n());
    }
}

fn check_dataset(text: &str) -> bool {
    let Some((j, m)) = split_nul(text) else {
        return false;
    };
    let Ok(data) = io::load_dataset(j, m) else {
        return false;
    };
    let config = SolverConfig {
        max_iterations: 2_000,
        ..SolverConfig::direct()
    };
    for spec in [
        IndicatorSpec::If,
        IndicatorSpec::Af,
        IndicatorSpec::Ipp(IwNormalization::References),
        IndicatorSpec::Ai(Default::default()),
    ] {
        if let Ok(v) = spec.compute(&data, &config) {
            assert_eq!(v.len(), data.n());
        }
    }
    true
}

fn check_partition(text: &str) -> bool {
    let Some((j, p)) = split_nul(text) else {
        return false;
    };
    let Ok(journals) = io::parse_journals_csv(j) else {
        return false;
    };
    match io::parse_partition_csv(p, &journals) {
        Ok(partition) => {
            let written = io::write_partition_csv(&journals, &partition);
            assert_eq!(
                io::parse_partition_csv(&written, &journals).unwrap(),
                partition
            );
            true
        }
        Err(_) => false,
    }
}

fn check_correlation(text: &str) -> bool {
    match io::parse_correlation_csv(text) {
        Ok(table) => {
            let written = io::write_correlation_csv(&table, None);
            let again = io::parse_correlation_csv(&written).unwrap();
            assert_eq!(again, table);
            true
        }
        Err(_) => false,
    }
}

#[test]
fn seeds_are_valid_inputs() {
    for seed in corpus("parse_journals") {
        assert!(io::parse_journals_csv(std::str::from_utf8(&seed).unwrap()).is_ok());
    }
    for seed in corpus("parse_matrix") {
        assert!(io::parse_matrix_csv(std::str::from_utf8(&seed).unwrap()).is_ok());
    }
    for seed in corpus("load_dataset") {
        assert!(check_dataset(std::str::from_utf8(&seed).unwrap()));
    }
    for seed in corpus("parse_partition") {
        assert!(check_partition(std::str::from_utf8(&seed).unwrap()));
    }
    for seed in corpus("parse_correlation") {
        assert!(check_correlation(std::str::from_utf8(&seed).unwrap()));
    }
}

#[derive(Debug, Clone)]
enum Mutation {
    Flip(usize, u8),
    Insert(usize, u8),
    Delete(usize),
    Truncate(usize),
    Duplicate(usize, usize),
}

fn mutation() -> impl Strategy<Value = Mutation> {
    // bytes that matter to the CSV grammar and number parsing
    let byte = prop_oneof![
        Just(b','),
        Just(b'\n'),
        Just(b'"'),
        Just(b'-'),
        Just(b'.'),
        Just(b'e'),
        Just(b'0'),
        Just(b'9'),
        Just(b' '),
        Just(0u8),
        any::<u8>(),
    ];
    prop_oneof![
        (any::<usize>(), byte.clone()).prop_map(|(i, b)| Mutation::Flip(i, b)),
        (any::<usize>(), byte).prop_map(|(i, b)| Mutation::Insert(i, b)),
        any::<usize>().prop_map(Mutation::Delete),
        any::<usize>().prop_map(Mutation::Truncate),
        (any::<usize>(), 1usize..40).prop_map(|(i, k)| Mutation::Duplicate(i, k)),
    ]
}

fn mutate(mut bytes: Vec<u8>, ops: &[Mutation]) -> Vec<u8> {
    for op in ops {
        let n = bytes.len().max(1);
        match *op {
            Mutation::Flip(i, b) if !bytes.is_empty() => bytes[i % n] = b,
            Mutation::Insert(i, b) => bytes.insert(i % (bytes.len() + 1), b),
            Mutation::Delete(i) if !bytes.is_empty() => {
                bytes.remove(i % n);
            }
            Mutation::Truncate(i) => bytes.truncate(i % (bytes.len() + 1)),
            Mutation::Duplicate(i, k) if !bytes.is_empty() => {
                let start = i % n;
                let end = (start + k).min(bytes.len());
                let chunk = bytes[start..end].to_vec();
                bytes.splice(start..start, chunk);
            }
            _ => {}
        }
    }
    bytes
}

fn mutated(target: &'static str) -> impl Strategy<Value = String> {
    let seeds = corpus(target);
    (0..seeds.len(), prop::collection::vec(mutation(), 1..6))
        .prop_filter_map("utf-8", move |(k, ops)| {
            String::from_utf8(mutate(seeds[k].clone(), &ops)).ok()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn mutated_journals(text in mutated("parse_journals")) {
        check_journals(&text);
    }

    #[test]
    fn mutated_matrix(text in mutated("parse_matrix")) {
        check_matrix(&text);
    }

    #[test]
    fn mutated_dataset(text in mutated("load_dataset")) {
        check_dataset(&text);
    }

    #[test]
    fn mutated_partition(text in mutated("parse_partition")) {
        check_partition(&text);
    }

    #[test]
    fn mutated_correlation(text in mutated("parse_correlation")) {
        check_correlation(&text);
    }
}
