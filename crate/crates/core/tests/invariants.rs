use journal_indicators::analysis::{pearson, spearman};
use journal_indicators::indicators::{eigenfactor, eigenfactor_stationary};
use journal_indicators::io;
use journal_indicators::properties::{min_delta, verify_theorem1, FieldPartition};
use journal_indicators::{
    structure, CitationMatrix, Dataset, EigenParams, Error, IndicatorSpec, IwNormalization,
    Journal, PageRankParams, SolverConfig,
};
use proptest::prelude::*;

/// Strictly positive counts keep every instance irreducible and aperiodic.
fn dataset(max_n: usize) -> impl Strategy<Value = Dataset> {
    (2..=max_n).prop_flat_map(|n| {
        (
            prop::collection::vec(1u32..60, n * n),
            prop::collection::vec((1u32..400, 1u32..400), n),
        )
            .prop_map(move |(counts, articles)| {
                let counts = counts.into_iter().map(f64::from).collect();
                let journals = articles
                    .iter()
                    .enumerate()
                    .map(|(i, &(a1, a2))| Journal::new(format!("j{i}"), a1.into(), a2.into()))
                    .collect();
                Dataset::new(journals, CitationMatrix::from_dense(n, counts)).unwrap()
            })
    })
}

/// Same, but with zeros allowed off the diagonal (may be reducible).
fn sparse_matrix(max_n: usize) -> impl Strategy<Value = CitationMatrix> {
    (2..=max_n).prop_flat_map(|n| {
        prop::collection::vec(prop_oneof![3 => Just(0u32), 1 => 1u32..20], n * n).prop_map(
            move |mut counts| {
                for i in 0..n {
                    counts[i * n + i] += 1;
                }
                CitationMatrix::from_dense(n, counts.into_iter().map(f64::from).collect())
            },
        )
    })
}

fn all_specs() -> Vec<IndicatorSpec> {
    vec![
        IndicatorSpec::If,
        IndicatorSpec::Af,
        IndicatorSpec::Iw(IwNormalization::References),
        IndicatorSpec::Ipp(IwNormalization::References),
        IndicatorSpec::Ipp(IwNormalization::JournalMean),
        IndicatorSpec::Ef(EigenParams::default()),
        IndicatorSpec::Ai(EigenParams::new(0.5).unwrap()),
        IndicatorSpec::Ai(EigenParams::new(1.0).unwrap()),
        IndicatorSpec::Wpr(PageRankParams::new(0.85, 0.0).unwrap()),
        IndicatorSpec::Sjr(PageRankParams::SJR_DEFAULT),
    ]
}

fn close(a: &[f64], b: &[f64], rel: f64) -> bool {
    a.len() == b.len()
        && a.iter()
            .zip(b)
            .all(|(x, y)| (x - y).abs() <= rel * x.abs().max(y.abs()).max(1e-300))
}

fn cfg() -> SolverConfig {
    SolverConfig::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn citation_scaling(data in dataset(7), k in 2u32..9) {
        let k = f64::from(k);
        let scaled = data.with_scaled_citations(k).unwrap();
        for spec in all_specs() {
            let before = spec.compute(&data, &cfg()).unwrap().values;
            let after = spec.compute(&scaled, &cfg()).unwrap().values;
            // per-article citation counts grow with the matrix; walk-based
            // indicators only see the row-normalized matrix
            let factor = match spec {
                IndicatorSpec::If | IndicatorSpec::Af | IndicatorSpec::Ipp(_) => k,
                _ => 1.0,
            };
            let expected: Vec<f64> = before.iter().map(|v| v * factor).collect();
            prop_assert!(close(&expected, &after, 1e-9), "{spec:?}");
        }
    }

    #[test]
    fn article_scaling(data in dataset(7), k in 2u32..9) {
        let k = f64::from(k);
        let a1: Vec<f64> = data.journals().articles_t1().iter().map(|a| a * k).collect();
        let a2: Vec<f64> = data.journals().articles_t2().iter().map(|a| a * k).collect();
        let scaled = data.with_articles(&a1, &a2).unwrap();
        for spec in all_specs() {
            let before = spec.compute(&data, &cfg()).unwrap().values;
            let after = spec.compute(&scaled, &cfg()).unwrap().values;
            let factor = match spec {
                IndicatorSpec::Iw(_) | IndicatorSpec::Ef(_) | IndicatorSpec::Wpr(_) => 1.0,
                _ => 1.0 / k,
            };
            let expected: Vec<f64> = before.iter().map(|v| v * factor).collect();
            prop_assert!(close(&expected, &after, 1e-9), "{spec:?}");
        }
    }

    #[test]
    fn relabeling_permutes_scores(
        (data, order) in dataset(7).prop_flat_map(|d| {
            let n = d.n();
            (Just(d), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
        })
    ) {
        let permuted = data.permuted(&order).unwrap();
        for spec in all_specs() {
            let before = spec.compute(&data, &cfg()).unwrap().values;
            let after = spec.compute(&permuted, &cfg()).unwrap().values;
            let expected: Vec<f64> = order.iter().map(|&i| before[i]).collect();
            prop_assert!(close(&expected, &after, 1e-9), "{spec:?}");
        }
    }

    #[test]
    fn structure_ignores_positive_rescaling(m in sparse_matrix(8), k in 1u32..50) {
        let a = structure(&m);
        let b = structure(&m.scaled(f64::from(k) / 7.0));
        prop_assert_eq!(a, b);
    }

    #[test]
    fn eigenfactor_sums_to_one_hundred(data in dataset(8), alpha in 0.0f64..=1.0) {
        let params = EigenParams::new(alpha).unwrap();
        let ef = eigenfactor(&data, params, &cfg()).unwrap();
        prop_assert!((ef.values.iter().sum::<f64>() - 100.0).abs() < 1e-9);
        let (p, _) = eigenfactor_stationary(&data, params, &cfg()).unwrap();
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(p.iter().all(|&x| x >= 0.0));
    }

    #[test]
    fn direct_and_power_agree(data in dataset(10), alpha in 0.05f64..=1.0) {
        let params = EigenParams::new(alpha).unwrap();
        let (d, _) = eigenfactor_stationary(&data, params, &SolverConfig::direct()).unwrap();
        let (p, _) = eigenfactor_stationary(&data, params, &SolverConfig::power()).unwrap();
        let gap = d.iter().zip(&p).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        prop_assert!(gap < 1e-10, "gap {gap:e}");
    }

    #[test]
    fn audience_factor_tracks_undamped_article_influence(data in dataset(8), eta in 1u32..4) {
        let a1 = data.journals().articles_t1();
        let a2: Vec<f64> = a1.iter().map(|a| a * f64::from(eta)).collect();
        let data = data.with_articles(&a1, &a2).unwrap();
        let report = verify_theorem1(&data, &cfg()).unwrap();
        prop_assert!(report.spread < 1e-9, "{report:?}");
    }

    #[test]
    fn impact_factor_after_drop_loses_only_the_dropped_citations(
        (data, d) in dataset(7).prop_flat_map(|x| { let n = x.n(); (Just(x), 0..n) })
    ) {
        let before = IndicatorSpec::If.compute(&data, &cfg()).unwrap().values;
        let after = IndicatorSpec::If.compute(&data.drop_journal(d).unwrap(), &cfg()).unwrap().values;
        let survivors: Vec<usize> = (0..data.n()).filter(|&i| i != d).collect();
        let a = data.journals().articles_t1();
        let expected: Vec<f64> = survivors
            .iter()
            .map(|&i| before[i] - data.matrix().get(d, i) / a[i])
            .collect();
        prop_assert!(close(&expected, &after, 1e-12));
    }

    #[test]
    fn drop_journal_rejects_out_of_range(data in dataset(6), extra in 0usize..5) {
        let n = data.n();
        prop_assert!(
            matches!(data.drop_journal(n + extra), Err(Error::IndexOutOfRange { .. })),
            "dropping index {} of {} must fail",
            n + extra,
            n
        );
    }

    #[test]
    fn csv_round_trip(data in dataset(8)) {
        let journals = io::write_journals_csv(data.journals());
        let matrix = io::write_matrix_csv(&data);
        let back = io::load_dataset(&journals, &matrix).unwrap();
        prop_assert_eq!(&back, &data);
        prop_assert_eq!(io::write_matrix_csv(&back), matrix);
    }

    #[test]
    fn spearman_ignores_monotone_transforms(
        x in prop::collection::vec(-1e3f64..1e3, 3..40),
        y in prop::collection::vec(-1e3f64..1e3, 3..40),
    ) {
        let n = x.len().min(y.len());
        let (x, y) = (&x[..n], &y[..n]);
        prop_assume!(x.iter().any(|v| *v != x[0]) && y.iter().any(|v| *v != y[0]));
        let r = spearman(x, y).unwrap();
        let fx: Vec<f64> = x.iter().map(|v| (v / 100.0).exp() + 3.0).collect();
        let fy: Vec<f64> = y.iter().map(|v| v.powi(3)).collect();
        prop_assert!((spearman(&fx, &fy).unwrap() - r).abs() < 1e-12);
        prop_assert!((-1.0..=1.0).contains(&r));
        prop_assert!((pearson(x, y).unwrap() - pearson(y, x).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn cross_field_citations_never_lower_delta(
        m in sparse_matrix(8),
        split_frac in 0.1f64..0.9,
        (i, j, extra) in (0usize..64, 0usize..64, 1u32..30),
    ) {
        let n = m.n();
        let split = ((n as f64 * split_frac) as usize).clamp(1, n - 1);
        let partition = FieldPartition::split_at(n, split).unwrap();
        let base = min_delta(&m, &partition).unwrap();
        let (i, j) = (i % n, j % n);
        let mut counts = m.as_slice().to_vec();
        counts[i * n + j] += f64::from(extra);
        let bumped = min_delta(&CitationMatrix::from_dense(n, counts), &partition).unwrap();
        if (i < split) != (j < split) {
            prop_assert!(bumped >= base);
        } else {
            prop_assert!(bumped <= base);
        }
    }
}
