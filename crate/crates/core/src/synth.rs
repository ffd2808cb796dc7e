//! Canonical fixtures and a seeded two-field random instance generator.
//!
//! Random instances use `ChaCha8Rng::seed_from_u64(seed)` and draw citation
//! counts row by row (citing journal), column by column, from
//! `rand_distr::Poisson`, so a seed reproduces the same instance wherever
//! those crates are pinned to the same versions.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson, Uniform};

use crate::error::{Error, Result};
use crate::model::{CitationMatrix, Dataset, Journal, JournalSet};
use crate::properties::{Field, FieldPartition};
use crate::structure::structure;

/// The 8-journal worked example: two fields of four journals, each with two
/// frequently and two infrequently cited journals, 100 articles per journal
/// per period.
pub fn table1_instance() -> Dataset {
    let field_one = [1000.0, 1000.0, 10.0, 10.0, 100.0, 100.0, 1.0, 1.0];
    let field_two = [100.0, 100.0, 1.0, 1.0, 1000.0, 1000.0, 10.0, 10.0];
    let rows = (0..8)
        .map(|i| {
            if i < 4 {
                field_one.to_vec()
            } else {
                field_two.to_vec()
            }
        })
        .collect();
    let journals = (1..=8)
        .map(|i| Journal::new(i.to_string(), 100.0, 100.0))
        .collect();
    let matrix = CitationMatrix::from_rows(rows).expect("square fixture");
    Dataset::new(journals, matrix).expect("valid fixture")
}

/// Two single-journal fields with 100 articles each and almost no
/// cross-field citation: `C = [[999, 1], [3, 997]]`.
pub fn counterexample_instance() -> (Dataset, FieldPartition) {
    let journals = (1..=2)
        .map(|i| Journal::new(i.to_string(), 100.0, 100.0))
        .collect();
    let matrix = CitationMatrix::from_rows(vec![vec![999.0, 1.0], vec![3.0, 997.0]])
        .expect("square fixture");
    let data = Dataset::new(journals, matrix).expect("valid fixture");
    let partition = FieldPartition::new(vec![Field::One, Field::Two]).expect("two fields");
    (data, partition)
}

/// First-period article counts of generated journals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ArticleCounts {
    Constant(f64),
    /// Uniform integers in `[min, max]` for field 1, copied to the matching
    /// journals of field 2, so both fields publish the same total.
    Mirrored {
        min: u32,
        max: u32,
    },
    /// Uniform integers in `[min, max]`, drawn independently per journal.
    Independent {
        min: u32,
        max: u32,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockModelSpec {
    pub journals_per_field: usize,
    /// Expected citations between two journals of the same field.
    pub within_mean: f64,
    /// Expected citations between journals of different fields. When zero,
    /// the first journal of each field cites the other once so the instance
    /// stays irreducible.
    pub cross_mean: f64,
    pub articles: ArticleCounts,
    /// Second-period articles are `eta * a_i1`.
    pub eta: f64,
    pub seed: u64,
}

impl Default for BlockModelSpec {
    fn default() -> Self {
        BlockModelSpec {
            journals_per_field: 5,
            within_mean: 20.0,
            cross_mean: 2.0,
            articles: ArticleCounts::Constant(100.0),
            eta: 1.0,
            seed: 0,
        }
    }
}

impl BlockModelSpec {
    fn validate(&self) -> Result<()> {
        let invalid = |m: String| Err(Error::InvalidParams(m));
        if self.journals_per_field == 0 {
            return invalid("journals_per_field must be at least 1".into());
        }
        if !(self.cross_mean >= 0.0 && self.within_mean > self.cross_mean) {
            return invalid(format!(
                "need within_mean > cross_mean >= 0, got {} and {}",
                self.within_mean, self.cross_mean
            ));
        }
        if !(self.eta > 0.0 && self.eta.is_finite()) {
            return invalid(format!("eta must be positive, got {}", self.eta));
        }
        match self.articles {
            ArticleCounts::Constant(a) if !(a > 0.0 && a.is_finite()) => {
                invalid(format!("article count must be positive, got {a}"))
            }
            ArticleCounts::Mirrored { min, max } | ArticleCounts::Independent { min, max }
                if min == 0 || min > max =>
            {
                invalid(format!("need 0 < min <= max, got [{min}, {max}]"))
            }
            _ => Ok(()),
        }
    }
}

/// Attempts before [`block_model`] gives up on finding an irreducible draw.
pub const GENERATION_ATTEMPTS: usize = 100;

/// Draws a two-field instance: field 1 holds journals `0..k`, field 2 holds
/// `k..2k`. Redraws until the citation graph is irreducible with no dangling
/// journal.
pub fn block_model(spec: &BlockModelSpec) -> Result<(Dataset, FieldPartition)> {
    spec.validate()?;
    let k = spec.journals_per_field;
    let n = 2 * k;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    let articles_t1: Vec<f64> = match spec.articles {
        ArticleCounts::Constant(a) => vec![a; n],
        ArticleCounts::Mirrored { min, max } => {
            let dist = Uniform::new_inclusive(min, max).expect("validated range");
            let half: Vec<f64> = (0..k).map(|_| f64::from(dist.sample(&mut rng))).collect();
            half.iter().chain(&half).copied().collect()
        }
        ArticleCounts::Independent { min, max } => {
            let dist = Uniform::new_inclusive(min, max).expect("validated range");
            (0..n).map(|_| f64::from(dist.sample(&mut rng))).collect()
        }
    };
    let journals: JournalSet = articles_t1
        .iter()
        .enumerate()
        .map(|(i, &a)| Journal::new(format!("J{:03}", i + 1), a, spec.eta * a))
        .collect();
    let partition = FieldPartition::split_at(n, k)?;

    let within = poisson(spec.within_mean);
    let cross = poisson(spec.cross_mean);
    for _ in 0..GENERATION_ATTEMPTS {
        let mut counts = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let dist = if (i < k) == (j < k) { &within } else { &cross };
                counts.push(dist.as_ref().map_or(0.0, |d| d.sample(&mut rng)));
            }
        }
        if spec.cross_mean == 0.0 {
            counts[k] = 1.0;
            counts[k * n] = 1.0;
        }
        let matrix = CitationMatrix::from_dense(n, counts);
        let report = structure(&matrix);
        if report.irreducible && report.dangling_rows.is_empty() {
            let data = Dataset::new(journals, matrix)?;
            return Ok((data, partition));
        }
    }
    Err(Error::GenerationFailed {
        attempts: GENERATION_ATTEMPTS,
    })
}

fn poisson(mean: f64) -> Option<Poisson<f64>> {
    (mean > 0.0).then(|| Poisson::new(mean).expect("positive finite mean"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::properties::min_delta;

    #[test]
    fn table1_rows_and_sums() {
        let data = table1_instance();
        assert_eq!(
            data.matrix().row(0),
            &[1000.0, 1000.0, 10.0, 10.0, 100.0, 100.0, 1.0, 1.0]
        );
        assert!(data.matrix().row_sums().iter().all(|&s| s == 2222.0));
        let report = structure(data.matrix());
        assert!(report.irreducible && report.aperiodic);
        assert!(data
            .journals()
            .iter()
            .all(|j| j.articles_t1 == 100.0 && j.articles_t2 == 100.0));
    }

    #[test]
    fn counterexample_fixture() {
        let (data, partition) = counterexample_instance();
        assert_eq!(min_delta(data.matrix(), &partition).unwrap(), 0.003);
        assert!(partition.is_balanced(data.journals()));
    }

    #[test]
    fn same_seed_same_instance() {
        let spec = BlockModelSpec {
            seed: 42,
            articles: ArticleCounts::Mirrored { min: 20, max: 200 },
            ..Default::default()
        };
        assert_eq!(block_model(&spec).unwrap(), block_model(&spec).unwrap());
        let other = BlockModelSpec {
            seed: 43,
            ..spec.clone()
        };
        assert_ne!(
            block_model(&spec).unwrap().0,
            block_model(&other).unwrap().0
        );
    }

    #[test]
    fn zero_cross_mean_forces_bridges() {
        let spec = BlockModelSpec {
            journals_per_field: 4,
            within_mean: 30.0,
            cross_mean: 0.0,
            seed: 7,
            ..Default::default()
        };
        let (data, partition) = block_model(&spec).unwrap();
        let m = data.matrix();
        assert_eq!(m.get(0, 4), 1.0);
        assert_eq!(m.get(4, 0), 1.0);
        let expected = (1.0 / m.row_sums()[0]).max(1.0 / m.row_sums()[4]);
        assert_eq!(min_delta(m, &partition).unwrap(), expected);
    }

    #[test]
    fn mirrored_articles_are_balanced_and_grow_by_eta() {
        let spec = BlockModelSpec {
            articles: ArticleCounts::Mirrored { min: 10, max: 500 },
            eta: 2.0,
            seed: 3,
            ..Default::default()
        };
        let (data, partition) = block_model(&spec).unwrap();
        assert!(partition.is_balanced(data.journals()));
        assert!(data
            .journals()
            .iter()
            .all(|j| j.articles_t2 == 2.0 * j.articles_t1));
        assert!(crate::properties::verify_theorem1(&data, &Default::default()).is_ok());
    }

    #[test]
    fn rejects_degenerate_specs() {
        for spec in [
            BlockModelSpec {
                within_mean: 1.0,
                cross_mean: 1.0,
                ..Default::default()
            },
            BlockModelSpec {
                journals_per_field: 0,
                ..Default::default()
            },
            BlockModelSpec {
                eta: 0.0,
                ..Default::default()
            },
            BlockModelSpec {
                articles: ArticleCounts::Mirrored { min: 5, max: 1 },
                ..Default::default()
            },
        ] {
            assert!(
                matches!(block_model(&spec), Err(Error::InvalidParams(_))),
                "{spec:?}"
            );
        }
    }

    #[test]
    fn sparse_spec_exhausts_retries() {
        // one journal per field, tiny means: self-loops only or nothing
        let spec = BlockModelSpec {
            journals_per_field: 1,
            within_mean: 1e-9,
            cross_mean: 1e-12,
            ..Default::default()
        };
        assert!(matches!(
            block_model(&spec),
            Err(Error::GenerationFailed { .. })
        ));
    }
}
