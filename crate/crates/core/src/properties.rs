//! Two-field insensitivity checks, leave-one-out sensitivity, and numerical
//! verification of the endpoint proportionality results for article
//! influence.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::indicators::{
    self, EigenParams, IndicatorSpec, IndicatorVector, IwNormalization, PageRankParams,
};
use crate::model::{CitationMatrix, Dataset, JournalSet};
use crate::spectral::SolverConfig;
use crate::structure::structure;

/// Ratio spread below which two indicators count as proportional.
pub const PROPORTIONALITY_TOLERANCE: f64 = 1e-9;
/// Relative tolerance for `a_i2 = eta * a_i1` holding with one constant.
pub const ETA_TOLERANCE: f64 = 1e-12;
/// Relative slack on the field-mean bounds, absorbing rounding only.
pub const BOUND_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Field {
    One,
    Two,
}

impl Field {
    pub fn number(self) -> u8 {
        match self {
            Field::One => 1,
            Field::Two => 2,
        }
    }

    pub fn from_number(k: u8) -> Option<Field> {
        match k {
            1 => Some(Field::One),
            2 => Some(Field::Two),
            _ => None,
        }
    }
}

/// Assignment of every journal to one of two fields.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldPartition {
    field_of: Vec<Field>,
}

impl FieldPartition {
    pub fn new(field_of: Vec<Field>) -> Result<Self> {
        for f in [Field::One, Field::Two] {
            if !field_of.contains(&f) {
                return Err(Error::InvalidParams(format!(
                    "field {} has no journals",
                    f.number()
                )));
            }
        }
        Ok(FieldPartition { field_of })
    }

    /// Journals `0..split` in field 1, the rest in field 2.
    pub fn split_at(n: usize, split: usize) -> Result<Self> {
        Self::new(
            (0..n)
                .map(|i| if i < split { Field::One } else { Field::Two })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.field_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.field_of.is_empty()
    }

    pub fn field(&self, i: usize) -> Field {
        self.field_of[i]
    }

    pub fn fields(&self) -> &[Field] {
        &self.field_of
    }

    pub fn members(&self, field: Field) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.field_of[i] == field)
            .collect()
    }

    /// Both fields published the same number of first-period articles.
    pub fn is_balanced(&self, journals: &JournalSet) -> bool {
        let [one, two] = self.article_totals(journals);
        one == two
    }

    fn article_totals(&self, journals: &JournalSet) -> [f64; 2] {
        let mut totals = [0.0; 2];
        for (j, f) in journals.iter().zip(&self.field_of) {
            totals[usize::from(f.number() - 1)] += j.articles_t1;
        }
        totals
    }

    pub fn without(&self, index: usize) -> Result<Self> {
        let mut field_of = self.field_of.clone();
        field_of.remove(index);
        Self::new(field_of)
    }

    fn check_len(&self, n: usize) -> Result<()> {
        if self.len() != n {
            return Err(Error::InvalidParams(format!(
                "partition covers {} journals, dataset has {n}",
                self.len()
            )));
        }
        Ok(())
    }
}

/// Smallest `delta` such that every journal gives at least `(1 - delta)` of
/// its citations to its own field: `max_i cross_i / s_i`.
pub fn min_delta(matrix: &CitationMatrix, partition: &FieldPartition) -> Result<f64> {
    partition.check_len(matrix.n())?;
    let mut delta = 0.0f64;
    for (i, &s) in matrix.row_sums().iter().enumerate() {
        if !(s > 0.0) {
            return Err(Error::ZeroOutgoing {
                journal: format!("#{i}"),
            });
        }
        let own = partition.field(i);
        let cross: f64 = matrix
            .row(i)
            .iter()
            .zip(partition.fields())
            .filter(|&(_, &f)| f != own)
            .map(|(&c, _)| c)
            .sum();
        delta = delta.max(cross / s);
    }
    Ok(delta)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldInsensitivityReport {
    pub delta: f64,
    /// `a_i1`-weighted mean of the indicator within fields 1 and 2.
    pub field_means: [f64; 2],
    pub overall_mean: f64,
    /// `(1 - delta) * overall_mean`.
    pub lower_bound: f64,
    /// `(1 + delta) * overall_mean`.
    pub upper_bound: f64,
    pub bounds_hold: [bool; 2],
    pub balanced: bool,
    /// Common ratio `a_i2 / a_i1`, when there is one.
    pub eta: Option<f64>,
    /// Largest relative deviation of `a_i2 / a_i1` from its mean.
    pub eta_deviation: f64,
}

impl FieldInsensitivityReport {
    pub fn holds(&self) -> bool {
        self.bounds_hold.iter().all(|&b| b)
    }
}

/// Checks whether each field's article-weighted mean stays within
/// `(1 +- delta)` of the overall mean, with `delta` the tight leakage bound.
/// Unbalanced partitions still produce a report, flagged `balanced = false`.
pub fn field_insensitivity_check(
    data: &Dataset,
    partition: &FieldPartition,
    indicator: &IndicatorVector,
) -> Result<FieldInsensitivityReport> {
    partition.check_len(data.n())?;
    if indicator.len() != data.n() {
        return Err(Error::InvalidParams(format!(
            "indicator has {} values, dataset has {} journals",
            indicator.len(),
            data.n()
        )));
    }
    let delta = min_delta(data.matrix(), partition).map_err(|e| match e {
        Error::ZeroOutgoing { journal } => Error::ZeroOutgoing {
            journal: name_of(data, &journal),
        },
        e => e,
    })?;
    let journals = data.journals();
    let mut weighted = [0.0; 2];
    let mut articles = [0.0; 2];
    for ((j, f), v) in journals
        .iter()
        .zip(partition.fields())
        .zip(&indicator.values)
    {
        let k = usize::from(f.number() - 1);
        weighted[k] += j.articles_t1 * v;
        articles[k] += j.articles_t1;
    }
    if articles.iter().any(|&a| !(a > 0.0)) {
        return Err(Error::DegenerateInput(
            "a field published no first-period articles".into(),
        ));
    }
    let field_means = [weighted[0] / articles[0], weighted[1] / articles[1]];
    let overall_mean = (weighted[0] + weighted[1]) / (articles[0] + articles[1]);
    let lower_bound = (1.0 - delta) * overall_mean;
    let upper_bound = (1.0 + delta) * overall_mean;
    let slack = BOUND_SLACK * overall_mean.abs();
    let bounds_hold = field_means.map(|m| m >= lower_bound - slack && m <= upper_bound + slack);
    let (eta, eta_deviation) = article_growth(journals);

    Ok(FieldInsensitivityReport {
        delta,
        field_means,
        overall_mean,
        lower_bound,
        upper_bound,
        bounds_hold,
        balanced: partition.is_balanced(journals),
        eta,
        eta_deviation,
    })
}

fn name_of(data: &Dataset, label: &str) -> String {
    label
        .strip_prefix('#')
        .and_then(|i| i.parse::<usize>().ok())
        .and_then(|i| data.journals().get(i))
        .map_or_else(|| label.to_string(), |j| j.id.clone())
}

/// Mean of `a_i2 / a_i1` when its relative spread is within
/// [`ETA_TOLERANCE`], together with that spread.
fn article_growth(journals: &JournalSet) -> (Option<f64>, f64) {
    let ratios: Vec<f64> = journals
        .iter()
        .map(|j| j.articles_t2 / j.articles_t1)
        .collect();
    if ratios.is_empty() || ratios.iter().any(|r| !r.is_finite()) {
        return (None, f64::INFINITY);
    }
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    let deviation = ratios
        .iter()
        .map(|r| ((r - mean) / mean).abs())
        .fold(0.0, f64::max);
    let eta = (mean > 0.0 && deviation <= ETA_TOLERANCE).then_some(mean);
    (eta, deviation)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LeaveOneOutReport {
    pub dropped: usize,
    /// Indices, in the original dataset, of the surviving journals.
    pub survivors: Vec<usize>,
    pub before: Vec<f64>,
    pub after: Vec<f64>,
    /// `|after - before| / before`; `None` where `before` is zero.
    pub relative_change: Vec<Option<f64>>,
    /// Survivors whose original value was zero.
    pub zero_before: Vec<usize>,
    pub max_relative_change: f64,
}

/// Recomputes `spec` with journal `dropped` removed (every derived quantity
/// is recomputed on the reduced instance) and compares survivors.
pub fn leave_one_out(
    data: &Dataset,
    dropped: usize,
    spec: &IndicatorSpec,
    config: &SolverConfig,
) -> Result<LeaveOneOutReport> {
    let reduced = data.drop_journal(dropped)?;
    let full = spec.compute(data, config)?;
    let after = spec.compute(&reduced, config)?.values;
    Ok(compare_after_drop(dropped, &full.values, after))
}

/// Leave-one-out for every journal, sorted by decreasing maximum relative
/// change (ties by index).
pub fn leave_one_out_sweep(
    data: &Dataset,
    spec: &IndicatorSpec,
    config: &SolverConfig,
) -> Result<Vec<LeaveOneOutReport>> {
    let full = spec.compute(data, config)?;
    let mut reports = (0..data.n())
        .map(|k| {
            let reduced = data.drop_journal(k)?;
            let after = spec.compute(&reduced, config)?.values;
            Ok(compare_after_drop(k, &full.values, after))
        })
        .collect::<Result<Vec<_>>>()?;
    reports.sort_by(|a, b| {
        b.max_relative_change
            .total_cmp(&a.max_relative_change)
            .then(a.dropped.cmp(&b.dropped))
    });
    Ok(reports)
}

fn compare_after_drop(dropped: usize, full: &[f64], after: Vec<f64>) -> LeaveOneOutReport {
    let survivors: Vec<usize> = (0..full.len()).filter(|&i| i != dropped).collect();
    let before: Vec<f64> = survivors.iter().map(|&i| full[i]).collect();
    let relative_change: Vec<Option<f64>> = before
        .iter()
        .zip(&after)
        .map(|(&b, &a)| (b != 0.0).then(|| ((a - b) / b).abs()))
        .collect();
    let zero_before = survivors
        .iter()
        .zip(&before)
        .filter(|&(_, &b)| b == 0.0)
        .map(|(&i, _)| i)
        .collect();
    let max_relative_change = relative_change
        .iter()
        .flatten()
        .fold(0.0, |m: f64, &x| m.max(x));
    LeaveOneOutReport {
        dropped,
        survivors,
        before,
        after,
        relative_change,
        zero_before,
        max_relative_change,
    }
}

/// Outcome of comparing two indicators for proportionality.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProportionalityReport {
    /// `reference_i / candidate_i` extremes.
    pub ratio_min: f64,
    pub ratio_max: f64,
    /// `ratio_max / ratio_min - 1`.
    pub spread: f64,
    pub passed: bool,
}

/// Compares two score vectors for proportionality via their per-journal
/// ratio. Journals where both scores are zero are skipped.
pub fn proportionality(reference: &[f64], candidate: &[f64]) -> Result<ProportionalityReport> {
    if reference.len() != candidate.len() || reference.is_empty() {
        return Err(Error::InvalidParams(
            "proportionality needs two non-empty vectors of equal length".into(),
        ));
    }
    let mut ratio_min = f64::INFINITY;
    let mut ratio_max = f64::NEG_INFINITY;
    for (&r, &c) in reference.iter().zip(candidate) {
        if r == 0.0 && c == 0.0 {
            continue;
        }
        let ratio = r / c;
        ratio_min = ratio_min.min(ratio);
        ratio_max = ratio_max.max(ratio);
    }
    let spread = if ratio_min > 0.0 && ratio_max.is_finite() {
        ratio_max / ratio_min - 1.0
    } else {
        f64::INFINITY
    };
    Ok(ProportionalityReport {
        ratio_min,
        ratio_max,
        spread,
        passed: spread < PROPORTIONALITY_TOLERANCE,
    })
}

/// Audience factor against article influence at zero damping. Requires
/// `a_i2 = eta * a_i1` for a single `eta`.
pub fn verify_theorem1(data: &Dataset, config: &SolverConfig) -> Result<ProportionalityReport> {
    let (eta, deviation) = article_growth(data.journals());
    if eta.is_none() {
        return Err(Error::PreconditionViolated(format!(
            "second-period articles are not proportional to first-period articles \
             (relative deviation {deviation:e})"
        )));
    }
    let af = indicators::audience_factor(data)?;
    let ai = indicators::article_influence(data, EigenParams::new(0.0)?, config)?;
    proportionality(&af.values, &ai.values)
}

/// Influence per publication against article influence at full damping.
pub fn verify_theorem2(data: &Dataset, config: &SolverConfig) -> Result<ProportionalityReport> {
    let report = structure(data.matrix());
    if !report.irreducible {
        return Err(Error::NotIrreducible(Box::new(report)));
    }
    let ipp = indicators::influence_per_publication(data, IwNormalization::References, config)?;
    let ai = indicators::article_influence(data, EigenParams::new(1.0)?, config)?;
    proportionality(&ipp.values, &ai.values)
}

/// Influence per publication against SJR with `beta = 1, gamma = 0`.
pub fn verify_pagerank_reduction(
    data: &Dataset,
    config: &SolverConfig,
) -> Result<ProportionalityReport> {
    let ipp = indicators::influence_per_publication(data, IwNormalization::References, config)?;
    let sjr = indicators::scimago_jr(data, PageRankParams::new(1.0, 0.0)?, config)?;
    proportionality(&ipp.values, &sjr.values)
}
