//! Correlations between indicator vectors and top-k rankings.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::indicators::IndicatorVector;
use crate::model::JournalSet;

/// Product-moment correlation, computed with mean-subtracted sums.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DegenerateInput(format!(
            "length mismatch: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 2 {
        return Err(Error::DegenerateInput(
            "need at least two observations".into(),
        ));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::DegenerateInput("zero variance".into()));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// 1-based ranks, ties sharing the average of the positions they span.
pub fn average_ranks(x: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut ranks = vec![0.0; x.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && x[order[end]] == x[order[start]] {
            end += 1;
        }
        // positions start+1 ..= end
        let rank = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = rank;
        }
        start = end;
    }
    ranks
}

/// Rank correlation: Pearson on average ranks.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DegenerateInput(format!(
            "length mismatch: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    pearson(&average_ranks(x), &average_ranks(y))
}

/// Pairwise Pearson and Spearman correlations between indicators.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationMatrix {
    pub labels: Vec<String>,
    pub pearson: Vec<Vec<f64>>,
    pub spearman: Vec<Vec<f64>>,
}

impl CorrelationMatrix {
    /// Combined layout: Pearson below the diagonal, Spearman above it, 1 on
    /// the diagonal.
    pub fn layout(&self) -> Vec<Vec<f64>> {
        let k = self.labels.len();
        (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| match i.cmp(&j) {
                        std::cmp::Ordering::Greater => self.pearson[i][j],
                        std::cmp::Ordering::Less => self.spearman[i][j],
                        std::cmp::Ordering::Equal => 1.0,
                    })
                    .collect()
            })
            .collect()
    }

    /// Inverse of [`CorrelationMatrix::layout`].
    pub fn from_layout(labels: Vec<String>, layout: &[Vec<f64>]) -> Result<Self> {
        let k = labels.len();
        if layout.len() != k || layout.iter().any(|r| r.len() != k) {
            return Err(Error::DegenerateInput(format!(
                "correlation layout must be {k} x {k}"
            )));
        }
        let mut pearson = vec![vec![1.0; k]; k];
        let mut spearman = vec![vec![1.0; k]; k];
        for i in 0..k {
            for j in 0..i {
                pearson[i][j] = layout[i][j];
                pearson[j][i] = layout[i][j];
                spearman[i][j] = layout[j][i];
                spearman[j][i] = layout[j][i];
            }
        }
        Ok(CorrelationMatrix {
            labels,
            pearson,
            spearman,
        })
    }
}

pub fn correlation_table(vectors: &[IndicatorVector]) -> Result<CorrelationMatrix> {
    if vectors.len() < 2 {
        return Err(Error::DegenerateInput(
            "need at least two indicator vectors".into(),
        ));
    }
    let n = vectors[0].len();
    if vectors.iter().any(|v| v.len() != n) {
        return Err(Error::DegenerateInput(
            "indicator vectors differ in length".into(),
        ));
    }
    let k = vectors.len();
    let ranks: Vec<Vec<f64>> = vectors.iter().map(|v| average_ranks(&v.values)).collect();
    let mut p = vec![vec![1.0; k]; k];
    let mut s = vec![vec![1.0; k]; k];
    for i in 0..k {
        for j in 0..i {
            p[i][j] = pearson(&vectors[i].values, &vectors[j].values)?;
            p[j][i] = p[i][j];
            s[i][j] = pearson(&ranks[i], &ranks[j])?;
            s[j][i] = s[i][j];
        }
    }
    Ok(CorrelationMatrix {
        labels: vectors.iter().map(IndicatorVector::label).collect(),
        pearson: p,
        spearman: s,
    })
}

/// The `k` highest-scoring journals, descending, ties by id ascending.
pub fn top_k(
    journals: &JournalSet,
    indicator: &IndicatorVector,
    k: usize,
) -> Result<Vec<(String, f64)>> {
    if indicator.len() != journals.len() {
        return Err(Error::InvalidParams(format!(
            "indicator has {} values for {} journals",
            indicator.len(),
            journals.len()
        )));
    }
    if k > journals.len() {
        return Err(Error::InvalidParams(format!(
            "k = {k} exceeds {} journals",
            journals.len()
        )));
    }
    let mut ranked: Vec<(String, f64)> = journals
        .iter()
        .zip(&indicator.values)
        .map(|(j, &v)| (j.id.clone(), v))
        .collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    ranked.truncate(k);
    Ok(ranked)
}

/// Journals present in both top lists.
pub fn top_k_overlap(a: &[(String, f64)], b: &[(String, f64)]) -> usize {
    let ids: HashSet<&str> = a.iter().map(|(id, _)| id.as_str()).collect();
    b.iter().filter(|(id, _)| ids.contains(id.as_str())).count()
}
