//! Journal sets, citation matrices and the validated pair of both.

use std::collections::HashMap;

use crate::error::{Error, Result, ValidationIssue};

#[derive(Debug, Clone, PartialEq)]
pub struct Journal {
    pub id: String,
    pub name: Option<String>,
    /// Articles published in the earlier (cited) period.
    pub articles_t1: f64,
    /// Articles published in the later (citing) period.
    pub articles_t2: f64,
}

impl Journal {
    pub fn new(id: impl Into<String>, articles_t1: f64, articles_t2: f64) -> Self {
        Journal {
            id: id.into(),
            name: None,
            articles_t1,
            articles_t2,
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }
}

/// Ordered list of journals. The position of a journal is its index in every
/// matrix and indicator vector derived from the set.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct JournalSet {
    journals: Vec<Journal>,
}

impl JournalSet {
    pub fn new(journals: Vec<Journal>) -> Self {
        JournalSet { journals }
    }

    pub fn len(&self) -> usize {
        self.journals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.journals.is_empty()
    }

    pub fn get(&self, index: usize) -> Option<&Journal> {
        self.journals.get(index)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Journal> {
        self.journals.iter()
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.journals.iter().map(|j| j.id.as_str())
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.journals.iter().position(|j| j.id == id)
    }

    pub fn articles_t1(&self) -> Vec<f64> {
        self.journals.iter().map(|j| j.articles_t1).collect()
    }

    pub fn articles_t2(&self) -> Vec<f64> {
        self.journals.iter().map(|j| j.articles_t2).collect()
    }

    pub fn as_slice(&self) -> &[Journal] {
        &self.journals
    }

    fn issues(&self) -> Vec<ValidationIssue> {
        let mut issues = Vec::new();
        let mut seen: HashMap<&str, usize> = HashMap::new();
        for (index, journal) in self.journals.iter().enumerate() {
            if journal.id.is_empty() {
                issues.push(ValidationIssue::EmptyId { index });
            } else if let Some(&first) = seen.get(journal.id.as_str()) {
                issues.push(ValidationIssue::DuplicateId {
                    id: journal.id.clone(),
                    first,
                    second: index,
                });
            } else {
                seen.insert(&journal.id, index);
            }
            for (period, value) in [(1, journal.articles_t1), (2, journal.articles_t2)] {
                if !value.is_finite() || value < 0.0 {
                    issues.push(ValidationIssue::InvalidArticles {
                        journal: journal.id.clone(),
                        period,
                        value,
                    });
                }
            }
        }
        issues
    }
}

impl FromIterator<Journal> for JournalSet {
    fn from_iter<T: IntoIterator<Item = Journal>>(iter: T) -> Self {
        JournalSet::new(iter.into_iter().collect())
    }
}

/// Square citing-by-cited count matrix with cached row sums.
#[derive(Debug, Clone, PartialEq)]
pub struct CitationMatrix {
    n: usize,
    counts: Vec<f64>,
    row_sums: Vec<f64>,
}

impl CitationMatrix {
    /// Builds a matrix from citing rows. Only the shape is checked here; sign
    /// and finiteness are checked by [`Dataset::new`].
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        let mut issues = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                issues.push(ValidationIssue::DimensionMismatch {
                    what: format!("matrix row {i}"),
                    expected: n,
                    found: row.len(),
                });
            }
        }
        if !issues.is_empty() {
            return Err(Error::Invalid(issues));
        }
        Ok(Self::from_dense(n, rows.into_iter().flatten().collect()))
    }

    /// Row-major `n * n` counts.
    pub fn from_dense(n: usize, counts: Vec<f64>) -> Self {
        assert_eq!(counts.len(), n * n, "dense citation matrix must be n*n");
        let row_sums = compute_row_sums(n, &counts);
        CitationMatrix {
            n,
            counts,
            row_sums,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Citations from journal `citing` to journal `cited`.
    pub fn get(&self, citing: usize, cited: usize) -> f64 {
        self.counts[citing * self.n + cited]
    }

    pub fn row(&self, citing: usize) -> &[f64] {
        &self.counts[citing * self.n..(citing + 1) * self.n]
    }

    /// Total citations given by each journal (`s_i`).
    pub fn row_sums(&self) -> &[f64] {
        &self.row_sums
    }

    /// Total citations received by each journal.
    pub fn column_sums(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.n];
        for i in 0..self.n {
            for (sum, &c) in sums.iter_mut().zip(self.row(i)) {
                *sum += c;
            }
        }
        sums
    }

    pub fn total(&self) -> f64 {
        self.counts.iter().sum()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.counts
    }

    /// True when the cached row sums agree exactly with a fresh recomputation.
    pub fn row_sums_consistent(&self) -> bool {
        compute_row_sums(self.n, &self.counts) == self.row_sums
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self::from_dense(self.n, self.counts.iter().map(|c| c * factor).collect())
    }

    /// Copy with journal `index` removed from both rows and columns.
    pub fn without(&self, index: usize) -> Self {
        let n = self.n - 1;
        let mut counts = Vec::with_capacity(n * n);
        for i in (0..self.n).filter(|&i| i != index) {
            counts.extend(
                self.row(i)
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != index)
                    .map(|(_, &c)| c),
            );
        }
        Self::from_dense(n, counts)
    }

    /// Relabels journals: entry `(i, j)` of the result is entry
    /// `(order[i], order[j])` of `self`.
    pub fn permuted(&self, order: &[usize]) -> Self {
        let n = self.n;
        let mut counts = Vec::with_capacity(n * n);
        for &i in order {
            counts.extend(order.iter().map(|&j| self.get(i, j)));
        }
        Self::from_dense(n, counts)
    }

    fn issues(&self) -> Vec<ValidationIssue> {
        let mut issues = Vec::new();
        for (k, &c) in self.counts.iter().enumerate() {
            let (row, col) = (k / self.n, k % self.n);
            if !c.is_finite() {
                issues.push(ValidationIssue::NonFiniteCount { row, col });
            } else if c < 0.0 {
                issues.push(ValidationIssue::NegativeCount { row, col, value: c });
            }
        }
        issues
    }
}

fn compute_row_sums(n: usize, counts: &[f64]) -> Vec<f64> {
    if n == 0 {
        return Vec::new();
    }
    counts.chunks(n).map(|row| row.iter().sum()).collect()
}

/// A journal set together with a citation matrix that has passed validation.
/// Immutable once built; every transformation returns a new instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    journals: JournalSet,
    matrix: CitationMatrix,
}

impl Dataset {
    /// Validates the pair, reporting every violation found.
    pub fn new(journals: JournalSet, matrix: CitationMatrix) -> Result<Self> {
        let mut issues = journals.issues();
        if matrix.n() != journals.len() {
            issues.push(ValidationIssue::DimensionMismatch {
                what: "citation matrix".to_string(),
                expected: journals.len(),
                found: matrix.n(),
            });
        }
        issues.extend(matrix.issues());
        if issues.is_empty() {
            Ok(Dataset { journals, matrix })
        } else {
            Err(Error::Invalid(issues))
        }
    }

    pub fn journals(&self) -> &JournalSet {
        &self.journals
    }

    pub fn matrix(&self) -> &CitationMatrix {
        &self.matrix
    }

    pub fn n(&self) -> usize {
        self.journals.len()
    }

    pub fn into_parts(self) -> (JournalSet, CitationMatrix) {
        (self.journals, self.matrix)
    }

    /// Removes one journal and every citation to or from it.
    pub fn drop_journal(&self, index: usize) -> Result<Dataset> {
        let n = self.n();
        if index >= n || n < 2 {
            return Err(Error::IndexOutOfRange { index, n });
        }
        let journals = self
            .journals
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != index)
            .map(|(_, j)| j.clone())
            .collect();
        Ok(Dataset {
            journals,
            matrix: self.matrix.without(index),
        })
    }

    /// Multiplies every citation count by `factor`.
    pub fn with_scaled_citations(&self, factor: f64) -> Result<Dataset> {
        Dataset::new(self.journals.clone(), self.matrix.scaled(factor))
    }

    /// Reorders journals so that new position `i` holds old journal `order[i]`.
    pub fn permuted(&self, order: &[usize]) -> Result<Dataset> {
        let n = self.n();
        let mut seen = vec![false; n];
        for &i in order {
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidParams(format!(
                    "{order:?} is not a permutation of 0..{n}"
                )));
            }
        }
        if order.len() != n {
            return Err(Error::InvalidParams(format!(
                "{order:?} is not a permutation of 0..{n}"
            )));
        }
        let journals = order
            .iter()
            .map(|&i| self.journals.as_slice()[i].clone())
            .collect();
        Ok(Dataset {
            journals,
            matrix: self.matrix.permuted(order),
        })
    }

    /// Replaces the article counts, keeping ids and citations.
    pub fn with_articles(&self, articles_t1: &[f64], articles_t2: &[f64]) -> Result<Dataset> {
        let journals = self
            .journals
            .iter()
            .zip(articles_t1.iter().zip(articles_t2))
            .map(|(j, (&a1, &a2))| Journal {
                articles_t1: a1,
                articles_t2: a2,
                ..j.clone()
            })
            .collect::<JournalSet>();
        if journals.len() != self.n() || articles_t1.len() != articles_t2.len() {
            return Err(Error::InvalidParams(
                "article vectors must match the number of journals".into(),
            ));
        }
        Dataset::new(journals, self.matrix.clone())
    }
}

/// Free-function form of [`Dataset::new`].
pub fn validate(journals: JournalSet, matrix: CitationMatrix) -> Result<Dataset> {
    Dataset::new(journals, matrix)
}
