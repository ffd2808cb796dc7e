//! Journal indicators: impact factor, audience factor, influence weight and
//! influence per publication, Eigenfactor and article influence, weighted
//! PageRank and SCImago Journal Rank.
//!
//! All values are returned at full precision. Per-article indicators fail with
//! [`Error::ZeroArticles`] instead of dividing by a zero article count, and
//! every indicator that normalizes by a citing journal's reference count fails
//! with [`Error::ZeroOutgoing`] on a journal that gives no citations.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Dataset;
use crate::spectral::{self, SolverConfig, SolverReport, TransitionOperator};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum IndicatorKind {
    If,
    Af,
    Iw,
    Ipp,
    Ef,
    Ai,
    Wpr,
    Sjr,
}

impl IndicatorKind {
    pub fn basis(self) -> ScoreBasis {
        match self {
            IndicatorKind::Iw => ScoreBasis::PerReference,
            IndicatorKind::Ef | IndicatorKind::Wpr => ScoreBasis::Total,
            _ => ScoreBasis::PerArticle,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            IndicatorKind::If => "IF",
            IndicatorKind::Af => "AF",
            IndicatorKind::Iw => "IW",
            IndicatorKind::Ipp => "IPP",
            IndicatorKind::Ef => "EF",
            IndicatorKind::Ai => "AI",
            IndicatorKind::Wpr => "WPR",
            IndicatorKind::Sjr => "SJR",
        }
    }
}

impl fmt::Display for IndicatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScoreBasis {
    PerArticle,
    PerReference,
    Total,
}

/// Scale applied to influence weights after solving the eigen-system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IwNormalization {
    /// Reference-weighted mean of the weights is 1:
    /// `sum_i IW_i s_i / sum_i s_i = 1`.
    #[default]
    References,
    /// Reference-weighted mean is `1 / n`, i.e. `sum_i IW_i s_i` equals the
    /// mean reference count. This is the scale of the published 8-journal
    /// worked example.
    JournalMean,
}

/// Damping parameter of the Eigenfactor family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenParams {
    pub alpha: f64,
}

impl EigenParams {
    pub const DEFAULT_ALPHA: f64 = 0.85;

    pub fn new(alpha: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::InvalidParams(format!(
                "alpha must lie in [0, 1], got {alpha}"
            )));
        }
        Ok(EigenParams { alpha })
    }
}

impl Default for EigenParams {
    fn default() -> Self {
        EigenParams {
            alpha: Self::DEFAULT_ALPHA,
        }
    }
}

/// Weights of the citation term (`beta`) and the article-share term
/// (`gamma`) of weighted PageRank; the remaining `1 - beta - gamma` is spread
/// uniformly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PageRankParams {
    pub beta: f64,
    pub gamma: f64,
}

impl PageRankParams {
    /// SCImago defaults.
    pub const SJR_DEFAULT: PageRankParams = PageRankParams {
        beta: 0.9,
        gamma: 0.0999,
    };

    pub fn new(beta: f64, gamma: f64) -> Result<Self> {
        let ok = (0.0..=1.0).contains(&beta)
            && (0.0..=1.0).contains(&gamma)
            && beta + gamma <= 1.0 + 1e-12;
        if !ok {
            return Err(Error::InvalidParams(format!(
                "need beta, gamma in [0, 1] with beta + gamma <= 1, got ({beta}, {gamma})"
            )));
        }
        Ok(PageRankParams { beta, gamma })
    }

    /// Original weighted PageRank: no article-share term.
    pub fn weighted_pagerank(beta: f64) -> Result<Self> {
        Self::new(beta, 0.0)
    }
}

impl Default for PageRankParams {
    fn default() -> Self {
        Self::SJR_DEFAULT
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Params {
    None,
    Eigen(EigenParams),
    PageRank(PageRankParams),
    Influence { normalization: IwNormalization },
}

/// One score per journal, in journal-set order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndicatorVector {
    pub kind: IndicatorKind,
    pub params: Params,
    pub basis: ScoreBasis,
    pub values: Vec<f64>,
    pub solver: Option<SolverReport>,
}

impl IndicatorVector {
    fn new(kind: IndicatorKind, params: Params, values: Vec<f64>) -> Self {
        IndicatorVector {
            kind,
            params,
            basis: kind.basis(),
            values,
            solver: None,
        }
    }

    fn with_solver(mut self, report: SolverReport) -> Self {
        self.solver = Some(report);
        self
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Short label such as `AI(0.85)` or `SJR(0.90,0.10)`.
    pub fn label(&self) -> String {
        match self.params {
            Params::Eigen(p) => format!("{}({:.2})", self.kind, p.alpha),
            Params::PageRank(p) => format!("{}({:.2},{:.4})", self.kind, p.beta, p.gamma),
            _ => self.kind.to_string(),
        }
    }
}

/// An indicator together with its parameters, for dispatching by name.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IndicatorSpec {
    If,
    Af,
    Iw(IwNormalization),
    Ipp(IwNormalization),
    Ef(EigenParams),
    Ai(EigenParams),
    Wpr(PageRankParams),
    Sjr(PageRankParams),
}

impl IndicatorSpec {
    pub fn kind(&self) -> IndicatorKind {
        match self {
            IndicatorSpec::If => IndicatorKind::If,
            IndicatorSpec::Af => IndicatorKind::Af,
            IndicatorSpec::Iw(_) => IndicatorKind::Iw,
            IndicatorSpec::Ipp(_) => IndicatorKind::Ipp,
            IndicatorSpec::Ef(_) => IndicatorKind::Ef,
            IndicatorSpec::Ai(_) => IndicatorKind::Ai,
            IndicatorSpec::Wpr(_) => IndicatorKind::Wpr,
            IndicatorSpec::Sjr(_) => IndicatorKind::Sjr,
        }
    }

    pub fn compute(&self, data: &Dataset, config: &SolverConfig) -> Result<IndicatorVector> {
        match *self {
            IndicatorSpec::If => impact_factor(data),
            IndicatorSpec::Af => audience_factor(data),
            IndicatorSpec::Iw(norm) => influence_weights(data, norm, config),
            IndicatorSpec::Ipp(norm) => influence_per_publication(data, norm, config),
            IndicatorSpec::Ef(p) => eigenfactor(data, p, config),
            IndicatorSpec::Ai(p) => article_influence(data, p, config),
            IndicatorSpec::Wpr(p) => weighted_pagerank(data, p, config),
            IndicatorSpec::Sjr(p) => scimago_jr(data, p, config),
        }
    }
}

fn require_articles_t1(data: &Dataset) -> Result<Vec<f64>> {
    let articles = data.journals().articles_t1();
    if let Some(i) = articles.iter().position(|&a| !(a > 0.0)) {
        return Err(Error::ZeroArticles {
            journal: data.journals().as_slice()[i].id.clone(),
        });
    }
    Ok(articles)
}

fn require_outgoing(data: &Dataset) -> Result<()> {
    if let Some(i) = data.matrix().row_sums().iter().position(|&s| !(s > 0.0)) {
        return Err(Error::ZeroOutgoing {
            journal: data.journals().as_slice()[i].id.clone(),
        });
    }
    Ok(())
}

fn operator(data: &Dataset) -> Result<TransitionOperator> {
    require_outgoing(data)?;
    TransitionOperator::new(data.matrix())
}

/// Share of first-period articles per journal.
fn article_shares(data: &Dataset) -> Result<Vec<f64>> {
    let articles = data.journals().articles_t1();
    let total: f64 = articles.iter().sum();
    if !(total > 0.0) {
        return Err(Error::ZeroArticles {
            journal: data.journals().ids().next().unwrap_or_default().to_string(),
        });
    }
    Ok(articles.iter().map(|a| a / total).collect())
}

/// Citations received per first-period article.
pub fn impact_factor(data: &Dataset) -> Result<IndicatorVector> {
    let articles = require_articles_t1(data)?;
    let received = data.matrix().column_sums();
    let values = received.iter().zip(&articles).map(|(c, a)| c / a).collect();
    Ok(IndicatorVector::new(
        IndicatorKind::If,
        Params::None,
        values,
    ))
}

/// Impact factor with each citation weighted by `m_S / m_j`, the overall
/// references-per-article over the citing journal's references-per-article.
pub fn audience_factor(data: &Dataset) -> Result<IndicatorVector> {
    let articles_t1 = require_articles_t1(data)?;
    require_outgoing(data)?;
    let journals = data.journals();
    let articles_t2 = journals.articles_t2();
    if let Some(j) = articles_t2.iter().position(|&a| !(a > 0.0)) {
        return Err(Error::ZeroArticlesT2 {
            journal: journals.as_slice()[j].id.clone(),
        });
    }
    let matrix = data.matrix();
    let s = matrix.row_sums();
    let overall = s.iter().sum::<f64>() / articles_t2.iter().sum::<f64>();
    let n = data.n();
    let mut weighted = vec![0.0; n];
    for j in 0..n {
        let weight = overall / (s[j] / articles_t2[j]);
        for (w, &c) in weighted.iter_mut().zip(matrix.row(j)) {
            *w += weight * c;
        }
    }
    let values = weighted
        .iter()
        .zip(&articles_t1)
        .map(|(w, a)| w / a)
        .collect();
    Ok(IndicatorVector::new(
        IndicatorKind::Af,
        Params::None,
        values,
    ))
}

/// Per-reference influence weights: `IW_i s_i = sum_j IW_j c_ji`, scaled
/// according to `normalization`. Requires an irreducible citation graph.
pub fn influence_weights(
    data: &Dataset,
    normalization: IwNormalization,
    config: &SolverConfig,
) -> Result<IndicatorVector> {
    let op = operator(data)?;
    let (weights, report) = spectral::solve_iw_eigensystem(&op, config)?;
    // `weights` satisfies sum_i w_i s_i = 1.
    let total_refs: f64 = op.row_sums().iter().sum();
    let scale = match normalization {
        IwNormalization::References => total_refs,
        IwNormalization::JournalMean => total_refs / data.n() as f64,
    };
    let values = weights.iter().map(|w| w * scale).collect();
    Ok(IndicatorVector::new(
        IndicatorKind::Iw,
        Params::Influence { normalization },
        values,
    )
    .with_solver(report))
}

/// Influence weight moved to a per-article basis: `IW_i s_i / a_i1`.
pub fn influence_per_publication(
    data: &Dataset,
    normalization: IwNormalization,
    config: &SolverConfig,
) -> Result<IndicatorVector> {
    let articles = require_articles_t1(data)?;
    let iw = influence_weights(data, normalization, config)?;
    let s = data.matrix().row_sums();
    let values = iw
        .values
        .iter()
        .zip(s)
        .zip(&articles)
        .map(|((w, s), a)| w * s / a)
        .collect();
    let mut ipp = IndicatorVector::new(IndicatorKind::Ipp, iw.params, values);
    ipp.solver = iw.solver;
    Ok(ipp)
}

/// Stationary vector `p` of the damped walk teleporting by article share.
pub fn eigenfactor_stationary(
    data: &Dataset,
    params: EigenParams,
    config: &SolverConfig,
) -> Result<(Vec<f64>, SolverReport)> {
    let op = operator(data)?;
    let teleport = article_shares(data)?;
    spectral::stationary(&op, params.alpha, &teleport, config)
}

/// Total-performance score `EF_i = 100 sum_j p_j c_ji / s_j`; sums to 100.
pub fn eigenfactor(
    data: &Dataset,
    params: EigenParams,
    config: &SolverConfig,
) -> Result<IndicatorVector> {
    let op = operator(data)?;
    let teleport = article_shares(data)?;
    let (p, report) = spectral::stationary(&op, params.alpha, &teleport, config)?;
    let mut values = vec![0.0; data.n()];
    op.apply(&p, &mut values);
    for v in &mut values {
        *v *= 100.0;
    }
    Ok(IndicatorVector::new(IndicatorKind::Ef, Params::Eigen(params), values).with_solver(report))
}

/// `AI_i = EF_i / (100 a_i1)`.
pub fn article_influence(
    data: &Dataset,
    params: EigenParams,
    config: &SolverConfig,
) -> Result<IndicatorVector> {
    let articles = require_articles_t1(data)?;
    let ef = eigenfactor(data, params, config)?;
    let values = ef
        .values
        .iter()
        .zip(&articles)
        .map(|(e, a)| e / (100.0 * a))
        .collect();
    let mut ai = IndicatorVector::new(IndicatorKind::Ai, ef.params, values);
    ai.solver = ef.solver;
    Ok(ai)
}

/// Solution `r` of
/// `r_i = beta sum_j r_j c_ji / s_j + gamma a_i1 / sum a + (1 - beta - gamma) / n`.
pub fn pagerank_stationary(
    data: &Dataset,
    params: PageRankParams,
    config: &SolverConfig,
) -> Result<(Vec<f64>, SolverReport)> {
    let PageRankParams { beta, gamma } = PageRankParams::new(params.beta, params.gamma)?;
    let op = operator(data)?;
    let n = data.n();
    let uniform = 1.0 / n as f64;
    let teleport: Vec<f64> = if beta >= 1.0 {
        vec![uniform; n]
    } else {
        // The affine terms, rescaled into a distribution: their total mass
        // is exactly 1 - beta.
        let rest = 1.0 - beta;
        let shares = if gamma > 0.0 {
            article_shares(data)?
        } else {
            vec![0.0; n]
        };
        let uniform_weight = ((1.0 - beta - gamma) / rest).max(0.0);
        let share_weight = gamma / rest;
        shares
            .iter()
            .map(|s| share_weight * s + uniform_weight * uniform)
            .collect()
    };
    spectral::stationary(&op, beta.min(1.0), &teleport, config)
}

/// Total-performance weighted PageRank score `r_i`; sums to 1.
pub fn weighted_pagerank(
    data: &Dataset,
    params: PageRankParams,
    config: &SolverConfig,
) -> Result<IndicatorVector> {
    let (r, report) = pagerank_stationary(data, params, config)?;
    Ok(IndicatorVector::new(IndicatorKind::Wpr, Params::PageRank(params), r).with_solver(report))
}

/// SCImago Journal Rank `r_i / a_i1`.
pub fn scimago_jr(
    data: &Dataset,
    params: PageRankParams,
    config: &SolverConfig,
) -> Result<IndicatorVector> {
    let articles = require_articles_t1(data)?;
    let (r, report) = pagerank_stationary(data, params, config)?;
    let values = r.iter().zip(&articles).map(|(r, a)| r / a).collect();
    Ok(
        IndicatorVector::new(IndicatorKind::Sjr, Params::PageRank(params), values)
            .with_solver(report),
    )
}
