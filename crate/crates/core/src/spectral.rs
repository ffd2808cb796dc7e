//! Stationary vectors of the citation random walk.
//!
//! Every recursive indicator reduces to a fixed point of
//! `p = d * H p + (1 - d) * t`, where `H[i][j] = c_ji / s_j` moves weight
//! along citations, `d` is the damping factor and `t` a teleport
//! distribution. Two independent solvers are provided: dense Gaussian
//! elimination and power iteration.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::CitationMatrix;
use crate::structure::{structure, StructureReport};

/// Largest instance that [`Method::Auto`] solves directly.
pub const DIRECT_LIMIT: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    #[default]
    Auto,
    Direct,
    Power,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Relative L1 threshold on successive power iterates.
    pub tolerance: f64,
    pub max_iterations: usize,
    pub method: Method,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            tolerance: 1e-12,
            max_iterations: 100_000,
            method: Method::Auto,
        }
    }
}

impl SolverConfig {
    pub fn direct() -> Self {
        SolverConfig {
            method: Method::Direct,
            ..Self::default()
        }
    }

    pub fn power() -> Self {
        SolverConfig {
            method: Method::Power,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0) {
            return Err(Error::InvalidParams(format!(
                "solver tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidParams(
                "max_iterations must be at least 1".into(),
            ));
        }
        Ok(())
    }

    fn resolve(&self, n: usize) -> Method {
        match self.method {
            Method::Auto if n <= DIRECT_LIMIT => Method::Direct,
            Method::Auto => Method::Power,
            m => m,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverReport {
    pub iterations: usize,
    /// Power: final relative L1 change. Direct: relative L1 fixed-point
    /// residual of the solution.
    pub residual: f64,
    pub method_used: Method,
    /// The half-lazy operator `(I + H) / 2` was iterated because the chain
    /// is periodic.
    pub lazy: bool,
}

/// Column-stochastic citation operator `H[i][j] = c_ji / s_j`, stored as the
/// row-stochastic matrix `P[j][i] = c_ji / s_j` so that applying `H` walks
/// rows of the citation matrix.
#[derive(Debug, Clone)]
pub struct TransitionOperator {
    n: usize,
    row_stochastic: Vec<f64>,
    row_sums: Vec<f64>,
    structure: StructureReport,
}

impl TransitionOperator {
    /// Fails with [`Error::ZeroOutgoing`] on the first journal that gives no
    /// citations; the journal is named by its index.
    pub fn new(matrix: &CitationMatrix) -> Result<Self> {
        let n = matrix.n();
        let row_sums = matrix.row_sums().to_vec();
        if let Some(j) = row_sums.iter().position(|&s| !(s > 0.0)) {
            return Err(Error::ZeroOutgoing {
                journal: format!("#{j}"),
            });
        }
        let mut row_stochastic = Vec::with_capacity(n * n);
        for (j, &s) in row_sums.iter().enumerate() {
            row_stochastic.extend(matrix.row(j).iter().map(|&c| c / s));
        }
        Ok(TransitionOperator {
            n,
            row_stochastic,
            row_sums,
            structure: structure(matrix),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn row_sums(&self) -> &[f64] {
        &self.row_sums
    }

    pub fn structure(&self) -> &StructureReport {
        &self.structure
    }

    /// `H[i][j]`: share of journal `j`'s citations that go to journal `i`.
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.row_stochastic[j * self.n + i]
    }

    /// `out = H p`.
    pub fn apply(&self, p: &[f64], out: &mut [f64]) {
        out.fill(0.0);
        for (j, &pj) in p.iter().enumerate() {
            if pj == 0.0 {
                continue;
            }
            let row = &self.row_stochastic[j * self.n..(j + 1) * self.n];
            for (o, &h) in out.iter_mut().zip(row) {
                *o += pj * h;
            }
        }
    }
}

/// Fixed point of `p = damping * H p + (1 - damping) * teleport` with
/// `sum(p) = 1`.
///
/// At `damping = 1` the chain must be irreducible; periodic chains are then
/// iterated with the half-lazy operator, which has the same fixed point.
pub fn stationary(
    op: &TransitionOperator,
    damping: f64,
    teleport: &[f64],
    config: &SolverConfig,
) -> Result<(Vec<f64>, SolverReport)> {
    config.validate()?;
    let n = op.n();
    if !(0.0..=1.0).contains(&damping) {
        return Err(Error::InvalidParams(format!(
            "damping must lie in [0, 1], got {damping}"
        )));
    }
    check_distribution(teleport, n)?;
    let method = config.resolve(n);

    if damping == 0.0 {
        let report = SolverReport {
            iterations: 0,
            residual: 0.0,
            method_used: method,
            lazy: false,
        };
        return Ok((teleport.to_vec(), report));
    }
    if damping == 1.0 && !op.structure().irreducible {
        return Err(Error::NotIrreducible(Box::new(op.structure().clone())));
    }

    match method {
        Method::Direct => direct(op, damping, teleport),
        _ => power(op, damping, teleport, config),
    }
}

/// Positive vector `w` with `w_i s_i = sum_j w_j c_ji`, scaled so that
/// `sum_i w_i s_i = 1`. The caller applies whatever normalization it needs.
pub fn solve_iw_eigensystem(
    op: &TransitionOperator,
    config: &SolverConfig,
) -> Result<(Vec<f64>, SolverReport)> {
    let n = op.n();
    let uniform = vec![1.0 / n as f64; n];
    let (q, report) = stationary(op, 1.0, &uniform, config)?;
    let weights = q.iter().zip(op.row_sums()).map(|(q, s)| q / s).collect();
    Ok((weights, report))
}

fn check_distribution(teleport: &[f64], n: usize) -> Result<()> {
    if teleport.len() != n {
        return Err(Error::InvalidParams(format!(
            "teleport vector has length {}, expected {n}",
            teleport.len()
        )));
    }
    if teleport.iter().any(|&t| !t.is_finite() || t < 0.0) {
        return Err(Error::InvalidParams(
            "teleport entries must be finite and non-negative".into(),
        ));
    }
    let sum: f64 = teleport.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidParams(format!(
            "teleport vector must sum to 1, sums to {sum}"
        )));
    }
    Ok(())
}

fn direct(
    op: &TransitionOperator,
    damping: f64,
    teleport: &[f64],
) -> Result<(Vec<f64>, SolverReport)> {
    let n = op.n();
    // (I - d H) p = (1 - d) t
    let mut a = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            a[i * n + j] = f64::from(u8::from(i == j)) - damping * op.weight(i, j);
        }
    }
    let mut b: Vec<f64> = teleport.iter().map(|t| (1.0 - damping) * t).collect();
    if damping == 1.0 {
        // The homogeneous system has rank n - 1 on an irreducible chain; swap
        // one equation for the normalization.
        a[(n - 1) * n..].fill(1.0);
        b[n - 1] = 1.0;
    }
    let mut p = solve_dense(a, b, n)?;
    for x in &mut p {
        *x = x.max(0.0);
    }
    normalize(&mut p);
    let residual = fixed_point_residual(op, damping, teleport, &p);
    let report = SolverReport {
        iterations: 1,
        residual,
        method_used: Method::Direct,
        lazy: false,
    };
    Ok((p, report))
}

/// Number of past changes used to estimate the contraction rate.
const RATE_WINDOW: usize = 10;
/// Iterations without improvement, below tolerance, before accepting the
/// iterate as converged to rounding level.
const STALL_LIMIT: usize = 50;

fn power(
    op: &TransitionOperator,
    damping: f64,
    teleport: &[f64],
    config: &SolverConfig,
) -> Result<(Vec<f64>, SolverReport)> {
    let n = op.n();
    let lazy = damping == 1.0 && !op.structure().aperiodic;
    let mut p = if damping == 1.0 {
        vec![1.0 / n as f64; n]
    } else {
        teleport.to_vec()
    };
    let mut next = vec![0.0; n];
    let mut changes: Vec<f64> = Vec::with_capacity(config.max_iterations.min(1 << 16));
    let mut best = f64::INFINITY;
    let mut stalled = 0;

    for iteration in 1..=config.max_iterations {
        op.apply(&p, &mut next);
        if lazy {
            for (x, &old) in next.iter_mut().zip(&p) {
                *x = 0.5 * (*x + old);
            }
        } else if damping < 1.0 {
            for (x, &t) in next.iter_mut().zip(teleport) {
                *x = damping * *x + (1.0 - damping) * t;
            }
        }
        normalize(&mut next);
        let change = l1_distance(&next, &p) / l1_norm(&next);
        std::mem::swap(&mut p, &mut next);

        if change < best {
            best = change;
            stalled = 0;
        } else {
            stalled += 1;
        }
        changes.push(change);

        // The step change understates the distance to the fixed point by a
        // factor 1 / (1 - rate), which matters when the subdominant
        // eigenvalue is close to 1.
        let rate = contraction_rate(&changes);
        let converged = change == 0.0
            || (change < config.tolerance
                && (change < config.tolerance * (1.0 - rate) || stalled >= STALL_LIMIT));
        if converged {
            let report = SolverReport {
                iterations: iteration,
                residual: change,
                method_used: Method::Power,
                lazy,
            };
            return Ok((p, report));
        }
    }
    Err(Error::NoConvergence {
        iterations: config.max_iterations,
        residual: changes.last().copied().unwrap_or(f64::INFINITY),
    })
}

fn contraction_rate(changes: &[f64]) -> f64 {
    let k = changes.len();
    if k <= RATE_WINDOW {
        return 1.0;
    }
    let (old, new) = (changes[k - 1 - RATE_WINDOW], changes[k - 1]);
    if old <= 0.0 {
        return 0.0;
    }
    (new / old).powf(1.0 / RATE_WINDOW as f64).clamp(0.0, 1.0)
}

/// `|| p - (d H p + (1 - d) t) ||_1 / || p ||_1`.
pub fn fixed_point_residual(
    op: &TransitionOperator,
    damping: f64,
    teleport: &[f64],
    p: &[f64],
) -> f64 {
    let mut image = vec![0.0; p.len()];
    op.apply(p, &mut image);
    let diff: f64 = p
        .iter()
        .zip(&image)
        .zip(teleport)
        .map(|((&x, &h), &t)| (x - (damping * h + (1.0 - damping) * t)).abs())
        .sum();
    diff / l1_norm(p)
}

/// Solves `a x = b` for a dense row-major `n * n` matrix by Gaussian
/// elimination with partial pivoting.
pub fn solve_dense(mut a: Vec<f64>, mut b: Vec<f64>, n: usize) -> Result<Vec<f64>> {
    assert_eq!(a.len(), n * n);
    assert_eq!(b.len(), n);
    let scale = a
        .iter()
        .fold(0.0f64, |m, x| m.max(x.abs()))
        .max(f64::MIN_POSITIVE);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&r, &s| a[r * n + col].abs().total_cmp(&a[s * n + col].abs()))
            .expect("non-empty pivot range");
        if a[pivot * n + col].abs() <= scale * 1e-14 {
            return Err(Error::Singular);
        }
        if pivot != col {
            for k in 0..n {
                a.swap(col * n + k, pivot * n + k);
            }
            b.swap(col, pivot);
        }
        let diag = a[col * n + col];
        for row in col + 1..n {
            let factor = a[row * n + col] / diag;
            if factor == 0.0 {
                continue;
            }
            for k in col..n {
                a[row * n + k] -= factor * a[col * n + k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let tail: f64 = (row + 1..n).map(|k| a[row * n + k] * x[k]).sum();
        x[row] = (b[row] - tail) / a[row * n + row];
    }
    Ok(x)
}

fn normalize(p: &mut [f64]) {
    let sum: f64 = p.iter().sum();
    if sum > 0.0 {
        for x in p {
            *x /= sum;
        }
    }
}

fn l1_norm(p: &[f64]) -> f64 {
    p.iter().map(|x| x.abs()).sum()
}

fn l1_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}
