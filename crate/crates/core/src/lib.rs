//! Journal performance indicators computed from a journal citation matrix.
//!
//! The crate covers the classical indicators (impact factor, audience factor),
//! the recursive PageRank family (influence weight, influence per publication,
//! Eigenfactor, article influence, weighted PageRank, SCImago Journal Rank),
//! and the machinery used to check how these indicators relate to one another:
//! proportionality at the endpoints of the damping parameter, field
//! insensitivity, and leave-one-out sensitivity.
//!
//! Rows of a [`CitationMatrix`] are citing journals and columns are cited
//! journals, so `c[i][j]` counts citations from journal `i` to journal `j`.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod error;
pub mod indicators;
pub mod io;
pub mod model;
pub mod properties;
pub mod spectral;
pub mod structure;
pub mod synth;

pub use error::{Error, Result, ValidationIssue};
pub use indicators::{
    EigenParams, IndicatorKind, IndicatorSpec, IndicatorVector, IwNormalization, PageRankParams,
    Params, ScoreBasis,
};
pub use model::{CitationMatrix, Dataset, Journal, JournalSet};
pub use properties::FieldPartition;
pub use spectral::{Method, SolverConfig, SolverReport};
pub use structure::{structure, StructureReport};
