//! Similarity analytics for collections of plan documents.
//!
//! The pipeline has three stages. [`corpus`] ingests plain-text documents and
//! goal catalogs, [`textsim`] and [`analysis`] compute Jaro / Jaro-Winkler
//! based similarity, term weights and thematic-area scores, and [`report`]
//! writes CSV, JSON and SVG artifacts. [`cli`] wires the stages together.

pub mod analysis;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod report;
pub mod textsim;

pub use analysis::{AreaLexicon, AreaScores, SimilarityMatrix, TermWeights};
pub use corpus::{Document, Goal, GoalCatalog, NormalizedSentence, StopwordList, Token};
pub use error::{Error, Result};
pub use textsim::{AggregationPolicy, JaroWinklerParams, MatchStats};
