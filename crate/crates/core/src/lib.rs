//! Labeled LDA trained by collapsed Gibbs sampling, with four prediction
//! modes (full LLDA, Prior-LDA, Dep-LDA and Subset LLDA) and the
//! multi-label evaluation measures used to compare them.
//!
//! The pipeline is split the same way the `sllda` binary is:
//!
//! * [`corpus`] parses extreme-classification style sparse files.
//! * [`retrieval`] builds a tf-idf index and produces candidate label sets.
//! * [`sampler`] is the collapsed Gibbs engine and its expected-count estimators.
//! * [`models`] composes the sampler into training and the prediction methods.
//! * [`eval`] computes Micro/Macro-F, precision@k and propensity scored precision@k.
//! * [`cli`] holds the command implementations behind the binary.

pub mod cli;
pub mod corpus;
pub mod error;
pub mod eval;
pub mod models;
pub mod retrieval;
pub mod rng;
pub mod sampler;

pub use corpus::{Corpus, CorpusStats, LoadOptions, Role, SparseDocument};
pub use error::{Error, Result};
pub use eval::{EvalOptions, EvalReport, PropensityModel};
pub use models::{DepAuxModel, Method, PredictionConfig, ScoreMatrix, TrainedModel};
pub use retrieval::{CandidateSet, TfIdfIndex};
pub use sampler::{Hyperparameters, Schedule};
