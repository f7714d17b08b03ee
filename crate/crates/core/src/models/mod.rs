//! Training and the four prediction methods built on the sampler.
//!
//! The same trained model serves every method; they differ only in the
//! prior on θ and in the label space searched for each test document:
//!
//! | method | label space | α |
//! |--------|-------------|---|
//! | `llda`   | all labels | symmetric `alpha_sum / L` |
//! | `prior`  | all labels | `η·f_l + alpha_sum / L` |
//! | `dep`    | all labels | `η·(θ'_d·φ') + alpha_sum / L`, updated every sweep |
//! | `subset` | union of the labels of the ν nearest training documents | symmetric `alpha_sum / L` |

mod dep;
mod persist;
mod predict;

use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use rayon::prelude::*;

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::retrieval::{CandidateSet, DEFAULT_NEIGHBORS};
use crate::rng::training_rng;
use crate::sampler::{merge_triplets, CountState, Hyperparameters, Layout, Phi, Schedule};

pub use dep::{dep_alpha, train_dep_aux, DepAuxConfig, DepAuxModel};
pub use persist::{load_aux, load_model, save_model, write_atomic, FORMAT_VERSION, SAVE_THRESHOLD};
pub use predict::{
    predict, predict_dep, predict_llda, predict_prior, predict_prior_with_frequencies, predict_subset,
    predict_with_candidates,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Llda,
    Prior,
    Dep,
    Subset,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Llda, Method::Prior, Method::Dep, Method::Subset];

    pub fn name(self) -> &'static str {
        match self {
            Method::Llda => "llda",
            Method::Prior => "prior",
            Method::Dep => "dep",
            Method::Subset => "subset",
        }
    }

    pub fn default_eta(self) -> f64 {
        match self {
            Method::Prior => 50.0,
            Method::Dep => 120.0,
            Method::Llda | Method::Subset => 0.0,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "llda" => Ok(Method::Llda),
            "prior" => Ok(Method::Prior),
            "dep" => Ok(Method::Dep),
            "subset" => Ok(Method::Subset),
            other => Err(Error::Config(format!("unknown method {other:?}"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct TrainConfig {
    /// Training α_l = alpha_sum / L.
    pub alpha_sum: f64,
    pub beta: f64,
    pub schedule: Schedule,
    pub chains: usize,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            alpha_sum: 50.0,
            beta: 0.01,
            schedule: Schedule::default(),
            chains: 1,
            seed: 0,
        }
    }
}

/// Sufficient statistics of a trained LLDA model.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainedModel {
    pub num_labels: usize,
    pub num_features: usize,
    /// Accumulated `(label, feature, mass)` over all retained samples.
    pub counts: Vec<(u32, u32, f64)>,
    pub num_samples: usize,
    pub beta: f64,
    /// Symmetric training α_l.
    pub train_alpha: f64,
    /// Training documents per label.
    pub label_counts: Vec<u32>,
    pub num_train_docs: usize,
    pub format_version: u32,
}

impl TrainedModel {
    pub fn phi(&self) -> Result<Phi> {
        Phi::estimate(
            &self.counts,
            self.num_samples,
            self.beta,
            self.num_labels,
            self.num_features,
        )
    }

    pub fn label_frequencies(&self) -> Vec<f64> {
        let m = self.num_train_docs.max(1) as f64;
        self.label_counts.iter().map(|&c| c as f64 / m).collect()
    }

    /// Mean number of labels per training document.
    pub fn train_cardinality(&self) -> f64 {
        let total: u64 = self.label_counts.iter().map(|&c| c as u64).sum();
        total as f64 / self.num_train_docs.max(1) as f64
    }
}

/// Train LLDA: every token may only take one of its document's labels.
pub fn train_llda(train: &Corpus, cfg: &TrainConfig) -> Result<TrainedModel> {
    train_llda_observed(train, cfg, &|_, _, _| {})
}

/// As [`train_llda`], calling `observe(chain, iteration, sweep_time)` after
/// every sweep.
pub fn train_llda_observed(
    train: &Corpus,
    cfg: &TrainConfig,
    observe: &(dyn Fn(usize, usize, Duration) + Sync),
) -> Result<TrainedModel> {
    if train.is_empty() {
        return Err(Error::Config("empty training corpus".into()));
    }
    let num_labels = train.num_labels;
    let mut hp = Hyperparameters::symmetric(num_labels, cfg.alpha_sum, cfg.beta, cfg.schedule);
    hp.chains = cfg.chains;
    hp.validate()?;

    let tokens: Vec<Vec<u32>> = train.documents.iter().map(|d| d.tokens().collect()).collect();
    let allowed: Vec<Vec<u32>> = train.documents.iter().map(|d| d.labels.clone()).collect();
    if let Some(m) = allowed.iter().position(|a| a.is_empty()) {
        return Err(Error::EmptyAllowed { doc: m });
    }

    let parts = (0..cfg.chains)
        .into_par_iter()
        .map(|chain| {
            let mut rng = training_rng(cfg.seed, chain);
            let mut state = CountState::init(
                &tokens,
                allowed.clone(),
                train.num_features,
                num_labels,
                Layout::Constrained,
                &mut rng,
            )?;
            let expected = state.run_observed(&hp, &mut rng, |it, t| observe(chain, it, t));
            Ok((state.expected_triplets(&expected), expected.num_samples))
        })
        .collect::<Result<Vec<_>>>()?;
    let (counts, num_samples) = merge_triplets(parts);

    Ok(TrainedModel {
        num_labels,
        num_features: train.num_features,
        counts,
        num_samples,
        beta: cfg.beta,
        train_alpha: cfg.alpha_sum / num_labels as f64,
        label_counts: train.label_counts.clone(),
        num_train_docs: train.len(),
        format_version: FORMAT_VERSION,
    })
}

/// α_l = η·f_l + α.
pub fn prior_alpha(frequencies: &[f64], eta: f64, alpha_base: f64) -> Vec<f64> {
    frequencies.iter().map(|&f| eta * f + alpha_base).collect()
}

#[derive(Debug, Clone)]
pub struct PredictionConfig {
    pub method: Method,
    /// Overrides the method's default η when set.
    pub eta: Option<f64>,
    /// Base α_l = alpha_sum / L.
    pub alpha_sum: f64,
    pub neighbors: usize,
    pub schedule: Schedule,
    pub chains: usize,
    pub seed: u64,
    /// Auxiliary-LDA sweeps per outer iteration when inferring θ'_d.
    pub dep_inner_sweeps: usize,
}

impl PredictionConfig {
    pub fn new(method: Method) -> Self {
        PredictionConfig {
            method,
            eta: None,
            alpha_sum: 30.0,
            neighbors: DEFAULT_NEIGHBORS,
            schedule: Schedule::default(),
            chains: 1,
            seed: 0,
            dep_inner_sweeps: 5,
        }
    }

    pub fn eta(&self) -> f64 {
        self.eta.unwrap_or_else(|| self.method.default_eta())
    }

    pub fn alpha_base(&self, num_labels: usize) -> f64 {
        self.alpha_sum / num_labels as f64
    }

    pub fn validate(&self) -> Result<()> {
        self.schedule.validate()?;
        if !(self.alpha_sum > 0.0) {
            return Err(Error::Config("alpha sum must be positive".into()));
        }
        if self.chains == 0 {
            return Err(Error::Config("at least one chain is required".into()));
        }
        if self.method == Method::Subset && self.neighbors == 0 {
            return Err(Error::Config("neighbors must be at least 1".into()));
        }
        if matches!(self.method, Method::Prior | Method::Dep) && !(self.eta() >= 0.0 && self.eta().is_finite()) {
            return Err(Error::Config("eta must be a finite nonnegative number".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DocScores {
    pub doc_id: usize,
    /// `(label, θ)` descending by score, ties by ascending label.
    pub ranking: Vec<(u32, f64)>,
    pub candidates: Option<CandidateSet>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoreMatrix {
    pub method: Method,
    pub documents: Vec<DocScores>,
}

/// Sort `(label, score)` pairs descending by score, ties by ascending label.
pub fn rank(mut scores: Vec<(u32, f64)>) -> Vec<(u32, f64)> {
    scores.sort_by(|a, b| {
        b.1.partial_cmp(&a.1)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.0.cmp(&b.0))
    });
    scores
}

impl ScoreMatrix {
    /// Label order of every document's ranking.
    pub fn rankings(&self) -> Vec<Vec<u32>> {
        self.documents
            .iter()
            .map(|d| d.ranking.iter().map(|&(l, _)| l).collect())
            .collect()
    }

    /// `doc_id TAB label:score ...`, top `max(100, |active labels|)` entries,
    /// scores to six decimals.
    pub fn to_score_file(&self) -> String {
        use std::fmt::Write as _;
        let mut out = String::new();
        for d in &self.documents {
            let active = d.candidates.as_ref().map_or(d.ranking.len(), |c| c.labels.len());
            let keep = active.max(100).min(d.ranking.len());
            let _ = write!(out, "{}\t", d.doc_id);
            for (idx, (l, s)) in d.ranking[..keep].iter().enumerate() {
                if idx > 0 {
                    out.push(' ');
                }
                let _ = write!(out, "{l}:{s:.6}");
            }
            out.push('\n');
        }
        out
    }
}

/// Parse a score file into per-document `(label, score)` lists kept in file
/// order, which is the ranking order.
pub fn parse_score_file(text: &str) -> Result<Vec<(usize, Vec<(u32, f64)>)>> {
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let perr = |msg: String| Error::Parse { line: idx + 1, msg };
        let (doc, rest) = line.split_once('\t').unwrap_or((line, ""));
        let doc: usize = doc.trim().parse().map_err(|_| perr(format!("bad doc id {doc:?}")))?;
        let mut ranking = Vec::new();
        for item in rest.split(' ').filter(|s| !s.is_empty()) {
            let (l, s) = item
                .split_once(':')
                .ok_or_else(|| perr(format!("expected label:score, got {item:?}")))?;
            let l = l.parse().map_err(|_| perr(format!("bad label {l:?}")))?;
            let s = s.parse().map_err(|_| perr(format!("bad score {s:?}")))?;
            ranking.push((l, s));
        }
        out.push((doc, ranking));
    }
    Ok(out)
}
