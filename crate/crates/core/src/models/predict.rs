use rayon::prelude::*;

use super::dep::{dep_alpha, AuxInference, DepAuxModel};
use super::{prior_alpha, rank, DocScores, Method, PredictionConfig, ScoreMatrix, TrainedModel};
use crate::corpus::{Corpus, SparseDocument};
use crate::error::{Error, Result};
use crate::retrieval::{CandidateSet, TfIdfIndex};
use crate::rng::document_rng;
use crate::sampler::{estimate_theta, DocState, Phi};

/// RNG lanes of a test document: the LLDA chain and Dep-LDA's auxiliary chain.
const LANE_LLDA: u64 = 0;
const LANE_AUX: u64 = 1;

fn check_dimensions(model: &TrainedModel, test: &Corpus) -> Result<()> {
    if model.num_features != test.num_features {
        return Err(Error::Dimension(format!(
            "model has {} features, test corpus {}",
            model.num_features, test.num_features
        )));
    }
    Ok(())
}

fn all_labels(num_labels: usize) -> Vec<u32> {
    (0..num_labels as u32).collect()
}

/// Run every chain of the prediction schedule for one document with a
/// fixed α and return the ranked θ estimate.
fn score_document(
    phi: &Phi,
    doc: &SparseDocument,
    allowed: Vec<u32>,
    alpha_full: &[f64],
    cfg: &PredictionConfig,
) -> Result<Vec<(u32, f64)>> {
    let tokens: Vec<u32> = doc.tokens().collect();
    let alpha: Vec<f64> = allowed.iter().map(|&l| alpha_full[l as usize]).collect();
    let mut merged: Option<DocState> = None;
    for chain in 0..cfg.chains {
        let mut rng = document_rng(cfg.seed, chain, doc.doc_id, LANE_LLDA);
        let mut state = DocState::init(&tokens, allowed.clone(), phi, &mut rng).map_err(|e| relabel(e, doc.doc_id))?;
        for it in 1..=cfg.schedule.iterations {
            state.sweep(phi, &alpha, &mut rng, cfg.schedule.is_retained(it));
        }
        match merged.as_mut() {
            Some(m) => m.merge(&state),
            None => merged = Some(state),
        }
    }
    let state = merged.expect("at least one chain");
    let theta = state.theta(&alpha);
    Ok(rank(allowed.into_iter().zip(theta).collect()))
}

fn relabel(e: Error, doc: usize) -> Error {
    match e {
        Error::EmptyAllowed { .. } => Error::EmptyAllowed { doc },
        other => other,
    }
}

fn predict_fixed_alpha(
    model: &TrainedModel,
    test: &Corpus,
    cfg: &PredictionConfig,
    alpha_full: &[f64],
    method: Method,
) -> Result<ScoreMatrix> {
    cfg.validate()?;
    check_dimensions(model, test)?;
    let phi = model.phi()?;
    let labels = all_labels(model.num_labels);
    let documents = test
        .documents
        .par_iter()
        .map(|doc| {
            Ok(DocScores {
                doc_id: doc.doc_id,
                ranking: score_document(&phi, doc, labels.clone(), alpha_full, cfg)?,
                candidates: None,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ScoreMatrix { method, documents })
}

/// Full LLDA: every label is searched, α symmetric.
pub fn predict_llda(model: &TrainedModel, test: &Corpus, cfg: &PredictionConfig) -> Result<ScoreMatrix> {
    let alpha = vec![cfg.alpha_base(model.num_labels); model.num_labels];
    predict_fixed_alpha(model, test, cfg, &alpha, Method::Llda)
}

/// Prior-LDA with the training label frequencies.
pub fn predict_prior(model: &TrainedModel, test: &Corpus, cfg: &PredictionConfig) -> Result<ScoreMatrix> {
    predict_prior_with_frequencies(model, test, cfg, &model.label_frequencies())
}

/// Prior-LDA with caller-provided label frequencies.
pub fn predict_prior_with_frequencies(
    model: &TrainedModel,
    test: &Corpus,
    cfg: &PredictionConfig,
    frequencies: &[f64],
) -> Result<ScoreMatrix> {
    if frequencies.len() != model.num_labels {
        return Err(Error::Dimension(format!(
            "{} frequencies for {} labels",
            frequencies.len(),
            model.num_labels
        )));
    }
    let eta = cfg.eta.unwrap_or(Method::Prior.default_eta());
    let alpha = prior_alpha(frequencies, eta, cfg.alpha_base(model.num_labels));
    predict_fixed_alpha(model, test, cfg, &alpha, Method::Prior)
}

/// Subset LLDA: candidate labels from the ν nearest training documents.
pub fn predict_subset(
    model: &TrainedModel,
    test: &Corpus,
    index: &TfIdfIndex,
    train: &Corpus,
    cfg: &PredictionConfig,
) -> Result<ScoreMatrix> {
    if cfg.neighbors == 0 {
        return Err(Error::Config("neighbors must be at least 1".into()));
    }
    if index.num_documents() != train.len() {
        return Err(Error::Dimension("index was not built from this training corpus".into()));
    }
    let candidates: Vec<CandidateSet> = test
        .documents
        .par_iter()
        .map(|d| index.candidate_labels(train, d, cfg.neighbors))
        .collect();
    predict_with_candidates(model, test, cfg, candidates)
}

/// LLDA restricted to precomputed candidate sets, one per test document in
/// corpus order. Labels outside a document's candidates get no score.
pub fn predict_with_candidates(
    model: &TrainedModel,
    test: &Corpus,
    cfg: &PredictionConfig,
    candidates: Vec<CandidateSet>,
) -> Result<ScoreMatrix> {
    let mut cfg = cfg.clone();
    cfg.method = Method::Subset;
    cfg.neighbors = cfg.neighbors.max(1);
    cfg.validate()?;
    check_dimensions(model, test)?;
    if candidates.len() != test.len() {
        return Err(Error::Dimension(format!(
            "{} candidate sets for {} test documents",
            candidates.len(),
            test.len()
        )));
    }
    if let Some(l) = candidates
        .iter()
        .flat_map(|c| c.labels.iter())
        .find(|&&l| l as usize >= model.num_labels)
    {
        return Err(Error::Dimension(format!(
            "candidate label {l} outside {} labels",
            model.num_labels
        )));
    }
    let phi = model.phi()?;
    let alpha = vec![cfg.alpha_base(model.num_labels); model.num_labels];
    let documents = test
        .documents
        .par_iter()
        .zip(candidates)
        .map(|(doc, cand)| {
            let ranking = score_document(&phi, doc, cand.labels.clone(), &alpha, &cfg)?;
            Ok(DocScores {
                doc_id: doc.doc_id,
                ranking,
                candidates: Some(cand),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ScoreMatrix {
        method: Method::Subset,
        documents,
    })
}

/// Dep-LDA. Each outer iteration turns the document's current token labels
/// into a pseudo-document, infers θ'_d on it against the fixed φ', sets
/// α_d = η(θ'_d·φ') + α and runs one LLDA sweep with that α.
pub fn predict_dep(
    model: &TrainedModel,
    aux: &DepAuxModel,
    test: &Corpus,
    cfg: &PredictionConfig,
) -> Result<ScoreMatrix> {
    cfg.validate()?;
    check_dimensions(model, test)?;
    if aux.num_labels != model.num_labels {
        return Err(Error::Dimension(format!(
            "auxiliary model covers {} labels, model {}",
            aux.num_labels, model.num_labels
        )));
    }
    let phi = model.phi()?;
    let eta = cfg.eta.unwrap_or(Method::Dep.default_eta());
    let base = cfg.alpha_base(model.num_labels);
    let labels = all_labels(model.num_labels);

    let documents = test
        .documents
        .par_iter()
        .map(|doc| {
            let tokens: Vec<u32> = doc.tokens().collect();
            let mut acc = vec![0.0; labels.len()];
            let mut alpha_acc = vec![0.0; labels.len()];
            let mut samples = 0usize;
            for chain in 0..cfg.chains {
                let mut rng = document_rng(cfg.seed, chain, doc.doc_id, LANE_LLDA);
                let mut aux_rng = document_rng(cfg.seed, chain, doc.doc_id, LANE_AUX);
                let mut state =
                    DocState::init(&tokens, labels.clone(), &phi, &mut rng).map_err(|e| relabel(e, doc.doc_id))?;
                let mut inference = AuxInference::new(aux, &state.assignments(), &mut aux_rng);
                for it in 1..=cfg.schedule.iterations {
                    inference.set_words(&state.assignments());
                    for _ in 0..cfg.dep_inner_sweeps {
                        inference.sweep(aux, &mut aux_rng);
                    }
                    let alpha = dep_alpha(&inference.theta(aux), aux, eta, base)?;
                    let retained = cfg.schedule.is_retained(it);
                    state.sweep(&phi, &alpha, &mut rng, retained);
                    if retained {
                        for (a, x) in alpha_acc.iter_mut().zip(&alpha) {
                            *a += x;
                        }
                    }
                }
                for (a, x) in acc.iter_mut().zip(&state.acc_ml) {
                    *a += x;
                }
                samples += state.num_samples;
            }
            let s = samples.max(1) as f64;
            let alpha_mean: Vec<f64> = alpha_acc.iter().map(|a| a / s).collect();
            let theta = estimate_theta(&acc, samples, &alpha_mean, tokens.len());
            Ok(DocScores {
                doc_id: doc.doc_id,
                ranking: rank(labels.iter().copied().zip(theta).collect()),
                candidates: None,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ScoreMatrix {
        method: Method::Dep,
        documents,
    })
}

/// Dispatch on `cfg.method`. Subset needs `retrieval`, Dep needs `aux`.
pub fn predict(
    model: &TrainedModel,
    test: &Corpus,
    cfg: &PredictionConfig,
    aux: Option<&DepAuxModel>,
    retrieval: Option<(&TfIdfIndex, &Corpus)>,
) -> Result<ScoreMatrix> {
    match cfg.method {
        Method::Llda => predict_llda(model, test, cfg),
        Method::Prior => predict_prior(model, test, cfg),
        Method::Dep => {
            let aux = aux.ok_or_else(|| Error::Config("dep prediction needs an auxiliary model".into()))?;
            predict_dep(model, aux, test, cfg)
        }
        Method::Subset => {
            let (index, train) =
                retrieval.ok_or_else(|| Error::Config("subset prediction needs the training corpus".into()))?;
            predict_subset(model, test, index, train, cfg)
        }
    }
}
