//! Dep-LDA's auxiliary model: unsupervised LDA whose documents are the
//! training label sets, so topics capture label co-occurrence.

use rand::Rng;

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::rng::training_rng;
use crate::sampler::{CountState, Hyperparameters, Layout, Phi, Schedule};

/// Offset applied to the training seed for the auxiliary chain.
const AUX_SEED_OFFSET: u64 = 0x9e37_79b9_7f4a_7c15;

#[derive(Debug, Clone)]
pub struct DepAuxConfig {
    pub topics: usize,
    pub alpha: f64,
    pub beta: f64,
    pub schedule: Schedule,
    pub seed: u64,
}

impl Default for DepAuxConfig {
    fn default() -> Self {
        DepAuxConfig {
            topics: 100,
            alpha: 0.1,
            beta: 0.01,
            schedule: Schedule::default(),
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DepAuxModel {
    pub topics: usize,
    pub num_labels: usize,
    pub alpha: f64,
    pub beta: f64,
    /// Accumulated `(topic, label, mass)`.
    pub counts: Vec<(u32, u32, f64)>,
    pub num_samples: usize,
    /// φ' stored label-major: `phi_by_label[l * T + t] = φ'_{t,l}`.
    phi_by_label: Vec<f64>,
}

impl DepAuxModel {
    pub fn from_counts(
        topics: usize,
        num_labels: usize,
        alpha: f64,
        beta: f64,
        counts: Vec<(u32, u32, f64)>,
        num_samples: usize,
    ) -> Result<Self> {
        if topics == 0 {
            return Err(Error::Config("at least one topic is required".into()));
        }
        let phi = Phi::estimate(&counts, num_samples, beta, topics, num_labels)?;
        let mut phi_by_label = vec![0.0; topics * num_labels];
        for t in 0..topics {
            for (l, p) in phi.row(t as u32).into_iter().enumerate() {
                phi_by_label[l * topics + t] = p;
            }
        }
        Ok(DepAuxModel {
            topics,
            num_labels,
            alpha,
            beta,
            counts,
            num_samples,
            phi_by_label,
        })
    }

    /// φ'_{t,l}.
    pub fn phi(&self, t: usize, l: usize) -> f64 {
        self.phi_by_label[l * self.topics + t]
    }

    pub fn phi_row(&self, t: usize) -> Vec<f64> {
        (0..self.num_labels).map(|l| self.phi(t, l)).collect()
    }

    fn column(&self, l: usize) -> &[f64] {
        &self.phi_by_label[l * self.topics..(l + 1) * self.topics]
    }
}

/// Train the auxiliary LDA on label-set pseudo-documents (one token per label).
pub fn train_dep_aux(train: &Corpus, cfg: &DepAuxConfig) -> Result<DepAuxModel> {
    if cfg.topics == 0 {
        return Err(Error::Config("at least one topic is required".into()));
    }
    let hp = Hyperparameters {
        alpha: vec![cfg.alpha; cfg.topics],
        beta: cfg.beta,
        schedule: cfg.schedule,
        chains: 1,
    };
    hp.validate()?;
    let docs: Vec<Vec<u32>> = train.documents.iter().map(|d| d.labels.clone()).collect();
    let topics: Vec<u32> = (0..cfg.topics as u32).collect();
    let allowed = vec![topics; docs.len()];
    let mut rng = training_rng(cfg.seed.wrapping_add(AUX_SEED_OFFSET), 0);
    let mut state = CountState::init(&docs, allowed, train.num_labels, cfg.topics, Layout::Dense, &mut rng)?;
    let expected = state.run(&hp, &mut rng);
    DepAuxModel::from_counts(
        cfg.topics,
        train.num_labels,
        cfg.alpha,
        cfg.beta,
        state.expected_triplets(&expected),
        expected.num_samples,
    )
}

/// α_d = η·(θ'_d · φ') + α over all labels.
pub fn dep_alpha(theta_prime: &[f64], aux: &DepAuxModel, eta: f64, alpha_base: f64) -> Result<Vec<f64>> {
    if theta_prime.len() != aux.topics {
        return Err(Error::Dimension(format!(
            "theta' has {} entries, auxiliary model {} topics",
            theta_prime.len(),
            aux.topics
        )));
    }
    Ok((0..aux.num_labels)
        .map(|l| {
            let mix: f64 = aux.column(l).iter().zip(theta_prime).map(|(p, t)| p * t).sum();
            eta * mix + alpha_base
        })
        .collect())
}

/// Held-out auxiliary-LDA state for one pseudo-document. Topic assignments
/// persist across outer iterations while the words (labels) change.
pub(crate) struct AuxInference {
    words: Vec<u32>,
    z: Vec<u32>,
    n_t: Vec<u32>,
    weights: Vec<f64>,
}

impl AuxInference {
    pub(crate) fn new<R: Rng>(aux: &DepAuxModel, words: &[u32], rng: &mut R) -> Self {
        let t = aux.topics;
        let z: Vec<u32> = words
            .iter()
            .map(|_| if t == 1 { 0 } else { rng.gen_range(0..t) as u32 })
            .collect();
        let mut n_t = vec![0u32; t];
        for &k in &z {
            n_t[k as usize] += 1;
        }
        AuxInference {
            words: words.to_vec(),
            z,
            n_t,
            weights: Vec::with_capacity(t),
        }
    }

    pub(crate) fn set_words(&mut self, words: &[u32]) {
        debug_assert_eq!(words.len(), self.words.len());
        self.words.copy_from_slice(words);
    }

    pub(crate) fn sweep<R: Rng>(&mut self, aux: &DepAuxModel, rng: &mut R) {
        let t = aux.topics;
        if t == 1 {
            return;
        }
        for i in 0..self.words.len() {
            let old = self.z[i] as usize;
            self.n_t[old] -= 1;
            self.weights.clear();
            let mut total = 0.0;
            for (k, &p) in aux.column(self.words[i] as usize).iter().enumerate() {
                let w = p * (self.n_t[k] as f64 + aux.alpha);
                self.weights.push(w);
                total += w;
            }
            let u = rng.gen::<f64>() * total;
            let mut acc = 0.0;
            let mut new = t - 1;
            for (k, &w) in self.weights.iter().enumerate() {
                acc += w;
                if u < acc {
                    new = k;
                    break;
                }
            }
            self.z[i] = new as u32;
            self.n_t[new] += 1;
        }
    }

    /// θ'_d = (n_t + α') / (N + Tα').
    pub(crate) fn theta(&self, aux: &DepAuxModel) -> Vec<f64> {
        let denom = self.words.len() as f64 + aux.topics as f64 * aux.alpha;
        self.n_t.iter().map(|&n| (n as f64 + aux.alpha) / denom).collect()
    }
}
