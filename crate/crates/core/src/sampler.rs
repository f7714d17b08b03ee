//! Collapsed Gibbs sampling for (Labeled) LDA.
//!
//! Two engines share the same conditional:
//!
//! * [`CountState`] samples a whole corpus with `n_lv` learned jointly. Each
//!   document may only use its own allowed label list, so supervised
//!   training passes the observed label set and unsupervised LDA passes
//!   every topic.
//! * [`DocState`] samples one held-out document against a fixed [`Phi`].
//!   Held-out documents do not interact, so each runs its own chain.
//!
//! Parameter estimates use expected counts: on every retained iteration
//! the full conditional of each token is accumulated instead of the drawn
//! label.

use std::collections::HashMap;

use rand::Rng;

use crate::error::{Error, Result};

/// Iteration schedule. Iterations are counted from 1; iteration `it` is
/// retained when `it > burn_in` and `(it - burn_in) % lag == 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Schedule {
    pub iterations: usize,
    pub burn_in: usize,
    pub lag: usize,
}

impl Default for Schedule {
    fn default() -> Self {
        Schedule {
            iterations: 200,
            burn_in: 50,
            lag: 5,
        }
    }
}

impl Schedule {
    pub fn validate(&self) -> Result<()> {
        if self.lag == 0 {
            return Err(Error::Config("lag must be at least 1".into()));
        }
        if self.burn_in >= self.iterations {
            return Err(Error::Config(format!(
                "burn-in ({}) must be smaller than iterations ({})",
                self.burn_in, self.iterations
            )));
        }
        if self.retained_samples() == 0 {
            return Err(Error::Config("schedule retains no samples".into()));
        }
        Ok(())
    }

    pub fn retained_samples(&self) -> usize {
        if self.lag == 0 || self.iterations <= self.burn_in {
            0
        } else {
            (self.iterations - self.burn_in) / self.lag
        }
    }

    pub fn is_retained(&self, iteration: usize) -> bool {
        iteration > self.burn_in && (iteration - self.burn_in) % self.lag == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Hyperparameters {
    /// Dirichlet prior on θ, one entry per label of the full label space.
    pub alpha: Vec<f64>,
    /// Symmetric Dirichlet prior on φ.
    pub beta: f64,
    pub schedule: Schedule,
    pub chains: usize,
}

impl Hyperparameters {
    pub fn symmetric(num_labels: usize, alpha_sum: f64, beta: f64, schedule: Schedule) -> Self {
        Hyperparameters {
            alpha: vec![alpha_sum / num_labels as f64; num_labels],
            beta,
            schedule,
            chains: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.schedule.validate()?;
        if !(self.beta > 0.0) {
            return Err(Error::Config(format!("beta must be positive, got {}", self.beta)));
        }
        if let Some(a) = self.alpha.iter().find(|&&a| !(a > 0.0)) {
            return Err(Error::Config(format!("alpha must be positive, got {a}")));
        }
        if self.chains == 0 {
            return Err(Error::Config("at least one chain is required".into()));
        }
        Ok(())
    }
}

/// Draw an index from unnormalized weights. A single option consumes no
/// randomness; all-zero weights fall back to uniform.
fn draw<R: Rng>(weights: &[f64], total: f64, rng: &mut R) -> usize {
    let k = weights.len();
    if k == 1 {
        return 0;
    }
    if !(total > 0.0) {
        return rng.gen_range(0..k);
    }
    let u = rng.gen::<f64>() * total;
    let mut acc = 0.0;
    let mut last_positive = 0;
    for (j, &w) in weights.iter().enumerate() {
        if w > 0.0 {
            acc += w;
            last_positive = j;
            if u < acc {
                return j;
            }
        }
    }
    last_positive
}

fn uniform_init<R: Rng>(k: usize, rng: &mut R) -> u32 {
    if k == 1 {
        0
    } else {
        rng.gen_range(0..k) as u32
    }
}

/// Local view of a token stream: distinct features, and per token the
/// position of its feature in that list.
fn localize(tokens: &[u32]) -> (Vec<u32>, Vec<u32>) {
    let mut features: Vec<u32> = tokens.to_vec();
    features.sort_unstable();
    features.dedup();
    let local = tokens
        .iter()
        .map(|t| features.binary_search(t).expect("feature present") as u32)
        .collect();
    (features, local)
}

/// Storage of the label-feature count matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    /// One slot per `(label, feature)` pair some document can reach: its
    /// size is bounded by Σ_m |features_m|·|allowed_m| and never by L·V.
    Constrained,
    /// Full `L × V` matrix. Used for unsupervised LDA with few topics.
    Dense,
}

#[derive(Debug, Clone)]
struct TrainDoc {
    allowed: Vec<u32>,
    features: Vec<u32>,
    tokens: Vec<u32>,
    z: Vec<u32>,
    n_ml: Vec<u32>,
    /// `features.len() × allowed.len()` slot ids, constrained layout only.
    slots: Vec<u32>,
}

/// Gibbs state for a corpus whose label-feature counts are shared.
#[derive(Debug, Clone)]
pub struct CountState {
    num_features: usize,
    num_labels: usize,
    layout: Layout,
    docs: Vec<TrainDoc>,
    n_lv: Vec<u32>,
    n_l: Vec<u32>,
    /// `(label, feature)` of each slot, constrained layout only.
    slot_keys: Vec<(u32, u32)>,
    slot_index: HashMap<(u32, u32), u32>,
}

/// Accumulated conditional probability mass over retained iterations.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpectedCounts {
    /// Same indexing as the state's label-feature slots.
    pub acc_lv: Vec<f64>,
    /// Per document, per allowed label (in the document's allowed order).
    pub acc_ml: Vec<Vec<f64>>,
    pub num_samples: usize,
}

impl CountState {
    /// Assign every token a label drawn uniformly from its document's
    /// allowed list and build the counts.
    pub fn init<R: Rng>(
        documents: &[Vec<u32>],
        allowed: Vec<Vec<u32>>,
        num_features: usize,
        num_labels: usize,
        layout: Layout,
        rng: &mut R,
    ) -> Result<Self> {
        if documents.len() != allowed.len() {
            return Err(Error::Dimension(format!(
                "{} documents but {} allowed sets",
                documents.len(),
                allowed.len()
            )));
        }
        let mut slot_keys = Vec::new();
        let mut slot_index: HashMap<(u32, u32), u32> = HashMap::new();
        let mut docs = Vec::with_capacity(documents.len());
        for (m, (tokens, allowed)) in documents.iter().zip(allowed).enumerate() {
            if allowed.is_empty() {
                return Err(Error::EmptyAllowed { doc: m });
            }
            if let Some(&l) = allowed.iter().find(|&&l| l as usize >= num_labels) {
                return Err(Error::Dimension(format!("label {l} outside {num_labels} labels")));
            }
            if let Some(&v) = tokens.iter().find(|&&v| v as usize >= num_features) {
                return Err(Error::Dimension(format!("feature {v} outside {num_features} features")));
            }
            let (features, local) = localize(tokens);
            let mut slots = Vec::new();
            if layout == Layout::Constrained {
                slots.reserve(features.len() * allowed.len());
                for &v in &features {
                    for &l in &allowed {
                        let next = slot_keys.len() as u32;
                        let id = *slot_index.entry((l, v)).or_insert_with(|| {
                            slot_keys.push((l, v));
                            next
                        });
                        slots.push(id);
                    }
                }
            }
            docs.push(TrainDoc {
                n_ml: vec![0; allowed.len()],
                allowed,
                features,
                tokens: local,
                z: Vec::new(),
                slots,
            });
        }
        let n_slots = match layout {
            Layout::Constrained => slot_keys.len(),
            Layout::Dense => num_labels * num_features,
        };
        let mut state = CountState {
            num_features,
            num_labels,
            layout,
            docs,
            n_lv: vec![0; n_slots],
            n_l: vec![0; num_labels],
            slot_keys,
            slot_index,
        };
        for m in 0..state.docs.len() {
            let k = state.docs[m].allowed.len();
            let n = state.docs[m].tokens.len();
            let z: Vec<u32> = (0..n).map(|_| uniform_init(k, rng)).collect();
            state.docs[m].z = z;
            for i in 0..n {
                state.add(m, i, 1);
            }
        }
        Ok(state)
    }

    pub fn num_documents(&self) -> usize {
        self.docs.len()
    }

    pub fn num_labels(&self) -> usize {
        self.num_labels
    }

    pub fn num_features(&self) -> usize {
        self.num_features
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn allowed(&self, m: usize) -> &[u32] {
        &self.docs[m].allowed
    }

    pub fn num_tokens(&self, m: usize) -> usize {
        self.docs[m].tokens.len()
    }

    /// Feature id of token `i` in document `m`.
    pub fn token_feature(&self, m: usize, i: usize) -> u32 {
        let d = &self.docs[m];
        d.features[d.tokens[i] as usize]
    }

    /// Global label currently assigned to token `i` of document `m`.
    pub fn assignment(&self, m: usize, i: usize) -> u32 {
        let d = &self.docs[m];
        d.allowed[d.z[i] as usize]
    }

    pub fn assignments(&self, m: usize) -> Vec<u32> {
        let d = &self.docs[m];
        d.z.iter().map(|&j| d.allowed[j as usize]).collect()
    }

    pub fn n_lv(&self, l: u32, v: u32) -> u32 {
        match self.layout {
            Layout::Dense => self.n_lv[l as usize * self.num_features + v as usize],
            Layout::Constrained => self.slot_index.get(&(l, v)).map_or(0, |&s| self.n_lv[s as usize]),
        }
    }

    pub fn n_l(&self, l: u32) -> u32 {
        self.n_l[l as usize]
    }

    pub fn n_ml(&self, m: usize, l: u32) -> u32 {
        let d = &self.docs[m];
        d.allowed.iter().position(|&a| a == l).map_or(0, |j| d.n_ml[j])
    }

    #[inline]
    fn slot(&self, m: usize, f_local: usize, j: usize) -> usize {
        let d = &self.docs[m];
        match self.layout {
            Layout::Constrained => d.slots[f_local * d.allowed.len() + j] as usize,
            Layout::Dense => d.allowed[j] as usize * self.num_features + d.features[f_local] as usize,
        }
    }

    fn add(&mut self, m: usize, i: usize, delta: i32) {
        let f = self.docs[m].tokens[i] as usize;
        let j = self.docs[m].z[i] as usize;
        let s = self.slot(m, f, j);
        let l = self.docs[m].allowed[j] as usize;
        let apply = |x: &mut u32| *x = x.wrapping_add_signed(delta);
        apply(&mut self.n_lv[s]);
        apply(&mut self.n_l[l]);
        apply(&mut self.docs[m].n_ml[j]);
    }

    /// Unnormalized conditional weights for token `i`, which must already be
    /// removed from the counts. The θ-factor denominator is constant in the
    /// label and is omitted.
    fn weights(&self, alpha: &[f64], beta: f64, m: usize, i: usize, out: &mut Vec<f64>) -> f64 {
        let d = &self.docs[m];
        let f = d.tokens[i] as usize;
        let v_beta = self.num_features as f64 * beta;
        out.clear();
        let mut total = 0.0;
        for (j, &l) in d.allowed.iter().enumerate() {
            let s = self.slot(m, f, j);
            let w = (self.n_lv[s] as f64 + beta) / (self.n_l[l as usize] as f64 + v_beta)
                * (d.n_ml[j] as f64 + alpha[l as usize]);
            out.push(w);
            total += w;
        }
        total
    }

    /// Normalized conditional for token `i` of document `m` over the
    /// document's allowed labels, with the token excluded from the counts.
    /// The state is unchanged afterwards.
    pub fn conditional(&mut self, hp: &Hyperparameters, m: usize, i: usize) -> Vec<f64> {
        self.add(m, i, -1);
        let mut w = Vec::new();
        let total = self.weights(&hp.alpha, hp.beta, m, i, &mut w);
        self.add(m, i, 1);
        for x in w.iter_mut() {
            *x /= total;
        }
        w
    }

    pub fn new_expected_counts(&self) -> ExpectedCounts {
        ExpectedCounts {
            acc_lv: vec![0.0; self.n_lv.len()],
            acc_ml: self.docs.iter().map(|d| vec![0.0; d.allowed.len()]).collect(),
            num_samples: 0,
        }
    }

    /// Resample every token once, documents in order then tokens in order.
    /// With `expected`, the conditional of each token is accumulated and the
    /// sample count incremented.
    pub fn sweep<R: Rng>(&mut self, hp: &Hyperparameters, rng: &mut R, mut expected: Option<&mut ExpectedCounts>) {
        let mut w = Vec::new();
        for m in 0..self.docs.len() {
            let k = self.docs[m].allowed.len();
            for i in 0..self.docs[m].tokens.len() {
                self.add(m, i, -1);
                let f = self.docs[m].tokens[i] as usize;
                let j_new = if k == 1 {
                    if let Some(acc) = expected.as_deref_mut() {
                        let s = self.slot(m, f, 0);
                        acc.acc_lv[s] += 1.0;
                        acc.acc_ml[m][0] += 1.0;
                    }
                    0
                } else {
                    let total = self.weights(&hp.alpha, hp.beta, m, i, &mut w);
                    if let Some(acc) = expected.as_deref_mut() {
                        for (j, &p) in w.iter().enumerate() {
                            let p = p / total;
                            let s = self.slot(m, f, j);
                            acc.acc_lv[s] += p;
                            acc.acc_ml[m][j] += p;
                        }
                    }
                    draw(&w, total, rng)
                };
                self.docs[m].z[i] = j_new as u32;
                self.add(m, i, 1);
            }
        }
        if let Some(acc) = expected {
            acc.num_samples += 1;
        }
    }

    /// Run the full schedule and return the accumulated expected counts.
    pub fn run<R: Rng>(&mut self, hp: &Hyperparameters, rng: &mut R) -> ExpectedCounts {
        self.run_observed(hp, rng, |_, _| {})
    }

    /// As [`CountState::run`], reporting each iteration and its wall time.
    pub fn run_observed<R: Rng, F: FnMut(usize, std::time::Duration)>(
        &mut self,
        hp: &Hyperparameters,
        rng: &mut R,
        mut observe: F,
    ) -> ExpectedCounts {
        let mut expected = self.new_expected_counts();
        for it in 1..=hp.schedule.iterations {
            let start = std::time::Instant::now();
            if hp.schedule.is_retained(it) {
                self.sweep(hp, rng, Some(&mut expected));
            } else {
                self.sweep(hp, rng, None);
            }
            observe(it, start.elapsed());
        }
        expected
    }

    /// Recount the histograms from `z` and compare with the maintained counts.
    pub fn is_consistent(&self) -> bool {
        let mut n_lv = vec![0u32; self.n_lv.len()];
        let mut n_l = vec![0u32; self.num_labels];
        for (m, d) in self.docs.iter().enumerate() {
            let mut n_ml = vec![0u32; d.allowed.len()];
            for (i, &j) in d.z.iter().enumerate() {
                n_lv[self.slot(m, d.tokens[i] as usize, j as usize)] += 1;
                n_l[d.allowed[j as usize] as usize] += 1;
                n_ml[j as usize] += 1;
            }
            if n_ml != d.n_ml || n_ml.iter().sum::<u32>() as usize != d.tokens.len() {
                return false;
            }
        }
        n_lv == self.n_lv && n_l == self.n_l
    }

    /// `(label, feature, value)` for every nonzero accumulator entry.
    pub fn expected_triplets(&self, expected: &ExpectedCounts) -> Vec<(u32, u32, f64)> {
        let mut out: Vec<(u32, u32, f64)> = expected
            .acc_lv
            .iter()
            .enumerate()
            .filter(|(_, &x)| x != 0.0)
            .map(|(s, &x)| {
                let (l, v) = match self.layout {
                    Layout::Constrained => self.slot_keys[s],
                    Layout::Dense => ((s / self.num_features) as u32, (s % self.num_features) as u32),
                };
                (l, v, x)
            })
            .collect();
        out.sort_by_key(|&(l, v, _)| (l, v));
        out
    }
}

/// Merge accumulated triplets from several chains by summing values and
/// sample counts.
pub fn merge_triplets(parts: Vec<(Vec<(u32, u32, f64)>, usize)>) -> (Vec<(u32, u32, f64)>, usize) {
    let samples = parts.iter().map(|p| p.1).sum();
    let mut all: Vec<(u32, u32, f64)> = parts.into_iter().flat_map(|p| p.0).collect();
    all.sort_by_key(|&(l, v, _)| (l, v));
    let mut out: Vec<(u32, u32, f64)> = Vec::with_capacity(all.len());
    for (l, v, x) in all {
        match out.last_mut() {
            Some(last) if (last.0, last.1) == (l, v) => last.2 += x,
            _ => out.push((l, v, x)),
        }
    }
    (out, samples)
}

/// Label–feature distributions estimated from expected counts:
/// `φ_lv = (acc_lv/S + β) / (Σ_v' acc_lv'/S + Vβ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Phi {
    pub num_labels: usize,
    pub num_features: usize,
    pub beta: f64,
    /// Row denominators `Σ_v' acc_lv'/S + Vβ`.
    denom: Vec<f64>,
    /// Per feature, `(label, acc_lv/S)` sorted by label.
    columns: Vec<Vec<(u32, f64)>>,
}

impl Phi {
    pub fn estimate(
        triplets: &[(u32, u32, f64)],
        num_samples: usize,
        beta: f64,
        num_labels: usize,
        num_features: usize,
    ) -> Result<Phi> {
        if num_samples == 0 {
            return Err(Error::Config("phi estimate needs at least one sample".into()));
        }
        let s = num_samples as f64;
        let mut row_sum = vec![0.0; num_labels];
        let mut columns = vec![Vec::new(); num_features];
        for &(l, v, x) in triplets {
            if l as usize >= num_labels || v as usize >= num_features {
                return Err(Error::Dimension(format!(
                    "count entry ({l}, {v}) outside {num_labels}x{num_features}"
                )));
            }
            row_sum[l as usize] += x / s;
            columns[v as usize].push((l, x / s));
        }
        for col in columns.iter_mut() {
            col.sort_by_key(|&(l, _)| l);
        }
        let v_beta = num_features as f64 * beta;
        Ok(Phi {
            num_labels,
            num_features,
            beta,
            denom: row_sum.iter().map(|r| r + v_beta).collect(),
            columns,
        })
    }

    fn column_weight(&self, l: u32, v: u32) -> f64 {
        let col = &self.columns[v as usize];
        col.binary_search_by_key(&l, |&(x, _)| x).map_or(0.0, |p| col[p].1)
    }

    pub fn get(&self, l: u32, v: u32) -> f64 {
        (self.column_weight(l, v) + self.beta) / self.denom[l as usize]
    }

    pub fn row(&self, l: u32) -> Vec<f64> {
        (0..self.num_features as u32).map(|v| self.get(l, v)).collect()
    }

    /// φ_{·v} restricted to `allowed`, written into `out`.
    pub fn column_into(&self, v: u32, allowed: &[u32], out: &mut [f64]) {
        let col = &self.columns[v as usize];
        let identity = allowed.len() == self.num_labels && allowed.iter().enumerate().all(|(j, &l)| j == l as usize);
        if identity {
            for (o, &d) in out.iter_mut().zip(&self.denom) {
                *o = self.beta / d;
            }
            for &(l, w) in col {
                out[l as usize] = (w + self.beta) / self.denom[l as usize];
            }
        } else {
            for (o, &l) in out.iter_mut().zip(allowed) {
                *o = self.get(l, v);
            }
        }
    }
}

/// Upper bound on cached φ entries per held-out document.
const PHI_CACHE_LIMIT: usize = 1 << 22;

/// Gibbs state of one held-out document sampled against a fixed φ.
#[derive(Debug, Clone)]
pub struct DocState {
    allowed: Vec<u32>,
    features: Vec<u32>,
    tokens: Vec<u32>,
    z: Vec<u32>,
    n_ml: Vec<u32>,
    /// φ restricted to (features × allowed), when small enough.
    phi_cache: Vec<f64>,
    pub acc_ml: Vec<f64>,
    pub num_samples: usize,
}

impl DocState {
    pub fn init<R: Rng>(tokens: &[u32], allowed: Vec<u32>, phi: &Phi, rng: &mut R) -> Result<Self> {
        if allowed.is_empty() {
            return Err(Error::EmptyAllowed { doc: 0 });
        }
        let (features, local) = localize(tokens);
        if let Some(&v) = features.iter().find(|&&v| v as usize >= phi.num_features) {
            return Err(Error::Dimension(format!(
                "feature {v} outside {} model features",
                phi.num_features
            )));
        }
        if let Some(&l) = allowed.iter().find(|&&l| l as usize >= phi.num_labels) {
            return Err(Error::Dimension(format!("label {l} outside {} labels", phi.num_labels)));
        }
        let k = allowed.len();
        let mut phi_cache = Vec::new();
        if features.len() * k <= PHI_CACHE_LIMIT {
            phi_cache = vec![0.0; features.len() * k];
            for (f, &v) in features.iter().enumerate() {
                phi.column_into(v, &allowed, &mut phi_cache[f * k..(f + 1) * k]);
            }
        }
        let z: Vec<u32> = local.iter().map(|_| uniform_init(k, rng)).collect();
        let mut n_ml = vec![0u32; k];
        for &j in &z {
            n_ml[j as usize] += 1;
        }
        Ok(DocState {
            acc_ml: vec![0.0; k],
            allowed,
            features,
            tokens: local,
            z,
            n_ml,
            phi_cache,
            num_samples: 0,
        })
    }

    pub fn allowed(&self) -> &[u32] {
        &self.allowed
    }

    pub fn num_tokens(&self) -> usize {
        self.tokens.len()
    }

    /// Current label of every token.
    pub fn assignments(&self) -> Vec<u32> {
        self.z.iter().map(|&j| self.allowed[j as usize]).collect()
    }

    pub fn n_ml(&self) -> &[u32] {
        &self.n_ml
    }

    fn weights(&self, phi: &Phi, alpha: &[f64], i: usize, scratch: &mut Vec<f64>, out: &mut Vec<f64>) -> f64 {
        let k = self.allowed.len();
        let f = self.tokens[i] as usize;
        let col: &[f64] = if self.phi_cache.is_empty() {
            scratch.resize(k, 0.0);
            phi.column_into(self.features[f], &self.allowed, scratch);
            scratch
        } else {
            &self.phi_cache[f * k..(f + 1) * k]
        };
        out.clear();
        let mut total = 0.0;
        for j in 0..k {
            let w = col[j] * (self.n_ml[j] as f64 + alpha[j]);
            out.push(w);
            total += w;
        }
        total
    }

    /// Normalized conditional of token `i` over the allowed labels, the token
    /// excluded. `alpha` is indexed like `allowed`. All-zero φ yields uniform.
    pub fn conditional(&mut self, phi: &Phi, alpha: &[f64], i: usize) -> Vec<f64> {
        let j = self.z[i] as usize;
        self.n_ml[j] -= 1;
        let (mut scratch, mut w) = (Vec::new(), Vec::new());
        let total = self.weights(phi, alpha, i, &mut scratch, &mut w);
        self.n_ml[j] += 1;
        if total > 0.0 {
            w.iter_mut().for_each(|x| *x /= total);
        } else {
            let k = w.len() as f64;
            w.iter_mut().for_each(|x| *x = 1.0 / k);
        }
        w
    }

    pub fn sweep<R: Rng>(&mut self, phi: &Phi, alpha: &[f64], rng: &mut R, accumulate: bool) {
        let k = self.allowed.len();
        let mut w = Vec::with_capacity(k);
        let mut scratch = Vec::new();
        for i in 0..self.tokens.len() {
            let old = self.z[i] as usize;
            self.n_ml[old] -= 1;
            let j_new = if k == 1 {
                if accumulate {
                    self.acc_ml[0] += 1.0;
                }
                0
            } else {
                let total = self.weights(phi, alpha, i, &mut scratch, &mut w);
                if accumulate {
                    if total > 0.0 {
                        for (a, &p) in self.acc_ml.iter_mut().zip(&w) {
                            *a += p / total;
                        }
                    } else {
                        self.acc_ml.iter_mut().for_each(|a| *a += 1.0 / k as f64);
                    }
                }
                draw(&w, total, rng)
            };
            self.z[i] = j_new as u32;
            self.n_ml[j_new] += 1;
        }
        if accumulate {
            self.num_samples += 1;
        }
    }

    /// Merge another chain's accumulators for the same document.
    pub fn merge(&mut self, other: &DocState) {
        for (a, b) in self.acc_ml.iter_mut().zip(&other.acc_ml) {
            *a += b;
        }
        self.num_samples += other.num_samples;
    }

    /// θ estimate over the allowed labels, in allowed order.
    pub fn theta(&self, alpha: &[f64]) -> Vec<f64> {
        estimate_theta(&self.acc_ml, self.num_samples, alpha, self.tokens.len())
    }
}

/// `θ_l = (acc_l/S + α_l) / (N + Σα)` over the active labels.
pub fn estimate_theta(acc: &[f64], num_samples: usize, alpha: &[f64], num_tokens: usize) -> Vec<f64> {
    let alpha_sum: f64 = alpha.iter().sum();
    let denom = num_tokens as f64 + alpha_sum;
    let s = num_samples.max(1) as f64;
    acc.iter().zip(alpha).map(|(&a, &al)| (a / s + al) / denom).collect()
}
