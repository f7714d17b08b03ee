#![allow(dead_code)]

pub mod oracle;

use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use subset_llda::{Corpus, SparseDocument};

/// Shape of a generated corpus. Label `l` emits features from a window of
/// `window` ids starting at `l * stride mod V`.
#[derive(Debug, Clone, Copy)]
pub struct Synth {
    pub train_docs: usize,
    pub test_docs: usize,
    pub features: usize,
    pub labels: usize,
    pub labels_per_doc: usize,
    pub tokens_per_doc: usize,
    pub window: usize,
    pub seed: u64,
}

impl Default for Synth {
    fn default() -> Self {
        Synth {
            train_docs: 200,
            test_docs: 40,
            features: 300,
            labels: 20,
            labels_per_doc: 2,
            tokens_per_doc: 40,
            window: 12,
            seed: 7,
        }
    }
}

impl Synth {
    fn document(&self, id: usize, rng: &mut ChaCha8Rng) -> SparseDocument {
        let all: Vec<u32> = (0..self.labels as u32).collect();
        let mut labels: Vec<u32> = all
            .choose_multiple(rng, self.labels_per_doc.min(self.labels))
            .copied()
            .collect();
        labels.sort_unstable();
        let stride = (self.features / self.labels).max(1);
        let mut counts = vec![0u32; self.features];
        for _ in 0..self.tokens_per_doc {
            let l = labels[rng.gen_range(0..labels.len())] as usize;
            let v = (l * stride + rng.gen_range(0..self.window)) % self.features;
            counts[v] += 1;
        }
        let features = counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(v, &c)| (v as u32, c as f64))
            .collect();
        SparseDocument::new(id, features, labels, 1000)
    }

    /// `(train, test)`; every document carries labels.
    pub fn generate(&self) -> (Corpus, Corpus) {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let train = (0..self.train_docs).map(|i| self.document(i, &mut rng)).collect();
        let test = (0..self.test_docs).map(|i| self.document(i, &mut rng)).collect();
        (
            Corpus::from_documents(train, self.features, self.labels),
            Corpus::from_documents(test, self.features, self.labels),
        )
    }
}

pub fn write_corpus(dir: &Path, name: &str, corpus: &Corpus) -> std::path::PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, corpus.to_repo_format()).unwrap();
    path
}
