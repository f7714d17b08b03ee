//! tf-idf nearest-neighbour retrieval over the training corpus, used to
//! restrict the label space at prediction time.
//!
//! Weights are raw token counts times `ln(M / df)`, L2-normalized per
//! document. Queries are weighted with the training idf; features never seen
//! in training get weight zero.

use std::cmp::Ordering;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::corpus::{Corpus, SparseDocument};
use crate::error::{Error, Result};

pub const DEFAULT_NEIGHBORS: usize = 10;

#[derive(Debug, Clone)]
pub struct TfIdfIndex {
    pub idf: Vec<f64>,
    /// Unit-norm sparse vectors, one per training document.
    pub documents: Vec<Vec<(u32, f64)>>,
    /// Documents whose tf-idf vector is identically zero.
    pub zero_documents: Vec<bool>,
    /// feature → (doc, weight); postings are sorted by doc id.
    pub postings: Vec<Vec<(u32, f64)>>,
}

fn normalize(mut v: Vec<(u32, f64)>) -> Vec<(u32, f64)> {
    v.retain(|&(_, w)| w != 0.0);
    let norm = v.iter().map(|&(_, w)| w * w).sum::<f64>().sqrt();
    if norm > 0.0 {
        for (_, w) in v.iter_mut() {
            *w /= norm;
        }
    }
    v
}

impl TfIdfIndex {
    pub fn build(train: &Corpus) -> Result<Self> {
        if train.is_empty() {
            return Err(Error::Config("cannot index an empty training corpus".into()));
        }
        let m = train.len() as f64;
        let mut df = vec![0u32; train.num_features];
        for d in &train.documents {
            for &(f, _) in &d.features {
                df[f as usize] += 1;
            }
        }
        let idf: Vec<f64> = df
            .iter()
            .map(|&n| if n == 0 { 0.0 } else { (m / n as f64).ln() })
            .collect();

        let mut index = TfIdfIndex {
            idf,
            documents: Vec::with_capacity(train.len()),
            zero_documents: Vec::with_capacity(train.len()),
            postings: vec![Vec::new(); train.num_features],
        };
        for (doc_idx, d) in train.documents.iter().enumerate() {
            let v = index.weigh(d);
            index.zero_documents.push(v.is_empty());
            for &(f, w) in &v {
                index.postings[f as usize].push((doc_idx as u32, w));
            }
            index.documents.push(v);
        }
        Ok(index)
    }

    pub fn num_documents(&self) -> usize {
        self.documents.len()
    }

    /// tf-idf transform and L2 normalization of an arbitrary document.
    pub fn weigh(&self, doc: &SparseDocument) -> Vec<(u32, f64)> {
        let raw = doc
            .features
            .iter()
            .zip(&doc.counts)
            .map(|(&(f, _), &c)| {
                let idf = self.idf.get(f as usize).copied().unwrap_or(0.0);
                (f, c as f64 * idf)
            })
            .collect();
        normalize(raw)
    }

    /// Cosine similarity of the query against every training document.
    pub fn similarities(&self, query: &[(u32, f64)]) -> Vec<f64> {
        let mut scores = vec![0.0; self.documents.len()];
        for &(f, qw) in query {
            if let Some(list) = self.postings.get(f as usize) {
                for &(d, w) in list {
                    scores[d as usize] += qw * w;
                }
            }
        }
        scores
    }

    /// The `n` most similar training documents, descending similarity, ties
    /// by ascending doc id. Empty when the query has no nonzero weight.
    pub fn nearest_neighbors(&self, query: &SparseDocument, n: usize) -> Vec<(u32, f64)> {
        let q = self.weigh(query);
        if q.is_empty() || n == 0 {
            return Vec::new();
        }
        let scores = self.similarities(&q);
        top_n(&scores, n)
    }

    pub fn candidate_labels(&self, train: &Corpus, query: &SparseDocument, n: usize) -> CandidateSet {
        let neighbors = self.nearest_neighbors(query, n);
        if neighbors.is_empty() {
            let labels = (0..train.num_labels as u32)
                .filter(|&l| train.label_counts[l as usize] > 0)
                .collect();
            return CandidateSet {
                test_doc: query.doc_id,
                neighbors,
                labels,
                fallback: true,
            };
        }
        let mut labels: Vec<u32> = neighbors
            .iter()
            .flat_map(|&(d, _)| train.documents[d as usize].labels.iter().copied())
            .collect();
        labels.sort_unstable();
        labels.dedup();
        CandidateSet {
            test_doc: query.doc_id,
            neighbors,
            labels,
            fallback: false,
        }
    }
}

fn rank_order(a: &(u32, f64), b: &(u32, f64)) -> Ordering {
    b.1.partial_cmp(&a.1).unwrap_or(Ordering::Equal).then(a.0.cmp(&b.0))
}

fn top_n(scores: &[f64], n: usize) -> Vec<(u32, f64)> {
    let mut all: Vec<(u32, f64)> = scores.iter().enumerate().map(|(i, &s)| (i as u32, s)).collect();
    let n = n.min(all.len());
    if n < all.len() {
        all.select_nth_unstable_by(n - 1, rank_order);
        all.truncate(n);
    }
    all.sort_by(rank_order);
    all
}

/// Restricted label space for one test document.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateSet {
    pub test_doc: usize,
    /// Neighbours in descending similarity.
    pub neighbors: Vec<(u32, f64)>,
    /// Sorted union of the neighbours' label sets.
    pub labels: Vec<u32>,
    /// The query had no usable features and all observed labels were used.
    pub fallback: bool,
}

impl CandidateSet {
    /// `doc_id TAB neighbor:sim,... TAB label,label,...`
    pub fn to_line(&self) -> String {
        let mut out = String::new();
        let _ = write!(out, "{}\t", self.test_doc);
        let neighbors: Vec<String> = self.neighbors.iter().map(|(d, s)| format!("{d}:{s:.6}")).collect();
        out.push_str(&neighbors.join(","));
        out.push('\t');
        let labels: Vec<String> = self.labels.iter().map(|l| l.to_string()).collect();
        out.push_str(&labels.join(","));
        out
    }
}

pub fn write_candidates(sets: &[CandidateSet]) -> String {
    let mut out = String::new();
    for s in sets {
        out.push_str(&s.to_line());
        out.push('\n');
    }
    out
}

pub fn parse_candidates(text: &str) -> Result<Vec<CandidateSet>> {
    let mut sets = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let perr = |msg: String| Error::Parse { line: line_no, msg };
        let mut cols = line.split('\t');
        let doc = cols
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| perr("bad doc id".into()))?;
        let neigh_col = cols.next().ok_or_else(|| perr("missing neighbor column".into()))?;
        let label_col = cols.next().ok_or_else(|| perr("missing label column".into()))?;
        let mut neighbors = Vec::new();
        for item in neigh_col.split(',').filter(|s| !s.is_empty()) {
            let (d, s) = item
                .split_once(':')
                .ok_or_else(|| perr(format!("bad neighbor {item:?}")))?;
            let d = d.parse().map_err(|_| perr(format!("bad neighbor {item:?}")))?;
            let s = s.parse().map_err(|_| perr(format!("bad similarity {item:?}")))?;
            neighbors.push((d, s));
        }
        let mut labels = Vec::new();
        for item in label_col.split(',').filter(|s| !s.is_empty()) {
            labels.push(item.parse().map_err(|_| perr(format!("bad label {item:?}")))?);
        }
        labels.sort_unstable();
        labels.dedup();
        let fallback = neighbors.is_empty();
        sets.push(CandidateSet {
            test_doc: doc,
            neighbors,
            labels,
            fallback,
        });
    }
    Ok(sets)
}

pub fn load_candidates(path: impl AsRef<Path>) -> Result<Vec<CandidateSet>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_candidates(&text)
}
