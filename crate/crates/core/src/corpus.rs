//! Sparse multi-label datasets in the extreme classification repository
//! format, and their conversion into feature tokens.
//!
//! ```text
//! M V L
//! l1,l2,...,lk f1:v1 f2:v2 ...
//! ```
//!
//! Label ids and feature ids are zero based and kept exactly as written in
//! the file.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use crate::error::{Error, Result};

/// Tokens emitted for a single feature are capped at this value by default.
pub const DEFAULT_MAX_TOKENS_PER_FEATURE: u32 = 1_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Train,
    Test,
}

#[derive(Debug, Clone, Copy)]
pub struct LoadOptions {
    pub role: Role,
    pub max_tokens_per_feature: u32,
}

impl LoadOptions {
    pub fn new(role: Role) -> Self {
        LoadOptions {
            role,
            max_tokens_per_feature: DEFAULT_MAX_TOKENS_PER_FEATURE,
        }
    }
}

/// Number of tokens a feature value turns into: round half up, with any
/// strictly positive value contributing at least one token.
pub fn tokenize(value: f64) -> u32 {
    if value <= 0.0 || value.is_nan() {
        0
    } else if value < 0.5 {
        1
    } else {
        let rounded = (value + 0.5).floor();
        if rounded >= u32::MAX as f64 {
            u32::MAX
        } else {
            rounded as u32
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SparseDocument {
    pub doc_id: usize,
    /// `(feature_id, value)` sorted by feature id, values strictly positive.
    pub features: Vec<(u32, f64)>,
    /// Token count per entry of `features`.
    pub counts: Vec<u32>,
    /// Sorted, deduplicated label ids.
    pub labels: Vec<u32>,
}

impl SparseDocument {
    pub fn new(doc_id: usize, features: Vec<(u32, f64)>, labels: Vec<u32>, cap: u32) -> Self {
        let counts = features.iter().map(|&(_, v)| tokenize(v).min(cap)).collect();
        SparseDocument {
            doc_id,
            features,
            counts,
            labels,
        }
    }

    /// N_m: total number of feature tokens.
    pub fn token_count(&self) -> usize {
        self.counts.iter().map(|&c| c as usize).sum()
    }

    /// Token stream in ascending feature order with repeats contiguous.
    pub fn tokens(&self) -> impl Iterator<Item = u32> + '_ {
        self.features
            .iter()
            .zip(&self.counts)
            .flat_map(|(&(f, _), &c)| std::iter::repeat(f).take(c as usize))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Corpus {
    pub documents: Vec<SparseDocument>,
    pub num_features: usize,
    pub num_labels: usize,
    /// Number of documents per label.
    pub label_counts: Vec<u32>,
    /// Empty-label documents removed at load (training role only).
    pub dropped_empty: usize,
}

impl Corpus {
    pub fn from_documents(documents: Vec<SparseDocument>, num_features: usize, num_labels: usize) -> Self {
        let mut label_counts = vec![0u32; num_labels];
        for d in &documents {
            for &l in &d.labels {
                label_counts[l as usize] += 1;
            }
        }
        Corpus {
            documents,
            num_features,
            num_labels,
            label_counts,
            dropped_empty: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    /// f_l: fraction of documents containing label l.
    pub fn label_frequencies(&self) -> Vec<f64> {
        let m = self.documents.len().max(1) as f64;
        self.label_counts.iter().map(|&c| c as f64 / m).collect()
    }

    /// Mean number of labels per document.
    pub fn cardinality(&self) -> f64 {
        if self.documents.is_empty() {
            return 0.0;
        }
        let total: usize = self.documents.iter().map(|d| d.labels.len()).sum();
        total as f64 / self.documents.len() as f64
    }

    pub fn stats(&self) -> CorpusStats {
        let m = self.documents.len();
        let nnz: usize = self.documents.iter().map(|d| d.features.len()).sum();
        let tokens: usize = self.documents.iter().map(|d| d.token_count()).sum();
        let label_total: u64 = self.label_counts.iter().map(|&c| c as u64).sum();
        CorpusStats {
            num_documents: m,
            num_features: self.num_features,
            num_labels: self.num_labels,
            cardinality: self.cardinality(),
            avg_label_frequency: if self.num_labels == 0 {
                0.0
            } else {
                label_total as f64 / self.num_labels as f64
            },
            density: if m == 0 || self.num_features == 0 {
                0.0
            } else {
                nnz as f64 / (m as f64 * self.num_features as f64)
            },
            num_tokens: tokens,
            dropped_empty: self.dropped_empty,
        }
    }

    /// Render in the repository format. Values print in shortest round-trip
    /// form, so reloading yields the same corpus.
    pub fn to_repo_format(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{} {} {}",
            self.documents.len(),
            self.num_features,
            self.num_labels
        );
        for d in &self.documents {
            let labels: Vec<String> = d.labels.iter().map(|l| l.to_string()).collect();
            out.push_str(&labels.join(","));
            for &(f, v) in &d.features {
                let _ = write!(out, " {f}:{v}");
            }
            out.push('\n');
        }
        out
    }

    pub fn load(path: impl AsRef<Path>, options: LoadOptions) -> Result<Corpus> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        Corpus::parse(BufReader::new(file), options).map_err(|e| match e {
            Error::Io { source, .. } => Error::io(path, source),
            other => other,
        })
    }

    pub fn parse<R: Read>(reader: BufReader<R>, options: LoadOptions) -> Result<Corpus> {
        let mut lines = reader.lines();
        let header = match lines.next() {
            Some(line) => line.map_err(|e| Error::io("<input>", e))?,
            None => {
                return Err(Error::Parse {
                    line: 1,
                    msg: "missing header".into(),
                })
            }
        };
        let (declared, num_features, num_labels) = parse_header(&header)?;

        let mut documents = Vec::with_capacity(declared);
        let mut dropped = 0;
        let mut seen = 0usize;
        for (idx, line) in lines.enumerate() {
            let line_no = idx + 2;
            let line = line.map_err(|e| Error::io("<input>", e))?;
            let line = line.strip_suffix('\r').unwrap_or(&line);
            if line.trim().is_empty() && seen >= declared {
                continue;
            }
            seen += 1;
            let (features, labels) = parse_line(line, line_no, num_features, num_labels)?;
            if labels.is_empty() && options.role == Role::Train {
                dropped += 1;
                continue;
            }
            let doc_id = documents.len();
            documents.push(SparseDocument::new(
                doc_id,
                features,
                labels,
                options.max_tokens_per_feature,
            ));
        }
        if seen != declared {
            return Err(Error::Parse {
                line: 1,
                msg: format!("header declares {declared} documents, file has {seen}"),
            });
        }

        let mut corpus = Corpus::from_documents(documents, num_features, num_labels);
        corpus.dropped_empty = dropped;
        Ok(corpus)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusStats {
    pub num_documents: usize,
    pub num_features: usize,
    pub num_labels: usize,
    pub cardinality: f64,
    /// Mean over all labels of the number of documents carrying the label.
    pub avg_label_frequency: f64,
    /// Fraction of nonzero entries in the document-feature matrix.
    pub density: f64,
    pub num_tokens: usize,
    pub dropped_empty: usize,
}

fn parse_header(header: &str) -> Result<(usize, usize, usize)> {
    let err = |msg: &str| Error::Parse {
        line: 1,
        msg: format!("{msg}: {header:?}"),
    };
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 3 {
        return Err(err("header must be `M V L`"));
    }
    let mut parsed = [0usize; 3];
    for (slot, field) in parsed.iter_mut().zip(&fields) {
        *slot = field.parse().map_err(|_| err("non-integer header field"))?;
    }
    Ok((parsed[0], parsed[1], parsed[2]))
}

type ParsedLine = (Vec<(u32, f64)>, Vec<u32>);

fn parse_line(line: &str, line_no: usize, v: usize, l: usize) -> Result<ParsedLine> {
    let mut parts = line.split(' ');
    let first = parts.next().unwrap_or("");

    let mut labels = Vec::new();
    let mut feature_tokens: Vec<&str> = Vec::new();
    if first.contains(':') {
        feature_tokens.push(first);
    } else {
        for tok in first.split(',').filter(|s| !s.is_empty()) {
            let id: u64 = tok.trim().parse().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("bad label id {tok:?}"),
            })?;
            if id as usize >= l {
                return Err(Error::Bounds {
                    line: line_no,
                    kind: "label",
                    id,
                    limit: l,
                });
            }
            labels.push(id as u32);
        }
    }
    feature_tokens.extend(parts.filter(|s| !s.is_empty()));

    let mut features = Vec::with_capacity(feature_tokens.len());
    for tok in feature_tokens {
        let (fid, val) = tok.split_once(':').ok_or_else(|| Error::Parse {
            line: line_no,
            msg: format!("expected feature:value, got {tok:?}"),
        })?;
        let fid: u64 = fid.parse().map_err(|_| Error::Parse {
            line: line_no,
            msg: format!("bad feature id {fid:?}"),
        })?;
        if fid as usize >= v {
            return Err(Error::Bounds {
                line: line_no,
                kind: "feature",
                id: fid,
                limit: v,
            });
        }
        let value: f64 = val.parse().map_err(|_| Error::Value {
            line: line_no,
            value: val.to_string(),
        })?;
        if !value.is_finite() || value < 0.0 {
            return Err(Error::Value {
                line: line_no,
                value: val.to_string(),
            });
        }
        if value > 0.0 {
            features.push((fid as u32, value));
        }
    }

    features.sort_by_key(|&(f, _)| f);
    if features.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(Error::Parse {
            line: line_no,
            msg: "duplicate feature id".into(),
        });
    }
    labels.sort_unstable();
    labels.dedup();
    Ok((features, labels))
}
