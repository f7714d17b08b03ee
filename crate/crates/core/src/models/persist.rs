//! Model directories.
//!
//! ```text
//! model/
//!   meta        key=value, first line `magic=sllda-model`
//!   counts      `label feature mass` per line
//!   freq        `label count frequency` per line
//!   aux/meta    optional Dep-LDA auxiliary model
//!   aux/counts  `topic label mass`
//! ```
//!
//! Accumulated masses below [`SAVE_THRESHOLD`] are not written. Floats are
//! printed in shortest round-trip form, so load→save reproduces a file
//! byte for byte. Directories are staged next to the target and renamed
//! into place.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use super::dep::DepAuxModel;
use super::TrainedModel;
use crate::error::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;
pub const SAVE_THRESHOLD: f64 = 1e-8;

const MODEL_MAGIC: &str = "sllda-model";
const AUX_MAGIC: &str = "sllda-aux";

fn sha256_hex(data: &str) -> String {
    Sha256::digest(data.as_bytes())
        .iter()
        .fold(String::with_capacity(64), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
}

fn render_counts(counts: &[(u32, u32, f64)]) -> String {
    let mut out = String::new();
    for &(a, b, x) in counts {
        if x >= SAVE_THRESHOLD {
            let _ = writeln!(out, "{a} {b} {x}");
        }
    }
    out
}

fn render_meta(magic: &str, fields: &[(&str, String)]) -> String {
    let mut out = format!("magic={magic}\n");
    for (k, v) in fields {
        let _ = writeln!(out, "{k}={v}");
    }
    out
}

/// Write `path` through a temporary sibling and rename on success.
pub fn write_atomic(path: impl AsRef<Path>, contents: &str) -> Result<()> {
    let path = path.as_ref();
    let tmp = tmp_sibling(path);
    fs::write(&tmp, contents).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        Error::io(path, e)
    })
}

fn tmp_sibling(path: &Path) -> PathBuf {
    let mut name = path.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(format!(".tmp-{}", std::process::id()));
    path.with_file_name(name)
}

/// Save a model and optional auxiliary model into directory `dir`.
pub fn save_model(model: &TrainedModel, aux: Option<&DepAuxModel>, dir: impl AsRef<Path>) -> Result<()> {
    let dir = dir.as_ref();
    let counts = render_counts(&model.counts);
    let mut freq = String::new();
    let m = model.num_train_docs.max(1) as f64;
    for (l, &c) in model.label_counts.iter().enumerate() {
        let _ = writeln!(freq, "{l} {c} {}", c as f64 / m);
    }
    let meta = render_meta(
        MODEL_MAGIC,
        &[
            ("format_version", FORMAT_VERSION.to_string()),
            ("num_labels", model.num_labels.to_string()),
            ("num_features", model.num_features.to_string()),
            ("num_train_docs", model.num_train_docs.to_string()),
            ("num_samples", model.num_samples.to_string()),
            ("beta", model.beta.to_string()),
            ("train_alpha", model.train_alpha.to_string()),
            ("counts_sha256", sha256_hex(&counts)),
            ("freq_sha256", sha256_hex(&freq)),
        ],
    );

    let mut files = vec![("meta", meta), ("counts", counts), ("freq", freq)];
    if let Some(aux) = aux {
        let counts = render_counts(&aux.counts);
        let meta = render_meta(
            AUX_MAGIC,
            &[
                ("format_version", FORMAT_VERSION.to_string()),
                ("topics", aux.topics.to_string()),
                ("num_labels", aux.num_labels.to_string()),
                ("num_samples", aux.num_samples.to_string()),
                ("alpha", aux.alpha.to_string()),
                ("beta", aux.beta.to_string()),
                ("counts_sha256", sha256_hex(&counts)),
            ],
        );
        files.push(("aux/meta", meta));
        files.push(("aux/counts", counts));
    }

    let staging = tmp_sibling(dir);
    if staging.exists() {
        fs::remove_dir_all(&staging).map_err(|e| Error::io(&staging, e))?;
    }
    let result = (|| {
        fs::create_dir_all(staging.join("aux")).map_err(|e| Error::io(&staging, e))?;
        for (name, body) in &files {
            let p = staging.join(name);
            fs::write(&p, body).map_err(|e| Error::io(&p, e))?;
        }
        if aux.is_none() {
            let p = staging.join("aux");
            fs::remove_dir(&p).map_err(|e| Error::io(&p, e))?;
        }
        if dir.exists() {
            fs::remove_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        }
        fs::rename(&staging, dir).map_err(|e| Error::io(dir, e))
    })();
    if result.is_err() {
        let _ = fs::remove_dir_all(&staging);
    }
    result
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

struct Meta(BTreeMap<String, String>);

impl Meta {
    fn parse(text: &str, magic: &str) -> Result<Meta> {
        let mut lines = text.lines();
        match lines.next() {
            Some(first) if first == format!("magic={magic}") => {}
            _ => return Err(Error::Model(format!("missing or corrupted magic (expected {magic})"))),
        }
        let mut map = BTreeMap::new();
        for line in lines.filter(|l| !l.trim().is_empty()) {
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Model(format!("bad meta line {line:?}")))?;
            map.insert(k.to_string(), v.to_string());
        }
        let meta = Meta(map);
        let version: u32 = meta.get("format_version")?;
        if version != FORMAT_VERSION {
            return Err(Error::Model(format!(
                "format version {version}, this build reads {FORMAT_VERSION}"
            )));
        }
        Ok(meta)
    }

    fn get<T: std::str::FromStr>(&self, key: &str) -> Result<T> {
        self.0
            .get(key)
            .ok_or_else(|| Error::Model(format!("meta is missing {key}")))?
            .parse()
            .map_err(|_| Error::Model(format!("meta field {key} is malformed")))
    }

    fn verify(&self, key: &str, body: &str) -> Result<()> {
        let expected: String = self.get(key)?;
        if expected != sha256_hex(body) {
            return Err(Error::Model(format!("checksum mismatch ({key})")));
        }
        Ok(())
    }
}

fn parse_counts(text: &str, rows: usize, cols: usize) -> Result<Vec<(u32, u32, f64)>> {
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let mut it = line.split(' ');
        let bad = || Error::Model(format!("counts line {} malformed", idx + 1));
        let a: u32 = it.next().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
        let b: u32 = it.next().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
        let x: f64 = it.next().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
        if a as usize >= rows || b as usize >= cols {
            return Err(Error::Model(format!("counts line {} out of range", idx + 1)));
        }
        out.push((a, b, x));
    }
    Ok(out)
}

pub fn load_model(dir: impl AsRef<Path>) -> Result<TrainedModel> {
    let dir = dir.as_ref();
    let meta = Meta::parse(&read(&dir.join("meta"))?, MODEL_MAGIC)?;
    let counts_text = read(&dir.join("counts"))?;
    let freq_text = read(&dir.join("freq"))?;
    meta.verify("counts_sha256", &counts_text)?;
    meta.verify("freq_sha256", &freq_text)?;

    let num_labels: usize = meta.get("num_labels")?;
    let num_features: usize = meta.get("num_features")?;
    let counts = parse_counts(&counts_text, num_labels, num_features)?;
    let mut label_counts = vec![0u32; num_labels];
    for line in freq_text.lines() {
        let mut it = line.split(' ');
        let l: usize = it.next().and_then(|s| s.parse().ok()).unwrap_or(usize::MAX);
        let c: u32 = it
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Model(format!("bad freq line {line:?}")))?;
        *label_counts
            .get_mut(l)
            .ok_or_else(|| Error::Model(format!("bad freq line {line:?}")))? = c;
    }
    let num_samples: usize = meta.get("num_samples")?;
    if num_samples == 0 {
        return Err(Error::Model("model holds no samples".into()));
    }
    Ok(TrainedModel {
        num_labels,
        num_features,
        counts,
        num_samples,
        beta: meta.get("beta")?,
        train_alpha: meta.get("train_alpha")?,
        label_counts,
        num_train_docs: meta.get("num_train_docs")?,
        format_version: FORMAT_VERSION,
    })
}

/// Load `dir/aux`, or `None` when the model has no auxiliary part.
pub fn load_aux(dir: impl AsRef<Path>) -> Result<Option<DepAuxModel>> {
    let aux_dir = dir.as_ref().join("aux");
    if !aux_dir.join("meta").exists() {
        return Ok(None);
    }
    let meta = Meta::parse(&read(&aux_dir.join("meta"))?, AUX_MAGIC)?;
    let counts_text = read(&aux_dir.join("counts"))?;
    meta.verify("counts_sha256", &counts_text)?;
    let topics: usize = meta.get("topics")?;
    let num_labels: usize = meta.get("num_labels")?;
    let counts = parse_counts(&counts_text, topics, num_labels)?;
    DepAuxModel::from_counts(
        topics,
        num_labels,
        meta.get("alpha")?,
        meta.get("beta")?,
        counts,
        meta.get("num_samples")?,
    )
    .map(Some)
}
