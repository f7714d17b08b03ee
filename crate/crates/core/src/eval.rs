//! Multi-label evaluation: rcut thresholding, Micro-F and Macro-F on the
//! resulting hard assignments, precision@k and propensity scored
//! precision@k on the rankings, and a two-proportion z-test for comparing
//! two runs.
//!
//! Rankings are label lists in rank order; scores themselves never enter
//! any measure.

use std::fmt::Write as _;

use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};

/// rcut threshold: round-half-up of the training cardinality, at least 1.
pub fn rcut_threshold(train_cardinality: f64) -> usize {
    ((train_cardinality + 0.5).floor() as usize).max(1)
}

/// Top-`t` labels of every ranking (fewer when a ranking is shorter).
pub fn rcut_assign(rankings: &[Vec<u32>], train_cardinality: f64) -> Vec<Vec<u32>> {
    let t = rcut_threshold(train_cardinality);
    rankings.iter().map(|r| r[..t.min(r.len())].to_vec()).collect()
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Confusion {
    pub tp: u64,
    pub fp: u64,
    pub fn_: u64,
}

impl Confusion {
    pub fn f1(&self) -> f64 {
        let denom = 2 * self.tp + self.fp + self.fn_;
        if denom == 0 {
            0.0
        } else {
            2.0 * self.tp as f64 / denom as f64
        }
    }
}

/// Per-label confusion counts; labels at or beyond `num_labels` are ignored.
pub fn label_confusion(assigned: &[Vec<u32>], gold: &[Vec<u32>], num_labels: usize) -> Vec<Confusion> {
    let mut c = vec![Confusion::default(); num_labels];
    for (a, g) in assigned.iter().zip(gold) {
        for &l in a {
            if let Some(x) = c.get_mut(l as usize) {
                if g.contains(&l) {
                    x.tp += 1;
                } else {
                    x.fp += 1;
                }
            }
        }
        for &l in g {
            if !a.contains(&l) {
                if let Some(x) = c.get_mut(l as usize) {
                    x.fn_ += 1;
                }
            }
        }
    }
    c
}

/// Pooled micro-F1: `2TP / (2TP + FP + FN)` over all (document, label) pairs.
pub fn micro_f(assigned: &[Vec<u32>], gold: &[Vec<u32>]) -> f64 {
    let mut total = Confusion::default();
    for (a, g) in assigned.iter().zip(gold) {
        let tp = a.iter().filter(|l| g.contains(l)).count() as u64;
        total.tp += tp;
        total.fp += a.len() as u64 - tp;
        total.fn_ += g.len() as u64 - tp;
    }
    total.f1()
}

/// Per-label F1 averaged with weights proportional to each label's number
/// of gold occurrences.
pub fn micro_f_weighted(assigned: &[Vec<u32>], gold: &[Vec<u32>], num_labels: usize) -> f64 {
    let conf = label_confusion(assigned, gold, num_labels);
    let support: u64 = conf.iter().map(|c| c.tp + c.fn_).sum();
    if support == 0 {
        return 0.0;
    }
    conf.iter().map(|c| (c.tp + c.fn_) as f64 * c.f1()).sum::<f64>() / support as f64
}

/// Mean per-label F1 over all `num_labels` labels; labels never predicted
/// nor present count as 0.
pub fn macro_f(assigned: &[Vec<u32>], gold: &[Vec<u32>], num_labels: usize) -> f64 {
    if num_labels == 0 {
        return 0.0;
    }
    let conf = label_confusion(assigned, gold, num_labels);
    conf.iter().map(Confusion::f1).sum::<f64>() / num_labels as f64
}

fn hits_at_k(ranking: &[u32], gold: &[u32], k: usize) -> usize {
    ranking.iter().take(k).filter(|l| gold.contains(l)).count()
}

pub fn precision_at_k(rankings: &[Vec<u32>], gold: &[Vec<u32>], k: usize) -> f64 {
    if rankings.is_empty() || k == 0 {
        return 0.0;
    }
    let hits: usize = rankings.iter().zip(gold).map(|(r, g)| hits_at_k(r, g, k)).sum();
    hits as f64 / (k * rankings.len()) as f64
}

/// Inverse propensities of the label-frequency model
/// `p_l = 1 / (1 + C·e^{−A·ln(N_l + B)})`, `C = (ln N − 1)(B + 1)^A`.
#[derive(Debug, Clone, PartialEq)]
pub struct PropensityModel {
    pub propensities: Vec<f64>,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub label_counts: Vec<u32>,
    pub num_docs: usize,
}

pub const DEFAULT_PROPENSITY_A: f64 = 0.55;
pub const DEFAULT_PROPENSITY_B: f64 = 1.5;

impl PropensityModel {
    pub fn new(label_counts: &[u32], num_docs: usize, a: f64, b: f64) -> Self {
        let c = ((num_docs as f64).ln() - 1.0) * (b + 1.0).powf(a);
        let propensities = label_counts.iter().map(|&n| propensity(n as f64, c, a, b)).collect();
        PropensityModel {
            propensities,
            a,
            b,
            c,
            label_counts: label_counts.to_vec(),
            num_docs,
        }
    }

    /// Every label with propensity 1.
    pub fn unit(num_labels: usize) -> Self {
        PropensityModel {
            propensities: vec![1.0; num_labels],
            a: 0.0,
            b: 0.0,
            c: 0.0,
            label_counts: vec![0; num_labels],
            num_docs: 0,
        }
    }

    pub fn get(&self, l: u32) -> f64 {
        self.propensities.get(l as usize).copied().unwrap_or(1.0)
    }
}

pub fn propensity(label_count: f64, c: f64, a: f64, b: f64) -> f64 {
    1.0 / (1.0 + c * (-a * (label_count + b).ln()).exp())
}

pub fn ps_precision_at_k(rankings: &[Vec<u32>], gold: &[Vec<u32>], prop: &PropensityModel, k: usize) -> f64 {
    if rankings.is_empty() || k == 0 {
        return 0.0;
    }
    let sum: f64 = rankings
        .iter()
        .zip(gold)
        .map(|(r, g)| {
            r.iter()
                .take(k)
                .filter(|l| g.contains(l))
                .map(|&l| 1.0 / prop.get(l))
                .sum::<f64>()
                / k as f64
        })
        .sum();
    sum / rankings.len() as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MicroVariant {
    Pooled,
    Weighted,
}

#[derive(Debug, Clone)]
pub struct EvalOptions {
    pub ks: Vec<usize>,
    pub micro_variant: MicroVariant,
    /// Count empty-gold test documents in Micro/Macro-F (as false positives).
    pub include_empty: bool,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            ks: vec![1, 5],
            micro_variant: MicroVariant::Pooled,
            include_empty: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub micro_f: f64,
    pub macro_f: f64,
    pub precision: Vec<(usize, f64)>,
    pub ps_precision: Vec<(usize, f64)>,
    pub rcut_t: usize,
    pub num_docs: usize,
    pub num_skipped: usize,
    /// Per evaluated document, correct labels in the top k.
    pub hits_at: Vec<(usize, Vec<u32>)>,
    /// Per evaluated document, (correct, assigned) under rcut.
    pub rcut_hits: Vec<(u32, u32)>,
}

/// Evaluate rankings against gold label sets. Documents without gold labels
/// are skipped for ranking measures, and for Micro/Macro-F unless
/// `include_empty` is set.
pub fn evaluate(
    rankings: &[Vec<u32>],
    gold: &[Vec<u32>],
    num_labels: usize,
    train_cardinality: f64,
    prop: &PropensityModel,
    opts: &EvalOptions,
) -> Result<EvalReport> {
    if rankings.len() != gold.len() {
        return Err(Error::Dimension(format!(
            "{} rankings for {} gold documents",
            rankings.len(),
            gold.len()
        )));
    }
    if opts.ks.iter().any(|&k| k == 0) {
        return Err(Error::Config("k must be at least 1".into()));
    }
    let keep: Vec<usize> = (0..gold.len()).filter(|&i| !gold[i].is_empty()).collect();
    let r: Vec<Vec<u32>> = keep.iter().map(|&i| rankings[i].clone()).collect();
    let g: Vec<Vec<u32>> = keep.iter().map(|&i| gold[i].clone()).collect();

    let (fr, fg) = if opts.include_empty {
        (rankings.to_vec(), gold.to_vec())
    } else {
        (r.clone(), g.clone())
    };
    let assigned = rcut_assign(&fr, train_cardinality);
    let micro = match opts.micro_variant {
        MicroVariant::Pooled => micro_f(&assigned, &fg),
        MicroVariant::Weighted => micro_f_weighted(&assigned, &fg, num_labels),
    };
    let rcut_hits = assigned
        .iter()
        .zip(&fg)
        .map(|(a, gl)| (a.iter().filter(|l| gl.contains(l)).count() as u32, a.len() as u32))
        .collect();

    Ok(EvalReport {
        micro_f: micro,
        macro_f: macro_f(&assigned, &fg, num_labels),
        precision: opts.ks.iter().map(|&k| (k, precision_at_k(&r, &g, k))).collect(),
        ps_precision: opts
            .ks
            .iter()
            .map(|&k| (k, ps_precision_at_k(&r, &g, prop, k)))
            .collect(),
        rcut_t: rcut_threshold(train_cardinality),
        num_docs: r.len(),
        num_skipped: gold.len() - r.len(),
        hits_at: opts
            .ks
            .iter()
            .map(|&k| (k, r.iter().zip(&g).map(|(x, y)| hits_at_k(x, y, k) as u32).collect()))
            .collect(),
        rcut_hits,
    })
}

impl EvalReport {
    /// `key=value` lines: micro_f, macro_f, p@k, psp@k, rcut_t.
    pub fn to_kv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "micro_f={:.6}", self.micro_f);
        let _ = writeln!(out, "macro_f={:.6}", self.macro_f);
        for (k, v) in &self.precision {
            let _ = writeln!(out, "p@{k}={v:.6}");
        }
        for (k, v) in &self.ps_precision {
            let _ = writeln!(out, "psp@{k}={v:.6}");
        }
        let _ = writeln!(out, "rcut_t={}", self.rcut_t);
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "documents evaluated: {} (skipped without gold labels: {})",
            self.num_docs, self.num_skipped
        );
        let _ = writeln!(out, "rcut threshold:      {}", self.rcut_t);
        let _ = writeln!(out, "Micro-F              {:.4}", self.micro_f);
        let _ = writeln!(out, "Macro-F              {:.4}", self.macro_f);
        for (k, v) in &self.precision {
            let _ = writeln!(out, "{:<20} {v:.4}", format!("precision@{k}"));
        }
        for (k, v) in &self.ps_precision {
            let _ = writeln!(out, "{:<20} {v:.4}", format!("PS precision@{k}"));
        }
        out
    }

    fn successes(&self, measure: Measure) -> Option<(u64, u64)> {
        match measure {
            Measure::PrecisionAt(k) => self
                .hits_at
                .iter()
                .find(|(kk, _)| *kk == k)
                .map(|(_, h)| (h.iter().map(|&x| x as u64).sum(), (h.len() * k) as u64)),
            Measure::Rcut => Some((
                self.rcut_hits.iter().map(|&(h, _)| h as u64).sum(),
                self.rcut_hits.iter().map(|&(_, n)| n as u64).sum(),
            )),
        }
    }
}

/// Unit of analysis for the z-test: hits in the top k, or correct labels
/// among the rcut assignments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    PrecisionAt(usize),
    Rcut,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Significant,
    NotSignificant,
    Undefined,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZTest {
    pub z: f64,
    pub p_value: f64,
    pub verdict: Verdict,
}

/// Two-sided pooled two-proportion z-test of `x1/n1` against `x2/n2`.
pub fn two_proportion_z(x1: u64, n1: u64, x2: u64, n2: u64, level: f64) -> ZTest {
    let undefined = ZTest {
        z: f64::NAN,
        p_value: f64::NAN,
        verdict: Verdict::Undefined,
    };
    if n1 == 0 || n2 == 0 {
        return undefined;
    }
    let (p1, p2) = (x1 as f64 / n1 as f64, x2 as f64 / n2 as f64);
    let pooled = (x1 + x2) as f64 / (n1 + n2) as f64;
    let se = (pooled * (1.0 - pooled) * (1.0 / n1 as f64 + 1.0 / n2 as f64)).sqrt();
    if !(se > 0.0) {
        return undefined;
    }
    let z = (p1 - p2) / se;
    let normal = Normal::standard();
    let p_value = 2.0 * normal.sf(z.abs());
    ZTest {
        z,
        p_value,
        verdict: if p_value < level {
            Verdict::Significant
        } else {
            Verdict::NotSignificant
        },
    }
}

pub fn z_test(a: &EvalReport, b: &EvalReport, measure: Measure, level: f64) -> ZTest {
    match (a.successes(measure), b.successes(measure)) {
        (Some((x1, n1)), Some((x2, n2))) => two_proportion_z(x1, n1, x2, n2, level),
        _ => two_proportion_z(0, 0, 0, 0, level),
    }
}
