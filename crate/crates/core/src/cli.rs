//! Command implementations behind the `sllda` binary.
//!
//! Results go to standard output (or the `--out` file); progress is logged
//! as `key=value` lines on standard error. Output files are written to a
//! temporary sibling and renamed, so a failed command leaves nothing behind.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{debug, info};

use crate::corpus::{Corpus, LoadOptions, Role, DEFAULT_MAX_TOKENS_PER_FEATURE};
use crate::error::{Error, Result};
use crate::eval::{
    self, EvalOptions, EvalReport, Measure, MicroVariant, PropensityModel, DEFAULT_PROPENSITY_A, DEFAULT_PROPENSITY_B,
};
use crate::models::{
    self, load_aux, load_model, parse_score_file, save_model, train_dep_aux, train_llda_observed, write_atomic,
    DepAuxConfig, DepAuxModel, Method, PredictionConfig, ScoreMatrix, TrainConfig, TrainedModel,
};
use crate::retrieval::{load_candidates, write_candidates, CandidateSet, TfIdfIndex};
use crate::sampler::Schedule;

#[derive(Debug, Parser)]
#[command(name = "sllda", version, about = "Labeled LDA with Prior/Dep/Subset prediction")]
pub struct Cli {
    /// Random seed; chain c of a run uses seed XOR c.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Worker threads for retrieval and prediction (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,

    /// Report format on standard output.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Kv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Train an LLDA model (and the Dep-LDA auxiliary model).
    Train(TrainArgs),
    /// Write the tf-idf nearest-neighbour candidate labels of each test document.
    Retrieve(RetrieveArgs),
    /// Score test documents with one of the four prediction methods.
    Predict(PredictArgs),
    /// Evaluate a score file against gold labels.
    Evaluate(EvaluateArgs),
    /// Train once, predict with every method over several seeds, print a table.
    Reproduce(ReproduceArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ScheduleArgs {
    #[arg(long, default_value_t = 200)]
    pub iterations: usize,
    #[arg(long = "burnin", default_value_t = 50)]
    pub burn_in: usize,
    #[arg(long, default_value_t = 5)]
    pub lag: usize,
    #[arg(long, default_value_t = 1)]
    pub chains: usize,
}

impl ScheduleArgs {
    fn schedule(&self) -> Schedule {
        Schedule {
            iterations: self.iterations,
            burn_in: self.burn_in,
            lag: self.lag,
        }
    }
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(long)]
    pub train: PathBuf,
    /// Output model directory.
    #[arg(long)]
    pub model: PathBuf,
    #[command(flatten)]
    pub schedule: ScheduleArgs,
    /// Training α_l = alpha_sum / L.
    #[arg(long, default_value_t = 50.0)]
    pub alpha_sum: f64,
    #[arg(long, default_value_t = 0.01)]
    pub beta: f64,
    /// Topics of the Dep-LDA auxiliary model.
    #[arg(long, default_value_t = 100)]
    pub topics: usize,
    #[arg(long, default_value_t = 0.1)]
    pub aux_alpha: f64,
    #[arg(long, default_value_t = 0.01)]
    pub aux_beta: f64,
    /// Do not train the Dep-LDA auxiliary model.
    #[arg(long)]
    pub no_aux: bool,
    #[arg(long, default_value_t = DEFAULT_MAX_TOKENS_PER_FEATURE)]
    pub max_tokens: u32,
}

#[derive(Debug, Args)]
pub struct RetrieveArgs {
    #[arg(long)]
    pub train: PathBuf,
    #[arg(long)]
    pub test: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 10)]
    pub neighbors: usize,
    #[arg(long, default_value_t = DEFAULT_MAX_TOKENS_PER_FEATURE)]
    pub max_tokens: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Llda,
    Prior,
    Dep,
    Subset,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Llda => Method::Llda,
            MethodArg::Prior => Method::Prior,
            MethodArg::Dep => Method::Dep,
            MethodArg::Subset => Method::Subset,
        }
    }
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub test: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = MethodArg::Subset)]
    pub method: MethodArg,
    /// Training data, used by `subset` to retrieve neighbours.
    #[arg(long)]
    pub train: Option<PathBuf>,
    /// Candidate file written by `retrieve`, or `all` for the full label set.
    #[arg(long)]
    pub candidates: Option<String>,
    #[arg(long, default_value_t = 10)]
    pub neighbors: usize,
    /// η for prior (default 50) and dep (default 120).
    #[arg(long)]
    pub eta: Option<f64>,
    /// Base prediction α_l = alpha_sum / L.
    #[arg(long, default_value_t = 30.0)]
    pub alpha_sum: f64,
    #[command(flatten)]
    pub schedule: ScheduleArgs,
    /// Auxiliary-LDA sweeps per iteration when inferring Dep-LDA's θ'.
    #[arg(long, default_value_t = 5)]
    pub dep_inner_sweeps: usize,
    #[arg(long, default_value_t = DEFAULT_MAX_TOKENS_PER_FEATURE)]
    pub max_tokens: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MicroArg {
    Pooled,
    Weighted,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub scores: PathBuf,
    /// Test data file holding the gold labels.
    #[arg(long)]
    pub gold: PathBuf,
    /// Model directory supplying training label statistics.
    #[arg(long, required_unless_present = "train")]
    pub model: Option<PathBuf>,
    /// Training data file, as an alternative to --model.
    #[arg(long)]
    pub train: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', default_values_t = vec![1usize, 5])]
    pub k: Vec<usize>,
    /// Second score file to compare against with z-tests.
    #[arg(long)]
    pub compare: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = MicroArg::Pooled)]
    pub micro_variant: MicroArg,
    #[arg(long, default_value_t = DEFAULT_PROPENSITY_A)]
    pub prop_a: f64,
    #[arg(long, default_value_t = DEFAULT_PROPENSITY_B)]
    pub prop_b: f64,
    /// Use propensity 1 for every label.
    #[arg(long)]
    pub unit_propensities: bool,
    /// Count test documents without gold labels in Micro/Macro-F.
    #[arg(long)]
    pub include_empty: bool,
    #[arg(long, default_value_t = 0.05)]
    pub level: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Dataset {
    Bibtex,
    Delicious,
}

impl Dataset {
    pub fn name(self) -> &'static str {
        match self {
            Dataset::Bibtex => "bibtex",
            Dataset::Delicious => "delicious",
        }
    }
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    #[arg(long, value_enum)]
    pub dataset: Dataset,
    /// Directory holding `<dataset>_train.txt` and `<dataset>_test.txt`.
    #[arg(long)]
    pub workdir: PathBuf,
    #[arg(long, default_value_t = 5)]
    pub runs: usize,
}

pub fn run(cli: Cli) -> Result<()> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let (seed, format) = (cli.seed, cli.format);
    pool.install(|| match cli.command {
        Command::Train(a) => cmd_train(&a, seed),
        Command::Retrieve(a) => cmd_retrieve(&a),
        Command::Predict(a) => cmd_predict(&a, seed),
        Command::Evaluate(a) => {
            let out = cmd_evaluate(&a, format)?;
            print!("{out}");
            Ok(())
        }
        Command::Reproduce(a) => {
            let table = cmd_reproduce(&a, seed)?;
            print!(
                "{}",
                match format {
                    Format::Text => table.to_text(),
                    Format::Kv => table.to_kv(),
                }
            );
            Ok(())
        }
    })
}

fn load(path: &Path, role: Role, max_tokens: u32) -> Result<Corpus> {
    let corpus = Corpus::load(
        path,
        LoadOptions {
            role,
            max_tokens_per_feature: max_tokens,
        },
    )?;
    let s = corpus.stats();
    info!(
        "corpus={} role={:?} docs={} features={} labels={} cardinality={:.4} avg_label_freq={:.2} tokens={} dropped_empty={}",
        path.display(),
        role,
        s.num_documents,
        s.num_features,
        s.num_labels,
        s.cardinality,
        s.avg_label_frequency,
        s.num_tokens,
        s.dropped_empty
    );
    Ok(corpus)
}

pub fn cmd_train(a: &TrainArgs, seed: u64) -> Result<()> {
    let train = load(&a.train, Role::Train, a.max_tokens)?;
    let cfg = TrainConfig {
        alpha_sum: a.alpha_sum,
        beta: a.beta,
        schedule: a.schedule.schedule(),
        chains: a.schedule.chains,
        seed,
    };
    cfg.schedule.validate()?;
    info!(
        "train iterations={} burn_in={} lag={} chains={} alpha={} beta={} samples_retained={}",
        cfg.schedule.iterations,
        cfg.schedule.burn_in,
        cfg.schedule.lag,
        cfg.chains,
        cfg.alpha_sum / train.num_labels as f64,
        cfg.beta,
        cfg.schedule.retained_samples()
    );
    let start = Instant::now();
    let model = train_llda_observed(&train, &cfg, &|chain, it, t| {
        debug!("sweep chain={chain} iteration={it} seconds={:.6}", t.as_secs_f64());
    })?;
    info!(
        "trained seconds={:.3} sweep_seconds_mean={:.6} samples_retained={} entries={}",
        start.elapsed().as_secs_f64(),
        start.elapsed().as_secs_f64() / (cfg.schedule.iterations * cfg.chains) as f64,
        model.num_samples / cfg.chains,
        model.counts.len()
    );

    let aux = if a.no_aux {
        None
    } else {
        let start = Instant::now();
        let aux = train_dep_aux(
            &train,
            &DepAuxConfig {
                topics: a.topics,
                alpha: a.aux_alpha,
                beta: a.aux_beta,
                schedule: cfg.schedule,
                seed,
            },
        )?;
        info!(
            "aux_trained topics={} seconds={:.3}",
            aux.topics,
            start.elapsed().as_secs_f64()
        );
        Some(aux)
    };
    save_model(&model, aux.as_ref(), &a.model)?;
    info!("model_saved path={}", a.model.display());
    Ok(())
}

pub fn cmd_retrieve(a: &RetrieveArgs) -> Result<()> {
    if a.neighbors == 0 {
        return Err(Error::Config("--neighbors must be at least 1".into()));
    }
    let train = load(&a.train, Role::Train, a.max_tokens)?;
    let test = load(&a.test, Role::Test, a.max_tokens)?;
    let start = Instant::now();
    let sets = retrieve(&train, &test, a.neighbors)?;
    log_candidates(&sets);
    info!("retrieved seconds={:.3}", start.elapsed().as_secs_f64());
    write_atomic(&a.out, &write_candidates(&sets))
}

pub fn retrieve(train: &Corpus, test: &Corpus, neighbors: usize) -> Result<Vec<CandidateSet>> {
    use rayon::prelude::*;
    let index = TfIdfIndex::build(train)?;
    Ok(test
        .documents
        .par_iter()
        .map(|d| index.candidate_labels(train, d, neighbors))
        .collect())
}

fn log_candidates(sets: &[CandidateSet]) {
    for s in sets {
        debug!(
            "candidates doc={} size={} fallback={}",
            s.test_doc,
            s.labels.len(),
            s.fallback
        );
    }
    let n = sets.len().max(1) as f64;
    let mean = sets.iter().map(|s| s.labels.len()).sum::<usize>() as f64 / n;
    let max = sets.iter().map(|s| s.labels.len()).max().unwrap_or(0);
    let fallbacks = sets.iter().filter(|s| s.fallback).count();
    info!("candidate_size_mean={mean:.3} candidate_size_max={max} fallbacks={fallbacks}");
}

pub fn cmd_predict(a: &PredictArgs, seed: u64) -> Result<()> {
    let method: Method = a.method.into();
    let model = load_model(&a.model)?;
    let cfg = PredictionConfig {
        method,
        eta: a.eta,
        alpha_sum: a.alpha_sum,
        neighbors: a.neighbors,
        schedule: a.schedule.schedule(),
        chains: a.schedule.chains,
        seed,
        dep_inner_sweeps: a.dep_inner_sweeps,
    };
    cfg.validate()?;
    if a.candidates.is_some() && method != Method::Subset {
        return Err(Error::Config("--candidates only applies to --method subset".into()));
    }
    let test = load(&a.test, Role::Test, a.max_tokens)?;
    let start = Instant::now();
    let scores = match method {
        Method::Subset => {
            let candidates = match (&a.candidates, &a.train) {
                (Some(c), _) if c == "all" => test
                    .documents
                    .iter()
                    .map(|d| CandidateSet {
                        test_doc: d.doc_id,
                        neighbors: Vec::new(),
                        labels: (0..model.num_labels as u32).collect(),
                        fallback: false,
                    })
                    .collect(),
                (Some(c), _) => load_candidates(c)?,
                (None, Some(train)) => {
                    let train = load(train, Role::Train, a.max_tokens)?;
                    retrieve(&train, &test, a.neighbors)?
                }
                (None, None) => return Err(Error::Config("--method subset needs --train or --candidates".into())),
            };
            log_candidates(&candidates);
            models::predict_with_candidates(&model, &test, &cfg, candidates)?
        }
        Method::Dep => {
            let aux = load_aux(&a.model)?.ok_or_else(|| {
                Error::Config(format!(
                    "--method dep needs an auxiliary model; {} was trained with --no-aux",
                    a.model.display()
                ))
            })?;
            models::predict_dep(&model, &aux, &test, &cfg)?
        }
        Method::Llda => models::predict_llda(&model, &test, &cfg)?,
        Method::Prior => models::predict_prior(&model, &test, &cfg)?,
    };
    info!(
        "predicted method={} docs={} seconds={:.3}",
        method,
        scores.documents.len(),
        start.elapsed().as_secs_f64()
    );
    write_atomic(&a.out, &scores.to_score_file())
}

/// Gold label sets of a test corpus.
pub fn gold_labels(test: &Corpus) -> Vec<Vec<u32>> {
    test.documents.iter().map(|d| d.labels.clone()).collect()
}

struct TrainStats {
    label_counts: Vec<u32>,
    num_docs: usize,
    num_labels: usize,
    cardinality: f64,
}

fn rankings_for(path: &Path, expected: usize) -> Result<Vec<Vec<u32>>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let parsed = parse_score_file(&text)?;
    if parsed.len() != expected {
        return Err(Error::Dimension(format!(
            "{} has {} documents, gold has {expected}",
            path.display(),
            parsed.len()
        )));
    }
    Ok(parsed
        .into_iter()
        .map(|(_, r)| r.into_iter().map(|(l, _)| l).collect())
        .collect())
}

pub fn cmd_evaluate(a: &EvaluateArgs, format: Format) -> Result<String> {
    let stats = match (&a.model, &a.train) {
        (Some(dir), _) => {
            let m = load_model(dir)?;
            TrainStats {
                cardinality: m.train_cardinality(),
                label_counts: m.label_counts,
                num_docs: m.num_train_docs,
                num_labels: m.num_labels,
            }
        }
        (None, Some(path)) => {
            let c = load(path, Role::Train, DEFAULT_MAX_TOKENS_PER_FEATURE)?;
            TrainStats {
                cardinality: c.cardinality(),
                label_counts: c.label_counts.clone(),
                num_docs: c.len(),
                num_labels: c.num_labels,
            }
        }
        (None, None) => return Err(Error::Config("--model or --train is required".into())),
    };
    let test = load(&a.gold, Role::Test, DEFAULT_MAX_TOKENS_PER_FEATURE)?;
    let gold = gold_labels(&test);
    let prop = if a.unit_propensities {
        PropensityModel::unit(stats.num_labels)
    } else {
        PropensityModel::new(&stats.label_counts, stats.num_docs, a.prop_a, a.prop_b)
    };
    let opts = EvalOptions {
        ks: a.k.clone(),
        micro_variant: match a.micro_variant {
            MicroArg::Pooled => MicroVariant::Pooled,
            MicroArg::Weighted => MicroVariant::Weighted,
        },
        include_empty: a.include_empty,
    };
    let evaluate = |path: &Path| -> Result<EvalReport> {
        let rankings = rankings_for(path, gold.len())?;
        eval::evaluate(&rankings, &gold, stats.num_labels, stats.cardinality, &prop, &opts)
    };
    let report = evaluate(&a.scores)?;

    let mut out = String::new();
    if format == Format::Text {
        out.push_str(&report.to_text());
        out.push('\n');
    }
    out.push_str(&report.to_kv());

    if let Some(other) = &a.compare {
        let other_report = evaluate(other)?;
        let mut measures = vec![("rcut".to_string(), Measure::Rcut)];
        measures.extend(opts.ks.iter().map(|&k| (format!("p@{k}"), Measure::PrecisionAt(k))));
        for (name, measure) in measures {
            let t = eval::z_test(&report, &other_report, measure, a.level);
            let _ = writeln!(
                out,
                "ztest_{name}_z={:.6}\nztest_{name}_p={:.6}\nztest_{name}_verdict={}",
                t.z,
                t.p_value,
                match t.verdict {
                    eval::Verdict::Significant => "significant",
                    eval::Verdict::NotSignificant => "not_significant",
                    eval::Verdict::Undefined => "undefined",
                }
            );
        }
    }
    Ok(out)
}

/// Metric rows of the reproduction table.
pub const METRICS: [&str; 6] = ["Micro-F", "Macro-F", "P@1", "P@5", "PSP@1", "PSP@5"];

#[derive(Debug, Clone)]
pub struct MethodResult {
    pub method: Method,
    /// One `[micro, macro, p@1, p@5, psp@1, psp@5]` row per run.
    pub runs: Vec<[f64; 6]>,
}

impl MethodResult {
    pub fn mean(&self) -> [f64; 6] {
        let mut m = [0.0; 6];
        for r in &self.runs {
            for (a, x) in m.iter_mut().zip(r) {
                *a += x;
            }
        }
        m.map(|x| x / self.runs.len().max(1) as f64)
    }

    pub fn std_dev(&self) -> [f64; 6] {
        let mean = self.mean();
        let n = self.runs.len();
        if n < 2 {
            return [0.0; 6];
        }
        let mut s = [0.0; 6];
        for r in &self.runs {
            for i in 0..6 {
                s[i] += (r[i] - mean[i]).powi(2);
            }
        }
        s.map(|x| (x / (n - 1) as f64).sqrt())
    }
}

#[derive(Debug, Clone)]
pub struct ReproduceTable {
    pub dataset: String,
    pub results: Vec<MethodResult>,
}

impl ReproduceTable {
    pub fn get(&self, method: Method) -> Option<&MethodResult> {
        self.results.iter().find(|r| r.method == method)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{:<8}", self.dataset);
        for r in &self.results {
            let _ = write!(out, " {:>16}", r.method.name());
        }
        out.push('\n');
        for (i, name) in METRICS.iter().enumerate() {
            let _ = write!(out, "{name:<8}");
            for r in &self.results {
                let _ = write!(out, " {:>8.3} ±{:<6.3}", r.mean()[i], r.std_dev()[i]);
            }
            out.push('\n');
        }
        out
    }

    pub fn to_kv(&self) -> String {
        let mut out = String::new();
        for r in &self.results {
            let (mean, sd) = (r.mean(), r.std_dev());
            for (i, name) in METRICS.iter().enumerate() {
                let key = name.to_lowercase().replace('-', "_");
                let _ = writeln!(out, "{}.{key}={:.6}", r.method.name(), mean[i]);
                let _ = writeln!(out, "{}.{key}_sd={:.6}", r.method.name(), sd[i]);
            }
        }
        out
    }
}

/// Options of a reproduction run; defaults are the published protocol.
#[derive(Debug, Clone)]
pub struct ReproduceOptions {
    pub runs: usize,
    pub seed: u64,
    pub train: TrainConfig,
    pub aux: DepAuxConfig,
    pub predict_schedule: Schedule,
    pub methods: Vec<Method>,
}

impl Default for ReproduceOptions {
    fn default() -> Self {
        ReproduceOptions {
            runs: 5,
            seed: 0,
            train: TrainConfig::default(),
            aux: DepAuxConfig::default(),
            predict_schedule: Schedule::default(),
            methods: Method::ALL.to_vec(),
        }
    }
}

fn metric_row(report: &EvalReport) -> [f64; 6] {
    let p = |v: &[(usize, f64)], k: usize| v.iter().find(|x| x.0 == k).map_or(0.0, |x| x.1);
    [
        report.micro_f,
        report.macro_f,
        p(&report.precision, 1),
        p(&report.precision, 5),
        p(&report.ps_precision, 1),
        p(&report.ps_precision, 5),
    ]
}

/// Train once, then predict and evaluate every method with seeds
/// `seed, seed+1, ...`.
pub fn reproduce(name: &str, train: &Corpus, test: &Corpus, opts: &ReproduceOptions) -> Result<ReproduceTable> {
    let mut tcfg = opts.train.clone();
    tcfg.seed = opts.seed;
    let start = Instant::now();
    let model = train_llda_observed(train, &tcfg, &|_, _, _| {})?;
    info!(
        "reproduce dataset={name} trained seconds={:.3}",
        start.elapsed().as_secs_f64()
    );
    let aux = if opts.methods.contains(&Method::Dep) {
        let mut acfg = opts.aux.clone();
        acfg.seed = opts.seed;
        Some(train_dep_aux(train, &acfg)?)
    } else {
        None
    };
    let index = TfIdfIndex::build(train)?;
    let gold = gold_labels(test);
    let prop = PropensityModel::new(
        &train.label_counts,
        train.len(),
        DEFAULT_PROPENSITY_A,
        DEFAULT_PROPENSITY_B,
    );

    let mut results = Vec::new();
    for &method in &opts.methods {
        let mut runs = Vec::new();
        for run in 0..opts.runs {
            let mut cfg = PredictionConfig::new(method);
            cfg.seed = opts.seed + run as u64;
            cfg.schedule = opts.predict_schedule;
            let start = Instant::now();
            let scores = predict_any(&model, aux.as_ref(), &index, train, test, &cfg)?;
            let report = eval::evaluate(
                &scores.rankings(),
                &gold,
                model.num_labels,
                train.cardinality(),
                &prop,
                &EvalOptions::default(),
            )?;
            let row = metric_row(&report);
            info!(
                "reproduce dataset={name} method={method} run={run} seconds={:.3} micro_f={:.4} p@1={:.4}",
                start.elapsed().as_secs_f64(),
                row[0],
                row[2]
            );
            runs.push(row);
        }
        results.push(MethodResult { method, runs });
    }
    Ok(ReproduceTable {
        dataset: name.to_string(),
        results,
    })
}

fn predict_any(
    model: &TrainedModel,
    aux: Option<&DepAuxModel>,
    index: &TfIdfIndex,
    train: &Corpus,
    test: &Corpus,
    cfg: &PredictionConfig,
) -> Result<ScoreMatrix> {
    models::predict(model, test, cfg, aux, Some((index, train)))
}

pub fn cmd_reproduce(a: &ReproduceArgs, seed: u64) -> Result<ReproduceTable> {
    let name = a.dataset.name();
    let train = load(
        &a.workdir.join(format!("{name}_train.txt")),
        Role::Train,
        DEFAULT_MAX_TOKENS_PER_FEATURE,
    )?;
    let test = load(
        &a.workdir.join(format!("{name}_test.txt")),
        Role::Test,
        DEFAULT_MAX_TOKENS_PER_FEATURE,
    )?;
    let opts = ReproduceOptions {
        runs: a.runs.max(1),
        seed,
        ..ReproduceOptions::default()
    };
    reproduce(name, &train, &test, &opts)
}
