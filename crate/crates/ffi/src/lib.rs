//! C ABI over `subset_llda`.
//!
//! Every object crosses the boundary as an opaque pointer created by a
//! `*_load`/`*_train`/`*_predict` call and released with the matching
//! `*_free`. Fallible calls return an [`SlldaStatus`]; on failure the
//! message is available from [`sllda_last_error`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use subset_llda::models::{self, Method, PredictionConfig, ScoreMatrix, TrainConfig, TrainedModel};
use subset_llda::{Corpus, DepAuxModel, Error, LoadOptions, Role, Schedule, TfIdfIndex};

/// Status codes returned by fallible calls.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlldaStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// Bad configuration or option value.
    Config = 3,
    Io = 4,
    /// Malformed input file or out-of-range identifier.
    Parse = 5,
    /// Inconsistent dimensions or a corrupt model.
    Model = 6,
    /// A document had no allowed labels.
    EmptyAllowed = 7,
    /// Index out of range in an accessor.
    OutOfRange = 8,
    Panic = 9,
}

/// Prediction methods.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlldaMethod {
    Llda = 0,
    Prior = 1,
    Dep = 2,
    Subset = 3,
}

impl From<SlldaMethod> for Method {
    fn from(m: SlldaMethod) -> Method {
        match m {
            SlldaMethod::Llda => Method::Llda,
            SlldaMethod::Prior => Method::Prior,
            SlldaMethod::Dep => Method::Dep,
            SlldaMethod::Subset => Method::Subset,
        }
    }
}

/// Gibbs schedule and seed shared by training and prediction.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct SlldaSchedule {
    pub iterations: usize,
    pub burn_in: usize,
    pub lag: usize,
    pub chains: usize,
    pub seed: u64,
}

/// Opaque corpus handle.
pub struct SlldaCorpus(Corpus);

/// Opaque model handle: LLDA statistics plus the optional Dep-LDA model.
pub struct SlldaModel {
    model: TrainedModel,
    aux: Option<DepAuxModel>,
}

/// Opaque handle to per-document label rankings.
pub struct SlldaScores(ScoreMatrix);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> SlldaStatus {
    match e {
        Error::Io { .. } => SlldaStatus::Io,
        Error::Parse { .. } | Error::Bounds { .. } | Error::Value { .. } => SlldaStatus::Parse,
        Error::Dimension(_) | Error::Model(_) => SlldaStatus::Model,
        Error::EmptyAllowed { .. } => SlldaStatus::EmptyAllowed,
        Error::Config(_) => SlldaStatus::Config,
    }
}

struct Fail(SlldaStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        Fail(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> SlldaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            SlldaStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            SlldaStatus::Panic
        }
    }
}

unsafe fn path_arg(p: *const c_char, name: &str) -> Result<PathBuf, Fail> {
    if p.is_null() {
        return Err(Fail(SlldaStatus::NullArgument, format!("{name} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map(PathBuf::from)
        .map_err(|_| Fail(SlldaStatus::InvalidUtf8, format!("{name} is not UTF-8")))
}

unsafe fn ref_arg<'a, T>(p: *const T, name: &str) -> Result<&'a T, Fail> {
    p.as_ref()
        .ok_or_else(|| Fail(SlldaStatus::NullArgument, format!("{name} is null")))
}

fn out_arg<T>(out: *mut *mut T) -> Result<(), Fail> {
    if out.is_null() {
        Err(Fail(SlldaStatus::NullArgument, "out is null".into()))
    } else {
        Ok(())
    }
}

/// Schedule used by default for training and prediction.
#[no_mangle]
pub extern "C" fn sllda_default_schedule() -> SlldaSchedule {
    let s = Schedule::default();
    SlldaSchedule {
        iterations: s.iterations,
        burn_in: s.burn_in,
        lag: s.lag,
        chains: 1,
        seed: 0,
    }
}

/// Message of the last failed call on this thread, or null. The pointer is
/// valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn sllda_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Load a corpus file. `is_test` selects test-role loading, which keeps
/// documents without labels.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sllda_corpus_load(
    path: *const c_char,
    is_test: bool,
    out: *mut *mut SlldaCorpus,
) -> SlldaStatus {
    guard(|| {
        out_arg(out)?;
        let path = path_arg(path, "path")?;
        let role = if is_test { Role::Test } else { Role::Train };
        let corpus = Corpus::load(path, LoadOptions::new(role))?;
        *out = Box::into_raw(Box::new(SlldaCorpus(corpus)));
        Ok(())
    })
}

/// # Safety
/// `corpus` must come from [`sllda_corpus_load`] or be null.
#[no_mangle]
pub unsafe extern "C" fn sllda_corpus_num_documents(corpus: *const SlldaCorpus) -> usize {
    corpus.as_ref().map_or(0, |c| c.0.len())
}

/// # Safety
/// `corpus` must come from [`sllda_corpus_load`] or be null.
#[no_mangle]
pub unsafe extern "C" fn sllda_corpus_num_labels(corpus: *const SlldaCorpus) -> usize {
    corpus.as_ref().map_or(0, |c| c.0.num_labels)
}

/// # Safety
/// `corpus` must come from [`sllda_corpus_load`] or be null.
#[no_mangle]
pub unsafe extern "C" fn sllda_corpus_num_features(corpus: *const SlldaCorpus) -> usize {
    corpus.as_ref().map_or(0, |c| c.0.num_features)
}

/// # Safety
/// `corpus` must come from [`sllda_corpus_load`] or be null; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn sllda_corpus_free(corpus: *mut SlldaCorpus) {
    if !corpus.is_null() {
        drop(Box::from_raw(corpus));
    }
}

/// Train LLDA with symmetric α = `alpha_sum / L` and the given β. When
/// `with_aux` is set the Dep-LDA auxiliary model is trained as well, with
/// default settings.
///
/// # Safety
/// `train` must be a live corpus handle, `schedule` and `out` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn sllda_model_train(
    train: *const SlldaCorpus,
    schedule: *const SlldaSchedule,
    alpha_sum: f64,
    beta: f64,
    with_aux: bool,
    out: *mut *mut SlldaModel,
) -> SlldaStatus {
    guard(|| {
        out_arg(out)?;
        let train = &ref_arg(train, "train")?.0;
        let s = *ref_arg(schedule, "schedule")?;
        let schedule = Schedule {
            iterations: s.iterations,
            burn_in: s.burn_in,
            lag: s.lag,
        };
        let cfg = TrainConfig {
            alpha_sum,
            beta,
            schedule,
            chains: s.chains,
            seed: s.seed,
        };
        let model = models::train_llda(train, &cfg)?;
        let aux = if with_aux {
            let acfg = models::DepAuxConfig {
                schedule,
                seed: s.seed,
                ..models::DepAuxConfig::default()
            };
            Some(models::train_dep_aux(train, &acfg)?)
        } else {
            None
        };
        *out = Box::into_raw(Box::new(SlldaModel { model, aux }));
        Ok(())
    })
}

/// # Safety
/// `model` must be a live handle and `dir` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn sllda_model_save(model: *const SlldaModel, dir: *const c_char) -> SlldaStatus {
    guard(|| {
        let m = ref_arg(model, "model")?;
        let dir = path_arg(dir, "dir")?;
        models::save_model(&m.model, m.aux.as_ref(), dir)?;
        Ok(())
    })
}

/// # Safety
/// `dir` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sllda_model_load(dir: *const c_char, out: *mut *mut SlldaModel) -> SlldaStatus {
    guard(|| {
        out_arg(out)?;
        let dir = path_arg(dir, "dir")?;
        let model = models::load_model(&dir)?;
        let aux = models::load_aux(&dir)?;
        *out = Box::into_raw(Box::new(SlldaModel { model, aux }));
        Ok(())
    })
}

/// # Safety
/// `model` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn sllda_model_num_labels(model: *const SlldaModel) -> usize {
    model.as_ref().map_or(0, |m| m.model.num_labels)
}

/// # Safety
/// `model` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn sllda_model_has_aux(model: *const SlldaModel) -> bool {
    model.as_ref().is_some_and(|m| m.aux.is_some())
}

/// # Safety
/// `model` must be a live handle or null; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn sllda_model_free(model: *mut SlldaModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Score every document of `test`. `train` is required for
/// [`SlldaMethod::Subset`] and ignored otherwise. A negative `eta` selects
/// the method default.
///
/// # Safety
/// Handles must be live (`train` may be null), `schedule` and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn sllda_predict(
    model: *const SlldaModel,
    test: *const SlldaCorpus,
    train: *const SlldaCorpus,
    method: SlldaMethod,
    schedule: *const SlldaSchedule,
    eta: f64,
    out: *mut *mut SlldaScores,
) -> SlldaStatus {
    guard(|| {
        out_arg(out)?;
        let m = ref_arg(model, "model")?;
        let test = &ref_arg(test, "test")?.0;
        let s = *ref_arg(schedule, "schedule")?;
        let mut cfg = PredictionConfig::new(method.into());
        cfg.schedule = Schedule {
            iterations: s.iterations,
            burn_in: s.burn_in,
            lag: s.lag,
        };
        cfg.chains = s.chains;
        cfg.seed = s.seed;
        if eta >= 0.0 {
            cfg.eta = Some(eta);
        }
        let train = train.as_ref().map(|t| &t.0);
        let index = match (method, train) {
            (SlldaMethod::Subset, Some(t)) => Some(TfIdfIndex::build(t)?),
            _ => None,
        };
        let retrieval = index.as_ref().zip(train);
        let scores = models::predict(&m.model, test, &cfg, m.aux.as_ref(), retrieval)?;
        *out = Box::into_raw(Box::new(SlldaScores(scores)));
        Ok(())
    })
}

/// # Safety
/// `scores` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn sllda_scores_num_documents(scores: *const SlldaScores) -> usize {
    scores.as_ref().map_or(0, |s| s.0.documents.len())
}

/// Number of ranked labels of document `doc`, or 0 when out of range.
///
/// # Safety
/// `scores` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn sllda_scores_num_ranked(scores: *const SlldaScores, doc: usize) -> usize {
    scores
        .as_ref()
        .and_then(|s| s.0.documents.get(doc))
        .map_or(0, |d| d.ranking.len())
}

/// Label and score at position `rank` (0 = best) of document `doc`.
///
/// # Safety
/// `scores` must be a live handle; `label` and `score` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn sllda_scores_get(
    scores: *const SlldaScores,
    doc: usize,
    rank: usize,
    label: *mut u32,
    score: *mut f64,
) -> SlldaStatus {
    guard(|| {
        let s = ref_arg(scores, "scores")?;
        if label.is_null() || score.is_null() {
            return Err(Fail(SlldaStatus::NullArgument, "label or score is null".into()));
        }
        let &(l, x) =
            s.0.documents
                .get(doc)
                .and_then(|d| d.ranking.get(rank))
                .ok_or_else(|| Fail(SlldaStatus::OutOfRange, format!("no entry at doc {doc} rank {rank}")))?;
        *label = l;
        *score = x;
        Ok(())
    })
}

/// # Safety
/// `scores` must be a live handle or null; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn sllda_scores_free(scores: *mut SlldaScores) {
    if !scores.is_null() {
        drop(Box::from_raw(scores));
    }
}
