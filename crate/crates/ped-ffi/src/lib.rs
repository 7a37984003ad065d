//! C ABI for the subdata selection library.
//!
//! Conventions: opaque handles with explicit `_free` functions, integer
//! status codes, and a thread-local message retrievable through
//! [`ped_last_error_message`] after any non-OK status. All strings are
//! NUL-terminated UTF-8. Functions are safe to call from multiple threads
//! as long as each handle is used from one thread at a time.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use ped_core::bench::ForestOverrides;
use ped_core::data::{self, DatasetMeta};
use ped_core::forest::{fit_forest_on, ForestModel};
use ped_core::metrics::{accuracy, auc_binary, auc_multiclass};
use ped_core::sampler::{select_ped, select_twinning, select_uniform};
use ped_core::{Dataset, GeneratorSpec, PedConfig, PedError, Seed};

/// Status code returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PedStatus {
    Ok = 0,
    NullPointer = 1,
    Utf8Error = 2,
    InvalidArgument = 3,
    ParseError = 4,
    IoError = 5,
    Infeasible = 6,
    RuntimeError = 7,
    Panic = 8,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap();
    });
}

fn status_of(err: &PedError) -> PedStatus {
    match err {
        PedError::MissingFile { .. } | PedError::Io { .. } => PedStatus::IoError,
        PedError::ParseCell { .. } | PedError::Metadata { .. } => PedStatus::ParseError,
        PedError::InfeasibleBounds { .. } | PedError::LeafCapInfeasible { .. } => {
            PedStatus::Infeasible
        }
        PedError::InvalidSpec(_) | PedError::InvalidConfig(_) | PedError::UnknownColumn { .. } => {
            PedStatus::InvalidArgument
        }
        PedError::Stage { source, .. } => status_of(source),
        _ => PedStatus::RuntimeError,
    }
}

fn fail(err: PedError) -> PedStatus {
    let code = status_of(&err);
    set_error(&err.to_string());
    code
}

fn guard<F: FnOnce() -> PedStatus>(body: F) -> PedStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            PedStatus::Panic
        }
    }
}

unsafe fn cstr<'a>(ptr: *const c_char) -> Result<&'a str, PedStatus> {
    if ptr.is_null() {
        set_error("null string argument");
        return Err(PedStatus::NullPointer);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        PedStatus::Utf8Error
    })
}

/// Opaque dataset handle.
pub struct PedDataset {
    inner: Dataset,
}

/// Opaque fitted random-forest handle.
pub struct PedForest {
    inner: ForestModel,
}

/// Tuning parameters for `ped_select`; zero fields take the documented
/// defaults.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct PedSelectOptions {
    pub t_s: usize,
    pub t_d: usize,
    pub t_n: usize,
    pub t_h: usize,
    pub eval_cap: usize,
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ped_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message for the most recent error on this thread; valid until the next
/// failing call on the same thread.
#[no_mangle]
pub extern "C" fn ped_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Generate a synthetic dataset. `p` = 0 uses the family default dimension.
///
/// # Safety
/// `family` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ped_dataset_generate(
    family: *const c_char,
    p: usize,
    n_rows: usize,
    seed: u64,
    out: *mut *mut PedDataset,
) -> PedStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer");
            return PedStatus::NullPointer;
        }
        let family = match cstr(family) {
            Ok(s) => s,
            Err(code) => return code,
        };
        let spec = match GeneratorSpec::from_family(family, if p == 0 { None } else { Some(p) }) {
            Ok(s) => s,
            Err(e) => return fail(e),
        };
        match data::generate(&spec, n_rows, Seed::new(seed)) {
            Ok(dataset) => {
                *out = Box::into_raw(Box::new(PedDataset { inner: dataset }));
                PedStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Load a CSV with a header row. `categorical` may be NULL or a
/// comma-separated list of column names.
///
/// # Safety
/// Pointer arguments must be valid; see [`ped_dataset_generate`].
#[no_mangle]
pub unsafe extern "C" fn ped_dataset_load_csv(
    path: *const c_char,
    target: *const c_char,
    categorical: *const c_char,
    out: *mut *mut PedDataset,
) -> PedStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer");
            return PedStatus::NullPointer;
        }
        let path = match cstr(path) {
            Ok(s) => s,
            Err(code) => return code,
        };
        let target = match cstr(target) {
            Ok(s) => s,
            Err(code) => return code,
        };
        let cats: Vec<String> = if categorical.is_null() {
            Vec::new()
        } else {
            match cstr(categorical) {
                Ok(s) if s.is_empty() => Vec::new(),
                Ok(s) => s.split(',').map(str::to_owned).collect(),
                Err(code) => return code,
            }
        };
        match data::load_csv_auto(Path::new(path), target, &cats) {
            Ok(dataset) => {
                *out = Box::into_raw(Box::new(PedDataset { inner: dataset }));
                PedStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Write the dataset (all rows) as CSV plus its metadata sidecar.
///
/// # Safety
/// `dataset` must be a live handle; `path` a valid string.
#[no_mangle]
pub unsafe extern "C" fn ped_dataset_write_csv(
    dataset: *const PedDataset,
    path: *const c_char,
) -> PedStatus {
    guard(|| {
        let Some(ds) = dataset.as_ref() else {
            set_error("null dataset handle");
            return PedStatus::NullPointer;
        };
        let path = match cstr(path) {
            Ok(s) => s,
            Err(code) => return code,
        };
        let path = Path::new(path);
        if let Err(e) = data::write_csv(&ds.inner, path) {
            return fail(e);
        }
        match data::write_meta(&data::meta_path(path), &DatasetMeta::of(&ds.inner)) {
            Ok(()) => PedStatus::Ok,
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `dataset` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ped_dataset_free(dataset: *mut PedDataset) {
    if !dataset.is_null() {
        drop(Box::from_raw(dataset));
    }
}

/// # Safety
/// `dataset` must be a live handle (NULL returns 0).
#[no_mangle]
pub unsafe extern "C" fn ped_dataset_n_rows(dataset: *const PedDataset) -> usize {
    dataset.as_ref().map_or(0, |d| d.inner.n_rows())
}

/// # Safety
/// `dataset` must be a live handle (NULL returns 0).
#[no_mangle]
pub unsafe extern "C" fn ped_dataset_n_features(dataset: *const PedDataset) -> usize {
    dataset.as_ref().map_or(0, |d| d.inner.n_features())
}

/// # Safety
/// `dataset` must be a live handle (NULL returns 0).
#[no_mangle]
pub unsafe extern "C" fn ped_dataset_n_classes(dataset: *const PedDataset) -> usize {
    dataset.as_ref().map_or(0, |d| d.inner.n_classes())
}

/// Select `n` rows by `method` ("ped", "uniform", or "twinning") and write
/// their indices into `out_indices` (capacity `n`).
///
/// # Safety
/// `dataset` must be live, `method` a valid string, `out_indices` writable
/// for `n` elements. `options` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn ped_select(
    dataset: *const PedDataset,
    method: *const c_char,
    n: usize,
    seed: u64,
    options: *const PedSelectOptions,
    out_indices: *mut u64,
) -> PedStatus {
    guard(|| {
        let Some(ds) = dataset.as_ref() else {
            set_error("null dataset handle");
            return PedStatus::NullPointer;
        };
        if out_indices.is_null() {
            set_error("null output buffer");
            return PedStatus::NullPointer;
        }
        let method = match cstr(method) {
            Ok(s) => s,
            Err(code) => return code,
        };
        let opts = options.as_ref().copied().unwrap_or_default();
        let seed = Seed::new(seed);
        let result = match method {
            "ped" => {
                let config = PedConfig {
                    n,
                    t_s: (opts.t_s > 0).then_some(opts.t_s),
                    t_d: (opts.t_d > 0).then_some(opts.t_d),
                    t_n: if opts.t_n > 0 { opts.t_n } else { 10 },
                    t_h: if opts.t_h > 0 { opts.t_h } else { 5 },
                    eval_cap: if opts.eval_cap > 0 {
                        opts.eval_cap
                    } else {
                        ped_core::partition::DEFAULT_EVAL_CAP
                    },
                    seed,
                };
                select_ped(&ds.inner, &config).map(|sel| sel.subdata)
            }
            "uniform" => select_uniform(&ds.inner, n, seed),
            "twinning" => select_twinning(&ds.inner, n, seed),
            other => {
                set_error(&format!("unknown method '{other}'"));
                return PedStatus::InvalidArgument;
            }
        };
        match result {
            Ok(subdata) => {
                for (slot, &idx) in (0..n).zip(subdata.indices.iter()) {
                    *out_indices.add(slot) = idx as u64;
                }
                PedStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Fit a random forest on the rows listed in `rows` (NULL means all rows).
/// `ntree` = 0 uses the default of 100.
///
/// # Safety
/// `dataset` must be live; `rows`, when non-NULL, must hold `n_rows` valid
/// row indices; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ped_forest_fit(
    dataset: *const PedDataset,
    rows: *const u64,
    n_rows: usize,
    ntree: u32,
    seed: u64,
    out: *mut *mut PedForest,
) -> PedStatus {
    guard(|| {
        let Some(ds) = dataset.as_ref() else {
            set_error("null dataset handle");
            return PedStatus::NullPointer;
        };
        if out.is_null() {
            set_error("null output pointer");
            return PedStatus::NullPointer;
        }
        let row_vec: Vec<usize> = if rows.is_null() {
            (0..ds.inner.n_rows()).collect()
        } else {
            let mut v = Vec::with_capacity(n_rows);
            for i in 0..n_rows {
                let idx = *rows.add(i) as usize;
                if idx >= ds.inner.n_rows() {
                    set_error(&format!("row index {idx} out of range"));
                    return PedStatus::InvalidArgument;
                }
                v.push(idx);
            }
            v
        };
        let overrides = ForestOverrides {
            ntree: (ntree > 0).then_some(ntree as usize),
            ..ForestOverrides::default()
        };
        match fit_forest_on(&ds.inner, &row_vec, &overrides.config(Seed::new(seed))) {
            Ok(model) => {
                *out = Box::into_raw(Box::new(PedForest { inner: model }));
                PedStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `forest` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ped_forest_free(forest: *mut PedForest) {
    if !forest.is_null() {
        drop(Box::from_raw(forest));
    }
}

/// Predicted class ids for every row of `test`, written to `out_classes`
/// (capacity = row count of `test`).
///
/// # Safety
/// Both handles must be live and `out_classes` writable for the test row
/// count.
#[no_mangle]
pub unsafe extern "C" fn ped_forest_predict(
    forest: *const PedForest,
    test: *const PedDataset,
    out_classes: *mut u32,
) -> PedStatus {
    guard(|| {
        let (Some(model), Some(test)) = (forest.as_ref(), test.as_ref()) else {
            set_error("null handle");
            return PedStatus::NullPointer;
        };
        if out_classes.is_null() {
            set_error("null output buffer");
            return PedStatus::NullPointer;
        }
        match model.inner.predict_class(&test.inner) {
            Ok(pred) => {
                for (i, class) in pred.into_iter().enumerate() {
                    *out_classes.add(i) = class;
                }
                PedStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Accuracy and AUC of the forest on a labeled test set.
///
/// # Safety
/// Handles must be live; output pointers may be NULL to skip a metric.
#[no_mangle]
pub unsafe extern "C" fn ped_forest_evaluate(
    forest: *const PedForest,
    test: *const PedDataset,
    out_accuracy: *mut f64,
    out_auc: *mut f64,
) -> PedStatus {
    guard(|| {
        let (Some(model), Some(test)) = (forest.as_ref(), test.as_ref()) else {
            set_error("null handle");
            return PedStatus::NullPointer;
        };
        let pred = match model.inner.predict_class(&test.inner) {
            Ok(p) => p,
            Err(e) => return fail(e),
        };
        let acc = match accuracy(&pred, test.inner.labels()) {
            Ok(a) => a,
            Err(e) => return fail(e),
        };
        let proba = match model.inner.predict_proba(&test.inner) {
            Ok(p) => p,
            Err(e) => return fail(e),
        };
        let auc = if test.inner.n_classes() == 2 {
            let scores: Vec<f64> = proba.iter().map(|r| r[1]).collect();
            auc_binary(&scores, test.inner.labels())
        } else {
            auc_multiclass(&proba, test.inner.labels())
        };
        let auc = match auc {
            Ok(a) => a,
            Err(e) => return fail(e),
        };
        if !out_accuracy.is_null() {
            *out_accuracy = acc;
        }
        if !out_auc.is_null() {
            *out_auc = auc;
        }
        PedStatus::Ok
    })
}
