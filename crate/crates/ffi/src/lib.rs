//! C ABI for `qcf-core`.
//!
//! Objects cross the boundary as opaque handles created by `qcf_*_new`
//! style constructors and released with the matching `qcf_*_free`. Every
//! fallible call returns a [`QcfStatus`]; on failure a description is
//! available from [`qcf_last_error`] on the same thread.
//!
//! Complex arrays are interleaved `re, im` doubles. Matrices are row-major,
//! so a `dim x dim` operator takes `2 * dim * dim` doubles.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qcf_core::lhv::{self, ConstraintSet, ProductConstraint, Setting, Sign};
use qcf_core::linalg::{Amplitude, Operator, StateVector};
use qcf_core::pps::{self, Branch, PrePostEnsemble, ProjectorDecomposition};
use qcf_core::report::{run_named, RunOptions};
use qcf_core::scenarios::{self, ScenarioName};
use qcf_core::weakmeas::{simulate_pointer, PointerGrid};
use qcf_core::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QcfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    NotNormalized = 4,
    InvalidDecomposition = 5,
    ZeroSelectionProbability = 6,
    OrthogonalSelection = 7,
    GridTooNarrow = 8,
    InvalidConstraint = 9,
    UniverseTooLarge = 10,
    UnknownScenario = 11,
    BufferTooSmall = 12,
    Panic = 99,
}

impl From<&Error> for QcfStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::DimensionMismatch { .. } | Error::DimensionOutOfRange { .. } | Error::BadOperatorShape { .. } => {
                QcfStatus::DimensionMismatch
            }
            Error::NonFinite { .. } | Error::InvalidPointer(_) => QcfStatus::InvalidArgument,
            Error::NotNormalized { .. } => QcfStatus::NotNormalized,
            Error::InvalidDecomposition { .. } => QcfStatus::InvalidDecomposition,
            Error::ZeroSelectionProbability => QcfStatus::ZeroSelectionProbability,
            Error::OrthogonalSelection => QcfStatus::OrthogonalSelection,
            Error::GridTooNarrow { .. } | Error::GridTooCoarse { .. } => QcfStatus::GridTooNarrow,
            Error::InvalidConstraint(_) | Error::MissingSetting(_) => QcfStatus::InvalidConstraint,
            Error::UniverseTooLarge { .. } => QcfStatus::UniverseTooLarge,
            Error::UnknownScenario(_) => QcfStatus::UnknownScenario,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Failure(QcfStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(QcfStatus::from(&e), e.to_string())
    }
}

fn fail(status: QcfStatus, msg: impl Into<String>) -> Failure {
    Failure(status, msg.into())
}

/// Runs `body`, converting errors and panics into status codes.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> QcfStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_last_error("");
            QcfStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(_) => {
            set_last_error("panic inside qcf");
            QcfStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| fail(QcfStatus::NullPointer, format!("{what} is null")))
}

unsafe fn out_ref<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| fail(QcfStatus::NullPointer, format!("{what} is null")))
}

unsafe fn doubles<'a>(p: *const f64, len: usize, what: &str) -> Result<&'a [f64], Failure> {
    if p.is_null() {
        return Err(fail(QcfStatus::NullPointer, format!("{what} is null")));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn string(p: *const c_char, what: &str) -> Result<String, Failure> {
    if p.is_null() {
        return Err(fail(QcfStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map(str::to_owned)
        .map_err(|_| fail(QcfStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

fn complexes(raw: &[f64]) -> Vec<Amplitude> {
    raw.chunks_exact(2).map(|c| Amplitude::new(c[0], c[1])).collect()
}

unsafe fn read_state(dim: usize, amps: *const f64, what: &str) -> Result<StateVector, Failure> {
    let raw = doubles(amps, 2 * dim, what)?;
    Ok(StateVector::new(complexes(raw))?)
}

unsafe fn read_operator(dim: usize, entries: *const f64, what: &str) -> Result<Operator, Failure> {
    let raw = doubles(entries, 2 * dim * dim, what)?;
    Ok(Operator::new(dim, complexes(raw))?)
}

/// Pre/post-selected ensemble handle.
pub struct QcfEnsemble(PrePostEnsemble);

/// Projector decomposition handle.
pub struct QcfDecomposition(ProjectorDecomposition);

/// Parity constraint set handle. Setting indices refer to the universe in
/// the order it was given to `qcf_constraint_set_new`.
pub struct QcfConstraintSet {
    given: Vec<Setting>,
    set: ConstraintSet,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct QcfPointerReport {
    pub coupling: f64,
    pub pointer_mean: f64,
    pub postselection_probability: f64,
    pub inferred_weak_value_re: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct QcfMachZehnder {
    pub p_dark: f64,
    pub p_bright: f64,
    pub p_absorbed: f64,
}

/// Description of the last failure on this thread, or an empty string.
/// Valid until the next qcf call on the same thread.
#[no_mangle]
pub extern "C" fn qcf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qcf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds an ensemble from `dim` interleaved complex amplitudes for each of
/// `pre` and `post`. Both must be normalized.
///
/// # Safety
/// `pre` and `post` must point to `2 * dim` readable doubles; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn qcf_ensemble_new(
    dim: usize,
    pre: *const f64,
    post: *const f64,
    out: *mut *mut QcfEnsemble,
) -> QcfStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let ens = PrePostEnsemble::new(read_state(dim, pre, "pre")?, read_state(dim, post, "post")?)?;
        *out = Box::into_raw(Box::new(QcfEnsemble(ens)));
        Ok(())
    })
}

/// The three-box ensemble.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qcf_ensemble_three_box(out: *mut *mut QcfEnsemble) -> QcfStatus {
    guard(|| {
        *out_ref(out, "out")? = Box::into_raw(Box::new(QcfEnsemble(scenarios::three_box_ensemble())));
        Ok(())
    })
}

/// # Safety
/// `ens` must be null or a handle from a qcf ensemble constructor, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qcf_ensemble_free(ens: *mut QcfEnsemble) {
    if !ens.is_null() {
        drop(Box::from_raw(ens));
    }
}

/// # Safety
/// `ens` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn qcf_ensemble_dim(ens: *const QcfEnsemble) -> usize {
    ens.as_ref().map_or(0, |e| e.0.dim())
}

/// `<post|pre>`.
///
/// # Safety
/// `ens` must be a live handle; `re` and `im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qcf_ensemble_overlap(ens: *const QcfEnsemble, re: *mut f64, im: *mut f64) -> QcfStatus {
    guard(|| {
        let z = deref(ens, "ensemble")?.0.overlap();
        *out_ref(re, "re")? = z.re;
        *out_ref(im, "im")? = z.im;
        Ok(())
    })
}

/// Builds a projector decomposition from `n_branches` branches. Projector
/// `k` occupies doubles `[2*dim*dim*k, 2*dim*dim*(k+1))` of `projectors`.
///
/// # Safety
/// `label` and each of the `n_branches` entries of `outcomes` must be
/// NUL-terminated strings; `eigenvalues` must hold `n_branches` doubles and
/// `projectors` `2 * dim * dim * n_branches` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qcf_decomposition_new(
    label: *const c_char,
    dim: usize,
    n_branches: usize,
    outcomes: *const *const c_char,
    eigenvalues: *const f64,
    projectors: *const f64,
    out: *mut *mut QcfDecomposition,
) -> QcfStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let label = string(label, "label")?;
        if outcomes.is_null() {
            return Err(fail(QcfStatus::NullPointer, "outcomes is null"));
        }
        let eig = doubles(eigenvalues, n_branches, "eigenvalues")?;
        let block = 2 * dim * dim;
        let raw = doubles(projectors, block * n_branches, "projectors")?;
        let mut branches = Vec::with_capacity(n_branches);
        for k in 0..n_branches {
            let outcome = string(*outcomes.add(k), "outcome label")?;
            let projector = Operator::new(dim, complexes(&raw[k * block..(k + 1) * block]))?;
            branches.push(Branch::new(outcome, eig[k], projector));
        }
        *out = Box::into_raw(Box::new(QcfDecomposition(ProjectorDecomposition::new(label, branches)?)));
        Ok(())
    })
}

/// Box observables: 0, 1, 2 open box A, B or C alone; 3 opens all three.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qcf_decomposition_box(index: usize, out: *mut *mut QcfDecomposition) -> QcfStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let obs = scenarios::box_observables()
            .into_iter()
            .nth(index)
            .ok_or_else(|| fail(QcfStatus::InvalidArgument, format!("box observable index {index} out of range")))?;
        *out = Box::into_raw(Box::new(QcfDecomposition(obs)));
        Ok(())
    })
}

/// # Safety
/// `dec` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qcf_decomposition_free(dec: *mut QcfDecomposition) {
    if !dec.is_null() {
        drop(Box::from_raw(dec));
    }
}

/// # Safety
/// `dec` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn qcf_decomposition_branch_count(dec: *const QcfDecomposition) -> usize {
    dec.as_ref().map_or(0, |d| d.0.branches().len())
}

unsafe fn write_distribution(
    dist: &pps::Distribution,
    probabilities: *mut f64,
    capacity: usize,
) -> Result<(), Failure> {
    if probabilities.is_null() {
        return Err(fail(QcfStatus::NullPointer, "probabilities is null"));
    }
    if capacity < dist.len() {
        return Err(fail(QcfStatus::BufferTooSmall, format!("need room for {} probabilities", dist.len())));
    }
    for (i, (_, p)) in dist.iter().enumerate() {
        *probabilities.add(i) = p;
    }
    Ok(())
}

/// Single-time Born probabilities, in branch order.
///
/// # Safety
/// `state` must hold `2 * dim` doubles, `dec` must be a live handle and
/// `probabilities` must have room for `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn qcf_born(
    dim: usize,
    state: *const f64,
    dec: *const QcfDecomposition,
    probabilities: *mut f64,
    capacity: usize,
) -> QcfStatus {
    guard(|| {
        let dist = pps::born(&read_state(dim, state, "state")?, &deref(dec, "decomposition")?.0)?;
        write_distribution(&dist, probabilities, capacity)
    })
}

/// Two-time outcome probabilities, in branch order.
///
/// # Safety
/// `ens` and `dec` must be live handles; `probabilities` must have room for
/// `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn qcf_abl(
    ens: *const QcfEnsemble,
    dec: *const QcfDecomposition,
    probabilities: *mut f64,
    capacity: usize,
) -> QcfStatus {
    guard(|| {
        let dist = pps::abl(&deref(ens, "ensemble")?.0, &deref(dec, "decomposition")?.0)?;
        write_distribution(&dist, probabilities, capacity)
    })
}

/// Sets `*found` and, when true, the certain branch index and eigenvalue.
///
/// # Safety
/// `ens` and `dec` must be live handles; the out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn qcf_infer_element_of_reality(
    ens: *const QcfEnsemble,
    dec: *const QcfDecomposition,
    tol: f64,
    found: *mut bool,
    branch_index: *mut usize,
    eigenvalue: *mut f64,
) -> QcfStatus {
    guard(|| {
        let dec = &deref(dec, "decomposition")?.0;
        let element = pps::infer_element_of_reality(&deref(ens, "ensemble")?.0, dec, tol)?;
        let found = out_ref(found, "found")?;
        let branch_index = out_ref(branch_index, "branch_index")?;
        let eigenvalue = out_ref(eigenvalue, "eigenvalue")?;
        *found = element.is_some();
        if let Some(e) = element {
            *branch_index = dec.branches().iter().position(|b| b.outcome == e.outcome).unwrap_or(0);
            *eigenvalue = e.eigenvalue;
        }
        Ok(())
    })
}

/// Weak value of a `dim x dim` operator.
///
/// # Safety
/// `ens` must be a live handle, `op` must hold `2 * dim * dim` doubles and
/// `re`, `im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qcf_weak_value(
    ens: *const QcfEnsemble,
    dim: usize,
    op: *const f64,
    re: *mut f64,
    im: *mut f64,
) -> QcfStatus {
    guard(|| {
        let w = pps::weak_value(&deref(ens, "ensemble")?.0, &read_operator(dim, op, "operator")?)?;
        *out_ref(re, "re")? = w.re();
        *out_ref(im, "im")? = w.im();
        Ok(())
    })
}

/// Pointer-model weak measurement. Pass `half_width <= 0` or `points == 0`
/// for the default grid.
///
/// # Safety
/// `ens` and `dec` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qcf_simulate_pointer(
    ens: *const QcfEnsemble,
    dec: *const QcfDecomposition,
    coupling: f64,
    sigma: f64,
    half_width: f64,
    points: usize,
    out: *mut QcfPointerReport,
) -> QcfStatus {
    guard(|| {
        let grid = if half_width <= 0.0 || points == 0 {
            PointerGrid::default()
        } else {
            PointerGrid::new(half_width, points)?
        };
        let r = simulate_pointer(&deref(ens, "ensemble")?.0, &deref(dec, "decomposition")?.0, coupling, sigma, grid)?;
        *out_ref(out, "out")? = QcfPointerReport {
            coupling: r.coupling,
            pointer_mean: r.pointer_mean,
            postselection_probability: r.postselection_probability,
            inferred_weak_value_re: r.inferred_weak_value_re,
        };
        Ok(())
    })
}

/// Empty constraint set over `n_settings` settings `(parties[i], observables[i])`.
///
/// # Safety
/// `parties` and `observables` must each hold `n_settings` NUL-terminated
/// strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qcf_constraint_set_new(
    n_settings: usize,
    parties: *const *const c_char,
    observables: *const *const c_char,
    out: *mut *mut QcfConstraintSet,
) -> QcfStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        if n_settings > 0 && (parties.is_null() || observables.is_null()) {
            return Err(fail(QcfStatus::NullPointer, "settings are null"));
        }
        let given = (0..n_settings)
            .map(|i| Ok(Setting::new(string(*parties.add(i), "party")?, string(*observables.add(i), "observable")?)))
            .collect::<Result<Vec<_>, Failure>>()?;
        let set = ConstraintSet::new(given.clone(), Vec::new())?;
        *out = Box::into_raw(Box::new(QcfConstraintSet { given, set }));
        Ok(())
    })
}

/// The four GHZ parity constraints over `{A, B, C} x {x, y}`, universe in
/// sorted order `A_x, A_y, B_x, B_y, C_x, C_y`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qcf_constraint_set_ghz(out: *mut *mut QcfConstraintSet) -> QcfStatus {
    guard(|| {
        let set = scenarios::ghz_constraint_set();
        let given = set.universe().to_vec();
        *out_ref(out, "out")? = Box::into_raw(Box::new(QcfConstraintSet { given, set }));
        Ok(())
    })
}

/// Appends the constraint `prod settings[indices] = required` (+1 or -1).
///
/// # Safety
/// `cs` must be a live handle and `indices` must hold `n` values.
#[no_mangle]
pub unsafe extern "C" fn qcf_constraint_set_add(
    cs: *mut QcfConstraintSet,
    n: usize,
    indices: *const usize,
    required: i32,
) -> QcfStatus {
    guard(|| {
        let cs = out_ref(cs, "constraint set")?;
        if indices.is_null() && n > 0 {
            return Err(fail(QcfStatus::NullPointer, "indices is null"));
        }
        let sign = Sign::from_value(i64::from(required))
            .ok_or_else(|| fail(QcfStatus::InvalidArgument, "required must be +1 or -1"))?;
        let settings = (0..n)
            .map(|k| {
                let i = *indices.add(k);
                cs.given
                    .get(i)
                    .cloned()
                    .ok_or_else(|| fail(QcfStatus::InvalidArgument, format!("setting index {i} out of range")))
            })
            .collect::<Result<Vec<_>, Failure>>()?;
        let mut constraints = cs.set.constraints().to_vec();
        constraints.push(ProductConstraint::new(settings, sign)?);
        cs.set = ConstraintSet::new(cs.given.clone(), constraints)?;
        Ok(())
    })
}

/// # Safety
/// `cs` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qcf_constraint_set_free(cs: *mut QcfConstraintSet) {
    if !cs.is_null() {
        drop(Box::from_raw(cs));
    }
}

/// Exhaustive search. When satisfiable and `first` is non-null, writes the
/// first assignment (+1/-1) in the caller's setting order; `first` must then
/// have room for the universe size.
///
/// # Safety
/// `cs` must be a live handle; `satisfiable` and `count` must be writable;
/// `first` must be null or hold one int per setting.
#[no_mangle]
pub unsafe extern "C" fn qcf_lhv_search(
    cs: *const QcfConstraintSet,
    satisfiable: *mut bool,
    count: *mut u64,
    first: *mut i32,
) -> QcfStatus {
    guard(|| {
        let cs = deref(cs, "constraint set")?;
        let r = lhv::search(&cs.set)?;
        *out_ref(satisfiable, "satisfiable")? = r.satisfiable();
        *out_ref(count, "count")? = r.count;
        if let (Some(a), false) = (&r.first, first.is_null()) {
            for (i, s) in cs.given.iter().enumerate() {
                *first.add(i) = i32::from(a.get(s).map_or(0, Sign::value));
            }
        }
        Ok(())
    })
}

/// Writes the parity certificate's constraint indices and sets `*len`
/// (0 when there is none).
///
/// # Safety
/// `cs` must be a live handle, `indices` must have room for `capacity`
/// values and `len` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qcf_parity_certificate(
    cs: *const QcfConstraintSet,
    indices: *mut usize,
    capacity: usize,
    len: *mut usize,
) -> QcfStatus {
    guard(|| {
        let cert = lhv::parity_certificate(&deref(cs, "constraint set")?.set).unwrap_or_default();
        *out_ref(len, "len")? = cert.len();
        if cert.len() > capacity {
            return Err(fail(QcfStatus::BufferTooSmall, format!("need room for {} indices", cert.len())));
        }
        if !cert.is_empty() && indices.is_null() {
            return Err(fail(QcfStatus::NullPointer, "indices is null"));
        }
        for (k, i) in cert.into_iter().enumerate() {
            *indices.add(k) = i;
        }
        Ok(())
    })
}

/// Interaction-free measurement probabilities.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qcf_mach_zehnder(obstacle_present: bool, out: *mut QcfMachZehnder) -> QcfStatus {
    guard(|| {
        let o = scenarios::mach_zehnder(obstacle_present);
        *out_ref(out, "out")? = QcfMachZehnder { p_dark: o.p_dark, p_bright: o.p_bright, p_absorbed: o.p_absorbed };
        Ok(())
    })
}

/// JSON report for a named scenario (`ghz`, `three-box`, `ifm`). The string
/// must be released with `qcf_string_free`.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qcf_run_named_json(
    name: *const c_char,
    tol: f64,
    coupling: f64,
    out: *mut *mut c_char,
) -> QcfStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = ptr::null_mut();
        let name: ScenarioName = string(name, "name")?.parse()?;
        if !(tol.is_finite() && (0.0..1.0).contains(&tol)) || !coupling.is_finite() || coupling == 0.0 {
            return Err(fail(QcfStatus::InvalidArgument, "tol must be in [0, 1) and coupling non-zero"));
        }
        let opts = RunOptions { tol, coupling, ..RunOptions::default() };
        let json = run_named(name, &opts).to_json();
        *out = CString::new(json).map_err(|_| fail(QcfStatus::Panic, "report contains NUL"))?.into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qcf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
