//! C ABI over `superclt`.
//!
//! Every function returns a [`SupercltStatus`] and writes results through
//! out-pointers. On failure the message is available from
//! [`superclt_last_error`] on the calling thread until the next call.
//! Objects are opaque handles created by `*_new`/`*_run` functions and
//! released with the matching `*_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use superclt::cltlab::{verify_all, CltCheck, VerifySettings};
use superclt::moments::{beta2, eta2, mean_functional, rho2, sigma2, variance_functional, ACoefficient};
use superclt::simulator::{run_ensemble, run_ensemble_with_threads, Ensemble, NamedFunction, SimPlan};
use superclt::spectral::{classify, eigenvalue, multiplicity, Gamma, Regime};
use superclt::{EigenIndex, Error, InitialMeasure, SpectralFunction, SuperOUConfig};

/// Result code of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SupercltStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// Invalid model, function, plan or argument.
    Validation = 2,
    /// Population cap or replica failures.
    Resource = 3,
    /// Not enough surviving replicas to verify.
    InsufficientData = 4,
    Io = 5,
    /// A Rust panic was caught at the boundary.
    Panic = 6,
}

/// Regime of a function, by the classes of its nonzero eigen-levels.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SupercltRegime {
    Large = 0,
    Critical = 1,
    Small = 2,
    Mixed = 3,
    Zero = 4,
}

/// A super-OU model.
pub struct SupercltModel(SuperOUConfig);

/// A finite eigen-expansion Σ a_n φ_n.
pub struct SupercltFunction(SpectralFunction);

/// Simulated replicas with their plan and registered functions.
pub struct SupercltEnsemble(Ensemble);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

enum Failure {
    Null(&'static str),
    Core(Error),
    Arg(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Outcome = std::result::Result<(), Failure>;

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> SupercltStatus {
    if e.is_validation() {
        SupercltStatus::Validation
    } else if e.is_resource() {
        SupercltStatus::Resource
    } else {
        match e {
            Error::InsufficientData(_) => SupercltStatus::InsufficientData,
            Error::Io(_) => SupercltStatus::Io,
            _ => SupercltStatus::Validation,
        }
    }
}

fn guard(body: impl FnOnce() -> Outcome) -> SupercltStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => SupercltStatus::Ok,
        Ok(Err(Failure::Null(what))) => {
            set_error(format!("{what} must not be null"));
            SupercltStatus::NullPointer
        }
        Ok(Err(Failure::Arg(msg))) => {
            set_error(msg);
            SupercltStatus::Validation
        }
        Ok(Err(Failure::Core(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            SupercltStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(what))
}

unsafe fn deref_mut<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or(Failure::Null(what))
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &'static str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn string<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::Arg(format!("{what} is not valid UTF-8")))
}

unsafe fn write<T>(out: *mut T, value: T, what: &'static str) -> Outcome {
    *deref_mut(out, what)? = value;
    Ok(())
}

unsafe fn write_handle<T>(out: *mut *mut T, value: T) -> Outcome {
    let slot = deref_mut(out, "out")?;
    *slot = Box::into_raw(Box::new(value));
    Ok(())
}

fn regime_code(r: Regime) -> SupercltRegime {
    match r {
        Regime::Large => SupercltRegime::Large,
        Regime::Critical => SupercltRegime::Critical,
        Regime::Small => SupercltRegime::Small,
        Regime::Mixed => SupercltRegime::Mixed,
        Regime::Zero => SupercltRegime::Zero,
    }
}

/// Message of the last failed call on this thread, or NULL. The pointer is
/// valid until the next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn superclt_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn superclt_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Frees a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn superclt_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Creates a model from its parameters: dimension, OU drift c, diffusion
/// σ², branching coefficients a and b, and branching rate β.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn superclt_model_new(
    dimension: u32,
    drift_c: f64,
    diffusion: f64,
    branch_a: f64,
    branch_b: f64,
    branch_rate: f64,
    out: *mut *mut SupercltModel,
) -> SupercltStatus {
    guard(|| {
        let cfg = SuperOUConfig::new(dimension, drift_c, diffusion, branch_a, branch_b, branch_rate)?;
        write_handle(out, SupercltModel(cfg))
    })
}

/// Creates a model from the JSON "model" object of a config file.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn superclt_model_from_json(json: *const c_char, out: *mut *mut SupercltModel) -> SupercltStatus {
    guard(|| {
        let text = string(json, "json")?;
        let cfg: SuperOUConfig = serde_json::from_str(text).map_err(Error::from)?;
        write_handle(out, SupercltModel(cfg))
    })
}

/// # Safety
/// `model` must come from this library and not have been freed. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn superclt_model_free(model: *mut SupercltModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// λ_k of eigen-level `k` (1-based).
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn superclt_model_eigenvalue(model: *const SupercltModel, k: u32, out: *mut f64) -> SupercltStatus {
    guard(|| {
        let m = deref(model, "model")?;
        let slot = deref_mut(out, "out")?;
        *slot = eigenvalue(&m.0, k)?;
        Ok(())
    })
}

/// Number of eigenfunctions at level `k` (1-based).
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn superclt_model_multiplicity(model: *const SupercltModel, k: u32, out: *mut usize) -> SupercltStatus {
    guard(|| {
        let m = deref(model, "model")?;
        let slot = deref_mut(out, "out")?;
        *slot = multiplicity(&m.0, k)?;
        Ok(())
    })
}

/// Creates the zero function.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn superclt_function_new(out: *mut *mut SupercltFunction) -> SupercltStatus {
    guard(|| write_handle(out, SupercltFunction(SpectralFunction::zero())))
}

/// Adds `value` to the coefficient of the eigenfunction with per-coordinate
/// Hermite orders `orders[0..dim]`.
///
/// # Safety
/// `f` must be a valid handle and `orders` must point to `dim` values.
#[no_mangle]
pub unsafe extern "C" fn superclt_function_add_term(
    f: *mut SupercltFunction,
    orders: *const u32,
    dim: usize,
    value: f64,
) -> SupercltStatus {
    guard(|| {
        let f = deref_mut(f, "function")?;
        let orders = slice(orders, dim, "orders")?;
        if orders.is_empty() {
            return Err(Failure::Arg("an eigen-index needs at least one coordinate".into()));
        }
        if !value.is_finite() {
            return Err(Failure::Arg(format!("coefficient must be finite, got {value}")));
        }
        f.0.add_term(EigenIndex::new(orders.to_vec()), value);
        Ok(())
    })
}

/// # Safety
/// `f` must come from this library and not have been freed. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn superclt_function_free(f: *mut SupercltFunction) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// f(x) for a point `x[0..dim]`.
///
/// # Safety
/// Handles must be valid and `x` must point to `dim` values.
#[no_mangle]
pub unsafe extern "C" fn superclt_function_eval(
    model: *const SupercltModel,
    f: *const SupercltFunction,
    x: *const f64,
    dim: usize,
    out: *mut f64,
) -> SupercltStatus {
    guard(|| {
        let (m, f) = (deref(model, "model")?, deref(f, "function")?);
        m.0.check_function(&f.0)?;
        let x = slice(x, dim, "x")?;
        let slot = deref_mut(out, "out")?;
        *slot = f.0.eval(&m.0, x)?;
        Ok(())
    })
}

/// Regime of `f` and its leading level γ(f); γ is 0 for the zero function.
///
/// # Safety
/// Handles and out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn superclt_classify(
    model: *const SupercltModel,
    f: *const SupercltFunction,
    out_regime: *mut SupercltRegime,
    out_gamma: *mut u32,
) -> SupercltStatus {
    guard(|| {
        let (m, f) = (deref(model, "model")?, deref(f, "function")?);
        let regime = deref_mut(out_regime, "out_regime")?;
        let gamma = deref_mut(out_gamma, "out_gamma")?;
        m.0.check_function(&f.0)?;
        let c = classify(&f.0, &m.0);
        *regime = regime_code(c.regime);
        *gamma = match c.gamma {
            Gamma::Finite(k) => k,
            Gamma::Infinite => 0,
        };
        Ok(())
    })
}

unsafe fn limit(
    model: *const SupercltModel,
    f: *const SupercltFunction,
    out: *mut f64,
    which: fn(&SpectralFunction, &SuperOUConfig, &ACoefficient) -> superclt::Result<superclt::moments::LimitConstant>,
) -> SupercltStatus {
    guard(|| {
        let (m, f) = (deref(model, "model")?, deref(f, "function")?);
        let a = ACoefficient::from_model(&m.0);
        let slot = deref_mut(out, "out")?;
        *slot = which(&f.0, &m.0, &a)?.value;
        Ok(())
    })
}

/// σ²_f of a small-regime function.
///
/// # Safety
/// Handles and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn superclt_sigma2(model: *const SupercltModel, f: *const SupercltFunction, out: *mut f64) -> SupercltStatus {
    limit(model, f, out, sigma2)
}

/// ρ²_h of a critical-regime function.
///
/// # Safety
/// Handles and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn superclt_rho2(model: *const SupercltModel, f: *const SupercltFunction, out: *mut f64) -> SupercltStatus {
    limit(model, f, out, rho2)
}

/// β²_g of a large-regime function.
///
/// # Safety
/// Handles and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn superclt_beta2(model: *const SupercltModel, f: *const SupercltFunction, out: *mut f64) -> SupercltStatus {
    limit(model, f, out, beta2)
}

/// η²(f, x) of a function whose leading level is large.
///
/// # Safety
/// Handles and `out` must be valid and `x` must point to `dim` values.
#[no_mangle]
pub unsafe extern "C" fn superclt_eta2(
    model: *const SupercltModel,
    f: *const SupercltFunction,
    x: *const f64,
    dim: usize,
    out: *mut f64,
) -> SupercltStatus {
    guard(|| {
        let (m, f) = (deref(model, "model")?, deref(f, "function")?);
        let x = slice(x, dim, "x")?;
        let a = ACoefficient::from_model(&m.0);
        let slot = deref_mut(out, "out")?;
        *slot = eta2(&f.0, x, &m.0, &a)?.value;
        Ok(())
    })
}

/// E⟨f, X_t⟩ started from a unit point mass at `x`.
///
/// # Safety
/// Handles and `out` must be valid and `x` must point to `dim` values.
#[no_mangle]
pub unsafe extern "C" fn superclt_mean(
    model: *const SupercltModel,
    f: *const SupercltFunction,
    x: *const f64,
    dim: usize,
    t: f64,
    out: *mut f64,
) -> SupercltStatus {
    guard(|| {
        let (m, f) = (deref(model, "model")?, deref(f, "function")?);
        let x = slice(x, dim, "x")?;
        let mu = InitialMeasure::dirac(x.to_vec(), 1.0);
        let slot = deref_mut(out, "out")?;
        *slot = mean_functional(&mu, &f.0, t, &m.0)?;
        Ok(())
    })
}

/// Var⟨f, X_t⟩ started from a unit point mass at `x`.
///
/// # Safety
/// Handles and `out` must be valid and `x` must point to `dim` values.
#[no_mangle]
pub unsafe extern "C" fn superclt_variance(
    model: *const SupercltModel,
    f: *const SupercltFunction,
    x: *const f64,
    dim: usize,
    t: f64,
    out: *mut f64,
) -> SupercltStatus {
    guard(|| {
        let (m, f) = (deref(model, "model")?, deref(f, "function")?);
        let x = slice(x, dim, "x")?;
        let a = ACoefficient::from_model(&m.0);
        let slot = deref_mut(out, "out")?;
        *slot = variance_functional(x, &f.0, t, &m.0, &a)?;
        Ok(())
    })
}

/// Simulates the ensemble described by `plan_json` (the "sim" object of a
/// config file), recording the `count` functions `functions[i]` under
/// `names[i]`. `threads` = 0 uses the default pool.
///
/// # Safety
/// `plan_json` and every `names[i]` must be NUL-terminated strings,
/// `names` and `functions` must point to `count` entries, and `out` must be
/// a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn superclt_ensemble_run(
    model: *const SupercltModel,
    plan_json: *const c_char,
    names: *const *const c_char,
    functions: *const *const SupercltFunction,
    count: usize,
    threads: usize,
    out: *mut *mut SupercltEnsemble,
) -> SupercltStatus {
    guard(|| {
        let m = deref(model, "model")?;
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        let plan: SimPlan = serde_json::from_str(string(plan_json, "plan_json")?).map_err(Error::from)?;
        let names = slice(names, count, "names")?;
        let fs = slice(functions, count, "functions")?;
        let mut named = Vec::with_capacity(count);
        for (&n, &f) in names.iter().zip(fs) {
            named.push(NamedFunction::new(string(n, "names[i]")?, deref(f, "functions[i]")?.0.clone()));
        }
        let ens = if threads > 0 {
            run_ensemble_with_threads(&plan, &m.0, &named, threads)?
        } else {
            run_ensemble(&plan, &m.0, &named)?
        };
        write_handle(out, SupercltEnsemble(ens))
    })
}

/// # Safety
/// `ens` must come from this library and not have been freed. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn superclt_ensemble_free(ens: *mut SupercltEnsemble) {
    if !ens.is_null() {
        drop(Box::from_raw(ens));
    }
}

/// Numbers of replicas, checkpoints and registered functions.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn superclt_ensemble_shape(
    ens: *const SupercltEnsemble,
    out_replicas: *mut usize,
    out_checkpoints: *mut usize,
    out_functions: *mut usize,
) -> SupercltStatus {
    guard(|| {
        let e = &deref(ens, "ensemble")?.0;
        let replicas = deref_mut(out_replicas, "out_replicas")?;
        let checkpoints = deref_mut(out_checkpoints, "out_checkpoints")?;
        let functions = deref_mut(out_functions, "out_functions")?;
        *replicas = e.records.len();
        *checkpoints = e.plan.checkpoints.len();
        *functions = e.functions.len();
        Ok(())
    })
}

/// ⟨f_function, X_t⟩ and survival of one replica at one checkpoint.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn superclt_ensemble_readout(
    ens: *const SupercltEnsemble,
    replica: usize,
    checkpoint: usize,
    function: usize,
    out_value: *mut f64,
    out_survived: *mut bool,
) -> SupercltStatus {
    guard(|| {
        let e = &deref(ens, "ensemble")?.0;
        let c = e
            .records
            .get(replica)
            .and_then(|r| r.checkpoints.get(checkpoint))
            .ok_or_else(|| Failure::Arg(format!("no replica {replica} at checkpoint {checkpoint}")))?;
        let v = *c
            .readouts
            .get(function)
            .ok_or_else(|| Failure::Arg(format!("no function {function}")))?;
        let value = deref_mut(out_value, "out_value")?;
        let survived = deref_mut(out_survived, "out_survived")?;
        *value = v;
        *survived = c.survived;
        Ok(())
    })
}

/// Horizon estimate of W_∞ for one replica.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn superclt_ensemble_w_inf(ens: *const SupercltEnsemble, replica: usize, out: *mut f64) -> SupercltStatus {
    guard(|| {
        let e = &deref(ens, "ensemble")?.0;
        let r = e
            .records
            .get(replica)
            .ok_or_else(|| Failure::Arg(format!("no replica {replica}")))?;
        write(out, r.horizon.w_inf_hat, "out")
    })
}

/// Runs the verification suites with default settings and returns the
/// report as a JSON string to be freed with [`superclt_string_free`]. The
/// joint CLT check runs when `f`, `h` and `g` are all non-NULL; `t` must
/// then be a checkpoint.
///
/// # Safety
/// Handles must be valid or NULL as described; `out_json` must be valid.
#[no_mangle]
pub unsafe extern "C" fn superclt_ensemble_verify(
    ens: *const SupercltEnsemble,
    f: *const SupercltFunction,
    h: *const SupercltFunction,
    g: *const SupercltFunction,
    t: f64,
    out_json: *mut *mut c_char,
) -> SupercltStatus {
    guard(|| {
        let e = &deref(ens, "ensemble")?.0;
        let slot = deref_mut(out_json, "out_json")?;
        let clt = match (f.as_ref(), h.as_ref(), g.as_ref()) {
            (Some(f), Some(h), Some(g)) => Some(CltCheck { f: f.0.clone(), h: h.0.clone(), g: g.0.clone(), t }),
            (None, None, None) => None,
            _ => return Err(Failure::Arg("f, h and g must be all set or all NULL".into())),
        };
        let a = ACoefficient::from_model(&e.cfg);
        let report = verify_all(e, clt.as_ref(), &[], &e.cfg, &a, &VerifySettings::default())?;
        let json = serde_json::to_string(&report).map_err(Error::from)?;
        let c = CString::new(json).map_err(|_| Failure::Arg("report contains NUL".into()))?;
        *slot = c.into_raw();
        Ok(())
    })
}
