//! C ABI over `hodgenet`.
//!
//! Every function returns an `HnStatus`. Objects are opaque handles created by
//! `*_new`/`*_load` and released with the matching `*_free`. Dense arrays are
//! row-major `double` buffers. After a failure, `hn_last_error` gives the
//! message for the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hodgenet::complex::{hodge_laplacians, verify_chain_property, OrderOperators, SimplicialComplex};
use hodgenet::data::{load_complex, parse_complex};
use hodgenet::nn::{Activation, Architecture, Mode, NetworkSpec, SimplicialNetwork};
use hodgenet::tsp::{hodge_decompose, sft_basis, spatial_filter, spectral_filter, FilterSpec};
use hodgenet::{Cochain, Error};
use ndarray::Array2;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HnStatus {
    Ok = 0,
    NullPointer = 1,
    Parse = 2,
    Dimension = 3,
    Training = 4,
    InvalidArgument = 5,
    BufferTooSmall = 6,
    Internal = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HnArch {
    Snn = 0,
    Scnn = 1,
    Biscnn = 2,
    Mpnn = 3,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HnActivation {
    Identity = 0,
    LeakyRelu = 1,
    Tanh = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HnFilter {
    Identity = 0,
    LowPass = 1,
    HighPass = 2,
}

/// Opaque simplicial complex.
pub struct HnComplex {
    inner: SimplicialComplex,
}

/// Opaque network bound to one order of one complex.
pub struct HnNetwork {
    net: SimplicialNetwork,
    ops: OrderOperators,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(message: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = message);
}

fn status_of(e: &Error) -> HnStatus {
    match e {
        Error::Parse { .. }
        | Error::SchemaVersionMismatch { .. }
        | Error::DuplicateSimplex { .. }
        | Error::DuplicateVertex { .. }
        | Error::WrongCardinality { .. }
        | Error::EmptyComplex
        | Error::Io(_) => HnStatus::Parse,
        Error::DimensionMismatch(_) => HnStatus::Dimension,
        Error::Training { .. } | Error::StaleTape { .. } | Error::ConvergenceFailure(_) => HnStatus::Training,
        _ => HnStatus::InvalidArgument,
    }
}

struct Fail(HnStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null() -> Fail {
    Fail(HnStatus::NullPointer, "null pointer argument".into())
}

/// Runs `f`, recording any error or panic message.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> HnStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(String::new());
            HnStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            HnStatus::Internal
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(HnStatus::InvalidArgument, "string is not UTF-8".into()))
}

unsafe fn matrix_arg(p: *const f64, rows: usize, cols: usize) -> Result<Array2<f64>, Fail> {
    if p.is_null() {
        return Err(null());
    }
    let data = std::slice::from_raw_parts(p, rows * cols).to_vec();
    Ok(Array2::from_shape_vec((rows, cols), data).expect("length is rows * cols"))
}

unsafe fn write_out(values: &Array2<f64>, out: *mut f64, len: usize) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null());
    }
    if len < values.len() {
        return Err(Fail(
            HnStatus::BufferTooSmall,
            format!("output needs {} values, buffer holds {len}", values.len()),
        ));
    }
    let dst = std::slice::from_raw_parts_mut(out, values.len());
    dst.iter_mut().zip(values.iter()).for_each(|(d, &v)| *d = v);
    Ok(())
}

unsafe fn complex_ref<'a>(c: *const HnComplex) -> Result<&'a SimplicialComplex, Fail> {
    c.as_ref().map(|c| &c.inner).ok_or_else(null)
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len`). Returns the full message length.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn hn_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            ptr::copy_nonoverlapping(msg.as_ptr() as *const c_char, buf, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Loads a complex from a JSON file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hn_complex_load(path: *const c_char, out: *mut *mut HnComplex) -> HnStatus {
    guard(|| {
        let path = str_arg(path)?;
        if out.is_null() {
            return Err(null());
        }
        let inner = load_complex(path)?;
        *out = Box::into_raw(Box::new(HnComplex { inner }));
        Ok(())
    })
}

/// Parses a complex from JSON text.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hn_complex_from_json(json: *const c_char, out: *mut *mut HnComplex) -> HnStatus {
    guard(|| {
        let text = str_arg(json)?;
        if out.is_null() {
            return Err(null());
        }
        let inner = parse_complex(text, "<json>")?;
        *out = Box::into_raw(Box::new(HnComplex { inner }));
        Ok(())
    })
}

/// Builds a complex from maximal simplices given as a flat vertex list:
/// simplex `i` has `sizes[i]` vertices. Missing faces are added.
///
/// # Safety
/// `sizes` must hold `count` entries and `vertices` their sum.
#[no_mangle]
pub unsafe extern "C" fn hn_complex_from_simplices(
    vertices: *const usize,
    sizes: *const usize,
    count: usize,
    out: *mut *mut HnComplex,
) -> HnStatus {
    guard(|| {
        if vertices.is_null() || sizes.is_null() || out.is_null() {
            return Err(null());
        }
        let sizes = std::slice::from_raw_parts(sizes, count);
        let total: usize = sizes.iter().sum();
        let flat = std::slice::from_raw_parts(vertices, total);
        let mut lists: Vec<Vec<Vec<usize>>> = Vec::new();
        let mut at = 0;
        for &s in sizes {
            if s == 0 {
                return Err(Fail(HnStatus::InvalidArgument, "empty simplex".into()));
            }
            if lists.len() < s {
                lists.resize(s, Vec::new());
            }
            lists[s - 1].push(flat[at..at + s].to_vec());
            at += s;
        }
        let inner = SimplicialComplex::build(&lists).map_err(Fail::from)?;
        *out = Box::into_raw(Box::new(HnComplex { inner }));
        Ok(())
    })
}

/// # Safety
/// `c` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hn_complex_free(c: *mut HnComplex) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Highest simplex order `K`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hn_complex_order(c: *const HnComplex, out: *mut usize) -> HnStatus {
    guard(|| {
        let c = complex_ref(c)?;
        *out.as_mut().ok_or_else(null)? = c.order();
        Ok(())
    })
}

/// Number of `k`-simplices (0 above the top order).
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hn_complex_count(c: *const HnComplex, k: usize, out: *mut usize) -> HnStatus {
    guard(|| {
        let c = complex_ref(c)?;
        *out.as_mut().ok_or_else(null)? = if k <= c.order() { c.count(k) } else { 0 };
        Ok(())
    })
}

/// Largest `|entry|` of any `B_k B_{k+1}`; zero for a valid complex.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hn_complex_chain_max(c: *const HnComplex, out: *mut i64) -> HnStatus {
    guard(|| {
        let c = complex_ref(c)?;
        let max = verify_chain_property(c)?.iter().map(|r| r.max_abs).max().unwrap_or(0);
        *out.as_mut().ok_or_else(null)? = max;
        Ok(())
    })
}

/// Ascending eigenvalues of `L_k`; writes `N_k` values.
///
/// # Safety
/// `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn hn_laplacian_eigenvalues(c: *const HnComplex, k: usize, out: *mut f64, len: usize) -> HnStatus {
    guard(|| {
        let c = complex_ref(c)?;
        let basis = sft_basis(&hodge_laplacians(c, k)?.full)?;
        let n = basis.eigenvalues.len();
        write_out(&basis.eigenvalues.into_shape_with_order((n, 1)).expect("column"), out, len)
    })
}

/// Filters an `N_k x d` signal over the spectrum of `L_k`. `cutoff` applies to
/// the low/high presets.
///
/// # Safety
/// `x` must hold `rows * cols` doubles and `out` at least as many.
#[no_mangle]
pub unsafe extern "C" fn hn_filter(
    c: *const HnComplex,
    k: usize,
    preset: HnFilter,
    cutoff: f64,
    x: *const f64,
    rows: usize,
    cols: usize,
    out: *mut f64,
) -> HnStatus {
    guard(|| {
        let c = complex_ref(c)?;
        let x = Cochain::new(k, matrix_arg(x, rows, cols)?);
        let t = hodge_laplacians(c, k)?;
        let y = match preset {
            HnFilter::Identity => spatial_filter(&t, &[1.0], &x)?,
            HnFilter::LowPass => spectral_filter(&t.full, &FilterSpec::low_pass(cutoff), &x)?,
            HnFilter::HighPass => spectral_filter(&t.full, &FilterSpec::high_pass(cutoff), &x)?,
        };
        write_out(&y.values, out, rows * cols)
    })
}

/// Splits an `N_k x d` signal into its lower-induced (gradient), upper-induced
/// (curl) and harmonic parts. Any output pointer may be null to skip it.
///
/// # Safety
/// `x` must hold `rows * cols` doubles, each non-null output as many.
#[no_mangle]
pub unsafe extern "C" fn hn_hodge_decompose(
    c: *const HnComplex,
    k: usize,
    x: *const f64,
    rows: usize,
    cols: usize,
    lower: *mut f64,
    upper: *mut f64,
    harmonic: *mut f64,
) -> HnStatus {
    guard(|| {
        let c = complex_ref(c)?;
        let x = Cochain::new(k, matrix_arg(x, rows, cols)?);
        let parts = hodge_decompose(c, k, &x)?;
        for (dst, part) in [(lower, &parts.lower_induced), (upper, &parts.upper_induced), (harmonic, &parts.harmonic)] {
            if !dst.is_null() {
                write_out(&part.values, dst, rows * cols)?;
            }
        }
        Ok(())
    })
}

/// Creates a randomly initialized network on order `k` of `c` with layer
/// widths `widths[0..n_widths]`. The network keeps its own operators, so `c`
/// may be freed afterwards.
///
/// # Safety
/// `widths` must hold `n_widths` entries; pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hn_network_new(
    c: *const HnComplex,
    k: usize,
    arch: HnArch,
    widths: *const usize,
    n_widths: usize,
    activation: HnActivation,
    seed: u64,
    out: *mut *mut HnNetwork,
) -> HnStatus {
    guard(|| {
        let c = complex_ref(c)?;
        if widths.is_null() || out.is_null() {
            return Err(null());
        }
        let widths = std::slice::from_raw_parts(widths, n_widths).to_vec();
        let arch = match arch {
            HnArch::Snn => Architecture::Snn,
            HnArch::Scnn => Architecture::Scnn,
            HnArch::Biscnn => Architecture::Biscnn,
            HnArch::Mpnn => Architecture::Mpnn,
        };
        let activation = match activation {
            HnActivation::Identity => Activation::Identity,
            HnActivation::LeakyRelu => Activation::LeakyRelu,
            HnActivation::Tanh => Activation::Tanh,
        };
        let ops = OrderOperators::new(c, k)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let net = SimplicialNetwork::new(NetworkSpec::new(arch, widths, activation), &ops, &mut rng)?;
        *out = Box::into_raw(Box::new(HnNetwork { net, ops }));
        Ok(())
    })
}

/// # Safety
/// `n` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hn_network_free(n: *mut HnNetwork) {
    if !n.is_null() {
        drop(Box::from_raw(n));
    }
}

/// Number of trainable scalars.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hn_network_parameter_count(n: *const HnNetwork, out: *mut usize) -> HnStatus {
    guard(|| {
        let n = n.as_ref().ok_or_else(null)?;
        *out.as_mut().ok_or_else(null)? = n.net.count_parameters();
        Ok(())
    })
}

/// Forward pass on an `N_k x d_in` input; writes `N_k x d_out` values.
/// `infer` selects exact `Sign` for Bi-SCNN instead of hard-tanh.
///
/// # Safety
/// `x` must hold `rows * cols` doubles and `out` hold `len`.
#[no_mangle]
pub unsafe extern "C" fn hn_network_forward(
    n: *const HnNetwork,
    x: *const f64,
    rows: usize,
    cols: usize,
    infer: bool,
    out: *mut f64,
    len: usize,
) -> HnStatus {
    guard(|| {
        let n = n.as_ref().ok_or_else(null)?;
        let x = matrix_arg(x, rows, cols)?;
        let mode = if infer { Mode::Infer } else { Mode::Train };
        let tape = n.net.forward(&n.ops, &x, mode)?;
        write_out(&tape.output, out, len)
    })
}
