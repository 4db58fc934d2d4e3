//! C ABI over the `pseudometric` library.
//!
//! Matrices cross the boundary as opaque `PmMatrix` handles created by the
//! `pm_*` constructors and released with [`pm_matrix_free`]. Every fallible
//! function returns a [`PmStatus`]; on failure a description is available
//! from [`pm_last_error_message`] on the same thread. Indices are 0-based.
//! Panics never unwind into C: they are reported as `PM_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use pseudometric::chart::{
    self, decode_natural, encode_natural_with, from_canonical, pair_count, to_canonical,
    CanonicalCoords, Level, NaturalCoords,
};
use pseudometric::densify::{densify_with, DensifyRequest};
use pseudometric::extend::{extend_metric_with, perturb_with, ExtensionProblem};
use pseudometric::family::{family_member, FamilySelector};
use pseudometric::{sup_distance, validate, DistanceMatrix, Error, Tolerance};

/// Result codes. Zero is success.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PmStatus {
    Ok = 0,
    NullPointer = 1,
    Malformed = 2,
    Dimension = 3,
    Domain = 4,
    Sampling = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

/// Opaque handle to a distance matrix.
pub struct PmMatrix(DistanceMatrix);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: impl Into<String>) {
    let text = CString::new(msg.into().replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(text));
}

fn clear_last_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

fn fail(status: PmStatus, msg: impl Into<String>) -> PmStatus {
    set_last_error(msg);
    status
}

fn from_error(e: Error) -> PmStatus {
    let status = match e {
        Error::Malformed(_) => PmStatus::Malformed,
        Error::Dimension { .. } => PmStatus::Dimension,
        Error::Domain(_) => PmStatus::Domain,
        Error::Sampling { .. } => PmStatus::Sampling,
    };
    fail(status, e.to_string())
}

/// Runs `body`, turning panics into `PM_STATUS_PANIC`.
fn guarded(body: impl FnOnce() -> Result<(), PmStatus>) -> PmStatus {
    clear_last_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => PmStatus::Ok,
        Ok(Err(status)) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(PmStatus::Panic, msg)
        }
    }
}

unsafe fn matrix_ref<'a>(m: *const PmMatrix, name: &str) -> Result<&'a DistanceMatrix, PmStatus> {
    m.as_ref()
        .map(|m| &m.0)
        .ok_or_else(|| fail(PmStatus::NullPointer, format!("{name} is null")))
}

unsafe fn input_slice<'a, T>(data: *const T, len: usize, name: &str) -> Result<&'a [T], PmStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if data.is_null() {
        return Err(fail(PmStatus::NullPointer, format!("{name} is null")));
    }
    Ok(slice::from_raw_parts(data, len))
}

unsafe fn out_ptr<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, PmStatus> {
    p.as_mut()
        .ok_or_else(|| fail(PmStatus::NullPointer, format!("{name} is null")))
}

unsafe fn store_matrix(out: *mut *mut PmMatrix, m: DistanceMatrix) -> Result<(), PmStatus> {
    *out_ptr(out, "out")? = Box::into_raw(Box::new(PmMatrix(m)));
    Ok(())
}

fn tolerance(eps: f64) -> Result<Tolerance, PmStatus> {
    Tolerance::new(eps).map_err(from_error)
}

/// Message for the most recent failure on this thread, or NULL. The pointer
/// stays valid until the next `pm_*` call on the same thread.
#[no_mangle]
pub extern "C" fn pm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Default absolute slack for triangle-inequality checks.
#[no_mangle]
pub extern "C" fn pm_default_tolerance() -> f64 {
    Tolerance::DEFAULT_EPS
}

/// Creates a matrix from `n * n` row-major entries.
///
/// # Safety
/// `entries` must point to `n * n` readable doubles (it may be NULL when
/// `n == 0`); `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pm_matrix_new(
    n: usize,
    entries: *const f64,
    out: *mut *mut PmMatrix,
) -> PmStatus {
    guarded(|| {
        let len = n
            .checked_mul(n)
            .ok_or_else(|| fail(PmStatus::Malformed, "matrix size overflows"))?;
        let data = input_slice(entries, len, "entries")?;
        let m = DistanceMatrix::new(n, data.to_vec()).map_err(from_error)?;
        store_matrix(out, m)
    })
}

/// Releases a matrix. NULL is ignored.
///
/// # Safety
/// `m` must come from a `pm_*` constructor and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn pm_matrix_free(m: *mut PmMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Number of points, or 0 for NULL.
///
/// # Safety
/// `m` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pm_matrix_size(m: *const PmMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.0.n())
}

/// Copies the row-major entries into `buf`, which holds `len` doubles.
///
/// # Safety
/// `m` must be a live handle; `buf` must hold `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn pm_matrix_copy_entries(
    m: *const PmMatrix,
    buf: *mut f64,
    len: usize,
) -> PmStatus {
    guarded(|| {
        let m = matrix_ref(m, "matrix")?;
        let src = m.as_slice();
        if len < src.len() {
            return Err(fail(
                PmStatus::BufferTooSmall,
                format!("need {} doubles, got {len}", src.len()),
            ));
        }
        if !src.is_empty() {
            if buf.is_null() {
                return Err(fail(PmStatus::NullPointer, "buf is null"));
            }
            ptr::copy_nonoverlapping(src.as_ptr(), buf, src.len());
        }
        Ok(())
    })
}

/// Checks the pseudometric and metric axioms. `violation_count` may be
/// NULL.
///
/// # Safety
/// `m` must be a live handle; output pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn pm_validate(
    m: *const PmMatrix,
    tolerance_abs: f64,
    is_pseudometric: *mut bool,
    is_metric: *mut bool,
    violation_count: *mut usize,
) -> PmStatus {
    guarded(|| {
        let m = matrix_ref(m, "matrix")?;
        let report = validate(m, tolerance(tolerance_abs)?);
        *out_ptr(is_pseudometric, "is_pseudometric")? = report.is_pseudometric;
        *out_ptr(is_metric, "is_metric")? = report.is_metric;
        if let Some(count) = violation_count.as_mut() {
            *count = report.violations.len();
        }
        Ok(())
    })
}

/// Largest absolute entrywise difference.
///
/// # Safety
/// `a`, `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pm_sup_distance(
    a: *const PmMatrix,
    b: *const PmMatrix,
    out: *mut f64,
) -> PmStatus {
    guarded(|| {
        let d = sup_distance(matrix_ref(a, "a")?, matrix_ref(b, "b")?).map_err(from_error)?;
        *out_ptr(out, "out")? = d;
        Ok(())
    })
}

/// Entrywise maximum with `base`, or with the discrete metric scaled by
/// `epsilon` when `base` is NULL.
///
/// # Safety
/// `d` must be a live handle, `base` NULL or a live handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pm_densify(
    d: *const PmMatrix,
    epsilon: f64,
    base: *const PmMatrix,
    tolerance_abs: f64,
    out: *mut *mut PmMatrix,
) -> PmStatus {
    guarded(|| {
        let mut req = DensifyRequest::new(matrix_ref(d, "d")?.clone(), epsilon);
        if let Some(b) = base.as_ref() {
            req = req.with_base(b.0.clone());
        }
        let rho = densify_with(&req, tolerance(tolerance_abs)?).map_err(from_error)?;
        store_matrix(out, rho)
    })
}

/// Extends the metric `subset` (placed at `indices`) to `full_n` points.
///
/// # Safety
/// `subset`, `target` must be live handles; `indices` must hold
/// `index_count` readable values; `out` must be writable.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn pm_extend(
    subset: *const PmMatrix,
    indices: *const usize,
    index_count: usize,
    full_n: usize,
    target: *const PmMatrix,
    cap: f64,
    floor: f64,
    tolerance_abs: f64,
    out: *mut *mut PmMatrix,
) -> PmStatus {
    guarded(|| {
        let problem = ExtensionProblem {
            subset_metric: matrix_ref(subset, "subset")?.clone(),
            indices: input_slice(indices, index_count, "indices")?.to_vec(),
            full_n,
            target: matrix_ref(target, "target")?.clone(),
            cap,
            floor,
        };
        let e = extend_metric_with(&problem, tolerance(tolerance_abs)?).map_err(from_error)?;
        store_matrix(out, e)
    })
}

/// `d` plus a metric bump of height `epsilon` across `(i, j)`.
///
/// # Safety
/// `d` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pm_perturb(
    d: *const PmMatrix,
    i: usize,
    j: usize,
    epsilon: f64,
    tolerance_abs: f64,
    out: *mut *mut PmMatrix,
) -> PmStatus {
    guarded(|| {
        let rho = perturb_with(matrix_ref(d, "d")?, i, j, epsilon, tolerance(tolerance_abs)?)
            .map_err(from_error)?;
        store_matrix(out, rho)
    })
}

/// Family member for the `k` selector bits (each 0 or 1).
///
/// # Safety
/// `bits` must hold `k` readable bytes; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pm_family_member(
    bits: *const u8,
    k: usize,
    out: *mut *mut PmMatrix,
) -> PmStatus {
    guarded(|| {
        let selector =
            FamilySelector::new(input_slice(bits, k, "bits")?.to_vec()).map_err(from_error)?;
        store_matrix(out, family_member(&selector))
    })
}

/// Random pseudometric from uniform chart coordinates.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pm_sample(
    n: usize,
    seed: u64,
    metric_only: bool,
    out: *mut *mut PmMatrix,
) -> PmStatus {
    guarded(|| {
        let d = chart::sample_pseudometric(n, seed, metric_only).map_err(from_error)?;
        store_matrix(out, d)
    })
}

/// `n(n-1)/2`: the number of chart coordinates for `n` points.
#[no_mangle]
pub extern "C" fn pm_chart_coordinate_count(n: usize) -> usize {
    pair_count(n)
}

fn flatten_natural(c: &NaturalCoords) -> Vec<f64> {
    c.levels()
        .iter()
        .flat_map(|l| std::iter::once(l.s).chain(l.u.iter().copied()))
        .collect()
}

fn unflatten_natural(n: usize, flat: &[f64]) -> Result<NaturalCoords, PmStatus> {
    if n == 0 || flat.len() != pair_count(n) {
        return Err(fail(
            PmStatus::Dimension,
            format!("{} coordinates for {n} points", flat.len()),
        ));
    }
    let mut rest = flat;
    let levels = (0..n - 1)
        .map(|m| {
            let (head, tail) = rest.split_at(m + 1);
            rest = tail;
            Level {
                s: head[0],
                u: head[1..].to_vec(),
            }
        })
        .collect();
    NaturalCoords::new(n, levels).map_err(from_error)
}

fn write_out(buf: *mut f64, len: usize, values: &[f64]) -> Result<(), PmStatus> {
    if len < values.len() {
        return Err(fail(
            PmStatus::BufferTooSmall,
            format!("need {} doubles, got {len}", values.len()),
        ));
    }
    if !values.is_empty() {
        if buf.is_null() {
            return Err(fail(PmStatus::NullPointer, "coordinate buffer is null"));
        }
        // SAFETY: caller guarantees `len` writable doubles at `buf`.
        unsafe { ptr::copy_nonoverlapping(values.as_ptr(), buf, values.len()) };
    }
    Ok(())
}

/// Natural chart coordinates, flattened level by level as
/// `s_2, s_3, u_3[0], s_4, u_4[0], u_4[1], ...` (`n(n-1)/2` values).
///
/// # Safety
/// `d` must be a live handle; `coords` must hold `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn pm_chart_encode_natural(
    d: *const PmMatrix,
    tolerance_abs: f64,
    coords: *mut f64,
    len: usize,
) -> PmStatus {
    guarded(|| {
        let c = encode_natural_with(matrix_ref(d, "d")?, tolerance(tolerance_abs)?)
            .map_err(from_error)?;
        write_out(coords, len, &flatten_natural(&c))
    })
}

/// Inverse of [`pm_chart_encode_natural`].
///
/// # Safety
/// `coords` must hold `len` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pm_chart_decode_natural(
    n: usize,
    coords: *const f64,
    len: usize,
    out: *mut *mut PmMatrix,
) -> PmStatus {
    guarded(|| {
        let c = unflatten_natural(n, input_slice(coords, len, "coords")?)?;
        store_matrix(out, decode_natural(&c))
    })
}

/// Canonical chart point: `n(n-1)/2 - 1` closed coordinates into `closed`
/// and the half-open one into `half_open`. Needs `n >= 2`.
///
/// # Safety
/// `d` must be a live handle; `closed` must hold `len` writable doubles;
/// `half_open` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pm_chart_encode(
    d: *const PmMatrix,
    tolerance_abs: f64,
    closed: *mut f64,
    len: usize,
    half_open: *mut f64,
) -> PmStatus {
    guarded(|| {
        let c = encode_natural_with(matrix_ref(d, "d")?, tolerance(tolerance_abs)?)
            .map_err(from_error)?;
        let q = to_canonical(&c).map_err(from_error)?;
        let h = out_ptr(half_open, "half_open")?;
        write_out(closed, len, q.closed())?;
        *h = q.half_open();
        Ok(())
    })
}

/// Pseudometric at a canonical chart point.
///
/// # Safety
/// `closed` must hold `len` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pm_chart_decode(
    n: usize,
    closed: *const f64,
    len: usize,
    half_open: f64,
    out: *mut *mut PmMatrix,
) -> PmStatus {
    guarded(|| {
        let closed = input_slice(closed, len, "closed")?.to_vec();
        let q = CanonicalCoords::new(n, closed, half_open).map_err(from_error)?;
        let c = from_canonical(&q).map_err(from_error)?;
        store_matrix(out, decode_natural(&c))
    })
}

/// `[0,1)^2 -> [0,1] x [0,1)`.
///
/// # Safety
/// `c`, `h` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pm_square_pack(a: f64, b: f64, c: *mut f64, h: *mut f64) -> PmStatus {
    guarded(|| {
        let (x, y) = chart::square_pack(a, b).map_err(from_error)?;
        *out_ptr(c, "c")? = x;
        *out_ptr(h, "h")? = y;
        Ok(())
    })
}

/// Inverse of [`pm_square_pack`].
///
/// # Safety
/// `a`, `b` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pm_square_unpack(c: f64, h: f64, a: *mut f64, b: *mut f64) -> PmStatus {
    guarded(|| {
        let (x, y) = chart::square_unpack(c, h).map_err(from_error)?;
        *out_ptr(a, "a")? = x;
        *out_ptr(b, "b")? = y;
        Ok(())
    })
}
