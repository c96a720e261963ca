//! C ABI over `klein_freq`.
//!
//! Every function returns a [`KfStatus`]; on failure a message is available from
//! [`kf_last_error_message`] on the calling thread. Panics are caught at the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use klein_freq::lattice::{integer_distance, LatticeFace, Rational};
use klein_freq::moebius1d::{freq_1d_exact, gk_frequency, MoebiusError};
use klein_freq::moebius2d::{
    frequency_exact, frequency_mc, FrequencyResult, McConfig, Moebius2dError,
};
use klein_freq::sail1d::{cf_expand, Parity};
use num_bigint::BigInt;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// The exact path only handles faces at integer distance 1.
    Unsupported = 3,
    BudgetExceeded = 4,
    InvariantViolation = 5,
    /// The caller's buffer is too short; the required length was written.
    BufferTooSmall = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KfParity {
    Shortest = 0,
    Even = 1,
    Odd = 2,
}

/// Frequency estimate; `samples` counts cubature pairs on the exact path.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct KfFrequency {
    pub value: f64,
    pub error: f64,
    pub samples: u64,
    pub accepted: u64,
    pub inconclusive: u64,
}

/// Opaque lattice face.
pub struct KfFace {
    face: LatticeFace,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

type Failure = (KfStatus, String);

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> KfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            KfStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            set_last_error(&format!("panic: {msg}"));
            KfStatus::Panic
        }
    }
}

fn invalid(e: impl std::fmt::Display) -> Failure {
    (KfStatus::InvalidArgument, e.to_string())
}

fn from_2d(e: Moebius2dError) -> Failure {
    let status = match e {
        Moebius2dError::DistanceNotOne(_) => KfStatus::Unsupported,
        Moebius2dError::BudgetExceeded { .. } | Moebius2dError::NoAcceptedSamples => {
            KfStatus::BudgetExceeded
        }
        Moebius2dError::DegenerateCell(_) | Moebius2dError::Singular => {
            KfStatus::InvariantViolation
        }
        _ => KfStatus::InvalidArgument,
    };
    (status, e.to_string())
}

fn from_1d(e: MoebiusError) -> Failure {
    let status = match e {
        MoebiusError::BudgetExceeded { .. } => KfStatus::BudgetExceeded,
        _ => KfStatus::InvalidArgument,
    };
    (status, e.to_string())
}

unsafe fn out_ref<'a, T>(p: *mut T) -> Result<&'a mut T, Failure> {
    p.as_mut()
        .ok_or((KfStatus::NullPointer, "null output pointer".into()))
}

unsafe fn face_ref<'a>(p: *const KfFace) -> Result<&'a KfFace, Failure> {
    p.as_ref()
        .ok_or((KfStatus::NullPointer, "null face handle".into()))
}

fn boxed(face: LatticeFace) -> *mut KfFace {
    Box::into_raw(Box::new(KfFace { face }))
}

fn frequency(r: &FrequencyResult) -> KfFrequency {
    KfFrequency {
        value: r.value,
        error: r.error,
        samples: r.samples,
        accepted: r.accepted,
        inconclusive: r.inconclusive,
    }
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn kf_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses `{"vertices": [[x,y,z], ...]}`. Free the result with `kf_face_free`.
///
/// # Safety
/// `json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kf_face_from_json(json: *const c_char, out: *mut *mut KfFace) -> KfStatus {
    guard(|| {
        let out = out_ref(out)?;
        if json.is_null() {
            return Err((KfStatus::NullPointer, "null json".into()));
        }
        let text = CStr::from_ptr(json).to_str().map_err(invalid)?;
        let face = LatticeFace::from_json(text).map_err(invalid)?;
        *out = boxed(face);
        Ok(())
    })
}

/// Builds a face from `n_vertices` triples laid out as `x0,y0,z0,x1,...`.
///
/// # Safety
/// `coords` must point to `3 * n_vertices` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kf_face_from_vertices(
    coords: *const i64,
    n_vertices: usize,
    out: *mut *mut KfFace,
) -> KfStatus {
    guard(|| {
        let out = out_ref(out)?;
        if coords.is_null() {
            return Err((KfStatus::NullPointer, "null coordinates".into()));
        }
        let flat = std::slice::from_raw_parts(coords, 3 * n_vertices);
        let triples: Vec<[i64; 3]> = flat.chunks_exact(3).map(|c| [c[0], c[1], c[2]]).collect();
        let face = LatticeFace::from_coords(&triples).map_err(invalid)?;
        *out = boxed(face);
        Ok(())
    })
}

/// # Safety
/// `face` must come from this library and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn kf_face_free(face: *mut KfFace) {
    if !face.is_null() {
        let _ = catch_unwind(AssertUnwindSafe(|| drop(Box::from_raw(face))));
    }
}

/// # Safety
/// `face` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kf_face_integer_distance(face: *const KfFace, out: *mut u64) -> KfStatus {
    guard(|| {
        let f = face_ref(face)?;
        *out_ref(out)? = integer_distance(&f.face);
        Ok(())
    })
}

/// Integer area (twice the Euclidean area in the plane lattice).
///
/// # Safety
/// `face` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kf_face_integer_area(face: *const KfFace, out: *mut u64) -> KfStatus {
    guard(|| {
        let f = face_ref(face)?;
        let area = u64::try_from(f.face.integer_area()).map_err(invalid)?;
        *out_ref(out)? = area;
        Ok(())
    })
}

/// Monte Carlo frequency; `workers == 0` picks the default worker count.
///
/// # Safety
/// `face` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kf_frequency_mc(
    face: *const KfFace,
    samples: u64,
    seed: u64,
    workers: u32,
    out: *mut KfFrequency,
) -> KfStatus {
    guard(|| {
        let f = face_ref(face)?;
        let out = out_ref(out)?;
        let mut cfg = McConfig::new(samples, seed);
        if workers > 0 {
            cfg = cfg.workers(workers as usize);
        }
        *out = frequency(&frequency_mc(&f.face, &cfg).map_err(from_2d)?);
        Ok(())
    })
}

/// Exact frequency to relative tolerance `tol`; faces at distance 1 only.
///
/// # Safety
/// `face` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kf_frequency_exact(
    face: *const KfFace,
    tol: f64,
    out: *mut KfFrequency,
) -> KfStatus {
    guard(|| {
        let f = face_ref(face)?;
        let out = out_ref(out)?;
        *out = frequency(&frequency_exact(&f.face, tol).map_err(from_2d)?);
        Ok(())
    })
}

/// `ln(1 + 1/(k(k+2)))`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kf_freq_1d_exact(k: i64, out: *mut f64) -> KfStatus {
    guard(|| {
        *out_ref(out)? = freq_1d_exact(k).map_err(from_1d)?;
        Ok(())
    })
}

/// Gauss-Kuzmin digit frequency `log2(1 + 1/(k(k+2)))`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kf_gk_frequency(k: i64, out: *mut f64) -> KfStatus {
    guard(|| {
        *out_ref(out)? = gk_frequency(k).map_err(from_1d)?;
        Ok(())
    })
}

/// Continued fraction of `num/den`. Writes up to `capacity` elements to `buf` and the
/// full length to `len`; returns `BufferTooSmall` if `capacity` is short.
///
/// # Safety
/// `buf` must have room for `capacity` values (may be null when `capacity` is 0);
/// `len` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kf_cf_expand(
    num: i64,
    den: i64,
    parity: KfParity,
    buf: *mut i64,
    capacity: usize,
    len: *mut usize,
) -> KfStatus {
    guard(|| {
        let len = out_ref(len)?;
        if den == 0 {
            return Err(invalid("zero denominator"));
        }
        let parity = match parity {
            KfParity::Shortest => Parity::Shortest,
            KfParity::Even => Parity::Even,
            KfParity::Odd => Parity::Odd,
        };
        let cf = cf_expand(&Rational::new(BigInt::from(num), BigInt::from(den)), parity);
        let elements: Vec<i64> = cf
            .elements()
            .iter()
            .map(|a| i64::try_from(a).map_err(invalid))
            .collect::<Result<_, _>>()?;
        *len = elements.len();
        if capacity < elements.len() {
            return Err((
                KfStatus::BufferTooSmall,
                format!("need {} elements, have {capacity}", elements.len()),
            ));
        }
        if buf.is_null() {
            return Err((KfStatus::NullPointer, "null buffer".into()));
        }
        std::slice::from_raw_parts_mut(buf, elements.len()).copy_from_slice(&elements);
        Ok(())
    })
}
