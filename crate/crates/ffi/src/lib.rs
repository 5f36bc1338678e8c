//! C ABI for the twin dragon line-section library: opaque automaton
//! handles, status codes, and plain-C value structs. The generated
//! header lives in `include/twindragon.h`.
//!
//! Ownership rules: every `*mut TdAutomaton` returned through an out
//! parameter must be released with `td_automaton_free`; every string
//! with `td_string_free`. All functions tolerate null handles and
//! report `TD_STATUS_NULL_ARGUMENT` instead of crashing.

use std::ffi::{c_char, CString};

use twindragon::buchi::{BuchiAutomaton, Cardinality};
use twindragon::cns::Rational;
use twindragon::dimension::{check_not_s_minus_1, hausdorff_dimension};
use twindragon::line::{boundary_line_automaton, build_line_automaton, normalize_line};
use twindragon::Error;

/// Opaque automaton handle.
pub struct TdAutomaton(BuchiAutomaton);

/// Status codes of every fallible entry point.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TdStatus {
    TdStatusOk = 0,
    TdStatusNullArgument = 1,
    TdStatusInvalidArgument = 2,
    TdStatusDegenerateLine = 3,
    TdStatusOverflow = 4,
    TdStatusInternal = 5,
}

fn status_of(e: &Error) -> TdStatus {
    match e {
        Error::DegenerateLine => TdStatus::TdStatusDegenerateLine,
        Error::Overflow => TdStatus::TdStatusOverflow,
        Error::ZeroDenominator | Error::InvalidArgument(_) | Error::OutOfRange(_) => {
            TdStatus::TdStatusInvalidArgument
        }
        _ => TdStatus::TdStatusInternal,
    }
}

/// Export formats of `td_automaton_export`.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TdFormat {
    TdFormatGraph = 0,
    TdFormatJson = 1,
}

/// Cardinality classes of the section's point set.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TdCardinality {
    TdCardinalityFinite = 0,
    TdCardinalityCountablyInfinite = 1,
    TdCardinalityUncountable = 2,
}

/// Flat dimension report.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct TdDimension {
    /// Nonzero when the intersection is empty; the numeric fields are
    /// then zero.
    pub empty: u8,
    pub states: usize,
    pub edges: usize,
    /// Spectral radius β of the dominant component.
    pub beta: f64,
    /// Hausdorff dimension log β / log 4.
    pub dimension: f64,
    pub cardinality: TdCardinality,
    /// Number of points when `cardinality` is finite, 0 otherwise.
    pub finite_count: u64,
    /// Nonzero when the certificate that the dimension differs from
    /// 𝔰 − 1 holds (boundary sections).
    pub not_s_minus_1: u8,
}

/// Builds the automaton of the line p·x + q·y = r (each rational given
/// as numerator/denominator), optionally restricted to the dragon's
/// boundary, trimmed. On success stores a new handle in `out`.
///
/// # Safety
/// `out` must be a valid pointer to writable memory.
#[no_mangle]
pub unsafe extern "C" fn td_line_automaton_build(
    p_num: i64,
    p_den: i64,
    q_num: i64,
    q_den: i64,
    r_num: i64,
    r_den: i64,
    boundary: u8,
    out: *mut *mut TdAutomaton,
) -> TdStatus {
    if out.is_null() {
        return TdStatus::TdStatusNullArgument;
    }
    let build = || -> twindragon::Result<BuchiAutomaton> {
        let l = normalize_line(
            Rational::new(p_num as i128, p_den as i128)?,
            Rational::new(q_num as i128, q_den as i128)?,
            Rational::new(r_num as i128, r_den as i128)?,
        )?;
        if boundary != 0 {
            boundary_line_automaton(&l)
        } else {
            build_line_automaton(&l)
        }
    };
    match build() {
        Ok(a) => {
            *out = Box::into_raw(Box::new(TdAutomaton(a)));
            TdStatus::TdStatusOk
        }
        Err(e) => {
            *out = std::ptr::null_mut();
            status_of(&e)
        }
    }
}

/// Releases an automaton handle. Null is a no-op.
///
/// # Safety
/// `a` must be null or a handle obtained from this library that has not
/// been freed already.
#[no_mangle]
pub unsafe extern "C" fn td_automaton_free(a: *mut TdAutomaton) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

/// Number of states; 0 for a null handle.
///
/// # Safety
/// `a` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn td_automaton_state_count(a: *const TdAutomaton) -> usize {
    a.as_ref().map_or(0, |a| a.0.state_count())
}

/// Number of labeled edges; 0 for a null handle.
///
/// # Safety
/// `a` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn td_automaton_edge_count(a: *const TdAutomaton) -> usize {
    a.as_ref().map_or(0, |a| a.0.edge_count())
}

/// Serializes the automaton; stores a NUL-terminated UTF-8 string in
/// `out`, to be released with `td_string_free`.
///
/// # Safety
/// `a` must be a live handle and `out` a valid writable pointer.
#[no_mangle]
pub unsafe extern "C" fn td_automaton_export(
    a: *const TdAutomaton,
    format: TdFormat,
    out: *mut *mut c_char,
) -> TdStatus {
    if out.is_null() {
        return TdStatus::TdStatusNullArgument;
    }
    *out = std::ptr::null_mut();
    let Some(a) = a.as_ref() else {
        return TdStatus::TdStatusNullArgument;
    };
    let text = match format {
        TdFormat::TdFormatGraph => a.0.export_graph(),
        TdFormat::TdFormatJson => a.0.export_json(),
    };
    match CString::new(text) {
        Ok(s) => {
            *out = s.into_raw();
            TdStatus::TdStatusOk
        }
        Err(_) => TdStatus::TdStatusInternal,
    }
}

/// Releases a string returned by this library. Null is a no-op.
///
/// # Safety
/// `s` must be null or a string obtained from this library that has not
/// been freed already.
#[no_mangle]
pub unsafe extern "C" fn td_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Computes the dimension report of a trimmed automaton handle.
///
/// # Safety
/// `a` must be a live handle and `out` a valid writable pointer.
#[no_mangle]
pub unsafe extern "C" fn td_dimension_report(
    a: *const TdAutomaton,
    out: *mut TdDimension,
) -> TdStatus {
    if out.is_null() {
        return TdStatus::TdStatusNullArgument;
    }
    let Some(a) = a.as_ref() else {
        return TdStatus::TdStatusNullArgument;
    };
    let report = match hausdorff_dimension(&a.0) {
        Ok(r) => r,
        Err(e) => return status_of(&e),
    };
    let (cardinality, finite_count) = match report.cardinality {
        Some(Cardinality::Finite(k)) => (TdCardinality::TdCardinalityFinite, k),
        Some(Cardinality::CountablyInfinite) => {
            (TdCardinality::TdCardinalityCountablyInfinite, 0)
        }
        Some(Cardinality::Uncountable) | None => (TdCardinality::TdCardinalityUncountable, 0),
    };
    let not_s_minus_1 = if report.empty {
        0
    } else {
        match check_not_s_minus_1(&report) {
            Ok(cert) => u8::from(cert.ok),
            Err(_) => 0,
        }
    };
    *out = TdDimension {
        empty: u8::from(report.empty),
        states: report.states,
        edges: report.edges,
        beta: report.beta.unwrap_or(0.0),
        dimension: report.dimension.unwrap_or(0.0),
        cardinality,
        finite_count,
        not_s_minus_1,
    };
    TdStatus::TdStatusOk
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn build_query_export_free() {
        unsafe {
            let mut handle: *mut TdAutomaton = std::ptr::null_mut();
            // Δ_{1,0,−1/5} normalizes to Δ_{5,0,−1}.
            let st =
                td_line_automaton_build(1, 1, 0, 1, -1, 5, 1, &mut handle);
            assert_eq!(st, TdStatus::TdStatusOk);
            assert_eq!(td_automaton_state_count(handle), 2);
            assert_eq!(td_automaton_edge_count(handle), 6);

            let mut dim = std::mem::zeroed::<TdDimension>();
            assert_eq!(td_dimension_report(handle, &mut dim), TdStatus::TdStatusOk);
            assert_eq!(dim.empty, 0);
            assert!((dim.beta - 3.0).abs() < 1e-9);
            assert!((dim.dimension - 3.0f64.ln() / 4.0f64.ln()).abs() < 1e-9);
            assert_eq!(dim.cardinality, TdCardinality::TdCardinalityUncountable);
            assert_eq!(dim.not_s_minus_1, 1);

            let mut text: *mut c_char = std::ptr::null_mut();
            assert_eq!(
                td_automaton_export(handle, TdFormat::TdFormatJson, &mut text),
                TdStatus::TdStatusOk
            );
            let json = std::ffi::CStr::from_ptr(text).to_str().unwrap();
            assert!(json.contains("\"states\""));
            td_string_free(text);
            td_automaton_free(handle);
        }
    }

    #[test]
    fn error_paths() {
        unsafe {
            let mut handle: *mut TdAutomaton = std::ptr::null_mut();
            // Degenerate line p = q = 0.
            assert_eq!(
                td_line_automaton_build(0, 1, 0, 1, 1, 1, 0, &mut handle),
                TdStatus::TdStatusDegenerateLine
            );
            assert!(handle.is_null());
            // Zero denominator.
            assert_eq!(
                td_line_automaton_build(1, 0, 0, 1, 1, 1, 0, &mut handle),
                TdStatus::TdStatusInvalidArgument
            );
            // Null handles are tolerated everywhere.
            assert_eq!(td_automaton_state_count(std::ptr::null()), 0);
            let mut dim = std::mem::zeroed::<TdDimension>();
            assert_eq!(
                td_dimension_report(std::ptr::null(), &mut dim),
                TdStatus::TdStatusNullArgument
            );
            td_automaton_free(std::ptr::null_mut());
            td_string_free(std::ptr::null_mut());
        }
    }

    #[test]
    fn empty_intersection_reports_empty() {
        unsafe {
            let mut handle: *mut TdAutomaton = std::ptr::null_mut();
            // x = 10 misses the dragon entirely.
            assert_eq!(
                td_line_automaton_build(1, 1, 0, 1, 10, 1, 0, &mut handle),
                TdStatus::TdStatusOk
            );
            assert_eq!(td_automaton_state_count(handle), 0);
            let mut dim = std::mem::zeroed::<TdDimension>();
            assert_eq!(td_dimension_report(handle, &mut dim), TdStatus::TdStatusOk);
            assert_eq!(dim.empty, 1);
            assert_eq!(dim.cardinality, TdCardinality::TdCardinalityFinite);
            assert_eq!(dim.finite_count, 0);
            td_automaton_free(handle);
        }
    }
}
