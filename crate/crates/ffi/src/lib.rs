//! C ABI for the haarwell engine.
//!
//! Every fallible function returns an [`HwStatus`]; on failure a message is
//! available from [`hw_last_error`]. Values and tables are opaque handles
//! owned by the caller and released with `hw_value_free` / `hw_table_free`.
//! Strings returned through out-pointers are released with
//! `hw_string_free`. The header is `include/haarwell.h`.

mod error;

use std::ffi::{c_char, CString};

use haarwell::haar_integrate::{integrate, parse_monomial, Dimension};
use haarwell::montecarlo::{estimate_moment, RngSpec};
use haarwell::symmetric::Permutation;
use haarwell::weingarten::{moebius, parse_rational, GroupKind, Mode, TableCache, TableKey, WeingartenTable};
use haarwell::exactmath::RationalFunction;

pub use error::{hw_last_error, HwStatus};
use error::{check_out, guard, into_c_string, optional_str, required_str, Failure};

/// An exact value: a rational function of `n`, or a rational number.
pub struct HwValue {
    inner: RationalFunction,
}

/// A Weingarten table: `(key, value)` entries in a fixed order.
pub struct HwTable {
    group: GroupKind,
    k: usize,
    mode: String,
    entries: Vec<(CString, RationalFunction)>,
}

/// Result of a Monte-Carlo moment estimate.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct HwEstimate {
    pub mean_re: f64,
    pub mean_im: f64,
    pub std_error: f64,
    pub samples: u64,
}

/// ABI version, `major * 10000 + minor * 100 + patch`.
#[no_mangle]
pub extern "C" fn hw_version() -> u32 {
    100
}

fn parse_group(text: &str) -> Result<GroupKind, Failure> {
    Ok(text.parse::<GroupKind>()?)
}

fn mode_from(n: Option<&str>) -> Result<Mode, Failure> {
    match n {
        None => Ok(Mode::Symbolic),
        Some(s) => Ok(Mode::Numeric(parse_rational(s)?)),
    }
}

fn boxed_value(inner: RationalFunction) -> *mut HwValue {
    Box::into_raw(Box::new(HwValue { inner }))
}

/// Exact Haar integral of a monomial such as `"u[1,1] ~u[1,1]"`.
///
/// `group` is `"unitary"`, `"orthogonal"` or `"free"`. With `symbolic`
/// nonzero the result is a function of `n`; otherwise it is evaluated at
/// the integer `n`.
///
/// # Safety
/// String arguments must be null or nul-terminated; `out` must be valid
/// for writes.
#[no_mangle]
pub unsafe extern "C" fn hw_integrate(
    group: *const c_char,
    monomial: *const c_char,
    symbolic: i32,
    n: i64,
    out: *mut *mut HwValue,
) -> HwStatus {
    guard(|| {
        check_out(out, "out")?;
        let group = parse_group(required_str(group, "group")?)?;
        let text = required_str(monomial, "monomial")?;
        let dim = if symbolic != 0 { Dimension::Symbolic } else { Dimension::Integer(n) };
        let q = parse_monomial(text)?.with_group(group).with_n(dim);
        let value = integrate(&q)?;
        *out = boxed_value(value);
        Ok(())
    })
}

/// One Weingarten value of degree `k`.
///
/// `key` is a permutation or class for `"unitary"` (`"(1 2)"`, `"[2,1]"`)
/// and a pair of pairings `"{1,2}{3,4}|{1,4}{2,3}"` otherwise. `n` is null
/// for the symbolic value, or an integer / rational such as `"5/2"`.
///
/// # Safety
/// As for [`hw_integrate`].
#[no_mangle]
pub unsafe extern "C" fn hw_wg(
    group: *const c_char,
    k: usize,
    key: *const c_char,
    n: *const c_char,
    out: *mut *mut HwValue,
) -> HwStatus {
    guard(|| {
        check_out(out, "out")?;
        let group = parse_group(required_str(group, "group")?)?;
        let key = TableKey::resolve(group, k, required_str(key, "key")?)?;
        let mode = mode_from(optional_str(n, "n")?)?;
        let table = TableCache::global().get(group, k, &mode)?;
        let value = table
            .get(&key)
            .cloned()
            .ok_or_else(|| Failure(HwStatus::InvalidArgument, format!("{key} is not in the table")))?;
        *out = boxed_value(value);
        Ok(())
    })
}

/// Unitary Weingarten value for a permutation; shorthand for
/// `hw_wg("unitary", k, sigma, n, out)`.
///
/// # Safety
/// As for [`hw_integrate`].
#[no_mangle]
pub unsafe extern "C" fn hw_wg_unitary(
    k: usize,
    sigma: *const c_char,
    n: *const c_char,
    out: *mut *mut HwValue,
) -> HwStatus {
    hw_wg(c"unitary".as_ptr(), k, sigma, n, out)
}

/// Writes the value in the engine's normal form (`"-1/(n^3-n)"`) to `*out`;
/// release it with [`hw_string_free`].
///
/// # Safety
/// `value` must come from this library; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hw_value_to_string(value: *const HwValue, out: *mut *mut c_char) -> HwStatus {
    guard(|| {
        check_out(out, "out")?;
        let v = value
            .as_ref()
            .ok_or_else(|| Failure(HwStatus::NullPointer, "value is null".into()))?;
        *out = into_c_string(v.inner.to_string());
        Ok(())
    })
}

/// Evaluates the value at `x` in floating point (constants ignore `x`).
///
/// # Safety
/// As for [`hw_value_to_string`].
#[no_mangle]
pub unsafe extern "C" fn hw_value_eval_f64(value: *const HwValue, x: f64, out: *mut f64) -> HwStatus {
    guard(|| {
        check_out(out, "out")?;
        let v = value
            .as_ref()
            .ok_or_else(|| Failure(HwStatus::NullPointer, "value is null".into()))?;
        let y = v.inner.eval_f64(x);
        if !y.is_finite() {
            return Err(Failure(HwStatus::Pole, format!("{} is not finite at {x}", v.inner)));
        }
        *out = y;
        Ok(())
    })
}

/// # Safety
/// `value` must be null or come from this library, and not be used again.
#[no_mangle]
pub unsafe extern "C" fn hw_value_free(value: *mut HwValue) {
    if !value.is_null() {
        drop(Box::from_raw(value));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn hw_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

fn table_handle(t: &WeingartenTable) -> HwTable {
    HwTable {
        group: t.group(),
        k: t.k(),
        mode: t.mode().to_string(),
        entries: t
            .entries()
            .map(|(k, v)| (CString::new(k.to_string()).expect("keys have no nul"), v.clone()))
            .collect(),
    }
}

/// Full Weingarten table of degree `k`; `n` as in [`hw_wg`].
///
/// # Safety
/// As for [`hw_integrate`].
#[no_mangle]
pub unsafe extern "C" fn hw_table_new(
    group: *const c_char,
    k: usize,
    n: *const c_char,
    out: *mut *mut HwTable,
) -> HwStatus {
    guard(|| {
        check_out(out, "out")?;
        let group = parse_group(required_str(group, "group")?)?;
        let mode = mode_from(optional_str(n, "n")?)?;
        let table = TableCache::global().get(group, k, &mode)?;
        *out = Box::into_raw(Box::new(table_handle(&table)));
        Ok(())
    })
}

/// Number of entries, or 0 for a null table.
///
/// # Safety
/// `table` must be null or come from [`hw_table_new`].
#[no_mangle]
pub unsafe extern "C" fn hw_table_len(table: *const HwTable) -> usize {
    table.as_ref().map_or(0, |t| t.entries.len())
}

/// Degree `k` of the table, or 0 for a null table.
///
/// # Safety
/// As for [`hw_table_len`].
#[no_mangle]
pub unsafe extern "C" fn hw_table_degree(table: *const HwTable) -> usize {
    table.as_ref().map_or(0, |t| t.k)
}

/// Key of entry `index`. The pointer is owned by the table and lives as
/// long as it does.
///
/// # Safety
/// As for [`hw_table_len`]; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hw_table_key(table: *const HwTable, index: usize, out: *mut *const c_char) -> HwStatus {
    guard(|| {
        check_out(out, "out")?;
        let t = table_ref(table)?;
        *out = entry(t, index)?.0.as_ptr();
        Ok(())
    })
}

/// Copy of the value of entry `index`; release with [`hw_value_free`].
///
/// # Safety
/// As for [`hw_table_key`].
#[no_mangle]
pub unsafe extern "C" fn hw_table_value(table: *const HwTable, index: usize, out: *mut *mut HwValue) -> HwStatus {
    guard(|| {
        check_out(out, "out")?;
        let t = table_ref(table)?;
        *out = boxed_value(entry(t, index)?.1.clone());
        Ok(())
    })
}

/// Group and mode as `"unitary symbolic"`, `"free numeric(5/2)"`;
/// release with [`hw_string_free`].
///
/// # Safety
/// As for [`hw_table_key`].
#[no_mangle]
pub unsafe extern "C" fn hw_table_describe(table: *const HwTable, out: *mut *mut c_char) -> HwStatus {
    guard(|| {
        check_out(out, "out")?;
        let t = table_ref(table)?;
        *out = into_c_string(format!("{} {}", t.group, t.mode));
        Ok(())
    })
}

/// # Safety
/// `table` must be null or come from [`hw_table_new`], and not be used again.
#[no_mangle]
pub unsafe extern "C" fn hw_table_free(table: *mut HwTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

unsafe fn table_ref<'a>(table: *const HwTable) -> Result<&'a HwTable, Failure> {
    table
        .as_ref()
        .ok_or_else(|| Failure(HwStatus::NullPointer, "table is null".into()))
}

fn entry(t: &HwTable, index: usize) -> Result<&(CString, RationalFunction), Failure> {
    t.entries.get(index).ok_or_else(|| {
        Failure(
            HwStatus::InvalidArgument,
            format!("index {index} out of range for {} entries", t.entries.len()),
        )
    })
}

/// Möbius value `Π_c (-1)^{|c|-1} Catalan(|c|-1)` of a permutation of
/// `S_k` in cycle notation.
///
/// # Safety
/// `sigma` must be null or nul-terminated; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hw_moebius(sigma: *const c_char, k: usize, out: *mut i64) -> HwStatus {
    guard(|| {
        check_out(out, "out")?;
        let text = required_str(sigma, "sigma")?;
        let p = match text.trim() {
            "e" | "id" | "()" => Permutation::identity(k),
            t => Permutation::parse_cycles(t, k)?,
        };
        *out = moebius(&p).value();
        Ok(())
    })
}

/// Empirical mean of a monomial over `samples` Haar matrices of size `n`
/// (unitary or orthogonal), reproducible from `(seed, stream)`.
///
/// # Safety
/// String arguments must be null or nul-terminated; `out` must be valid
/// for writes.
#[no_mangle]
pub unsafe extern "C" fn hw_estimate_moment(
    group: *const c_char,
    monomial: *const c_char,
    n: usize,
    samples: usize,
    seed: u64,
    stream: u64,
    out: *mut HwEstimate,
) -> HwStatus {
    guard(|| {
        check_out(out, "out")?;
        let group = parse_group(required_str(group, "group")?)?;
        let q = parse_monomial(required_str(monomial, "monomial")?)?.with_group(group);
        let e = estimate_moment(&q, n, samples, RngSpec { seed, stream })?;
        *out = HwEstimate {
            mean_re: e.mean.re,
            mean_im: e.mean.im,
            std_error: e.std_error,
            samples: e.samples as u64,
        };
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CStr;
    use std::ptr;

    #[test]
    fn status_and_message() {
        let mut out = ptr::null_mut();
        let s = unsafe { hw_wg_unitary(2, c"(1 2 3)".as_ptr(), ptr::null(), &mut out) };
        assert_eq!(s, HwStatus::Parse);
        assert!(out.is_null());
        let msg = unsafe { CStr::from_ptr(hw_last_error()) }.to_str().unwrap();
        assert!(!msg.is_empty());

        let s = unsafe { hw_wg_unitary(2, c"(1 2)".as_ptr(), ptr::null(), &mut out) };
        assert_eq!(s, HwStatus::Ok);
        assert!(hw_last_error().is_null());
        unsafe { hw_value_free(out) };
    }

    #[test]
    fn null_arguments() {
        let mut out = ptr::null_mut();
        let s = unsafe { hw_integrate(ptr::null(), c"u[1,1]".as_ptr(), 1, 0, &mut out) };
        assert_eq!(s, HwStatus::NullPointer);
        let s = unsafe { hw_integrate(c"unitary".as_ptr(), c"u[1,1]".as_ptr(), 1, 0, ptr::null_mut()) };
        assert_eq!(s, HwStatus::NullPointer);
        unsafe {
            hw_value_free(ptr::null_mut());
            hw_table_free(ptr::null_mut());
            hw_string_free(ptr::null_mut());
        }
        assert_eq!(unsafe { hw_table_len(ptr::null()) }, 0);
    }

    #[test]
    fn version() {
        assert_eq!(hw_version(), 100);
    }
}
