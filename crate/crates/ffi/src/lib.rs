//! C ABI for `whittakerpw`.
//!
//! A session is an opaque handle holding the derived c-functions for one `q`.
//! Structured data crosses the boundary as JSON strings in the same schemas
//! the CLI uses. Every function returns a [`WpwStatus`]; on failure the message
//! is available from [`wpw_last_error`] on the same thread. Strings handed out
//! by the library must be released with [`wpw_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use whittakerpw::exactfun::{parse_rational, LaurentPolynomial, Rational};
use whittakerpw::fourier::{pw_gate, solve_zeta, transform, WhittakerFn, DEFAULT_ZETA_MAX_DEGREE};
use whittakerpw::inversion::{
    build_phi, calibrate, default_contour, packet_range, roundtrip_check, theorem5_check,
    wave_packet, Contour,
};
use whittakerpw::jacquet::{whittaker_value, CFunctions, JacquetContext};
use whittakerpw::padic::PadicConfig;
use whittakerpw::sqint::{casselman_check, ExponentData};
use whittakerpw::Error;

/// Result of every call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WpwStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    InputParse = 3,
    InvalidConfig = 4,
    DivisionByZero = 5,
    IrrationalPole = 6,
    PoleOnContour = 7,
    GuardExceeded = 8,
    NotCompactlySupported = 9,
    /// A derived identity failed; signals an internal inconsistency.
    Inconsistent = 10,
    NoSolution = 11,
    Panic = 12,
}

impl From<&Error> for WpwStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::InputParse(_) => WpwStatus::InputParse,
            Error::InvalidConfig(_) | Error::DimensionMismatch(_) => WpwStatus::InvalidConfig,
            Error::DivisionByZero => WpwStatus::DivisionByZero,
            Error::IrrationalPole => WpwStatus::IrrationalPole,
            Error::PoleOnContour { .. } => WpwStatus::PoleOnContour,
            Error::GuardExceeded { .. } | Error::IrregularTail { .. } => WpwStatus::GuardExceeded,
            Error::NotCompactlySupported { .. } => WpwStatus::NotCompactlySupported,
            Error::NoSolution | Error::Underdetermined { .. } | Error::NoSolutionUpToDegree(_) => {
                WpwStatus::NoSolution
            }
            Error::NotLaurent { .. }
            | Error::ProbeVanishes
            | Error::InconsistentRatio { .. }
            | Error::NoExpansion
            | Error::NotProportional
            | Error::InconsistentCalibration { .. } => WpwStatus::Inconsistent,
        }
    }
}

/// Opaque session handle.
pub struct WpwSession {
    ctx: JacquetContext,
    cf: CFunctions,
    calibration: Rational,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(WpwStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(WpwStatus::from(&e), format!("{}: {e}", e.name()))
    }
}

type Outcome<T> = Result<T, Failure>;

/// Run `body`, translating errors and panics into a status.
fn guarded<F: FnOnce() -> Outcome<()>>(body: F) -> WpwStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => WpwStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            WpwStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Outcome<&'a str> {
    if p.is_null() {
        return Err(Failure(
            WpwStatus::NullArgument,
            "null string argument".into(),
        ));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(WpwStatus::InvalidUtf8, "argument is not UTF-8".into()))
}

unsafe fn session_ref<'a>(s: *const WpwSession) -> Outcome<&'a WpwSession> {
    s.as_ref()
        .ok_or_else(|| Failure(WpwStatus::NullArgument, "null session".into()))
}

fn parse_json<T: for<'de> serde::Deserialize<'de>>(s: &str) -> Outcome<T> {
    serde_json::from_str(s).map_err(|e| Error::InputParse(e.to_string()).into())
}

unsafe fn write_out(out: *mut *mut c_char, value: &impl serde::Serialize) -> Outcome<()> {
    if out.is_null() {
        return Err(Failure(
            WpwStatus::NullArgument,
            "null output pointer".into(),
        ));
    }
    let json = serde_json::to_string(value).expect("serializable");
    *out = CString::new(json).expect("JSON has no NUL").into_raw();
    Ok(())
}

/// Create a session for residue field size `q` (a rational string such as
/// `"3"`). `max_shell_guard <= 0` selects the default guard. The calibration
/// constant is computed once here.
///
/// # Safety
/// `q` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wpw_session_new(
    q: *const c_char,
    max_shell_guard: i64,
    out: *mut *mut WpwSession,
) -> WpwStatus {
    guarded(|| {
        if out.is_null() {
            return Err(Failure(
                WpwStatus::NullArgument,
                "null output pointer".into(),
            ));
        }
        let q = parse_rational(read_str(q)?).map_err(Error::InputParse)?;
        let config = if max_shell_guard > 0 {
            PadicConfig::new(q, max_shell_guard)?
        } else {
            PadicConfig::new(q, whittakerpw::padic::DEFAULT_SHELL_GUARD)?
        };
        let ctx = JacquetContext::new(config)?;
        let mut cf = CFunctions::derive(&ctx)?;
        cf.zeta = Some(solve_zeta(&cf, DEFAULT_ZETA_MAX_DEGREE)?.zeta);
        let calibration = calibrate(&ctx, &cf)?.constant;
        *out = Box::into_raw(Box::new(WpwSession {
            ctx,
            cf,
            calibration,
        }));
        Ok(())
    })
}

/// Release a session. Null is ignored.
///
/// # Safety
/// `session` must come from [`wpw_session_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn wpw_session_free(session: *mut WpwSession) {
    if !session.is_null() {
        drop(Box::from_raw(session));
    }
}

/// Release a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn wpw_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failure on this thread, or null. Valid until the next
/// failing call on the same thread.
#[no_mangle]
pub extern "C" fn wpw_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// `E_z(a_n)` as Laurent-polynomial JSON.
///
/// # Safety
/// `session` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wpw_whittaker_value(
    session: *const WpwSession,
    n: i64,
    out: *mut *mut c_char,
) -> WpwStatus {
    guarded(|| {
        let s = session_ref(session)?;
        write_out(out, &whittaker_value(&s.ctx, n)?)
    })
}

/// The derived a, b, j, ζ and expansion data as JSON.
///
/// # Safety
/// `session` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wpw_cfunctions(
    session: *const WpwSession,
    out: *mut *mut c_char,
) -> WpwStatus {
    guarded(|| {
        let s = session_ref(session)?;
        write_out(out, &s.cf)
    })
}

/// The calibration constant as a rational string.
///
/// # Safety
/// `session` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wpw_calibration(
    session: *const WpwSession,
    out: *mut *mut c_char,
) -> WpwStatus {
    guarded(|| {
        let s = session_ref(session)?;
        write_out(out, &s.calibration.to_string())
    })
}

/// Transform of a Whittaker-function JSON (`{"q": .., "values": [[n, "c"], ..]}`).
///
/// # Safety
/// `session` must be live; `f_json` NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wpw_transform(
    session: *const WpwSession,
    f_json: *const c_char,
    out: *mut *mut c_char,
) -> WpwStatus {
    guarded(|| {
        let s = session_ref(session)?;
        let f: WhittakerFn = parse_json(read_str(f_json)?)?;
        write_out(out, &transform(&s.ctx, &f, &s.calibration)?)
    })
}

/// Paley–Wiener report for a Laurent-polynomial JSON; `*passes` receives the verdict.
///
/// # Safety
/// `session` must be live; `f_json` NUL-terminated; `passes` and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wpw_check_pw(
    session: *const WpwSession,
    f_json: *const c_char,
    passes: *mut bool,
    out: *mut *mut c_char,
) -> WpwStatus {
    guarded(|| {
        let s = session_ref(session)?;
        if passes.is_null() {
            return Err(Failure(
                WpwStatus::NullArgument,
                "null output pointer".into(),
            ));
        }
        let big_f: LaurentPolynomial = parse_json(read_str(f_json)?)?;
        let report = pw_gate(&big_f.into(), &s.cf);
        *passes = report.passes;
        write_out(out, &report)
    })
}

/// Invert a transform given as Laurent-polynomial JSON. `radius` may be null
/// for the default contour.
///
/// # Safety
/// `session` must be live; strings NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wpw_invert(
    session: *const WpwSession,
    f_json: *const c_char,
    radius: *const c_char,
    out: *mut *mut c_char,
) -> WpwStatus {
    guarded(|| {
        let s = session_ref(session)?;
        let big_f: LaurentPolynomial = parse_json(read_str(f_json)?)?;
        let phi = build_phi(&big_f, &s.cf)?;
        let contour = if radius.is_null() {
            default_contour(&phi)?
        } else {
            Contour::new(parse_rational(read_str(radius)?).map_err(Error::InputParse)?)?
        };
        write_out(
            out,
            &wave_packet(&phi, &s.ctx, &contour, packet_range(&phi))?,
        )
    })
}

/// Round-trip report for a Whittaker-function JSON; `*equal` receives the verdict.
///
/// # Safety
/// `session` must be live; `f_json` NUL-terminated; `equal` and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wpw_roundtrip(
    session: *const WpwSession,
    f_json: *const c_char,
    equal: *mut bool,
    out: *mut *mut c_char,
) -> WpwStatus {
    guarded(|| {
        let s = session_ref(session)?;
        if equal.is_null() {
            return Err(Failure(
                WpwStatus::NullArgument,
                "null output pointer".into(),
            ));
        }
        let f: WhittakerFn = parse_json(read_str(f_json)?)?;
        let report = roundtrip_check(&f, &s.cf, &s.ctx, &s.calibration)?;
        *equal = report.equal;
        write_out(out, &report)
    })
}

/// Residual of the wave-packet transform identity for a Laurent Φ (JSON);
/// `*is_zero` receives whether it vanishes.
///
/// # Safety
/// `session` must be live; `phi_json` NUL-terminated; `is_zero` and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wpw_theorem5(
    session: *const WpwSession,
    phi_json: *const c_char,
    is_zero: *mut bool,
    out: *mut *mut c_char,
) -> WpwStatus {
    guarded(|| {
        let s = session_ref(session)?;
        if is_zero.is_null() {
            return Err(Failure(
                WpwStatus::NullArgument,
                "null output pointer".into(),
            ));
        }
        let phi: LaurentPolynomial = parse_json(read_str(phi_json)?)?;
        let residual = theorem5_check(&phi, &s.cf, &s.ctx, &s.calibration)?;
        *is_zero = residual.is_zero();
        write_out(out, &residual)
    })
}

/// Casselman test on a comma-separated exponent list such as `"-1,-1/2"`.
///
/// # Safety
/// `exponents` NUL-terminated; `result` writable.
#[no_mangle]
pub unsafe extern "C" fn wpw_casselman_check(
    exponents: *const c_char,
    result: *mut bool,
) -> WpwStatus {
    guarded(|| {
        if result.is_null() {
            return Err(Failure(
                WpwStatus::NullArgument,
                "null output pointer".into(),
            ));
        }
        let e = ExponentData::parse(read_str(exponents)?).map_err(Error::InputParse)?;
        *result = casselman_check(&e);
        Ok(())
    })
}

/// Static name of a status code; unknown codes map to `"Unknown"`.
#[no_mangle]
pub extern "C" fn wpw_status_name(status: i32) -> *const c_char {
    const NAMES: [&CStr; 13] = [
        c"Ok",
        c"NullArgument",
        c"InvalidUtf8",
        c"InputParse",
        c"InvalidConfig",
        c"DivisionByZero",
        c"IrrationalPole",
        c"PoleOnContour",
        c"GuardExceeded",
        c"NotCompactlySupported",
        c"Inconsistent",
        c"NoSolution",
        c"Panic",
    ];
    usize::try_from(status)
        .ok()
        .and_then(|i| NAMES.get(i))
        .map_or(c"Unknown".as_ptr(), |n| n.as_ptr())
}
