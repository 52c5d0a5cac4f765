//! JSON helpers shared by the report types.
//!
//! Doubles are written with 17 significant digits so that every value
//! round-trips bit-exactly; big integers and rationals are written as strings.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serializer;
use serde_json::value::RawValue;

/// Formats a finite double with 17 significant digits as a JSON number.
pub fn format_f64(x: f64) -> String {
    if x == 0.0 {
        // keeps `-0` and `0` byte-identical
        return "0.0000000000000000e0".to_string();
    }
    format!("{x:.16e}")
}

pub(crate) fn raw_f64(x: f64) -> Box<RawValue> {
    assert!(x.is_finite(), "non-finite value in JSON output: {x}");
    RawValue::from_string(format_f64(x)).expect("formatted double is valid JSON")
}

pub(crate) fn f64_sig17<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&raw_f64(*x), s)
}

pub(crate) fn bigint_as_string<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

pub(crate) fn opt_bigint_as_string<S: Serializer>(x: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_str(&v.to_string()),
        None => s.serialize_none(),
    }
}

/// `p/q`, or just `p` when the denominator is one.
pub fn format_rational(q: &BigRational) -> String {
    q.to_string()
}

pub(crate) fn opt_rational_as_string<S: Serializer>(
    x: &Option<BigRational>,
    s: S,
) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_str(&format_rational(v)),
        None => s.serialize_none(),
    }
}
