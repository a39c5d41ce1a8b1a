//! Serde helpers: big integers and rationals render as decimal strings in
//! the canonical JSON schemas.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serializer;

pub fn bigint_as_string<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub fn rational_as_string<S: Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}
