use num_bigint::BigUint;
use serde::Serializer;

/// Big integers go out as decimal strings so JSON readers keep every digit.
pub(crate) fn big_as_string<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_str_radix(10))
}

use crate::brauer::BrauerClass;

/// Invariants as `(place, "num/den")` pairs in place order.
pub(crate) fn class_entries(c: &BrauerClass) -> Vec<(String, String)> {
    c.invariants()
        .iter()
        .map(|(p, x)| (p.to_string(), x.to_string()))
        .collect()
}
