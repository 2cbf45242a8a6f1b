//! Exact-number serialization: integers as JSON numbers when they fit in
//! `i64`, rationals always as `"p/q"` strings.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;

pub struct Int<'a>(pub &'a BigInt);

impl Serialize for Int<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match i64::try_from(self.0) {
            Ok(v) => s.serialize_i64(v),
            Err(_) => s.serialize_str(&self.0.to_string()),
        }
    }
}

pub struct Rat<'a>(pub &'a BigRational);

impl Serialize for Rat<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

pub fn int_list<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&Int(x))?;
    }
    seq.end()
}

pub fn int_rows<S: Serializer>(rows: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(rows.len()))?;
    for r in rows {
        seq.serialize_element(&IntRow(r))?;
    }
    seq.end()
}

pub fn rat_list<S: Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&Rat(x))?;
    }
    seq.end()
}

pub fn rat_rows<S: Serializer>(rows: &[Vec<BigRational>], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(rows.len()))?;
    for r in rows {
        seq.serialize_element(&RatRow(r))?;
    }
    seq.end()
}

pub struct IntRow<'a>(pub &'a [BigInt]);

impl Serialize for IntRow<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        int_list(self.0, s)
    }
}

pub struct RatRow<'a>(pub &'a [BigRational]);

impl Serialize for RatRow<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        rat_list(self.0, s)
    }
}
