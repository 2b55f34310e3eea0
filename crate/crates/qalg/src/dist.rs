//! Extended distances: values in `[0, +inf]`, with `f64::INFINITY` used natively.
//!
//! All metrics in this crate are built from min/max/sum compositions of input
//! distances, so plain `f64` arithmetic is exact apart from input precision.
//! Infinity absorbs addition (`inf + x = inf`) and dominates max out of the box.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

pub const INF: f64 = f64::INFINITY;

/// Absolute tolerance for comparisons that are not exact by construction.
pub const TOL: f64 = 1e-12;

/// Margin required of a strict-inequality witness, to rule out float noise.
pub const WITNESS_MARGIN: f64 = 1e-9;

/// Checks that `v` is a valid extended distance.
pub fn check(v: f64) -> Result<f64> {
    if v.is_nan() || v < 0.0 {
        Err(Error::InvalidDistance(v))
    } else {
        Ok(v)
    }
}

/// `a <= b` up to tolerance; infinities compare exactly.
pub fn leq(a: f64, b: f64) -> bool {
    a <= b + TOL
}

/// Equality up to tolerance; two infinities are equal.
pub fn approx_eq(a: f64, b: f64) -> bool {
    if a.is_infinite() || b.is_infinite() {
        a == b
    } else {
        (a - b).abs() <= TOL
    }
}

pub fn fmt(v: f64) -> String {
    if v.is_infinite() {
        "inf".to_string()
    } else {
        format!("{v}")
    }
}

/// JSON representation of a distance: a number, or the string `"inf"`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DistRepr {
    Number(f64),
    Word(String),
}

impl DistRepr {
    pub fn to_dist(&self) -> Result<f64> {
        match self {
            DistRepr::Number(v) => check(*v),
            DistRepr::Word(w) if w == "inf" => Ok(INF),
            DistRepr::Word(w) => Err(Error::Invalid(format!(
                "expected a number or \"inf\", got \"{w}\""
            ))),
        }
    }

    pub fn from_dist(v: f64) -> Self {
        if v.is_infinite() {
            DistRepr::Word("inf".to_string())
        } else {
            DistRepr::Number(v)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinity_absorbs_sum() {
        assert_eq!(INF + 3.0, INF);
        assert_eq!(INF.min(2.0), 2.0);
        assert_eq!(INF.max(2.0), INF);
    }

    #[test]
    fn rejects_negative_and_nan() {
        assert!(check(-0.5).is_err());
        assert!(check(f64::NAN).is_err());
        assert!(check(0.0).is_ok());
        assert!(check(INF).is_ok());
    }

    #[test]
    fn repr_roundtrip() {
        let r = DistRepr::from_dist(INF);
        assert_eq!(r.to_dist().unwrap(), INF);
        let r: DistRepr = serde_json::from_str("\"inf\"").unwrap();
        assert_eq!(r.to_dist().unwrap(), INF);
        let r: DistRepr = serde_json::from_str("0.25").unwrap();
        assert_eq!(r.to_dist().unwrap(), 0.25);
    }
}
