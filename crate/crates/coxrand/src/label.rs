//! Edge labels.
//!
//! A pair of vertices carries either a finite integer label m >= 2 or
//! the label infinity. "No edge" and "label infinity" are one and the
//! same state; the Coxeter group only sees the exponent m.

use std::fmt;
use std::str::FromStr;

use serde::de::{self, Deserializer, Visitor};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::CoxError;

/// Label of an unordered vertex pair.
///
/// Stored as a single `u32` with `u32::MAX` reserved for infinity, so
/// labels order naturally: 2 < 3 < ... < infinity.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeLabel(u32);

impl EdgeLabel {
    /// The infinite label; also the state of an absent edge.
    pub const INFINITY: EdgeLabel = EdgeLabel(u32::MAX);

    /// Finite label constructor for known-good values; panics below 2.
    pub const fn fin(m: u32) -> EdgeLabel {
        assert!(m >= 2 && m < u32::MAX);
        EdgeLabel(m)
    }

    /// Fallible finite label constructor.
    pub fn finite(m: u32) -> Result<EdgeLabel, CoxError> {
        if (2..u32::MAX).contains(&m) {
            Ok(EdgeLabel(m))
        } else {
            Err(CoxError::InvalidLabel(m.to_string()))
        }
    }

    pub const fn is_finite(self) -> bool {
        self.0 != u32::MAX
    }

    pub const fn is_infinite(self) -> bool {
        self.0 == u32::MAX
    }

    /// The integer value of a finite label.
    pub const fn finite_value(self) -> Option<u32> {
        if self.is_finite() {
            Some(self.0)
        } else {
            None
        }
    }

}

impl fmt::Display for EdgeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.finite_value() {
            Some(m) => write!(f, "{m}"),
            None => write!(f, "inf"),
        }
    }
}

impl fmt::Debug for EdgeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for EdgeLabel {
    type Err = CoxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "inf" | "infinity" | "oo" => Ok(EdgeLabel::INFINITY),
            _ => s
                .parse::<u32>()
                .map_err(|_| CoxError::InvalidLabel(s.to_string()))
                .and_then(EdgeLabel::finite),
        }
    }
}

impl Serialize for EdgeLabel {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self.finite_value() {
            Some(m) => serializer.serialize_u32(m),
            None => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for EdgeLabel {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct LabelVisitor;

        impl Visitor<'_> for LabelVisitor {
            type Value = EdgeLabel;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an integer >= 2 or the string \"inf\"")
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<EdgeLabel, E> {
                u32::try_from(v)
                    .map_err(|_| ())
                    .and_then(|m| EdgeLabel::finite(m).map_err(|_| ()))
                    .map_err(|_| E::custom(format!("invalid edge label {v}")))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<EdgeLabel, E> {
                if v < 0 {
                    return Err(E::custom(format!("invalid edge label {v}")));
                }
                self.visit_u64(v as u64)
            }

            fn visit_str<E: de::Error>(self, s: &str) -> Result<EdgeLabel, E> {
                s.parse().map_err(|_| E::custom(format!("invalid edge label {s:?}")))
            }
        }

        deserializer.deserialize_any(LabelVisitor)
    }
}
