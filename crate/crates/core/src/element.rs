//! Text form of field elements: decimal, `0x` hex, or `g^k` (a power of the
//! field's canonical generator).

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::Field;

/// An element as written by a user, before it is resolved in a field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementLiteral {
    Bits(u64),
    GenPow(u64),
}

impl ElementLiteral {
    pub fn resolve(&self, field: &Field) -> Result<u32> {
        match *self {
            ElementLiteral::Bits(v) => {
                if v >= field.size() as u64 {
                    Err(Error::ElementOutOfRange {
                        value: v,
                        m: field.degree(),
                    })
                } else {
                    Ok(v as u32)
                }
            }
            ElementLiteral::GenPow(k) => Ok(field.pow(field.generator(), k)),
        }
    }
}

impl FromStr for ElementLiteral {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::ParseElement(s.to_string());
        if s == "g" {
            return Ok(ElementLiteral::GenPow(1));
        }
        if let Some(k) = s.strip_prefix("g^") {
            return k.parse().map(ElementLiteral::GenPow).map_err(|_| bad());
        }
        if let Some(h) = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
            return u64::from_str_radix(h, 16)
                .map(ElementLiteral::Bits)
                .map_err(|_| bad());
        }
        s.parse().map(ElementLiteral::Bits).map_err(|_| bad())
    }
}

impl fmt::Display for ElementLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElementLiteral::Bits(v) => write!(f, "{v}"),
            ElementLiteral::GenPow(k) => write!(f, "g^{k}"),
        }
    }
}

impl Serialize for ElementLiteral {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Parses an element in text form and resolves it in `field`.
pub fn parse_element(field: &Field, text: &str) -> Result<u32> {
    text.parse::<ElementLiteral>()?.resolve(field)
}

/// Parses a comma separated list of elements, e.g. `0,1,g^5`.
pub fn parse_element_list(field: &Field, text: &str) -> Result<Vec<u32>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_element(field, s))
        .collect()
}
