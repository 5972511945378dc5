//! Exact scalar arithmetic.
//!
//! Three families of fields live here:
//!
//! * [`Gf2k`]: the binary fields GF(2^k), `1 <= k <= 32`, each presented in the
//!   polynomial basis modulo the lexicographically least irreducible polynomial
//!   of degree `k`. A [`FieldTower`] links a divisibility chain of such levels
//!   by explicit embeddings and stands in for the algebraic closure of GF(2).
//! * [`RatFunc`]: the rational function field GF(2)(t), kept in lowest terms.
//! * [`Gfp`]: small prime fields GF(p), `p <= 7`, used as odd-characteristic
//!   controls.
//!
//! All of them implement [`Field`]. Operators (`+`, `*`, ...) panic when the
//! operands live at different levels; the `try_*` methods report
//! [`FieldError::LevelMismatch`] instead.

mod gf2k;
mod gfp;
pub mod poly;
mod poly2;
mod ratfunc;
mod tower;

use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use thiserror::Error;

pub use gf2k::{is_irreducible_gf2, modulus, Gf2k, MAX_DEGREE};
pub use gfp::Gfp;
pub use poly2::Poly2;
pub use ratfunc::{RatDegree, RatFunc};
pub use tower::{roots_in_level, FieldTower};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("level mismatch: {left} vs {right}")]
    LevelMismatch { left: FieldTag, right: FieldTag },
    #[error("division by zero")]
    DivisionByZero,
    #[error("degree {0} is not a level of the tower")]
    NotInTower(u32),
    #[error("degree {source_degree} does not divide degree {target}")]
    NonDividingDegree { source_degree: u32, target: u32 },
    #[error("unsupported extension degree {0} (supported: 1..={MAX_DEGREE})")]
    UnsupportedDegree(u32),
    #[error("unsupported prime {0} (supported: 2, 3, 5, 7)")]
    UnsupportedPrime(u32),
    #[error("invalid tower: {0}")]
    InvalidTower(String),
    #[error("cannot parse {text:?}: {reason}")]
    Parse { text: String, reason: String },
}

impl FieldError {
    pub(crate) fn parse(text: &str, reason: impl Into<String>) -> Self {
        FieldError::Parse { text: text.to_string(), reason: reason.into() }
    }
}

/// Identifies a field level: `gf2_<k>`, `gfp_<p>` or `rf2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldTag {
    Gf2 { degree: u32 },
    Gfp { p: u32 },
    Rf2,
}

impl FieldTag {
    /// Number of elements, or `None` for the infinite field GF(2)(t).
    pub fn order(&self) -> Option<u64> {
        match *self {
            FieldTag::Gf2 { degree } => Some(1u64 << degree),
            FieldTag::Gfp { p } => Some(p as u64),
            FieldTag::Rf2 => None,
        }
    }

    pub fn characteristic(&self) -> u32 {
        match *self {
            FieldTag::Gfp { p } => p,
            _ => 2,
        }
    }
}

impl fmt::Display for FieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldTag::Gf2 { degree } => write!(f, "gf2_{degree}"),
            FieldTag::Gfp { p } => write!(f, "gfp_{p}"),
            FieldTag::Rf2 => write!(f, "rf2"),
        }
    }
}

impl FromStr for FieldTag {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "rf2" {
            return Ok(FieldTag::Rf2);
        }
        if let Some(k) = s.strip_prefix("gf2_") {
            let degree: u32 = k.parse().map_err(|_| FieldError::parse(s, "bad degree"))?;
            if degree == 0 || degree > MAX_DEGREE {
                return Err(FieldError::UnsupportedDegree(degree));
            }
            return Ok(FieldTag::Gf2 { degree });
        }
        if let Some(p) = s.strip_prefix("gfp_") {
            let p: u32 = p.parse().map_err(|_| FieldError::parse(s, "bad prime"))?;
            if ![2, 3, 5, 7].contains(&p) {
                return Err(FieldError::UnsupportedPrime(p));
            }
            return Ok(FieldTag::Gfp { p });
        }
        Err(FieldError::parse(s, "expected gf2_<k>, gfp_<p> or rf2"))
    }
}

/// A field element that knows its own level.
///
/// Serialization follows `"<tag>:<value>"`; [`Field::value_text`] produces the
/// value part alone, which is what matrix literals use.
pub trait Field:
    Clone
    + Eq
    + Ord
    + Hash
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn tag(&self) -> FieldTag;
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;

    fn is_one(&self) -> bool {
        *self == self.one_like()
    }

    fn try_add(&self, rhs: &Self) -> Result<Self, FieldError> {
        self.check_level(rhs)?;
        Ok(self.clone() + rhs.clone())
    }

    fn try_mul(&self, rhs: &Self) -> Result<Self, FieldError> {
        self.check_level(rhs)?;
        Ok(self.clone() * rhs.clone())
    }

    fn try_inv(&self) -> Result<Self, FieldError>;

    fn inv(&self) -> Self {
        self.try_inv().expect("inverse of zero")
    }

    fn check_level(&self, rhs: &Self) -> Result<(), FieldError> {
        if self.tag() == rhs.tag() {
            Ok(())
        } else {
            Err(FieldError::LevelMismatch { left: self.tag(), right: rhs.tag() })
        }
    }

    fn square(&self) -> Self {
        self.clone() * self.clone()
    }

    fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.square();
            e >>= 1;
        }
        acc
    }

    /// The value part of the serialized form.
    fn value_text(&self) -> String;

    /// Parses a value part at the given level. A fully tagged `"<tag>:<value>"`
    /// string is also accepted as long as the tags agree.
    fn parse_value(tag: FieldTag, text: &str) -> Result<Self, FieldError>;
}

/// Splits `"<tag>:<value>"`, checking the tag against `expected` when present.
pub(crate) fn strip_tag<'a>(expected: FieldTag, text: &'a str) -> Result<&'a str, FieldError> {
    let text = text.trim();
    match text.split_once(':') {
        Some((tag, value)) => {
            let tag: FieldTag = tag.parse()?;
            if tag != expected {
                return Err(FieldError::LevelMismatch { left: expected, right: tag });
            }
            Ok(value.trim())
        }
        None => Ok(text),
    }
}

/// Parses a fully tagged scalar such as `gf2_3:6`.
pub fn parse_scalar<F: Field>(text: &str) -> Result<F, FieldError> {
    let (tag, _) = text
        .split_once(':')
        .ok_or_else(|| FieldError::parse(text, "missing field tag"))?;
    F::parse_value(tag.parse()?, text)
}

pub(crate) fn to_hex(mask: u64) -> String {
    format!("{mask:x}")
}

pub(crate) fn from_hex(text: &str) -> Result<u64, FieldError> {
    let t = text.trim();
    let t = t.strip_prefix("0x").unwrap_or(t);
    u64::from_str_radix(t, 16).map_err(|_| FieldError::parse(text, "expected a hex mask"))
}
