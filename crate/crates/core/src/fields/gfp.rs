use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{strip_tag, Field, FieldError, FieldTag};

/// An element of a small prime field GF(p), `p` in {2, 3, 5, 7}.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gfp {
    p: u32,
    value: u32,
}

impl Gfp {
    pub fn new(p: u32, value: u32) -> Result<Self, FieldError> {
        if ![2, 3, 5, 7].contains(&p) {
            return Err(FieldError::UnsupportedPrime(p));
        }
        Ok(Gfp { p, value: value % p })
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn elements(p: u32) -> Result<impl Iterator<Item = Gfp>, FieldError> {
        Gfp::new(p, 0)?;
        Ok((0..p).map(move |value| Gfp { p, value }))
    }

    fn check(&self, rhs: &Gfp) {
        assert_eq!(self.p, rhs.p, "level mismatch in GF(p) arithmetic");
    }
}

impl fmt::Display for Gfp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "gfp_{}:{}", self.p, self.value)
    }
}

impl fmt::Debug for Gfp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Add for Gfp {
    type Output = Gfp;
    fn add(self, rhs: Gfp) -> Gfp {
        self.check(&rhs);
        Gfp { p: self.p, value: (self.value + rhs.value) % self.p }
    }
}

impl Sub for Gfp {
    type Output = Gfp;
    fn sub(self, rhs: Gfp) -> Gfp {
        self + (-rhs)
    }
}

impl Neg for Gfp {
    type Output = Gfp;
    fn neg(self) -> Gfp {
        Gfp { p: self.p, value: (self.p - self.value) % self.p }
    }
}

impl Mul for Gfp {
    type Output = Gfp;
    fn mul(self, rhs: Gfp) -> Gfp {
        self.check(&rhs);
        Gfp { p: self.p, value: (self.value * rhs.value) % self.p }
    }
}

impl Field for Gfp {
    fn tag(&self) -> FieldTag {
        FieldTag::Gfp { p: self.p }
    }

    fn zero_like(&self) -> Self {
        Gfp { p: self.p, value: 0 }
    }

    fn one_like(&self) -> Self {
        Gfp { p: self.p, value: 1 }
    }

    fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn try_inv(&self) -> Result<Self, FieldError> {
        if self.value == 0 {
            return Err(FieldError::DivisionByZero);
        }
        // Fermat: a^(p-2)
        Ok(self.pow(self.p as u64 - 2))
    }

    fn value_text(&self) -> String {
        self.value.to_string()
    }

    fn parse_value(tag: FieldTag, text: &str) -> Result<Self, FieldError> {
        let FieldTag::Gfp { p } = tag else {
            return Err(FieldError::parse(text, format!("{tag} is not a prime field")));
        };
        let v: u32 = strip_tag(tag, text)?
            .parse()
            .map_err(|_| FieldError::parse(text, "expected a decimal residue"))?;
        if v >= p {
            return Err(FieldError::parse(text, format!("residue must be below {p}")));
        }
        Gfp::new(p, v)
    }
}

impl std::str::FromStr for Gfp {
    type Err = FieldError;
    fn from_str(s: &str) -> Result<Self, FieldError> {
        super::parse_scalar(s)
    }
}
