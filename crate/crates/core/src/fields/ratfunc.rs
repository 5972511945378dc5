use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{strip_tag, Field, FieldError, FieldTag, Gf2k, Poly2};

/// An element of GF(2)(t) in lowest terms. The denominator is nonzero and (over
/// GF(2) automatically) monic; zero is `0/1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatFunc {
    num: Poly2,
    den: Poly2,
}

/// Degree of a rational function: `deg num - deg den`, or minus infinity for 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RatDegree {
    MinusInfinity,
    Finite(i64),
}

impl RatFunc {
    pub fn new(num: Poly2, den: Poly2) -> Result<Self, FieldError> {
        if den.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(Self::reduced(num, den))
    }

    fn reduced(num: Poly2, den: Poly2) -> Self {
        if num.is_zero() {
            return RatFunc { num, den: Poly2::one() };
        }
        let g = num.gcd(&den);
        if g.is_one() {
            return RatFunc { num, den };
        }
        RatFunc { num: num.divrem(&g).0, den: den.divrem(&g).0 }
    }

    pub fn from_poly(p: Poly2) -> Self {
        RatFunc { num: p, den: Poly2::one() }
    }

    pub fn zero() -> Self {
        Self::from_poly(Poly2::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(Poly2::one())
    }

    pub fn t() -> Self {
        Self::from_poly(Poly2::t())
    }

    pub fn numerator(&self) -> &Poly2 {
        &self.num
    }

    pub fn denominator(&self) -> &Poly2 {
        &self.den
    }

    pub fn degree(&self) -> RatDegree {
        match self.num.degree() {
            None => RatDegree::MinusInfinity,
            Some(dn) => RatDegree::Finite(dn as i64 - self.den.degree().unwrap() as i64),
        }
    }

    /// Evaluates at `theta`; `None` when the denominator vanishes there.
    pub fn eval(&self, theta: Gf2k) -> Option<Gf2k> {
        let d = self.den.eval(theta);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(theta) * d.inv())
        }
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rf2:{}", self.value_text())
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{:?}", self.num)
        } else {
            write!(f, "({:?})/({:?})", self.num, self.den)
        }
    }
}

impl Add for RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: RatFunc) -> RatFunc {
        if self.den == rhs.den {
            return Self::reduced(self.num.add(&rhs.num), self.den);
        }
        let num = self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den));
        Self::reduced(num, self.den.mul(&rhs.den))
    }
}

impl Sub for RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: RatFunc) -> RatFunc {
        self + rhs
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        self
    }
}

impl Mul for RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: RatFunc) -> RatFunc {
        if self.den.is_one() && rhs.den.is_one() {
            return Self::from_poly(self.num.mul(&rhs.num));
        }
        Self::reduced(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }
}

impl Field for RatFunc {
    fn tag(&self) -> FieldTag {
        FieldTag::Rf2
    }

    fn zero_like(&self) -> Self {
        RatFunc::zero()
    }

    fn one_like(&self) -> Self {
        RatFunc::one()
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn try_inv(&self) -> Result<Self, FieldError> {
        if self.num.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(RatFunc { num: self.den.clone(), den: self.num.clone() })
    }

    fn value_text(&self) -> String {
        format!("{}/{}", self.num.to_hex(), self.den.to_hex())
    }

    fn parse_value(tag: FieldTag, text: &str) -> Result<Self, FieldError> {
        if tag != FieldTag::Rf2 {
            return Err(FieldError::parse(text, format!("{tag} is not GF(2)(t)")));
        }
        let value = strip_tag(tag, text)?;
        let (n, d) = value.split_once('/').unwrap_or((value, "1"));
        RatFunc::new(Poly2::from_hex(n)?, Poly2::from_hex(d)?)
    }
}

impl std::str::FromStr for RatFunc {
    type Err = FieldError;
    fn from_str(s: &str) -> Result<Self, FieldError> {
        super::parse_scalar(s)
    }
}
