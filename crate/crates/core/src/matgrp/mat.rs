use std::fmt;
use std::ops::Mul;

use crate::fields::{Field, FieldTag};

use super::MatError;

/// A 2×2 matrix of determinant 1, row-major `[[a, b], [c, d]]`.
///
/// Ordering compares `(a, b, c, d)` entrywise, which for a fixed level is the
/// numeric order of the coefficient masks.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat2<F> {
    a: F,
    b: F,
    c: F,
    d: F,
}

impl<F: Field> Mat2<F> {
    pub fn new(a: F, b: F, c: F, d: F) -> Result<Self, MatError> {
        a.check_level(&b)?;
        a.check_level(&c)?;
        a.check_level(&d)?;
        let det = a.clone() * d.clone() - b.clone() * c.clone();
        if !det.is_one() {
            return Err(MatError::DeterminantNotOne { det: det.to_string() });
        }
        Ok(Mat2 { a, b, c, d })
    }

    /// No determinant check; callers guarantee it.
    pub(crate) fn new_unchecked(a: F, b: F, c: F, d: F) -> Self {
        debug_assert!((a.clone() * d.clone() - b.clone() * c.clone()).is_one());
        Mat2 { a, b, c, d }
    }

    pub fn identity(like: &F) -> Self {
        Mat2 { a: like.one_like(), b: like.zero_like(), c: like.zero_like(), d: like.one_like() }
    }

    /// `[[1, 1], [0, 1]]`
    pub fn unipotent(like: &F) -> Self {
        Mat2 { a: like.one_like(), b: like.one_like(), c: like.zero_like(), d: like.one_like() }
    }

    /// `diag(a, a⁻¹)`
    pub fn diag(a: F) -> Result<Self, MatError> {
        let inv = a.try_inv()?;
        let z = a.zero_like();
        Ok(Mat2 { a, b: z.clone(), c: z, d: inv })
    }

    pub fn entries(&self) -> [&F; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn a(&self) -> &F {
        &self.a
    }
    pub fn b(&self) -> &F {
        &self.b
    }
    pub fn c(&self) -> &F {
        &self.c
    }
    pub fn d(&self) -> &F {
        &self.d
    }

    pub fn tag(&self) -> FieldTag {
        self.a.tag()
    }

    pub fn trace(&self) -> F {
        self.a.clone() + self.d.clone()
    }

    pub fn det(&self) -> F {
        self.a.clone() * self.d.clone() - self.b.clone() * self.c.clone()
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_one() && self.d.is_one() && self.b.is_zero() && self.c.is_zero()
    }

    pub fn is_diagonal(&self) -> bool {
        self.b.is_zero() && self.c.is_zero()
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self, MatError> {
        self.a.check_level(&rhs.a)?;
        Ok(self.mul_same_level(rhs))
    }

    fn mul_same_level(&self, r: &Self) -> Self {
        let (a, b, c, d) = (&self.a, &self.b, &self.c, &self.d);
        Mat2 {
            a: a.clone() * r.a.clone() + b.clone() * r.c.clone(),
            b: a.clone() * r.b.clone() + b.clone() * r.d.clone(),
            c: c.clone() * r.a.clone() + d.clone() * r.c.clone(),
            d: c.clone() * r.b.clone() + d.clone() * r.d.clone(),
        }
    }

    /// `[[d, -b], [-c, a]]`
    pub fn inv(&self) -> Self {
        Mat2 { a: self.d.clone(), b: -self.b.clone(), c: -self.c.clone(), d: self.a.clone() }
    }

    /// `h · self · h⁻¹`
    pub fn conj_by(&self, h: &Self) -> Self {
        h.mul_same_level(self).mul_same_level(&h.inv())
    }

    pub fn commutes_with(&self, h: &Self) -> bool {
        self.mul_same_level(h) == h.mul_same_level(self)
    }

    /// Applies a field map entrywise, re-checking the determinant.
    pub fn try_map<G: Field, E>(&self, f: impl Fn(&F) -> Result<G, E>) -> Result<Mat2<G>, MatError>
    where
        MatError: From<E>,
    {
        Ok(Mat2::new(f(&self.a)?, f(&self.b)?, f(&self.c)?, f(&self.d)?)?)
    }

    /// Parses `[[a,b],[c,d]]@<tag>`.
    pub fn parse(text: &str) -> Result<Self, MatError> {
        let bad = |reason: &str| MatError::Parse { text: text.to_string(), reason: reason.to_string() };
        let (body, tag) = text.trim().rsplit_once('@').ok_or_else(|| bad("expected [[a,b],[c,d]]@<field>"))?;
        let tag: FieldTag = tag.trim().parse()?;
        let body: String = body.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = body
            .strip_prefix("[[")
            .and_then(|b| b.strip_suffix("]]"))
            .ok_or_else(|| bad("expected [[a,b],[c,d]]"))?;
        let (row1, row2) = inner.split_once("],[").ok_or_else(|| bad("expected two rows"))?;
        let cells: Vec<&str> = row1.split(',').chain(row2.split(',')).collect();
        if cells.len() != 4 {
            return Err(bad("expected four entries"));
        }
        let v = cells.iter().map(|c| F::parse_value(tag, c)).collect::<Result<Vec<F>, _>>()?;
        let [a, b, c, d]: [F; 4] = v.try_into().map_err(|_| bad("expected four entries"))?;
        Mat2::new(a, b, c, d)
    }
}

impl<F: Field> Mul for &Mat2<F> {
    type Output = Mat2<F>;

    /// Panics on a level mismatch; see [`Mat2::try_mul`].
    fn mul(self, rhs: &Mat2<F>) -> Mat2<F> {
        self.try_mul(rhs).expect("level mismatch in matrix product")
    }
}

impl<F: Field> Mul for Mat2<F> {
    type Output = Mat2<F>;
    fn mul(self, rhs: Mat2<F>) -> Mat2<F> {
        &self * &rhs
    }
}

impl<F: Field> fmt::Display for Mat2<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{},{}],[{},{}]]@{}",
            self.a.value_text(),
            self.b.value_text(),
            self.c.value_text(),
            self.d.value_text(),
            self.tag()
        )
    }
}

impl<F: Field> fmt::Debug for Mat2<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<F: Field> std::str::FromStr for Mat2<F> {
    type Err = MatError;
    fn from_str(s: &str) -> Result<Self, MatError> {
        Mat2::parse(s)
    }
}
