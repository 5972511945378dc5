use std::cmp::Ordering;
use std::fmt;

use super::{FieldError, Gf2k};

/// A polynomial over GF(2) of unbounded degree, stored as little-endian 64-bit
/// limbs with no trailing zero limbs. Bit `i` is the coefficient of `t^i`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly2 {
    limbs: Vec<u64>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Poly2 { limbs: vec![] }
    }

    pub fn one() -> Self {
        Poly2::from_mask(1)
    }

    /// The indeterminate `t`.
    pub fn t() -> Self {
        Poly2::from_mask(2)
    }

    pub fn from_mask(mask: u64) -> Self {
        let mut p = Poly2 { limbs: vec![mask] };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.limbs.last() == Some(&0) {
            self.limbs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.limbs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.limbs == [1]
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        let top = *self.limbs.last()?;
        Some((self.limbs.len() - 1) * 64 + 63 - top.leading_zeros() as usize)
    }

    pub fn coeff(&self, i: usize) -> bool {
        self.limbs.get(i / 64).is_some_and(|l| (l >> (i % 64)) & 1 == 1)
    }

    fn flip(&mut self, i: usize) {
        if self.limbs.len() <= i / 64 {
            self.limbs.resize(i / 64 + 1, 0);
        }
        self.limbs[i / 64] ^= 1 << (i % 64);
    }

    pub fn add(&self, rhs: &Poly2) -> Poly2 {
        let n = self.limbs.len().max(rhs.limbs.len());
        let mut limbs: Vec<u64> = (0..n)
            .map(|i| self.limbs.get(i).copied().unwrap_or(0) ^ rhs.limbs.get(i).copied().unwrap_or(0))
            .collect();
        while limbs.last() == Some(&0) {
            limbs.pop();
        }
        Poly2 { limbs }
    }

    fn shifted(&self, s: usize) -> Poly2 {
        if self.is_zero() {
            return Poly2::zero();
        }
        let (words, bits) = (s / 64, s % 64);
        let mut limbs = vec![0u64; words];
        let mut carry = 0u64;
        for &l in &self.limbs {
            if bits == 0 {
                limbs.push(l);
            } else {
                limbs.push((l << bits) | carry);
                carry = l >> (64 - bits);
            }
        }
        if carry != 0 {
            limbs.push(carry);
        }
        let mut p = Poly2 { limbs };
        p.trim();
        p
    }

    pub fn mul(&self, rhs: &Poly2) -> Poly2 {
        let Some(d) = self.degree() else { return Poly2::zero() };
        let mut acc = Poly2::zero();
        for i in 0..=d {
            if self.coeff(i) {
                acc = acc.add(&rhs.shifted(i));
            }
        }
        acc
    }

    /// Quotient and remainder. Panics on division by zero.
    pub fn divrem(&self, divisor: &Poly2) -> (Poly2, Poly2) {
        let dd = divisor.degree().expect("polynomial division by zero");
        let mut rem = self.clone();
        let mut quo = Poly2::zero();
        while let Some(dr) = rem.degree() {
            if dr < dd {
                break;
            }
            quo.flip(dr - dd);
            rem = rem.add(&divisor.shifted(dr - dd));
        }
        (quo, rem)
    }

    pub fn gcd(&self, rhs: &Poly2) -> Poly2 {
        let (mut a, mut b) = (self.clone(), rhs.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a
    }

    /// Evaluates at a point of GF(2^k).
    pub fn eval(&self, x: Gf2k) -> Gf2k {
        let mut acc = Gf2k::zero(x.degree());
        let Some(d) = self.degree() else { return acc };
        let one = Gf2k::one(x.degree());
        for i in (0..=d).rev() {
            acc = acc * x;
            if self.coeff(i) {
                acc = acc + one;
            }
        }
        acc
    }

    /// Hex mask, most significant nibble first; `"0"` for zero.
    pub fn to_hex(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = format!("{:x}", self.limbs.last().unwrap());
        for l in self.limbs.iter().rev().skip(1) {
            s.push_str(&format!("{l:016x}"));
        }
        s
    }

    pub fn from_hex(text: &str) -> Result<Poly2, FieldError> {
        let t = text.trim();
        let t = t.strip_prefix("0x").unwrap_or(t);
        if t.is_empty() || !t.chars().all(|c| c.is_ascii_hexdigit()) {
            return Err(FieldError::parse(text, "expected a hex coefficient mask"));
        }
        let digits: Vec<u64> = t.chars().rev().map(|c| c.to_digit(16).unwrap() as u64).collect();
        let mut limbs: Vec<u64> = digits
            .chunks(16)
            .map(|chunk| chunk.iter().enumerate().fold(0u64, |acc, (i, &d)| acc | (d << (4 * i))))
            .collect();
        while limbs.last() == Some(&0) {
            limbs.pop();
        }
        Ok(Poly2 { limbs })
    }
}

impl Ord for Poly2 {
    fn cmp(&self, other: &Self) -> Ordering {
        self.limbs
            .len()
            .cmp(&other.limbs.len())
            .then_with(|| self.limbs.iter().rev().cmp(other.limbs.iter().rev()))
    }
}

impl PartialOrd for Poly2 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some(d) = self.degree() else { return write!(f, "0") };
        let terms: Vec<String> = (0..=d)
            .rev()
            .filter(|&i| self.coeff(i))
            .map(|i| match i {
                0 => "1".to_string(),
                1 => "t".to_string(),
                _ => format!("t^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}
