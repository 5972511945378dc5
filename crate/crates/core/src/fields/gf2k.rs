use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub};
use std::sync::OnceLock;

use super::{from_hex, strip_tag, to_hex, Field, FieldError, FieldTag};

/// Largest supported extension degree. Products of two reduced elements then
/// fit in a `u64` before reduction.
pub const MAX_DEGREE: u32 = 32;

/// Degrees up to this bound get exp/log tables.
const TABLE_DEGREE: u32 = 16;

/// An element of GF(2^k) in the polynomial basis. Bit `i` of `bits` is the
/// coefficient of `x^i`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gf2k {
    degree: u32,
    bits: u64,
}

struct LevelData {
    modulus: u64,
    exp: Vec<u32>,
    log: Vec<u32>,
}

static LEVELS: [OnceLock<LevelData>; MAX_DEGREE as usize + 1] =
    [const { OnceLock::new() }; MAX_DEGREE as usize + 1];

fn level(k: u32) -> &'static LevelData {
    LEVELS[k as usize].get_or_init(|| LevelData::build(k))
}

impl LevelData {
    fn build(k: u32) -> Self {
        let modulus = least_irreducible(k);
        let (exp, log) = if k <= TABLE_DEGREE { build_tables(k, modulus) } else { (vec![], vec![]) };
        LevelData { modulus, exp, log }
    }
}

/// The modulus used for level `k`: the least irreducible polynomial of degree
/// `k` over GF(2), as a bit mask including the leading bit.
pub fn modulus(k: u32) -> Result<u64, FieldError> {
    check_degree(k)?;
    Ok(level(k).modulus)
}

fn check_degree(k: u32) -> Result<(), FieldError> {
    if k == 0 || k > MAX_DEGREE {
        Err(FieldError::UnsupportedDegree(k))
    } else {
        Ok(())
    }
}

pub(crate) fn clmul(a: u64, b: u64) -> u128 {
    let (a, mut b) = (a as u128, b);
    let mut acc = 0u128;
    let mut i = 0;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a << i;
        }
        b >>= 1;
        i += 1;
    }
    acc
}

fn deg128(a: u128) -> i32 {
    127 - a.leading_zeros() as i32
}

pub(crate) fn reduce(mut a: u128, m: u64) -> u64 {
    let dm = 63 - m.leading_zeros() as i32;
    let m = m as u128;
    loop {
        let da = deg128(a);
        if da < dm {
            return a as u64;
        }
        a ^= m << (da - dm);
    }
}

fn gcd_gf2(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = reduce(a as u128, b);
        a = b;
        b = r;
    }
    a
}

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = vec![];
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's irreducibility test for a polynomial over GF(2) given as a bit mask
/// of degree at most [`MAX_DEGREE`].
pub fn is_irreducible_gf2(f: u64) -> bool {
    if f < 2 {
        return false;
    }
    let k = 63 - f.leading_zeros();
    if k > MAX_DEGREE {
        return false;
    }
    // x^(2^i) mod f
    let frob_power = |i: u32| -> u64 {
        let mut h = reduce(2, f);
        for _ in 0..i {
            h = reduce(clmul(h, h), f);
        }
        h
    };
    let x = reduce(2, f);
    if frob_power(k) != x {
        return false;
    }
    prime_divisors(k as u64)
        .into_iter()
        .all(|p| gcd_gf2(f, frob_power(k / p as u32) ^ x) == 1)
}

fn least_irreducible(k: u32) -> u64 {
    let top = 1u64 << k;
    (0..top)
        .map(|low| top | low)
        .find(|&f| is_irreducible_gf2(f))
        .expect("irreducible polynomials exist in every degree")
}

fn mul_slow(a: u64, b: u64, m: u64) -> u64 {
    reduce(clmul(a, b), m)
}

fn build_tables(k: u32, m: u64) -> (Vec<u32>, Vec<u32>) {
    let q = 1u64 << k;
    let n = q - 1;
    let pow_slow = |mut base: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_slow(acc, base, m);
            }
            base = mul_slow(base, base, m);
            e >>= 1;
        }
        acc
    };
    let primes = prime_divisors(n);
    let generator = (1..q)
        .find(|&g| primes.iter().all(|&p| pow_slow(g, n / p) != 1))
        .expect("the multiplicative group of a finite field is cyclic");
    let mut exp = vec![0u32; 2 * n as usize];
    let mut log = vec![0u32; q as usize];
    let mut cur = 1u64;
    for i in 0..n as usize {
        exp[i] = cur as u32;
        exp[i + n as usize] = cur as u32;
        log[cur as usize] = i as u32;
        cur = mul_slow(cur, generator, m);
    }
    (exp, log)
}

impl Gf2k {
    pub fn new(degree: u32, bits: u64) -> Result<Self, FieldError> {
        check_degree(degree)?;
        if degree < 64 && bits >> degree != 0 {
            return Err(FieldError::parse(&to_hex(bits), format!("mask too wide for gf2_{degree}")));
        }
        Ok(Gf2k { degree, bits })
    }

    pub(crate) fn from_raw(degree: u32, bits: u64) -> Self {
        debug_assert!(bits >> degree == 0);
        Gf2k { degree, bits }
    }

    pub fn zero(degree: u32) -> Self {
        Gf2k { degree, bits: 0 }
    }

    pub fn one(degree: u32) -> Self {
        Gf2k { degree, bits: 1 }
    }

    /// The class of `x` in GF(2)[x]/(modulus). At level 1 (modulus `x`) this is 0.
    pub fn generator(degree: u32) -> Self {
        Gf2k { degree, bits: reduce(2, level(degree).modulus) }
    }

    /// `x^i` as a basis vector, `i < degree`.
    pub fn basis(degree: u32, i: u32) -> Self {
        assert!(i < degree);
        Gf2k { degree, bits: 1 << i }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// `2^degree`.
    pub fn field_order(&self) -> u64 {
        1 << self.degree
    }

    /// Every element of GF(2^k) in ascending bit order.
    pub fn elements(degree: u32) -> impl Iterator<Item = Gf2k> {
        (0..1u64 << degree).map(move |bits| Gf2k { degree, bits })
    }

    /// True when the element lies in the prime field GF(2).
    pub fn is_prime_field(&self) -> bool {
        self.bits <= 1
    }

    pub fn frobenius(&self) -> Self {
        self.square()
    }

    /// The unique square root (squaring is a bijection in characteristic 2).
    pub fn sqrt(&self) -> Self {
        let mut r = *self;
        for _ in 1..self.degree {
            r = r.square();
        }
        r
    }

    /// Absolute trace down to GF(2).
    pub fn trace(&self) -> Self {
        let mut acc = *self;
        let mut cur = *self;
        for _ in 1..self.degree {
            cur = cur.square();
            acc += cur;
        }
        acc
    }

    fn mul_bits(degree: u32, a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            return 0;
        }
        let data = level(degree);
        if data.exp.is_empty() {
            mul_slow(a, b, data.modulus)
        } else {
            data.exp[(data.log[a as usize] + data.log[b as usize]) as usize] as u64
        }
    }
}

impl fmt::Display for Gf2k {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "gf2_{}:{}", self.degree, to_hex(self.bits))
    }
}

impl fmt::Debug for Gf2k {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Add for Gf2k {
    type Output = Gf2k;
    fn add(self, rhs: Gf2k) -> Gf2k {
        assert_eq!(self.degree, rhs.degree, "level mismatch in GF(2^k) addition");
        Gf2k { degree: self.degree, bits: self.bits ^ rhs.bits }
    }
}

impl AddAssign for Gf2k {
    fn add_assign(&mut self, rhs: Gf2k) {
        *self = *self + rhs;
    }
}

impl Sub for Gf2k {
    type Output = Gf2k;
    fn sub(self, rhs: Gf2k) -> Gf2k {
        self + rhs
    }
}

impl Neg for Gf2k {
    type Output = Gf2k;
    fn neg(self) -> Gf2k {
        self
    }
}

impl Mul for Gf2k {
    type Output = Gf2k;
    fn mul(self, rhs: Gf2k) -> Gf2k {
        assert_eq!(self.degree, rhs.degree, "level mismatch in GF(2^k) multiplication");
        Gf2k { degree: self.degree, bits: Gf2k::mul_bits(self.degree, self.bits, rhs.bits) }
    }
}

impl MulAssign for Gf2k {
    fn mul_assign(&mut self, rhs: Gf2k) {
        *self = *self * rhs;
    }
}

impl Field for Gf2k {
    fn tag(&self) -> FieldTag {
        FieldTag::Gf2 { degree: self.degree }
    }

    fn zero_like(&self) -> Self {
        Gf2k::zero(self.degree)
    }

    fn one_like(&self) -> Self {
        Gf2k::one(self.degree)
    }

    fn is_zero(&self) -> bool {
        self.bits == 0
    }

    fn try_inv(&self) -> Result<Self, FieldError> {
        if self.bits == 0 {
            return Err(FieldError::DivisionByZero);
        }
        let data = level(self.degree);
        let bits = if data.exp.is_empty() {
            self.pow((1u64 << self.degree) - 2).bits
        } else {
            let n = (1u32 << self.degree) - 1;
            data.exp[(n - data.log[self.bits as usize]) as usize] as u64
        };
        Ok(Gf2k { degree: self.degree, bits })
    }

    fn value_text(&self) -> String {
        to_hex(self.bits)
    }

    fn parse_value(tag: FieldTag, text: &str) -> Result<Self, FieldError> {
        let FieldTag::Gf2 { degree } = tag else {
            return Err(FieldError::parse(text, format!("{tag} is not a binary field")));
        };
        Gf2k::new(degree, from_hex(strip_tag(tag, text)?)?)
    }
}

impl std::str::FromStr for Gf2k {
    type Err = FieldError;
    fn from_str(s: &str) -> Result<Self, FieldError> {
        super::parse_scalar(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(k: u32, bits: u64) -> Gf2k {
        Gf2k::new(k, bits).unwrap()
    }

    /// Schoolbook product followed by long division, independent of the tables.
    fn oracle_mul(a: u64, b: u64, m: u64) -> u64 {
        let mut prod = 0u128;
        for i in 0..64 {
            if (a >> i) & 1 == 1 {
                prod ^= (b as u128) << i;
            }
        }
        let dm = 127 - (m as u128).leading_zeros();
        for bit in (dm..128).rev() {
            if (prod >> bit) & 1 == 1 {
                prod ^= (m as u128) << (bit - dm);
            }
        }
        prod as u64
    }

    #[test]
    fn least_irreducibles() {
        assert_eq!(modulus(1).unwrap(), 0b10);
        assert_eq!(modulus(2).unwrap(), 0b111);
        assert_eq!(modulus(3).unwrap(), 0b1011);
        assert_eq!(modulus(4).unwrap(), 0b10011);
        assert_eq!(modulus(8).unwrap(), 0x11b);
        for k in 1..=MAX_DEGREE {
            assert!(is_irreducible_gf2(modulus(k).unwrap()));
        }
        assert!(!is_irreducible_gf2(0b101)); // (x+1)^2
        assert!(is_irreducible_gf2(0b11111));
        assert!(!is_irreducible_gf2(0b10101)); // (x^2+x+1)^2
    }

    #[test]
    fn small_field_examples() {
        let x4 = g(2, 0b10);
        assert_eq!(x4 + x4, g(2, 0));
        assert_eq!(g(1, 1) + g(1, 1), g(1, 0));
        assert_eq!(x4 * x4, g(2, 0b11));
        assert_eq!(x4.inv(), g(2, 0b11));
        assert_eq!(x4.frobenius(), g(2, 0b11));
        let x2 = g(3, 0b100);
        assert_eq!(x2 * x2, g(3, 0b110));
        assert_eq!(g(3, 0b10).inv(), g(3, 0b101));
        assert_eq!(g(3, 0).try_inv(), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn table_multiplication_matches_schoolbook() {
        for k in 1..=8 {
            let m = modulus(k).unwrap();
            for a in 0..1u64 << k {
                for b in 0..1u64 << k {
                    assert_eq!(Gf2k::mul_bits(k, a, b), oracle_mul(a, b, m));
                }
            }
        }
    }

    #[test]
    fn frobenius_has_order_k() {
        for k in 1..=8 {
            for a in Gf2k::elements(k) {
                let mut r = a;
                for _ in 0..k {
                    r = r.frobenius();
                }
                assert_eq!(r, a);
                assert_eq!(a.sqrt().square(), a);
            }
        }
    }

    #[test]
    fn inverses_at_every_level() {
        for k in [1, 2, 3, 5, 8, 12, 16, 17, 24, 32] {
            let mut x = Gf2k::generator(k) + Gf2k::one(k);
            for _ in 0..50 {
                if !x.is_zero() {
                    assert!((x * x.inv()).is_one(), "k={k} x={x}");
                }
                x = x * x + Gf2k::generator(k);
            }
        }
    }

    #[test]
    fn level_mismatch_is_reported() {
        let err = g(2, 1).try_add(&g(3, 1)).unwrap_err();
        assert!(matches!(err, FieldError::LevelMismatch { .. }));
        assert!(g(2, 1).try_mul(&g(4, 1)).is_err());
        assert!(Gf2k::new(2, 0b100).is_err());
        assert!(Gf2k::new(33, 0).is_err());
    }

    #[test]
    fn serialization() {
        let a = g(4, 0xb);
        assert_eq!(a.to_string(), "gf2_4:b");
        assert_eq!("gf2_4:b".parse::<Gf2k>().unwrap(), a);
    }
}
