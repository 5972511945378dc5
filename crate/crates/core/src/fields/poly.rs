//! Dense univariate polynomials over a [`Field`], coefficients low to high.
//!
//! Only what root finding needs. Every function expects all coefficients to
//! share one level and returns trimmed vectors (no zero leading coefficient).

use super::Field;

pub fn trim<F: Field>(p: &mut Vec<F>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

/// `None` for the zero polynomial.
pub fn degree<F: Field>(p: &[F]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub fn add<F: Field>(a: &[F], b: &[F], zero: &F) -> Vec<F> {
    let n = a.len().max(b.len());
    let mut out: Vec<F> = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(|| zero.clone());
            let y = b.get(i).cloned().unwrap_or_else(|| zero.clone());
            x + y
        })
        .collect();
    trim(&mut out);
    out
}

pub fn mul<F: Field>(a: &[F], b: &[F], zero: &F) -> Vec<F> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![zero.clone(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].clone() + x.clone() * y.clone();
        }
    }
    trim(&mut out);
    out
}

/// Quotient and remainder by a nonzero divisor.
pub fn divrem<F: Field>(a: &[F], b: &[F]) -> (Vec<F>, Vec<F>) {
    let db = degree(b).expect("polynomial division by zero");
    let lead_inv = b[db].inv();
    let mut rem: Vec<F> = a.to_vec();
    trim(&mut rem);
    let zero = b[db].zero_like();
    let mut quo = vec![zero.clone(); rem.len().saturating_sub(db).max(1)];
    while let Some(dr) = degree(&rem) {
        if dr < db {
            break;
        }
        let c = rem[dr].clone() * lead_inv.clone();
        let shift = dr - db;
        for (j, bj) in b.iter().enumerate().take(db + 1) {
            rem[shift + j] = rem[shift + j].clone() - c.clone() * bj.clone();
        }
        quo[shift] = c;
        trim(&mut rem);
    }
    trim(&mut quo);
    (quo, rem)
}

pub fn rem<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
    divrem(a, b).1
}

pub fn monic<F: Field>(p: &[F]) -> Vec<F> {
    let mut p = p.to_vec();
    trim(&mut p);
    if let Some(lead) = p.last().cloned() {
        let inv = lead.inv();
        for c in p.iter_mut() {
            *c = c.clone() * inv.clone();
        }
    }
    p
}

/// Monic greatest common divisor (empty when both inputs are zero).
pub fn gcd<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem(&a, &b);
        a = b;
        b = r;
    }
    monic(&a)
}

pub fn mulmod<F: Field>(a: &[F], b: &[F], m: &[F], zero: &F) -> Vec<F> {
    rem(&mul(a, b, zero), m)
}

pub fn eval<F: Field>(p: &[F], x: &F) -> F {
    let mut acc = x.zero_like();
    for c in p.iter().rev() {
        acc = acc * x.clone() + c.clone();
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::Gfp;

    fn gp(v: &[u32]) -> Vec<Gfp> {
        v.iter().map(|&x| Gfp::new(5, x).unwrap()).collect()
    }

    #[test]
    fn division_identity() {
        let a = gp(&[1, 2, 3, 4, 1]);
        let b = gp(&[2, 0, 1]);
        let zero = Gfp::new(5, 0).unwrap();
        let (q, r) = divrem(&a, &b);
        assert_eq!(add(&mul(&q, &b, &zero), &r, &zero), a);
        assert!(degree(&r).map_or(true, |d| d < 2));
    }

    #[test]
    fn gcd_is_monic() {
        let zero = Gfp::new(5, 0).unwrap();
        // (z - 1)(z - 2) and (z - 1)(z - 3)
        let f = mul(&gp(&[4, 1]), &gp(&[3, 1]), &zero);
        let g = mul(&gp(&[4, 1]), &gp(&[2, 1]), &zero);
        assert_eq!(gcd(&f, &g), gp(&[4, 1]));
        assert_eq!(eval(&f, &Gfp::new(5, 2).unwrap()), zero);
    }
}
