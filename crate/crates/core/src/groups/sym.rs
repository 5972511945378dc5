use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;

use super::{FiniteGroup, GroupError};

/// A permutation in one-line notation, stored 0-based. Displayed 1-based as
/// `perm:[i1,i2,...]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<u8>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n as u8).collect())
    }

    /// From 1-based images.
    pub fn from_one_based(images: &[usize]) -> Result<Self, GroupError> {
        let n = images.len();
        let mut seen = vec![false; n];
        let mut out = Vec::with_capacity(n);
        for &i in images {
            if i == 0 || i > n || seen[i - 1] {
                return Err(GroupError::parse(&format!("{images:?}"), "not a permutation"));
            }
            seen[i - 1] = true;
            out.push((i - 1) as u8);
        }
        Ok(Perm(out))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn image(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    /// `self ∘ rhs`: apply `rhs` first.
    pub fn compose(&self, rhs: &Perm) -> Perm {
        Perm(rhs.0.iter().map(|&i| self.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut out = vec![0u8; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            out[j as usize] = i as u8;
        }
        Perm(out)
    }

    /// The natural inclusion Sym(n) -> Sym(m), fixing the new points.
    pub fn extend(&self, m: usize) -> Option<Perm> {
        if m < self.0.len() {
            return None;
        }
        let mut v = self.0.clone();
        v.extend(self.0.len() as u8..m as u8);
        Some(Perm(v))
    }

    /// Cycle lengths in descending order, fixed points included.
    pub fn cycle_type(&self) -> Vec<usize> {
        let n = self.0.len();
        let mut seen = vec![false; n];
        let mut out = vec![];
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.0[i] as usize;
                len += 1;
            }
            out.push(len);
        }
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }

    fn next_permutation(v: &mut [u8]) -> bool {
        let n = v.len();
        if n < 2 {
            return false;
        }
        let Some(i) = (0..n - 1).rev().find(|&i| v[i] < v[i + 1]) else { return false };
        let j = (i + 1..n).rev().find(|&j| v[j] > v[i]).unwrap();
        v.swap(i, j);
        v[i + 1..].reverse();
        true
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let images: Vec<String> = self.0.iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "perm:[{}]", images.join(","))
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl std::str::FromStr for Perm {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, GroupError> {
        let body = s
            .trim()
            .strip_prefix("perm:")
            .and_then(|b| b.trim().strip_prefix('['))
            .and_then(|b| b.strip_suffix(']'))
            .ok_or_else(|| GroupError::parse(s, "expected perm:[i1,i2,...]"))?;
        if body.trim().is_empty() {
            return Ok(Perm(vec![]));
        }
        let images = body
            .split(',')
            .map(|t| t.trim().parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| GroupError::parse(s, "images must be positive integers"))?;
        Perm::from_one_based(&images)
    }
}

/// The symmetric group on `n` points; a finite stage of S_∞.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Sym {
    n: usize,
}

/// Enumeration beyond this degree is never within any sensible budget.
pub const MAX_SYM_DEGREE: usize = 20;

impl Sym {
    pub fn new(n: usize) -> Self {
        assert!(n <= MAX_SYM_DEGREE, "Sym({n}) is beyond the supported range");
        Sym { n }
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    /// `(1 2)` and the long cycle `(1 2 ... n)`.
    pub fn generators(&self) -> Vec<Perm> {
        if self.n < 2 {
            return vec![];
        }
        let mut t: Vec<usize> = (1..=self.n).collect();
        t.swap(0, 1);
        let c: Vec<usize> = (2..=self.n).chain([1]).collect();
        let mut gens = vec![Perm::from_one_based(&t).unwrap()];
        if self.n > 2 {
            gens.push(Perm::from_one_based(&c).unwrap());
        }
        gens
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Perm {
        let mut v: Vec<u8> = (0..self.n as u8).collect();
        v.shuffle(rng);
        Perm(v)
    }

    /// `n! / prod(k^m_k m_k!)` for the cycle type of `p`.
    pub fn class_size(&self, p: &Perm) -> u64 {
        let ct = p.cycle_type();
        let mut denom: u64 = 1;
        let mut i = 0;
        while i < ct.len() {
            let len = ct[i];
            let mult = ct[i..].iter().take_while(|&&l| l == len).count();
            denom *= (len as u64).pow(mult as u32) * (1..=mult as u64).product::<u64>();
            i += mult;
        }
        self.order() / denom
    }

    pub fn contains(&self, p: &Perm) -> bool {
        p.degree() == self.n
    }
}

impl FiniteGroup for Sym {
    type Elem = Perm;

    fn identity(&self) -> Perm {
        Perm::identity(self.n)
    }

    fn op(&self, a: &Perm, b: &Perm) -> Perm {
        a.compose(b)
    }

    fn inv(&self, a: &Perm) -> Perm {
        a.inverse()
    }

    fn order(&self) -> u64 {
        (1..=self.n as u64).product()
    }

    fn spec(&self) -> String {
        format!("sym:{}", self.n)
    }

    fn elements(&self) -> Box<dyn Iterator<Item = Perm> + Send + '_> {
        let mut cur: Option<Vec<u8>> = Some((0..self.n as u8).collect());
        Box::new(std::iter::from_fn(move || {
            let v = cur.take()?;
            let mut next = v.clone();
            if Perm::next_permutation(&mut next) {
                cur = Some(next);
            }
            Some(Perm(v))
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_is_sorted_and_complete() {
        for n in 0..=5 {
            let g = Sym::new(n);
            let all: Vec<Perm> = g.elements().collect();
            assert_eq!(all.len() as u64, g.order());
            assert!(all.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn composition_and_text() {
        let t: Perm = "perm:[2,1,3]".parse().unwrap();
        let c: Perm = "perm:[2,3,1]".parse().unwrap();
        // apply c first: 1->2->1, 2->3->3, 3->1->2
        assert_eq!(t.compose(&c).to_string(), "perm:[1,3,2]");
        assert_eq!(c.compose(&c.inverse()), Perm::identity(3));
        assert!("perm:[1,1,2]".parse::<Perm>().is_err());
        assert!("[1,2]".parse::<Perm>().is_err());
        assert_eq!(t.extend(5).unwrap().to_string(), "perm:[2,1,3,4,5]");
    }

    #[test]
    fn class_size_formula() {
        let s4 = Sym::new(4);
        let sizes: Vec<u64> = ["perm:[2,1,3,4]", "perm:[2,3,1,4]", "perm:[2,1,4,3]", "perm:[2,3,4,1]"]
            .iter()
            .map(|p| s4.class_size(&p.parse().unwrap()))
            .collect();
        assert_eq!(sizes, vec![6, 8, 3, 6]);
    }
}
