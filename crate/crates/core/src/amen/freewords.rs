use std::fmt;

use serde::{Deserialize, Serialize};

use crate::fields::{Poly2, RatDegree, RatFunc};
use crate::matgrp::Mat2;

/// `a`, `a⁻¹`, `b`, `b⁻¹`, written `a A b B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    A,
    AInv,
    B,
    BInv,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::A, Letter::AInv, Letter::B, Letter::BInv];

    pub fn inverse(self) -> Letter {
        match self {
            Letter::A => Letter::AInv,
            Letter::AInv => Letter::A,
            Letter::B => Letter::BInv,
            Letter::BInv => Letter::B,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Letter::A => 'a',
            Letter::AInv => 'A',
            Letter::B => 'b',
            Letter::BInv => 'B',
        }
    }

    pub fn from_symbol(c: char) -> Option<Letter> {
        Letter::ALL.into_iter().find(|l| l.symbol() == c)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordRecord {
    pub word: String,
    pub value: String,
    /// Degree of each entry (numerator minus denominator); `None` for 0.
    pub degrees: [Option<i64>; 4],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LengthSummary {
    pub length: usize,
    pub words: u64,
    pub max_entry_degree: Option<i64>,
    pub identities: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeWordReport {
    pub generators: [String; 2],
    pub max_len: usize,
    pub total_words: u64,
    pub per_length: Vec<LengthSummary>,
    /// Nontrivial reduced words that evaluate to the identity.
    pub relations: Vec<String>,
    pub words: Vec<WordRecord>,
}

impl FreeWordReport {
    pub fn no_relations(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn verdict(&self) -> String {
        if self.no_relations() {
            format!("no relations up to length {}", self.max_len)
        } else {
            format!("{} relation(s) up to length {}, first {}", self.relations.len(), self.max_len, self.relations[0])
        }
    }
}

/// `[[1,t],[0,1]]` and `[[1,0],[t,1]]` over GF(2)(t).
pub fn default_free_generators() -> (Mat2<RatFunc>, Mat2<RatFunc>) {
    let (o, z, t) = (RatFunc::one(), RatFunc::zero(), RatFunc::t());
    let a = Mat2::new(o.clone(), t.clone(), z.clone(), o.clone()).expect("unipotent");
    let b = Mat2::new(o.clone(), z, t, o).expect("unipotent");
    (a, b)
}

/// `x²` and `(P x P⁻¹)²` for `x = [[t,1],[1,0]]` and `P = [[1,1],[0,1]]`:
/// squares of two loxodromic elements with disjoint fixed points at the
/// place `1/t`. The default pair has order-2 generators in characteristic 2,
/// this one does not.
pub fn hyperbolic_pair() -> (Mat2<RatFunc>, Mat2<RatFunc>) {
    let (o, z, t) = (RatFunc::one(), RatFunc::zero(), RatFunc::t());
    let x = Mat2::new(t, o.clone(), o.clone(), z.clone()).expect("det 1");
    let p = Mat2::new(o.clone(), o.clone(), z, o).expect("det 1");
    let y = x.conj_by(&p);
    (&x * &x, &y * &y)
}

fn degree(x: &RatFunc) -> Option<i64> {
    match x.degree() {
        RatDegree::MinusInfinity => None,
        RatDegree::Finite(d) => Some(d),
    }
}

/// Evaluates a word such as `"aBab"`; `None` on an unknown letter.
pub fn evaluate_word(a: &Mat2<RatFunc>, b: &Mat2<RatFunc>, word: &str) -> Option<Mat2<RatFunc>> {
    let gens = [a.clone(), a.inv(), b.clone(), b.inv()];
    let mut acc = Mat2::identity(&RatFunc::one());
    for c in word.chars() {
        let l = Letter::from_symbol(c)?;
        acc = &acc * &gens[l as usize];
    }
    Some(acc)
}

/// Evaluates every nontrivial reduced word of length at most `max_len`
/// exactly, reusing prefix products.
pub fn free_words_check(a: &Mat2<RatFunc>, b: &Mat2<RatFunc>, max_len: usize) -> FreeWordReport {
    let gens = [a.clone(), a.inv(), b.clone(), b.inv()];
    let mut per_length: Vec<LengthSummary> = (1..=max_len)
        .map(|length| LengthSummary { length, words: 0, max_entry_degree: None, identities: 0 })
        .collect();
    let mut words = vec![];
    let mut relations = vec![];

    fn walk(
        gens: &[Mat2<RatFunc>; 4],
        prefix: &mut Vec<Letter>,
        value: &Mat2<RatFunc>,
        max_len: usize,
        per_length: &mut [LengthSummary],
        words: &mut Vec<WordRecord>,
        relations: &mut Vec<String>,
    ) {
        if prefix.len() == max_len {
            return;
        }
        for l in Letter::ALL {
            if prefix.last().is_some_and(|p| p.inverse() == l) {
                continue;
            }
            let next = value * &gens[l as usize];
            prefix.push(l);
            let word: String = prefix.iter().map(|x| x.symbol()).collect();
            let degrees = next.entries().map(degree);
            let summary = &mut per_length[prefix.len() - 1];
            summary.words += 1;
            summary.max_entry_degree = summary.max_entry_degree.max(degrees.iter().flatten().copied().max());
            if next.is_identity() {
                summary.identities += 1;
                relations.push(word.clone());
            }
            words.push(WordRecord { word, value: next.to_string(), degrees });
            walk(gens, prefix, &next, max_len, per_length, words, relations);
            prefix.pop();
        }
    }

    let one = Mat2::identity(&RatFunc::from_poly(Poly2::one()));
    walk(&gens, &mut vec![], &one, max_len, &mut per_length, &mut words, &mut relations);
    FreeWordReport {
        generators: [a.to_string(), b.to_string()],
        max_len,
        total_words: words.len() as u64,
        per_length,
        relations,
        words,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_and_first_word() {
        let (a, b) = default_free_generators();
        let r = free_words_check(&a, &b, 4);
        let counts: Vec<u64> = r.per_length.iter().map(|s| s.words).collect();
        assert_eq!(counts, vec![4, 12, 36, 108]);
        assert_eq!(r.total_words, 160);
        assert_eq!(r.words[0].word, "a");
        assert_eq!(r.words[0].value, a.to_string());
        assert!(!r.words.iter().any(|w| w.word.contains("aA") || w.word.contains("bB")));
        // unipotents square to 1 in characteristic 2
        assert_eq!(r.relations[0], "aa");
        assert_eq!(r.per_length[1].identities, 4);
        assert!(r.verdict().starts_with(&format!("{} relation(s) up to length 4, first aa", r.relations.len())));
        let degs: Vec<Option<i64>> = r.per_length.iter().map(|s| s.max_entry_degree).collect();
        assert_eq!(degs, vec![Some(1), Some(2), Some(3), Some(4)]);
    }

    #[test]
    fn hyperbolic_pair_has_no_short_relations() {
        let (a, b) = hyperbolic_pair();
        assert_eq!(a.to_string(), "[[5/1,2/1],[2/1,1/1]]@rf2");
        assert_eq!(b.to_string(), "[[7/1,4/1],[2/1,3/1]]@rf2");
        let r = free_words_check(&a, &b, 6);
        assert!(r.no_relations());
        assert_eq!(r.verdict(), "no relations up to length 6");
        assert_eq!(r.total_words, 4 + 12 + 36 + 108 + 324 + 972);
    }

    #[test]
    fn relations_are_found() {
        // a commuting pair: a b A B is a relation
        let (a, _) = hyperbolic_pair();
        let a2 = &a * &a;
        let r = free_words_check(&a, &a2, 4);
        assert!(r.relations.contains(&"abAB".to_string()));
        assert!(r.relations.contains(&"aaB".to_string()));
        assert!(!r.relations.contains(&"aa".to_string()));
        assert!(!r.no_relations());
    }

    #[test]
    fn word_evaluation_matches() {
        let (a, b) = default_free_generators();
        let r = free_words_check(&a, &b, 3);
        for w in &r.words {
            assert_eq!(evaluate_word(&a, &b, &w.word).unwrap().to_string(), w.value);
        }
    }
}
