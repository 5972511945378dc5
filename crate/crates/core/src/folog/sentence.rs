//! The bounded Følner sentences: for all `s_1..s_n` there are `t_1..t_m`
//! such that for some `k` in `[n, m]` the first `k` of them are distinct
//! and form a set with defect below `1/n`.
//!
//! With `b` the number of `t_j` whose image leaves `T`, the defect is
//! `2b/k`, so the bound reads `b ≤ B(k)` with `B(k) = (k - 1) div 2n`. That
//! is "at least `k - B(k)` images land in `T`", written as a disjunction
//! over index subsets of that size.

use crate::amen::{boundary_allowance, Mode, Rational};

use super::{FoError, Formula, Term};

pub const MAX_FORMULA_NODES: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SentenceOptions {
    /// Adds `!(t_j = e)` for every `j`.
    pub exclude_identity: bool,
    pub max_nodes: u64,
}

impl SentenceOptions {
    pub fn for_mode(mode: Mode) -> Self {
        SentenceOptions { exclude_identity: mode == Mode::Conjugation, max_nodes: MAX_FORMULA_NODES }
    }
}

fn binomial(n: u128, k: u128) -> u128 {
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

fn allowance(n: usize, k: usize) -> usize {
    boundary_allowance(&Rational::new(1, n as u64), k).unwrap_or(0) as usize
}

/// Size of a left-nested conjunction or disjunction of parts of these sizes.
fn chain(count: u128, each: u128) -> u128 {
    count.saturating_mul(each).saturating_add(count.saturating_sub(1))
}

/// Node count of the sentence, computed without building it.
pub fn predicted_size(n: usize, m: usize, mode: Mode, opts: SentenceOptions) -> u128 {
    let image = match mode {
        Mode::Translation => 3,
        Mode::Conjugation => 6,
    };
    let mut body: u128 = 0;
    for k in n..=m {
        let kk = k as u128;
        let lands = chain(kk, image + 2);
        let r = (k - allowance(n, k)) as u128;
        let count = chain(binomial(kk, r), chain(r, lands));
        let mut parts = kk * (kk - 1) / 2 + n as u128;
        let mut total = (kk * (kk - 1) / 2) * 4 + (n as u128).saturating_mul(count);
        if opts.exclude_identity {
            parts += kk;
            total += kk * 4;
        }
        let phi = total.saturating_add(parts - 1);
        body = body.saturating_add(phi);
    }
    chain((m - n + 1) as u128, 0).saturating_add(body).saturating_add((n + m) as u128)
}

fn image(mode: Mode, s: &Term, t: &Term) -> Term {
    match mode {
        Mode::Translation => Term::mul(s.clone(), t.clone()),
        Mode::Conjugation => Term::mul(Term::mul(s.clone(), t.clone()), Term::inv(s.clone())),
    }
}

/// Calls `f` on every `r`-subset of `0..k` in lexicographic order.
fn subsets(k: usize, r: usize, f: &mut impl FnMut(&[usize])) {
    let mut idx: Vec<usize> = (0..r).collect();
    loop {
        f(&idx);
        let mut i = r;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] < k - r + i {
                idx[i] += 1;
                for j in i + 1..r {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
        if r == 0 {
            return;
        }
    }
}

/// Builds the sentence for `ε = 1/n` and sizes `n..=m`.
pub fn folner_sentence(n: usize, m: usize, mode: Mode, opts: SentenceOptions) -> Result<Formula, FoError> {
    if n == 0 || m < n {
        return Err(FoError::Invalid(format!("need 1 <= n <= m, got n = {n}, m = {m}")));
    }
    let size = predicted_size(n, m, mode, opts);
    if size > opts.max_nodes as u128 {
        return Err(FoError::TooLarge { size, cap: opts.max_nodes });
    }
    let s: Vec<Term> = (1..=n).map(|i| Term::Var(format!("s{i}"))).collect();
    let t: Vec<Term> = (1..=m).map(|j| Term::Var(format!("t{j}"))).collect();

    let mut disjuncts = vec![];
    for k in n..=m {
        let mut parts = vec![];
        for i in 0..k {
            for j in i + 1..k {
                parts.push(Formula::not(Formula::eq(t[i].clone(), t[j].clone())));
            }
        }
        if opts.exclude_identity {
            for tj in &t[..k] {
                parts.push(Formula::not(Formula::eq(tj.clone(), Term::Identity)));
            }
        }
        let r = k - allowance(n, k);
        for si in &s {
            let lands: Vec<Formula> = (0..k)
                .map(|j| Formula::any((0..k).map(|l| Formula::eq(image(mode, si, &t[j]), t[l].clone()))))
                .collect();
            let mut options = vec![];
            subsets(k, r, &mut |js| options.push(Formula::all(js.iter().map(|&j| lands[j].clone()))));
            parts.push(Formula::any(options));
        }
        disjuncts.push(Formula::all(parts));
    }
    let mut f = Formula::any(disjuncts);
    for v in (1..=m).rev() {
        f = Formula::exists(&format!("t{v}"), f);
    }
    for v in (1..=n).rev() {
        f = Formula::forall(&format!("s{v}"), f);
    }
    debug_assert_eq!(f.size() as u128, size);
    Ok(f)
}
