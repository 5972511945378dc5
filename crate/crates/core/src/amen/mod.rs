//! Følner and c-Følner sets in finite groups.
//!
//! For `g` in `S` let `σ_g` be left translation `t -> g t` or conjugation
//! `t -> g t g⁻¹`. The defect of a finite nonempty `T` is
//! `max_g |σ_g(T) △ T| / |T|`, an exact fraction; `T` certifies against `ε`
//! when the defect is strictly below `ε`.
//!
//! Since each `σ_g` is a bijection, `|σ_g(T) △ T| = 2 b_g(T)` with
//! `b_g(T) = #{t ∈ T : σ_g(t) ∉ T}`. The searches work with these boundary
//! counts.

mod certificate;
mod freewords;
mod lift;
mod profile;
mod search;

use std::collections::HashSet;
use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::groups::{FiniteGroup, GroupError};

pub use certificate::{certify, CertificateRecord, FolnerCertificate, Verdict};
pub use freewords::{
    default_free_generators, evaluate_word, hyperbolic_pair, free_words_check, FreeWordReport, LengthSummary, Letter, WordRecord,
};
pub use lift::product_lift;
pub use profile::{profile_uniform, FHat, ProfileCell, ProfileOptions, Sampler, UniformityProfile, PROFILE_CSV_HEADER};
pub use search::{
    min_folner_search, FolnerSearch, SearchOptions, SearchOutcome, SearchStatus, DEFAULT_SEARCH_BUDGET, MAX_ORBIT,
};

/// Exact nonnegative fractions.
pub type Rational = Ratio<u64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AmenError {
    #[error("T must be nonempty")]
    EmptyT,
    #[error("epsilon must be positive")]
    NonPositiveEpsilon,
    #[error("{element} lies outside S (first coordinates of S' must come from S)")]
    ProjectionMismatch { element: String },
    #[error("expected a {expected} certificate, got {found}")]
    KindMismatch { expected: Mode, found: Mode },
    #[error("certificate does not verify: {0}")]
    Invalid(String),
    #[error("cannot parse {text:?}: {reason}")]
    Parse { text: String, reason: String },
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// `t -> g t`
    Translation,
    /// `t -> g t g⁻¹`
    Conjugation,
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::Translation => "translation",
            Mode::Conjugation => "conjugation",
        }
    }

    pub fn act<G: FiniteGroup>(&self, group: &G, g: &G::Elem, t: &G::Elem) -> G::Elem {
        match self {
            Mode::Translation => group.op(g, t),
            Mode::Conjugation => group.conj(g, t),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Mode {
    type Err = AmenError;
    fn from_str(s: &str) -> Result<Self, AmenError> {
        match s.trim() {
            "translation" | "t" => Ok(Mode::Translation),
            "conjugation" | "c" => Ok(Mode::Conjugation),
            _ => Err(AmenError::Parse { text: s.to_string(), reason: "expected translation or conjugation".into() }),
        }
    }
}

/// `"p/q"`, always with a denominator.
pub fn format_ratio(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Accepts `"p/q"` or an integer `"p"`.
pub fn parse_ratio(text: &str) -> Result<Rational, AmenError> {
    let bad = |reason: &str| AmenError::Parse { text: text.to_string(), reason: reason.to_string() };
    let t = text.trim();
    let (p, q) = match t.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (t, "1"),
    };
    let p: u64 = p.parse().map_err(|_| bad("numerator must be a nonnegative integer"))?;
    let q: u64 = q.parse().map_err(|_| bad("denominator must be a positive integer"))?;
    if q == 0 {
        return Err(bad("zero denominator"));
    }
    Ok(Rational::new(p, q))
}

/// Largest boundary count `b` with `2b/s < ε`, or `None` when even `b = 0`
/// fails (never, for `ε > 0`).
pub fn boundary_allowance(epsilon: &Rational, size: usize) -> Option<u64> {
    // 2b/s < p/q  <=>  2bq < ps  <=>  2bq <= ps - 1
    let (p, q) = (*epsilon.numer() as u128, *epsilon.denom() as u128);
    let ps = p * size as u128;
    (ps >= 1).then(|| ((ps - 1) / (2 * q)) as u64)
}

/// The defect of `T` against `S`, straight from the definition with set
/// operations. Duplicates in `T` are ignored; an empty `S` gives 0.
pub fn folner_defect<G: FiniteGroup>(
    group: &G,
    s: &[G::Elem],
    t: &[G::Elem],
    mode: Mode,
) -> Result<Rational, AmenError> {
    let tset: HashSet<&G::Elem> = t.iter().collect();
    if tset.is_empty() {
        return Err(AmenError::EmptyT);
    }
    let n = tset.len() as u64;
    let mut worst = Rational::new(0, 1);
    for g in s {
        let image: HashSet<G::Elem> = tset.iter().map(|x| mode.act(group, g, x)).collect();
        let only_image = image.iter().filter(|y| !tset.contains(y)).count() as u64;
        let only_t = tset.iter().filter(|x| !image.contains(**x)).count() as u64;
        let r = Rational::new(only_image + only_t, n);
        if r > worst {
            worst = r;
        }
    }
    Ok(worst)
}
