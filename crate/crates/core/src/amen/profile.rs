//! Empirical uniformity profiles: for each level of a family and each `n`,
//! the minimal certified `|T|` against sampled `S` (`|S| ≤ n`) at `ε = 1/n`.
//!
//! The recorded `f̂(n)` is a lower estimate of any valid bound function over
//! the sampled sets only.

use std::fmt::Write as _;
use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::fields::FieldTower;
use crate::groups::{FiniteGroup, GElem, GroupHandle};

use super::{format_ratio, AmenError, FolnerSearch, Mode, Rational, SearchOptions, SearchStatus};

pub const PROFILE_CSV_HEADER: &str = "level,n,s_size,min_t,defect,status";

/// How `S` is drawn in each cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sampler {
    /// Three sets per cell: the level's generators (padded with random
    /// elements up to `n`), `n` random elements, and the `n` elements with
    /// the largest classes among `8n` random draws.
    Mixed,
    /// `samples` sets of `n` random elements.
    Random { samples: usize },
    /// The given elements of the first level, lifted to every level and cut
    /// to their first `n`.
    Fixed(Vec<GElem>),
}

impl Sampler {
    pub fn name(&self) -> String {
        match self {
            Sampler::Mixed => "mixed(generators,random,adversarial)".into(),
            Sampler::Random { samples } => format!("random({samples})"),
            Sampler::Fixed(xs) => {
                format!("fixed({})", xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";"))
            }
        }
    }

    fn draw(&self, group: &GroupHandle, n: usize, tower: &FieldTower, rng: &mut ChaCha8Rng) -> Result<Vec<Vec<GElem>>, AmenError> {
        let random = |rng: &mut ChaCha8Rng, k: usize| -> Vec<GElem> { (0..k).map(|_| group.random_element(rng)).collect() };
        Ok(match self {
            Sampler::Mixed => {
                let mut gens = group.generators();
                gens.truncate(n);
                let pad = n - gens.len();
                gens.extend(random(rng, pad));
                let plain = random(rng, n);
                let mut pool = random(rng, 8 * n);
                pool.sort();
                pool.dedup();
                let mut sized: Vec<(u64, GElem)> =
                    pool.into_iter().map(|x| Ok((group.class_size(&x)?, x))).collect::<Result<_, AmenError>>()?;
                sized.sort_by(|x, y| y.0.cmp(&x.0).then_with(|| x.1.cmp(&y.1)));
                let adversarial = sized.into_iter().take(n).map(|(_, x)| x).collect();
                vec![gens, plain, adversarial]
            }
            Sampler::Random { samples } => (0..*samples).map(|_| random(rng, n)).collect(),
            Sampler::Fixed(xs) => {
                let lifted = xs.iter().take(n).map(|x| group.lift(x, tower)).collect::<Result<Vec<_>, _>>()?;
                vec![lifted]
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileCell {
    pub level: String,
    pub group: String,
    pub n: usize,
    pub sample: usize,
    #[serde(rename = "S")]
    pub s: Vec<String>,
    pub epsilon: String,
    pub min_size: usize,
    pub min_t: Option<usize>,
    pub lower_bound: usize,
    pub defect: Option<String>,
    /// `exact`, `heuristic` or `exhausted` (which includes budget exhaustion).
    pub status: String,
    #[serde(rename = "T")]
    pub t: Option<Vec<String>>,
    pub contains_identity: bool,
    pub beats_invariant_unions: bool,
}

/// `f̂(n)` at one level: the largest minimal `|T|` over the sampled sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FHat {
    pub level: String,
    pub n: usize,
    pub value: Option<usize>,
    pub all_exact: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniformityProfile {
    pub mode: Mode,
    pub sampler: String,
    pub seed: u64,
    pub exclude_identity: bool,
    pub family: Vec<String>,
    pub cells: Vec<ProfileCell>,
    pub f_hat: Vec<FHat>,
}

impl UniformityProfile {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("# sl2amen profile v1\n");
        out.push_str(PROFILE_CSV_HEADER);
        out.push('\n');
        for c in &self.cells {
            let min_t = c.min_t.map(|x| x.to_string()).unwrap_or_default();
            let defect = c.defect.clone().unwrap_or_default();
            writeln!(out, "{},{},{},{},{},{}", c.level, c.n, c.s.len(), min_t, defect, c.status).expect("string write");
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("profile serializes")
    }

    /// `f̂(n)` maximized over levels too.
    pub fn f_hat_overall(&self, n: usize) -> Option<usize> {
        self.f_hat.iter().filter(|f| f.n == n).filter_map(|f| f.value).max()
    }
}

#[derive(Debug, Clone)]
pub struct ProfileOptions {
    pub seed: u64,
    pub search: SearchOptions,
    pub tower: FieldTower,
}

impl ProfileOptions {
    pub fn new(mode: Mode, seed: u64) -> Self {
        ProfileOptions { seed, search: SearchOptions::for_mode(mode), tower: FieldTower::default() }
    }
}

fn status_name(s: SearchStatus) -> &'static str {
    match s {
        SearchStatus::Exact => "exact",
        SearchStatus::Heuristic => "heuristic",
        SearchStatus::Exhausted | SearchStatus::BudgetExceeded => "exhausted",
    }
}

fn run_level(
    level_index: usize,
    group: &GroupHandle,
    mode: Mode,
    ns: &RangeInclusive<usize>,
    sampler: &Sampler,
    opts: &ProfileOptions,
) -> Result<Vec<ProfileCell>, AmenError> {
    let mut cells = vec![];
    for n in ns.clone() {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        rng.set_stream(((level_index as u64) << 32) | n as u64);
        let _ = rng.gen::<u32>();
        let epsilon = Rational::new(1, n as u64);
        let min_size = if mode == Mode::Conjugation { n } else { 1 };
        for (sample, s) in sampler.draw(group, n, &opts.tower, &mut rng)?.into_iter().enumerate() {
            let search = FolnerSearch::new(group, &s, mode, opts.search.clone())?;
            let out = search.minimal(epsilon, min_size)?;
            let e = group.identity();
            cells.push(ProfileCell {
                level: group.level_label(),
                group: group.spec(),
                n,
                sample,
                s: s.iter().map(|x| x.to_string()).collect(),
                epsilon: format_ratio(&epsilon),
                min_size,
                min_t: out.size(),
                lower_bound: out.lower_bound,
                defect: out.defect.map(|d| format_ratio(&d)),
                status: status_name(out.status).into(),
                contains_identity: out.witness.as_ref().is_some_and(|w| w.contains(&e)),
                beats_invariant_unions: out.beats_invariant_unions(),
                t: out.witness.map(|w| w.iter().map(|x| x.to_string()).collect()),
            });
        }
    }
    Ok(cells)
}

/// Runs every `(level, n)` cell. Cells are independent and seeded from
/// `(seed, level, n)`, so the result does not depend on scheduling.
pub fn profile_uniform(
    family: &[GroupHandle],
    mode: Mode,
    ns: RangeInclusive<usize>,
    sampler: &Sampler,
    opts: &ProfileOptions,
) -> Result<UniformityProfile, AmenError> {
    if ns.is_empty() || *ns.start() == 0 {
        return Err(AmenError::Invalid("n must range over positive integers".into()));
    }
    let per_level: Vec<Vec<ProfileCell>> = family
        .par_iter()
        .enumerate()
        .map(|(i, g)| run_level(i, g, mode, &ns, sampler, opts))
        .collect::<Result<_, _>>()?;
    let mut f_hat = vec![];
    for cells in &per_level {
        for n in ns.clone() {
            let row: Vec<&ProfileCell> = cells.iter().filter(|c| c.n == n).collect();
            if let Some(first) = row.first() {
                f_hat.push(FHat {
                    level: first.level.clone(),
                    n,
                    value: row.iter().filter_map(|c| c.min_t).max(),
                    all_exact: row.iter().all(|c| c.status == "exact"),
                });
            }
        }
    }
    Ok(UniformityProfile {
        mode,
        sampler: sampler.name(),
        seed: opts.seed,
        exclude_identity: opts.search.exclude_identity,
        family: family.iter().map(|g| g.spec()).collect(),
        cells: per_level.into_iter().flatten().collect(),
        f_hat,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::parse_family;

    #[test]
    fn n_one_translation_with_identity() {
        let g = GroupHandle::sym(3).unwrap();
        let s = Sampler::Fixed(vec![g.identity()]);
        let p = profile_uniform(&[g], Mode::Translation, 1..=1, &s, &ProfileOptions::new(Mode::Translation, 7)).unwrap();
        assert_eq!(p.cells.len(), 1);
        assert_eq!(p.cells[0].min_t, Some(1));
        assert_eq!(p.f_hat_overall(1), Some(1));
    }

    #[test]
    fn deterministic_and_well_formed() {
        let fam = parse_family("sym:2..4").unwrap();
        let opts = ProfileOptions::new(Mode::Translation, 42);
        let a = profile_uniform(&fam, Mode::Translation, 1..=3, &Sampler::Mixed, &opts).unwrap();
        let b = profile_uniform(&fam, Mode::Translation, 1..=3, &Sampler::Mixed, &opts).unwrap();
        assert_eq!(a.to_csv(), b.to_csv());
        assert_eq!(a.to_json(), b.to_json());
        assert_eq!(a.cells.len(), 3 * 3 * 3);
        assert!(a.to_csv().lines().nth(1) == Some(PROFILE_CSV_HEADER));
        assert!(a.cells.iter().all(|c| c.s.len() <= c.n));
        let c = profile_uniform(&fam, Mode::Translation, 1..=3, &Sampler::Mixed, &ProfileOptions::new(Mode::Translation, 43))
            .unwrap();
        assert_ne!(a.to_json(), c.to_json());
    }

    #[test]
    fn conjugation_minima_nest_with_epsilon() {
        let fam = parse_family("sl2:gf2_1..gf2_2").unwrap();
        let base = GroupHandle::sl2_gf2(1).unwrap();
        let s = Sampler::Fixed(base.generators());
        let opts = ProfileOptions::new(Mode::Conjugation, 1);
        let p = profile_uniform(&fam, Mode::Conjugation, 1..=3, &s, &opts).unwrap();
        for level in ["q=2", "q=4"] {
            let mins: Vec<usize> = p.cells.iter().filter(|c| c.level == level).filter_map(|c| c.min_t).collect();
            assert!(mins.windows(2).all(|w| w[0] <= w[1]), "{level}: {mins:?}");
        }
        assert!(p.cells.iter().all(|c| !c.contains_identity));
    }
}
