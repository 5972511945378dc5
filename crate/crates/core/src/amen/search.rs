//! Minimal Følner sets.
//!
//! Every `σ_g` preserves the orbits of the group `⟨σ_g : g ∈ S⟩` acting on
//! G, and the boundary counts `b_g(T)` add up over orbits. So the search
//! enumerates the subsets of each orbit once (Gray code, incremental
//! boundary counts), keeps for every size the Pareto-minimal boundary
//! vectors, and combines orbits knapsack-style. The combination only needs
//! sizes up to the smallest union of whole orbits that meets the size floor,
//! since such a union has defect 0.
//!
//! Orbits with more than [`MAX_ORBIT`] admissible elements are out of reach;
//! then small groups get a bounded exhaustive scan over small sizes and
//! everything else falls back to orbit-union seeds refined by greedy removal.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::groups::{enumerate, FiniteGroup, GroupError, DEFAULT_ENUM_BUDGET};

use super::{boundary_allowance, folner_defect, AmenError, Mode, Rational};

/// Cap on subset evaluations (orbit enumeration plus combination work).
pub const DEFAULT_SEARCH_BUDGET: u64 = 1 << 26;

/// Largest orbit (admissible elements) whose subsets are enumerated.
pub const MAX_ORBIT: usize = 24;

const SCAN_MAX_GROUP: usize = 60;
const SCAN_MAX_SIZE: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOptions {
    /// Forbid the identity in `T`.
    pub exclude_identity: bool,
    pub budget: u64,
    pub enum_budget: u64,
    /// Skip the exact search and go straight to seeds.
    pub heuristic_only: bool,
}

impl SearchOptions {
    /// Identity excluded for conjugation, allowed for translation.
    pub fn for_mode(mode: Mode) -> Self {
        SearchOptions {
            exclude_identity: mode == Mode::Conjugation,
            budget: DEFAULT_SEARCH_BUDGET,
            enum_budget: DEFAULT_ENUM_BUDGET,
            heuristic_only: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStatus {
    /// The witness has minimal size.
    Exact,
    /// The witness certifies; sizes below `lower_bound` are ruled out, the
    /// ones in between are not.
    Heuristic,
    /// No admissible set of size at least `min_size` certifies.
    Exhausted,
    /// The exact search ran out of budget; the witness (if any) is the best
    /// found so far.
    BudgetExceeded,
}

impl SearchStatus {
    pub fn name(&self) -> &'static str {
        match self {
            SearchStatus::Exact => "exact",
            SearchStatus::Heuristic => "heuristic",
            SearchStatus::Exhausted => "exhausted",
            SearchStatus::BudgetExceeded => "budget_exceeded",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome<E> {
    pub status: SearchStatus,
    /// Sorted.
    pub witness: Option<Vec<E>>,
    pub defect: Option<Rational>,
    /// No certifying set has size in `[min_size, lower_bound)`.
    pub lower_bound: usize,
    pub min_size: usize,
    pub epsilon: Rational,
    /// Smallest union of whole orbits with at least `min_size` elements.
    pub invariant_union_size: Option<usize>,
    pub method: &'static str,
}

impl<E> SearchOutcome<E> {
    pub fn size(&self) -> Option<usize> {
        self.witness.as_ref().map(|w| w.len())
    }

    /// True when the witness is strictly smaller than every defect-0 union
    /// of orbits.
    pub fn beats_invariant_unions(&self) -> bool {
        match (self.size(), self.invariant_union_size) {
            (Some(s), Some(u)) => s < u,
            (Some(_), None) => true,
            _ => false,
        }
    }
}

/// Pareto-minimal boundary vectors of one orbit, per subset size.
#[derive(Debug, Clone)]
struct OrbitTable {
    /// Elements that every subset contains.
    forced: Vec<u32>,
    /// Bit `i` of a mask selects `free[i]`.
    free: Vec<u32>,
    /// Indexed by total size, forced elements included.
    fronts: Vec<Vec<(Vec<u16>, u32)>>,
}

impl OrbitTable {
    fn members(&self, mask: u32) -> impl Iterator<Item = u32> + '_ {
        self.forced.iter().copied().chain((0..self.free.len()).filter(move |&k| mask >> k & 1 == 1).map(|k| self.free[k]))
    }
}

/// Combination work ran past the budget.
struct OverBudget;

/// A prepared search over one `(G, S, mode)`; queries for different `ε` and
/// size floors reuse the orbit tables.
pub struct FolnerSearch<'a, G: FiniteGroup> {
    group: &'a G,
    mode: Mode,
    s: Vec<G::Elem>,
    options: SearchOptions,
    elems: Vec<G::Elem>,
    maps: Vec<Vec<u32>>,
    admissible: Vec<bool>,
    orbits: Vec<Vec<u32>>,
    orbit_of: Vec<usize>,
    tables: Result<Vec<OrbitTable>, SearchStatus>,
}

fn pareto(mut points: Vec<(Vec<u16>, u32)>) -> Vec<(Vec<u16>, u32)> {
    points.sort();
    points.dedup_by(|a, b| a.0 == b.0);
    let mut front: Vec<(Vec<u16>, u32)> = vec![];
    // lexicographic order puts every dominating vector before what it dominates
    for p in points {
        if !front.iter().any(|f| f.0.iter().zip(&p.0).all(|(x, y)| x <= y)) {
            front.push(p);
        }
    }
    front
}

impl<'a, G: FiniteGroup> FolnerSearch<'a, G> {
    pub fn new(group: &'a G, s: &[G::Elem], mode: Mode, options: SearchOptions) -> Result<Self, AmenError> {
        let elems = enumerate(group, options.enum_budget)?;
        let index: HashMap<&G::Elem, u32> = elems.iter().enumerate().map(|(i, x)| (x, i as u32)).collect();
        let mut maps: Vec<Vec<u32>> = vec![];
        for g in s {
            let mut m = Vec::with_capacity(elems.len());
            for t in &elems {
                let y = mode.act(group, g, t);
                let j = index.get(&y).ok_or_else(|| GroupError::NotAnElement {
                    element: g.to_string(),
                    group: group.spec(),
                })?;
                m.push(*j);
            }
            let trivial = m.iter().enumerate().all(|(i, &j)| i as u32 == j);
            if !trivial && !maps.contains(&m) {
                maps.push(m);
            }
        }
        let e = group.identity();
        let admissible: Vec<bool> = elems.iter().map(|x| !(options.exclude_identity && *x == e)).collect();

        let mut orbit_of = vec![usize::MAX; elems.len()];
        let mut orbits = vec![];
        for start in 0..elems.len() {
            if orbit_of[start] != usize::MAX {
                continue;
            }
            let id = orbits.len();
            orbit_of[start] = id;
            let mut orbit = vec![start as u32];
            let mut i = 0;
            while i < orbit.len() {
                let x = orbit[i] as usize;
                for m in &maps {
                    let y = m[x] as usize;
                    if orbit_of[y] == usize::MAX {
                        orbit_of[y] = id;
                        orbit.push(y as u32);
                    }
                }
                i += 1;
            }
            orbit.sort_unstable();
            orbits.push(orbit);
        }

        let mut search = FolnerSearch {
            group,
            mode,
            s: s.to_vec(),
            options,
            elems,
            maps,
            admissible,
            orbits,
            orbit_of,
            tables: Err(SearchStatus::Heuristic),
        };
        search.tables = search.build_tables();
        Ok(search)
    }

    pub fn group_order(&self) -> usize {
        self.elems.len()
    }

    pub fn orbit_sizes(&self) -> Vec<usize> {
        self.orbits.iter().map(|o| o.len()).collect()
    }

    /// Whether queries run the exact orbit search.
    pub fn is_exact(&self) -> bool {
        self.tables.is_ok()
    }

    fn build_tables(&self) -> Result<Vec<OrbitTable>, SearchStatus> {
        if self.options.heuristic_only {
            return Err(SearchStatus::Heuristic);
        }
        let mut cost: u64 = 0;
        for o in &self.orbits {
            let a = o.iter().filter(|&&x| self.admissible[x as usize]).count();
            if a > MAX_ORBIT {
                return Err(SearchStatus::Heuristic);
            }
            cost = cost.saturating_add(1 << a);
        }
        if cost > self.options.budget {
            return Err(SearchStatus::BudgetExceeded);
        }
        Ok(self.orbits.iter().map(|o| self.orbit_table(o, None)).collect())
    }

    /// Enumerates the admissible subsets of `orbit` that respect `fixed`
    /// (`Some(true)` forced in, `Some(false)` forced out).
    fn orbit_table(&self, orbit: &[u32], fixed: Option<&[Option<bool>]>) -> OrbitTable {
        let n = orbit.len();
        let d = self.maps.len();
        let local: HashMap<u32, usize> = orbit.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let fwd: Vec<Vec<usize>> =
            self.maps.iter().map(|m| orbit.iter().map(|&x| local[&m[x as usize]]).collect()).collect();
        let bwd: Vec<Vec<usize>> = fwd
            .iter()
            .map(|f| {
                let mut inv = vec![0; n];
                for (i, &j) in f.iter().enumerate() {
                    inv[j] = i;
                }
                inv
            })
            .collect();
        let fix = |i: usize| fixed.and_then(|f| f[orbit[i] as usize]);
        let adm_local: Vec<usize> = (0..n).filter(|&i| self.admissible[orbit[i] as usize]).collect();
        let a = adm_local.len();
        let free_local: Vec<usize> = adm_local.iter().copied().filter(|&i| fix(i).is_none()).collect();
        let forced_local: Vec<usize> = adm_local.iter().copied().filter(|&i| fix(i) == Some(true)).collect();

        let base = (a + 1) as u64;
        let key_space = base.checked_pow(d as u32 + 1).unwrap_or(u64::MAX);
        let mut dense: Vec<u32> = if key_space <= 1 << 22 { vec![0; key_space as usize] } else { vec![] };
        let mut sparse: HashMap<Vec<u16>, u32> = HashMap::new();
        let mut record = |size: usize, b: &[u16], mask: u32| {
            if dense.is_empty() {
                let mut key = Vec::with_capacity(d + 1);
                key.push(size as u16);
                key.extend_from_slice(b);
                sparse.entry(key).or_insert(mask + 1);
            } else {
                let mut key = size as u64;
                let mut mul = base;
                for &x in b {
                    key += x as u64 * mul;
                    mul *= base;
                }
                let slot = &mut dense[key as usize];
                if *slot == 0 {
                    *slot = mask + 1;
                }
            }
        };

        let mut in_t = vec![false; n];
        for &i in &forced_local {
            in_t[i] = true;
        }
        let mut b: Vec<u16> =
            fwd.iter().map(|f| forced_local.iter().filter(|&&y| !in_t[f[y]]).count() as u16).collect();
        let f0 = forced_local.len();
        record(f0, &b, 0);
        let contrib = |in_t: &[bool], f: &[usize], y: usize| -> u16 { (in_t[y] && !in_t[f[y]]) as u16 };
        for i in 1u64..(1u64 << free_local.len()) {
            let bit = i.trailing_zeros() as usize;
            let x = free_local[bit];
            for m in 0..d {
                let pre = bwd[m][x];
                let mut before = contrib(&in_t, &fwd[m], x);
                if pre != x {
                    before += contrib(&in_t, &fwd[m], pre);
                }
                in_t[x] = !in_t[x];
                let mut after = contrib(&in_t, &fwd[m], x);
                if pre != x {
                    after += contrib(&in_t, &fwd[m], pre);
                }
                in_t[x] = !in_t[x];
                b[m] = b[m] + after - before;
            }
            in_t[x] = !in_t[x];
            let gray = (i ^ (i >> 1)) as u32;
            record(f0 + gray.count_ones() as usize, &b, gray);
        }

        let mut buckets: Vec<Vec<(Vec<u16>, u32)>> = vec![vec![]; a + 1];
        if dense.is_empty() {
            for (key, mask) in sparse {
                buckets[key[0] as usize].push((key[1..].to_vec(), mask - 1));
            }
        } else {
            for (key, &mask) in dense.iter().enumerate() {
                if mask == 0 {
                    continue;
                }
                let mut k = key as u64;
                let size = (k % base) as usize;
                k /= base;
                let mut bv = Vec::with_capacity(d);
                for _ in 0..d {
                    bv.push((k % base) as u16);
                    k /= base;
                }
                buckets[size].push((bv, mask - 1));
            }
        }
        OrbitTable {
            forced: forced_local.iter().map(|&i| orbit[i]).collect(),
            free: free_local.iter().map(|&i| orbit[i]).collect(),
            fronts: buckets.into_iter().map(pareto).collect(),
        }
    }

    fn admissible_count(&self) -> usize {
        self.admissible.iter().filter(|&&x| x).count()
    }

    /// Smallest union of whole admissible orbits with at least `min_size`
    /// elements, as orbit indices.
    fn invariant_union(&self, min_size: usize) -> Option<Vec<usize>> {
        let whole: Vec<usize> = (0..self.orbits.len())
            .filter(|&i| self.orbits[i].iter().all(|&x| self.admissible[x as usize]))
            .collect();
        let total: usize = whole.iter().map(|&i| self.orbits[i].len()).sum();
        if total < min_size {
            return None;
        }
        // reach[s] = orbit index that first reached sum s
        let mut reach: Vec<Option<usize>> = vec![None; total + 1];
        let mut reached = vec![false; total + 1];
        reached[0] = true;
        for &o in &whole {
            let len = self.orbits[o].len();
            for s in (len..=total).rev() {
                if !reached[s] && reached[s - len] {
                    reached[s] = true;
                    reach[s] = Some(o);
                }
            }
        }
        let target = (min_size..=total).find(|&s| reached[s])?;
        let mut picked = vec![];
        let mut s = target;
        while s > 0 {
            let o = reach[s].expect("reached sums have a last orbit");
            picked.push(o);
            s -= self.orbits[o].len();
        }
        Some(picked)
    }

    /// Smallest certifying admissible `T` with `|T| >= min_size`.
    pub fn minimal(&self, epsilon: Rational, min_size: usize) -> Result<SearchOutcome<G::Elem>, AmenError> {
        if *epsilon.numer() == 0 {
            return Err(AmenError::NonPositiveEpsilon);
        }
        let min_size = min_size.max(1);
        let u = self.admissible_count();
        let union = self.invariant_union(min_size);
        let union_size = union.as_ref().map(|os| os.iter().map(|&o| self.orbits[o].len()).sum::<usize>());
        let blank = SearchOutcome {
            status: SearchStatus::Exhausted,
            witness: None,
            defect: None,
            lower_bound: u + 1,
            min_size,
            epsilon,
            invariant_union_size: union_size,
            method: "orbit-dp",
        };
        if min_size > u {
            return Ok(blank);
        }
        let cap = union_size.unwrap_or(u);
        let tables = match &self.tables {
            Ok(tables) => tables,
            Err(status) => return self.fallback(*status, epsilon, min_size, union, blank),
        };
        let mut work = 0;
        match self.combine(tables, epsilon, min_size, cap, &mut work) {
            Ok(Some(t)) => {
                let t = self.lex_least(tables, epsilon, t);
                self.finish(t, SearchStatus::Exact, None, blank)
            }
            Ok(None) => Ok(blank),
            Err(OverBudget) => self.fallback(SearchStatus::BudgetExceeded, epsilon, min_size, union, blank),
        }
    }

    /// Knapsack over orbits: the smallest size in `[min_size, cap]` that some
    /// choice of per-orbit subsets certifies at, with one such choice.
    fn combine(
        &self,
        tables: &[OrbitTable],
        epsilon: Rational,
        min_size: usize,
        cap: usize,
        work: &mut u64,
    ) -> Result<Option<Vec<u32>>, OverBudget> {
        let d = self.maps.len();
        let bmax = boundary_allowance(&epsilon, cap).unwrap_or(0) as u16;

        #[derive(Clone)]
        struct Entry {
            b: Vec<u16>,
            prev: u32,
            take: (u16, u32),
        }
        let mut layers: Vec<Vec<Vec<Entry>>> = vec![];
        let mut cur: Vec<Vec<Entry>> = vec![vec![]; cap + 1];
        cur[0].push(Entry { b: vec![0; d], prev: 0, take: (0, 0) });
        for table in tables {
            let mut next: Vec<Vec<Entry>> = vec![vec![]; cap + 1];
            for (s, bucket) in cur.iter().enumerate() {
                for (ei, e) in bucket.iter().enumerate() {
                    for (j, front) in table.fronts.iter().enumerate() {
                        if s + j > cap {
                            break;
                        }
                        for (fi, (fb, _)) in front.iter().enumerate() {
                            *work += 1;
                            let nb: Vec<u16> = e.b.iter().zip(fb).map(|(x, y)| x + y).collect();
                            if nb.iter().any(|&x| x > bmax) {
                                continue;
                            }
                            next[s + j].push(Entry { b: nb, prev: ei as u32, take: (j as u16, fi as u32) });
                        }
                    }
                }
            }
            if *work > self.options.budget {
                return Err(OverBudget);
            }
            for bucket in next.iter_mut() {
                bucket.sort_by(|x, y| x.b.cmp(&y.b));
                bucket.dedup_by(|x, y| x.b == y.b);
                let mut front: Vec<Entry> = vec![];
                for p in bucket.drain(..) {
                    if !front.iter().any(|f| f.b.iter().zip(&p.b).all(|(x, y)| x <= y)) {
                        front.push(p);
                    }
                }
                *bucket = front;
            }
            layers.push(std::mem::replace(&mut cur, next));
        }
        layers.push(cur);

        let last = layers.last().expect("at least the initial layer");
        let hit = (min_size..=cap).find_map(|s| {
            let allow = boundary_allowance(&epsilon, s)? as u16;
            last[s].iter().position(|e| e.b.iter().all(|&x| x <= allow)).map(|i| (s, i))
        });
        let Some((mut s, mut i)) = hit else { return Ok(None) };
        let mut t = vec![];
        for (li, table) in tables.iter().enumerate().rev() {
            let e = &layers[li + 1][s][i];
            let (j, fi) = e.take;
            let mask = table.fronts[j as usize][fi as usize].1;
            t.extend(table.members(mask));
            s -= j as usize;
            i = e.prev as usize;
        }
        t.sort_unstable();
        Ok(Some(t))
    }

    /// Turns a minimal witness into the lexicographically least one of the
    /// same size: elements are decided in index order, each taken when some
    /// witness still agrees with every decision so far. Gives up (keeping
    /// `found`) when the budget runs out.
    fn lex_least(&self, tables: &[OrbitTable], epsilon: Rational, found: Vec<u32>) -> Vec<u32> {
        let size = found.len();
        let mut tables = tables.to_vec();
        let mut fixed: Vec<Option<bool>> = vec![None; self.elems.len()];
        let mut dirty = vec![false; self.orbits.len()];
        let mut cur = found.clone();
        let mut taken = 0;
        let mut work = 0u64;
        for i in 0..self.elems.len() {
            if taken == size {
                break;
            }
            if !self.admissible[i] {
                continue;
            }
            let o = self.orbit_of[i];
            dirty[o] = true;
            fixed[i] = Some(true);
            if cur.binary_search(&(i as u32)).is_ok() {
                taken += 1;
                continue;
            }
            for (k, flag) in dirty.iter_mut().enumerate() {
                if *flag {
                    tables[k] = self.orbit_table(&self.orbits[k], Some(&fixed));
                    work += 1 << tables[k].free.len();
                    *flag = false;
                }
            }
            match self.combine(&tables, epsilon, size, size, &mut work) {
                Ok(Some(t)) => {
                    cur = t;
                    taken += 1;
                }
                Ok(None) => {
                    fixed[i] = Some(false);
                    dirty[o] = true;
                }
                Err(OverBudget) => return found,
            }
        }
        debug_assert_eq!(cur.len(), size);
        cur
    }

    fn finish(
        &self,
        t: Vec<u32>,
        status: SearchStatus,
        lower_bound: Option<usize>,
        blank: SearchOutcome<G::Elem>,
    ) -> Result<SearchOutcome<G::Elem>, AmenError> {
        let witness: Vec<G::Elem> = t.iter().map(|&i| self.elems[i as usize].clone()).collect();
        // independent recomputation from the definition
        let defect = folner_defect(self.group, &self.s, &witness, self.mode)?;
        if defect >= blank.epsilon {
            return Err(AmenError::Invalid(format!("search produced a set with defect {defect}")));
        }
        Ok(SearchOutcome {
            status,
            lower_bound: lower_bound.unwrap_or(witness.len()),
            witness: Some(witness),
            defect: Some(defect),
            ..blank
        })
    }

    fn boundary(&self, in_t: &[bool], t: &[u32]) -> Vec<u64> {
        self.maps
            .iter()
            .map(|m| t.iter().filter(|&&x| !in_t[m[x as usize] as usize]).count() as u64)
            .collect()
    }

    fn certifies(&self, in_t: &[bool], t: &[u32], epsilon: &Rational) -> bool {
        match boundary_allowance(epsilon, t.len()) {
            Some(allow) => self.boundary(in_t, t).iter().all(|&b| b <= allow),
            None => false,
        }
    }

    fn fallback(
        &self,
        status: SearchStatus,
        epsilon: Rational,
        min_size: usize,
        union: Option<Vec<usize>>,
        blank: SearchOutcome<G::Elem>,
    ) -> Result<SearchOutcome<G::Elem>, AmenError> {
        let n = self.elems.len();
        // seed: the smallest invariant union, else every admissible element
        let seed: Vec<u32> = match &union {
            Some(os) => {
                let mut v: Vec<u32> = os.iter().flat_map(|&o| self.orbits[o].iter().copied()).collect();
                v.sort_unstable();
                v
            }
            None => (0..n as u32).filter(|&i| self.admissible[i as usize]).collect(),
        };
        let mut in_t = vec![false; n];
        for &x in &seed {
            in_t[x as usize] = true;
        }
        let mut best: Option<Vec<u32>> = self.certifies(&in_t, &seed, &epsilon).then(|| seed.clone());
        if let Some(start) = best.clone() {
            best = Some(self.greedy_shrink(start, &epsilon, min_size));
        }

        // bounded exhaustive scan over small sizes
        let mut lower = min_size;
        let mut budget = self.options.budget;
        if n <= SCAN_MAX_GROUP && !self.options.heuristic_only {
            let limit = best.as_ref().map_or(SCAN_MAX_SIZE, |b| b.len().saturating_sub(1).min(SCAN_MAX_SIZE));
            for size in min_size..=limit {
                match self.scan_size(size, &epsilon, &mut budget) {
                    Some(Some(t)) => {
                        return self.finish(t, SearchStatus::Exact, None, SearchOutcome { method: "bounded-scan", ..blank });
                    }
                    Some(None) => lower = size + 1,
                    None => break,
                }
            }
        }
        let method = if status == SearchStatus::BudgetExceeded { "seeds (budget)" } else { "seeds" };
        match best {
            Some(t) if t.len() <= lower => {
                self.finish(t, SearchStatus::Exact, None, SearchOutcome { method: "bounded-scan", ..blank })
            }
            Some(t) => self.finish(t, status, Some(lower), SearchOutcome { method, ..blank }),
            None => Ok(SearchOutcome { status, lower_bound: lower, method, ..blank }),
        }
    }

    /// Drops elements one at a time (lowest index first) while the set keeps
    /// certifying and stays at or above the floor.
    fn greedy_shrink(&self, mut t: Vec<u32>, epsilon: &Rational, min_size: usize) -> Vec<u32> {
        let mut in_t = vec![false; self.elems.len()];
        for &x in &t {
            in_t[x as usize] = true;
        }
        let mut work: u64 = 0;
        loop {
            if t.len() <= min_size {
                return t;
            }
            let mut removed = false;
            for pos in 0..t.len() {
                work += (t.len() * self.maps.len().max(1)) as u64;
                if work > self.options.budget {
                    return t;
                }
                let x = t[pos];
                in_t[x as usize] = false;
                let candidate: Vec<u32> = t.iter().copied().filter(|&y| y != x).collect();
                if self.certifies(&in_t, &candidate, epsilon) {
                    t = candidate;
                    removed = true;
                    break;
                }
                in_t[x as usize] = true;
            }
            if !removed {
                return t;
            }
        }
    }

    /// All admissible sets of one size. `None` when the budget runs out,
    /// `Some(None)` when no set of that size certifies.
    fn scan_size(&self, size: usize, epsilon: &Rational, budget: &mut u64) -> Option<Option<Vec<u32>>> {
        let n = self.elems.len();
        let pool: Vec<u32> = (0..n as u32).filter(|&i| self.admissible[i as usize]).collect();
        if size > pool.len() {
            return Some(None);
        }
        let e_index = self.elems.iter().position(|x| *x == self.group.identity()).expect("identity") as u32;
        // right translation commutes with left translation, so some optimal
        // translation witness contains e
        let pin = (self.mode == Mode::Translation && self.admissible[e_index as usize]).then_some(e_index);
        let rest: Vec<u32> = pool.iter().copied().filter(|&x| Some(x) != pin).collect();
        let k = size - pin.is_some() as usize;
        if k > rest.len() {
            return Some(None);
        }
        let mut idx: Vec<usize> = (0..k).collect();
        let mut in_t = vec![false; n];
        let mut t: Vec<u32> = Vec::with_capacity(size);
        loop {
            if *budget == 0 {
                return None;
            }
            *budget -= 1;
            t.clear();
            t.extend(pin);
            t.extend(idx.iter().map(|&i| rest[i]));
            for &x in &t {
                in_t[x as usize] = true;
            }
            let ok = self.certifies(&in_t, &t, epsilon);
            for &x in &t {
                in_t[x as usize] = false;
            }
            if ok {
                t.sort_unstable();
                return Some(Some(t));
            }
            // next k-combination of rest
            let mut i = k;
            loop {
                if i == 0 {
                    return Some(None);
                }
                i -= 1;
                if idx[i] < rest.len() - k + i {
                    idx[i] += 1;
                    for j in i + 1..k {
                        idx[j] = idx[j - 1] + 1;
                    }
                    break;
                }
            }
            if k == 0 {
                return Some(None);
            }
        }
    }
}

/// One-shot search; see [`FolnerSearch`].
pub fn min_folner_search<G: FiniteGroup>(
    group: &G,
    s: &[G::Elem],
    epsilon: Rational,
    mode: Mode,
    min_size: usize,
    options: SearchOptions,
) -> Result<SearchOutcome<G::Elem>, AmenError> {
    FolnerSearch::new(group, s, mode, options)?.minimal(epsilon, min_size)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{GElem, GroupHandle};

    fn el(g: &GroupHandle, s: &str) -> GElem {
        g.parse_element(s).unwrap()
    }

    #[test]
    fn sym3_translation_example() {
        let g = GroupHandle::sym(3).unwrap();
        let s = [el(&g, "perm:[2,1,3]")];
        let out = min_folner_search(&g, &s, Rational::new(1, 2), Mode::Translation, 1, SearchOptions::for_mode(Mode::Translation))
            .unwrap();
        assert_eq!(out.status, SearchStatus::Exact);
        assert_eq!(out.witness.unwrap(), vec![g.identity(), s[0].clone()]);
        assert_eq!(out.defect, Some(Rational::new(0, 1)));
    }

    #[test]
    fn conjugation_identity_is_invariant() {
        let g = GroupHandle::parse("sl2:gf2_2").unwrap();
        let s = g.generators();
        let opts = SearchOptions { exclude_identity: false, ..SearchOptions::for_mode(Mode::Conjugation) };
        let out = min_folner_search(&g, &s, Rational::new(1, 2), Mode::Conjugation, 1, opts).unwrap();
        assert_eq!(out.witness.unwrap(), vec![g.identity()]);
    }

    #[test]
    fn exclusion_keeps_identity_out() {
        let g = GroupHandle::parse("sl2:gf2_2").unwrap();
        let s = g.generators();
        for eps in [Rational::new(1, 4), Rational::new(1, 1)] {
            let out =
                min_folner_search(&g, &s, eps, Mode::Conjugation, 2, SearchOptions::for_mode(Mode::Conjugation)).unwrap();
            assert_eq!(out.status, SearchStatus::Exact);
            let w = out.witness.unwrap();
            assert!(!w.contains(&g.identity()));
            assert!(w.len() >= 2);
            assert_eq!(out.invariant_union_size, Some(12));
        }
    }

    #[test]
    fn floor_above_universe_is_exhausted() {
        let g = GroupHandle::sym(3).unwrap();
        let out = min_folner_search(&g, &[], Rational::new(1, 2), Mode::Conjugation, 6, SearchOptions::for_mode(Mode::Conjugation))
            .unwrap();
        assert_eq!(out.status, SearchStatus::Exhausted);
        assert_eq!(out.lower_bound, 6);
    }

    #[test]
    fn out_of_scope_falls_back() {
        // translation orbits of a generating pair in SL2(4) have 60 elements
        let g = GroupHandle::parse("sl2:gf2_2").unwrap();
        let s = g.generators();
        let out = min_folner_search(&g, &s, Rational::new(1, 2), Mode::Translation, 1, SearchOptions::for_mode(Mode::Translation))
            .unwrap();
        assert!(matches!(out.status, SearchStatus::Heuristic | SearchStatus::Exact));
        assert!(out.lower_bound >= 2);
        let w = out.witness.unwrap();
        assert!(folner_defect(&g, &s, &w, Mode::Translation).unwrap() < Rational::new(1, 2));

        let opts = SearchOptions { heuristic_only: true, ..SearchOptions::for_mode(Mode::Translation) };
        let out = min_folner_search(&g, &s, Rational::new(1, 2), Mode::Translation, 1, opts).unwrap();
        assert_eq!(out.status, SearchStatus::Heuristic);
    }

    #[test]
    fn tiny_budget_is_reported() {
        let g = GroupHandle::sym(4).unwrap();
        let s = g.generators();
        let opts = SearchOptions { budget: 1000, ..SearchOptions::for_mode(Mode::Translation) };
        let out = min_folner_search(&g, &s, Rational::new(1, 3), Mode::Translation, 1, opts).unwrap();
        assert_eq!(out.status, SearchStatus::BudgetExceeded);
        // the seed (the whole group) still certifies
        assert!(out.witness.is_some());
    }
}
