//! Acceptance run: one line per criterion with its wall time and limit.
//! Every computed value is checked against an oracle written here, not
//! against the library's own answer.

use std::collections::{BTreeSet, HashMap};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sl2amen::amen::{
    certify, default_free_generators, folner_defect, free_words_check, hyperbolic_pair, min_folner_search,
    product_lift, profile_uniform, Mode, ProfileOptions, Rational, Sampler, SearchOptions, SearchStatus, Verdict,
};
use sl2amen::fields::{FieldTower, Gf2k};
use sl2amen::folog::{evaluate, folner_sentence, parse, print, Formula, SentenceOptions, Term, DEFAULT_EVAL_BUDGET};
use sl2amen::groups::{self, enumerate, generated_subgroup, FiniteGroup, GElem, GroupHandle};
use sl2amen::matgrp::{self, Mat2, Sl2};

const ENUM: u64 = 1_000_000;

fn zero() -> Rational {
    Rational::new(0, 1)
}

/// A group as index tables, built once from the handle's multiplication.
struct Table {
    elems: Vec<GElem>,
    index: HashMap<GElem, usize>,
    mul: Vec<Vec<usize>>,
    inv: Vec<usize>,
    identity: usize,
}

impl Table {
    fn new(g: &GroupHandle) -> Table {
        let elems = enumerate(g, ENUM).unwrap();
        let index: HashMap<GElem, usize> = elems.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect();
        let mul: Vec<Vec<usize>> =
            elems.iter().map(|a| elems.iter().map(|b| index[&g.op(a, b)]).collect()).collect();
        let identity = index[&g.identity()];
        let inv = (0..elems.len()).map(|a| (0..elems.len()).find(|&b| mul[a][b] == identity).unwrap()).collect();
        Table { elems, index, mul, inv, identity }
    }

    fn len(&self) -> usize {
        self.elems.len()
    }

    /// `t -> s t` or `t -> s t s^-1` as an index map.
    fn action(&self, s: usize, mode: Mode) -> Vec<usize> {
        (0..self.len())
            .map(|t| match mode {
                Mode::Translation => self.mul[s][t],
                Mode::Conjugation => self.mul[self.mul[s][t]][self.inv[s]],
            })
            .collect()
    }
}

/// Largest boundary count over the maps: `max_s #{t in T : s(t) not in T}`.
fn worst_boundary(maps: &[Vec<usize>], members: &[usize], inside: &[bool]) -> usize {
    maps.iter().map(|m| members.iter().filter(|&&t| !inside[m[t]]).count()).max().unwrap_or(0)
}

/// `2b/k < p/q`, in integers.
fn passes(b: usize, k: usize, eps: Rational) -> bool {
    (2 * b as u64) * eps.denom() < eps.numer() * k as u64
}

/// For each size `k < limit`, the least worst boundary over all subsets of
/// `pool` of size `k` (plus the forced elements), by plain enumeration.
fn best_boundaries(n: usize, maps: &[Vec<usize>], forced: &[usize], pool: &[usize], limit: usize) -> Vec<Option<usize>> {
    let mut best = vec![None; limit];
    let mut inside = vec![false; n];
    for &f in forced {
        inside[f] = true;
    }
    let mut members: Vec<usize> = forced.to_vec();
    fn rec(
        start: usize,
        pool: &[usize],
        maps: &[Vec<usize>],
        limit: usize,
        inside: &mut Vec<bool>,
        members: &mut Vec<usize>,
        best: &mut Vec<Option<usize>>,
    ) {
        let k = members.len();
        if k > 0 && k < limit {
            let b = worst_boundary(maps, members, inside);
            if best[k].is_none_or(|old| b < old) {
                best[k] = Some(b);
            }
        }
        if k + 1 >= limit {
            return;
        }
        for i in start..pool.len() {
            let x = pool[i];
            inside[x] = true;
            members.push(x);
            rec(i + 1, pool, maps, limit, inside, members, best);
            members.pop();
            inside[x] = false;
        }
    }
    rec(0, pool, maps, limit, &mut inside, &mut members, &mut best);
    best
}

fn c1_centralizer_trichotomy() -> Result<String, String> {
    let mut checked = 0;
    for k in 1..=3u32 {
        let q = 1u64 << k;
        let grp = Sl2::gf2(k).unwrap();
        let all: Vec<Mat2<Gf2k>> = grp.elements().collect();
        for g in &all {
            if g.is_identity() {
                continue;
            }
            let d = matgrp::centralizer_structural(g).map_err(|e| e.to_string())?;
            let oracle: Vec<Mat2<Gf2k>> = all.iter().filter(|h| &(g * *h) == &(*h * g)).cloned().collect();
            let predicted = d.members();
            if predicted != oracle {
                return Err(format!("q={q}: structural centralizer of {g} differs from the scan"));
            }
            if ![q - 1, q, q + 1].contains(&(oracle.len() as u64)) || d.order() != oracle.len() as u64 {
                return Err(format!("q={q}: centralizer of {g} has order {}", oracle.len()));
            }
            let brute = matgrp::centralizer_bruteforce(g, ENUM).map_err(|e| e.to_string())?;
            if brute != oracle {
                return Err(format!("q={q}: brute-force centralizer of {g} differs from the scan"));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} nontrivial elements over q = 2, 4, 8"))
}

fn c2_ct() -> Result<String, String> {
    for k in 1..=4u32 {
        let r = matgrp::ct_check(k, ENUM).map_err(|e| e.to_string())?;
        if !r.holds() {
            return Err(format!("q={}: reported violation {:?}", 1u64 << k, r.violation));
        }
        // oracle: CT is a class property, so the class representatives'
        // centralizers, computed here, must be abelian
        let g = GroupHandle::sl2_gf2(k).unwrap();
        let all = enumerate(&g, ENUM).unwrap();
        for class in groups::conjugacy_partition(&g, ENUM).unwrap().iter().skip(1) {
            let x = &class.representative;
            let cent: Vec<&GElem> = all.iter().filter(|h| g.op(x, h) == g.op(h, x)).collect();
            for a in &cent {
                for b in &cent {
                    if g.op(a, b) != g.op(b, a) {
                        return Err(format!("q={}: C({x}) is nonabelian but CT was reported", 1u64 << k));
                    }
                }
            }
        }
    }
    let g = GroupHandle::parse("sl2:gfp_3").unwrap();
    let r = groups::ct_check(&g, ENUM).map_err(|e| e.to_string())?;
    let v = r.violation.ok_or("SL2(3) reported CT")?;
    let ok = v.element != g.identity()
        && g.op(&v.element, &v.left) == g.op(&v.left, &v.element)
        && g.op(&v.element, &v.right) == g.op(&v.right, &v.element)
        && g.op(&v.left, &v.right) != g.op(&v.right, &v.left);
    if !ok {
        return Err(format!("SL2(3) witness does not check out: {v:?}"));
    }
    Ok(format!("CT for q = 2..16; SL2(3) fails at {}", v.element))
}

fn orbit_size(g: &GroupHandle, x: &GElem) -> usize {
    let all = enumerate(g, ENUM).unwrap();
    all.iter().map(|h| g.conj(h, x)).collect::<BTreeSet<_>>().len()
}

fn c3_icc_growth() -> Result<String, String> {
    let tower = FieldTower::default();
    let x = Gf2k::generator(2);
    let d = Mat2::diag(x).unwrap();
    let growth = matgrp::class_growth_along_tower(&d, &[2, 4], &tower, ENUM).map_err(|e| e.to_string())?;
    // |SL2(q)| / |split torus| = q(q+1)
    if growth != vec![4 * 5, 16 * 17] || growth != vec![20, 272] {
        return Err(format!("diag growth {growth:?}"));
    }
    // the class itself, as an orbit at each level
    let lifted16 = matgrp::lift_to_level(&d, 4, &tower).unwrap();
    if orbit_size(&GroupHandle::sl2_gf2(4).unwrap(), &GElem::Gf2(lifted16)) != 272 {
        return Err("orbit of the lifted diagonal element is not 272".into());
    }
    let mut sizes = vec![];
    for (k, tower) in [(1, FieldTower::default()), (2, FieldTower::default()), (3, FieldTower::new(&[1, 3]).unwrap())] {
        let q = 1u64 << k;
        let u = Mat2::unipotent(&Gf2k::one(1));
        let lib = matgrp::class_growth_along_tower(&u, &[k], &tower, ENUM).map_err(|e| e.to_string())?[0];
        let lifted = matgrp::lift_to_level(&u, k, &tower).unwrap();
        let orbit = orbit_size(&GroupHandle::sl2_gf2(k).unwrap(), &GElem::Gf2(lifted)) as u64;
        if lib != q * q - 1 || orbit != q * q - 1 {
            return Err(format!("q={q}: unipotent class {lib} (orbit {orbit}), expected {}", q * q - 1));
        }
        sizes.push(lib);
    }
    Ok(format!("diag 20 -> 272, unipotent {sizes:?}"))
}

fn class_sizes(spec: &str) -> Result<Vec<usize>, String> {
    let g = GroupHandle::parse(spec).unwrap();
    let classes = groups::conjugacy_partition(&g, ENUM).map_err(|e| e.to_string())?;
    let sizes: Vec<usize> = classes.iter().map(|c| c.size()).collect();
    // oracle: orbit sizes of the representatives, computed directly
    for c in &classes {
        if orbit_size(&g, &c.representative) != c.size() {
            return Err(format!("{spec}: class of {} has the wrong size", c.representative));
        }
    }
    if sizes.iter().sum::<usize>() as u64 != g.order() {
        return Err(format!("{spec}: class sizes do not sum to |G|"));
    }
    Ok(sizes)
}

fn multiset(v: &[usize]) -> Vec<usize> {
    let mut v = v.to_vec();
    v.sort();
    v
}

fn c4_class_bookkeeping() -> Result<String, String> {
    let a = class_sizes("sl2:gf2_2")?;
    let b = class_sizes("sym:4")?;
    if multiset(&a) != multiset(&[1, 15, 20, 12, 12]) {
        return Err(format!("SL2(4) sizes {a:?}"));
    }
    if b != vec![1, 6, 8, 3, 6] {
        return Err(format!("Sym(4) sizes {b:?}"));
    }
    Ok(format!("SL2(4) {a:?}, Sym(4) {b:?}"))
}

fn c5_exact_zero() -> Result<String, String> {
    let specs = ["sym:3", "sym:4", "sym:5", "sl2:gf2_1", "sl2:gf2_2", "sl2:gf2_3", "sl2:gfp_3", "sl2:gfp_5"];
    let handles: Vec<GroupHandle> = specs.iter().map(|s| GroupHandle::parse(s).unwrap()).collect();
    let partitions: Vec<_> = handles.iter().map(|g| groups::conjugacy_partition(g, ENUM).unwrap()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for trial in 0..100 {
        let i = rng.gen_range(0..handles.len());
        let g = &handles[i];
        let s: Vec<GElem> = (0..rng.gen_range(1..=3)).map(|_| g.random_element(&mut rng)).collect();
        let (mode, t) = if trial % 2 == 0 {
            (Mode::Translation, generated_subgroup(g, &s, ENUM).unwrap())
        } else {
            let picks = rng.gen_range(1..=3);
            let mut t = vec![];
            for _ in 0..picks {
                let c = partitions[i].choose(&mut rng).unwrap();
                t.extend(c.elements.iter().cloned());
            }
            t.sort();
            t.dedup();
            (Mode::Conjugation, t)
        };
        // oracle: the set is closed under each map, checked pointwise
        let closed = s.iter().all(|x| {
            t.iter().all(|y| t.binary_search(&mode_apply(g, mode, x, y)).is_ok())
        });
        if !closed {
            return Err(format!("trial {trial}: oracle says T is not invariant"));
        }
        let d = folner_defect(g, &s, &t, mode).map_err(|e| e.to_string())?;
        if d != zero() {
            return Err(format!("trial {trial} on {}: defect {d}", g.spec()));
        }
        match certify(g, &s, &t, Rational::new(1, 2), mode).map_err(|e| e.to_string())? {
            Verdict::Certified(c) if c.defect == zero() => {}
            other => return Err(format!("trial {trial}: {other:?}")),
        }
    }
    Ok("100 instances, all defects exactly 0/1".into())
}

fn mode_apply(g: &GroupHandle, mode: Mode, x: &GElem, y: &GElem) -> GElem {
    match mode {
        Mode::Translation => g.op(x, y),
        Mode::Conjugation => g.op(&g.op(x, y), &g.inv(x)),
    }
}

fn c6_minimality() -> Result<String, String> {
    let epsilons = [Rational::new(1, 1), Rational::new(1, 2), Rational::new(1, 3)];
    let mut cases = 0;
    let mut enumerated = 0u64;
    for spec in ["sym:3", "sym:4", "sl2:gf2_1"] {
        let g = GroupHandle::parse(spec).unwrap();
        let tab = Table::new(&g);
        let n = tab.len();
        let mut sets: Vec<Vec<usize>> = (0..n).map(|a| vec![a]).collect();
        for a in 0..n {
            for b in a + 1..n {
                sets.push(vec![a, b]);
            }
        }
        for mode in [Mode::Translation, Mode::Conjugation] {
            let opts = SearchOptions::for_mode(mode);
            // sizes only depend on S up to simultaneous conjugation, so the
            // oracle runs once per orbit of S
            let mut oracle: HashMap<Vec<usize>, Vec<Option<usize>>> = HashMap::new();
            for set in &sets {
                let s: Vec<GElem> = set.iter().map(|&i| tab.elems[i].clone()).collect();
                let outs: Vec<_> = epsilons
                    .iter()
                    .map(|&e| min_folner_search(&g, &s, e, mode, 1, opts.clone()).unwrap())
                    .collect();
                let canon = (0..n)
                    .map(|h| {
                        let mut c: Vec<usize> =
                            set.iter().map(|&x| tab.mul[tab.mul[h][x]][tab.inv[h]]).collect();
                        c.sort();
                        c
                    })
                    .min()
                    .unwrap();
                let best = oracle.entry(canon).or_insert_with(|| {
                    let maps: Vec<Vec<usize>> = set.iter().map(|&x| tab.action(x, mode)).collect();
                    // translation: T and Tg have the same defect, so T may contain e
                    let (forced, pool): (Vec<usize>, Vec<usize>) = match mode {
                        Mode::Translation => (vec![tab.identity], (0..n).filter(|&x| x != tab.identity).collect()),
                        Mode::Conjugation => (vec![], (0..n).filter(|&x| x != tab.identity).collect()),
                    };
                    enumerated += 1;
                    best_boundaries(n, &maps, &forced, &pool, n + 1)
                });
                for (o, &eps) in outs.iter().zip(&epsilons) {
                    cases += 1;
                    if o.status != SearchStatus::Exact {
                        return Err(format!("{spec} {mode} S={s:?} eps={eps}: status {:?}", o.status));
                    }
                    let w = o.witness.as_ref().ok_or("exact result without witness")?;
                    let r = w.len();
                    if mode == Mode::Conjugation && w.contains(&g.identity()) {
                        return Err(format!("{spec} S={s:?}: witness contains e"));
                    }
                    // the witness certifies, by the local boundary count
                    let mut inside = vec![false; n];
                    let members: Vec<usize> = w.iter().map(|x| tab.index[x]).collect();
                    for &m in &members {
                        inside[m] = true;
                    }
                    let maps: Vec<Vec<usize>> = set.iter().map(|&x| tab.action(x, mode)).collect();
                    if !passes(worst_boundary(&maps, &members, &inside), r, eps) {
                        return Err(format!("{spec} {mode} S={s:?} eps={eps}: witness fails"));
                    }
                    // nothing smaller certifies
                    for (k, b) in best.iter().enumerate().take(r).skip(1) {
                        if let Some(b) = b {
                            if passes(*b, k, eps) {
                                return Err(format!("{spec} {mode} S={s:?} eps={eps}: size {k} beats {r}"));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{cases} searches confirmed minimal ({enumerated} exhaustive enumerations)"))
}

fn c7_product_lift() -> Result<String, String> {
    let specs = ["sym:3", "sym:4", "sl2:gf2_1", "sl2:gf2_2", "sl2:gfp_3"];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for trial in 0..50 {
        let g = GroupHandle::parse(specs.choose(&mut rng).unwrap()).unwrap();
        let h = GroupHandle::parse(specs.choose(&mut rng).unwrap()).unwrap();
        let s: Vec<GElem> = (0..rng.gen_range(1..=2)).map(|_| g.random_element(&mut rng)).collect();
        let eps = [Rational::new(1, 1), Rational::new(1, 2), Rational::new(1, 3)][rng.gen_range(0..3)];
        let out = min_folner_search(&g, &s, eps, Mode::Conjugation, rng.gen_range(1..=3), SearchOptions::for_mode(Mode::Conjugation))
            .map_err(|e| e.to_string())?;
        let Some(t) = out.witness else { continue };
        let Verdict::Certified(cert) = certify(&g, &s, &t, eps, Mode::Conjugation).unwrap() else {
            return Err(format!("trial {trial}: search witness does not certify"));
        };
        // every s appears, each paired with one or two random h
        let mut sp = vec![];
        for x in &s {
            for _ in 0..rng.gen_range(1..=2) {
                sp.push(GElem::pair(x.clone(), h.random_element(&mut rng)));
            }
        }
        let lifted = product_lift(&cert, &g, &h, &sp).map_err(|e| e.to_string())?;
        if lifted.defect != cert.defect {
            return Err(format!("trial {trial}: lifted {} vs {}", lifted.defect, cert.defect));
        }
        // oracle: recompute in the product, pair by pair
        let prod = GroupHandle::product(g.clone(), h.clone());
        let eh = h.identity();
        let tt: BTreeSet<GElem> = t.iter().map(|x| GElem::pair(x.clone(), eh.clone())).collect();
        let worst = sp
            .iter()
            .map(|y| tt.iter().filter(|x| !tt.contains(&prod.conj(y, x))).count())
            .max()
            .unwrap();
        if Rational::new(2 * worst as u64, tt.len() as u64) != cert.defect {
            return Err(format!("trial {trial}: product recount {worst} disagrees"));
        }
    }
    Ok("50 lifts with identical defects".into())
}

fn c8_fo_cross_validation() -> Result<String, String> {
    let mut agreements = 0;
    for spec in ["sym:3", "sl2:gf2_1", "sym:4"] {
        let g = GroupHandle::parse(spec).unwrap();
        let elems = enumerate(&g, ENUM).unwrap();
        for mode in [Mode::Translation, Mode::Conjugation] {
            let opts = SearchOptions::for_mode(mode);
            for n in 1..=2usize {
                for m in 1..=3usize {
                    if m < n {
                        continue;
                    }
                    let f = folner_sentence(n, m, mode, SentenceOptions::for_mode(mode)).map_err(|e| e.to_string())?;
                    let ev = evaluate(&g, &f, &Default::default(), DEFAULT_EVAL_BUDGET).map_err(|e| e.to_string())?;
                    // search side: every S of at most n distinct elements has
                    // a witness with n <= |T| <= m
                    let mut sets: Vec<Vec<GElem>> = elems.iter().map(|x| vec![x.clone()]).collect();
                    if n == 2 {
                        for (i, a) in elems.iter().enumerate() {
                            for b in &elems[i + 1..] {
                                sets.push(vec![a.clone(), b.clone()]);
                            }
                        }
                    }
                    let mut holds = true;
                    for s in &sets {
                        let o = min_folner_search(&g, s, Rational::new(1, n as u64), mode, n, opts.clone())
                            .map_err(|e| e.to_string())?;
                        match o.status {
                            SearchStatus::Exact | SearchStatus::Exhausted => {}
                            other => return Err(format!("{spec} {mode} S={s:?}: inconclusive {other:?}")),
                        }
                        if !o.size().is_some_and(|k| k <= m) {
                            holds = false;
                            break;
                        }
                    }
                    if holds != ev.value {
                        return Err(format!("{spec} {mode} (n,m)=({n},{m}): sentence {} but search {holds}", ev.value));
                    }
                    agreements += 1;
                }
            }
        }
    }
    Ok(format!("{agreements} (group, mode, n, m) combinations agree"))
}

fn random_term(rng: &mut ChaCha8Rng, depth: u32) -> Term {
    let vars = ["x", "y", "z", "w1", "g_2"];
    match if depth == 0 { rng.gen_range(0..2) } else { rng.gen_range(0..4) } {
        0 => Term::var(vars[rng.gen_range(0..vars.len())]),
        1 => Term::Identity,
        2 => Term::mul(random_term(rng, depth - 1), random_term(rng, depth - 1)),
        _ => Term::inv(random_term(rng, depth - 1)),
    }
}

fn random_formula(rng: &mut ChaCha8Rng, depth: u32) -> Formula {
    let vars = ["x", "y", "z", "w1", "g_2"];
    let v = vars[rng.gen_range(0..vars.len())];
    match if depth == 0 { 0 } else { rng.gen_range(0..7) } {
        0 => Formula::eq(random_term(rng, 2), random_term(rng, 2)),
        1 => Formula::not(random_formula(rng, depth - 1)),
        2 => Formula::and(random_formula(rng, depth - 1), random_formula(rng, depth - 1)),
        3 => Formula::or(random_formula(rng, depth - 1), random_formula(rng, depth - 1)),
        4 => Formula::implies(random_formula(rng, depth - 1), random_formula(rng, depth - 1)),
        5 => Formula::forall(v, random_formula(rng, depth - 1)),
        _ => Formula::exists(v, random_formula(rng, depth - 1)),
    }
}

fn c9_parser() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for i in 0..10_000 {
        let depth = rng.gen_range(0..6);
        let f = random_formula(&mut rng, depth);
        let text = print(&f);
        match parse(&text) {
            Ok(back) if back == f => {}
            other => return Err(format!("case {i}: {text} parsed as {other:?}")),
        }
    }
    let bad: [(&str, (usize, usize)); 10] = [
        ("", (1, 1)),
        ("x =", (1, 4)),
        ("A x. (", (1, 6)),
        ("x = e)", (1, 6)),
        ("A . x = x", (1, 3)),
        ("x = y &", (1, 8)),
        ("x = $", (1, 5)),
        ("(x = y", (1, 1)),
        ("x ^ 2 = e", (1, 3)),
        ("E y x = y", (1, 5)),
    ];
    for (text, pos) in bad {
        match parse(text) {
            Err(e) if e.position() == Some(pos) => {}
            Err(e) => return Err(format!("{text:?}: position {:?}, expected {pos:?} ({e})", e.position())),
            Ok(f) => return Err(format!("{text:?} parsed as {f}")),
        }
    }
    Ok("10000 round trips, 10 error positions".into())
}

fn c10_free_words() -> Result<String, String> {
    let (a, b) = default_free_generators();
    let r = free_words_check(&a, &b, 8);
    let alt = {
        let (x, y) = hyperbolic_pair();
        free_words_check(&x, &y, 8)
    };
    if r.total_words != 4 * (3u64.pow(8) - 1) / 2 {
        return Err(format!("{} words enumerated", r.total_words));
    }
    if r.no_relations() {
        Ok(format!("{} words, none equal to the identity", r.total_words))
    } else {
        Err(format!(
            "{} of {} reduced words equal the identity, first {:?} ([[1,t],[0,1]] has order 2 in characteristic 2); \
             the squared hyperbolic pair: {}",
            r.relations.len(),
            r.total_words,
            r.relations[0],
            alt.verdict()
        ))
    }
}

fn c11_determinism() -> Result<String, String> {
    let run = |threads: usize, family: &str, mode: Mode| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            let fam = groups::parse_family(family).unwrap();
            let p = profile_uniform(&fam, mode, 1..=3, &Sampler::Mixed, &ProfileOptions::new(mode, 42)).unwrap();
            (p.to_csv(), p.to_json())
        })
    };
    let mut compared = 0;
    for (family, mode) in [("sym:2..5", Mode::Translation), ("sl2:gf2_1..gf2_3", Mode::Conjugation)] {
        let a = run(1, family, mode);
        let b = run(1, family, mode);
        let c = run(4, family, mode);
        if a != b || a != c {
            return Err(format!("{family} {mode}: outputs differ between runs"));
        }
        compared += 1;
    }
    Ok(format!("{compared} profiles byte-identical across 3 runs and thread counts"))
}

type Check = fn() -> Result<String, String>;

fn main() {
    let criteria: [(u32, &str, Check, Option<u64>); 11] = [
        (1, "centralizer trichotomy", c1_centralizer_trichotomy, Some(60)),
        (2, "CT verification", c2_ct, Some(300)),
        (3, "ICC truncation growth", c3_icc_growth, Some(120)),
        (4, "conjugacy bookkeeping", c4_class_bookkeeping, Some(30)),
        (5, "Folner exactness", c5_exact_zero, None),
        (6, "minimal-search oracle equivalence", c6_minimality, Some(600)),
        (7, "product lift", c7_product_lift, None),
        (8, "FO cross-validation", c8_fo_cross_validation, Some(600)),
        (9, "parser robustness", c9_parser, Some(60)),
        (10, "free words", c10_free_words, Some(120)),
        (11, "determinism", c11_determinism, None),
    ];
    let filter: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = vec![];
    for (id, name, check, limit) in criteria {
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let result = match (result, limit) {
            (Ok(_), Some(l)) if took > Duration::from_secs(l) => Err(format!("took {:.1}s, limit {l}s", took.as_secs_f64())),
            (r, _) => r,
        };
        let limit_text = limit.map(|l| format!(", limit {l}s")).unwrap_or_default();
        match result {
            Ok(detail) => println!("criterion {id:>2} PASS {name} ({:.1}s{limit_text}): {detail}", took.as_secs_f64()),
            Err(detail) => {
                println!("criterion {id:>2} FAIL {name} ({:.1}s{limit_text}): {detail}", took.as_secs_f64());
                failed.push(id);
            }
        }
    }
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
