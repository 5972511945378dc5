use std::fmt;

use rand::Rng;

use crate::fields::{Field, FieldTag, FieldTower, Gf2k, Gfp};
use crate::matgrp::structure::{centralizer_structural, lift_to_level};
use crate::matgrp::{Mat2, Sl2};

use super::{centralizer, FiniteGroup, GroupError, Perm, Sym, DEFAULT_ENUM_BUDGET};

/// A finite group chosen at run time.
#[derive(Debug, Clone)]
pub enum GroupHandle {
    Sl2Gf2(Sl2<Gf2k>),
    Sl2Gfp(Sl2<Gfp>),
    Sym(Sym),
    /// Direct product with componentwise operations; never materialized.
    Product(Box<GroupHandle>, Box<GroupHandle>),
}

/// An element of some [`GroupHandle`]. Text forms: matrices
/// `[[a,b],[c,d]]@gf2_2`, permutations `perm:[2,1,3]`, pairs `(left|right)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GElem {
    Gf2(Mat2<Gf2k>),
    Gfp(Mat2<Gfp>),
    Perm(Perm),
    Pair(Box<GElem>, Box<GElem>),
}

impl GElem {
    pub fn pair(left: GElem, right: GElem) -> GElem {
        GElem::Pair(Box::new(left), Box::new(right))
    }

    /// First coordinate of a product element.
    pub fn left(&self) -> Option<&GElem> {
        match self {
            GElem::Pair(l, _) => Some(l),
            _ => None,
        }
    }

    pub fn right(&self) -> Option<&GElem> {
        match self {
            GElem::Pair(_, r) => Some(r),
            _ => None,
        }
    }
}

impl fmt::Display for GElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GElem::Gf2(m) => write!(f, "{m}"),
            GElem::Gfp(m) => write!(f, "{m}"),
            GElem::Perm(p) => write!(f, "{p}"),
            GElem::Pair(l, r) => write!(f, "({l}|{r})"),
        }
    }
}

impl fmt::Debug for GElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Splits `text` at the first `sep` that is not nested in brackets.
fn split_top(text: &str, sep: char) -> Option<(&str, &str)> {
    let mut depth = 0i32;
    for (i, ch) in text.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            c if c == sep && depth == 0 => return Some((&text[..i], &text[i + ch.len_utf8()..])),
            _ => {}
        }
    }
    None
}

impl GroupHandle {
    pub fn sl2_gf2(k: u32) -> Result<Self, GroupError> {
        Ok(GroupHandle::Sl2Gf2(Sl2::gf2(k)?))
    }

    pub fn sym(n: usize) -> Result<Self, GroupError> {
        if n > super::sym::MAX_SYM_DEGREE {
            return Err(GroupError::parse(&format!("sym:{n}"), "degree too large"));
        }
        Ok(GroupHandle::Sym(Sym::new(n)))
    }

    pub fn product(left: GroupHandle, right: GroupHandle) -> Self {
        GroupHandle::Product(Box::new(left), Box::new(right))
    }

    /// Parses `sl2:gf2_<k>`, `sl2:gfp_<p>`, `sym:<n>` or `prod(<spec>,<spec>)`.
    pub fn parse(spec: &str) -> Result<Self, GroupError> {
        let s = spec.trim();
        if let Some(inner) = s.strip_prefix("prod(").and_then(|r| r.strip_suffix(')')) {
            let (l, r) = split_top(inner, ',').ok_or_else(|| GroupError::parse(spec, "expected prod(A,B)"))?;
            return Ok(GroupHandle::product(GroupHandle::parse(l)?, GroupHandle::parse(r)?));
        }
        if let Some(field) = s.strip_prefix("sl2:") {
            return match field.trim().parse::<FieldTag>()? {
                FieldTag::Gf2 { degree } => GroupHandle::sl2_gf2(degree),
                FieldTag::Gfp { p } => Ok(GroupHandle::Sl2Gfp(Sl2::gfp(p)?)),
                FieldTag::Rf2 => Err(GroupError::parse(spec, "SL2 over GF(2)(t) is infinite")),
            };
        }
        if let Some(n) = s.strip_prefix("sym:") {
            let n: usize = n.trim().parse().map_err(|_| GroupError::parse(spec, "expected sym:<n>"))?;
            return GroupHandle::sym(n);
        }
        Err(GroupError::parse(spec, "expected sl2:<field>, sym:<n> or prod(A,B)"))
    }

    pub fn parse_element(&self, text: &str) -> Result<GElem, GroupError> {
        let t = text.trim();
        let bad = |reason: String| GroupError::parse(text, reason);
        let elem = match self {
            GroupHandle::Sl2Gf2(_) => GElem::Gf2(Mat2::parse(t).map_err(|e| bad(e.to_string()))?),
            GroupHandle::Sl2Gfp(_) => GElem::Gfp(Mat2::parse(t).map_err(|e| bad(e.to_string()))?),
            GroupHandle::Sym(_) => GElem::Perm(t.parse()?),
            GroupHandle::Product(l, r) => {
                let inner = t
                    .strip_prefix('(')
                    .and_then(|x| x.strip_suffix(')'))
                    .ok_or_else(|| bad("expected (left|right)".into()))?;
                let (a, b) = split_top(inner, '|').ok_or_else(|| bad("expected (left|right)".into()))?;
                GElem::pair(l.parse_element(a)?, r.parse_element(b)?)
            }
        };
        if !self.contains(&elem) {
            return Err(GroupError::NotAnElement { element: elem.to_string(), group: self.spec() });
        }
        Ok(elem)
    }

    pub fn contains(&self, x: &GElem) -> bool {
        match (self, x) {
            (GroupHandle::Sl2Gf2(g), GElem::Gf2(m)) => g.contains(m),
            (GroupHandle::Sl2Gfp(g), GElem::Gfp(m)) => g.contains(m),
            (GroupHandle::Sym(s), GElem::Perm(p)) => s.contains(p),
            (GroupHandle::Product(l, r), GElem::Pair(a, b)) => l.contains(a) && r.contains(b),
            _ => false,
        }
    }

    /// A small generating set.
    ///
    /// SL₂(GF(2^k)), k ≥ 2: `diag(x, x⁻¹)` and `[[1,1],[1,0]]`. SL₂(GF(2)) and
    /// SL₂(GF(p)): the elementary unipotents. Sym(n): `(1 2)` and the long
    /// cycle. Products: each factor's generators paired with the identity.
    pub fn generators(&self) -> Vec<GElem> {
        match self {
            GroupHandle::Sl2Gf2(g) => {
                let z = *g.zero();
                let (zero, one) = (z.zero_like(), z.one_like());
                if g.degree() == 1 {
                    vec![
                        GElem::Gf2(Mat2::unipotent(&z)),
                        GElem::Gf2(Mat2::new(one, zero, one, one).expect("det 1")),
                    ]
                } else {
                    let x = Gf2k::generator(g.degree());
                    vec![
                        GElem::Gf2(Mat2::diag(x).expect("nonzero")),
                        GElem::Gf2(Mat2::new(one, one, one, zero).expect("det 1")),
                    ]
                }
            }
            GroupHandle::Sl2Gfp(g) => {
                let z = *g.zero();
                let (zero, one) = (z.zero_like(), z.one_like());
                vec![
                    GElem::Gfp(Mat2::unipotent(&z)),
                    GElem::Gfp(Mat2::new(one, zero, one, one).expect("det 1")),
                ]
            }
            GroupHandle::Sym(s) => s.generators().into_iter().map(GElem::Perm).collect(),
            GroupHandle::Product(l, r) => {
                let (el, er) = (l.identity(), r.identity());
                l.generators()
                    .into_iter()
                    .map(|g| GElem::pair(g, er.clone()))
                    .chain(r.generators().into_iter().map(|h| GElem::pair(el.clone(), h)))
                    .collect()
            }
        }
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> GElem {
        match self {
            GroupHandle::Sl2Gf2(g) => GElem::Gf2(g.random_element(rng)),
            GroupHandle::Sl2Gfp(g) => GElem::Gfp(g.random_element(rng)),
            GroupHandle::Sym(s) => GElem::Perm(s.random_element(rng)),
            GroupHandle::Product(l, r) => GElem::pair(l.random_element(rng), r.random_element(rng)),
        }
    }

    /// Size of the conjugacy class of `x`, by formula where one is known
    /// (SL₂ in characteristic 2, cycle types) and by a centralizer scan
    /// otherwise.
    pub fn class_size(&self, x: &GElem) -> Result<u64, GroupError> {
        Ok(match (self, x) {
            (GroupHandle::Sl2Gf2(g), GElem::Gf2(m)) => {
                if m.is_identity() {
                    1
                } else {
                    let desc = centralizer_structural(m).map_err(|e| GroupError::parse(&m.to_string(), e.to_string()))?;
                    g.order() / desc.order()
                }
            }
            (GroupHandle::Sl2Gfp(g), GElem::Gfp(m)) => g.order() / centralizer(g, m, DEFAULT_ENUM_BUDGET)?.len() as u64,
            (GroupHandle::Sym(s), GElem::Perm(p)) => s.class_size(p),
            (GroupHandle::Product(l, r), GElem::Pair(a, b)) => l.class_size(a)?.saturating_mul(r.class_size(b)?),
            _ => return Err(GroupError::NotAnElement { element: x.to_string(), group: self.spec() }),
        })
    }

    /// Carries `x` from a smaller member of a family into this group: SL₂
    /// levels through the tower, Sym(n) into Sym(m) fixing the new points,
    /// products componentwise.
    pub fn lift(&self, x: &GElem, tower: &FieldTower) -> Result<GElem, GroupError> {
        let fail = || GroupError::NotAnElement { element: x.to_string(), group: self.spec() };
        Ok(match (self, x) {
            (GroupHandle::Sl2Gf2(g), GElem::Gf2(m)) => {
                GElem::Gf2(lift_to_level(m, g.degree(), tower).map_err(|_| fail())?)
            }
            (GroupHandle::Sl2Gfp(g), GElem::Gfp(m)) if g.contains(m) => x.clone(),
            (GroupHandle::Sym(s), GElem::Perm(p)) => GElem::Perm(p.extend(s.degree()).ok_or_else(fail)?),
            (GroupHandle::Product(l, r), GElem::Pair(a, b)) => GElem::pair(l.lift(a, tower)?, r.lift(b, tower)?),
            _ => return Err(fail()),
        })
    }

    /// Short human label, e.g. `q=4` or `n=5`, used as the level column of
    /// profiles.
    pub fn level_label(&self) -> String {
        match self {
            GroupHandle::Sl2Gf2(g) => format!("q={}", g.q()),
            GroupHandle::Sl2Gfp(g) => format!("q={}", g.q()),
            GroupHandle::Sym(s) => format!("n={}", s.degree()),
            GroupHandle::Product(..) => self.spec(),
        }
    }
}

impl FiniteGroup for GroupHandle {
    type Elem = GElem;

    fn identity(&self) -> GElem {
        match self {
            GroupHandle::Sl2Gf2(g) => GElem::Gf2(g.identity()),
            GroupHandle::Sl2Gfp(g) => GElem::Gfp(g.identity()),
            GroupHandle::Sym(s) => GElem::Perm(s.identity()),
            GroupHandle::Product(l, r) => GElem::pair(l.identity(), r.identity()),
        }
    }

    /// Panics when an operand belongs to a different kind of group.
    fn op(&self, a: &GElem, b: &GElem) -> GElem {
        match (self, a, b) {
            (GroupHandle::Sl2Gf2(_), GElem::Gf2(x), GElem::Gf2(y)) => GElem::Gf2(x * y),
            (GroupHandle::Sl2Gfp(_), GElem::Gfp(x), GElem::Gfp(y)) => GElem::Gfp(x * y),
            (GroupHandle::Sym(_), GElem::Perm(x), GElem::Perm(y)) => GElem::Perm(x.compose(y)),
            (GroupHandle::Product(l, r), GElem::Pair(a1, a2), GElem::Pair(b1, b2)) => {
                GElem::pair(l.op(a1, b1), r.op(a2, b2))
            }
            _ => panic!("{a} and {b} are not both elements of {}", self.spec()),
        }
    }

    fn inv(&self, a: &GElem) -> GElem {
        match (self, a) {
            (GroupHandle::Sl2Gf2(_), GElem::Gf2(x)) => GElem::Gf2(x.inv()),
            (GroupHandle::Sl2Gfp(_), GElem::Gfp(x)) => GElem::Gfp(x.inv()),
            (GroupHandle::Sym(_), GElem::Perm(x)) => GElem::Perm(x.inverse()),
            (GroupHandle::Product(l, r), GElem::Pair(x, y)) => GElem::pair(l.inv(x), r.inv(y)),
            _ => panic!("{a} is not an element of {}", self.spec()),
        }
    }

    fn order(&self) -> u64 {
        match self {
            GroupHandle::Sl2Gf2(g) => g.order(),
            GroupHandle::Sl2Gfp(g) => g.order(),
            GroupHandle::Sym(s) => s.order(),
            GroupHandle::Product(l, r) => l.order().saturating_mul(r.order()),
        }
    }

    fn spec(&self) -> String {
        match self {
            GroupHandle::Sl2Gf2(g) => g.spec(),
            GroupHandle::Sl2Gfp(g) => g.spec(),
            GroupHandle::Sym(s) => s.spec(),
            GroupHandle::Product(l, r) => format!("prod({},{})", l.spec(), r.spec()),
        }
    }

    fn elements(&self) -> Box<dyn Iterator<Item = GElem> + Send + '_> {
        match self {
            GroupHandle::Sl2Gf2(g) => Box::new(g.elements().map(GElem::Gf2)),
            GroupHandle::Sl2Gfp(g) => Box::new(g.elements().map(GElem::Gfp)),
            GroupHandle::Sym(s) => Box::new(s.elements().map(GElem::Perm)),
            GroupHandle::Product(l, r) => Box::new(
                l.elements()
                    .flat_map(move |a| r.elements().map(move |b| GElem::pair(a.clone(), b))),
            ),
        }
    }
}

/// Parses a family of groups: a single spec, or a range such as `sym:2..5`
/// or `sl2:gf2_1..gf2_4` (every degree in between).
pub fn parse_family(text: &str) -> Result<Vec<GroupHandle>, GroupError> {
    let t = text.trim();
    if let Some((lo, hi)) = t.split_once("..") {
        if let Some(lo) = lo.strip_prefix("sym:") {
            let lo: usize = lo.trim().parse().map_err(|_| GroupError::parse(text, "bad range start"))?;
            let hi: usize = hi.trim().parse().map_err(|_| GroupError::parse(text, "bad range end"))?;
            return (lo..=hi).map(GroupHandle::sym).collect();
        }
        if let Some(lo) = lo.strip_prefix("sl2:") {
            let lo: FieldTag = lo.parse()?;
            let hi: FieldTag = hi.trim().parse()?;
            return match (lo, hi) {
                (FieldTag::Gf2 { degree: a }, FieldTag::Gf2 { degree: b }) => {
                    (a..=b).map(GroupHandle::sl2_gf2).collect()
                }
                _ => Err(GroupError::parse(text, "SL2 ranges run over binary levels")),
            };
        }
        return Err(GroupError::parse(text, "ranges are supported for sym:<a>..<b> and sl2:gf2_<a>..gf2_<b>"));
    }
    t.split(';').map(GroupHandle::parse).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{conjugacy_partition, enumerate, generated_subgroup, is_isomorphism};
    use rand::SeedableRng;

    #[test]
    fn orders_match_enumeration() {
        for spec in ["sym:3", "sl2:gf2_2", "prod(sym:3,sl2:gf2_1)", "sl2:gfp_3", "prod(prod(sym:2,sym:2),sym:3)"] {
            let g = GroupHandle::parse(spec).unwrap();
            assert_eq!(g.spec(), spec);
            let all = enumerate(&g, DEFAULT_ENUM_BUDGET).unwrap();
            assert_eq!(all.len() as u64, g.order(), "{spec}");
            assert!(all.windows(2).all(|w| w[0] < w[1]));
        }
        assert_eq!(GroupHandle::parse("prod(sym:3,sl2:gf2_1)").unwrap().order(), 36);
    }

    #[test]
    fn element_text_round_trip() {
        let g = GroupHandle::parse("prod(sl2:gf2_2,sym:4)").unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let x = g.random_element(&mut rng);
            assert_eq!(g.parse_element(&x.to_string()).unwrap(), x);
        }
        assert!(g.parse_element("perm:[2,1,3,4]").is_err());
        assert!(g.parse_element("([[1,0],[0,1]]@gf2_1|perm:[1,2,3,4])").is_err());
    }

    #[test]
    fn generators_generate() {
        for spec in ["sl2:gf2_1", "sl2:gf2_2", "sl2:gf2_3", "sl2:gf2_4", "sl2:gfp_3", "sl2:gfp_5", "sym:5", "prod(sym:3,sl2:gf2_2)"] {
            let g = GroupHandle::parse(spec).unwrap();
            let h = generated_subgroup(&g, &g.generators(), DEFAULT_ENUM_BUDGET).unwrap();
            assert_eq!(h.len() as u64, g.order(), "{spec}");
        }
    }

    #[test]
    fn product_identities() {
        let g = GroupHandle::parse("prod(sym:3,sl2:gf2_2)").unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let GroupHandle::Product(l, r) = &g else { unreachable!() };
        for _ in 0..30 {
            let (a, b, t) = (l.random_element(&mut rng), r.random_element(&mut rng), l.random_element(&mut rng));
            let ga = GElem::pair(a.clone(), r.identity());
            let hb = GElem::pair(l.identity(), b.clone());
            assert_eq!(g.op(&ga, &hb), GElem::pair(a.clone(), b.clone()));
            let x = GElem::pair(a.clone(), b);
            assert_eq!(g.conj(&x, &GElem::pair(t.clone(), r.identity())), GElem::pair(l.conj(&a, &t), r.identity()));
        }
    }

    #[test]
    fn class_size_formulas_agree_with_partition() {
        for spec in ["sl2:gf2_2", "sl2:gf2_3", "sym:5", "sl2:gfp_3", "prod(sym:3,sl2:gf2_1)"] {
            let g = GroupHandle::parse(spec).unwrap();
            for class in conjugacy_partition(&g, DEFAULT_ENUM_BUDGET).unwrap() {
                for x in &class.elements {
                    assert_eq!(g.class_size(x).unwrap(), class.size() as u64, "{spec} {x}");
                }
            }
        }
    }

    #[test]
    fn sl2_gf2_is_sym3() {
        // act on the three nonzero vectors of GF(2)^2, listed as e1, e2, e1+e2
        let sl = GroupHandle::sl2_gf2(1).unwrap();
        let s3 = GroupHandle::sym(3).unwrap();
        let vecs = [(1u64, 0u64), (0, 1), (1, 1)];
        let phi = |x: &GElem| -> GElem {
            let GElem::Gf2(m) = x else { unreachable!() };
            let [a, b, c, d] = m.entries().map(|e| e.bits());
            let images: Vec<usize> = vecs
                .iter()
                .map(|&(u, v)| {
                    let w = ((a & u) ^ (b & v), (c & u) ^ (d & v));
                    vecs.iter().position(|&z| z == w).unwrap() + 1
                })
                .collect();
            GElem::Perm(Perm::from_one_based(&images).unwrap())
        };
        assert!(is_isomorphism(&sl, &s3, phi, DEFAULT_ENUM_BUDGET).unwrap());
    }

    #[test]
    fn families_and_lifts() {
        let fam = parse_family("sym:2..5").unwrap();
        assert_eq!(fam.iter().map(|g| g.order()).collect::<Vec<_>>(), vec![2, 6, 24, 120]);
        let fam = parse_family("sl2:gf2_1..gf2_3").unwrap();
        assert_eq!(fam.len(), 3);
        let tower = FieldTower::default();
        let u = fam[0].generators()[0].clone();
        let lifted = fam[2].lift(&u, &tower).unwrap();
        assert_eq!(lifted.to_string(), "[[1,1],[0,1]]@gf2_3");
        assert!(GroupHandle::parse("sym:x").is_err());
        assert!(GroupHandle::parse("sl2:rf2").is_err());
        assert!(parse_family("sym:2..x").is_err());
    }
}
