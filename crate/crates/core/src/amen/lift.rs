use crate::groups::{FiniteGroup, GElem, GroupHandle};

use super::{folner_defect, AmenError, FolnerCertificate, Mode};

/// Lifts a conjugation certificate `(S, T)` over `G` to `(S', T × {e_H})`
/// over `G × H`. Since `(g,h)(t,e)(g,h)⁻¹ = (g t g⁻¹, e)`, the defect is the
/// same fraction; it is recomputed in the product anyway.
pub fn product_lift(
    cert: &FolnerCertificate<GElem>,
    g: &GroupHandle,
    h: &GroupHandle,
    s_prime: &[GElem],
) -> Result<FolnerCertificate<GElem>, AmenError> {
    if cert.mode != Mode::Conjugation {
        return Err(AmenError::KindMismatch { expected: Mode::Conjugation, found: cert.mode });
    }
    if cert.group != g.spec() {
        return Err(AmenError::Invalid(format!("certificate is for {}, not {}", cert.group, g.spec())));
    }
    let product = GroupHandle::product(g.clone(), h.clone());
    for x in s_prime {
        if !product.contains(x) {
            return Err(crate::groups::GroupError::NotAnElement { element: x.to_string(), group: product.spec() }.into());
        }
        let first = x.left().expect("product elements are pairs");
        if !cert.s.contains(first) {
            return Err(AmenError::ProjectionMismatch { element: x.to_string() });
        }
    }
    let e_h = h.identity();
    let mut t: Vec<GElem> = cert.t.iter().map(|x| GElem::pair(x.clone(), e_h.clone())).collect();
    t.sort();
    let defect = folner_defect(&product, s_prime, &t, Mode::Conjugation)?;
    // equal to cert.defect when S' projects onto S, at most that otherwise
    debug_assert!(defect <= cert.defect);
    if defect >= cert.epsilon {
        return Err(AmenError::Invalid(format!("lifted defect {defect} is not below epsilon")));
    }
    Ok(FolnerCertificate {
        mode: Mode::Conjugation,
        group: product.spec(),
        s: s_prime.to_vec(),
        t,
        epsilon: cert.epsilon,
        defect,
        exclude_identity: cert.exclude_identity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amen::{certify, min_folner_search, Rational, SearchOptions, Verdict};
    use crate::groups::{enumerate, DEFAULT_ENUM_BUDGET};

    fn certified(v: Verdict<GElem>) -> FolnerCertificate<GElem> {
        match v {
            Verdict::Certified(c) => c,
            Verdict::Refused { defect } => panic!("refused with defect {defect}"),
        }
    }

    #[test]
    fn class_union_lifts_at_zero() {
        let g = GroupHandle::sym(3).unwrap();
        let h = GroupHandle::sym(2).unwrap();
        let s = g.generators();
        let transpositions: Vec<GElem> =
            ["perm:[2,1,3]", "perm:[1,3,2]", "perm:[3,2,1]"].iter().map(|x| g.parse_element(x).unwrap()).collect();
        let c = certified(certify(&g, &s, &transpositions, Rational::new(1, 2), Mode::Conjugation).unwrap());
        let hs = enumerate(&h, DEFAULT_ENUM_BUDGET).unwrap();
        let sp: Vec<GElem> = s.iter().flat_map(|x| hs.iter().map(move |y| GElem::pair(x.clone(), y.clone()))).collect();
        let lifted = product_lift(&c, &g, &h, &sp).unwrap();
        assert_eq!(lifted.defect, Rational::new(0, 1));
        assert_eq!(lifted.t.len(), 3);
        assert!(lifted.verify(&GroupHandle::product(g, h)).is_ok());
    }

    #[test]
    fn defect_is_preserved_exactly() {
        let g = GroupHandle::sym(3).unwrap();
        let h = GroupHandle::sym(3).unwrap();
        let s = vec![g.parse_element("perm:[2,1,3]").unwrap()];
        let t = vec![g.identity(), g.parse_element("perm:[2,3,1]").unwrap()];
        // conjugation by (1 2) sends (1 2 3) to (1 3 2): defect 1
        let c = certified(certify(&g, &s, &t, Rational::new(2, 1), Mode::Conjugation).unwrap());
        assert_eq!(c.defect, Rational::new(1, 1));
        let sp = vec![GElem::pair(s[0].clone(), h.parse_element("perm:[3,1,2]").unwrap())];
        let lifted = product_lift(&c, &g, &h, &sp).unwrap();
        assert_eq!(lifted.defect, c.defect);
    }

    #[test]
    fn sl2_into_sym4_from_search() {
        let g = GroupHandle::parse("sl2:gf2_1").unwrap();
        let h = GroupHandle::sym(4).unwrap();
        let s = g.generators();
        let eps = Rational::new(1, 2);
        let out = min_folner_search(&g, &s, eps, Mode::Conjugation, 2, SearchOptions::for_mode(Mode::Conjugation)).unwrap();
        let c = certified(certify(&g, &s, &out.witness.unwrap(), eps, Mode::Conjugation).unwrap());
        let sp: Vec<GElem> = s.iter().zip(h.generators()).map(|(x, y)| GElem::pair(x.clone(), y)).collect();
        let lifted = product_lift(&c, &g, &h, &sp).unwrap();
        let product = GroupHandle::product(g, h);
        assert_eq!(folner_defect(&product, &sp, &lifted.t, Mode::Conjugation).unwrap(), c.defect);
    }

    #[test]
    fn rejects_bad_inputs() {
        let g = GroupHandle::sym(3).unwrap();
        let h = GroupHandle::sym(2).unwrap();
        let s = vec![g.parse_element("perm:[2,1,3]").unwrap()];
        let all = enumerate(&g, DEFAULT_ENUM_BUDGET).unwrap();
        let c = certified(certify(&g, &s, &all, Rational::new(1, 2), Mode::Conjugation).unwrap());
        let outside = vec![GElem::pair(g.parse_element("perm:[1,3,2]").unwrap(), h.identity())];
        assert!(matches!(product_lift(&c, &g, &h, &outside), Err(AmenError::ProjectionMismatch { .. })));
        let tc = certified(certify(&g, &s, &all, Rational::new(1, 2), Mode::Translation).unwrap());
        assert!(matches!(product_lift(&tc, &g, &h, &[]), Err(AmenError::KindMismatch { .. })));
    }
}
