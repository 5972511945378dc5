use serde::{Deserialize, Serialize};

use crate::groups::{FiniteGroup, GElem, GroupHandle};

use super::{folner_defect, format_ratio, parse_ratio, AmenError, Mode, Rational};

/// A set `T` together with the exact defect it achieves against `S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FolnerCertificate<E> {
    pub mode: Mode,
    pub group: String,
    pub s: Vec<E>,
    /// Sorted, without repeats.
    pub t: Vec<E>,
    pub epsilon: Rational,
    pub defect: Rational,
    /// Whether the identity was forbidden in `T`.
    pub exclude_identity: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict<E> {
    Certified(FolnerCertificate<E>),
    Refused { defect: Rational },
}

impl<E> Verdict<E> {
    pub fn is_certified(&self) -> bool {
        matches!(self, Verdict::Certified(_))
    }
}

/// Certificate iff the defect is strictly below `epsilon`.
pub fn certify<G: FiniteGroup>(
    group: &G,
    s: &[G::Elem],
    t: &[G::Elem],
    epsilon: Rational,
    mode: Mode,
) -> Result<Verdict<G::Elem>, AmenError> {
    if *epsilon.numer() == 0 {
        return Err(AmenError::NonPositiveEpsilon);
    }
    let defect = folner_defect(group, s, t, mode)?;
    if defect >= epsilon {
        return Ok(Verdict::Refused { defect });
    }
    let mut t = t.to_vec();
    t.sort();
    t.dedup();
    let exclude_identity = !t.contains(&group.identity());
    Ok(Verdict::Certified(FolnerCertificate {
        mode,
        group: group.spec(),
        s: s.to_vec(),
        t,
        epsilon,
        defect,
        exclude_identity,
    }))
}

impl<E: Clone + Ord + std::fmt::Display> FolnerCertificate<E> {
    /// Recomputes the defect in `group` and checks every stored claim.
    pub fn verify<G: FiniteGroup<Elem = E>>(&self, group: &G) -> Result<(), AmenError> {
        if group.spec() != self.group {
            return Err(AmenError::Invalid(format!("certificate is for {}, not {}", self.group, group.spec())));
        }
        let defect = folner_defect(group, &self.s, &self.t, self.mode)?;
        if defect != self.defect {
            return Err(AmenError::Invalid(format!(
                "stored defect {} but recomputed {}",
                format_ratio(&self.defect),
                format_ratio(&defect)
            )));
        }
        if defect >= self.epsilon {
            return Err(AmenError::Invalid(format!(
                "defect {} is not below epsilon {}",
                format_ratio(&defect),
                format_ratio(&self.epsilon)
            )));
        }
        if self.exclude_identity && self.t.contains(&group.identity()) {
            return Err(AmenError::Invalid("T contains the identity".into()));
        }
        Ok(())
    }

    pub fn to_record(&self) -> CertificateRecord {
        CertificateRecord {
            mode: self.mode,
            group: self.group.clone(),
            s: self.s.iter().map(|x| x.to_string()).collect(),
            t: self.t.iter().map(|x| x.to_string()).collect(),
            epsilon: format_ratio(&self.epsilon),
            defect: format_ratio(&self.defect),
            status: "certified".into(),
            exclude_identity: self.exclude_identity,
        }
    }
}

/// The JSON form of a certificate. Self-contained: [`CertificateRecord::verify`]
/// rebuilds the group from its spec and recomputes everything.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateRecord {
    pub mode: Mode,
    pub group: String,
    #[serde(rename = "S")]
    pub s: Vec<String>,
    #[serde(rename = "T")]
    pub t: Vec<String>,
    pub epsilon: String,
    pub defect: String,
    pub status: String,
    pub exclude_identity: bool,
}

impl CertificateRecord {
    pub fn verify(&self) -> Result<FolnerCertificate<GElem>, AmenError> {
        let group = GroupHandle::parse(&self.group)?;
        let parse_all = |v: &[String]| -> Result<Vec<GElem>, AmenError> {
            v.iter().map(|x| group.parse_element(x).map_err(AmenError::from)).collect()
        };
        let mut t = parse_all(&self.t)?;
        t.sort();
        t.dedup();
        let cert = FolnerCertificate {
            mode: self.mode,
            group: group.spec(),
            s: parse_all(&self.s)?,
            t,
            epsilon: parse_ratio(&self.epsilon)?,
            defect: parse_ratio(&self.defect)?,
            exclude_identity: self.exclude_identity,
        };
        if cert.t.is_empty() {
            return Err(AmenError::EmptyT);
        }
        cert.verify(&group)?;
        Ok(cert)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{enumerate, generated_subgroup, DEFAULT_ENUM_BUDGET};

    #[test]
    fn certify_examples() {
        let g = GroupHandle::sym(3).unwrap();
        let s = vec![g.parse_element("perm:[2,1,3]").unwrap()];
        let h = generated_subgroup(&g, &s, DEFAULT_ENUM_BUDGET).unwrap();
        let Verdict::Certified(c) = certify(&g, &s, &h, Rational::new(1, 2), Mode::Translation).unwrap() else {
            panic!("subgroup must certify")
        };
        assert_eq!(c.defect, Rational::new(0, 1));

        let all = enumerate(&g, DEFAULT_ENUM_BUDGET).unwrap();
        let v = certify(&g, &all, &all, Rational::new(1, 1000), Mode::Conjugation).unwrap();
        assert!(v.is_certified());

        let t = vec![g.identity(), g.parse_element("perm:[2,3,1]").unwrap()];
        assert_eq!(
            certify(&g, &s, &t, Rational::new(1, 1), Mode::Translation).unwrap(),
            Verdict::Refused { defect: Rational::new(2, 1) }
        );
        assert_eq!(certify(&g, &s, &t, Rational::new(0, 1), Mode::Translation), Err(AmenError::NonPositiveEpsilon));
    }

    #[test]
    fn strict_inequality() {
        // T = {e, (1 2 3)} against (1 2 3): one element leaves, defect 2/2 = 1
        let g = GroupHandle::sym(3).unwrap();
        let c3 = g.parse_element("perm:[2,3,1]").unwrap();
        let t = vec![g.identity(), c3.clone()];
        let v = certify(&g, &[c3.clone()], &t, Rational::new(1, 1), Mode::Translation).unwrap();
        assert_eq!(v, Verdict::Refused { defect: Rational::new(1, 1) });
        assert!(certify(&g, &[c3], &t, Rational::new(101, 100), Mode::Translation).unwrap().is_certified());
    }

    #[test]
    fn record_round_trip_and_tamper() {
        let g = GroupHandle::parse("sl2:gf2_2").unwrap();
        let s = g.generators();
        let all = enumerate(&g, DEFAULT_ENUM_BUDGET).unwrap();
        let t: Vec<GElem> = all.iter().filter(|x| **x != g.identity()).cloned().collect();
        let Verdict::Certified(c) = certify(&g, &s, &t, Rational::new(1, 4), Mode::Conjugation).unwrap() else {
            panic!()
        };
        assert!(c.exclude_identity);
        let json = serde_json::to_string(&c.to_record()).unwrap();
        let back: CertificateRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(back.verify().unwrap(), c);

        let mut bad = back.clone();
        bad.defect = "1/8".into();
        assert!(matches!(bad.verify(), Err(AmenError::Invalid(_))));
        let mut bad = back;
        bad.t.truncate(3);
        assert!(bad.verify().is_err());
    }
}
