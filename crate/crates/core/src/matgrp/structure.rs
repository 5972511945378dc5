//! Jordan forms, centralizers, classes and conjugate families in SL₂(GF(2^k)).
//!
//! Over an algebraically closed field a nontrivial element is conjugate to a
//! diagonal matrix or to `[[1,1],[0,1]]`. At a finite level a third type
//! appears: eigenvalues in GF(q²) but not in GF(q). Its centralizer is a
//! nonsplit torus of order `q + 1`; after base change to GF(q²) it becomes the
//! diagonal case.

use serde::{Deserialize, Serialize};

use crate::fields::{roots_in_level, Field, FieldTower, Gf2k};
use crate::groups::{self, ConjugacyClass, CtReport, FiniteGroup};

use super::{Mat2, MatError, Sl2};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum JordanKind {
    /// `J = diag(a, a⁻¹)`
    Diagonal { eigenvalue: Gf2k },
    /// `J = [[1, 1], [0, 1]]`
    Unipotent,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JordanData {
    pub kind: JordanKind,
    pub form: Mat2<Gf2k>,
    /// `conjugator · form · conjugator⁻¹` is `g` lifted to `extension_level`.
    pub conjugator: Mat2<Gf2k>,
    pub extension_level: u32,
}

fn char_poly(g: &Mat2<Gf2k>) -> [Gf2k; 3] {
    let one = Gf2k::one(g.a().degree());
    [one, g.trace(), one]
}

/// Lifts a matrix to level `k`: matrices with entries in GF(2) lift to any
/// level, everything else goes through the tower embedding.
pub fn lift_to_level(g: &Mat2<Gf2k>, k: u32, tower: &FieldTower) -> Result<Mat2<Gf2k>, MatError> {
    if g.a().degree() == k {
        return Ok(g.clone());
    }
    if g.entries().iter().all(|e| e.is_prime_field()) {
        return g.try_map(|e| Gf2k::new(k, e.bits()));
    }
    g.try_map(|e| tower.embed(*e, k))
}

/// Kernel vector of the singular matrix `[[m11, m12], [m21, m22]]` (not zero).
fn kernel(m11: Gf2k, m12: Gf2k, m21: Gf2k, m22: Gf2k) -> (Gf2k, Gf2k) {
    if !(m11.is_zero() && m12.is_zero()) {
        (m12, m11)
    } else {
        (m22, m21)
    }
}

/// The conjugator `P` with `P · diag(a, a⁻¹) · P⁻¹ = g`, for an eigenvalue
/// `a != a⁻¹` at the level of `g`.
fn diagonalizer(g: &Mat2<Gf2k>, a: Gf2k) -> Mat2<Gf2k> {
    let a_inv = a.inv();
    let v = kernel(*g.a() + a, *g.b(), *g.c(), *g.d() + a);
    let w = kernel(*g.a() + a_inv, *g.b(), *g.c(), *g.d() + a_inv);
    let det_inv = (v.0 * w.1 + w.0 * v.1).inv();
    Mat2::new_unchecked(v.0 * det_inv, w.0, v.1 * det_inv, w.1)
}

/// The conjugator `P` with `P · [[1,1],[0,1]] · P⁻¹ = g` for a nontrivial
/// `g` of trace 0.
fn unipotent_conjugator(g: &Mat2<Gf2k>) -> Mat2<Gf2k> {
    let k = g.a().degree();
    let (one, zero) = (Gf2k::one(k), Gf2k::zero(k));
    let n = [*g.a() + one, *g.b(), *g.c(), *g.d() + one];
    // v2 outside ker N, v1 = N v2
    let v2 = if n[1].is_zero() && n[3].is_zero() { (one, zero) } else { (zero, one) };
    let v1 = (n[0] * v2.0 + n[1] * v2.1, n[2] * v2.0 + n[3] * v2.1);
    let s = (v1.0 * v2.1 + v2.0 * v1.1).inv().sqrt();
    Mat2::new_unchecked(s * v1.0, s * v2.0, s * v1.1, s * v2.1)
}

/// Jordan form of a nontrivial element.
///
/// When the eigenvalues are not in GF(q) they are taken at level `2k`, which
/// must then be a tower level (and so must `k`).
pub fn jordan_form(g: &Mat2<Gf2k>, tower: &FieldTower) -> Result<JordanData, MatError> {
    if g.is_identity() {
        return Err(MatError::IdentityInput("Jordan form"));
    }
    let k = g.a().degree();
    if g.trace().is_zero() {
        return Ok(JordanData {
            kind: JordanKind::Unipotent,
            form: Mat2::unipotent(g.a()),
            conjugator: unipotent_conjugator(g),
            extension_level: k,
        });
    }
    if g.is_diagonal() {
        return Ok(JordanData {
            kind: JordanKind::Diagonal { eigenvalue: *g.a() },
            form: g.clone(),
            conjugator: Mat2::identity(g.a()),
            extension_level: k,
        });
    }
    let (lifted, a) = match roots_in_level(&char_poly(g)).first() {
        Some(&a) => (g.clone(), a),
        None => {
            let needed = 2 * k;
            if !tower.contains(needed) || !tower.contains(k) {
                return Err(MatError::ExtensionUnavailable { needed });
            }
            let lifted = lift_to_level(g, needed, tower)?;
            let a = *roots_in_level(&char_poly(&lifted)).first().expect("quadratic splits in GF(q²)");
            (lifted, a)
        }
    };
    Ok(JordanData {
        kind: JordanKind::Diagonal { eigenvalue: a },
        form: Mat2::diag(a)?,
        conjugator: diagonalizer(&lifted, a),
        extension_level: a.degree(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CentralizerKind {
    SplitTorus,
    NonsplitTorus,
    UnipotentCent,
}

impl CentralizerKind {
    pub fn name(&self) -> &'static str {
        match self {
            CentralizerKind::SplitTorus => "split_torus",
            CentralizerKind::NonsplitTorus => "nonsplit_torus",
            CentralizerKind::UnipotentCent => "unipotent",
        }
    }

    pub fn order_formula(&self) -> &'static str {
        match self {
            CentralizerKind::SplitTorus => "q-1",
            CentralizerKind::NonsplitTorus => "q+1",
            CentralizerKind::UnipotentCent => "q",
        }
    }
}

/// The centralizer of a nontrivial element of SL₂(GF(q)), described as
/// `conjugator · C(representative) · conjugator⁻¹`.
///
/// Representatives: `diag(a, a⁻¹)` (split torus), `[[1,1],[0,1]]` (unipotent),
/// and the companion matrix `[[0,1],[1,t]]` of an irreducible characteristic
/// polynomial (nonsplit torus), whose centralizer is
/// `{αI + βC : α² + tαβ + β² = 1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CentralizerDescription {
    pub kind: CentralizerKind,
    pub q: u64,
    pub representative: Mat2<Gf2k>,
    pub conjugator: Mat2<Gf2k>,
}

impl CentralizerDescription {
    pub fn order(&self) -> u64 {
        match self.kind {
            CentralizerKind::SplitTorus => self.q - 1,
            CentralizerKind::NonsplitTorus => self.q + 1,
            CentralizerKind::UnipotentCent => self.q,
        }
    }

    /// The described subgroup, sorted. Enumerates pairs of scalars for the
    /// nonsplit case, so it is meant for small levels.
    pub fn members(&self) -> Vec<Mat2<Gf2k>> {
        let k = self.representative.a().degree();
        let p = &self.conjugator;
        let mut out: Vec<Mat2<Gf2k>> = match self.kind {
            CentralizerKind::SplitTorus => Gf2k::elements(k)
                .skip(1)
                .map(|a| Mat2::diag(a).expect("nonzero").conj_by(p))
                .collect(),
            CentralizerKind::UnipotentCent => {
                let one = Gf2k::one(k);
                Gf2k::elements(k)
                    .map(|b| Mat2::new_unchecked(one, b, Gf2k::zero(k), one).conj_by(p))
                    .collect()
            }
            CentralizerKind::NonsplitTorus => {
                let t = *self.representative.d();
                let mut v = vec![];
                for al in Gf2k::elements(k) {
                    for be in Gf2k::elements(k) {
                        if (al * al + t * al * be + be * be).is_one() {
                            v.push(Mat2::new_unchecked(al, be, be, al + be * t).conj_by(p));
                        }
                    }
                }
                v
            }
        };
        out.sort();
        out
    }
}

/// Classifies `C(g)` without leaving the level of `g`.
pub fn centralizer_structural(g: &Mat2<Gf2k>) -> Result<CentralizerDescription, MatError> {
    if g.is_identity() {
        return Err(MatError::IdentityInput("proper centralizer"));
    }
    let k = g.a().degree();
    let q = 1u64 << k;
    let t = g.trace();
    if t.is_zero() {
        return Ok(CentralizerDescription {
            kind: CentralizerKind::UnipotentCent,
            q,
            representative: Mat2::unipotent(g.a()),
            conjugator: unipotent_conjugator(g),
        });
    }
    if let Some(&a) = roots_in_level(&char_poly(g)).first() {
        let a = if g.is_diagonal() { *g.a() } else { a };
        let conjugator = if g.is_diagonal() { Mat2::identity(g.a()) } else { diagonalizer(g, a) };
        return Ok(CentralizerDescription {
            kind: CentralizerKind::SplitTorus,
            q,
            representative: Mat2::diag(a)?,
            conjugator,
        });
    }
    // g e1 is not a multiple of e1 (else e1 would be an eigenvector), so
    // P = [e1 | g e1] is invertible with det c.
    let (zero, one) = (Gf2k::zero(k), Gf2k::one(k));
    let s = g.c().inv().sqrt();
    Ok(CentralizerDescription {
        kind: CentralizerKind::NonsplitTorus,
        q,
        representative: Mat2::new_unchecked(zero, one, one, t),
        conjugator: Mat2::new_unchecked(s, s * *g.a(), zero, s * *g.c()),
    })
}

/// `{h : hg = gh}` by a scan of the whole level.
pub fn centralizer_bruteforce(g: &Mat2<Gf2k>, budget: u64) -> Result<Vec<Mat2<Gf2k>>, MatError> {
    let grp = Sl2::over(g.a());
    Ok(groups::centralizer(&grp, g, budget)?)
}

/// CT check for SL₂(GF(2^k)).
pub fn ct_check(k: u32, budget: u64) -> Result<CtReport<Mat2<Gf2k>>, MatError> {
    Ok(groups::ct_check(&Sl2::gf2(k)?, budget)?)
}

pub fn conjugacy_classes(k: u32, budget: u64) -> Result<Vec<ConjugacyClass<Mat2<Gf2k>>>, MatError> {
    Ok(groups::conjugacy_partition(&Sl2::gf2(k)?, budget)?)
}

/// One line of a class or centralizer report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassRecord {
    pub group: String,
    pub q: u64,
    pub element: String,
    pub kind: String,
    /// Centralizer order.
    pub order: u64,
    pub class_size: u64,
}

impl ClassRecord {
    pub fn for_element(g: &Mat2<Gf2k>, centralizer_order: u64) -> Result<Self, MatError> {
        let grp = Sl2::over(g.a());
        let kind = if g.is_identity() {
            "identity".to_string()
        } else {
            centralizer_structural(g)?.kind.name().to_string()
        };
        Ok(ClassRecord {
            group: grp.spec(),
            q: grp.q(),
            element: g.to_string(),
            kind,
            order: centralizer_order,
            class_size: grp.order() / centralizer_order,
        })
    }
}

/// Class records for every conjugacy class of SL₂(GF(2^k)).
pub fn class_records(k: u32, budget: u64) -> Result<Vec<ClassRecord>, MatError> {
    conjugacy_classes(k, budget)?
        .iter()
        .map(|c| ClassRecord::for_element(&c.representative, c.centralizer_order))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IccWitness {
    pub scalar: Gf2k,
    pub conjugator: Mat2<Gf2k>,
    pub conjugate: Mat2<Gf2k>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IccFamily {
    /// Level the family lives at (the input level or a higher tower level).
    pub level: u32,
    pub element: Mat2<Gf2k>,
    pub members: Vec<IccWitness>,
}

/// `n` pairwise distinct conjugates of a diagonal or unipotent element.
///
/// `diag(a, a⁻¹)` is conjugated by `[[b, 1], [0, b⁻¹]]`, giving
/// `[[a, (a + a⁻¹)b], [0, a⁻¹]]`; `[[1, u], [0, 1]]` by `diag(c, c⁻¹)`, giving
/// `[[1, uc²], [0, 1]]`. Scalars run over the nonzero elements in ascending
/// order. If the level is too small the element moves up the tower.
pub fn icc_witness_family(g: &Mat2<Gf2k>, n: usize, tower: &FieldTower) -> Result<IccFamily, MatError> {
    if g.is_identity() {
        return Err(MatError::IdentityInput("conjugate family"));
    }
    let unipotent = g.a().is_one() && g.d().is_one() && g.c().is_zero();
    if !g.is_diagonal() && !unipotent {
        return Err(MatError::NotInJordanForm(g.to_string()));
    }
    let mut k = g.a().degree();
    while ((1u64 << k) - 1) < n as u64 {
        match tower.next_level(k) {
            Some(next) if lift_to_level(g, next, tower).is_ok() => k = next,
            _ => return Err(MatError::FieldTooSmall { needed: n, available: (1u64 << k) - 1 }),
        }
    }
    let h = lift_to_level(g, k, tower)?;
    let members = Gf2k::elements(k)
        .skip(1)
        .take(n)
        .map(|s| {
            let conjugator = if unipotent {
                Mat2::diag(s).expect("nonzero")
            } else {
                Mat2::new_unchecked(s, Gf2k::one(k), Gf2k::zero(k), s.inv())
            };
            IccWitness { scalar: s, conjugate: h.conj_by(&conjugator), conjugator }
        })
        .collect();
    Ok(IccFamily { level: k, element: h, members })
}

/// Conjugacy class size of `g` at each level, by brute-force centralizers.
pub fn class_growth_along_tower(
    g: &Mat2<Gf2k>,
    levels: &[u32],
    tower: &FieldTower,
    budget: u64,
) -> Result<Vec<u64>, MatError> {
    levels
        .iter()
        .map(|&k| {
            let h = lift_to_level(g, k, tower)?;
            let cent = centralizer_bruteforce(&h, budget)?;
            Ok(Sl2::over(h.a()).order() / cent.len() as u64)
        })
        .collect()
}
