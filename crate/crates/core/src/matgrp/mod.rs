//! SL₂ over the implemented fields.
//!
//! [`Mat2`] is a determinant-one 2×2 matrix over any [`Field`]. [`Sl2`] is the
//! finite group SL₂(GF(q)) for a binary level or a small prime field, with a
//! sorted enumeration. The structural side (Jordan forms, centralizer
//! classification, conjugate families, class growth) lives in [`structure`]
//! and is specific to characteristic 2.

mod mat;
pub mod structure;

use std::sync::Arc;

use rand::Rng;
use thiserror::Error;

use crate::fields::{Field, FieldError, FieldTag, Gf2k, Gfp};
use crate::groups::{FiniteGroup, GroupError};

pub use mat::Mat2;
pub use structure::{
    centralizer_bruteforce, centralizer_structural, class_growth_along_tower, class_records, conjugacy_classes,
    ct_check, icc_witness_family, jordan_form, lift_to_level, CentralizerDescription, CentralizerKind, ClassRecord, IccFamily,
    JordanData, JordanKind,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatError {
    #[error("determinant is {det}, not 1")]
    DeterminantNotOne { det: String },
    #[error("the identity has no {0}")]
    IdentityInput(&'static str),
    #[error("eigenvalues need level {needed}, which is not in the tower")]
    ExtensionUnavailable { needed: u32 },
    #[error("need {needed} nonzero scalars but the largest usable level has {available}; add a higher tower level")]
    FieldTooSmall { needed: usize, available: u64 },
    #[error("{0} is neither diagonal nor a unipotent [[1,u],[0,1]]")]
    NotInJordanForm(String),
    #[error("cannot parse {text:?}: {reason}")]
    Parse { text: String, reason: String },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A field whose elements can be listed.
pub trait FiniteField: Field {
    /// All elements of the level `tag`, ascending.
    fn field_elements(tag: FieldTag) -> Result<Vec<Self>, FieldError>;
    /// A uniform element of the level of `like`.
    fn random_like<R: Rng + ?Sized>(like: &Self, rng: &mut R) -> Self;
}

impl FiniteField for Gf2k {
    fn field_elements(tag: FieldTag) -> Result<Vec<Self>, FieldError> {
        match tag {
            FieldTag::Gf2 { degree } => Ok(Gf2k::elements(degree).collect()),
            _ => Err(FieldError::parse(&tag.to_string(), "not a binary field")),
        }
    }

    fn random_like<R: Rng + ?Sized>(like: &Self, rng: &mut R) -> Self {
        let k = like.degree();
        Gf2k::new(k, rng.gen::<u64>() & ((1u64 << k) - 1)).expect("masked to the level")
    }
}

impl FiniteField for Gfp {
    fn field_elements(tag: FieldTag) -> Result<Vec<Self>, FieldError> {
        match tag {
            FieldTag::Gfp { p } => Ok(Gfp::elements(p)?.collect()),
            _ => Err(FieldError::parse(&tag.to_string(), "not a prime field")),
        }
    }

    fn random_like<R: Rng + ?Sized>(like: &Self, rng: &mut R) -> Self {
        let p = like.modulus();
        Gfp::new(p, rng.gen_range(0..p)).expect("supported prime")
    }
}

/// SL₂(GF(q)) as a finite group.
#[derive(Debug, Clone)]
pub struct Sl2<F> {
    zero: F,
    q: u64,
}

impl Sl2<Gf2k> {
    pub fn gf2(k: u32) -> Result<Self, FieldError> {
        let zero = Gf2k::new(k, 0)?;
        Ok(Sl2 { zero, q: 1 << k })
    }

    pub fn degree(&self) -> u32 {
        self.zero.degree()
    }
}

impl Sl2<Gfp> {
    pub fn gfp(p: u32) -> Result<Self, FieldError> {
        Ok(Sl2 { zero: Gfp::new(p, 0)?, q: p as u64 })
    }
}

impl<F: FiniteField> Sl2<F> {
    /// The group over the level of `like`.
    pub fn over(like: &F) -> Self {
        let q = like.tag().order().expect("finite fields only");
        Sl2 { zero: like.zero_like(), q }
    }

    pub fn tag(&self) -> FieldTag {
        self.zero.tag()
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn zero(&self) -> &F {
        &self.zero
    }

    pub fn contains(&self, g: &Mat2<F>) -> bool {
        g.tag() == self.tag()
    }

    /// Checks the level and returns the element unchanged.
    pub fn member(&self, g: Mat2<F>) -> Result<Mat2<F>, GroupError> {
        if self.contains(&g) {
            Ok(g)
        } else {
            Err(GroupError::NotAnElement { element: g.to_string(), group: self.spec() })
        }
    }

    /// Uniform random element: a uniform nonzero first row, then a uniform
    /// point on the affine line of completing second rows.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Mat2<F> {
        let z = &self.zero;
        loop {
            let (a, b) = (F::random_like(z, rng), F::random_like(z, rng));
            if a.is_zero() && b.is_zero() {
                continue;
            }
            let r = F::random_like(z, rng);
            return if !a.is_zero() {
                let d = (a.one_like() + b.clone() * r.clone()) * a.inv();
                Mat2::new_unchecked(a, b, r, d)
            } else {
                let c = -b.inv();
                Mat2::new_unchecked(a, b, c, r)
            };
        }
    }

    /// The level's elements, for callers that sample repeatedly.
    pub fn field(&self) -> Vec<F> {
        F::field_elements(self.tag()).expect("level was validated at construction")
    }
}

impl<F: FiniteField> FiniteGroup for Sl2<F> {
    type Elem = Mat2<F>;

    fn identity(&self) -> Mat2<F> {
        Mat2::identity(&self.zero)
    }

    fn op(&self, a: &Mat2<F>, b: &Mat2<F>) -> Mat2<F> {
        a * b
    }

    fn inv(&self, a: &Mat2<F>) -> Mat2<F> {
        a.inv()
    }

    fn order(&self) -> u64 {
        let q = self.q as u128;
        u64::try_from(q * (q * q - 1)).unwrap_or(u64::MAX)
    }

    fn spec(&self) -> String {
        format!("sl2:{}", self.tag())
    }

    fn conj(&self, g: &Mat2<F>, t: &Mat2<F>) -> Mat2<F> {
        t.conj_by(g)
    }

    fn commute(&self, a: &Mat2<F>, b: &Mat2<F>) -> bool {
        a.commutes_with(b)
    }

    /// Lexicographic in `(a, b, c, d)`: for `a != 0` the entry `d` is forced,
    /// for `a = 0` the entry `c = -1/b` is forced.
    fn elements(&self) -> Box<dyn Iterator<Item = Mat2<F>> + Send + '_> {
        let field = Arc::new(self.field());
        let n = field.len();
        Box::new((0..n).flat_map(move |ia| {
            let field = field.clone();
            (0..n).flat_map(move |ib| {
                let f = field.clone();
                let (a, b) = (f[ia].clone(), f[ib].clone());
                let forced_d = (!a.is_zero()).then(|| a.inv());
                let forced_c = (a.is_zero() && !b.is_zero()).then(|| -b.inv());
                let count = if forced_d.is_some() || forced_c.is_some() { n } else { 0 };
                (0..count).map(move |i| match (&forced_d, &forced_c) {
                    (Some(a_inv), _) => {
                        let c = f[i].clone();
                        let d = (a.one_like() + b.clone() * c.clone()) * a_inv.clone();
                        Mat2::new_unchecked(a.clone(), b.clone(), c, d)
                    }
                    (None, Some(c)) => Mat2::new_unchecked(a.clone(), b.clone(), c.clone(), f[i].clone()),
                    _ => unreachable!(),
                })
            })
        }))
    }
}
