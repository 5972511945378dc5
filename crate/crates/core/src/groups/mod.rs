//! Finite groups behind one interface.
//!
//! [`FiniteGroup`] is implemented by [`Sl2`](crate::matgrp::Sl2) levels, by
//! symmetric groups [`Sym`], and by the dynamic [`GroupHandle`], which adds
//! lazy direct products and the textual group specs used on the command line
//! (`sl2:gf2_4`, `sym:5`, `prod(sl2:gf2_2,sym:4)`).
//!
//! The algorithms here are plain exhaustive scans: enumeration, subgroup
//! closure, centralizers, conjugacy partitions and the CT check.

mod handle;
mod sym;

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::hash::Hash;

use rayon::prelude::*;
use thiserror::Error;

pub use handle::{parse_family, GElem, GroupHandle};
pub use sym::{Perm, Sym};

use crate::fields::FieldError;

/// Default cap on the number of elements any scan may touch.
pub const DEFAULT_ENUM_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("budget exceeded: {required} elements needed, budget is {budget}")]
    BudgetExceeded { required: u64, budget: u64 },
    #[error("element {element} does not belong to {group}")]
    NotAnElement { element: String, group: String },
    #[error("cannot parse {text:?}: {reason}")]
    Parse { text: String, reason: String },
    #[error(transparent)]
    Field(#[from] FieldError),
}

impl GroupError {
    pub(crate) fn parse(text: &str, reason: impl Into<String>) -> Self {
        GroupError::Parse { text: text.to_string(), reason: reason.into() }
    }
}

pub trait FiniteGroup: Sync {
    type Elem: Clone + Eq + Ord + Hash + fmt::Debug + fmt::Display + Send + Sync;

    fn identity(&self) -> Self::Elem;
    fn op(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    /// Group order, saturating at `u64::MAX`.
    fn order(&self) -> u64;
    /// The textual spec of this group (`sym:4`, ...).
    fn spec(&self) -> String;
    /// Every element exactly once, in ascending order.
    fn elements(&self) -> Box<dyn Iterator<Item = Self::Elem> + Send + '_>;

    /// `g t g^-1`
    fn conj(&self, g: &Self::Elem, t: &Self::Elem) -> Self::Elem {
        self.op(&self.op(g, t), &self.inv(g))
    }

    fn commute(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.op(a, b) == self.op(b, a)
    }
}

fn check_budget(required: u64, budget: u64) -> Result<(), GroupError> {
    if required > budget {
        Err(GroupError::BudgetExceeded { required, budget })
    } else {
        Ok(())
    }
}

/// All elements in the group's deterministic order.
pub fn enumerate<G: FiniteGroup>(group: &G, budget: u64) -> Result<Vec<G::Elem>, GroupError> {
    check_budget(group.order(), budget)?;
    Ok(group.elements().collect())
}

/// The subgroup generated by `gens`, by breadth-first closure. Returned sorted.
pub fn generated_subgroup<G: FiniteGroup>(
    group: &G,
    gens: &[G::Elem],
    budget: u64,
) -> Result<Vec<G::Elem>, GroupError> {
    let e = group.identity();
    let mut seen: HashSet<G::Elem> = HashSet::from([e.clone()]);
    let mut queue = VecDeque::from([e]);
    // in a finite group, closure under right multiplication by the generators
    // already contains all inverses
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = group.op(&x, g);
            if seen.insert(y.clone()) {
                check_budget(seen.len() as u64, budget)?;
                queue.push_back(y);
            }
        }
    }
    let mut out: Vec<_> = seen.into_iter().collect();
    out.sort();
    Ok(out)
}

/// `{h : hg = gh}` by scanning the whole group, sorted.
pub fn centralizer<G: FiniteGroup>(group: &G, g: &G::Elem, budget: u64) -> Result<Vec<G::Elem>, GroupError> {
    check_budget(group.order(), budget)?;
    Ok(group.elements().filter(|h| group.commute(g, h)).collect())
}

pub fn is_abelian<G: FiniteGroup>(group: &G, elems: &[G::Elem]) -> bool {
    first_noncommuting_pair(group, elems).is_none()
}

fn first_noncommuting_pair<G: FiniteGroup>(group: &G, elems: &[G::Elem]) -> Option<(G::Elem, G::Elem)> {
    for (i, a) in elems.iter().enumerate() {
        for b in &elems[i + 1..] {
            if !group.commute(a, b) {
                return Some((a.clone(), b.clone()));
            }
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugacyClass<E> {
    /// Least element of the class.
    pub representative: E,
    /// Sorted members.
    pub elements: Vec<E>,
    /// `|G| / |class|`.
    pub centralizer_order: u64,
}

impl<E> ConjugacyClass<E> {
    pub fn size(&self) -> usize {
        self.elements.len()
    }
}

/// Exact conjugacy classes: the identity class first, then the others ordered
/// by representative.
pub fn conjugacy_partition<G: FiniteGroup>(
    group: &G,
    budget: u64,
) -> Result<Vec<ConjugacyClass<G::Elem>>, GroupError> {
    let elems = enumerate(group, budget)?;
    let index: HashMap<&G::Elem, usize> = elems.iter().enumerate().map(|(i, x)| (x, i)).collect();
    let n = elems.len() as u64;
    let mut assigned = vec![false; elems.len()];
    let mut classes = vec![];
    for (i, x) in elems.iter().enumerate() {
        if assigned[i] {
            continue;
        }
        let mut members: Vec<usize> = elems
            .par_iter()
            .map(|h| index[&group.conj(h, x)])
            .collect();
        members.sort_unstable();
        members.dedup();
        for &j in &members {
            assigned[j] = true;
        }
        let size = members.len() as u64;
        classes.push(ConjugacyClass {
            representative: x.clone(),
            elements: members.into_iter().map(|j| elems[j].clone()).collect(),
            centralizer_order: n / size,
        });
    }
    let e = group.identity();
    if let Some(pos) = classes.iter().position(|c| c.representative == e) {
        let id = classes.remove(pos);
        classes.insert(0, id);
    }
    Ok(classes)
}

/// A failure of commutative transitivity: `left` and `right` both centralize
/// the nontrivial `element` but do not commute with each other.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CtViolation<E> {
    pub element: E,
    pub centralizer_order: usize,
    pub left: E,
    pub right: E,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CtReport<E> {
    pub group: String,
    pub group_order: u64,
    pub checked: u64,
    pub violation: Option<CtViolation<E>>,
}

impl<E> CtReport<E> {
    pub fn holds(&self) -> bool {
        self.violation.is_none()
    }
}

/// Checks that the centralizer of every nontrivial element is abelian.
///
/// Every element is scanned; the reported violation is the first one in
/// element order, independent of how the scan is split across threads.
pub fn ct_check<G: FiniteGroup>(group: &G, budget: u64) -> Result<CtReport<G::Elem>, GroupError> {
    let elems = enumerate(group, budget)?;
    let e = group.identity();
    let violation = elems.par_iter().filter(|g| **g != e).find_map_first(|g| {
        let cent: Vec<G::Elem> = elems.iter().filter(|h| group.commute(g, h)).cloned().collect();
        first_noncommuting_pair(group, &cent).map(|(left, right)| CtViolation {
            element: g.clone(),
            centralizer_order: cent.len(),
            left,
            right,
        })
    });
    Ok(CtReport {
        group: group.spec(),
        group_order: elems.len() as u64,
        checked: elems.len() as u64 - 1,
        violation,
    })
}

/// Checks `phi` is a bijective homomorphism between two enumerated groups.
pub fn is_isomorphism<G: FiniteGroup, H: FiniteGroup>(
    g: &G,
    h: &H,
    phi: impl Fn(&G::Elem) -> H::Elem,
    budget: u64,
) -> Result<bool, GroupError> {
    let ge = enumerate(g, budget)?;
    let he = enumerate(h, budget)?;
    if ge.len() != he.len() {
        return Ok(false);
    }
    let image: HashSet<H::Elem> = ge.iter().map(&phi).collect();
    if image.len() != he.len() {
        return Ok(false);
    }
    Ok(ge.iter().all(|a| ge.iter().all(|b| phi(&g.op(a, b)) == h.op(&phi(a), &phi(b)))))
}
