use std::collections::{BTreeMap, HashMap};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::groups::{enumerate, FiniteGroup};

use super::{FoError, Formula, Term};

/// Cap on `|G|^depth`.
pub const DEFAULT_EVAL_BUDGET: u64 = 1_000_000_000;

const TABLE_LIMIT: usize = 2048;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Binding {
    pub var: String,
    pub element: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evaluation<E> {
    pub value: bool,
    /// Values of the leading existential block, when it holds.
    pub witness: Option<Vec<(String, E)>>,
    /// Values of the leading universal block, when it fails.
    pub counterexample: Option<Vec<(String, E)>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub sentence: String,
    pub group: String,
    pub value: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<Binding>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Vec<Binding>>,
    /// Seconds.
    pub elapsed: f64,
}

/// Terms and formulas with variables resolved to environment slots.
enum CTerm {
    Slot(usize),
    Const(u32),
    Identity,
    Mul(Box<CTerm>, Box<CTerm>),
    Inv(Box<CTerm>),
}

enum CForm {
    Eq(CTerm, CTerm),
    Not(Box<CForm>),
    And(Box<CForm>, Box<CForm>),
    Or(Box<CForm>, Box<CForm>),
    Implies(Box<CForm>, Box<CForm>),
    Forall(Box<CForm>),
    Exists(Box<CForm>),
}

struct Model<'g, G: FiniteGroup> {
    group: &'g G,
    elems: Vec<G::Elem>,
    index: HashMap<G::Elem, u32>,
    table: Option<Vec<u32>>,
    inverse: Vec<u32>,
    identity: u32,
}

impl<'g, G: FiniteGroup> Model<'g, G> {
    fn new(group: &'g G, budget: u64) -> Result<Self, FoError> {
        let elems = enumerate(group, budget.max(1))?;
        let index: HashMap<G::Elem, u32> = elems.iter().cloned().enumerate().map(|(i, x)| (x, i as u32)).collect();
        let n = elems.len();
        let table = (n <= TABLE_LIMIT).then(|| {
            let mut t = Vec::with_capacity(n * n);
            for a in &elems {
                for b in &elems {
                    t.push(index[&group.op(a, b)]);
                }
            }
            t
        });
        let inverse = elems.iter().map(|x| index[&group.inv(x)]).collect();
        let identity = index[&group.identity()];
        Ok(Model { group, elems, index, table, inverse, identity })
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        match &self.table {
            Some(t) => t[a as usize * self.elems.len() + b as usize],
            None => self.index[&self.group.op(&self.elems[a as usize], &self.elems[b as usize])],
        }
    }

    fn term(&self, t: &CTerm, env: &[u32]) -> u32 {
        match t {
            CTerm::Slot(i) => env[*i],
            CTerm::Const(c) => *c,
            CTerm::Identity => self.identity,
            CTerm::Mul(a, b) => self.mul(self.term(a, env), self.term(b, env)),
            CTerm::Inv(a) => self.inverse[self.term(a, env) as usize],
        }
    }

    fn holds(&self, f: &CForm, env: &mut Vec<u32>) -> bool {
        match f {
            CForm::Eq(a, b) => self.term(a, env) == self.term(b, env),
            CForm::Not(p) => !self.holds(p, env),
            CForm::And(a, b) => self.holds(a, env) && self.holds(b, env),
            CForm::Or(a, b) => self.holds(a, env) || self.holds(b, env),
            CForm::Implies(a, b) => !self.holds(a, env) || self.holds(b, env),
            CForm::Forall(p) => self.first(p, env, false).is_none(),
            CForm::Exists(p) => self.first(p, env, true).is_some(),
        }
    }

    /// First element (in enumeration order) for the new slot making `p`
    /// evaluate to `want`.
    fn first(&self, p: &CForm, env: &mut Vec<u32>, want: bool) -> Option<u32> {
        env.push(0);
        let slot = env.len() - 1;
        let mut found = None;
        for x in 0..self.elems.len() as u32 {
            env[slot] = x;
            if self.holds(p, env) == want {
                found = Some(x);
                break;
            }
        }
        env.pop();
        found
    }
}

fn compile_term(t: &Term, scope: &[String], consts: &BTreeMap<String, u32>) -> Result<CTerm, FoError> {
    Ok(match t {
        Term::Var(v) => match scope.iter().rposition(|x| x == v) {
            Some(i) => CTerm::Slot(i),
            None => CTerm::Const(*consts.get(v).ok_or_else(|| FoError::FreeVariables(vec![v.clone()]))?),
        },
        Term::Identity => CTerm::Identity,
        Term::Mul(a, b) => CTerm::Mul(Box::new(compile_term(a, scope, consts)?), Box::new(compile_term(b, scope, consts)?)),
        Term::Inv(a) => CTerm::Inv(Box::new(compile_term(a, scope, consts)?)),
    })
}

fn compile(f: &Formula, scope: &mut Vec<String>, consts: &BTreeMap<String, u32>) -> Result<CForm, FoError> {
    let bin = |a: &Formula, b: &Formula, scope: &mut Vec<String>| -> Result<(Box<CForm>, Box<CForm>), FoError> {
        Ok((Box::new(compile(a, scope, consts)?), Box::new(compile(b, scope, consts)?)))
    };
    Ok(match f {
        Formula::Eq(a, b) => CForm::Eq(compile_term(a, scope, consts)?, compile_term(b, scope, consts)?),
        Formula::Not(p) => CForm::Not(Box::new(compile(p, scope, consts)?)),
        Formula::And(a, b) => {
            let (a, b) = bin(a, b, scope)?;
            CForm::And(a, b)
        }
        Formula::Or(a, b) => {
            let (a, b) = bin(a, b, scope)?;
            CForm::Or(a, b)
        }
        Formula::Implies(a, b) => {
            let (a, b) = bin(a, b, scope)?;
            CForm::Implies(a, b)
        }
        Formula::Forall(v, p) | Formula::Exists(v, p) => {
            scope.push(v.clone());
            let body = Box::new(compile(p, scope, consts)?);
            scope.pop();
            if matches!(f, Formula::Forall(..)) {
                CForm::Forall(body)
            } else {
                CForm::Exists(body)
            }
        }
    })
}

/// Tarskian evaluation of `f` over `group` with free variables taken from
/// `assignment`. Refuses when `|G|^depth` exceeds `budget`.
pub fn evaluate<G: FiniteGroup>(
    group: &G,
    f: &Formula,
    assignment: &BTreeMap<String, G::Elem>,
    budget: u64,
) -> Result<Evaluation<G::Elem>, FoError> {
    let missing: Vec<String> = f.free_vars().into_iter().filter(|v| !assignment.contains_key(v)).collect();
    if !missing.is_empty() {
        return Err(FoError::FreeVariables(missing));
    }
    let depth = f.quantifier_depth();
    let order = group.order() as u128;
    let estimated = order.checked_pow(depth).unwrap_or(u128::MAX);
    if estimated > budget as u128 {
        return Err(FoError::BudgetExceeded { estimated, budget });
    }
    let model = Model::new(group, budget)?;
    let mut consts = BTreeMap::new();
    for (v, x) in assignment {
        let i = model.index.get(x).ok_or_else(|| {
            FoError::Invalid(format!("value of {v} is not an element of {}", group.spec()))
        })?;
        consts.insert(v.clone(), *i);
    }

    // peel the leading block of like quantifiers to report its values
    let mut block = vec![];
    let mut body = f;
    let universal = matches!(f, Formula::Forall(..));
    loop {
        match body {
            Formula::Forall(v, p) if universal => {
                block.push(v.clone());
                body = p;
            }
            Formula::Exists(v, p) if !universal => {
                block.push(v.clone());
                body = p;
            }
            _ => break,
        }
    }
    let compiled = compile(body, &mut block.clone(), &consts)?;
    let mut env = vec![0u32; block.len()];
    let found = search_block(&model, &compiled, &mut env, 0, !universal);
    let named = |vals: Vec<u32>| -> Vec<(String, G::Elem)> {
        block.iter().cloned().zip(vals.into_iter().map(|i| model.elems[i as usize].clone())).collect()
    };
    Ok(match (universal, found) {
        (true, Some(c)) => Evaluation { value: false, witness: None, counterexample: Some(named(c)) },
        (true, None) => Evaluation { value: true, witness: None, counterexample: None },
        (false, Some(w)) if !block.is_empty() => Evaluation { value: true, witness: Some(named(w)), counterexample: None },
        (false, Some(_)) => Evaluation { value: true, witness: None, counterexample: None },
        (false, None) => Evaluation { value: false, witness: None, counterexample: None },
    })
}

/// First assignment of the block (lexicographic in enumeration order) on
/// which `body` evaluates to `want`.
fn search_block<G: FiniteGroup>(
    model: &Model<'_, G>,
    body: &CForm,
    env: &mut Vec<u32>,
    depth: usize,
    want: bool,
) -> Option<Vec<u32>> {
    if depth == env.len() {
        return (model.holds(body, env) == want).then(|| env.clone());
    }
    for x in 0..model.elems.len() as u32 {
        env[depth] = x;
        if let Some(found) = search_block(model, body, env, depth + 1, want) {
            return Some(found);
        }
    }
    None
}

/// Evaluates a sentence and packages the result for reports.
pub fn evaluate_sentence<G: FiniteGroup>(group: &G, f: &Formula, budget: u64) -> Result<EvalReport, FoError> {
    let start = Instant::now();
    let ev = evaluate(group, f, &BTreeMap::new(), budget)?;
    let bindings = |v: Vec<(String, G::Elem)>| -> Vec<Binding> {
        v.into_iter().map(|(var, x)| Binding { var, element: x.to_string() }).collect()
    };
    Ok(EvalReport {
        sentence: f.to_string(),
        group: group.spec(),
        value: ev.value,
        witness: ev.witness.map(bindings),
        counterexample: ev.counterexample.map(bindings),
        elapsed: start.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::folog::parse;
    use crate::fields::Field;
    use crate::groups::{enumerate, is_abelian, GElem, GroupHandle, DEFAULT_ENUM_BUDGET};

    fn eval(g: &GroupHandle, text: &str) -> Evaluation<GElem> {
        evaluate(g, &parse(text).unwrap(), &BTreeMap::new(), DEFAULT_EVAL_BUDGET).unwrap()
    }

    #[test]
    fn commutativity_on_sl2_2() {
        let g = GroupHandle::parse("sl2:gf2_1").unwrap();
        let ev = eval(&g, "A x. A y. x*y = y*x");
        assert!(!ev.value);
        let c = ev.counterexample.unwrap();
        assert_eq!(c.len(), 2);
        assert_ne!(g.op(&c[0].1, &c[1].1), g.op(&c[1].1, &c[0].1));
    }

    #[test]
    fn commutativity_matches_abelian_check() {
        for spec in ["sym:1", "sym:2", "sym:3", "sym:4", "sl2:gf2_1", "sl2:gf2_2", "prod(sym:2,sym:2)", "prod(sym:2,sym:3)"] {
            let g = GroupHandle::parse(spec).unwrap();
            let want = is_abelian(&g, &enumerate(&g, DEFAULT_ENUM_BUDGET).unwrap());
            assert_eq!(eval(&g, "A x. A y. x y = y x").value, want, "{spec}");
        }
    }

    #[test]
    fn involution_in_sl2_4_is_unipotent() {
        let g = GroupHandle::parse("sl2:gf2_2").unwrap();
        let ev = eval(&g, "E x. !(x = e) & x*x = e");
        assert!(ev.value);
        let GElem::Gf2(m) = &ev.witness.unwrap()[0].1 else { panic!() };
        assert!(!m.is_identity());
        assert_eq!(m.trace(), m.a().zero_like());
    }

    #[test]
    fn trivial_group_reduces_to_core() {
        let g = GroupHandle::sym(1).unwrap();
        assert!(eval(&g, "A x. E y. x = y & x = e").value);
        assert!(!eval(&g, "E x. !(x = e)").value);
        assert!(eval(&g, "A x. A y. A z. x (y z) = (x y) z").value);
    }

    #[test]
    fn free_variables_and_budget() {
        let g = GroupHandle::sym(3).unwrap();
        let f = parse("x y = y x").unwrap();
        assert!(matches!(evaluate(&g, &f, &BTreeMap::new(), 100), Err(FoError::FreeVariables(_))));
        let mut a = BTreeMap::new();
        a.insert("x".to_string(), g.parse_element("perm:[2,1,3]").unwrap());
        a.insert("y".to_string(), g.parse_element("perm:[1,3,2]").unwrap());
        assert!(!evaluate(&g, &f, &a, 100).unwrap().value);
        let deep = parse("A a. A b. A c. A d. a = a").unwrap();
        assert_eq!(
            evaluate(&g, &deep, &BTreeMap::new(), 1000),
            Err(FoError::BudgetExceeded { estimated: 1296, budget: 1000 })
        );
    }

    #[test]
    fn shadowing_uses_inner_binding() {
        let g = GroupHandle::sym(3).unwrap();
        // inner x is free of the outer constraint
        assert!(eval(&g, "E x. x = e & (E x. !(x = e))").value);
    }

    #[test]
    fn report_json() {
        let g = GroupHandle::sym(3).unwrap();
        let r = evaluate_sentence(&g, &parse("E x. !(x = e) & x x = e").unwrap(), DEFAULT_EVAL_BUDGET).unwrap();
        assert!(r.value);
        assert_eq!(r.witness.as_ref().unwrap()[0].element, "perm:[1,3,2]");
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["group"], "sym:3");
        assert!(json.get("counterexample").is_none());
    }
}
