//! The invariant suite run by `engine verify`.

use std::sync::Arc;

use repcat::category::{cokernel_obj, identity, kernel_obj, make_object, zero_morphism, DefinableObject};
use repcat::endo::{act_on_object, compute_end, context_action, end_identity, end_multiply, EndAlgebra};
use repcat::formula::{RegularFormula, Sequent};
use repcat::interp::{check_sequent, enumerate_formulas, interpret, Budget};
use repcat::{Matrix, Representation, Subdiagram, Subspace};
use serde::Serialize;

use crate::session::Session;

/// Objects built per representation are capped to keep `verify` quick.
const MAX_OBJECTS: usize = 40;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: usize,
    pub failed: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
}

impl Check {
    fn new(name: String) -> Self {
        Check { name, passed: 0, failed: 0, first_failure: None }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(what());
            }
        }
    }
}

/// Enumeration budget for the naturality check: one context variable, one
/// bound variable, one equation.
pub fn verify_budget() -> Budget {
    Budget { max_ctx_vars: 1, max_bound_vars: 1, max_eqs: 1, ..Budget::default() }
}

pub fn verify_session(s: &Session, budget: &Budget) -> Vec<Check> {
    let mut out = Vec::new();
    let enumerated: Vec<RegularFormula> = enumerate_formulas(&s.quiver, budget).collect();
    for (name, rep) in &s.reps {
        out.extend(verify_rep(s, name, rep, &enumerated));
    }
    out
}

fn objects(s: &Session, rep: &Arc<Representation>) -> Vec<(String, DefinableObject)> {
    let mut out = Vec::new();
    for f in &s.formulas {
        let zero = RegularFormula::zero(f.formula.context().to_vec());
        if let Ok(o) = make_object(&f.formula, &zero, rep) {
            out.push((f.name.clone(), o));
        }
        for g in &s.formulas {
            if g.name == f.name || g.formula.context() != f.formula.context() {
                continue;
            }
            let meet = f.formula.conjoin(&g.formula).expect("same context");
            if let Ok(o) = make_object(&f.formula, &meet, rep) {
                out.push((format!("{}/({} & {})", f.name, f.name, g.name), o));
            }
        }
    }
    out.truncate(MAX_OBJECTS);
    out
}

fn preserves(phi: &Matrix, s: &Subspace) -> bool {
    s.map(phi).and_then(|img| s.contains(&img)).unwrap_or(false)
}

fn verify_rep(s: &Session, name: &str, rep: &Arc<Representation>, enumerated: &[RegularFormula]) -> Vec<Check> {
    let check = |what: &str| Check::new(format!("{name}: {what}"));
    let mut reflexive = check("sequent reflexivity");
    for f in &s.formulas {
        let seq = Sequent::new(f.formula.clone(), f.formula.clone()).expect("same context");
        reflexive.record(check_sequent(&seq, rep) == Ok(true), || f.name.clone());
    }

    let alg: EndAlgebra = compute_end(rep, &Subdiagram::whole(&s.quiver));
    let basis = alg.basis();
    let one = end_identity(&alg);
    let mut unit = check("end contains identity");
    unit.record(alg.contains(&one), || "identity tuple".into());
    let mut commute = check("end basis commutes with edges");
    for (i, e) in basis.iter().enumerate() {
        commute.record(e.commutes_with(rep, alg.subdiagram()), || format!("e{i}"));
    }
    let mut closure = check("end closed under products");
    for (i, a) in basis.iter().enumerate() {
        for (j, b) in basis.iter().enumerate() {
            let ok = end_multiply(a, b).is_ok_and(|p| alg.contains(&p));
            closure.record(ok, || format!("e{i}*e{j}"));
        }
    }

    let mut natural = check("naturality on definable subspaces");
    let formulas = s.formulas.iter().map(|f| (f.name.clone(), &f.formula));
    let listed = enumerated.iter().enumerate().map(|(i, f)| (format!("enumerated #{i}"), f));
    for (label, f) in formulas.chain(listed) {
        let Ok(sub) = interpret(f, rep) else {
            natural.record(false, || format!("{label} does not interpret"));
            continue;
        };
        for (i, e) in basis.iter().enumerate() {
            let ok = context_action(e, f.context()).is_ok_and(|phi| preserves(&phi, &sub));
            natural.record(ok, || format!("e{i} on {label}"));
        }
    }

    let objs = objects(s, rep);
    let mut module_unit = check("identity acts as identity");
    let mut module_mul = check("action respects products");
    let mut abelian = check("kernels and cokernels of identity and zero");
    for (label, o) in &objs {
        let act_one = act_on_object(&one, o);
        module_unit.record(act_one == Ok(Matrix::identity(o.qdim())), || label.clone());
        for (i, a) in basis.iter().enumerate() {
            for (j, b) in basis.iter().enumerate() {
                let ok = match (end_multiply(a, b), act_on_object(a, o), act_on_object(b, o)) {
                    (Ok(ab), Ok(ma), Ok(mb)) => act_on_object(&ab, o) == Ok(ma.mul(&mb)),
                    _ => false,
                };
                module_mul.record(ok, || format!("e{i}*e{j} on {label}"));
            }
        }
        let ok = (|| {
            let id = identity(o).ok()?;
            let zero = zero_morphism(o, o).ok()?;
            let (k_id, _) = kernel_obj(&id).ok()?;
            let (c_id, _) = cokernel_obj(&id).ok()?;
            let (k_zero, incl) = kernel_obj(&zero).ok()?;
            let (c_zero, proj) = cokernel_obj(&zero).ok()?;
            let graph_ok = interpret(id.graph_cert(), rep).ok()? == id.graph();
            Some(
                k_id.is_zero()
                    && c_id.is_zero()
                    && k_zero == *o
                    && c_zero == *o
                    && incl.map() == &Matrix::identity(o.qdim())
                    && proj.map() == &Matrix::identity(o.qdim())
                    && graph_ok,
            )
        })();
        abelian.record(ok == Some(true), || label.clone());
    }
    vec![reflexive, unit, commute, closure, natural, module_unit, module_mul, abelian]
}
