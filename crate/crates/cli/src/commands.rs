use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use repcat::category::{
    biproduct, cokernel_obj, hom_space, kernel_obj, make_morphism, make_object, CategoryError, DefinableObject,
    Functionality,
};
use repcat::endo::compute_end;
use repcat::formula::{print_formula, print_sequent, RegularFormula, Sequent};
use repcat::interp::{check_sequent, compare_theories, interpret, Budget, Side, Verdict};
use repcat::{Matrix, Rational, Representation, Subdiagram, Subspace};
use serde_json::{json, Value};

use crate::session::{NamedFormula, Session};
use crate::verify::{verify_session, verify_budget};
use crate::{ArrowArgs, CatCommand, CliError, Command, Report, EXIT_BREACH, EXIT_FALSE, EXIT_OK};

pub fn load_session(path: &Path) -> Result<Session, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })?;
    Session::parse(&text).map_err(|source| CliError::Session { path: path.display().to_string(), source })
}

fn rep<'s>(s: &'s Session, name: &str) -> Result<&'s Arc<Representation>, CliError> {
    s.rep(name).ok_or_else(|| CliError::UnknownName { kind: "representation", name: name.to_string() })
}

fn formula<'s>(s: &'s Session, name: &str) -> Result<&'s NamedFormula, CliError> {
    s.formula(name).ok_or_else(|| CliError::UnknownName { kind: "formula", name: name.to_string() })
}

pub fn rational_json(x: &Rational) -> Value {
    Value::String(x.to_string())
}

pub fn vector_json(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rational_json).collect())
}

pub fn matrix_json(m: &Matrix) -> Value {
    Value::Array(m.row_iter().map(vector_json).collect())
}

pub fn subspace_json(s: &Subspace) -> Value {
    matrix_json(s.basis())
}

fn names(f: &NamedFormula) -> Vec<String> {
    f.context.iter().map(|(n, _)| n.clone()).collect()
}

fn canonical(s: &Session, f: &NamedFormula) -> String {
    print_formula(&f.formula, &s.quiver, Some(&names(f)))
}

/// Output of one command before it is wrapped into a [`Report`].
struct Outcome {
    result: Value,
    text: Vec<String>,
    exit: i32,
    budget: Option<Budget>,
}

impl Outcome {
    fn new(result: Value, text: Vec<String>, exit: i32) -> Self {
        Outcome { result, text, exit, budget: None }
    }
}

pub fn execute(cmd: &Command) -> Result<Report, CliError> {
    let common = cmd.common();
    let start = Instant::now();
    let session = load_session(&common.session)?;
    let mut args = BTreeMap::new();
    let file = common.session.file_name().map_or_else(String::new, |n| n.to_string_lossy().into_owned());
    args.insert("session".to_string(), json!(file));
    let (name, out) = match cmd {
        Command::Interp { rep: r, formula: f, .. } => {
            args.insert("rep".into(), json!(r));
            args.insert("formula".into(), json!(f));
            ("interp", cmd_interp(&session, r, f)?)
        }
        Command::Check { rep: r, lhs, rhs, .. } => {
            args.insert("rep".into(), json!(r));
            args.insert("lhs".into(), json!(lhs));
            args.insert("rhs".into(), json!(rhs));
            ("check", cmd_check(&session, r, lhs, rhs)?)
        }
        Command::Compare { rep: reps, budget, .. } => {
            args.insert("rep".into(), json!(reps));
            let b = budget.apply(Budget::default())?;
            ("compare", cmd_compare(&session, &reps[0], &reps[1], b)?)
        }
        Command::End { rep: r, vertices, .. } => {
            args.insert("rep".into(), json!(r));
            if let Some(v) = vertices {
                args.insert("vertices".into(), json!(v));
            }
            ("end", cmd_end(&session, r, vertices.as_deref())?)
        }
        Command::Verify { budget, .. } => {
            let b = budget.apply(verify_budget())?;
            ("verify", cmd_verify(&session, b)?)
        }
        Command::Cat { command } => match command {
            CatCommand::Object { rep: r, obj, .. } => {
                args.insert("rep".into(), json!(r));
                args.insert("obj".into(), json!(obj));
                ("cat object", cmd_object(&session, r, obj)?)
            }
            CatCommand::Morphism { arrow, .. } => {
                echo_arrow(&mut args, arrow);
                ("cat morphism", cmd_arrow(&session, arrow, ArrowOp::Morphism)?)
            }
            CatCommand::Kernel { arrow, .. } => {
                echo_arrow(&mut args, arrow);
                ("cat kernel", cmd_arrow(&session, arrow, ArrowOp::Kernel)?)
            }
            CatCommand::Cokernel { arrow, .. } => {
                echo_arrow(&mut args, arrow);
                ("cat cokernel", cmd_arrow(&session, arrow, ArrowOp::Cokernel)?)
            }
            CatCommand::Biproduct { rep: r, obj, .. } => {
                args.insert("rep".into(), json!(r));
                args.insert("obj".into(), json!(obj));
                ("cat biproduct", cmd_biproduct(&session, r, &obj[0], &obj[1])?)
            }
            CatCommand::Hom { rep: r, dom, cod, budget, .. } => {
                args.insert("rep".into(), json!(r));
                args.insert("dom".into(), json!(dom));
                args.insert("cod".into(), json!(cod));
                let b = budget.apply(Budget { max_bound_vars: 1, max_eqs: 1, ..Budget::default() })?;
                ("cat hom", cmd_hom(&session, r, dom, cod, b)?)
            }
        },
    };
    let elapsed = start.elapsed().as_secs_f64() * 1000.0;
    Ok(Report {
        command: name.to_string(),
        arguments: args,
        session_sha256: session.sha256.clone(),
        budget: out.budget,
        result: out.result,
        exit_code: out.exit,
        timing_ms: (elapsed * 1000.0).round() / 1000.0,
        text: out.text,
    })
}

fn echo_arrow(args: &mut BTreeMap<String, Value>, a: &ArrowArgs) {
    args.insert("rep".into(), json!(a.rep));
    args.insert("dom".into(), json!(a.dom));
    args.insert("cod".into(), json!(a.cod));
    args.insert("theta".into(), json!(a.theta));
}

fn interp_err(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

fn cmd_interp(s: &Session, r: &str, f: &str) -> Result<Outcome, CliError> {
    let rep = rep(s, r)?;
    let nf = formula(s, f)?;
    let sub = interpret(&nf.formula, rep).map_err(interp_err)?;
    let ctx: Vec<String> = nf.context.iter().map(|(n, v)| format!("{n}:{}", s.quiver.vertex_name(*v))).collect();
    let text = vec![
        format!("[{}] {}", ctx.join(", "), canonical(s, nf)),
        format!("ambient dim {}, subspace dim {}", sub.ambient_dim(), sub.dim()),
        format!("basis {}", sub.basis()),
    ];
    let result = json!({
        "formula": canonical(s, nf),
        "context": ctx.join(", "),
        "ambient_dim": sub.ambient_dim(),
        "dim": sub.dim(),
        "basis": subspace_json(&sub),
    });
    Ok(Outcome::new(result, text, EXIT_OK))
}

fn cmd_check(s: &Session, r: &str, lhs: &str, rhs: &str) -> Result<Outcome, CliError> {
    let rep = rep(s, r)?;
    let (l, rr) = (formula(s, lhs)?, formula(s, rhs)?);
    let seq = Sequent::new(l.formula.clone(), rr.formula.clone())
        .map_err(|_| CliError::Input(format!("`{lhs}` and `{rhs}` have different contexts")))?;
    let valid = check_sequent(&seq, rep).map_err(interp_err)?;
    let printed = print_sequent(&seq, &s.quiver);
    let mut result = json!({ "sequent": printed, "valid": valid });
    let mut text = vec![printed, format!("valid: {valid}")];
    if !valid {
        let (a, b) = (interpret(&l.formula, rep).map_err(interp_err)?, interpret(&rr.formula, rep).map_err(interp_err)?);
        let v = a.basis().row_iter().find(|v| !b.contains_vector(v)).expect("lhs is not contained in rhs");
        result["counterexample"] = vector_json(v);
        text.push(format!("counterexample {}", Matrix::from_rows(v.len(), vec![v.to_vec()]).expect("one row")));
    }
    Ok(Outcome::new(result, text, if valid { EXIT_OK } else { EXIT_FALSE }))
}

fn cmd_compare(s: &Session, a: &str, b: &str, budget: Budget) -> Result<Outcome, CliError> {
    let (ra, rb) = (rep(s, a)?, rep(s, b)?);
    let report = compare_theories(ra, rb, &budget).map_err(interp_err)?;
    let verdict = match report.verdict {
        Verdict::Equal => "equal",
        Verdict::Unequal => "unequal",
    };
    let mut result = json!({
        "verdict": verdict,
        "formulas": report.formulas,
        "distinct": report.distinct,
    });
    let mut text = vec![
        format!("{a} vs {b}: {verdict} within budget"),
        format!("{} formulas examined, {} distinct interpretation pairs", report.formulas, report.distinct),
    ];
    if let Some(w) = &report.witness {
        let seq = print_sequent(&w.sequent, &s.quiver);
        let holds = match w.holds_in {
            Side::A => a,
            Side::B => b,
        };
        result["witness"] = json!({ "sequent": seq, "holds_in": holds });
        text.push(format!("witness: {seq}  (holds in {holds} only)"));
    }
    let exit = if report.verdict == Verdict::Equal { EXIT_OK } else { EXIT_FALSE };
    Ok(Outcome { result, text, exit, budget: Some(budget) })
}

fn cmd_end(s: &Session, r: &str, vertices: Option<&str>) -> Result<Outcome, CliError> {
    let rep = rep(s, r)?;
    let sub = match vertices {
        None => Subdiagram::whole(&s.quiver),
        Some(list) => {
            let mut ids = Vec::new();
            for n in list.split(',').map(str::trim).filter(|n| !n.is_empty()) {
                ids.push(s.quiver.vertex_id(n).ok_or_else(|| CliError::UnknownName { kind: "vertex", name: n.into() })?);
            }
            Subdiagram::full(&s.quiver, ids).map_err(interp_err)?
        }
    };
    let alg = compute_end(rep, &sub);
    let vnames: Vec<&str> = sub.vertices().iter().map(|&v| s.quiver.vertex_name(v)).collect();
    let basis = alg.basis();
    if let Some(bad) = basis.iter().position(|e| !e.commutes_with(rep, &sub)) {
        return Err(CliError::Invariant(format!("basis element {bad} does not commute with the edge maps")));
    }
    let basis_json: Vec<Value> = basis
        .iter()
        .map(|e| {
            let m: serde_json::Map<String, Value> =
                vnames.iter().zip(e.blocks()).map(|(n, b)| (n.to_string(), matrix_json(b))).collect();
            Value::Object(m)
        })
        .collect();
    let mut text = vec![format!("End over {{{}}}: dim {}", vnames.join(", "), alg.dim())];
    for (i, e) in basis.iter().enumerate() {
        let blocks: Vec<String> = vnames.iter().zip(e.blocks()).map(|(n, b)| format!("{n}: {b}")).collect();
        text.push(format!("  e{i} = {}", blocks.join("  ")));
    }
    let result = json!({
        "vertices": vnames,
        "dims": alg.dims(),
        "dim": alg.dim(),
        "basis": basis_json,
    });
    Ok(Outcome::new(result, text, EXIT_OK))
}

fn cmd_verify(s: &Session, budget: Budget) -> Result<Outcome, CliError> {
    let checks = verify_session(s, &budget);
    let failed: Vec<&crate::verify::Check> = checks.iter().filter(|c| c.failed > 0).collect();
    let mut text: Vec<String> = checks
        .iter()
        .map(|c| format!("{:<6} {} ({} passed, {} failed)", if c.failed == 0 { "ok" } else { "FAIL" }, c.name, c.passed, c.failed))
        .collect();
    for c in &failed {
        if let Some(f) = &c.first_failure {
            text.push(format!("first failure in {}: {f}", c.name));
        }
    }
    let result = json!({ "checks": checks, "failures": failed.len() });
    let exit = if failed.is_empty() { EXIT_OK } else { EXIT_BREACH };
    Ok(Outcome { result, text, exit, budget: Some(budget) })
}

/// `PHI/PSI` or `PHI` (meaning `PHI/0`).
fn parse_object<'s>(s: &'s Session, obj: &str) -> Result<(&'s NamedFormula, Option<&'s NamedFormula>), CliError> {
    match obj.split_once('/') {
        Some((k, kp)) => Ok((formula(s, k.trim())?, Some(formula(s, kp.trim())?))),
        None => Ok((formula(s, obj.trim())?, None)),
    }
}

fn object_formulas(s: &Session, obj: &str) -> Result<(RegularFormula, RegularFormula), CliError> {
    let (k, kp) = parse_object(s, obj)?;
    let psi = match kp {
        Some(f) => f.formula.clone(),
        None => RegularFormula::zero(k.formula.context().to_vec()),
    };
    Ok((k.formula.clone(), psi))
}

fn build_object(s: &Session, rep: &Arc<Representation>, obj: &str) -> Result<DefinableObject, CliError> {
    let (phi, psi) = object_formulas(s, obj)?;
    make_object(&phi, &psi, rep).map_err(|e| match e {
        CategoryError::NotASubobject => CliError::Input(format!("`{obj}` is not an object: K' is not contained in K")),
        CategoryError::ContextMismatch => CliError::Input(format!("`{obj}`: the two formulas have different contexts")),
        other => CliError::Input(other.to_string()),
    })
}

fn object_json(o: &DefinableObject) -> Value {
    json!({
        "ambient_dim": o.ambient_dim(),
        "k_dim": o.k().dim(),
        "k_prime_dim": o.k_prime().dim(),
        "dim": o.qdim(),
        "k": subspace_json(o.k()),
        "k_prime": subspace_json(o.k_prime()),
        "quotient_basis": matrix_json(o.quotient().complement()),
    })
}

fn object_line(label: &str, o: &DefinableObject) -> String {
    format!("{label}: dim {} (K {} / K' {} in ambient {})", o.qdim(), o.k().dim(), o.k_prime().dim(), o.ambient_dim())
}

fn cmd_object(s: &Session, r: &str, obj: &str) -> Result<Outcome, CliError> {
    let rep = rep(s, r)?;
    let (phi, psi) = object_formulas(s, obj)?;
    match make_object(&phi, &psi, rep) {
        Ok(o) => {
            let text = vec![object_line("object", &o), format!("quotient basis {}", o.quotient().complement())];
            Ok(Outcome::new(json!({ "object": object_json(&o) }), text, EXIT_OK))
        }
        Err(CategoryError::NotASubobject) => Ok(Outcome::new(
            json!({ "object": Value::Null, "reason": "K' is not contained in K" }),
            vec!["not an object: K' is not contained in K".into()],
            EXIT_FALSE,
        )),
        Err(CategoryError::ContextMismatch) => {
            Err(CliError::Input(format!("`{obj}`: the two formulas have different contexts")))
        }
        Err(e) => Err(CliError::Input(e.to_string())),
    }
}

#[derive(Clone, Copy)]
enum ArrowOp {
    Morphism,
    Kernel,
    Cokernel,
}

fn cmd_arrow(s: &Session, a: &ArrowArgs, op: ArrowOp) -> Result<Outcome, CliError> {
    let rep = rep(s, &a.rep)?;
    let dom = build_object(s, rep, &a.dom)?;
    let cod = build_object(s, rep, &a.cod)?;
    let theta = formula(s, &a.theta)?;
    let f = match make_morphism(&dom, &cod, &theta.formula) {
        Ok(f) => f,
        Err(CategoryError::NotFunctional(which)) => {
            let cond = match which {
                Functionality::Totality => "totality",
                Functionality::SingleValued => "single-valuedness",
            };
            return Ok(Outcome::new(
                json!({ "functional": false, "failed": cond }),
                vec![format!("`{}` is not functional: {cond} fails", a.theta)],
                EXIT_FALSE,
            ));
        }
        Err(CategoryError::ContextMismatch) => {
            return Err(CliError::Input(format!("`{}` must have the context of dom followed by cod", a.theta)))
        }
        Err(e) => return Err(CliError::Input(e.to_string())),
    };
    let mut result = json!({
        "functional": true,
        "dom": object_json(&dom),
        "cod": object_json(&cod),
        "map": matrix_json(f.map()),
        "rank": f.rank(),
    });
    let mut text = vec![
        object_line("dom", &dom),
        object_line("cod", &cod),
        format!("map {} (rank {})", f.map(), f.rank()),
    ];
    let breach = |e: CategoryError| CliError::Invariant(e.to_string());
    match op {
        ArrowOp::Morphism => {}
        ArrowOp::Kernel => {
            let (k, incl) = kernel_obj(&f).map_err(breach)?;
            text.push(object_line("kernel", &k));
            text.push(format!("inclusion {}", incl.map()));
            result["kernel"] = object_json(&k);
            result["inclusion"] = matrix_json(incl.map());
        }
        ArrowOp::Cokernel => {
            let (c, proj) = cokernel_obj(&f).map_err(breach)?;
            text.push(object_line("cokernel", &c));
            text.push(format!("projection {}", proj.map()));
            result["cokernel"] = object_json(&c);
            result["projection"] = matrix_json(proj.map());
        }
    }
    Ok(Outcome::new(result, text, EXIT_OK))
}

fn cmd_biproduct(s: &Session, r: &str, a: &str, b: &str) -> Result<Outcome, CliError> {
    let rep = rep(s, r)?;
    let (oa, ob) = (build_object(s, rep, a)?, build_object(s, rep, b)?);
    let bp = biproduct(&oa, &ob).map_err(|e| CliError::Invariant(e.to_string()))?;
    let text = vec![
        object_line("sum", &bp.object),
        format!("injections {} {}", bp.inj[0].map(), bp.inj[1].map()),
        format!("projections {} {}", bp.proj[0].map(), bp.proj[1].map()),
    ];
    let result = json!({
        "object": object_json(&bp.object),
        "injections": [matrix_json(bp.inj[0].map()), matrix_json(bp.inj[1].map())],
        "projections": [matrix_json(bp.proj[0].map()), matrix_json(bp.proj[1].map())],
    });
    Ok(Outcome::new(result, text, EXIT_OK))
}

fn cmd_hom(s: &Session, r: &str, dom: &str, cod: &str, budget: Budget) -> Result<Outcome, CliError> {
    let rep = rep(s, r)?;
    let (d, c) = (build_object(s, rep, dom)?, build_object(s, rep, cod)?);
    let h = hom_space(&d, &c, &budget).map_err(|e| CliError::Invariant(e.to_string()))?;
    let mut text = vec![format!(
        "hom({dom}, {cod}): {} independent morphisms found from {} formulas{}",
        h.dim(),
        h.examined,
        if h.exhausted { ", spanning all linear maps" } else { "" }
    )];
    for (i, m) in h.basis.iter().enumerate() {
        text.push(format!("  m{i} = {}", m.map()));
    }
    let result = json!({
        "dim": h.dim(),
        "examined": h.examined,
        "exhausted": h.exhausted,
        "basis": h.basis.iter().map(|m| matrix_json(m.map())).collect::<Vec<_>>(),
    });
    Ok(Outcome { result, text, exit: EXIT_OK, budget: Some(budget) })
}
