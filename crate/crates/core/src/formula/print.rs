//! Canonical printer; its output parses back to the same normal form.

use std::fmt::Write;

use crate::quiver::Quiver;

use super::{RegularFormula, Sequent, Term};

fn app(quiver: &Quiver, path: &[crate::quiver::EdgeId], var: &str) -> String {
    let mut s = var.to_string();
    for &e in path {
        s = format!("{}({s})", quiver.edge(e).name);
    }
    s
}

/// Appends the summands of `t` applied to `var`; `first` tracks whether
/// anything has been written to the expression yet.
fn push_summands(out: &mut String, quiver: &Quiver, t: &Term, var: &str, first: &mut bool) {
    for (c, p) in t.summands() {
        let neg = c.is_negative();
        let mag = c.abs();
        match (*first, neg) {
            (true, false) => {}
            (true, true) => out.push('-'),
            (false, false) => out.push_str(" + "),
            (false, true) => out.push_str(" - "),
        }
        if !mag.is_one() {
            let _ = write!(out, "{mag}*");
        }
        out.push_str(&app(quiver, p, var));
        *first = false;
    }
}

/// `t` applied to a variable named `var`, e.g. `f(g(x)) + 2*h(x)`.
pub fn print_term(t: &Term, quiver: &Quiver, var: &str) -> String {
    let mut out = String::new();
    let mut first = true;
    push_summands(&mut out, quiver, t, var, &mut first);
    if first {
        out.push('0');
    }
    out
}

fn default_names(f: &RegularFormula, context_names: Option<&[String]>) -> (Vec<String>, Vec<String>) {
    let ctx: Vec<String> = match context_names {
        Some(n) => n.to_vec(),
        None => (0..f.context().len()).map(|i| format!("x{i}")).collect(),
    };
    let mut bound = Vec::with_capacity(f.bound().len());
    let mut k = 0;
    while bound.len() < f.bound().len() {
        let name = format!("y{k}");
        if !ctx.contains(&name) {
            bound.push(name);
        }
        k += 1;
    }
    (ctx, bound)
}

/// Prints `f` in the formula language. Context variables are named by
/// `context_names` (default `x0, x1, …`), bound ones `y0, y1, …`.
pub fn print_formula(f: &RegularFormula, quiver: &Quiver, context_names: Option<&[String]>) -> String {
    let (ctx, bound) = default_names(f, context_names);
    let mut out = String::new();
    if !bound.is_empty() {
        out.push_str("exists ");
        let decls: Vec<String> =
            bound.iter().zip(f.bound()).map(|(n, &s)| format!("{n}:{}", quiver.vertex_name(s))).collect();
        out.push_str(&decls.join(", "));
        out.push_str(" . ");
    }
    if f.equations().is_empty() {
        out.push_str("0 = 0");
        return out;
    }
    let names: Vec<&String> = ctx.iter().chain(&bound).collect();
    for (i, eq) in f.equations().iter().enumerate() {
        if i > 0 {
            out.push_str(" & ");
        }
        let mut first = true;
        for (t, n) in eq.entries().iter().zip(&names) {
            push_summands(&mut out, quiver, t, n, &mut first);
        }
        if first {
            out.push('0');
        }
        out.push_str(" = 0");
    }
    out
}

/// `x0:d, x1:e`-style declaration of a context.
pub fn print_context(context: &[crate::quiver::VertexId], quiver: &Quiver) -> String {
    context
        .iter()
        .enumerate()
        .map(|(i, &s)| format!("x{i}:{}", quiver.vertex_name(s)))
        .collect::<Vec<_>>()
        .join(", ")
}

/// `[x0:d] lhs |- rhs`.
pub fn print_sequent(s: &Sequent, quiver: &Quiver) -> String {
    format!(
        "[{}] {} |- {}",
        print_context(s.context(), quiver),
        print_formula(s.lhs(), quiver, None),
        print_formula(s.rhs(), quiver, None)
    )
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::super::{parse_formula, parse_formula_in, Equation};
    use super::*;
    use crate::quiver::{EdgeId, VertexId};
    use crate::rational::Rational;

    fn q() -> Quiver {
        Quiver::new(["d", "e"], vec![("f", "d", "d"), ("g", "d", "e"), ("h", "e", "d")]).unwrap()
    }

    #[test]
    fn prints_canonical_text() {
        let q = q();
        let f = parse_formula("exists y:d . f(y) = x & 2*g(f(x)) - 1/3*g(x) = 0", "x:d", &q).unwrap();
        assert_eq!(print_formula(&f, &q, None), "exists y0:d . -x0 + f(y0) = 0 & -1/3*g(x0) + 2*g(f(x0)) = 0");
        assert_eq!(print_formula(&RegularFormula::top(vec![VertexId(0)]), &q, None), "0 = 0");
        let named = print_formula(&f, &q, Some(&["y0".to_string()]));
        assert!(named.starts_with("exists y1:d . -y0 + f(y1)"));
    }

    #[test]
    fn prints_terms_and_sequents() {
        let q = q();
        let d = VertexId(0);
        assert_eq!(print_term(&Term::zero(d, d), &q, "x"), "0");
        let t = Term::new(&q, d, d, vec![(Rational::from(-2), vec![EdgeId(1), EdgeId(2)])]).unwrap();
        assert_eq!(print_term(&t, &q, "x"), "-2*h(g(x))");
        let lhs = parse_formula("f(x) = 0", "x:d", &q).unwrap();
        let rhs = parse_formula("exists y:d . f(y) = x", "x:d", &q).unwrap();
        let s = Sequent::new(lhs, rhs).unwrap();
        assert_eq!(print_sequent(&s, &q), "[x0:d] f(x0) = 0 |- exists y0:d . -x0 + f(y0) = 0");
    }

    fn arb_term(source: usize, target: usize) -> impl Strategy<Value = Term> {
        // Paths in `q()` of length ≤ 3 from `source` to `target`.
        let q = q();
        let mut paths: Vec<Vec<EdgeId>> = vec![vec![]];
        let mut frontier: Vec<Vec<EdgeId>> = vec![vec![]];
        for _ in 0..3 {
            let mut next = Vec::new();
            for p in &frontier {
                let at = p.last().map_or(VertexId(source), |e| q.edge(*e).target);
                for e in q.out_edges(at) {
                    let mut p2 = p.clone();
                    p2.push(e);
                    next.push(p2);
                }
            }
            paths.extend(next.iter().cloned());
            frontier = next;
        }
        let paths: Vec<Vec<EdgeId>> = paths
            .into_iter()
            .filter(|p| p.last().map_or(VertexId(source), |e| q.edge(*e).target) == VertexId(target))
            .collect();
        prop::collection::vec((-4i64..5, 1i64..4, prop::sample::select(paths)), 0..4).prop_map(move |s| {
            let summands = s.into_iter().map(|(n, d, p)| (Rational::new(n, d), p)).collect();
            Term::new(&q, VertexId(source), VertexId(target), summands).unwrap()
        })
    }

    fn arb_formula() -> impl Strategy<Value = RegularFormula> {
        let sorts = || prop::collection::vec(0usize..2, 0..3);
        (sorts(), sorts()).prop_flat_map(|(ctx, bound)| {
            let all: Vec<usize> = ctx.iter().chain(&bound).copied().collect();
            let row = (0usize..2).prop_flat_map(move |t| {
                let entries: Vec<_> = all.iter().map(|&s| arb_term(s, t)).collect();
                entries.prop_map(move |e| Equation::new(VertexId(t), e))
            });
            prop::collection::vec(row, 0..3).prop_map(move |eqs| {
                let v = |xs: &[usize]| xs.iter().map(|&s| VertexId(s)).collect::<Vec<_>>();
                RegularFormula::new(v(&ctx), v(&bound), eqs).unwrap().normalize()
            })
        })
    }

    proptest! {
        #[test]
        fn parse_inverts_print(f in arb_formula()) {
            let q = q();
            let ctx: Vec<(String, VertexId)> =
                f.context().iter().enumerate().map(|(i, &s)| (format!("x{i}"), s)).collect();
            let text = print_formula(&f, &q, None);
            let back = parse_formula_in(&text, &ctx, &q).unwrap();
            prop_assert_eq!(back, f);
        }
    }
}
