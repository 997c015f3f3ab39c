//! Recursive-descent parser for the formula language.
//!
//! ```text
//! formula  := "exists" bindings "." conj | conj
//! bindings := var ":" sort { "," var ":" sort }
//! conj     := eq { "&" eq }
//! eq       := expr "=" expr
//! expr     := mono { ("+"|"-") mono }
//! mono     := [ rational "*" ] app | rational
//! app      := var | edge "(" app ")"
//! rational := integer [ "/" positive-integer ]
//! ```
//!
//! A leading `-` on an expression is also accepted. The only constant a
//! linear equation may contain is `0`.

use crate::quiver::{EdgeId, Quiver, VertexId};
use crate::rational::Rational;

use super::{Equation, FormulaError, RegularFormula, Term};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(String),
    Sym(char),
    End,
}

struct Lexer<'a> {
    src: &'a str,
    toks: Vec<(Tok, usize)>,
}

impl<'a> Lexer<'a> {
    fn run(src: &'a str) -> Result<Vec<(Tok, usize)>, FormulaError> {
        let mut lx = Lexer { src, toks: Vec::new() };
        let bytes = src.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i] as char;
            if c.is_ascii_whitespace() {
                i += 1;
            } else if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_' || bytes[i] == b'\'') {
                    i += 1;
                }
                lx.toks.push((Tok::Ident(lx.src[start..i].to_string()), start));
            } else if c.is_ascii_digit() {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                lx.toks.push((Tok::Int(lx.src[start..i].to_string()), start));
            } else if "()+-*/=&:,.".contains(c) {
                lx.toks.push((Tok::Sym(c), i));
                i += 1;
            } else {
                let ch = src[i..].chars().next().unwrap_or('?');
                return Err(FormulaError::Syntax { position: i, message: format!("unexpected character `{ch}`") });
            }
        }
        lx.toks.push((Tok::End, src.len()));
        Ok(lx.toks)
    }
}

/// One parsed monomial `coeff · path(var)` ending at `target`.
struct Mono {
    coeff: Rational,
    var: usize,
    path: Vec<EdgeId>,
    target: VertexId,
    position: usize,
}

struct Parser<'q> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    quiver: &'q Quiver,
    names: Vec<String>,
    sorts: Vec<VertexId>,
}

impl<'q> Parser<'q> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn syntax<T>(&self, message: impl Into<String>) -> Result<T, FormulaError> {
        Err(FormulaError::Syntax { position: self.offset(), message: message.into() })
    }

    fn expect_sym(&mut self, c: char) -> Result<(), FormulaError> {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            Ok(())
        } else {
            self.syntax(format!("expected `{c}`"))
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, usize), FormulaError> {
        match self.bump() {
            (Tok::Ident(s), p) => Ok((s, p)),
            (_, p) => Err(FormulaError::Syntax { position: p, message: format!("expected {what}") }),
        }
    }

    fn sort(&mut self) -> Result<VertexId, FormulaError> {
        let (name, position) = self.ident("a sort name")?;
        self.quiver.vertex_id(&name).ok_or(FormulaError::UnknownSort { name, position })
    }

    fn bindings(&mut self) -> Result<Vec<(String, VertexId, usize)>, FormulaError> {
        let mut out = Vec::new();
        loop {
            let (name, p) = self.ident("a variable name")?;
            self.expect_sym(':')?;
            let s = self.sort()?;
            out.push((name, s, p));
            if *self.peek() == Tok::Sym(',') {
                self.bump();
            } else {
                return Ok(out);
            }
        }
    }

    fn rational(&mut self) -> Result<Rational, FormulaError> {
        let (num, p) = match self.bump() {
            (Tok::Int(s), p) => (s, p),
            (_, p) => return Err(FormulaError::Syntax { position: p, message: "expected a number".into() }),
        };
        let text = if *self.peek() == Tok::Sym('/') {
            self.bump();
            match self.bump() {
                (Tok::Int(d), dp) => {
                    if d.bytes().all(|b| b == b'0') {
                        return Err(FormulaError::Syntax { position: dp, message: "zero denominator".into() });
                    }
                    format!("{num}/{d}")
                }
                (_, dp) => return Err(FormulaError::Syntax { position: dp, message: "expected a denominator".into() }),
            }
        } else {
            num
        };
        text.parse().map_err(|_| FormulaError::Syntax { position: p, message: "invalid number".into() })
    }

    /// `app := var | edge "(" app ")"`; returns (variable, path, end sort).
    fn app(&mut self) -> Result<(usize, Vec<EdgeId>, VertexId), FormulaError> {
        let (name, position) = self.ident("a variable or edge")?;
        if *self.peek() == Tok::Sym('(') {
            self.bump();
            let (var, mut path, at) = self.app()?;
            self.expect_sym(')')?;
            let e = self.quiver.edge_id(&name).ok_or_else(|| FormulaError::UnknownEdge { name: name.clone(), position })?;
            let edge = self.quiver.edge(e);
            if edge.source != at {
                return Err(FormulaError::NonComposablePath {
                    edge: name,
                    found: self.quiver.vertex_name(at).to_string(),
                    position,
                });
            }
            path.push(e);
            Ok((var, path, edge.target))
        } else {
            // Later bindings shadow earlier ones.
            let var = self
                .names
                .iter()
                .rposition(|n| *n == name)
                .ok_or(FormulaError::UnknownVariable { name, position })?;
            Ok((var, Vec::new(), self.sorts[var]))
        }
    }

    /// Returns `None` for the constant `0`.
    fn mono(&mut self, sign: Rational) -> Result<Option<Mono>, FormulaError> {
        let position = self.offset();
        let coeff = if matches!(self.peek(), Tok::Int(_)) {
            let c = self.rational()?;
            if *self.peek() != Tok::Sym('*') {
                if !c.is_zero() {
                    return Err(FormulaError::Syntax { position, message: "the only constant allowed is 0".into() });
                }
                return Ok(None);
            }
            self.bump();
            c
        } else {
            Rational::one()
        };
        let (var, path, target) = self.app()?;
        Ok(Some(Mono { coeff: &coeff * &sign, var, path, target, position }))
    }

    fn expr(&mut self, side: Rational, out: &mut Vec<Mono>) -> Result<(), FormulaError> {
        let mut sign = side.clone();
        if *self.peek() == Tok::Sym('-') {
            self.bump();
            sign = -side.clone();
        }
        loop {
            if let Some(m) = self.mono(sign.clone())? {
                out.push(m);
            }
            match self.peek() {
                Tok::Sym('+') => sign = side.clone(),
                Tok::Sym('-') => sign = -side.clone(),
                _ => return Ok(()),
            }
            self.bump();
        }
    }

    fn equation(&mut self) -> Result<Option<Equation>, FormulaError> {
        let mut monos = Vec::new();
        self.expr(Rational::one(), &mut monos)?;
        self.expect_sym('=')?;
        self.expr(-Rational::one(), &mut monos)?;
        let Some(first) = monos.first() else {
            return Ok(None);
        };
        let target = first.target;
        if let Some(bad) = monos.iter().find(|m| m.target != target) {
            return Err(FormulaError::SortMismatchInEquation {
                first: self.quiver.vertex_name(target).to_string(),
                second: self.quiver.vertex_name(bad.target).to_string(),
                position: bad.position,
            });
        }
        let mut per_var: Vec<Vec<(Rational, Vec<EdgeId>)>> = vec![Vec::new(); self.sorts.len()];
        for m in monos {
            per_var[m.var].push((m.coeff, m.path));
        }
        let entries = per_var
            .into_iter()
            .zip(&self.sorts)
            .map(|(s, &sort)| Term::new(self.quiver, sort, target, s))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Some(Equation::new(target, entries)))
    }

    fn formula(&mut self, context: &[(String, VertexId)]) -> Result<RegularFormula, FormulaError> {
        self.names = context.iter().map(|(n, _)| n.clone()).collect();
        self.sorts = context.iter().map(|(_, s)| *s).collect();
        let mut bound = Vec::new();
        if *self.peek() == Tok::Ident("exists".into()) {
            self.bump();
            for (name, sort, position) in self.bindings()? {
                if self.names.contains(&name) {
                    return Err(FormulaError::Syntax { position, message: format!("variable `{name}` is already declared") });
                }
                self.names.push(name);
                self.sorts.push(sort);
                bound.push(sort);
            }
            self.expect_sym('.')?;
        }
        let mut equations = Vec::new();
        loop {
            if let Some(eq) = self.equation()? {
                equations.push(eq);
            }
            if *self.peek() == Tok::Sym('&') {
                self.bump();
            } else {
                break;
            }
        }
        if *self.peek() != Tok::End {
            return self.syntax("unexpected trailing input");
        }
        RegularFormula::new(context.iter().map(|(_, s)| *s).collect(), bound, equations)
    }
}

/// Parses a context declaration `x:d, y:e` (possibly empty).
pub fn parse_context(text: &str, quiver: &Quiver) -> Result<Vec<(String, VertexId)>, FormulaError> {
    let toks = Lexer::run(text)?;
    let mut p = Parser { toks, pos: 0, quiver, names: Vec::new(), sorts: Vec::new() };
    if *p.peek() == Tok::End {
        return Ok(Vec::new());
    }
    let b = p.bindings()?;
    if *p.peek() != Tok::End {
        return p.syntax("unexpected trailing input");
    }
    let mut seen = std::collections::HashSet::new();
    for (n, _, position) in &b {
        if !seen.insert(n.clone()) {
            return Err(FormulaError::Syntax { position: *position, message: format!("variable `{n}` is declared twice") });
        }
    }
    Ok(b.into_iter().map(|(n, s, _)| (n, s)).collect())
}

/// Parses `text` in an already-resolved context.
pub fn parse_formula_in(text: &str, context: &[(String, VertexId)], quiver: &Quiver) -> Result<RegularFormula, FormulaError> {
    let toks = Lexer::run(text)?;
    let mut p = Parser { toks, pos: 0, quiver, names: Vec::new(), sorts: Vec::new() };
    p.formula(context)
}

/// Parses `text` in the context declared by `context` (`"x:d, y:e"`).
pub fn parse_formula(text: &str, context: &str, quiver: &Quiver) -> Result<RegularFormula, FormulaError> {
    let ctx = parse_context(context, quiver)?;
    parse_formula_in(text, &ctx, quiver)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Quiver {
        Quiver::new(
            ["d", "e"],
            vec![("f", "d", "d"), ("g", "d", "d"), ("h", "d", "d"), ("k", "d", "d"), ("u", "d", "e")],
        )
        .unwrap()
    }

    fn e(q: &Quiver, n: &str) -> EdgeId {
        q.edge_id(n).unwrap()
    }

    #[test]
    fn existential_image_formula() {
        let q = q();
        let f = parse_formula("exists y:d . f(y) = x", "x:d", &q).unwrap();
        assert_eq!(f.bound(), &[VertexId(0)]);
        assert_eq!(f.equations().len(), 1);
        let row = &f.equations()[0];
        assert_eq!(row.entries()[0].summands(), &[(Rational::from(-1), vec![])]);
        assert_eq!(row.entries()[1].summands(), &[(Rational::one(), vec![e(&q, "f")])]);
    }

    #[test]
    fn quantifier_free_kernel_formula() {
        let q = q();
        let f = parse_formula("f(x) = 0", "x:d", &q).unwrap();
        assert!(f.bound().is_empty());
        assert_eq!(f.equations()[0].entries()[0].summands(), &[(Rational::one(), vec![e(&q, "f")])]);
    }

    #[test]
    fn paths_scalars_and_right_hand_side() {
        let q = q();
        let f = parse_formula("f(g(x)) + 2*h(x) = k(y)", "x:d, y:d", &q).unwrap();
        let row = &f.equations()[0];
        assert_eq!(
            row.entries()[0].summands(),
            &[(Rational::from(2), vec![e(&q, "h")]), (Rational::one(), vec![e(&q, "g"), e(&q, "f")])]
        );
        assert_eq!(row.entries()[1].summands(), &[(Rational::from(-1), vec![e(&q, "k")])]);
    }

    #[test]
    fn fractions_and_conjunctions() {
        let q = q();
        let f = parse_formula("1/2*f(x) = 0 & x - g(x) = 0", "x:d", &q).unwrap();
        assert_eq!(f.equations().len(), 2);
        assert_eq!(f.equations()[0].entries()[0].summands()[0].0, Rational::new(1, 2));
    }

    #[test]
    fn errors_carry_positions() {
        let q = q();
        assert_eq!(
            parse_formula("f(x) = = 0", "x:d", &q),
            Err(FormulaError::Syntax { position: 7, message: "expected a variable or edge".into() })
        );
        assert_eq!(
            parse_formula("zz(x) = 0", "x:d", &q),
            Err(FormulaError::UnknownEdge { name: "zz".into(), position: 0 })
        );
        assert_eq!(parse_formula("x = 0", "x:nope", &q), Err(FormulaError::UnknownSort { name: "nope".into(), position: 2 }));
        assert_eq!(
            parse_formula("x = w", "x:d", &q),
            Err(FormulaError::UnknownVariable { name: "w".into(), position: 4 })
        );
        assert!(matches!(parse_formula("f(u(x)) = 0", "x:d", &q), Err(FormulaError::NonComposablePath { position: 0, .. })));
        assert!(matches!(
            parse_formula("u(x) = x", "x:d", &q),
            Err(FormulaError::SortMismatchInEquation { position: 7, .. })
        ));
        assert!(matches!(parse_formula("x = 1", "x:d", &q), Err(FormulaError::Syntax { .. })));
        assert!(matches!(parse_formula("x = 0 )", "x:d", &q), Err(FormulaError::Syntax { position: 6, .. })));
        assert!(matches!(parse_formula("x = 0", "x:d, x:d", &q), Err(FormulaError::Syntax { .. })));
        assert!(matches!(parse_formula("x = 1/0*x", "x:d", &q), Err(FormulaError::Syntax { .. })));
    }

    #[test]
    fn zero_equals_zero_is_top() {
        let q = q();
        let f = parse_formula("0 = 0", "x:d", &q).unwrap();
        assert_eq!(f, RegularFormula::top(vec![VertexId(0)]));
    }
}
