//! Terms and regular formulas over the language of a quiver.
//!
//! Formulas are kept in the existential-conjunctive normal form
//! `∃ y⃗ . (row_1 ∧ … ∧ row_k)` where each row is a homogeneous linear
//! equation `Σ_j t_j(v_j) = 0` over the context and bound variables `v_j`.
//! An atomic equation `s = t` is stored as `s − t = 0`.

mod builder;
mod parser;
mod print;

use std::collections::BTreeMap;

use crate::linalg::Matrix;
use crate::quiver::{EdgeId, Quiver, Representation, VertexId};
use crate::rational::Rational;

pub use builder::{FormulaBuilder, Var};
pub use parser::{parse_context, parse_formula, parse_formula_in};
pub use print::{print_context, print_formula, print_sequent, print_term};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormulaError {
    #[error("syntax error at offset {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown sort `{name}` at offset {position}")]
    UnknownSort { name: String, position: usize },
    #[error("unknown edge `{name}` at offset {position}")]
    UnknownEdge { name: String, position: usize },
    #[error("unknown variable `{name}` at offset {position}")]
    UnknownVariable { name: String, position: usize },
    #[error("edge `{edge}` cannot be applied to a term of sort `{found}` (offset {position})")]
    NonComposablePath { edge: String, found: String, position: usize },
    #[error("terms of sorts `{first}` and `{second}` in one equation (offset {position})")]
    SortMismatchInEquation { first: String, second: String, position: usize },
    #[error("malformed formula: {0}")]
    Malformed(String),
    #[error("edge `{edge}` has a matrix of the wrong shape")]
    ShapeMismatch { edge: String },
    #[error("formula contexts differ")]
    ContextMismatch,
}

/// A composable list of edges in application order: `[g, f]` is `f ∘ g`.
pub type Path = Vec<EdgeId>;

/// A rational linear combination of parallel paths `source → target`.
///
/// Summands are kept collected: sorted by path (shorter first), one per
/// path, none with a zero coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    source: VertexId,
    target: VertexId,
    summands: Vec<(Rational, Path)>,
}

impl Term {
    pub fn zero(source: VertexId, target: VertexId) -> Self {
        Term { source, target, summands: Vec::new() }
    }

    pub fn identity(sort: VertexId) -> Self {
        Term { source: sort, target: sort, summands: vec![(Rational::one(), Vec::new())] }
    }

    /// Checks composability against `quiver` and collects the summands.
    pub fn new(
        quiver: &Quiver,
        source: VertexId,
        target: VertexId,
        summands: Vec<(Rational, Path)>,
    ) -> Result<Self, FormulaError> {
        for (_, p) in &summands {
            check_path(quiver, source, target, p)?;
        }
        Ok(Self::collect(source, target, summands))
    }

    fn collect(source: VertexId, target: VertexId, summands: Vec<(Rational, Path)>) -> Self {
        let mut acc: BTreeMap<(usize, Path), Rational> = BTreeMap::new();
        for (c, p) in summands {
            *acc.entry((p.len(), p)).or_insert_with(Rational::zero) += c;
        }
        let summands = acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|((_, p), c)| (c, p)).collect();
        Term { source, target, summands }
    }

    pub fn monomial(quiver: &Quiver, coeff: Rational, source: VertexId, path: Path) -> Result<Self, FormulaError> {
        let target = path.last().map_or(source, |e| quiver.edge(*e).target);
        Self::new(quiver, source, target, vec![(coeff, path)])
    }

    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn target(&self) -> VertexId {
        self.target
    }

    pub fn summands(&self) -> &[(Rational, Path)] {
        &self.summands
    }

    pub fn is_zero(&self) -> bool {
        self.summands.is_empty()
    }

    pub fn scale(&self, c: &Rational) -> Term {
        Self::collect(self.source, self.target, self.summands.iter().map(|(a, p)| (a * c, p.clone())).collect())
    }

    /// `self + other`; both must be parallel.
    pub fn plus(&self, other: &Term) -> Result<Term, FormulaError> {
        if (self.source, self.target) != (other.source, other.target) {
            return Err(FormulaError::Malformed("adding non-parallel terms".into()));
        }
        let mut s = self.summands.clone();
        s.extend(other.summands.iter().cloned());
        Ok(Self::collect(self.source, self.target, s))
    }

    /// `outer ∘ self`.
    pub fn then(&self, outer: &Term) -> Result<Term, FormulaError> {
        if self.target != outer.source {
            return Err(FormulaError::Malformed("composing non-composable terms".into()));
        }
        let mut s = Vec::new();
        for (a, p) in &self.summands {
            for (b, q) in &outer.summands {
                let mut path = p.clone();
                path.extend(q.iter().copied());
                s.push((a * b, path));
            }
        }
        Ok(Self::collect(self.source, outer.target, s))
    }

    fn normalized(&self) -> Term {
        Self::collect(self.source, self.target, self.summands.clone())
    }
}

fn check_path(quiver: &Quiver, source: VertexId, target: VertexId, path: &Path) -> Result<(), FormulaError> {
    let mut at = source;
    for &e in path {
        if e.0 >= quiver.edge_count() {
            return Err(FormulaError::Malformed(format!("edge #{} does not exist", e.0)));
        }
        let edge = quiver.edge(e);
        if edge.source != at {
            return Err(FormulaError::NonComposablePath {
                edge: edge.name.clone(),
                found: quiver.vertex_name(at).to_string(),
                position: 0,
            });
        }
        at = edge.target;
    }
    if at != target {
        return Err(FormulaError::Malformed(format!(
            "path ends at `{}`, expected `{}`",
            quiver.vertex_name(at),
            quiver.vertex_name(target)
        )));
    }
    Ok(())
}

/// `Σ c · T(e_k)···T(e_1)` over the summands of `t`.
pub fn term_matrix(t: &Term, rep: &Representation) -> Result<Matrix, FormulaError> {
    let q = rep.quiver();
    let dim = |v: VertexId| rep.dims().get(v.0).copied().ok_or(FormulaError::Malformed("sort out of range".into()));
    let (rows, cols) = (dim(t.target)?, dim(t.source)?);
    let mut out = Matrix::zeros(rows, cols);
    for (c, path) in &t.summands {
        let mut m = Matrix::identity(cols);
        for &e in path {
            let edge = q.edge(e);
            let te = rep.map(e);
            if te.rows() != dim(edge.target)? || te.cols() != dim(edge.source)? {
                return Err(FormulaError::ShapeMismatch { edge: edge.name.clone() });
            }
            m = te.mul(&m);
        }
        out = out.add(&m.scale(c));
    }
    Ok(out)
}

/// One homogeneous equation `Σ_j entries[j](v_j) = 0`, with one entry per
/// variable of the formula (context first, then bound).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Equation {
    target: VertexId,
    entries: Vec<Term>,
}

impl Equation {
    pub fn new(target: VertexId, entries: Vec<Term>) -> Self {
        Equation { target, entries }
    }

    pub fn target(&self) -> VertexId {
        self.target
    }

    pub fn entries(&self) -> &[Term] {
        &self.entries
    }

    pub fn is_trivial(&self) -> bool {
        self.entries.iter().all(Term::is_zero)
    }
}

/// `{x⃗ . ∃ y⃗ . row_1 ∧ … ∧ row_k}` with positional variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RegularFormula {
    context: Vec<VertexId>,
    bound: Vec<VertexId>,
    equations: Vec<Equation>,
}

impl RegularFormula {
    pub fn new(context: Vec<VertexId>, bound: Vec<VertexId>, equations: Vec<Equation>) -> Result<Self, FormulaError> {
        let f = RegularFormula { context, bound, equations };
        f.check()?;
        Ok(f)
    }

    pub(crate) fn new_unchecked(context: Vec<VertexId>, bound: Vec<VertexId>, equations: Vec<Equation>) -> Self {
        RegularFormula { context, bound, equations }
    }

    /// The formula `⊤` in `context`.
    pub fn top(context: Vec<VertexId>) -> Self {
        RegularFormula { context, bound: Vec::new(), equations: Vec::new() }
    }

    /// `x⃗ = 0` in `context`.
    pub fn zero(context: Vec<VertexId>) -> Self {
        let mut b = FormulaBuilder::new(context.clone());
        for (i, &s) in context.iter().enumerate() {
            b.equation(s, vec![(Var::Ctx(i), Term::identity(s))]).expect("sorts match");
        }
        b.build()
    }

    fn check(&self) -> Result<(), FormulaError> {
        let sorts = self.var_sorts();
        for eq in &self.equations {
            if eq.entries.len() != sorts.len() {
                return Err(FormulaError::Malformed(format!(
                    "equation has {} entries for {} variables",
                    eq.entries.len(),
                    sorts.len()
                )));
            }
            for (t, &s) in eq.entries.iter().zip(&sorts) {
                if t.source != s {
                    return Err(FormulaError::Malformed("entry source does not match variable sort".into()));
                }
                if t.target != eq.target {
                    return Err(FormulaError::Malformed("entries of one equation have different targets".into()));
                }
            }
        }
        Ok(())
    }

    pub fn context(&self) -> &[VertexId] {
        &self.context
    }

    pub fn bound(&self) -> &[VertexId] {
        &self.bound
    }

    pub fn equations(&self) -> &[Equation] {
        &self.equations
    }

    /// Context sorts followed by bound sorts.
    pub fn var_sorts(&self) -> Vec<VertexId> {
        self.context.iter().chain(&self.bound).copied().collect()
    }

    /// Collects summands, drops zero summands and all-zero equations.
    /// Idempotent; preserves the interpretation.
    pub fn normalize(&self) -> RegularFormula {
        let equations = self
            .equations
            .iter()
            .map(|eq| Equation { target: eq.target, entries: eq.entries.iter().map(Term::normalized).collect() })
            .filter(|eq| !eq.is_trivial())
            .collect();
        RegularFormula { context: self.context.clone(), bound: self.bound.clone(), equations }
    }

    /// Checks that every sort and edge mentioned exists in `quiver` and that
    /// every path is composable.
    pub fn check_against(&self, quiver: &Quiver) -> Result<(), FormulaError> {
        for &s in self.context.iter().chain(&self.bound) {
            if s.0 >= quiver.vertex_count() {
                return Err(FormulaError::Malformed(format!("sort #{} does not exist", s.0)));
            }
        }
        for eq in &self.equations {
            for t in &eq.entries {
                for (_, p) in &t.summands {
                    check_path(quiver, t.source, t.target, p)?;
                }
            }
        }
        Ok(())
    }

    /// `self ∧ other` in a shared context, bound variables kept apart.
    pub fn conjoin(&self, other: &RegularFormula) -> Result<RegularFormula, FormulaError> {
        if self.context != other.context {
            return Err(FormulaError::ContextMismatch);
        }
        let mut b = FormulaBuilder::new(self.context.clone());
        let vars = b.context_vars();
        b.embed(self, &vars)?;
        b.embed(other, &vars)?;
        Ok(b.build())
    }

    /// `self(x⃗) ∧ other(y⃗)` in the concatenated context `x⃗ ++ y⃗`.
    pub fn product(&self, other: &RegularFormula) -> RegularFormula {
        let mut ctx = self.context.clone();
        ctx.extend(other.context.iter().copied());
        let mut b = FormulaBuilder::new(ctx);
        let vars = b.context_vars();
        let (left, right) = vars.split_at(self.context.len());
        b.embed(self, left).expect("sorts match");
        b.embed(other, right).expect("sorts match");
        b.build()
    }

    /// A formula defining the sum of the two definable subspaces:
    /// `∃ a⃗ b⃗ . self(a⃗) ∧ other(b⃗) ∧ x⃗ = a⃗ + b⃗`.
    pub fn sum(&self, other: &RegularFormula) -> Result<RegularFormula, FormulaError> {
        if self.context != other.context {
            return Err(FormulaError::ContextMismatch);
        }
        let mut b = FormulaBuilder::new(self.context.clone());
        let xs = b.context_vars();
        let a: Vec<Var> = self.context.iter().map(|&s| b.fresh(s)).collect();
        let c: Vec<Var> = self.context.iter().map(|&s| b.fresh(s)).collect();
        b.embed(self, &a)?;
        b.embed(other, &c)?;
        for (i, &s) in self.context.iter().enumerate() {
            let id = Term::identity(s);
            let neg = id.scale(&-Rational::one());
            b.equation(s, vec![(xs[i], id), (a[i], neg.clone()), (c[i], neg)])?;
        }
        Ok(b.build())
    }

    /// Existentially quantifies the context variables not listed in `keep`;
    /// the result's context is `keep` in the given order.
    pub fn exists_except(&self, keep: &[usize]) -> Result<RegularFormula, FormulaError> {
        if let Some(&bad) = keep.iter().find(|&&k| k >= self.context.len()) {
            return Err(FormulaError::Malformed(format!("context variable {bad} out of range")));
        }
        let mut b = FormulaBuilder::new(keep.iter().map(|&k| self.context[k]).collect());
        let kept = b.context_vars();
        let vars: Vec<Var> = (0..self.context.len())
            .map(|i| match keep.iter().position(|&k| k == i) {
                Some(pos) => kept[pos],
                None => b.fresh(self.context[i]),
            })
            .collect();
        b.embed(self, &vars)?;
        Ok(b.build())
    }
}

/// A regular sequent `lhs ⊢_x⃗ rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sequent {
    context: Vec<VertexId>,
    lhs: RegularFormula,
    rhs: RegularFormula,
}

impl Sequent {
    pub fn new(lhs: RegularFormula, rhs: RegularFormula) -> Result<Self, FormulaError> {
        if lhs.context != rhs.context {
            return Err(FormulaError::ContextMismatch);
        }
        Ok(Sequent { context: lhs.context.clone(), lhs, rhs })
    }

    pub fn context(&self) -> &[VertexId] {
        &self.context
    }

    pub fn lhs(&self) -> &RegularFormula {
        &self.lhs
    }

    pub fn rhs(&self) -> &RegularFormula {
        &self.rhs
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;

    fn loop_rep(f: &[&[i64]]) -> Representation {
        let q = Quiver::new(["d"], vec![("f", "d", "d")]).unwrap();
        let m = Matrix::from_i64(f);
        Representation::new(Arc::new(q), vec![m.rows()], vec![m])
    }

    #[test]
    fn term_matrix_examples() {
        let rep = loop_rep(&[&[0, 1], &[0, 0]]);
        let d = VertexId(0);
        let f = EdgeId(0);
        assert_eq!(term_matrix(&Term::identity(d), &rep).unwrap(), Matrix::identity(2));
        let single = Term::monomial(rep.quiver(), Rational::one(), d, vec![f]).unwrap();
        assert_eq!(term_matrix(&single, &rep).unwrap(), *rep.map(f));
        let ff = Term::monomial(rep.quiver(), Rational::from(2), d, vec![f, f]).unwrap();
        assert_eq!(term_matrix(&ff, &rep).unwrap(), Matrix::zeros(2, 2));
        assert_eq!(term_matrix(&Term::zero(d, d), &rep).unwrap(), Matrix::zeros(2, 2));
    }

    #[test]
    fn term_matrix_reports_bad_shape() {
        let q = Quiver::new(["d"], vec![("f", "d", "d")]).unwrap();
        let rep = Representation::new(Arc::new(q), vec![2], vec![Matrix::zeros(2, 3)]);
        let t = Term::monomial(rep.quiver(), Rational::one(), VertexId(0), vec![EdgeId(0)]).unwrap();
        assert_eq!(term_matrix(&t, &rep), Err(FormulaError::ShapeMismatch { edge: "f".into() }));
    }

    #[test]
    fn terms_are_collected() {
        let q = Quiver::new(["d"], vec![("f", "d", "d")]).unwrap();
        let d = VertexId(0);
        let t = Term::new(
            &q,
            d,
            d,
            vec![(Rational::from(2), vec![EdgeId(0)]), (Rational::from(3), vec![EdgeId(0)]), (Rational::zero(), vec![])],
        )
        .unwrap();
        assert_eq!(t.summands(), &[(Rational::from(5), vec![EdgeId(0)])]);
        let cancel = t.plus(&t.scale(&Rational::from(-1))).unwrap();
        assert!(cancel.is_zero());
    }

    #[test]
    fn non_composable_path_is_rejected() {
        let q = Quiver::new(["a", "b"], vec![("f", "a", "b")]).unwrap();
        let err = Term::new(&q, VertexId(0), VertexId(1), vec![(Rational::one(), vec![EdgeId(0), EdgeId(0)])]);
        assert!(matches!(err, Err(FormulaError::NonComposablePath { .. })));
    }

    #[test]
    fn normalize_drops_trivial_rows_and_is_idempotent() {
        let q = Quiver::new(["d"], vec![("f", "d", "d")]).unwrap();
        let f = parse_formula("f(x) - f(x) = 0", "x:d", &q).unwrap();
        assert!(f.normalize().equations().is_empty());
        let g = parse_formula("2*f(x) + 3*f(x) = 0", "x:d", &q).unwrap().normalize();
        assert_eq!(g.equations()[0].entries()[0].summands(), &[(Rational::from(5), vec![EdgeId(0)])]);
        assert_eq!(g.normalize(), g);
    }
}
