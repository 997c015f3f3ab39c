use crate::quiver::VertexId;

use super::{Equation, FormulaError, RegularFormula, Term};

/// A variable of a formula under construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    Ctx(usize),
    Bound(usize),
}

/// Assembles normal-form formulas out of smaller ones.
///
/// Bound variables are numbered in the order they are created, so the same
/// sequence of calls always yields the same formula.
#[derive(Debug, Clone)]
pub struct FormulaBuilder {
    context: Vec<VertexId>,
    bound: Vec<VertexId>,
    rows: Vec<(VertexId, Vec<(Var, Term)>)>,
}

impl FormulaBuilder {
    pub fn new(context: Vec<VertexId>) -> Self {
        FormulaBuilder { context, bound: Vec::new(), rows: Vec::new() }
    }

    pub fn context_vars(&self) -> Vec<Var> {
        (0..self.context.len()).map(Var::Ctx).collect()
    }

    pub fn fresh(&mut self, sort: VertexId) -> Var {
        self.bound.push(sort);
        Var::Bound(self.bound.len() - 1)
    }

    pub fn sort_of(&self, v: Var) -> Option<VertexId> {
        match v {
            Var::Ctx(i) => self.context.get(i).copied(),
            Var::Bound(i) => self.bound.get(i).copied(),
        }
    }

    /// Adds `Σ term(var) = 0`. Every term must end at `target` and start at
    /// its variable's sort. Repeated variables are summed.
    pub fn equation(&mut self, target: VertexId, terms: Vec<(Var, Term)>) -> Result<(), FormulaError> {
        for (v, t) in &terms {
            let sort = self.sort_of(*v).ok_or_else(|| FormulaError::Malformed(format!("{v:?} does not exist")))?;
            if t.source() != sort || t.target() != target {
                return Err(FormulaError::Malformed("term does not fit its variable or equation".into()));
            }
        }
        self.rows.push((target, terms));
        Ok(())
    }

    /// Copies `f`'s equations with its context variable `i` mapped to
    /// `at[i]` and its bound variables replaced by fresh ones.
    pub fn embed(&mut self, f: &RegularFormula, at: &[Var]) -> Result<(), FormulaError> {
        if at.len() != f.context().len() {
            return Err(FormulaError::ContextMismatch);
        }
        for (&v, &s) in at.iter().zip(f.context()) {
            if self.sort_of(v) != Some(s) {
                return Err(FormulaError::ContextMismatch);
            }
        }
        let mut vars = at.to_vec();
        for &s in f.bound() {
            vars.push(self.fresh(s));
        }
        for eq in f.equations() {
            let terms = vars.iter().copied().zip(eq.entries().iter().cloned()).filter(|(_, t)| !t.is_zero()).collect();
            self.rows.push((eq.target(), terms));
        }
        Ok(())
    }

    pub fn build(self) -> RegularFormula {
        let sorts: Vec<VertexId> = self.context.iter().chain(&self.bound).copied().collect();
        let nctx = self.context.len();
        let equations = self
            .rows
            .into_iter()
            .map(|(target, terms)| {
                let mut entries: Vec<Term> = sorts.iter().map(|&s| Term::zero(s, target)).collect();
                for (v, t) in terms {
                    let idx = match v {
                        Var::Ctx(i) => i,
                        Var::Bound(i) => nctx + i,
                    };
                    entries[idx] = entries[idx].plus(&t).expect("parallel by construction");
                }
                Equation::new(target, entries)
            })
            .collect();
        RegularFormula::new_unchecked(self.context, self.bound, equations).normalize()
    }
}
