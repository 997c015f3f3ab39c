//! Definable subspaces, sequent validity, and budgeted comparison of the
//! regular theories of two representations.

use std::collections::HashMap;

use serde::Serialize;

use crate::formula::{term_matrix, Equation, FormulaError, Path, RegularFormula, Sequent, Term};
use crate::linalg::{LinalgError, Matrix, Subspace};
use crate::quiver::{Quiver, Representation, Violation, VertexId};
use crate::rational::{mul_mod, Rational, MERSENNE61};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InterpError {
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("sort #{0} does not exist in the representation")]
    SortOutOfRange(usize),
    #[error("the representations are over different quivers")]
    DifferentQuiver,
    #[error("invalid representation: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidRepresentation(Vec<Violation>),
}

/// Column offset of each variable and the total width.
fn offsets(sorts: &[VertexId], rep: &Representation) -> Result<(Vec<usize>, usize), InterpError> {
    let mut offs = Vec::with_capacity(sorts.len());
    let mut n = 0;
    for s in sorts {
        offs.push(n);
        n += rep.dims().get(s.0).copied().ok_or(InterpError::SortOutOfRange(s.0))?;
    }
    Ok((offs, n))
}

/// Dimension of the ambient space of `context` in `rep`.
pub fn context_dim(context: &[VertexId], rep: &Representation) -> Result<usize, InterpError> {
    Ok(offsets(context, rep)?.1)
}

/// The block matrix `[A | B]` whose kernel, projected to the context
/// columns, is the interpretation of `f`.
pub fn formula_matrix(f: &RegularFormula, rep: &Representation) -> Result<Matrix, InterpError> {
    let sorts = f.var_sorts();
    let (offs, n) = offsets(&sorts, rep)?;
    let mut row_offs = Vec::with_capacity(f.equations().len());
    let mut m_rows = 0;
    for eq in f.equations() {
        row_offs.push(m_rows);
        m_rows += rep.dims().get(eq.target().0).copied().ok_or(InterpError::SortOutOfRange(eq.target().0))?;
    }
    let mut m = Matrix::zeros(m_rows, n);
    for (eq, &r0) in f.equations().iter().zip(&row_offs) {
        for (t, &c0) in eq.entries().iter().zip(&offs) {
            if !t.is_zero() {
                m.put_block(r0, c0, &term_matrix(t, rep)?);
            }
        }
    }
    Ok(m)
}

/// `[[x⃗ . f]]` in `rep`, a subspace of `ℚ^(Σ dims of the context)`.
pub fn interpret(f: &RegularFormula, rep: &Representation) -> Result<Subspace, InterpError> {
    f.check_against(rep.quiver())?;
    let ctx = context_dim(f.context(), rep)?;
    let m = formula_matrix(f, rep)?;
    let k = Subspace::kernel_of(&m);
    if k.ambient_dim() == ctx {
        return Ok(k);
    }
    let coords: Vec<usize> = (0..ctx).collect();
    Ok(k.project(&coords)?)
}

/// Whether `lhs ⊢ rhs` is valid in `rep`.
pub fn check_sequent(s: &Sequent, rep: &Representation) -> Result<bool, InterpError> {
    let l = interpret(s.lhs(), rep)?;
    let r = interpret(s.rhs(), rep)?;
    Ok(r.contains(&l)?)
}

/// Limits of the formula enumeration.
///
/// `max_terms` caps the number of nonzero monomials `c·p(v)` in a single
/// equation; without it the number of rows grows as `|coeffs|^monomials`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Budget {
    pub max_ctx_vars: usize,
    pub max_bound_vars: usize,
    pub max_eqs: usize,
    pub max_path_len: usize,
    pub coeffs: Vec<Rational>,
    pub max_terms: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_ctx_vars: 2,
            max_bound_vars: 2,
            max_eqs: 2,
            max_path_len: 2,
            coeffs: [-1, 0, 1, 2].into_iter().map(Rational::from).collect(),
            max_terms: 2,
        }
    }
}

impl Budget {
    /// Nonzero coefficients, duplicates removed, first occurrence kept.
    fn nonzero_coeffs(&self) -> Vec<Rational> {
        let mut out: Vec<Rational> = Vec::new();
        for c in &self.coeffs {
            if !c.is_zero() && !out.contains(c) {
                out.push(c.clone());
            }
        }
        out
    }
}

/// All paths from `from` of length `≤ max_len`, shortest first, then by
/// edge ids.
pub fn paths_from(quiver: &Quiver, from: VertexId, max_len: usize) -> Vec<(Path, VertexId)> {
    let mut out = vec![(Vec::new(), from)];
    let mut frontier = vec![(Vec::new(), from)];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for (p, at) in &frontier {
            for e in quiver.out_edges(*at) {
                let mut q = p.clone();
                q.push(e);
                next.push((q, quiver.edge(e).target));
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Non-decreasing sort lists of length exactly `len`, in lex order.
fn sorted_lists(n_sorts: usize, len: usize) -> Vec<Vec<VertexId>> {
    fn go(n: usize, len: usize, min: usize, cur: &mut Vec<VertexId>, out: &mut Vec<Vec<VertexId>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for s in min..n {
            cur.push(VertexId(s));
            go(n, len, s, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n_sorts, len, 0, &mut Vec::new(), &mut out);
    out
}

/// All sort lists of length `len` in lex order.
fn all_lists(n_sorts: usize, len: usize) -> Vec<Vec<VertexId>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|l| {
                (0..n_sorts).map(move |s| {
                    let mut m = l.clone();
                    m.push(VertexId(s));
                    m
                })
            })
            .collect();
    }
    out
}

/// A single equation as a list of `(variable, coefficient, path)`.
#[derive(Debug, Clone)]
struct Row {
    target: VertexId,
    monos: Vec<(usize, Rational, Path)>,
}

impl Row {
    fn uses(&self, var: usize) -> bool {
        self.monos.iter().any(|(v, _, _)| *v == var)
    }

    fn equation(&self, quiver: &Quiver, sorts: &[VertexId]) -> Equation {
        let mut per_var: Vec<Vec<(Rational, Path)>> = vec![Vec::new(); sorts.len()];
        for (v, c, p) in &self.monos {
            per_var[*v].push((c.clone(), p.clone()));
        }
        let entries = per_var
            .into_iter()
            .zip(sorts)
            .map(|(s, &sort)| Term::new(quiver, sort, self.target, s).expect("enumerated paths compose"))
            .collect();
        Equation::new(self.target, entries)
    }
}

/// Every row over the variables `sorts` within budget, in enumeration
/// order: by longest path, then target sort, then number of monomials,
/// then monomial positions, then coefficients in budget order.
///
/// A row whose first coefficient is negative is skipped when its negation
/// is also in budget, since both define the same subspace.
fn rows_for(quiver: &Quiver, sorts: &[VertexId], budget: &Budget) -> Vec<Row> {
    let coeffs = budget.nonzero_coeffs();
    if coeffs.is_empty() || budget.max_terms == 0 {
        return Vec::new();
    }
    let mut monos_by_target: Vec<Vec<(usize, Path)>> = vec![Vec::new(); quiver.vertex_count()];
    for (v, &s) in sorts.iter().enumerate() {
        for (p, t) in paths_from(quiver, s, budget.max_path_len) {
            monos_by_target[t.0].push((v, p));
        }
    }
    for ms in &mut monos_by_target {
        ms.sort_by(|a, b| a.1.len().cmp(&b.1.len()).then(a.0.cmp(&b.0)).then(a.1.cmp(&b.1)));
    }
    type Key = (usize, usize, usize, Vec<usize>, Vec<usize>);
    let mut keyed: Vec<(Key, Row)> = Vec::new();
    for (t, ms) in monos_by_target.iter().enumerate() {
        for k in 1..=budget.max_terms.min(ms.len()) {
            for idx in Combinations::new(ms.len(), k) {
                let max_len = idx.iter().map(|&i| ms[i].1.len()).max().unwrap_or(0);
                let mut cidx = vec![0usize; k];
                loop {
                    let cs: Vec<&Rational> = cidx.iter().map(|&c| &coeffs[c]).collect();
                    let redundant = cs[0].is_negative() && cs.iter().all(|c| coeffs.contains(&-(*c).clone()));
                    if !redundant {
                        let monos =
                            idx.iter().zip(&cs).map(|(&i, &c)| (ms[i].0, c.clone(), ms[i].1.clone())).collect();
                        keyed.push(((max_len, t, k, idx.clone(), cidx.clone()), Row { target: VertexId(t), monos }));
                    }
                    // Odometer over coefficient indices, last position fastest.
                    let mut pos = k;
                    loop {
                        if pos == 0 {
                            break;
                        }
                        pos -= 1;
                        cidx[pos] += 1;
                        if cidx[pos] < coeffs.len() {
                            break;
                        }
                        cidx[pos] = 0;
                    }
                    if cidx.iter().all(|&c| c == 0) {
                        break;
                    }
                }
            }
        }
    }
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    keyed.into_iter().map(|(_, r)| r).collect()
}

/// Contexts in length-lex order.
fn contexts(quiver: &Quiver, budget: &Budget) -> Vec<Vec<VertexId>> {
    (0..=budget.max_ctx_vars).flat_map(|n| all_lists(quiver.vertex_count(), n)).collect()
}

/// Bound lists for `neq` equations: only the empty list when `neq = 0`.
fn bound_lists(quiver: &Quiver, budget: &Budget, neq: usize) -> Vec<Vec<VertexId>> {
    if neq == 0 {
        return vec![Vec::new()];
    }
    (0..=budget.max_bound_vars).flat_map(|n| sorted_lists(quiver.vertex_count(), n)).collect()
}

/// Strictly increasing `k`-tuples from `0..n` in lex order, lazily.
struct Combinations {
    n: usize,
    cur: Option<Vec<usize>>,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        Combinations { n, cur: (k <= n).then(|| (0..k).collect()) }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.cur.clone()?;
        let c = self.cur.as_mut().expect("checked above");
        let k = c.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.cur = None;
                break;
            }
            i -= 1;
            if c[i] < self.n - k + i {
                c[i] += 1;
                for j in i + 1..k {
                    c[j] = c[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

/// The formulas of [`enumerate_formulas`] whose context is `ctx`, in the
/// same order. `budget.max_ctx_vars` is ignored.
pub fn enumerate_in_context(
    quiver: &Quiver,
    ctx: &[VertexId],
    budget: &Budget,
) -> impl Iterator<Item = RegularFormula> {
    let quiver = quiver.clone();
    let budget = budget.clone();
    let ctx = ctx.to_vec();
    let nctx = ctx.len();
    let stages: Vec<(usize, Vec<VertexId>)> = (0..=budget.max_eqs)
        .flat_map(|neq| bound_lists(&quiver, &budget, neq).into_iter().map(move |b| (neq, b)))
        .collect();
    stages.into_iter().flat_map(move |(neq, bound)| {
        let sorts: Vec<VertexId> = ctx.iter().chain(&bound).copied().collect();
        let rows = rows_for(&quiver, &sorts, &budget);
        let (quiver, ctx) = (quiver.clone(), ctx.clone());
        Combinations::new(rows.len(), neq).filter_map(move |idx| {
            if !(nctx..sorts.len()).all(|v| idx.iter().any(|&i| rows[i].uses(v))) {
                return None;
            }
            let eqs = idx.iter().map(|&i| rows[i].equation(&quiver, &sorts)).collect();
            Some(RegularFormula::new(ctx.clone(), bound.clone(), eqs).expect("well-formed by construction"))
        })
    })
}

/// The deterministic stream of normal-form formulas within `budget`.
///
/// Order: contexts in length-lex order of sort ids; within a context, by
/// number of equations; then bound-variable sort lists (non-decreasing, by
/// length then lex); then strictly increasing tuples of rows in the order
/// of [`rows_for`]. Every bound variable occurs in some equation. No two
/// formulas in the stream are equal.
pub fn enumerate_formulas(quiver: &Quiver, budget: &Budget) -> impl Iterator<Item = RegularFormula> {
    let quiver = quiver.clone();
    let budget = budget.clone();
    contexts(&quiver, &budget).into_iter().flat_map(move |ctx| enumerate_in_context(&quiver, &ctx, &budget))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Side {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Equal,
    Unequal,
}

/// A sequent valid in exactly one of the two representations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub sequent: Sequent,
    pub holds_in: Side,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComparisonReport {
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub budget: Budget,
    /// Formulas examined before stopping.
    pub formulas: usize,
    /// Distinct pairs of interpretations met.
    pub distinct: usize,
}

/// Path matrices of a representation, computed once per path.
struct PathCache<'r> {
    rep: &'r Representation,
    mats: HashMap<(VertexId, Path), Matrix>,
}

impl<'r> PathCache<'r> {
    fn get(&mut self, source: VertexId, p: &Path) -> &Matrix {
        let rep = self.rep;
        self.mats.entry((source, p.clone())).or_insert_with(|| {
            let mut m = Matrix::identity(rep.dim(source));
            for &e in p {
                m = rep.map(e).mul(&m);
            }
            m
        })
    }

    /// RREF (no zero rows) of the row's matrix, with the bound variables'
    /// columns placed before the context's. The row space determines the
    /// row's solution set.
    fn row_space(&mut self, row: &Row, sorts: &[VertexId], nctx: usize) -> Matrix {
        let rep = self.rep;
        let mut offs = vec![0; sorts.len()];
        let mut n = 0;
        for v in (nctx..sorts.len()).chain(0..nctx) {
            offs[v] = n;
            n += rep.dim(sorts[v]);
        }
        let mut m = Matrix::zeros(rep.dim(row.target), n);
        for (v, c, p) in &row.monos {
            let pm = self.get(sorts[*v], p).scale(c);
            for i in 0..pm.rows() {
                for j in 0..pm.cols() {
                    let x = pm.get(i, j);
                    if !x.is_zero() {
                        let cur = m.get(i, offs[*v] + j) + x;
                        m.set(i, offs[*v] + j, cur);
                    }
                }
            }
        }
        let (r, piv) = m.rref_with_pivots();
        r.select_rows(&(0..piv.len()).collect::<Vec<_>>())
    }
}

/// A subspace `{x : rows·x = 0}` with `rows` in RREF without zero rows,
/// which makes the representation canonical.
#[derive(Clone, PartialEq, Eq, Hash)]
struct Constraints {
    rows: Matrix,
    pivots: Vec<usize>,
    /// Pivot columns as a bit set, when the ambient is narrow enough.
    mask: Option<u64>,
    /// `rows` reduced modulo `2^61 − 1`, when no denominator vanishes there.
    residues: Option<Vec<u64>>,
}

impl Constraints {
    /// Eliminates the bound columns (the first `nb`) from the stacked row
    /// spaces: after RREF, the rows with no bound part cut out the
    /// projection of the joint solution set.
    fn eliminate(rows: &[&Matrix], n: usize, nb: usize) -> Constraints {
        let (r, piv) = match rows {
            [] => (Matrix::zeros(0, n), Vec::new()),
            [one] => {
                let piv = one.row_iter().map(|r| r.iter().position(|x| !x.is_zero()).expect("no zero rows")).collect();
                ((*one).clone(), piv)
            }
            _ => {
                let mut m = rows[0].clone();
                for r in &rows[1..] {
                    m = m.vstack(r);
                }
                m.rref_with_pivots()
            }
        };
        let keep: Vec<usize> = (0..piv.len()).filter(|&i| piv[i] >= nb).collect();
        let pivots: Vec<usize> = keep.iter().map(|&i| piv[i] - nb).collect();
        let rows = if nb == 0 && keep.len() == r.rows() {
            r
        } else {
            r.select_rows(&keep).select_columns(&(nb..n).collect::<Vec<_>>())
        };
        let mask = (n - nb <= 64).then(|| pivots.iter().fold(0u64, |m, &p| m | 1 << p));
        let residues = rows.entries().iter().map(Rational::residue).collect();
        Constraints { rows, pivots, mask, residues }
    }

    /// Whether the subspace cut out by `self` lies inside the one cut out
    /// by `other`, i.e. `other`'s rows lie in `self`'s row space.
    fn within(&self, other: &Constraints) -> bool {
        if other.pivots.len() > self.pivots.len() {
            return false;
        }
        // Leading columns of a subspace of the row space are among its own.
        match (self.mask, other.mask) {
            (Some(s), Some(o)) => {
                if o & !s != 0 {
                    return false;
                }
            }
            _ => {
                let mut it = self.pivots.iter();
                if !other.pivots.iter().all(|p| it.any(|q| q == p)) {
                    return false;
                }
            }
        }
        // Membership is an identity between rationals, so it survives
        // reduction mod p; failing mod p rules it out.
        if let (Some(sr), Some(or)) = (&self.residues, &other.residues) {
            let n = self.rows.cols();
            let mut next = self.pivots.iter().peekable();
            for c in 0..n {
                if next.peek() == Some(&&c) {
                    next.next();
                    continue;
                }
                for r in or.chunks(n) {
                    let mut acc = 0u64;
                    for (k, &p) in self.pivots.iter().enumerate() {
                        acc += mul_mod(r[p], sr[k * n + c]);
                        if acc >= MERSENNE61 {
                            acc -= MERSENNE61;
                        }
                    }
                    if acc != r[c] {
                        return false;
                    }
                }
            }
        }
        other.rows.row_iter().all(|r| {
            let mut w = r.to_vec();
            for (row, &p) in self.rows.row_iter().zip(&self.pivots) {
                let c = w[p].clone();
                if c.is_zero() {
                    continue;
                }
                for (wj, rj) in w.iter_mut().zip(row) {
                    if !rj.is_zero() {
                        *wj -= &(&c * rj);
                    }
                }
            }
            w.iter().all(Rational::is_zero)
        })
    }
}

fn check_pair(a: &Representation, b: &Representation) -> Result<(), InterpError> {
    if a.quiver() != b.quiver() {
        return Err(InterpError::DifferentQuiver);
    }
    for r in [a, b] {
        let v = r.validate();
        if !v.is_empty() {
            return Err(InterpError::InvalidRepresentation(v));
        }
    }
    Ok(())
}

/// Rows of one `(context, bound)` block with one representative per class
/// of rows having the same solution sets in both representations.
struct Reduced {
    rows: Vec<Row>,
    /// Index into `rows` and the row spaces in `a` and `b`.
    reps: Vec<(usize, Matrix, Matrix)>,
    n: (usize, usize),
    nb: (usize, usize),
}

/// Compares the regular theories of `a` and `b` on the formulas of
/// [`enumerate_formulas`].
///
/// Pairs are visited as follows: for each formula `φ_j` in stream order,
/// for each earlier `φ_i` in the same context, test `φ_i ⊢ φ_j` and then
/// `φ_j ⊢ φ_i`. The first sequent whose validity differs between `a` and
/// `b` is the witness. Since validity depends only on the pair of
/// interpretations, formulas whose interpretations in both
/// representations already occurred are not compared again, and rows with
/// the same solution sets in both representations as an earlier row are
/// skipped; neither changes the witness.
pub fn compare_theories(a: &Representation, b: &Representation, budget: &Budget) -> Result<ComparisonReport, InterpError> {
    check_pair(a, b)?;
    let quiver = a.quiver();
    let mut ca = PathCache { rep: a, mats: HashMap::new() };
    let mut cb = PathCache { rep: b, mats: HashMap::new() };
    let mut formulas = 0usize;
    let mut distinct = 0usize;
    for ctx in contexts(quiver, budget) {
        let nctx = ctx.len();
        // Each distinct interpretation pair with its first formula.
        let mut seen: Vec<(Constraints, Constraints, RegularFormula)> = Vec::new();
        let mut index: HashMap<(Constraints, Constraints), ()> = HashMap::new();
        let mut blocks: HashMap<Vec<VertexId>, Reduced> = HashMap::new();
        for neq in 0..=budget.max_eqs {
            for bound in bound_lists(quiver, budget, neq) {
                let sorts: Vec<VertexId> = ctx.iter().chain(&bound).copied().collect();
                let red = blocks.entry(bound.clone()).or_insert_with(|| {
                    let rows = rows_for(quiver, &sorts, budget);
                    let mut reps = Vec::new();
                    let mut classes: HashMap<(Matrix, Matrix), ()> = HashMap::new();
                    for (i, row) in rows.iter().enumerate() {
                        let ra = ca.row_space(row, &sorts, nctx);
                        let rb = cb.row_space(row, &sorts, nctx);
                        if classes.insert((ra.clone(), rb.clone()), ()).is_none() {
                            reps.push((i, ra, rb));
                        }
                    }
                    let width = |r: &Representation, vs: &[VertexId]| vs.iter().map(|s| r.dim(*s)).sum::<usize>();
                    Reduced {
                        rows,
                        reps,
                        n: (width(a, &sorts), width(b, &sorts)),
                        nb: (width(a, &bound), width(b, &bound)),
                    }
                });
                for pick in Combinations::new(red.reps.len(), neq) {
                    let rows: Vec<&Row> = pick.iter().map(|&p| &red.rows[red.reps[p].0]).collect();
                    if !(nctx..sorts.len()).all(|v| rows.iter().any(|r| r.uses(v))) {
                        continue;
                    }
                    formulas += 1;
                    let ka = Constraints::eliminate(&pick.iter().map(|&p| &red.reps[p].1).collect::<Vec<_>>(), red.n.0, red.nb.0);
                    let kb = Constraints::eliminate(&pick.iter().map(|&p| &red.reps[p].2).collect::<Vec<_>>(), red.n.1, red.nb.1);
                    let key = (ka, kb);
                    if index.contains_key(&key) {
                        continue;
                    }
                    let phi = RegularFormula::new(
                        ctx.clone(),
                        bound.clone(),
                        rows.iter().map(|r| r.equation(quiver, &sorts)).collect(),
                    )
                    .expect("well-formed by construction");
                    for (pa, pb, psi) in &seen {
                        // psi ⊢ phi, then phi ⊢ psi.
                        for (lhs, rhs, la, ra, lb, rb) in [
                            (psi, &phi, pa, &key.0, pb, &key.1),
                            (&phi, psi, &key.0, pa, &key.1, pb),
                        ] {
                            let in_a = la.within(ra);
                            let in_b = lb.within(rb);
                            if in_a != in_b {
                                let sequent = Sequent::new(lhs.clone(), rhs.clone())?;
                                return Ok(ComparisonReport {
                                    verdict: Verdict::Unequal,
                                    witness: Some(Witness { sequent, holds_in: if in_a { Side::A } else { Side::B } }),
                                    budget: budget.clone(),
                                    formulas,
                                    distinct: distinct + 1,
                                });
                            }
                        }
                    }
                    distinct += 1;
                    index.insert(key.clone(), ());
                    seen.push((key.0, key.1, phi));
                }
            }
        }
    }
    Ok(ComparisonReport { verdict: Verdict::Equal, witness: None, budget: budget.clone(), formulas, distinct })
}
