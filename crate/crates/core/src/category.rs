//! Definable objects `K/K'` and definable morphisms of the abelian category
//! generated by a representation, plus the calculus of relations between
//! quotient presentations.
//!
//! Every object and morphism carries both its concrete linear data and a
//! formula certifying that the data is definable. Morphisms compare equal
//! when their quotient matrices agree.

use std::sync::Arc;

use crate::formula::{FormulaBuilder, FormulaError, RegularFormula, Term, Var};
use crate::interp::{enumerate_in_context, interpret, Budget, InterpError};
use crate::linalg::{LinalgError, Matrix, QuotientBasis, Subspace};
use crate::quiver::{Representation, VertexId};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CategoryError {
    #[error("the second formula does not define a subspace of the first")]
    NotASubobject,
    #[error("formula context does not match")]
    ContextMismatch,
    #[error("objects live over different representations")]
    ForeignRepresentation,
    #[error("formula is not functional: {0:?} fails")]
    NotFunctional(Functionality),
    #[error("codomain of the first morphism is not the domain of the second")]
    NotComposable,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("equivalence submodule is not contained in the space")]
    NotAnEquivalence,
    #[error("relation is not an arrow: {0:?}")]
    NotARelationArrow(RelationCheck),
    #[error(transparent)]
    Interp(#[from] InterpError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Formula(#[from] FormulaError),
}

/// The functionality condition a candidate morphism failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Functionality {
    /// Some class of the domain has no image.
    Totality,
    /// Some class of the domain has two images.
    SingleValued,
}

/// `K/K'` for definable `K' ⊆ K` in the ambient space of `context`.
#[derive(Debug, Clone)]
pub struct DefinableObject {
    rep: Arc<Representation>,
    context: Vec<VertexId>,
    k: Subspace,
    k_prime: Subspace,
    cert_k: RegularFormula,
    cert_k_prime: RegularFormula,
    quotient: QuotientBasis,
}

impl PartialEq for DefinableObject {
    fn eq(&self, other: &Self) -> bool {
        self.context == other.context
            && self.k == other.k
            && self.k_prime == other.k_prime
            && same_rep(&self.rep, &other.rep)
    }
}

fn same_rep(a: &Arc<Representation>, b: &Arc<Representation>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl DefinableObject {
    pub fn rep(&self) -> &Arc<Representation> {
        &self.rep
    }

    pub fn context(&self) -> &[VertexId] {
        &self.context
    }

    pub fn k(&self) -> &Subspace {
        &self.k
    }

    pub fn k_prime(&self) -> &Subspace {
        &self.k_prime
    }

    pub fn cert_k(&self) -> &RegularFormula {
        &self.cert_k
    }

    pub fn cert_k_prime(&self) -> &RegularFormula {
        &self.cert_k_prime
    }

    pub fn quotient(&self) -> &QuotientBasis {
        &self.quotient
    }

    /// `dim K − dim K'`.
    pub fn qdim(&self) -> usize {
        self.quotient.dim()
    }

    pub fn ambient_dim(&self) -> usize {
        self.k.ambient_dim()
    }

    pub fn is_zero(&self) -> bool {
        self.qdim() == 0
    }
}

/// The object `{x⃗ . φ} / ψ`.
pub fn make_object(
    phi: &RegularFormula,
    psi: &RegularFormula,
    rep: &Arc<Representation>,
) -> Result<DefinableObject, CategoryError> {
    if phi.context() != psi.context() {
        return Err(CategoryError::ContextMismatch);
    }
    let k = interpret(phi, rep)?;
    let k_prime = interpret(psi, rep)?;
    if !k.contains(&k_prime)? {
        return Err(CategoryError::NotASubobject);
    }
    let quotient = QuotientBasis::new(&k, &k_prime)?;
    Ok(DefinableObject {
        rep: rep.clone(),
        context: phi.context().to_vec(),
        k,
        k_prime,
        cert_k: phi.clone(),
        cert_k_prime: psi.clone(),
        quotient,
    })
}

/// A morphism `dom → cod`, given by its matrix on the quotient bases of
/// the two objects and a formula defining its graph.
///
/// The graph formula defines `{(x, y) ∈ K_dom × K_cod : [y] = map·[x]}`.
#[derive(Debug, Clone)]
pub struct DefinableMorphism {
    dom: DefinableObject,
    cod: DefinableObject,
    map: Matrix,
    graph_cert: RegularFormula,
}

impl PartialEq for DefinableMorphism {
    fn eq(&self, other: &Self) -> bool {
        self.dom == other.dom && self.cod == other.cod && self.map == other.map
    }
}

impl DefinableMorphism {
    pub fn dom(&self) -> &DefinableObject {
        &self.dom
    }

    pub fn cod(&self) -> &DefinableObject {
        &self.cod
    }

    /// `cod.qdim() × dom.qdim()`.
    pub fn map(&self) -> &Matrix {
        &self.map
    }

    pub fn graph_cert(&self) -> &RegularFormula {
        &self.graph_cert
    }

    pub fn is_zero(&self) -> bool {
        self.map.is_zero()
    }

    pub fn rank(&self) -> usize {
        self.map.rank()
    }

    /// The graph subspace computed from `map` alone:
    /// `span{(q_j, lift(map·e_j))} + K'_dom × K'_cod`.
    pub fn graph(&self) -> Subspace {
        let (n, m) = (self.dom.ambient_dim(), self.cod.ambient_dim());
        let mut rows = Vec::new();
        for (j, q) in self.dom.quotient.complement().row_iter().enumerate() {
            let col: Vec<Rational> = (0..self.map.rows()).map(|i| self.map.get(i, j).clone()).collect();
            let mut v = q.to_vec();
            v.extend(self.cod.quotient.lift(&col));
            rows.push(v);
        }
        let lifted = Subspace::from_vectors(n + m, rows).expect("rows have the product length");
        lifted.sum(&self.dom.k_prime.product(&self.cod.k_prime)).expect("same ambient")
    }
}

fn concat(a: &[VertexId], b: &[VertexId]) -> Vec<VertexId> {
    a.iter().chain(b).copied().collect()
}

/// The morphism defined by `theta(x⃗, y⃗)` with `x⃗` the domain context and
/// `y⃗` the codomain context.
///
/// `theta` is first relativized to `K_dom × K_cod`; the result must be
/// total and single-valued on the quotients.
pub fn make_morphism(
    dom: &DefinableObject,
    cod: &DefinableObject,
    theta: &RegularFormula,
) -> Result<DefinableMorphism, CategoryError> {
    if !same_rep(&dom.rep, &cod.rep) {
        return Err(CategoryError::ForeignRepresentation);
    }
    if theta.context() != concat(&dom.context, &cod.context) {
        return Err(CategoryError::ContextMismatch);
    }
    let n = dom.ambient_dim();
    let (a, b) = (dom.qdim(), cod.qdim());
    let g = interpret(theta, &dom.rep)?.intersect(&dom.k.product(&cod.k))?;
    let mut rows = Vec::with_capacity(g.dim());
    for v in g.basis().row_iter() {
        let mut w = dom.quotient.coords(&v[..n]).expect("relativized to K_dom");
        w.extend(cod.quotient.coords(&v[n..]).expect("relativized to K_cod"));
        rows.push(w);
    }
    let rel = Subspace::from_vectors(a + b, rows)?;
    let pivots = rel.pivots();
    let on_dom = pivots.iter().filter(|&&p| p < a).count();
    if on_dom < a {
        return Err(CategoryError::NotFunctional(Functionality::Totality));
    }
    if pivots.len() > a {
        return Err(CategoryError::NotFunctional(Functionality::SingleValued));
    }
    // The RREF basis is [I | mapᵀ].
    let mut map = Matrix::zeros(b, a);
    for (j, row) in rel.basis().row_iter().enumerate() {
        for i in 0..b {
            map.set(i, j, row[a + i].clone());
        }
    }
    let graph_cert = theta
        .conjoin(&dom.cert_k.product(&cod.cert_k))?
        .sum(&dom.cert_k_prime.product(&cod.cert_k_prime))?;
    Ok(DefinableMorphism { dom: dom.clone(), cod: cod.clone(), map, graph_cert })
}

/// The morphism induced by a coordinate map: codomain variable `j` is set
/// to domain variable `var_map[j]`, or to zero when `None`. Its certificate
/// is `φ_dom(x⃗) ∧ φ_cod(y⃗) ∧ ∃k⃗. ψ_cod(k⃗) ∧ y⃗ = S(x⃗) + k⃗`.
pub fn coordinate_morphism(
    dom: &DefinableObject,
    cod: &DefinableObject,
    var_map: &[Option<usize>],
) -> Result<DefinableMorphism, CategoryError> {
    if var_map.len() != cod.context.len() {
        return Err(CategoryError::ContextMismatch);
    }
    for (j, src) in var_map.iter().enumerate() {
        if let Some(i) = *src {
            if dom.context.get(i) != Some(&cod.context[j]) {
                return Err(CategoryError::ContextMismatch);
            }
        }
    }
    let nd = dom.context.len();
    let mut b = FormulaBuilder::new(concat(&dom.context, &cod.context));
    let vars = b.context_vars();
    let (xs, ys) = vars.split_at(nd);
    b.embed(&dom.cert_k, xs)?;
    b.embed(&cod.cert_k, ys)?;
    let ks: Vec<Var> = cod.context.iter().map(|&s| b.fresh(s)).collect();
    b.embed(&cod.cert_k_prime, &ks)?;
    for (j, &s) in cod.context.iter().enumerate() {
        let id = Term::identity(s);
        let neg = id.scale(&-Rational::one());
        let mut terms = vec![(ys[j], id), (ks[j], neg.clone())];
        if let Some(i) = var_map[j] {
            terms.push((xs[i], neg));
        }
        b.equation(s, terms)?;
    }
    make_morphism(dom, cod, &b.build())
}

pub fn identity(obj: &DefinableObject) -> Result<DefinableMorphism, CategoryError> {
    let var_map: Vec<Option<usize>> = (0..obj.context.len()).map(Some).collect();
    coordinate_morphism(obj, obj, &var_map)
}

pub fn zero_morphism(dom: &DefinableObject, cod: &DefinableObject) -> Result<DefinableMorphism, CategoryError> {
    coordinate_morphism(dom, cod, &vec![None; cod.context.len()])
}

/// `g ∘ f`, with certificate `∃m⃗. graph_f(x⃗, m⃗) ∧ graph_g(m⃗, y⃗)`.
pub fn compose(g: &DefinableMorphism, f: &DefinableMorphism) -> Result<DefinableMorphism, CategoryError> {
    if f.cod != g.dom {
        return Err(CategoryError::NotComposable);
    }
    let nd = f.dom.context.len();
    let mut b = FormulaBuilder::new(concat(&f.dom.context, &g.cod.context));
    let vars = b.context_vars();
    let (xs, ys) = vars.split_at(nd);
    let ms: Vec<Var> = f.cod.context.iter().map(|&s| b.fresh(s)).collect();
    b.embed(&f.graph_cert, &concat_vars(xs, &ms))?;
    b.embed(&g.graph_cert, &concat_vars(&ms, ys))?;
    Ok(DefinableMorphism { dom: f.dom.clone(), cod: g.cod.clone(), map: g.map.mul(&f.map), graph_cert: b.build() })
}

fn concat_vars(a: &[Var], b: &[Var]) -> Vec<Var> {
    a.iter().chain(b).copied().collect()
}

/// The kernel of `f` with its inclusion into `f.dom()`.
///
/// `K = {x ∈ K_dom : ∃y. graph_f(x, y) ∧ y ∈ K'_cod}` and `K' = K'_dom`.
pub fn kernel_obj(f: &DefinableMorphism) -> Result<(DefinableObject, DefinableMorphism), CategoryError> {
    let mut b = FormulaBuilder::new(f.dom.context.clone());
    let xs = b.context_vars();
    let ys: Vec<Var> = f.cod.context.iter().map(|&s| b.fresh(s)).collect();
    b.embed(&f.graph_cert, &concat_vars(&xs, &ys))?;
    b.embed(&f.cod.cert_k_prime, &ys)?;
    let ker = make_object(&b.build(), &f.dom.cert_k_prime, &f.dom.rep)?;
    let var_map: Vec<Option<usize>> = (0..f.dom.context.len()).map(Some).collect();
    let incl = coordinate_morphism(&ker, &f.dom, &var_map)?;
    Ok((ker, incl))
}

/// The cokernel of `f` with the projection from `f.cod()`.
///
/// `K = K_cod` and `K' = {y : ∃x. graph_f(x, y)} = K'_cod + image`.
pub fn cokernel_obj(f: &DefinableMorphism) -> Result<(DefinableObject, DefinableMorphism), CategoryError> {
    let mut b = FormulaBuilder::new(f.cod.context.clone());
    let ys = b.context_vars();
    let xs: Vec<Var> = f.dom.context.iter().map(|&s| b.fresh(s)).collect();
    b.embed(&f.graph_cert, &concat_vars(&xs, &ys))?;
    let coker = make_object(&f.cod.cert_k, &b.build(), &f.cod.rep)?;
    let var_map: Vec<Option<usize>> = (0..f.cod.context.len()).map(Some).collect();
    let proj = coordinate_morphism(&f.cod, &coker, &var_map)?;
    Ok((coker, proj))
}

/// `A ⊕ B` with its injections and projections.
#[derive(Debug, Clone)]
pub struct Biproduct {
    pub object: DefinableObject,
    pub inj: [DefinableMorphism; 2],
    pub proj: [DefinableMorphism; 2],
}

pub fn biproduct(a: &DefinableObject, b: &DefinableObject) -> Result<Biproduct, CategoryError> {
    if !same_rep(&a.rep, &b.rep) {
        return Err(CategoryError::ForeignRepresentation);
    }
    let object = make_object(&a.cert_k.product(&b.cert_k), &a.cert_k_prime.product(&b.cert_k_prime), &a.rep)?;
    let (na, nb) = (a.context.len(), b.context.len());
    let inj_a: Vec<Option<usize>> = (0..na + nb).map(|j| (j < na).then_some(j)).collect();
    let inj_b: Vec<Option<usize>> = (0..na + nb).map(|j| (j >= na).then(|| j - na)).collect();
    let proj_a: Vec<Option<usize>> = (0..na).map(Some).collect();
    let proj_b: Vec<Option<usize>> = (0..nb).map(|j| Some(na + j)).collect();
    Ok(Biproduct {
        inj: [coordinate_morphism(a, &object, &inj_a)?, coordinate_morphism(b, &object, &inj_b)?],
        proj: [coordinate_morphism(&object, a, &proj_a)?, coordinate_morphism(&object, b, &proj_b)?],
        object,
    })
}

/// Definable morphisms `dom → cod` found within a budget, linearly
/// independent as quotient matrices.
#[derive(Debug, Clone)]
pub struct HomSpace {
    pub dom: DefinableObject,
    pub cod: DefinableObject,
    pub basis: Vec<DefinableMorphism>,
    /// Candidate formulas tried.
    pub examined: usize,
    /// Whether the basis spans every linear map between the quotients, in
    /// which case no larger budget can add to it.
    pub exhausted: bool,
}

impl HomSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

fn flatten(m: &Matrix) -> Vec<Rational> {
    m.entries().to_vec()
}

/// Searches the formulas in context `dom ++ cod` within `budget` for
/// functional ones and keeps those that enlarge the span. The identity is
/// tried first when `dom = cod`.
pub fn hom_space(dom: &DefinableObject, cod: &DefinableObject, budget: &Budget) -> Result<HomSpace, CategoryError> {
    let full = dom.qdim() * cod.qdim();
    let mut span = Subspace::zero(full);
    let mut basis = Vec::new();
    let mut examined = 0;
    let consider = |m: DefinableMorphism, span: &mut Subspace, basis: &mut Vec<DefinableMorphism>| {
        let v = flatten(&m.map);
        if !span.contains_vector(&v) {
            *span = span.sum(&Subspace::from_vectors(full, vec![v]).expect("flattened length")).expect("same ambient");
            basis.push(m);
        }
    };
    if full > 0 && dom == cod {
        consider(identity(dom)?, &mut span, &mut basis);
    }
    if full > 0 {
        let ctx = concat(&dom.context, &cod.context);
        for theta in enumerate_in_context(dom.rep.quiver(), &ctx, budget) {
            if span.dim() == full {
                break;
            }
            examined += 1;
            match make_morphism(dom, cod, &theta) {
                Ok(m) => consider(m, &mut span, &mut basis),
                Err(CategoryError::NotFunctional(_)) => {}
                Err(e) => return Err(e),
            }
        }
    }
    Ok(HomSpace { dom: dom.clone(), cod: cod.clone(), basis, examined, exhausted: span.dim() == full })
}

/// A subspace `X` with an equivalence relation given by a submodule
/// `N ⊆ X`: `x ~ x'` iff `x − x' ∈ N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientPair {
    basis: QuotientBasis,
}

impl QuotientPair {
    pub fn new(space: &Subspace, equiv: &Subspace) -> Result<Self, CategoryError> {
        if space.ambient_dim() != equiv.ambient_dim() {
            return Err(CategoryError::ShapeMismatch("space and submodule have different ambients".into()));
        }
        if !space.contains(equiv)? {
            return Err(CategoryError::NotAnEquivalence);
        }
        Ok(QuotientPair { basis: QuotientBasis::new(space, equiv)? })
    }

    pub fn space(&self) -> &Subspace {
        self.basis.big()
    }

    pub fn equiv(&self) -> &Subspace {
        self.basis.small()
    }

    pub fn basis(&self) -> &QuotientBasis {
        &self.basis
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.ambient_dim()
    }

    /// The equivalence relation as a subspace of `ℚ^n × ℚ^n`:
    /// `{(x, x') : x ∈ X, x − x' ∈ N}`.
    pub fn relation(&self) -> Subspace {
        let n = self.ambient_dim();
        let mut rows = Vec::new();
        for v in self.space().basis().row_iter() {
            rows.push(v.iter().chain(v).cloned().collect());
        }
        for v in self.equiv().basis().row_iter() {
            rows.push(std::iter::repeat_n(Rational::zero(), n).chain(v.iter().cloned()).collect());
        }
        Subspace::from_vectors(2 * n, rows).expect("rows have the doubled length")
    }
}

/// `s ∘ r` (first `r ⊆ A × B`, then `s ⊆ B × C`), where `mid = dim B`:
/// the projection to `A × C` of `(r × C) ∩ (A × s)` in `A × B × C`.
pub fn relation_compose(r: &Subspace, s: &Subspace, mid: usize) -> Result<Subspace, CategoryError> {
    if r.ambient_dim() < mid || s.ambient_dim() < mid {
        return Err(CategoryError::ShapeMismatch("middle factor larger than a relation".into()));
    }
    let (a, c) = (r.ambient_dim() - mid, s.ambient_dim() - mid);
    let n = a + mid + c;
    let left = r.cylinder(n, &(0..a + mid).collect::<Vec<_>>())?;
    let right = s.cylinder(n, &(a..n).collect::<Vec<_>>())?;
    let keep: Vec<usize> = (0..a).chain(a + mid..n).collect();
    Ok(left.intersect(&right)?.project(&keep)?)
}

/// `r° ⊆ B × A` for `r ⊆ A × B` with `dom = dim A`.
pub fn relation_opposite(r: &Subspace, dom: usize) -> Result<Subspace, CategoryError> {
    if r.ambient_dim() < dom {
        return Err(CategoryError::ShapeMismatch("domain larger than the relation's ambient".into()));
    }
    let n = r.ambient_dim();
    let order: Vec<usize> = (dom..n).chain(0..dom).collect();
    Ok(r.project(&order)?)
}

/// A relation `R ⊆ X × Y` between two quotient presentations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationArrow {
    pub dom: QuotientPair,
    pub cod: QuotientPair,
    pub relation: Subspace,
}

impl RelationArrow {
    pub fn new(dom: QuotientPair, cod: QuotientPair, relation: Subspace) -> Result<Self, CategoryError> {
        if relation.ambient_dim() != dom.ambient_dim() + cod.ambient_dim() {
            return Err(CategoryError::ShapeMismatch("relation ambient is not the product".into()));
        }
        Ok(RelationArrow { dom, cod, relation })
    }
}

/// The four conditions for `R` to be an arrow `(X, E) → (Y, F)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RelationCheck {
    /// `R ∘ E = R`.
    pub saturated_dom: bool,
    /// `F ∘ R = R`.
    pub saturated_cod: bool,
    /// `E ⊆ R° ∘ R`.
    pub total: bool,
    /// `R ∘ R° ⊆ F`.
    pub single_valued: bool,
}

impl RelationCheck {
    pub fn is_valid(&self) -> bool {
        self.saturated_dom && self.saturated_cod && self.total && self.single_valued
    }
}

pub fn check_relation_arrow(r: &RelationArrow) -> Result<RelationCheck, CategoryError> {
    let (a, b) = (r.dom.ambient_dim(), r.cod.ambient_dim());
    let e = r.dom.relation();
    let f = r.cod.relation();
    let rel = &r.relation;
    let opp = relation_opposite(rel, a)?;
    Ok(RelationCheck {
        saturated_dom: relation_compose(&e, rel, a)? == *rel,
        saturated_cod: relation_compose(rel, &f, b)? == *rel,
        total: relation_compose(rel, &opp, b)?.contains(&e)?,
        single_valued: f.contains(&relation_compose(&opp, rel, a)?)?,
    })
}

/// The linear map `X/E → Y/F` of a valid arrow, on the quotient bases.
pub fn to_induced_map(r: &RelationArrow) -> Result<Matrix, CategoryError> {
    let check = check_relation_arrow(r)?;
    if !check.is_valid() {
        return Err(CategoryError::NotARelationArrow(check));
    }
    let a = r.dom.ambient_dim();
    let qd = r.dom.basis();
    let qc = r.cod.basis();
    let basis = r.relation.basis();
    let pivots = r.relation.pivots();
    let mut out = Matrix::zeros(qc.dim(), qd.dim());
    for (j, q) in qd.complement().row_iter().enumerate() {
        // In RREF, the combination of rows hitting `q` on the domain side
        // is read off the pivot entries.
        let mut v = vec![Rational::zero(); basis.cols()];
        for (row, &p) in basis.row_iter().zip(&pivots) {
            if p >= a || q[p].is_zero() {
                continue;
            }
            for (vi, ri) in v.iter_mut().zip(row) {
                if !ri.is_zero() {
                    *vi += &q[p] * ri;
                }
            }
        }
        debug_assert_eq!(&v[..a], q, "total relation reaches every class");
        let coords = qc.coords(&v[a..]).expect("single-valued relation lands in Y");
        for (i, c) in coords.into_iter().enumerate() {
            out.set(i, j, c);
        }
    }
    Ok(out)
}

/// The arrow of a linear map `alpha: X/E → Y/F`:
/// `R = span{(q_j, lift(alpha·e_j))} + N_E × 0 + 0 × N_F`.
pub fn from_induced_map(alpha: &Matrix, dom: &QuotientPair, cod: &QuotientPair) -> Result<RelationArrow, CategoryError> {
    let (qd, qc) = (dom.basis(), cod.basis());
    if alpha.rows() != qc.dim() || alpha.cols() != qd.dim() {
        return Err(CategoryError::ShapeMismatch(format!(
            "map is {}×{}, quotients need {}×{}",
            alpha.rows(),
            alpha.cols(),
            qc.dim(),
            qd.dim()
        )));
    }
    let (a, b) = (dom.ambient_dim(), cod.ambient_dim());
    let mut rows = Vec::new();
    for (j, q) in qd.complement().row_iter().enumerate() {
        let col: Vec<Rational> = (0..alpha.rows()).map(|i| alpha.get(i, j).clone()).collect();
        rows.push(q.iter().cloned().chain(qc.lift(&col)).collect());
    }
    let graph = Subspace::from_vectors(a + b, rows)?;
    let relation = graph.sum(&dom.equiv().product(&Subspace::zero(b)))?.sum(&Subspace::zero(a).product(cod.equiv()))?;
    RelationArrow::new(dom.clone(), cod.clone(), relation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;
    use crate::interp::interpret;
    use crate::quiver::Quiver;

    fn nil() -> Arc<Representation> {
        let q = Quiver::new(["d"], vec![("f", "d", "d")]).unwrap();
        Arc::new(Representation::new(Arc::new(q), vec![2], vec![Matrix::from_i64(&[&[0, 1], &[0, 0]])]))
    }

    fn obj(rep: &Arc<Representation>, phi: &str, psi: &str, ctx: &str) -> DefinableObject {
        let q = rep.quiver();
        make_object(&parse_formula(phi, ctx, q).unwrap(), &parse_formula(psi, ctx, q).unwrap(), rep).unwrap()
    }

    fn theta(rep: &Arc<Representation>, text: &str) -> RegularFormula {
        parse_formula(text, "x:d, y:d", rep.quiver()).unwrap()
    }

    #[test]
    fn object_examples() {
        let rep = nil();
        assert_eq!(obj(&rep, "0 = 0", "x = 0", "x:d").qdim(), 2);
        assert_eq!(obj(&rep, "f(x) = 0", "f(x) = 0", "x:d").qdim(), 0);
        assert_eq!(obj(&rep, "f(x) = 0", "exists y:d . f(y) = x", "x:d").qdim(), 0);
        let q = rep.quiver();
        let err = make_object(&parse_formula("x = 0", "x:d", q).unwrap(), &parse_formula("0 = 0", "x:d", q).unwrap(), &rep);
        assert_eq!(err.unwrap_err(), CategoryError::NotASubobject);
    }

    #[test]
    fn morphism_examples() {
        let rep = nil();
        let t = obj(&rep, "0 = 0", "x = 0", "x:d");
        let id = make_morphism(&t, &t, &theta(&rep, "y = x")).unwrap();
        assert_eq!(id.map(), &Matrix::identity(2));
        assert_eq!(id, identity(&t).unwrap());
        let zero = make_morphism(&t, &t, &theta(&rep, "y = 0")).unwrap();
        assert!(zero.is_zero());
        let f = make_morphism(&t, &t, &theta(&rep, "y = f(x)")).unwrap();
        assert_eq!(f.map(), &Matrix::from_i64(&[&[0, 1], &[0, 0]]));
        assert_eq!(interpret(f.graph_cert(), &rep).unwrap(), f.graph());
        assert_eq!(
            make_morphism(&t, &t, &theta(&rep, "0 = 0")).unwrap_err(),
            CategoryError::NotFunctional(Functionality::SingleValued)
        );
        assert_eq!(
            make_morphism(&t, &t, &theta(&rep, "x = 0 & y = 0")).unwrap_err(),
            CategoryError::NotFunctional(Functionality::Totality)
        );
    }

    #[test]
    fn composition_examples() {
        let rep = nil();
        let t = obj(&rep, "0 = 0", "x = 0", "x:d");
        let f = make_morphism(&t, &t, &theta(&rep, "y = f(x)")).unwrap();
        let id = identity(&t).unwrap();
        assert_eq!(compose(&id, &f).unwrap(), f);
        let zero = zero_morphism(&t, &t).unwrap();
        assert!(compose(&zero, &f).unwrap().is_zero());
        let ff = compose(&f, &f).unwrap();
        assert!(ff.is_zero());
        assert_eq!(interpret(ff.graph_cert(), &rep).unwrap(), ff.graph());
    }

    #[test]
    fn kernel_cokernel_examples() {
        let rep = nil();
        let t = obj(&rep, "0 = 0", "x = 0", "x:d");
        let (k, _) = kernel_obj(&identity(&t).unwrap()).unwrap();
        assert!(k.is_zero());
        let (c, p) = cokernel_obj(&zero_morphism(&t, &t).unwrap()).unwrap();
        assert_eq!(c, t);
        assert_eq!(p.map(), &Matrix::identity(2));
        let f = make_morphism(&t, &t, &theta(&rep, "y = f(x)")).unwrap();
        let (k, incl) = kernel_obj(&f).unwrap();
        assert_eq!(k.qdim(), 1);
        assert!(compose(&f, &incl).unwrap().is_zero());
        let (c, proj) = cokernel_obj(&f).unwrap();
        assert_eq!(c.qdim(), 1);
        assert!(compose(&proj, &f).unwrap().is_zero());
    }

    #[test]
    fn hom_space_examples() {
        let q = Quiver::new(["d"], Vec::<(&str, &str, &str)>::new()).unwrap();
        let rep = Arc::new(Representation::new(Arc::new(q), vec![1], vec![]));
        let t = obj(&rep, "0 = 0", "x = 0", "x:d");
        let zero = obj(&rep, "x = 0", "x = 0", "x:d");
        let budget = Budget { max_bound_vars: 0, max_eqs: 1, ..Budget::default() };
        let h = hom_space(&t, &t, &budget).unwrap();
        assert_eq!(h.dim(), 1);
        assert_eq!(h.basis[0], identity(&t).unwrap());
        assert_eq!(hom_space(&zero, &t, &budget).unwrap().dim(), 0);
    }

    fn span(rows: &[&[i64]]) -> Subspace {
        Subspace::spanned_by(&Matrix::from_i64(rows))
    }

    #[test]
    fn relation_examples() {
        let x = QuotientPair::new(&Subspace::full(2), &Subspace::zero(2)).unwrap();
        let diag = span(&[&[1, 0, 1, 0], &[0, 1, 0, 1]]);
        let arrow = RelationArrow::new(x.clone(), x.clone(), diag).unwrap();
        assert!(check_relation_arrow(&arrow).unwrap().is_valid());
        assert_eq!(to_induced_map(&arrow).unwrap(), Matrix::identity(2));
        // Graph of f = [[0,1],[0,0]]: pairs (v, f v).
        let graph = span(&[&[1, 0, 0, 0], &[0, 1, 1, 0]]);
        let arrow = RelationArrow::new(x.clone(), x.clone(), graph).unwrap();
        assert_eq!(to_induced_map(&arrow).unwrap(), Matrix::from_i64(&[&[0, 1], &[0, 0]]));
        assert_eq!(
            QuotientPair::new(&span(&[&[1, 0]]), &span(&[&[0, 1]])).unwrap_err(),
            CategoryError::NotAnEquivalence
        );
    }
}
