//! Random inputs shared by the property tests.
#![allow(dead_code)]

use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use repcat::category::{make_morphism, make_object, zero_morphism, DefinableMorphism, DefinableObject, QuotientPair};
use repcat::formula::RegularFormula;
use repcat::interp::{enumerate_in_context, Budget};
use repcat::{Matrix, Quiver, Rational, Representation, Subspace, VertexId};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, lo: i64, hi: i64) -> Matrix {
    let data = (0..rows * cols).map(|_| Rational::from(rng.gen_range(lo..=hi))).collect();
    Matrix::new(rows, cols, data).unwrap()
}

/// A matrix of rank at most `rank`, entries mostly small.
pub fn low_rank(rng: &mut ChaCha8Rng, rows: usize, cols: usize, rank: usize) -> Matrix {
    matrix(rng, rows, rank, -2, 2).mul(&matrix(rng, rank, cols, -2, 2))
}

pub fn subspace(rng: &mut ChaCha8Rng, n: usize) -> Subspace {
    let k = rng.gen_range(0..=n);
    Subspace::spanned_by(&matrix(rng, k, n, -2, 2))
}

pub fn invertible(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    loop {
        let m = matrix(rng, n, n, -2, 2);
        if m.inverse().is_some() {
            return m;
        }
    }
}

/// A quiver on `1..=max_v` vertices named `v0, v1, …` with up to `max_e`
/// random edges `e0, e1, …`, and a representation with dimensions in
/// `0..=max_dim` (at least one vertex of positive dimension).
pub fn representation(rng: &mut ChaCha8Rng, max_v: usize, max_dim: usize, max_e: usize) -> Arc<Representation> {
    let nv = rng.gen_range(1..=max_v);
    let ne = rng.gen_range(0..=max_e);
    let names: Vec<String> = (0..nv).map(|i| format!("v{i}")).collect();
    let edges: Vec<(String, String, String)> = (0..ne)
        .map(|i| (format!("e{i}"), names[rng.gen_range(0..nv)].clone(), names[rng.gen_range(0..nv)].clone()))
        .collect();
    let q = Quiver::new(names.clone(), edges).unwrap();
    let mut dims: Vec<usize> = (0..nv).map(|_| rng.gen_range(0..=max_dim)).collect();
    if dims.iter().all(|&d| d == 0) {
        dims[0] = 1;
    }
    let mats = q
        .edges()
        .iter()
        .map(|e| {
            let (r, c) = (dims[e.target.0], dims[e.source.0]);
            if rng.gen_bool(0.5) {
                matrix(rng, r, c, -1, 1)
            } else {
                low_rank(rng, r, c, 1)
            }
        })
        .collect();
    Arc::new(Representation::checked(Arc::new(q), dims, mats).unwrap())
}

/// `rep` with every vertex space changed by a random invertible matrix.
pub fn conjugate(rng: &mut ChaCha8Rng, rep: &Representation) -> Representation {
    let change: Vec<Matrix> = rep.dims().iter().map(|&n| invertible(rng, n)).collect();
    rep.conjugate(&change).unwrap()
}

pub fn pick<'a, T>(rng: &mut ChaCha8Rng, xs: &'a [T]) -> &'a T {
    &xs[rng.gen_range(0..xs.len())]
}

/// Up to `n` formulas sampled from the first `window` of a stream.
pub fn sample_formulas(
    rng: &mut ChaCha8Rng,
    stream: impl Iterator<Item = RegularFormula>,
    window: usize,
    n: usize,
) -> Vec<RegularFormula> {
    let all: Vec<RegularFormula> = stream.take(window).collect();
    if all.len() <= n {
        return all;
    }
    (0..n).map(|_| pick(rng, &all).clone()).collect()
}

/// One variable, one bound variable, one equation.
pub fn small_budget() -> Budget {
    Budget { max_ctx_vars: 1, max_bound_vars: 1, max_eqs: 1, ..Budget::default() }
}

/// `φ/(φ ∧ ψ)` in a one-variable context, with `φ` and `ψ` drawn from the
/// small-budget stream. Zero objects are redrawn a few times, so most
/// results are nonzero.
pub fn random_object(rng: &mut ChaCha8Rng, rep: &Arc<Representation>) -> DefinableObject {
    let v = VertexId(rng.gen_range(0..rep.dims().len()));
    random_object_at(rng, rep, v)
}

pub fn random_object_at(rng: &mut ChaCha8Rng, rep: &Arc<Representation>, v: VertexId) -> DefinableObject {
    let all: Vec<RegularFormula> = enumerate_in_context(rep.quiver(), &[v], &small_budget()).take(300).collect();
    let mut obj = None;
    for _ in 0..8 {
        let phi = if rng.gen_bool(0.4) { RegularFormula::top(vec![v]) } else { pick(rng, &all).clone() };
        let psi = if rng.gen_bool(0.4) { RegularFormula::zero(vec![v]) } else { pick(rng, &all).clone() };
        let o = make_object(&phi, &phi.conjoin(&psi).unwrap(), rep).unwrap();
        if o.qdim() > 0 {
            return o;
        }
        obj = Some(o);
    }
    obj.expect("at least one draw")
}

/// A morphism defined by a formula sampled from the stream over
/// `dom ++ cod`, or the zero morphism when no sample is functional.
/// Nonzero morphisms are preferred.
pub fn random_morphism(rng: &mut ChaCha8Rng, dom: &DefinableObject, cod: &DefinableObject) -> DefinableMorphism {
    let ctx: Vec<VertexId> = dom.context().iter().chain(cod.context()).copied().collect();
    let budget = Budget { max_bound_vars: 0, max_eqs: 1, max_terms: 3, ..Budget::default() };
    let all: Vec<RegularFormula> = enumerate_in_context(dom.rep().quiver(), &ctx, &budget).take(2000).collect();
    let mut zero = None;
    for _ in 0..60 {
        if let Ok(f) = make_morphism(dom, cod, pick(rng, &all)) {
            if !f.is_zero() {
                return f;
            }
            zero = Some(f);
        }
    }
    zero.unwrap_or_else(|| zero_morphism(dom, cod).unwrap())
}

/// A morphism between random objects whose sorts are joined by a path of
/// length at most 2, so that nonzero morphisms can exist.
pub fn random_arrow(rng: &mut ChaCha8Rng, rep: &Arc<Representation>) -> DefinableMorphism {
    let v = VertexId(rng.gen_range(0..rep.dims().len()));
    let reachable: Vec<VertexId> = repcat::interp::paths_from(rep.quiver(), v, 2).into_iter().map(|(_, t)| t).collect();
    let w = *pick(rng, &reachable);
    let dom = random_object_at(rng, rep, v);
    let cod = random_object_at(rng, rep, w);
    random_morphism(rng, &dom, &cod)
}

/// `X ⊆ ℚ^n` with a submodule `N ⊆ X`.
pub fn quotient_pair(rng: &mut ChaCha8Rng, n: usize) -> QuotientPair {
    let x = subspace(rng, n);
    let k = rng.gen_range(0..=x.dim());
    let n_basis = matrix(rng, k, x.dim(), -2, 2).mul(x.basis());
    QuotientPair::new(&x, &Subspace::spanned_by(&n_basis)).unwrap()
}
