//! `End(T|F)`: tuples of per-vertex endomorphisms commuting with every edge
//! map of a finite subdiagram `F`, and their action on definable objects.

use crate::category::DefinableObject;
use crate::linalg::{LinalgError, Matrix, Subspace};
use crate::quiver::{Representation, Subdiagram, VertexId};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EndoError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("sort {0:?} of the object's context is outside the subdiagram")]
    SortOutsideSubdiagram(VertexId),
    #[error("element does not preserve the object's subspaces")]
    DoesNotPreserve,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A tuple `(α(d))_{d ∈ F}` of square matrices, one per subdiagram vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EndElement {
    vertices: Vec<VertexId>,
    blocks: Vec<Matrix>,
}

impl EndElement {
    /// `vertices` must be strictly increasing and `blocks[i]` square.
    pub fn new(vertices: Vec<VertexId>, blocks: Vec<Matrix>) -> Result<Self, EndoError> {
        if vertices.len() != blocks.len() {
            return Err(EndoError::ShapeMismatch("one block per vertex".into()));
        }
        if vertices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(EndoError::ShapeMismatch("vertices must be strictly increasing".into()));
        }
        if blocks.iter().any(|b| !b.is_square()) {
            return Err(EndoError::ShapeMismatch("blocks must be square".into()));
        }
        Ok(EndElement { vertices, blocks })
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn blocks(&self) -> &[Matrix] {
        &self.blocks
    }

    pub fn block(&self, v: VertexId) -> Option<&Matrix> {
        self.vertices.binary_search(&v).ok().map(|i| &self.blocks[i])
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(Matrix::is_zero)
    }

    /// The blocks laid out row-major one after another.
    pub fn flatten(&self) -> Vec<Rational> {
        self.blocks.iter().flat_map(|b| b.entries().iter().cloned()).collect()
    }

    /// The same tuple on a subset of the vertices.
    pub fn restrict(&self, vertices: &[VertexId]) -> Result<EndElement, EndoError> {
        let blocks = vertices
            .iter()
            .map(|&v| self.block(v).cloned().ok_or_else(|| EndoError::ShapeMismatch(format!("no block at {v:?}"))))
            .collect::<Result<_, _>>()?;
        EndElement::new(vertices.to_vec(), blocks)
    }

    /// Whether `T(f)·α(source) = α(target)·T(f)` for every edge of `sub`.
    pub fn commutes_with(&self, rep: &Representation, sub: &Subdiagram) -> bool {
        sub.edges().iter().all(|&e| {
            let edge = rep.quiver().edge(e);
            match (self.block(edge.source), self.block(edge.target)) {
                (Some(a), Some(b)) => rep.map(e).mul(a) == b.mul(rep.map(e)),
                _ => false,
            }
        })
    }
}

/// Block-wise product `a · b`.
pub fn end_multiply(a: &EndElement, b: &EndElement) -> Result<EndElement, EndoError> {
    if a.vertices != b.vertices {
        return Err(EndoError::ShapeMismatch("elements over different vertices".into()));
    }
    let blocks = a
        .blocks
        .iter()
        .zip(&b.blocks)
        .map(|(x, y)| x.try_mul(y))
        .collect::<Result<_, _>>()?;
    Ok(EndElement { vertices: a.vertices.clone(), blocks })
}

pub fn end_identity(alg: &EndAlgebra) -> EndElement {
    EndElement {
        vertices: alg.sub.vertices().to_vec(),
        blocks: alg.dims.iter().map(|&n| Matrix::identity(n)).collect(),
    }
}

/// `End(T|F)` as a subspace of `Π_{d ∈ F} Mat(n_d)`, flattened block by
/// block in vertex order, each block row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EndAlgebra {
    sub: Subdiagram,
    dims: Vec<usize>,
    space: Subspace,
}

impl EndAlgebra {
    pub fn subdiagram(&self) -> &Subdiagram {
        &self.sub
    }

    /// `n_d` for each subdiagram vertex, in order.
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn space(&self) -> &Subspace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// `Σ n_d²`.
    pub fn ambient_dim(&self) -> usize {
        self.space.ambient_dim()
    }

    /// Inverse of [`EndElement::flatten`].
    pub fn element(&self, coords: &[Rational]) -> Result<EndElement, EndoError> {
        if coords.len() != self.ambient_dim() {
            return Err(EndoError::ShapeMismatch(format!(
                "{} coordinates for an ambient of {}",
                coords.len(),
                self.ambient_dim()
            )));
        }
        let mut blocks = Vec::with_capacity(self.dims.len());
        let mut at = 0;
        for &n in &self.dims {
            blocks.push(Matrix::new(n, n, coords[at..at + n * n].to_vec())?);
            at += n * n;
        }
        Ok(EndElement { vertices: self.sub.vertices().to_vec(), blocks })
    }

    /// The RREF basis of the algebra as elements.
    pub fn basis(&self) -> Vec<EndElement> {
        self.space.basis().row_iter().map(|r| self.element(r).expect("basis rows have ambient length")).collect()
    }

    pub fn contains(&self, e: &EndElement) -> bool {
        e.vertices == self.sub.vertices()
            && e.blocks.iter().zip(&self.dims).all(|(b, &n)| b.rows() == n)
            && self.space.contains_vector(&e.flatten())
    }
}

/// Solves `T(f)·α(s) − α(t)·T(f) = 0` for all edges `f: s → t` of `sub` as
/// one kernel over the flattened blocks.
pub fn compute_end(rep: &Representation, sub: &Subdiagram) -> EndAlgebra {
    let vertices = sub.vertices();
    let dims: Vec<usize> = vertices.iter().map(|&v| rep.dim(v)).collect();
    let mut offsets = Vec::with_capacity(dims.len());
    let mut total = 0;
    for &n in &dims {
        offsets.push(total);
        total += n * n;
    }
    let slot = |v: VertexId| vertices.binary_search(&v).expect("edge endpoints lie in the subdiagram");
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for &e in sub.edges() {
        let edge = rep.quiver().edge(e);
        let m = rep.map(e);
        let (s, t) = (slot(edge.source), slot(edge.target));
        let (ns, nt) = (dims[s], dims[t]);
        // Entry (i, j) of T(f)·α(s) − α(t)·T(f), with T(f) of shape nt × ns.
        for i in 0..nt {
            for j in 0..ns {
                let mut row = vec![Rational::zero(); total];
                for k in 0..ns {
                    let c = m.get(i, k);
                    if !c.is_zero() {
                        row[offsets[s] + k * ns + j] += c;
                    }
                }
                for k in 0..nt {
                    let c = m.get(k, j);
                    if !c.is_zero() {
                        row[offsets[t] + i * nt + k] -= c;
                    }
                }
                rows.push(row);
            }
        }
    }
    let system = Matrix::from_rows(total, rows).expect("rows have the ambient length");
    EndAlgebra { sub: sub.clone(), dims, space: Subspace::kernel_of(&system) }
}

/// The block-diagonal matrix of `e` on the ambient space of `context`.
pub fn context_action(e: &EndElement, context: &[VertexId]) -> Result<Matrix, EndoError> {
    let blocks = context
        .iter()
        .map(|&s| e.block(s).cloned().ok_or(EndoError::SortOutsideSubdiagram(s)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Matrix::block_diag(&blocks))
}

/// The map induced by `e` on `K/K'`, on the object's quotient basis.
pub fn act_on_object(e: &EndElement, obj: &DefinableObject) -> Result<Matrix, EndoError> {
    let phi = context_action(e, obj.context())?;
    if phi.rows() != obj.ambient_dim() {
        return Err(EndoError::ShapeMismatch("block sizes differ from the object's ambient".into()));
    }
    if !obj.k().contains(&obj.k().map(&phi)?)? || !obj.k_prime().contains(&obj.k_prime().map(&phi)?)? {
        return Err(EndoError::DoesNotPreserve);
    }
    Ok(obj.quotient().induced_map(&phi, obj.quotient())?)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::category::make_object;
    use crate::formula::parse_formula;
    use crate::quiver::Quiver;

    fn one_vertex(n: usize, loops: Vec<Matrix>) -> Representation {
        let edges: Vec<(String, &str, &str)> = (0..loops.len()).map(|i| (format!("f{i}"), "d", "d")).collect();
        let q = Quiver::new(["d"], edges.iter().map(|(n, s, t)| (n.as_str(), *s, *t)).collect()).unwrap();
        Representation::checked(Arc::new(q), vec![n], loops).unwrap()
    }

    #[test]
    fn hand_examples() {
        for n in 0..4 {
            let free = one_vertex(n, vec![]);
            assert_eq!(compute_end(&free, &Subdiagram::whole(free.quiver())).dim(), n * n);
            let id = one_vertex(n, vec![Matrix::identity(n)]);
            assert_eq!(compute_end(&id, &Subdiagram::whole(id.quiver())).dim(), n * n);
        }
        let f = Matrix::from_i64(&[&[0, 1], &[0, 0]]);
        let nil = one_vertex(2, vec![f.clone()]);
        let alg = compute_end(&nil, &Subdiagram::whole(nil.quiver()));
        assert_eq!(alg.dim(), 2);
        let expected = Subspace::spanned_by(&Matrix::from_i64(&[&[1, 0, 0, 1], &[0, 1, 0, 0]]));
        assert_eq!(alg.space(), &expected);
        for b in alg.basis() {
            assert!(b.commutes_with(&nil, alg.subdiagram()));
        }
    }

    #[test]
    fn multiplication() {
        let f = Matrix::from_i64(&[&[0, 1], &[0, 0]]);
        let nil = one_vertex(2, vec![f.clone()]);
        let alg = compute_end(&nil, &Subdiagram::whole(nil.quiver()));
        let elem = |a: i64, b: i64| {
            let m = Matrix::identity(2).scale(&Rational::from(a)).add(&f.scale(&Rational::from(b)));
            EndElement::new(vec![VertexId(0)], vec![m]).unwrap()
        };
        let one = end_identity(&alg);
        assert!(alg.contains(&one));
        assert_eq!(end_multiply(&elem(3, 5), &one).unwrap(), elem(3, 5));
        // (aI + bf)(cI + df) = acI + (ad + bc)f.
        assert_eq!(end_multiply(&elem(2, 3), &elem(5, 7)).unwrap(), elem(10, 2 * 7 + 3 * 5));
        assert!(end_multiply(&elem(0, 0), &elem(5, 7)).unwrap().is_zero());
        let other = EndElement::new(vec![VertexId(1)], vec![Matrix::identity(2)]).unwrap();
        assert!(end_multiply(&one, &other).is_err());
    }

    #[test]
    fn action_examples() {
        let f = Matrix::from_i64(&[&[0, 1], &[0, 0]]);
        let rep = Arc::new(one_vertex(2, vec![f.clone()]));
        let q = rep.quiver();
        let alg = compute_end(&rep, &Subdiagram::whole(q));
        let obj = |phi: &str, psi: &str| {
            make_object(&parse_formula(phi, "x:d", q).unwrap(), &parse_formula(psi, "x:d", q).unwrap(), &rep).unwrap()
        };
        let whole = obj("0 = 0", "x = 0");
        assert_eq!(act_on_object(&end_identity(&alg), &whole).unwrap(), Matrix::identity(2));
        let zero = obj("x = 0", "x = 0");
        let a = act_on_object(&end_identity(&alg), &zero).unwrap();
        assert_eq!((a.rows(), a.cols()), (0, 0));
        let coim = obj("0 = 0", "exists y:d . f0(y) = x");
        let fe = EndElement::new(vec![VertexId(0)], vec![f]).unwrap();
        assert!(act_on_object(&fe, &coim).unwrap().is_zero());
        let swap = EndElement::new(vec![VertexId(0)], vec![Matrix::from_i64(&[&[0, 1], &[1, 0]])]).unwrap();
        assert_eq!(act_on_object(&swap, &coim).unwrap_err(), EndoError::DoesNotPreserve);
    }
}
