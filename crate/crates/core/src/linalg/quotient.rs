use crate::rational::Rational;

use super::{LinalgError, Matrix, Subspace};

/// A chosen basis of the quotient `big / small`.
///
/// The complement is built greedily from `big`'s RREF rows in order, keeping
/// each row that is independent of `small` and the rows already kept. For
/// `big` the full space this picks the lexicographically least standard
/// vectors independent of `small`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuotientBasis {
    big: Subspace,
    small: Subspace,
    /// One lifted representative per quotient basis vector.
    complement: Matrix,
    /// Pivot columns of `big`.
    pivots: Vec<usize>,
    /// Inverse of `[complement; small.basis]` restricted to `pivots`.
    coord: Matrix,
}

impl QuotientBasis {
    pub fn new(big: &Subspace, small: &Subspace) -> Result<Self, LinalgError> {
        if big.ambient_dim() != small.ambient_dim() {
            return Err(LinalgError::DimensionMismatch { expected: big.ambient_dim(), found: small.ambient_dim() });
        }
        if !big.contains(small)? {
            return Err(LinalgError::NotASubspace);
        }
        let n = big.ambient_dim();
        let target = big.dim() - small.dim();
        let mut acc = small.clone();
        let mut chosen = Vec::with_capacity(target);
        for row in big.basis().row_iter() {
            if chosen.len() == target {
                break;
            }
            if !acc.contains_vector(row) {
                chosen.push(row.to_vec());
                acc = Subspace::spanned_by(&acc.basis().vstack(&Matrix::from_rows(n, vec![row.to_vec()])?));
            }
        }
        let complement = Matrix::from_rows(n, chosen)?;
        let pivots = big.pivots();
        let stacked = complement.vstack(small.basis()).select_columns(&pivots);
        let coord = stacked.inverse().expect("complement and small basis span big");
        Ok(QuotientBasis { big: big.clone(), small: small.clone(), complement, pivots, coord })
    }

    pub fn big(&self) -> &Subspace {
        &self.big
    }

    pub fn small(&self) -> &Subspace {
        &self.small
    }

    pub fn dim(&self) -> usize {
        self.complement.rows()
    }

    pub fn ambient_dim(&self) -> usize {
        self.big.ambient_dim()
    }

    /// Lifted representatives of the quotient basis, one per row.
    pub fn complement(&self) -> &Matrix {
        &self.complement
    }

    /// Coordinates of the class of `v`; `None` if `v ∉ big`.
    pub fn coords(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        if !self.big.contains_vector(v) {
            return None;
        }
        Some(self.coords_unchecked(v))
    }

    fn coords_unchecked(&self, v: &[Rational]) -> Vec<Rational> {
        let r = self.dim();
        let restricted: Vec<Rational> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        (0..r)
            .map(|j| {
                let mut acc = Rational::zero();
                for (i, x) in restricted.iter().enumerate() {
                    let c = self.coord.get(i, j);
                    if !x.is_zero() && !c.is_zero() {
                        acc += x * c;
                    }
                }
                acc
            })
            .collect()
    }

    /// The representative `Σ c_j q_j` of the class with coordinates `c`.
    pub fn lift(&self, c: &[Rational]) -> Vec<Rational> {
        assert_eq!(c.len(), self.dim(), "quotient coordinate length mismatch");
        let mut out = vec![Rational::zero(); self.ambient_dim()];
        for (cj, row) in c.iter().zip(self.complement.row_iter()) {
            if cj.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(row) {
                if !x.is_zero() {
                    *o += cj * x;
                }
            }
        }
        out
    }

    /// Matrix (rows = `cod.dim()`, cols = `self.dim()`) of the map induced
    /// by the ambient linear map `m` from this quotient to `cod`.
    pub fn induced_map(&self, m: &Matrix, cod: &QuotientBasis) -> Result<Matrix, LinalgError> {
        if m.cols() != self.ambient_dim() {
            return Err(LinalgError::DimensionMismatch { expected: self.ambient_dim(), found: m.cols() });
        }
        if m.rows() != cod.ambient_dim() {
            return Err(LinalgError::DimensionMismatch { expected: cod.ambient_dim(), found: m.rows() });
        }
        if !cod.big.contains(&self.big.map(m)?)? || !cod.small.contains(&self.small.map(m)?)? {
            return Err(LinalgError::MapDoesNotDescend);
        }
        let mut out = Matrix::zeros(cod.dim(), self.dim());
        for (j, q) in self.complement.row_iter().enumerate() {
            let image = m.mul_vec(q);
            for (i, c) in cod.coords_unchecked(&image).into_iter().enumerate() {
                out.set(i, j, c);
            }
        }
        Ok(out)
    }
}

/// `dim big − dim small`.
pub fn quotient_dim(big: &Subspace, small: &Subspace) -> Result<usize, LinalgError> {
    if big.ambient_dim() != small.ambient_dim() {
        return Err(LinalgError::DimensionMismatch { expected: big.ambient_dim(), found: small.ambient_dim() });
    }
    if !big.contains(small)? {
        return Err(LinalgError::NotASubspace);
    }
    Ok(big.dim() - small.dim())
}

/// Map induced by `m` from `dom.0 / dom.1` to `cod.0 / cod.1` on the
/// deterministic quotient bases of [`QuotientBasis`].
pub fn induced_map(m: &Matrix, dom: (&Subspace, &Subspace), cod: (&Subspace, &Subspace)) -> Result<Matrix, LinalgError> {
    let d = QuotientBasis::new(dom.0, dom.1)?;
    let c = QuotientBasis::new(cod.0, cod.1)?;
    d.induced_map(m, &c)
}
