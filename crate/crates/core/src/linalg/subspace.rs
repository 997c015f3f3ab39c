use std::fmt;

use crate::rational::Rational;

use super::{LinalgError, Matrix};

/// A subspace of `ℚ^ambient_dim`, stored as its RREF basis (no zero rows).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Matrix,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace { ambient_dim, basis: Matrix::zeros(0, ambient_dim) }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace { ambient_dim, basis: Matrix::identity(ambient_dim) }
    }

    /// Row space of `rows`.
    pub fn spanned_by(rows: &Matrix) -> Self {
        let (r, pivots) = rows.rref_with_pivots();
        let keep: Vec<usize> = (0..pivots.len()).collect();
        Subspace { ambient_dim: rows.cols(), basis: r.select_rows(&keep) }
    }

    pub fn from_vectors(ambient_dim: usize, vectors: Vec<Vec<Rational>>) -> Result<Self, LinalgError> {
        Ok(Self::spanned_by(&Matrix::from_rows(ambient_dim, vectors)?))
    }

    /// `{v : m·v = 0}`, read off the RREF of `m`.
    pub fn kernel_of(m: &Matrix) -> Self {
        let n = m.cols();
        let (r, pivots) = m.rref_with_pivots();
        if pivots.is_empty() {
            return Self::full(n);
        }
        let mut is_pivot = vec![false; n];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..n).filter(|&j| !is_pivot[j]).collect();
        let mut vectors = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v = vec![Rational::zero(); n];
            v[f] = Rational::one();
            for (i, &p) in pivots.iter().enumerate() {
                let x = r.get(i, f);
                if !x.is_zero() {
                    v[p] = -x;
                }
            }
            vectors.push(v);
        }
        Self::spanned_by(&Matrix::from_rows(n, vectors).expect("kernel vectors have ambient length"))
    }

    #[inline]
    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    /// RREF basis, one vector per row.
    #[inline]
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim
    }

    /// Leading column of each basis row.
    pub fn pivots(&self) -> Vec<usize> {
        self.basis
            .row_iter()
            .map(|r| r.iter().position(|x| !x.is_zero()).expect("basis rows are nonzero"))
            .collect()
    }

    /// Rows spanning the orthogonal complement, so that
    /// `self = {x : a·x = 0 for every row a}`.
    pub fn annihilator(&self) -> Matrix {
        Self::kernel_of(&self.basis).basis
    }

    fn check_dim(&self, other: &Subspace) -> Result<(), LinalgError> {
        if self.ambient_dim != other.ambient_dim {
            return Err(LinalgError::DimensionMismatch { expected: self.ambient_dim, found: other.ambient_dim });
        }
        Ok(())
    }

    pub fn contains_vector(&self, v: &[Rational]) -> bool {
        assert_eq!(v.len(), self.ambient_dim, "vector length mismatch");
        // Reduce against the RREF basis using the pivot positions.
        let mut w = v.to_vec();
        for (row, p) in self.basis.row_iter().zip(self.pivots()) {
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
    }

    /// True iff `other ⊆ self`.
    pub fn contains(&self, other: &Subspace) -> Result<bool, LinalgError> {
        self.check_dim(other)?;
        if other.dim() > self.dim() {
            return Ok(false);
        }
        if self.is_full() || other.is_zero() {
            return Ok(true);
        }
        Ok(other.basis.row_iter().all(|r| self.contains_vector(r)))
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check_dim(other)?;
        if self.is_full() {
            return Ok(other.clone());
        }
        if other.is_full() {
            return Ok(self.clone());
        }
        if self.is_zero() || other.is_zero() {
            return Ok(Subspace::zero(self.ambient_dim));
        }
        Ok(Self::kernel_of(&self.annihilator().vstack(&other.annihilator())))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check_dim(other)?;
        Ok(Self::spanned_by(&self.basis.vstack(&other.basis)))
    }

    /// Image under the coordinate projection onto `coords` (in that order).
    pub fn project(&self, coords: &[usize]) -> Result<Subspace, LinalgError> {
        if let Some(&bad) = coords.iter().find(|&&c| c >= self.ambient_dim) {
            return Err(LinalgError::IndexOutOfRange { index: bad, bound: self.ambient_dim });
        }
        Ok(Self::spanned_by(&self.basis.select_columns(coords)))
    }

    /// `{v : m·v ∈ self}` where `m` maps into this subspace's ambient space.
    pub fn preimage(&self, m: &Matrix) -> Result<Subspace, LinalgError> {
        if m.rows() != self.ambient_dim {
            return Err(LinalgError::DimensionMismatch { expected: self.ambient_dim, found: m.rows() });
        }
        if self.is_full() {
            return Ok(Subspace::full(m.cols()));
        }
        Ok(Self::kernel_of(&self.annihilator().mul(m)))
    }

    /// `m(self)`.
    pub fn map(&self, m: &Matrix) -> Result<Subspace, LinalgError> {
        if m.cols() != self.ambient_dim {
            return Err(LinalgError::DimensionMismatch { expected: self.ambient_dim, found: m.cols() });
        }
        Ok(Self::spanned_by(&self.basis.mul(&m.transpose())))
    }

    /// `self × other` inside `ℚ^(a+b)`.
    pub fn product(&self, other: &Subspace) -> Subspace {
        let left = self.basis.hstack(&Matrix::zeros(self.dim(), other.ambient_dim));
        let right = Matrix::zeros(other.dim(), self.ambient_dim).hstack(&other.basis);
        // Already in RREF: pivots of the left block precede those of the right.
        Subspace { ambient_dim: self.ambient_dim + other.ambient_dim, basis: left.vstack(&right) }
    }

    /// Embeds this subspace into `ℚ^ambient` placing coordinate `i` at
    /// `positions[i]`; the remaining coordinates are zero.
    pub fn embed(&self, ambient: usize, positions: &[usize]) -> Result<Subspace, LinalgError> {
        if positions.len() != self.ambient_dim {
            return Err(LinalgError::DimensionMismatch { expected: self.ambient_dim, found: positions.len() });
        }
        if let Some(&bad) = positions.iter().find(|&&p| p >= ambient) {
            return Err(LinalgError::IndexOutOfRange { index: bad, bound: ambient });
        }
        let mut m = Matrix::zeros(self.dim(), ambient);
        for i in 0..self.dim() {
            for (j, &p) in positions.iter().enumerate() {
                m.set(i, p, self.basis.get(i, j).clone());
            }
        }
        Ok(Self::spanned_by(&m))
    }

    /// `self × ℚ^extra` with this subspace occupying `positions` and every
    /// other coordinate free.
    pub fn cylinder(&self, ambient: usize, positions: &[usize]) -> Result<Subspace, LinalgError> {
        let base = self.embed(ambient, positions)?;
        let mut taken = vec![false; ambient];
        for &p in positions {
            taken[p] = true;
        }
        let free: Vec<Vec<Rational>> = (0..ambient)
            .filter(|&j| !taken[j])
            .map(|j| {
                let mut v = vec![Rational::zero(); ambient];
                v[j] = Rational::one();
                v
            })
            .collect();
        base.sum(&Subspace::from_vectors(ambient, free)?)
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(ambient={}, basis={})", self.ambient_dim, self.basis)
    }
}
