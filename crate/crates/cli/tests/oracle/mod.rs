//! Gauss-Jordan elimination over `BigRational`, written without any of the
//! engine's linear algebra. Matrices are lists of rows; subspaces are
//! lists of spanning rows, compared through [`span`].
#![allow(dead_code)]

use num_rational::BigRational;
use num_traits::{One, Zero};
use repcat::{Matrix, Rational, Subspace};

pub type Q = BigRational;
pub type Rows = Vec<Vec<Q>>;

pub fn q(x: &Rational) -> Q {
    BigRational::new(x.numer(), x.denom())
}

pub fn int(n: i64) -> Q {
    BigRational::from_integer(n.into())
}

pub fn rows(m: &Matrix) -> Rows {
    m.row_iter().map(|r| r.iter().map(q).collect()).collect()
}

pub fn basis(s: &Subspace) -> Rows {
    rows(s.basis())
}

/// Reduced row echelon form with the same number of rows, and its pivots.
pub fn rref(m: &Rows, cols: usize) -> (Rows, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = Q::one() / &a[r][c];
        for x in a[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

pub fn rank(m: &Rows, cols: usize) -> usize {
    rref(m, cols).1.len()
}

/// The canonical basis of the row span: the nonzero rows of the RREF.
pub fn span(m: &Rows, cols: usize) -> Rows {
    let (r, p) = rref(m, cols);
    r.into_iter().take(p.len()).collect()
}

/// A basis of `{x : m x = 0}`, one vector per free column.
pub fn kernel(m: &Rows, cols: usize) -> Rows {
    let (r, pivots) = rref(m, cols);
    let mut out = Vec::new();
    for f in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Q::zero(); cols];
        v[f] = Q::one();
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = -r[i][f].clone();
        }
        out.push(v);
    }
    out
}

pub fn transpose(m: &Rows, cols: usize) -> Rows {
    (0..cols).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn mul(a: &Rows, b: &Rows, b_cols: usize) -> Rows {
    a.iter()
        .map(|r| {
            (0..b_cols)
                .map(|j| r.iter().zip(b).fold(Q::zero(), |acc, (x, row)| acc + x * &row[j]))
                .collect()
        })
        .collect()
}

pub fn mul_vec(a: &Rows, v: &[Q]) -> Vec<Q> {
    a.iter().map(|r| r.iter().zip(v).fold(Q::zero(), |acc, (x, y)| acc + x * y)).collect()
}

pub fn identity(n: usize) -> Rows {
    (0..n).map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()).collect()
}

/// Whether every row of `v` lies in the span of `u`.
pub fn contains(u: &Rows, v: &Rows, n: usize) -> bool {
    let mut both = u.clone();
    both.extend(v.iter().cloned());
    rank(u, n) == rank(&both, n)
}

pub fn sum(u: &Rows, v: &Rows, n: usize) -> Rows {
    let mut both = u.clone();
    both.extend(v.iter().cloned());
    span(&both, n)
}

/// `u ∩ v` from the solutions of `a·U = b·V`.
pub fn intersect(u: &Rows, v: &Rows, n: usize) -> Rows {
    let (u, v) = (span(u, n), span(v, n));
    // Columns: coefficients a (len |u|) then b (len |v|); rows: coordinates.
    let k = u.len() + v.len();
    let system: Rows = (0..n)
        .map(|c| u.iter().map(|r| r[c].clone()).chain(v.iter().map(|r| -r[c].clone())).collect())
        .collect();
    let sols = kernel(&system, k);
    let vectors: Rows = sols
        .iter()
        .map(|s| (0..n).map(|c| u.iter().zip(s).fold(Q::zero(), |acc, (r, a)| acc + a * &r[c])).collect())
        .collect();
    span(&vectors, n)
}

pub fn project(s: &Rows, coords: &[usize]) -> Rows {
    let picked: Rows = s.iter().map(|r| coords.iter().map(|&c| r[c].clone()).collect()).collect();
    span(&picked, coords.len())
}

/// `{x : m x ∈ s}` for `m` of shape `rows × cols`.
pub fn preimage(m: &Rows, cols: usize, s: &Rows, rows: usize) -> Rows {
    // `s` is cut out by its annihilator `A`; solve `A m x = 0`.
    let ann = kernel(&span(s, rows), rows);
    let am = mul(&ann, m, cols);
    span(&kernel(&am, cols), cols)
}

pub fn map_subspace(m: &Rows, s: &Rows, rows: usize) -> Rows {
    let images: Rows = s.iter().map(|v| mul_vec(m, v)).collect();
    span(&images, rows)
}

pub fn inverse(m: &Rows) -> Option<Rows> {
    let n = m.len();
    if n == 0 {
        return Some(Vec::new());
    }
    let aug: Rows = m.iter().zip(identity(n)).map(|(r, e)| r.iter().cloned().chain(e).collect()).collect();
    let (r, pivots) = rref(&aug, 2 * n);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(r.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn zero_rows(r: usize, c: usize) -> Rows {
    vec![vec![Q::zero(); c]; r]
}
