//! Sparse matrices over Q(t) with tensor-leg structure.
//!
//! Rows and columns carry a shape (a list of leg dimensions); a multi-index
//! `(i_1, .., i_k)` maps to the linear index `i_1 * d_2 * .. * d_k + ..`, so the
//! first leg is the most significant. Only nonzero entries are stored.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub type SparseVec = BTreeMap<usize, Scalar>;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QMatrix {
    row_shape: Vec<usize>,
    col_shape: Vec<usize>,
    rows: Vec<SparseVec>,
}

/// Linear index of a multi-index in the given shape.
pub fn linear_index(shape: &[usize], idx: &[usize]) -> usize {
    debug_assert_eq!(shape.len(), idx.len());
    idx.iter().zip(shape).fold(0, |acc, (&i, &d)| {
        debug_assert!(i < d);
        acc * d + i
    })
}

/// Inverse of [`linear_index`].
pub fn multi_index(shape: &[usize], mut lin: usize) -> Vec<usize> {
    let mut out = vec![0; shape.len()];
    for (slot, &d) in out.iter_mut().zip(shape).rev() {
        *slot = lin % d;
        lin /= d;
    }
    out
}

impl QMatrix {
    pub fn zeros(row_shape: Vec<usize>, col_shape: Vec<usize>) -> Self {
        let n: usize = row_shape.iter().product();
        QMatrix {
            row_shape,
            col_shape,
            rows: vec![SparseVec::new(); n],
        }
    }

    pub fn square_zeros(shape: Vec<usize>) -> Self {
        QMatrix::zeros(shape.clone(), shape)
    }

    pub fn identity(shape: Vec<usize>) -> Self {
        let mut m = QMatrix::square_zeros(shape);
        for (i, row) in m.rows.iter_mut().enumerate() {
            row.insert(i, Scalar::one());
        }
        m
    }

    pub fn identity_n(n: usize) -> Self {
        QMatrix::identity(vec![n])
    }

    pub fn diag(entries: &[Scalar]) -> Self {
        let mut m = QMatrix::square_zeros(vec![entries.len()]);
        for (i, e) in entries.iter().enumerate() {
            m.set(i, i, e.clone());
        }
        m
    }

    /// Builds a plain `rows x cols` matrix from a dense table.
    pub fn from_dense(table: &[Vec<Scalar>]) -> Self {
        let nr = table.len();
        let nc = table.first().map_or(0, |r| r.len());
        let mut m = QMatrix::zeros(vec![nr], vec![nc]);
        for (i, row) in table.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn row_shape(&self) -> &[usize] {
        &self.row_shape
    }

    pub fn col_shape(&self) -> &[usize] {
        &self.col_shape
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.col_shape.iter().product()
    }

    pub fn is_square(&self) -> bool {
        self.nrows() == self.ncols()
    }

    pub fn with_shapes(mut self, row_shape: Vec<usize>, col_shape: Vec<usize>) -> Self {
        assert_eq!(row_shape.iter().product::<usize>(), self.nrows());
        assert_eq!(col_shape.iter().product::<usize>(), self.ncols());
        self.row_shape = row_shape;
        self.col_shape = col_shape;
        self
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.rows[i].get(&j).cloned().unwrap_or_default()
    }

    pub fn get_ref(&self, i: usize, j: usize) -> Option<&Scalar> {
        self.rows[i].get(&j)
    }

    /// Entry at multi-indices.
    pub fn at(&self, row: &[usize], col: &[usize]) -> Scalar {
        self.get(
            linear_index(&self.row_shape, row),
            linear_index(&self.col_shape, col),
        )
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        assert!(j < self.ncols(), "column {j} out of range");
        if v.is_zero() {
            self.rows[i].remove(&j);
        } else {
            self.rows[i].insert(j, v);
        }
    }

    pub fn set_at(&mut self, row: &[usize], col: &[usize], v: Scalar) {
        let (i, j) = (
            linear_index(&self.row_shape, row),
            linear_index(&self.col_shape, col),
        );
        self.set(i, j, v);
    }

    pub fn add_at(&mut self, i: usize, j: usize, v: &Scalar) {
        let cur = self.get(i, j);
        self.set(i, j, &cur + v);
    }

    pub fn row(&self, i: usize) -> &SparseVec {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    /// Nonzero entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |(&j, v)| (i, j, v)))
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.is_empty())
    }

    pub fn is_diagonal(&self) -> bool {
        self.entries().all(|(i, j, _)| i == j)
    }

    fn check_same_shape(&self, o: &QMatrix) -> Result<()> {
        if self.nrows() != o.nrows() || self.ncols() != o.ncols() {
            return Err(Error::Shape(format!(
                "{}x{} vs {}x{}",
                self.nrows(),
                self.ncols(),
                o.nrows(),
                o.ncols()
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, o: &QMatrix) -> Result<QMatrix> {
        self.check_same_shape(o)?;
        Ok(self.combine(o, Scalar::one()))
    }

    pub fn try_sub(&self, o: &QMatrix) -> Result<QMatrix> {
        self.check_same_shape(o)?;
        Ok(self.combine(o, Scalar::int(-1)))
    }

    /// `self + c * o`; shapes are taken from `self`.
    pub fn combine(&self, o: &QMatrix, c: Scalar) -> QMatrix {
        let mut out = self.clone();
        for (i, row) in o.rows.iter().enumerate() {
            for (&j, v) in row {
                out.add_at(i, j, &(&c * v));
            }
        }
        out
    }

    pub fn add(&self, o: &QMatrix) -> QMatrix {
        self.try_add(o).expect("matrix shapes differ")
    }

    pub fn sub(&self, o: &QMatrix) -> QMatrix {
        self.try_sub(o).expect("matrix shapes differ")
    }

    pub fn scale(&self, c: &Scalar) -> QMatrix {
        if c.is_zero() {
            return QMatrix::zeros(self.row_shape.clone(), self.col_shape.clone());
        }
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(|(&j, v)| (j, v * c)).collect())
            .collect();
        QMatrix {
            row_shape: self.row_shape.clone(),
            col_shape: self.col_shape.clone(),
            rows,
        }
    }

    pub fn try_mul(&self, o: &QMatrix) -> Result<QMatrix> {
        if self.ncols() != o.nrows() {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.nrows(),
                self.ncols(),
                o.nrows(),
                o.ncols()
            )));
        }
        let mut rows = Vec::with_capacity(self.nrows());
        for r in &self.rows {
            let mut acc = SparseVec::new();
            for (&k, a) in r {
                for (&j, b) in &o.rows[k] {
                    let term = a * b;
                    match acc.get_mut(&j) {
                        Some(cur) => *cur += &term,
                        None => {
                            acc.insert(j, term);
                        }
                    }
                }
            }
            acc.retain(|_, v| !v.is_zero());
            rows.push(acc);
        }
        Ok(QMatrix {
            row_shape: self.row_shape.clone(),
            col_shape: o.col_shape.clone(),
            rows,
        })
    }

    pub fn mul(&self, o: &QMatrix) -> QMatrix {
        self.try_mul(o).expect("matrix shapes differ")
    }

    pub fn transpose(&self) -> QMatrix {
        let mut out = QMatrix::zeros(self.col_shape.clone(), self.row_shape.clone());
        for (i, j, v) in self.entries() {
            out.rows[j].insert(i, v.clone());
        }
        out
    }

    /// Kronecker product; leg shapes concatenate.
    pub fn kron(&self, o: &QMatrix) -> QMatrix {
        let row_shape = [self.row_shape.as_slice(), o.row_shape.as_slice()].concat();
        let col_shape = [self.col_shape.as_slice(), o.col_shape.as_slice()].concat();
        let (onr, onc) = (o.nrows(), o.ncols());
        let mut out = QMatrix::zeros(row_shape, col_shape);
        for (i, j, a) in self.entries() {
            for (k, l, b) in o.entries() {
                out.rows[i * onr + k].insert(j * onc + l, a * b);
            }
        }
        out
    }

    pub fn trace(&self) -> Scalar {
        (0..self.nrows().min(self.ncols()))
            .map(|i| self.get(i, i))
            .sum()
    }

    /// Entries in row-major order as one sparse vector of length `nrows * ncols`.
    pub fn flatten(&self) -> SparseVec {
        let nc = self.ncols();
        self.entries()
            .map(|(i, j, v)| (i * nc + j, v.clone()))
            .collect()
    }

    pub fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> QMatrix {
        let mut out = QMatrix::zeros(self.row_shape.clone(), self.col_shape.clone());
        for (i, j, v) in self.entries() {
            out.set(i, j, f(v));
        }
        out
    }

    /// Evaluates every entry at `t = t0`; `None` at a pole.
    pub fn specialize(&self, t0: (i64, i64)) -> Option<QMatrix> {
        let mut out = QMatrix::zeros(self.row_shape.clone(), self.col_shape.clone());
        for (i, j, v) in self.entries() {
            out.set(i, j, v.specialize(t0)?);
        }
        Some(out)
    }

    /// The flip `P(e_a ⊗ e_b) = e_b ⊗ e_a` on two legs of dimension `dim`.
    pub fn flip(dim: usize) -> QMatrix {
        let mut p = QMatrix::square_zeros(vec![dim, dim]);
        for a in 0..dim {
            for b in 0..dim {
                p.set_at(&[b, a], &[a, b], Scalar::one());
            }
        }
        p
    }

    /// Swaps the two legs of a square two-leg operator: `P M P`.
    pub fn swap_legs(&self) -> QMatrix {
        let d = self.row_shape[0];
        let p = QMatrix::flip(d);
        p.mul(self).mul(&p)
    }
}

/// Places a two-leg operator on legs `(first, first + 1)` (1-based) of a
/// `total_legs`-fold tensor power of a `dim`-dimensional space.
pub fn leg_embed(
    m: &QMatrix,
    legs: (usize, usize),
    total_legs: usize,
    dim: usize,
) -> Result<QMatrix> {
    let d2 = dim * dim;
    if m.nrows() != d2 || m.ncols() != d2 {
        return Err(Error::Shape(format!(
            "expected a {d2}x{d2} operator, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    if legs.1 != legs.0 + 1 || legs.0 == 0 || legs.1 > total_legs {
        return Err(Error::Shape(format!(
            "legs {legs:?} are not adjacent legs of {total_legs}"
        )));
    }
    let left = QMatrix::identity(vec![dim; legs.0 - 1]);
    let right = QMatrix::identity(vec![dim; total_legs - legs.1]);
    let core = m.clone().with_shapes(vec![dim, dim], vec![dim, dim]);
    Ok(left.kron(&core).kron(&right))
}

impl fmt::Display for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (n, (i, j, v)) in self.entries().enumerate() {
            if n > 0 {
                write!(f, "; ")?;
            }
            let ri = multi_index(&self.row_shape, i);
            let cj = multi_index(&self.col_shape, j);
            write!(f, "{ri:?}{cj:?}={v}")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Scalar {
        Scalar::t_pow(2)
    }

    #[test]
    fn kron_of_identities() {
        let i2 = QMatrix::identity_n(2);
        assert_eq!(i2.kron(&i2), QMatrix::identity(vec![2, 2]));
    }

    #[test]
    fn kron_with_diagonal() {
        let d = QMatrix::diag(&[q(), Scalar::one()]);
        let k = d.kron(&QMatrix::identity_n(2));
        let want = QMatrix::diag(&[q(), q(), Scalar::one(), Scalar::one()])
            .with_shapes(vec![2, 2], vec![2, 2]);
        assert_eq!(k, want);
    }

    #[test]
    fn leg_embed_identity() {
        let id = QMatrix::identity(vec![3, 3]);
        assert_eq!(
            leg_embed(&id, (1, 2), 3, 3).unwrap(),
            QMatrix::identity(vec![3, 3, 3])
        );
    }

    #[test]
    fn leg_embed_flip_acts_on_basis_vector() {
        let p = leg_embed(&QMatrix::flip(2), (1, 2), 3, 2).unwrap();
        // e1 ⊗ e2 ⊗ e1  ->  e2 ⊗ e1 ⊗ e1 (0-based: [0,1,0] -> [1,0,0])
        let src = linear_index(&[2, 2, 2], &[0, 1, 0]);
        let dst = linear_index(&[2, 2, 2], &[1, 0, 0]);
        assert_eq!(p.row(dst).keys().copied().collect::<Vec<_>>(), vec![src]);
    }

    #[test]
    fn leg_embed_rejects_bad_shapes() {
        assert!(leg_embed(&QMatrix::identity_n(3), (1, 2), 3, 2).is_err());
        assert!(leg_embed(&QMatrix::identity(vec![2, 2]), (1, 3), 3, 2).is_err());
    }

    #[test]
    fn multi_index_roundtrip() {
        let shape = [3, 2, 4];
        for lin in 0..24 {
            assert_eq!(linear_index(&shape, &multi_index(&shape, lin)), lin);
        }
    }
}
