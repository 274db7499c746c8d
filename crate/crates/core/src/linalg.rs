//! Exact rank, kernels, span membership and linear solves over Q(t).

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::matrix::{QMatrix, SparseVec};
use crate::scalar::Scalar;

/// Size heuristic used for pivot choice.
fn weight(s: &Scalar) -> usize {
    s.numer().degree().unwrap_or(0) + s.denom().degree().unwrap_or(0)
}

fn axpy(dst: &mut SparseVec, c: &Scalar, src: &SparseVec) {
    for (&k, v) in src {
        let term = c * v;
        match dst.get_mut(&k) {
            Some(cur) => {
                *cur += &term;
                if cur.is_zero() {
                    dst.remove(&k);
                }
            }
            None => {
                if !term.is_zero() {
                    dst.insert(k, term);
                }
            }
        }
    }
}

fn scale_vec(v: &SparseVec, c: &Scalar) -> SparseVec {
    v.iter().map(|(&k, x)| (k, x * c)).collect()
}

/// Incremental row echelon form keyed by the largest nonzero index.
///
/// Each stored row may carry a tag vector that follows the same linear
/// combinations, which is how kernels and dependency witnesses are recovered.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    pivots: BTreeMap<usize, (SparseVec, SparseVec)>,
}

impl Echelon {
    pub fn new() -> Self {
        Echelon::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `v` (and its tag) against the stored rows, leading term first.
    pub fn reduce(&self, mut v: SparseVec, mut tag: SparseVec) -> (SparseVec, SparseVec) {
        while let Some((&k, lead)) = v.iter().next_back() {
            let Some((row, rtag)) = self.pivots.get(&k) else {
                break;
            };
            // stored rows are normalized to leading coefficient 1
            let c = -lead.clone();
            axpy(&mut v, &c, row);
            axpy(&mut tag, &c, rtag);
        }
        (v, tag)
    }

    /// Inserts `v`; returns `None` if it was independent, otherwise the
    /// reduced tag (a relation among earlier tags and this one).
    pub fn insert_tagged(&mut self, v: SparseVec, tag: SparseVec) -> Option<SparseVec> {
        let (r, t) = self.reduce(v, tag);
        match r.iter().next_back() {
            None => Some(t),
            Some((&k, lead)) => {
                let inv = lead.inv().expect("nonzero lead");
                self.pivots
                    .insert(k, (scale_vec(&r, &inv), scale_vec(&t, &inv)));
                None
            }
        }
    }

    /// Inserts `v`; true if it increased the rank.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        self.insert_tagged(v, SparseVec::new()).is_none()
    }

    /// Stored rows, leading coefficient 1, by increasing pivot.
    pub fn rows(&self) -> impl Iterator<Item = &SparseVec> {
        self.pivots.values().map(|(r, _)| r)
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v.clone(), SparseVec::new()).0.is_empty()
    }
}

/// Rank of a family of vectors.
pub fn rank_of<'a>(vs: impl IntoIterator<Item = &'a SparseVec>) -> usize {
    let mut e = Echelon::new();
    for v in vs {
        e.insert(v.clone());
    }
    e.rank()
}

pub fn rank(m: &QMatrix) -> usize {
    rank_of(m.rows())
}

/// Scales so the entry at the smallest index is 1.
pub fn normalize_first(v: &SparseVec) -> SparseVec {
    match v.values().next() {
        None => SparseVec::new(),
        Some(first) => scale_vec(v, &first.inv().expect("nonzero")),
    }
}

/// Basis of the right kernel `{x : m x = 0}`, each vector normalized so its
/// first nonzero entry is 1.
pub fn kernel_basis(m: &QMatrix) -> Vec<SparseVec> {
    let cols = m.transpose();
    let mut e = Echelon::new();
    let mut out = Vec::new();
    for (j, col) in cols.rows().iter().enumerate() {
        let tag = SparseVec::from([(j, Scalar::one())]);
        if let Some(rel) = e.insert_tagged(col.clone(), tag) {
            out.push(normalize_first(&rel));
        }
    }
    out
}

/// Reusable reduction against a fixed family.
pub struct SpanSolver {
    ech: Echelon,
    len: usize,
}

impl SpanSolver {
    pub fn new(family: &[SparseVec]) -> SpanSolver {
        let mut ech = Echelon::new();
        for (i, v) in family.iter().enumerate() {
            ech.insert_tagged(v.clone(), SparseVec::from([(i, Scalar::one())]));
        }
        SpanSolver {
            ech,
            len: family.len(),
        }
    }

    /// Coefficients of `target` in the family, if it lies in their span.
    pub fn coefficients(&self, target: &SparseVec) -> Option<Vec<Scalar>> {
        let (r, t) = self.ech.reduce(target.clone(), SparseVec::new());
        if !r.is_empty() {
            return None;
        }
        // target - sum(t_i family_i) reduced to zero, so target = -t . family
        Some(
            (0..self.len)
                .map(|i| t.get(&i).map(|x| -x.clone()).unwrap_or_default())
                .collect(),
        )
    }
}

/// Expresses `target` in terms of `family`, if it lies in their span.
pub fn span_coefficients(family: &[SparseVec], target: &SparseVec) -> Option<Vec<Scalar>> {
    SpanSolver::new(family).coefficients(target)
}

/// Solves `a x = b` for square `a` by sparse Gauss-Jordan elimination.
pub fn solve_linear(a: &QMatrix, b: &QMatrix) -> Result<QMatrix> {
    let n = a.nrows();
    if !a.is_square() || b.nrows() != n {
        return Err(Error::Shape(format!(
            "solve {}x{} with rhs {}x{}",
            n,
            a.ncols(),
            b.nrows(),
            b.ncols()
        )));
    }
    // augmented rows: columns [0, n) from a, [n, n + m) from b
    let mut rows: Vec<SparseVec> = (0..n)
        .map(|i| {
            let mut r = a.row(i).clone();
            r.extend(b.row(i).iter().map(|(&j, v)| (n + j, v.clone())));
            r
        })
        .collect();
    let mut done = vec![false; n];
    let mut pivot_of_col = vec![usize::MAX; n];
    for col in 0..n {
        let pick = (0..n)
            .filter(|&i| !done[i])
            .filter_map(|i| rows[i].get(&col).map(|v| (weight(v) + rows[i].len(), i)))
            .min();
        let Some((_, p)) = pick else {
            return Err(Error::Singular {
                rank: rank(a),
                size: n,
            });
        };
        done[p] = true;
        pivot_of_col[col] = p;
        let inv = rows[p][&col].inv()?;
        rows[p] = scale_vec(&rows[p], &inv);
        let prow = rows[p].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == p {
                continue;
            }
            if let Some(c) = row.get(&col).cloned() {
                axpy(row, &-c, &prow);
            }
        }
    }
    let mut x = QMatrix::zeros(a.col_shape().to_vec(), b.col_shape().to_vec());
    for (col, &p) in pivot_of_col.iter().enumerate() {
        for (&j, v) in rows[p].range(n..) {
            x.set(col, j - n, v.clone());
        }
    }
    Ok(x)
}

pub fn inverse(a: &QMatrix) -> Result<QMatrix> {
    let id = QMatrix::identity(a.row_shape().to_vec());
    let x = solve_linear(a, &id)?;
    Ok(x.with_shapes(a.col_shape().to_vec(), a.row_shape().to_vec()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Scalar {
        Scalar::t_pow(2)
    }

    #[test]
    fn solve_diagonal() {
        let a = QMatrix::diag(&[q(), q().inv().unwrap()]);
        let b = QMatrix::from_dense(&[vec![Scalar::one()], vec![Scalar::one()]]);
        let x = solve_linear(&a, &b).unwrap();
        assert_eq!(x.get(0, 0), q().inv().unwrap());
        assert_eq!(x.get(1, 0), q());
    }

    #[test]
    fn rank_of_identity() {
        assert_eq!(rank(&QMatrix::identity_n(5)), 5);
    }

    #[test]
    fn singular_is_reported() {
        let a = QMatrix::from_dense(&[vec![q(), Scalar::one()], vec![q() * q(), q()]]);
        let err = solve_linear(&a, &QMatrix::identity_n(2)).unwrap_err();
        assert_eq!(err, Error::Singular { rank: 1, size: 2 });
    }

    #[test]
    fn kernel_of_rank_one() {
        let a = QMatrix::from_dense(&[vec![Scalar::one(), q()], vec![q(), q() * q()]]);
        let k = kernel_basis(&a);
        assert_eq!(k.len(), 1);
        assert_eq!(k[0][&0], Scalar::one());
        assert_eq!(k[0][&1], -q().inv().unwrap());
    }

    #[test]
    fn span_coefficients_recover_combination() {
        let v1 = SparseVec::from([(0, Scalar::one()), (2, q())]);
        let v2 = SparseVec::from([(1, Scalar::one())]);
        let target = SparseVec::from([(0, Scalar::int(3)), (1, q()), (2, Scalar::int(3) * q())]);
        let c = span_coefficients(&[v1, v2], &target).unwrap();
        assert_eq!(c, vec![Scalar::int(3), q()]);
        assert!(span_coefficients(&[SparseVec::from([(0, Scalar::one())])], &target).is_none());
    }

    #[test]
    fn inverse_roundtrip() {
        let a = QMatrix::from_dense(&[
            vec![q(), Scalar::one(), Scalar::zero()],
            vec![Scalar::zero(), Scalar::one(), q()],
            vec![Scalar::one(), Scalar::zero(), Scalar::int(2)],
        ]);
        let ai = inverse(&a).unwrap();
        assert_eq!(a.mul(&ai), QMatrix::identity_n(3));
        assert_eq!(ai.mul(&a), QMatrix::identity_n(3));
    }
}
