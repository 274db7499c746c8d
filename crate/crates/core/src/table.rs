//! Tabulated bicharacter values on words in the `u^i_j` alone.
//!
//! A word of length `L` is indexed base `N^2`, first letter most significant,
//! with letter code `i N + j`. A table of shape `(p, q)` holds one sparse row per
//! left word of length `p`, keyed by right words of length `q`.
//!
//! Both expansion laws become glue products: `Δ(u^a_b) = Σ_m u^a_m ⊗ u^m_b`, so
//! a coproduct term `(w1, w2)` of a word glues back to `w` letter by letter.

use rustc_hash::FxHashMap;

use crate::matrix::QMatrix;
use crate::scalar::Scalar;

pub type Row = Vec<(usize, Scalar)>;

#[derive(Clone, Debug)]
pub struct ValueTable {
    pub p: usize,
    pub q: usize,
    pub rows: Vec<Row>,
}

impl ValueTable {
    pub fn get(&self, row: usize, col: usize) -> Scalar {
        match self.rows[row].binary_search_by_key(&col, |(c, _)| *c) {
            Ok(k) => self.rows[row][k].1.clone(),
            Err(_) => Scalar::zero(),
        }
    }
}

fn finish(acc: Vec<FxHashMap<usize, Scalar>>, p: usize, q: usize) -> ValueTable {
    let rows = acc
        .into_iter()
        .map(|m| {
            let mut r: Row = m.into_iter().filter(|(_, v)| !v.is_zero()).collect();
            r.sort_unstable_by_key(|(c, _)| *c);
            r
        })
        .collect();
    ValueTable { p, q, rows }
}

/// Letters of a word index, most significant first.
pub fn letters_of(mut w: usize, len: usize, n: usize) -> Vec<(usize, usize)> {
    let mut out = vec![(0, 0); len];
    for k in (0..len).rev() {
        let code = w % (n * n);
        out[k] = (code / n, code % n);
        w /= n * n;
    }
    out
}

/// The word whose coproduct contains `w1 ⊗ w2`, if any.
pub fn glue(w1: usize, w2: usize, len: usize, n: usize) -> Option<usize> {
    let (mut a, mut b, mut out, mut scale) = (w1, w2, 0, 1);
    for _ in 0..len {
        let (x, y) = (a % (n * n), b % (n * n));
        if x % n != y / n {
            return None;
        }
        out += (x / n * n + y % n) * scale;
        scale *= n * n;
        a /= n * n;
        b /= n * n;
    }
    Some(out)
}

pub fn word_count(n: usize, len: usize) -> usize {
    (n * n).pow(len as u32)
}

/// Shape `(1, 1)` from `B00[(i,n),(j,m)] = value on u^i_j ⊗ u^n_m`.
pub fn base_table(b00: &QMatrix, n: usize) -> ValueTable {
    let mut acc = vec![FxHashMap::default(); n * n];
    for (r, c, v) in b00.entries() {
        let (i, nn) = (r / n, r % n);
        let (j, m) = (c / n, c % n);
        acc[i * n + j].insert(nn * n + m, v.clone());
    }
    finish(acc, 1, 1)
}

/// `f(x y ⊗ w) = Σ f(x ⊗ w1) f(y ⊗ w2)` with `x` a letter: shape `(1 + p', q)`
/// from `letter` of shape `(1, q)` and `rest` of shape `(p', q)`.
pub fn split_left(letter: &ValueTable, rest: &ValueTable, n: usize) -> ValueTable {
    assert!(letter.p == 1 && letter.q == rest.q);
    let q = rest.q;
    let rest_count = word_count(n, rest.p);
    let mut acc = vec![FxHashMap::default(); n * n * rest_count];
    for (x, rx) in letter.rows.iter().enumerate() {
        for (y, ry) in rest.rows.iter().enumerate() {
            let slot = &mut acc[x * rest_count + y];
            for (w1, v1) in rx {
                for (w2, v2) in ry {
                    if let Some(w) = glue(*w1, *w2, q, n) {
                        *slot.entry(w).or_insert_with(Scalar::zero) += &(v1 * v2);
                    }
                }
            }
        }
    }
    finish(acc, rest.p + 1, q)
}

/// `f(c ⊗ x y) = Σ f(c1 ⊗ y) f(c2 ⊗ x)` with `x` a letter: shape `(p, 1 + q')`
/// from `rest` of shape `(p, q')` and `letter` of shape `(p, 1)`.
pub fn split_right(rest: &ValueTable, letter: &ValueTable, n: usize) -> ValueTable {
    assert!(letter.q == 1 && letter.p == rest.p);
    let p = rest.p;
    let rest_count = word_count(n, rest.q);
    let count = word_count(n, p);
    let mut acc = vec![FxHashMap::default(); count];
    // partners of c1: all c2 whose letters start where c1's letters end
    for (c1, r1) in rest.rows.iter().enumerate() {
        if r1.is_empty() {
            continue;
        }
        let l1 = letters_of(c1, p, n);
        for tail in 0..n.pow(p as u32) {
            let mut c2 = 0;
            let mut t = tail;
            let mut ends = vec![0; p];
            for k in (0..p).rev() {
                ends[k] = t % n;
                t /= n;
            }
            for (k, &(_, m)) in l1.iter().enumerate() {
                c2 = c2 * n * n + m * n + ends[k];
            }
            let r2 = &letter.rows[c2];
            if r2.is_empty() {
                continue;
            }
            let c = glue(c1, c2, p, n).expect("partners glue");
            let slot = &mut acc[c];
            for (y, v1) in r1 {
                for (x, v2) in r2 {
                    *slot.entry(x * rest_count + y).or_insert_with(Scalar::zero) += &(v1 * v2);
                }
            }
        }
    }
    finish(acc, p, rest.q + 1)
}

/// Tables up to degree `d` on each side, computed along both expansion orders.
pub struct TableSet {
    pub n: usize,
    /// Right argument split first (shapes with `q >= 2`); shapes with `q = 1`
    /// necessarily split the left argument.
    pub right_first: FxHashMap<(usize, usize), ValueTable>,
    /// Left argument split first whenever it has two or more letters.
    pub left_first: FxHashMap<(usize, usize), ValueTable>,
}

impl TableSet {
    /// Fills every shape `(p, q)` with `p, q <= d` and `min(p, q) <= 2`.
    pub fn build(b00: &QMatrix, n: usize, d: usize) -> TableSet {
        let mut rf: FxHashMap<(usize, usize), ValueTable> = FxHashMap::default();
        rf.insert((1, 1), base_table(b00, n));
        for p in 2..=d {
            let t = split_left(&rf[&(1, 1)], &rf[&(p - 1, 1)], n);
            rf.insert((p, 1), t);
        }
        for p in 1..=d {
            let qmax = if p <= 2 { d } else { 2 };
            for q in 2..=qmax {
                let t = split_right(&rf[&(p, q - 1)], &rf[&(p, 1)], n);
                rf.insert((p, q), t);
            }
        }
        let mut lf: FxHashMap<(usize, usize), ValueTable> = FxHashMap::default();
        for q in 1..=d {
            lf.insert((1, q), rf[&(1, q)].clone());
            let pmax = if q <= 2 { d } else { 2 };
            for p in 2..=pmax {
                let t = split_left(&rf[&(1, q)], &lf[&(p - 1, q)], n);
                lf.insert((p, q), t);
            }
        }
        TableSet {
            n,
            right_first: rf,
            left_first: lf,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn glue_matches_coproduct() {
        let n = 3;
        // u^0_1 u^2_2 from u^0_2 u^2_0 ⊗ u^2_1 u^0_2
        let letter = |i: usize, j: usize| i * n + j;
        let w1 = letter(0, 2) * n * n + letter(2, 0);
        let w2 = letter(2, 1) * n * n + letter(0, 2);
        assert_eq!(
            glue(w1, w2, 2, n),
            Some(letter(0, 1) * n * n + letter(2, 2))
        );
        assert_eq!(glue(w2, w1, 2, n), None);
        assert_eq!(letters_of(w1, 2, n), vec![(0, 2), (2, 0)]);
    }
}
