//! Low-degree slices of the relation ideal of the FRT algebra, and membership.

use crate::error::{Error, Result};
use crate::linalg::{inverse, Echelon};
use crate::matrix::SparseVec;
use crate::rmatrix::RMatrixBundle;
use crate::series::{Series, SeriesSpec};
use crate::words::{GenLetter, GenWord, WordCombo};

pub const MAX_DEGREE: usize = 3;
/// Largest admissible coordinate count `sum_{d <= D} N^(2d)`.
pub const DEFAULT_COORD_BOUND: usize = 20_000;

/// Index of a parity-0 word among all words of degree at most its length.
pub fn word_index(w: &GenWord, n: usize) -> usize {
    let nn = n * n;
    let offset: usize = (0..w.len()).map(|d| nn.pow(d as u32)).sum();
    offset
        + w.letters()
            .iter()
            .fold(0, |acc, l| acc * nn + l.i as usize * n + l.j as usize)
}

pub fn coord_count(n: usize, degree: usize) -> usize {
    (0..=degree).map(|d| (n * n).pow(d as u32)).sum()
}

fn u(i: usize, j: usize) -> GenWord {
    GenWord::u(i, j)
}

fn uu(a: usize, c: usize, b: usize, d: usize) -> GenWord {
    GenWord(smallvec::smallvec![GenLetter::u(a, c), GenLetter::u(b, d)])
}

/// Components of `Rhat U - U Rhat` with `U[(a,b),(c,d)] = u^a_c u^b_d`.
pub fn frt_relations(bundle: &RMatrixBundle) -> Vec<WordCombo> {
    let n = bundle.n();
    let rh = &bundle.rhat;
    let mut out = Vec::new();
    for row in 0..n * n {
        let (a, b) = (row / n, row % n);
        for col in 0..n * n {
            let (c, d) = (col / n, col % n);
            let mut rel = WordCombo::zero();
            for (&ef, v) in rh.row(row) {
                rel.add_term(uu(ef / n, c, ef % n, d), v);
            }
            for ef in 0..n * n {
                if let Some(v) = rh.get_ref(ef, col) {
                    rel.add_term(uu(a, ef / n, b, ef % n), &-v.clone());
                }
            }
            if !rel.is_zero() {
                out.push(rel);
            }
        }
    }
    out
}

/// `U v - v` and `w^T U - w^T` for O/Sp.
pub fn metric_relations(bundle: &RMatrixBundle) -> Vec<WordCombo> {
    let (Some(v), Some(w)) = (&bundle.metric_v, &bundle.metric_w) else {
        return Vec::new();
    };
    let n = bundle.n();
    let mut out = Vec::new();
    for a in 0..n {
        for b in 0..n {
            let mut rel = WordCombo::scalar(-v.get(a, b));
            for (c, d, x) in v.entries() {
                rel.add_term(uu(a, c, b, d), x);
            }
            out.push(rel);
            let mut rel = WordCombo::scalar(-w.get(a, b));
            for (c, d, x) in w.entries() {
                rel.add_term(uu(c, a, d, b), x);
            }
            out.push(rel);
        }
    }
    out.retain(|r| !r.is_zero());
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

fn inversions(p: &[usize]) -> usize {
    (0..p.len())
        .flat_map(|a| (a + 1..p.len()).map(move |b| (a, b)))
        .filter(|&(a, b)| p[a] > p[b])
        .count()
}

/// q-determinant of the submatrix on the given rows/cols:
/// `Σ_σ (-q)^inv(σ) u^{r_1}_{c_σ1} .. u^{r_k}_{c_σk}`.
pub fn minor_det(spec: &SeriesSpec, rows: &[usize], cols: &[usize]) -> WordCombo {
    let mq = -spec.q.clone();
    let mut out = WordCombo::zero();
    for p in permutations(rows.len()) {
        let w = GenWord(
            rows.iter()
                .zip(&p)
                .map(|(&r, &k)| GenLetter::u(r, cols[k]))
                .collect(),
        );
        out.add_term(w, &mq.pow(inversions(&p) as i64).expect("nonzero"));
    }
    out
}

pub fn det_q(spec: &SeriesSpec) -> WordCombo {
    let all: Vec<usize> = (0..spec.n).collect();
    minor_det(spec, &all, &all)
}

/// Polynomial expression of `S(u^i_j)` where one exists (SL, O, Sp).
pub fn antipode_polynomial(bundle: &RMatrixBundle) -> Option<Vec<Vec<WordCombo>>> {
    let spec = &bundle.spec;
    let n = spec.n;
    match spec.series {
        Series::GL => None,
        Series::SL => {
            // (-q)^(i-j) times the q-minor without row j and column i
            let mq = -spec.q.clone();
            Some(
                (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|j| {
                                let rows: Vec<usize> = (0..n).filter(|&r| r != j).collect();
                                let cols: Vec<usize> = (0..n).filter(|&c| c != i).collect();
                                minor_det(spec, &rows, &cols)
                                    .scale(&mq.pow(i as i64 - j as i64).unwrap())
                            })
                            .collect()
                    })
                    .collect(),
            )
        }
        Series::O | Series::Sp => {
            // S(u) = V u^T V^{-1}
            let v = bundle.metric_v.as_ref()?;
            let vi = inverse(v).ok()?;
            Some(
                (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|j| {
                                let mut c = WordCombo::zero();
                                for (_, a, x) in v.entries().filter(|e| e.0 == i) {
                                    for b in 0..n {
                                        if let Some(y) = vi.get_ref(b, j) {
                                            c.add_term(u(b, a), &(x * y));
                                        }
                                    }
                                }
                                c
                            })
                            .collect()
                    })
                    .collect(),
            )
        }
    }
}

#[derive(Clone, Debug)]
pub struct RelationIdealSlice {
    pub spec: SeriesSpec,
    pub degree: usize,
    /// Named base relations before padding.
    pub generators: Vec<(String, WordCombo)>,
    echelon: Echelon,
    /// Only the homogeneous top-degree component is spanned.
    homogeneous: bool,
}

fn to_vec(x: &WordCombo, n: usize) -> SparseVec {
    x.terms()
        .iter()
        .map(|(w, c)| (word_index(w, n), c.clone()))
        .collect()
}

fn pad(ech: &mut Echelon, rel: &WordCombo, n: usize, degree: usize, exact_degree: bool) {
    let k = rel.degree();
    if k > degree {
        return;
    }
    let room = degree - k;
    for p in 0..=room {
        let rmax = room - p;
        let rmin = if exact_degree { rmax } else { 0 };
        for r in rmin..=rmax {
            for a in GenWord::all_of_len(n, p) {
                let left = WordCombo::word(a).mul(rel);
                for b in GenWord::all_of_len(n, r) {
                    ech.insert(to_vec(&left.mul(&WordCombo::word(b.clone())), n));
                }
            }
        }
    }
}

pub fn build_relation_slice(bundle: &RMatrixBundle, degree: usize) -> Result<RelationIdealSlice> {
    build_relation_slice_bounded(bundle, degree, DEFAULT_COORD_BOUND)
}

pub fn build_relation_slice_bounded(
    bundle: &RMatrixBundle,
    degree: usize,
    bound: usize,
) -> Result<RelationIdealSlice> {
    let spec = &bundle.spec;
    let n = spec.n;
    if degree > MAX_DEGREE {
        return Err(Error::ResourceBound(format!(
            "degree {degree} above the maximum {MAX_DEGREE}"
        )));
    }
    let coords = coord_count(n, degree);
    if coords > bound {
        return Err(Error::ResourceBound(format!(
            "{coords} word coordinates for {} at degree {degree} (bound {bound})",
            spec.label()
        )));
    }
    let mut generators: Vec<(String, WordCombo)> = Vec::new();
    generators.extend(
        frt_relations(bundle)
            .into_iter()
            .map(|r| ("frt".to_string(), r)),
    );
    generators.extend(
        metric_relations(bundle)
            .into_iter()
            .map(|r| ("metric".to_string(), r)),
    );
    if spec.series == Series::SL && n <= degree {
        generators.push(("det".into(), det_q(spec).sub(&WordCombo::one())));
    }
    let mut echelon = Echelon::new();
    for (_, g) in &generators {
        pad(&mut echelon, g, n, degree, false);
    }
    Ok(RelationIdealSlice {
        spec: spec.clone(),
        degree,
        generators,
        echelon,
        homogeneous: false,
    })
}

/// The degree-`d` homogeneous component of the ideal generated by the FRT
/// relations alone (no determinant or metric relation).
pub fn frt_homogeneous_component(
    bundle: &RMatrixBundle,
    d: usize,
    bound: usize,
) -> Result<RelationIdealSlice> {
    let n = bundle.n();
    let coords = (n * n).pow(d as u32);
    if coords > bound {
        return Err(Error::ResourceBound(format!(
            "{coords} coordinates in degree {d} (bound {bound})"
        )));
    }
    let generators: Vec<(String, WordCombo)> = frt_relations(bundle)
        .into_iter()
        .map(|r| ("frt".to_string(), r))
        .collect();
    let mut echelon = Echelon::new();
    for (_, g) in &generators {
        pad(&mut echelon, g, n, d, true);
    }
    Ok(RelationIdealSlice {
        spec: bundle.spec.clone(),
        degree: d,
        generators,
        echelon,
        homogeneous: true,
    })
}

impl RelationIdealSlice {
    pub fn dim(&self) -> usize {
        self.echelon.rank()
    }

    pub fn contains(&self, x: &WordCombo) -> Result<bool> {
        if x.has_s() {
            return Err(Error::Shape(
                "ideal membership needs words without S-letters".into(),
            ));
        }
        let d = x.degree();
        if d > self.degree {
            return Err(Error::DegreeOverflow {
                degree: d,
                bound: self.degree,
            });
        }
        if self.homogeneous && x.terms().keys().any(|w| w.len() != self.degree) {
            return Err(Error::Shape(format!(
                "homogeneous slice holds degree {} only",
                self.degree
            )));
        }
        Ok(self.echelon.contains(&to_vec(x, self.spec.n)))
    }

    /// True iff `a - b` lies in the ideal.
    pub fn equal_mod(&self, a: &WordCombo, b: &WordCombo) -> Result<bool> {
        self.contains(&a.sub(b))
    }
}

pub fn ideal_member(x: &WordCombo, slice: &RelationIdealSlice) -> Result<bool> {
    slice.contains(x)
}

/// `Σ_k S(u^i_k) u^k_j - δ_ij` and `Σ_k u^i_k S(u^k_j) - δ_ij` for every `(i,j)`.
pub fn antipode_law_defects(bundle: &RMatrixBundle) -> Option<Vec<WordCombo>> {
    let s = antipode_polynomial(bundle)?;
    let n = bundle.n();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let delta = if i == j {
                WordCombo::one()
            } else {
                WordCombo::zero()
            };
            let mut left = WordCombo::zero();
            let mut right = WordCombo::zero();
            for k in 0..n {
                left = left.add(&s[i][k].mul(&WordCombo::word(u(k, j))));
                right = right.add(&WordCombo::word(u(i, k)).mul(&s[k][j]));
            }
            out.push(left.sub(&delta));
            out.push(right.sub(&delta));
        }
    }
    Some(out)
}

/// Commutators `[det_q, u^i_j]`.
pub fn det_commutators(spec: &SeriesSpec) -> Vec<WordCombo> {
    let d = det_q(spec);
    let n = spec.n;
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let g = WordCombo::word(u(i, j));
            out.push(d.mul(&g).sub(&g.mul(&d)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rmatrix::build_rmatrix;
    use crate::series::build_series;

    fn bundle(s: Series, n: usize) -> RMatrixBundle {
        build_rmatrix(&build_series(s, n).unwrap()).unwrap()
    }

    #[test]
    fn gl2_has_six_frt_relations() {
        let b = bundle(Series::GL, 2);
        let slice = build_relation_slice(&b, 2).unwrap();
        assert_eq!(slice.dim(), 6);
        let q = b.spec.q.clone();
        let rel = WordCombo::word(GenWord::from_pairs(&[(0, 0), (0, 1)]))
            .sub(&WordCombo::term(GenWord::from_pairs(&[(0, 1), (0, 0)]), q));
        assert!(slice.contains(&rel).unwrap());
        assert!(slice.contains(&WordCombo::zero()).unwrap());
        assert!(!slice
            .contains(&WordCombo::word(GenWord::from_pairs(&[(0, 0), (0, 1)])))
            .unwrap());
    }

    #[test]
    fn degree_overflow_is_reported() {
        let slice = build_relation_slice(&bundle(Series::GL, 2), 2).unwrap();
        let w = WordCombo::word(GenWord::from_pairs(&[(0, 0), (0, 0), (0, 0)]));
        assert_eq!(
            slice.contains(&w),
            Err(Error::DegreeOverflow {
                degree: 3,
                bound: 2
            })
        );
    }

    #[test]
    fn sl2_antipode_and_det() {
        let b = bundle(Series::SL, 2);
        let slice = build_relation_slice(&b, 3).unwrap();
        assert!(slice
            .contains(&det_q(&b.spec).sub(&WordCombo::one()))
            .unwrap());
        for d in antipode_law_defects(&b).unwrap() {
            assert!(slice.contains(&d).unwrap(), "{d}");
        }
        for c in det_commutators(&b.spec) {
            assert!(slice.contains(&c).unwrap());
        }
    }

    #[test]
    fn orthogonal_antipode_law() {
        for (s, n) in [(Series::O, 3), (Series::Sp, 2), (Series::Sp, 4)] {
            let b = bundle(s, n);
            let slice = build_relation_slice(&b, 2).unwrap();
            for d in antipode_law_defects(&b).unwrap() {
                assert!(slice.contains(&d).unwrap(), "{}: {d}", b.spec.label());
            }
        }
    }

    #[test]
    fn permutation_helpers() {
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(inversions(&[2, 1, 0]), 3);
    }

    #[test]
    fn word_index_is_injective() {
        let words = GenWord::all_up_to(2, 3);
        let mut idx: Vec<usize> = words.iter().map(|w| word_index(w, 2)).collect();
        idx.sort();
        idx.dedup();
        assert_eq!(idx.len(), words.len());
        assert_eq!(*idx.last().unwrap() + 1, coord_count(2, 3));
    }
}
