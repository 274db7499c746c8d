//! Right comodules, the two actions induced by a bicharacter, and the
//! Yetter–Drinfeld compatibility
//!
//!   m₀ ◁ a₁ ⊗ m₁ a₂ = (m ◁ a₂)₀ ⊗ a₁ (m ◁ a₂)₁.
//!
//! `e_i ◁₁ a = Σ_j r(v^j_i ⊗ a) e_j` and `e_i ◁₂ a = Σ_j r̄(a ⊗ v^j_i) e_j`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::bichar::{Bicharacter, InverseOf, PairForm};
use crate::error::{Error, Result};
use crate::ideal::RelationIdealSlice;
use crate::matrix::QMatrix;
use crate::outcome::Outcome;
use crate::scalar::Scalar;
use crate::words::{coproduct_splittings, counit, GenWord, WordCombo};

/// `δ(e_i) = Σ_j e_j ⊗ v^j_i`, stored sparsely by column.
#[derive(Clone, Debug)]
pub struct Comodule {
    pub label: String,
    pub dim: usize,
    /// `corep[i]` lists the nonzero `(j, v^j_i)`.
    pub corep: Vec<Vec<(usize, WordCombo)>>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Side {
    One,
    Two,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Side::One => "M1",
            Side::Two => "M2",
        })
    }
}

impl Comodule {
    pub fn new(
        label: impl Into<String>,
        dim: usize,
        entries: impl IntoIterator<Item = (usize, usize, WordCombo)>,
    ) -> Self {
        let mut corep = vec![Vec::new(); dim];
        for (j, i, v) in entries {
            if !v.is_zero() {
                corep[i].push((j, v));
            }
        }
        for col in &mut corep {
            col.sort_by_key(|(j, _)| *j);
        }
        Comodule {
            label: label.into(),
            dim,
            corep,
        }
    }

    pub fn entry(&self, j: usize, i: usize) -> WordCombo {
        self.corep[i]
            .iter()
            .find(|(k, _)| *k == j)
            .map(|(_, v)| v.clone())
            .unwrap_or_default()
    }

    pub fn trivial() -> Self {
        Comodule::new("trivial", 1, [(0, 0, WordCombo::one())])
    }

    /// `v^j_i = u^j_i`.
    pub fn fundamental(n: usize) -> Self {
        let entries =
            (0..n).flat_map(|j| (0..n).map(move |i| (j, i, WordCombo::word(GenWord::u(j, i)))));
        Comodule::new("fundamental", n, entries)
    }

    /// `u ⊗ u` with basis `e_(i,k)` at index `i N + k`.
    pub fn tensor_square(n: usize) -> Self {
        let mut entries = Vec::new();
        for j in 0..n {
            for l in 0..n {
                for i in 0..n {
                    for k in 0..n {
                        entries.push((
                            j * n + l,
                            i * n + k,
                            WordCombo::word(GenWord::from_pairs(&[(j, i), (l, k)])),
                        ));
                    }
                }
            }
        }
        Comodule::new("u⊗u", n * n, entries)
    }

    /// Words of length `k` with the comultiplication as coaction.
    pub fn word_slice(n: usize, k: usize) -> Self {
        let words = GenWord::all_of_len(n, k);
        let index: HashMap<GenWord, usize> = words
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, w)| (w, i))
            .collect();
        let mut entries = Vec::new();
        for (i, w) in words.iter().enumerate() {
            for (w1, w2) in coproduct_splittings(w, n) {
                entries.push((index[&w1], i, WordCombo::word(w2)));
            }
        }
        Comodule::new(format!("degree-{k} words"), words.len(), entries)
    }

    pub fn max_degree(&self) -> usize {
        self.corep
            .iter()
            .flatten()
            .map(|(_, v)| v.degree())
            .max()
            .unwrap_or(0)
    }

    /// Distinct corep entries; they span `C(M)`.
    pub fn coefficients(&self) -> Vec<WordCombo> {
        let mut out: Vec<WordCombo> = Vec::new();
        for (_, v) in self.corep.iter().flatten() {
            if !out.contains(v) {
                out.push(v.clone());
            }
        }
        out
    }

    /// `Δ(v^j_i) = Σ_k v^j_k ⊗ v^k_i` and `ε(v^j_i) = δ_ij`, on free words.
    pub fn check_laws(&self, n: usize) -> Outcome {
        let mut out = Outcome::new(format!("corepresentation laws ({})", self.label));
        for i in 0..self.dim {
            for j in 0..self.dim {
                let v = self.entry(j, i);
                let want = if i == j {
                    Scalar::one()
                } else {
                    Scalar::zero()
                };
                let e = v.map_linear(counit);
                out.record(e == want, || format!("ε(v^{j}_{i}) = {e}"));
            }
            // row sums of the coproduct
            let mut lhs: HashMap<(usize, GenWord, GenWord), Scalar> = HashMap::new();
            for (j, v) in &self.corep[i] {
                for (w, c) in v.terms() {
                    for (w1, w2) in coproduct_splittings(w, n) {
                        *lhs.entry((*j, w1, w2)).or_insert_with(Scalar::zero) += c;
                    }
                }
            }
            let mut rhs: HashMap<(usize, GenWord, GenWord), Scalar> = HashMap::new();
            for (k, vk) in &self.corep[i] {
                for (j, vj) in &self.corep[*k] {
                    for (w1, c1) in vj.terms() {
                        for (w2, c2) in vk.terms() {
                            *rhs.entry((*j, w1.clone(), w2.clone()))
                                .or_insert_with(Scalar::zero) += &(c1 * c2);
                        }
                    }
                }
            }
            lhs.retain(|_, c| !c.is_zero());
            rhs.retain(|_, c| !c.is_zero());
            out.record(lhs == rhs, || {
                format!("Δ of column {i} is not the matrix splitting")
            });
        }
        out
    }
}

/// Evaluates the action matrices `A(a)[j][i]` of one side.
pub struct ActionTables<'a> {
    pub side: Side,
    m: &'a Comodule,
    r: Arc<Bicharacter>,
    rbar: InverseOf,
    cross: Arc<Bicharacter>,
    cross_bar: InverseOf,
    cache: HashMap<GenWord, QMatrix>,
}

impl<'a> ActionTables<'a> {
    pub fn new(b: &Bicharacter, m: &'a Comodule, side: Side) -> Self {
        let r = Arc::new(b.clone());
        let cross = Arc::new(b.left_first());
        ActionTables {
            side,
            m,
            rbar: InverseOf(r.clone()),
            r,
            cross_bar: InverseOf(cross.clone()),
            cross,
            cache: HashMap::new(),
        }
    }

    fn value(&self, r: &dyn PairForm, rbar: &dyn PairForm, v: &WordCombo, a: &GenWord) -> Scalar {
        let wa = WordCombo::word(a.clone());
        match self.side {
            Side::One => r.eval_combo(v, &wa),
            Side::Two => rbar.eval_combo(&wa, v),
        }
    }

    fn build(&self, r: &dyn PairForm, rbar: &dyn PairForm, a: &GenWord) -> QMatrix {
        let mut out = QMatrix::square_zeros(vec![self.m.dim]);
        for (i, col) in self.m.corep.iter().enumerate() {
            for (j, v) in col {
                out.set(*j, i, self.value(r, rbar, v, a));
            }
        }
        out
    }

    /// `A(a)`, with `e_i ◁ a = Σ_j A(a)[j][i] e_j`.
    pub fn matrix(&mut self, a: &GenWord) -> QMatrix {
        if let Some(m) = self.cache.get(a) {
            return m.clone();
        }
        let m = self.build(self.r.as_ref(), &self.rbar, a);
        self.cache.insert(a.clone(), m.clone());
        m
    }

    /// `A(a)` evaluated along the other expansion order.
    pub fn matrix_cross(&self, a: &GenWord) -> QMatrix {
        self.build(self.cross.as_ref(), &self.cross_bar, a)
    }
}

/// `◁₁` on the generators, one matrix per letter `u^n_m` at index `n N + m`.
pub fn action1(b: &Bicharacter, m: &Comodule) -> Vec<QMatrix> {
    let mut t = ActionTables::new(b, m, Side::One);
    GenWord::all_of_len(b.spec.n, 1)
        .iter()
        .map(|x| t.matrix(x))
        .collect()
}

pub fn action2(b: &Bicharacter, m: &Comodule) -> Vec<QMatrix> {
    let mut t = ActionTables::new(b, m, Side::Two);
    GenWord::all_of_len(b.spec.n, 1)
        .iter()
        .map(|x| t.matrix(x))
        .collect()
}

fn need_degree(m: &Comodule, extra: usize, slice: &RelationIdealSlice) -> Result<()> {
    let d = m.max_degree() + extra;
    if d > slice.degree {
        return Err(Error::DegreeOverflow {
            degree: d,
            bound: slice.degree,
        });
    }
    Ok(())
}

/// Module law (unit and `A(xy) = A(y) A(x)` on letters) and the compatibility
/// condition for every word `a` that keeps `deg v + deg a` within the slice.
pub fn yd_check(
    b: &Bicharacter,
    m: &Comodule,
    side: Side,
    slice: &RelationIdealSlice,
) -> Result<Outcome> {
    need_degree(m, 1, slice)?;
    let n = b.spec.n;
    let mut t = ActionTables::new(b, m, side);
    let mut out = Outcome::new(format!("Yetter-Drinfeld {side} on {}", m.label));

    let unit = t.matrix(&GenWord::one());
    out.record(unit == QMatrix::identity(vec![m.dim]), || {
        "e ◁ 1 != e".into()
    });
    let ls = GenWord::all_of_len(n, 1);
    for x in &ls {
        for y in &ls {
            let direct = t.matrix_cross(&x.concat(y));
            let iterated = t.matrix(y).mul(&t.matrix(x));
            out.record(direct == iterated, || {
                format!("(e ◁ {x}) ◁ {y} != e ◁ {x}{y}")
            });
            if !out.passed() {
                return Ok(out);
            }
        }
    }

    let amax = slice.degree - m.max_degree();
    for a in GenWord::all_up_to(n, amax).into_iter().skip(1) {
        let splits = coproduct_splittings(&a, n);
        // first factor is read by columns
        let mats: Vec<(QMatrix, QMatrix)> = splits
            .iter()
            .map(|(a1, a2)| (t.matrix(a1).transpose(), t.matrix(a2)))
            .collect();
        for i in 0..m.dim {
            let mut comps: Vec<WordCombo> = vec![WordCombo::zero(); m.dim];
            for ((a1, a2), (m1t, m2)) in splits.iter().zip(&mats) {
                let wa1 = WordCombo::word(a1.clone());
                let wa2 = WordCombo::word(a2.clone());
                // Σ_l A(a1)[j][l] v^l_i a2
                for (l, v) in &m.corep[i] {
                    let va2 = v.mul(&wa2);
                    for (j, c) in m1t.row(*l) {
                        comps[*j].add_scaled(&va2, c);
                    }
                }
                // Σ_k A(a2)[k][i] a1 v^j_k
                for k in 0..m.dim {
                    let c = m2.get(k, i);
                    if c.is_zero() {
                        continue;
                    }
                    for (j, v) in &m.corep[k] {
                        comps[*j].add_scaled(&wa1.mul(v), &-c.clone());
                    }
                }
            }
            for (j, x) in comps.iter().enumerate() {
                if x.is_zero() {
                    out.checked += 1;
                    continue;
                }
                let ok = slice.contains(x)?;
                out.record(ok, || format!("a={a} i={i} component {j}: {x}"));
                if !out.passed() {
                    return Ok(out);
                }
            }
        }
    }
    Ok(out)
}

/// Both sides of the characterization of `M1` (resp. `M2`) being a
/// Yetter–Drinfeld module.
#[derive(Clone, Debug)]
pub struct EquivalenceReport {
    pub side: Side,
    pub yd: Outcome,
    pub axioms: Outcome,
}

impl EquivalenceReport {
    pub fn agree(&self) -> bool {
        self.yd.passed() == self.axioms.passed()
    }

    pub fn outcome(&self) -> Outcome {
        let mut out = Outcome::new(format!("equivalence for {}", self.side));
        out.record(self.agree(), || {
            format!(
                "compatibility {} but axioms {}",
                verdict(&self.yd),
                verdict(&self.axioms)
            )
        });
        out
    }
}

fn verdict(o: &Outcome) -> &'static str {
    if o.passed() {
        "pass"
    } else {
        "fail"
    }
}

/// `r(a₁ ⊗ b₁) a₂ b₂ - r(a₂ ⊗ b₂) b₁ a₁`, bilinear in the arguments.
fn cqt3_combo(b: &dyn PairForm, a: &WordCombo, c: &WordCombo) -> WordCombo {
    let mut out = WordCombo::zero();
    for (x, cx) in a.terms() {
        for (y, cy) in c.terms() {
            out.add_scaled(&crate::bichar::cqt3_defect(b, x, y), &(cx * cy));
        }
    }
    out
}

/// The axiom side: CQT.1 with `c ∈ C(M)` and CQT.3 with `a ∈ C(M)` for `M1`,
/// CQT.2 with `c ∈ C(M)` and CQT.3 with `b ∈ C(M)` for `M2`. The other
/// arguments run over letters.
pub fn restricted_axioms(
    b: &Bicharacter,
    m: &Comodule,
    side: Side,
    slice: &RelationIdealSlice,
) -> Result<Outcome> {
    need_degree(m, 1, slice)?;
    let n = b.spec.n;
    let cross = b.left_first();
    let ls = GenWord::all_of_len(n, 1);
    let coeffs = m.coefficients();
    let mut out = Outcome::new(format!("axioms restricted to C({})", m.label));
    for v in &coeffs {
        for x in &ls {
            let wx = WordCombo::word(x.clone());
            for y in &ls {
                let xy = WordCombo::word(x.concat(y));
                let (lhs, rhs) = match side {
                    Side::One => {
                        // r(c ⊗ xy) = r(c₁ ⊗ y) r(c₂ ⊗ x)
                        let rhs = v.map_linear(|w| {
                            coproduct_splittings(w, n)
                                .iter()
                                .map(|(c1, c2)| &b.eval(c1, y) * &b.eval(c2, x))
                                .sum()
                        });
                        (cross.eval_combo(v, &xy), rhs)
                    }
                    Side::Two => {
                        // r(xy ⊗ c) = r(x ⊗ c₁) r(y ⊗ c₂)
                        let rhs = v.map_linear(|w| {
                            coproduct_splittings(w, n)
                                .iter()
                                .map(|(c1, c2)| &b.eval(x, c1) * &b.eval(y, c2))
                                .sum()
                        });
                        (b.eval_combo(&xy, v), rhs)
                    }
                };
                out.record(lhs == rhs, || format!("c={v} x={x} y={y}: {lhs} vs {rhs}"));
                if !out.passed() {
                    return Ok(out);
                }
            }
            let defect = match side {
                Side::One => cqt3_combo(b, v, &wx),
                Side::Two => cqt3_combo(b, &wx, v),
            };
            let ok = defect.is_zero() || slice.contains(&defect)?;
            out.record(ok, || format!("CQT.3 at ({v}, {x})"));
            if !out.passed() {
                return Ok(out);
            }
        }
    }
    Ok(out)
}

pub fn axiom_equivalence(
    b: &Bicharacter,
    m: &Comodule,
    side: Side,
    slice: &RelationIdealSlice,
) -> Result<EquivalenceReport> {
    Ok(EquivalenceReport {
        side,
        yd: yd_check(b, m, side, slice)?,
        axioms: restricted_axioms(b, m, side, slice)?,
    })
}

/// The degree-`k` word spans for `k < d` as comodules, both actions.
pub fn word_span_check(b: &Bicharacter, d: usize, slice: &RelationIdealSlice) -> Result<Outcome> {
    if d > slice.degree {
        return Err(Error::DegreeOverflow {
            degree: d,
            bound: slice.degree,
        });
    }
    let n = b.spec.n;
    let mut parts = Vec::new();
    for k in 0..d {
        let m = Comodule::word_slice(n, k);
        for side in [Side::One, Side::Two] {
            parts.push(yd_check(b, &m, side, slice)?);
        }
    }
    Ok(Outcome::merge_all(
        format!("word spans below degree {d}"),
        parts,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bichar::{default_z, make_central_bichar, make_rform};
    use crate::ideal::build_relation_slice;
    use crate::rmatrix::build_rmatrix;
    use crate::series::{build_series, Series};

    fn setup(series: Series, n: usize) -> (Bicharacter, RelationIdealSlice) {
        let b = build_rmatrix(&build_series(series, n).unwrap()).unwrap();
        let slice = build_relation_slice(&b, 2).unwrap();
        (make_rform(&b, &default_z(&b.spec).unwrap()).unwrap(), slice)
    }

    #[test]
    fn corep_laws() {
        for m in [
            Comodule::trivial(),
            Comodule::fundamental(2),
            Comodule::tensor_square(2),
            Comodule::word_slice(2, 2),
        ] {
            assert!(m.check_laws(2).passed(), "{}", m.label);
        }
    }

    #[test]
    fn fundamental_action_is_z_r() {
        let b = build_rmatrix(&build_series(Series::GL, 2).unwrap()).unwrap();
        let z = Scalar::int(3);
        let r = make_rform(&b, &z).unwrap();
        let acts = action1(&r, &Comodule::fundamental(2));
        for (nm, a) in acts.iter().enumerate() {
            let (nn, mm) = (nm / 2, nm % 2);
            for j in 0..2 {
                for i in 0..2 {
                    assert_eq!(a.get(j, i), &z * &b.r.get(j * 2 + nn, i * 2 + mm));
                }
            }
        }
    }

    #[test]
    fn rform_gives_yd_modules() {
        let (r, slice) = setup(Series::O, 3);
        for side in [Side::One, Side::Two] {
            for m in [Comodule::trivial(), Comodule::fundamental(3)] {
                assert!(yd_check(&r, &m, side, &slice).unwrap().passed());
            }
        }
        assert!(word_span_check(&r, 2, &slice).unwrap().passed());
    }

    #[test]
    fn equivalence_survives_perturbation() {
        let (r, slice) = setup(Series::GL, 2);
        let m = Comodule::fundamental(2);
        let bad = r.perturbed(1, 2, &Scalar::int(1)).unwrap();
        for side in [Side::One, Side::Two] {
            let good = axiom_equivalence(&r, &m, side, &slice).unwrap();
            assert!(good.agree() && good.yd.passed());
            let rep = axiom_equivalence(&bad, &m, side, &slice).unwrap();
            assert!(
                rep.agree() && !rep.yd.passed(),
                "{side}: {} / {}",
                rep.yd,
                rep.axioms
            );
        }
    }

    #[test]
    fn central_bicharacter_fails_both_sides_together() {
        let (r, slice) = setup(Series::GL, 2);
        let c = make_central_bichar(&r.spec, &Scalar::int(-1)).unwrap();
        let rep = axiom_equivalence(&c, &Comodule::fundamental(2), Side::One, &slice).unwrap();
        assert!(rep.agree());
        assert!(!rep.yd.passed());
    }

    #[test]
    fn degree_bound_enforced() {
        let (r, slice) = setup(Series::GL, 2);
        assert!(matches!(
            yd_check(&r, &Comodule::tensor_square(2), Side::One, &slice),
            Err(Error::DegreeOverflow { .. })
        ));
    }
}
