//! Words in the generators `u^i_j` and `S(u^i_j)`, and their linear combinations.

use std::collections::BTreeMap;
use std::fmt;

use smallvec::{smallvec, SmallVec};

use crate::error::{Error, Result};
use crate::matrix::QMatrix;
use crate::scalar::Scalar;

/// `u^i_j` (`s = false`) or `S(u^i_j)` (`s = true`); indices are 0-based.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct GenLetter {
    pub i: u8,
    pub j: u8,
    pub s: bool,
}

impl GenLetter {
    pub fn u(i: usize, j: usize) -> Self {
        GenLetter {
            i: i as u8,
            j: j as u8,
            s: false,
        }
    }

    pub fn su(i: usize, j: usize) -> Self {
        GenLetter {
            i: i as u8,
            j: j as u8,
            s: true,
        }
    }
}

impl fmt::Display for GenLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.s {
            write!(f, "S(u{}{})", self.i + 1, self.j + 1)
        } else {
            write!(f, "u{}{}", self.i + 1, self.j + 1)
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct GenWord(pub Letters);

/// Inline storage; words in this crate stay short.
pub type Letters = SmallVec<[GenLetter; 8]>;

impl GenWord {
    pub fn one() -> Self {
        GenWord(Letters::new())
    }

    pub fn letter(l: GenLetter) -> Self {
        GenWord(smallvec![l])
    }

    pub fn u(i: usize, j: usize) -> Self {
        GenWord::letter(GenLetter::u(i, j))
    }

    pub fn su(i: usize, j: usize) -> Self {
        GenWord::letter(GenLetter::su(i, j))
    }

    pub fn from_pairs(pairs: &[(usize, usize)]) -> Self {
        GenWord(pairs.iter().map(|&(i, j)| GenLetter::u(i, j)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[GenLetter] {
        &self.0
    }

    pub fn concat(&self, o: &GenWord) -> GenWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&o.0);
        GenWord(v)
    }

    pub fn split_at(&self, k: usize) -> (GenWord, GenWord) {
        (
            GenWord(Letters::from_slice(&self.0[..k])),
            GenWord(Letters::from_slice(&self.0[k..])),
        )
    }

    pub fn has_s(&self) -> bool {
        self.0.iter().any(|l| l.s)
    }

    /// Injective packing into 63 bits for words of at most 7 letters with
    /// indices below 16.
    pub fn packed(&self) -> Option<u64> {
        if self.0.len() > 7 {
            return None;
        }
        let mut k = 0u64;
        for l in &self.0 {
            debug_assert!(l.i < 16 && l.j < 16);
            let code = 1 + ((l.s as u64) << 8 | (l.i as u64) << 4 | l.j as u64);
            k = (k << 9) | code;
        }
        Some(k)
    }

    /// All parity-0 words of exactly this length.
    pub fn all_of_len(n: usize, len: usize) -> Vec<GenWord> {
        let mut out = vec![GenWord::one()];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|w| {
                    (0..n * n).map(move |k| {
                        let mut v = w.0.clone();
                        v.push(GenLetter::u(k / n, k % n));
                        GenWord(v)
                    })
                })
                .collect();
        }
        out
    }

    /// All parity-0 words of length at most `max_len`, shortest first.
    pub fn all_up_to(n: usize, max_len: usize) -> Vec<GenWord> {
        (0..=max_len)
            .flat_map(|d| GenWord::all_of_len(n, d))
            .collect()
    }
}

impl fmt::Display for GenWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, l) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Splittings of a single letter under the coproduct.
fn letter_splits(l: GenLetter, n: usize) -> impl Iterator<Item = (GenLetter, GenLetter)> {
    (0..n as u8).map(move |k| {
        if l.s {
            // Δ(S(u^i_j)) = Σ_k S(u^k_j) ⊗ S(u^i_k)
            (
                GenLetter {
                    i: k,
                    j: l.j,
                    s: true,
                },
                GenLetter {
                    i: l.i,
                    j: k,
                    s: true,
                },
            )
        } else {
            (
                GenLetter {
                    i: l.i,
                    j: k,
                    s: false,
                },
                GenLetter {
                    i: k,
                    j: l.j,
                    s: false,
                },
            )
        }
    })
}

/// `Δ(w)` as the list of its `N^len` summands, each with coefficient 1.
pub fn coproduct_splittings(w: &GenWord, n: usize) -> Vec<(GenWord, GenWord)> {
    let mut out = vec![(GenWord::one(), GenWord::one())];
    for &l in &w.0 {
        let mut next = Vec::with_capacity(out.len() * n);
        for (a, b) in &out {
            for (x, y) in letter_splits(l, n) {
                let mut a2 = a.0.clone();
                a2.push(x);
                let mut b2 = b.0.clone();
                b2.push(y);
                next.push((GenWord(a2), GenWord(b2)));
            }
        }
        out = next;
    }
    out
}

/// `(id ⊗ Δ)Δ(w)` as triples.
pub fn triple_splittings(w: &GenWord, n: usize) -> Vec<(GenWord, GenWord, GenWord)> {
    coproduct_splittings(w, n)
        .into_iter()
        .flat_map(|(a, b)| {
            coproduct_splittings(&b, n)
                .into_iter()
                .map(move |(c, d)| (a.clone(), c, d))
        })
        .collect()
}

pub fn counit(w: &GenWord) -> Scalar {
    if w.0.iter().all(|l| l.i == l.j) {
        Scalar::one()
    } else {
        Scalar::zero()
    }
}

/// `S(w)` for words without S-letters: reverse and mark every letter.
pub fn antipode_word(w: &GenWord) -> Result<GenWord> {
    if w.has_s() {
        return Err(Error::MissingFunctionals);
    }
    Ok(GenWord(
        w.0.iter()
            .rev()
            .map(|l| GenLetter { s: true, ..*l })
            .collect(),
    ))
}

/// `S(w)` for any word; `S^2(u^i_j) = Σ fbar(u^i_k) u^k_l f(u^l_j)` needs the
/// generator matrices `(fbar, f)` of the antipode functionals.
pub fn antipode_combo(w: &GenWord, s2: Option<(&QMatrix, &QMatrix)>) -> Result<WordCombo> {
    let mut acc = WordCombo::one();
    for l in w.0.iter().rev() {
        let factor = if l.s {
            let (fbar, f) = s2.ok_or(Error::MissingFunctionals)?;
            let n = f.nrows();
            let mut c = WordCombo::zero();
            for k in 0..n {
                for m in 0..n {
                    let coeff = &fbar.get(l.i as usize, k) * &f.get(m, l.j as usize);
                    c.add_term(GenWord::u(k, m), &coeff);
                }
            }
            c
        } else {
            WordCombo::word(GenWord::letter(GenLetter { s: true, ..*l }))
        };
        acc = acc.mul(&factor);
    }
    Ok(acc)
}

/// A formal linear combination of words; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct WordCombo {
    terms: BTreeMap<GenWord, Scalar>,
}

impl WordCombo {
    pub fn zero() -> Self {
        WordCombo::default()
    }

    pub fn one() -> Self {
        WordCombo::word(GenWord::one())
    }

    pub fn word(w: GenWord) -> Self {
        WordCombo::term(w, Scalar::one())
    }

    pub fn term(w: GenWord, c: Scalar) -> Self {
        let mut out = WordCombo::zero();
        out.add_term(w, &c);
        out
    }

    pub fn scalar(c: Scalar) -> Self {
        WordCombo::term(GenWord::one(), c)
    }

    pub fn terms(&self) -> &BTreeMap<GenWord, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(GenWord::len).max().unwrap_or(0)
    }

    pub fn has_s(&self) -> bool {
        self.terms.keys().any(GenWord::has_s)
    }

    pub fn add_term(&mut self, w: GenWord, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(cur) => {
                *cur += c;
                if cur.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c.clone());
            }
        }
    }

    pub fn add_scaled(&mut self, o: &WordCombo, c: &Scalar) {
        for (w, v) in &o.terms {
            self.add_term(w.clone(), &(v * c));
        }
    }

    pub fn add(&self, o: &WordCombo) -> WordCombo {
        let mut out = self.clone();
        out.add_scaled(o, &Scalar::one());
        out
    }

    pub fn sub(&self, o: &WordCombo) -> WordCombo {
        let mut out = self.clone();
        out.add_scaled(o, &Scalar::int(-1));
        out
    }

    pub fn scale(&self, c: &Scalar) -> WordCombo {
        let mut out = WordCombo::zero();
        out.add_scaled(self, c);
        out
    }

    /// Product in the free algebra (concatenation).
    pub fn mul(&self, o: &WordCombo) -> WordCombo {
        let mut out = WordCombo::zero();
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                out.add_term(a.concat(b), &(x * y));
            }
        }
        out
    }

    /// Applies a linear map defined on words.
    pub fn map_linear(&self, mut f: impl FnMut(&GenWord) -> Scalar) -> Scalar {
        self.terms.iter().map(|(w, c)| c * &f(w)).sum()
    }
}

impl fmt::Display for WordCombo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (w, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})*{w}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coproduct_of_generator() {
        let s = coproduct_splittings(&GenWord::u(0, 1), 2);
        assert_eq!(
            s,
            vec![
                (GenWord::u(0, 0), GenWord::u(0, 1)),
                (GenWord::u(0, 1), GenWord::u(1, 1))
            ]
        );
        assert_eq!(
            coproduct_splittings(&GenWord::one(), 2),
            vec![(GenWord::one(), GenWord::one())]
        );
        assert_eq!(
            coproduct_splittings(&GenWord::from_pairs(&[(0, 0), (0, 0)]), 2).len(),
            4
        );
    }

    #[test]
    fn coproduct_of_antipoded_letter() {
        let s = coproduct_splittings(&GenWord::su(0, 1), 2);
        assert_eq!(s[1], (GenWord::su(1, 1), GenWord::su(0, 1)));
    }

    #[test]
    fn counit_values() {
        assert!(counit(&GenWord::one()).is_one());
        assert!(counit(&GenWord::u(0, 1)).is_zero());
        assert!(counit(&GenWord::from_pairs(&[(0, 0), (1, 1)])).is_one());
    }

    #[test]
    fn antipode_reverses() {
        let w = GenWord::from_pairs(&[(0, 0), (1, 0)]);
        assert_eq!(
            antipode_word(&w).unwrap(),
            GenWord(smallvec![GenLetter::su(1, 0), GenLetter::su(0, 0)])
        );
        assert_eq!(antipode_word(&GenWord::one()).unwrap(), GenWord::one());
        assert_eq!(
            antipode_word(&GenWord::su(0, 0)),
            Err(Error::MissingFunctionals)
        );
    }

    #[test]
    fn coassociativity_and_counit_law() {
        let n = 2;
        for w in GenWord::all_up_to(n, 3) {
            let mut left: Vec<_> = coproduct_splittings(&w, n)
                .into_iter()
                .flat_map(|(a, b)| {
                    coproduct_splittings(&a, n)
                        .into_iter()
                        .map(move |(x, y)| (x, y, b.clone()))
                })
                .collect();
            let mut right = triple_splittings(&w, n);
            left.sort();
            right.sort();
            assert_eq!(left, right);
        }
        for w in GenWord::all_up_to(n, 2) {
            let mut lhs = WordCombo::zero();
            let mut rhs = WordCombo::zero();
            for (a, b) in coproduct_splittings(&w, n) {
                lhs.add_term(b.clone(), &counit(&a));
                rhs.add_term(a, &counit(&b));
            }
            assert_eq!(lhs, WordCombo::word(w.clone()));
            assert_eq!(rhs, WordCombo::word(w));
        }
    }
}
