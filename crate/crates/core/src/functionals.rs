//! The functionals `f_b(a) = b(a₁ ⊗ S a₂)` and `fbar_b(a) = bbar(S a₁ ⊗ a₂)`,
//! their convolution products, and the identities relating them to `b`.
//!
//! Values on all words of a fixed length `L` are computed as one transfer
//! product: the pairing of an `L`-letter word with an `L`-letter word is a grid
//! of base tiles on `2L` legs, and the contraction `a₁ ⊗ a₂` closes the grid
//! against the vector `Σ_K e_(K, rev K)`. The word-by-word evaluator
//! ([`Functional::eval`]) goes through the recursive engine instead and is used
//! as a cross-check.

use std::fmt;
use std::sync::Arc;

use crate::bichar::{
    check_cotriangular, convolve, make_central_bichar, materialize, partial_transpose2,
    Bicharacter, PairForm,
};
use crate::error::{Error, Result};
use crate::ideal::RelationIdealSlice;
use crate::linalg::inverse;
use crate::matrix::{linear_index, multi_index, QMatrix};
use crate::outcome::Outcome;
use crate::rmatrix::RMatrixBundle;
use crate::scalar::Scalar;
use crate::series::SeriesSpec;
use crate::words::{antipode_word, coproduct_splittings, counit, GenWord, WordCombo};

/// Largest word length for which [`Functional::level`] will run.
pub const MAX_LEVEL: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    F,
    FBar,
}

#[derive(Clone)]
enum Source {
    Counit,
    /// `F`: `form(a₁ ⊗ S a₂)`. `FBar`: `partner(a₂ ⊗ S a₁)` with `partner = bbar_21`.
    Pairing {
        form: Arc<Bicharacter>,
        variant: Variant,
    },
    Conv(Arc<Functional>, Arc<Functional>),
}

/// A linear functional on words without S-letters.
#[derive(Clone)]
pub struct Functional {
    pub label: String,
    pub spec: SeriesSpec,
    /// `gen[i][j] = f(u^i_j)`.
    pub gen: QMatrix,
    source: Source,
}

impl fmt::Debug for Functional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Functional({}, {})", self.label, self.spec.label())
    }
}

pub fn counit_functional(spec: &SeriesSpec) -> Functional {
    Functional {
        label: "counit".into(),
        spec: spec.clone(),
        gen: QMatrix::identity(vec![spec.n]),
        source: Source::Counit,
    }
}

/// `f_b` or `fbar_b`. The bar variant is evaluated through `s = bbar_21`,
/// since `bbar(S x ⊗ y) = s(y ⊗ S x)` and `s` is again a bicharacter.
pub fn make_f(b: &Bicharacter, variant: Variant) -> Result<Functional> {
    let (form, label) = match variant {
        Variant::F => (b.clone(), format!("f[{}]", b.tag)),
        Variant::FBar => (b.inverse_flip()?, format!("fbar[{}]", b.tag)),
    };
    let mut f = Functional {
        label,
        spec: b.spec.clone(),
        gen: QMatrix::identity(vec![b.spec.n]),
        source: Source::Pairing {
            form: Arc::new(form),
            variant,
        },
    };
    f.gen = f.level(1)?;
    Ok(f)
}

pub fn convolve_functionals(f: &Functional, g: &Functional) -> Result<Functional> {
    if f.spec != g.spec {
        return Err(Error::Shape(format!(
            "cannot convolve {} with {}",
            f.spec.label(),
            g.spec.label()
        )));
    }
    Ok(Functional {
        label: format!("{} * {}", f.label, g.label),
        spec: f.spec.clone(),
        gen: f.gen.mul(&g.gen),
        source: Source::Conv(Arc::new(f.clone()), Arc::new(g.clone())),
    })
}

impl Functional {
    /// Word-by-word value through coproduct splittings and the recursive engine.
    pub fn eval(&self, w: &GenWord) -> Result<Scalar> {
        if w.has_s() {
            return Err(Error::Shape(format!(
                "functional {} is evaluated on words without S-letters",
                self.label
            )));
        }
        let n = self.spec.n;
        Ok(match &self.source {
            Source::Counit => counit(w),
            Source::Pairing { form, variant } => {
                let mut acc = Scalar::zero();
                for (a1, a2) in coproduct_splittings(w, n) {
                    acc += &match variant {
                        Variant::F => form.eval(&a1, &antipode_word(&a2)?),
                        Variant::FBar => form.eval(&a2, &antipode_word(&a1)?),
                    };
                }
                acc
            }
            Source::Conv(f, g) => {
                let mut acc = Scalar::zero();
                for (a1, a2) in coproduct_splittings(w, n) {
                    let v = f.eval(&a1)?;
                    if !v.is_zero() {
                        acc += &(&v * &g.eval(&a2)?);
                    }
                }
                acc
            }
        })
    }

    pub fn eval_combo(&self, x: &WordCombo) -> Result<Scalar> {
        let mut acc = Scalar::zero();
        for (w, c) in x.terms() {
            acc += &(c * &self.eval(w)?);
        }
        Ok(acc)
    }

    /// Values on all words of length `len`: entry `(I, J)` is `f(u^I_J)`.
    pub fn level(&self, len: usize) -> Result<QMatrix> {
        let n = self.spec.n;
        if len > MAX_LEVEL {
            return Err(Error::ResourceBound(format!(
                "functional level {len} above {MAX_LEVEL}"
            )));
        }
        if len == 0 {
            return Ok(QMatrix::identity(vec![1]));
        }
        match &self.source {
            Source::Counit => Ok(QMatrix::identity(vec![n; len])),
            Source::Pairing { form, variant } => Ok(closed_grid(form, *variant, len)),
            Source::Conv(f, g) => Ok(f.level(len)?.mul(&g.level(len)?)),
        }
    }
}

fn digit(idx: usize, leg: usize, legs: usize, n: usize) -> usize {
    (idx / n.pow((legs - 1 - leg) as u32)) % n
}

fn with_digits(
    idx: usize,
    (a, b): (usize, usize),
    (x, y): (usize, usize),
    legs: usize,
    n: usize,
) -> usize {
    let sa = n.pow((legs - 1 - a) as u32);
    let sb = n.pow((legs - 1 - b) as u32);
    let cur_a = (idx / sa) % n;
    let cur_b = (idx / sb) % n;
    idx - cur_a * sa - cur_b * sb + x * sa + y * sb
}

/// Tile positions of the `rows x cols` grid, left to right as matrix factors:
/// row `t` meets the columns from last to first.
fn grid_factors(rows: usize, cols: usize) -> Vec<(usize, usize)> {
    (0..rows)
        .flat_map(|t| (0..cols).rev().map(move |s| (t, rows + s)))
        .collect()
}

/// `tile_{ab} v` (`left`) or `v tile_{ab}` on a dense vector over `legs` legs.
fn apply_tile(
    tile: &QMatrix,
    tile_t: &QMatrix,
    v: &[Scalar],
    legs: (usize, usize),
    total: usize,
    n: usize,
    left: bool,
) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(); v.len()];
    let m = if left { tile_t } else { tile };
    for (idx, val) in v.iter().enumerate() {
        if val.is_zero() {
            continue;
        }
        let key = digit(idx, legs.0, total, n) * n + digit(idx, legs.1, total, n);
        for (&k, c) in m.row(key) {
            let j = with_digits(idx, legs, (k / n, k % n), total, n);
            out[j] += &(c * val);
        }
    }
    out
}

/// `f` or `fbar` on all words of length `len`, from the closed transfer grid.
fn closed_grid(form: &Bicharacter, variant: Variant, len: usize) -> QMatrix {
    let n = form.spec.n;
    let total = 2 * len;
    let tile = partial_transpose2(form.b01(), n);
    let tile_t = tile.transpose();
    let shape = vec![n; total];
    let mut v = vec![Scalar::zero(); n.pow(total as u32)];
    for k in 0..n.pow(len as u32) {
        let ks = multi_index(&vec![n; len], k);
        let idx: Vec<usize> = ks.iter().chain(ks.iter().rev()).copied().collect();
        v[linear_index(&shape, &idx)] = Scalar::one();
    }
    let factors = grid_factors(len, len);
    match variant {
        Variant::F => {
            for &legs in factors.iter().rev() {
                v = apply_tile(&tile, &tile_t, &v, legs, total, n, true);
            }
        }
        Variant::FBar => {
            for &legs in &factors {
                v = apply_tile(&tile, &tile_t, &v, legs, total, n, false);
            }
        }
    }
    let mut out = QMatrix::square_zeros(vec![n; len]);
    for (idx, val) in v.into_iter().enumerate() {
        if val.is_zero() {
            continue;
        }
        let ds = multi_index(&shape, idx);
        let (front, back) = ds.split_at(len);
        let back: Vec<usize> = back.iter().rev().copied().collect();
        let (i, j) = match variant {
            // front = I, back = rev J
            Variant::F => (front.to_vec(), back),
            // front = J, back = rev I
            Variant::FBar => (back, front.to_vec()),
        };
        out.set_at(&i, &j, val);
    }
    out
}

/// `b(u^I_K ⊗ u^J_L)` for `|I| = p`, `|J| = q`, rows `(I, J)`, columns `(K, L)`.
pub fn pairing_matrix(b: &Bicharacter, p: usize, q: usize) -> QMatrix {
    let n = b.spec.n;
    let total = p + q;
    let dim = n.pow(total as u32);
    let tile = b.b00().clone();
    let mut out = QMatrix::identity(vec![n; total]);
    for legs in grid_factors(p, q) {
        let mut f = QMatrix::square_zeros(vec![n; total]);
        for idx in 0..dim {
            let key = digit(idx, legs.0, total, n) * n + digit(idx, legs.1, total, n);
            for (&k, c) in tile.row(key) {
                f.set(
                    idx,
                    with_digits(idx, legs, (k / n, k % n), total, n),
                    c.clone(),
                );
            }
        }
        out = out.mul(&f);
    }
    out
}

/// Reorders a matrix on `(I, J)` legs into one on `(J, I)` legs.
fn swap_blocks(m: &QMatrix, p: usize, q: usize, n: usize) -> QMatrix {
    let shape = vec![n; p + q];
    let swap = |idx: usize| {
        let d = multi_index(&shape, idx);
        let e: Vec<usize> = d[p..].iter().chain(d[..p].iter()).copied().collect();
        linear_index(&shape, &e)
    };
    let mut out = QMatrix::square_zeros(shape.clone());
    for (r, c, v) in m.entries() {
        out.set(swap(r), swap(c), v.clone());
    }
    out
}

fn first_difference(a: &QMatrix, b: &QMatrix) -> Option<String> {
    a.sub(b).entries().next().map(|(r, c, v)| {
        format!(
            "{:?},{:?}: difference {v}",
            multi_index(a.row_shape(), r),
            multi_index(a.col_shape(), c)
        )
    })
}

fn record_equal(out: &mut Outcome, what: &str, a: &QMatrix, b: &QMatrix) {
    let diff = first_difference(a, b);
    out.record(diff.is_none(), || {
        format!("{what}: {}", diff.unwrap_or_default())
    });
}

/// `r21 ∗ r ∗ (f∘m) = (f∘m) ∗ r21 ∗ r = f ⊗ f` on pairs of words with lengths
/// `(p, q)`, `p, q >= 1`, `p + q <= max_total`.
pub fn twisted_product_check(b: &Bicharacter, max_total: usize) -> Result<Outcome> {
    if max_total > MAX_LEVEL {
        return Err(Error::ResourceBound(format!(
            "total degree {max_total} above {MAX_LEVEL}"
        )));
    }
    let n = b.spec.n;
    let f = make_f(b, Variant::F)?;
    let mut out = Outcome::new(format!("f∘m twisted by r21*r equals f⊗f for {}", b.tag));
    let levels: Vec<QMatrix> = (0..=max_total).map(|l| f.level(l)).collect::<Result<_>>()?;
    for total in 2..=max_total {
        for p in 1..total {
            let q = total - p;
            let r = pairing_matrix(b, p, q);
            let r21 = swap_blocks(&pairing_matrix(b, q, p), q, p, n);
            let fm = &levels[total];
            let ff = levels[p].kron(&levels[q]);
            let rr = r21.mul(&r);
            record_equal(&mut out, &format!("({p},{q}) left"), &rr.mul(fm), &ff);
            record_equal(&mut out, &format!("({p},{q}) right"), &fm.mul(&rr), &ff);
        }
    }
    Ok(out)
}

/// Whether `f(vw) = f(v) f(w)` for all words with `|v| + |w| <= d`.
pub fn character_defect(f: &Functional, d: usize) -> Result<Outcome> {
    let mut out = Outcome::new(format!("{} is multiplicative up to degree {d}", f.label));
    let levels: Vec<QMatrix> = (0..=d).map(|l| f.level(l)).collect::<Result<_>>()?;
    for total in 2..=d {
        for p in 1..total {
            record_equal(
                &mut out,
                &format!("({p},{})", total - p),
                &levels[total],
                &levels[p].kron(&levels[total - p]),
            );
        }
    }
    Ok(out)
}

/// The four functionals of a form `r` and its partner `s = rbar_21`.
pub struct FourFunctionals {
    pub f_r: Functional,
    pub fbar_r: Functional,
    pub f_s: Functional,
    pub fbar_s: Functional,
}

impl FourFunctionals {
    pub fn new(r: &Bicharacter) -> Result<Self> {
        let s = r.inverse_flip()?;
        Ok(FourFunctionals {
            f_r: make_f(r, Variant::F)?,
            fbar_r: make_f(r, Variant::FBar)?,
            f_s: make_f(&s, Variant::F)?,
            fbar_s: make_f(&s, Variant::FBar)?,
        })
    }

    pub fn all(&self) -> [&Functional; 4] {
        [&self.f_r, &self.fbar_r, &self.f_s, &self.fbar_s]
    }
}

/// `fbar ∗ f = ε` on generators (matrix form) and on words of length 2.
pub fn inverse_pair_check(f: &Functional, fbar: &Functional) -> Result<Outcome> {
    let mut out = Outcome::new(format!("{} inverts {}", fbar.label, f.label));
    for l in 1..=2 {
        let prod = fbar.level(l)?.mul(&f.level(l)?);
        record_equal(
            &mut out,
            &format!("length {l}"),
            &prod,
            &QMatrix::identity(vec![f.spec.n; l]),
        );
    }
    Ok(out)
}

/// Commutation, centrality of `z = f_r ∗ fbar_s`, the character `g = f_r ∗ f_s`,
/// and `S⁴ = gbar ∗ id ∗ g` on generators.
pub fn functional_identities(r: &Bicharacter, slice: &RelationIdealSlice) -> Result<Outcome> {
    let n = r.spec.n;
    let four = FourFunctionals::new(r)?;
    let mut out = Outcome::new(format!("functional identities for {}", r.tag));

    let fs = four.all();
    for l in 1..=2 {
        let mats: Vec<QMatrix> = fs.iter().map(|f| f.level(l)).collect::<Result<_>>()?;
        for a in 0..4 {
            for b in a + 1..4 {
                let what = format!("{} and {} commute at length {l}", fs[a].label, fs[b].label);
                record_equal(
                    &mut out,
                    &what,
                    &mats[a].mul(&mats[b]),
                    &mats[b].mul(&mats[a]),
                );
            }
        }
    }

    let z = convolve_functionals(&four.f_r, &four.fbar_s)?;
    for l in 1..=2.min(slice.degree) {
        let zl = z.level(l)?;
        let words = GenWord::all_of_len(n, l);
        let shape = vec![n; l];
        let word_of = |a: usize, b: usize| {
            let (ia, ib) = (multi_index(&shape, a), multi_index(&shape, b));
            GenWord::from_pairs(
                &ia.iter()
                    .zip(&ib)
                    .map(|(&x, &y)| (x, y))
                    .collect::<Vec<_>>(),
            )
        };
        let mut central = true;
        let mut witness = String::new();
        'outer: for i in 0..words.len().min(n.pow(l as u32)) {
            for j in 0..n.pow(l as u32) {
                let mut x = WordCombo::zero();
                for (&k, c) in zl.row(i) {
                    x.add_term(word_of(k, j), c);
                }
                for k in 0..n.pow(l as u32) {
                    if let Some(c) = zl.get_ref(k, j) {
                        x.add_term(word_of(i, k), &-c.clone());
                    }
                }
                if !slice.contains(&x)? {
                    central = false;
                    witness = format!("z*id - id*z at {}", word_of(i, j));
                    break 'outer;
                }
            }
        }
        out.record(central, || witness);
    }

    let g = convolve_functionals(&four.f_r, &four.f_s)?;
    out.absorb(character_defect(&g, 2)?);

    // S² = fbar_r ∗ id ∗ f_r acts on u by U ↦ A U B; S⁴ by A²UB².
    let (a, b) = (&four.fbar_r.gen, &four.f_r.gen);
    let gbar = four.fbar_s.gen.mul(&four.fbar_r.gen);
    record_equal(
        &mut out,
        "gbar inverts g",
        &gbar.mul(&g.gen),
        &QMatrix::identity(vec![n]),
    );
    let s4 = a.mul(a).kron(&b.mul(b));
    record_equal(&mut out, "S^4 = gbar*id*g", &s4, &gbar.kron(&g.gen));
    Ok(out)
}

/// `(gen(fbar_r), gen(f_r))`: `S²(u^i_j) = Σ fbar_r(u^i_k) u^k_l f_r(u^l_j)`.
pub fn s2_matrix(b: &Bicharacter) -> Result<(QMatrix, QMatrix)> {
    Ok((make_f(b, Variant::FBar)?.gen, make_f(b, Variant::F)?.gen))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    /// `F_r = Dtilde^{-2}`.
    Minus,
    /// `F_r = Dtilde^{2}`.
    Plus,
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Orientation::Minus => "F_r = D~^-2",
            Orientation::Plus => "F_r = D~^+2",
        })
    }
}

/// `Dtilde = c · gen(f_r)^{-1}`, kept as `gen(f_r)^{-1}` and `c²`.
#[derive(Clone, Debug)]
pub struct ModularMatrix {
    pub unnormalized: QMatrix,
    /// `Tr(gen f_r) / Tr(gen f_r^{-1})`, so that `Tr Dtilde = Tr Dtilde^{-1}`.
    pub c_squared: Scalar,
}

impl ModularMatrix {
    pub fn new(f_gen: &QMatrix) -> Result<ModularMatrix> {
        let unnormalized = inverse(f_gen)?;
        let c_squared = f_gen.trace().checked_div(&unnormalized.trace())?;
        Ok(ModularMatrix {
            unnormalized,
            c_squared,
        })
    }

    pub fn square(&self) -> QMatrix {
        self.unnormalized
            .mul(&self.unnormalized)
            .scale(&self.c_squared)
    }

    pub fn inverse_square(&self) -> Result<QMatrix> {
        let d = inverse(&self.unnormalized)?;
        Ok(d.mul(&d).scale(&self.c_squared.inv()?))
    }
}

#[derive(Clone, Debug)]
pub struct ModularReport {
    pub spec: SeriesSpec,
    pub f_r: QMatrix,
    pub modular: ModularMatrix,
    /// `gen(f_r) · gen(f_s)`.
    pub big_f: QMatrix,
    pub orientation: Option<Orientation>,
    /// Both orientations match (`Dtilde⁴ = 1`).
    pub ambiguous: bool,
    pub checks: Outcome,
}

impl ModularReport {
    /// The diagonal of `F_r`, one entry per line.
    pub fn golden_text(&self) -> String {
        let mut s = format!(
            "{}\t{}\n",
            self.spec.label(),
            self.orientation
                .map_or("none".to_string(), |o| o.to_string())
        );
        for i in 0..self.spec.n {
            s.push_str(&format!("{}\n", self.big_f.get(i, i)));
        }
        s
    }
}

/// Compares `F_r = f_r ∗ f_s` with `Dtilde^{±2}` and checks that replacing `r_z`
/// by `c_zeta ∗ r_z` leaves `F_r` unchanged.
pub fn modular_compare(
    bundle: &RMatrixBundle,
    z: &Scalar,
    zetas: &[Scalar],
) -> Result<ModularReport> {
    let spec = &bundle.spec;
    let r = crate::bichar::make_rform(bundle, z)?;
    let four = FourFunctionals::new(&r)?;
    let f_r = four.f_r.gen.clone();
    let big_f = f_r.mul(&four.f_s.gen);
    let mut checks = Outcome::new(format!("modular comparison for {}", spec.label()));
    checks.record(f_r.is_diagonal(), || {
        format!("gen(f_r) is not diagonal:\n{f_r}")
    });
    checks.record(big_f.is_diagonal(), || {
        format!("F_r is not diagonal:\n{big_f}")
    });
    let modular = ModularMatrix::new(&f_r)?;
    let minus = big_f == modular.inverse_square()?;
    let plus = big_f == modular.square();
    let orientation = match (minus, plus) {
        (true, _) => Some(Orientation::Minus),
        (false, true) => Some(Orientation::Plus),
        _ => None,
    };
    checks.record(orientation.is_some(), || {
        "F_r matches neither D~^2 nor D~^-2".into()
    });
    let rc: Arc<dyn PairForm> = Arc::new(r.clone());
    for zeta in zetas {
        let c = make_central_bichar(spec, zeta)?;
        let conv = convolve(Arc::new(c), rc.clone())?;
        let twisted = materialize(&conv, format!("c_zeta*r [zeta={zeta}]"))?;
        let other = FourFunctionals::new(&twisted)?;
        let g = other.f_r.gen.mul(&other.f_s.gen);
        checks.record(g == big_f, || format!("F_r changes under zeta = {zeta}"));
    }
    Ok(ModularReport {
        spec: spec.clone(),
        f_r,
        modular,
        big_f,
        orientation,
        ambiguous: minus && plus,
        checks,
    })
}

/// `f_b` is multiplicative at degree 2 exactly when `b` is cotriangular.
pub fn cotriangular_consistency(b: &Bicharacter) -> Result<(bool, bool)> {
    let f = make_f(b, Variant::F)?;
    Ok((character_defect(&f, 2)?.passed(), check_cotriangular(b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bichar::make_rform;
    use crate::ideal::build_relation_slice;
    use crate::rmatrix::build_rmatrix;
    use crate::series::{build_series, Series};

    fn rform(series: Series, n: usize) -> Bicharacter {
        let spec = build_series(series, n).unwrap();
        let bundle = build_rmatrix(&spec).unwrap();
        make_rform(&bundle, &crate::bichar::default_z(&spec).unwrap()).unwrap()
    }

    #[test]
    fn levels_match_engine() {
        for (series, n) in [(Series::GL, 2), (Series::O, 3)] {
            let r = rform(series, n);
            for variant in [Variant::F, Variant::FBar] {
                let f = make_f(&r, variant).unwrap();
                for len in 1..=2 {
                    let m = f.level(len).unwrap();
                    for w in GenWord::all_of_len(n, len) {
                        let i: Vec<usize> = w.letters().iter().map(|l| l.i as usize).collect();
                        let j: Vec<usize> = w.letters().iter().map(|l| l.j as usize).collect();
                        assert_eq!(m.at(&i, &j), f.eval(&w).unwrap(), "{variant:?} {w}");
                    }
                }
            }
        }
    }

    #[test]
    fn generator_values_are_partial_traces() {
        let r = rform(Series::GL, 2);
        let f = make_f(&r, Variant::F).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = Scalar::zero();
                for k in 0..2 {
                    acc += &r.b01().get(i * 2 + k, k * 2 + j);
                }
                assert_eq!(f.gen.get(i, j), acc);
            }
        }
        assert_eq!(f.eval(&GenWord::one()).unwrap(), Scalar::one());
    }

    #[test]
    fn inverse_pairs() {
        let r = rform(Series::SL, 2);
        let four = FourFunctionals::new(&r).unwrap();
        assert!(inverse_pair_check(&four.f_r, &four.fbar_r)
            .unwrap()
            .passed());
        assert!(inverse_pair_check(&four.f_s, &four.fbar_s)
            .unwrap()
            .passed());
        let eps = counit_functional(&r.spec);
        let fe = convolve_functionals(&four.f_r, &eps).unwrap();
        assert_eq!(fe.level(2).unwrap(), four.f_r.level(2).unwrap());
    }

    #[test]
    fn twisted_product_holds_and_f_is_no_character() {
        let r = rform(Series::GL, 2);
        let out = twisted_product_check(&r, 3).unwrap();
        assert!(out.passed(), "{out}");
        let (character, cotri) = cotriangular_consistency(&r).unwrap();
        assert!(!character && !cotri);
    }

    #[test]
    fn perturbed_form_breaks_twisted_product() {
        let r = rform(Series::GL, 2);
        let bad = r.perturbed(0, 3, &Scalar::ratio(1, 5)).unwrap();
        assert!(!twisted_product_check(&bad, 2).unwrap().passed());
    }

    #[test]
    fn central_forms_follow_cotriangularity() {
        let spec = build_series(Series::GL, 2).unwrap();
        for (zeta, expect) in [
            (Scalar::int(-1), true),
            (Scalar::one(), true),
            (spec.q.clone(), false),
        ] {
            let c = make_central_bichar(&spec, &zeta).unwrap();
            let (character, cotri) = cotriangular_consistency(&c).unwrap();
            assert_eq!((character, cotri), (expect, expect), "zeta = {zeta}");
        }
    }

    #[test]
    fn identities_for_o3() {
        let r = rform(Series::O, 3);
        let spec = r.spec.clone();
        let slice = build_relation_slice(&build_rmatrix(&spec).unwrap(), 2).unwrap();
        let out = functional_identities(&r, &slice).unwrap();
        assert!(out.passed(), "{out}");
    }

    #[test]
    fn modular_gl2() {
        let spec = build_series(Series::GL, 2).unwrap();
        let bundle = build_rmatrix(&spec).unwrap();
        let rep =
            modular_compare(&bundle, &Scalar::int(3), &[Scalar::int(-1), spec.q.clone()]).unwrap();
        assert!(rep.checks.passed(), "{}", rep.checks);
    }
}
