//! The algebras BWM₃(q, μ) and H₃(q) with exact structure constants, and their
//! images on the three-fold tensor space.
//!
//! Structure constants are read off a faithful matrix model (irreducible
//! blocks of dimensions 1, 1, 2 and, for BWM₃, 3). The table is then certified
//! on its own: associativity on every basis triple, the defining relations and
//! the basis words.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::{inverse, rank_of, Echelon, SpanSolver};
use crate::matrix::{leg_embed, QMatrix, SparseVec};
use crate::outcome::Outcome;
use crate::rmatrix::RMatrixBundle;
use crate::scalar::Scalar;
use crate::series::{Series, SeriesSpec};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Gen {
    G1,
    G2,
    G1Inv,
    G2Inv,
    E1,
    E2,
}

impl Gen {
    fn label(self) -> &'static str {
        match self {
            Gen::G1 => "G1",
            Gen::G2 => "G2",
            Gen::G1Inv => "G1^-1",
            Gen::G2Inv => "G2^-1",
            Gen::E1 => "E1",
            Gen::E2 => "E2",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum AlgebraKind {
    Bwm3,
    Hecke3,
}

use Gen::*;

/// The standard basis words; the Hecke algebra uses the first six.
pub const BASIS_WORDS: [&[Gen]; 15] = [
    &[],
    &[G1],
    &[G2],
    &[G1, G2],
    &[G2, G1],
    &[G1, G2, G1],
    &[E1],
    &[E2],
    &[E1, E2],
    &[E2, E1],
    &[G1, E2],
    &[E2, G1],
    &[G2Inv, E1],
    &[E1, G2Inv],
    &[G1, E2, G1],
];

pub fn word_label(w: &[Gen]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.iter().map(|g| g.label()).collect()
}

/// An element as dense coordinates in the basis.
pub type Elem = Vec<Scalar>;

#[derive(Clone, Debug)]
pub struct AbstractAlgebra {
    pub kind: AlgebraKind,
    pub labels: Vec<String>,
    pub q: Scalar,
    pub lambda: Scalar,
    /// `μ`, BWM only.
    pub mu: Option<Scalar>,
    /// `structure[i][j]` = coordinates of `b_i b_j`.
    pub structure: Vec<Vec<SparseVec>>,
}

/// `I - λ^{-1}(G - G^{-1})`.
fn tangle_of(g: &QMatrix, g_inv: &QMatrix, lambda: &Scalar) -> Result<QMatrix> {
    let id = QMatrix::identity(g.row_shape().to_vec());
    Ok(id.sub(&g.sub(g_inv).scale(&lambda.inv()?)))
}

fn block_diag(blocks: &[QMatrix]) -> QMatrix {
    let total: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = QMatrix::square_zeros(vec![total]);
    let mut off = 0;
    for b in blocks {
        for (i, j, v) in b.entries() {
            out.set(off + i, off + j, v.clone());
        }
        off += b.nrows();
    }
    out
}

/// `(G1, G2)` in the faithful model.
fn model_generators(
    kind: AlgebraKind,
    q: &Scalar,
    mu: Option<&Scalar>,
) -> Result<(QMatrix, QMatrix)> {
    let one = Scalar::one();
    let qi = q.inv()?;
    let mqi = -qi.clone();
    let q2 = q * q;
    let q2p1 = &q2 + &one;
    // two-dimensional Hecke block
    let x = -(&qi / &q2p1);
    let lambda = q - &qi;
    let w = &lambda - &x;
    let y = &(&(&q2 * &q2) + &q2) + &one;
    let y = &y / &(&q2p1 * &q2p1);
    let g1_h = QMatrix::diag(&[q.clone(), mqi.clone()]);
    let g2_h = QMatrix::from_dense(&[vec![x, one.clone()], vec![y, w]]);
    let mut b1 = vec![
        QMatrix::diag(std::slice::from_ref(q)),
        QMatrix::diag(std::slice::from_ref(&mqi)),
        g1_h,
    ];
    let mut b2 = vec![
        QMatrix::diag(std::slice::from_ref(q)),
        QMatrix::diag(std::slice::from_ref(&mqi)),
        g2_h,
    ];
    if kind == AlgebraKind::Bwm3 {
        let a = mu
            .ok_or_else(|| Error::InvalidSeries("BWM parameters need μ".into()))?
            .inv()?;
        let q3 = &q2 * q;
        let am = &a - q;
        let aq1 = &(&a * q) + &one;
        let am1 = &(&a - &one) * &(&a + &one);
        let amq3 = &a - &q3;
        let aq3p1 = &(&a * &q3) + &one;
        let d = |num: Scalar, den: Scalar| &num / &den;
        let g2 = vec![
            vec![
                d(-(&(q - &one) * &(q + &one)), &am * &aq1),
                one.clone(),
                one.clone(),
            ],
            vec![
                d(&am1 * &amq3, &(&(&(q * &am) * &am) * &q2p1) * &aq1),
                d(&a * &(&(&a * q) - &one), &(q * &am) * &q2p1),
                d(-(&a * &amq3), &(&q2 * &am) * &q2p1),
            ],
            vec![
                d(&(&q3 * &am1) * &aq3p1, &(&(&am * &q2p1) * &aq1) * &aq1),
                d(-(&(&a * &q2) * &aq3p1), &q2p1 * &aq1),
                d(&(&a * &q3) * &(&a + q), &q2p1 * &aq1),
            ],
        ];
        b1.push(QMatrix::diag(&[a.clone(), q.clone(), mqi.clone()]));
        b2.push(QMatrix::from_dense(&g2));
    }
    Ok((block_diag(&b1), block_diag(&b2)))
}

/// Generator images in some model: `[G1, G2, G1^-1, G2^-1, E1, E2]`.
#[derive(Clone, Debug)]
pub struct GenImages(pub [QMatrix; 6]);

impl GenImages {
    fn from_braid(
        g1: QMatrix,
        g2: QMatrix,
        g1i: QMatrix,
        g2i: QMatrix,
        lambda: &Scalar,
    ) -> Result<Self> {
        let e1 = tangle_of(&g1, &g1i, lambda)?;
        let e2 = tangle_of(&g2, &g2i, lambda)?;
        Ok(GenImages([g1, g2, g1i, g2i, e1, e2]))
    }

    pub fn of(&self, g: Gen) -> &QMatrix {
        let k = match g {
            G1 => 0,
            G2 => 1,
            G1Inv => 2,
            G2Inv => 3,
            E1 => 4,
            E2 => 5,
        };
        &self.0[k]
    }

    pub fn word(&self, w: &[Gen]) -> QMatrix {
        let id = QMatrix::identity(self.0[0].row_shape().to_vec());
        w.iter().fold(id, |acc, g| acc.mul(self.of(*g)))
    }
}

fn basis_words(kind: AlgebraKind) -> &'static [&'static [Gen]] {
    match kind {
        AlgebraKind::Bwm3 => &BASIS_WORDS,
        AlgebraKind::Hecke3 => &BASIS_WORDS[..6],
    }
}

pub fn build_bwm3(q: &Scalar, mu: &Scalar) -> Result<AbstractAlgebra> {
    build_algebra(AlgebraKind::Bwm3, q, Some(mu))
}

pub fn build_hecke3(q: &Scalar) -> Result<AbstractAlgebra> {
    build_algebra(AlgebraKind::Hecke3, q, None)
}

/// Sp(2): `q R̂` satisfies the Hecke relation at `q²`, and the BWM₃ model
/// degenerates at `μ = -q³`. Returns the generator scale.
pub fn hecke_rescaling(spec: &SeriesSpec) -> Option<Scalar> {
    (spec.series == Series::Sp && spec.n == 2).then(|| spec.q.clone())
}

/// The algebra matching a spec: BWM₃ for O/Sp, H₃ otherwise (H₃ at `q²` for Sp(2)).
pub fn algebra_for(spec: &SeriesSpec) -> Result<AbstractAlgebra> {
    if let Some(s) = hecke_rescaling(spec) {
        return build_hecke3(&(&spec.q * &s));
    }
    match &spec.mu {
        Some(mu) => build_bwm3(&spec.q, mu),
        None => build_hecke3(&spec.q),
    }
}

fn build_algebra(kind: AlgebraKind, q: &Scalar, mu: Option<&Scalar>) -> Result<AbstractAlgebra> {
    let lambda = q - &q.inv()?;
    let (g1, g2) = model_generators(kind, q, mu)?;
    let (g1i, g2i) = (inverse(&g1)?, inverse(&g2)?);
    let model = GenImages::from_braid(g1, g2, g1i, g2i, &lambda)?;
    let words = basis_words(kind);
    let mats: Vec<QMatrix> = words.iter().map(|w| model.word(w)).collect();
    let images: Vec<SparseVec> = mats.iter().map(|m| m.flatten()).collect();
    let r = rank_of(&images);
    if r != words.len() {
        return Err(Error::Consistency {
            identity: "basis words independent in the model".into(),
            witness: format!("rank {r} of {}", words.len()),
        });
    }
    let solver = SpanSolver::new(&images);
    let mut structure = Vec::with_capacity(words.len());
    for (i, wi) in words.iter().enumerate() {
        let mut row = Vec::with_capacity(words.len());
        for (j, wj) in words.iter().enumerate() {
            let target = mats[i].mul(&mats[j]).flatten();
            let c = solver
                .coefficients(&target)
                .ok_or_else(|| Error::Consistency {
                    identity: "basis closed under products".into(),
                    witness: format!("{} * {}", word_label(wi), word_label(wj)),
                })?;
            row.push(
                c.into_iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .collect(),
            );
        }
        structure.push(row);
    }
    Ok(AbstractAlgebra {
        kind,
        labels: words.iter().map(|w| word_label(w)).collect(),
        q: q.clone(),
        lambda,
        mu: mu.cloned(),
        structure,
    })
}

impl AbstractAlgebra {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn basis(&self, k: usize) -> Elem {
        let mut v = vec![Scalar::zero(); self.dim()];
        v[k] = Scalar::one();
        v
    }

    pub fn scalar(&self, c: &Scalar) -> Elem {
        let mut v = vec![Scalar::zero(); self.dim()];
        v[0] = c.clone();
        v
    }

    pub fn add(&self, x: &Elem, y: &Elem) -> Elem {
        x.iter().zip(y).map(|(a, b)| a + b).collect()
    }

    pub fn sub(&self, x: &Elem, y: &Elem) -> Elem {
        x.iter().zip(y).map(|(a, b)| a - b).collect()
    }

    pub fn scale(&self, x: &Elem, c: &Scalar) -> Elem {
        x.iter().map(|a| a * c).collect()
    }

    pub fn mul(&self, x: &Elem, y: &Elem) -> Elem {
        let mut out = vec![Scalar::zero(); self.dim()];
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a * b;
                for (k, c) in &self.structure[i][j] {
                    out[*k] += &(&ab * c);
                }
            }
        }
        out
    }

    /// Generator as an element; inverses through the skein relation.
    pub fn gen(&self, g: Gen) -> Elem {
        let lam = &self.lambda;
        let bwm = self.kind == AlgebraKind::Bwm3;
        let inv = |gk: usize, ek: usize| {
            // G^-1 = G + λE - λ, with E = 0 in the Hecke quotient
            let mut v = self.sub(&self.basis(gk), &self.scalar(lam));
            if bwm {
                v = self.add(&v, &self.scale(&self.basis(ek), lam));
            }
            v
        };
        match g {
            G1 => self.basis(1),
            G2 => self.basis(2),
            G1Inv => inv(1, 6),
            G2Inv => inv(2, 7),
            E1 if bwm => self.basis(6),
            E2 if bwm => self.basis(7),
            _ => vec![Scalar::zero(); self.dim()],
        }
    }

    pub fn word(&self, w: &[Gen]) -> Elem {
        w.iter()
            .fold(self.basis(0), |acc, g| self.mul(&acc, &self.gen(*g)))
    }

    /// `(b_i b_j) b_k = b_i (b_j b_k)` on every triple.
    pub fn certify_associativity(&self) -> Outcome {
        let d = self.dim();
        let mut out = Outcome::new(format!("associativity ({d}^3 triples)"));
        let prods: Vec<Vec<Elem>> = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| self.mul(&self.basis(i), &self.basis(j)))
                    .collect()
            })
            .collect();
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let l = self.mul(&prods[i][j], &self.basis(k));
                    let r = self.mul(&self.basis(i), &prods[j][k]);
                    out.record(l == r, || {
                        format!("({} {}) {}", self.labels[i], self.labels[j], self.labels[k])
                    });
                }
            }
        }
        out
    }

    fn rel(&self, out: &mut Outcome, name: &str, lhs: Elem, rhs: Elem) {
        out.record(lhs == rhs, || format!("{name} fails"));
    }

    /// Defining relations and the basis words themselves.
    pub fn certify_relations(&self) -> Outcome {
        let mut out = Outcome::new("defining relations");
        let w = |g: &[Gen]| self.word(g);
        let one = self.basis(0);
        self.rel(&mut out, "braid", w(&[G1, G2, G1]), w(&[G2, G1, G2]));
        self.rel(&mut out, "G1 G1^-1 = 1", w(&[G1, G1Inv]), one.clone());
        self.rel(&mut out, "G2^-1 G2 = 1", w(&[G2Inv, G2]), one.clone());
        if self.kind == AlgebraKind::Bwm3 {
            let mu_inv = self
                .mu
                .as_ref()
                .expect("BWM has μ")
                .inv()
                .expect("μ is nonzero");
            self.rel(&mut out, "E1 E2 E1 = E1", w(&[E1, E2, E1]), w(&[E1]));
            self.rel(&mut out, "E2 E1 E2 = E2", w(&[E2, E1, E2]), w(&[E2]));
            self.rel(
                &mut out,
                "G1 E1 = μ^-1 E1",
                w(&[G1, E1]),
                self.scale(&w(&[E1]), &mu_inv),
            );
            self.rel(
                &mut out,
                "E2 G2 = μ^-1 E2",
                w(&[E2, G2]),
                self.scale(&w(&[E2]), &mu_inv),
            );
            self.rel(
                &mut out,
                "G2 E1 G2 = G1^-1 E2 G1^-1",
                w(&[G2, E1, G2]),
                w(&[G1Inv, E2, G1Inv]),
            );
            self.rel(
                &mut out,
                "G2^-1 E1 G2^-1 = G1 E2 G1",
                w(&[G2Inv, E1, G2Inv]),
                w(&[G1, E2, G1]),
            );
            self.rel(
                &mut out,
                "E1 E2 G1 = E1 G2^-1",
                w(&[E1, E2, G1]),
                w(&[E1, G2Inv]),
            );
            self.rel(
                &mut out,
                "G1 E2 E1 = G2^-1 E1",
                w(&[G1, E2, E1]),
                w(&[G2Inv, E1]),
            );
        } else {
            // quadratic relation G^2 = λ G + 1
            let g = w(&[G1]);
            let rhs = self.add(&self.scale(&g, &self.lambda), &one);
            self.rel(&mut out, "G1^2 = λ G1 + 1", w(&[G1, G1]), rhs);
        }
        for (k, bw) in basis_words(self.kind).iter().enumerate() {
            self.rel(
                &mut out,
                &format!("basis word {}", self.labels[k]),
                self.word(bw),
                self.basis(k),
            );
        }
        out
    }
}

/// Cubic polynomials in `(α, β, γ)` with algebra coefficients.
pub type Cubic = BTreeMap<[u8; 3], Elem>;

fn cubic_mul(alg: &AbstractAlgebra, x: &Cubic, y: &Cubic) -> Cubic {
    let mut out: Cubic = BTreeMap::new();
    for (ex, a) in x {
        for (ey, b) in y {
            let e = [ex[0] + ey[0], ex[1] + ey[1], ex[2] + ey[2]];
            let p = alg.mul(a, b);
            let slot = out
                .entry(e)
                .or_insert_with(|| vec![Scalar::zero(); alg.dim()]);
            *slot = alg.add(slot, &p);
        }
    }
    out.retain(|_, v| v.iter().any(|c| !c.is_zero()));
    out
}

fn cubic_sub(alg: &AbstractAlgebra, x: &Cubic, y: &Cubic) -> Cubic {
    let mut out = x.clone();
    for (e, b) in y {
        let slot = out
            .entry(*e)
            .or_insert_with(|| vec![Scalar::zero(); alg.dim()]);
        *slot = alg.sub(slot, b);
    }
    out.retain(|_, v| v.iter().any(|c| !c.is_zero()));
    out
}

fn mono(_alg: &AbstractAlgebra, e: [u8; 3], x: Elem) -> Cubic {
    let mut c = Cubic::new();
    if x.iter().any(|v| !v.is_zero()) {
        c.insert(e, x);
    }
    c
}

fn sum(alg: &AbstractAlgebra, parts: Vec<Cubic>) -> Cubic {
    let mut out = Cubic::new();
    for p in parts {
        for (e, x) in p {
            let slot = out
                .entry(e)
                .or_insert_with(|| vec![Scalar::zero(); alg.dim()]);
            *slot = alg.add(slot, &x);
        }
    }
    out.retain(|_, v| v.iter().any(|c| !c.is_zero()));
    out
}

/// `T1 T2 T1 - T2 T1 T2` with `T_i = α G_i + β G_i^{-1} + γ`.
pub fn braid_defect_cubic(alg: &AbstractAlgebra) -> Cubic {
    let t = |g: Gen, gi: Gen| {
        sum(
            alg,
            vec![
                mono(alg, [1, 0, 0], alg.gen(g)),
                mono(alg, [0, 1, 0], alg.gen(gi)),
                mono(alg, [0, 0, 1], alg.basis(0)),
            ],
        )
    };
    let t1 = t(G1, G1Inv);
    let t2 = t(G2, G2Inv);
    let l = cubic_mul(alg, &cubic_mul(alg, &t1, &t2), &t1);
    let r = cubic_mul(alg, &cubic_mul(alg, &t2, &t1), &t2);
    cubic_sub(alg, &l, &r)
}

/// The reduced forms of the braid defect after cancelling the braid
/// consequences, and after applying the tangle relations. Returns the two
/// outcomes in that order.
pub fn reduced_defect_identities(alg: &AbstractAlgebra) -> (Outcome, Outcome) {
    let d = braid_defect_cubic(alg);
    let w = |g: &[Gen]| alg.word(g);
    let diff = |a: &[Gen], b: &[Gen]| alg.sub(&w(a), &w(b));
    let first = sum(
        alg,
        vec![
            mono(alg, [2, 1, 0], diff(&[G1, G2Inv, G1], &[G2, G1Inv, G2])),
            mono(
                alg,
                [1, 2, 0],
                diff(&[G1Inv, G2, G1Inv], &[G2Inv, G1, G2Inv]),
            ),
            mono(alg, [2, 0, 1], diff(&[G1, G1], &[G2, G2])),
            mono(alg, [0, 2, 1], diff(&[G1Inv, G1Inv], &[G2Inv, G2Inv])),
            mono(alg, [1, 0, 2], diff(&[G1], &[G2])),
            mono(alg, [0, 1, 2], diff(&[G1Inv], &[G2Inv])),
        ],
    );
    let mut o1 = Outcome::new("braid defect after cancellation");
    o1.record(d == first, || "expansion differs".into());

    let lam = &alg.lambda;
    let g_sq = diff(&[G1, G1], &[G2, G2]);
    let gi_sq = diff(&[G1Inv, G1Inv], &[G2Inv, G2Inv]);
    let tangle = {
        let pos = alg.add(&w(&[E2, G1]), &w(&[G1, E2]));
        let neg = alg.add(&w(&[E1, G2Inv]), &w(&[G2Inv, E1]));
        // e1 e2 + e2 e1 - e1 - e2
        let tail = alg.sub(
            &alg.add(&w(&[E1, E2]), &w(&[E2, E1])),
            &alg.add(&w(&[E1]), &w(&[E2])),
        );
        alg.add(&alg.sub(&pos, &neg), &alg.scale(&tail, lam))
    };
    let lam2 = lam * lam;
    // α²(γ - βλ) = α²γ - λ α²β ; β²(αλ + γ) = λ αβ² + β²γ ; αβ(α+β)λ² = λ²(α²β + αβ²)
    let second = sum(
        alg,
        vec![
            mono(alg, [2, 0, 1], g_sq.clone()),
            mono(alg, [2, 1, 0], alg.scale(&g_sq, &-lam.clone())),
            mono(alg, [1, 2, 0], alg.scale(&gi_sq, lam)),
            mono(alg, [0, 2, 1], gi_sq.clone()),
            mono(alg, [2, 1, 0], alg.scale(&tangle, &lam2)),
            mono(alg, [1, 2, 0], alg.scale(&tangle, &lam2)),
            mono(alg, [1, 0, 2], diff(&[G1], &[G2])),
            mono(alg, [0, 1, 2], diff(&[G1Inv], &[G2Inv])),
        ],
    );
    let mut o2 = Outcome::new("braid defect in tangle form");
    if alg.kind == AlgebraKind::Bwm3 {
        o2.record(d == second, || {
            let bad: Vec<String> = d
                .keys()
                .chain(second.keys())
                .filter(|e| d.get(*e) != second.get(*e))
                .map(|e| format!("α^{}β^{}γ^{}", e[0], e[1], e[2]))
                .collect();
            format!("coefficients differ at {}", bad.join(", "))
        });
    }
    (o1, o2)
}

/// Images of the basis words on the three-fold tensor space.
#[derive(Clone, Debug)]
pub struct PiImage {
    pub spec: SeriesSpec,
    pub labels: Vec<String>,
    pub images: Vec<QMatrix>,
}

pub fn build_pi(alg: &AbstractAlgebra, bundle: &RMatrixBundle) -> Result<(PiImage, Outcome)> {
    let n = bundle.n();
    if alg.kind == AlgebraKind::Bwm3 && bundle.spec.mu.as_ref() != alg.mu.as_ref() {
        return Err(Error::InvalidSeries(
            "algebra parameters do not match the series".into(),
        ));
    }
    let scale = hecke_rescaling(&bundle.spec).unwrap_or_else(Scalar::one);
    if alg.q != &bundle.spec.q * &scale {
        return Err(Error::InvalidSeries(
            "algebra q does not match the series".into(),
        ));
    }
    let emb = |m: &QMatrix, legs| leg_embed(m, legs, 3, n);
    let (rh, rhi) = (
        bundle.rhat.scale(&scale),
        bundle.rhat_inv.scale(&scale.inv()?),
    );
    let gens = GenImages::from_braid(
        emb(&rh, (1, 2))?,
        emb(&rh, (2, 3))?,
        emb(&rhi, (1, 2))?,
        emb(&rhi, (2, 3))?,
        &alg.lambda,
    )?;
    let images: Vec<QMatrix> = basis_words(alg.kind).iter().map(|w| gens.word(w)).collect();
    let mut out = Outcome::new(format!("π multiplicative on {}", bundle.spec.label()));
    let d = alg.dim();
    for i in 0..d {
        for j in 0..d {
            let lhs = images[i].mul(&images[j]);
            let mut rhs = QMatrix::square_zeros(vec![n, n, n]);
            for (k, c) in &alg.structure[i][j] {
                rhs = rhs.add(&images[*k].scale(c));
            }
            out.record(lhs == rhs, || {
                format!("π({}) π({})", alg.labels[i], alg.labels[j])
            });
        }
    }
    // in the Hecke quotient the tangles must vanish
    if alg.kind == AlgebraKind::Hecke3 {
        out.record(gens.of(E1).is_zero(), || {
            "e1 != 0 for a Hecke R-matrix".into()
        });
    }
    Ok((
        PiImage {
            spec: bundle.spec.clone(),
            labels: alg.labels.clone(),
            images,
        },
        out,
    ))
}

impl PiImage {
    pub fn rank(&self) -> usize {
        rank_of(
            self.images
                .iter()
                .map(|m| m.flatten())
                .collect::<Vec<_>>()
                .iter(),
        )
    }

    /// Kernel basis of the image map, one coordinate vector per relation.
    pub fn kernel(&self) -> Vec<Elem> {
        let mut ech = Echelon::new();
        let mut out = Vec::new();
        for (k, m) in self.images.iter().enumerate() {
            let tag: SparseVec = [(k, Scalar::one())].into_iter().collect();
            if let Some(rel) = ech.insert_tagged(m.flatten(), tag) {
                let mut v = vec![Scalar::zero(); self.images.len()];
                for (i, c) in rel {
                    v[i] = c;
                }
                out.push(v);
            }
        }
        out
    }
}

/// The unique linear relation among the images, normalized to coefficient 1
/// on the unit.
pub fn kernel_relation(pi: &PiImage) -> Result<Elem> {
    let ker = pi.kernel();
    if ker.len() != 1 {
        return Err(Error::KernelDeficit(ker.len()));
    }
    let v = &ker[0];
    let lead = v[0].clone();
    if lead.is_zero() {
        return Err(Error::Consistency {
            identity: "relation has a unit term".into(),
            witness: pi.spec.label(),
        });
    }
    let inv = lead.inv()?;
    Ok(v.iter().map(|c| c * &inv).collect())
}

/// One `label<TAB>coefficient` line per nonzero term, in basis order.
pub fn relation_text(labels: &[String], rel: &Elem) -> String {
    let mut out = String::new();
    for (l, c) in labels.iter().zip(rel) {
        if !c.is_zero() {
            out.push_str(&format!("{l}\t{c}\n"));
        }
    }
    out
}

/// A reference relation term: basis label and a coefficient expression in `q`,
/// or `None` where the coefficient cannot be read.
pub type RefTerm = (&'static str, Option<&'static str>);

/// Transcribed reference form of the Sp(4) relation, in its original term
/// order. Two coefficients there are not expressions in `q`.
pub const SP4_REFERENCE: [RefTerm; 15] = [
    ("1", Some("1")),
    ("G1", Some("-q^-1")),
    ("G2", Some("-q^-1")),
    ("G1G2", None),
    ("G2G1", Some("q^-2")),
    ("G1G2G1", Some("-q^-3")),
    ("E1", Some("-q^-6")),
    ("E1", Some("-q^-2")),
    ("E1E2", Some("-q^-4")),
    ("E2E1", Some("-q^-4")),
    ("G1E2", Some("q^-3")),
    ("E2G1", Some("q^-3")),
    ("E1G2^-1", None),
    ("G2^-1E1", Some("q^-5")),
    ("G1E2G1", Some("-q^-4")),
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TermStatus {
    Match,
    Differs { reference: Scalar },
    Unreadable,
}

#[derive(Clone, Debug)]
pub struct TermComparison {
    pub label: String,
    pub computed: Scalar,
    pub status: TermStatus,
}

/// Termwise comparison of a computed relation with a literal reference.
/// Reference terms sharing a label are summed; labels absent from the
/// reference read as coefficient 0. Terms touching an unreadable
/// coefficient are flagged, never guessed.
pub fn compare_relation(
    labels: &[String],
    computed: &Elem,
    reference: &[RefTerm],
    q_exp: i64,
) -> Result<Vec<TermComparison>> {
    let mut out = Vec::new();
    for (k, label) in labels.iter().enumerate() {
        let mut total = Scalar::zero();
        let mut unreadable = false;
        for (l, c) in reference {
            if *l == label.as_str() {
                match c {
                    Some(src) => total += &Scalar::parse(src, q_exp)?,
                    None => unreadable = true,
                }
            }
        }
        let status = if unreadable {
            TermStatus::Unreadable
        } else if total == computed[k] {
            TermStatus::Match
        } else {
            TermStatus::Differs { reference: total }
        };
        out.push(TermComparison {
            label: label.clone(),
            computed: computed[k].clone(),
            status,
        });
    }
    Ok(out)
}

/// Drops tangle terms from a reference relation.
pub fn hecke_part(reference: &[RefTerm]) -> Vec<RefTerm> {
    reference
        .iter()
        .filter(|(l, _)| !l.contains('E'))
        .copied()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rmatrix::build_rmatrix;
    use crate::series::{build_series, Series};

    #[test]
    fn bwm_certifies() {
        let spec = build_series(Series::O, 3).unwrap();
        let alg = algebra_for(&spec).unwrap();
        assert_eq!(alg.dim(), 15);
        assert!(
            alg.certify_relations().passed(),
            "{}",
            alg.certify_relations()
        );
        let e1 = alg.basis(6);
        assert_eq!(alg.word(&[E1, E2, E1]), e1);
    }

    #[test]
    fn hecke_certifies() {
        let spec = build_series(Series::GL, 2).unwrap();
        let alg = algebra_for(&spec).unwrap();
        assert_eq!(alg.dim(), 6);
        assert!(alg.certify_associativity().passed());
        assert!(alg.certify_relations().passed());
    }

    #[test]
    fn gl2_image_has_one_relation() {
        let b = build_rmatrix(&build_series(Series::GL, 2).unwrap()).unwrap();
        let alg = algebra_for(&b.spec).unwrap();
        let (pi, ok) = build_pi(&alg, &b).unwrap();
        assert!(ok.passed(), "{ok}");
        assert_eq!(pi.rank(), 5);
        let rel = kernel_relation(&pi).unwrap();
        assert!(rel[0].is_one());
    }
}
