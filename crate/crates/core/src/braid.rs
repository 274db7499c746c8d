//! Solutions of the braid relation in the span of `R̂`, `R̂⁻¹` and `I`, and the
//! scale constraint on `z R̂`.

use std::collections::BTreeMap;
use std::fmt;

use crate::bichar::{make_rform_unchecked, PairForm};
use crate::error::{Error, Result};
use crate::ideal::{det_q, frt_relations, metric_relations};
use crate::linalg::Echelon;
use crate::matrix::{leg_embed, QMatrix, SparseVec};
use crate::outcome::Outcome;
use crate::rmatrix::{poly_in, RMatrixBundle};
use crate::scalar::Scalar;
use crate::series::Series;
use crate::table::{base_table, split_left, split_right};
use crate::words::{GenWord, WordCombo};

/// Exponent vector of a cubic monomial in the ansatz coefficients.
pub type Exps = Vec<u8>;

/// Cubic monomials in `k` variables, lexicographically descending.
pub fn cubic_monomials(k: usize) -> Vec<Exps> {
    fn rec(k: usize, left: u8, cur: &mut Exps, out: &mut Vec<Exps>) {
        if cur.len() == k - 1 {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for a in (0..=left).rev() {
            cur.push(a);
            rec(k, left - a, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, 3, &mut Vec::new(), &mut out);
    out
}

/// Coefficients of `T₁₂T₂₃T₁₂ − T₂₃T₁₂T₂₃` with `T = Σ x_k ops[k]`, by monomial.
pub fn cubic_expansion(ops: &[QMatrix], n: usize) -> Result<BTreeMap<Exps, QMatrix>> {
    let k = ops.len();
    let a: Vec<QMatrix> = ops
        .iter()
        .map(|m| leg_embed(m, (1, 2), 3, n))
        .collect::<Result<_>>()?;
    let b: Vec<QMatrix> = ops
        .iter()
        .map(|m| leg_embed(m, (2, 3), 3, n))
        .collect::<Result<_>>()?;
    let mut out: BTreeMap<Exps, QMatrix> = cubic_monomials(k)
        .into_iter()
        .map(|e| (e, QMatrix::square_zeros(vec![n, n, n])))
        .collect();
    for i in 0..k {
        let (ai, bi) = (&a[i], &b[i]);
        for j in 0..k {
            let (aij, bij) = (ai.mul(&b[j]), bi.mul(&a[j]));
            for l in 0..k {
                let mut e = vec![0u8; k];
                e[i] += 1;
                e[j] += 1;
                e[l] += 1;
                let d = aij.mul(&a[l]).sub(&bij.mul(&b[l]));
                let slot = out.get_mut(&e).expect("cubic monomial");
                *slot = slot.add(&d);
            }
        }
    }
    Ok(out)
}

/// `D(α,β,γ)` for `T = αR̂ + βR̂⁻¹ + γI`: keys `[a,b,c]` for `α^a β^b γ^c`.
pub fn braid_cubic_coefficients(bundle: &RMatrixBundle) -> Result<BTreeMap<Exps, QMatrix>> {
    let id = QMatrix::identity(vec![bundle.n(), bundle.n()]);
    cubic_expansion(
        &[bundle.rhat.clone(), bundle.rhat_inv.clone(), id],
        bundle.n(),
    )
}

/// `Σ_m value(m) M_m` at a point.
pub fn evaluate_cubic(coeffs: &BTreeMap<Exps, QMatrix>, point: &[Scalar]) -> QMatrix {
    let mut acc: Option<QMatrix> = None;
    for (e, m) in coeffs {
        let mut c = Scalar::one();
        for (x, &p) in point.iter().zip(e) {
            for _ in 0..p {
                c = &c * x;
            }
        }
        let term = m.scale(&c);
        acc = Some(match acc {
            Some(a) => a.add(&term),
            None => term,
        });
    }
    acc.expect("nonempty expansion")
}

fn cubic_vec(pairs: &[(Exps, Scalar)], monos: &[Exps]) -> SparseVec {
    pairs
        .iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(e, c)| {
            (
                monos.iter().position(|m| m == e).expect("monomial"),
                c.clone(),
            )
        })
        .collect()
}

/// Whether every target lies in the span of the entry polynomials of `coeffs`.
fn span_contains(
    coeffs: &BTreeMap<Exps, QMatrix>,
    targets: &[(String, SparseVec)],
    stop_early: bool,
    out: &mut Outcome,
) -> Echelon {
    let monos: Vec<Exps> = coeffs.keys().cloned().collect();
    let mut entries: BTreeMap<(usize, usize), SparseVec> = BTreeMap::new();
    for (k, m) in coeffs.values().enumerate() {
        for (r, c, v) in m.entries() {
            entries.entry((r, c)).or_default().insert(k, v.clone());
        }
    }
    let mut ech = Echelon::new();
    let mut pending: Vec<&(String, SparseVec)> = targets.iter().collect();
    for (count, v) in entries.into_values().enumerate() {
        ech.insert(v);
        if ech.rank() == monos.len() {
            break;
        }
        if stop_early && count % 32 == 31 {
            pending.retain(|(_, t)| !ech.contains(t));
            if pending.is_empty() {
                break;
            }
        }
    }
    for (name, t) in targets {
        out.record(ech.contains(t), || {
            format!("{name} not in the entry span (rank {})", ech.rank())
        });
    }
    ech
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    /// `R̂`, `R̂⁻¹`, `I` independent.
    ThreeTerm,
    /// `R̂⁻¹ = uR̂ + vI`.
    Hecke,
}

#[derive(Clone, Debug)]
pub struct BraidClassification {
    pub spec: String,
    pub route: Route,
    pub axes: Outcome,
    /// The reduced target cubics (three-term route: αβ(α+β), α²(γ−βλ), β²(γ+αλ)).
    pub target_span: Outcome,
    /// `(1, −1, −λ)` is not a solution (three-term route only).
    pub extra_line: Outcome,
    /// Exact: the only solutions over ℚ(t) are the axis rays.
    pub rational_points: Outcome,
    /// Irreducible quadratic `Q(u)` cutting out further rays `u(R̂ − R̂⁻¹) + I`
    /// over the algebraic closure, constant term first.
    pub closure_quadratic: Option<Vec<Scalar>>,
    /// Those rays fail the pairing with the defining relations.
    pub closure_rays_excluded: Outcome,
    pub solutions: Vec<String>,
}

impl BraidClassification {
    /// The exact certificate: axes, rational points, extra rays excluded.
    pub fn passed(&self) -> bool {
        self.axes.passed()
            && self.extra_line.passed()
            && self.rational_points.passed()
            && self.closure_rays_excluded.passed()
    }

    pub fn outcomes(&self) -> [&Outcome; 5] {
        [
            &self.axes,
            &self.target_span,
            &self.extra_line,
            &self.rational_points,
            &self.closure_rays_excluded,
        ]
    }
}

impl fmt::Display for BraidClassification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} ({:?}): solutions {}",
            self.spec,
            self.route,
            self.solutions.join(", ")
        )?;
        for o in self.outcomes() {
            writeln!(f, "  {o}")?;
        }
        if let Some(q) = &self.closure_quadratic {
            let terms: Vec<String> = q
                .iter()
                .enumerate()
                .map(|(k, c)| format!("({c})u^{k}"))
                .collect();
            writeln!(f, "  closure rays: {} = 0", terms.join(" + "))?;
        }
        Ok(())
    }
}

/// Univariate polynomial over ℚ(t), constant term first.
pub type UPoly = Vec<Scalar>;

fn utrim(mut p: UPoly) -> UPoly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn umul(a: &[Scalar], b: &[Scalar]) -> UPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Scalar::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += &(x * y);
        }
    }
    utrim(out)
}

/// Quotient and remainder; `b` nonzero.
fn udivrem(a: &[Scalar], b: &[Scalar]) -> Result<(UPoly, UPoly)> {
    let b = utrim(b.to_vec());
    let mut r = utrim(a.to_vec());
    let lead = b
        .last()
        .ok_or_else(|| Error::Shape("division by zero polynomial".into()))?
        .inv()?;
    let mut q = vec![Scalar::zero(); r.len().saturating_sub(b.len()) + 1];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = r.last().expect("nonempty") * &lead;
        for (k, y) in b.iter().enumerate() {
            r[shift + k] -= &(&c * y);
        }
        q[shift] = c;
        r = utrim(r);
    }
    Ok((utrim(q), r))
}

/// Monic gcd.
fn ugcd(a: &[Scalar], b: &[Scalar]) -> Result<UPoly> {
    let (mut x, mut y) = (utrim(a.to_vec()), utrim(b.to_vec()));
    while !y.is_empty() {
        let (_, r) = udivrem(&x, &y)?;
        x = y;
        y = r;
    }
    if let Some(l) = x.last() {
        let inv = l.inv()?;
        x = x.iter().map(|c| c * &inv).collect();
    }
    Ok(x)
}

/// A cubic (coordinates over `monos`) restricted to a plane given by linear
/// forms `(coefficient of u, coefficient of v)` per variable, with `v = 1`.
fn restrict(poly: &SparseVec, monos: &[Exps], plane: &[(Scalar, Scalar)]) -> UPoly {
    let mut out: UPoly = Vec::new();
    for (k, c) in poly {
        let mut term = vec![c.clone()];
        for (var, &e) in monos[*k].iter().enumerate() {
            let lin = [plane[var].1.clone(), plane[var].0.clone()];
            for _ in 0..e {
                term = umul(&term, &lin);
            }
        }
        let len = out.len().max(term.len());
        out.resize(len, Scalar::zero());
        for (i, x) in term.into_iter().enumerate() {
            out[i] += &x;
        }
    }
    utrim(out)
}

/// Common zeros of binary cubics: `(multiplicity of v, monic gcd in u)`.
fn common_factor(forms: &[UPoly]) -> Result<Option<(usize, UPoly)>> {
    let nonzero: Vec<&UPoly> = forms.iter().filter(|f| !f.is_empty()).collect();
    if nonzero.is_empty() {
        return Ok(None);
    }
    let k = nonzero
        .iter()
        .map(|f| 3 - (f.len() - 1))
        .min()
        .expect("nonempty");
    let mut g: UPoly = Vec::new();
    for f in nonzero {
        g = ugcd(&g, f)?;
    }
    Ok(Some((k, g)))
}

/// Strips factors of `u`; returns how many.
fn strip_u(mut g: UPoly) -> (usize, UPoly) {
    let mut k = 0;
    while g.len() > 1 && g[0].is_zero() {
        g.remove(0);
        k += 1;
    }
    (k, g)
}

/// Points `t = a/b` used to certify that a discriminant is not a square.
const SPECIALIZATIONS: [(i64, i64); 8] = [
    (2, 1),
    (3, 1),
    (5, 1),
    (7, 1),
    (3, 2),
    (5, 3),
    (11, 1),
    (13, 1),
];

/// Whether `d` is certified not to be a square in ℚ(t): some specialization is
/// a rational non-square.
pub fn certified_nonsquare(d: &Scalar) -> bool {
    SPECIALIZATIONS
        .iter()
        .any(|&t0| d.specialize(t0).and_then(|x| x.is_rational_square()) == Some(false))
}

/// Values `r(rel ⊗ u^n_m)` and `r(u^n_m ⊗ rel)` of the homogeneous parts of the
/// relations, for `B00 = m`, alongside the constant terms.
fn relation_pairings(m: &QMatrix, rels: &[(WordCombo, Scalar)], n: usize) -> Vec<(Scalar, Scalar)> {
    let base = base_table(m, n);
    let left = split_left(&base, &base, n);
    let right = split_right(&base, &base, n);
    let index = |w: &GenWord| {
        w.letters()
            .iter()
            .fold(0, |a, l| a * n * n + l.i as usize * n + l.j as usize)
    };
    let mut out = Vec::new();
    for (top, c) in rels {
        for g in 0..n * n {
            let delta = if g / n == g % n {
                c.clone()
            } else {
                Scalar::zero()
            };
            let mut l = Scalar::zero();
            let mut r = Scalar::zero();
            for (w, x) in top.terms() {
                l += &(x * &left.get(index(w), g));
                r += &(x * &right.get(g, index(w)));
            }
            out.push((l, delta.clone()));
            out.push((r, delta));
        }
    }
    out
}

/// Rays `T̂ = ρ(R̂ − R̂⁻¹) + I` with `Q(ρ) = 0`, `Q` irreducible of degree 2, and
/// any rescaling `s T̂`. Pairings are quadratic in `(ρ, 1)`, so reducing modulo
/// `Q` leaves `s²(P ρ + Q₀)` per pairing, to be matched against the constants.
fn closure_rays_excluded(bundle: &RMatrixBundle, quad: &[Scalar]) -> Result<Option<String>> {
    let n = bundle.n();
    let flip = QMatrix::flip(n);
    let diff = flip.mul(&bundle.rhat.sub(&bundle.rhat_inv));
    let mut rels: Vec<(WordCombo, Scalar)> = frt_relations(bundle)
        .into_iter()
        .map(|r| (r, Scalar::zero()))
        .collect();
    for r in metric_relations(bundle) {
        let (_, top, c) = homogeneous_split(&r)?;
        rels.push((top, c));
    }
    let va = relation_pairings(&diff, &rels, n);
    let vc = relation_pairings(&flip, &rels, n);
    let vb = relation_pairings(&diff.add(&flip), &rels, n);
    // ρ² = −(q1 ρ + q0)/q2
    let inv2 = quad[2].inv()?;
    let (r1, r0) = (-(&quad[1] * &inv2), -(&quad[0] * &inv2));
    let mut ratio: Option<(Scalar, Scalar)> = None;
    for (k, ((a, konst), ((b_all, _), (c, _)))) in va.iter().zip(vb.iter().zip(&vc)).enumerate() {
        let b = &(b_all - a) - c;
        let p = &b + &(a * &r1);
        let p0 = c + &(a * &r0);
        let what = || format!("pairing {k}");
        if konst.is_zero() {
            if !p.is_zero() || !p0.is_zero() {
                return Ok(Some(format!(
                    "{} nonzero against a homogeneous relation",
                    what()
                )));
            }
            continue;
        }
        if p.is_zero() && p0.is_zero() {
            return Ok(Some(format!(
                "{} vanishes against a nonzero constant",
                what()
            )));
        }
        let pair = (p.checked_div(konst)?, p0.checked_div(konst)?);
        match &ratio {
            None => ratio = Some(pair),
            Some(r) if *r == pair => {}
            Some(_) => return Ok(Some(format!("{} needs a different scale", what()))),
        }
    }
    Ok(None)
}

/// On `T̂ = aI + bê`: `D = b(a² + x ab + b²)(ê₁₂ − ê₂₃)` with `ê² = x ê`.
pub fn identity_plane_defect(bundle: &RMatrixBundle) -> Result<Outcome> {
    let n = bundle.n();
    let mut out = Outcome::new(format!(
        "braid defect on the (I, ê) plane on {}",
        bundle.spec.label()
    ));
    let (Some(e), Some(x)) = (&bundle.ehat, &bundle.ehat_x) else {
        return Ok(out);
    };
    let coeffs = cubic_expansion(&[QMatrix::identity(vec![n, n]), e.clone()], n)?;
    let diff = leg_embed(e, (1, 2), 3, n)?.sub(&leg_embed(e, (2, 3), 3, n)?);
    let expected = [
        (vec![3, 0], Scalar::zero()),
        (vec![2, 1], Scalar::one()),
        (vec![1, 2], x.clone()),
        (vec![0, 3], Scalar::one()),
    ];
    for (e, c) in expected {
        out.record(coeffs[&e] == diff.scale(&c), || {
            format!("coefficient {e:?}")
        });
    }
    Ok(out)
}

/// Coefficients `(u, v)` with `R̂⁻¹ = uR̂ + vI`, if they exist.
pub fn hecke_coefficients(bundle: &RMatrixBundle) -> Option<(Scalar, Scalar)> {
    let n = bundle.n();
    let id = QMatrix::identity(vec![n, n]);
    let mut ech = Echelon::new();
    ech.insert_tagged(bundle.rhat.flatten(), SparseVec::from([(0, Scalar::one())]));
    ech.insert_tagged(id.flatten(), SparseVec::from([(1, Scalar::one())]));
    let (r, t) = ech.reduce(bundle.rhat_inv.flatten(), SparseVec::new());
    if !r.is_empty() {
        return None;
    }
    let get = |k| t.get(&k).map(|x: &Scalar| -x.clone()).unwrap_or_default();
    Some((get(0), get(1)))
}

/// Certifies the solution rays of the braid relation among `αR̂ + βR̂⁻¹ + γI`.
pub fn classify_braid_solutions(bundle: &RMatrixBundle) -> Result<BraidClassification> {
    let spec = bundle.spec.label();
    let lambda = bundle.spec.lambda.clone();
    let n = bundle.n();
    let mut axes = Outcome::new(format!("axis rays solve the braid relation on {spec}"));
    let mut target_span = Outcome::new(format!("target cubics in the entry span on {spec}"));
    let mut extra_line = Outcome::new(format!("line (1, -1, -λ) excluded on {spec}"));
    let mut rational_points = Outcome::new(format!("solutions over Q(t) are the axes on {spec}"));
    let mut closure_rays_excl =
        Outcome::new(format!("closure rays fail the relation pairing on {spec}"));
    let solutions = vec!["zR̂".to_string(), "zR̂^-1".to_string(), "zI".to_string()];
    if let Some((u, v)) = hecke_coefficients(bundle) {
        // T = aR̂ + cI with a = α + βu, c = γ + βv; D = ac(pa + c)(R̂₁₂ − R̂₂₃)
        let p = -v.checked_div(&u)?;
        let id = QMatrix::identity(vec![n, n]);
        let coeffs = cubic_expansion(&[bundle.rhat.clone(), id], n)?;
        for e in [vec![3, 0], vec![0, 3]] {
            axes.record(coeffs[&e].is_zero(), || {
                format!("coefficient {e:?} nonzero")
            });
        }
        let monos: Vec<Exps> = coeffs.keys().cloned().collect();
        let target = cubic_vec(&[(vec![2, 1], p), (vec![1, 2], Scalar::one())], &monos);
        span_contains(
            &coeffs,
            &[("ac(pa + c)".into(), target)],
            true,
            &mut target_span,
        );
        // ac(pa + c) splits into the three rays over Q(t) already
        rational_points.record(target_span.passed(), || "Hecke target missing".into());
        return Ok(BraidClassification {
            spec,
            route: Route::Hecke,
            axes,
            target_span,
            extra_line,
            rational_points,
            closure_quadratic: None,
            closure_rays_excluded: closure_rays_excl,
            solutions,
        });
    }
    let coeffs = braid_cubic_coefficients(bundle)?;
    for e in [vec![3, 0, 0], vec![0, 3, 0], vec![0, 0, 3]] {
        axes.record(coeffs[&e].is_zero(), || {
            format!("coefficient {e:?} nonzero")
        });
    }
    let monos: Vec<Exps> = coeffs.keys().cloned().collect();
    let one = Scalar::one();
    let targets = vec![
        (
            "αβ(α+β)".to_string(),
            cubic_vec(
                &[(vec![2, 1, 0], one.clone()), (vec![1, 2, 0], one.clone())],
                &monos,
            ),
        ),
        (
            "α²(γ−βλ)".to_string(),
            cubic_vec(
                &[
                    (vec![2, 0, 1], one.clone()),
                    (vec![2, 1, 0], -lambda.clone()),
                ],
                &monos,
            ),
        ),
        (
            "β²(γ+αλ)".to_string(),
            cubic_vec(
                &[
                    (vec![0, 2, 1], one.clone()),
                    (vec![1, 2, 0], lambda.clone()),
                ],
                &monos,
            ),
        ),
    ];
    let ech = span_contains(&coeffs, &targets, false, &mut target_span);
    // the target cubics also vanish on α = −β, γ = −αλ
    let d = evaluate_cubic(&coeffs, &[Scalar::one(), -Scalar::one(), -lambda]);
    extra_line.record(!d.is_zero(), || "D(1, -1, -λ) = 0".into());

    // αβ(α+β) in the span puts every solution on one of three planes
    rational_points.record(ech.contains(&targets[0].1), || {
        "αβ(α+β) not in the entry span".into()
    });
    let basis: Vec<SparseVec> = ech.rows().cloned().collect();
    let (z, o) = (Scalar::zero(), Scalar::one());
    let planes = [
        (
            "α = 0",
            [
                (z.clone(), z.clone()),
                (o.clone(), z.clone()),
                (z.clone(), o.clone()),
            ],
        ),
        (
            "β = 0",
            [
                (o.clone(), z.clone()),
                (z.clone(), z.clone()),
                (z.clone(), o.clone()),
            ],
        ),
        (
            "α = −β",
            [
                (o.clone(), z.clone()),
                (-o.clone(), z.clone()),
                (z.clone(), o.clone()),
            ],
        ),
    ];
    let mut closure_quadratic = None;
    for (name, plane) in &planes {
        let forms: Vec<UPoly> = basis.iter().map(|b| restrict(b, &monos, plane)).collect();
        let Some((kv, g)) = common_factor(&forms)? else {
            rational_points.fail(format!("D vanishes on the plane {name}"));
            continue;
        };
        let (ku, rest) = strip_u(g);
        let on_axes = *name != "α = −β";
        // the point u = 0 is an axis on every plane; v = 0 is one only off α = −β
        rational_points.record(on_axes || kv == 0, || {
            format!("(1, -1, 0) solves on {name}")
        });
        rational_points.record(ku <= 1, || format!("repeated root at u = 0 on {name}"));
        match rest.len() {
            1 => rational_points.record(true, String::new),
            3 if !on_axes => {
                let disc = &(&rest[1] * &rest[1]) - &(&Scalar::int(4) * &(&rest[0] * &rest[2]));
                rational_points.record(certified_nonsquare(&disc), || {
                    format!("discriminant on {name} not certified non-square")
                });
                closure_quadratic = Some(rest);
            }
            _ => rational_points.fail(format!(
                "further rational factor of degree {} on {name}",
                rest.len() - 1
            )),
        }
    }
    if let Some(quad) = &closure_quadratic {
        if let Some(w) = closure_rays_excluded(bundle, quad)? {
            closure_rays_excl.record(true, String::new);
            closure_rays_excl.name = format!("{} ({w})", closure_rays_excl.name);
        } else {
            closure_rays_excl.fail("closure rays pass every relation pairing");
        }
    }
    Ok(BraidClassification {
        spec,
        route: Route::ThreeTerm,
        axes,
        target_span,
        extra_line,
        rational_points,
        closure_quadratic,
        closure_rays_excluded: closure_rays_excl,
        solutions,
    })
}

/// Sp(2) stands in for SL(2) at `q²`: `qR̂` has minimal polynomial
/// `(x − q²)(x + q⁻²)`.
pub fn sp2_delegation(bundle: &RMatrixBundle) -> Result<Outcome> {
    let q = &bundle.spec.q;
    let q2 = q * q;
    let mut out = Outcome::new(format!("qR̂ is Hecke at q² on {}", bundle.spec.label()));
    let m = bundle.rhat.scale(q);
    out.record(poly_in(&m, &[q2.clone(), -q2.inv()?]).is_zero(), || {
        "(qR̂ − q²)(qR̂ + q⁻²) ≠ 0".into()
    });
    let n = bundle.n();
    out.record(
        !m.sub(&QMatrix::identity(vec![n, n]).scale(&q2)).is_zero(),
        || "qR̂ scalar".into(),
    );
    Ok(out)
}

/// The bundle with `t ↦ t^-1` applied throughout, i.e. `q ↦ q⁻¹`.
pub fn inverted_bundle(bundle: &RMatrixBundle) -> RMatrixBundle {
    let sub = |m: &QMatrix| m.map(|x| x.substitute_t_pow(-1));
    let mut b = bundle.clone();
    b.rhat = sub(&bundle.rhat);
    b.rhat_inv = sub(&bundle.rhat_inv);
    b.r = sub(&bundle.r);
    b.r_inv = sub(&bundle.r_inv);
    b.spec.q = bundle.spec.q.substitute_t_pow(-1);
    b.spec.lambda = bundle.spec.lambda.substitute_t_pow(-1);
    b
}

/// Admissible scales for `r_z(u^i_j ⊗ u^n_m) = z R^{in}_{jm}`.
#[derive(Clone, Debug, PartialEq)]
pub enum ZConstraint {
    /// Any nonzero `z`.
    Free,
    /// `z^power = value`.
    Power { power: usize, value: Scalar },
}

impl fmt::Display for ZConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZConstraint::Free => write!(f, "z != 0"),
            ZConstraint::Power { power, value } => write!(f, "z^{power} = {value}"),
        }
    }
}

fn homogeneous_split(rel: &WordCombo) -> Result<(usize, WordCombo, Scalar)> {
    let mut top = WordCombo::zero();
    let mut constant = Scalar::zero();
    let k = rel.degree();
    for (w, c) in rel.terms() {
        if w.len() == k {
            top.add_term(w.clone(), c);
        } else if w.is_empty() {
            constant = c.clone();
        } else {
            return Err(Error::Consistency {
                identity: "relation is homogeneous up to a constant".into(),
                witness: format!("{rel}"),
            });
        }
    }
    Ok((k, top, constant))
}

/// Pairs the extra relations of the series against `r_1` in both slots.
/// Since `r_z` scales by `z^{|a||b|}`, each pairing forces `z^k A + c δ = 0`.
pub fn z_constraint(bundle: &RMatrixBundle) -> Result<ZConstraint> {
    let spec = &bundle.spec;
    let rels = match spec.series {
        Series::GL => return Ok(ZConstraint::Free),
        Series::SL => vec![det_q(spec).sub(&WordCombo::one())],
        Series::O | Series::Sp => metric_relations(bundle),
    };
    let r1 = make_rform_unchecked(bundle, &Scalar::one())?;
    let n = spec.n;
    let mut found: Option<(usize, Scalar)> = None;
    for rel in &rels {
        let (k, top, c) = homogeneous_split(rel)?;
        for i in 0..n {
            for j in 0..n {
                let g = WordCombo::word(GenWord::u(i, j));
                let delta = if i == j { c.clone() } else { Scalar::zero() };
                for a in [r1.eval_combo(&top, &g), r1.eval_combo(&g, &top)] {
                    if a.is_zero() {
                        if !delta.is_zero() {
                            return Err(Error::Consistency {
                                identity: "scale constraint solvable".into(),
                                witness: format!("{rel} against u^{i}_{j}"),
                            });
                        }
                        continue;
                    }
                    let kappa = -delta.checked_div(&a)?;
                    match &found {
                        None => found = Some((k, kappa)),
                        Some((k0, v0)) if *k0 == k && *v0 == kappa => {}
                        Some((k0, v0)) => {
                            return Err(Error::Consistency {
                                identity: "one scale constraint".into(),
                                witness: format!("z^{k0} = {v0} against z^{k} = {kappa}"),
                            })
                        }
                    }
                }
            }
        }
    }
    let (power, value) = found.ok_or_else(|| Error::Consistency {
        identity: "extra relations constrain z".into(),
        witness: spec.label(),
    })?;
    Ok(ZConstraint::Power { power, value })
}

/// `T̂ = zI` means `R = zP`. The induced values `r(x y ⊗ u^n_m)` fail on the
/// FRT relations; these are homogeneous of degree 2, so `z = 1` decides every `z`.
/// (The form has no convolution inverse either: the partial transpose of `P`
/// is singular.)
pub fn identity_ray_excluded(bundle: &RMatrixBundle) -> Result<Outcome> {
    let n = bundle.n();
    let base = base_table(&QMatrix::flip(n), n);
    let two = split_left(&base, &base, n);
    let mut out = Outcome::new(format!("zI ray incompatible on {}", bundle.spec.label()));
    let mut witness = None;
    'rels: for rel in frt_relations(bundle) {
        for col in 0..n * n {
            let mut acc = Scalar::zero();
            for (w, c) in rel.terms() {
                let row = w
                    .letters()
                    .iter()
                    .fold(0, |a, l| a * n * n + l.i as usize * n + l.j as usize);
                acc += &(c * &two.get(row, col));
            }
            if !acc.is_zero() {
                witness = Some(format!("{rel} against u^{}_{}", col / n, col % n));
                break 'rels;
            }
        }
    }
    out.record(witness.is_some(), || {
        "flip values respect the FRT relations".into()
    });
    if let Some(w) = witness {
        out.name = format!("{} ({w})", out.name);
    }
    Ok(out)
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
    fn ten_cubic_monomials() {
        assert_eq!(cubic_monomials(3).len(), 10);
        assert_eq!(
            cubic_monomials(2),
            vec![vec![3, 0], vec![2, 1], vec![1, 2], vec![0, 3]]
        );
    }

    #[test]
    fn generic_point_violates() {
        let b = bundle(Series::O, 3);
        let c = braid_cubic_coefficients(&b).unwrap();
        assert!(!evaluate_cubic(&c, &[Scalar::one(), Scalar::one(), Scalar::one()]).is_zero());
    }

    #[test]
    fn gl2_uses_hecke_route() {
        let b = bundle(Series::GL, 2);
        let c = classify_braid_solutions(&b).unwrap();
        assert_eq!(c.route, Route::Hecke);
        assert!(c.passed(), "{c}");
    }

    #[test]
    fn sl2_scale() {
        let b = bundle(Series::SL, 2);
        let q = b.spec.q.clone();
        assert_eq!(
            z_constraint(&b).unwrap(),
            ZConstraint::Power {
                power: 2,
                value: q.inv().unwrap()
            }
        );
    }

    #[test]
    fn rform_satisfies_pairings() {
        let b = bundle(Series::O, 3);
        let mut rels: Vec<(WordCombo, Scalar)> = frt_relations(&b)
            .into_iter()
            .map(|r| (r, Scalar::zero()))
            .collect();
        for r in metric_relations(&b) {
            let (_, top, c) = homogeneous_split(&r).unwrap();
            rels.push((top, c));
        }
        for (v, k) in relation_pairings(&b.r, &rels, 3) {
            assert!((&v + &k).is_zero());
        }
    }

    #[test]
    fn orthogonal_certificate() {
        let b = bundle(Series::O, 3);
        let c = classify_braid_solutions(&b).unwrap();
        assert_eq!(c.route, Route::ThreeTerm);
        assert!(c.passed(), "{c}");
        assert!(!c.target_span.passed());
        assert_eq!(c.closure_quadratic.as_ref().map(|q| q.len()), Some(3));
        assert!(identity_plane_defect(&b).unwrap().passed());
    }

    #[test]
    fn gcd_of_products() {
        let q = |v: &[i64]| v.iter().map(|&x| Scalar::int(x)).collect::<UPoly>();
        // (u + 1)(u + 2) and (u + 1)(u - 3)
        let g = ugcd(&q(&[2, 3, 1]), &q(&[-3, -2, 1])).unwrap();
        assert_eq!(g, q(&[1, 1]));
        assert!(certified_nonsquare(&Scalar::t_pow(1)));
        assert!(!certified_nonsquare(&Scalar::t_pow(2)));
    }

    #[test]
    fn sp2_is_hecke_at_q_squared() {
        assert!(sp2_delegation(&bundle(Series::Sp, 2)).unwrap().passed());
        assert!(!sp2_delegation(&bundle(Series::O, 3))
            .map(|o| o.passed())
            .unwrap_or(false));
    }
}
