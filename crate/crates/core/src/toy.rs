//! The group algebra of the integers with `r(g^n ⊗ g^m) = λ^{nm}`.
//!
//! Every basis element is group-like, so `Δ(g^n) = g^n ⊗ g^n`, `S(g^n) = g^{-n}`
//! and each convolution collapses to a product of scalars. The functionals
//! below are still evaluated from their definitions rather than from closed
//! forms.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::outcome::Outcome;
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct ToyForm {
    pub lambda: Scalar,
}

pub fn toy_rform(lambda: Scalar) -> Result<ToyForm> {
    if lambda.is_zero() {
        return Err(Error::Inadmissible("lambda must be nonzero".into()));
    }
    Ok(ToyForm { lambda })
}

fn antipode(n: i64) -> i64 {
    -n
}

impl ToyForm {
    pub fn r(&self, n: i64, m: i64) -> Scalar {
        self.lambda.pow(n * m).expect("lambda is nonzero")
    }

    /// Convolution inverse: `rbar(a ⊗ b) = r(S a ⊗ b)`.
    pub fn rbar(&self, n: i64, m: i64) -> Scalar {
        self.r(antipode(n), m)
    }

    /// `s = rbar_21`.
    pub fn s(&self, n: i64, m: i64) -> Scalar {
        self.rbar(m, n)
    }

    /// `sbar = r_21`.
    fn sbar(&self, n: i64, m: i64) -> Scalar {
        self.r(m, n)
    }

    pub fn f_r(&self, n: i64) -> Scalar {
        self.r(n, antipode(n))
    }

    pub fn fbar_r(&self, n: i64) -> Scalar {
        self.rbar(antipode(n), n)
    }

    pub fn f_s(&self, n: i64) -> Scalar {
        self.s(n, antipode(n))
    }

    pub fn fbar_s(&self, n: i64) -> Scalar {
        self.sbar(antipode(n), n)
    }

    /// `F_r = f_r ∗ f_s`.
    pub fn big_f(&self, n: i64) -> Scalar {
        &self.f_r(n) * &self.f_s(n)
    }
}

#[derive(Clone, Debug)]
pub struct ToyReport {
    pub lambda: Scalar,
    pub bound: i64,
    /// `e` with `f_r(g^n) = λ^{e n²}` on the whole range, if one exponent fits.
    pub f_r_sign: Option<i64>,
    /// Signs `σ` with `f_r(g^{n+m}) = f_r(g^n) f_r(g^m) λ^{2σnm}` for every tested pair.
    pub sigma: BTreeSet<i64>,
    pub character: bool,
    pub cotriangular: bool,
    pub checks: Outcome,
}

impl ToyReport {
    pub fn sigma_is_global(&self) -> bool {
        !self.sigma.is_empty()
    }

    /// Character exactly when cotriangular, and both exactly when `λ² = 1`.
    pub fn character_iff_cotriangular(&self) -> bool {
        let lambda_sq_one = (&self.lambda * &self.lambda).is_one();
        self.character == self.cotriangular && self.character == lambda_sq_one
    }
}

impl fmt::Display for ToyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = match self.f_r_sign {
            Some(1) => "f_r(n) = lambda^(n^2)",
            Some(-1) => "f_r(n) = lambda^(-n^2)",
            _ => "f_r(n) not a pure power",
        };
        write!(
            f,
            "lambda = {}, |n| <= {}: {sign}; sigma in {:?}; character {}; cotriangular {}; {}",
            self.lambda, self.bound, self.sigma, self.character, self.cotriangular, self.checks
        )
    }
}

pub fn toy_functionals(lambda: &Scalar, bound: i64) -> Result<ToyReport> {
    if bound < 1 {
        return Err(Error::Inadmissible("range bound must be at least 1".into()));
    }
    let form = toy_rform(lambda.clone())?;
    let range: Vec<i64> = (-bound..=bound).collect();
    let mut checks = Outcome::new(format!("group algebra of Z, lambda = {lambda}"));

    // axioms on group-likes
    for &a in &range {
        for &b in &range {
            let conv = &form.r(a, b) * &form.rbar(a, b);
            checks.record(conv.is_one(), || format!("r * rbar at ({a},{b}) is {conv}"));
            for &c in &range {
                let lhs = form.r(a + b, c);
                checks.record(lhs == &form.r(a, c) * &form.r(b, c), || {
                    format!("left multiplicativity at ({a},{b},{c})")
                });
                checks.record(form.r(c, a + b) == &form.r(c, b) * &form.r(c, a), || {
                    format!("right multiplicativity at ({c},{a},{b})")
                });
            }
        }
    }

    let mut f_r_sign = None;
    for e in [1i64, -1] {
        if range
            .iter()
            .all(|&n| form.f_r(n) == lambda.pow(e * n * n).unwrap())
        {
            f_r_sign = Some(e);
            break;
        }
    }
    for &n in &range {
        checks.record(form.big_f(n).is_one(), || {
            format!("F_r(g^{n}) = {}", form.big_f(n))
        });
        checks.record((&form.f_r(n) * &form.fbar_r(n)).is_one(), || {
            format!("fbar_r inverts f_r at {n}")
        });
        checks.record((&form.f_s(n) * &form.fbar_s(n)).is_one(), || {
            format!("fbar_s inverts f_s at {n}")
        });
    }

    let mut sigma: BTreeSet<i64> = [1, -1].into();
    let mut character = true;
    for &n in &range {
        for &m in &range {
            if !range.contains(&(n + m)) {
                continue;
            }
            let whole = form.f_r(n + m);
            let parts = &form.f_r(n) * &form.f_r(m);
            character &= whole == parts;
            sigma.retain(|&s| whole == &parts * &lambda.pow(2 * s * n * m).unwrap());
        }
    }
    let cotriangular = range
        .iter()
        .all(|&n| range.iter().all(|&m| form.rbar(n, m) == form.r(m, n)));
    Ok(ToyReport {
        lambda: lambda.clone(),
        bound,
        f_r_sign,
        sigma,
        character,
        cotriangular,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_halves() {
        let rep = toy_functionals(&Scalar::ratio(3, 2), 8).unwrap();
        assert!(rep.checks.passed(), "{rep}");
        assert_eq!(rep.f_r_sign, Some(-1));
        assert_eq!(rep.sigma, [-1].into());
        assert!(!rep.character && !rep.cotriangular);
    }

    #[test]
    fn minus_one_is_cotriangular() {
        let rep = toy_functionals(&Scalar::int(-1), 8).unwrap();
        assert!(rep.checks.passed());
        assert!(rep.character && rep.cotriangular && rep.character_iff_cotriangular());
        assert_eq!(rep.sigma.len(), 2);
    }

    #[test]
    fn symbolic() {
        let rep = toy_functionals(&Scalar::t_pow(2), 4).unwrap();
        assert!(rep.checks.passed() && rep.character_iff_cotriangular());
        assert_eq!(rep.sigma, [-1].into());
    }

    #[test]
    fn zero_rejected() {
        assert!(toy_rform(Scalar::zero()).is_err());
    }
}
