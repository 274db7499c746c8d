//! Dense univariate polynomials over the integers in the indeterminate `t`.
//!
//! Coefficients are stored in ascending degree order with no trailing zeros,
//! so the zero polynomial is the empty vector. Only the operations needed by
//! [`Scalar`](crate::Scalar) normalization are provided: ring arithmetic,
//! content, pseudo-remainder gcd and exact division.

use std::fmt;

use dashu_int::ops::Gcd;
use dashu_int::{IBig, UBig};

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    coeffs: Vec<IBig>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(IBig::ONE)
    }

    pub fn constant(c: IBig) -> Self {
        Poly::monomial(c, 0)
    }

    /// `c * t^k`.
    pub fn monomial(c: IBig, k: usize) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![IBig::ZERO; k + 1];
        coeffs[k] = c;
        Poly { coeffs }
    }

    pub fn from_coeffs(mut coeffs: Vec<IBig>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[IBig] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree; the zero polynomial has no degree.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&IBig> {
        self.coeffs.last()
    }

    /// Index of the lowest nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// True for `c * t^k` (including constants).
    pub fn is_monomial(&self) -> bool {
        match self.valuation() {
            Some(v) => v + 1 == self.coeffs.len(),
            None => false,
        }
    }

    /// Divides by `t^k`; the caller guarantees `k <= valuation`.
    pub fn shift_down(&self, k: usize) -> Poly {
        if k == 0 {
            return self.clone();
        }
        debug_assert!(self.valuation().is_none_or(|v| v >= k));
        Poly {
            coeffs: self.coeffs[k.min(self.coeffs.len())..].to_vec(),
        }
    }

    pub fn shift_up(&self, k: usize) -> Poly {
        if k == 0 || self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![IBig::ZERO; k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    /// Gcd of the coefficients (zero for the zero polynomial).
    pub fn content(&self) -> UBig {
        let mut g = UBig::ZERO;
        for c in &self.coeffs {
            if c.is_zero() {
                continue;
            }
            g = if g.is_zero() {
                c.unsigned_abs_ref()
            } else {
                (&g).gcd(c)
            };
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn scale(&self, c: &IBig) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Exact division of every coefficient by `c`.
    pub fn div_scalar_exact(&self, c: &IBig) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|x| x / c).collect(),
        }
    }

    pub fn neg(&self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|x| -x).collect(),
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let (long, short) = if self.coeffs.len() >= other.coeffs.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (c, s) in coeffs.iter_mut().zip(&short.coeffs) {
            *c += s;
        }
        Poly::from_coeffs(coeffs)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(n, IBig::ZERO);
        for (c, s) in coeffs.iter_mut().zip(&other.coeffs) {
            *c -= s;
        }
        Poly::from_coeffs(coeffs)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if self.is_monomial() {
            let v = self.coeffs.len() - 1;
            return other.scale(&self.coeffs[v]).shift_up(v);
        }
        if other.is_monomial() {
            let v = other.coeffs.len() - 1;
            return self.scale(&other.coeffs[v]).shift_up(v);
        }
        let mut coeffs = vec![IBig::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        Poly::from_coeffs(coeffs)
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let c = IBig::from(self.content());
        let mut p = self.div_scalar_exact(&c);
        if p.leading().is_some_and(|l| l < &IBig::ZERO) {
            p = p.neg();
        }
        p
    }

    /// Pseudo-remainder of `self` by `d`.
    fn pseudo_rem(&self, d: &Poly) -> Poly {
        let dd = d.degree().expect("pseudo_rem by zero");
        let lc = d.leading().unwrap().clone();
        let mut r = self.clone();
        while let Some(dr) = r.degree() {
            if dr < dd {
                break;
            }
            let lr = r.leading().unwrap().clone();
            r = r.scale(&lc).sub(&d.scale(&lr).shift_up(dr - dd));
        }
        r
    }

    /// Primitive gcd with positive leading coefficient.
    pub fn gcd(&self, other: &Poly) -> Poly {
        if self.is_zero() {
            return other.primitive();
        }
        if other.is_zero() {
            return self.primitive();
        }
        // Powers of t separate cleanly from the rest.
        let v = self.valuation().unwrap().min(other.valuation().unwrap());
        let mut a = self.shift_down(self.valuation().unwrap()).primitive();
        let mut b = other.shift_down(other.valuation().unwrap()).primitive();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            if b.degree() == Some(0) {
                a = Poly::one();
                break;
            }
            let r = a.pseudo_rem(&b).primitive();
            a = b;
            b = r;
        }
        a.shift_up(v)
    }

    /// Exact division; panics if `d` does not divide `self` over the integers.
    pub fn div_exact(&self, d: &Poly) -> Poly {
        if d.is_one() {
            return self.clone();
        }
        if d.is_monomial() {
            let k = d.valuation().unwrap();
            return self.shift_down(k).div_scalar_exact(&d.coeffs[k]);
        }
        let dd = d.degree().expect("division by zero polynomial");
        let lc = d.leading().unwrap();
        let mut r = self.clone();
        let mut quot = vec![IBig::ZERO; self.coeffs.len().saturating_sub(dd)];
        while let Some(dr) = r.degree() {
            if dr < dd {
                break;
            }
            let lr = r.leading().unwrap();
            let c = lr / lc;
            assert!(&(&c * lc) == lr, "inexact polynomial division");
            r = r.sub(&d.scale(&c).shift_up(dr - dd));
            quot[dr - dd] = c;
        }
        assert!(r.is_zero(), "inexact polynomial division");
        Poly::from_coeffs(quot)
    }

    /// Evaluates at the rational point `num/den` and returns the value as the
    /// fraction `(p(num/den) * den^deg, den^deg)`, unreduced.
    pub fn eval_ratio(&self, num: &IBig, den: &IBig) -> (IBig, IBig) {
        let deg = self.degree().unwrap_or(0);
        let mut acc = IBig::ZERO;
        let mut npow = IBig::ONE;
        let mut dpows = vec![IBig::ONE; deg + 1];
        for k in 1..=deg {
            dpows[k] = &dpows[k - 1] * den;
        }
        for (k, c) in self.coeffs.iter().enumerate() {
            acc += c * &npow * &dpows[deg - k];
            npow *= num;
        }
        (acc, dpows[deg].clone())
    }
}

trait UnsignedAbsRef {
    fn unsigned_abs_ref(&self) -> UBig;
}

impl UnsignedAbsRef for IBig {
    fn unsigned_abs_ref(&self) -> UBig {
        use dashu_int::ops::UnsignedAbs;
        self.clone().unsigned_abs()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c < &IBig::ZERO;
            let mag = if neg { -c } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "t")?,
                (1, false) => write!(f, "{mag}*t")?,
                (_, true) => write!(f, "t^{k}")?,
                (_, false) => write!(f, "{mag}*t^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Poly {
        Poly::from_coeffs(c.iter().map(|&x| IBig::from(x)).collect())
    }

    #[test]
    fn gcd_of_shared_factor() {
        // (t-1)(t+2) and (t-1)(t^2+1)
        let a = p(&[-2, 1, 1]);
        let b = p(&[-1, 1, -1, 1]);
        assert_eq!(a.gcd(&b), p(&[-1, 1]));
    }

    #[test]
    fn gcd_keeps_t_power() {
        let a = p(&[0, 0, 2, 2]); // 2t^2(t+1)
        let b = p(&[0, 3, 3]); // 3t(t+1)
        assert_eq!(a.gcd(&b), p(&[0, 1, 1]));
    }

    #[test]
    fn exact_division_roundtrip() {
        let a = p(&[3, -1, 4, 1]);
        let b = p(&[2, 0, -5]);
        assert_eq!(a.mul(&b).div_exact(&b), a);
    }

    #[test]
    fn display_is_descending() {
        assert_eq!(p(&[1, -1, 0, 2]).to_string(), "2*t^3 - t + 1");
    }
}
