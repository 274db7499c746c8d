//! Exact elements of the rational function field Q(t).
//!
//! A [`Scalar`] is stored as `num / den` with integer polynomials in `t`,
//! reduced so that equal values have identical representations: the two
//! polynomials are coprime over Q, their integer contents are coprime, and the
//! leading coefficient of `den` is positive. Equality is therefore structural.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use dashu_int::ops::{Gcd, SquareRoot, UnsignedAbs};
use dashu_int::IBig;

use crate::error::{Error, Result};
use crate::poly::Poly;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Scalar {
    num: Poly,
    den: Poly,
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        Scalar::int(1)
    }

    pub fn int(n: i64) -> Self {
        Scalar {
            num: Poly::constant(IBig::from(n)),
            den: Poly::one(),
        }
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        Scalar::from_polys(Poly::constant(IBig::from(n)), Poly::constant(IBig::from(d)))
    }

    /// `t^k` for any integer `k`.
    pub fn t_pow(k: i64) -> Self {
        let m = Poly::monomial(IBig::ONE, k.unsigned_abs() as usize);
        if k >= 0 {
            Scalar {
                num: m,
                den: Poly::one(),
            }
        } else {
            Scalar {
                num: Poly::one(),
                den: m,
            }
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        Scalar {
            num: p,
            den: Poly::one(),
        }
    }

    /// Builds `num / den` in canonical form. Panics if `den` is zero.
    pub fn from_polys(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Scalar::zero();
        }
        let (mut num, mut den) = if den.is_one() {
            (num, den)
        } else {
            let g = if den.is_monomial() || num.is_monomial() {
                let k = num.valuation().unwrap().min(den.valuation().unwrap());
                Poly::monomial(IBig::ONE, k)
            } else {
                num.gcd(&den)
            };
            if g.is_one() {
                (num, den)
            } else {
                (num.div_exact(&g), den.div_exact(&g))
            }
        };
        let cd = den.content();
        if !cd.is_one() {
            let c = IBig::from((&cd).gcd(&num.content()));
            if !c.is_one() {
                num = num.div_scalar_exact(&c);
                den = den.div_scalar_exact(&c);
            }
        }
        if den.leading().is_some_and(|l| l < &IBig::ZERO) {
            num = num.neg();
            den = den.neg();
        }
        Scalar { num, den }
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    /// `Some(a)` when the denominator is exactly `t^a`.
    fn laurent_shift(&self) -> Option<usize> {
        if self.den.is_monomial() && self.den.leading().is_some_and(|c| c.is_one()) {
            self.den.degree()
        } else {
            None
        }
    }

    /// `num / t^a` with only the common power of `t` removed.
    fn from_laurent(num: Poly, a: usize) -> Scalar {
        let Some(v) = num.valuation() else {
            return Scalar::zero();
        };
        let k = v.min(a);
        Scalar {
            num: num.shift_down(k),
            den: Poly::monomial(IBig::ONE, a - k),
        }
    }

    fn laurent_sum(&self, o: &Scalar, negate: bool) -> Option<Scalar> {
        let (a, b) = (self.laurent_shift()?, o.laurent_shift()?);
        let m = a.max(b);
        let rhs = o.num.shift_up(m - b);
        let rhs = if negate { rhs.neg() } else { rhs };
        Some(Scalar::from_laurent(self.num.shift_up(m - a).add(&rhs), m))
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True when the value does not depend on `t`.
    pub fn is_constant(&self) -> bool {
        self.num.degree().unwrap_or(0) == 0 && self.den.degree() == Some(0)
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Scalar::from_polys(
            self.num.mul(&other.den),
            self.den.mul(&other.num),
        ))
    }

    pub fn inv(&self) -> Result<Scalar> {
        Scalar::one().checked_div(self)
    }

    pub fn pow(&self, k: i64) -> Result<Scalar> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Scalar::one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// Substitutes `t -> t^k` (k may be negative).
    pub fn substitute_t_pow(&self, k: i64) -> Scalar {
        let sub = |p: &Poly| -> Scalar {
            let mut acc = Scalar::zero();
            for (e, c) in p.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    acc += &(&Scalar::from_poly(Poly::constant(c.clone()))
                        * &Scalar::t_pow(k * e as i64));
                }
            }
            acc
        };
        &sub(&self.num) / &sub(&self.den)
    }

    /// For a constant, whether it is the square of a rational.
    pub fn is_rational_square(&self) -> Option<bool> {
        if !self.is_constant() {
            return None;
        }
        let n = self.num.coeffs().first().cloned().unwrap_or_default();
        let d = self.den.coeffs()[0].clone();
        // n/d is a square iff n d is
        let p = n * d;
        if p < IBig::ZERO {
            return Some(false);
        }
        let m = p.unsigned_abs();
        let r = m.sqrt();
        Some(&r * &r == m)
    }

    /// Evaluates at `t = num/den`; `None` when the denominator vanishes there.
    pub fn specialize(&self, t0: (i64, i64)) -> Option<Scalar> {
        let (a, b) = (IBig::from(t0.0), IBig::from(t0.1));
        let (nn, nd) = self.num.eval_ratio(&a, &b);
        let (dn, dd) = self.den.eval_ratio(&a, &b);
        if dn.is_zero() {
            return None;
        }
        Some(Scalar::from_polys(
            Poly::constant(nn * dd),
            Poly::constant(nd * dn),
        ))
    }

    /// Parses an expression in `t` and `q` (with `q = t^q_exp`), e.g.
    /// `q - q^-1`, `-3/2`, `(t^2+1)/t`.
    pub fn parse(src: &str, q_exp: i64) -> Result<Scalar> {
        let mut p = ExprParser {
            chars: src.chars().filter(|c| !c.is_whitespace()).collect(),
            pos: 0,
            q_exp,
        };
        let v = p.sum()?;
        if p.pos != p.chars.len() {
            return Err(Error::Parse(format!("trailing input in {src:?}")));
        }
        Ok(v)
    }
}

struct ExprParser {
    chars: Vec<char>,
    pos: usize,
    q_exp: i64,
}

impl ExprParser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn sum(&mut self) -> Result<Scalar> {
        let mut acc = self.product()?;
        while let Some(c) = self.peek() {
            match c {
                '+' => {
                    self.pos += 1;
                    acc = &acc + &self.product()?;
                }
                '-' => {
                    self.pos += 1;
                    acc = &acc - &self.product()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<Scalar> {
        let mut acc = self.unary()?;
        while let Some(c) = self.peek() {
            match c {
                '*' => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                '/' => {
                    self.pos += 1;
                    acc = acc.checked_div(&self.unary()?)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Scalar> {
        if self.peek() == Some('-') {
            self.pos += 1;
            return Ok(-self.unary()?);
        }
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let e = self.integer_exponent()?;
            return base.pow(e);
        }
        Ok(base)
    }

    fn integer_exponent(&mut self) -> Result<i64> {
        let neg = if self.peek() == Some('-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        let v: i64 = s
            .parse()
            .map_err(|_| Error::Parse(format!("bad exponent {s:?}")))?;
        Ok(if neg { -v } else { v })
    }

    fn atom(&mut self) -> Result<Scalar> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let v = self.sum()?;
                if self.peek() != Some(')') {
                    return Err(Error::Parse("missing ')'".into()));
                }
                self.pos += 1;
                Ok(v)
            }
            Some('t') => {
                self.pos += 1;
                Ok(Scalar::t_pow(1))
            }
            Some('q') => {
                self.pos += 1;
                Ok(Scalar::t_pow(self.q_exp))
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    self.pos += 1;
                }
                let s: String = self.chars[start..self.pos].iter().collect();
                let n: IBig = s
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad integer {s:?}")))?;
                Ok(Scalar::from_poly(Poly::constant(n)))
            }
            other => Err(Error::Parse(format!("unexpected {other:?}"))),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |p: &Poly| {
            if p.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 {
                format!("({p})")
            } else {
                p.to_string()
            }
        };
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
        }
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if let Some(v) = self.laurent_sum(o, false) {
            return v;
        }
        if self.den == o.den {
            return Scalar::from_polys(self.num.add(&o.num), self.den.clone());
        }
        Scalar::from_polys(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        if o.is_zero() {
            return self.clone();
        }
        if let Some(v) = self.laurent_sum(o, true) {
            return v;
        }
        if self.den == o.den {
            return Scalar::from_polys(self.num.sub(&o.num), self.den.clone());
        }
        Scalar::from_polys(
            self.num.mul(&o.den).sub(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        if self.is_zero() || o.is_zero() {
            return Scalar::zero();
        }
        if self.is_one() {
            return o.clone();
        }
        if o.is_one() {
            return self.clone();
        }
        if let (Some(a), Some(b)) = (self.laurent_shift(), o.laurent_shift()) {
            return Scalar::from_laurent(self.num.mul(&o.num), a + b);
        }
        Scalar::from_polys(self.num.mul(&o.num), self.den.mul(&o.den))
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, o: &Scalar) -> Scalar {
        self.checked_div(o).expect("division by zero scalar")
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            num: self.num.neg(),
            den: self.den,
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                (&self).$m(o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        *self = &*self + o;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, o: &Scalar) {
        *self = &*self - o;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, o: &Scalar) {
        *self = &*self * o;
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |a, b| &a + &b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Scalar {
        Scalar::t_pow(2)
    }

    #[test]
    fn inverse_pair_multiplies_to_one() {
        assert_eq!(&Scalar::t_pow(2) * &Scalar::t_pow(-2), Scalar::one());
    }

    #[test]
    fn lambda_from_difference() {
        let lam = &q() - &q().inv().unwrap();
        assert_eq!(lam, Scalar::parse("t^2 - t^-2", 2).unwrap());
        assert_eq!(lam.to_string(), "(t^4 - 1)/t^2");
    }

    #[test]
    fn gcd_reduction() {
        let a = Scalar::parse("(q-1)/(q^2-1)", 2).unwrap();
        assert_eq!(a, Scalar::parse("1/(q+1)", 2).unwrap());
        assert_eq!(a.denom().leading().unwrap(), &IBig::ONE);
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(
            Scalar::one().checked_div(&Scalar::zero()),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn canonical_sign_and_content() {
        let a = Scalar::from_polys(
            Poly::constant(IBig::from(4)),
            Poly::constant(IBig::from(-6)),
        );
        assert_eq!(a, Scalar::ratio(-2, 3));
    }

    #[test]
    fn specialization_is_a_homomorphism() {
        let a = Scalar::parse("(q+1)/(t-3)", 2).unwrap();
        let b = Scalar::parse("q^-1 - 2*t", 2).unwrap();
        let t0 = (7, 5);
        let lhs = (&a * &b).specialize(t0).unwrap();
        let rhs = &a.specialize(t0).unwrap() * &b.specialize(t0).unwrap();
        assert_eq!(lhs, rhs);
        assert!(Scalar::parse("1/(5*t-7)", 2)
            .unwrap()
            .specialize(t0)
            .is_none());
    }

    #[test]
    fn substitution_inverts_q() {
        let a = Scalar::parse("q + 2*q^-3", 2).unwrap();
        assert_eq!(
            a.substitute_t_pow(-1),
            Scalar::parse("q^-1 + 2*q^3", 2).unwrap()
        );
    }
}
