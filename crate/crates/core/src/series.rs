//! Quantum group selection and its derived constants.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Series {
    GL,
    SL,
    O,
    Sp,
}

impl Series {
    /// A-type (Hecke) series.
    pub fn is_a(self) -> bool {
        matches!(self, Series::GL | Series::SL)
    }

    pub fn name(self) -> &'static str {
        match self {
            Series::GL => "gl",
            Series::SL => "sl",
            Series::O => "o",
            Series::Sp => "sp",
        }
    }
}

impl FromStr for Series {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gl" => Ok(Series::GL),
            "sl" => Ok(Series::SL),
            "o" => Ok(Series::O),
            "sp" => Ok(Series::Sp),
            other => Err(Error::InvalidSeries(format!("unknown series `{other}`"))),
        }
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Series::GL => "GL",
            Series::SL => "SL",
            Series::O => "O",
            Series::Sp => "Sp",
        };
        write!(f, "{s}")
    }
}

/// A series and size together with the constants every later stage needs.
///
/// `q = t^q_exp`. The default exponent is 2 so that `q^(1/2) = t`; for SL(N)
/// it is `lcm(2, N)` so that an N-th root of `q^-1` exists in the field.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SeriesSpec {
    pub series: Series,
    pub n: usize,
    pub q_exp: i64,
    pub q: Scalar,
    pub lambda: Scalar,
    /// +1 for O, -1 for Sp.
    pub eps: Option<i64>,
    /// `eps * q^(N - eps)`.
    pub mu: Option<Scalar>,
    /// Twice the exponents rho_i, so half-integers stay integral.
    pub rho2: Option<Vec<i64>>,
}

pub const MAX_N: usize = 8;

pub fn build_series(series: Series, n: usize) -> Result<SeriesSpec> {
    build_series_q(series, n, default_q_exp(series, n))
}

pub fn default_q_exp(series: Series, n: usize) -> i64 {
    match series {
        Series::SL if n % 2 == 1 => 2 * n as i64,
        Series::SL => n as i64,
        _ => 2,
    }
}

/// As [`build_series`] but with `q = t^q_exp`.
pub fn build_series_q(series: Series, n: usize, q_exp: i64) -> Result<SeriesSpec> {
    if n < 2 {
        return Err(Error::InvalidSeries(format!(
            "{series}({n}): N must be at least 2"
        )));
    }
    if n > MAX_N {
        return Err(Error::InvalidSeries(format!(
            "{series}({n}): N above the supported maximum {MAX_N}"
        )));
    }
    if series == Series::Sp && n % 2 == 1 {
        return Err(Error::InvalidSeries(format!(
            "Sp({n}): symplectic size must be even"
        )));
    }
    if q_exp == 0 {
        return Err(Error::InvalidSeries("q = t^0 is not generic".into()));
    }
    if series == Series::O && n % 2 == 1 && q_exp % 2 != 0 {
        return Err(Error::InvalidSeries(
            "odd orthogonal series needs an even q exponent".into(),
        ));
    }
    let q = Scalar::t_pow(q_exp);
    let lambda = &q - &Scalar::t_pow(-q_exp);
    let (eps, mu, rho2) = match series {
        Series::GL | Series::SL => (None, None, None),
        Series::O | Series::Sp => {
            let e: i64 = if series == Series::O { 1 } else { -1 };
            let mu = Scalar::int(e) * q.pow(n as i64 - e).expect("q is nonzero");
            (Some(e), Some(mu), Some(rho2_vector(series, n)))
        }
    };
    Ok(SeriesSpec {
        series,
        n,
        q_exp,
        q,
        lambda,
        eps,
        mu,
        rho2,
    })
}

/// Twice the standard rho staircase, indices 1..N mapped to 0..N-1.
fn rho2_vector(series: Series, n: usize) -> Vec<i64> {
    let half = (n / 2) as i64;
    let mut out = Vec::with_capacity(n);
    match series {
        // C_n: n, .., 1, -1, .., -n
        Series::Sp => {
            out.extend((1..=half).rev().map(|k| 2 * k));
            out.extend((1..=half).map(|k| -2 * k));
        }
        // B_n: n-1/2, .., 1/2, 0, -1/2, ..   D_n: n-1, .., 0, 0, .., -(n-1)
        _ if n % 2 == 1 => {
            out.extend((0..half).rev().map(|k| 2 * k + 1));
            out.push(0);
            out.extend((0..half).map(|k| -(2 * k + 1)));
        }
        _ => {
            out.extend((0..half).rev().map(|k| 2 * k));
            out.extend((0..half).map(|k| -2 * k));
        }
    }
    out
}

impl SeriesSpec {
    /// `i' = N + 1 - i`, 0-based.
    pub fn prime(&self, i: usize) -> usize {
        self.n - 1 - i
    }

    /// Sign attached to index `i` (0-based): all +1 for O, +1 then -1 for Sp.
    pub fn eps_index(&self, i: usize) -> i64 {
        match self.series {
            Series::Sp if i >= self.n / 2 => -1,
            _ => 1,
        }
    }

    /// `q^(rho_i - rho_j)` for B/C/D.
    pub fn q_rho(&self, i: usize, j: usize) -> Scalar {
        let rho2 = self.rho2.as_ref().expect("rho is defined for O/Sp only");
        let d2 = rho2[i] - rho2[j];
        // q^(d2/2) = t^(q_exp * d2 / 2)
        debug_assert!((self.q_exp * d2) % 2 == 0);
        Scalar::t_pow(self.q_exp * d2 / 2)
    }

    pub fn q_inv(&self) -> Scalar {
        Scalar::t_pow(-self.q_exp)
    }

    /// Parses an expression in `t` and `q` with this spec's `q = t^q_exp`.
    pub fn parse(&self, src: &str) -> Result<Scalar> {
        Scalar::parse(src, self.q_exp)
    }

    pub fn label(&self) -> String {
        if self.q_exp == 2 {
            format!("{}({})", self.series, self.n)
        } else {
            format!("{}({}) q=t^{}", self.series, self.n, self.q_exp)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sp4_constants() {
        let s = build_series(Series::Sp, 4).unwrap();
        assert_eq!(s.eps, Some(-1));
        assert_eq!(s.mu, Some(-Scalar::t_pow(10)));
        assert_eq!(s.rho2, Some(vec![4, 2, -2, -4]));
    }

    #[test]
    fn o3_constants() {
        let s = build_series(Series::O, 3).unwrap();
        assert_eq!(s.eps, Some(1));
        assert_eq!(s.mu, Some(Scalar::t_pow(4)));
        assert_eq!(s.rho2, Some(vec![1, 0, -1]));
        assert_eq!(s.q_rho(0, 2), Scalar::t_pow(2));
    }

    #[test]
    fn o4_rho() {
        let s = build_series(Series::O, 4).unwrap();
        assert_eq!(s.rho2, Some(vec![2, 0, 0, -2]));
    }

    #[test]
    fn odd_symplectic_rejected() {
        assert!(matches!(
            build_series(Series::Sp, 3),
            Err(Error::InvalidSeries(_))
        ));
        assert!(build_series(Series::GL, 1).is_err());
    }

    #[test]
    fn lambda_is_q_minus_inverse() {
        let s = build_series(Series::GL, 2).unwrap();
        assert_eq!(s.lambda, Scalar::parse("q - 1/q", 2).unwrap());
    }
}
