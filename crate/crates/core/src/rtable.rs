//! The shipped R-matrix entry table and its interpreter.

use crate::error::{Error, Result};
use crate::matrix::QMatrix;
use crate::scalar::Scalar;
use crate::series::SeriesSpec;

pub const TABLE_SOURCE: &str = include_str!("../data/rmatrices.txt");
pub const TABLE_FORMAT: u32 = 1;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Family {
    A,
    Bcd,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Parity {
    Any,
    Odd,
    Even,
}

/// `i`, `j`, `i'`, `j'`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
struct Var {
    j: bool,
    primed: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Op {
    Eq,
    Ne,
    Gt,
    Lt,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Factor {
    Int(i64),
    Q,
    QInv,
    Lambda,
    EpsI,
    EpsJ,
    QRho,
}

#[derive(Clone, Debug)]
struct Line {
    family: Family,
    parity: Parity,
    cond: Vec<(Var, Op, Var)>,
    slots: [Var; 4],
    factors: Vec<Factor>,
}

#[derive(Clone, Debug)]
pub struct RTable {
    lines: Vec<Line>,
}

fn parse_var(s: &str) -> Result<Var> {
    match s {
        "i" => Ok(Var {
            j: false,
            primed: false,
        }),
        "j" => Ok(Var {
            j: true,
            primed: false,
        }),
        "i'" => Ok(Var {
            j: false,
            primed: true,
        }),
        "j'" => Ok(Var {
            j: true,
            primed: true,
        }),
        _ => Err(Error::Parse(format!("unknown index `{s}`"))),
    }
}

fn parse_cond(s: &str) -> Result<Vec<(Var, Op, Var)>> {
    if s == "*" {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|atom| {
            let atom = atom.trim();
            // order matters: `!=` before `=`
            for (tok, op) in [("!=", Op::Ne), ("=", Op::Eq), (">", Op::Gt), ("<", Op::Lt)] {
                if let Some((a, b)) = atom.split_once(tok) {
                    return Ok((parse_var(a.trim())?, op, parse_var(b.trim())?));
                }
            }
            Err(Error::Parse(format!("bad condition `{atom}`")))
        })
        .collect()
}

fn parse_value(s: &str) -> Result<Vec<Factor>> {
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let mut out = Vec::new();
    if neg {
        out.push(Factor::Int(-1));
    }
    for tok in body.split('*') {
        let f = match tok.trim() {
            "q" => Factor::Q,
            "q^-1" => Factor::QInv,
            "lambda" => Factor::Lambda,
            "eps(i)" => Factor::EpsI,
            "eps(j)" => Factor::EpsJ,
            "qrho(i,j)" => Factor::QRho,
            other => Factor::Int(
                other
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad factor `{other}`")))?,
            ),
        };
        out.push(f);
    }
    Ok(out)
}

impl RTable {
    pub fn shipped() -> RTable {
        RTable::parse(TABLE_SOURCE).expect("shipped table parses")
    }

    pub fn parse(src: &str) -> Result<RTable> {
        let mut format = None;
        let mut lines = Vec::new();
        for (no, raw) in src.lines().enumerate() {
            let line = raw.trim();
            if let Some(rest) = line.strip_prefix("# format") {
                format = Some(
                    rest.trim()
                        .parse::<u32>()
                        .map_err(|_| Error::Parse("bad format line".into()))?,
                );
                continue;
            }
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split('|').map(str::trim).collect();
            let ctx = |m: &str| Error::Parse(format!("line {}: {m}", no + 1));
            if cols.len() != 5 {
                return Err(ctx("expected 5 columns"));
            }
            let family = match cols[0] {
                "A" => Family::A,
                "BCD" => Family::Bcd,
                f => return Err(ctx(&format!("unknown family `{f}`"))),
            };
            let parity = match cols[1] {
                "any" => Parity::Any,
                "odd" => Parity::Odd,
                "even" => Parity::Even,
                p => return Err(ctx(&format!("unknown N pattern `{p}`"))),
            };
            let slot_strs: Vec<&str> = cols[3].split_whitespace().collect();
            if slot_strs.len() != 4 {
                return Err(ctx("expected four index slots"));
            }
            let mut slots = [Var {
                j: false,
                primed: false,
            }; 4];
            for (s, src) in slots.iter_mut().zip(slot_strs) {
                *s = parse_var(src)?;
            }
            lines.push(Line {
                family,
                parity,
                cond: parse_cond(cols[2])?,
                slots,
                factors: parse_value(cols[4])?,
            });
        }
        match format {
            Some(TABLE_FORMAT) => Ok(RTable { lines }),
            Some(v) => Err(Error::Parse(format!(
                "table format {v} is not supported (expected {TABLE_FORMAT})"
            ))),
            None => Err(Error::Parse("missing `# format` header".into())),
        }
    }

    /// Instantiates R for `spec` (rows `(i,n)`, columns `(j,m)`, 0-based).
    pub fn build(&self, spec: &SeriesSpec) -> QMatrix {
        let n = spec.n;
        let family = if spec.series.is_a() {
            Family::A
        } else {
            Family::Bcd
        };
        let mut r = QMatrix::square_zeros(vec![n, n]);
        let lookup = |v: Var, i: usize, j: usize| {
            let x = if v.j { j } else { i };
            if v.primed {
                n - 1 - x
            } else {
                x
            }
        };
        for line in self.lines.iter().filter(|l| l.family == family) {
            let ok_parity = match line.parity {
                Parity::Any => true,
                Parity::Odd => n % 2 == 1,
                Parity::Even => n.is_multiple_of(2),
            };
            if !ok_parity {
                continue;
            }
            for i in 0..n {
                for j in 0..n {
                    let holds = line.cond.iter().all(|&(a, op, b)| {
                        let (x, y) = (lookup(a, i, j), lookup(b, i, j));
                        match op {
                            Op::Eq => x == y,
                            Op::Ne => x != y,
                            Op::Gt => x > y,
                            Op::Lt => x < y,
                        }
                    });
                    if !holds {
                        continue;
                    }
                    let s = line.slots.map(|v| lookup(v, i, j));
                    let value = line.factors.iter().fold(Scalar::one(), |acc, f| {
                        acc * match *f {
                            Factor::Int(k) => Scalar::int(k),
                            Factor::Q => spec.q.clone(),
                            Factor::QInv => spec.q_inv(),
                            Factor::Lambda => spec.lambda.clone(),
                            Factor::EpsI => Scalar::int(spec.eps_index(i)),
                            Factor::EpsJ => Scalar::int(spec.eps_index(j)),
                            Factor::QRho => spec.q_rho(i, j),
                        }
                    });
                    r.add_at(s[0] * n + s[1], s[2] * n + s[3], &value);
                }
            }
        }
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{build_series, Series};

    #[test]
    fn series_a_entries() {
        let spec = build_series(Series::GL, 2).unwrap();
        let r = RTable::shipped().build(&spec);
        let q = spec.q.clone();
        assert_eq!(r.at(&[0, 0], &[0, 0]), q);
        assert_eq!(r.at(&[0, 1], &[0, 1]), Scalar::one());
        assert_eq!(r.at(&[1, 0], &[0, 1]), spec.lambda);
        assert_eq!(r.nnz(), 5);
    }

    #[test]
    fn rejects_unknown_format() {
        let err = RTable::parse("# format 9\n").unwrap_err();
        assert!(matches!(err, Error::Parse(_)));
        assert!(RTable::parse("A | any | i=j | i i i i | q\n").is_err());
    }
}
