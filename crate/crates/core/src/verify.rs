//! Suite orchestration and the line-delimited JSON report.
//!
//! A report is a header record, one record per check, and a summary record.
//! Records carry no timestamps unless asked for, so two runs of the same
//! configuration serialize to identical bytes.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bichar::{
    check_cqt, compare_low_degree, convolve, default_z, make_central_bichar, make_rform,
    materialize, Bicharacter, PairForm,
};
use crate::braid::{
    classify_braid_solutions, identity_ray_excluded, inverted_bundle, sp2_delegation, z_constraint,
    ZConstraint,
};
use crate::bwm::{
    algebra_for, build_pi, compare_relation, hecke_part, kernel_relation,
    reduced_defect_identities, relation_text, AlgebraKind, TermStatus, SP4_REFERENCE,
};
use crate::error::{Error, Result};
use crate::functionals::{
    cotriangular_consistency, functional_identities, inverse_pair_check, modular_compare,
    s2_matrix, twisted_product_check, FourFunctionals,
};
use crate::ideal::{build_relation_slice, RelationIdealSlice};
use crate::matrix::QMatrix;
use crate::outcome::Outcome;
use crate::rmatrix::{braid_defect_of, build_rmatrix, poly_in, ybe_defect_of, RMatrixBundle};
use crate::scalar::Scalar;
use crate::series::{build_series, Series, SeriesSpec};
use crate::toy::toy_functionals;
use crate::yd::{axiom_equivalence, word_span_check, yd_check, Comodule, Side};

pub const SCHEMA: &str = "rforms-report";
pub const SCHEMA_VERSION: u32 = 1;
pub const MAX_DEGREE: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Axioms,
    Yd,
    Classify,
    Bwm,
    Functionals,
    Modular,
    Toy,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Axioms,
        Suite::Yd,
        Suite::Classify,
        Suite::Bwm,
        Suite::Functionals,
        Suite::Modular,
        Suite::Toy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Axioms => "axioms",
            Suite::Yd => "yd",
            Suite::Classify => "classify",
            Suite::Bwm => "bwm",
            Suite::Functionals => "functionals",
            Suite::Modular => "modular",
            Suite::Toy => "toy",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| Error::Parse(format!("unknown suite `{s}`")))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Parses `all` or a comma-separated suite list; the result is sorted and
/// deduplicated.
pub fn parse_suites(src: &str) -> Result<Vec<Suite>> {
    if src.trim() == "all" {
        return Ok(Suite::ALL.to_vec());
    }
    let mut out: Vec<Suite> = src
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(Suite::from_str)
        .collect::<Result<_>>()?;
    out.sort();
    out.dedup();
    if out.is_empty() {
        return Err(Error::Parse("empty suite list".into()));
    }
    Ok(out)
}

/// `a/b` or `a` as a pair of integers with `b > 0`.
pub fn parse_rational(src: &str) -> Result<(i64, i64)> {
    let err = || Error::Parse(format!("not a rational number: `{src}`"));
    let (a, b) = match src.split_once('/') {
        Some((a, b)) => (
            a.trim().parse::<i64>().map_err(|_| err())?,
            b.trim().parse::<i64>().map_err(|_| err())?,
        ),
        None => (src.trim().parse::<i64>().map_err(|_| err())?, 1),
    };
    if b == 0 {
        return Err(err());
    }
    Ok(if b < 0 { (-a, -b) } else { (a, b) })
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub series: Series,
    pub n: usize,
    /// Expression in `q` and `t`; `None` picks the canonical admissible value.
    pub z: Option<String>,
    pub zetas: Vec<String>,
    pub degree: usize,
    pub suites: Vec<Suite>,
    pub threads: usize,
    /// Specialization point for the numeric pre-check.
    pub t0: Option<(i64, i64)>,
    pub timings: bool,
}

impl RunConfig {
    pub fn new(series: Series, n: usize) -> Self {
        RunConfig {
            series,
            n,
            z: None,
            zetas: Vec::new(),
            degree: 2,
            suites: Suite::ALL.to_vec(),
            threads: 1,
            t0: None,
            timings: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Header {
    pub record: String,
    pub schema: String,
    pub version: u32,
    pub series: String,
    pub n: usize,
    pub q: String,
    pub z: String,
    pub zetas: Vec<String>,
    pub degree: usize,
    pub suites: Vec<Suite>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t0: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub record: String,
    pub suite: Suite,
    pub id: String,
    pub topic: String,
    pub status: Status,
    pub checked: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub values: BTreeMap<String, String>,
    /// Verdict at the specialization point; informational only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precheck: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resource_bound: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
}

impl CheckRecord {
    fn new(suite: Suite, id: impl Into<String>, topic: impl Into<String>) -> Self {
        CheckRecord {
            record: "check".into(),
            suite,
            id: id.into(),
            topic: topic.into(),
            status: Status::Pass,
            checked: 0,
            witness: None,
            values: BTreeMap::new(),
            precheck: None,
            resource_bound: None,
            wall_time_ms: None,
        }
    }

    fn with_outcome(mut self, o: &Outcome) -> Self {
        self.checked = o.checked;
        if let Some(w) = &o.witness {
            self.status = Status::Fail;
            self.witness = Some(w.clone());
        }
        self
    }

    fn with_error(mut self, e: &Error) -> Self {
        if let Error::ResourceBound(_) = e {
            self.status = Status::Skipped;
            self.resource_bound = Some(true);
        } else {
            self.status = Status::Fail;
        }
        self.witness = Some(e.to_string());
        self
    }

    fn value(mut self, k: &str, v: impl fmt::Display) -> Self {
        self.values.insert(k.into(), v.to_string());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub record: String,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub exit_code: i32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub header: Header,
    pub checks: Vec<CheckRecord>,
}

impl Report {
    pub fn summary(&self) -> Summary {
        let count = |s| self.checks.iter().filter(|c| c.status == s).count();
        Summary {
            record: "summary".into(),
            passed: count(Status::Pass),
            failed: count(Status::Fail),
            skipped: count(Status::Skipped),
            exit_code: self.exit_code(),
        }
    }

    /// 1 on any failure, else 3 when a resource bound skipped a check, else 0.
    pub fn exit_code(&self) -> i32 {
        if self.checks.iter().any(|c| c.status == Status::Fail) {
            1
        } else if self.checks.iter().any(|c| c.resource_bound == Some(true)) {
            3
        } else {
            0
        }
    }

    pub fn to_jsonl(&self) -> String {
        let mut s = serde_json::to_string(&self.header).expect("header serializes");
        s.push('\n');
        for c in &self.checks {
            s.push_str(&serde_json::to_string(c).expect("record serializes"));
            s.push('\n');
        }
        s.push_str(&serde_json::to_string(&self.summary()).expect("summary serializes"));
        s.push('\n');
        s
    }

    pub fn parse(src: &str) -> Result<Report> {
        let mut lines = src.lines().filter(|l| !l.trim().is_empty());
        let first = lines
            .next()
            .ok_or_else(|| Error::Parse("empty report".into()))?;
        let header: Header =
            serde_json::from_str(first).map_err(|e| Error::Parse(format!("header: {e}")))?;
        if header.schema != SCHEMA || header.version != SCHEMA_VERSION {
            return Err(Error::SchemaMismatch(
                format!("{} v{}", header.schema, header.version),
                format!("{SCHEMA} v{SCHEMA_VERSION}"),
            ));
        }
        let mut checks = Vec::new();
        for line in lines {
            let v: serde_json::Value =
                serde_json::from_str(line).map_err(|e| Error::Parse(e.to_string()))?;
            if v.get("record").and_then(|r| r.as_str()) == Some("check") {
                checks.push(serde_json::from_value(v).map_err(|e| Error::Parse(e.to_string()))?);
            }
        }
        Ok(Report { header, checks })
    }
}

/// Status and value differences keyed by `suite/id`, independent of record
/// order and ignoring timings.
pub fn report_diff(a: &Report, b: &Report) -> Result<Vec<String>> {
    if a.header.schema != b.header.schema || a.header.version != b.header.version {
        return Err(Error::SchemaMismatch(
            format!("{} v{}", a.header.schema, a.header.version),
            format!("{} v{}", b.header.schema, b.header.version),
        ));
    }
    let key = |c: &CheckRecord| format!("{}/{}", c.suite, c.id);
    let ma: BTreeMap<String, &CheckRecord> = a.checks.iter().map(|c| (key(c), c)).collect();
    let mb: BTreeMap<String, &CheckRecord> = b.checks.iter().map(|c| (key(c), c)).collect();
    let mut out = Vec::new();
    for (k, x) in &ma {
        match mb.get(k) {
            None => out.push(format!("- {k}")),
            Some(y) => {
                if x.status != y.status {
                    out.push(format!("~ {k} status {:?} -> {:?}", x.status, y.status));
                }
                for (vk, vv) in &x.values {
                    match y.values.get(vk) {
                        Some(w) if w == vv => {}
                        other => out.push(format!(
                            "~ {k} {vk}: {vv} -> {}",
                            other.map_or("(absent)", |s| s.as_str())
                        )),
                    }
                }
                for vk in y.values.keys().filter(|vk| !x.values.contains_key(*vk)) {
                    out.push(format!("~ {k} {vk}: (absent) -> {}", y.values[vk]));
                }
            }
        }
    }
    for k in mb.keys().filter(|k| !ma.contains_key(*k)) {
        out.push(format!("+ {k}"));
    }
    Ok(out)
}

/// Known dimension of the image of the braid-tangle algebra in
/// `End(V^{⊗3})`.
pub fn expected_centralizer_rank(spec: &SeriesSpec) -> Option<usize> {
    match (spec.series, spec.n) {
        (Series::O, 3) | (Series::O, 4) | (Series::Sp, 6) => Some(15),
        (Series::Sp, 4) => Some(14),
        (Series::GL, 2) | (Series::SL, 2) | (Series::Sp, 2) => Some(5),
        (Series::GL, n) | (Series::SL, n) if n >= 3 => Some(6),
        _ => None,
    }
}

/// Shared read-only state of one run.
struct Ctx {
    spec: SeriesSpec,
    bundle: RMatrixBundle,
    z: Scalar,
    zetas: Vec<Scalar>,
    degree: usize,
    t0: Option<(i64, i64)>,
    slices: [OnceLock<std::result::Result<Arc<RelationIdealSlice>, Error>>; MAX_DEGREE + 1],
    rform: OnceLock<std::result::Result<Arc<Bicharacter>, Error>>,
}

impl Ctx {
    fn slice(&self, d: usize) -> Result<Arc<RelationIdealSlice>> {
        self.slices[d]
            .get_or_init(|| build_relation_slice(&self.bundle, d).map(Arc::new))
            .clone()
    }

    fn r(&self) -> Result<Arc<Bicharacter>> {
        self.rform
            .get_or_init(|| make_rform(&self.bundle, &self.z).map(Arc::new))
            .clone()
    }

    fn twisted(&self, zeta: &Scalar) -> Result<Bicharacter> {
        let c = make_central_bichar(&self.spec, zeta)?;
        let r: Arc<dyn PairForm> = self.r()?;
        let conv = convolve(Arc::new(c), r)?;
        materialize(&conv, format!("c_zeta*r_z[zeta={zeta}]"))
    }
}

type Task = Box<dyn Fn(&Ctx) -> Vec<CheckRecord> + Send + Sync>;

fn task(f: impl Fn(&Ctx) -> Vec<CheckRecord> + Send + Sync + 'static) -> Task {
    Box::new(f)
}

fn one(rec: CheckRecord, r: Result<Outcome>) -> Vec<CheckRecord> {
    vec![match r {
        Ok(o) => rec.with_outcome(&o),
        Err(e) => rec.with_error(&e),
    }]
}

fn zero_outcome(name: &str, m: Result<QMatrix>) -> Result<Outcome> {
    let m = m?;
    let mut o = Outcome::new(name);
    let first = m
        .entries()
        .next()
        .map(|(i, j, v)| format!("entry ({i},{j}) = {v}"));
    o.record(first.is_none(), || first.unwrap_or_default());
    Ok(o)
}

fn precheck(
    t0: Option<(i64, i64)>,
    m: &QMatrix,
    f: impl Fn(&QMatrix) -> Result<QMatrix>,
) -> Option<String> {
    let t0 = t0?;
    Some(match m.specialize(t0) {
        None => "pole".into(),
        Some(ms) => match f(&ms) {
            Ok(d) if d.is_zero() => "pass".into(),
            Ok(_) => "fail".into(),
            Err(e) => format!("error: {e}"),
        },
    })
}

fn axioms_tasks(ctx: &Ctx) -> Vec<Task> {
    let mut ts: Vec<Task> = vec![
        task(|c| {
            let n = c.spec.n;
            let mut rec =
                CheckRecord::new(Suite::Axioms, "rmatrix.ybe", "Yang-Baxter equation for R");
            rec.precheck = precheck(c.t0, &c.bundle.r, |m| ybe_defect_of(m, n));
            one(
                rec,
                zero_outcome("R12 R13 R23 = R23 R13 R12", ybe_defect_of(&c.bundle.r, n)),
            )
        }),
        task(|c| {
            let n = c.spec.n;
            let mut rec =
                CheckRecord::new(Suite::Axioms, "rmatrix.braid", "braid relation for Rhat");
            rec.precheck = precheck(c.t0, &c.bundle.rhat, |m| braid_defect_of(m, n));
            one(
                rec,
                zero_outcome(
                    "Rhat12 Rhat23 Rhat12 = Rhat23 Rhat12 Rhat23",
                    braid_defect_of(&c.bundle.rhat, n),
                ),
            )
        }),
        task(|c| {
            let eig: Vec<String> = c.bundle.eigenvalues.iter().map(|e| e.to_string()).collect();
            let rec = CheckRecord::new(
                Suite::Axioms,
                "rmatrix.minimal_polynomial",
                "minimal polynomial of Rhat",
            )
            .value("roots", eig.join(", "));
            let mut o = Outcome::new("minimal polynomial annihilates Rhat");
            o.record(
                poly_in(&c.bundle.rhat, &c.bundle.eigenvalues).is_zero(),
                || "nonzero".into(),
            );
            if c.spec.series.is_a() {
                let hecke = vec![c.spec.q.clone(), -c.spec.q_inv()];
                o.record(c.bundle.eigenvalues == hecke, || {
                    format!("roots {eig:?} are not q, -q^-1")
                });
            }
            one(rec, Ok(o))
        }),
        task(|c| {
            let rec = CheckRecord::new(Suite::Axioms, "cqt.r", "axioms for r_z").value("z", &c.z);
            one(
                rec,
                c.slice(c.degree)
                    .and_then(|s| Ok(check_cqt(c.r()?.as_ref(), &s, c.degree).summary("r_z"))),
            )
        }),
        task(|c| {
            let rec = CheckRecord::new(Suite::Axioms, "cqt.s", "axioms for s_z = rbar_21");
            one(
                rec,
                c.slice(c.degree).and_then(|s| {
                    Ok(check_cqt(&c.r()?.inverse_flip()?, &s, c.degree).summary("s_z"))
                }),
            )
        }),
        task(|c| {
            let rec = CheckRecord::new(
                Suite::Axioms,
                "cqt.perturbed",
                "a perturbed base matrix is rejected",
            );
            let r = (|| {
                let slice = c.slice(c.degree)?;
                let bad = c.r()?.perturbed(0, 0, &Scalar::one())?;
                let rep = check_cqt(&bad, &slice, c.degree);
                let mut o = Outcome::new("perturbed form fails with a witness");
                let w = rep.all().iter().find_map(|x| x.witness.clone());
                o.record(w.is_some(), || "perturbed form passed every axiom".into());
                Ok((o, w))
            })();
            match r {
                Ok((o, w)) => vec![rec
                    .value("witness_of_perturbed", w.unwrap_or_default())
                    .with_outcome(&o)],
                Err(e) => vec![rec.with_error(&e)],
            }
        }),
    ];
    for zeta in ctx.zetas.clone() {
        ts.push(task(move |c| {
            let rec = CheckRecord::new(
                Suite::Axioms,
                format!("cqt.c_zeta*r[zeta={zeta}]"),
                "axioms for c_zeta * r_z",
            );
            let r = (|| {
                let m = c.twisted(&zeta)?;
                let conv = convolve(
                    Arc::new(make_central_bichar(&c.spec, &zeta)?),
                    c.r()? as Arc<dyn PairForm>,
                )?;
                let agree =
                    compare_low_degree(&conv, &m, "materialization agrees with the convolution");
                let slice = c.slice(c.degree)?;
                Ok(Outcome::merge_all(
                    "c_zeta * r_z",
                    [agree, check_cqt(&m, &slice, c.degree).summary("axioms")],
                ))
            })();
            one(rec, r)
        }));
    }
    ts
}

fn yd_tasks(ctx: &Ctx) -> Vec<Task> {
    let mut ts: Vec<Task> = Vec::new();
    for side in [Side::One, Side::Two] {
        ts.push(task(move |c| {
            let n = c.spec.n;
            let rec = CheckRecord::new(
                Suite::Yd,
                format!("yd.{side}.fundamental"),
                "fundamental comodule is Yetter-Drinfeld",
            );
            one(
                rec,
                c.slice(c.degree)
                    .and_then(|s| yd_check(&*c.r()?, &Comodule::fundamental(n), side, &s)),
            )
        }));
    }
    ts.push(task(|c| {
        let rec = CheckRecord::new(
            Suite::Yd,
            "yd.word_spans",
            "word spans below the slice degree",
        );
        one(
            rec,
            c.slice(c.degree)
                .and_then(|s| word_span_check(&*c.r()?, c.degree, &s)),
        )
    }));
    if ctx.degree >= 3 {
        ts.push(task(|c| {
            let n = c.spec.n;
            let rec = CheckRecord::new(Suite::Yd, "yd.tensor_square", "u⊗u comodule, both actions");
            let r = (|| {
                let s = c.slice(c.degree)?;
                let r = (*c.r()?).clone();
                let m = Comodule::tensor_square(n);
                Ok(Outcome::merge_all(
                    "u⊗u",
                    [
                        yd_check(&r, &m, Side::One, &s)?,
                        yd_check(&r, &m, Side::Two, &s)?,
                    ],
                ))
            })();
            one(rec, r)
        }));
    }
    // equivalence: positives from r, s and the twist; negatives from perturbations
    for form in ["r", "s", "twist"] {
        for side in [Side::One, Side::Two] {
            ts.push(task(move |c| {
                let rec = CheckRecord::new(
                    Suite::Yd,
                    format!("equivalence.positive.{form}.{side}"),
                    "compatibility iff restricted axioms",
                );
                let r = (|| {
                    let b = match form {
                        "r" => (*c.r()?).clone(),
                        "s" => c.r()?.inverse_flip()?,
                        _ => c.twisted(c.zetas.first().unwrap_or(&Scalar::one()))?,
                    };
                    let s = c.slice(c.degree)?;
                    let rep = axiom_equivalence(&b, &Comodule::fundamental(c.spec.n), side, &s)?;
                    let mut o = rep.outcome();
                    o.record(rep.yd.passed(), || {
                        format!("positive case failed: {}", rep.yd)
                    });
                    Ok(o)
                })();
                one(rec, r)
            }));
        }
    }
    for k in 0..3usize {
        for side in [Side::One, Side::Two] {
            ts.push(task(move |c| {
                let n = c.spec.n;
                let (row, col) = [(0, 0), (1, n + 1), (2, 3)][k];
                let rec = CheckRecord::new(
                    Suite::Yd,
                    format!("equivalence.negative.{k}.{side}"),
                    "compatibility iff restricted axioms",
                )
                .value("perturbation", format!("B00[{row},{col}] += {}", k + 1));
                let r = (|| {
                    let bad = c.r()?.perturbed(row, col, &Scalar::int(k as i64 + 1))?;
                    let s = c.slice(c.degree)?;
                    let rep = axiom_equivalence(&bad, &Comodule::fundamental(n), side, &s)?;
                    let mut o = rep.outcome();
                    o.record(!rep.yd.passed(), || "perturbed form passed".into());
                    Ok(o)
                })();
                one(rec, r)
            }));
        }
    }
    ts
}

fn classify_tasks(ctx: &Ctx) -> Vec<Task> {
    let mut ts: Vec<Task> = vec![
        task(|c| {
            let base = |id: &str, topic: &str| CheckRecord::new(Suite::Classify, id, topic);
            match classify_braid_solutions(&c.bundle) {
                Err(e) => vec![
                    base("braid.axes", "braid solutions in span{Rhat, Rhat^-1, I}").with_error(&e),
                ],
                Ok(cl) => {
                    let quad = cl.closure_quadratic.as_ref().map(|q| {
                        q.iter()
                            .enumerate()
                            .map(|(k, x)| format!("({x})u^{k}"))
                            .collect::<Vec<_>>()
                            .join(" + ")
                    });
                    let mut recs = vec![
                        base("braid.axes", "each axis is a braid solution")
                            .value("route", format!("{:?}", cl.route))
                            .value("solutions", cl.solutions.join("; "))
                            .with_outcome(&cl.axes),
                        base("braid.span_targets", "target cubics lie in the defect span")
                            .with_outcome(&cl.target_span),
                        base("braid.extra_line", "(1, -1, -lambda) is not a solution")
                            .with_outcome(&cl.extra_line),
                        base("braid.rational_points", "only the axes over Q(t)")
                            .with_outcome(&cl.rational_points),
                    ];
                    let mut cr = base("braid.closure_rays", "rays over the closure give no r-form")
                        .with_outcome(&cl.closure_rays_excluded);
                    if let Some(q) = quad {
                        cr = cr.value("quadratic", q);
                    }
                    recs.push(cr);
                    recs
                }
            }
        }),
        task(|c| {
            let rec = CheckRecord::new(
                Suite::Classify,
                "braid.inverted_q",
                "certificate after q -> q^-1",
            );
            one(
                rec,
                classify_braid_solutions(&inverted_bundle(&c.bundle)).map(|cl| {
                    let mut o = Outcome::new("inverted certificate");
                    o.record(cl.passed(), || cl.to_string());
                    o
                }),
            )
        }),
        task(|c| {
            let rec = CheckRecord::new(Suite::Classify, "z_constraint", "admissible scales z");
            match z_constraint(&c.bundle) {
                Err(e) => vec![rec.with_error(&e)],
                Ok(zc) => {
                    let expected = match c.spec.series {
                        Series::GL => ZConstraint::Free,
                        Series::SL => ZConstraint::Power {
                            power: c.spec.n,
                            value: c.spec.q_inv(),
                        },
                        Series::O | Series::Sp => ZConstraint::Power {
                            power: 2,
                            value: Scalar::one(),
                        },
                    };
                    let mut o = Outcome::new("z constraint");
                    o.record(zc == expected, || format!("got {zc}, expected {expected}"));
                    vec![rec.value("constraint", &zc).with_outcome(&o)]
                }
            }
        }),
        task(|c| {
            one(
                CheckRecord::new(Suite::Classify, "identity_ray", "zI gives no r-form"),
                identity_ray_excluded(&c.bundle),
            )
        }),
    ];
    if ctx.spec.series == Series::Sp && ctx.spec.n == 2 {
        ts.push(task(|c| {
            one(
                CheckRecord::new(Suite::Classify, "sp2_hecke", "q Rhat is Hecke at q^2"),
                sp2_delegation(&c.bundle),
            )
        }));
    }
    ts
}

fn bwm_tasks(_ctx: &Ctx) -> Vec<Task> {
    vec![task(|c| {
        let base = |id: &str, topic: &str| CheckRecord::new(Suite::Bwm, id, topic);
        let alg = match algebra_for(&c.spec) {
            Ok(a) => a,
            Err(e) => return vec![base("algebra", "abstract algebra").with_error(&e)],
        };
        let expected_dim = if alg.kind == AlgebraKind::Bwm3 { 15 } else { 6 };
        let mut dim = Outcome::new("dimension");
        dim.record(alg.dim() == expected_dim, || {
            format!("dimension {}", alg.dim())
        });
        let mut recs = vec![
            base("algebra.dimension", "dimension of the abstract algebra")
                .value("kind", format!("{:?}", alg.kind))
                .value("dimension", alg.dim())
                .with_outcome(&dim),
            base(
                "algebra.associativity",
                "associativity on all basis triples",
            )
            .with_outcome(&alg.certify_associativity()),
            base("algebra.relations", "defining relations").with_outcome(&alg.certify_relations()),
        ];
        if alg.kind == AlgebraKind::Bwm3 {
            let (a, b) = reduced_defect_identities(&alg);
            recs.push(
                base("algebra.defect_forms", "reduced forms of the braid defect")
                    .with_outcome(&Outcome::merge_all("defect forms", [a, b])),
            );
        }
        let (pi, mult) = match build_pi(&alg, &c.bundle) {
            Ok(x) => x,
            Err(e) => {
                recs.push(base("pi.multiplicative", "representation on V⊗V⊗V").with_error(&e));
                return recs;
            }
        };
        recs.push(base("pi.multiplicative", "representation on V⊗V⊗V").with_outcome(&mult));
        let rank = pi.rank();
        let mut ro = Outcome::new("rank");
        let expected = expected_centralizer_rank(&c.spec);
        if let Some(e) = expected {
            ro.record(rank == e, || format!("rank {rank}, expected {e}"));
        }
        recs.push(
            base("pi.rank", "dimension of the image")
                .value("rank", rank)
                .with_outcome(&ro),
        );
        if rank < alg.dim() {
            match kernel_relation(&pi) {
                Err(e) => recs.push(base("pi.kernel", "kernel relation").with_error(&e)),
                Ok(rel) => {
                    recs.push(
                        base("pi.kernel", "kernel relation").value(
                            "relation",
                            relation_text(&alg.labels, &rel)
                                .trim_end()
                                .replace('\n', "; "),
                        ),
                    );
                    if c.spec.series == Series::Sp && c.spec.n == 4 {
                        let reference: Vec<_> = if alg.kind == AlgebraKind::Bwm3 {
                            SP4_REFERENCE.to_vec()
                        } else {
                            hecke_part(&SP4_REFERENCE)
                        };
                        let mut o = Outcome::new("reference relation, term by term");
                        let mut rec = base(
                            "pi.kernel_reference",
                            "kernel relation against the reference transcription",
                        );
                        match compare_relation(&alg.labels, &rel, &reference, c.spec.q_exp) {
                            Err(e) => rec = rec.with_error(&e),
                            Ok(cmp) => {
                                let mut counts = [0usize; 3];
                                for t in &cmp {
                                    match &t.status {
                                        TermStatus::Match => counts[0] += 1,
                                        TermStatus::Differs { reference } => {
                                            counts[1] += 1;
                                            o.fail(format!(
                                                "{}: computed {} reference {reference}",
                                                t.label, t.computed
                                            ));
                                        }
                                        TermStatus::Unreadable => counts[2] += 1,
                                    }
                                }
                                rec = rec
                                    .value("match", counts[0])
                                    .value("differ", counts[1])
                                    .value("unreadable", counts[2])
                                    .with_outcome(&o);
                            }
                        }
                        recs.push(rec);
                    }
                }
            }
        }
        recs
    })]
}

fn functionals_tasks(ctx: &Ctx) -> Vec<Task> {
    let mut ts: Vec<Task> = vec![
        task(|c| {
            let rec = CheckRecord::new(
                Suite::Functionals,
                "inverse_pairs",
                "fbar * f = counit for r and s",
            );
            let r = (|| {
                let four = FourFunctionals::new(&*c.r()?)?;
                Ok(Outcome::merge_all(
                    "inverse pairs",
                    [
                        inverse_pair_check(&four.f_r, &four.fbar_r)?,
                        inverse_pair_check(&four.f_s, &four.fbar_s)?,
                    ],
                ))
            })();
            one(rec, r)
        }),
        task(|c| {
            let rec = CheckRecord::new(
                Suite::Functionals,
                "twisted_multiplication",
                "f∘m twisted by r21*r is f⊗f",
            );
            one(
                rec,
                c.r()
                    .and_then(|r| twisted_product_check(&r, (c.degree + 1).min(MAX_DEGREE))),
            )
        }),
        task(|c| {
            let rec = CheckRecord::new(
                Suite::Functionals,
                "commutation_centrality_s4",
                "commutation, central z, character g, S^4",
            );
            one(
                rec,
                c.slice(2.min(c.degree))
                    .and_then(|s| functional_identities(&*c.r()?, &s)),
            )
        }),
        task(|c| {
            let rec = CheckRecord::new(
                Suite::Functionals,
                "s2_pair",
                "S^2 conjugation matrices are inverse",
            );
            let r = (|| {
                let (a, b) = s2_matrix(&*c.r()?)?;
                let mut o = Outcome::new("S^2 data");
                o.record(a.mul(&b) == QMatrix::identity(vec![c.spec.n]), || {
                    "gen(fbar) gen(f) != I".into()
                });
                Ok(o)
            })();
            one(rec, r)
        }),
    ];
    let mut forms: Vec<(String, Option<Scalar>)> = vec![("r_z".into(), None), ("s_z".into(), None)];
    let mut zs = vec![Scalar::one()];
    zs.extend(ctx.zetas.iter().cloned());
    if ctx.spec.series == Series::GL {
        zs.push(ctx.spec.q.clone());
    }
    zs.dedup();
    forms.extend(
        zs.into_iter()
            .map(|z| (format!("c_zeta[zeta={z}]"), Some(z))),
    );
    for (name, zeta) in forms {
        ts.push(task(move |c| {
            let rec = CheckRecord::new(
                Suite::Functionals,
                format!("character_iff_cotriangular.{name}"),
                "f is a character iff cotriangular",
            );
            let r = (|| {
                let b = match (&zeta, name.as_str()) {
                    (Some(z), _) => Bicharacter::from_b00(
                        &c.spec,
                        QMatrix::identity(vec![c.spec.n, c.spec.n]).scale(z),
                        name.clone(),
                    )?,
                    (None, "r_z") => (*c.r()?).clone(),
                    _ => c.r()?.inverse_flip()?,
                };
                cotriangular_consistency(&b)
            })();
            match r {
                Err(e) => vec![rec.with_error(&e)],
                Ok((ch, co)) => {
                    let mut o = Outcome::new("biconditional");
                    o.record(ch == co, || format!("character {ch}, cotriangular {co}"));
                    vec![rec
                        .value("character", ch)
                        .value("cotriangular", co)
                        .with_outcome(&o)]
                }
            }
        }));
    }
    ts
}

fn modular_tasks(_ctx: &Ctx) -> Vec<Task> {
    vec![task(|c| {
        let rec = CheckRecord::new(
            Suite::Modular,
            "modular_matrix",
            "F_r against the trace-balanced modular matrix",
        );
        match modular_compare(&c.bundle, &c.z, &c.zetas) {
            Err(e) => vec![rec.with_error(&e)],
            Ok(m) => {
                let diag: Vec<String> = (0..c.spec.n)
                    .map(|i| m.big_f.get(i, i).to_string())
                    .collect();
                vec![rec
                    .value(
                        "orientation",
                        m.orientation.map_or("none".into(), |o| o.to_string()),
                    )
                    .value("ambiguous", m.ambiguous)
                    .value("F_r_diagonal", diag.join(", "))
                    .value("c_squared", &m.modular.c_squared)
                    .with_outcome(&m.checks)]
            }
        }
    })]
}

fn toy_tasks(_ctx: &Ctx) -> Vec<Task> {
    ["3/2", "-1", "q"]
        .into_iter()
        .map(|src| {
            task(move |_c| {
                let rec = CheckRecord::new(
                    Suite::Toy,
                    format!("integers.lambda={src}"),
                    "group algebra of Z",
                );
                let r = Scalar::parse(src, 2).and_then(|l| toy_functionals(&l, 8));
                match r {
                    Err(e) => vec![rec.with_error(&e)],
                    Ok(rep) => {
                        let mut o = rep.checks.clone();
                        o.record(rep.sigma_is_global(), || {
                            "no single sign in the cross term".into()
                        });
                        o.record(rep.character_iff_cotriangular(), || {
                            "character, cotriangular and lambda^2 = 1 disagree".into()
                        });
                        let sigma: Vec<String> = rep.sigma.iter().map(|s| s.to_string()).collect();
                        vec![rec
                            .value(
                                "f_r_exponent_sign",
                                rep.f_r_sign.map_or("none".into(), |s| s.to_string()),
                            )
                            .value("sigma", sigma.join(","))
                            .value("character", rep.character)
                            .value("cotriangular", rep.cotriangular)
                            .with_outcome(&o)]
                    }
                }
            })
        })
        .collect()
}

/// Validates the configuration and builds the shared state.
fn context(cfg: &RunConfig) -> Result<Ctx> {
    if cfg.degree == 0 || cfg.degree > MAX_DEGREE {
        return Err(Error::Inadmissible(format!(
            "degree must be in 1..={MAX_DEGREE}, got {}",
            cfg.degree
        )));
    }
    let spec = build_series(cfg.series, cfg.n)?;
    let bundle = build_rmatrix(&spec)?;
    let z = match &cfg.z {
        Some(src) => spec.parse(src)?,
        None => default_z(&spec)?,
    };
    crate::bichar::check_z(&spec, &z)?;
    let zetas: Vec<Scalar> = if cfg.zetas.is_empty() {
        let minus = Scalar::int(-1);
        if crate::bichar::check_zeta(&spec, &minus).is_ok() {
            vec![minus]
        } else {
            vec![Scalar::one()]
        }
    } else {
        cfg.zetas
            .iter()
            .map(|s| spec.parse(s))
            .collect::<Result<_>>()?
    };
    for zeta in &zetas {
        crate::bichar::check_zeta(&spec, zeta)?;
    }
    Ok(Ctx {
        spec,
        bundle,
        z,
        zetas,
        degree: cfg.degree,
        t0: cfg.t0,
        slices: Default::default(),
        rform: OnceLock::new(),
    })
}

/// Runs the selected suites. Errors are configuration errors; failures and
/// resource bounds inside checks are recorded in the report.
pub fn run(cfg: &RunConfig) -> Result<Report> {
    let ctx = context(cfg)?;
    let mut suites = cfg.suites.clone();
    suites.sort();
    suites.dedup();
    let header = Header {
        record: "header".into(),
        schema: SCHEMA.into(),
        version: SCHEMA_VERSION,
        series: cfg.series.to_string(),
        n: cfg.n,
        q: format!("t^{}", ctx.spec.q_exp),
        z: ctx.z.to_string(),
        zetas: ctx.zetas.iter().map(|z| z.to_string()).collect(),
        degree: cfg.degree,
        suites: suites.clone(),
        t0: cfg.t0.map(|(a, b)| format!("{a}/{b}")),
    };
    let mut tasks: Vec<Task> = Vec::new();
    for s in &suites {
        tasks.extend(match s {
            Suite::Axioms => axioms_tasks(&ctx),
            Suite::Yd => yd_tasks(&ctx),
            Suite::Classify => classify_tasks(&ctx),
            Suite::Bwm => bwm_tasks(&ctx),
            Suite::Functionals => functionals_tasks(&ctx),
            Suite::Modular => modular_tasks(&ctx),
            Suite::Toy => toy_tasks(&ctx),
        });
    }
    let timings = cfg.timings;
    let exec = |t: &Task| {
        let start = Instant::now();
        let mut recs = t(&ctx);
        if timings {
            let ms = start.elapsed().as_millis() as u64;
            for r in &mut recs {
                r.wall_time_ms = Some(ms);
            }
        }
        recs
    };
    let threads = cfg.threads.max(1);
    let results: Vec<Vec<CheckRecord>> = if threads == 1 {
        tasks.iter().map(exec).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::ResourceBound(format!("thread pool: {e}")))?;
        pool.install(|| tasks.par_iter().map(exec).collect())
    };
    Ok(Report {
        header,
        checks: results.into_iter().flatten().collect(),
    })
}

/// Exit status for a library error raised before any check ran.
pub fn error_exit_code(e: &Error) -> i32 {
    match e {
        Error::ResourceBound(_) => 3,
        _ => 2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_parse() {
        assert_eq!(
            parse_suites("toy,axioms,toy").unwrap(),
            vec![Suite::Axioms, Suite::Toy]
        );
        assert_eq!(parse_suites("all").unwrap().len(), 7);
        assert!(parse_suites("nope").is_err());
        assert_eq!(parse_rational("3/-2").unwrap(), (-3, 2));
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn toy_only_run_roundtrips() {
        let mut cfg = RunConfig::new(Series::GL, 2);
        cfg.suites = vec![Suite::Toy];
        let rep = run(&cfg).unwrap();
        assert_eq!(rep.checks.len(), 3);
        assert_eq!(rep.exit_code(), 0);
        let text = rep.to_jsonl();
        let back = Report::parse(&text).unwrap();
        assert_eq!(back, rep);
        assert!(report_diff(&rep, &back).unwrap().is_empty());
    }

    #[test]
    fn bad_config_is_rejected() {
        let mut cfg = RunConfig::new(Series::O, 3);
        cfg.z = Some("2".into());
        assert!(matches!(run(&cfg), Err(Error::Inadmissible(_))));
        cfg.z = None;
        cfg.degree = 4;
        assert!(run(&cfg).is_err());
    }

    #[test]
    fn diff_reports_changes() {
        let mut cfg = RunConfig::new(Series::GL, 2);
        cfg.suites = vec![Suite::Toy];
        let a = run(&cfg).unwrap();
        let mut b = a.clone();
        b.checks[0].status = Status::Fail;
        b.checks.pop();
        let d = report_diff(&a, &b).unwrap();
        assert_eq!(d.len(), 2, "{d:?}");
    }
}
