//! One line per acceptance criterion, written straight to stdout so it shows
//! up in captured test output. The test asserts the exact set of criteria
//! that fail; a known unattainable item stays visible as FAIL.

use std::collections::BTreeSet;
use std::io::Write;
use std::process::Command;
use std::sync::OnceLock;

use rforms::bichar::{check_zeta, default_z};
use rforms::bwm::{algebra_for, build_pi, kernel_relation, relation_text};
use rforms::functionals::{modular_compare, Orientation};
use rforms::rmatrix::build_rmatrix;
use rforms::scalar::Scalar;
use rforms::toy::toy_functionals;
use rforms::verify::{run, CheckRecord, Report, RunConfig, Status, Suite};
use rforms::{build_series, Series};

const SPECS: [(Series, usize); 9] = [
    (Series::GL, 2),
    (Series::GL, 3),
    (Series::SL, 2),
    (Series::SL, 3),
    (Series::O, 3),
    (Series::O, 4),
    (Series::Sp, 2),
    (Series::Sp, 4),
    (Series::Sp, 6),
];

/// Criteria expected to fail. 5: the target cubics are not in the
/// defect span for O/Sp (the replacement certificate passes).
const KNOWN_FAILURES: [usize; 1] = [5];

fn reports() -> &'static Vec<Report> {
    static R: OnceLock<Vec<Report>> = OnceLock::new();
    R.get_or_init(|| {
        SPECS
            .iter()
            .map(|&(s, n)| {
                let mut cfg = RunConfig::new(s, n);
                cfg.threads = 4;
                run(&cfg).unwrap()
            })
            .collect()
    })
}

fn label(r: &Report) -> String {
    format!("{}{}", r.header.series, r.header.n)
}

fn rec<'a>(r: &'a Report, suite: Suite, id: &str) -> Option<&'a CheckRecord> {
    r.checks.iter().find(|c| c.suite == suite && c.id == id)
}

struct Line {
    ok: bool,
    notes: Vec<String>,
}

impl Line {
    fn new() -> Self {
        Line {
            ok: true,
            notes: Vec::new(),
        }
    }

    fn need(&mut self, cond: bool, note: impl FnOnce() -> String) {
        if !cond {
            self.ok = false;
            self.notes.push(note());
        }
    }

    /// Every record whose id starts with `prefix` passes, and there is at least one.
    fn all_pass(&mut self, r: &Report, suite: Suite, prefix: &str) -> usize {
        let hits: Vec<_> = r
            .checks
            .iter()
            .filter(|c| c.suite == suite && c.id.starts_with(prefix))
            .collect();
        self.need(!hits.is_empty(), || {
            format!("{}: no {prefix} records", label(r))
        });
        for c in &hits {
            self.need(c.status == Status::Pass, || {
                format!(
                    "{}: {} {:?} {}",
                    label(r),
                    c.id,
                    c.status,
                    c.witness.clone().unwrap_or_default()
                )
            });
        }
        hits.len()
    }
}

fn criterion1() -> Line {
    let mut l = Line::new();
    for r in reports() {
        for id in ["rmatrix.ybe", "rmatrix.braid", "rmatrix.minimal_polynomial"] {
            l.all_pass(r, Suite::Axioms, id);
        }
    }
    l
}

fn criterion2() -> Line {
    let mut l = Line::new();
    for r in reports() {
        for id in ["cqt.r", "cqt.s", "cqt.c_zeta*r", "cqt.perturbed"] {
            l.all_pass(r, Suite::Axioms, id);
        }
        let w = rec(r, Suite::Axioms, "cqt.perturbed")
            .and_then(|c| c.values.get("witness_of_perturbed").cloned());
        l.need(w.is_some_and(|w| !w.is_empty()), || {
            format!("{}: no perturbation witness", label(r))
        });
    }
    l
}

fn criterion3() -> Line {
    let mut l = Line::new();
    for r in reports() {
        l.all_pass(r, Suite::Yd, "yd.");
        let pos = l.all_pass(r, Suite::Yd, "equivalence.positive");
        let neg = l.all_pass(r, Suite::Yd, "equivalence.negative");
        l.need(pos >= 3 && neg >= 3, || {
            format!("{}: {pos} positive, {neg} negative cases", label(r))
        });
    }
    l
}

fn criterion4() -> Line {
    let mut l = Line::new();
    for r in reports() {
        let name = label(r);
        let bwm = matches!(
            (r.header.series.as_str(), r.header.n),
            ("O", _) | ("Sp", 4) | ("Sp", 6)
        );
        let (dim, triples) = if bwm { ("15", 3375) } else { ("6", 216) };
        let d = rec(r, Suite::Bwm, "algebra.dimension");
        l.need(
            d.and_then(|c| c.values.get("dimension"))
                .map(String::as_str)
                == Some(dim),
            || format!("{name}: dimension"),
        );
        let a = rec(r, Suite::Bwm, "algebra.associativity");
        l.need(
            a.is_some_and(|c| c.status == Status::Pass && c.checked == triples),
            || format!("{name}: associativity"),
        );
        for id in ["algebra.relations", "pi.multiplicative", "pi.rank"] {
            l.all_pass(r, Suite::Bwm, id);
        }
        if bwm {
            l.all_pass(r, Suite::Bwm, "algebra.defect_forms");
        }
    }
    let ranks: Vec<String> = reports()
        .iter()
        .map(|r| {
            format!(
                "{}={}",
                label(r),
                rec(r, Suite::Bwm, "pi.rank")
                    .and_then(|c| c.values.get("rank"))
                    .cloned()
                    .unwrap_or_default()
            )
        })
        .collect();
    l.notes.push(format!("ranks {}", ranks.join(" ")));

    // Sp4 kernel against the frozen golden
    let spec = build_series(Series::Sp, 4).unwrap();
    let alg = algebra_for(&spec).unwrap();
    let (pi, _) = build_pi(&alg, &build_rmatrix(&spec).unwrap()).unwrap();
    let text = relation_text(&alg.labels, &kernel_relation(&pi).unwrap());
    l.need(text == include_str!("golden/sp4_bwm_relation.txt"), || {
        "Sp4 kernel differs from golden".into()
    });

    let sp4 = &reports()[7];
    if let Some(c) = rec(sp4, Suite::Bwm, "pi.kernel_reference") {
        l.notes.push(format!(
            "Sp4 vs reference relation: {} match, {} differ, {} unreadable",
            c.values["match"], c.values["differ"], c.values["unreadable"]
        ));
    }
    l
}

fn criterion5() -> Line {
    let mut l = Line::new();
    for r in reports() {
        for c in r.checks.iter().filter(|c| c.suite == Suite::Classify) {
            l.need(c.status == Status::Pass, || {
                format!(
                    "{}: {} {}",
                    label(r),
                    c.id,
                    c.witness.clone().unwrap_or_default()
                )
            });
        }
        let zc = rec(r, Suite::Classify, "z_constraint")
            .and_then(|c| c.values.get("constraint").cloned())
            .unwrap_or_default();
        l.notes.push(format!("{} {zc}", label(r)));
    }
    let certificate = reports().iter().all(|r| {
        [
            "braid.axes",
            "braid.extra_line",
            "braid.rational_points",
            "braid.closure_rays",
            "braid.inverted_q",
            "identity_ray",
        ]
        .iter()
        .all(|id| rec(r, Suite::Classify, id).is_some_and(|c| c.status == Status::Pass))
    });
    l.notes.push(format!(
        "replacement certificate {}",
        if certificate { "passes" } else { "FAILS" }
    ));
    l
}

fn criterion6() -> Line {
    let mut l = Line::new();
    for r in reports() {
        l.all_pass(r, Suite::Functionals, "");
    }
    l
}

fn criterion7() -> Line {
    let mut l = Line::new();
    let mut golden = String::new();
    for &(s, n) in &SPECS {
        let spec = build_series(s, n).unwrap();
        let bundle = build_rmatrix(&spec).unwrap();
        let m = modular_compare(&bundle, &default_z(&spec).unwrap(), &zetas(&spec)).unwrap();
        l.need(m.checks.passed(), || {
            format!("{}: {}", spec.label(), m.checks)
        });
        l.need(
            m.orientation == Some(Orientation::Minus) && !m.ambiguous,
            || format!("{}: orientation", spec.label()),
        );
        golden.push_str(&m.golden_text());
    }
    l.need(golden == include_str!("golden/modular.txt"), || {
        "modular golden differs".into()
    });
    for r in reports() {
        l.all_pass(r, Suite::Modular, "modular_matrix");
    }
    l
}

fn criterion8() -> Line {
    let mut l = Line::new();
    let q = Scalar::t_pow(2);
    for lambda in [Scalar::ratio(3, 2), Scalar::int(-1), q] {
        let rep = toy_functionals(&lambda, 8).unwrap();
        l.need(rep.checks.passed(), || rep.to_string());
        l.need(
            rep.sigma_is_global() && rep.character_iff_cotriangular(),
            || rep.to_string(),
        );
        l.notes
            .push(format!("lambda={}: sigma {:?}", rep.lambda, rep.sigma));
    }
    for r in reports() {
        l.all_pass(r, Suite::Toy, "integers");
    }
    l
}

fn criterion9() -> Line {
    let mut l = Line::new();
    let bin = env!("CARGO_BIN_EXE_rforms");
    let go = |threads: &str, t0: Option<&str>| {
        let mut c = Command::new(bin);
        c.args([
            "verify",
            "--series",
            "sl",
            "--n",
            "2",
            "--suites",
            "axioms,classify,functionals",
            "--threads",
            threads,
        ]);
        if let Some(t) = t0 {
            c.args(["--t0", t]);
        }
        c.output().unwrap()
    };
    let a = go("1", None);
    let b = go("4", None);
    l.need(a.stdout == b.stdout && !a.stdout.is_empty(), || {
        "reports differ across runs".into()
    });
    l.need(a.status.code() == Some(0), || {
        format!("exit {:?}", a.status.code())
    });
    // t = 1 makes lambda vanish; t = 0 is a pole
    for t0 in ["1", "0", "3/2"] {
        let c = go("2", Some(t0));
        let strip = |o: &[u8]| {
            let rep = Report::parse(std::str::from_utf8(o).unwrap()).unwrap();
            rep.checks
                .iter()
                .map(|c| (c.id.clone(), c.status))
                .collect::<Vec<_>>()
        };
        l.need(
            strip(&c.stdout) == strip(&a.stdout) && c.status.code() == a.status.code(),
            || format!("t0={t0} changed a verdict"),
        );
        let pre: BTreeSet<String> = Report::parse(std::str::from_utf8(&c.stdout).unwrap())
            .unwrap()
            .checks
            .iter()
            .filter_map(|c| c.precheck.clone())
            .collect();
        l.notes.push(format!("t0={t0} precheck {pre:?}"));
    }
    l
}

type Criterion = (usize, &'static str, fn() -> Line);

#[test]
fn acceptance() {
    let criteria: [Criterion; 9] = [
        (1, "YBE, braid relation, minimal polynomial", criterion1),
        (
            2,
            "r-form axioms at degree 2 with a perturbation witness",
            criterion2,
        ),
        (
            3,
            "Yetter-Drinfeld modules and the equivalence test",
            criterion3,
        ),
        (
            4,
            "three-strand algebra, representation ranks, Sp4 kernel",
            criterion4,
        ),
        (
            5,
            "braid-solution classification and z constraints",
            criterion5,
        ),
        (6, "functional calculus", criterion6),
        (7, "F_r against the modular matrix", criterion7),
        (8, "group algebra of Z", criterion8),
        (9, "determinism and the numeric pre-check", criterion9),
    ];
    let mut out = std::io::stdout().lock();
    writeln!(out).unwrap();
    let mut failed = BTreeSet::new();
    for (k, title, f) in criteria {
        let line = f();
        if !line.ok {
            failed.insert(k);
        }
        let verdict = if line.ok { "PASS" } else { "FAIL" };
        writeln!(out, "criterion {k} {verdict}: {title}").unwrap();
        for note in &line.notes {
            writeln!(out, "    {note}").unwrap();
        }
    }
    out.flush().unwrap();
    assert_eq!(
        failed,
        BTreeSet::from(KNOWN_FAILURES),
        "unexpected set of failing criteria"
    );
}

fn zetas(spec: &rforms::SeriesSpec) -> Vec<Scalar> {
    [Scalar::int(-1), Scalar::one()]
        .into_iter()
        .filter(|z| check_zeta(spec, z).is_ok())
        .collect()
}
