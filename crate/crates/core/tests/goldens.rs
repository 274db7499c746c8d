//! Byte-exact goldens. Run with `RFORMS_BLESS=1` to rewrite them.

use std::path::PathBuf;

use rforms::bichar::{check_zeta, default_z};
use rforms::bwm::{algebra_for, build_pi, kernel_relation, relation_text};
use rforms::functionals::modular_compare;
use rforms::rmatrix::build_rmatrix;
use rforms::scalar::Scalar;
use rforms::{build_series, Series};

fn check(name: &str, actual: &str) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    if std::env::var_os("RFORMS_BLESS").is_some() {
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path).unwrap();
    assert_eq!(actual, expected, "golden {name} differs");
}

#[test]
fn modular_diagonals() {
    let specs = [
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
    let mut text = String::new();
    for (s, n) in specs {
        let spec = build_series(s, n).unwrap();
        let bundle = build_rmatrix(&spec).unwrap();
        let m = modular_compare(&bundle, &default_z(&spec).unwrap(), &zetas(&spec)).unwrap();
        assert!(m.checks.passed(), "{}", m.checks);
        text.push_str(&m.golden_text());
    }
    check("modular.txt", &text);
}

#[test]
fn sp4_kernel_relation() {
    let spec = build_series(Series::Sp, 4).unwrap();
    let alg = algebra_for(&spec).unwrap();
    let (pi, mult) = build_pi(&alg, &build_rmatrix(&spec).unwrap()).unwrap();
    assert!(mult.passed());
    assert_eq!(pi.rank(), 14);
    check(
        "sp4_bwm_relation.txt",
        &relation_text(&alg.labels, &kernel_relation(&pi).unwrap()),
    );
}

fn zetas(spec: &rforms::SeriesSpec) -> Vec<Scalar> {
    [Scalar::int(-1), Scalar::one()]
        .into_iter()
        .filter(|z| check_zeta(spec, z).is_ok())
        .collect()
}
