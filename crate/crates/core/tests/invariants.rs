//! Property tests over random exact inputs.

use proptest::prelude::*;

use rforms::bichar::{check_cqt, make_rform};
use rforms::functionals::{modular_compare, twisted_product_check};
use rforms::ideal::build_relation_slice;
use rforms::linalg::inverse;
use rforms::matrix::QMatrix;
use rforms::rmatrix::build_rmatrix;
use rforms::scalar::Scalar;
use rforms::toy::toy_rform;
use rforms::verify::{parse_rational, report_diff, run, Report, RunConfig, Suite};
use rforms::{build_series, Series};

/// (a t^i + b) / (c t^j + d) with a nonzero denominator.
fn scalar() -> impl Strategy<Value = Scalar> {
    (-5i64..=5, 0i64..4, -5i64..=5, 1i64..=5, 0i64..4, 1i64..=5).prop_map(|(a, i, b, c, j, d)| {
        let num = &(&Scalar::int(a) * &Scalar::t_pow(i)) + &Scalar::int(b);
        let den = &(&Scalar::int(c) * &Scalar::t_pow(j)) + &Scalar::int(d);
        &num / &den
    })
}

fn nonzero_scalar() -> impl Strategy<Value = Scalar> {
    scalar().prop_filter("nonzero", |s| !s.is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_laws(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert!((&(&a - &b) + &b) == a);
        if !b.is_zero() {
            prop_assert_eq!(&(&a / &b) * &b, a.clone());
        }
    }

    #[test]
    fn printing_roundtrips(a in scalar()) {
        prop_assert_eq!(Scalar::parse(&a.to_string(), 2).unwrap(), a);
    }

    #[test]
    fn specialization_is_a_homomorphism(a in scalar(), b in scalar(), p in 2i64..7, q in 1i64..5) {
        let at = |s: &Scalar| s.specialize((p, q));
        if let (Some(x), Some(y), Some(z)) = (at(&a), at(&b), at(&(&a * &b))) {
            prop_assert_eq!(&x * &y, z);
        }
    }

    #[test]
    fn inverse_of_unitriangular_product(entries in proptest::collection::vec(scalar(), 6)) {
        // L U with unit diagonals is invertible
        let mut l = QMatrix::identity_n(3);
        let mut u = QMatrix::identity_n(3);
        l.set(1, 0, entries[0].clone());
        l.set(2, 0, entries[1].clone());
        l.set(2, 1, entries[2].clone());
        u.set(0, 1, entries[3].clone());
        u.set(0, 2, entries[4].clone());
        u.set(1, 2, entries[5].clone());
        let m = l.mul(&u);
        let inv = inverse(&m).unwrap();
        prop_assert_eq!(m.mul(&inv), QMatrix::identity_n(3));
    }

    #[test]
    fn toy_form_is_a_bicharacter(lambda in nonzero_scalar(), n in -4i64..=4, m in -4i64..=4, k in -4i64..=4) {
        let f = toy_rform(lambda).unwrap();
        prop_assert_eq!(f.r(n + m, k), &f.r(n, k) * &f.r(m, k));
        prop_assert!((&f.r(n, m) * &f.rbar(n, m)).is_one());
        prop_assert!(f.big_f(n).is_one());
    }

    #[test]
    fn rational_parsing(a in -1000i64..1000, b in 1i64..1000) {
        prop_assert_eq!(parse_rational(&format!("{a}/{b}")).unwrap(), (a, b));
        prop_assert_eq!(parse_rational(&format!("{a}/-{b}")).unwrap(), (-a, b));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    /// Any nonzero scale gives an r-form on GL(2), and F_r does not see it.
    #[test]
    fn gl2_scales(z in nonzero_scalar()) {
        let spec = build_series(Series::GL, 2).unwrap();
        let bundle = build_rmatrix(&spec).unwrap();
        let r = make_rform(&bundle, &z).unwrap();
        let slice = build_relation_slice(&bundle, 2).unwrap();
        prop_assert!(check_cqt(&r, &slice, 2).passed());
        prop_assert!(twisted_product_check(&r, 3).unwrap().passed());
        let m = modular_compare(&bundle, &z, &[Scalar::int(-1)]).unwrap();
        let reference = modular_compare(&bundle, &Scalar::one(), &[]).unwrap();
        prop_assert_eq!(m.big_f, reference.big_f);
    }

    #[test]
    fn reports_roundtrip_and_diff_is_symmetric(threads in 1usize..4, flip in 0usize..3) {
        let mut cfg = RunConfig::new(Series::SL, 2);
        cfg.suites = vec![Suite::Toy, Suite::Modular];
        cfg.threads = threads;
        let a = run(&cfg).unwrap();
        let back = Report::parse(&a.to_jsonl()).unwrap();
        prop_assert_eq!(&back, &a);
        let mut b = a.clone();
        b.checks[flip].values.insert("extra".into(), "1".into());
        b.checks.reverse();
        prop_assert_eq!(report_diff(&a, &b).unwrap().len(), 1);
        prop_assert_eq!(report_diff(&b, &a).unwrap().len(), 1);
    }
}
