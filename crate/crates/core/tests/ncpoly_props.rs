use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use qsl2r::ncpoly::{
    hopf_symbolic_check, identity_coefficients, lemma_check, lemma_check_with, parse_expr, pbw_normal_form,
    substitute_j, HopfKind, Letter, NcPoly, QCoeff,
};

fn letter(with_j: bool) -> impl Strategy<Value = Letter> {
    let mut pool = vec![Letter::X, Letter::Y, Letter::Z, Letter::Zinv];
    if with_j {
        pool.push(Letter::J);
    }
    prop::sample::select(pool)
}

fn coeff() -> impl Strategy<Value = QCoeff> {
    (-6i64..=6, 1i64..=4, -4i64..=4).prop_filter_map("nonzero", |(n, d, k)| {
        (n != 0).then(|| QCoeff::monomial(BigRational::new(BigInt::from(n), BigInt::from(d)), k))
    })
}

fn poly(max_len: usize, with_j: bool) -> impl Strategy<Value = NcPoly> {
    prop::collection::vec((coeff(), prop::collection::vec(letter(with_j), 0..=max_len)), 1..4).prop_map(|terms| {
        terms
            .into_iter()
            .fold(NcPoly::zero(), |acc, (c, w)| &acc + &NcPoly::monomial(c, &w))
    })
}

fn nf(p: &NcPoly) -> NcPoly {
    pbw_normal_form(p).expect("short words")
}

fn e(src: &str) -> NcPoly {
    parse_expr(src).unwrap()
}

fn is_ordered(p: &NcPoly) -> bool {
    let rank = |l: &Letter| match l {
        Letter::Y => 0,
        Letter::X => 1,
        _ => 2,
    };
    p.terms().all(|(w, _)| {
        w.windows(2)
            .all(|pair| rank(&pair[0]) <= rank(&pair[1]) && !(rank(&pair[0]) == 2 && pair[0] != pair[1]))
    })
}

#[test]
fn pbw_examples() {
    assert_eq!(nf(&e("Z*X")), e("q^-2*X*Z"));
    assert_eq!(nf(&e("X*Y")), e("q^2*Y*X + q/(q - q^-1)*(Z*Z - 1)"));
    assert!(nf(&e("q^-1*X*Y - q*Y*X - (Z*Z - 1)/(q - q^-1)")).is_zero());
    assert!(pbw_normal_form(&e("J")).is_err());
}

#[test]
fn defining_relations_vanish() {
    for rel in [
        "Z*X - q^-2*X*Z",
        "Z*Y - q^2*Y*Z",
        "Zi*X - q^2*X*Zi",
        "Zi*Y - q^-2*Y*Zi",
        "Z*Zi - 1",
        "Zi*Z - 1",
        "q^-1*X*Y - q*Y*X - (Z*Z - 1)/(q - q^-1)",
    ] {
        assert!(nf(&e(rel)).is_zero(), "{rel}");
    }
}

#[test]
fn arithmetic_examples() {
    assert!((&NcPoly::letter(Letter::Z) * &NcPoly::letter(Letter::Zinv)) == NcPoly::one());
    assert_eq!(&NcPoly::letter(Letter::X) * &NcPoly::letter(Letter::Y), NcPoly::word(&[Letter::X, Letter::Y]));
    assert_eq!(&NcPoly::letter(Letter::J) + &NcPoly::zero(), NcPoly::letter(Letter::J));
}

#[test]
fn j_substitution_examples() {
    assert_eq!(substitute_j(&e("J")), e("q*X*Zi - q^-1*Y*Zi"));
    assert_eq!(substitute_j(&NcPoly::one()), NcPoly::one());
    assert_eq!(substitute_j(&e("J*Z")), e("q*X - q^-1*Y"));
}

#[test]
fn proof_replay() {
    let exp = identity_coefficients();
    assert!(exp.passed());
    assert_eq!(exp.contracts.len() + exp.modulo_relations.len(), 13);
    let cert = lemma_check().unwrap();
    assert!(cert.passed() && cert.residual.is_zero());
    assert!(cert.z_powers.iter().map(|z| z.k).eq(1..=5));
}

#[test]
fn lemma_mutations_fail() {
    let mutants = [
        "Z*J*J*J*Z - (q + q^-1)^2*Z*J*Z - (q + q^-1)^2*J - J*Z*J*Z*J",
        "Z*J*J*J*Z + (q + q^-1)^2*Z*J*Z + (q + q^-1)^2*J - J*Z*J*Z*J",
        "Z*J*J*J*Z - (q + q^-1)^2*Z*J*Z + (q + q^-1)^2*J + J*Z*J*Z*J",
        "-Z*J*J*J*Z - (q + q^-1)^2*Z*J*Z + (q + q^-1)^2*J - J*Z*J*Z*J",
    ];
    for m in mutants {
        let cert = lemma_check_with(&e(m)).unwrap();
        assert!(!cert.passed() && !cert.residual.is_zero(), "{m}");
    }
}

#[test]
fn hopf_checks() {
    for kind in HopfKind::ALL {
        let r = hopf_symbolic_check(kind).unwrap();
        assert!(r.passed, "{kind}: {:?}", r.residuals);
    }
}

proptest! {
    #[test]
    fn normal_form_is_idempotent(p in poly(6, false)) {
        let once = nf(&p);
        prop_assert!(is_ordered(&once));
        prop_assert_eq!(nf(&once), once);
    }

    #[test]
    fn ordered_monomials_are_fixed(a in 0usize..4, b in 0usize..4, c in -3i32..4, k in coeff()) {
        let mut w = vec![Letter::Y; a];
        w.extend(std::iter::repeat_n(Letter::X, b));
        let zl = if c >= 0 { Letter::Z } else { Letter::Zinv };
        w.extend(std::iter::repeat_n(zl, c.unsigned_abs() as usize));
        let m = NcPoly::monomial(k, &w);
        prop_assert_eq!(nf(&m), m);
    }

    #[test]
    fn print_parse_round_trip(p in poly(5, true)) {
        let text = p.to_string();
        prop_assert_eq!(parse_expr(&text).unwrap(), p, "{}", text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn normal_form_respects_products(a in poly(6, false), b in poly(6, false)) {
        let direct = nf(&(&a * &b));
        let staged = nf(&(&nf(&a) * &nf(&b)));
        prop_assert_eq!(direct, staged);
    }
}
