use std::f64::consts::PI;

use num_complex::Complex64;
use qsl2r::matrix::Matrix;
use qsl2r::reps::{
    build_family1, build_family2, coassociativity_check, delta_j_check, intersection_check, j_matrix, recover_xy,
    rep_from_json, rep_to_json, tensor_rep, verify_relations, Family1Params, Family2Params, RelationKind,
    Representation, Sign,
};
use qsl2r::scalar::{RootContext, Tolerance};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type C = Complex64;

fn grid() -> Vec<(u32, u32)> {
    [3u32, 5, 7, 9]
        .into_iter()
        .flat_map(|q| (1..q).filter(move |p| num_integer::gcd(*p, q) == 1).map(move |p| (p, q)))
        .collect()
}

fn f1(p: u32, q: u32, r: u32, sign: Sign) -> Representation {
    build_family1(&RootContext::new(p, q).unwrap(), Family1Params { r, sign }).unwrap()
}

fn random_family2(rng: &mut ChaCha8Rng) -> Family2Params {
    let mut c = || C::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
    let mut lambda = c();
    while lambda.norm() < 0.3 {
        lambda = c();
    }
    Family2Params { lambda, a: c(), b: c() }
}

fn qc(p: u32, q: u32, k: f64) -> C {
    C::from_polar(1.0, 2.0 * PI * p as f64 * k / q as f64)
}

fn close(a: &Matrix<C>, b: &Matrix<C>, tol: f64) -> bool {
    a.sub(b).max_abs() <= tol * a.max_abs().max(1.0)
}

#[test]
fn family1_examples() {
    let trivial = f1(1, 3, 0, Sign::Plus).complex_mats();
    assert_eq!(trivial.z[(0, 0)], C::new(1.0, 0.0));
    assert!(trivial.x.max_abs() == 0.0 && trivial.y.max_abs() == 0.0);

    let two = f1(1, 3, 1, Sign::Plus).complex_mats();
    let q = qc(1, 3, 1.0);
    assert!((two.z[(0, 0)] - q).norm() < 1e-12 && (two.z[(1, 1)] - q.inv()).norm() < 1e-12);
    assert!((two.x[(1, 0)] + 1.0).norm() < 1e-12 && two.x[(0, 1)].norm() == 0.0);
    assert!((two.y[(0, 1)] - 1.0).norm() < 1e-12 && two.y[(1, 0)].norm() == 0.0);

    let three = f1(1, 3, 2, Sign::Plus).complex_mats();
    for (j, k) in [2.0, 0.0, -2.0].into_iter().enumerate() {
        assert!((three.z[(j, j)] - qc(1, 3, k)).norm() < 1e-12);
    }
    assert!(build_family1(&RootContext::new(1, 3).unwrap(), Family1Params { r: 3, sign: Sign::Plus }).is_err());
}

#[test]
fn family2_examples() {
    let ctx = RootContext::new(1, 3).unwrap();
    let one = C::new(1.0, 0.0);
    let zero = C::new(0.0, 0.0);
    let rep = build_family2(&ctx, Family2Params { lambda: one, a: zero, b: zero }).unwrap();
    let m = rep.complex_mats();
    // X v_0 = 0, X v_1 = 0 and Y v_2 = 0.
    for i in 0..3 {
        assert!(m.x[(i, 0)].norm() < 1e-15 && m.x[(i, 1)].norm() < 1e-12 && m.y[(i, 2)].norm() < 1e-15);
    }
    assert!(build_family2(&ctx, Family2Params { lambda: zero, a: one, b: one }).is_err());

    let rep = build_family2(&ctx, Family2Params { lambda: 2.0 * one, a: one, b: one }).unwrap();
    let central = verify_relations(&rep, RelationKind::Central, &Tolerance::default()).unwrap();
    assert!(central.passed);
    assert!((central.central_scalar.unwrap().to_complex() - 8.0).norm() < 1e-9);
}

#[test]
fn family1_grid_exact() {
    let tol = Tolerance::default();
    for (p, q) in grid() {
        for r in 0..q {
            for sign in [Sign::Plus, Sign::Minus] {
                let rep = f1(p, q, r, sign);
                assert_eq!(rep.dim(), r as usize + 1);
                for kind in [RelationKind::Defining, RelationKind::Zj] {
                    let rpt = verify_relations(&rep, kind, &tol).unwrap();
                    assert!(rpt.passed && rpt.max_residual == 0.0 && rpt.backend == "exact", "{p}/{q} r={r} {sign} {kind:?}");
                }
                let central = verify_relations(&rep, RelationKind::Central, &tol).unwrap();
                assert!(central.passed);
                assert_eq!(central.central_scalar.unwrap().to_complex(), C::new(sign.value() as f64, 0.0));
                let star = verify_relations(&rep, RelationKind::StarOriginal, &tol).unwrap();
                assert!(star.passed);
                assert_eq!(star.star.unwrap().self_adjoint, r == 0);
                assert!(j_matrix(&rep).unwrap().is_exact());
                let rec = recover_xy(&rep, &tol);
                assert!(rec.passed && rec.residual_x == 0.0 && rec.residual_y == 0.0);
            }
        }
    }
}

#[test]
fn family2_random_grid() {
    let tol = Tolerance::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for (p, q) in [(1, 3), (2, 5), (3, 7)] {
        let ctx = RootContext::new(p, q).unwrap();
        for _ in 0..100 {
            let params = random_family2(&mut rng);
            let rep = build_family2(&ctx, params).unwrap();
            assert_eq!(rep.dim(), q as usize);
            for kind in [RelationKind::Defining, RelationKind::Zj, RelationKind::Central] {
                assert!(verify_relations(&rep, kind, &tol).unwrap().passed, "{params:?} {kind:?}");
            }
            let c = verify_relations(&rep, RelationKind::Central, &tol).unwrap().central_scalar.unwrap();
            let expected = params.lambda.powi(q as i32);
            assert!((c.to_complex() - expected).norm() <= 1e-9 * expected.norm().max(1.0));
            assert!(j_matrix(&rep).is_ok());
            assert!(recover_xy(&rep, &tol).passed);
        }
    }
}

#[test]
fn j_matrix_examples() {
    assert_eq!(j_matrix(&f1(1, 3, 0, Sign::Plus)).unwrap().to_complex().max_abs(), 0.0);
    let j = j_matrix(&f1(1, 3, 1, Sign::Plus)).unwrap().to_complex();
    let expected = Matrix::from_vec(2, 2, vec![C::new(0.0, 0.0), C::new(-1.0, 0.0), C::new(-1.0, 0.0), C::new(0.0, 0.0)]);
    assert!(close(&j, &expected, 1e-12));
    // (qX - q^-1 Y) Z^-1 computed here from the embedded generators.
    let m = f1(2, 7, 4, Sign::Minus).complex_mats();
    let q = qc(2, 7, 1.0);
    let oracle = m.x.scale(&q).sub(&m.y.scale(&q.inv())).mul(&m.zinv);
    assert!(close(&j_matrix(&f1(2, 7, 4, Sign::Minus)).unwrap().to_complex(), &oracle, 1e-12));
}

#[test]
fn recovery_on_cyclic_rep() {
    let ctx = RootContext::new(1, 5).unwrap();
    let rep = build_family2(
        &ctx,
        Family2Params { lambda: C::new(1.0, 1.0), a: C::new(2.0, 0.0), b: C::new(-1.0, 0.0) },
    )
    .unwrap();
    let rec = recover_xy(&rep, &Tolerance::default());
    assert!(rec.passed && rec.residual_x < 1e-9 && rec.residual_y < 1e-9);
}

#[test]
fn tensor_products() {
    let tol = Tolerance::default();
    let reps: Vec<_> = (0..3).map(|r| f1(1, 3, r, Sign::Plus)).collect();
    for a in &reps {
        for b in &reps {
            let t = tensor_rep(a, b).unwrap();
            assert!(t.is_exact() && t.dim() == a.dim() * b.dim());
            assert!(verify_relations(&t, RelationKind::Defining, &tol).unwrap().passed);
            assert!(delta_j_check(a, b, &tol).unwrap().passed);
        }
    }
    // Trivial left factor: tensor X is X_b.
    let t = tensor_rep(&reps[0], &reps[1]).unwrap();
    assert!(close(&t.complex_mats().x, &reps[1].complex_mats().x, 0.0));
    assert!(coassociativity_check(&reps[1], &reps[1], &reps[1], &tol).unwrap().passed);
    let other = f1(1, 5, 1, Sign::Plus);
    assert!(tensor_rep(&reps[1], &other).is_err());
}

#[test]
fn intersections() {
    for q in [3, 5, 7] {
        for p in [1, 2] {
            let ctx = RootContext::new(p, q).unwrap();
            for sign in [Sign::Plus, Sign::Minus] {
                let r = intersection_check(&ctx, sign).unwrap();
                assert!(r.passed && r.z_spectra_match && r.j_spectra_match, "{p}/{q} {sign}");
                assert!(r.mismatched_words.is_empty() && r.max_trace_residual < 1e-8);
            }
        }
    }
}

#[test]
fn json_round_trip_preserves_reports() {
    let tol = Tolerance::default();
    let reps = [
        f1(2, 5, 3, Sign::Minus),
        build_family2(
            &RootContext::new(3, 7).unwrap(),
            Family2Params { lambda: C::new(0.7, -1.1), a: C::new(0.2, 0.4), b: C::new(-1.0, 0.5) },
        )
        .unwrap(),
        tensor_rep(&f1(1, 3, 1, Sign::Plus), &f1(1, 3, 2, Sign::Minus)).unwrap(),
    ];
    for rep in reps {
        let text = rep_to_json(&rep);
        let back = rep_from_json(&text).unwrap();
        assert_eq!(rep_to_json(&back), text);
        for kind in RelationKind::ALL {
            let a = serde_json::to_string(&verify_relations(&rep, kind, &tol).unwrap()).unwrap();
            let b = serde_json::to_string(&verify_relations(&back, kind, &tol).unwrap()).unwrap();
            assert_eq!(a, b);
        }
    }
}
