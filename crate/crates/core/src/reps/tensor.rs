use std::sync::Arc;

use super::verify::{compare, CheckReport};
use super::{GenMats, Generators, Provenance, Representation};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{CycloField, CycloNum, ExactEnv, FieldElem, Tolerance};

fn tensor_mats<T: FieldElem>(env: &T::Env, a: &GenMats<T>, b: &GenMats<T>) -> GenMats<T> {
    let id_a = Matrix::identity(env, a.dim());
    GenMats {
        x: id_a.kron(&b.x).add(&a.x.kron(&b.z)),
        y: id_a.kron(&b.y).add(&a.y.kron(&b.z)),
        z: a.z.kron(&b.z),
        zinv: a.zinv.kron(&b.zinv),
    }
}

fn embed_mats(m: &GenMats<CycloNum>, target: &Arc<CycloField>) -> Result<GenMats<CycloNum>> {
    let embed = |a: &Matrix<CycloNum>| -> Result<Matrix<CycloNum>> {
        let data = a.entries().iter().map(|c| c.embed(target)).collect::<Result<Vec<_>>>()?;
        Ok(Matrix::from_vec(a.rows(), a.cols(), data))
    };
    Ok(GenMats {
        x: embed(&m.x)?,
        y: embed(&m.y)?,
        z: embed(&m.z)?,
        zinv: embed(&m.zinv)?,
    })
}

/// Brings two exact generator sets into the larger of their fields.
fn common_field(
    ea: &ExactEnv,
    ma: &GenMats<CycloNum>,
    eb: &ExactEnv,
    mb: &GenMats<CycloNum>,
) -> Result<(ExactEnv, GenMats<CycloNum>, GenMats<CycloNum>)> {
    let (na, nb) = (ea.field.order(), eb.field.order());
    if na == nb {
        Ok((ea.clone(), ma.clone(), mb.clone()))
    } else if nb % na == 0 {
        Ok((eb.clone(), embed_mats(ma, &eb.field)?, mb.clone()))
    } else if na % nb == 0 {
        Ok((ea.clone(), ma.clone(), embed_mats(mb, &ea.field)?))
    } else {
        Err(Error::FieldMismatch(na, nb))
    }
}

/// The representation on `a ⊗ b` given by the coproduct:
/// `X -> 1⊗X + X⊗Z`, `Y -> 1⊗Y + Y⊗Z`, `Z -> Z⊗Z`.
///
/// Both factors must share the root of unity and the backend; exact
/// factors over different cyclotomic fields are embedded into the larger
/// one.
pub fn tensor_rep(a: &Representation, b: &Representation) -> Result<Representation> {
    if a.ctx() != b.ctx() {
        return Err(Error::ContextMismatch(format!("{:?}", a.ctx()), format!("{:?}", b.ctx())));
    }
    let gens = match (a.generators(), b.generators()) {
        (Generators::Exact { env: ea, mats: ma }, Generators::Exact { env: eb, mats: mb }) => {
            let (env, ma, mb) = common_field(ea, ma, eb, mb)?;
            let mats = tensor_mats(&env, &ma, &mb);
            Generators::Exact { env, mats }
        }
        (Generators::Approx { env, mats: ma }, Generators::Approx { mats: mb, .. }) => Generators::Approx {
            env: *env,
            mats: tensor_mats(env, ma, mb),
        },
        _ => return Err(Error::BackendMismatch),
    };
    let prov = Provenance::Tensor(Box::new(a.provenance().clone()), Box::new(b.provenance().clone()));
    Representation::new(a.ctx().clone(), gens, prov, &Tolerance::default())
}

fn delta_j_item<T: FieldElem>(env: &T::Env, a: &GenMats<T>, b: &GenMats<T>, t: &GenMats<T>, tol: &Tolerance) -> super::ResidualItem {
    let want = a.zinv.kron(&b.j(env)).add(&a.j(env).kron(&Matrix::identity(env, b.dim())));
    compare("J(a⊗b) = Zi⊗J + J⊗1", &t.j(env), &want, tol)
}

/// Checks that J acts on `a ⊗ b` as `Z^-1 ⊗ J + J ⊗ 1`.
pub fn delta_j_check(a: &Representation, b: &Representation, tol: &Tolerance) -> Result<CheckReport> {
    let t = tensor_rep(a, b)?;
    let item = match (a.generators(), b.generators(), t.generators()) {
        (Generators::Exact { env: ea, mats: ma }, Generators::Exact { env: eb, mats: mb }, Generators::Exact { env, mats }) => {
            let (_, ma, mb) = common_field(ea, ma, eb, mb)?;
            delta_j_item(env, &ma, &mb, mats, tol)
        }
        (Generators::Approx { mats: ma, .. }, Generators::Approx { mats: mb, .. }, Generators::Approx { env, mats }) => {
            delta_j_item(env, ma, mb, mats, tol)
        }
        _ => return Err(Error::BackendMismatch),
    };
    Ok(CheckReport::from_items("delta_j", t.backend_name(), vec![item]))
}

/// Compares `(a⊗b)⊗c` with `a⊗(b⊗c)` generator by generator.
pub fn coassociativity_check(a: &Representation, b: &Representation, c: &Representation, tol: &Tolerance) -> Result<CheckReport> {
    let left = tensor_rep(&tensor_rep(a, b)?, c)?;
    let right = tensor_rep(a, &tensor_rep(b, c)?)?;
    let items = match (left.generators(), right.generators()) {
        (Generators::Exact { env: el, mats: l }, Generators::Exact { env: er, mats: r }) => {
            let (_, l, r) = common_field(el, l, er, r)?;
            pairwise(&l, &r, tol)
        }
        (Generators::Approx { mats: l, .. }, Generators::Approx { mats: r, .. }) => pairwise(l, r, tol),
        _ => return Err(Error::BackendMismatch),
    };
    Ok(CheckReport::from_items("coassociativity", left.backend_name(), items))
}

fn pairwise<T: FieldElem>(l: &GenMats<T>, r: &GenMats<T>, tol: &Tolerance) -> Vec<super::ResidualItem> {
    vec![
        compare("X", &l.x, &r.x, tol),
        compare("Y", &l.y, &r.y, tol),
        compare("Z", &l.z, &r.z, tol),
        compare("Zi", &l.zinv, &r.zinv, tol),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reps::{build_family1, build_family2, verify_relations, Family1Params, Family2Params, RelationKind, Sign};
    use crate::scalar::RootContext;
    use num_complex::Complex64;

    fn f1(ctx: &RootContext, r: u32) -> Representation {
        build_family1(ctx, Family1Params { r, sign: Sign::Plus }).unwrap()
    }

    #[test]
    fn trivial_factor_is_transparent() {
        let ctx = RootContext::new(1, 3).unwrap();
        let t = tensor_rep(&f1(&ctx, 0), &f1(&ctx, 1)).unwrap();
        assert_eq!(t.dim(), 2);
        assert_eq!(t.complex_mats().x, f1(&ctx, 1).complex_mats().x);
    }

    #[test]
    fn tensor_products_for_q3() {
        let ctx = RootContext::new(1, 3).unwrap();
        let tol = Tolerance::default();
        for r1 in 0..3 {
            for r2 in 0..3 {
                let (a, b) = (f1(&ctx, r1), f1(&ctx, r2));
                let t = tensor_rep(&a, &b).unwrap();
                let rep = verify_relations(&t, RelationKind::Defining, &tol).unwrap();
                assert!(rep.passed && rep.max_residual == 0.0);
                assert!(delta_j_check(&a, &b, &tol).unwrap().passed);
            }
        }
    }

    #[test]
    fn coassociative_on_generators() {
        let ctx = RootContext::new(1, 3).unwrap();
        let tol = Tolerance::default();
        let a = f1(&ctx, 1);
        let r = coassociativity_check(&a, &a, &a, &tol).unwrap();
        assert!(r.passed && r.max_residual == 0.0);
        let t = tensor_rep(&tensor_rep(&a, &a).unwrap(), &a).unwrap();
        assert_eq!(t.dim(), 8);
    }

    #[test]
    fn mismatches_are_errors() {
        let c3 = RootContext::new(1, 3).unwrap();
        let c5 = RootContext::new(1, 5).unwrap();
        assert!(matches!(tensor_rep(&f1(&c3, 1), &f1(&c5, 1)), Err(Error::ContextMismatch(..))));
        let one = Complex64::new(1.0, 0.0);
        let cyc = build_family2(&c3, Family2Params { lambda: one, a: one, b: one }).unwrap();
        assert!(matches!(tensor_rep(&f1(&c3, 1), &cyc), Err(Error::BackendMismatch)));
        assert!(tensor_rep(&f1(&c3, 1).to_approx(), &cyc).is_ok());
    }
}
