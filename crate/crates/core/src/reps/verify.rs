use num_complex::Complex64;
use serde::Serialize;

use super::{AnyMatrix, GenMats, Generators, Representation};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{FieldElem, RootContext, Scalar, Tolerance};
use crate::spectral::eigenvalues;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationKind {
    Defining,
    Zj,
    Central,
    StarOriginal,
}

impl RelationKind {
    pub const ALL: [RelationKind; 4] = [
        RelationKind::Defining,
        RelationKind::Zj,
        RelationKind::Central,
        RelationKind::StarOriginal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RelationKind::Defining => "defining",
            RelationKind::Zj => "zj",
            RelationKind::Central => "central",
            RelationKind::StarOriginal => "star_original",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualItem {
    pub name: String,
    pub residual: f64,
    pub passed: bool,
}

/// What the check of the original involution found.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StarFindings {
    /// X, Y and Z are self-adjoint for the standard inner product.
    pub self_adjoint: bool,
    /// Every eigenvalue of Z is real. If not, no inner product at all makes
    /// Z self-adjoint.
    pub z_spectrum_real: bool,
    pub dim: usize,
}

/// Outcome of a matrix-level check. On the exact backend a check passes only
/// if every residual matrix is exactly zero; `residual` is then the largest
/// embedded entry of the difference.
#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub backend: &'static str,
    pub passed: bool,
    pub max_residual: f64,
    pub items: Vec<ResidualItem>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub central_scalar: Option<Scalar>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub star: Option<StarFindings>,
}

impl CheckReport {
    pub(crate) fn from_items(check: &str, backend: &'static str, items: Vec<ResidualItem>) -> Self {
        CheckReport {
            check: check.into(),
            backend,
            passed: items.iter().all(|i| i.passed),
            max_residual: items.iter().map(|i| i.residual).fold(0.0, f64::max),
            items,
            central_scalar: None,
            star: None,
        }
    }
}

/// Compares `lhs` and `rhs`; approximate residuals are judged relative to
/// the larger of the two sides.
pub(crate) fn compare<T: FieldElem>(name: &str, lhs: &Matrix<T>, rhs: &Matrix<T>, tol: &Tolerance) -> ResidualItem {
    let diff = lhs.sub(rhs);
    let residual = diff.max_abs();
    let passed = if T::EXACT {
        diff.is_zero()
    } else {
        residual <= tol.bound(lhs.max_abs().max(rhs.max_abs()).max(1.0))
    };
    ResidualItem {
        name: name.into(),
        residual,
        passed,
    }
}

fn defining_items<T: FieldElem>(env: &T::Env, m: &GenMats<T>, tol: &Tolerance) -> Vec<ResidualItem> {
    let d = m.dim();
    let id = Matrix::identity(env, d);
    let q = |k| T::q_pow(env, k);
    let denom_inv = q(1).sub(&q(-1)).inv().expect("q is not ±1");
    let lhs = m.x.mul(&m.y).scale(&q(-1)).sub(&m.y.mul(&m.x).scale(&q(1)));
    let rhs = m.z.mul(&m.z).sub(&id).scale(&denom_inv);
    vec![
        compare("Z Zi = 1", &m.z.mul(&m.zinv), &id, tol),
        compare("Zi Z = 1", &m.zinv.mul(&m.z), &id, tol),
        compare("Z X = q^-2 X Z", &m.z.mul(&m.x), &m.x.mul(&m.z).scale(&q(-2)), tol),
        compare("Z Y = q^2 Y Z", &m.z.mul(&m.y), &m.y.mul(&m.z).scale(&q(2)), tol),
        compare("q^-1 X Y - q Y X = (Z^2 - 1)/(q - q^-1)", &lhs, &rhs, tol),
    ]
}

fn zj_items<T: FieldElem>(env: &T::Env, m: &GenMats<T>, tol: &Tolerance) -> Vec<ResidualItem> {
    let d = m.dim();
    let id = Matrix::identity(env, d);
    let q = |k| T::q_pow(env, k);
    let (z, j) = (&m.z, m.j(env));
    let zz = z.mul(z);
    let zjz = z.mul(&j).mul(z);
    let lhs1 = zz.mul(&j).add(&j.mul(&zz));
    let rhs1 = zjz.scale(&q(2).add(&q(-2)));
    let two = T::q_num(env, 2);
    let lhs2 = z.mul(&j).mul(&j).mul(z).scale(&q(2).add(&T::one(env)).add(&q(-2)));
    let rhs2 = Matrix::product([&j, z, &j, z])
        .add(&Matrix::product([&j, z, z, &j]))
        .add(&Matrix::product([z, &j, z, &j]))
        .add(&zz.sub(&id).scale(&two.mul(&two)));
    vec![
        compare("Z^2 J + J Z^2 = (q^2 + q^-2) Z J Z", &lhs1, &rhs1, tol),
        compare(
            "(q^2 + 1 + q^-2) Z J^2 Z = J Z J Z + J Z^2 J + Z J Z J + [2]^2 (Z^2 - 1)",
            &lhs2,
            &rhs2,
            tol,
        ),
    ]
}

fn central_report<T: FieldElem>(
    ctx: &RootContext,
    env: &T::Env,
    m: &GenMats<T>,
    expected: Complex64,
    tol: &Tolerance,
) -> (Vec<ResidualItem>, Scalar) {
    let zq = m.z.pow(env, ctx.q());
    let j = m.j(env);
    let c = zq[(0, 0)].clone();
    let scalar = Matrix::identity(env, m.dim()).scale(&c);
    let mut items = vec![
        compare("Z^Q X = X Z^Q", &zq.mul(&m.x), &m.x.mul(&zq), tol),
        compare("Z^Q Y = Y Z^Q", &zq.mul(&m.y), &m.y.mul(&zq), tol),
        compare("Z^Q J = J Z^Q", &zq.mul(&j), &j.mul(&zq), tol),
        compare("Z^Q = c 1", &zq, &scalar, tol),
    ];
    let want_int = (expected.im == 0.0 && expected.re.fract() == 0.0).then_some(expected.re as i64);
    let item = match want_int {
        Some(k) if T::EXACT => {
            let diff = c.sub(&T::from_int(env, k));
            ResidualItem {
                name: "c = expected".into(),
                residual: diff.to_c64().norm(),
                passed: diff.is_zero(),
            }
        }
        _ => {
            let residual = (c.to_c64() - expected).norm();
            ResidualItem {
                name: "c = expected".into(),
                residual,
                passed: residual <= tol.bound(expected.norm().max(1.0)),
            }
        }
    };
    items.push(item);
    (items, c.into_scalar())
}

fn self_adjoint(m: &Matrix<Complex64>, tol: &Tolerance) -> bool {
    m.sub(&m.adjoint()).max_abs() <= tol.bound(m.max_abs().max(1.0))
}

fn star_findings(rep: &Representation, tol: &Tolerance) -> Result<StarFindings> {
    let m = rep.complex_mats();
    let sa = [&m.x, &m.y, &m.z].into_iter().all(|a| self_adjoint(a, tol));
    let z_real = eigenvalues(&m.z)?
        .iter()
        .all(|l| l.im.abs() <= 1e-8 * l.norm().max(1.0));
    Ok(StarFindings {
        self_adjoint: sa,
        z_spectrum_real: z_real,
        dim: rep.dim(),
    })
}

/// Checks one family of relations on a representation.
///
/// `StarOriginal` passes when the original involution behaves as expected:
/// realized by the standard inner product in dimension one, and excluded for
/// every inner product (Z has a non-real eigenvalue) in higher dimension.
pub fn verify_relations(rep: &Representation, which: RelationKind, tol: &Tolerance) -> Result<CheckReport> {
    let backend = rep.backend_name();
    let expected = rep.provenance().central_value(rep.ctx());
    macro_rules! run {
        ($env:expr, $mats:expr) => {
            match which {
                RelationKind::Defining => CheckReport::from_items(which.name(), backend, defining_items($env, $mats, tol)),
                RelationKind::Zj => CheckReport::from_items(which.name(), backend, zj_items($env, $mats, tol)),
                RelationKind::Central => {
                    let (items, c) = central_report(rep.ctx(), $env, $mats, expected, tol);
                    let mut r = CheckReport::from_items(which.name(), backend, items);
                    r.central_scalar = Some(c);
                    r
                }
                RelationKind::StarOriginal => {
                    let star = star_findings(rep, tol)?;
                    let passed = if star.dim == 1 {
                        star.self_adjoint
                    } else {
                        !star.self_adjoint && !star.z_spectrum_real
                    };
                    let mut r = CheckReport::from_items(which.name(), backend, Vec::new());
                    r.passed = passed;
                    r.star = Some(star);
                    r
                }
            }
        };
    }
    Ok(match rep.generators() {
        Generators::Exact { env, mats } => run!(env, mats),
        Generators::Approx { env, mats } => run!(env, mats),
    })
}

/// `J = (qX - q^-1 Y) Z^-1`, after confirming it equals `Z^-1 (q^-1 X - q Y)`.
pub fn j_matrix(rep: &Representation) -> Result<AnyMatrix> {
    let tol = Tolerance::default();
    match rep.generators() {
        Generators::Exact { env, mats } => {
            let (a, b) = (mats.j(env), mats.j_alt(env));
            let item = compare("J forms", &a, &b, &tol);
            if !item.passed {
                return Err(Error::JFormsDisagree(item.residual));
            }
            Ok(AnyMatrix::Exact(a))
        }
        Generators::Approx { env, mats } => {
            let (a, b) = (mats.j(env), mats.j_alt(env));
            let item = compare("J forms", &a, &b, &tol);
            if !item.passed {
                return Err(Error::JFormsDisagree(item.residual));
            }
            Ok(AnyMatrix::Approx(a))
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RecoveryReport {
    pub x: AnyMatrix,
    pub y: AnyMatrix,
    pub residual_x: f64,
    pub residual_y: f64,
    pub passed: bool,
}

fn recover<T: FieldElem>(env: &T::Env, m: &GenMats<T>, tol: &Tolerance) -> (Matrix<T>, Matrix<T>, ResidualItem, ResidualItem) {
    let q = |k| T::q_pow(env, k);
    let denom_inv = q(2).sub(&q(-2)).inv().expect("q^4 is not 1");
    let j = m.j(env);
    let (jz, zj) = (j.mul(&m.z), m.z.mul(&j));
    let x = jz.scale(&q(1)).sub(&zj.scale(&q(-1))).scale(&denom_inv);
    let y = jz.scale(&q(-1)).sub(&zj.scale(&q(1))).scale(&denom_inv);
    let rx = compare("X", &x, &m.x, tol);
    let ry = compare("Y", &y, &m.y, tol);
    (x, y, rx, ry)
}

/// Rebuilds X and Y from J and Z and compares them with the originals.
pub fn recover_xy(rep: &Representation, tol: &Tolerance) -> RecoveryReport {
    let (x, y, rx, ry) = match rep.generators() {
        Generators::Exact { env, mats } => {
            let (x, y, rx, ry) = recover(env, mats, tol);
            (AnyMatrix::Exact(x), AnyMatrix::Exact(y), rx, ry)
        }
        Generators::Approx { env, mats } => {
            let (x, y, rx, ry) = recover(env, mats, tol);
            (AnyMatrix::Approx(x), AnyMatrix::Approx(y), rx, ry)
        }
    };
    RecoveryReport {
        x,
        y,
        residual_x: rx.residual,
        residual_y: ry.residual,
        passed: rx.passed && ry.passed,
    }
}
