use num_complex::Complex64;
use serde::Serialize;

use crate::matrix::Matrix;
use crate::reps::{GenMats, Generators, Representation};
use crate::scalar::{Exponent, FieldElem, Tolerance};

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub x: [f64; 2],
    pub backend: &'static str,
    pub residual: f64,
    pub scale: f64,
    pub passed: bool,
}

/// `(LHS, RHS)` of the cubic identity in J, with the q-numbers
/// `[x-2], [x], [x+2], [2]` supplied by the caller.
fn sides<T: FieldElem>(env: &T::Env, m: &GenMats<T>, qn: [T; 4]) -> (Matrix<T>, Matrix<T>) {
    let [lo, mid, hi, two] = qn;
    let j = m.j(env);
    let z = &m.z;
    let (j_lo, j_mid, j_hi) = (j.sub_scalar(&lo), j.sub_scalar(&mid), j.sub_scalar(&hi));
    let lhs = Matrix::product([z, &j_hi, &j_mid, &j_lo, z]);
    let inner = Matrix::product([&j_mid, z, &j_mid, z]).sub_scalar(&two.mul(&two));
    (lhs, inner.mul(&j_mid))
}

fn judge<T: FieldElem>(lhs: &Matrix<T>, rhs: &Matrix<T>, tol: &Tolerance) -> (f64, f64, bool) {
    let diff = lhs.sub(rhs);
    let residual = diff.max_abs();
    let scale = lhs.max_abs().max(rhs.max_abs()).max(1.0);
    let passed = if T::EXACT {
        diff.is_zero()
    } else {
        residual <= tol.bound(scale)
    };
    (residual, scale, passed)
}

/// Checks `Z (J-[x+2]) (J-[x]) (J-[x-2]) Z = ((J-[x]) Z (J-[x]) Z - [2]^2) (J-[x])`
/// on a representation.
///
/// Exact representations with integer `x` are checked in the cyclotomic
/// field, where the residual must vanish identically; anything else is
/// checked in complex doubles against `tol`.
pub fn verify_identity(rep: &Representation, x: impl Into<Exponent>, tol: &Tolerance) -> IdentityReport {
    let x = x.into();
    let xc = match x {
        Exponent::Int(k) => Complex64::new(k as f64, 0.0),
        Exponent::Complex(z) => z,
    };
    let (residual, scale, passed, backend) = match (rep.generators(), x) {
        (Generators::Exact { env, mats }, Exponent::Int(k)) => {
            let qn = [k - 2, k, k + 2, 2].map(|n| FieldElem::q_num(env, n));
            let (l, r) = sides(env, mats, qn);
            let (a, b, c) = judge(&l, &r, tol);
            (a, b, c, "exact")
        }
        _ => {
            let env = rep.ctx().approx_env();
            let mats = rep.complex_mats();
            let two = Complex64::new(2.0, 0.0);
            let qn = [xc - two, xc, xc + two, two].map(|t| env.q_num_complex(t));
            let (l, r) = sides(&env, &mats, qn);
            let (a, b, c) = judge(&l, &r, tol);
            (a, b, c, "approx")
        }
    };
    IdentityReport {
        x: [xc.re, xc.im],
        backend,
        residual,
        scale,
        passed,
    }
}
