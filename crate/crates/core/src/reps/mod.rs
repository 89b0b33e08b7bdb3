//! Matrix representations of the two irreducible families, relation checks
//! at matrix level, tensor products through the coproduct, and the check
//! that the families meet.
//!
//! Basis vectors `v_0 .. v_{d-1}` are the standard basis columns and
//! matrices act on the left, so `M[(i, j)]` is the coefficient of `v_i` in
//! `M v_j`.

mod intersect;
mod json;
mod tensor;
mod verify;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_rational::BigRational;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{ApproxEnv, CycloNum, ExactEnv, FieldElem, RootContext, Tolerance};

pub use intersect::{intersection_check, IntersectionReport};
pub use json::{format_q_power, parse_q_power, rep_from_json, rep_to_json};
pub use tensor::{coassociativity_check, delta_j_check, tensor_rep};
pub use verify::{j_matrix, recover_xy, verify_relations, CheckReport, RecoveryReport, RelationKind, ResidualItem, StarFindings};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for Sign {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+" | "+1" | "1" | "plus" => Ok(Sign::Plus),
            "-" | "-1" | "minus" => Ok(Sign::Minus),
            other => Err(Error::OutOfRange(format!("sign must be + or -, got {other:?}"))),
        }
    }
}

impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.symbol())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Family1Params {
    pub r: u32,
    pub sign: Sign,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Family2Params {
    pub lambda: Complex64,
    pub a: Complex64,
    pub b: Complex64,
}

/// Cyclic-family data that can be represented exactly: `lambda = ±q^k` and
/// rational `a`, `b`.
#[derive(Clone, Debug, PartialEq)]
pub struct Family2Exact {
    pub lambda_sign: Sign,
    pub lambda_exp: i64,
    pub a: BigRational,
    pub b: BigRational,
}

impl Family2Exact {
    /// `lambda` as a complex number, for comparison with the approximate
    /// path.
    pub fn lambda_complex(&self, ctx: &RootContext) -> Complex64 {
        let z = ctx.approx_env().q_pow_complex(Complex64::new(self.lambda_exp as f64, 0.0));
        z * self.lambda_sign.value() as f64
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Provenance {
    Family1(Family1Params),
    Family2(Family2Params),
    Family2Exact(Family2Exact),
    Tensor(Box<Provenance>, Box<Provenance>),
}

impl Provenance {
    pub fn is_family2(&self) -> bool {
        matches!(self, Provenance::Family2(_) | Provenance::Family2Exact(_))
    }

    /// The scalar by which `Z^Q` acts, when the provenance determines it.
    pub fn central_value(&self, ctx: &RootContext) -> Complex64 {
        let q = ctx.q() as i32;
        match self {
            Provenance::Family1(p) => Complex64::new(p.sign.value() as f64, 0.0),
            Provenance::Family2(p) => p.lambda.powi(q),
            Provenance::Family2Exact(p) => Complex64::new(p.lambda_sign.value() as f64, 0.0),
            Provenance::Tensor(a, b) => a.central_value(ctx) * b.central_value(ctx),
        }
    }
}

/// The matrices of the four generators.
#[derive(Clone, Debug, PartialEq)]
pub struct GenMats<T> {
    pub x: Matrix<T>,
    pub y: Matrix<T>,
    pub z: Matrix<T>,
    pub zinv: Matrix<T>,
}

impl<T: FieldElem> GenMats<T> {
    pub fn map<U>(&self, f: impl Fn(&Matrix<T>) -> Matrix<U>) -> GenMats<U> {
        GenMats {
            x: f(&self.x),
            y: f(&self.y),
            z: f(&self.z),
            zinv: f(&self.zinv),
        }
    }

    pub fn dim(&self) -> usize {
        self.z.rows()
    }

    /// `(qX - q^-1 Y) Z^-1`.
    pub fn j(&self, env: &T::Env) -> Matrix<T> {
        let qx = self.x.scale(&T::q_pow(env, 1));
        let qy = self.y.scale(&T::q_pow(env, -1));
        qx.sub(&qy).mul(&self.zinv)
    }

    /// `Z^-1 (q^-1 X - q Y)`, the other expression for J.
    pub fn j_alt(&self, env: &T::Env) -> Matrix<T> {
        let qx = self.x.scale(&T::q_pow(env, -1));
        let qy = self.y.scale(&T::q_pow(env, 1));
        self.zinv.mul(&qx.sub(&qy))
    }
}

#[derive(Clone, Debug)]
pub enum Generators {
    Exact { env: ExactEnv, mats: GenMats<CycloNum> },
    Approx { env: ApproxEnv, mats: GenMats<Complex64> },
}

/// A matrix from either backend.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyMatrix {
    Exact(Matrix<CycloNum>),
    Approx(Matrix<Complex64>),
}

impl AnyMatrix {
    pub fn to_complex(&self) -> Matrix<Complex64> {
        match self {
            AnyMatrix::Exact(m) => m.to_complex(),
            AnyMatrix::Approx(m) => m.clone(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, AnyMatrix::Exact(_))
    }
}

impl Serialize for AnyMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            AnyMatrix::Exact(m) => json::rows(m).serialize(s),
            AnyMatrix::Approx(m) => json::rows(&m.map(|z| [z.re, z.im])).serialize(s),
        }
    }
}

/// A finite-dimensional representation, validated against the defining
/// relations when it is built.
#[derive(Clone, Debug)]
pub struct Representation {
    ctx: RootContext,
    gens: Generators,
    provenance: Provenance,
}

impl Representation {
    /// Wraps generator matrices, rejecting them unless the defining
    /// relations hold (exactly, or within `tol` for the approximate
    /// backend).
    pub fn new(ctx: RootContext, gens: Generators, provenance: Provenance, tol: &Tolerance) -> Result<Self> {
        let rep = Representation { ctx, gens, provenance };
        let d = rep.dim();
        let shapes_ok = match &rep.gens {
            Generators::Exact { mats, .. } => shapes_match(mats, d),
            Generators::Approx { mats, .. } => shapes_match(mats, d),
        };
        if !shapes_ok {
            return Err(Error::Malformed("generator matrices must be square of equal size".into()));
        }
        let report = verify_relations(&rep, RelationKind::Defining, tol)?;
        if let Some(bad) = report.items.iter().find(|i| !i.passed) {
            return Err(Error::RelationViolated {
                relation: bad.name.clone(),
                residual: bad.residual,
            });
        }
        Ok(rep)
    }

    pub fn ctx(&self) -> &RootContext {
        &self.ctx
    }

    pub fn dim(&self) -> usize {
        match &self.gens {
            Generators::Exact { mats, .. } => mats.dim(),
            Generators::Approx { mats, .. } => mats.dim(),
        }
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn generators(&self) -> &Generators {
        &self.gens
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.gens, Generators::Exact { .. })
    }

    pub fn backend_name(&self) -> &'static str {
        if self.is_exact() {
            "exact"
        } else {
            "approx"
        }
    }

    /// Generator matrices embedded into complex doubles.
    pub fn complex_mats(&self) -> GenMats<Complex64> {
        match &self.gens {
            Generators::Exact { mats, .. } => mats.map(Matrix::to_complex),
            Generators::Approx { mats, .. } => mats.clone(),
        }
    }

    /// J embedded into complex doubles.
    pub fn j_complex(&self) -> Matrix<Complex64> {
        let m = self.complex_mats();
        m.j(&self.ctx.approx_env())
    }

    /// The same representation over the approximate backend.
    pub fn to_approx(&self) -> Representation {
        Representation {
            ctx: self.ctx.clone(),
            gens: Generators::Approx {
                env: self.ctx.approx_env(),
                mats: self.complex_mats(),
            },
            provenance: self.provenance.clone(),
        }
    }
}

fn shapes_match<T: FieldElem>(m: &GenMats<T>, d: usize) -> bool {
    [&m.x, &m.y, &m.z, &m.zinv].iter().all(|a| a.rows() == d && a.cols() == d) && d > 0
}

fn family1_mats<T: FieldElem>(env: &T::Env, p: Family1Params) -> GenMats<T> {
    let d = p.r as usize + 1;
    let r = p.r as i64;
    let s = T::from_int(env, p.sign.value());
    let mut x = Matrix::zeros(env, d, d);
    let mut y = Matrix::zeros(env, d, d);
    let mut z = Matrix::zeros(env, d, d);
    let mut zinv = Matrix::zeros(env, d, d);
    for j in 0..d {
        let jj = j as i64;
        z[(j, j)] = s.mul(&T::q_pow(env, r - 2 * jj));
        zinv[(j, j)] = s.mul(&T::q_pow(env, 2 * jj - r));
        if j + 1 < d {
            x[(j + 1, j)] = T::q_pow(env, r - 2 * jj - 1).mul(&T::q_num(env, r - jj)).neg();
        }
        if j > 0 {
            y[(j - 1, j)] = T::q_num(env, jj);
        }
    }
    GenMats { x, y, z, zinv }
}

fn family2_mats<T: FieldElem>(env: &T::Env, lambda: &T, a: &T, b: &T) -> Result<GenMats<T>> {
    let lambda_inv = lambda
        .inv()
        .ok_or_else(|| Error::OutOfRange("lambda must be nonzero".into()))?;
    let minus_i = T::imag_unit(env)
        .ok_or_else(|| Error::OutOfRange("the cyclic family needs a field containing i".into()))?
        .neg();
    let n = T::q_order(env) as usize;
    let qp = |k: i64| T::q_pow(env, k);
    let denom_inv = qp(1).sub(&qp(-1)).inv().expect("q is not ±1");
    let ab = a.mul(b);
    let mut x = Matrix::zeros(env, n, n);
    let mut y = Matrix::zeros(env, n, n);
    let mut z = Matrix::zeros(env, n, n);
    let mut zinv = Matrix::zeros(env, n, n);
    for j in 0..n {
        let jj = j as i64;
        z[(j, j)] = lambda.mul(&qp(2 * jj));
        zinv[(j, j)] = lambda_inv.mul(&qp(-2 * jj));
        if j == 0 {
            x[(n - 1, 0)] = minus_i.mul(&qp(-1)).mul(a);
        } else {
            let f = lambda
                .mul(&qp(jj - 1))
                .sub(&lambda_inv.mul(&qp(1 - jj)))
                .mul(&denom_inv);
            let inner = ab.sub(&T::q_num(env, jj).mul(&f));
            x[(j - 1, j)] = minus_i.mul(&qp(jj - 1)).mul(&inner);
        }
        if j + 1 < n {
            y[(j + 1, j)] = minus_i.mul(lambda).mul(&qp(jj + 1));
        } else {
            y[(0, n - 1)] = minus_i.mul(lambda).mul(b);
        }
    }
    Ok(GenMats { x, y, z, zinv })
}

/// The `(r+1)`-dimensional representation, built exactly in Q(zeta_Q).
pub fn build_family1(ctx: &RootContext, p: Family1Params) -> Result<Representation> {
    if p.r >= ctx.q() {
        return Err(Error::OutOfRange(format!("r must lie in 0..{} (got {})", ctx.q() - 1, p.r)));
    }
    let env = ctx.exact_env();
    let mats = family1_mats(&env, p);
    Representation::new(
        ctx.clone(),
        Generators::Exact { env, mats },
        Provenance::Family1(p),
        &Tolerance::default(),
    )
}

/// The Q-dimensional cyclic representation in complex doubles.
pub fn build_family2(ctx: &RootContext, p: Family2Params) -> Result<Representation> {
    if p.lambda == Complex64::new(0.0, 0.0) {
        return Err(Error::OutOfRange("lambda must be nonzero".into()));
    }
    let env = ctx.approx_env();
    let mats = family2_mats(&env, &p.lambda, &p.a, &p.b)?;
    Representation::new(
        ctx.clone(),
        Generators::Approx { env, mats },
        Provenance::Family2(p),
        &Tolerance::default(),
    )
}

/// The cyclic representation for `lambda = ±q^k` and rational `a`, `b`,
/// built exactly in Q(zeta_4Q).
pub fn build_family2_exact(ctx: &RootContext, p: Family2Exact) -> Result<Representation> {
    let env = ctx.exact_env_ext();
    let lambda = CycloNum::q_pow(&env, p.lambda_exp).mul(&CycloNum::from_int(&env.field, p.lambda_sign.value()));
    let a = CycloNum::from_rational(&env.field, p.a.clone());
    let b = CycloNum::from_rational(&env.field, p.b.clone());
    let mats = family2_mats(&env, &lambda, &a, &b)?;
    Representation::new(
        ctx.clone(),
        Generators::Exact { env, mats },
        Provenance::Family2Exact(p),
        &Tolerance::default(),
    )
}
