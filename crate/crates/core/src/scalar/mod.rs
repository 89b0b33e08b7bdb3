//! Arithmetic foundation: the root of unity q = exp(2 pi i P/Q), exact
//! cyclotomic numbers, complex doubles, q-powers and q-numbers.

pub mod cyclo;
pub mod elem;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use serde::{Serialize, Serializer};

pub use cyclo::{cyclo_ops, cyclotomic_poly, CycloField, CycloNum, CycloOp};
pub use elem::{ApproxEnv, ExactEnv, FieldElem};

use crate::error::{Error, Result};

/// The pair `(P, Q)` fixing `q = exp(2 pi i P / Q)`.
///
/// Carries two exact fields: Q(zeta_Q), where q is `zeta_Q^P`, and
/// Q(zeta_4Q) = Q(zeta_Q, i), which the cyclic family needs for its
/// factors of `i`.
#[derive(Clone)]
pub struct RootContext {
    p: u32,
    q: u32,
    field: Arc<CycloField>,
    ext_field: Arc<CycloField>,
}

impl fmt::Debug for RootContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RootContext(P={}, Q={})", self.p, self.q)
    }
}

impl PartialEq for RootContext {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.q == other.q
    }
}

impl RootContext {
    pub fn new(p: u32, q: u32) -> Result<Self> {
        validate_pq(p, q)?;
        Ok(RootContext {
            p,
            q,
            field: CycloField::new(q),
            ext_field: CycloField::new(4 * q),
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Coefficients of `Phi_Q`, ascending.
    pub fn phi(&self) -> &[BigInt] {
        self.field.phi()
    }

    pub fn degree(&self) -> usize {
        self.field.degree()
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn exact_env(&self) -> ExactEnv {
        ExactEnv::new(self.field.clone(), self.p)
    }

    /// Environment inside Q(zeta_4Q), where q = zeta_4Q^(4P).
    pub fn exact_env_ext(&self) -> ExactEnv {
        ExactEnv::new(self.ext_field.clone(), 4 * self.p)
    }

    pub fn approx_env(&self) -> ApproxEnv {
        ApproxEnv {
            p: self.p,
            q_order: self.q,
        }
    }
}

/// Checks `Q` odd, `Q >= 3`, `1 <= P <= Q-1` and `gcd(P, Q) = 1`, naming the
/// first violated constraint.
pub fn validate_pq(p: u32, q: u32) -> Result<()> {
    if q.is_multiple_of(2) {
        return Err(Error::InvalidRoot(format!("Q must be odd (got Q={q})")));
    }
    if q < 3 {
        return Err(Error::InvalidRoot(format!("Q must be at least 3 (got Q={q})")));
    }
    if !(1..q).contains(&p) {
        return Err(Error::InvalidRoot(format!("P must lie in 1..Q-1 (got P={p}, Q={q})")));
    }
    if num_integer::gcd(p, q) != 1 {
        return Err(Error::InvalidRoot(format!("P and Q must be coprime (got P={p}, Q={q})")));
    }
    Ok(())
}

/// Exponent argument for [`q_power`] and [`q_number`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Exponent {
    Int(i64),
    Complex(Complex64),
}

impl From<i64> for Exponent {
    fn from(k: i64) -> Self {
        Exponent::Int(k)
    }
}

impl From<Complex64> for Exponent {
    /// Integral real values select the exact path.
    fn from(x: Complex64) -> Self {
        if x.im == 0.0 && x.re.fract() == 0.0 && x.re.abs() < 1e15 {
            Exponent::Int(x.re as i64)
        } else {
            Exponent::Complex(x)
        }
    }
}

/// A value from either backend. The tag is never changed implicitly; use
/// [`Scalar::to_approx`] to embed.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(CycloNum),
    Approx(Complex64),
}

impl Scalar {
    pub fn to_complex(&self) -> Complex64 {
        match self {
            Scalar::Exact(c) => c.to_complex(),
            Scalar::Approx(z) => *z,
        }
    }

    pub fn to_approx(&self) -> Scalar {
        Scalar::Approx(self.to_complex())
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn checked_add(&self, rhs: &Scalar) -> Result<Scalar> {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => cyclo_ops(a, b, CycloOp::Add).map(Scalar::Exact),
            (Scalar::Approx(a), Scalar::Approx(b)) => Ok(Scalar::Approx(a + b)),
            _ => Err(Error::BackendMismatch),
        }
    }

    pub fn checked_mul(&self, rhs: &Scalar) -> Result<Scalar> {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => cyclo_ops(a, b, CycloOp::Mul).map(Scalar::Exact),
            (Scalar::Approx(a), Scalar::Approx(b)) => Ok(Scalar::Approx(a * b)),
            _ => Err(Error::BackendMismatch),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Scalar::Exact(c) => c.serialize(serializer),
            Scalar::Approx(z) => [z.re, z.im].serialize(serializer),
        }
    }
}

/// `q^x`: exact `zeta^(P x mod Q)` for integer `x`, otherwise
/// `exp(2 pi i (P/Q) x)` in the approximate backend.
pub fn q_power(ctx: &RootContext, x: impl Into<Exponent>) -> Scalar {
    match x.into() {
        Exponent::Int(k) => Scalar::Exact(CycloNum::q_pow(&ctx.exact_env(), k)),
        Exponent::Complex(z) => Scalar::Approx(ctx.approx_env().q_pow_complex(z)),
    }
}

/// `[x]_q = (q^x - q^-x) / (q - q^-1)`; exact for integer `x`.
pub fn q_number(ctx: &RootContext, x: impl Into<Exponent>) -> Scalar {
    match x.into() {
        Exponent::Int(k) => Scalar::Exact(CycloNum::q_num(&ctx.exact_env(), k)),
        Exponent::Complex(z) => Scalar::Approx(ctx.approx_env().q_num_complex(z)),
    }
}

/// Relative tolerance with an absolute floor.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { rel: 1e-9, abs: 1e-12 }
    }
}

impl Tolerance {
    pub fn new(rel: f64, abs: f64) -> Self {
        Tolerance { rel, abs }
    }

    /// Threshold for a residual measured against quantities of size `scale`.
    pub fn bound(&self, scale: f64) -> f64 {
        (self.rel * scale).max(self.abs)
    }

    pub fn close(&self, a: Complex64, b: Complex64) -> bool {
        (a - b).norm() <= self.bound(a.norm().max(b.norm()))
    }
}
