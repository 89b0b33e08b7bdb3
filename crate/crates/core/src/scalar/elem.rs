//! The two arithmetic backends behind one trait, so matrix code is written
//! once and runs either exactly or in complex doubles.

use std::fmt::Debug;
use std::sync::Arc;

use num_complex::Complex64;

use super::cyclo::{CycloField, CycloNum};
use super::Scalar;

/// An element of a field in which q lives, together with the environment
/// needed to produce q-powers.
pub trait FieldElem: Clone + Debug + PartialEq + Send + Sync + 'static {
    type Env: Clone + Debug + Send + Sync;

    const EXACT: bool;

    fn zero(env: &Self::Env) -> Self;
    fn from_int(env: &Self::Env, n: i64) -> Self;
    /// `q^k`.
    fn q_pow(env: &Self::Env, k: i64) -> Self;
    /// The imaginary unit, if the field contains it.
    fn imag_unit(env: &Self::Env) -> Option<Self>;
    /// Order of q as a root of unity.
    fn q_order(env: &Self::Env) -> u32;

    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Option<Self>;
    fn is_zero(&self) -> bool;
    fn zero_like(&self) -> Self;
    fn to_c64(&self) -> Complex64;
    fn into_scalar(self) -> Scalar;

    fn one(env: &Self::Env) -> Self {
        Self::from_int(env, 1)
    }

    /// `[k]_q` for integer `k`, as the finite geometric sum
    /// `q^(k-1) + q^(k-3) + .. + q^(1-k)` after reducing `k` modulo the
    /// order of q. No division is needed.
    fn q_num(env: &Self::Env, k: i64) -> Self {
        let n = Self::q_order(env) as i64;
        let k = k.rem_euclid(n);
        let mut acc = Self::zero(env);
        for j in 0..k {
            acc = acc.add(&Self::q_pow(env, k - 1 - 2 * j));
        }
        acc
    }
}

/// Where q sits inside an exact cyclotomic field: `q = zeta_N^step`.
#[derive(Clone, Debug)]
pub struct ExactEnv {
    pub field: Arc<CycloField>,
    pub step: u32,
    pub q_order: u32,
}

impl ExactEnv {
    pub fn new(field: Arc<CycloField>, step: u32) -> Self {
        let n = field.order();
        let q_order = n / num_integer::gcd(n, step);
        ExactEnv { field, step, q_order }
    }
}

/// Approximate backend: q = exp(2 pi i p / q_order).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ApproxEnv {
    pub p: u32,
    pub q_order: u32,
}

impl ApproxEnv {
    pub fn q_pow_complex(&self, x: Complex64) -> Complex64 {
        let theta = Complex64::new(0.0, 2.0 * std::f64::consts::PI * self.p as f64 / self.q_order as f64);
        (theta * x).exp()
    }

    /// `[x]_q` for complex `x`.
    pub fn q_num_complex(&self, x: Complex64) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        (self.q_pow_complex(x) - self.q_pow_complex(-x)) / (self.q_pow_complex(one) - self.q_pow_complex(-one))
    }
}

impl FieldElem for CycloNum {
    type Env = ExactEnv;
    const EXACT: bool = true;

    fn zero(env: &ExactEnv) -> Self {
        CycloNum::zero(&env.field)
    }
    fn from_int(env: &ExactEnv, n: i64) -> Self {
        CycloNum::from_int(&env.field, n)
    }
    fn q_pow(env: &ExactEnv, k: i64) -> Self {
        let n = env.field.order() as i64;
        CycloNum::zeta_pow(&env.field, (k.rem_euclid(n) * env.step as i64) % n)
    }
    fn imag_unit(env: &ExactEnv) -> Option<Self> {
        let n = env.field.order();
        n.is_multiple_of(4).then(|| CycloNum::zeta_pow(&env.field, (n / 4) as i64))
    }
    fn q_order(env: &ExactEnv) -> u32 {
        env.q_order
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        CycloNum::inv(self).ok()
    }
    fn is_zero(&self) -> bool {
        CycloNum::is_zero(self)
    }
    fn zero_like(&self) -> Self {
        CycloNum::zero(self.field())
    }
    fn to_c64(&self) -> Complex64 {
        self.to_complex()
    }
    fn into_scalar(self) -> Scalar {
        Scalar::Exact(self)
    }
}

impl FieldElem for Complex64 {
    type Env = ApproxEnv;
    const EXACT: bool = false;

    fn zero(_: &ApproxEnv) -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn from_int(_: &ApproxEnv, n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
    fn q_pow(env: &ApproxEnv, k: i64) -> Self {
        let k = k.rem_euclid(env.q_order as i64);
        env.q_pow_complex(Complex64::new(k as f64, 0.0))
    }
    fn imag_unit(_: &ApproxEnv) -> Option<Self> {
        Some(Complex64::i())
    }
    fn q_order(env: &ApproxEnv) -> u32 {
        env.q_order
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        (self.norm() != 0.0).then(|| self.inv())
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn zero_like(&self) -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
    fn into_scalar(self) -> Scalar {
        Scalar::Approx(self)
    }
}
