//! Exact arithmetic in the cyclotomic field Q(zeta_N).
//!
//! Elements are stored in the power basis `1, zeta, .., zeta^(deg-1)` as an
//! integer numerator vector over one common positive denominator. Since
//! `Phi_N` is monic with integer coefficients, reduction never introduces
//! new denominators and products stay in integer arithmetic.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::poly::QPoly;

/// Integer coefficients of the n-th cyclotomic polynomial, ascending.
///
/// Computed as `(x^n - 1) / prod_{d | n, d < n} Phi_d(x)` recursively, all in
/// exact integer arithmetic.
pub fn cyclotomic_poly(n: u32) -> Vec<BigInt> {
    fn go(n: u32, memo: &mut HashMap<u32, Vec<BigInt>>) -> Vec<BigInt> {
        if let Some(p) = memo.get(&n) {
            return p.clone();
        }
        let mut num = vec![BigInt::zero(); n as usize + 1];
        num[0] = BigInt::from(-1);
        num[n as usize] = BigInt::one();
        for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
            let div = go(d, memo);
            num = exact_div_monic(&num, &div);
        }
        memo.insert(n, num.clone());
        num
    }
    assert!(n >= 1, "cyclotomic polynomial needs n >= 1");
    go(n, &mut HashMap::new())
}

fn exact_div_monic(num: &[BigInt], div: &[BigInt]) -> Vec<BigInt> {
    let dd = div.len() - 1;
    let nd = num.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![BigInt::zero(); nd - dd + 1];
    for k in (0..=nd - dd).rev() {
        let c = rem[k + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, d) in div.iter().enumerate() {
            rem[k + j] -= &c * d;
        }
        quot[k] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero), "inexact cyclotomic division");
    quot
}

/// The field Q(zeta_N) with its defining polynomial and a table of reduced
/// powers of zeta.
pub struct CycloField {
    order: u32,
    phi: Vec<BigInt>,
    degree: usize,
    powers: Vec<Vec<BigInt>>,
    zeta_c64: Vec<Complex64>,
}

impl fmt::Debug for CycloField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CycloField")
            .field("order", &self.order)
            .field("degree", &self.degree)
            .finish()
    }
}

impl CycloField {
    pub fn new(order: u32) -> Arc<Self> {
        let phi = cyclotomic_poly(order);
        let degree = phi.len() - 1;
        let mut powers = Vec::with_capacity(order as usize);
        let mut cur = vec![BigInt::zero(); degree];
        cur[0] = BigInt::one();
        for _ in 0..order {
            powers.push(cur.clone());
            // multiply by x and reduce
            let top = cur[degree - 1].clone();
            cur.rotate_right(1);
            cur[0] = BigInt::zero();
            if !top.is_zero() {
                for j in 0..degree {
                    cur[j] -= &top * &phi[j];
                }
            }
        }
        let zeta_c64 = (0..degree)
            .map(|k| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / order as f64))
            .collect();
        Arc::new(CycloField {
            order,
            phi,
            degree,
            powers,
            zeta_c64,
        })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn phi(&self) -> &[BigInt] {
        &self.phi
    }

    fn phi_qpoly(&self) -> QPoly {
        QPoly::from_coeffs(self.phi.iter().map(|c| BigRational::from_integer(c.clone())).collect())
    }
}

#[derive(Clone)]
pub struct CycloNum {
    field: Arc<CycloField>,
    num: Vec<BigInt>,
    den: BigInt,
}

impl CycloNum {
    pub fn zero(field: &Arc<CycloField>) -> Self {
        CycloNum {
            field: field.clone(),
            num: vec![BigInt::zero(); field.degree],
            den: BigInt::one(),
        }
    }

    pub fn one(field: &Arc<CycloField>) -> Self {
        Self::from_int(field, 1)
    }

    pub fn from_int(field: &Arc<CycloField>, n: i64) -> Self {
        Self::from_rational(field, BigRational::from_integer(n.into()))
    }

    pub fn from_rational(field: &Arc<CycloField>, r: BigRational) -> Self {
        let mut out = Self::zero(field);
        out.num[0] = r.numer().clone();
        out.den = r.denom().clone();
        out.normalize();
        out
    }

    /// `zeta^k` for any integer `k`.
    pub fn zeta_pow(field: &Arc<CycloField>, k: i64) -> Self {
        let idx = k.rem_euclid(field.order as i64) as usize;
        CycloNum {
            field: field.clone(),
            num: field.powers[idx].clone(),
            den: BigInt::one(),
        }
    }

    /// Builds an element from power-basis coefficients; extra entries beyond
    /// the degree are reduced modulo `Phi_N`.
    pub fn from_coeffs(field: &Arc<CycloField>, coeffs: &[BigRational]) -> Self {
        let mut acc = Self::zero(field);
        for (k, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = Self::zeta_pow(field, k as i64).scale(c);
            acc = &acc + &term;
        }
        acc
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    /// Power-basis coefficients as reduced rationals.
    pub fn coeffs(&self) -> Vec<BigRational> {
        self.num
            .iter()
            .map(|n| BigRational::new(n.clone(), self.den.clone()))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(Zero::is_zero)
    }

    /// The element as a rational number, if it lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        self.num[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| BigRational::new(self.num[0].clone(), self.den.clone()))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = CycloNum {
            field: self.field.clone(),
            num: self.num.iter().map(|n| n * c.numer()).collect(),
            den: &self.den * c.denom(),
        };
        out.normalize();
        out
    }

    pub fn to_complex(&self) -> Complex64 {
        let den = self.den.to_f64().unwrap_or(f64::INFINITY);
        let mut acc = Complex64::new(0.0, 0.0);
        for (n, z) in self.num.iter().zip(&self.field.zeta_c64) {
            if !n.is_zero() {
                acc += z * n.to_f64().unwrap_or(f64::NAN);
            }
        }
        acc / den
    }

    /// Multiplicative inverse through the extended gcd with `Phi_N`.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let a = QPoly::from_coeffs(self.coeffs());
        let (g, s, _) = QPoly::ext_gcd(&a, &self.field.phi_qpoly());
        // Phi_N is irreducible, so any nonzero reduced element is coprime to it.
        debug_assert!(g.is_one());
        Ok(Self::from_coeffs(&self.field, s.coeffs()))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        self.check_field(rhs)?;
        Ok(self * &rhs.inv()?)
    }

    fn check_field(&self, rhs: &Self) -> Result<()> {
        if self.field.order != rhs.field.order {
            return Err(Error::FieldMismatch(self.field.order, rhs.field.order));
        }
        Ok(())
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -&self.den;
            for n in &mut self.num {
                *n = -&*n;
            }
        }
        if self.is_zero() {
            self.den = BigInt::one();
            return;
        }
        if self.den.is_one() {
            return;
        }
        let mut g = self.den.clone();
        for n in &self.num {
            if g.is_one() {
                return;
            }
            if !n.is_zero() {
                g = g.gcd(n);
            }
        }
        if !g.is_one() {
            for n in &mut self.num {
                *n /= &g;
            }
            self.den /= &g;
        }
    }

    fn assert_same_field(&self, rhs: &Self) {
        assert_eq!(
            self.field.order, rhs.field.order,
            "cyclotomic field mismatch; use checked arithmetic to get an error"
        );
    }
}

/// Binary operation selector for [`cyclo_ops`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CycloOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Checked binary arithmetic; reports field mismatch and division by zero.
pub fn cyclo_ops(a: &CycloNum, b: &CycloNum, op: CycloOp) -> Result<CycloNum> {
    a.check_field(b)?;
    Ok(match op {
        CycloOp::Add => a + b,
        CycloOp::Sub => a - b,
        CycloOp::Mul => a * b,
        CycloOp::Div => a.checked_div(b)?,
    })
}

impl PartialEq for CycloNum {
    fn eq(&self, other: &Self) -> bool {
        self.field.order == other.field.order && self.den == other.den && self.num == other.num
    }
}

impl Eq for CycloNum {}

impl Hash for CycloNum {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.order.hash(state);
        self.num.hash(state);
        self.den.hash(state);
    }
}

impl fmt::Debug for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycloNum[{}](", self.field.order)?;
        fmt::Display::fmt(self, f)?;
        f.write_str(")")
    }
}

impl fmt::Display for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        QPoly::from_coeffs(self.coeffs()).fmt_in(f, "z", 0)
    }
}

impl Add for &CycloNum {
    type Output = CycloNum;
    fn add(self, rhs: &CycloNum) -> CycloNum {
        self.assert_same_field(rhs);
        let mut out = if self.den == rhs.den {
            CycloNum {
                field: self.field.clone(),
                num: self.num.iter().zip(&rhs.num).map(|(a, b)| a + b).collect(),
                den: self.den.clone(),
            }
        } else {
            CycloNum {
                field: self.field.clone(),
                num: self
                    .num
                    .iter()
                    .zip(&rhs.num)
                    .map(|(a, b)| a * &rhs.den + b * &self.den)
                    .collect(),
                den: &self.den * &rhs.den,
            }
        };
        out.normalize();
        out
    }
}

impl Neg for &CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        CycloNum {
            field: self.field.clone(),
            num: self.num.iter().map(|a| -a).collect(),
            den: self.den.clone(),
        }
    }
}

impl Sub for &CycloNum {
    type Output = CycloNum;
    fn sub(self, rhs: &CycloNum) -> CycloNum {
        self + &(-rhs)
    }
}

impl Mul for &CycloNum {
    type Output = CycloNum;
    fn mul(self, rhs: &CycloNum) -> CycloNum {
        self.assert_same_field(rhs);
        let n = self.field.degree;
        let mut prod = vec![BigInt::zero(); 2 * n - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.num.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        let phi = &self.field.phi;
        for k in (n..2 * n - 1).rev() {
            if prod[k].is_zero() {
                continue;
            }
            let c = std::mem::take(&mut prod[k]);
            for j in 0..n {
                if !phi[j].is_zero() {
                    prod[k - n + j] -= &c * &phi[j];
                }
            }
        }
        prod.truncate(n);
        let mut out = CycloNum {
            field: self.field.clone(),
            num: prod,
            den: &self.den * &rhs.den,
        };
        out.normalize();
        out
    }
}

impl Serialize for CycloNum {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let coeffs = self.coeffs();
        let mut seq = serializer.serialize_seq(Some(coeffs.len()))?;
        for c in &coeffs {
            seq.serialize_element(&[c.numer().to_string(), c.denom().to_string()])?;
        }
        seq.end()
    }
}

impl CycloNum {
    /// Image under the inclusion Q(zeta_n) -> Q(zeta_m), for `n | m`.
    pub fn embed(&self, target: &Arc<CycloField>) -> Result<Self> {
        let (n, m) = (self.field().order(), target.order());
        if m % n != 0 {
            return Err(Error::FieldMismatch(n, m));
        }
        let step = (m / n) as i64;
        let mut out = CycloNum::zero(target);
        for (k, c) in self.coeffs().iter().enumerate() {
            if !c.is_zero() {
                out = &out + &CycloNum::zeta_pow(target, k as i64 * step).scale(c);
            }
        }
        Ok(out)
    }
}

impl CycloNum {
    /// Inverse of the JSON encoding: a list of `[numerator, denominator]`
    /// decimal string pairs, one per power-basis coefficient.
    pub fn from_json(field: &Arc<CycloField>, value: &serde_json::Value) -> Result<Self> {
        let arr = value
            .as_array()
            .ok_or_else(|| Error::Malformed("cyclotomic number must be an array".into()))?;
        if arr.len() != field.degree {
            return Err(Error::Malformed(format!(
                "expected {} coefficients, found {}",
                field.degree,
                arr.len()
            )));
        }
        let coeffs = arr
            .iter()
            .map(|pair| {
                let parse = |v: &serde_json::Value| -> Result<BigInt> {
                    v.as_str()
                        .and_then(|s| s.parse::<BigInt>().ok())
                        .ok_or_else(|| Error::Malformed(format!("bad integer string {v}")))
                };
                match pair.as_array().map(Vec::as_slice) {
                    Some([n, d]) => {
                        let d = parse(d)?;
                        if d.is_zero() {
                            return Err(Error::Malformed("zero denominator".into()));
                        }
                        Ok(BigRational::new(parse(n)?, d))
                    }
                    _ => Err(Error::Malformed("coefficient must be a [num, den] pair".into())),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_coeffs(field, &coeffs))
    }
}
