//! Coefficients in the rational function field Q(q).

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::poly::QPoly;

/// A reduced fraction `num(q) / den(q)` of ordinary polynomials; negative
/// powers of q live in the denominator. The denominator is monic and
/// coprime to the numerator, so structural equality is field equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QCoeff {
    num: QPoly,
    den: QPoly,
}

impl QCoeff {
    pub fn zero() -> Self {
        QCoeff {
            num: QPoly::zero(),
            den: QPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    pub fn from_rational(r: BigRational) -> Self {
        QCoeff {
            num: QPoly::constant(r),
            den: QPoly::one(),
        }
    }

    /// `q^k` for any integer `k`.
    pub fn q_pow(k: i64) -> Self {
        let one = BigRational::one();
        if k >= 0 {
            QCoeff {
                num: QPoly::monomial(one, k as usize),
                den: QPoly::one(),
            }
        } else {
            QCoeff {
                num: QPoly::one(),
                den: QPoly::monomial(one, k.unsigned_abs() as usize),
            }
        }
    }

    /// `c * q^k`.
    pub fn monomial(c: BigRational, k: i64) -> Self {
        Self::q_pow(k).scale(&c)
    }

    /// `[k]_q = (q^k - q^-k) / (q - q^-1)` for generic q.
    pub fn q_number(k: i64) -> Self {
        let num = Self::q_pow(k).sub(&Self::q_pow(-k));
        num.div(&Self::q_minus_qinv()).expect("q - q^-1 is nonzero")
    }

    /// `q - q^-1`.
    pub fn q_minus_qinv() -> Self {
        Self::q_pow(1).sub(&Self::q_pow(-1))
    }

    pub fn from_parts(num: QPoly, den: QPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut c = QCoeff { num, den };
        c.normalize();
        Ok(c)
    }

    pub fn numer(&self) -> &QPoly {
        &self.num
    }

    pub fn denom(&self) -> &QPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// The Laurent expansion `(poly, offset)` meaning `poly(q) * q^offset`,
    /// if the denominator is a power of q.
    pub fn as_laurent(&self) -> Option<(&QPoly, i64)> {
        let (c, k) = self.den.as_monomial()?;
        debug_assert!(c.is_one());
        Some((&self.num, -(k as i64)))
    }

    /// `c * q^k` if the coefficient is a single Laurent monomial.
    pub fn as_monomial(&self) -> Option<(BigRational, i64)> {
        let (num, off) = self.as_laurent()?;
        let (c, k) = num.as_monomial()?;
        Some((c.clone(), k as i64 + off))
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        match self.as_monomial() {
            Some((c, 0)) => Some(c),
            _ if self.is_zero() => Some(BigRational::zero()),
            _ => None,
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        QCoeff {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let mut out = if self.den == rhs.den {
            QCoeff {
                num: &self.num + &rhs.num,
                den: self.den.clone(),
            }
        } else {
            QCoeff {
                num: &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
                den: &self.den * &rhs.den,
            }
        };
        out.normalize();
        out
    }

    pub fn neg(&self) -> Self {
        QCoeff {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        if rhs.is_one() {
            return self.clone();
        }
        if self.is_one() {
            return rhs.clone();
        }
        let mut out = QCoeff {
            num: &self.num * &rhs.num,
            den: &self.den * &rhs.den,
        };
        out.normalize();
        out
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut out = QCoeff {
            num: self.den.clone(),
            den: self.num.clone(),
        };
        out.normalize();
        Ok(out)
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self.mul(&rhs.inv()?))
    }

    pub fn pow(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        Ok((0..k.unsigned_abs()).fold(Self::one(), |acc, _| acc.mul(&base)))
    }

    /// Evaluates at a complex value of q.
    pub fn eval(&self, q: Complex64) -> Complex64 {
        let ev = |p: &QPoly| {
            p.coeffs().iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| {
                acc * q + c.to_f64().unwrap_or(f64::NAN)
            })
        };
        ev(&self.num) / ev(&self.den)
    }

    /// True if the printed form starts with a minus sign.
    pub(crate) fn prints_negative(&self) -> bool {
        match self.as_laurent() {
            Some(_) => matches!(self.as_monomial(), Some((c, _)) if c.is_negative()),
            None => matches!(self.num.as_monomial(), Some((c, _)) if c.is_negative()),
        }
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den = QPoly::one();
            return;
        }
        // Cheap path: strip common powers of q before the general gcd.
        let common = self.num.valuation().unwrap().min(self.den.valuation().unwrap());
        if common > 0 {
            self.num = self.num.unshift(common);
            self.den = self.den.unshift(common);
        }
        if self.den.degree() != Some(0) && self.den.as_monomial().is_none() {
            let g = QPoly::gcd(&self.num, &self.den);
            if !g.is_one() {
                self.num = self.num.div_rem(&g).0;
                self.den = self.den.div_rem(&g).0;
            }
        }
        let lead = self.den.leading().unwrap().clone();
        if !lead.is_one() {
            let inv = lead.recip();
            self.num = self.num.scale(&inv);
            self.den = self.den.scale(&inv);
        }
    }

    fn fmt_poly_paren(p: &QPoly, offset: i64, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let single = p.as_monomial().is_some();
        if !single {
            f.write_str("(")?;
        }
        p.fmt_in(f, "q", offset)?;
        if !single {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for QCoeff {
    /// Laurent polynomials print as `q`-expressions; general fractions as
    /// `(num)/(den)`. The output parses back to the same value.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_laurent() {
            Some((num, off)) => {
                if num.as_monomial().is_some() || num.is_zero() {
                    num.fmt_in(f, "q", off)
                } else {
                    write!(f, "(")?;
                    num.fmt_in(f, "q", off)?;
                    write!(f, ")")
                }
            }
            None => {
                // Pull the q-power out of the denominator so both parts are
                // ordinary polynomials.
                Self::fmt_poly_paren(&self.num, 0, f)?;
                f.write_str("/")?;
                Self::fmt_poly_paren(&self.den, 0, f)
            }
        }
    }
}

impl fmt::Debug for QCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<i64> for QCoeff {
    fn from(n: i64) -> Self {
        QCoeff::from_int(n)
    }
}

impl From<BigInt> for QCoeff {
    fn from(n: BigInt) -> Self {
        QCoeff::from_rational(BigRational::from_integer(n))
    }
}
