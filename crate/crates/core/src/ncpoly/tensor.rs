use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use super::{fmt_word, push_canonical, Letter, NcPoly, QCoeff, Word};

/// Element of the two-fold tensor power; multiplication acts legwise.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct TensorPoly {
    terms: BTreeMap<(Word, Word), QCoeff>,
}

impl TensorPoly {
    pub fn zero() -> Self {
        TensorPoly::default()
    }

    pub fn one() -> Self {
        Self::pure(&NcPoly::one(), &NcPoly::one())
    }

    /// `a ⊗ b`.
    pub fn pure(a: &NcPoly, b: &NcPoly) -> Self {
        let mut out = TensorPoly::zero();
        for (wa, ca) in a.terms() {
            for (wb, cb) in b.terms() {
                out.add_term((wa.clone(), wb.clone()), ca.mul(cb));
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Word, Word), &QCoeff)> {
        self.terms.iter()
    }

    fn add_term(&mut self, key: (Word, Word), c: QCoeff) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(key.clone()).or_insert_with(QCoeff::zero);
        *slot = slot.add(&c);
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    /// Applies `f` to each leg independently (a linear map on each factor).
    pub fn map_legs(&self, f: impl Fn(&NcPoly) -> NcPoly, g: impl Fn(&NcPoly) -> NcPoly) -> TensorPoly {
        let mut out = TensorPoly::zero();
        for ((wa, wb), c) in &self.terms {
            let part = TensorPoly::pure(&f(&NcPoly::word(wa)), &g(&NcPoly::word(wb)));
            for (k, v) in part.terms {
                out.add_term(k, v.mul(c));
            }
        }
        out
    }

    /// Contracts the left leg with a scalar-valued map.
    pub fn contract_left(&self, f: impl Fn(&[Letter]) -> QCoeff) -> NcPoly {
        let mut out = NcPoly::zero();
        for ((wa, wb), c) in &self.terms {
            out.add_term(wb.clone(), f(wa).mul(c));
        }
        out
    }

    /// Contracts the right leg with a scalar-valued map.
    pub fn contract_right(&self, f: impl Fn(&[Letter]) -> QCoeff) -> NcPoly {
        let mut out = NcPoly::zero();
        for ((wa, wb), c) in &self.terms {
            out.add_term(wa.clone(), f(wb).mul(c));
        }
        out
    }
}

impl Add for &TensorPoly {
    type Output = TensorPoly;
    fn add(self, rhs: &TensorPoly) -> TensorPoly {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }
}

impl Sub for &TensorPoly {
    type Output = TensorPoly;
    fn sub(self, rhs: &TensorPoly) -> TensorPoly {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(k.clone(), c.neg());
        }
        out
    }
}

impl Mul for &TensorPoly {
    type Output = TensorPoly;
    fn mul(self, rhs: &TensorPoly) -> TensorPoly {
        let mut out = TensorPoly::zero();
        for ((a1, a2), ca) in &self.terms {
            for ((b1, b2), cb) in &rhs.terms {
                let mut w1 = a1.clone();
                push_canonical(&mut w1, b1);
                let mut w2 = a2.clone();
                push_canonical(&mut w2, b2);
                out.add_term((w1, w2), ca.mul(cb));
            }
        }
        out
    }
}

impl fmt::Display for TensorPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, ((a, b), c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if !c.is_one() {
                write!(f, "{c}*")?;
            }
            f.write_str("(")?;
            if a.is_empty() {
                f.write_str("1")?;
            } else {
                fmt_word(a, f)?;
            }
            f.write_str(" ⊗ ")?;
            if b.is_empty() {
                f.write_str("1")?;
            } else {
                fmt_word(b, f)?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for TensorPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Letter::*;

    #[test]
    fn legwise_product_cancels_inverses() {
        let z = TensorPoly::pure(&NcPoly::letter(Z), &NcPoly::letter(Z));
        let zi = TensorPoly::pure(&NcPoly::letter(Zinv), &NcPoly::letter(Zinv));
        assert_eq!(&z * &zi, TensorPoly::one());
    }

    #[test]
    fn contraction() {
        let t = &TensorPoly::pure(&NcPoly::one(), &NcPoly::letter(X))
            + &TensorPoly::pure(&NcPoly::letter(X), &NcPoly::letter(Z));
        let counit = |w: &[Letter]| if w.is_empty() { QCoeff::one() } else { QCoeff::zero() };
        assert_eq!(t.contract_left(counit), NcPoly::letter(X));
    }
}
