//! Noncommutative Laurent polynomials in X, Y, Z, Z^-1 and J with
//! coefficients in Q(q), PBW rewriting modulo the defining relations, and
//! symbolic replays of the identities relating J and Z.

pub mod coeff;
pub mod hopf;
pub mod parse;
pub mod pbw;
pub mod proof;
pub mod tensor;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

pub use coeff::QCoeff;
pub use hopf::{hopf_symbolic_check, HopfCheck, HopfKind};
pub use parse::parse_expr;
pub use pbw::{pbw_normal_form, reduce_modulo_relations, substitute_j, MAX_WORD_LEN};
pub use proof::{identity_coefficients, lemma_check, lemma_check_with, IdentityExpansion, LemmaCertificate};
pub use tensor::TensorPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Letter {
    X,
    Y,
    Z,
    Zinv,
    J,
}

impl Letter {
    pub fn name(self) -> &'static str {
        match self {
            Letter::X => "X",
            Letter::Y => "Y",
            Letter::Z => "Z",
            Letter::Zinv => "Zi",
            Letter::J => "J",
        }
    }

    fn cancels(self, next: Letter) -> bool {
        matches!((self, next), (Letter::Z, Letter::Zinv) | (Letter::Zinv, Letter::Z))
    }
}

pub type Word = Vec<Letter>;

/// Appends `letters` to `word`, cancelling `Z Zi` and `Zi Z` at the seam.
pub(crate) fn push_canonical(word: &mut Word, letters: &[Letter]) {
    for &l in letters {
        if word.last().is_some_and(|&last| last.cancels(l)) {
            word.pop();
        } else {
            word.push(l);
        }
    }
}

pub(crate) fn canonical(letters: &[Letter]) -> Word {
    let mut w = Vec::with_capacity(letters.len());
    push_canonical(&mut w, letters);
    w
}

/// Finite sum of words with nonzero `QCoeff` coefficients. No word contains
/// an adjacent `Z Zi` or `Zi Z` pair.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct NcPoly {
    terms: BTreeMap<Word, QCoeff>,
}

impl NcPoly {
    pub fn zero() -> Self {
        NcPoly::default()
    }

    pub fn one() -> Self {
        Self::constant(QCoeff::one())
    }

    pub fn constant(c: QCoeff) -> Self {
        Self::monomial(c, &[])
    }

    pub fn letter(l: Letter) -> Self {
        Self::monomial(QCoeff::one(), &[l])
    }

    pub fn word(letters: &[Letter]) -> Self {
        Self::monomial(QCoeff::one(), letters)
    }

    pub fn monomial(c: QCoeff, letters: &[Letter]) -> Self {
        let mut p = NcPoly::zero();
        p.add_term(canonical(letters), c);
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &QCoeff)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, word: &[Letter]) -> QCoeff {
        self.terms.get(word).cloned().unwrap_or_else(QCoeff::zero)
    }

    /// The coefficient if the polynomial has no letters at all.
    pub fn as_scalar(&self) -> Option<QCoeff> {
        match self.terms.len() {
            0 => Some(QCoeff::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    pub fn contains(&self, l: Letter) -> bool {
        self.terms.keys().any(|w| w.contains(&l))
    }

    pub fn max_word_len(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    /// Adds `c * word`; `word` must already be canonical.
    pub(crate) fn add_term(&mut self, word: Word, c: QCoeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(word) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub(crate) fn into_terms(self) -> BTreeMap<Word, QCoeff> {
        self.terms
    }

    pub fn scale(&self, c: &QCoeff) -> Self {
        if c.is_zero() {
            return NcPoly::zero();
        }
        NcPoly {
            terms: self.terms.iter().map(|(w, a)| (w.clone(), a.mul(c))).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(NcPoly::one(), |acc, _| &acc * self)
    }

    /// Replaces letters by polynomials; letters mapped to `None` stay.
    pub fn substitute(&self, f: impl Fn(Letter) -> Option<NcPoly>) -> NcPoly {
        let mut out = NcPoly::zero();
        for (w, c) in &self.terms {
            let mut acc = NcPoly::constant(c.clone());
            for &l in w {
                acc = match f(l) {
                    Some(p) => &acc * &p,
                    None => &acc * &NcPoly::letter(l),
                };
            }
            out = &out + &acc;
        }
        out
    }

    /// Reverses every word (the antiautomorphism fixing each letter).
    pub fn reversed(&self) -> NcPoly {
        let mut out = NcPoly::zero();
        for (w, c) in &self.terms {
            let rev: Word = w.iter().rev().copied().collect();
            out.add_term(canonical(&rev), c.clone());
        }
        out
    }
}

impl Add for &NcPoly {
    type Output = NcPoly;
    fn add(self, rhs: &NcPoly) -> NcPoly {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }
}

impl Neg for &NcPoly {
    type Output = NcPoly;
    fn neg(self) -> NcPoly {
        NcPoly {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), c.neg())).collect(),
        }
    }
}

impl Sub for &NcPoly {
    type Output = NcPoly;
    fn sub(self, rhs: &NcPoly) -> NcPoly {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c.neg());
        }
        out
    }
}

impl Mul for &NcPoly {
    type Output = NcPoly;
    fn mul(self, rhs: &NcPoly) -> NcPoly {
        let mut out = NcPoly::zero();
        for (wa, ca) in &self.terms {
            for (wb, cb) in &rhs.terms {
                let mut w = wa.clone();
                push_canonical(&mut w, wb);
                out.add_term(w, ca.mul(cb));
            }
        }
        out
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for NcPoly {
            type Output = NcPoly;
            fn $m(self, rhs: NcPoly) -> NcPoly { (&self).$m(&rhs) }
        }
        impl $tr<&NcPoly> for NcPoly {
            type Output = NcPoly;
            fn $m(self, rhs: &NcPoly) -> NcPoly { (&self).$m(rhs) }
        }
        impl $tr<NcPoly> for &NcPoly {
            type Output = NcPoly;
            fn $m(self, rhs: NcPoly) -> NcPoly { self.$m(&rhs) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for NcPoly {
    type Output = NcPoly;
    fn neg(self) -> NcPoly {
        -&self
    }
}

impl From<Letter> for NcPoly {
    fn from(l: Letter) -> Self {
        NcPoly::letter(l)
    }
}

impl From<QCoeff> for NcPoly {
    fn from(c: QCoeff) -> Self {
        NcPoly::constant(c)
    }
}

pub(crate) fn fmt_word(w: &[Letter], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    for (i, l) in w.iter().enumerate() {
        if i > 0 {
            f.write_str("*")?;
        }
        f.write_str(l.name())?;
    }
    Ok(())
}

/// Writes `c*word` with the sign already stripped by the caller.
pub(crate) fn fmt_term(c: &QCoeff, w: &[Letter], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if w.is_empty() {
        return write!(f, "{c}");
    }
    if !c.is_one() {
        write!(f, "{c}*")?;
    }
    fmt_word(w, f)
}

impl fmt::Display for NcPoly {
    /// Prints in the CLI expression grammar; [`parse_expr`] inverts it.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let neg = c.prints_negative();
            let shown = if neg { c.neg() } else { c.clone() };
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            fmt_term(&shown, w, f)?;
        }
        Ok(())
    }
}

impl fmt::Debug for NcPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for NcPoly {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Letter::*;

    #[test]
    fn inverse_letters_cancel() {
        let p = &NcPoly::letter(Z) * &NcPoly::letter(Zinv);
        assert_eq!(p, NcPoly::one());
        let w = NcPoly::word(&[X, Z, Zinv, Zinv, Z, Y]);
        assert_eq!(w, NcPoly::word(&[X, Y]));
    }

    #[test]
    fn free_product_keeps_order() {
        let p = &NcPoly::letter(X) * &NcPoly::letter(Y);
        assert_eq!(p.len(), 1);
        assert!(p.coeff(&[X, Y]).is_one());
        assert!(p.coeff(&[Y, X]).is_zero());
    }

    #[test]
    fn additive_identity_and_cancellation() {
        let j = NcPoly::letter(J);
        assert_eq!(&j + &NcPoly::zero(), j);
        assert!((&j - &j).is_zero());
    }

    #[test]
    fn substitute_replaces_letters() {
        let p = NcPoly::word(&[X, Y]);
        let swapped = p.substitute(|l| match l {
            X => Some(NcPoly::letter(Y)),
            Y => Some(NcPoly::letter(X)),
            _ => None,
        });
        assert_eq!(swapped, NcPoly::word(&[Y, X]));
    }

    #[test]
    fn display_grammar() {
        let p = &NcPoly::monomial(QCoeff::q_pow(2), &[Y, X]) - &NcPoly::word(&[Z, Zinv, J]);
        assert_eq!(p.to_string(), "q^2*Y*X - J");
    }
}
