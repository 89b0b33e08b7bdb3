//! Rewriting to the ordered basis `Y^a X^b Z^c` modulo the defining
//! relations, and elimination of J.

use std::collections::BTreeMap;

use super::{canonical, Letter, NcPoly, QCoeff, Word};
use crate::error::{Error, Result};

/// Longest word the rewriter accepts.
pub const MAX_WORD_LEN: usize = 64;

struct Rules {
    q2: QCoeff,
    qm2: QCoeff,
    /// `q / (q - q^-1)`, the coefficient of `Z^2 - 1` in the `XY` rule.
    xy_const: QCoeff,
}

impl Rules {
    fn new() -> Self {
        Rules {
            q2: QCoeff::q_pow(2),
            qm2: QCoeff::q_pow(-2),
            xy_const: QCoeff::q_pow(1)
                .div(&QCoeff::q_minus_qinv())
                .expect("q - q^-1 is nonzero"),
        }
    }

    /// Replacement for the pair `(a, b)`, or `None` if already ordered.
    fn rewrite(&self, a: Letter, b: Letter) -> Option<Vec<(QCoeff, Vec<Letter>)>> {
        use Letter::*;
        Some(match (a, b) {
            (Z, X) => vec![(self.qm2.clone(), vec![X, Z])],
            (Z, Y) => vec![(self.q2.clone(), vec![Y, Z])],
            (Zinv, X) => vec![(self.q2.clone(), vec![X, Zinv])],
            (Zinv, Y) => vec![(self.qm2.clone(), vec![Y, Zinv])],
            (X, Y) => vec![
                (self.q2.clone(), vec![Y, X]),
                (self.xy_const.clone(), vec![Z, Z]),
                (self.xy_const.neg(), vec![]),
            ],
            _ => return None,
        })
    }
}

/// True if `w` already has the shape `Y^a X^b Z^c` with `c` of either sign.
pub fn is_normal_word(w: &[Letter]) -> bool {
    use Letter::*;
    let rank = |l: Letter| match l {
        Y => 0,
        X => 1,
        Z | Zinv => 2,
        J => 3,
    };
    !w.contains(&J)
        && w.windows(2).all(|p| rank(p[0]) <= rank(p[1]) && !(p[0] != p[1] && rank(p[0]) == 2))
}

/// Rewrites `p` into the normal order `Y^a X^b Z^c`.
///
/// Leftmost redex first, with a worklist keyed by word so equal words merge
/// before they are expanded further. The result is zero exactly when `p`
/// lies in the ideal generated by the defining relations.
pub fn pbw_normal_form(p: &NcPoly) -> Result<NcPoly> {
    if p.contains(Letter::J) {
        return Err(Error::ContainsJ);
    }
    let rules = Rules::new();
    let mut pending: BTreeMap<Word, QCoeff> = p.clone().into_terms();
    let mut done = NcPoly::zero();
    while let Some((word, c)) = pending.pop_last() {
        if word.len() > MAX_WORD_LEN {
            return Err(Error::WordTooLong(word.len(), MAX_WORD_LEN));
        }
        let redex = word
            .windows(2)
            .enumerate()
            .find_map(|(i, pair)| rules.rewrite(pair[0], pair[1]).map(|r| (i, r)));
        let Some((i, replacement)) = redex else {
            done.add_term(word, c);
            continue;
        };
        for (rc, middle) in replacement {
            let mut letters = word[..i].to_vec();
            letters.extend_from_slice(&middle);
            letters.extend_from_slice(&word[i + 2..]);
            let w = canonical(&letters);
            let coeff = c.mul(&rc);
            let slot = pending.entry(w).or_insert_with(QCoeff::zero);
            *slot = slot.add(&coeff);
        }
        pending.retain(|_, v| !v.is_zero());
    }
    Ok(done)
}

/// `J = (q X - q^-1 Y) Z^-1`.
pub fn j_expansion() -> NcPoly {
    let x = NcPoly::monomial(QCoeff::q_pow(1), &[Letter::X, Letter::Zinv]);
    let y = NcPoly::monomial(QCoeff::q_pow(-1), &[Letter::Y, Letter::Zinv]);
    &x - &y
}

/// Replaces every J by `(q X - q^-1 Y) Z^-1`.
pub fn substitute_j(p: &NcPoly) -> NcPoly {
    if !p.contains(Letter::J) {
        return p.clone();
    }
    let j = j_expansion();
    p.substitute(|l| (l == Letter::J).then(|| j.clone()))
}

/// `pbw_normal_form(substitute_j(p))`.
pub fn reduce_modulo_relations(p: &NcPoly) -> Result<NcPoly> {
    pbw_normal_form(&substitute_j(p))
}
