use num_complex::Complex64;
use num_rational::BigRational;
use serde::Serialize;

use super::{build_family1, build_family2_exact, Family1Params, Family2Exact, GenMats, Generators, Representation, Sign};
use crate::error::Result;
use crate::matrix::Matrix;
use crate::scalar::{FieldElem, RootContext};
use crate::spectral::{eigenvalues, match_multisets};

/// Tolerance for every comparison in the intersection check.
const INTERSECTION_TOL: f64 = 1e-8;

#[derive(Clone, Debug, Serialize)]
pub struct IntersectionReport {
    pub sign: super::Sign,
    pub dim: usize,
    pub z_spectrum_family1: Vec<[f64; 2]>,
    pub z_spectrum_family2: Vec<[f64; 2]>,
    pub z_spectra_match: bool,
    pub j_spectrum_family1: Vec<[f64; 2]>,
    pub j_spectrum_family2: Vec<[f64; 2]>,
    pub j_spectra_match: bool,
    pub words_checked: usize,
    pub max_trace_residual: f64,
    pub mismatched_words: Vec<String>,
    pub passed: bool,
}

/// All words of length 1..=max_len over {X, Y, Z}, shortest first.
fn words(max_len: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<u8>> = vec![Vec::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| (0..3u8).map(move |l| [w.as_slice(), &[l]].concat()))
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

fn word_name(w: &[u8]) -> String {
    w.iter().map(|&l| ["X", "Y", "Z"][l as usize]).collect::<Vec<_>>().join("*")
}

fn word_traces<T: FieldElem>(env: &T::Env, m: &GenMats<T>, ws: &[Vec<u8>]) -> Vec<Complex64> {
    ws.iter()
        .map(|w| {
            let mut acc = Matrix::identity(env, m.dim());
            for &l in w {
                acc = acc.mul([&m.x, &m.y, &m.z][l as usize]);
            }
            acc.trace().to_c64()
        })
        .collect()
}

fn traces(rep: &Representation, ws: &[Vec<u8>]) -> Vec<Complex64> {
    match rep.generators() {
        Generators::Exact { env, mats } => word_traces(env, mats, ws),
        Generators::Approx { env, mats } => word_traces(env, mats, ws),
    }
}

fn pairs(v: &[Complex64]) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

/// Compares `family1(r = Q-1, sign)` with the cyclic representation at
/// `lambda = sign q^(1-Q)`, `a = b = 0`, both built exactly.
///
/// Isomorphic representations share the spectra of Z and J and the trace
/// of every word in the generators; the check compares those invariants
/// for all words up to length four.
pub fn intersection_check(ctx: &RootContext, sign: Sign) -> Result<IntersectionReport> {
    let q = ctx.q();
    let f1 = build_family1(ctx, Family1Params { r: q - 1, sign })?;
    let f2 = build_family2_exact(
        ctx,
        Family2Exact {
            lambda_sign: sign,
            lambda_exp: 1 - q as i64,
            a: BigRational::from_integer(0.into()),
            b: BigRational::from_integer(0.into()),
        },
    )?;
    let (m1, m2) = (f1.complex_mats(), f2.complex_mats());
    let z1 = eigenvalues(&m1.z)?;
    let z2 = eigenvalues(&m2.z)?;
    let j1 = eigenvalues(&f1.j_complex())?;
    let j2 = eigenvalues(&f2.j_complex())?;
    let z_match = match_multisets(&z1, &z2, INTERSECTION_TOL).is_some();
    let j_match = match_multisets(&j1, &j2, INTERSECTION_TOL).is_some();

    let ws = words(4);
    let (t1, t2) = (traces(&f1, &ws), traces(&f2, &ws));
    let mut max_res: f64 = 0.0;
    let mut mismatched = Vec::new();
    for ((w, a), b) in ws.iter().zip(&t1).zip(&t2) {
        let res = (a - b).norm();
        max_res = max_res.max(res);
        if res > INTERSECTION_TOL * a.norm().max(b.norm()).max(1.0) {
            mismatched.push(word_name(w));
        }
    }
    Ok(IntersectionReport {
        sign,
        dim: q as usize,
        z_spectrum_family1: pairs(&z1),
        z_spectrum_family2: pairs(&z2),
        z_spectra_match: z_match,
        j_spectrum_family1: pairs(&j1),
        j_spectrum_family2: pairs(&j2),
        j_spectra_match: j_match,
        words_checked: ws.len(),
        max_trace_residual: max_res,
        passed: z_match && j_match && mismatched.is_empty(),
        mismatched_words: mismatched,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_count() {
        assert_eq!(words(4).len(), 3 + 9 + 27 + 81);
        assert_eq!(word_name(&[0, 2, 1]), "X*Z*Y");
    }

    #[test]
    fn families_meet_for_q3() {
        let ctx = RootContext::new(1, 3).unwrap();
        let r = intersection_check(&ctx, Sign::Plus).unwrap();
        assert!(r.passed, "{r:?}");
        let q = ctx.approx_env().q_pow_complex(Complex64::new(1.0, 0.0));
        let want = [Complex64::new(1.0, 0.0), q, q * q];
        let got: Vec<Complex64> = r.z_spectrum_family1.iter().map(|p| Complex64::new(p[0], p[1])).collect();
        assert!(match_multisets(&got, &want, 1e-12).is_some());
    }

    #[test]
    fn families_meet_for_q5_minus() {
        let ctx = RootContext::new(2, 5).unwrap();
        assert!(intersection_check(&ctx, Sign::Minus).unwrap().passed);
    }
}
