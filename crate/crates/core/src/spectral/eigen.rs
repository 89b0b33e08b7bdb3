//! Dense complex eigen-solver: characteristic polynomial by
//! Faddeev–LeVerrier, roots by Durand–Kerner, eigenvectors from null
//! spaces.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

pub const MAX_EIGEN_DIM: usize = 64;
const MAX_ITER: usize = 500;
const STEP_TOL: f64 = 1e-12;
/// Largest accepted residual `|(M - value) v|`, relative to `max(1, |M|)`.
pub const EIGEN_RESIDUAL_TOL: f64 = 1e-8;

type C = Complex64;

fn c0() -> C {
    C::new(0.0, 0.0)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EigenPair {
    #[serde(serialize_with = "ser_complex")]
    pub value: C,
    #[serde(serialize_with = "ser_vector")]
    pub vector: Vec<C>,
    /// `|(M - value) vector|`.
    pub residual: f64,
}

pub(crate) fn ser_complex<S: serde::Serializer>(z: &C, s: S) -> std::result::Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

pub(crate) fn ser_vector<S: serde::Serializer>(v: &[C], s: S) -> std::result::Result<S::Ok, S::Error> {
    v.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>().serialize(s)
}

/// Coefficients `c_0 .. c_n` (ascending, `c_n = 1`) of `det(t I - M)`.
pub fn char_poly(m: &Matrix<C>) -> Vec<C> {
    let n = m.rows();
    let mut c = vec![c0(); n + 1];
    c[n] = C::new(1.0, 0.0);
    let mut mk = Matrix::from_vec(n, n, vec![c0(); n * n]);
    for k in 1..=n {
        for i in 0..n {
            mk[(i, i)] += c[n - k + 1];
        }
        let amk = m.mul(&mk);
        c[n - k] = -amk.trace() / k as f64;
        mk = amk;
    }
    c
}

fn horner(c: &[C], z: C) -> C {
    c.iter().rev().fold(c0(), |acc, &a| acc * z + a)
}

/// Roots of the monic polynomial with ascending coefficients `c` by
/// simultaneous Weierstrass iteration.
///
/// Converges when every correction falls below `1e-12` relative to the root
/// size. Clustered roots converge only linearly, so the iteration is also
/// accepted when each iterate is a root to within the rounding error of
/// evaluating the polynomial there.
pub fn durand_kerner(c: &[C]) -> Result<Vec<C>> {
    let n = c.len() - 1;
    if n == 0 {
        return Ok(Vec::new());
    }
    let seed = C::new(0.4, 0.9);
    let mut z: Vec<C> = (0..n).map(|k| seed.powu(k as u32)).collect();
    let abs_coeffs: Vec<f64> = c.iter().map(|a| a.norm()).collect();
    let backward_ok = |z: &[C]| {
        z.iter().all(|&x| {
            let r = x.norm();
            let scale: f64 = abs_coeffs.iter().rev().fold(0.0, |acc, &a| acc * r + a);
            horner(c, x).norm() <= 64.0 * f64::EPSILON * scale
        })
    };
    let mut max_step = f64::INFINITY;
    for _ in 0..MAX_ITER {
        max_step = 0.0;
        for i in 0..n {
            let mut denom = C::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    denom *= z[i] - z[j];
                }
            }
            if denom.norm() == 0.0 {
                denom = C::new(f64::EPSILON, f64::EPSILON);
            }
            let step = horner(c, z[i]) / denom;
            z[i] -= step;
            max_step = max_step.max(step.norm() / z[i].norm().max(1.0));
        }
        if max_step < STEP_TOL || backward_ok(&z) {
            return Ok(z);
        }
    }
    Err(Error::NoConvergence {
        iterations: MAX_ITER,
        max_step,
        best: z,
    })
}

/// One Newton step on each simple root; keeps the old value when the step
/// does not reduce `|p|`.
fn polish(c: &[C], roots: &mut [C]) {
    let dc: Vec<C> = c.iter().enumerate().skip(1).map(|(k, a)| a * k as f64).collect();
    for z in roots.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = (horner(c, *z), horner(&dc, *z));
            if dp.norm() == 0.0 {
                break;
            }
            let cand = *z - p / dp;
            if horner(c, cand).norm() < p.norm() {
                *z = cand;
            } else {
                break;
            }
        }
    }
}

fn lex(a: &C, b: &C) -> std::cmp::Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// Eigenvalues of `m`, sorted by real then imaginary part.
pub fn eigenvalues(m: &Matrix<C>) -> Result<Vec<C>> {
    assert!(m.is_square(), "eigenvalues of a non-square matrix");
    if m.rows() > MAX_EIGEN_DIM {
        return Err(Error::TooLarge(m.rows(), MAX_EIGEN_DIM));
    }
    if m.rows() == 1 {
        return Ok(vec![m[(0, 0)]]);
    }
    let c = char_poly(m);
    let mut roots = durand_kerner(&c)?;
    polish(&c, &mut roots);
    roots.sort_by(lex);
    Ok(roots)
}

/// Basis of the null space of `a`, by Gaussian elimination with partial
/// pivoting; columns whose best pivot is at most `thr` count as free.
pub fn null_space(a: &Matrix<C>, thr: f64) -> Vec<Vec<C>> {
    let (rows, cols) = (a.rows(), a.cols());
    let mut m = a.clone();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut r = 0;
    for col in 0..cols {
        if r == rows {
            break;
        }
        let (best, mag) = (r..rows)
            .map(|i| (i, m[(i, col)].norm()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .expect("non-empty range");
        if mag <= thr {
            continue;
        }
        for j in 0..cols {
            let t = m[(r, j)];
            m[(r, j)] = m[(best, j)];
            m[(best, j)] = t;
        }
        let p = m[(r, col)];
        for j in 0..cols {
            m[(r, j)] /= p;
        }
        for i in 0..rows {
            if i != r {
                let f = m[(i, col)];
                if f.norm() != 0.0 {
                    for j in 0..cols {
                        let v = m[(r, j)];
                        m[(i, j)] -= f * v;
                    }
                }
            }
        }
        pivots.push((r, col));
        r += 1;
    }
    let pivot_cols: Vec<usize> = pivots.iter().map(|p| p.1).collect();
    (0..cols)
        .filter(|c| !pivot_cols.contains(c))
        .map(|free| {
            let mut v = vec![c0(); cols];
            v[free] = C::new(1.0, 0.0);
            for &(pr, pc) in &pivots {
                v[pc] = -m[(pr, free)];
            }
            normalize(&v)
        })
        .collect()
}

pub fn norm(v: &[C]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Unit vector along `v`, with the phase fixed so that the entry of largest
/// modulus (first such, ties within 1e-9) is real and positive.
pub fn normalize(v: &[C]) -> Vec<C> {
    let n = norm(v);
    if n == 0.0 {
        return v.to_vec();
    }
    let big = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let anchor = v.iter().find(|z| z.norm() >= big * (1.0 - 1e-9)).copied().unwrap_or(C::new(1.0, 0.0));
    let phase = anchor.conj() / anchor.norm();
    v.iter().map(|z| z * phase / n).collect()
}

pub(crate) fn residual(m: &Matrix<C>, value: C, v: &[C]) -> f64 {
    let mv = m.apply(v);
    norm(&mv.iter().zip(v).map(|(a, b)| a - value * b).collect::<Vec<_>>())
}

/// Groups sorted eigenvalues that agree to `1e-6` relative.
fn clusters(values: &[C]) -> Vec<(C, usize)> {
    let mut out: Vec<(Vec<C>, C)> = Vec::new();
    'outer: for &v in values {
        for (members, centre) in out.iter_mut() {
            if (v - *centre).norm() <= 1e-6 * v.norm().max(1.0) {
                members.push(v);
                *centre = members.iter().sum::<C>() / members.len() as f64;
                continue 'outer;
            }
        }
        out.push((vec![v], v));
    }
    out.into_iter().map(|(m, c)| (c, m.len())).collect()
}

/// Eigenvalues and unit eigenvectors of a diagonalizable matrix, sorted by
/// eigenvalue. Repeated eigenvalues contribute one pair per independent
/// eigenvector.
pub fn eigen_solve(m: &Matrix<C>) -> Result<Vec<EigenPair>> {
    let values = eigenvalues(m)?;
    let n = m.rows();
    let scale = m.max_abs().max(1.0);
    let mut out = Vec::with_capacity(n);
    for (value, mult) in clusters(&values) {
        let shifted = m.sub_scalar(&value);
        let base = m.max_abs().max(f64::MIN_POSITIVE);
        let mut thr = 1e-10 * base;
        let mut basis = null_space(&shifted, thr);
        while basis.len() < mult && thr < 1e-5 * base {
            thr *= 10.0;
            basis = null_space(&shifted, thr);
        }
        let accepted: Vec<EigenPair> = basis
            .into_iter()
            .map(|v| EigenPair {
                value,
                residual: residual(m, value, &v),
                vector: v,
            })
            .filter(|p| p.residual <= EIGEN_RESIDUAL_TOL * scale)
            .collect();
        if accepted.len() < mult {
            return Err(Error::NotDiagonalizable {
                value,
                algebraic: mult,
                geometric: accepted.len(),
            });
        }
        out.extend(accepted.into_iter().take(mult));
    }
    Ok(out)
}

/// Pairs up two multisets of complex numbers by nearest unused neighbour,
/// processing `a` in sorted order. Returns the largest pairing distance, or
/// `None` if sizes differ or some pair is farther apart than `tol` relative
/// to `max(1, |a_i|)`.
pub fn match_multisets(a: &[C], b: &[C], tol: f64) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    let mut a = a.to_vec();
    a.sort_by(lex);
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for x in &a {
        let (j, d) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, y)| (j, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))?;
        if d > tol * x.norm().max(1.0) {
            return None;
        }
        used[j] = true;
        worst = worst.max(d);
    }
    Some(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    fn mat(n: usize, v: &[f64]) -> Matrix<C> {
        Matrix::from_vec(n, n, v.iter().map(|&x| c(x, 0.0)).collect())
    }

    #[test]
    fn identity_has_double_root() {
        let pairs = eigen_solve(&mat(2, &[1.0, 0.0, 0.0, 1.0])).unwrap();
        assert_eq!(pairs.len(), 2);
        for p in &pairs {
            assert!((p.value - c(1.0, 0.0)).norm() < 1e-7);
        }
    }

    #[test]
    fn swap_matrix() {
        let pairs = eigen_solve(&mat(2, &[0.0, -1.0, -1.0, 0.0])).unwrap();
        assert!((pairs[0].value - c(-1.0, 0.0)).norm() < 1e-12);
        assert!((pairs[1].value - c(1.0, 0.0)).norm() < 1e-12);
        assert!(pairs.iter().all(|p| p.residual < 1e-12));
    }

    #[test]
    fn diagonal_roots_of_unity() {
        let w = C::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        let m = Matrix::from_vec(2, 2, vec![w, c(0.0, 0.0), c(0.0, 0.0), w.conj()]);
        let vals = eigenvalues(&m).unwrap();
        assert!(match_multisets(&vals, &[w, w.conj()], 1e-12).is_some());
    }

    #[test]
    fn jordan_block_is_rejected() {
        let err = eigen_solve(&mat(2, &[1.0, 1.0, 0.0, 1.0])).unwrap_err();
        assert!(matches!(err, Error::NotDiagonalizable { algebraic: 2, geometric: 1, .. }));
    }

    #[test]
    fn char_poly_of_companion() {
        // companion matrix of t^3 - 6t^2 + 11t - 6
        let m = mat(3, &[0.0, 0.0, 6.0, 1.0, 0.0, -11.0, 0.0, 1.0, 6.0]);
        let p = char_poly(&m);
        for (got, want) in p.iter().zip([-6.0, 11.0, -6.0, 1.0]) {
            assert!((got - c(want, 0.0)).norm() < 1e-12);
        }
        let vals = eigenvalues(&m).unwrap();
        assert!(match_multisets(&vals, &[c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)], 1e-10).is_some());
    }

    #[test]
    fn size_limit() {
        let big = Matrix::from_vec(65, 65, vec![c(0.0, 0.0); 65 * 65]);
        assert!(matches!(eigenvalues(&big), Err(Error::TooLarge(65, 64))));
    }

    #[test]
    fn multiset_matching() {
        let a = [c(1.0, 0.0), c(1.0, 0.0), c(0.0, 2.0)];
        assert!(match_multisets(&a, &[c(0.0, 2.0), c(1.0, 1e-12), c(1.0, 0.0)], 1e-9).is_some());
        assert!(match_multisets(&a, &[c(0.0, 2.0), c(0.0, 2.0), c(1.0, 0.0)], 1e-9).is_none());
        assert!(match_multisets(&a, &a[..2], 1e-9).is_none());
    }
}
