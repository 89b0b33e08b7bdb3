use num_complex::Complex64;
use serde::Serialize;

use super::ladder::{spectrum_chain, LadderChain};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::reps::Representation;

/// Largest off-band entry accepted, relative to `max(1, max|entry|)`.
pub const BAND_TOL: f64 = 1e-8;

#[derive(Clone, Debug, Serialize)]
pub struct BandReport {
    pub dim: usize,
    pub cyclic: bool,
    pub band_residual: f64,
    pub scale: f64,
    pub passed: bool,
}

/// Matrix whose columns are the chain eigenvectors, in chain order.
pub fn chain_basis(chain: &LadderChain) -> Matrix<Complex64> {
    let d = chain.len();
    let mut s = Matrix::from_vec(d, d, vec![Complex64::new(0.0, 0.0); d * d]);
    for (k, p) in chain.pairs.iter().enumerate() {
        for i in 0..d {
            s[(i, k)] = p.vector[i];
        }
    }
    s
}

/// `S^-1 M S`.
pub fn conjugate(rep: &Representation, s: &Matrix<Complex64>, m: &Matrix<Complex64>) -> Result<Matrix<Complex64>> {
    let inv = s
        .inverse(&rep.ctx().approx_env())
        .ok_or(Error::IncompleteChain {
            linked: 0,
            dim: s.rows(),
            partial: Vec::new(),
        })?;
    Ok(inv.mul(m).mul(s))
}

fn off_band(i: usize, j: usize, d: usize, cyclic: bool) -> bool {
    let gap = i.abs_diff(j);
    let gap = if cyclic { gap.min(d - gap) } else { gap };
    gap > 1
}

/// Checks that Z is tridiagonal in the chain-ordered eigenbasis of J:
/// plainly for the highest-weight family, with wrap-around corners for the
/// cyclic family.
pub fn tridiagonality_check(rep: &Representation) -> Result<BandReport> {
    let chain = spectrum_chain(rep)?;
    let cyclic = rep.provenance().is_family2();
    let s = chain_basis(&chain);
    let zc = conjugate(rep, &s, &rep.complex_mats().z)?;
    let d = zc.rows();
    let mut worst: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            if off_band(i, j, d, cyclic) {
                worst = worst.max(zc[(i, j)].norm());
            }
        }
    }
    let scale = zc.max_abs().max(1.0);
    Ok(BandReport {
        dim: d,
        cyclic,
        band_residual: worst,
        scale,
        passed: worst <= BAND_TOL * scale,
    })
}
