//! Eigenstructure of J: the cubic identity at matrix level, ladder chains,
//! the band structure of Z in the eigenbasis, and the search for a
//! unitarizing structure for the modified involution.

mod band;
mod eigen;
mod identity;
mod ladder;
mod unitarize;

pub use band::{chain_basis, tridiagonality_check, BandReport, BAND_TOL};
pub use eigen::{
    char_poly, durand_kerner, eigen_solve, eigenvalues, match_multisets, norm, normalize, null_space, EigenPair,
    EIGEN_RESIDUAL_TOL, MAX_EIGEN_DIM,
};
pub use identity::{verify_identity, IdentityReport};
pub use ladder::{
    image_vanishes, label_of, label_roots, ladder_apply, spectrum_chain, Direction, LadderChain, Link,
    LADDER_RESIDUAL_TOL, VANISH_TOL,
};
pub use unitarize::{unitarize_search, NamedResidual, UnitarizeReport, UnitarizingStructure, UNITARIZE_TOL};
