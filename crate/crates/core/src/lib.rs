//! Numerical toolkit for two-receiver broadcast channels and the
//! source broadcast problem.
//!
//! The crate computes capacity regions of binary and Gaussian broadcast
//! channels (with or without receiver side information), the matching
//! source regions for the binary uniform source under Hamming distortion
//! and for vector Gaussian sources under covariance distortion, and the
//! scaling thresholds that connect them: the region-containment factor
//! `kappa_star`, the point-to-point separation factor `kappa_dagger`,
//! and the Gaussian power threshold `p_star`.
//!
//! Every closed form has an independent brute-force counterpart
//! (Blahut-Arimoto for capacities, dense boundary sampling for region
//! containment, grid search for the Gaussian suprema) so results can be
//! cross-checked numerically.

pub mod binary_bc;
pub mod error;
pub mod gaussian;
pub mod infotheory;
pub mod linalg;
pub mod optim;
pub mod region;
pub mod source_hamming;

pub use error::{Error, Result};
