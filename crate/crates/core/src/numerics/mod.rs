//! Numerical and exact-arithmetic kernels.
//!
//! Three layers, kept deliberately separate:
//!
//! * [`rational`] — exact arithmetic over the Gaussian rationals `Q(i)` and
//!   exact matrix rank. Every certificate-grade decision (singularity of a
//!   marginal, support membership, invariant vanishing) routes through this
//!   layer.
//! * [`cmatrix`] — small dense complex matrices in `f64`, used by the
//!   floating scaling iteration. No external linear-algebra backend: the
//!   matrices involved are tiny and determinism across platforms and thread
//!   counts matters more than raw speed.
//! * [`eig`] — a cyclic Jacobi eigensolver for Hermitian matrices with a
//!   deterministic sweep order, and the axis-normalization matrix
//!   `det(rho)^(1/(2n)) * rho^(-1/2)` built from it.

pub mod cmatrix;
pub mod eig;
pub mod rational;

pub use cmatrix::CMatrix;
pub use eig::{herm_eig, scaling_matrix, EigenDecomposition};
pub use rational::{rational_rank, RatComplex, RationalMatrix};
