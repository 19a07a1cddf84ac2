//! Null-cone membership tests for tensors under products of special linear
//! groups, together with the supporting machinery: quantum marginals, tensor
//! scaling, capacity estimates, combinatorial deficiency certificates,
//! symbolic invariants (Cayley Omega process, Reynolds operators, spanning
//! invariant evaluation), and slice-rank bounds.
//!
//! A tensor `X` in `Ten(n0, n1, ..., nd)` is acted on along axes `1..=d` by
//! `SL(n1) x ... x SL(nd)`; axis `0` is a passive multiplicity axis. `X` lies
//! in the *null cone* when the zero tensor is in its orbit closure, or
//! equivalently when `inf { ||g . X||^2 : g in the group }` is zero. The
//! central algorithm ([`scaling::scale`]) alternately normalizes one axis
//! marginal at a time and either drives the marginals toward uniform
//! (certifying membership *outside* the null cone) or finds one of three
//! null-cone certificates (a singular marginal, a collapse of the norm below
//! the capacity floor, or exhaustion of a certified iteration budget).
//!
//! Dual routes to the same decision are provided and cross-checked rather
//! than merged:
//!
//! * [`duality`] — one-parameter subgroup certificates: a support is
//!   *deficient* exactly when an integer weight vector proves instability,
//!   and exactly when no doubly-stochastic-like witness exists (decided by an
//!   exact rational LP).
//! * [`invariants`] — a tensor is outside the null cone exactly when some
//!   invariant polynomial is nonzero on it; witnesses are found by evaluating
//!   spanning invariants directly or by applying Reynolds operators built
//!   from the Cayley Omega process.
//! * [`slicerank`] — slice rank below the side length certifies null-cone
//!   membership with a quantitative instability bound.
//!
//! Arithmetic discipline: tensors built from integer data carry an exact
//! Gaussian-rational view used for every certificate-grade decision (ranks,
//! supports, invariant evaluation); floating point is used only for the
//! scaling iteration itself, whose guarantees are inequalities with explicit
//! slack. Randomness is always taken from a caller-supplied seed and each
//! work item derives its own generator, so results are reproducible and
//! independent of thread count. The `parallel` feature (default) enables
//! rayon-backed data parallelism; disabling it yields a fully sequential
//! build with identical outputs.

pub mod duality;
pub mod error;
pub mod invariants;
pub mod numerics;
pub mod scaling;
pub mod slicerank;
pub mod tensor;
pub(crate) mod util;

pub use error::{Error, Result};
pub use numerics::cmatrix::CMatrix;
pub use numerics::rational::{RatComplex, RationalMatrix};
pub use tensor::{Support, Tensor};
