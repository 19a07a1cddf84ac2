//! Cyclic Jacobi eigendecomposition for Hermitian matrices and the axis
//! normalization matrix built from it.
//!
//! Jacobi with a fixed cyclic sweep order is used instead of a library
//! eigensolver because the matrices are tiny, the iteration is simple to
//! audit, and the result is bit-deterministic for a given input on a given
//! platform — which the scaling trace and report reproducibility rely on.

use super::cmatrix::CMatrix;
use crate::error::{Error, Result};
use num_complex::Complex64;

/// Eigenvalues ascending; `vectors` holds the corresponding orthonormal
/// eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

const MAX_SWEEPS: usize = 64;
const OFF_DIAGONAL_TOL: f64 = 1e-15;

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// The input must be Hermitian within `1e-12` relative to its Frobenius
/// norm. Sweeps visit the strict upper triangle in row-major order and stop
/// when the off-diagonal mass drops below `1e-15` relative, or after a fixed
/// number of sweeps. The reconstruction `V diag(values) V^*` matches the
/// input to `1e-10 * ||H||_F` (checked by tests, relied on by callers).
pub fn herm_eig(h: &CMatrix) -> Result<EigenDecomposition> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            h.rows(),
            h.cols()
        )));
    }
    if !h.is_hermitian(1e-12) {
        return Err(Error::InvalidArgument(
            "matrix is not Hermitian within 1e-12 relative tolerance".into(),
        ));
    }
    let n = h.rows();
    let mut b = h.clone();
    // Symmetrize exactly so rounding in the input cannot drift the iteration.
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = (b.get(i, j) + b.get(j, i).conj()) * 0.5;
            b.set(i, j, avg);
            b.set(j, i, avg.conj());
        }
        let d = b.get(i, i);
        b.set(i, i, Complex64::new(d.re, 0.0));
    }
    let mut v = CMatrix::identity(n);
    let h_norm = b.frobenius_norm().max(f64::MIN_POSITIVE);

    for _sweep in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += 2.0 * b.get(p, q).norm_sqr();
            }
        }
        if off.sqrt() <= OFF_DIAGONAL_TOL * h_norm {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut b, &mut v, p, q);
            }
        }
    }

    // Extract, sort ascending, and reorder eigenvectors to match; ties keep
    // the lower original position first, so the output is deterministic.
    let mut order: Vec<usize> = (0..n).collect();
    let raw: Vec<f64> = (0..n).map(|i| b.get(i, i).re).collect();
    order.sort_by(|&a, &c| raw[a].partial_cmp(&raw[c]).unwrap().then(a.cmp(&c)));
    let values: Vec<f64> = order.iter().map(|&i| raw[i]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (new_col, &old_col) in order.iter().enumerate() {
        for r in 0..n {
            vectors.set(r, new_col, v.get(r, old_col));
        }
    }
    Ok(EigenDecomposition { values, vectors })
}

/// One Jacobi rotation zeroing the `(p, q)` entry of the Hermitian working
/// matrix `b`, accumulating the rotation into `v`.
fn rotate(b: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let n = b.rows();
    let apq = b.get(p, q);
    let r = apq.norm();
    if r <= f64::MIN_POSITIVE {
        return;
    }
    // Phase u with b[p][q] = r * u; diag(1, conj(u)) turns the 2x2 block
    // into a real symmetric one, then a real rotation annihilates it.
    let u = apq / r;
    let alpha = b.get(p, p).re;
    let beta = b.get(q, q).re;
    let tau = (beta - alpha) / (2.0 * r);
    // Smaller-magnitude root of t^2 - 2 tau t - 1 = 0.
    let t = if tau >= 0.0 {
        -1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // Column update: B <- B * J with J[p][p]=c, J[q][p]=s*conj(u),
    // J[p][q]=-s, J[q][q]=c*conj(u).
    for k in 0..n {
        let bkp = b.get(k, p);
        let bkq = b.get(k, q);
        b.set(k, p, bkp * c + bkq * s * u.conj());
        b.set(k, q, bkp * (-s) + bkq * c * u.conj());
    }
    // Row update: B <- J^* B.
    for k in 0..n {
        let bpk = b.get(p, k);
        let bqk = b.get(q, k);
        b.set(p, k, bpk * c + bqk * s * u);
        b.set(q, k, bpk * (-s) + bqk * c * u);
    }
    // Clean the targeted entries and enforce real diagonal.
    b.set(p, q, Complex64::new(0.0, 0.0));
    b.set(q, p, Complex64::new(0.0, 0.0));
    let dp = b.get(p, p);
    b.set(p, p, Complex64::new(dp.re, 0.0));
    let dq = b.get(q, q);
    b.set(q, q, Complex64::new(dq.re, 0.0));
    // Accumulate eigenvectors: V <- V * J.
    for k in 0..n {
        let vkp = v.get(k, p);
        let vkq = v.get(k, q);
        v.set(k, p, vkp * c + vkq * s * u.conj());
        v.set(k, q, vkp * (-s) + vkq * c * u.conj());
    }
}

/// Relative eigenvalue floor below which a marginal is treated as singular.
pub const SINGULARITY_REL_TOL: f64 = 1e-12;

/// The axis normalization matrix `det(rho)^(1/(2n)) * rho^(-1/2)` for a
/// positive definite Hermitian `rho`.
///
/// The determinant root is evaluated as `exp(sum(ln lambda_k) / (2n))` for
/// numerical stability. The result always has determinant one up to
/// `1e-8`: exactly the amount of the determinant of `rho^(-1/2)` is put
/// back by the `det` prefactor, so applying it to a tensor axis stays
/// inside the special linear group.
///
/// Errors with [`Error::NumericallySingular`] when the smallest eigenvalue
/// is at or below `1e-12 * trace`; `axis` is only used to label that error.
pub fn scaling_matrix(rho: &CMatrix, axis: usize) -> Result<CMatrix> {
    let eig = herm_eig(rho)?;
    let n = rho.rows();
    let trace: f64 = eig.values.iter().sum();
    let threshold = SINGULARITY_REL_TOL * trace.max(0.0);
    let lambda_min = eig.values.first().copied().unwrap_or(0.0);
    if !(lambda_min > threshold) {
        return Err(Error::NumericallySingular {
            axis,
            lambda_min,
            threshold,
        });
    }
    let log_det: f64 = eig.values.iter().map(|l| l.ln()).sum();
    let det_root = (log_det / (2.0 * n as f64)).exp();
    // A = V diag(det_root / sqrt(lambda)) V^*.
    let mut a = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..n {
                let w = det_root / eig.values[k].sqrt();
                acc += eig.vectors.get(i, k) * w * eig.vectors.get(j, k).conj();
            }
            a.set(i, j, acc);
        }
    }
    Ok(a)
}
