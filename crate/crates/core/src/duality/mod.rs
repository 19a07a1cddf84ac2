//! The two dual faces of null-cone membership.
//!
//! On the primal side, the capacity `cap(X) = inf ‖g·X‖²` over the product
//! special linear group: [`capacity_estimate`] runs cyclic alternating
//! minimization (each axis step has the closed-form optimum implemented by
//! the scaling matrix), [`local_min_value`] is that closed-form single-axis
//! optimum `n·det(ρ)^{1/n}`, and [`capacity_lower_bound`] is the exact floor
//! `1/(n1···nd)²` valid for integral tensors outside the null cone.
//! Membership is equivalent to `cap(X) = 0`.
//!
//! On the destabilizer side, one-parameter subgroups of the diagonal torus:
//! a weight vector `a = (a_{i,j})` with zero row sums destabilizes every
//! tensor whose support `S` satisfies `Σ_i a_{i,j_i} > 0` on all of `S`.
//! [`decide_deficiency`] settles existence by exact rational LP and returns
//! either an integer certificate or (via Farkas duality) a probability
//! distribution on `S` with exactly uniform axis marginals, which is the
//! obstruction. [`deficiency_value`] computes the quantitative margin
//! `defi(S) = 1/‖a*‖` from the minimum-norm destabilizer, and
//! [`instability_lower_bound`] maximizes it over caller-supplied invertible
//! basis changes — a certified lower bound on the instability `ins(X)`.
//! [`eps_instability`] answers the promise problem "not in the null cone,
//! or instability at least eps" by running the scaling loop at `eps²`.

pub mod minnorm;
pub mod simplex;

use crate::error::{Error, Result};
use crate::numerics::cmatrix::CMatrix;
use crate::numerics::eig::{herm_eig, scaling_matrix};
use crate::numerics::rational::{rational_rank, RationalMatrix};
use crate::scaling::{scale, ScalingVerdict};
use crate::tensor::{Support, Tensor};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use simplex::LpResult;

/// Integer weight vector with zero row sums certifying that a support is
/// deficient: `Σ_i a[i][j_i] ≥ 1` for every tuple of the support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeficiencyCertificate {
    pub a: Vec<Vec<BigInt>>,
}

impl DeficiencyCertificate {
    /// Exact check of both constraint families against a support.
    pub fn verify(&self, s: &Support) -> bool {
        if self.a.len() != s.dims.len() {
            return false;
        }
        for (row, &n) in self.a.iter().zip(s.dims.iter()) {
            if row.len() != n || !row.iter().sum::<BigInt>().is_zero() {
                return false;
            }
        }
        s.tuples.iter().all(|t| {
            let total: BigInt = t
                .iter()
                .enumerate()
                .map(|(i, &j)| self.a[i][j].clone())
                .sum();
            total >= BigInt::one()
        })
    }

    /// Serialize as `{"a":[[...],[...]]}` with plain JSON integers.
    pub fn to_json_string(&self) -> Result<String> {
        let rows: Result<Vec<Vec<i64>>> = self
            .a
            .iter()
            .map(|row| {
                row.iter()
                    .map(|v| {
                        v.to_i64().ok_or_else(|| {
                            Error::Parse("certificate entry exceeds the JSON integer range".into())
                        })
                    })
                    .collect()
            })
            .collect();
        Ok(serde_json::json!({ "a": rows? }).to_string())
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        #[derive(serde::Deserialize)]
        struct CertJson {
            a: Vec<Vec<i64>>,
        }
        let doc: CertJson = serde_json::from_str(s)
            .map_err(|e| Error::Parse(format!("certificate JSON: {e}")))?;
        Ok(DeficiencyCertificate {
            a: doc.a
                .into_iter()
                .map(|row| row.into_iter().map(BigInt::from).collect())
                .collect(),
        })
    }
}

/// Farkas obstruction to deficiency: a probability distribution on the
/// support whose axis marginals are exactly uniform (`1/n_i` per index).
/// Weights follow the support's tuple order.
#[derive(Clone, Debug)]
pub struct UniformMarginalWitness {
    pub dims: Vec<usize>,
    pub weights: Vec<(Vec<usize>, f64)>,
}

#[derive(Clone, Debug)]
pub enum DeficiencyDecision {
    Deficient(DeficiencyCertificate),
    NotDeficient(UniformMarginalWitness),
}

fn validate_support(s: &Support) -> Result<()> {
    if s.dims.is_empty() || s.dims.iter().any(|&n| n == 0) {
        return Err(Error::DimensionMismatch(
            "support dims must all be at least 1".into(),
        ));
    }
    if s.tuples.is_empty() {
        return Err(Error::InvalidArgument("support must be nonempty".into()));
    }
    for t in &s.tuples {
        if t.len() != s.dims.len() || t.iter().zip(s.dims.iter()).any(|(&j, &n)| j >= n) {
            return Err(Error::DimensionMismatch(format!(
                "tuple {t:?} does not fit dims {:?}",
                s.dims
            )));
        }
    }
    Ok(())
}

/// Decide deficiency by exact LP feasibility: does some zero-row-sum weight
/// vector satisfy `Σ_i a_{i,j_i} ≥ 1` on the whole support?
pub fn decide_deficiency(s: &Support) -> Result<DeficiencyDecision> {
    validate_support(s)?;
    let d = s.dims.len();
    let n_total: usize = s.dims.iter().sum();
    let offsets: Vec<usize> = s
        .dims
        .iter()
        .scan(0usize, |acc, &n| {
            let o = *acc;
            *acc += n;
            Some(o)
        })
        .collect();
    let tuples: Vec<&Vec<usize>> = s.tuples.iter().collect();

    // Columns: a⁺ (n_total), a⁻ (n_total), one surplus per tuple.
    let ncols = 2 * n_total + tuples.len();
    let mut a_rows: Vec<Vec<BigRational>> = Vec::with_capacity(tuples.len() + d);
    let mut b = Vec::with_capacity(tuples.len() + d);
    for (ti, t) in tuples.iter().enumerate() {
        let mut row = vec![BigRational::zero(); ncols];
        for (i, &j) in t.iter().enumerate() {
            row[offsets[i] + j] = BigRational::one();
            row[n_total + offsets[i] + j] = -BigRational::one();
        }
        row[2 * n_total + ti] = -BigRational::one();
        a_rows.push(row);
        b.push(BigRational::one());
    }
    for i in 0..d {
        let mut row = vec![BigRational::zero(); ncols];
        for j in 0..s.dims[i] {
            row[offsets[i] + j] = BigRational::one();
            row[n_total + offsets[i] + j] = -BigRational::one();
        }
        a_rows.push(row);
        b.push(BigRational::zero());
    }
    let c = vec![BigRational::zero(); ncols];

    match simplex::solve(&a_rows, &b, &c) {
        LpResult::Optimal { x, .. } => {
            // Rational solution -> integer certificate by clearing the LCM
            // of denominators (scaling by a positive integer preserves both
            // constraint families).
            let mut lcm = BigInt::one();
            let rat = |i: usize, j: usize| &x[offsets[i] + j] - &x[n_total + offsets[i] + j];
            for i in 0..d {
                for j in 0..s.dims[i] {
                    lcm = lcm.lcm(rat(i, j).denom());
                }
            }
            let mult = BigRational::from_integer(lcm);
            let a_int: Vec<Vec<BigInt>> = (0..d)
                .map(|i| {
                    (0..s.dims[i])
                        .map(|j| (rat(i, j) * &mult).to_integer())
                        .collect()
                })
                .collect();
            let cert = DeficiencyCertificate { a: a_int };
            if !cert.verify(s) {
                return Err(Error::Inconclusive(
                    "internal: integerized destabilizer failed exact re-verification".into(),
                ));
            }
            Ok(DeficiencyDecision::Deficient(cert))
        }
        LpResult::Infeasible { farkas } => {
            // The tuple-row multipliers are a nonnegative measure on S with
            // equal per-index marginal mass on every axis; verify exactly.
            let y = &farkas[..tuples.len()];
            if y.iter().any(|v| v.is_negative()) {
                return Err(Error::Inconclusive(
                    "internal: Farkas multipliers not nonnegative".into(),
                ));
            }
            let total: BigRational = y.iter().cloned().fold(BigRational::zero(), |a, v| a + v);
            if !total.is_positive() {
                return Err(Error::Inconclusive(
                    "internal: Farkas multipliers sum to zero".into(),
                ));
            }
            for i in 0..d {
                let mut per_index = vec![BigRational::zero(); s.dims[i]];
                for (ti, t) in tuples.iter().enumerate() {
                    per_index[t[i]] += &y[ti];
                }
                let expected = &total / BigRational::from_integer(BigInt::from(s.dims[i]));
                if per_index.iter().any(|v| *v != expected) {
                    return Err(Error::Inconclusive(
                        "internal: Farkas marginals not uniform".into(),
                    ));
                }
            }
            let weights = tuples
                .iter()
                .zip(y.iter())
                .map(|(t, v)| ((*t).clone(), (v / &total).to_f64().unwrap_or(0.0)))
                .collect();
            Ok(DeficiencyDecision::NotDeficient(UniformMarginalWitness {
                dims: s.dims.clone(),
                weights,
            }))
        }
        LpResult::Unbounded => Err(Error::Inconclusive(
            "internal: feasibility program reported unbounded".into(),
        )),
    }
}

/// Thin view of [`decide_deficiency`]: the verdict plus the certificate
/// when deficient.
pub fn is_deficient(s: &Support) -> Result<(bool, Option<DeficiencyCertificate>)> {
    Ok(match decide_deficiency(s)? {
        DeficiencyDecision::Deficient(cert) => (true, Some(cert)),
        DeficiencyDecision::NotDeficient(_) => (false, None),
    })
}

/// Quantitative deficiency `defi(S) = max_{a} min_{t∈S} Σ_i a_{i,t_i} / ‖a‖`
/// over zero-row-sum weight vectors.
///
/// Deficient supports give `1/‖a*‖` from the minimum-norm weight vector
/// with margins ≥ 1 (projection iteration, then rescaled so the reported
/// value is a true lower bound within relative 1e-8 of the optimum).
/// Non-deficient supports report the exact optimum of the box-normalized
/// program (`‖a‖_∞ ≤ 1`), which is ≤ 0.
pub fn deficiency_value(s: &Support) -> Result<f64> {
    match decide_deficiency(s)? {
        DeficiencyDecision::Deficient(_) => {
            let d = s.dims.len();
            let n_total: usize = s.dims.iter().sum();
            let offsets: Vec<usize> = s
                .dims
                .iter()
                .scan(0usize, |acc, &n| {
                    let o = *acc;
                    *acc += n;
                    Some(o)
                })
                .collect();
            // Incidence directions projected onto the zero-row-sum subspace;
            // for weight vectors in that subspace the margins agree.
            let gs: Vec<Vec<f64>> = s
                .tuples
                .iter()
                .map(|t| {
                    let mut g = vec![0.0f64; n_total];
                    for i in 0..d {
                        let n = s.dims[i] as f64;
                        for j in 0..s.dims[i] {
                            g[offsets[i] + j] = -1.0 / n;
                        }
                        g[offsets[i] + t[i]] += 1.0;
                    }
                    g
                })
                .collect();
            let (a, _) = minnorm::min_norm_point(&gs, 1e-10, 400_000);
            let margin = gs
                .iter()
                .map(|g| g.iter().zip(a.iter()).map(|(x, y)| x * y).sum::<f64>())
                .fold(f64::INFINITY, f64::min);
            debug_assert!(margin > 0.0, "deficient support produced margin {margin}");
            let norm = a.iter().map(|v| v * v).sum::<f64>().sqrt();
            if !(margin > 0.0) || norm == 0.0 {
                return Err(Error::Inconclusive(
                    "minimum-norm iteration failed to separate a deficient support".into(),
                ));
            }
            Ok(margin / norm)
        }
        DeficiencyDecision::NotDeficient(_) => {
            let opt = box_margin_optimum(s)?;
            debug_assert!(!opt.is_positive());
            Ok(opt.to_f64().unwrap_or(0.0))
        }
    }
}

/// Exact optimum of `max δ : Σ_i a_{i,t_i} ≥ δ on S, zero row sums,
/// ‖a‖_∞ ≤ 1` — positive iff the support is deficient.
fn box_margin_optimum(s: &Support) -> Result<BigRational> {
    validate_support(s)?;
    let d = s.dims.len();
    let n_total: usize = s.dims.iter().sum();
    let offsets: Vec<usize> = s
        .dims
        .iter()
        .scan(0usize, |acc, &n| {
            let o = *acc;
            *acc += n;
            Some(o)
        })
        .collect();
    let tuples: Vec<&Vec<usize>> = s.tuples.iter().collect();

    // Columns: a⁺, a⁻, δ⁺, δ⁻, tuple surpluses, box slacks.
    let col_dp = 2 * n_total;
    let col_dm = col_dp + 1;
    let col_u = col_dm + 1;
    let col_v = col_u + tuples.len();
    let ncols = col_v + n_total;

    let mut rows = Vec::with_capacity(tuples.len() + d + n_total);
    let mut b = Vec::with_capacity(rows.capacity());
    for (ti, t) in tuples.iter().enumerate() {
        let mut row = vec![BigRational::zero(); ncols];
        for (i, &j) in t.iter().enumerate() {
            row[offsets[i] + j] = BigRational::one();
            row[n_total + offsets[i] + j] = -BigRational::one();
        }
        row[col_dp] = -BigRational::one();
        row[col_dm] = BigRational::one();
        row[col_u + ti] = -BigRational::one();
        rows.push(row);
        b.push(BigRational::zero());
    }
    for i in 0..d {
        let mut row = vec![BigRational::zero(); ncols];
        for j in 0..s.dims[i] {
            row[offsets[i] + j] = BigRational::one();
            row[n_total + offsets[i] + j] = -BigRational::one();
        }
        rows.push(row);
        b.push(BigRational::zero());
    }
    for k in 0..n_total {
        let mut row = vec![BigRational::zero(); ncols];
        row[k] = BigRational::one();
        row[n_total + k] = BigRational::one();
        row[col_v + k] = BigRational::one();
        rows.push(row);
        b.push(BigRational::one());
    }
    let mut c = vec![BigRational::zero(); ncols];
    c[col_dp] = -BigRational::one();
    c[col_dm] = BigRational::one();

    match simplex::solve(&rows, &b, &c) {
        LpResult::Optimal { objective, .. } => Ok(-objective),
        other => Err(Error::Inconclusive(format!(
            "internal: box-margin program did not optimize: {other:?}"
        ))),
    }
}

/// The single-axis optimum of the capacity program: `n_i · det(ρ)^{1/n_i}`.
/// Singular `ρ` gives zero. Always at most `tr(ρ)`, with equality exactly
/// when `ρ` is a multiple of the identity.
pub fn local_min_value(rho: &CMatrix, n_i: usize) -> Result<f64> {
    if !rho.is_square() || rho.rows() != n_i {
        return Err(Error::DimensionMismatch(format!(
            "expected a {n_i}x{n_i} matrix, got {}x{}",
            rho.rows(),
            rho.cols()
        )));
    }
    let eig = herm_eig(rho)?;
    let mut log_sum = 0.0f64;
    for &v in &eig.values {
        if v <= 0.0 {
            return Ok(0.0);
        }
        log_sum += v.ln();
    }
    Ok(n_i as f64 * (log_sum / n_i as f64).exp())
}

/// Upper-bound estimator for the capacity, produced by cyclic alternating
/// minimization on the unnormalized tensor.
#[derive(Clone, Debug)]
pub struct CapacityEstimate {
    /// Last recorded squared norm (an upper bound on `cap`).
    pub value: f64,
    /// Axis steps actually taken.
    pub iterations: u64,
    /// Squared norms: the input's, then one entry per step; nonincreasing.
    pub history: Vec<f64>,
    /// Set when a singular or numerically collapsed marginal ended the run —
    /// a null-cone signal, with the estimate forced to zero.
    pub null_cone: bool,
}

/// Cyclic sweeps of the closed-form local capacity step, recording `‖Y‖²`
/// after each axis update. An upper-bound estimator, not a certified value.
pub fn capacity_estimate(x: &Tensor, sweeps: u64) -> Result<CapacityEstimate> {
    if x.is_zero() {
        return Err(Error::ZeroTensor);
    }
    let d = x.order();
    if d == 0 {
        return Err(Error::InvalidArgument(
            "at least one acted axis is required".into(),
        ));
    }
    let start = x.norm_sq();
    if x.has_exact() {
        for axis in 1..=d {
            let rho = x
                .marginal_unnormalized_exact(axis)?
                .expect("exact view checked");
            if rational_rank(&rho) < x.dims()[axis] {
                return Ok(CapacityEstimate {
                    value: 0.0,
                    iterations: 0,
                    history: vec![start, 0.0],
                    null_cone: true,
                });
            }
        }
    }

    let mut y = x.clone();
    let mut history = vec![start];
    let mut iterations = 0u64;
    for _ in 0..sweeps {
        for axis in 1..=d {
            if y.norm_sq() == 0.0 {
                history.push(0.0);
                return Ok(CapacityEstimate {
                    value: 0.0,
                    iterations,
                    history,
                    null_cone: true,
                });
            }
            let rho = y.marginal(axis)?;
            let a = match scaling_matrix(&rho, axis) {
                Ok(a) => a,
                Err(Error::NumericallySingular { .. }) => {
                    history.push(0.0);
                    return Ok(CapacityEstimate {
                        value: 0.0,
                        iterations,
                        history,
                        null_cone: true,
                    });
                }
                Err(e) => return Err(e),
            };
            y = y.apply_axis(&a, axis)?;
            iterations += 1;
            let prev = *history.last().unwrap();
            let mut ns = y.norm_sq();
            // Each exact step minimizes the norm, so the history cannot
            // increase; clamp sub-ulp floating jitter to keep that true.
            if ns > prev {
                debug_assert!(ns <= prev * (1.0 + 1e-9), "norm rose: {prev} -> {ns}");
                ns = prev;
            }
            history.push(ns);
        }
    }
    Ok(CapacityEstimate {
        value: *history.last().unwrap(),
        iterations,
        history,
        null_cone: false,
    })
}

/// Exact capacity floor `1/(n1···nd)²` over the acted axes — every integral
/// tensor outside the null cone has at least this capacity.
pub fn capacity_lower_bound(dims: &[usize]) -> BigRational {
    let mut prod = BigInt::one();
    for &n in dims.iter().skip(1) {
        prod *= BigInt::from(n);
    }
    BigRational::new(BigInt::one(), &prod * &prod)
}

/// Certified lower bound on the instability `ins(X)`: the maximum of
/// `deficiency_value` over the support of `X` itself and of `B·X` for each
/// supplied tuple of invertible rational basis changes. Exact tensors use
/// exact supports; floating tensors can only gain spurious support entries,
/// which keeps the bound valid (deficiency values shrink as supports grow).
pub fn instability_lower_bound(x: &Tensor, bases: &[Vec<RationalMatrix>]) -> Result<f64> {
    if x.is_zero() {
        return Err(Error::ZeroTensor);
    }
    let d = x.order();
    let mut best = deficiency_value(&x.support(0.0))?;
    for (bi, basis) in bases.iter().enumerate() {
        if basis.len() != d {
            return Err(Error::DimensionMismatch(format!(
                "basis tuple {bi} has {} factors, tensor has {d} acted axes",
                basis.len()
            )));
        }
        for (i, m) in basis.iter().enumerate() {
            let n = x.dims()[i + 1];
            if m.rows() != n || m.cols() != n {
                return Err(Error::DimensionMismatch(format!(
                    "basis tuple {bi}, factor {i} is {}x{} but axis {} has dimension {n}",
                    m.rows(),
                    m.cols(),
                    i + 1
                )));
            }
            if !m.is_invertible() {
                return Err(Error::InvalidArgument(format!(
                    "basis tuple {bi}, factor {i} is singular"
                )));
            }
        }
        let mut y = x.clone();
        for (i, m) in basis.iter().enumerate() {
            y = if y.has_exact() {
                y.apply_axis_exact(m, i + 1)?
            } else {
                y.apply_axis(&m.to_cmatrix(), i + 1)?
            };
        }
        let supp = y.support(0.0);
        if supp.is_empty() {
            return Err(Error::Inconclusive(
                "transformed support vanished in floating arithmetic".into(),
            ));
        }
        best = best.max(deficiency_value(&supp)?);
    }
    Ok(best)
}

/// Verdict for the promise problem "either X is not in the null cone, or
/// its instability is at least eps".
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InstabilityVerdict {
    NotInNullCone,
    InstabilityAtLeastEps,
}

/// Decide the promise problem by scaling at target `eps²`: a scaling with
/// `ds < eps²` answers `NotInNullCone`; any membership certificate answers
/// `InstabilityAtLeastEps`. On inputs violating the promise the verdict is
/// consistent with the run but not specified.
pub fn eps_instability(x: &Tensor, eps: f64) -> Result<InstabilityVerdict> {
    let out = scale(x, eps * eps, None)?;
    Ok(match out.verdict {
        ScalingVerdict::Scaled { .. } => InstabilityVerdict::NotInNullCone,
        ScalingVerdict::InNullCone { .. } => InstabilityVerdict::InstabilityAtLeastEps,
    })
}
