//! Tensors of format `Ten(n0, n1, ..., nd)` with a floating view and, when
//! built from integer data, an exact Gaussian-rational view.
//!
//! Axis `0` is a passive multiplicity axis; axes `1..=d` carry the group
//! action. Entries are stored row-major with the last axis fastest. The
//! exact view is the source of truth for certificate-grade questions
//! (supports, marginal ranks, invariant values); the floating view drives
//! the scaling iteration. Mutating through a floating-point setter or
//! applying a floating matrix drops the exact view — the two views are
//! never allowed to disagree.
//!
//! # JSON interchange format
//!
//! All tools share one tensor format (indices are 1-based on disk, 0-based
//! in the API):
//!
//! ```json
//! {
//!   "dims": [1, 2, 2],
//!   "entries": [
//!     {"idx": [1, 1, 1], "re": 1, "im": 0},
//!     {"idx": [1, 2, 2], "re": 1}
//!   ]
//! }
//! ```
//!
//! Omitted entries are zero and `im` defaults to zero. When every written
//! number is a JSON integer the tensor gets an exact view; any float
//! literal (`1.0`, `2.5e0`) makes the tensor floating-only. Supports use
//! `{"dims": [n1, ..., nd], "tuples": [[j1, ..., jd], ...]}`, again
//! 1-based.

use crate::error::{Error, Result};
use crate::numerics::cmatrix::CMatrix;
use crate::numerics::rational::{RatComplex, RationalMatrix};
use crate::util::indexed_map;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use num_complex::Complex64;
use std::collections::BTreeSet;

/// Hard cap on stored entries; operations that would exceed it (for example
/// large tensor powers) return [`Error::ResourceBudget`].
pub const ENTRY_BUDGET: usize = 1_000_000;

#[derive(Clone, Debug)]
pub struct Tensor {
    dims: Vec<usize>,
    entries: Vec<Complex64>,
    exact: Option<Vec<RatComplex>>,
}

/// The support of a tensor: the set of acted-axis tuples `(j1, ..., jd)`
/// (0-based here, 1-based in JSON) where some `X[j0, j1, ..., jd]` is
/// nonzero. The multiplicity axis is projected away.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Support {
    pub dims: Vec<usize>,
    pub tuples: BTreeSet<Vec<usize>>,
}

fn validate_dims(dims: &[usize]) -> Result<usize> {
    if dims.is_empty() {
        return Err(Error::DimensionMismatch(
            "a tensor needs at least the multiplicity axis".into(),
        ));
    }
    if dims.iter().any(|&n| n == 0) {
        return Err(Error::DimensionMismatch(
            "all axis dimensions must be at least 1".into(),
        ));
    }
    let mut total = 1usize;
    for &n in dims {
        total = total
            .checked_mul(n)
            .filter(|&t| t <= ENTRY_BUDGET)
            .ok_or_else(|| {
                Error::ResourceBudget(format!(
                    "tensor with dims {dims:?} exceeds the {ENTRY_BUDGET}-entry budget"
                ))
            })?;
    }
    Ok(total)
}

impl Tensor {
    /// The zero tensor; carries an exact view.
    pub fn zeros(dims: &[usize]) -> Result<Tensor> {
        let total = validate_dims(dims)?;
        Ok(Tensor {
            dims: dims.to_vec(),
            entries: vec![Complex64::new(0.0, 0.0); total],
            exact: Some(vec![RatComplex::zero(); total]),
        })
    }

    /// Build from integer entries given as `(0-based index, re, im)`.
    pub fn from_int_entries(dims: &[usize], entries: &[(Vec<usize>, i64, i64)]) -> Result<Tensor> {
        let mut t = Tensor::zeros(dims)?;
        for (idx, re, im) in entries {
            t.set_int(idx, *re, *im)?;
        }
        Ok(t)
    }

    /// Build from exact rational entries, clearing the global denominator so
    /// the stored tensor is integral (a positive rational multiple of the
    /// input, which leaves null-cone membership, supports, and marginals
    /// unchanged). Returns the tensor and the multiplier applied.
    pub fn from_rational_entries(
        dims: &[usize],
        entries: &[(Vec<usize>, BigRational, BigRational)],
    ) -> Result<(Tensor, BigInt)> {
        let total = validate_dims(dims)?;
        let mut lcm = BigInt::one();
        for (_, re, im) in entries {
            lcm = lcm.lcm(re.denom());
            lcm = lcm.lcm(im.denom());
        }
        let mult = BigRational::from_integer(lcm.clone());
        let mut exact = vec![RatComplex::zero(); total];
        let mut t = Tensor {
            dims: dims.to_vec(),
            entries: vec![Complex64::new(0.0, 0.0); total],
            exact: None,
        };
        for (idx, re, im) in entries {
            let flat = t.flat_index(idx)?;
            exact[flat] = RatComplex::new(re * &mult, im * &mult);
        }
        t.entries = exact.iter().map(RatComplex::to_c64).collect();
        t.exact = Some(exact);
        Ok((t, lcm))
    }

    /// `dims[0..=d]`, including the multiplicity axis.
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Number of acted axes `d`.
    pub fn order(&self) -> usize {
        self.dims.len() - 1
    }

    /// Product of the acted-axis dimensions `n1 * ... * nd`.
    pub fn acted_size(&self) -> usize {
        self.dims[1..].iter().product()
    }

    /// Total number of stored entries.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// The exact view, if the tensor was built from exact data.
    pub fn exact_entries(&self) -> Option<&[RatComplex]> {
        self.exact.as_deref()
    }

    /// True when an exact view exists and every entry is a Gaussian integer.
    pub fn is_integral(&self) -> bool {
        self.exact
            .as_ref()
            .is_some_and(|e| e.iter().all(RatComplex::is_integral))
    }

    pub fn has_exact(&self) -> bool {
        self.exact.is_some()
    }

    fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1usize; self.dims.len()];
        for i in (0..self.dims.len() - 1).rev() {
            strides[i] = strides[i + 1] * self.dims[i + 1];
        }
        strides
    }

    pub fn flat_index(&self, idx: &[usize]) -> Result<usize> {
        if idx.len() != self.dims.len() {
            return Err(Error::DimensionMismatch(format!(
                "index of length {} for a tensor of order {}",
                idx.len(),
                self.dims.len()
            )));
        }
        let mut flat = 0usize;
        for (k, (&i, &n)) in idx.iter().zip(self.dims.iter()).enumerate() {
            if i >= n {
                return Err(Error::DimensionMismatch(format!(
                    "index {i} out of range for axis {k} of size {n}"
                )));
            }
            flat = flat * n + i;
        }
        Ok(flat)
    }

    pub fn get(&self, idx: &[usize]) -> Result<Complex64> {
        Ok(self.entries[self.flat_index(idx)?])
    }

    /// Set an integer entry, preserving the exact view if present.
    pub fn set_int(&mut self, idx: &[usize], re: i64, im: i64) -> Result<()> {
        let flat = self.flat_index(idx)?;
        self.entries[flat] = Complex64::new(re as f64, im as f64);
        if let Some(exact) = self.exact.as_mut() {
            exact[flat] = RatComplex::from_i64(re, im);
        }
        Ok(())
    }

    /// Set a floating entry; this drops the exact view for the whole tensor.
    pub fn set_f64(&mut self, idx: &[usize], re: f64, im: f64) -> Result<()> {
        let flat = self.flat_index(idx)?;
        self.entries[flat] = Complex64::new(re, im);
        self.exact = None;
        Ok(())
    }

    /// `||X||^2`, summed in a fixed order so results are reproducible.
    pub fn norm_sq(&self) -> f64 {
        self.entries.iter().map(|v| v.norm_sqr()).sum()
    }

    /// Exact `||X||^2` when the exact view exists.
    pub fn norm_sq_exact(&self) -> Option<BigRational> {
        self.exact.as_ref().map(|e| {
            e.iter()
                .map(RatComplex::norm_sq)
                .fold(BigRational::zero(), |acc, v| acc + v)
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// True when every entry is exactly zero (exact view if present,
    /// floating otherwise).
    pub fn is_zero(&self) -> bool {
        match &self.exact {
            Some(e) => e.iter().all(RatComplex::is_zero),
            None => self.entries.iter().all(|v| v.norm_sqr() == 0.0),
        }
    }

    /// Maximum entry bitsize: for integral tensors the bit length of the
    /// largest |numerator| (at least 1); for floating tensors a bound from
    /// the largest magnitude.
    pub fn bit_size(&self) -> u64 {
        if let Some(exact) = &self.exact {
            let mut bits = 1u64;
            for e in exact {
                let (num, _den) = e.abs_bounds();
                bits = bits.max(num.bits());
            }
            bits
        } else {
            let m = self.max_abs();
            if m <= 1.0 {
                1
            } else {
                m.log2().ceil().max(1.0) as u64
            }
        }
    }

    /// For exact tensors: multiply by the global LCM of all entry
    /// denominators, returning an integral tensor and the positive integer
    /// multiplier. Rescaling by a positive constant changes neither the
    /// support, the normalized marginals, nor null-cone membership. Identity
    /// on already-integral tensors; `None` without an exact view.
    pub fn cleared_to_integral(&self) -> Option<(Tensor, BigInt)> {
        let exact = self.exact.as_ref()?;
        let mut lcm = BigInt::one();
        for e in exact {
            lcm = lcm.lcm(e.re.denom());
            lcm = lcm.lcm(e.im.denom());
        }
        if lcm.is_one() {
            return Some((self.clone(), lcm));
        }
        let mult = BigRational::from_integer(lcm.clone());
        let out: Vec<RatComplex> = exact.iter().map(|e| e.scale(&mult)).collect();
        Some((
            Tensor {
                dims: self.dims.clone(),
                entries: out.iter().map(RatComplex::to_c64).collect(),
                exact: Some(out),
            },
            lcm,
        ))
    }

    /// Round every entry to the nearest multiple of `2^-bits` (fixed-point
    /// truncation of the floating view; drops the exact view). Bits beyond
    /// the double-precision mantissa leave unit-scale entries unchanged.
    pub fn truncated(&self, bits: u32) -> Tensor {
        if bits >= 1023 {
            let mut t = self.clone();
            t.exact = None;
            return t;
        }
        let scale = 2f64.powi(bits as i32);
        let entries = self
            .entries
            .iter()
            .map(|v| Complex64::new((v.re * scale).round() / scale, (v.im * scale).round() / scale))
            .collect();
        Tensor {
            dims: self.dims.clone(),
            entries,
            exact: None,
        }
    }

    /// The normalized quantum marginal `rho_axis` of `rho = X X^* / ||X||^2`
    /// on an acted axis: Hermitian, positive semidefinite, trace one.
    ///
    /// Errors with [`Error::ZeroTensor`] on the zero tensor.
    pub fn marginal(&self, axis: usize) -> Result<CMatrix> {
        let ns = self.norm_sq();
        if ns == 0.0 || self.is_zero() {
            return Err(Error::ZeroTensor);
        }
        let un = self.marginal_unnormalized(axis)?;
        Ok(un.scale(Complex64::new(1.0 / ns, 0.0)))
    }

    /// Unnormalized marginal; its trace is `||X||^2`. Defined for the zero
    /// tensor (the zero matrix).
    pub fn marginal_unnormalized(&self, axis: usize) -> Result<CMatrix> {
        let d = self.order();
        if axis == 0 || axis > d {
            return Err(Error::AxisOutOfRange { axis, order: d });
        }
        let n = self.dims[axis];
        let stride = self.strides()[axis];
        let block = n * stride;
        let frames = self.entries.len() / block;

        // Upper-triangle entries (a <= b), each an independent sum taken in
        // a fixed frame-major order, so the result does not depend on how
        // the pairs are scheduled across threads.
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|a| (a..n).map(move |b| (a, b)))
            .collect();
        let entries = &self.entries;
        let values = indexed_map(pairs.len(), |p| {
            let (a, b) = pairs[p];
            let mut acc = Complex64::new(0.0, 0.0);
            for f in 0..frames {
                let base = f * block;
                let off_a = base + a * stride;
                let off_b = base + b * stride;
                for s in 0..stride {
                    acc += entries[off_a + s] * entries[off_b + s].conj();
                }
            }
            acc
        });
        let mut rho = CMatrix::zeros(n, n);
        for (p, &(a, b)) in pairs.iter().enumerate() {
            if a == b {
                rho.set(a, a, Complex64::new(values[p].re, 0.0));
            } else {
                rho.set(a, b, values[p]);
                rho.set(b, a, values[p].conj());
            }
        }
        Ok(rho)
    }

    /// Exact unnormalized marginal over the Gaussian rationals. `None` when
    /// the tensor has no exact view.
    pub fn marginal_unnormalized_exact(&self, axis: usize) -> Result<Option<RationalMatrix>> {
        let d = self.order();
        if axis == 0 || axis > d {
            return Err(Error::AxisOutOfRange { axis, order: d });
        }
        let Some(exact) = &self.exact else {
            return Ok(None);
        };
        let n = self.dims[axis];
        let stride = self.strides()[axis];
        let block = n * stride;
        let frames = exact.len() / block;
        let mut rho = RationalMatrix::zeros(n, n);
        for a in 0..n {
            for b in a..n {
                let mut acc = RatComplex::zero();
                for f in 0..frames {
                    let base = f * block;
                    for s in 0..stride {
                        let x = &exact[base + a * stride + s];
                        let y = &exact[base + b * stride + s];
                        acc += &(x * &y.conj());
                    }
                }
                if a == b {
                    rho.set(a, a, acc);
                } else {
                    rho.set(a, b, acc.clone());
                    rho.set(b, a, acc.conj());
                }
            }
        }
        Ok(Some(rho))
    }

    /// Apply an `n_axis x n_axis` matrix along an acted axis:
    /// `Y[.., r, ..] = sum_c A[r][c] X[.., c, ..]`. Drops the exact view.
    pub fn apply_axis(&self, a: &CMatrix, axis: usize) -> Result<Tensor> {
        let d = self.order();
        if axis == 0 || axis > d {
            return Err(Error::AxisOutOfRange { axis, order: d });
        }
        let n = self.dims[axis];
        if a.rows() != n || a.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}x{}, axis {axis} has dimension {n}",
                a.rows(),
                a.cols()
            )));
        }
        let stride = self.strides()[axis];
        let block = n * stride;
        let entries = &self.entries;
        let out = indexed_map(entries.len(), |flat| {
            let base = flat / block * block;
            let r = (flat - base) / stride;
            let s = flat - base - r * stride;
            let mut acc = Complex64::new(0.0, 0.0);
            for c in 0..n {
                acc += a.get(r, c) * entries[base + c * stride + s];
            }
            acc
        });
        Ok(Tensor {
            dims: self.dims.clone(),
            entries: out,
            exact: None,
        })
    }

    /// Apply an exact rational matrix along an acted axis, keeping the exact
    /// view. Errors when the tensor has no exact view.
    pub fn apply_axis_exact(&self, a: &RationalMatrix, axis: usize) -> Result<Tensor> {
        let d = self.order();
        if axis == 0 || axis > d {
            return Err(Error::AxisOutOfRange { axis, order: d });
        }
        let Some(exact) = &self.exact else {
            return Err(Error::ExactEntriesRequired(
                "apply_axis_exact needs a tensor built from exact data".into(),
            ));
        };
        let n = self.dims[axis];
        if a.rows() != n || a.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}x{}, axis {axis} has dimension {n}",
                a.rows(),
                a.cols()
            )));
        }
        let stride = self.strides()[axis];
        let block = n * stride;
        let mut out = vec![RatComplex::zero(); exact.len()];
        for (flat, slot) in out.iter_mut().enumerate() {
            let base = flat / block * block;
            let r = (flat - base) / stride;
            let s = flat - base - r * stride;
            let mut acc = RatComplex::zero();
            for c in 0..n {
                let m = a.get(r, c);
                if m.is_zero() {
                    continue;
                }
                acc += &(m * &exact[base + c * stride + s]);
            }
            *slot = acc;
        }
        Ok(Tensor {
            dims: self.dims.clone(),
            entries: out.iter().map(RatComplex::to_c64).collect(),
            exact: Some(out),
        })
    }

    /// The support over the acted axes: tuples `(j1, ..., jd)` such that
    /// `|X[j0, j1, ..., jd]| > threshold` for some `j0`.
    ///
    /// With a zero threshold on an exact tensor the test is exact; otherwise
    /// floating magnitudes are compared.
    pub fn support(&self, threshold: f64) -> Support {
        let acted = self.acted_size();
        let n0 = self.dims[0];
        let mut tuples = BTreeSet::new();
        for t in 0..acted {
            let hit = if threshold == 0.0 && self.exact.is_some() {
                let exact = self.exact.as_ref().unwrap();
                (0..n0).any(|j0| !exact[j0 * acted + t].is_zero())
            } else {
                (0..n0).any(|j0| self.entries[j0 * acted + t].norm() > threshold)
            };
            if hit {
                // Decompose t into the acted-axis tuple.
                let mut tuple = vec![0usize; self.order()];
                let mut rem = t;
                for i in (0..self.order()).rev() {
                    let n = self.dims[i + 1];
                    tuple[i] = rem % n;
                    rem /= n;
                }
                tuples.insert(tuple);
            }
        }
        Support {
            dims: self.dims[1..].to_vec(),
            tuples,
        }
    }

    /// The k-th tensor power with axes regrouped so factor copies aggregate:
    /// the result lives in `Ten(n0^k, n1^k, ..., nd^k)` and its axis-`i`
    /// index is the base-`n_i` word `(j_i^(1), ..., j_i^(k))` of the copy
    /// indices. Under this regrouping the axis-`i` marginal of the power is
    /// the k-fold Kronecker power of the original marginal.
    pub fn tensor_power(&self, k: u32) -> Result<Tensor> {
        if k == 0 {
            return Err(Error::InvalidArgument(
                "tensor power requires k >= 1".into(),
            ));
        }
        let mut new_dims = Vec::with_capacity(self.dims.len());
        let mut new_total = 1usize;
        for &n in &self.dims {
            let p = n
                .checked_pow(k)
                .filter(|&p| p <= ENTRY_BUDGET)
                .ok_or_else(|| {
                    Error::ResourceBudget(format!(
                        "power {k} of axis dimension {n} exceeds the entry budget"
                    ))
                })?;
            new_total = new_total
                .checked_mul(p)
                .filter(|&t| t <= ENTRY_BUDGET)
                .ok_or_else(|| {
                    Error::ResourceBudget(format!(
                        "tensor power {k} exceeds the {ENTRY_BUDGET}-entry budget"
                    ))
                })?;
            new_dims.push(p);
        }
        let k = k as usize;
        let strides = self.strides();
        let dims = &self.dims;
        let axes = dims.len();

        // For output entry J: axis i digit c (most significant first) is the
        // copy-c index on axis i; copy c's flat input index is
        // sum_i digit(i, c) * stride_i.
        let decompose = |flat: usize| -> Complex64 {
            let mut copy_flat = vec![0usize; k];
            let mut rem = flat;
            for i in (0..axes).rev() {
                let mut j = rem % new_dims[i];
                rem /= new_dims[i];
                for c in (0..k).rev() {
                    let digit = j % dims[i];
                    j /= dims[i];
                    copy_flat[c] += digit * strides[i];
                }
            }
            copy_flat
                .iter()
                .map(|&f| self.entries[f])
                .product::<Complex64>()
        };
        let entries = indexed_map(new_total, decompose);

        let exact = match &self.exact {
            None => None,
            Some(ex) => {
                let mut out = vec![RatComplex::zero(); new_total];
                for (flat, slot) in out.iter_mut().enumerate() {
                    let mut copy_flat = vec![0usize; k];
                    let mut rem = flat;
                    for i in (0..axes).rev() {
                        let mut j = rem % new_dims[i];
                        rem /= new_dims[i];
                        for c in (0..k).rev() {
                            let digit = j % dims[i];
                            j /= dims[i];
                            copy_flat[c] += digit * strides[i];
                        }
                    }
                    let mut acc = RatComplex::one();
                    for &f in &copy_flat {
                        if ex[f].is_zero() {
                            acc = RatComplex::zero();
                            break;
                        }
                        acc = &acc * &ex[f];
                    }
                    *slot = acc;
                }
                Some(out)
            }
        };
        Ok(Tensor {
            dims: new_dims,
            entries,
            exact,
        })
    }

    // ---------------------------------------------------------------- JSON

    /// Parse the shared JSON tensor format (1-based indices; integer-only
    /// payloads produce an exact view).
    pub fn from_json_str(s: &str) -> Result<Tensor> {
        let doc: TensorJson =
            serde_json::from_str(s).map_err(|e| Error::Parse(format!("tensor JSON: {e}")))?;
        let mut t = Tensor::zeros(&doc.dims)?;
        let mut all_int = true;
        let mut seen = BTreeSet::new();
        for entry in &doc.entries {
            if entry.idx.len() != doc.dims.len() {
                return Err(Error::Parse(format!(
                    "entry index {:?} has {} coordinates, dims has {}",
                    entry.idx,
                    entry.idx.len(),
                    doc.dims.len()
                )));
            }
            let mut idx0 = Vec::with_capacity(entry.idx.len());
            for (k, (&i, &n)) in entry.idx.iter().zip(doc.dims.iter()).enumerate() {
                if i == 0 || i > n {
                    return Err(Error::Parse(format!(
                        "1-based index {i} out of range 1..={n} on axis {k}"
                    )));
                }
                idx0.push(i - 1);
            }
            if !seen.insert(idx0.clone()) {
                return Err(Error::Parse(format!(
                    "duplicate entry for index {:?}",
                    entry.idx
                )));
            }
            let re = entry.re.as_ref();
            let im = entry.im.as_ref();
            let as_int = |n: Option<&serde_json::Number>| n.map_or(Some(0), |n| n.as_i64());
            match (as_int(re), as_int(im)) {
                (Some(ri), Some(ii)) => {
                    t.set_int(&idx0, ri, ii)?;
                }
                _ => {
                    all_int = false;
                    let rf = re.and_then(|n| n.as_f64()).unwrap_or(0.0);
                    let iff = im.and_then(|n| n.as_f64()).unwrap_or(0.0);
                    let flat = t.flat_index(&idx0)?;
                    t.entries[flat] = Complex64::new(rf, iff);
                }
            }
        }
        if !all_int {
            t.exact = None;
        }
        Ok(t)
    }

    /// Serialize to the shared JSON format. Integer-valued exact entries are
    /// written as JSON integers (round-trips the exact view); everything
    /// else as floats. Entries appear in row-major order, so serialization
    /// is deterministic.
    pub fn to_json_string(&self) -> String {
        let mut entries = Vec::new();
        for flat in 0..self.entries.len() {
            let keep = match &self.exact {
                Some(e) => !e[flat].is_zero(),
                None => self.entries[flat].norm_sqr() != 0.0,
            };
            if !keep {
                continue;
            }
            let mut idx = vec![0usize; self.dims.len()];
            let mut rem = flat;
            for i in (0..self.dims.len()).rev() {
                idx[i] = rem % self.dims[i] + 1;
                rem /= self.dims[i];
            }
            let (re, im) = self.json_number_pair(flat);
            entries.push(serde_json::json!({"idx": idx, "re": re, "im": im}));
        }
        serde_json::json!({"dims": self.dims, "entries": entries}).to_string()
    }

    fn json_number_pair(&self, flat: usize) -> (serde_json::Value, serde_json::Value) {
        if let Some(e) = &self.exact {
            let v = &e[flat];
            if v.is_integral() {
                let as_i64 = |r: &BigRational| r.numer().to_i64();
                if let (Some(ri), Some(ii)) = (as_i64(&v.re), as_i64(&v.im)) {
                    return (serde_json::json!(ri), serde_json::json!(ii));
                }
            }
        }
        let v = self.entries[flat];
        (serde_json::json!(v.re), serde_json::json!(v.im))
    }
}

#[derive(serde::Deserialize)]
struct TensorJson {
    dims: Vec<usize>,
    #[serde(default)]
    entries: Vec<TensorEntryJson>,
}

#[derive(serde::Deserialize)]
struct TensorEntryJson {
    idx: Vec<usize>,
    #[serde(default)]
    re: Option<serde_json::Number>,
    #[serde(default)]
    im: Option<serde_json::Number>,
}

impl Support {
    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn contains(&self, tuple: &[usize]) -> bool {
        self.tuples.contains(tuple)
    }

    /// Parse `{"dims": [...], "tuples": [[...], ...]}` with 1-based tuples.
    pub fn from_json_str(s: &str) -> Result<Support> {
        #[derive(serde::Deserialize)]
        struct SupportJson {
            dims: Vec<usize>,
            tuples: Vec<Vec<usize>>,
        }
        let doc: SupportJson =
            serde_json::from_str(s).map_err(|e| Error::Parse(format!("support JSON: {e}")))?;
        if doc.dims.is_empty() || doc.dims.iter().any(|&n| n == 0) {
            return Err(Error::Parse("support dims must all be at least 1".into()));
        }
        let mut tuples = BTreeSet::new();
        for t in &doc.tuples {
            if t.len() != doc.dims.len() {
                return Err(Error::Parse(format!(
                    "tuple {t:?} length does not match dims {:?}",
                    doc.dims
                )));
            }
            let mut t0 = Vec::with_capacity(t.len());
            for (k, (&j, &n)) in t.iter().zip(doc.dims.iter()).enumerate() {
                if j == 0 || j > n {
                    return Err(Error::Parse(format!(
                        "1-based tuple coordinate {j} out of range 1..={n} on axis {}",
                        k + 1
                    )));
                }
                t0.push(j - 1);
            }
            tuples.insert(t0);
        }
        Ok(Support {
            dims: doc.dims,
            tuples,
        })
    }

    pub fn to_json_string(&self) -> String {
        let tuples: Vec<Vec<usize>> = self
            .tuples
            .iter()
            .map(|t| t.iter().map(|&j| j + 1).collect())
            .collect();
        serde_json::json!({"dims": self.dims, "tuples": tuples}).to_string()
    }
}

/// The identity-matrix tensor in `Ten(1, n, n)`: `X[0, j, j] = 1`.
pub fn identity_matrix_tensor(n: usize) -> Result<Tensor> {
    let mut t = Tensor::zeros(&[1, n, n])?;
    for j in 0..n {
        t.set_int(&[0, j, j], 1, 0)?;
    }
    Ok(t)
}

/// A matrix as a tensor in `Ten(1, rows, cols)` from integer rows.
pub fn matrix_tensor(rows: &[Vec<i64>]) -> Result<Tensor> {
    let r = rows.len();
    let c = rows.first().map_or(0, |row| row.len());
    let mut t = Tensor::zeros(&[1, r, c])?;
    for (i, row) in rows.iter().enumerate() {
        if row.len() != c {
            return Err(Error::DimensionMismatch("ragged matrix rows".into()));
        }
        for (j, &v) in row.iter().enumerate() {
            t.set_int(&[0, i, j], v, 0)?;
        }
    }
    Ok(t)
}
