//! Slice-rank bounds and their bridge to the null cone.
//!
//! A tensor is *slice rank-one* when it factors as a vector on one axis
//! times a tensor on the remaining axes. The *slice rank* `sr(X)` is the
//! least number of slice rank-one terms summing to `X`, where every term
//! may slice along its own axis. Flattening along any fixed axis shows
//! `sr(X) <= m` for a cubical tensor of side `m`, and more precisely
//! `sr(X) <= rank` of any axis-vs-rest matricization.
//!
//! The bridge to null-cone membership runs in both directions:
//!
//! * `sr(X) < m` forces `X` into the null cone with instability at least
//!   `1/sqrt(d m^3)` — see [`instability_from_slice_rank`];
//! * outside the null cone every tensor power keeps full slice rank, so a
//!   rank-deficient power certifies membership. [`nullcone_vs_slicerank_check`]
//!   exercises both directions at the second power and reports each
//!   implication separately.
//!
//! Computing slice rank exactly is NP-hard for three or more axes, so the
//! module offers a ladder of effort:
//!
//! * [`flattening_rank`] — exact rank of one matricization (rational
//!   arithmetic, certificate grade);
//! * [`slice_rank_upper`] — greedy peeling of the largest coordinate
//!   slices, capped by the best flattening rank; sound but not tight;
//! * [`slice_rank_exact_small`] — the exact value on cubical tensors with
//!   side and order at most 3, by exhausting per-axis term-count patterns.
//!   Single-axis patterns reduce to flattening ranks; mixed two-axis
//!   patterns are decided exactly by eliminating the unknown slice vector
//!   from a system of 2x2 minors (a small Groebner-basis computation over
//!   the Gaussian rationals decides whether the minor system has a
//!   projective solution).

use crate::error::{Error, Result};
use crate::numerics::rational::{rational_rank, RatComplex, RationalMatrix};
use crate::scaling::scale;
use crate::tensor::Tensor;
use num_complex::Complex64;
use std::cmp::Ordering;
use std::collections::BTreeMap;

/// Slice-rank bounds for one tensor, with a note on how each was obtained.
///
/// Invariant: `lower <= exact <= upper` whenever `exact` is present, and
/// `upper <= m` for a cubical tensor of side `m`.
#[derive(Clone, Debug)]
pub struct SliceRankReport {
    /// Sound upper bound on the slice rank.
    pub upper: usize,
    /// Sound lower bound on the slice rank.
    pub lower: usize,
    /// The exact slice rank when the instance is small enough to exhaust.
    pub exact: Option<usize>,
    /// Human-readable derivation notes, one per bound.
    pub notes: Vec<String>,
}

/// One named implication tested by [`nullcone_vs_slicerank_check`].
#[derive(Clone, Debug)]
pub struct ConsistencyCheck {
    pub name: String,
    pub holds: bool,
}

/// Joint report of scaling verdicts and slice-rank bounds for a tensor and
/// its second tensor power.
#[derive(Clone, Debug)]
pub struct SliceRankNullConeReport {
    pub dims: Vec<usize>,
    /// Marginal-deviation target used for both scaling runs.
    pub eps: f64,
    pub in_null_cone: bool,
    pub in_null_cone_power: bool,
    pub base: SliceRankReport,
    pub power: SliceRankReport,
    pub checks: Vec<ConsistencyCheck>,
    /// True when every tested implication holds.
    pub consistent: bool,
}

fn cubical_side(x: &Tensor) -> Result<usize> {
    let d = x.order();
    if d == 0 {
        return Err(Error::InvalidArgument(
            "slice rank needs at least one acted axis".into(),
        ));
    }
    let m = x.dims()[1];
    if x.dims()[1..].iter().any(|&n| n != m) {
        return Err(Error::InvalidArgument(format!(
            "slice-rank bounds require equal acted dimensions, got {:?}",
            &x.dims()[1..]
        )));
    }
    Ok(m)
}

/// Product of the dimensions after `axis`, i.e. the stride of one step
/// along `axis` in row-major order.
fn axis_stride(dims: &[usize], axis: usize) -> usize {
    dims[axis + 1..].iter().product()
}

/// Exact rank of the axis-vs-rest matricization, computed over the
/// Gaussian rationals.
///
/// Rows are indexed by the chosen acted axis, columns by all remaining
/// coordinates (the multiplicity axis included). The rank of any such
/// flattening upper-bounds the slice rank, and a rank-`r` flattening yields
/// an explicit decomposition into `r` slice rank-one terms along that axis.
pub fn flattening_rank(x: &Tensor, axis: usize) -> Result<usize> {
    let d = x.order();
    if axis == 0 || axis > d {
        return Err(Error::AxisOutOfRange { axis, order: d });
    }
    let exact = x.exact_entries().ok_or_else(|| {
        Error::ExactEntriesRequired(
            "flattening rank is certificate grade; build the tensor from integer or rational entries"
                .into(),
        )
    })?;
    let dims = x.dims();
    let n = dims[axis];
    let stride = axis_stride(dims, axis);
    let cols = x.len() / n;
    let mut mat = RationalMatrix::zeros(n, cols);
    for (flat, v) in exact.iter().enumerate() {
        if v.is_zero() {
            continue;
        }
        let row = (flat / stride) % n;
        let col = (flat / (stride * n)) * stride + flat % stride;
        mat.set(row, col, v.clone());
    }
    Ok(rational_rank(&mat))
}

/// Indices of the coordinate slice `axis = j`, in flat row-major order.
fn slice_flats(dims: &[usize], axis: usize, j: usize) -> impl Iterator<Item = usize> {
    let stride = axis_stride(dims, axis);
    let n = dims[axis];
    let outer = dims.iter().product::<usize>() / (stride * n);
    (0..outer).flat_map(move |o| (0..stride).map(move |i| (o * n + j) * stride + i))
}

/// Greedy upper bound on the slice rank of a cubical tensor.
///
/// Repeatedly removes the nonzero coordinate slice (over all acted axes and
/// slice positions) with the largest squared norm; every removed slice is a
/// slice rank-one term, so the number of removals bounds `sr(X)` from
/// above. The result is additionally capped by the best flattening rank
/// (exact view) or by the smallest per-axis count of nonzero slices
/// (floating view), either of which is at most the side length.
pub fn slice_rank_upper(x: &Tensor) -> Result<usize> {
    let m = cubical_side(x)?;
    if x.is_zero() {
        return Ok(0);
    }
    let d = x.order();
    let dims = x.dims().to_vec();

    let mut cap = m;
    if x.has_exact() {
        for axis in 1..=d {
            cap = cap.min(flattening_rank(x, axis)?);
        }
    } else {
        for axis in 1..=d {
            let nonzero_slices = (0..m)
                .filter(|&j| {
                    slice_flats(&dims, axis, j).any(|f| x.entries()[f].norm_sqr() > 0.0)
                })
                .count();
            cap = cap.min(nonzero_slices);
        }
    }

    let mut float: Vec<Complex64> = x.entries().to_vec();
    let mut exact: Option<Vec<RatComplex>> = x.exact_entries().map(<[RatComplex]>::to_vec);
    let is_nonzero = |float: &[Complex64], exact: &Option<Vec<RatComplex>>, f: usize| match exact {
        Some(e) => !e[f].is_zero(),
        None => float[f].norm_sqr() > 0.0,
    };

    let mut peeled = 0usize;
    loop {
        let mut best: Option<(f64, usize, usize)> = None;
        for axis in 1..=d {
            for j in 0..m {
                let mut norm = 0.0f64;
                let mut nonzero = false;
                for f in slice_flats(&dims, axis, j) {
                    if is_nonzero(&float, &exact, f) {
                        nonzero = true;
                        norm += float[f].norm_sqr();
                    }
                }
                if nonzero && best.is_none_or(|(bn, _, _)| norm > bn) {
                    best = Some((norm, axis, j));
                }
            }
        }
        let Some((_, axis, j)) = best else { break };
        for f in slice_flats(&dims, axis, j) {
            float[f] = Complex64::new(0.0, 0.0);
            if let Some(e) = exact.as_mut() {
                e[f] = RatComplex::zero();
            }
        }
        peeled += 1;
    }
    Ok(peeled.min(cap))
}

/// Exact slice rank of a tiny cubical tensor by exhausting decomposition
/// patterns.
///
/// Requires a trivial multiplicity axis, side at most 3, order at most 3,
/// and exact entries. Patterns assigning all terms to one axis reduce to
/// flattening-rank tests; for side 3 and order 3 the remaining question —
/// one term each along two different axes — is decided exactly by
/// eliminating the unknown slice vector from the 2x2 minors of a symbolic
/// compression (see [`mixed_pair_realizable`]'s module-internal docs).
pub fn slice_rank_exact_small(x: &Tensor) -> Result<usize> {
    let m = cubical_side(x)?;
    let d = x.order();
    if x.dims()[0] != 1 {
        return Err(Error::InvalidArgument(
            "the exhaustive slice-rank search requires a trivial multiplicity axis".into(),
        ));
    }
    if m > 3 || d > 3 {
        return Err(Error::ResourceBudget(format!(
            "the exhaustive slice-rank search handles side <= 3 and order <= 3; got side {m}, order {d}"
        )));
    }
    if x.exact_entries().is_none() {
        return Err(Error::ExactEntriesRequired(
            "the exhaustive slice-rank search needs exact entries".into(),
        ));
    }
    if x.is_zero() {
        return Ok(0);
    }
    if d == 1 {
        return Ok(1);
    }
    let ranks: Vec<usize> = (1..=d)
        .map(|axis| flattening_rank(x, axis))
        .collect::<Result<_>>()?;
    let rmin = *ranks.iter().min().expect("at least one axis");
    debug_assert!(rmin >= 1, "nonzero tensor has nonzero flattenings");
    // A decomposition into a single term exists exactly when some
    // flattening has rank one.
    if rmin <= 1 {
        return Ok(1);
    }
    if d == 2 {
        // Both flattenings of a matrix have the same rank, which is the
        // slice rank.
        return Ok(rmin);
    }
    if m == 2 {
        // Side 2, order 3: two slices along any axis always suffice, and
        // rank-one decompositions were ruled out above.
        return Ok(2);
    }
    // Side 3, order 3. Two terms on a single axis need a rank-2 flattening.
    if rmin <= 2 {
        return Ok(2);
    }
    // One term each on two distinct axes.
    for (k, l) in [(1, 2), (1, 3), (2, 3)] {
        if mixed_pair_realizable(x, k, l) {
            return Ok(2);
        }
    }
    Ok(3)
}

/// Certified instability lower bound that applies to any cubical tensor of
/// side `m` and order `d` whose slice rank is below `m`: such a tensor lies
/// in the null cone and its instability is at least `1/sqrt(d m^3)`.
///
/// Callers must establish `sr(X) < m` separately (for instance via
/// [`slice_rank_upper`]); `m, d >= 1` is expected.
pub fn instability_from_slice_rank(m: usize, d: usize) -> f64 {
    1.0 / ((d as f64) * (m as f64).powi(3)).sqrt()
}

/// Bundle the slice-rank bounds for one cubical tensor.
///
/// `upper` always comes from [`slice_rank_upper`]. `exact` is filled via
/// [`slice_rank_exact_small`] when the instance fits its budget; `lower`
/// falls back to the matrix rank for order at most 2 and to `1` for any
/// nonzero tensor otherwise.
pub fn slice_rank_report(x: &Tensor) -> Result<SliceRankReport> {
    cubical_side(x)?;
    let upper = slice_rank_upper(x)?;
    let mut notes = Vec::new();
    if x.has_exact() {
        let ranks: Vec<usize> = (1..=x.order())
            .map(|axis| flattening_rank(x, axis))
            .collect::<Result<_>>()?;
        notes.push(format!("flattening ranks per axis: {ranks:?}"));
    }
    notes.push(format!(
        "upper bound {upper} from greedy slice peeling capped by the best flattening"
    ));
    let exact = match slice_rank_exact_small(x) {
        Ok(v) => {
            notes.push(format!("exact value {v} from the exhaustive pattern search"));
            Some(v)
        }
        Err(Error::ResourceBudget(msg))
        | Err(Error::InvalidArgument(msg))
        | Err(Error::ExactEntriesRequired(msg)) => {
            notes.push(format!("exact search skipped: {msg}"));
            None
        }
        Err(e) => return Err(e),
    };
    let lower = if x.is_zero() {
        0
    } else if let Some(v) = exact {
        v
    } else if x.order() <= 2 && x.dims()[0] == 1 && x.has_exact() {
        let r = flattening_rank(x, 1)?;
        notes.push(format!("lower bound {r} is the matrix rank"));
        r
    } else {
        notes.push("lower bound 1: the tensor is nonzero".into());
        1
    };
    debug_assert!(lower <= upper, "bounds crossed: {lower} > {upper}");
    if let Some(v) = exact {
        debug_assert!(lower <= v && v <= upper, "exact value {v} outside [{lower}, {upper}]");
    }
    Ok(SliceRankReport {
        upper,
        lower,
        exact,
        notes,
    })
}

/// Cross-check scaling verdicts against slice-rank bounds at the second
/// tensor power.
///
/// Runs the scaling decision on `X` and on `X tensor X`, computes both
/// slice-rank reports, and tests every implication that holds
/// unconditionally:
///
/// * membership is preserved under tensor squaring, in both directions;
/// * a slice-rank upper bound below the side length (for the tensor or its
///   square) forces membership;
/// * outside the null cone the exact slice rank, when available, is full.
///
/// The tensor must be cubical with a trivial multiplicity axis and exact
/// entries, so both scaling runs return certified verdicts. Fails with a
/// resource error when the square exceeds the entry budget.
pub fn nullcone_vs_slicerank_check(x: &Tensor) -> Result<SliceRankNullConeReport> {
    let m = cubical_side(x)?;
    if x.dims()[0] != 1 {
        return Err(Error::InvalidArgument(
            "the slice-rank cross-check requires a trivial multiplicity axis".into(),
        ));
    }
    if !x.has_exact() {
        return Err(Error::ExactEntriesRequired(
            "certified scaling verdicts need exact entries".into(),
        ));
    }
    let d = x.order();
    let squared = x.tensor_power(2)?;
    let admissible = |side: usize| d as f64 / ((side * side) as f64);
    let eps = 1e-4f64.min(admissible(m)).min(admissible(m * m));
    let in_null_cone = scale(x, eps, None)?.in_null_cone();
    let in_null_cone_power = scale(&squared, eps, None)?.in_null_cone();
    let base = slice_rank_report(x)?;
    let power = slice_rank_report(&squared)?;

    let mut checks = vec![
        ConsistencyCheck {
            name: "the tensor and its square receive the same verdict".into(),
            holds: in_null_cone == in_null_cone_power,
        },
        ConsistencyCheck {
            name: "an upper bound below the side length implies membership".into(),
            holds: base.upper >= m || in_null_cone,
        },
        ConsistencyCheck {
            name: "a squared upper bound below the squared side implies membership".into(),
            holds: power.upper >= m * m || in_null_cone,
        },
    ];
    if let Some(v) = base.exact {
        checks.push(ConsistencyCheck {
            name: "outside the null cone the exact slice rank is full".into(),
            holds: in_null_cone || v == m,
        });
    }
    let consistent = checks.iter().all(|c| c.holds);
    Ok(SliceRankNullConeReport {
        dims: x.dims().to_vec(),
        eps,
        in_null_cone,
        in_null_cone_power,
        base,
        power,
        checks,
        consistent,
    })
}

// ---------------------------------------------------------------------------
// Mixed two-axis patterns on side-3, order-3 tensors.
//
// A decomposition `X = a (x)_k Y + b (x)_l Z` (one term sliced along axis
// `k` with vector `a`, one along axis `l` with vector `b`) exists if and
// only if, writing `M_t` for the 3x3 slices of `X` with the remaining axis
// fixed to `t` (rows indexed by axis `k`, columns by axis `l`), there are
// nonzero vectors `a, b` with
//
//     M_t = a y_t^T + z_t b^T   for all t.
//
// Let `K(b)` be the cross-product matrix of `b`, whose columns span the
// bilinear annihilator of `b` for every nonzero `b`. The displayed identity
// holds for some `y, z` exactly when every column of every `M_t K(b)` is
// proportional to `a`, i.e. when the stacked 3x9 matrix
// `[M_1 K(b) | M_2 K(b) | M_3 K(b)]` has rank at most one. That is a system
// of 2x2 minors: homogeneous quadratic equations in `b` over the Gaussian
// rationals. The pattern is realizable exactly when those quadrics share a
// common projective root.
//
// Emptiness of the root set is decided exactly: compute a Groebner basis of
// the minor ideal in graded reverse lexicographic order and count standard
// monomials in degree 4. An ideal generated by quadrics in three variables
// with no projective root contains a length-3 regular sequence of quadrics,
// whose quotient has Hilbert series 1 + 3t + 3t^2 + t^3 — so degree 4 is
// empty; conversely any projective root keeps every degree inhabited. The
// basis computation may therefore discard S-pairs and remainders above
// degree 4, which keeps it tiny.
// ---------------------------------------------------------------------------

/// Monomial in the three slice-vector coordinates, ordered by graded
/// reverse lexicographic order (larger = later in `BTreeMap` iteration).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
struct GMono([u32; 3]);

impl GMono {
    fn degree(self) -> u32 {
        self.0.iter().sum()
    }

    fn divides(self, other: GMono) -> bool {
        (0..3).all(|i| self.0[i] <= other.0[i])
    }

    /// `self / den`; caller guarantees divisibility.
    fn quotient(self, den: GMono) -> GMono {
        GMono([
            self.0[0] - den.0[0],
            self.0[1] - den.0[1],
            self.0[2] - den.0[2],
        ])
    }

    fn times(self, other: GMono) -> GMono {
        GMono([
            self.0[0] + other.0[0],
            self.0[1] + other.0[1],
            self.0[2] + other.0[2],
        ])
    }

    fn lcm(a: GMono, b: GMono) -> GMono {
        GMono([a.0[0].max(b.0[0]), a.0[1].max(b.0[1]), a.0[2].max(b.0[2])])
    }
}

impl Ord for GMono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            for i in (0..3).rev() {
                if self.0[i] != other.0[i] {
                    // Smaller exponent on the most minor variable wins.
                    return other.0[i].cmp(&self.0[i]);
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for GMono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial over the Gaussian rationals; no zero coefficients are
/// stored, and the leading term is the map's last entry.
type QPoly = BTreeMap<GMono, RatComplex>;

fn qp_add_term(p: &mut QPoly, m: GMono, c: RatComplex) {
    if c.is_zero() {
        return;
    }
    match p.entry(m) {
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let sum = &*e.get() + &c;
            if sum.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = sum;
            }
        }
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
    }
}

fn qp_lead(p: &QPoly) -> (GMono, &RatComplex) {
    let (m, c) = p.iter().next_back().expect("nonzero polynomial");
    (*m, c)
}

/// `p += c * x^shift * q`.
fn qp_axpy(p: &mut QPoly, c: &RatComplex, shift: GMono, q: &QPoly) {
    for (m, qc) in q {
        qp_add_term(p, m.times(shift), c * qc);
    }
}

/// Full normal form of `p` modulo `basis`: no remaining term is divisible
/// by any basis leading monomial.
fn qp_normal_form(mut p: QPoly, basis: &[QPoly]) -> QPoly {
    loop {
        let mut hit: Option<(GMono, RatComplex, usize)> = None;
        'scan: for (m, c) in p.iter().rev() {
            for (gi, g) in basis.iter().enumerate() {
                if qp_lead(g).0.divides(*m) {
                    hit = Some((*m, c.clone(), gi));
                    break 'scan;
                }
            }
        }
        let Some((m, c, gi)) = hit else { return p };
        let (lm, lc) = qp_lead(&basis[gi]);
        let factor = -&(&c / lc);
        qp_axpy(&mut p, &factor, m.quotient(lm), &basis[gi]);
        debug_assert!(!p.contains_key(&m), "reduction must cancel the chosen term");
    }
}

/// Buchberger's algorithm for homogeneous input, truncated at `max_deg`.
///
/// For a homogeneous ideal the basis elements of degree at most `max_deg`
/// are already determined by S-pairs whose lcm degree is at most `max_deg`,
/// so the truncation is exact for any question about degrees `<= max_deg`.
fn buchberger_capped(mut basis: Vec<QPoly>, max_deg: u32) -> Vec<QPoly> {
    basis.retain(|p| !p.is_empty());
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..basis.len() {
        for j in 0..i {
            pairs.push((j, i));
        }
    }
    while let Some((i, j)) = pairs.pop() {
        let (lmi, lci) = qp_lead(&basis[i]);
        let (lmj, lcj) = qp_lead(&basis[j]);
        let l = GMono::lcm(lmi, lmj);
        if l.degree() > max_deg {
            continue;
        }
        if l == lmi.times(lmj) {
            // Coprime leading monomials: the S-polynomial reduces to zero.
            continue;
        }
        let mut s = QPoly::new();
        let inv_i = &RatComplex::one() / lci;
        let neg_inv_j = -(&(&RatComplex::one() / lcj));
        qp_axpy(&mut s, &inv_i, l.quotient(lmi), &basis[i]);
        qp_axpy(&mut s, &neg_inv_j, l.quotient(lmj), &basis[j]);
        let r = qp_normal_form(s, &basis);
        if !r.is_empty() {
            for k in 0..basis.len() {
                pairs.push((k, basis.len()));
            }
            basis.push(r);
        }
    }
    basis
}

/// Number of degree-`deg` monomials not divisible by any basis leading
/// monomial — the Hilbert function of the quotient at `deg` once `basis` is
/// a Groebner basis through that degree.
fn standard_monomials_at(basis: &[QPoly], deg: u32) -> usize {
    let leads: Vec<GMono> = basis.iter().map(|g| qp_lead(g).0).collect();
    let mut count = 0usize;
    for e0 in 0..=deg {
        for e1 in 0..=(deg - e0) {
            let m = GMono([e0, e1, deg - e0 - e1]);
            if !leads.iter().any(|lm| lm.divides(m)) {
                count += 1;
            }
        }
    }
    count
}

/// Linear form in the slice-vector coordinates `b0, b1, b2`.
type LinForm = [RatComplex; 3];

/// Product of two linear forms as a quadric over the monomial basis
/// `b0^2, b0 b1, b0 b2, b1^2, b1 b2, b2^2`.
fn lin_mul(a: &LinForm, b: &LinForm) -> [RatComplex; 6] {
    [
        &a[0] * &b[0],
        &(&a[0] * &b[1]) + &(&a[1] * &b[0]),
        &(&a[0] * &b[2]) + &(&a[2] * &b[0]),
        &a[1] * &b[1],
        &(&a[1] * &b[2]) + &(&a[2] * &b[1]),
        &a[2] * &b[2],
    ]
}

const QUADRIC_EXPONENTS: [[u32; 3]; 6] = [
    [2, 0, 0],
    [1, 1, 0],
    [1, 0, 1],
    [0, 2, 0],
    [0, 1, 1],
    [0, 0, 2],
];

/// Cross-product matrix coefficients: `CROSS[s][j]` is the coefficient
/// triple of entry `(s, j)` over `(b0, b1, b2)`; the columns of the matrix
/// span the bilinear annihilator of `b` for every nonzero `b`.
const CROSS: [[[i8; 3]; 3]; 3] = [
    [[0, 0, 0], [0, 0, -1], [0, 1, 0]],
    [[0, 0, 1], [0, 0, 0], [-1, 0, 0]],
    [[0, -1, 0], [1, 0, 0], [0, 0, 0]],
];

/// Gaussian elimination over the Gaussian rationals, keeping one
/// representative per pivot; the span is unchanged.
fn independent_quadrics(rows: Vec<[RatComplex; 6]>) -> Vec<[RatComplex; 6]> {
    let mut basis: Vec<[RatComplex; 6]> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for mut row in rows {
        for (b, &p) in basis.iter().zip(&pivots) {
            if !row[p].is_zero() {
                let f = &row[p] / &b[p];
                for i in 0..6 {
                    row[i] = &row[i] - &(&f * &b[i]);
                }
            }
        }
        if let Some(p) = (0..6).find(|&i| !row[i].is_zero()) {
            pivots.push(p);
            basis.push(row);
            if basis.len() == 6 {
                break;
            }
        }
    }
    basis
}

/// Decide whether a side-3, order-3 tensor admits a decomposition into one
/// slice rank-one term along axis `k` plus one along axis `l` (1-based
/// acted axes, `k < l`). Exact; see the block comment above.
fn mixed_pair_realizable(x: &Tensor, k: usize, l: usize) -> bool {
    debug_assert!(x.dims() == [1, 3, 3, 3] && k < l && (1..=3).contains(&k) && (1..=3).contains(&l));
    let free = 6 - k - l;
    let dims = x.dims();
    let exact = x.exact_entries().expect("checked by the caller");
    let (sk, sl, sf) = (
        axis_stride(dims, k),
        axis_stride(dims, l),
        axis_stride(dims, free),
    );
    // slices[t][i][s]: axis k index i, axis l index s, free axis index t.
    let entry = |i: usize, s: usize, t: usize| &exact[i * sk + s * sl + t * sf];

    // Stacked symbolic compression: row i, column 3t + j holds
    // sum_s X[i, s, t] * CROSS[s][j] as a linear form in b.
    let zero_lin = || [RatComplex::zero(), RatComplex::zero(), RatComplex::zero()];
    let mut stacked: Vec<Vec<LinForm>> = vec![(0..9).map(|_| zero_lin()).collect(); 3];
    for (i, row) in stacked.iter_mut().enumerate() {
        for t in 0..3 {
            for j in 0..3 {
                let lin = &mut row[3 * t + j];
                for s in 0..3 {
                    let coeffs = CROSS[s][j];
                    let v = entry(i, s, t);
                    for (slot, &c) in lin.iter_mut().zip(&coeffs) {
                        if c != 0 {
                            let term = v.scale(&num_rational::BigRational::from_integer(c.into()));
                            *slot = &*slot + &term;
                        }
                    }
                }
            }
        }
    }

    // All 2x2 minors of the 3x9 stack.
    let mut minors: Vec<[RatComplex; 6]> = Vec::new();
    for r1 in 0..3 {
        for r2 in (r1 + 1)..3 {
            for c1 in 0..9 {
                for c2 in (c1 + 1)..9 {
                    let ad = lin_mul(&stacked[r1][c1], &stacked[r2][c2]);
                    let bc = lin_mul(&stacked[r1][c2], &stacked[r2][c1]);
                    let mut minor = ad;
                    for (m, b) in minor.iter_mut().zip(&bc) {
                        *m = &*m - b;
                    }
                    if minor.iter().any(|c| !c.is_zero()) {
                        minors.push(minor);
                    }
                }
            }
        }
    }
    if minors.is_empty() {
        // The stack has rank <= 1 for every b.
        return true;
    }

    let gens: Vec<QPoly> = independent_quadrics(minors)
        .into_iter()
        .map(|q| {
            let mut p = QPoly::new();
            for (coeff, exps) in q.into_iter().zip(QUADRIC_EXPONENTS) {
                qp_add_term(&mut p, GMono(exps), coeff);
            }
            p
        })
        .collect();
    let gb = buchberger_capped(gens, 4);
    standard_monomials_at(&gb, 4) > 0
}
