//! Evaluation of determinant-product spanning invariants.
//!
//! A degree-`m` spanning invariant is parameterized by one permutation of
//! the `m` tensor slots per acted axis and a choice of `m` multiplicity
//! indices. Each permutation splits the slots into consecutive blocks of
//! size `n_k`; the invariant contracts `X^{⊗m}` with a product of
//! determinant functionals, one per block, and with the dual basis vector
//! picked by the multiplicity indices on axis 0:
//!
//! ```text
//! P(X) = Σ_{J_1..J_d} Π_k sgn_k(J_k) · Π_{c<m} X[idx_c, J_1(c), …, J_d(c)]
//! ```
//!
//! where `J_k : slots → [n_k]` ranges over maps that are bijective on every
//! block of axis `k`, and `sgn_k` multiplies the per-block assignment signs.
//! These functionals span the invariants of degree `m`, so a nonzero value
//! is an exact certificate that `X` is outside the null cone, and values
//! are bounded by `(n_1⋯n_d)^m · ‖X‖^m`.
//!
//! Instead of enumerating the `Π_k (n_k!)^{m/n_k}` maps directly, the
//! evaluator sweeps the slots once, carrying a table of partial states: for
//! every block that has started but not finished, the set of values already
//! used. Equal states merge, so aligned block structures evaluate in almost
//! linear time while badly interleaved ones degrade gracefully until a
//! state budget stops them.

use crate::error::{Error, Result};
use crate::numerics::rational::RatComplex;
use crate::tensor::Tensor;
use crate::util;
use num_complex::Complex64;
use std::collections::HashMap;

/// Cap on simultaneous partial states during one evaluation.
pub const STATE_BUDGET: usize = 250_000;

/// Largest supported degree (values per block are tracked in 16-bit masks,
/// and the combinatorics are hopeless far beyond this anyway).
pub const MAX_DEGREE: usize = 32;

/// Parameters of one spanning invariant: the degree, one slot permutation
/// per acted axis, and the multiplicity indices for axis 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanningInvariant {
    pub m: usize,
    pub perms: Vec<Vec<usize>>,
    pub idx: Vec<usize>,
}

/// Evaluate one spanning invariant in floating point.
pub fn schur_weyl_eval(
    x: &Tensor,
    m: usize,
    perms: &[Vec<usize>],
    idx: &[usize],
) -> Result<Complex64> {
    let plan = Plan::build(x.dims(), m, perms, idx)?;
    let entries = x.entries();
    plan.run(|flat| entries[flat], Complex64::new(0.0, 0.0))
}

/// Evaluate one spanning invariant in exact rational arithmetic; the tensor
/// must carry exact entries.
pub fn schur_weyl_eval_exact(
    x: &Tensor,
    m: usize,
    perms: &[Vec<usize>],
    idx: &[usize],
) -> Result<RatComplex> {
    let plan = Plan::build(x.dims(), m, perms, idx)?;
    let entries = x.exact_entries().ok_or_else(|| {
        Error::ExactEntriesRequired("exact spanning-invariant evaluation".into())
    })?;
    plan.run(|flat| entries[flat].clone(), RatComplex::zero())
}

/// Evaluate a batch of spanning invariants, in parallel when the crate's
/// parallel feature is enabled. Output order matches input order either way.
pub fn schur_weyl_batch(x: &Tensor, params: &[SpanningInvariant]) -> Vec<Result<Complex64>> {
    util::indexed_map(params.len(), |i| {
        let p = &params[i];
        schur_weyl_eval(x, p.m, &p.perms, &p.idx)
    })
}

/// Sequential reference variant of [`schur_weyl_batch`].
pub fn schur_weyl_batch_seq(x: &Tensor, params: &[SpanningInvariant]) -> Vec<Result<Complex64>> {
    params
        .iter()
        .map(|p| schur_weyl_eval(x, p.m, &p.perms, &p.idx))
        .collect()
}

/// Minimal scalar interface the sweep needs; implemented for floating and
/// exact complex numbers.
trait Amplitude: Clone {
    fn unit() -> Self;
    fn is_zero_val(&self) -> bool;
    fn mul_ref(&self, other: &Self) -> Self;
    fn add_in(&mut self, other: &Self);
    fn negated(&self) -> Self;
}

impl Amplitude for Complex64 {
    fn unit() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_zero_val(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn add_in(&mut self, other: &Self) {
        *self += other;
    }
    fn negated(&self) -> Self {
        -self
    }
}

impl Amplitude for RatComplex {
    fn unit() -> Self {
        RatComplex::one()
    }
    fn is_zero_val(&self) -> bool {
        self.is_zero()
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn add_in(&mut self, other: &Self) {
        *self += other;
    }
    fn negated(&self) -> Self {
        -self
    }
}

/// Per-evaluation bookkeeping: which block of each axis a slot belongs to,
/// the visit order, and the constant sign from reordering block columns
/// into visit order.
struct Plan {
    dims: Vec<usize>,
    idx: Vec<usize>,
    order: Vec<usize>,
    /// `block_of[k][slot]` for acted axis `k`.
    block_of: Vec<Vec<usize>>,
    base_sign: i8,
}

impl Plan {
    fn build(dims: &[usize], m: usize, perms: &[Vec<usize>], idx: &[usize]) -> Result<Plan> {
        let d = dims.len() - 1;
        if m == 0 || m > MAX_DEGREE {
            return Err(Error::InvalidArgument(format!(
                "degree must lie in 1..={MAX_DEGREE}, got {m}"
            )));
        }
        if perms.len() != d {
            return Err(Error::InvalidArgument(format!(
                "expected {d} slot permutations, got {}",
                perms.len()
            )));
        }
        if idx.len() != m {
            return Err(Error::InvalidArgument(format!(
                "expected {m} multiplicity indices, got {}",
                idx.len()
            )));
        }
        if let Some(&bad) = idx.iter().find(|&&i| i >= dims[0]) {
            return Err(Error::InvalidArgument(format!(
                "multiplicity index {bad} out of range for axis size {}",
                dims[0]
            )));
        }
        let mut block_of = Vec::with_capacity(d);
        for (k, perm) in perms.iter().enumerate() {
            let n = dims[k + 1];
            if n > 16 {
                return Err(Error::InvalidArgument(format!(
                    "axis size {n} exceeds the supported maximum 16"
                )));
            }
            if m % n != 0 {
                return Err(Error::InvalidArgument(format!(
                    "axis size {n} does not divide the degree {m}"
                )));
            }
            if perm.len() != m {
                return Err(Error::InvalidArgument(format!(
                    "slot permutation for axis {} has length {}, expected {m}",
                    k + 1,
                    perm.len()
                )));
            }
            let mut seen = vec![false; m];
            for &s in perm {
                if s >= m || seen[s] {
                    return Err(Error::InvalidArgument(format!(
                        "invalid slot permutation for axis {}",
                        k + 1
                    )));
                }
                seen[s] = true;
            }
            let mut blocks = vec![0usize; m];
            for (pos, &slot) in perm.iter().enumerate() {
                blocks[slot] = pos / n;
            }
            block_of.push(blocks);
        }
        let order = visit_order(m, &block_of, dims);
        let mut rank = vec![0usize; m];
        for (r, &slot) in order.iter().enumerate() {
            rank[slot] = r;
        }
        // Reordering the columns of each block determinant from permutation
        // order into visit order contributes a fixed sign per block.
        let mut base_sign = 1i8;
        for (k, perm) in perms.iter().enumerate() {
            let n = dims[k + 1];
            for block in perm.chunks(n) {
                for a in 0..n {
                    for b in (a + 1)..n {
                        if rank[block[a]] > rank[block[b]] {
                            base_sign = -base_sign;
                        }
                    }
                }
            }
        }
        Ok(Plan {
            dims: dims.to_vec(),
            idx: idx.to_vec(),
            order,
            block_of,
            base_sign,
        })
    }

    /// Sweep the slots, maintaining signed amplitudes per partial state.
    fn run<T: Amplitude>(&self, entry: impl Fn(usize) -> T, zero: T) -> Result<T> {
        let d = self.block_of.len();
        // State key: sorted list of (axis, block, used-values mask) for
        // blocks that are open, i.e. started but not yet full.
        type Key = Vec<(u8, u16, u16)>;
        let mut states: HashMap<Key, T> = HashMap::new();
        states.insert(Vec::new(), T::unit());
        let mut combo = vec![0usize; d];
        let mut masks = vec![0u16; d];
        for &slot in &self.order {
            let mut next: HashMap<Key, T> = HashMap::new();
            for (key, amp) in &states {
                for k in 0..d {
                    let b = self.block_of[k][slot] as u16;
                    masks[k] = key
                        .iter()
                        .find(|&&(ax, blk, _)| ax == k as u8 && blk == b)
                        .map(|&(_, _, mask)| mask)
                        .unwrap_or(0);
                }
                // Enumerate value combinations (one value per axis, unused
                // in its block) with an odometer that skips used values.
                for c in combo.iter_mut() {
                    *c = 0;
                }
                'combos: loop {
                    let mut valid = true;
                    for k in 0..d {
                        let n = self.dims[k + 1];
                        while combo[k] < n && masks[k] & (1 << combo[k]) != 0 {
                            combo[k] += 1;
                        }
                        if combo[k] >= n {
                            valid = false;
                            break;
                        }
                    }
                    if valid {
                        let e = entry(self.flat_index(slot, &combo));
                        if !e.is_zero_val() {
                            let mut sign = 1i8;
                            for (k, &v) in combo.iter().enumerate() {
                                // Inversions: previously used values above
                                // the one being assigned.
                                if (masks[k] >> (v + 1)).count_ones() % 2 == 1 {
                                    sign = -sign;
                                }
                            }
                            let new_key = self.advance_key(key, slot, &combo, &masks);
                            let contrib = amp.mul_ref(&e);
                            let cell = next.entry(new_key).or_insert_with(|| zero.clone());
                            if sign > 0 {
                                cell.add_in(&contrib);
                            } else {
                                cell.add_in(&contrib.negated());
                            }
                        }
                    }
                    // Odometer step.
                    let mut k = d;
                    loop {
                        if k == 0 {
                            break 'combos;
                        }
                        k -= 1;
                        combo[k] += 1;
                        if combo[k] < self.dims[k + 1] {
                            for c in combo.iter_mut().skip(k + 1) {
                                *c = 0;
                            }
                            break;
                        }
                    }
                }
            }
            if next.len() > STATE_BUDGET {
                return Err(Error::ResourceBudget(format!(
                    "spanning-invariant sweep needed more than {STATE_BUDGET} partial states"
                )));
            }
            states = next;
            if states.is_empty() {
                return Ok(zero);
            }
        }
        debug_assert!(states.len() == 1 && states.keys().next().unwrap().is_empty());
        let total = states.remove(&Vec::new()).unwrap_or(zero);
        Ok(if self.base_sign > 0 {
            total
        } else {
            total.negated()
        })
    }

    fn flat_index(&self, slot: usize, values: &[usize]) -> usize {
        let mut flat = self.idx[slot];
        for (k, &v) in values.iter().enumerate() {
            flat = flat * self.dims[k + 1] + v;
        }
        flat
    }

    fn advance_key(
        &self,
        key: &[(u8, u16, u16)],
        slot: usize,
        values: &[usize],
        masks: &[u16],
    ) -> Vec<(u8, u16, u16)> {
        let mut out: Vec<(u8, u16, u16)> = Vec::with_capacity(key.len() + values.len());
        out.extend_from_slice(key);
        for (k, &v) in values.iter().enumerate() {
            let b = self.block_of[k][slot] as u16;
            let n = self.dims[k + 1];
            let new_mask = masks[k] | (1 << v);
            let full = new_mask.count_ones() as usize == n;
            if let Some(pos) = out
                .iter()
                .position(|&(ax, blk, _)| ax == k as u8 && blk == b)
            {
                if full {
                    out.remove(pos);
                } else {
                    out[pos].2 = new_mask;
                }
            } else if !full {
                out.push((k as u8, b, new_mask));
            }
        }
        out.sort_unstable();
        out
    }
}

/// Greedy slot order: prefer slots that close open blocks and avoid opening
/// new ones, so aligned block structures keep the state table tiny.
fn visit_order(m: usize, block_of: &[Vec<usize>], dims: &[usize]) -> Vec<usize> {
    let d = block_of.len();
    let mut remaining: Vec<usize> = (0..m).collect();
    let mut filled: Vec<HashMap<usize, usize>> = vec![HashMap::new(); d];
    let mut order = Vec::with_capacity(m);
    while !remaining.is_empty() {
        let mut best_score = i64::MIN;
        let mut best_slot = usize::MAX;
        let mut best_pos = usize::MAX;
        for (pos, &slot) in remaining.iter().enumerate() {
            let mut score = 0i64;
            for k in 0..d {
                let b = block_of[k][slot];
                let n = dims[k + 1];
                let have = filled[k].get(&b).copied().unwrap_or(0);
                if have == 0 {
                    score -= 1; // opens a block
                }
                if have + 1 == n {
                    score += 2; // closes a block
                }
            }
            if score > best_score || (score == best_score && slot < best_slot) {
                best_score = score;
                best_slot = slot;
                best_pos = pos;
            }
        }
        remaining.swap_remove(best_pos);
        order.push(best_slot);
        for k in 0..d {
            *filled[k].entry(block_of[k][best_slot]).or_insert(0) += 1;
        }
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::RationalMatrix;

    fn ident_tensor() -> Tensor {
        crate::tensor::identity_matrix_tensor(2).unwrap()
    }

    fn splitmix(state: &mut u64) -> u64 {
        *state = state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = *state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    fn random_int_tensor(dims: &[usize], state: &mut u64, span: i64) -> Tensor {
        let mut t = Tensor::zeros(dims).unwrap();
        let total: usize = dims.iter().product();
        for flat in 0..total {
            let mut idx = Vec::with_capacity(dims.len());
            let mut rem = flat;
            for &n in dims.iter().rev() {
                idx.push(rem % n);
                rem /= n;
            }
            idx.reverse();
            let v = (splitmix(state) % (2 * span as u64 + 1)) as i64 - span;
            t.set_int(&idx, v, 0).unwrap();
        }
        t
    }

    #[test]
    fn identity_matrix_degree_two_evaluates_to_two() {
        let x = ident_tensor();
        let perms = vec![vec![0, 1], vec![0, 1]];
        let idx = vec![0, 0];
        let v = schur_weyl_eval(&x, 2, &perms, &idx).unwrap();
        assert!((v.re - 2.0).abs() < 1e-12 && v.im.abs() < 1e-12);
        let ve = schur_weyl_eval_exact(&x, 2, &perms, &idx).unwrap();
        assert_eq!(ve, RatComplex::from_i64(2, 0));
    }

    #[test]
    fn degree_two_is_twice_the_determinant_for_matrices() {
        let mut state = 11u64;
        for _ in 0..30 {
            let x = random_int_tensor(&[1, 2, 2], &mut state, 6);
            let p = schur_weyl_eval_exact(&x, 2, &[vec![0, 1], vec![0, 1]], &[0, 0]).unwrap();
            let e = x.exact_entries().unwrap();
            let det = &(&e[0] * &e[3]) - &(&e[1] * &e[2]);
            assert_eq!(p, &det + &det);
        }
    }

    #[test]
    fn invalid_arguments_are_rejected() {
        let x = ident_tensor();
        // Degree not divisible by an axis size.
        assert!(schur_weyl_eval(&x, 3, &[vec![0, 1, 2], vec![0, 1, 2]], &[0, 0, 0]).is_err());
        // Wrong number of permutations.
        assert!(schur_weyl_eval(&x, 2, &[vec![0, 1]], &[0, 0]).is_err());
        // Not a permutation.
        assert!(schur_weyl_eval(&x, 2, &[vec![0, 0], vec![0, 1]], &[0, 0]).is_err());
        // Multiplicity index out of range.
        assert!(schur_weyl_eval(&x, 2, &[vec![0, 1], vec![0, 1]], &[1, 0]).is_err());
        // Degree zero.
        assert!(schur_weyl_eval(&x, 0, &[vec![], vec![]], &[]).is_err());
    }

    #[test]
    fn values_respect_the_norm_bound() {
        // |P(X)| ≤ (n1 n2)^m ‖X‖^m, here 16 ‖X‖² at degree 2.
        let mut state = 23u64;
        for _ in 0..100 {
            let x = random_int_tensor(&[1, 2, 2], &mut state, 9);
            let v = schur_weyl_eval(&x, 2, &[vec![0, 1], vec![0, 1]], &[0, 0]).unwrap();
            let bound = 16.0 * x.norm_sq();
            assert!(v.norm() <= bound + 1e-9, "{} > {}", v.norm(), bound);
        }
    }

    #[test]
    fn degree_two_vanishes_for_three_acted_axes() {
        // With an odd number of sign-carrying axes the degree-2 functionals
        // cancel identically.
        let mut state = 5u64;
        for _ in 0..20 {
            let x = random_int_tensor(&[1, 2, 2, 2], &mut state, 7);
            let v =
                schur_weyl_eval_exact(&x, 2, &[vec![0, 1], vec![0, 1], vec![0, 1]], &[0, 0])
                    .unwrap();
            assert!(v.is_zero());
        }
    }

    #[test]
    fn block_column_order_only_flips_the_sign() {
        // Reversing the two columns of one block negates the value.
        let mut state = 91u64;
        let x = random_int_tensor(&[1, 2, 2], &mut state, 5);
        let a = schur_weyl_eval_exact(&x, 2, &[vec![0, 1], vec![0, 1]], &[0, 0]).unwrap();
        let b = schur_weyl_eval_exact(&x, 2, &[vec![1, 0], vec![0, 1]], &[0, 0]).unwrap();
        assert_eq!(a, -&b);
    }

    #[test]
    fn exact_invariance_under_shears() {
        let mut state = 37u64;
        let perms4 = vec![
            vec![0, 1, 2, 3],
            vec![0, 2, 1, 3],
            vec![0, 3, 1, 2],
        ];
        for trial in 0..10 {
            let x = random_int_tensor(&[1, 2, 2, 2], &mut state, 4);
            let before = schur_weyl_eval_exact(&x, 4, &perms4, &[0, 0, 0, 0]).unwrap();
            let lam = (splitmix(&mut state) % 7) as i64 - 3;
            let g = if trial % 2 == 0 {
                RationalMatrix::from_i64_rows(&[vec![1, lam], vec![0, 1]])
            } else {
                RationalMatrix::from_i64_rows(&[vec![1, 0], vec![lam, 1]])
            };
            let axis = 1 + trial % 3;
            let moved = x.apply_axis_exact(&g, axis).unwrap();
            let after = schur_weyl_eval_exact(&moved, 4, &perms4, &[0, 0, 0, 0]).unwrap();
            assert_eq!(before, after);
        }
    }

    #[test]
    fn float_invariance_under_special_linear_moves() {
        use crate::numerics::CMatrix;
        let mut state = 53u64;
        let perms = vec![vec![0, 1], vec![0, 1]];
        for _ in 0..20 {
            let x = random_int_tensor(&[1, 2, 2], &mut state, 5);
            let before = schur_weyl_eval(&x, 2, &perms, &[0, 0]).unwrap();
            // A rotation-like special linear element with determinant one.
            let t = (splitmix(&mut state) % 100) as f64 / 50.0 - 1.0;
            let (c, s) = (t.cos(), t.sin());
            let g = CMatrix::from_rows(&[
                vec![Complex64::new(c, 0.0), Complex64::new(s, 0.0)],
                vec![Complex64::new(-s, 0.0), Complex64::new(c, 0.0)],
            ]);
            let moved = x.apply_axis(&g, 1).unwrap();
            let after = schur_weyl_eval(&moved, 2, &perms, &[0, 0]).unwrap();
            let scale = before.norm().max(1.0);
            assert!((before - after).norm() <= 1e-8 * scale);
        }
    }

    #[test]
    fn batch_matches_singles_and_sequential() {
        let mut state = 71u64;
        let x = random_int_tensor(&[1, 2, 2, 2], &mut state, 3);
        let mut params = Vec::new();
        for a in 0..3usize {
            let perm = match a {
                0 => vec![0, 1, 2, 3],
                1 => vec![0, 2, 1, 3],
                _ => vec![0, 3, 1, 2],
            };
            params.push(SpanningInvariant {
                m: 4,
                perms: vec![perm.clone(), perm.clone(), perm],
                idx: vec![0; 4],
            });
        }
        let par = schur_weyl_batch(&x, &params);
        let seq = schur_weyl_batch_seq(&x, &params);
        assert_eq!(par.len(), seq.len());
        for (i, (a, b)) in par.iter().zip(seq.iter()).enumerate() {
            let (a, b) = (a.as_ref().unwrap(), b.as_ref().unwrap());
            assert_eq!(a, b);
            let single = schur_weyl_eval(&x, 4, &params[i].perms, &params[i].idx).unwrap();
            assert_eq!(*a, single);
        }
    }

    #[test]
    fn multiplicity_axis_selects_slices() {
        // dims (2, 2, 2): entries form two 2x2 slices A (idx 0) and B
        // (idx 1); degree-2 invariants with mixed idx give the pencil
        // coefficients det(A), det(B), and the mixed term.
        let x = Tensor::from_int_entries(
            &[2, 2, 2],
            &[
                (vec![0, 0, 0], 1, 0),
                (vec![0, 1, 1], 2, 0),
                (vec![1, 0, 1], 3, 0),
                (vec![1, 1, 0], -1, 0),
            ],
        )
        .unwrap();
        let perms = vec![vec![0, 1], vec![0, 1]];
        // det(A) = 2, det(B) = 3.
        let paa = schur_weyl_eval_exact(&x, 2, &perms, &[0, 0]).unwrap();
        let pbb = schur_weyl_eval_exact(&x, 2, &perms, &[1, 1]).unwrap();
        assert_eq!(paa, RatComplex::from_i64(4, 0));
        assert_eq!(pbb, RatComplex::from_i64(6, 0));
    }
}
