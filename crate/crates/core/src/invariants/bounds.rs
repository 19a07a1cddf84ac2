//! Effective bounds for the algebraic membership route.
//!
//! [`generating_degree_bound`] gives a degree `D` such that the invariant
//! ring is generated in degrees at most `D`: if every invariant of degree
//! up to `D` vanishes at a point, all invariants do, and the point lies in
//! the null cone. [`coefficient_bound`] bounds the magnitude of the integer
//! coefficients any factor-by-factor projector output can have, which in
//! turn bounds the bit size of exact witness evaluations. Both bounds are
//! deliberately conservative; they grow fast and are only reached by toy
//! instances, which is exactly the regime where exhaustive certification is
//! feasible anyway.

use super::action::ActionSpec;
use num_bigint::BigInt;
use num_traits::One;

/// A degree bound `D = ell^(Σ_k (m_k² - 1)) · (max_k m_k)^d` with
/// `ell = Σ_k ell_k`, beyond which no new generating invariants appear.
/// For a single trivial factor (`m = 1`, `ell = 1`) this is 1.
pub fn generating_degree_bound(spec: &ActionSpec) -> BigInt {
    let d = spec.factors.len();
    if d == 0 {
        return BigInt::one();
    }
    let ell: u64 = spec.factors.iter().map(|f| f.ell as u64).sum();
    let group_dim: u64 = spec
        .factors
        .iter()
        .map(|f| (f.m * f.m - 1) as u64)
        .sum();
    let max_m = spec.factors.iter().map(|f| f.m).max().unwrap_or(1) as u64;
    let ell_big = BigInt::from(ell.max(1));
    let mut out = BigInt::one();
    for _ in 0..group_dim {
        out *= &ell_big;
    }
    let max_big = BigInt::from(max_m);
    for _ in 0..d {
        out *= &max_big;
    }
    out
}

/// Bound on the magnitude of any coefficient produced by the sequential
/// product projector applied to a degree-`degree` monomial with unit
/// coefficients: the per-factor contribution is
/// `(R·n²)^(t_k·m_k) · (ell_k·t_k·m_k⁴)^(ell_k·t_k·m_k)` with
/// `t_k = ceil(degree / m_k)`, `n` the acted dimension and `R` the
/// coefficient bound of the action's entries; the factors multiply.
pub fn coefficient_bound(spec: &ActionSpec, degree: u64) -> BigInt {
    let n = BigInt::from(spec.dim as u64);
    let r = spec.coeff_bound.clone().max(BigInt::one());
    let mut out = BigInt::one();
    for f in &spec.factors {
        let m = f.m as u64;
        let ell = f.ell as u64;
        let t = degree.div_ceil(m.max(1)).max(1);
        let base1 = &r * &n * &n;
        out *= pow_big(&base1, t * m);
        let m4 = BigInt::from(m) * BigInt::from(m) * BigInt::from(m) * BigInt::from(m);
        let base2 = BigInt::from(ell.max(1)) * BigInt::from(t) * m4;
        out *= pow_big(&base2, ell * t * m);
    }
    out
}

fn pow_big(base: &BigInt, e: u64) -> BigInt {
    let mut out = BigInt::one();
    let mut e = e;
    let mut b = base.clone();
    while e > 0 {
        if e & 1 == 1 {
            out *= &b;
        }
        b = &b * &b;
        e >>= 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    #[test]
    fn degree_bound_for_the_matrix_case() {
        // Two size-2 factors acting linearly on a 2x2 matrix space:
        // ell = 2, Σ(m²-1) = 6, max m = 2, d = 2 → 2^6 · 2^2 = 256.
        let spec = ActionSpec::tensor_action(&[1, 2, 2]).unwrap();
        assert_eq!(generating_degree_bound(&spec).to_u64(), Some(256));
    }

    #[test]
    fn degree_bound_for_trivial_factors() {
        // One trivial factor: ell = 1, group dimension 0, max m = 1 → 1.
        let spec = ActionSpec::tensor_action(&[1, 1]).unwrap();
        assert_eq!(generating_degree_bound(&spec).to_u64(), Some(1));
        // A single size-2 factor on vectors: 1^3 · 2 = 2.
        let vec_spec = ActionSpec::tensor_action(&[1, 2]).unwrap();
        assert_eq!(generating_degree_bound(&vec_spec).to_u64(), Some(2));
    }

    #[test]
    fn degree_bound_is_monotone_in_the_dimensions() {
        let shapes: [&[usize]; 4] = [&[1, 2], &[1, 2, 2], &[1, 2, 2, 2], &[1, 3, 3]];
        let mut last = BigInt::from(0);
        for dims in shapes {
            let b = generating_degree_bound(&ActionSpec::tensor_action(dims).unwrap());
            assert!(b >= last, "bound shrank at {dims:?}");
            last = b;
        }
    }

    #[test]
    fn coefficient_bound_for_the_left_mult_case() {
        // One size-2 factor on a 4-dimensional space, unit entries, degree
        // 2: t = 1, (1·16)^2 · (1·1·16)^2 = 65536.
        let spec = ActionSpec::matrix_left_mult(2).unwrap();
        assert_eq!(coefficient_bound(&spec, 2).to_u64(), Some(65536));
    }

    #[test]
    fn coefficient_bound_is_monotone() {
        let spec = ActionSpec::tensor_action(&[1, 2, 2]).unwrap();
        let mut last = BigInt::from(0);
        for degree in [2u64, 4, 6, 8] {
            let b = coefficient_bound(&spec, degree);
            assert!(b > last);
            last = b;
        }
        let bigger = ActionSpec::tensor_action(&[1, 2, 2, 2]).unwrap();
        assert!(coefficient_bound(&bigger, 2) > coefficient_bound(&spec, 2));
    }
}
