//! The alternating differential operator on matrix-variable polynomials.
//!
//! For an `m x m` variable family `Z` the operator is
//!
//! ```text
//! Ω = Σ_σ sgn(σ) ∂^m / (∂Z_{0,σ(0)} … ∂Z_{m-1,σ(m-1)})
//! ```
//!
//! summed over all permutations σ of `{0, …, m-1}`. It commutes with the
//! substitution `Z ↦ AᵀZ` up to a factor `det(A)^r` (see
//! [`equivariance_holds`]), which is what makes it a projector onto
//! determinant-twisted components: applied enough times it strips all `Z`
//! dependence from a polynomial while preserving invariance properties.
//! Repeated application is [`omega_power`].

use super::action::substitute_z_left;
use super::poly::{next_permutation, permutation_sign, Polynomial, Var};
use crate::error::Result;
use crate::numerics::rational::RatComplex;
use crate::numerics::RationalMatrix;
use num_rational::BigRational;
use num_traits::One;

/// Apply the operator once to `q`, differentiating the size-`m` variable
/// family `Z^(factor)`. Terms of `Z`-degree below `m` vanish.
pub fn omega(q: &Polynomial, factor: usize, m: usize) -> Polynomial {
    let mut total = Polynomial::zero();
    let mut perm: Vec<usize> = (0..m).collect();
    loop {
        let sign = permutation_sign(&perm);
        let mut term = q.clone();
        for (row, &col) in perm.iter().enumerate() {
            if term.is_zero() {
                break;
            }
            term = term.derivative(Var::Z { factor, row, col });
        }
        if !term.is_zero() {
            let sign_rat = if sign > 0 {
                BigRational::one()
            } else {
                -BigRational::one()
            };
            total = total.add(&term.scale(&sign_rat));
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    total
}

/// Apply the operator `r` times; `r = 0` returns the input unchanged.
pub fn omega_power(q: &Polynomial, factor: usize, r: usize, m: usize) -> Polynomial {
    let mut out = q.clone();
    for _ in 0..r {
        if out.is_zero() {
            break;
        }
        out = omega(&out, factor, m);
    }
    out
}

/// The constant `Ω^r(det^r)` for the `m x m` family — the normalization a
/// projector built from `omega_power` must divide by. Always a positive
/// integer.
pub fn omega_det_power_constant(r: usize, m: usize) -> BigRational {
    let det = super::poly::det_poly(0, m);
    let p = omega_power(&det.pow(r as u32), 0, r, m);
    p.as_constant()
        .expect("omega power of a determinant power is a constant")
}

/// Check `Ω^r((A ⋆ q)) == det(A)^r · Ω^r(q)` exactly, where
/// `(A ⋆ q)(Z) = q(AᵀZ)` and `A` is a real rational matrix acting on the
/// size-`m` family `Z^(factor)`. The exponent `r` is inferred from the
/// `Z`-degree of `q`, which must be `r·m`.
pub fn equivariance_holds(q: &Polynomial, a: &RationalMatrix, factor: usize) -> Result<bool> {
    let m = a.rows();
    let deg = q
        .homogeneous_degree()
        .ok_or_else(|| crate::error::Error::InvalidArgument(
            "equivariance check requires a homogeneous polynomial".into(),
        ))?;
    if m == 0 || deg % m != 0 {
        return Err(crate::error::Error::InvalidArgument(format!(
            "degree {deg} is not a multiple of the matrix size {m}"
        )));
    }
    let r = deg / m;
    let twisted = substitute_z_left(q, a, factor)?;
    let lhs = omega_power(&twisted, factor, r, m);
    let det = a.det();
    let det_re = real_part(&det)?;
    let rhs = omega_power(q, factor, r, m).scale(&pow_rational(&det_re, r));
    Ok(lhs == rhs)
}

fn real_part(c: &RatComplex) -> Result<BigRational> {
    use num_traits::Zero;
    if !c.im.is_zero() {
        return Err(crate::error::Error::InvalidArgument(
            "expected a real rational matrix".into(),
        ));
    }
    Ok(c.re.clone())
}

fn pow_rational(x: &BigRational, e: usize) -> BigRational {
    let mut out = BigRational::one();
    for _ in 0..e {
        out *= x;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::poly::det_poly;
    use super::*;
    use num_bigint::BigInt;
    use num_traits::Zero;
    use std::collections::BTreeMap;

    fn z(i: usize, j: usize) -> Var {
        Var::Z {
            factor: 0,
            row: i,
            col: j,
        }
    }

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn det_maps_to_two() {
        let out = omega(&det_poly(0, 2), 0, 2);
        assert_eq!(out.as_constant(), Some(rat(2)));
    }

    #[test]
    fn diagonal_product_maps_to_one() {
        let p = Polynomial::var(z(0, 0)).mul(&Polynomial::var(z(1, 1)));
        let out = omega(&p, 0, 2);
        assert_eq!(out.as_constant(), Some(rat(1)));
    }

    #[test]
    fn zero_power_is_identity() {
        let p = det_poly(0, 2).pow(3);
        assert_eq!(omega_power(&p, 0, 0, 2), p);
    }

    #[test]
    fn low_degree_terms_vanish() {
        let p = Polynomial::var(z(0, 0)).add(&Polynomial::one());
        assert!(omega(&p, 0, 2).is_zero());
    }

    /// Independent oracle: a dense differentiator over the four 2x2 matrix
    /// variables, written without any of the sparse-polynomial machinery.
    /// Terms are exponent quadruples (e00, e01, e10, e11) with i64
    /// coefficients.
    fn oracle_diff(terms: &BTreeMap<[u32; 4], i64>, var: usize) -> BTreeMap<[u32; 4], i64> {
        let mut out = BTreeMap::new();
        for (exps, c) in terms {
            if exps[var] == 0 {
                continue;
            }
            let mut e = *exps;
            e[var] -= 1;
            *out.entry(e).or_insert(0) += c * exps[var] as i64;
        }
        out.retain(|_, c| *c != 0);
        out
    }

    fn oracle_omega(terms: &BTreeMap<[u32; 4], i64>) -> BTreeMap<[u32; 4], i64> {
        // sigma = id: d/dZ00 d/dZ11 ; sigma = swap: -d/dZ01 d/dZ10.
        let a = oracle_diff(&oracle_diff(terms, 0), 3);
        let b = oracle_diff(&oracle_diff(terms, 1), 2);
        let mut out = a;
        for (e, c) in b {
            *out.entry(e).or_insert(0) -= c;
        }
        out.retain(|_, c| *c != 0);
        out
    }

    fn to_oracle(p: &Polynomial) -> BTreeMap<[u32; 4], i64> {
        let mut out = BTreeMap::new();
        for (m, c) in p.terms() {
            let e = [
                m.exponent(z(0, 0)),
                m.exponent(z(0, 1)),
                m.exponent(z(1, 0)),
                m.exponent(z(1, 1)),
            ];
            assert!(c.is_integer());
            let num: BigInt = c.to_integer();
            let as_i64 = i64::try_from(&num).expect("oracle coefficients fit i64");
            out.insert(e, as_i64);
        }
        out.retain(|_, c| *c != 0);
        out
    }

    #[test]
    fn squared_determinant_double_application() {
        let det2 = det_poly(0, 2).pow(2);
        let once = omega(&det2, 0, 2);
        let twice = omega(&once, 0, 2);
        // Cross-check both applications against the independent dense oracle.
        assert_eq!(to_oracle(&once), oracle_omega(&to_oracle(&det2)));
        assert_eq!(
            to_oracle(&twice),
            oracle_omega(&oracle_omega(&to_oracle(&det2)))
        );
        assert_eq!(twice.as_constant(), Some(rat(12)));
        assert_eq!(omega_det_power_constant(2, 2), rat(12));
        assert_eq!(omega_det_power_constant(1, 2), rat(2));
    }

    #[test]
    fn output_degree_drops_by_m_or_vanishes() {
        // Pseudo-random homogeneous polynomials in the 2x2 family.
        let vars = [z(0, 0), z(0, 1), z(1, 0), z(1, 1)];
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for deg in 2..=4usize {
            for _ in 0..20 {
                let mut p = Polynomial::zero();
                for _ in 0..6 {
                    let mut mono = Polynomial::one();
                    for _ in 0..deg {
                        let v = vars[(next() % 4) as usize];
                        mono = mono.mul(&Polynomial::var(v));
                    }
                    let c = (next() % 11) as i64 - 5;
                    p = p.add(&mono.scale(&rat(c)));
                }
                let out = omega(&p, 0, 2);
                if !out.is_zero() {
                    assert_eq!(out.homogeneous_degree(), Some(deg - 2));
                }
            }
        }
    }

    #[test]
    fn omega_is_linear() {
        let p = det_poly(0, 2).pow(2);
        let q = Polynomial::var(z(0, 0)).pow(2).mul(&Polynomial::var(z(1, 1)).pow(2));
        let sum = omega(&p.add(&q), 0, 2);
        assert_eq!(sum, omega(&p, 0, 2).add(&omega(&q, 0, 2)));
        let scaled = omega(&p.scale(&BigRational::new(BigInt::from(3), BigInt::from(7))), 0, 2);
        assert_eq!(
            scaled,
            omega(&p, 0, 2).scale(&BigRational::new(BigInt::from(3), BigInt::from(7)))
        );
        assert!(omega(&Polynomial::zero(), 0, 2).is_zero());
    }

    #[test]
    fn equivariance_for_rational_matrices() {
        let q = det_poly(0, 2);
        // diag(2, 1/2) has determinant 1; a shear has determinant 1; a
        // non-special matrix picks up det^r.
        let two = BigRational::from_integer(BigInt::from(2));
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let diag = RationalMatrix::from_rational_rows(&[
            vec![two, BigRational::zero()],
            vec![BigRational::zero(), half],
        ]);
        assert!(equivariance_holds(&q, &diag, 0).unwrap());
        let shear = RationalMatrix::from_i64_rows(&[vec![1, 3], vec![0, 1]]);
        assert!(equivariance_holds(&q, &shear, 0).unwrap());
        let stretch = RationalMatrix::from_i64_rows(&[vec![2, 0], vec![0, 3]]);
        assert!(equivariance_holds(&q.pow(2), &stretch, 0).unwrap());
    }

    #[test]
    fn real_part_rejects_complex() {
        let c = RatComplex::from_i64(1, 1);
        assert!(real_part(&c).is_err());
        assert!(real_part(&RatComplex::from_i64(5, 0)).is_ok());
        assert!(BigRational::zero().is_zero());
    }
}
