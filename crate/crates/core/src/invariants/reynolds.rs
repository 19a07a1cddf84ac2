//! Reynolds-type projectors onto invariant polynomials.
//!
//! For one special-linear factor of size `m`, the projector of a
//! homogeneous coordinate polynomial `p` of degree divisible by `m` is
//!
//! ```text
//! R(p) = Ω^(ell·t) (Z ∘ p),    t = deg(p) / m,
//! ```
//!
//! where `Z ∘ p` substitutes every coordinate by its image under the
//! transposed polynomial action and the alternating operator Ω is applied
//! to the factor's matrix variables until none remain. Degrees not
//! divisible by `m` carry no invariants for that factor, so the projector
//! returns zero there. When `p` is already invariant, the projector
//! rescales it by the universal constant `Ω^(ell·t)(det^(ell·t))`, so a
//! genuine averaging projector divides by that constant; callers that only
//! test for (non-)vanishing can skip the division, which keeps all
//! coefficients integral. The full product-group projector
//! [`reynolds_product`] applies the factor projectors in sequence.

use super::action::ActionSpec;
use super::omega::omega_power;
use super::poly::Polynomial;
use crate::error::{Error, Result};

/// Projector for a single factor `k` of `spec`, without the normalizing
/// division. Requires `p` homogeneous; returns zero when the factor size
/// does not divide the degree.
pub fn reynolds_sl(p: &Polynomial, spec: &ActionSpec, k: usize) -> Result<Polynomial> {
    let factor = spec
        .factors
        .get(k)
        .ok_or_else(|| Error::AxisOutOfRange {
            axis: k,
            order: spec.factors.len(),
        })?;
    let deg = p.homogeneous_degree().ok_or_else(|| {
        Error::InvalidArgument("projector requires a homogeneous polynomial".into())
    })?;
    if p.is_zero() {
        return Ok(Polynomial::zero());
    }
    if deg % factor.m != 0 {
        return Ok(Polynomial::zero());
    }
    let t = deg / factor.m;
    let r = factor.ell * t;
    let map = spec.coordinate_substitution(k)?;
    let twisted = p.substitute(&map)?;
    Ok(omega_power(&twisted, k, r, factor.m))
}

/// Product-group projector: the factor projectors applied in sequence,
/// factor 0 first. Vanishes identically unless every factor size divides
/// the degree of `p`.
pub fn reynolds_product(p: &Polynomial, spec: &ActionSpec) -> Result<Polynomial> {
    let mut out = p.clone();
    for k in 0..spec.factors.len() {
        if out.is_zero() {
            return Ok(out);
        }
        out = reynolds_sl(&out, spec, k)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::bounds::coefficient_bound;
    use super::super::poly::{Polynomial, Var};
    use super::*;
    use crate::numerics::rational::RatComplex;
    use crate::numerics::RationalMatrix;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::{One, Signed, Zero};

    fn v(i: usize) -> Polynomial {
        Polynomial::var(Var::V { index: i })
    }

    fn det_v2() -> Polynomial {
        v(0).mul(&v(3)).sub(&v(1).mul(&v(2)))
    }

    #[test]
    fn left_mult_projector_recovers_determinant() {
        let spec = ActionSpec::matrix_left_mult(2).unwrap();
        // The diagonal coordinate product projects onto the determinant.
        let p = v(0).mul(&v(3));
        let out = reynolds_sl(&p, &spec, 0).unwrap();
        assert_eq!(out, det_v2());
        // The determinant is already invariant: the projector rescales it
        // by the universal constant for r = 1, m = 2, which is 2.
        let out = reynolds_sl(&det_v2(), &spec, 0).unwrap();
        assert_eq!(out, det_v2().scale(&BigRational::from_integer(BigInt::from(2))));
        assert_eq!(
            super::super::omega::omega_det_power_constant(1, 2),
            BigRational::from_integer(BigInt::from(2))
        );
    }

    #[test]
    fn degree_not_divisible_projects_to_zero() {
        let spec = ActionSpec::matrix_left_mult(2).unwrap();
        assert!(reynolds_sl(&v(0), &spec, 0).unwrap().is_zero());
        let cubic = v(0).mul(&v(1)).mul(&v(2));
        assert!(reynolds_sl(&cubic, &spec, 0).unwrap().is_zero());
    }

    #[test]
    fn tensor_product_projector_on_matrix_space() {
        // Ten(1, 2, 2) with both axis factors: the product projector of the
        // diagonal coordinate product is 2 * det (the first factor already
        // yields det, the second rescales it).
        let spec = ActionSpec::tensor_action(&[1, 2, 2]).unwrap();
        let p = v(0).mul(&v(3));
        let out = reynolds_product(&p, &spec).unwrap();
        assert_eq!(out, det_v2().scale(&BigRational::from_integer(BigInt::from(2))));
    }

    fn eval_at(p: &Polynomial, entries: &[RatComplex]) -> RatComplex {
        p.evaluate(&|var| match var {
            Var::V { index } => entries[index].clone(),
            _ => RatComplex::zero(),
        })
    }

    fn splitmix(state: &mut u64) -> u64 {
        *state = state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = *state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    #[test]
    fn projector_output_vanishes_on_singular_matrices() {
        // 2 * det vanishes exactly where the matrix is singular.
        let spec = ActionSpec::tensor_action(&[1, 2, 2]).unwrap();
        let out = reynolds_product(&v(0).mul(&v(3)), &spec).unwrap();
        let mut state = 7u64;
        for _ in 0..20 {
            // Random rank-one integer matrix a * bᵀ.
            let a = [
                splitmix(&mut state) as i64 % 5,
                splitmix(&mut state) as i64 % 5,
            ];
            let b = [
                splitmix(&mut state) as i64 % 5,
                splitmix(&mut state) as i64 % 5,
            ];
            let entries: Vec<RatComplex> = [a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]]
                .iter()
                .map(|&x| RatComplex::from_i64(x, 0))
                .collect();
            assert!(eval_at(&out, &entries).is_zero());
        }
    }

    /// Exact invariance of projector outputs under special-linear elements:
    /// evaluate at X and at the moved tensor and compare exactly.
    #[test]
    fn projector_output_is_invariant_under_special_linear_moves() {
        let spec = ActionSpec::tensor_action(&[1, 2, 2]).unwrap();
        let inputs = [v(0).mul(&v(3)), v(1).mul(&v(2)), v(0).mul(&v(1))];
        let mut state = 99u64;
        for p in &inputs {
            let out = reynolds_product(p, &spec).unwrap();
            if out.is_zero() {
                continue;
            }
            for trial in 0..20 {
                // Random integer shears have determinant one; alternate the
                // acted axis.
                let lam = (splitmix(&mut state) as i64 % 7) - 3;
                let g = if trial % 2 == 0 {
                    RationalMatrix::from_i64_rows(&[vec![1, lam], vec![0, 1]])
                } else {
                    RationalMatrix::from_i64_rows(&[vec![1, 0], vec![lam, 1]])
                };
                let axis = 1 + (trial % 2);
                let x = crate::tensor::Tensor::from_int_entries(
                    &[1, 2, 2],
                    &[
                        (vec![0, 0, 0], (splitmix(&mut state) % 9) as i64 - 4, 0),
                        (vec![0, 0, 1], (splitmix(&mut state) % 9) as i64 - 4, 0),
                        (vec![0, 1, 0], (splitmix(&mut state) % 9) as i64 - 4, 0),
                        (vec![0, 1, 1], (splitmix(&mut state) % 9) as i64 - 4, 0),
                    ],
                )
                .unwrap();
                let moved = x.apply_axis_exact(&g, axis).unwrap();
                let at_x = eval_at(&out, x.exact_entries().unwrap());
                let at_moved = eval_at(&out, moved.exact_entries().unwrap());
                assert_eq!(at_x, at_moved);
            }
        }
    }

    #[test]
    fn rational_special_linear_elements_preserve_values() {
        // diag(2, 1/2) and a rational shear both have determinant one.
        let spec = ActionSpec::tensor_action(&[1, 2, 2]).unwrap();
        let out = reynolds_product(&v(0).mul(&v(3)), &spec).unwrap();
        let two = BigRational::from_integer(BigInt::from(2));
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let g = RationalMatrix::from_rational_rows(&[
            vec![two, BigRational::zero()],
            vec![BigRational::zero(), half],
        ]);
        let x = crate::tensor::Tensor::from_int_entries(
            &[1, 2, 2],
            &[
                (vec![0, 0, 0], 3, 0),
                (vec![0, 0, 1], 1, 0),
                (vec![0, 1, 0], -2, 0),
                (vec![0, 1, 1], 5, 0),
            ],
        )
        .unwrap();
        for axis in [1usize, 2] {
            let moved = x.apply_axis_exact(&g, axis).unwrap();
            assert_eq!(
                eval_at(&out, x.exact_entries().unwrap()),
                eval_at(&out, moved.exact_entries().unwrap())
            );
        }
    }

    #[test]
    fn projector_coefficients_respect_the_size_bound() {
        let spec = ActionSpec::tensor_action(&[1, 2, 2]).unwrap();
        let inputs = [
            v(0).mul(&v(3)),
            v(1).mul(&v(2)),
            det_v2(),
            v(0).pow(2).mul(&v(3).pow(2)),
        ];
        for p in &inputs {
            let out = reynolds_product(p, &spec).unwrap();
            let bound = coefficient_bound(&spec, p.degree() as u64);
            let max = out.largest_coefficient_magnitude();
            assert!(max.is_integer());
            assert!(
                max.to_integer().abs() <= bound,
                "coefficient {max} exceeds bound {bound}"
            );
        }
    }

    #[test]
    fn projector_is_idempotent_up_to_the_universal_constant() {
        let spec = ActionSpec::matrix_left_mult(2).unwrap();
        let p = v(0).mul(&v(3));
        let once = reynolds_sl(&p, &spec, 0).unwrap();
        let twice = reynolds_sl(&once, &spec, 0).unwrap();
        let c = super::super::omega::omega_det_power_constant(1, 2);
        assert_eq!(twice, once.scale(&c));
        assert!(BigRational::one() < c);
    }
}
