//! Polynomial descriptions of product-group actions.
//!
//! An [`ActionSpec`] records how each special-linear factor acts on the
//! representation space `V`: factor `k` of size `m_k` contributes an
//! `n x n` matrix `rho^(k)(Z)` whose entries are homogeneous integer
//! polynomials of degree `ell_k` in the variable family `Z^(k)`, with
//! `rho(I) = I`. Two constructors cover the cases exercised here: the
//! natural per-axis action on tensors, and left matrix multiplication on
//! square matrices.

use super::poly::{Polynomial, Var};
use crate::error::{Error, Result};
use crate::numerics::RationalMatrix;
use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::BTreeMap;

/// Cap on the dimension of `V` for symbolic work; beyond this the
/// polynomial representation of the action is no longer practical.
pub const ACTION_DIM_BUDGET: usize = 64;

/// One special-linear factor of the acting group.
#[derive(Clone, Debug)]
pub struct ActionFactor {
    /// Matrix size `m_k`: the factor is the special linear group of that
    /// size.
    pub m: usize,
    /// Homogeneity degree of the entries of `rho` in the `Z^(k)` family.
    pub ell: usize,
    /// The `n x n` matrix of polynomials; `rho[row][col]` is the
    /// coefficient of basis vector `row` in the image of basis vector
    /// `col`.
    pub rho: Vec<Vec<Polynomial>>,
}

/// A product-group action on an `n`-dimensional space, factor by factor.
#[derive(Clone, Debug)]
pub struct ActionSpec {
    /// Dimension of the acted space `V`.
    pub dim: usize,
    pub factors: Vec<ActionFactor>,
    /// Bound on the magnitude of integer coefficients appearing in any
    /// `rho` entry.
    pub coeff_bound: BigInt,
}

impl ActionSpec {
    /// The natural action on tensors of shape `dims`: axis 0 carries no
    /// group factor, and each later axis `k` is rotated by its own
    /// special-linear factor of size `dims[k]`. `V` is the flattened
    /// (row-major, last index fastest) entry space.
    pub fn tensor_action(dims: &[usize]) -> Result<ActionSpec> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::InvalidArgument(
                "tensor action requires nonempty positive dimensions".into(),
            ));
        }
        let dim: usize = dims.iter().product();
        if dim > ACTION_DIM_BUDGET {
            return Err(Error::ResourceBudget(format!(
                "acted space has dimension {dim}, above the symbolic budget {ACTION_DIM_BUDGET}"
            )));
        }
        let d = dims.len() - 1;
        let mut factors = Vec::with_capacity(d);
        for k in 0..d {
            let m = dims[k + 1];
            let mut rho = vec![vec![Polynomial::zero(); dim]; dim];
            for (col, mut rem) in (0..dim).map(|a| (a, a)) {
                // Decode the flat column index into per-axis coordinates.
                let mut coords = vec![0usize; dims.len()];
                for ax in (0..dims.len()).rev() {
                    coords[ax] = rem % dims[ax];
                    rem /= dims[ax];
                }
                for b in 0..m {
                    let mut image = coords.clone();
                    image[k + 1] = b;
                    let mut row = 0usize;
                    for (ax, &c) in image.iter().enumerate() {
                        row = row * dims[ax] + c;
                    }
                    rho[row][col] = Polynomial::var(Var::Z {
                        factor: k,
                        row: b,
                        col: coords[k + 1],
                    });
                }
            }
            factors.push(ActionFactor { m, ell: 1, rho });
        }
        Ok(ActionSpec {
            dim,
            factors,
            coeff_bound: BigInt::from(1),
        })
    }

    /// Left multiplication of a single special-linear factor of size `m` on
    /// the space of `m x m` matrices, flattened row-major: the coordinate
    /// `v_{m·i + j}` is matrix entry `(i, j)`.
    pub fn matrix_left_mult(m: usize) -> Result<ActionSpec> {
        if m == 0 {
            return Err(Error::InvalidArgument("matrix size must be positive".into()));
        }
        let dim = m * m;
        if dim > ACTION_DIM_BUDGET {
            return Err(Error::ResourceBudget(format!(
                "acted space has dimension {dim}, above the symbolic budget {ACTION_DIM_BUDGET}"
            )));
        }
        let mut rho = vec![vec![Polynomial::zero(); dim]; dim];
        for i in 0..m {
            for j in 0..m {
                let col = m * i + j;
                for b in 0..m {
                    rho[m * b + j][col] = Polynomial::var(Var::Z {
                        factor: 0,
                        row: b,
                        col: i,
                    });
                }
            }
        }
        Ok(ActionSpec {
            dim,
            factors: vec![ActionFactor { m, ell: 1, rho }],
            coeff_bound: BigInt::from(1),
        })
    }

    /// Substitution map realizing factor `k` on coordinate polynomials:
    /// `v_α ↦ Σ_β rho[β][α] · v_β`. Pulling a polynomial `p` back through
    /// this map yields `p` composed with the transposed matrix action,
    /// which is the twist the projector construction differentiates away.
    pub fn coordinate_substitution(&self, k: usize) -> Result<BTreeMap<Var, Polynomial>> {
        let factor = self
            .factors
            .get(k)
            .ok_or_else(|| Error::AxisOutOfRange {
                axis: k,
                order: self.factors.len(),
            })?;
        let mut map = BTreeMap::new();
        for alpha in 0..self.dim {
            let mut image = Polynomial::zero();
            for beta in 0..self.dim {
                let coeff = &factor.rho[beta][alpha];
                if coeff.is_zero() {
                    continue;
                }
                image = image.add(&coeff.mul(&Polynomial::var(Var::V { index: beta })));
            }
            map.insert(Var::V { index: alpha }, image);
        }
        Ok(map)
    }

    /// Verify `rho(I) = I` by substituting the identity for `Z^(k)`.
    pub fn identity_check(&self, k: usize) -> Result<bool> {
        let factor = self
            .factors
            .get(k)
            .ok_or_else(|| Error::AxisOutOfRange {
                axis: k,
                order: self.factors.len(),
            })?;
        let assign = |v: Var| match v {
            Var::Z {
                factor: f,
                row,
                col,
            } if f == k => {
                if row == col {
                    crate::numerics::rational::RatComplex::one()
                } else {
                    crate::numerics::rational::RatComplex::zero()
                }
            }
            _ => crate::numerics::rational::RatComplex::zero(),
        };
        for row in 0..self.dim {
            for col in 0..self.dim {
                let val = factor.rho[row][col].evaluate(&assign);
                let expected = if row == col {
                    crate::numerics::rational::RatComplex::one()
                } else {
                    crate::numerics::rational::RatComplex::zero()
                };
                if val != expected {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Substitute `Z^(factor) ↦ Aᵀ · Z^(factor)` in `q`, i.e.
/// `Z_{i,j} ↦ Σ_k A_{k,i} · Z_{k,j}`, for a real rational square matrix
/// `A`. This realizes the left translation of the variable family that the
/// equivariance law of the alternating operator refers to.
pub fn substitute_z_left(
    q: &Polynomial,
    a: &RationalMatrix,
    factor: usize,
) -> Result<Polynomial> {
    if a.rows() != a.cols() {
        return Err(Error::InvalidArgument(
            "translation matrix must be square".into(),
        ));
    }
    let m = a.rows();
    let mut map = BTreeMap::new();
    for i in 0..m {
        for j in 0..m {
            let mut image = Polynomial::zero();
            for k in 0..m {
                let entry = a.get(k, i);
                if !entry.im.is_zero() {
                    return Err(Error::InvalidArgument(
                        "translation matrix must be real".into(),
                    ));
                }
                if entry.re.is_zero() {
                    continue;
                }
                image = image.add(
                    &Polynomial::var(Var::Z {
                        factor,
                        row: k,
                        col: j,
                    })
                    .scale(&entry.re),
                );
            }
            map.insert(
                Var::Z {
                    factor,
                    row: i,
                    col: j,
                },
                image,
            );
        }
    }
    q.substitute(&map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rational::RatComplex;

    #[test]
    fn tensor_action_shape_and_identity() {
        let spec = ActionSpec::tensor_action(&[1, 2, 2]).unwrap();
        assert_eq!(spec.dim, 4);
        assert_eq!(spec.factors.len(), 2);
        assert_eq!(spec.factors[0].m, 2);
        assert_eq!(spec.factors[1].ell, 1);
        assert!(spec.identity_check(0).unwrap());
        assert!(spec.identity_check(1).unwrap());
        for factor in &spec.factors {
            for row in &factor.rho {
                for entry in row {
                    assert!(entry.is_zero() || entry.homogeneous_degree() == Some(1));
                }
            }
        }
    }

    #[test]
    fn matrix_left_mult_identity_and_degree() {
        let spec = ActionSpec::matrix_left_mult(2).unwrap();
        assert_eq!(spec.dim, 4);
        assert!(spec.identity_check(0).unwrap());
    }

    #[test]
    fn left_mult_substitution_transforms_determinant() {
        // Under left multiplication the coordinate determinant picks up
        // det(Z): substituting into v00*v11 - v01*v10 must give
        // det(Z) * det(v) after the transposed pullback.
        let spec = ActionSpec::matrix_left_mult(2).unwrap();
        let v = |i: usize, j: usize| Polynomial::var(Var::V { index: 2 * i + j });
        let det_v = v(0, 0).mul(&v(1, 1)).sub(&v(0, 1).mul(&v(1, 0)));
        let map = spec.coordinate_substitution(0).unwrap();
        let pulled = det_v.substitute(&map).unwrap();
        let det_z = super::super::poly::det_poly(0, 2);
        assert_eq!(pulled, det_z.mul(&det_v));
    }

    #[test]
    fn tensor_substitution_composes_with_transposed_axis_action() {
        // The substitution map sends p to p ∘ rho(Zᵀ), so evaluating the
        // pulled-back polynomial at (Z, X) must agree with evaluating p at
        // the tensor moved by Zᵀ on that axis.
        let spec = ActionSpec::tensor_action(&[1, 2, 2]).unwrap();
        let map = spec.coordinate_substitution(0).unwrap();
        // p = v0 + 3 v3 (entries (0,0,0) and (0,1,1)).
        let p = Polynomial::var(Var::V { index: 0 }).add(
            &Polynomial::var(Var::V { index: 3 }).scale(&num_rational::BigRational::from_integer(
                num_bigint::BigInt::from(3),
            )),
        );
        let pulled = p.substitute(&map).unwrap();
        let x = crate::tensor::Tensor::from_int_entries(
            &[1, 2, 2],
            &[
                (vec![0, 0, 0], 1, 0),
                (vec![0, 0, 1], 2, 0),
                (vec![0, 1, 0], -1, 0),
                (vec![0, 1, 1], 4, 0),
            ],
        )
        .unwrap();
        let z = RationalMatrix::from_i64_rows(&[vec![1, 2], vec![0, 1]]);
        let zt = RationalMatrix::from_i64_rows(&[vec![1, 0], vec![2, 1]]);
        let moved = x.apply_axis_exact(&zt, 1).unwrap();
        let assign = |v: Var| match v {
            Var::V { index } => x.exact_entries().unwrap()[index].clone(),
            Var::Z {
                factor: 0,
                row,
                col,
            } => z.get(row, col).clone(),
            _ => RatComplex::zero(),
        };
        let via_poly = pulled.evaluate(&assign);
        let direct = p.evaluate(&|v: Var| match v {
            Var::V { index } => moved.exact_entries().unwrap()[index].clone(),
            _ => RatComplex::zero(),
        });
        assert_eq!(via_poly, direct);
    }

    #[test]
    fn oversized_spaces_are_rejected() {
        assert!(matches!(
            ActionSpec::tensor_action(&[1, 9, 8]),
            Err(Error::ResourceBudget(_))
        ));
        assert!(ActionSpec::tensor_action(&[]).is_err());
        assert!(ActionSpec::matrix_left_mult(0).is_err());
    }
}
