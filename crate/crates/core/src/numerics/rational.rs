//! Exact arithmetic over the Gaussian rationals `Q(i)` and exact matrix
//! rank via fraction-free elimination.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

/// A complex number with exact rational real and imaginary parts.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct RatComplex {
    pub re: BigRational,
    pub im: BigRational,
}

impl RatComplex {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        RatComplex { re, im }
    }

    pub fn zero() -> Self {
        RatComplex {
            re: BigRational::zero(),
            im: BigRational::zero(),
        }
    }

    pub fn one() -> Self {
        RatComplex {
            re: BigRational::one(),
            im: BigRational::zero(),
        }
    }

    pub fn from_i64(re: i64, im: i64) -> Self {
        RatComplex {
            re: BigRational::from_integer(BigInt::from(re)),
            im: BigRational::from_integer(BigInt::from(im)),
        }
    }

    pub fn from_bigint(re: BigInt, im: BigInt) -> Self {
        RatComplex {
            re: BigRational::from_integer(re),
            im: BigRational::from_integer(im),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// True when both parts are integers (denominator one).
    pub fn is_integral(&self) -> bool {
        self.re.is_integer() && self.im.is_integer()
    }

    pub fn conj(&self) -> Self {
        RatComplex {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// `|z|^2 = re^2 + im^2`, exact.
    pub fn norm_sq(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        RatComplex {
            re: &self.re * s,
            im: &self.im * s,
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = RatComplex::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Larger of the absolute values of numerator-over-denominator parts,
    /// used for bitsize estimates. Returns `(max |numerator|, max denominator)`
    /// over the two parts.
    pub fn abs_bounds(&self) -> (BigInt, BigInt) {
        let num = self.re.numer().abs().max(self.im.numer().abs());
        let den = self.re.denom().abs().max(self.im.denom().abs());
        (num, den)
    }
}

impl fmt::Display for RatComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.im.is_negative() {
            write!(f, "{}{}i", self.re, self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl Add for &RatComplex {
    type Output = RatComplex;
    fn add(self, rhs: &RatComplex) -> RatComplex {
        RatComplex {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl Sub for &RatComplex {
    type Output = RatComplex;
    fn sub(self, rhs: &RatComplex) -> RatComplex {
        RatComplex {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Mul for &RatComplex {
    type Output = RatComplex;
    fn mul(self, rhs: &RatComplex) -> RatComplex {
        RatComplex {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Div for &RatComplex {
    type Output = RatComplex;
    fn div(self, rhs: &RatComplex) -> RatComplex {
        let d = rhs.norm_sq();
        assert!(!d.is_zero(), "division by zero Gaussian rational");
        let num = self * &rhs.conj();
        RatComplex {
            re: num.re / &d,
            im: num.im / &d,
        }
    }
}

impl Neg for &RatComplex {
    type Output = RatComplex;
    fn neg(self) -> RatComplex {
        RatComplex {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }
}

impl AddAssign<&RatComplex> for RatComplex {
    fn add_assign(&mut self, rhs: &RatComplex) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&RatComplex> for RatComplex {
    fn sub_assign(&mut self, rhs: &RatComplex) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

/// A dense matrix over the Gaussian rationals.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<RatComplex>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: vec![RatComplex::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, RatComplex::one());
        }
        m
    }

    /// Build from integer rows (real entries).
    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, RatComplex::from_i64(v, 0));
            }
        }
        m
    }

    /// Build from rational real entries.
    pub fn from_rational_rows(rows: &[Vec<BigRational>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, RatComplex::new(v.clone(), BigRational::zero()));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &RatComplex {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: RatComplex) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul(&self, rhs: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions must agree");
        let mut out = RationalMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, j) + &(a * b);
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    /// Exact determinant (square matrices) by elimination with exact
    /// division.
    pub fn det(&self) -> RatComplex {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        let mut a = self.data.clone();
        let at = |a: &Vec<RatComplex>, i: usize, j: usize| a[i * n + j].clone();
        let mut det = RatComplex::one();
        for col in 0..n {
            let pivot_row = (col..n).find(|&r| !at(&a, r, col).is_zero());
            let Some(p) = pivot_row else {
                return RatComplex::zero();
            };
            if p != col {
                for j in 0..n {
                    a.swap(col * n + j, p * n + j);
                }
                det = -&det;
            }
            let pivot = at(&a, col, col);
            det = &det * &pivot;
            for r in (col + 1)..n {
                let factor = &at(&a, r, col) / &pivot;
                if factor.is_zero() {
                    continue;
                }
                for j in col..n {
                    let v = &at(&a, r, j) - &(&factor * &at(&a, col, j));
                    a[r * n + j] = v;
                }
            }
        }
        det
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && !self.det().is_zero()
    }

    pub fn to_cmatrix(&self) -> super::cmatrix::CMatrix {
        let mut m = super::cmatrix::CMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).to_c64());
            }
        }
        m
    }
}

/// Exact rank over `Q(i)` by fraction-free (Bareiss) elimination.
///
/// Denominators are cleared row by row first, so the elimination works on
/// Gaussian integers and every interior division is exact. The rank of a
/// matrix is unchanged by row scaling, so the clearing is harmless.
pub fn rational_rank(m: &RationalMatrix) -> usize {
    let rows = m.rows();
    let cols = m.cols();
    if rows == 0 || cols == 0 {
        return 0;
    }
    // Clear denominators within each row.
    let mut a: Vec<Vec<RatComplex>> = (0..rows)
        .map(|i| {
            let mut lcm = BigInt::one();
            for j in 0..cols {
                let e = m.get(i, j);
                lcm = num_integer::lcm(lcm.clone(), e.re.denom().clone());
                lcm = num_integer::lcm(lcm, e.im.denom().clone());
            }
            let s = BigRational::from_integer(lcm);
            (0..cols).map(|j| m.get(i, j).scale(&s)).collect()
        })
        .collect();

    let mut rank = 0usize;
    let mut prev_pivot = RatComplex::one();
    let mut pivot_row = 0usize;
    for col in 0..cols {
        // First nonzero entry in this column at or below pivot_row.
        let Some(p) = (pivot_row..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(pivot_row, p);
        let pivot = a[pivot_row][col].clone();
        // Bareiss step: a[r][j] <- (pivot * a[r][j] - a[r][col] * a[pr][j]) / prev_pivot.
        for r in (pivot_row + 1)..rows {
            let lead = a[r][col].clone();
            for j in 0..cols {
                let num = &(&pivot * &a[r][j]) - &(&lead * &a[pivot_row][j]);
                a[r][j] = &num / &prev_pivot;
            }
        }
        prev_pivot = pivot;
        pivot_row += 1;
        rank += 1;
        if pivot_row == rows {
            break;
        }
    }
    rank
}
