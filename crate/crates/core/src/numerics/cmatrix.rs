//! Small dense complex matrices in `f64`.
//!
//! Hand-rolled on purpose: every matrix here is tiny (axis dimensions of the
//! tensors at hand), and keeping the arithmetic in-module makes the floating
//! behaviour deterministic and easy to audit.

use num_complex::Complex64;

#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn diag(values: &[Complex64]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            m.set(i, i, v);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v);
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

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul(&self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions must agree");
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = out.get(i, j) + a * rhs.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> CMatrix {
        let mut out = CMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn add(&self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(rhs.data.iter()) {
            *a += b;
        }
        out
    }

    pub fn sub(&self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(rhs.data.iter()) {
            *a -= b;
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> CMatrix {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a *= s;
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square());
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data
            .iter()
            .map(|v| v.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `|| self - I/n ||_F^2`, the squared deviation of a normalized
    /// marginal from the uniform one.
    pub fn uniform_deviation_sq(&self) -> f64 {
        assert!(self.is_square());
        let n = self.rows;
        let uniform = 1.0 / n as f64;
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                let mut v = self.get(i, j);
                if i == j {
                    v -= Complex64::new(uniform, 0.0);
                }
                acc += v.norm_sqr();
            }
        }
        acc
    }

    pub fn is_hermitian(&self, rel_tol: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        let scale = self.frobenius_norm().max(1.0);
        for i in 0..self.rows {
            for j in i..self.cols {
                let d = self.get(i, j) - self.get(j, i).conj();
                if d.norm() > rel_tol * scale {
                    return false;
                }
            }
        }
        true
    }

    /// Determinant by LU with partial pivoting. Only used for diagnostics
    /// (group-element bookkeeping); certificates use exact arithmetic.
    pub fn det(&self) -> Complex64 {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = Complex64::new(1.0, 0.0);
        for col in 0..n {
            let mut pivot = col;
            let mut best = a[col * n + col].norm();
            for r in (col + 1)..n {
                let v = a[r * n + col].norm();
                if v > best {
                    best = v;
                    pivot = r;
                }
            }
            if best == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            if pivot != col {
                for j in 0..n {
                    a.swap(col * n + j, pivot * n + j);
                }
                det = -det;
            }
            let p = a[col * n + col];
            det *= p;
            for r in (col + 1)..n {
                let f = a[r * n + col] / p;
                if f.norm_sqr() == 0.0 {
                    continue;
                }
                for j in col..n {
                    let v = a[r * n + j] - f * a[col * n + j];
                    a[r * n + j] = v;
                }
            }
        }
        det
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn multiply_and_adjoint() {
        let a = CMatrix::from_rows(&[vec![c(1.0, 1.0), c(0.0, 0.0)], vec![c(2.0, 0.0), c(0.0, -1.0)]]);
        let id = CMatrix::identity(2);
        assert_eq!(a.mul(&id), a);
        let aa = a.adjoint();
        assert_eq!(aa.get(0, 0), c(1.0, -1.0));
        assert_eq!(aa.get(0, 1), c(2.0, 0.0));
        assert_eq!(aa.get(1, 1), c(0.0, 1.0));
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        let a = CMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(2.0, 1.0), c(0.0, 0.0)],
            vec![c(0.0, -1.0), c(3.0, 0.0), c(1.0, 0.0)],
            vec![c(2.0, 0.0), c(0.0, 0.0), c(1.0, 1.0)],
        ]);
        // Cofactor expansion along the first row, done by hand in the
        // assertions below.
        let m00 = c(3.0, 0.0) * c(1.0, 1.0) - c(1.0, 0.0) * c(0.0, 0.0);
        let m01 = c(0.0, -1.0) * c(1.0, 1.0) - c(1.0, 0.0) * c(2.0, 0.0);
        let m02 = c(0.0, -1.0) * c(0.0, 0.0) - c(3.0, 0.0) * c(2.0, 0.0);
        let expected = c(1.0, 0.0) * m00 - c(2.0, 1.0) * m01 + c(0.0, 0.0) * m02;
        let got = a.det();
        assert!((got - expected).norm() < 1e-12, "{got} vs {expected}");
    }

    #[test]
    fn uniform_deviation_of_uniform_matrix_is_zero() {
        let m = CMatrix::diag(&[c(0.5, 0.0), c(0.5, 0.0)]);
        assert!(m.uniform_deviation_sq() < 1e-30);
        let skew = CMatrix::diag(&[c(1.0, 0.0), c(0.0, 0.0)]);
        assert!((skew.uniform_deviation_sq() - 0.5).abs() < 1e-15);
    }
}
