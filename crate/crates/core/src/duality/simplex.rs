//! Exact two-phase simplex over the rationals with Bland's pivoting rule.
//!
//! Solves `min cᵀx  s.t.  Ax = b, x ≥ 0` with `b ≥ 0` entrywise. Bland's
//! rule guarantees termination; everything is `BigRational`, so feasibility
//! answers and Farkas certificates are exact. Sized for the tiny systems of
//! the deficiency tests — no sparsity, no revised form.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug)]
pub enum LpResult {
    Optimal {
        x: Vec<BigRational>,
        objective: BigRational,
    },
    /// `farkas` is a row multiplier vector `y` with `yᵀA ≤ 0` on every
    /// original column and `yᵀb > 0`, proving `Ax = b, x ≥ 0` infeasible.
    Infeasible { farkas: Vec<BigRational> },
    Unbounded,
}

struct Tableau {
    /// m x (n + m): original columns then one artificial per row.
    t: Vec<Vec<BigRational>>,
    rhs: Vec<BigRational>,
    /// Reduced-cost row over all columns.
    z: Vec<BigRational>,
    /// Negated objective value, updated with the same eliminations.
    z_rhs: BigRational,
    /// Basic column of each row.
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let pivot = self.t[row][col].clone();
        for v in self.t[row].iter_mut() {
            *v = &*v / &pivot;
        }
        self.rhs[row] = &self.rhs[row] / &pivot;
        for r in 0..self.t.len() {
            if r == row || self.t[r][col].is_zero() {
                continue;
            }
            let f = self.t[r][col].clone();
            for j in 0..self.t[r].len() {
                let delta = &f * &self.t[row][j];
                self.t[r][j] = &self.t[r][j] - &delta;
            }
            let delta = &f * &self.rhs[row];
            self.rhs[r] = &self.rhs[r] - &delta;
        }
        if !self.z[col].is_zero() {
            let f = self.z[col].clone();
            for j in 0..self.z.len() {
                let delta = &f * &self.t[row][j];
                self.z[j] = &self.z[j] - &delta;
            }
            let delta = &f * &self.rhs[row];
            self.z_rhs = &self.z_rhs - &delta;
        }
        self.basis[row] = col;
    }

    /// One Bland-rule iteration among the allowed columns. Returns false
    /// when no entering column exists (optimal), errors on unboundedness.
    fn step(&mut self, allow: impl Fn(usize) -> bool) -> Result<bool, ()> {
        let entering = (0..self.z.len())
            .find(|&j| allow(j) && self.z[j].is_negative());
        let Some(col) = entering else {
            return Ok(false);
        };
        let mut leave: Option<(usize, BigRational)> = None;
        for r in 0..self.t.len() {
            if !self.t[r][col].is_positive() {
                continue;
            }
            let ratio = &self.rhs[r] / &self.t[r][col];
            match &leave {
                None => leave = Some((r, ratio)),
                Some((lr, lratio)) => {
                    // Bland tie-break: smallest basic column index.
                    if ratio < *lratio
                        || (ratio == *lratio && self.basis[r] < self.basis[*lr])
                    {
                        leave = Some((r, ratio));
                    }
                }
            }
        }
        let Some((row, _)) = leave else {
            return Err(());
        };
        self.pivot(row, col);
        Ok(true)
    }
}

/// Two-phase exact simplex. `a` is row-major `m x n`; every `b[r]` must be
/// nonnegative (callers arrange signs so this holds).
pub fn solve(a: &[Vec<BigRational>], b: &[BigRational], c: &[BigRational]) -> LpResult {
    let m = a.len();
    let n = if m == 0 { c.len() } else { a[0].len() };
    assert!(a.iter().all(|row| row.len() == n), "ragged constraint rows");
    assert_eq!(b.len(), m);
    assert_eq!(c.len(), n);
    assert!(
        b.iter().all(|v| !v.is_negative()),
        "standard form requires b >= 0"
    );

    let mut t = Vec::with_capacity(m);
    for (r, row) in a.iter().enumerate() {
        let mut full = row.to_vec();
        for k in 0..m {
            full.push(if k == r {
                BigRational::one()
            } else {
                BigRational::zero()
            });
        }
        t.push(full);
    }
    // Phase-1 reduced costs: artificial columns cost one, so the z-row for
    // an original column starts at minus its column sum.
    let mut z = vec![BigRational::zero(); n + m];
    for (j, zj) in z.iter_mut().enumerate().take(n) {
        let mut s = BigRational::zero();
        for row in a {
            s += &row[j];
        }
        *zj = -s;
    }
    let mut z_rhs = BigRational::zero();
    for v in b {
        z_rhs -= v;
    }
    let mut tab = Tableau {
        t,
        rhs: b.to_vec(),
        z,
        z_rhs,
        basis: (n..n + m).collect(),
    };

    while tab.step(|_| true).expect("phase one is bounded below by zero") {}

    let phase1_obj = -tab.z_rhs.clone();
    if phase1_obj.is_positive() {
        // y_r = 1 - reduced cost of artificial r.
        let farkas = (0..m)
            .map(|r| BigRational::one() - &tab.z[n + r])
            .collect();
        return LpResult::Infeasible { farkas };
    }

    // Drive artificials that linger in the basis (at value zero) out where
    // possible; rows with no original pivot are redundant and inert.
    for r in 0..m {
        if tab.basis[r] >= n {
            if let Some(j) = (0..n).find(|&j| !tab.t[r][j].is_zero()) {
                tab.pivot(r, j);
            }
        }
    }

    // Phase 2: rebuild the reduced-cost row for the real objective.
    let mut z = c.to_vec();
    z.extend(std::iter::repeat(BigRational::zero()).take(m));
    let mut z_rhs = BigRational::zero();
    for r in 0..m {
        let bcol = tab.basis[r];
        let cost = if bcol < n {
            c[bcol].clone()
        } else {
            BigRational::zero()
        };
        if cost.is_zero() {
            continue;
        }
        for j in 0..n + m {
            let delta = &cost * &tab.t[r][j];
            z[j] = &z[j] - &delta;
        }
        let delta = &cost * &tab.rhs[r];
        z_rhs -= delta;
    }
    tab.z = z;
    tab.z_rhs = z_rhs;

    loop {
        match tab.step(|j| j < n) {
            Ok(true) => {}
            Ok(false) => break,
            Err(()) => return LpResult::Unbounded,
        }
    }

    let mut x = vec![BigRational::zero(); n];
    for r in 0..m {
        if tab.basis[r] < n {
            x[tab.basis[r]] = tab.rhs[r].clone();
        }
    }
    let objective = -tab.z_rhs.clone();
    LpResult::Optimal { x, objective }
}
