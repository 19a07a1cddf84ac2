//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Two indexed variable families cover everything the symbolic layer needs:
//! matrix entries `Z^(k)_{i,j}` of group factor `k`, and coordinates `v_α`
//! of the representation space. Terms live in a sorted map from monomial to
//! coefficient, so arithmetic is canonical and serialization deterministic.
//! Coefficients grow quickly under the differential operators, hence exact
//! big rationals rather than any fixed width.

use crate::error::{Error, Result};
use crate::numerics::rational::RatComplex;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Term-count guard for substitution blow-ups.
pub const TERM_BUDGET: usize = 500_000;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Var {
    /// Matrix entry `Z^(factor)_{row,col}` (all indices 0-based).
    Z { factor: usize, row: usize, col: usize },
    /// Coordinate `v_index` of the representation space.
    V { index: usize },
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Z { factor, row, col } => write!(f, "Z{factor}_{row}_{col}"),
            Var::V { index } => write!(f, "v{index}"),
        }
    }
}

impl Var {
    fn parse(s: &str) -> Result<Var> {
        let bad = || Error::Parse(format!("unrecognized variable name {s:?}"));
        if let Some(rest) = s.strip_prefix('Z') {
            let parts: Vec<&str> = rest.split('_').collect();
            if parts.len() != 3 {
                return Err(bad());
            }
            let nums: Result<Vec<usize>> = parts
                .iter()
                .map(|p| p.parse::<usize>().map_err(|_| bad()))
                .collect();
            let nums = nums?;
            Ok(Var::Z {
                factor: nums[0],
                row: nums[1],
                col: nums[2],
            })
        } else if let Some(rest) = s.strip_prefix('v') {
            Ok(Var::V {
                index: rest.parse::<usize>().map_err(|_| bad())?,
            })
        } else {
            Err(bad())
        }
    }
}

/// A monomial: variable to positive exponent.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Default)]
pub struct Monomial(pub BTreeMap<Var, u32>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(BTreeMap::new())
    }

    pub fn var(v: Var) -> Monomial {
        Monomial(BTreeMap::from([(v, 1)]))
    }

    pub fn degree(&self) -> usize {
        self.0.values().map(|&e| e as usize).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = self.0.clone();
        for (&v, &e) in &other.0 {
            *out.entry(v).or_insert(0) += e;
        }
        Monomial(out)
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.0.get(&v).copied().unwrap_or(0)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for (v, e) in &self.0 {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Sparse polynomial; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, BigRational>,
}

impl Polynomial {
    pub fn zero() -> Polynomial {
        Polynomial::default()
    }

    pub fn one() -> Polynomial {
        Polynomial::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Polynomial {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        Polynomial { terms }
    }

    pub fn constant_i64(c: i64) -> Polynomial {
        Polynomial::constant(BigRational::from_integer(BigInt::from(c)))
    }

    pub fn var(v: Var) -> Polynomial {
        Polynomial {
            terms: BTreeMap::from([(Monomial::var(v), BigRational::one())]),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    /// The constant term's value, when the polynomial is a constant.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                (m.degree() == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// `Some(d)` when every term has total degree `d` (the zero polynomial
    /// reports degree 0).
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(Monomial::degree);
        let Some(first) = it.next() else {
            return Some(0);
        };
        it.all(|d| d == first).then_some(first)
    }

    pub fn largest_coefficient_magnitude(&self) -> BigRational {
        self.terms
            .values()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(BigRational::zero)
    }

    fn insert_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v * c))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.insert_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut out = Polynomial::one();
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Partial derivative with respect to one variable.
    pub fn derivative(&self, v: Var) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e == 0 {
                continue;
            }
            let mut reduced = m.0.clone();
            if e == 1 {
                reduced.remove(&v);
            } else {
                reduced.insert(v, e - 1);
            }
            out.insert_term(
                Monomial(reduced),
                c * BigRational::from_integer(BigInt::from(e)),
            );
        }
        out
    }

    /// Simultaneous substitution of polynomials for variables; variables not
    /// in the map stay themselves. Guards against term blow-up.
    pub fn substitute(&self, map: &BTreeMap<Var, Polynomial>) -> Result<Polynomial> {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(c.clone());
            for (&v, &e) in &m.0 {
                let base = match map.get(&v) {
                    Some(p) => p.clone(),
                    None => Polynomial::var(v),
                };
                term = term.mul(&base.pow(e));
                if term.num_terms() > TERM_BUDGET {
                    return Err(Error::ResourceBudget(format!(
                        "substitution exceeded {TERM_BUDGET} terms"
                    )));
                }
            }
            out = out.add(&term);
            if out.num_terms() > TERM_BUDGET {
                return Err(Error::ResourceBudget(format!(
                    "substitution exceeded {TERM_BUDGET} terms"
                )));
            }
        }
        Ok(out)
    }

    /// Exact evaluation with a complex-rational assignment.
    pub fn evaluate(&self, assign: &dyn Fn(Var) -> RatComplex) -> RatComplex {
        let mut total = RatComplex::zero();
        for (m, c) in &self.terms {
            let mut term = RatComplex::new(c.clone(), BigRational::zero());
            for (&v, &e) in &m.0 {
                term = &term * &assign(v).pow(e);
            }
            total += &term;
        }
        total
    }

    /// Deterministic JSON: sorted variable universe, then a map from
    /// exponent vectors (over that order) to decimal coefficient strings.
    pub fn to_json_string(&self) -> String {
        let mut vars: Vec<Var> = Vec::new();
        for m in self.terms.keys() {
            for &v in m.0.keys() {
                if !vars.contains(&v) {
                    vars.push(v);
                }
            }
        }
        vars.sort();
        let var_names: Vec<String> = vars.iter().map(|v| v.to_string()).collect();
        let mut terms = serde_json::Map::new();
        for (m, c) in &self.terms {
            let exps: Vec<String> = vars
                .iter()
                .map(|&v| m.exponent(v).to_string())
                .collect();
            terms.insert(exps.join(","), serde_json::json!(c.to_string()));
        }
        serde_json::json!({"vars": var_names, "terms": terms}).to_string()
    }

    pub fn from_json_str(s: &str) -> Result<Polynomial> {
        #[derive(serde::Deserialize)]
        struct PolyJson {
            vars: Vec<String>,
            terms: BTreeMap<String, String>,
        }
        let doc: PolyJson =
            serde_json::from_str(s).map_err(|e| Error::Parse(format!("polynomial JSON: {e}")))?;
        let vars: Result<Vec<Var>> = doc.vars.iter().map(|v| Var::parse(v)).collect();
        let vars = vars?;
        let mut out = Polynomial::zero();
        for (key, coeff) in &doc.terms {
            let exps: Vec<u32> = if key.is_empty() {
                Vec::new()
            } else {
                key.split(',')
                    .map(|p| {
                        p.parse::<u32>()
                            .map_err(|_| Error::Parse(format!("bad exponent {p:?}")))
                    })
                    .collect::<Result<_>>()?
            };
            if exps.len() != vars.len() {
                return Err(Error::Parse(format!(
                    "exponent vector {key:?} does not match {} variables",
                    vars.len()
                )));
            }
            let c: BigRational = coeff
                .parse()
                .map_err(|_| Error::Parse(format!("bad coefficient {coeff:?}")))?;
            let mut m = BTreeMap::new();
            for (&v, &e) in vars.iter().zip(exps.iter()) {
                if e > 0 {
                    m.insert(v, e);
                }
            }
            out.insert_term(Monomial(m), c);
        }
        Ok(out)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if first {
                write!(f, "{c}*{m}")?;
                first = false;
            } else if c.is_negative() {
                write!(f, " - {}*{m}", -c.clone())?;
            } else {
                write!(f, " + {c}*{m}")?;
            }
        }
        Ok(())
    }
}

/// The determinant of the `m x m` matrix family `Z^(factor)`, expanded over
/// permutations.
pub fn det_poly(factor: usize, m: usize) -> Polynomial {
    let mut out = Polynomial::zero();
    let mut perm: Vec<usize> = (0..m).collect();
    loop {
        let sign = permutation_sign(&perm);
        let mut mono = Monomial::one();
        for (row, &col) in perm.iter().enumerate() {
            mono = mono.mul(&Monomial::var(Var::Z { factor, row, col }));
        }
        let c = if sign > 0 {
            BigRational::one()
        } else {
            -BigRational::one()
        };
        let mut p = Polynomial::zero();
        p.insert_term(mono, c);
        out = out.add(&p);
        if !next_permutation(&mut perm) {
            break;
        }
    }
    out
}

/// Sign of a permutation given as the image vector.
pub fn permutation_sign(perm: &[usize]) -> i8 {
    let mut seen = vec![false; perm.len()];
    let mut sign = 1i8;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut at = start;
        while !seen[at] {
            seen[at] = true;
            at = perm[at];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// Advance to the next lexicographic permutation; false after the last.
pub fn next_permutation(perm: &mut [usize]) -> bool {
    if perm.len() < 2 {
        return false;
    }
    let mut i = perm.len() - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = perm.len() - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}
