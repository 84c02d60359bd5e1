//! Sparse multivariate polynomials over Q with exact coefficients.
//!
//! Exponent vectors are dense per-term; the term map is ordered, so every
//! iteration order (and hence every serialization) is deterministic.

use crate::error::{Error, Result};
use num::{BigRational, One, Zero};
use std::collections::BTreeMap;

/// Polynomial in `nvars` variables with `BigRational` coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<u16>, BigRational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    /// The variable `x_i` as a polynomial.
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index out of range");
        let mut exp = vec![0u16; nvars];
        exp[i] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(exp, BigRational::one());
        Poly { nvars, terms }
    }

    /// Build from explicit (exponent vector, coefficient) pairs.
    pub fn from_terms(nvars: usize, terms: Vec<(Vec<u16>, BigRational)>) -> Result<Self> {
        let mut p = Poly::zero(nvars);
        for (exp, coeff) in terms {
            if exp.len() != nvars {
                return Err(Error::dim("Poly::from_terms", nvars, exp.len()));
            }
            p.add_term(exp, coeff);
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u16>, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, exp: &[u16]) -> BigRational {
        self.terms.get(exp).cloned().unwrap_or_else(BigRational::zero)
    }

    fn add_term(&mut self, exp: Vec<u16>, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exp) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (exp, coeff) in &other.terms {
            out.add_term(exp.clone(), coeff.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, k)| (e.clone(), k * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        let mut out = Poly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exp: Vec<u16> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(exp, ca * cb);
            }
        }
        out
    }

    /// Multiply by the single monomial with exponent vector `exp`.
    pub fn mul_monomial(&self, exp: &[u16]) -> Poly {
        assert_eq!(self.nvars, exp.len());
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(exp).map(|(x, y)| x + y).collect(), c.clone()))
                .collect(),
        }
    }

    /// Total degree of the highest term, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as usize).sum())
            .max()
    }

    /// `Some(d)` iff nonzero and every term has total degree `d`.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut degs = self
            .terms
            .keys()
            .map(|e| e.iter().map(|&x| x as usize).sum::<usize>());
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    /// Substitute `images[i]` for variable `i`; images share a variable count.
    pub fn substitute(&self, images: &[Poly]) -> Result<Poly> {
        if images.len() != self.nvars {
            return Err(Error::dim("Poly::substitute", self.nvars, images.len()));
        }
        let target_vars = images.first().map_or(0, Poly::nvars);
        if let Some(bad) = images.iter().find(|p| p.nvars() != target_vars) {
            return Err(Error::dim("Poly::substitute", target_vars, bad.nvars()));
        }
        let mut out = Poly::zero(target_vars);
        for (exp, coeff) in &self.terms {
            let mut term = Poly::constant(target_vars, coeff.clone());
            for (i, &e) in exp.iter().enumerate() {
                for _ in 0..e {
                    term = term.mul(&images[i]);
                }
            }
            out = out.add(&term);
        }
        Ok(out)
    }

    /// Render with the given variable names (`names.len() == nvars`).
    pub fn display(&self, names: &[String]) -> String {
        assert_eq!(names.len(), self.nvars);
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (exp, coeff) in &self.terms {
            parts.push(format!("{}*{}", coeff, monomial_name(exp, names)));
        }
        parts
            .join(" + ")
            .replace("*1 ", " ")
            .trim_end_matches("*1")
            .to_string()
    }
}

/// Canonical name of a monomial: `"1"` for the constant, else `"t1^2*y1"` style.
pub fn monomial_name(exp: &[u16], names: &[String]) -> String {
    let mut factors = Vec::new();
    for (i, &e) in exp.iter().enumerate() {
        match e {
            0 => {}
            1 => factors.push(names[i].clone()),
            _ => factors.push(format!("{}^{}", names[i], e)),
        }
    }
    if factors.is_empty() {
        "1".into()
    } else {
        factors.join("*")
    }
}

/// All exponent vectors of total degree `degree` in `nvars` variables,
/// lexicographically ordered (matches the term map's ordering).
pub fn monomials(nvars: usize, degree: usize) -> Vec<Vec<u16>> {
    let mut out = Vec::new();
    let mut current = vec![0u16; nvars];
    fill(&mut out, &mut current, 0, degree);
    out.sort();
    out
}

fn fill(out: &mut Vec<Vec<u16>>, current: &mut Vec<u16>, pos: usize, remaining: usize) {
    if pos == current.len() {
        if remaining == 0 {
            out.push(current.clone());
        }
        return;
    }
    if pos + 1 == current.len() {
        current[pos] = remaining as u16;
        out.push(current.clone());
        current[pos] = 0;
        return;
    }
    for e in 0..=remaining {
        current[pos] = e as u16;
        fill(out, current, pos + 1, remaining - e);
    }
    current[pos] = 0;
}

/// Dimension of the Q-span of `polys` (each homogeneous of the same degree),
/// by exact elimination on the monomial coordinate matrix.
pub fn span_rank(polys: &[Poly]) -> usize {
    let nonzero: Vec<&Poly> = polys.iter().filter(|p| !p.is_zero()).collect();
    if nonzero.is_empty() {
        return 0;
    }
    let mut monomial_index = BTreeMap::new();
    for p in &nonzero {
        for (exp, _) in p.terms() {
            let next = monomial_index.len();
            monomial_index.entry(exp.clone()).or_insert(next);
        }
    }
    let cols = monomial_index.len();
    let mut data = vec![BigRational::zero(); nonzero.len() * cols];
    for (row, p) in nonzero.iter().enumerate() {
        for (exp, coeff) in p.terms() {
            data[row * cols + monomial_index[exp]] = coeff.clone();
        }
    }
    crate::intlat::RatMatrix::new(nonzero.len(), cols, data)
        .expect("consistent shape")
        .rank()
}

/// Express `target` as a linear combination of `basis` (all homogeneous of one
/// degree); returns the coefficients if it lies in the span.
pub fn in_span(target: &Poly, basis: &[Poly]) -> Option<Vec<BigRational>> {
    if target.is_zero() {
        return Some(vec![BigRational::zero(); basis.len()]);
    }
    // Solve basis^T * x = target by elimination on the augmented system.
    let mut monomial_index = BTreeMap::new();
    for p in basis.iter().chain(std::iter::once(target)) {
        for (exp, _) in p.terms() {
            let next = monomial_index.len();
            monomial_index.entry(exp.clone()).or_insert(next);
        }
    }
    let rows = monomial_index.len();
    let cols = basis.len();
    // augmented matrix [A | b] with A[mono][basis poly]
    let mut a = vec![vec![BigRational::zero(); cols + 1]; rows];
    for (j, p) in basis.iter().enumerate() {
        for (exp, coeff) in p.terms() {
            a[monomial_index[exp]][j] = coeff.clone();
        }
    }
    for (exp, coeff) in target.terms() {
        a[monomial_index[exp]][cols] = coeff.clone();
    }
    // forward elimination with column pivoting over the basis columns
    let mut pivot_row_of_col = vec![usize::MAX; cols];
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..rows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        let piv = a[row][col].clone();
        for j in col..=cols {
            a[row][j] = &a[row][j] / &piv;
        }
        for i in 0..rows {
            if i != row && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in col..=cols {
                    a[i][j] = &a[i][j] - &f * &a[row][j];
                }
            }
        }
        pivot_row_of_col[col] = row;
        row += 1;
    }
    // inconsistent if any zero-row has nonzero rhs
    for r in row..rows {
        if !a[r][cols].is_zero() {
            return None;
        }
    }
    let mut x = vec![BigRational::zero(); cols];
    for col in 0..cols {
        if pivot_row_of_col[col] != usize::MAX {
            x[col] = a[pivot_row_of_col[col]][cols].clone();
        }
    }
    Some(x)
}
