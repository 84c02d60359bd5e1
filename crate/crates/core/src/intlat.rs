//! Exact integer and rational matrices: Smith normal form, unimodularity,
//! second exterior powers, and integer-valued alternating forms on a lattice.

use crate::error::{Error, Result};
use num::bigint::Sign;
use num::{BigInt, BigRational, Integer, One, Signed, Zero};
use std::fmt;

/// Dense integer matrix with arbitrary-precision entries, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

impl IntMatrix {
    /// Matrix from a row-major vector of entries; `data.len()` must be `rows * cols`.
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::dim("IntMatrix::new", rows * cols, data.len()));
        }
        Ok(IntMatrix { rows, cols, data })
    }

    /// Matrix from rows of machine integers (convenience for literals).
    pub fn from_rows(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let data = rows
            .iter()
            .flat_map(|row| row.iter().map(|&x| BigInt::from(x)))
            .collect();
        IntMatrix { rows: r, cols: c, data }
    }

    /// Zero matrix of the given shape.
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    /// Identity matrix of size `n`.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
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

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.data[i * self.cols + j] = value;
    }

    /// Entry as `i64`; panics on overflow (used only for desk-scale display paths).
    pub fn get_i64(&self, i: usize, j: usize) -> i64 {
        use num::ToPrimitive;
        self.get(i, j).to_i64().expect("entry exceeds i64")
    }

    /// Entry as `f64` (exact for desk-scale integers).
    pub fn get_f64(&self, i: usize, j: usize) -> f64 {
        use num::ToPrimitive;
        self.get(i, j).to_f64().expect("entry convertible to f64")
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut out = IntMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn add(&self, other: &IntMatrix) -> Result<IntMatrix> {
        self.zip_with(other, |a, b| a + b, "IntMatrix::add")
    }

    pub fn sub(&self, other: &IntMatrix) -> Result<IntMatrix> {
        self.zip_with(other, |a, b| a - b, "IntMatrix::sub")
    }

    pub fn neg(&self) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| -x).collect(),
        }
    }

    fn zip_with(
        &self,
        other: &IntMatrix,
        f: impl Fn(&BigInt, &BigInt) -> BigInt,
        context: &'static str,
    ) -> Result<IntMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::dim(
                context,
                format!("{}x{}", self.rows, self.cols),
                format!("{}x{}", other.rows, other.cols),
            ));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| f(a, b))
            .collect();
        Ok(IntMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::dim("IntMatrix::mul", self.cols, other.rows));
        }
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a * other.get(k, j);
                    let cur = out.get(i, j) + prod;
                    out.set(i, j, cur);
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if self.cols != v.len() {
            return Err(Error::dim("IntMatrix::mul_vec", self.cols, v.len()));
        }
        Ok((0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * &v[j]).sum())
            .collect())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Determinant by the fraction-free Bareiss elimination (exact).
    pub fn det(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::dim(
                "IntMatrix::det",
                "square matrix",
                format!("{}x{}", self.rows, self.cols),
            ));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut m = self.data.clone();
        let at = |m: &Vec<BigInt>, i: usize, j: usize| m[i * n + j].clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if at(&m, k, k).is_zero() {
                let Some(swap) = (k + 1..n).find(|&i| !at(&m, i, k).is_zero()) else {
                    return Ok(BigInt::zero());
                };
                for j in 0..n {
                    m.swap(k * n + j, swap * n + j);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = at(&m, i, j) * at(&m, k, k) - at(&m, i, k) * at(&m, k, j);
                    m[i * n + j] = num / &prev; // exact division (Bareiss invariant)
                }
            }
            prev = at(&m, k, k);
        }
        Ok(sign * at(&m, n - 1, n - 1))
    }

    /// `true` iff the matrix is square with determinant `±1`.
    pub fn is_unimodular(&self) -> Result<bool> {
        let d = self.det()?;
        Ok(d.abs().is_one())
    }

    /// Exact inverse of a unimodular matrix (entries stay integral).
    pub fn inverse_unimodular(&self) -> Result<IntMatrix> {
        let d = self.det()?;
        if !d.abs().is_one() {
            return Err(Error::NotUnimodular { det: d.to_string() });
        }
        let inv = self
            .to_rational()
            .inverse()
            .map_err(|_| Error::Singular { context: "inverse_unimodular" })?;
        inv.to_integer()
            .ok_or_else(|| Error::Invalid("unimodular inverse was not integral".into()))
    }

    pub fn to_rational(&self) -> RatMatrix {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect(),
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[i] -= q * row[k]`
    fn row_sub_mul(&mut self, i: usize, k: usize, q: &BigInt) {
        for j in 0..self.cols {
            let delta = q * self.get(k, j);
            let val = self.get(i, j) - delta;
            self.set(i, j, val);
        }
    }

    /// `col[j] -= q * col[k]`
    fn col_sub_mul(&mut self, j: usize, k: usize, q: &BigInt) {
        for i in 0..self.rows {
            let delta = q * self.get(i, k);
            let val = self.get(i, j) - delta;
            self.set(i, j, val);
        }
    }

    /// `row[k] += row[i]`
    fn row_add(&mut self, k: usize, i: usize) {
        for j in 0..self.cols {
            let val = self.get(k, j) + self.get(i, j);
            self.set(k, j, val);
        }
    }

    fn negate_row(&mut self, k: usize) {
        for j in 0..self.cols {
            let val = -self.get(k, j);
            self.set(k, j, val);
        }
    }
}

/// Dense matrix over the rationals, used for exact elimination and inverses.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigRational>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::dim("RatMatrix::new", rows * cols, data.len()));
        }
        Ok(RatMatrix { rows, cols, data })
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigRational::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigRational) {
        self.data[i * self.cols + j] = value;
    }

    pub fn mul(&self, other: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != other.rows {
            return Err(Error::dim("RatMatrix::mul", self.cols, other.rows));
        }
        let mut out = RatMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let val = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, val);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigRational]) -> Result<Vec<BigRational>> {
        if self.cols != v.len() {
            return Err(Error::dim("RatMatrix::mul_vec", self.cols, v.len()));
        }
        Ok((0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * &v[j]).sum())
            .collect())
    }

    /// Exact inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<RatMatrix> {
        if !self.is_square() {
            return Err(Error::dim(
                "RatMatrix::inverse",
                "square matrix",
                format!("{}x{}", self.rows, self.cols),
            ));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = RatMatrix::identity(n);
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&i| !a.get(i, col).is_zero()) else {
                return Err(Error::Singular { context: "RatMatrix::inverse" });
            };
            a.swap_rows(col, pivot);
            inv.swap_rows(col, pivot);
            let p = a.get(col, col).clone();
            for j in 0..n {
                let va = a.get(col, j) / &p;
                a.set(col, j, va);
                let vi = inv.get(col, j) / &p;
                inv.set(col, j, vi);
            }
            for i in 0..n {
                if i == col || a.get(i, col).is_zero() {
                    continue;
                }
                let f = a.get(i, col).clone();
                for j in 0..n {
                    let va = a.get(i, j) - &f * a.get(col, j);
                    a.set(i, j, va);
                    let vi = inv.get(i, j) - &f * inv.get(col, j);
                    inv.set(i, j, vi);
                }
            }
        }
        Ok(inv)
    }

    /// Row rank by exact elimination.
    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        let mut rank = 0;
        for col in 0..a.cols {
            let Some(pivot) = (rank..a.rows).find(|&i| !a.get(i, col).is_zero()) else {
                continue;
            };
            a.swap_rows(rank, pivot);
            let p = a.get(rank, col).clone();
            for i in rank + 1..a.rows {
                if a.get(i, col).is_zero() {
                    continue;
                }
                let f = a.get(i, col) / &p;
                for j in col..a.cols {
                    let v = a.get(i, j) - &f * a.get(rank, j);
                    a.set(i, j, v);
                }
            }
            rank += 1;
            if rank == a.rows {
                break;
            }
        }
        rank
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// `Some(IntMatrix)` iff every entry has denominator one.
    pub fn to_integer(&self) -> Option<IntMatrix> {
        let mut data = Vec::with_capacity(self.data.len());
        for x in &self.data {
            if !x.is_integer() {
                return None;
            }
            data.push(x.to_integer());
        }
        Some(IntMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(BigRational::is_integer)
    }

    pub fn det(&self) -> Result<BigRational> {
        if !self.is_square() {
            return Err(Error::dim(
                "RatMatrix::det",
                "square matrix",
                format!("{}x{}", self.rows, self.cols),
            ));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut det = BigRational::one();
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&i| !a.get(i, col).is_zero()) else {
                return Ok(BigRational::zero());
            };
            if pivot != col {
                a.swap_rows(col, pivot);
                det = -det;
            }
            let p = a.get(col, col).clone();
            det *= &p;
            for i in col + 1..n {
                if a.get(i, col).is_zero() {
                    continue;
                }
                let f = a.get(i, col) / &p;
                for j in col..n {
                    let v = a.get(i, j) - &f * a.get(col, j);
                    a.set(i, j, v);
                }
            }
        }
        Ok(det)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

/// Result of `smith_normal_form`: unimodular `u`, `v` with `u * b * v = d` diagonal.
#[derive(Clone, Debug)]
pub struct SmithNormalForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithNormalForm {
    /// The diagonal invariant factors `d_1 | d_2 | ...`, including trailing zeros.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let t = self.d.rows().min(self.d.cols());
        (0..t).map(|k| self.d.get(k, k).clone()).collect()
    }
}

/// Smith normal form with deterministic pivoting: at each step the pivot is the
/// entry of smallest nonzero absolute value in the working block, ties broken
/// in row-major order. Diagonal entries are nonnegative and form a
/// divisibility chain.
pub fn smith_normal_form(b: &IntMatrix) -> SmithNormalForm {
    let (rows, cols) = (b.rows(), b.cols());
    let mut d = b.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let steps = rows.min(cols);
    for k in 0..steps {
        'step: loop {
            let Some((pi, pj)) = min_abs_pivot(&d, k) else {
                break; // working block is zero; remaining invariant factors are 0
            };
            d.swap_rows(k, pi);
            u.swap_rows(k, pi);
            d.swap_cols(k, pj);
            v.swap_cols(k, pj);
            // Euclidean sweeps: after these either the cross is clear or a
            // strictly smaller remainder appeared and we re-pivot.
            let mut dirty = false;
            for i in k + 1..rows {
                if !d.get(i, k).is_zero() {
                    let q = d.get(i, k).div_floor(d.get(k, k));
                    if !q.is_zero() {
                        d.row_sub_mul(i, k, &q);
                        u.row_sub_mul(i, k, &q);
                    }
                    if !d.get(i, k).is_zero() {
                        dirty = true;
                    }
                }
            }
            for j in k + 1..cols {
                if !d.get(k, j).is_zero() {
                    let q = d.get(k, j).div_floor(d.get(k, k));
                    if !q.is_zero() {
                        d.col_sub_mul(j, k, &q);
                        v.col_sub_mul(j, k, &q);
                    }
                    if !d.get(k, j).is_zero() {
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue 'step;
            }
            // Divisibility repair: fold an offending row into row k and redo.
            for i in k + 1..rows {
                for j in k + 1..cols {
                    if !d.get(i, j).mod_floor(d.get(k, k)).is_zero() {
                        d.row_add(k, i);
                        u.row_add(k, i);
                        continue 'step;
                    }
                }
            }
            break;
        }
    }
    for k in 0..steps {
        if d.get(k, k).sign() == Sign::Minus {
            d.negate_row(k);
            u.negate_row(k);
        }
    }
    SmithNormalForm { u, d, v }
}

/// Smallest-|entry| nonzero pivot in the block starting at `(k, k)`, row-major ties.
fn min_abs_pivot(m: &IntMatrix, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for i in k..m.rows() {
        for j in k..m.cols() {
            let val = m.get(i, j);
            if val.is_zero() {
                continue;
            }
            let a = val.abs();
            match &best {
                Some((_, _, cur)) if *cur <= a => {}
                _ => best = Some((i, j, a)),
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

/// Ordered list of wedge-basis pairs `(i, j)` with `i < j`, lexicographic.
pub fn wedge_pairs(rank: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::with_capacity(rank * rank.saturating_sub(1) / 2);
    for i in 0..rank {
        for j in i + 1..rank {
            pairs.push((i, j));
        }
    }
    pairs
}

/// Position of `(i, j)`, `i < j`, in the lexicographic wedge basis.
pub fn wedge_index(rank: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < rank);
    // entries before row i: (rank-1) + (rank-2) + ... + (rank-i)
    i * rank - i * (i + 1) / 2 + (j - i - 1)
}

/// Matrix of `Λ²A` on the lexicographic wedge basis: the 2x2 minors of `A`.
///
/// Column `(k, l)` holds the coordinates of `A e_k ∧ A e_l`, so the map is
/// functorial: `Λ²(AB) = Λ²A · Λ²B`.
pub fn lambda2_induced(a: &IntMatrix) -> Result<IntMatrix> {
    if !a.is_square() {
        return Err(Error::dim(
            "lambda2_induced",
            "square matrix",
            format!("{}x{}", a.rows(), a.cols()),
        ));
    }
    let r = a.rows();
    let pairs = wedge_pairs(r);
    let n = pairs.len();
    let mut out = IntMatrix::zero(n, n);
    for (row, &(i, j)) in pairs.iter().enumerate() {
        for (col, &(k, l)) in pairs.iter().enumerate() {
            let minor = a.get(i, k) * a.get(j, l) - a.get(i, l) * a.get(j, k);
            out.set(row, col, minor);
        }
    }
    Ok(out)
}

/// Alternating integer form on `Λ²` of a rank-`rank` lattice, valued in a
/// free abelian group of rank `target_rank`. Stored as one value vector per
/// wedge basis element `e_i ∧ e_j`, `i < j`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AltForm {
    rank: usize,
    target_rank: usize,
    values: Vec<Vec<BigInt>>,
}

impl AltForm {
    pub fn new(rank: usize, target_rank: usize, values: Vec<Vec<BigInt>>) -> Result<Self> {
        let expect = rank * rank.saturating_sub(1) / 2;
        if values.len() != expect {
            return Err(Error::dim("AltForm::new", expect, values.len()));
        }
        if let Some(bad) = values.iter().find(|v| v.len() != target_rank) {
            return Err(Error::dim("AltForm::new", target_rank, bad.len()));
        }
        Ok(AltForm { rank, target_rank, values })
    }

    pub fn zero(rank: usize, target_rank: usize) -> Self {
        let n = rank * rank.saturating_sub(1) / 2;
        AltForm {
            rank,
            target_rank,
            values: vec![vec![BigInt::zero(); target_rank]; n],
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn target_rank(&self) -> usize {
        self.target_rank
    }

    /// Stored value on the basis wedge `e_i ∧ e_j` (requires `i < j`).
    pub fn basis_value(&self, i: usize, j: usize) -> &[BigInt] {
        &self.values[wedge_index(self.rank, i, j)]
    }

    /// Value on `e_i ∧ e_j` for any `i, j`, with the alternating sign rule.
    pub fn value(&self, i: usize, j: usize) -> Vec<BigInt> {
        use std::cmp::Ordering;
        match i.cmp(&j) {
            Ordering::Less => self.basis_value(i, j).to_vec(),
            Ordering::Equal => vec![BigInt::zero(); self.target_rank],
            Ordering::Greater => self.basis_value(j, i).iter().map(|x| -x).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().flatten().all(Zero::is_zero)
    }

    pub fn add(&self, other: &AltForm) -> Result<AltForm> {
        if self.rank != other.rank || self.target_rank != other.target_rank {
            return Err(Error::dim(
                "AltForm::add",
                format!("rank {} target {}", self.rank, self.target_rank),
                format!("rank {} target {}", other.rank, other.target_rank),
            ));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
            .collect();
        Ok(AltForm { rank: self.rank, target_rank: self.target_rank, values })
    }

    pub fn neg(&self) -> AltForm {
        AltForm {
            rank: self.rank,
            target_rank: self.target_rank,
            values: self
                .values
                .iter()
                .map(|v| v.iter().map(|x| -x).collect())
                .collect(),
        }
    }

    pub fn sub(&self, other: &AltForm) -> Result<AltForm> {
        self.add(&other.neg())
    }

    /// Precompose with `Λ²m` for a square matrix `m` on the lattice: the form
    /// `w ↦ self(Λ²m · w)`.
    pub fn compose_lambda2(&self, m: &IntMatrix) -> Result<AltForm> {
        if m.rows() != self.rank {
            return Err(Error::dim("AltForm::compose_lambda2", self.rank, m.rows()));
        }
        let l2 = lambda2_induced(m)?;
        let pairs = wedge_pairs(self.rank);
        let mut values = Vec::with_capacity(pairs.len());
        for (col, _) in pairs.iter().enumerate() {
            let mut acc = vec![BigInt::zero(); self.target_rank];
            for (row, _) in pairs.iter().enumerate() {
                let coeff = l2.get(row, col);
                if coeff.is_zero() {
                    continue;
                }
                for (a, v) in acc.iter_mut().zip(&self.values[row]) {
                    *a += coeff * v;
                }
            }
            values.push(acc);
        }
        Ok(AltForm { rank: self.rank, target_rank: self.target_rank, values })
    }
}

/// Contraction of an alternating form with a lattice vector `t`: the
/// homomorphism `L → C` sending `e_j` to `n(t ∧ e_j)`, returned as a
/// `target_rank x rank` matrix (one column per lattice basis vector).
pub fn contract(n: &AltForm, t: &[BigInt]) -> Result<IntMatrix> {
    if t.len() != n.rank() {
        return Err(Error::dim("contract", n.rank(), t.len()));
    }
    let mut out = IntMatrix::zero(n.target_rank(), n.rank());
    for j in 0..n.rank() {
        for i in 0..n.rank() {
            if i == j || t[i].is_zero() {
                continue;
            }
            let val = n.value(i, j);
            for k in 0..n.target_rank() {
                let cur = out.get(k, j) + &t[i] * &val[k];
                out.set(k, j, cur);
            }
        }
    }
    Ok(out)
}
