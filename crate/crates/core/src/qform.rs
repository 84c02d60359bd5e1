//! Integer-valued quadratic functions between free abelian groups: Hessians,
//! bilinear extensions, dual cosets, definiteness, and regular-sequence checks.

use crate::error::{Error, Result};
use crate::intlat::{smith_normal_form, AltForm, IntMatrix};
use crate::poly::{monomials, span_rank, Poly};
use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

/// Quadratic function `φ: B → C` on free abelian groups of ranks `d` and `e`,
/// stored through its Hessian matrices (one symmetric, even-diagonal `d x d`
/// integer matrix per target component) and a compatible bilinear extension.
///
/// The data satisfies `β(y, y') = yᵀ c_k y'`, `φ(y) = ½ yᵀ c_k y`, and
/// `ω(y, y') = yᵀ dext_k y'` with `c_k = dext_k + dext_kᵀ`; the extension is
/// unique up to an alternating integer form.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuadraticForm {
    d: usize,
    e: usize,
    c: Vec<IntMatrix>,
    dext: Vec<IntMatrix>,
}

/// Representative of a dual coset in `B♯/B`, coordinates normalized to `[0, 1)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DualCosetRep {
    coords: Vec<BigRational>,
}

impl DualCosetRep {
    /// Wrap raw coordinates; consumers that need the integral-pairing property
    /// re-validate it where it matters.
    pub fn from_coords(coords: Vec<BigRational>) -> Self {
        DualCosetRep { coords }
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }
}

impl QuadraticForm {
    /// Validate and build; `dext = None` selects the upper-triangular default
    /// extension (`d_ij = c_ij` above the diagonal, `c_ii/2` on it, `0` below).
    pub fn new(d: usize, e: usize, c: Vec<IntMatrix>, dext: Option<Vec<IntMatrix>>) -> Result<Self> {
        if e == 0 {
            return Err(Error::Invalid("target rank e must be at least 1".into()));
        }
        if c.len() != e {
            return Err(Error::dim("QuadraticForm::new (Hessian count)", e, c.len()));
        }
        for (k, m) in c.iter().enumerate() {
            if m.rows() != d || m.cols() != d {
                return Err(Error::dim(
                    "QuadraticForm::new (Hessian shape)",
                    format!("{d}x{d}"),
                    format!("{}x{}", m.rows(), m.cols()),
                ));
            }
            for i in 0..d {
                if (m.get(i, i) % BigInt::from(2)) != BigInt::zero() {
                    return Err(Error::Invalid(format!(
                        "Hessian {k} has odd diagonal entry at ({i},{i}): {}",
                        m.get(i, i)
                    )));
                }
                for j in 0..d {
                    if m.get(i, j) != m.get(j, i) {
                        return Err(Error::Invalid(format!(
                            "Hessian {k} is not symmetric at ({i},{j})"
                        )));
                    }
                }
            }
        }
        let dext = match dext {
            Some(ds) => {
                if ds.len() != e {
                    return Err(Error::dim("QuadraticForm::new (extension count)", e, ds.len()));
                }
                for (k, (dm, cm)) in ds.iter().zip(&c).enumerate() {
                    if dm.rows() != d || dm.cols() != d {
                        return Err(Error::dim(
                            "QuadraticForm::new (extension shape)",
                            format!("{d}x{d}"),
                            format!("{}x{}", dm.rows(), dm.cols()),
                        ));
                    }
                    if &dm.add(&dm.transpose())? != cm {
                        return Err(Error::Invalid(format!(
                            "extension {k} does not satisfy dext + dextᵀ = c"
                        )));
                    }
                }
                ds
            }
            None => c.iter().map(default_extension).collect(),
        };
        Ok(QuadraticForm { d, e, c, dext })
    }

    /// Rank of the source group `B`.
    pub fn d(&self) -> usize {
        self.d
    }

    /// Rank of the target group `C`.
    pub fn e(&self) -> usize {
        self.e
    }

    pub fn hessians(&self) -> &[IntMatrix] {
        &self.c
    }

    pub fn extensions(&self) -> &[IntMatrix] {
        &self.dext
    }

    /// Same form with a different (validated) bilinear extension.
    pub fn with_extension(&self, dext: Vec<IntMatrix>) -> Result<Self> {
        QuadraticForm::new(self.d, self.e, self.c.clone(), Some(dext))
    }

    /// `φ(y)` on a rational vector, one value per target component.
    pub fn eval_phi(&self, y: &[BigRational]) -> Result<Vec<BigRational>> {
        self.check_len(y.len())?;
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        Ok(self
            .c
            .iter()
            .map(|m| &half * quadratic_rat(m, y, y))
            .collect())
    }

    /// Hessian pairing `β(y, y') = φ(y+y') − φ(y) − φ(y')` on rational vectors.
    pub fn eval_beta(&self, y: &[BigRational], y2: &[BigRational]) -> Result<Vec<BigRational>> {
        self.check_len(y.len())?;
        self.check_len(y2.len())?;
        Ok(self.c.iter().map(|m| quadratic_rat(m, y, y2)).collect())
    }

    /// Bilinear extension `ω(y, y')` on rational vectors.
    pub fn eval_omega(&self, y: &[BigRational], y2: &[BigRational]) -> Result<Vec<BigRational>> {
        self.check_len(y.len())?;
        self.check_len(y2.len())?;
        Ok(self.dext.iter().map(|m| quadratic_rat(m, y, y2)).collect())
    }

    /// `φ(y)` on an integer vector (always integral: diagonals are even).
    pub fn phi_int(&self, y: &[BigInt]) -> Result<Vec<BigInt>> {
        self.check_len(y.len())?;
        Ok(self
            .c
            .iter()
            .map(|m| quadratic_int(m, y, y) / BigInt::from(2))
            .collect())
    }

    /// `β(y, y')` on integer vectors.
    pub fn beta_int(&self, y: &[BigInt], y2: &[BigInt]) -> Result<Vec<BigInt>> {
        self.check_len(y.len())?;
        self.check_len(y2.len())?;
        Ok(self.c.iter().map(|m| quadratic_int(m, y, y2)).collect())
    }

    /// `ω(y, y')` on integer vectors.
    pub fn omega_int(&self, y: &[BigInt], y2: &[BigInt]) -> Result<Vec<BigInt>> {
        self.check_len(y.len())?;
        self.check_len(y2.len())?;
        Ok(self.dext.iter().map(|m| quadratic_int(m, y, y2)).collect())
    }

    /// `φ` extended to a complex vector (single target component required).
    pub fn phi_complex(&self, z: &[num::complex::Complex64]) -> Result<num::complex::Complex64> {
        self.single_component()?;
        self.check_len(z.len())?;
        Ok(quadratic_complex(&self.c[0], z, z) * 0.5)
    }

    /// `β` extended to complex vectors (single target component required).
    pub fn beta_complex(
        &self,
        z: &[num::complex::Complex64],
        w: &[num::complex::Complex64],
    ) -> Result<num::complex::Complex64> {
        self.single_component()?;
        self.check_len(z.len())?;
        self.check_len(w.len())?;
        Ok(quadratic_complex(&self.c[0], z, w))
    }

    /// `ω` extended to complex vectors (single target component required).
    pub fn omega_complex(
        &self,
        z: &[num::complex::Complex64],
        w: &[num::complex::Complex64],
    ) -> Result<num::complex::Complex64> {
        self.single_component()?;
        self.check_len(z.len())?;
        self.check_len(w.len())?;
        Ok(quadratic_complex(&self.dext[0], z, w))
    }

    fn single_component(&self) -> Result<()> {
        if self.e != 1 {
            return Err(Error::Invalid(format!(
                "operation requires a single target component, got e = {}",
                self.e
            )));
        }
        Ok(())
    }

    /// The alternating form `ω(m ⊗ m')` on `Λ²` of the rank-`r` lattice:
    /// its value on `e_i ∧ e_j` is `ω(m e_i, m' e_j) − ω(m e_j, m' e_i)`
    /// (componentwise in the target). `m`, `m'` are `d x r` integer matrices.
    pub fn omega_wedge(&self, m: &IntMatrix, mp: &IntMatrix) -> Result<AltForm> {
        if m.rows() != self.d || mp.rows() != self.d {
            return Err(Error::dim(
                "omega_wedge (row count)",
                self.d,
                format!("{} and {}", m.rows(), mp.rows()),
            ));
        }
        if m.cols() != mp.cols() {
            return Err(Error::dim("omega_wedge (rank)", m.cols(), mp.cols()));
        }
        let r = m.cols();
        let col = |mat: &IntMatrix, j: usize| -> Vec<BigInt> {
            (0..self.d).map(|i| mat.get(i, j).clone()).collect()
        };
        let mut values = Vec::new();
        for i in 0..r {
            for j in i + 1..r {
                let a = self.omega_int(&col(m, i), &col(mp, j))?;
                let b = self.omega_int(&col(m, j), &col(mp, i))?;
                values.push(a.into_iter().zip(b).map(|(x, y)| x - y).collect());
            }
        }
        AltForm::new(r, self.e, values)
    }

    /// `true` iff `e = 1` and the Hessian is positive definite (all leading
    /// principal minors positive, exact arithmetic).
    pub fn is_positive_definite(&self) -> Result<bool> {
        if self.e != 1 {
            return Err(Error::Invalid(format!(
                "definiteness is defined for a single target component, got e = {}",
                self.e
            )));
        }
        let m = &self.c[0];
        for k in 1..=self.d {
            let minor = leading_minor(m, k)?;
            if minor <= BigInt::zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Coset representatives of the discriminant group `B♯/B` for `e = 1`
    /// (`B♯ = {u ∈ Qᵈ : c·u ∈ Zᵈ}`), coordinates in `[0,1)`, sorted, with
    /// exactly `|det c|` entries.
    pub fn dual_coset_reps(&self) -> Result<Vec<DualCosetRep>> {
        if self.e != 1 {
            return Err(Error::Invalid(format!(
                "dual cosets are defined for a single target component, got e = {}",
                self.e
            )));
        }
        let c = &self.c[0];
        let det = c.det()?;
        if det.is_zero() {
            return Err(Error::Singular { context: "dual_coset_reps" });
        }
        let snf = smith_normal_form(c);
        let factors = snf.invariant_factors();
        // u = V w with w_i ranging over {0, 1/d_i, ..., (d_i - 1)/d_i}
        let mut reps = vec![vec![BigRational::zero(); 0]; 1];
        for f in &factors {
            let fi = f.to_i64().expect("invariant factor fits i64 at desk scale");
            let mut next = Vec::with_capacity(reps.len() * fi as usize);
            for rep in &reps {
                for k in 0..fi {
                    let mut ext = rep.clone();
                    ext.push(BigRational::new(BigInt::from(k), BigInt::from(fi)));
                    next.push(ext);
                }
            }
            reps = next;
        }
        let mut out: Vec<DualCosetRep> = reps
            .into_iter()
            .map(|w| {
                let u = rat_matrix_vec(&snf.v, &w);
                DualCosetRep {
                    coords: u.into_iter().map(fract).collect(),
                }
            })
            .collect();
        out.sort_by(|a, b| a.coords.cmp(&b.coords));
        out.dedup();
        let expect = det.abs().to_usize().expect("determinant fits usize");
        if out.len() != expect {
            return Err(Error::Invalid(format!(
                "coset enumeration produced {} representatives, determinant says {}",
                out.len(),
                expect
            )));
        }
        Ok(out)
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.d {
            return Err(Error::dim("QuadraticForm vector length", self.d, len));
        }
        Ok(())
    }
}

/// Serialized form file: `{"d", "e", "c": [matrix, …], "dext": optional}`
/// with matrix entries as decimal integer strings; a missing `dext` selects
/// the default extension.
#[derive(Clone, Debug, serde::Serialize, serde::Deserialize)]
pub struct FormFile {
    pub d: usize,
    pub e: usize,
    pub c: Vec<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dext: Option<Vec<Vec<Vec<String>>>>,
}

fn matrix_from_strings(rows: &[Vec<String>]) -> Result<IntMatrix> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut data = Vec::with_capacity(nrows * ncols);
    for row in rows {
        if row.len() != ncols {
            return Err(Error::Parse("ragged matrix rows in form file".into()));
        }
        for entry in row {
            let value = entry
                .parse::<BigInt>()
                .map_err(|_| Error::Parse(format!("invalid integer entry {entry:?}")))?;
            data.push(value);
        }
    }
    IntMatrix::new(nrows, ncols, data)
}

fn matrix_to_strings(m: &IntMatrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.get(i, j).to_string()).collect())
        .collect()
}

/// Parse a form from its JSON file representation.
pub fn form_from_json(text: &str) -> Result<QuadraticForm> {
    let file: FormFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("form file: {e}")))?;
    let c = file
        .c
        .iter()
        .map(|m| matrix_from_strings(m))
        .collect::<Result<Vec<_>>>()?;
    let dext = file
        .dext
        .as_ref()
        .map(|ms| ms.iter().map(|m| matrix_from_strings(m)).collect::<Result<Vec<_>>>())
        .transpose()?;
    QuadraticForm::new(file.d, file.e, c, dext)
}

/// Serialize a form to its JSON file representation (extension included).
pub fn form_to_json(q: &QuadraticForm) -> String {
    let file = FormFile {
        d: q.d,
        e: q.e,
        c: q.c.iter().map(matrix_to_strings).collect(),
        dext: Some(q.dext.iter().map(matrix_to_strings).collect()),
    };
    serde_json::to_string_pretty(&file).expect("form file serializes")
}

/// Default bilinear extension of a symmetric even-diagonal matrix: keep the
/// strict upper triangle, halve the diagonal, zero below.
pub fn default_extension(c: &IntMatrix) -> IntMatrix {
    let d = c.rows();
    let mut out = IntMatrix::zero(d, d);
    for i in 0..d {
        out.set(i, i, c.get(i, i) / BigInt::from(2));
        for j in i + 1..d {
            out.set(i, j, c.get(i, j).clone());
        }
    }
    out
}

fn quadratic_rat(m: &IntMatrix, y: &[BigRational], y2: &[BigRational]) -> BigRational {
    let mut acc = BigRational::zero();
    for i in 0..m.rows() {
        if y[i].is_zero() {
            continue;
        }
        for j in 0..m.cols() {
            if y2[j].is_zero() {
                continue;
            }
            acc += &y[i] * BigRational::from_integer(m.get(i, j).clone()) * &y2[j];
        }
    }
    acc
}

fn quadratic_complex(
    m: &IntMatrix,
    z: &[num::complex::Complex64],
    w: &[num::complex::Complex64],
) -> num::complex::Complex64 {
    use num::ToPrimitive;
    let mut acc = num::complex::Complex64::new(0.0, 0.0);
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let coeff = m.get(i, j).to_f64().expect("Hessian entry fits f64");
            if coeff != 0.0 {
                acc += z[i] * w[j] * coeff;
            }
        }
    }
    acc
}

fn quadratic_int(m: &IntMatrix, y: &[BigInt], y2: &[BigInt]) -> BigInt {
    let mut acc = BigInt::zero();
    for i in 0..m.rows() {
        if y[i].is_zero() {
            continue;
        }
        for j in 0..m.cols() {
            acc += &y[i] * m.get(i, j) * &y2[j];
        }
    }
    acc
}

fn leading_minor(m: &IntMatrix, k: usize) -> Result<BigInt> {
    let mut sub = IntMatrix::zero(k, k);
    for i in 0..k {
        for j in 0..k {
            sub.set(i, j, m.get(i, j).clone());
        }
    }
    sub.det()
}

fn rat_matrix_vec(m: &IntMatrix, v: &[BigRational]) -> Vec<BigRational> {
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| BigRational::from_integer(m.get(i, j).clone()) * &v[j])
                .sum()
        })
        .collect()
}

/// Fractional part in `[0, 1)`.
fn fract(x: BigRational) -> BigRational {
    &x - x.floor()
}

/// Coefficients of `(1−q²)^num_quadrics / (1−q)^nvars` through `q^kmax`
/// (the expected graded dimensions of a quotient by a regular sequence of
/// quadrics, in internal degree where generators sit in degree 1).
pub fn quotient_series_coeffs(num_quadrics: usize, nvars: usize, kmax: usize) -> Vec<BigInt> {
    (0..=kmax)
        .map(|m| {
            let mut acc = BigInt::zero();
            let mut j = 0usize;
            while 2 * j <= m && j <= num_quadrics {
                let term = binomial(num_quadrics, j) * binomial(m - 2 * j + nvars - 1, nvars - 1);
                if j % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
                j += 1;
            }
            acc
        })
        .collect()
}

fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Graded dimensions of `Q[v_1..v_nvars] / (forms)` up to internal degree
/// `max_internal`, by exact linear algebra: in degree `k` the ideal's graded
/// piece is spanned by `form_i * monomial` products of matching degree.
pub fn quotient_dimensions(forms: &[Poly], nvars: usize, max_internal: usize) -> Result<Vec<BigInt>> {
    for f in forms {
        if f.nvars() != nvars {
            return Err(Error::dim("quotient_dimensions", nvars, f.nvars()));
        }
        if f.is_zero() {
            return Err(Error::Invalid("zero polynomial among the forms".into()));
        }
        if f.homogeneous_degree().is_none() {
            return Err(Error::Invalid("forms must be homogeneous".into()));
        }
    }
    let mut dims = Vec::with_capacity(max_internal + 1);
    for k in 0..=max_internal {
        let ambient = binomial(k + nvars - 1, nvars - 1);
        let mut products = Vec::new();
        for f in forms {
            let deg = f.homogeneous_degree().expect("checked homogeneous");
            if deg > k {
                continue;
            }
            for mono in monomials(nvars, k - deg) {
                products.push(f.mul_monomial(&mono));
            }
        }
        let rank = span_rank(&products);
        dims.push(ambient - BigInt::from(rank));
    }
    Ok(dims)
}

/// `true` iff the quotient by `forms` (homogeneous quadrics in `nvars`
/// variables) has the graded dimensions of a regular-sequence quotient,
/// checked through cohomological degree `max_degree` (generators count as
/// degree 2, so internal degree runs to `max_degree / 2`).
pub fn regular_sequence_check(forms: &[Poly], nvars: usize, max_degree: usize) -> Result<bool> {
    if max_degree % 2 != 0 || max_degree < 4 {
        return Err(Error::Invalid(format!(
            "max_degree must be even and at least 4, got {max_degree}"
        )));
    }
    for f in forms {
        if f.homogeneous_degree() != Some(2) {
            return Err(Error::Invalid(
                "regular-sequence check expects homogeneous quadrics".into(),
            ));
        }
    }
    let max_internal = max_degree / 2;
    let actual = quotient_dimensions(forms, nvars, max_internal)?;
    let expected = quotient_series_coeffs(forms.len(), nvars, max_internal);
    Ok(actual == expected)
}
