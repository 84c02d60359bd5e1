//! Line-bundle data of a positive definite form: automorphy cocycle, alternating
//! and hermitian pairings, and theta sums with adaptive, rigorously bounded
//! truncation.

use crate::error::{Error, Result};
use crate::intlat::{IntMatrix, RatMatrix};
use crate::qform::{DualCosetRep, QuadraticForm};
use num::complex::Complex64;
use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use std::f64::consts::{PI, TAU};

/// Default absolute truncation tolerance.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Default cap on the truncation radius.
pub const DEFAULT_MAX_RADIUS: usize = 64;

/// Element `m₁τ + m₂` of the period lattice `Zᵈτ + Zᵈ ⊆ ℂᵈ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeVector {
    m1: Vec<i64>,
    m2: Vec<i64>,
}

impl LatticeVector {
    pub fn new(m1: Vec<i64>, m2: Vec<i64>) -> Result<Self> {
        if m1.len() != m2.len() {
            return Err(Error::dim("LatticeVector", m1.len(), m2.len()));
        }
        Ok(LatticeVector { m1, m2 })
    }

    pub fn zero(d: usize) -> Self {
        LatticeVector { m1: vec![0; d], m2: vec![0; d] }
    }

    pub fn d(&self) -> usize {
        self.m1.len()
    }

    pub fn m1(&self) -> &[i64] {
        &self.m1
    }

    pub fn m2(&self) -> &[i64] {
        &self.m2
    }

    /// Componentwise sum (the lattice is a group under addition).
    pub fn sum(&self, other: &LatticeVector) -> Result<LatticeVector> {
        if self.d() != other.d() {
            return Err(Error::dim("LatticeVector sum", self.d(), other.d()));
        }
        LatticeVector::new(
            self.m1.iter().zip(&other.m1).map(|(a, b)| a + b).collect(),
            self.m2.iter().zip(&other.m2).map(|(a, b)| a + b).collect(),
        )
    }

    /// Value `m₁τ + m₂` as a complex vector.
    pub fn embed(&self, tau: Complex64) -> Vec<Complex64> {
        self.m1
            .iter()
            .zip(&self.m2)
            .map(|(&a, &b)| a as f64 * tau + b as f64)
            .collect()
    }
}

/// Exact affine-linear form `a₀ + a_τ·τ + Σᵢ aᵢ·zᵢ` with rational coefficients;
/// the currency of the symbolic cocycle checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentForm {
    constant: BigRational,
    tau_coef: BigRational,
    z_coefs: Vec<BigRational>,
}

impl ExponentForm {
    pub fn zero(d: usize) -> Self {
        ExponentForm {
            constant: BigRational::zero(),
            tau_coef: BigRational::zero(),
            z_coefs: vec![BigRational::zero(); d],
        }
    }

    pub fn constant_part(&self) -> &BigRational {
        &self.constant
    }

    pub fn tau_coefficient(&self) -> &BigRational {
        &self.tau_coef
    }

    pub fn z_coefficients(&self) -> &[BigRational] {
        &self.z_coefs
    }

    /// `true` when the τ and every z coefficient vanish exactly.
    pub fn is_constant(&self) -> bool {
        self.tau_coef.is_zero() && self.z_coefs.iter().all(|c| c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.is_constant() && self.constant.is_zero()
    }

    pub fn add(&self, other: &ExponentForm) -> Result<ExponentForm> {
        if self.z_coefs.len() != other.z_coefs.len() {
            return Err(Error::dim("ExponentForm add", self.z_coefs.len(), other.z_coefs.len()));
        }
        Ok(ExponentForm {
            constant: &self.constant + &other.constant,
            tau_coef: &self.tau_coef + &other.tau_coef,
            z_coefs: self
                .z_coefs
                .iter()
                .zip(&other.z_coefs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn neg(&self) -> ExponentForm {
        ExponentForm {
            constant: -self.constant.clone(),
            tau_coef: -self.tau_coef.clone(),
            z_coefs: self.z_coefs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn sub(&self, other: &ExponentForm) -> Result<ExponentForm> {
        self.add(&other.neg())
    }

    /// Exact substitution `z ↦ z + m₁'τ + m₂'`: z coefficients are unchanged,
    /// the τ coefficient gains `Σᵢ aᵢ m₁'ᵢ` and the constant `Σᵢ aᵢ m₂'ᵢ`.
    pub fn shifted_z(&self, shift: &LatticeVector) -> Result<ExponentForm> {
        if shift.d() != self.z_coefs.len() {
            return Err(Error::dim("ExponentForm shift", self.z_coefs.len(), shift.d()));
        }
        let mut out = self.clone();
        for (i, coef) in self.z_coefs.iter().enumerate() {
            out.tau_coef += coef * BigRational::from(BigInt::from(shift.m1[i]));
            out.constant += coef * BigRational::from(BigInt::from(shift.m2[i]));
        }
        Ok(out)
    }

    /// Numeric value at `(τ, z)`.
    pub fn evaluate(&self, tau: Complex64, z: &[Complex64]) -> Result<Complex64> {
        if z.len() != self.z_coefs.len() {
            return Err(Error::dim("ExponentForm evaluate", self.z_coefs.len(), z.len()));
        }
        let mut acc = rat_f64(&self.constant) + rat_f64(&self.tau_coef) * tau;
        for (coef, zi) in self.z_coefs.iter().zip(z) {
            acc += rat_f64(coef) * zi;
        }
        Ok(acc)
    }
}

/// Automorphy exponent `f_{m₁τ+m₂}(z) = −β(z, m₁) − φ(m₁)·τ` as an exact form;
/// `exp(2πi·f)` is the bundle cocycle.
pub fn cocycle_exponent(q: &QuadraticForm, u: &LatticeVector) -> Result<ExponentForm> {
    single_component(q)?;
    if u.d() != q.d() {
        return Err(Error::dim("cocycle_exponent", q.d(), u.d()));
    }
    let m1: Vec<BigInt> = u.m1.iter().map(|&v| BigInt::from(v)).collect();
    let c = &q.hessians()[0];
    let mut form = ExponentForm::zero(q.d());
    for j in 0..q.d() {
        let mut cm = BigInt::zero();
        for (i, m1i) in m1.iter().enumerate() {
            cm += c.get(i, j) * m1i;
        }
        form.z_coefs[j] = BigRational::from(-cm);
    }
    form.tau_coef = BigRational::from(-q.phi_int(&m1)?[0].clone());
    Ok(form)
}

/// Numeric automorphy exponent `f_u(z)` at `(τ, z)`.
pub fn cocycle_f(
    q: &QuadraticForm,
    u: &LatticeVector,
    tau: Complex64,
    z: &[Complex64],
) -> Result<Complex64> {
    cocycle_exponent(q, u)?.evaluate(tau, z)
}

/// Exact defect `f_u(z + u′) + f_{u′}(z) − f_{u+u′}(z)`; always the constant
/// `−β(m₂′, m₁)`, an integer, which is what makes the cocycle multiplicative.
pub fn cocycle_defect(
    q: &QuadraticForm,
    u: &LatticeVector,
    up: &LatticeVector,
) -> Result<ExponentForm> {
    let f_u = cocycle_exponent(q, u)?;
    let f_up = cocycle_exponent(q, up)?;
    let f_sum = cocycle_exponent(q, &u.sum(up)?)?;
    f_u.shifted_z(up)?.add(&f_up)?.sub(&f_sum)
}

/// Alternating pairing `E(m₁τ+m₂, m₁′τ+m₂′) = β(m₁, m₂′) − β(m₂, m₁′)`.
pub fn chern_form(q: &QuadraticForm, u: &LatticeVector, up: &LatticeVector) -> Result<BigInt> {
    single_component(q)?;
    if u.d() != q.d() || up.d() != q.d() {
        return Err(Error::dim("chern_form", q.d(), u.d().min(up.d())));
    }
    let big = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
    let a = q.beta_int(&big(&u.m1), &big(&up.m2))?[0].clone();
    let b = q.beta_int(&big(&u.m2), &big(&up.m1))?[0].clone();
    Ok(a - b)
}

/// The four-term combination `f_{u′}(z+u) + f_u(z) − f_u(z+u′) − f_{u′}(z)` as
/// an exact form; its τ and z parts cancel and the constant equals the
/// alternating pairing.
pub fn chern_four_term(
    q: &QuadraticForm,
    u: &LatticeVector,
    up: &LatticeVector,
) -> Result<ExponentForm> {
    let f_u = cocycle_exponent(q, u)?;
    let f_up = cocycle_exponent(q, up)?;
    f_up.shifted_z(u)?
        .add(&f_u)?
        .sub(&f_u.shifted_z(up)?)?
        .sub(&f_up)
}

/// Sesquilinear pairing `H(x, y) = (Im τ)⁻¹ · β(x, ȳ)`.
pub fn hermitian_pairing(
    q: &QuadraticForm,
    x: &[Complex64],
    y: &[Complex64],
    tau: Complex64,
) -> Result<Complex64> {
    single_component(q)?;
    if tau.im <= 0.0 {
        return Err(Error::Invalid(format!("hermitian pairing needs Im τ > 0, got {tau}")));
    }
    let y_bar: Vec<Complex64> = y.iter().map(|v| v.conj()).collect();
    Ok(q.beta_complex(x, &y_bar)? / tau.im)
}

/// `H(x, x)`, which is real; positive for `x ≠ 0` iff the form is positive
/// definite.
pub fn hermitian_norm(q: &QuadraticForm, x: &[Complex64], tau: Complex64) -> Result<f64> {
    Ok(hermitian_pairing(q, x, x, tau)?.re)
}

/// Evaluation context: positive definite single-component form, `Im τ > 0`,
/// an absolute tail tolerance, and a truncation-radius cap.
#[derive(Clone, Debug)]
pub struct ThetaContext {
    form: QuadraticForm,
    tau: Complex64,
    tol: f64,
    max_radius: usize,
}

impl ThetaContext {
    pub fn new(form: QuadraticForm, tau: Complex64, tol: f64, max_radius: usize) -> Result<Self> {
        single_component(&form)?;
        if !form.is_positive_definite()? {
            return Err(Error::Invalid(
                "theta evaluation needs a positive definite form".into(),
            ));
        }
        if !(tau.im > 0.0) {
            return Err(Error::Invalid(format!("theta context needs Im τ > 0, got {tau}")));
        }
        if !(tol > 0.0) {
            return Err(Error::Invalid(format!("tolerance must be positive, got {tol}")));
        }
        if max_radius == 0 {
            return Err(Error::Invalid("max_radius must be at least 1".into()));
        }
        Ok(ThetaContext { form, tau, tol, max_radius })
    }

    pub fn with_defaults(form: QuadraticForm, tau: Complex64) -> Result<Self> {
        ThetaContext::new(form, tau, DEFAULT_TOL, DEFAULT_MAX_RADIUS)
    }

    pub fn form(&self) -> &QuadraticForm {
        &self.form
    }

    pub fn tau(&self) -> Complex64 {
        self.tau
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn max_radius(&self) -> usize {
        self.max_radius
    }
}

/// Evaluated theta sum plus the truncation evidence: radius used, the proven
/// tail bound, and the number of lattice points summed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThetaValue {
    pub value: Complex64,
    pub radius: usize,
    pub tail_bound: f64,
    pub terms: usize,
}

/// `θ_u(τ, z) = Σ_{v ∈ Zᵈ} e^{2πi[−β(z, u+v) + φ(u+v)·τ]}`, truncated at the
/// smallest sup-norm radius whose Gaussian tail bound is below the tolerance.
pub fn theta_eval(ctx: &ThetaContext, u: &DualCosetRep, z: &[Complex64]) -> Result<Complex64> {
    Ok(theta_eval_with_info(ctx, u, z)?.value)
}

/// `theta_eval` with the truncation evidence attached.
pub fn theta_eval_with_info(
    ctx: &ThetaContext,
    u: &DualCosetRep,
    z: &[Complex64],
) -> Result<ThetaValue> {
    let d = ctx.form.d();
    let u_rat = validated_characteristic(&ctx.form, u)?;
    if z.len() != d {
        return Err(Error::dim("theta_eval (z length)", d, z.len()));
    }
    let u_f: Vec<f64> = u_rat.iter().map(rat_f64).collect();
    let im_tau = ctx.tau.im;
    let p: Vec<f64> = z.iter().map(|zi| zi.im / im_tau).collect();
    let sup = |v: &[f64]| v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let margin = sup(&u_f) + sup(&p);
    let c = hessian_f64(&ctx.form);
    let phi_p = quad_value(&c, &p);
    let prefactor = (TAU * im_tau * phi_p).exp();
    let lambda = lambda_min_lower_bound(&ctx.form.hessians()[0]);

    let mut chosen = None;
    for radius in 0..=ctx.max_radius {
        let bound = tail_bound(d, radius, margin, prefactor, lambda, im_tau);
        if bound < ctx.tol {
            chosen = Some((radius, bound));
            break;
        }
    }
    let (radius, bound) = match chosen {
        Some(pair) => pair,
        None => {
            return Err(Error::Convergence {
                achieved: tail_bound(d, ctx.max_radius, margin, prefactor, lambda, im_tau),
                requested: ctx.tol,
                radius: ctx.max_radius,
            })
        }
    };

    let mut sum = KahanComplex::default();
    let mut terms = 0usize;
    let mut v = vec![0i64; d];
    for k in 0..=radius as i64 {
        for_each_shell_vector(&mut v, k, &mut |v| {
            let w: Vec<f64> = (0..d).map(|i| u_f[i] + v[i] as f64).collect();
            let phi_w = quad_value(&c, &w);
            let mut beta_zw = Complex64::new(0.0, 0.0);
            for i in 0..d {
                for j in 0..d {
                    beta_zw += z[i] * c[i][j] * w[j];
                }
            }
            let exponent = Complex64::new(0.0, TAU) * (-beta_zw + phi_w * ctx.tau);
            sum.add(exponent.exp());
            terms += 1;
        });
    }
    Ok(ThetaValue { value: sum.value(), radius, tail_bound: bound, terms })
}

/// Theta sum over the fixed box `‖v‖∞ ≤ radius` with no tail accounting;
/// the comparison arm of truncation-stability checks and direct oracles.
pub fn theta_eval_at_radius(
    ctx: &ThetaContext,
    u: &DualCosetRep,
    z: &[Complex64],
    radius: usize,
) -> Result<Complex64> {
    let d = ctx.form.d();
    let u_rat = validated_characteristic(&ctx.form, u)?;
    if z.len() != d {
        return Err(Error::dim("theta_eval_at_radius (z length)", d, z.len()));
    }
    let u_f: Vec<f64> = u_rat.iter().map(rat_f64).collect();
    let c = hessian_f64(&ctx.form);
    let mut sum = KahanComplex::default();
    let mut v = vec![0i64; d];
    for k in 0..=radius as i64 {
        for_each_shell_vector(&mut v, k, &mut |v| {
            let w: Vec<f64> = (0..d).map(|i| u_f[i] + v[i] as f64).collect();
            let phi_w = quad_value(&c, &w);
            let mut beta_zw = Complex64::new(0.0, 0.0);
            for i in 0..d {
                for j in 0..d {
                    beta_zw += z[i] * c[i][j] * w[j];
                }
            }
            let exponent = Complex64::new(0.0, TAU) * (-beta_zw + phi_w * ctx.tau);
            sum.add(exponent.exp());
        });
    }
    Ok(sum.value())
}

/// Relative residual of the translation law
/// `θ_u(τ, z + m₁τ + m₂) = θ_u(τ, z) · e^{2πi[−β(z, m₁) − φ(m₁)·τ]}`.
pub fn translation_check(
    ctx: &ThetaContext,
    u: &DualCosetRep,
    z: &[Complex64],
    m1: &[i64],
    m2: &[i64],
) -> Result<f64> {
    let d = ctx.form.d();
    if m1.len() != d || m2.len() != d || z.len() != d {
        return Err(Error::dim("translation_check", d, m1.len().min(m2.len()).min(z.len())));
    }
    let shifted: Vec<Complex64> = (0..d)
        .map(|i| z[i] + m1[i] as f64 * ctx.tau + m2[i] as f64)
        .collect();
    let lhs = theta_eval(ctx, u, &shifted)?;
    let m1_c: Vec<Complex64> = m1.iter().map(|&v| Complex64::new(v as f64, 0.0)).collect();
    let beta = ctx.form.beta_complex(z, &m1_c)?;
    let m1_big: Vec<BigInt> = m1.iter().map(|&v| BigInt::from(v)).collect();
    let phi_m1 = ctx.form.phi_int(&m1_big)?[0].to_f64().expect("fits f64");
    let factor = (Complex64::new(0.0, TAU) * (-beta - phi_m1 * ctx.tau)).exp();
    let rhs = theta_eval(ctx, u, z)? * factor;
    Ok((lhs - rhs).norm() / lhs.norm().max(rhs.norm()).max(1e-30))
}

/// The automorphism-side factor `e^{2πi · c(cτ+d)⁻¹ · φ(z)}` for
/// `A = [[a,b],[c,d]]` with `det A = 1`; equals 1 when `c = 0`.
pub fn modular_factor(
    q: &QuadraticForm,
    a: &IntMatrix,
    tau: Complex64,
    z: &[Complex64],
) -> Result<Complex64> {
    single_component(q)?;
    if !a.is_square() || a.rows() != 2 {
        return Err(Error::dim("modular_factor", "2x2 matrix", "other"));
    }
    if !a.det()?.is_one() {
        return Err(Error::NotUnimodular { det: a.det()?.to_string() });
    }
    if tau.im <= 0.0 {
        return Err(Error::Invalid(format!("modular factor needs Im τ > 0, got {tau}")));
    }
    let cc = a.get_f64(1, 0);
    let dd = a.get_f64(1, 1);
    let den = cc * tau + dd;
    if den.norm() == 0.0 {
        return Err(Error::Singular { context: "modular_factor (cτ+d = 0)" });
    }
    let phi_z = q.phi_complex(z)?;
    Ok((Complex64::new(0.0, TAU) * (cc / den) * phi_z).exp())
}

/// Dimension of the section space: `det(c)`, which also counts the dual coset
/// representatives.
pub fn section_dimension(q: &QuadraticForm) -> Result<usize> {
    single_component(q)?;
    if !q.is_positive_definite()? {
        return Err(Error::Invalid(
            "section dimension is defined for positive definite forms".into(),
        ));
    }
    q.hessians()[0]
        .det()?
        .to_usize()
        .ok_or_else(|| Error::Invalid("determinant exceeds desk scale".into()))
}

/// Numerical rank of the matrix `[θ_u(τ, z_j)]` over all dual coset reps `u`
/// and the given sample points, counting singular values above `1e−6` of the
/// largest; with enough generic points this recovers the section dimension.
pub fn theta_basis_gram_rank(ctx: &ThetaContext, sample_points: &[Vec<Complex64>]) -> Result<usize> {
    if sample_points.is_empty() {
        return Err(Error::Invalid("at least one sample point is required".into()));
    }
    let reps = ctx.form.dual_coset_reps()?;
    let n = reps.len();
    let s = sample_points.len();
    let mut m = vec![vec![Complex64::new(0.0, 0.0); s]; n];
    for (i, rep) in reps.iter().enumerate() {
        for (j, z) in sample_points.iter().enumerate() {
            m[i][j] = theta_eval(ctx, rep, z)?;
        }
    }
    // Hermitian Gram matrix G = M·Mᴴ; its eigenvalues are squared singular values.
    let mut g = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        for k in 0..n {
            let mut acc = KahanComplex::default();
            for j in 0..s {
                acc.add(m[i][j] * m[k][j].conj());
            }
            g[i][k] = acc.value();
        }
    }
    // Real symmetric embedding [[Re G, −Im G], [Im G, Re G]] doubles each eigenvalue.
    let nn = 2 * n;
    let mut embed = vec![vec![0.0f64; nn]; nn];
    for i in 0..n {
        for j in 0..n {
            embed[i][j] = g[i][j].re;
            embed[i][n + j] = -g[i][j].im;
            embed[n + i][j] = g[i][j].im;
            embed[n + i][n + j] = g[i][j].re;
        }
    }
    let eigs = jacobi_eigenvalues(&mut embed);
    let lambda_max = eigs.iter().fold(0.0f64, |m, &x| m.max(x));
    if lambda_max <= 0.0 {
        return Ok(0);
    }
    // singular-value cutoff 1e−6·σ_max ⟺ eigenvalue cutoff 1e−12·λ_max
    let count = eigs.iter().filter(|&&x| x > 1e-12 * lambda_max).count();
    Ok(count / 2)
}

fn single_component(q: &QuadraticForm) -> Result<()> {
    if q.e() != 1 {
        return Err(Error::dim("single-component form", 1usize, q.e()));
    }
    Ok(())
}

/// Check `β(u, Zᵈ) ⊆ Z` (i.e. `c·u` integral) and return the coordinates.
fn validated_characteristic<'a>(
    q: &QuadraticForm,
    u: &'a DualCosetRep,
) -> Result<&'a [BigRational]> {
    let coords = u.coords();
    if coords.len() != q.d() {
        return Err(Error::dim("theta characteristic", q.d(), coords.len()));
    }
    let c = &q.hessians()[0];
    for j in 0..q.d() {
        let mut acc = BigRational::zero();
        for (i, ui) in coords.iter().enumerate() {
            acc += BigRational::from(c.get(i, j).clone()) * ui;
        }
        if !acc.is_integer() {
            return Err(Error::Invalid(
                "theta characteristic must pair integrally with the lattice".into(),
            ));
        }
    }
    Ok(coords)
}

fn rat_f64(r: &BigRational) -> f64 {
    r.to_f64().expect("desk-scale rational fits f64")
}

fn hessian_f64(q: &QuadraticForm) -> Vec<Vec<f64>> {
    let c = &q.hessians()[0];
    (0..q.d())
        .map(|i| (0..q.d()).map(|j| c.get_f64(i, j)).collect())
        .collect()
}

/// `φ(w) = ½·wᵀcw` for a real vector.
fn quad_value(c: &[Vec<f64>], w: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (i, row) in c.iter().enumerate() {
        for (j, cij) in row.iter().enumerate() {
            acc += w[i] * cij * w[j];
        }
    }
    acc / 2.0
}

/// Size of the sup-norm shell `‖v‖∞ = k` in `Zᵈ`.
fn shell_size(d: usize, k: i64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let outer = (2 * k + 1) as f64;
    let inner = (2 * k - 1) as f64;
    outer.powi(d as i32) - inner.powi(d as i32)
}

/// Proven bound on `Σ_{‖v‖∞ > R} |term(v)|`: each shell-`k` term has modulus
/// `e^{2π·Imτ·φ(p)} · e^{−2π·Imτ·φ(u+v−p)}` with `p = Im z / Im τ`, and
/// `φ(u+v−p) ≥ ½λ_min·max(k − margin, 0)²` with `margin = ‖u‖∞ + ‖p‖∞`.
fn tail_bound(d: usize, radius: usize, margin: f64, prefactor: f64, lambda: f64, im_tau: f64) -> f64 {
    let mut total = 0.0f64;
    let mut k = radius as i64 + 1;
    let cap = radius as i64 + 200_000;
    loop {
        let dk = (k as f64 - margin).max(0.0);
        let shell = shell_size(d, k) * prefactor * (-PI * lambda * im_tau * dk * dk).exp();
        total += shell;
        if total > 1e300 {
            return f64::INFINITY;
        }
        if dk > 0.0 && shell == 0.0 {
            break;
        }
        k += 1;
        if k > cap {
            return f64::INFINITY;
        }
    }
    total
}

/// Lower bound on the smallest eigenvalue of the symmetric integer matrix `c`:
/// the Gershgorin bound when positive, else the largest `ℓ = 2⁻ʲ` with
/// `c − ℓI` still positive definite (exact rational leading-minor test).
fn lambda_min_lower_bound(c: &IntMatrix) -> f64 {
    let d = c.rows();
    let mut gersh = f64::INFINITY;
    for i in 0..d {
        let mut row = c.get_f64(i, i);
        for j in 0..d {
            if j != i {
                row -= c.get_f64(i, j).abs();
            }
        }
        gersh = gersh.min(row);
    }
    if gersh > 0.0 {
        return gersh;
    }
    let mut ell = BigRational::one();
    for _ in 0..200 {
        if shifted_positive_definite(c, &ell) {
            return rat_f64(&ell);
        }
        ell /= BigRational::from(BigInt::from(2));
    }
    rat_f64(&ell)
}

/// Exact positive definiteness of `c − ℓI` via leading principal minors.
fn shifted_positive_definite(c: &IntMatrix, ell: &BigRational) -> bool {
    let d = c.rows();
    for k in 1..=d {
        let mut sub = RatMatrix::zero(k, k);
        for i in 0..k {
            for j in 0..k {
                let mut v = BigRational::from(c.get(i, j).clone());
                if i == j {
                    v -= ell.clone();
                }
                sub.set(i, j, v);
            }
        }
        match sub.det() {
            Ok(det) if det > BigRational::zero() => {}
            _ => return false,
        }
    }
    true
}

/// Visit every `v` with `‖v‖∞ = k` in lexicographic order.
fn for_each_shell_vector(v: &mut [i64], k: i64, f: &mut impl FnMut(&[i64])) {
    fn rec(v: &mut [i64], pos: usize, k: i64, on_boundary: bool, f: &mut impl FnMut(&[i64])) {
        if pos == v.len() {
            if on_boundary {
                f(v);
            }
            return;
        }
        for x in -k..=k {
            v[pos] = x;
            rec(v, pos + 1, k, on_boundary || x.abs() == k, f);
        }
    }
    if k == 0 {
        for x in v.iter_mut() {
            *x = 0;
        }
        f(v);
        return;
    }
    rec(v, 0, k, false, f);
}

/// Compensated complex accumulator; summation order fixed by the caller.
#[derive(Default)]
struct KahanComplex {
    sum: Complex64,
    carry: Complex64,
}

impl KahanComplex {
    fn add(&mut self, term: Complex64) {
        let y = term - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    fn value(&self) -> Complex64 {
        self.sum
    }
}

/// Cyclic Jacobi eigenvalues of a small real symmetric matrix.
fn jacobi_eigenvalues(a: &mut [Vec<f64>]) -> Vec<f64> {
    let n = a.len();
    for _ in 0..100 {
        let mut off = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    off += a[i][j] * a[i][j];
                }
            }
        }
        let scale = (0..n).map(|i| a[i][i].abs()).fold(1.0f64, f64::max);
        if off.sqrt() < 1e-14 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (1.0 + theta * theta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for i in 0..n {
                    let aip = a[i][p];
                    let aiq = a[i][q];
                    a[i][p] = c * aip - s * aiq;
                    a[i][q] = s * aip + c * aiq;
                }
                for j in 0..n {
                    let apj = a[p][j];
                    let aqj = a[q][j];
                    a[p][j] = c * apj - s * aqj;
                    a[q][j] = s * apj + c * aqj;
                }
            }
        }
    }
    (0..n).map(|i| a[i][i]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c64(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn a1() -> QuadraticForm {
        QuadraticForm::new(1, 1, vec![IntMatrix::from_rows(&[&[2]])], None).unwrap()
    }

    fn a2() -> QuadraticForm {
        QuadraticForm::new(2, 1, vec![IntMatrix::from_rows(&[&[2, -1], &[-1, 2]])], None).unwrap()
    }

    fn diag22() -> QuadraticForm {
        QuadraticForm::new(2, 1, vec![IntMatrix::from_rows(&[&[2, 0], &[0, 2]])], None).unwrap()
    }

    fn random_lv(rng: &mut ChaCha8Rng, d: usize) -> LatticeVector {
        LatticeVector::new(
            (0..d).map(|_| rng.gen_range(-5i64..=5)).collect(),
            (0..d).map(|_| rng.gen_range(-5i64..=5)).collect(),
        )
        .unwrap()
    }

    fn beta0(q: &QuadraticForm, a: &[i64], b: &[i64]) -> BigInt {
        let big = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        q.beta_int(&big(a), &big(b)).unwrap()[0].clone()
    }

    #[test]
    fn cocycle_exponent_worked_examples() {
        let q = a1();
        let u = LatticeVector::new(vec![1], vec![0]).unwrap();
        let f = cocycle_exponent(&q, &u).unwrap();
        // f(z) = −2z − τ
        assert_eq!(f.z_coefficients()[0], BigRational::from(BigInt::from(-2)));
        assert_eq!(f.tau_coefficient(), &BigRational::from(BigInt::from(-1)));
        assert!(f.constant_part().is_zero());
        let tau = c64(0.3, 1.1);
        let z = [c64(0.2, -0.4)];
        let v = cocycle_f(&q, &u, tau, &z).unwrap();
        assert!((v - (-2.0 * z[0] - tau)).norm() < 1e-15);

        let zero = cocycle_exponent(&q, &LatticeVector::zero(1)).unwrap();
        assert!(zero.is_zero());
    }

    #[test]
    fn cocycle_defect_is_the_stated_integer() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for q in [a1(), a2(), diag22()] {
            for _ in 0..100 {
                let u = random_lv(&mut rng, q.d());
                let up = random_lv(&mut rng, q.d());
                let defect = cocycle_defect(&q, &u, &up).unwrap();
                assert!(defect.is_constant(), "defect kept τ/z terms: {defect:?}");
                let expected = -beta0(&q, up.m2(), u.m1());
                assert_eq!(defect.constant_part(), &BigRational::from(expected));
                assert!(defect.constant_part().is_integer());
            }
        }
    }

    #[test]
    fn cocycle_multiplicativity_numeric() {
        // e_{u+u'}(z) = e_u(z+u')·e_{u'}(z) exactly because the defect is an integer
        let q = a2();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..20 {
            let u = random_lv(&mut rng, 2);
            let up = random_lv(&mut rng, 2);
            let tau = c64(rng.gen_range(-0.5..0.5), rng.gen_range(0.8..2.0));
            let z = [
                c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            ];
            let up_embedded = up.embed(tau);
            let z_shift: Vec<Complex64> =
                (0..2).map(|i| z[i] + up_embedded[i]).collect();
            // exponentiate the *difference* of exponents (the raw factors can
            // overflow f64 range for large characteristics)
            let diff = cocycle_f(&q, &u, tau, &z_shift).unwrap()
                + cocycle_f(&q, &up, tau, &z).unwrap()
                - cocycle_f(&q, &u.sum(&up).unwrap(), tau, &z).unwrap();
            let ratio = (Complex64::new(0.0, TAU) * diff).exp();
            assert!((ratio - 1.0).norm() < 1e-6, "ratio {ratio} for u={u:?}, u'={up:?}");
        }
    }

    #[test]
    fn chern_form_worked_examples_and_laws() {
        let q = a1();
        let u = LatticeVector::new(vec![1], vec![0]).unwrap();
        let up = LatticeVector::new(vec![0], vec![1]).unwrap();
        assert_eq!(chern_form(&q, &u, &up).unwrap(), BigInt::from(2));
        assert_eq!(chern_form(&q, &u, &u).unwrap(), BigInt::zero());

        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for q in [a1(), a2()] {
            for _ in 0..100 {
                let u = random_lv(&mut rng, q.d());
                let up = random_lv(&mut rng, q.d());
                let us = random_lv(&mut rng, q.d());
                let e = chern_form(&q, &u, &up).unwrap();
                // alternating
                assert_eq!(chern_form(&q, &u, &u).unwrap(), BigInt::zero());
                assert_eq!(chern_form(&q, &up, &u).unwrap(), -e.clone());
                // biadditive
                let left = chern_form(&q, &u.sum(&us).unwrap(), &up).unwrap();
                let split = e.clone() + chern_form(&q, &us, &up).unwrap();
                assert_eq!(left, split);
            }
        }
    }

    #[test]
    fn chern_four_term_cancels_to_the_pairing() {
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        for q in [a1(), a2(), diag22()] {
            for _ in 0..100 {
                let u = random_lv(&mut rng, q.d());
                let up = random_lv(&mut rng, q.d());
                let four = chern_four_term(&q, &u, &up).unwrap();
                assert!(four.is_constant(), "τ/z dependence failed to cancel");
                assert_eq!(
                    four.constant_part(),
                    &BigRational::from(chern_form(&q, &u, &up).unwrap())
                );
            }
        }
    }

    #[test]
    fn hermitian_values_and_positivity() {
        let q = a1();
        assert!((hermitian_norm(&q, &[c64(1.0, 0.0)], c64(0.0, 1.0)).unwrap() - 2.0).abs() < 1e-15);
        assert_eq!(hermitian_norm(&q, &[c64(0.0, 0.0)], c64(0.0, 1.0)).unwrap(), 0.0);
        assert!(hermitian_norm(&q, &[c64(1.0, 0.0)], c64(0.0, -1.0)).is_err());

        let q = a2();
        let mut rng = ChaCha8Rng::seed_from_u64(45);
        for _ in 0..100 {
            let x = [
                c64(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)),
                c64(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)),
            ];
            let tau = c64(rng.gen_range(-1.0..1.0), rng.gen_range(0.3..2.0));
            let h = hermitian_norm(&q, &x, tau).unwrap();
            if x.iter().any(|v| v.norm() > 1e-9) {
                assert!(h > 0.0, "H({x:?}) = {h}");
            }
        }
    }

    #[test]
    fn hermitian_imaginary_part_is_the_chern_pairing() {
        let mut rng = ChaCha8Rng::seed_from_u64(46);
        for q in [a1(), a2()] {
            for _ in 0..100 {
                let u = random_lv(&mut rng, q.d());
                let up = random_lv(&mut rng, q.d());
                let tau = c64(rng.gen_range(-1.0..1.0), rng.gen_range(0.4..2.0));
                let h = hermitian_pairing(&q, &u.embed(tau), &up.embed(tau), tau).unwrap();
                let e = chern_form(&q, &u, &up).unwrap().to_f64().unwrap();
                assert!(
                    (h.im - e).abs() < 1e-12 * (1.0 + h.norm()),
                    "Im H = {} but E = {e}",
                    h.im
                );
            }
        }
    }

    fn rep_zero(q: &QuadraticForm) -> DualCosetRep {
        q.dual_coset_reps()
            .unwrap()
            .into_iter()
            .find(|r| r.coords().iter().all(|c| c.is_zero()))
            .expect("the zero coset is always represented")
    }

    #[test]
    fn theta_matches_direct_summation_oracle() {
        // d=1, c=[[2]], τ=i, z=0, u=0: Σ_v e^{−2πv²}, radius-6 direct sum;
        // the requested tolerance must out-resolve the 1e-12 comparison below
        let ctx = ThetaContext::new(a1(), c64(0.0, 1.0), 1e-14, 64).unwrap();
        let value = theta_eval(&ctx, &rep_zero(&a1()), &[c64(0.0, 0.0)]).unwrap();
        let mut oracle = 0.0f64;
        for v in -6i64..=6 {
            oracle += (-TAU * (v * v) as f64).exp();
        }
        assert!((value.re - oracle).abs() < 1e-12, "{} vs {}", value.re, oracle);
        assert!(value.im.abs() < 1e-12);
        // the same number to fewer digits: 1 + 2e^{−2π} + 2e^{−8π} + …
        assert!((value.re - 1.0037348855).abs() < 1e-9);
    }

    #[test]
    fn theta_matches_independent_q_series() {
        // c=[[2]], u=0: θ(τ,z) = Σ_v q^{v²} e^{−4πizv} with q = e^{2πiτ}
        let q = a1();
        let rep = rep_zero(&q);
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        for _ in 0..20 {
            let tau = c64(rng.gen_range(-0.5..0.5), rng.gen_range(0.8..2.0));
            let z = c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let ctx = ThetaContext::with_defaults(q.clone(), tau).unwrap();
            let value = theta_eval(&ctx, &rep, &[z]).unwrap();
            let qq = (Complex64::new(0.0, TAU) * tau).exp();
            let mut oracle = Complex64::new(0.0, 0.0);
            for v in -40i64..=40 {
                oracle += qq.powi((v * v) as i32)
                    * (Complex64::new(0.0, -2.0 * TAU) * z * v as f64).exp();
            }
            let rel = (value - oracle).norm() / oracle.norm().max(1e-30);
            assert!(rel < 1e-10, "relative error {rel} at τ={tau}, z={z}");
        }
    }

    #[test]
    fn theta_large_im_tau_is_dominated_by_leading_term() {
        let q = a1();
        let ctx = ThetaContext::with_defaults(q.clone(), c64(0.0, 40.0)).unwrap();
        let z = [c64(0.1, 0.0)];
        for rep in q.dual_coset_reps().unwrap() {
            let value = theta_eval(&ctx, &rep, &z).unwrap();
            let u = rep.coords()[0].to_f64().unwrap();
            let phi_u = u * u; // φ(u) for c = [[2]]
            let beta_zu = 2.0 * z[0] * u;
            let leading = (Complex64::new(0.0, TAU)
                * (phi_u * ctx.tau() - beta_zu))
                .exp()
                * if u == 0.0 { 1.0 } else { 2.0_f64.powi(0) };
            // the nearest competing term is ≥ e^{−2π·40} smaller (u=0) or equal in
            // magnitude but accounted within tol (u=1/2, two mirror terms)
            let diff = (value - leading).norm();
            assert!(diff < 1e-6, "u={u}: θ={value}, leading={leading}");
        }
    }

    #[test]
    fn theta_truncation_is_stable_under_radius_doubling() {
        let q = a2();
        let mut rng = ChaCha8Rng::seed_from_u64(48);
        for _ in 0..10 {
            let tau = c64(rng.gen_range(-0.5..0.5), rng.gen_range(0.8..2.0));
            let ctx = ThetaContext::with_defaults(q.clone(), tau).unwrap();
            let z = vec![
                c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            ];
            for rep in q.dual_coset_reps().unwrap() {
                let info = theta_eval_with_info(&ctx, &rep, &z).unwrap();
                let doubled = theta_eval_at_radius(&ctx, &rep, &z, 2 * info.radius).unwrap();
                assert!(
                    (info.value - doubled).norm() < ctx.tol(),
                    "radius {} → {}: drift {}",
                    info.radius,
                    2 * info.radius,
                    (info.value - doubled).norm()
                );
            }
        }
    }

    #[test]
    fn theta_is_deterministic() {
        let ctx = ThetaContext::with_defaults(a2(), c64(0.17, 1.23)).unwrap();
        let rep = &a2().dual_coset_reps().unwrap()[1];
        let z = vec![c64(0.3, -0.2), c64(-0.1, 0.4)];
        let one = theta_eval(&ctx, rep, &z).unwrap();
        let two = theta_eval(&ctx, rep, &z).unwrap();
        assert_eq!(one.re.to_bits(), two.re.to_bits());
        assert_eq!(one.im.to_bits(), two.im.to_bits());
    }

    #[test]
    fn theta_translation_residuals() {
        // worked example: d=1, c=[[2]], τ=0.3+1.1i, z=0.2+0.1i, m₁=1, m₂=0
        let q = a1();
        let ctx = ThetaContext::with_defaults(q.clone(), c64(0.3, 1.1)).unwrap();
        for rep in q.dual_coset_reps().unwrap() {
            let r = translation_check(&ctx, &rep, &[c64(0.2, 0.1)], &[1], &[0]).unwrap();
            assert!(r < 1e-9, "residual {r}");
            let r0 = translation_check(&ctx, &rep, &[c64(0.2, 0.1)], &[0], &[0]).unwrap();
            assert!(r0 < 1e-15);
        }
        // random shifts on the rank-2 root form
        let q = a2();
        let mut rng = ChaCha8Rng::seed_from_u64(49);
        for _ in 0..15 {
            let tau = c64(rng.gen_range(-0.5..0.5), rng.gen_range(0.8..2.0));
            let ctx = ThetaContext::with_defaults(q.clone(), tau).unwrap();
            let z = vec![
                c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            ];
            let m1: Vec<i64> = (0..2).map(|_| rng.gen_range(-2..=2)).collect();
            let m2: Vec<i64> = (0..2).map(|_| rng.gen_range(-2..=2)).collect();
            for rep in q.dual_coset_reps().unwrap() {
                let r = translation_check(&ctx, &rep, &z, &m1, &m2).unwrap();
                assert!(r < 1e-9, "residual {r} for m₁={m1:?}, m₂={m2:?}, τ={tau}");
            }
        }
    }

    #[test]
    fn modular_factor_examples() {
        let q = a1();
        let tau = c64(0.2, 1.4);
        let z = [c64(0.3, -0.7)];
        let t = IntMatrix::from_rows(&[&[1, 1], &[0, 1]]);
        let f = modular_factor(&q, &t, tau, &z).unwrap();
        assert!((f - c64(1.0, 0.0)).norm() < 1e-15);

        // S at τ=i with φ(z)=1: c(cτ+d)⁻¹ = 1/i, so the factor is e^{2πi(1/i)} = e^{2π}
        let s = IntMatrix::from_rows(&[&[0, -1], &[1, 0]]);
        let f = modular_factor(&q, &s, c64(0.0, 1.0), &[c64(1.0, 0.0)]).unwrap();
        assert!((f - c64(TAU.exp(), 0.0)).norm() < 1e-9 * TAU.exp());

        let f = modular_factor(&q, &s, tau, &[c64(0.0, 0.0)]).unwrap();
        assert!((f - c64(1.0, 0.0)).norm() < 1e-15);

        let flip = IntMatrix::from_rows(&[&[1, 0], &[0, -1]]);
        assert!(modular_factor(&q, &flip, tau, &z).is_err());
    }

    #[test]
    fn section_dimensions() {
        assert_eq!(section_dimension(&a1()).unwrap(), 2);
        assert_eq!(section_dimension(&a2()).unwrap(), 3);
        assert_eq!(section_dimension(&diag22()).unwrap(), 4);
        for q in [a1(), a2(), diag22()] {
            assert_eq!(section_dimension(&q).unwrap(), q.dual_coset_reps().unwrap().len());
        }
        let hyperbolic =
            QuadraticForm::new(2, 1, vec![IntMatrix::from_rows(&[&[2, 3], &[3, 2]])], None)
                .unwrap();
        assert!(section_dimension(&hyperbolic).is_err());
    }

    fn random_points(rng: &mut ChaCha8Rng, d: usize, count: usize) -> Vec<Vec<Complex64>> {
        (0..count)
            .map(|_| {
                (0..d)
                    .map(|_| c64(rng.gen_range(-0.8..0.8), rng.gen_range(-0.8..0.8)))
                    .collect()
            })
            .collect()
    }

    #[test]
    fn gram_rank_recovers_section_dimension() {
        let mut rng = ChaCha8Rng::seed_from_u64(50);
        let ctx = ThetaContext::with_defaults(a1(), c64(0.0, 1.0)).unwrap();
        let rank = theta_basis_gram_rank(&ctx, &random_points(&mut rng, 1, 8)).unwrap();
        assert_eq!(rank, 2);

        let ctx = ThetaContext::with_defaults(a2(), c64(0.1, 1.1)).unwrap();
        let rank = theta_basis_gram_rank(&ctx, &random_points(&mut rng, 2, 12)).unwrap();
        assert_eq!(rank, 3);

        let ctx = ThetaContext::with_defaults(diag22(), c64(0.0, 1.0)).unwrap();
        let rank = theta_basis_gram_rank(&ctx, &random_points(&mut rng, 2, 10)).unwrap();
        assert_eq!(rank, 4);

        // a single sample point can only ever witness rank ≤ 1
        let ctx = ThetaContext::with_defaults(a1(), c64(0.0, 1.0)).unwrap();
        let rank = theta_basis_gram_rank(&ctx, &random_points(&mut rng, 1, 1)).unwrap();
        assert!(rank <= 1);
    }

    #[test]
    fn convergence_cap_is_reported() {
        let ctx = ThetaContext::new(a1(), c64(0.0, 0.8), 1e-10, 1).unwrap();
        // radius 1 cannot reach 1e−10 at Im τ = 0.8 with a unit-margin z
        let err = theta_eval(&ctx, &rep_zero(&a1()), &[c64(0.0, 2.0)]).unwrap_err();
        match err {
            Error::Convergence { achieved, requested, radius } => {
                assert!(achieved > requested);
                assert_eq!(radius, 1);
            }
            other => panic!("expected convergence error, got {other:?}"),
        }
    }

    #[test]
    fn context_validation() {
        assert!(ThetaContext::with_defaults(a1(), c64(0.0, -1.0)).is_err());
        assert!(ThetaContext::new(a1(), c64(0.0, 1.0), 0.0, 64).is_err());
        assert!(ThetaContext::new(a1(), c64(0.0, 1.0), 1e-10, 0).is_err());
        let hyperbolic =
            QuadraticForm::new(2, 1, vec![IntMatrix::from_rows(&[&[2, 3], &[3, 2]])], None)
                .unwrap();
        assert!(ThetaContext::with_defaults(hyperbolic, c64(0.0, 1.0)).is_err());
        // arbitrary real characteristics are rejected
        let ctx = ThetaContext::with_defaults(a1(), c64(0.0, 1.0)).unwrap();
        let bogus = DualCosetRep::from_coords(vec![BigRational::new(
            BigInt::from(1),
            BigInt::from(3),
        )]);
        assert!(theta_eval(&ctx, &bogus, &[c64(0.0, 0.0)]).is_err());
    }

    #[test]
    fn lambda_bound_is_a_valid_lower_bound() {
        // Gershgorin positive: diag-dominant forms
        assert!((lambda_min_lower_bound(&IntMatrix::from_rows(&[&[2]])) - 2.0).abs() < 1e-15);
        assert!(
            (lambda_min_lower_bound(&IntMatrix::from_rows(&[&[2, -1], &[-1, 2]])) - 1.0).abs()
                < 1e-15
        );
        // Gershgorin fails (row sum 0) but the halving fallback still bounds λ_min
        let tight = IntMatrix::from_rows(&[&[2, 2], &[2, 4]]);
        let bound = lambda_min_lower_bound(&tight);
        let true_min = 3.0 - 5.0f64.sqrt();
        assert!(bound > 0.0);
        assert!(bound <= true_min + 1e-12, "bound {bound} exceeds λ_min {true_min}");
    }

    #[test]
    fn shell_enumeration_counts_and_order() {
        let mut seen = Vec::new();
        let mut v = vec![0i64; 2];
        for_each_shell_vector(&mut v, 1, &mut |v| seen.push(v.to_vec()));
        assert_eq!(seen.len(), 8);
        let mut sorted = seen.clone();
        sorted.sort();
        assert_eq!(seen, sorted, "lexicographic order within a shell");
        assert!(seen.iter().all(|v| v.iter().map(|x| x.abs()).max() == Some(1)));
        assert_eq!(shell_size(2, 1), 8.0);
        assert_eq!(shell_size(3, 2), 125.0 - 27.0);
        assert_eq!(shell_size(2, 0), 1.0);
    }

    #[test]
    fn jacobi_eigenvalues_match_known_spectrum() {
        let mut m = vec![vec![2.0, -1.0], vec![-1.0, 2.0]];
        let mut eigs = jacobi_eigenvalues(&mut m);
        eigs.sort_by(f64::total_cmp);
        assert!((eigs[0] - 1.0).abs() < 1e-12);
        assert!((eigs[1] - 3.0).abs() < 1e-12);
    }
}
