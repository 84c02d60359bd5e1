//! Framed lattices in ℂ and the analytic actions on them: modular reduction,
//! homothety comparison, descent to `(τ, z, u)` coordinates, and isogenies.

use crate::error::{Error, Result};
use crate::intlat::{smith_normal_form, IntMatrix};
use crate::qform::QuadraticForm;
use num::complex::Complex64;
use num::{BigInt, Signed, ToPrimitive, Zero};
use std::f64::consts::TAU;

/// Default tolerance for pure linear-action float checks.
pub const LINEAR_TOL: f64 = 1e-12;
/// Default tolerance for descent-related checks.
pub const DESCENT_TOL: f64 = 1e-9;

/// Basis `(t₁, t₂)` of a lattice with `ℝt₁ + ℝt₂ = ℂ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FramedLattice {
    pub t1: Complex64,
    pub t2: Complex64,
}

impl FramedLattice {
    pub fn new(t1: Complex64, t2: Complex64) -> Result<Self> {
        let lat = FramedLattice { t1, t2 };
        if lat.framing_area() == 0.0 {
            return Err(Error::Invalid(format!(
                "basis does not span ℂ over ℝ: t1 = {t1}, t2 = {t2}"
            )));
        }
        Ok(lat)
    }

    /// `Im(t₁ · conj(t₂))`; nonzero exactly when the framing invariant holds.
    pub fn framing_area(&self) -> f64 {
        (self.t1 * self.t2.conj()).im
    }

    /// Period ratio `τ = t₁ / t₂`.
    pub fn tau(&self) -> Complex64 {
        self.t1 / self.t2
    }
}

/// Point of the product of the framed-lattice space with `ℂᵈ`.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveTuple {
    pub lattice: FramedLattice,
    pub y: Vec<Complex64>,
}

/// Point `(t₁, t₂, y, x₁, x₂)` constrained to the incidence locus
/// `t₁x₁ + t₂x₂ = −φ(y)`; the constraint is checked where it is consumed,
/// not stored.
#[derive(Clone, Debug, PartialEq)]
pub struct LocusPoint {
    pub lattice: FramedLattice,
    pub y: Vec<Complex64>,
    pub x1: Complex64,
    pub x2: Complex64,
}

/// Descended coordinates `(τ, z, u)` with `Im τ ≠ 0` and `u ≠ 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct DescendedPoint {
    pub tau: Complex64,
    pub z: Vec<Complex64>,
    pub u: Complex64,
}

/// Either generator of the descended action: a translation by
/// `m ∈ Hom(Z², Zᵈ)` (rows `m₁`, `m₂`) or an automorphism `A ∈ GL₂(Z)`.
#[derive(Clone, Debug)]
pub enum DescentElement {
    Translate(IntMatrix),
    Aut(IntMatrix),
}

/// `A ∝ (t₁, t₂) = (a t₁ + b t₂, c t₁ + d t₂)` for `A ∈ GL₂(Z)`.
pub fn act_gl2(a: &IntMatrix, lat: &FramedLattice) -> Result<FramedLattice> {
    check_gl2(a)?;
    let [aa, bb, cc, dd] = entries2x2(a);
    FramedLattice::new(aa * lat.t1 + bb * lat.t2, cc * lat.t1 + dd * lat.t2)
}

/// Homothety scaling of every complex component by `λ ≠ 0`.
pub trait ScaleAction: Sized {
    fn scaled(&self, lambda: Complex64) -> Self;
}

impl ScaleAction for FramedLattice {
    fn scaled(&self, lambda: Complex64) -> Self {
        FramedLattice { t1: lambda * self.t1, t2: lambda * self.t2 }
    }
}

impl ScaleAction for CurveTuple {
    fn scaled(&self, lambda: Complex64) -> Self {
        CurveTuple {
            lattice: self.lattice.scaled(lambda),
            y: self.y.iter().map(|z| lambda * z).collect(),
        }
    }
}

/// `λ ∝ obj`, scaling `t` (and `y` where present); rejects `λ = 0`.
pub fn act_scale<T: ScaleAction>(lambda: Complex64, obj: &T) -> Result<T> {
    if lambda.norm() == 0.0 {
        return Err(Error::Invalid("homothety factor must be nonzero".into()));
    }
    Ok(obj.scaled(lambda))
}

/// `y ↦ y + m₁t₁ + m₂t₂` coordinatewise; `m` is `2 x d` with rows `m₁`, `m₂`.
pub fn act_translate(m: &IntMatrix, p: &CurveTuple) -> Result<CurveTuple> {
    let d = p.y.len();
    if m.rows() != 2 || m.cols() != d {
        return Err(Error::dim(
            "act_translate (m shape)",
            format!("2x{d}"),
            format!("{}x{}", m.rows(), m.cols()),
        ));
    }
    let y = (0..d)
        .map(|j| p.y[j] + m.get_f64(0, j) * p.lattice.t1 + m.get_f64(1, j) * p.lattice.t2)
        .collect();
    Ok(CurveTuple { lattice: p.lattice, y })
}

/// Möbius action `A·τ = (aτ + b)/(cτ + d)`.
pub fn mobius(a: &IntMatrix, tau: Complex64) -> Result<Complex64> {
    check_gl2(a)?;
    let [aa, bb, cc, dd] = entries2x2(a);
    let den = cc * tau + dd;
    if den.norm() == 0.0 {
        return Err(Error::Singular { context: "mobius (cτ+d = 0)" });
    }
    Ok((aa * tau + bb) / den)
}

/// Reduce `τ` (with `Im τ ≠ 0`) into the fundamental domain
/// `Im > 0`, `Re ∈ [−1/2, 1/2)`, `|τ| ≥ 1` with the boundary tie `Re ≤ 0`,
/// returning `(τ_reduced, A)` with `A·τ = τ_reduced`.
pub fn reduce_tau(tau: Complex64) -> Result<(Complex64, IntMatrix)> {
    if tau.im == 0.0 {
        return Err(Error::Invalid(format!("τ must not be real, got {tau}")));
    }
    let mut a = IntMatrix::identity(2);
    let mut t = tau;
    if t.im < 0.0 {
        // det −1 flip: τ ↦ τ / (−1) = −τ maps the lower half plane up
        let flip = IntMatrix::from_rows(&[&[1, 0], &[0, -1]]);
        t = mobius(&flip, t)?;
        a = flip.mul(&a)?;
    }
    for _ in 0..10_000 {
        // shift Re into [−1/2, 1/2)
        let k = (t.re + 0.5).floor();
        if k != 0.0 {
            let shift = IntMatrix::from_rows(&[&[1, -(k as i64)], &[0, 1]]);
            t = Complex64::new(t.re - k, t.im);
            a = shift.mul(&a)?;
        }
        if t.norm_sqr() < 1.0 {
            let s = IntMatrix::from_rows(&[&[0, -1], &[1, 0]]);
            t = mobius(&s, t)?;
            a = s.mul(&a)?;
            continue;
        }
        break;
    }
    // boundary tie: |τ| = 1 and Re > 0 maps to Re < 0 under S
    if (t.norm_sqr() - 1.0).abs() < 1e-15 && t.re > 0.0 {
        let s = IntMatrix::from_rows(&[&[0, -1], &[1, 0]]);
        t = mobius(&s, t)?;
        a = s.mul(&a)?;
        // S also re-enters Re = 1/2 territory only at the corner; renormalize Re
        let k = (t.re + 0.5).floor();
        if k != 0.0 {
            let shift = IntMatrix::from_rows(&[&[1, -(k as i64)], &[0, 1]]);
            t = Complex64::new(t.re - k, t.im);
            a = shift.mul(&a)?;
        }
    }
    Ok((t, a))
}

/// Homothety-and-`GL₂(Z)` comparison of two framed lattices: `Some((A, λ))`
/// with `λ·(A ∝ lat) = lat'` within `tol` when the reduced period ratios
/// agree within `tol`, else `None`.
pub fn curves_isomorphic(
    lat: &FramedLattice,
    latp: &FramedLattice,
    tol: f64,
) -> Result<Option<(IntMatrix, Complex64)>> {
    let (r1, a1) = reduce_tau(lat.tau())?;
    let (r2, a2) = reduce_tau(latp.tau())?;
    if (r1 - r2).norm() > tol {
        return Ok(None);
    }
    // a2⁻¹ · a1 carries lat's frame to one with latp's period ratio.
    let a_iso = a2.inverse_unimodular()?.mul(&a1)?;
    let moved = act_gl2(&a_iso, lat)?;
    let lambda = latp.t2 / moved.t2;
    let check1 = lambda * moved.t1 - latp.t1;
    let scale = latp.t1.norm().max(latp.t2.norm()).max(1.0);
    if check1.norm() > tol * scale * 10.0 {
        return Ok(None);
    }
    Ok(Some((a_iso, lambda)))
}

/// Descend a locus point to `(τ, z, u) = (t₁/t₂, y/t₂, e^{2πi(x₁/t₂)})`,
/// after verifying `t₁x₁ + t₂x₂ = −φ(y)` within `tol` (relative).
pub fn descend(q: &QuadraticForm, p: &LocusPoint, tol: f64) -> Result<DescendedPoint> {
    if p.y.len() != q.d() {
        return Err(Error::dim("descend (y length)", q.d(), p.y.len()));
    }
    let phi = q.phi_complex(&p.y)?;
    let lhs = p.lattice.t1 * p.x1 + p.lattice.t2 * p.x2;
    let residual = (lhs + phi).norm();
    let scale = lhs.norm().max(phi.norm()).max(1.0);
    if residual > tol * scale {
        return Err(Error::Locus { residual, tol: tol * scale });
    }
    let t2 = p.lattice.t2;
    let tau = p.lattice.t1 / t2;
    let z = p.y.iter().map(|yi| yi / t2).collect();
    let u = (Complex64::new(0.0, TAU) * (p.x1 / t2)).exp();
    Ok(DescendedPoint { tau, z, u })
}

/// Action on descended coordinates:
///
/// - `m`: `(τ, z, u) ↦ (τ, z + m₁τ + m₂, u·e^{2πi[−β(z, m₁) − φ(m₁)τ]})`;
/// - `A`: `(τ, z, u) ↦ (Aτ, (cτ+d)⁻¹z, u^{1/det A}·e^{2πi(1/det A)[c(cτ+d)⁻¹φ(z)]})`
///   (requires `Im τ > 0` as stated).
pub fn descended_act(
    q: &QuadraticForm,
    element: &DescentElement,
    p: &DescendedPoint,
) -> Result<DescendedPoint> {
    if p.u.norm() == 0.0 {
        return Err(Error::Invalid("descended point has u = 0".into()));
    }
    if p.z.len() != q.d() {
        return Err(Error::dim("descended_act (z length)", q.d(), p.z.len()));
    }
    match element {
        DescentElement::Translate(m) => {
            let d = q.d();
            if m.rows() != 2 || m.cols() != d {
                return Err(Error::dim(
                    "descended_act (m shape)",
                    format!("2x{d}"),
                    format!("{}x{}", m.rows(), m.cols()),
                ));
            }
            let m1: Vec<Complex64> = (0..d)
                .map(|j| Complex64::new(m.get_f64(0, j), 0.0))
                .collect();
            let z_new: Vec<Complex64> = (0..d)
                .map(|j| p.z[j] + m1[j] * p.tau + m.get_f64(1, j))
                .collect();
            let beta = q.beta_complex(&p.z, &m1)?;
            let phi_m1 = q.phi_complex(&m1)?;
            let exponent = Complex64::new(0.0, TAU) * (-beta - phi_m1 * p.tau);
            Ok(DescendedPoint { tau: p.tau, z: z_new, u: p.u * exponent.exp() })
        }
        DescentElement::Aut(a) => {
            check_gl2(a)?;
            if p.tau.im <= 0.0 {
                return Err(Error::Invalid(format!(
                    "automorphism case needs Im τ > 0, got τ = {}",
                    p.tau
                )));
            }
            let [_, _, cc, dd] = entries2x2(a);
            let det = a.det()?.to_f64().expect("det fits f64");
            let den = cc * p.tau + dd;
            if den.norm() == 0.0 {
                return Err(Error::Singular { context: "descended_act (cτ+d = 0)" });
            }
            let tau_new = mobius(a, p.tau)?;
            let z_new: Vec<Complex64> = p.z.iter().map(|zi| zi / den).collect();
            let phi_z = q.phi_complex(&p.z)?;
            let exponent = Complex64::new(0.0, TAU) * (cc / den * phi_z) / det;
            let u_pow = if det > 0.0 { p.u } else { p.u.inv() };
            Ok(DescendedPoint { tau: tau_new, z: z_new, u: u_pow * exponent.exp() })
        }
    }
}

/// The same generators acting upstairs on locus points (the complex-coefficient
/// specialization of the integral homotopy action); preserves the locus.
pub fn act_locus(q: &QuadraticForm, element: &DescentElement, p: &LocusPoint) -> Result<LocusPoint> {
    if p.y.len() != q.d() {
        return Err(Error::dim("act_locus (y length)", q.d(), p.y.len()));
    }
    match element {
        DescentElement::Translate(m) => {
            let d = q.d();
            if m.rows() != 2 || m.cols() != d {
                return Err(Error::dim(
                    "act_locus (m shape)",
                    format!("2x{d}"),
                    format!("{}x{}", m.rows(), m.cols()),
                ));
            }
            let (t1, t2) = (p.lattice.t1, p.lattice.t2);
            let m1: Vec<Complex64> = (0..d)
                .map(|j| Complex64::new(m.get_f64(0, j), 0.0))
                .collect();
            let m2: Vec<Complex64> = (0..d)
                .map(|j| Complex64::new(m.get_f64(1, j), 0.0))
                .collect();
            let mt: Vec<Complex64> = (0..d).map(|j| m1[j] * t1 + m2[j] * t2).collect();
            let y_new: Vec<Complex64> = (0..d).map(|j| p.y[j] + mt[j]).collect();
            let x1 = p.x1 - q.beta_complex(&p.y, &m1)? - q.omega_complex(&mt, &m1)?;
            let x2 = p.x2 - q.beta_complex(&p.y, &m2)? - q.omega_complex(&mt, &m2)?;
            Ok(LocusPoint { lattice: p.lattice, y: y_new, x1, x2 })
        }
        DescentElement::Aut(a) => {
            check_gl2(a)?;
            let lattice = act_gl2(a, &p.lattice)?;
            let [aa, bb, cc, dd] = entries2x2(a);
            let det = a.det()?.to_f64().expect("det fits f64");
            // x ↦ x A⁻¹ for the row covector (x₁, x₂)
            let x1 = (dd * p.x1 - cc * p.x2) / det;
            let x2 = (-bb * p.x1 + aa * p.x2) / det;
            Ok(LocusPoint { lattice, y: p.y.clone(), x1, x2 })
        }
    }
}

/// `true` iff `A` lies in the isogeny stabilizer of `B`: `B⁻¹·A·B` is integral
/// with determinant `±1` (exact rational arithmetic).
#[allow(non_snake_case)]
pub fn gamma_B_member(b: &IntMatrix, a: &IntMatrix) -> Result<bool> {
    if !b.is_square() || b.rows() != 2 || !a.is_square() || a.rows() != 2 {
        return Err(Error::dim("gamma_B_member", "2x2 matrices", "other"));
    }
    let det_b = b.det()?;
    if det_b.is_zero() {
        return Err(Error::Singular { context: "gamma_B_member" });
    }
    if !a.is_unimodular()? {
        return Err(Error::NotUnimodular { det: a.det()?.to_string() });
    }
    let b_rat = b.to_rational();
    let conj = b_rat.inverse()?.mul(&a.to_rational())?.mul(&b_rat)?;
    if !conj.is_integral() {
        return Ok(false);
    }
    let det = conj.det()?;
    Ok(det.is_integer() && det.to_integer().abs() == BigInt::from(1))
}

/// Normal form `(M, N)` of an isogeny matrix: invariant factors `d₁ = M`,
/// `d₂ = M·N`, so the matrix is equivalent to `diag(M, M·N)`.
pub fn isogeny_normal_form(b: &IntMatrix) -> Result<(BigInt, BigInt)> {
    if !b.is_square() || b.rows() != 2 {
        return Err(Error::dim("isogeny_normal_form", "2x2 matrix", "other"));
    }
    if b.det()?.is_zero() {
        return Err(Error::Singular { context: "isogeny_normal_form" });
    }
    let factors = smith_normal_form(b).invariant_factors();
    let m = factors[0].clone();
    let n = &factors[1] / &factors[0];
    Ok((m, n))
}

/// Isogeny degree `|det B|`.
pub fn isogeny_degree(b: &IntMatrix) -> Result<BigInt> {
    if !b.is_square() || b.rows() != 2 {
        return Err(Error::dim("isogeny_degree", "2x2 matrix", "other"));
    }
    Ok(b.det()?.abs())
}

/// The sublattice frame `Bt = ((Bt)₁, (Bt)₂)`.
pub fn sublattice_frame(b: &IntMatrix, lat: &FramedLattice) -> Result<FramedLattice> {
    if !b.is_square() || b.rows() != 2 {
        return Err(Error::dim("sublattice_frame", "2x2 matrix", "other"));
    }
    if b.det()?.is_zero() {
        return Err(Error::Singular { context: "sublattice_frame" });
    }
    let [aa, bb, cc, dd] = entries2x2(b);
    // det ≠ 0 integral B keeps the frame spanning
    FramedLattice::new(aa * lat.t1 + bb * lat.t2, cc * lat.t1 + dd * lat.t2)
}

/// Write `y = α t₁ + β t₂` over ℝ and return `(α, β)`.
pub fn lattice_coordinates(lat: &FramedLattice, y: Complex64) -> (f64, f64) {
    let det = lat.t1.re * lat.t2.im - lat.t2.re * lat.t1.im;
    let alpha = (y.re * lat.t2.im - lat.t2.re * y.im) / det;
    let beta = (lat.t1.re * y.im - y.re * lat.t1.im) / det;
    (alpha, beta)
}

/// Representative of `y` modulo the lattice with coordinates in `[0, 1)`.
pub fn reduce_mod_lattice(lat: &FramedLattice, y: Complex64) -> Complex64 {
    let (alpha, beta) = lattice_coordinates(lat, y);
    let fa = alpha - alpha.floor();
    let fb = beta - beta.floor();
    fa * lat.t1 + fb * lat.t2
}

/// Distance from `y` to the nearest lattice point.
pub fn lattice_residual(lat: &FramedLattice, y: Complex64) -> f64 {
    let (alpha, beta) = lattice_coordinates(lat, y);
    ((alpha - alpha.round()) * lat.t1 + (beta - beta.round()) * lat.t2).norm()
}

/// The degree-`|det B|` isogeny `ℂ/⟨(Bt)₁, (Bt)₂⟩ → ℂ/⟨t₁, t₂⟩` evaluated at
/// `y`: the identity on ℂ with the output reduced modulo the target lattice.
pub fn isogeny_map(b: &IntMatrix, lat: &FramedLattice, y: Complex64) -> Result<Complex64> {
    let _ = sublattice_frame(b, lat)?; // validates B
    Ok(reduce_mod_lattice(lat, y))
}

/// Kernel representatives of the isogeny: the `|det B|` points of the target
/// lattice modulo the source lattice `⟨(Bt)₁, (Bt)₂⟩`, each reduced mod the
/// source lattice.
pub fn isogeny_kernel(b: &IntMatrix, lat: &FramedLattice) -> Result<Vec<Complex64>> {
    let source = sublattice_frame(b, lat)?;
    // The quotient ⟨t₁,t₂⟩ / ⟨(Bt)₁,(Bt)₂⟩ is Z²/BᵀZ²; with U·Bᵀ·V = D the
    // classes are represented by U⁻¹(i, j)ᵀ, 0 ≤ i < d₁, 0 ≤ j < d₂.
    let snf = smith_normal_form(&b.transpose());
    let factors = snf.invariant_factors();
    let d1 = factors[0].to_i64().expect("invariant factor fits i64");
    let d2 = factors[1].to_i64().expect("invariant factor fits i64");
    let u_inv = snf.u.inverse_unimodular()?;
    let mut points = Vec::with_capacity((d1 * d2) as usize);
    for i in 0..d1 {
        for j in 0..d2 {
            let w = u_inv
                .mul_vec(&[BigInt::from(i), BigInt::from(j)])
                .expect("2-vector");
            let w1 = w[0].to_f64().expect("fits f64");
            let w2 = w[1].to_f64().expect("fits f64");
            let point = w1 * lat.t1 + w2 * lat.t2;
            points.push(reduce_mod_lattice(&source, point));
        }
    }
    Ok(points)
}

fn check_gl2(a: &IntMatrix) -> Result<()> {
    if !a.is_square() || a.rows() != 2 {
        return Err(Error::dim(
            "2x2 automorphism",
            "2x2",
            format!("{}x{}", a.rows(), a.cols()),
        ));
    }
    if !a.is_unimodular()? {
        return Err(Error::NotUnimodular { det: a.det()?.to_string() });
    }
    Ok(())
}

fn entries2x2(a: &IntMatrix) -> [f64; 4] {
    [a.get_f64(0, 0), a.get_f64(0, 1), a.get_f64(1, 0), a.get_f64(1, 1)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol * a.norm().max(b.norm()).max(1.0)
    }

    fn a1() -> QuadraticForm {
        QuadraticForm::new(1, 1, vec![IntMatrix::from_rows(&[&[2]])], None).unwrap()
    }

    fn random_lattice(rng: &mut ChaCha8Rng) -> FramedLattice {
        loop {
            let t1 = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let t2 = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            if let Ok(lat) = FramedLattice::new(t1, t2) {
                if lat.framing_area().abs() > 0.1 {
                    return lat;
                }
            }
        }
    }

    fn random_gl2(rng: &mut ChaCha8Rng) -> IntMatrix {
        crate::suites::random_unimodular(rng, 2)
    }

    #[test]
    fn framing_invariant_rejects_degenerate() {
        assert!(FramedLattice::new(c(1.0, 0.0), c(2.0, 0.0)).is_err());
        assert!(FramedLattice::new(c(0.0, 1.0), c(1.0, 0.0)).is_ok());
    }

    #[test]
    fn gl2_action_worked_examples() {
        let lat = FramedLattice::new(c(0.0, 1.0), c(1.0, 0.0)).unwrap();
        let id = IntMatrix::identity(2);
        assert_eq!(act_gl2(&id, &lat).unwrap(), lat);
        let shear = IntMatrix::from_rows(&[&[1, 1], &[0, 1]]);
        let out = act_gl2(&shear, &lat).unwrap();
        assert!(close(out.t1, c(1.0, 1.0), 1e-15));
        assert!(close(out.t2, c(1.0, 0.0), 1e-15));
        let not_unimodular = IntMatrix::from_rows(&[&[2, 0], &[0, 1]]);
        assert!(act_gl2(&not_unimodular, &lat).is_err());
    }

    #[test]
    fn gl2_action_law_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..200 {
            let lat = random_lattice(&mut rng);
            let a = random_gl2(&mut rng);
            let b = random_gl2(&mut rng);
            let ab = a.mul(&b).unwrap();
            let stepwise = act_gl2(&a, &act_gl2(&b, &lat).unwrap()).unwrap();
            let direct = act_gl2(&ab, &lat).unwrap();
            assert!(close(stepwise.t1, direct.t1, LINEAR_TOL));
            assert!(close(stepwise.t2, direct.t2, LINEAR_TOL));
        }
    }

    #[test]
    fn scaling_worked_examples_and_composition() {
        let lat = FramedLattice::new(c(0.0, 1.0), c(1.0, 0.0)).unwrap();
        let one = act_scale(c(1.0, 0.0), &lat).unwrap();
        assert_eq!(one, lat);
        let out = act_scale(c(0.0, 2.0), &lat).unwrap();
        assert!(close(out.t1, c(-2.0, 0.0), 1e-15));
        assert!(close(out.t2, c(0.0, 2.0), 1e-15));
        assert!(act_scale(c(0.0, 0.0), &lat).is_err());

        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for _ in 0..100 {
            let lat = random_lattice(&mut rng);
            let l1 = c(rng.gen_range(0.2..2.0), rng.gen_range(-1.0..1.0));
            let l2 = c(rng.gen_range(0.2..2.0), rng.gen_range(-1.0..1.0));
            let stepwise = act_scale(l1, &act_scale(l2, &lat).unwrap()).unwrap();
            let direct = act_scale(l1 * l2, &lat).unwrap();
            assert!(close(stepwise.t1, direct.t1, LINEAR_TOL));
            assert!(close(stepwise.t2, direct.t2, LINEAR_TOL));
        }
    }

    #[test]
    fn translation_examples_and_additivity() {
        let lat = FramedLattice::new(c(0.0, 1.0), c(1.0, 0.0)).unwrap();
        let p = CurveTuple { lattice: lat, y: vec![c(0.0, 0.0)] };
        let zero = IntMatrix::zero(2, 1);
        assert_eq!(act_translate(&zero, &p).unwrap(), p);
        let m = IntMatrix::from_rows(&[&[1], &[0]]);
        let out = act_translate(&m, &p).unwrap();
        assert!(close(out.y[0], c(0.0, 1.0), 1e-15));

        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for _ in 0..100 {
            let lat = random_lattice(&mut rng);
            let d = rng.gen_range(1..=3);
            let p = CurveTuple {
                lattice: lat,
                y: (0..d)
                    .map(|_| c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)))
                    .collect(),
            };
            let mk = |rng: &mut ChaCha8Rng| {
                IntMatrix::new(
                    2,
                    d,
                    (0..2 * d)
                        .map(|_| BigInt::from(rng.gen_range(-5i64..=5)))
                        .collect(),
                )
                .unwrap()
            };
            let m1 = mk(&mut rng);
            let m2 = mk(&mut rng);
            let sum = m1.add(&m2).unwrap();
            let stepwise = act_translate(&m1, &act_translate(&m2, &p).unwrap()).unwrap();
            let direct = act_translate(&sum, &p).unwrap();
            for j in 0..d {
                assert!(close(stepwise.y[j], direct.y[j], LINEAR_TOL));
            }
        }
    }

    #[test]
    fn reduce_tau_worked_examples() {
        let (t, a) = reduce_tau(c(7.0, 1.0)).unwrap();
        assert!(close(t, c(0.0, 1.0), 1e-12));
        assert_eq!(a, IntMatrix::from_rows(&[&[1, -7], &[0, 1]]));

        let (t, a) = reduce_tau(c(0.0, 0.5)).unwrap();
        assert!(close(t, c(0.0, 2.0), 1e-12));
        assert_eq!(a, IntMatrix::from_rows(&[&[0, -1], &[1, 0]]));

        let (t, a) = reduce_tau(c(0.0, 2.0)).unwrap();
        assert!(close(t, c(0.0, 2.0), 1e-12));
        assert_eq!(a, IntMatrix::identity(2));

        assert!(reduce_tau(c(3.0, 0.0)).is_err());
    }

    #[test]
    fn reduce_tau_domain_and_consistency() {
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        for _ in 0..400 {
            let tau = c(rng.gen_range(-8.0..8.0), rng.gen_range(-4.0..4.0));
            if tau.im.abs() < 0.05 {
                continue;
            }
            let (t, a) = reduce_tau(tau).unwrap();
            assert!(t.im > 0.0, "Im must be positive, got {t}");
            assert!((-0.5..0.5).contains(&t.re), "Re out of range: {t}");
            assert!(t.norm_sqr() >= 1.0 - 1e-12, "|τ| < 1: {t}");
            if (t.norm_sqr() - 1.0).abs() < 1e-12 {
                assert!(t.re <= 1e-12, "boundary tie must fall on Re ≤ 0: {t}");
            }
            // A·τ = τ_reduced (mobius handles the det −1 flip transparently)
            let moved = mobius(&a, tau).unwrap();
            assert!(close(moved, t, 1e-9), "A·τ = {moved} but reduced = {t}");
            // idempotent
            let (t2, a2) = reduce_tau(t).unwrap();
            assert!(close(t2, t, 1e-12));
            assert_eq!(a2, IntMatrix::identity(2));
        }
    }

    #[test]
    fn isomorphy_worked_examples() {
        let lat = FramedLattice::new(c(0.0, 1.0), c(1.0, 0.0)).unwrap();
        let (a, lambda) = curves_isomorphic(&lat, &lat, 1e-9).unwrap().unwrap();
        assert_eq!(a, IntMatrix::identity(2));
        assert!(close(lambda, c(1.0, 0.0), 1e-12));

        let doubled = FramedLattice::new(c(0.0, 2.0), c(2.0, 0.0)).unwrap();
        let (a, lambda) = curves_isomorphic(&lat, &doubled, 1e-9).unwrap().unwrap();
        assert_eq!(a, IntMatrix::identity(2));
        assert!(close(lambda, c(2.0, 0.0), 1e-12));

        let sheared = FramedLattice::new(c(1.0, 1.0), c(1.0, 0.0)).unwrap();
        let (a, lambda) = curves_isomorphic(&lat, &sheared, 1e-9).unwrap().unwrap();
        assert_eq!(a, IntMatrix::from_rows(&[&[1, 1], &[0, 1]]));
        assert!(close(lambda, c(1.0, 0.0), 1e-12));

        let stretched = FramedLattice::new(c(0.0, 2.0), c(1.0, 0.0)).unwrap();
        assert!(curves_isomorphic(&lat, &stretched, 1e-9).unwrap().is_none());
    }

    #[test]
    fn isomorphy_random_roundtrip() {
        // λ·(A ∝ lat) must literally reproduce lat' when built that way
        let mut rng = ChaCha8Rng::seed_from_u64(35);
        for _ in 0..100 {
            let lat = random_lattice(&mut rng);
            let a = random_gl2(&mut rng);
            let lambda = c(rng.gen_range(0.3..2.0), rng.gen_range(-1.0..1.0));
            let latp = act_scale(lambda, &act_gl2(&a, &lat).unwrap()).unwrap();
            let (a_found, l_found) = curves_isomorphic(&lat, &latp, 1e-7)
                .unwrap()
                .expect("isomorphic by construction");
            let rebuilt = act_scale(l_found, &act_gl2(&a_found, &lat).unwrap()).unwrap();
            assert!(close(rebuilt.t1, latp.t1, 1e-6), "{:?} vs {latp:?}", rebuilt);
            assert!(close(rebuilt.t2, latp.t2, 1e-6));
        }
    }

    #[test]
    fn descend_worked_examples() {
        let q = a1();
        let lat = FramedLattice::new(c(0.0, 1.0), c(1.0, 0.0)).unwrap();
        let p = LocusPoint { lattice: lat, y: vec![c(0.0, 0.0)], x1: c(0.0, 0.0), x2: c(0.0, 0.0) };
        let out = descend(&q, &p, DESCENT_TOL).unwrap();
        assert!(close(out.tau, c(0.0, 1.0), 1e-12));
        assert!(close(out.z[0], c(0.0, 0.0), 1e-12));
        assert!(close(out.u, c(1.0, 0.0), 1e-12));

        // locus violation: t₁x₁ + t₂x₂ = i ≠ 0 = −φ(0)
        let bad = LocusPoint { lattice: lat, y: vec![c(0.0, 0.0)], x1: c(1.0, 0.0), x2: c(0.0, 0.0) };
        assert!(matches!(descend(&q, &bad, DESCENT_TOL), Err(Error::Locus { .. })));

        // homothety-scaled input descends to the same coordinates
        let lat2 = FramedLattice::new(c(0.0, 2.0), c(2.0, 0.0)).unwrap();
        let p2 = LocusPoint { lattice: lat2, y: vec![c(0.0, 0.0)], x1: c(0.0, 0.0), x2: c(0.0, 0.0) };
        let out2 = descend(&q, &p2, DESCENT_TOL).unwrap();
        assert!(close(out2.tau, c(0.0, 1.0), 1e-12));
        assert!(close(out2.u, c(1.0, 0.0), 1e-12));
    }

    #[test]
    fn descended_translate_worked_example() {
        // d=1, c=[[2]], m=(1,0) on (i, 0, 1): z' = i, u' = e^{2πi(−1·i)} = e^{2π}
        let q = a1();
        let p = DescendedPoint { tau: c(0.0, 1.0), z: vec![c(0.0, 0.0)], u: c(1.0, 0.0) };
        let m = IntMatrix::from_rows(&[&[1], &[0]]);
        let out = descended_act(&q, &DescentElement::Translate(m), &p).unwrap();
        assert!(close(out.tau, c(0.0, 1.0), 1e-12));
        assert!(close(out.z[0], c(0.0, 1.0), 1e-12));
        assert!(close(out.u, c((2.0 * std::f64::consts::PI).exp(), 0.0), 1e-10));

        let zero = IntMatrix::zero(2, 1);
        let same = descended_act(&q, &DescentElement::Translate(zero), &p).unwrap();
        assert!(close(same.u, p.u, 1e-15));

        let shear = IntMatrix::from_rows(&[&[1, 1], &[0, 1]]);
        let out = descended_act(&q, &DescentElement::Aut(shear), &p).unwrap();
        assert!(close(out.tau, c(1.0, 1.0), 1e-12));
        assert!(close(out.u, p.u, 1e-12));
    }

    fn random_locus_point(
        rng: &mut ChaCha8Rng,
        q: &QuadraticForm,
    ) -> LocusPoint {
        // build a lattice with Im τ > 0, then solve x₂ from the locus
        let lat = loop {
            let lat = random_lattice(rng);
            if lat.tau().im > 0.2 {
                break lat;
            }
        };
        let y: Vec<Complex64> = (0..q.d())
            .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let x1 = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let phi = q.phi_complex(&y).unwrap();
        let x2 = (-phi - lat.t1 * x1) / lat.t2;
        LocusPoint { lattice: lat, y, x1, x2 }
    }

    #[test]
    fn locus_action_preserves_locus() {
        let mut rng = ChaCha8Rng::seed_from_u64(36);
        let q = crate::suites::random_form(&mut rng, 2, 1);
        for _ in 0..100 {
            let p = random_locus_point(&mut rng, &q);
            let m = IntMatrix::new(
                2,
                2,
                (0..4).map(|_| BigInt::from(rng.gen_range(-3i64..=3))).collect(),
            )
            .unwrap();
            let el = if rng.gen_bool(0.5) {
                DescentElement::Translate(m)
            } else {
                DescentElement::Aut(random_gl2(&mut rng))
            };
            let out = act_locus(&q, &el, &p).unwrap();
            let lhs = out.lattice.t1 * out.x1 + out.lattice.t2 * out.x2;
            let phi = q.phi_complex(&out.y).unwrap();
            assert!(
                (lhs + phi).norm() <= 1e-9 * lhs.norm().max(phi.norm()).max(1.0),
                "locus broken: {} vs {}",
                lhs,
                -phi
            );
        }
    }

    #[test]
    fn descent_commuting_square() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        for d in [1usize, 2] {
            let q = crate::suites::random_form(&mut rng, d, 1);
            for _ in 0..60 {
                let p = random_locus_point(&mut rng, &q);
                let m = IntMatrix::new(
                    2,
                    d,
                    (0..2 * d)
                        .map(|_| BigInt::from(rng.gen_range(-2i64..=2)))
                        .collect(),
                )
                .unwrap();
                let el = if rng.gen_bool(0.5) {
                    DescentElement::Translate(m)
                } else {
                    // SL₂ only: keep Im τ > 0 upstairs and downstairs
                    let a = loop {
                        let a = random_gl2(&mut rng);
                        use num::One;
                        if a.det().unwrap().is_one() {
                            break a;
                        }
                    };
                    DescentElement::Aut(a)
                };
                let down_then_act =
                    descended_act(&q, &el, &descend(&q, &p, DESCENT_TOL).unwrap()).unwrap();
                let act_then_down =
                    descend(&q, &act_locus(&q, &el, &p).unwrap(), DESCENT_TOL).unwrap();
                assert!(
                    close(down_then_act.tau, act_then_down.tau, DESCENT_TOL),
                    "τ mismatch"
                );
                for j in 0..d {
                    assert!(
                        close(down_then_act.z[j], act_then_down.z[j], DESCENT_TOL),
                        "z mismatch"
                    );
                }
                assert!(
                    close(down_then_act.u, act_then_down.u, 1e-7),
                    "u mismatch: {} vs {}",
                    down_then_act.u,
                    act_then_down.u
                );
            }
        }
    }

    #[test]
    fn gamma_membership_worked_examples() {
        let b = IntMatrix::from_rows(&[&[1, 0], &[0, 2]]);
        assert!(gamma_B_member(&b, &IntMatrix::from_rows(&[&[1, 0], &[2, 1]])).unwrap());
        assert!(!gamma_B_member(&b, &IntMatrix::from_rows(&[&[1, 0], &[1, 1]])).unwrap());
        assert!(gamma_B_member(&b, &IntMatrix::identity(2)).unwrap());
        assert!(gamma_B_member(&IntMatrix::zero(2, 2), &IntMatrix::identity(2)).is_err());
        assert!(gamma_B_member(&b, &IntMatrix::from_rows(&[&[2, 0], &[0, 1]])).is_err());
    }

    #[test]
    fn gamma_membership_matches_congruence() {
        let mut rng = ChaCha8Rng::seed_from_u64(38);
        for n in [2i64, 3, 5] {
            let b = IntMatrix::from_rows(&[&[1, 0], &[0, n]]);
            for _ in 0..50 {
                let a = random_gl2(&mut rng);
                let member = gamma_B_member(&b, &a).unwrap();
                let c_entry = a.get_i64(1, 0);
                assert_eq!(
                    member,
                    c_entry.rem_euclid(n) == 0,
                    "B=diag(1,{n}), A={a:?}"
                );
            }
        }
    }

    #[test]
    fn isogeny_normal_form_and_degree() {
        let b = IntMatrix::from_rows(&[&[2, 0], &[0, 6]]);
        let (m, n) = isogeny_normal_form(&b).unwrap();
        assert_eq!((m, n), (BigInt::from(2), BigInt::from(3)));
        let b = IntMatrix::from_rows(&[&[2, 1], &[0, 3]]);
        let (m, n) = isogeny_normal_form(&b).unwrap();
        assert_eq!((m, n), (BigInt::from(1), BigInt::from(6)));
        assert_eq!(isogeny_degree(&b).unwrap(), BigInt::from(6));
        let id = IntMatrix::identity(2);
        assert_eq!(isogeny_normal_form(&id).unwrap(), (BigInt::from(1), BigInt::from(1)));
        assert_eq!(isogeny_degree(&IntMatrix::from_rows(&[&[1, 0], &[0, 2]])).unwrap(), BigInt::from(2));
    }

    #[test]
    fn isogeny_kernel_worked_example() {
        // B = diag(1,2), lat = (i, 1): source lattice ⟨i, 2⟩, kernel {0, 1}
        let b = IntMatrix::from_rows(&[&[1, 0], &[0, 2]]);
        let lat = FramedLattice::new(c(0.0, 1.0), c(1.0, 0.0)).unwrap();
        let kernel = isogeny_kernel(&b, &lat).unwrap();
        assert_eq!(kernel.len(), 2);
        let source = sublattice_frame(&b, &lat).unwrap();
        let has = |target: Complex64| {
            kernel
                .iter()
                .any(|&k| lattice_residual(&source, k - target) < 1e-9)
        };
        assert!(has(c(0.0, 0.0)));
        assert!(has(c(1.0, 0.0)));
    }

    #[test]
    fn isogeny_kernel_sizes_and_membership() {
        let mut rng = ChaCha8Rng::seed_from_u64(39);
        let lat = FramedLattice::new(c(0.3, 1.1), c(1.0, -0.2)).unwrap();
        let mut seen = 0;
        while seen < 50 {
            let b = IntMatrix::new(
                2,
                2,
                (0..4).map(|_| BigInt::from(rng.gen_range(-4i64..=4))).collect(),
            )
            .unwrap();
            let det = b.det().unwrap();
            if det.is_zero() || det.abs() > BigInt::from(12) {
                continue;
            }
            seen += 1;
            let kernel = isogeny_kernel(&b, &lat).unwrap();
            let expect = isogeny_degree(&b).unwrap().to_usize().unwrap();
            assert_eq!(kernel.len(), expect, "B = {b:?}");
            let source = sublattice_frame(&b, &lat).unwrap();
            // pairwise distinct modulo the source lattice
            for i in 0..kernel.len() {
                for j in i + 1..kernel.len() {
                    assert!(
                        lattice_residual(&source, kernel[i] - kernel[j]) > 1e-6,
                        "kernel points {i} and {j} collide for B = {b:?}"
                    );
                }
            }
            // each maps to 0 in the target curve
            for &k in &kernel {
                assert!(lattice_residual(&lat, k) < 1e-8, "not in target lattice");
                let image = isogeny_map(&b, &lat, k).unwrap();
                assert!(lattice_residual(&lat, image) < 1e-8);
            }
        }
    }

    #[test]
    fn isogeny_map_well_defined_mod_source() {
        let b = IntMatrix::from_rows(&[&[2, 1], &[0, 3]]);
        let lat = FramedLattice::new(c(0.2, 1.3), c(1.0, 0.0)).unwrap();
        let source = sublattice_frame(&b, &lat).unwrap();
        let y = c(0.37, -0.81);
        let image = isogeny_map(&b, &lat, y).unwrap();
        for shift in [source.t1, source.t2, source.t1 + source.t2] {
            let image2 = isogeny_map(&b, &lat, y + shift).unwrap();
            assert!(
                lattice_residual(&lat, image - image2) < 1e-9,
                "shift by a source period changed the image"
            );
        }
        assert!(close(isogeny_map(&b, &lat, c(0.0, 0.0)).unwrap(), c(0.0, 0.0), 1e-12));
    }
}
