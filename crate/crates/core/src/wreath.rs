//! The twisted product group `E` on `Hom(L,B) × Hom(Λ²L,C)`, its extension to
//! `Aut(L) ⋉ E`, and the exact action of that group on framed homotopy data.

use crate::error::{Error, Result};
use crate::intlat::{contract, AltForm, IntMatrix};
use crate::qform::QuadraticForm;
use num::BigInt;

/// Element `(m, n)` of the central extension: `m ∈ Hom(L, B)` as a `d x r`
/// integer matrix (columns are images of lattice basis vectors), `n` an
/// alternating form on `Λ²L` valued in `C`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExtElement {
    pub m: IntMatrix,
    pub n: AltForm,
}

impl ExtElement {
    pub fn new(q: &QuadraticForm, m: IntMatrix, n: AltForm) -> Result<Self> {
        if m.rows() != q.d() {
            return Err(Error::dim("ExtElement (m rows)", q.d(), m.rows()));
        }
        if n.rank() != m.cols() {
            return Err(Error::dim("ExtElement (lattice rank)", m.cols(), n.rank()));
        }
        if n.target_rank() != q.e() {
            return Err(Error::dim("ExtElement (target rank)", q.e(), n.target_rank()));
        }
        Ok(ExtElement { m, n })
    }

    /// Lattice rank `r` this element acts on.
    pub fn rank(&self) -> usize {
        self.m.cols()
    }
}

/// Element `(A, (m, n))` of `Aut(L) ⋉ E`; acts on points as "first `(m, n)`,
/// then `A`".
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WreathElement {
    pub a: IntMatrix,
    pub ext: ExtElement,
}

impl WreathElement {
    pub fn new(q: &QuadraticForm, a: IntMatrix, ext: ExtElement) -> Result<Self> {
        if !a.is_square() || a.rows() != ext.rank() {
            return Err(Error::dim(
                "WreathElement (A shape)",
                format!("{0}x{0}", ext.rank()),
                format!("{}x{}", a.rows(), a.cols()),
            ));
        }
        if !a.is_unimodular()? {
            return Err(Error::NotUnimodular { det: a.det()?.to_string() });
        }
        let _ = q;
        Ok(WreathElement { a, ext })
    }

    pub fn rank(&self) -> usize {
        self.ext.rank()
    }
}

/// Point `(t, y, x)` of the second homotopy datum: `t` in the lattice `L`
/// (length `r`), `y ∈ B` (length `d`), `x ∈ Hom(L, C)` as an `e x r` matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Pi2Element {
    pub t: Vec<BigInt>,
    pub y: Vec<BigInt>,
    pub x: IntMatrix,
}

impl Pi2Element {
    pub fn new(q: &QuadraticForm, t: Vec<BigInt>, y: Vec<BigInt>, x: IntMatrix) -> Result<Self> {
        if y.len() != q.d() {
            return Err(Error::dim("Pi2Element (y length)", q.d(), y.len()));
        }
        if x.rows() != q.e() {
            return Err(Error::dim("Pi2Element (x rows)", q.e(), x.rows()));
        }
        if x.cols() != t.len() {
            return Err(Error::dim("Pi2Element (x cols)", t.len(), x.cols()));
        }
        Ok(Pi2Element { t, y, x })
    }

    pub fn rank(&self) -> usize {
        self.t.len()
    }
}

/// Point of the third homotopy datum (`≈ C`); the whole group acts trivially.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Pi3Element {
    pub w: Vec<BigInt>,
}

/// Identity of `E` at lattice rank `r`.
pub fn ext_identity(q: &QuadraticForm, r: usize) -> ExtElement {
    ExtElement {
        m: IntMatrix::zero(q.d(), r),
        n: AltForm::zero(r, q.e()),
    }
}

/// Group law of the central extension:
/// `(m, n) · (m', n') = (m + m', ω(m⊗m') + n + n')`.
pub fn ext_mul(q: &QuadraticForm, g: &ExtElement, gp: &ExtElement) -> Result<ExtElement> {
    if g.rank() != gp.rank() {
        return Err(Error::dim("ext_mul (rank)", g.rank(), gp.rank()));
    }
    let twist = q.omega_wedge(&g.m, &gp.m)?;
    Ok(ExtElement {
        m: g.m.add(&gp.m)?,
        n: twist.add(&g.n)?.add(&gp.n)?,
    })
}

/// Inverse in the central extension: `(m, n)⁻¹ = (−m, ω(m⊗m) − n)`.
pub fn ext_inv(q: &QuadraticForm, g: &ExtElement) -> Result<ExtElement> {
    let self_twist = q.omega_wedge(&g.m, &g.m)?;
    Ok(ExtElement {
        m: g.m.neg(),
        n: self_twist.sub(&g.n)?,
    })
}

/// Action of `A ∈ Aut(L)` on `E` by group automorphisms:
/// `A ∝ (m, n) = (m A⁻¹, n ∘ Λ²(A⁻¹))`.
pub fn aut_on_ext(q: &QuadraticForm, a: &IntMatrix, g: &ExtElement) -> Result<ExtElement> {
    let a_inv = a.inverse_unimodular()?;
    let m = g.m.mul(&a_inv)?;
    let n = g.n.compose_lambda2(&a_inv)?;
    ExtElement::new(q, m, n)
}

/// Wreath identity at lattice rank `r`.
pub fn wreath_identity(q: &QuadraticForm, r: usize) -> WreathElement {
    WreathElement {
        a: IntMatrix::identity(r),
        ext: ext_identity(q, r),
    }
}

/// Semidirect-product law `(A, g) · (A', g') = (A A', (A'⁻¹ ∝ g) g')`,
/// matching the convention that `(A, g)` acts as "first `g`, then `A`".
pub fn wreath_mul(q: &QuadraticForm, w: &WreathElement, wp: &WreathElement) -> Result<WreathElement> {
    if w.rank() != wp.rank() {
        return Err(Error::dim("wreath_mul (rank)", w.rank(), wp.rank()));
    }
    let a = w.a.mul(&wp.a)?;
    let ap_inv = wp.a.inverse_unimodular()?;
    let transported = aut_on_ext(q, &ap_inv, &w.ext)?;
    let ext = ext_mul(q, &transported, &wp.ext)?;
    Ok(WreathElement { a, ext })
}

/// Inverse for the semidirect law: `(A, g)⁻¹ = (A⁻¹, A ∝ g⁻¹)`.
pub fn wreath_inv(q: &QuadraticForm, w: &WreathElement) -> Result<WreathElement> {
    let a_inv = w.a.inverse_unimodular()?;
    let ext = aut_on_ext(q, &w.a, &ext_inv(q, &w.ext)?)?;
    Ok(WreathElement { a: a_inv, ext })
}

/// Action of `(m, n)` alone on a point:
/// `(t, y, x) ↦ (t, y + mt, x − β(y, m) − ω(mt, m) + n∇t)`,
/// where `β(y, m)` and `ω(mt, m)` are the homomorphisms `L → C` with `j`-th
/// column `β(y, m e_j)` resp. `ω(mt, m e_j)`, and `n∇t` is the contraction.
fn ext_on_pi2(q: &QuadraticForm, g: &ExtElement, p: &Pi2Element) -> Result<Pi2Element> {
    if g.rank() != p.rank() {
        return Err(Error::dim("act_pi2 (rank)", g.rank(), p.rank()));
    }
    let r = p.rank();
    let mt = g.m.mul_vec(&p.t)?;
    let y_new: Vec<BigInt> = p.y.iter().zip(&mt).map(|(a, b)| a + b).collect();

    let col = |mat: &IntMatrix, j: usize| -> Vec<BigInt> {
        (0..mat.rows()).map(|i| mat.get(i, j).clone()).collect()
    };
    let mut correction = IntMatrix::zero(q.e(), r);
    for j in 0..r {
        let mj = col(&g.m, j);
        let beta = q.beta_int(&p.y, &mj)?;
        let omega = q.omega_int(&mt, &mj)?;
        for k in 0..q.e() {
            correction.set(k, j, &beta[k] + &omega[k]);
        }
    }
    let nabla = contract(&g.n, &p.t)?;
    let x_new = p.x.sub(&correction)?.add(&nabla)?;
    Ok(Pi2Element { t: p.t.clone(), y: y_new, x: x_new })
}

/// Full wreath action on a point: first the `(m, n)` part, then
/// `A ∝ (t, y, x) = (At, y, x A⁻¹)`.
pub fn act_pi2(q: &QuadraticForm, w: &WreathElement, p: &Pi2Element) -> Result<Pi2Element> {
    let mid = ext_on_pi2(q, &w.ext, p)?;
    let a_inv = w.a.inverse_unimodular()?;
    Ok(Pi2Element {
        t: w.a.mul_vec(&mid.t)?,
        y: mid.y,
        x: mid.x.mul(&a_inv)?,
    })
}

/// The whole group fixes the third homotopy datum.
pub fn act_pi3(_w: &WreathElement, v: &Pi3Element) -> Pi3Element {
    v.clone()
}

/// The invariant quadratic map `φ♯(t, y, x) = φ(y) + x·t`, one value per
/// target component; constant on every orbit of the wreath action.
pub fn quad_invariant_sharp(q: &QuadraticForm, p: &Pi2Element) -> Result<Vec<BigInt>> {
    if p.y.len() != q.d() {
        return Err(Error::dim("quad_invariant_sharp (y length)", q.d(), p.y.len()));
    }
    let phi = q.phi_int(&p.y)?;
    let xt = p.x.mul_vec(&p.t)?;
    Ok(phi.into_iter().zip(xt).map(|(a, b)| a + b).collect())
}

/// Rank-2 specialization of the action, evaluated through the explicit
/// coordinate formulas (requires `r = 2`, `e = 1`):
///
/// - `(m, n)`: `y ↦ y + m₁t₁ + m₂t₂`,
///   `x₁ ↦ x₁ − β(y, m₁) − ω(m₁t₁ + m₂t₂, m₁) − n t₂`,
///   `x₂ ↦ x₂ − β(y, m₂) − ω(m₁t₁ + m₂t₂, m₂) + n t₁`;
/// - `A = [[a, b], [c, d]]`: `t ↦ At`,
///   `x₁ ↦ (d x₁ − c x₂)/det A`, `x₂ ↦ (−b x₁ + a x₂)/det A`.
///
/// Must agree with `act_pi2` on the nose; kept separate as an independent
/// implementation of the same action.
pub fn specialize_rank2(q: &QuadraticForm, w: &WreathElement, p: &Pi2Element) -> Result<Pi2Element> {
    if w.rank() != 2 || p.rank() != 2 {
        return Err(Error::dim("specialize_rank2 (rank)", 2usize, w.rank().max(p.rank())));
    }
    if q.e() != 1 {
        return Err(Error::dim("specialize_rank2 (target rank)", 1usize, q.e()));
    }
    let d = q.d();
    let m1: Vec<BigInt> = (0..d).map(|i| w.ext.m.get(i, 0).clone()).collect();
    let m2: Vec<BigInt> = (0..d).map(|i| w.ext.m.get(i, 1).clone()).collect();
    let n0 = w.ext.n.basis_value(0, 1)[0].clone();
    let (t1, t2) = (p.t[0].clone(), p.t[1].clone());
    let (x1, x2) = (p.x.get(0, 0).clone(), p.x.get(0, 1).clone());

    // translation part
    let mt: Vec<BigInt> = m1
        .iter()
        .zip(&m2)
        .map(|(a, b)| a * &t1 + b * &t2)
        .collect();
    let y_mid: Vec<BigInt> = p.y.iter().zip(&mt).map(|(a, b)| a + b).collect();
    let x1_mid = &x1 - &q.beta_int(&p.y, &m1)?[0] - &q.omega_int(&mt, &m1)?[0] - &n0 * &t2;
    let x2_mid = &x2 - &q.beta_int(&p.y, &m2)?[0] - &q.omega_int(&mt, &m2)?[0] + &n0 * &t1;

    // automorphism part
    let (a, b) = (w.a.get(0, 0).clone(), w.a.get(0, 1).clone());
    let (c, dd) = (w.a.get(1, 0).clone(), w.a.get(1, 1).clone());
    let det = w.a.det()?;
    let t1_new = &a * &t1 + &b * &t2;
    let t2_new = &c * &t1 + &dd * &t2;
    let x1_new = (&dd * &x1_mid - &c * &x2_mid) / &det;
    let x2_new = (-&b * &x1_mid + &a * &x2_mid) / &det;

    let mut x = IntMatrix::zero(1, 2);
    x.set(0, 0, x1_new);
    x.set(0, 1, x2_new);
    Ok(Pi2Element { t: vec![t1_new, t2_new], y: y_mid, x })
}

/// Antisymmetrized commutator cocycle
/// `γ(m, m') − γ(m', m) = β(m₁, m₂') − β(m₂, m₁')` on rank 2: the value
/// depends only on the Hessian, never on the choice of bilinear extension.
pub fn commutator_cocycle(q: &QuadraticForm, m: &IntMatrix, mp: &IntMatrix) -> Result<AltForm> {
    q.omega_wedge(m, mp)?.sub(&q.omega_wedge(mp, m)?)
}

/// Commutator `g g' g⁻¹ g'⁻¹` in `E`; lands in the center (zero `m` part).
pub fn ext_commutator(q: &QuadraticForm, g: &ExtElement, gp: &ExtElement) -> Result<ExtElement> {
    let prod = ext_mul(q, g, gp)?;
    let prod = ext_mul(q, &prod, &ext_inv(q, g)?)?;
    ext_mul(q, &prod, &ext_inv(q, gp)?)
}
