//! Graded quotient presentations attached to a quadratic form, their Hilbert
//! functions, the pullback of the wreath action on generators, and the orbit
//! family of rank-one examples.

use crate::error::{Error, Result};
use crate::intlat::IntMatrix;
use crate::poly::{in_span, Poly};
use crate::qform::{quotient_dimensions, QuadraticForm};
use crate::wreath::{act_pi2, Pi2Element, WreathElement};
use num::{BigInt, BigRational, One, Zero};
use std::collections::HashSet;

/// Presentation of a graded ring: generators (all in cohomological degree 2,
/// tracked internally as polynomial degree 1) and homogeneous relations with
/// exact rational coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedPresentation {
    generators: Vec<(String, usize)>,
    relations: Vec<Poly>,
}

impl GradedPresentation {
    pub fn new(generators: Vec<(String, usize)>, relations: Vec<Poly>) -> Result<Self> {
        let mut seen = HashSet::new();
        for (name, _) in &generators {
            if !seen.insert(name.clone()) {
                return Err(Error::Invalid(format!("duplicate generator name {name}")));
            }
        }
        for rel in &relations {
            if rel.nvars() != generators.len() {
                return Err(Error::dim(
                    "GradedPresentation (relation variables)",
                    generators.len(),
                    rel.nvars(),
                ));
            }
            if rel.homogeneous_degree().is_none() {
                return Err(Error::Invalid(
                    "relations must be nonzero and homogeneous".into(),
                ));
            }
        }
        Ok(GradedPresentation { generators, relations })
    }

    pub fn generators(&self) -> &[(String, usize)] {
        &self.generators
    }

    pub fn relations(&self) -> &[Poly] {
        &self.relations
    }

    pub fn nvars(&self) -> usize {
        self.generators.len()
    }

    pub fn generator_names(&self) -> Vec<String> {
        self.generators.iter().map(|(n, _)| n.clone()).collect()
    }

    /// Relations rendered against the generator names.
    pub fn relation_strings(&self) -> Vec<String> {
        let names = self.generator_names();
        self.relations.iter().map(|r| r.display(&names)).collect()
    }
}

/// Generator names `t₁…t_r, y₁…y_d, x…` for the main presentation; the `x`
/// block is indexed `x_ik` (`i` over the lattice rank, `k` over components)
/// and collapses to `x1…xr` when there is one component.
pub fn generator_names(r: usize, d: usize, e: usize) -> Vec<(String, usize)> {
    let mut names = Vec::with_capacity(r + d + r * e);
    for i in 1..=r {
        names.push((format!("t{i}"), 2));
    }
    for i in 1..=d {
        names.push((format!("y{i}"), 2));
    }
    for i in 1..=r {
        for k in 1..=e {
            if e == 1 {
                names.push((format!("x{i}"), 2));
            } else {
                names.push((format!("x{i}_{k}"), 2));
            }
        }
    }
    names
}

/// Index of `x_ik` (both zero-based) in the generator ordering.
fn x_index(r: usize, d: usize, e: usize, i: usize, k: usize) -> usize {
    let _ = r;
    r + d + i * e + k
}

/// The quotient presentation
/// `Q[t₁..t_r, y₁..y_d, x₁₁..x_re] / (φ₁♯, …, φ_e♯)` with
/// `φ_k♯ = φ_k(y) + Σᵢ tᵢ·x_ik`, one relation per component of the form.
pub fn presentation(q: &QuadraticForm, r: usize) -> Result<GradedPresentation> {
    if r == 0 {
        return Err(Error::Invalid("lattice rank must be at least 1".into()));
    }
    let (d, e) = (q.d(), q.e());
    let nvars = r + d + r * e;
    let mut relations = Vec::with_capacity(e);
    for k in 0..e {
        let c = &q.hessians()[k];
        let mut terms: Vec<(Vec<u16>, BigRational)> = Vec::new();
        // φ_k(y): coefficient c_ij for i < j, c_ii/2 on the diagonal
        for i in 0..d {
            for j in i..d {
                let coeff = if i == j {
                    BigRational::from(c.get(i, i) / BigInt::from(2))
                } else {
                    BigRational::from(c.get(i, j).clone())
                };
                if coeff.is_zero() {
                    continue;
                }
                let mut exp = vec![0u16; nvars];
                exp[r + i] += 1;
                exp[r + j] += 1;
                terms.push((exp, coeff));
            }
        }
        // Σᵢ tᵢ·x_ik
        for i in 0..r {
            let mut exp = vec![0u16; nvars];
            exp[i] += 1;
            exp[x_index(r, d, e, i, k)] += 1;
            terms.push((exp, BigRational::one()));
        }
        relations.push(Poly::from_terms(nvars, terms)?);
    }
    GradedPresentation::new(generator_names(r, d, e), relations)
}

/// The relation-free presentation (no extension data): a polynomial ring on
/// `t₁..t_r, y₁..y_d`.
pub fn free_presentation(r: usize, d: usize) -> Result<GradedPresentation> {
    if r == 0 {
        return Err(Error::Invalid("lattice rank must be at least 1".into()));
    }
    GradedPresentation::new(generator_names(r, d, 0), Vec::new())
}

/// Graded dimensions of the quotient in cohomological degrees
/// `0, 2, …, max_degree` by exact linear algebra.
pub fn hilbert_function(p: &GradedPresentation, max_degree: usize) -> Result<Vec<BigInt>> {
    if max_degree % 2 != 0 {
        return Err(Error::Invalid(format!(
            "max_degree must be even, got {max_degree}"
        )));
    }
    quotient_dimensions(&p.relations, p.nvars(), max_degree / 2)
}

/// Degree-preserving ring endomorphism given by a linear image for each
/// generator.
#[derive(Clone, Debug, PartialEq)]
pub struct RingSubstitution {
    images: Vec<Poly>,
}

impl RingSubstitution {
    pub fn new(images: Vec<Poly>) -> Result<Self> {
        let nvars = images.len();
        for img in &images {
            if img.nvars() != nvars {
                return Err(Error::dim("RingSubstitution", nvars, img.nvars()));
            }
            if !img.is_zero() && img.homogeneous_degree() != Some(1) {
                return Err(Error::Invalid(
                    "substitution images must be linear in the generators".into(),
                ));
            }
        }
        Ok(RingSubstitution { images })
    }

    pub fn identity(nvars: usize) -> Self {
        RingSubstitution {
            images: (0..nvars).map(|i| Poly::var(nvars, i)).collect(),
        }
    }

    pub fn images(&self) -> &[Poly] {
        &self.images
    }

    pub fn nvars(&self) -> usize {
        self.images.len()
    }

    /// Apply the ring map to a polynomial.
    pub fn apply(&self, p: &Poly) -> Result<Poly> {
        p.substitute(&self.images)
    }

    /// `outer ∘ inner` as ring maps: `(outer ∘ inner)(f) = outer(inner(f))`.
    pub fn compose(outer: &RingSubstitution, inner: &RingSubstitution) -> Result<RingSubstitution> {
        if outer.nvars() != inner.nvars() {
            return Err(Error::dim("compose", outer.nvars(), inner.nvars()));
        }
        let images = inner
            .images
            .iter()
            .map(|img| img.substitute(&outer.images))
            .collect::<Result<Vec<_>>>()?;
        RingSubstitution::new(images)
    }
}

/// Pullback of the rank-2 wreath action on the degree-2 generators: the image
/// of each generator is that coordinate of the moved point, so
/// `subst(w·w′) = subst(w′) ∘ subst(w)`.
pub fn substitution_from_wreath(q: &QuadraticForm, w: &WreathElement) -> Result<RingSubstitution> {
    let r = w.rank();
    if r != 2 {
        return Err(Error::Invalid(format!(
            "generator pullback is defined for lattice rank 2, got {r}"
        )));
    }
    let (d, e) = (q.d(), q.e());
    let nvars = r + d + r * e;
    // The action is linear with no constant term, so its matrix is read off
    // column by column from the images of coordinate basis points.
    let mut matrix = vec![vec![BigInt::zero(); nvars]; nvars];
    for j in 0..nvars {
        let mut t = vec![BigInt::zero(); r];
        let mut y = vec![BigInt::zero(); d];
        let mut x = IntMatrix::zero(e, r);
        if j < r {
            t[j] = BigInt::one();
        } else if j < r + d {
            y[j - r] = BigInt::one();
        } else {
            let rel = j - r - d;
            let (i, k) = (rel / e, rel % e);
            x.set(k, i, BigInt::one());
        }
        let moved = act_pi2(q, w, &Pi2Element::new(q, t, y, x)?)?;
        for i in 0..r {
            matrix[i][j] = moved.t[i].clone();
        }
        for i in 0..d {
            matrix[r + i][j] = moved.y[i].clone();
        }
        for i in 0..r {
            for k in 0..e {
                matrix[x_index(r, d, e, i, k)][j] = moved.x.get(k, i).clone();
            }
        }
    }
    let images = matrix
        .into_iter()
        .map(|row| {
            let terms: Vec<(Vec<u16>, BigRational)> = row
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(j, c)| {
                    let mut exp = vec![0u16; nvars];
                    exp[j] = 1;
                    (exp, BigRational::from(c))
                })
                .collect();
            Poly::from_terms(nvars, terms)
        })
        .collect::<Result<Vec<_>>>()?;
    RingSubstitution::new(images)
}

/// Outcome of an ideal-invariance check: membership of every substituted
/// relation in the original ideal's graded piece, and whether each one came
/// back literally unchanged.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InvarianceReport {
    pub invariant: bool,
    pub on_the_nose: bool,
}

/// Check that the substitution preserves the relation ideal: each substituted
/// relation must be an exact rational combination of the original relations.
pub fn ideal_invariance_check(
    p: &GradedPresentation,
    s: &RingSubstitution,
) -> Result<InvarianceReport> {
    if s.nvars() != p.nvars() {
        return Err(Error::dim("ideal_invariance_check", p.nvars(), s.nvars()));
    }
    let mut invariant = true;
    let mut on_the_nose = true;
    for rel in p.relations() {
        let substituted = s.apply(rel)?;
        if in_span(&substituted, p.relations()).is_none() {
            invariant = false;
        }
        if substituted != *rel {
            on_the_nose = false;
        }
    }
    Ok(InvarianceReport { invariant, on_the_nose: invariant && on_the_nose })
}

/// Index of one factor of the orbit family.
pub type OrbitIndex = (i64, i64);

fn orbit_relation(n: i64, index: OrbitIndex) -> Result<Poly> {
    let den = BigInt::from(n);
    let mut terms = vec![(vec![0u16, 0, 1], BigRational::one())];
    let coeff = |num: i64| -BigRational::new(BigInt::from(num), den.clone());
    if index.0 != 0 {
        terms.push((vec![1, 0, 0], coeff(index.0)));
    }
    if index.1 != 0 {
        terms.push((vec![0, 1, 0], coeff(index.1)));
    }
    Poly::from_terms(3, terms)
}

/// The `(n₁, n₂)` factor of the level-`N` orbit family:
/// `Q[t₁, t₂, y] / (y − (n₁/N)·t₁ − (n₂/N)·t₂)`.
pub fn orbit_module(n: i64, index: OrbitIndex) -> Result<GradedPresentation> {
    if n < 1 {
        return Err(Error::Invalid(format!("orbit level must be positive, got {n}")));
    }
    GradedPresentation::new(
        vec![("t1".into(), 2), ("t2".into(), 2), ("y".into(), 2)],
        vec![orbit_relation(n, index)?],
    )
}

/// How the rank-2, `d = 1` wreath action permutes the orbit indices: returns
/// the pairs `(ν, σ(ν))` over the window `|nᵢ| ≤ 5N`, where the substitution
/// carries the `σ(ν)`-relation exactly onto the `ν`-relation; every pair is
/// verified by exact substitution.
pub fn orbit_equivariance_check(
    n: i64,
    w: &WreathElement,
) -> Result<Vec<(OrbitIndex, OrbitIndex)>> {
    if n < 1 {
        return Err(Error::Invalid(format!("orbit level must be positive, got {n}")));
    }
    if w.rank() != 2 {
        return Err(Error::dim("orbit_equivariance_check (rank)", 2usize, w.rank()));
    }
    if w.ext.m.rows() != 1 {
        return Err(Error::dim("orbit_equivariance_check (d)", 1usize, w.ext.m.rows()));
    }
    let (m1, m2) = (w.ext.m.get_i64(0, 0), w.ext.m.get_i64(0, 1));
    let at_inv = w.a.transpose().inverse_unimodular()?;

    // Pullback on the three generators: t ↦ At, y ↦ y + m₁t₁ + m₂t₂.
    let images = {
        let lin = |coeffs: [i64; 3]| {
            let terms: Vec<(Vec<u16>, BigRational)> = coeffs
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(j, &c)| {
                    let mut exp = vec![0u16; 3];
                    exp[j] = 1;
                    (exp, BigRational::from(BigInt::from(c)))
                })
                .collect();
            Poly::from_terms(3, terms)
        };
        vec![
            lin([w.a.get_i64(0, 0), w.a.get_i64(0, 1), 0])?,
            lin([w.a.get_i64(1, 0), w.a.get_i64(1, 1), 0])?,
            lin([m1, m2, 1])?,
        ]
    };
    let subst = RingSubstitution::new(images)?;

    let window = 5 * n;
    let mut pairs = Vec::new();
    let mut seen = HashSet::new();
    for n1 in -window..=window {
        for n2 in -window..=window {
            let nu = (n1, n2);
            // σ(ν) = (Aᵀ)⁻¹·(ν + N·m), exact in integers
            let shifted = vec![BigInt::from(n1 + n * m1), BigInt::from(n2 + n * m2)];
            let image = at_inv.mul_vec(&shifted)?;
            let sigma = (
                int_to_i64(&image[0], "orbit index")?,
                int_to_i64(&image[1], "orbit index")?,
            );
            let substituted = subst.apply(&orbit_relation(n, sigma)?)?;
            let expected = orbit_relation(n, nu)?;
            if substituted != expected {
                return Err(Error::Equivariance(format!(
                    "substituted relation for index {sigma:?} is not the relation for {nu:?}"
                )));
            }
            if !seen.insert(sigma) {
                return Err(Error::Equivariance(format!(
                    "index map is not injective at {sigma:?}"
                )));
            }
            pairs.push((nu, sigma));
        }
    }
    Ok(pairs)
}

fn int_to_i64(v: &BigInt, context: &str) -> Result<i64> {
    use num::ToPrimitive;
    v.to_i64()
        .ok_or_else(|| Error::Invalid(format!("{context} exceeds desk scale: {v}")))
}
