//! Seeded property suites over the group, action, cocycle, and cohomology
//! layers, shared by the command-line frontend and the acceptance harness,
//! plus the random element generators they draw from.

use crate::cohomology::{ideal_invariance_check, presentation, substitution_from_wreath};
use crate::error::{Error, Result};
use crate::intlat::{wedge_pairs, AltForm, IntMatrix};
use crate::qform::QuadraticForm;
use crate::theta::{chern_form, chern_four_term, cocycle_defect, LatticeVector};
use crate::wreath::{
    act_pi2, ext_identity, ext_inv, ext_mul, quad_invariant_sharp, specialize_rank2,
    wreath_identity, wreath_inv, wreath_mul, ExtElement, Pi2Element, WreathElement,
};
use num::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// The suite names `run_suite` accepts.
pub const SUITE_NAMES: [&str; 8] = [
    "group-axioms",
    "action-axioms",
    "phi-sharp-invariance",
    "cocycle",
    "chern",
    "ideal-invariance",
    "specialize",
    "orbit",
];

/// `(r, d, e)` configurations exercised by the group/action/invariance suites.
pub const AXIOM_CONFIGS: [(usize, usize, usize); 3] = [(2, 1, 1), (2, 2, 1), (3, 2, 2)];

const MAX_RECORDED_FAILURES: usize = 8;

/// Outcome of one property suite: every failed case is counted and the first
/// few carry their counterexample.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub cases: usize,
    pub failure_count: usize,
    pub failures: Vec<String>,
    pub passed: bool,
}

impl SuiteReport {
    fn new(suite: &str) -> Self {
        SuiteReport {
            suite: suite.to_string(),
            cases: 0,
            failure_count: 0,
            failures: Vec::new(),
            passed: true,
        }
    }

    fn case(&mut self, outcome: Option<String>) {
        self.cases += 1;
        if let Some(detail) = outcome {
            self.failure_count += 1;
            if self.failures.len() < MAX_RECORDED_FAILURES {
                self.failures.push(detail);
            }
        }
    }

    fn finish(mut self) -> Self {
        self.passed = self.failure_count == 0;
        self
    }
}

/// Run the named suite on `cases` random cases per listed configuration,
/// drawn deterministically from `seed`. Unknown names are a usage error.
pub fn run_suite(name: &str, seed: u64, cases: usize) -> Result<SuiteReport> {
    match name {
        "group-axioms" => group_axioms_suite(seed, cases),
        "action-axioms" => action_axioms_suite(seed, cases),
        "phi-sharp-invariance" => phi_sharp_suite(seed, cases),
        "cocycle" => cocycle_suite(seed, cases),
        "chern" => chern_suite(seed, cases),
        "ideal-invariance" => ideal_invariance_suite(seed, cases),
        "specialize" => specialize_suite(seed, cases),
        "orbit" => orbit_suite(seed, cases),
        other => Err(Error::Invalid(format!(
            "unknown suite {other:?}; expected one of: {}",
            SUITE_NAMES.join(", ")
        ))),
    }
}

/// Random quadratic function with extension entries in `[-5, 5]`; the Hessian
/// `c = dext + dextᵀ` is then automatically symmetric with even diagonal.
pub fn random_form(rng: &mut ChaCha8Rng, d: usize, e: usize) -> QuadraticForm {
    let dext: Vec<IntMatrix> = (0..e)
        .map(|_| {
            let data: Vec<BigInt> = (0..d * d)
                .map(|_| BigInt::from(rng.gen_range(-5i64..=5)))
                .collect();
            IntMatrix::new(d, d, data).expect("square matrix data")
        })
        .collect();
    let c: Vec<IntMatrix> = dext
        .iter()
        .map(|m| m.add(&m.transpose()).expect("matching shapes"))
        .collect();
    QuadraticForm::new(d, e, c, Some(dext)).expect("construction is valid")
}

/// Random element of `GL_r(Z)`: a product of elementary shears (offsets in
/// `[-3, 3]`) and occasional sign flips.
pub fn random_unimodular(rng: &mut ChaCha8Rng, r: usize) -> IntMatrix {
    let mut a = IntMatrix::identity(r);
    for _ in 0..6 {
        let mut el = IntMatrix::identity(r);
        let i = rng.gen_range(0..r);
        let mut j = rng.gen_range(0..r);
        if r > 1 {
            while j == i {
                j = rng.gen_range(0..r);
            }
            el.set(i, j, BigInt::from(rng.gen_range(-3i64..=3)));
        }
        if rng.gen_bool(0.3) {
            let k = rng.gen_range(0..r);
            el.set(k, k, BigInt::from(-1));
        }
        a = a.mul(&el).expect("square product");
    }
    a
}

/// Random twisted-product element with all entries in `[-5, 5]`.
pub fn random_ext(rng: &mut ChaCha8Rng, q: &QuadraticForm, r: usize) -> ExtElement {
    let m = IntMatrix::new(
        q.d(),
        r,
        (0..q.d() * r)
            .map(|_| BigInt::from(rng.gen_range(-5i64..=5)))
            .collect(),
    )
    .expect("matrix data length");
    let n = AltForm::new(
        r,
        q.e(),
        wedge_pairs(r)
            .iter()
            .map(|_| {
                (0..q.e())
                    .map(|_| BigInt::from(rng.gen_range(-5i64..=5)))
                    .collect()
            })
            .collect(),
    )
    .expect("alternating form data");
    ExtElement::new(q, m, n).expect("valid element")
}

/// Random element of the full wreath-type group.
pub fn random_wreath(rng: &mut ChaCha8Rng, q: &QuadraticForm, r: usize) -> WreathElement {
    WreathElement::new(q, random_unimodular(rng, r), random_ext(rng, q, r))
        .expect("valid element")
}

/// Random point of the second homotopy datum with entries in `[-5, 5]`.
pub fn random_pi2(rng: &mut ChaCha8Rng, q: &QuadraticForm, r: usize) -> Pi2Element {
    let t = (0..r).map(|_| BigInt::from(rng.gen_range(-5i64..=5))).collect();
    let y = (0..q.d())
        .map(|_| BigInt::from(rng.gen_range(-5i64..=5)))
        .collect();
    let x = IntMatrix::new(
        q.e(),
        r,
        (0..q.e() * r)
            .map(|_| BigInt::from(rng.gen_range(-5i64..=5)))
            .collect(),
    )
    .expect("matrix data length");
    Pi2Element::new(q, t, y, x).expect("valid point")
}

/// Random lattice vector `m₁τ + m₂` with entries in `[-5, 5]`.
pub fn random_lattice_vector(rng: &mut ChaCha8Rng, d: usize) -> LatticeVector {
    let m1 = (0..d).map(|_| rng.gen_range(-5i64..=5)).collect();
    let m2 = (0..d).map(|_| rng.gen_range(-5i64..=5)).collect();
    LatticeVector::new(m1, m2).expect("matching lengths")
}

/// Group axioms (associativity, identity, inverses) for both the twisted
/// product and its wreath-type extension, in exact integer arithmetic.
fn group_axioms_suite(seed: u64, cases: usize) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("group-axioms");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for &(r, d, e) in &AXIOM_CONFIGS {
        for i in 0..cases {
            let q = random_form(&mut rng, d, e);
            let outcome = group_axiom_case(&q, r, &mut rng)?
                .map(|msg| format!("(r,d,e)=({r},{d},{e}) case {i}: {msg}"));
            report.case(outcome);
        }
    }
    Ok(report.finish())
}

fn group_axiom_case(
    q: &QuadraticForm,
    r: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Option<String>> {
    let g = random_ext(rng, q, r);
    let gp = random_ext(rng, q, r);
    let gpp = random_ext(rng, q, r);
    let lhs = ext_mul(q, &ext_mul(q, &g, &gp)?, &gpp)?;
    let rhs = ext_mul(q, &g, &ext_mul(q, &gp, &gpp)?)?;
    if lhs != rhs {
        return Ok(Some(format!(
            "twisted-product associativity fails for {g:?}, {gp:?}, {gpp:?}"
        )));
    }
    let id = ext_identity(q, r);
    if ext_mul(q, &g, &id)? != g || ext_mul(q, &id, &g)? != g {
        return Ok(Some(format!("twisted-product identity fails for {g:?}")));
    }
    let ginv = ext_inv(q, &g)?;
    if ext_mul(q, &g, &ginv)? != id || ext_mul(q, &ginv, &g)? != id {
        return Ok(Some(format!("twisted-product inverse fails for {g:?}")));
    }

    let w = random_wreath(rng, q, r);
    let wp = random_wreath(rng, q, r);
    let wpp = random_wreath(rng, q, r);
    let lhs = wreath_mul(q, &wreath_mul(q, &w, &wp)?, &wpp)?;
    let rhs = wreath_mul(q, &w, &wreath_mul(q, &wp, &wpp)?)?;
    if lhs != rhs {
        return Ok(Some(format!(
            "wreath associativity fails for {w:?}, {wp:?}, {wpp:?}"
        )));
    }
    let wid = wreath_identity(q, r);
    if wreath_mul(q, &w, &wid)? != w || wreath_mul(q, &wid, &w)? != w {
        return Ok(Some(format!("wreath identity fails for {w:?}")));
    }
    let winv = wreath_inv(q, &w)?;
    if wreath_mul(q, &w, &winv)? != wid || wreath_mul(q, &winv, &w)? != wid {
        return Ok(Some(format!("wreath inverse fails for {w:?}")));
    }
    Ok(None)
}

/// Action axioms: the identity acts trivially and `(w·w')∝p = w∝(w'∝p)`.
fn action_axioms_suite(seed: u64, cases: usize) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("action-axioms");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for &(r, d, e) in &AXIOM_CONFIGS {
        for i in 0..cases {
            let q = random_form(&mut rng, d, e);
            let w = random_wreath(&mut rng, &q, r);
            let wp = random_wreath(&mut rng, &q, r);
            let p = random_pi2(&mut rng, &q, r);
            let outcome = if act_pi2(&q, &wreath_identity(&q, r), &p)? != p {
                Some(format!(
                    "(r,d,e)=({r},{d},{e}) case {i}: identity moves point {p:?}"
                ))
            } else {
                let composed = act_pi2(&q, &wreath_mul(&q, &w, &wp)?, &p)?;
                let stepwise = act_pi2(&q, &w, &act_pi2(&q, &wp, &p)?)?;
                (composed != stepwise).then(|| {
                    format!(
                        "(r,d,e)=({r},{d},{e}) case {i}: compatibility fails for \
                         {w:?}, {wp:?} on {p:?}"
                    )
                })
            };
            report.case(outcome);
        }
    }
    Ok(report.finish())
}

/// The quadratic invariant `φ(y) + x·t` is preserved exactly by every action.
fn phi_sharp_suite(seed: u64, cases: usize) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("phi-sharp-invariance");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for &(r, d, e) in &AXIOM_CONFIGS {
        for i in 0..cases {
            let q = random_form(&mut rng, d, e);
            let w = random_wreath(&mut rng, &q, r);
            let p = random_pi2(&mut rng, &q, r);
            let before = quad_invariant_sharp(&q, &p)?;
            let after = quad_invariant_sharp(&q, &act_pi2(&q, &w, &p)?)?;
            let outcome = (before != after).then(|| {
                format!(
                    "(r,d,e)=({r},{d},{e}) case {i}: invariant moved from {before:?} \
                     to {after:?} under {w:?}"
                )
            });
            report.case(outcome);
        }
    }
    Ok(report.finish())
}

const COCYCLE_DIMS: [usize; 3] = [1, 2, 3];

/// The symbolic automorphy-factor defect has no τ or z dependence and its
/// constant is the integer `-β(m₂', m₁)`.
fn cocycle_suite(seed: u64, cases: usize) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("cocycle");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for &d in &COCYCLE_DIMS {
        for i in 0..cases {
            let q = random_form(&mut rng, d, 1);
            let u = random_lattice_vector(&mut rng, d);
            let up = random_lattice_vector(&mut rng, d);
            let defect = cocycle_defect(&q, &u, &up)?;
            let m1: Vec<BigInt> = u.m1().iter().map(|&v| BigInt::from(v)).collect();
            let m2p: Vec<BigInt> = up.m2().iter().map(|&v| BigInt::from(v)).collect();
            let expected = -q.beta_int(&m2p, &m1)?[0].clone();
            let constant = defect.constant_part();
            let ok = defect.is_constant()
                && constant.is_integer()
                && constant.to_integer() == expected;
            let outcome = (!ok).then(|| {
                format!("d={d} case {i}: defect {defect:?} for u={u:?}, u'={up:?}")
            });
            report.case(outcome);
        }
    }
    Ok(report.finish())
}

/// The four-term combination of automorphy exponents is the constant
/// alternating pairing `β(m₁, m₂') - β(m₂, m₁')`.
fn chern_suite(seed: u64, cases: usize) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("chern");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for &d in &COCYCLE_DIMS {
        for i in 0..cases {
            let q = random_form(&mut rng, d, 1);
            let u = random_lattice_vector(&mut rng, d);
            let up = random_lattice_vector(&mut rng, d);
            let four = chern_four_term(&q, &u, &up)?;
            let expected = chern_form(&q, &u, &up)?;
            let constant = four.constant_part();
            let ok = four.is_constant()
                && constant.is_integer()
                && constant.to_integer() == expected;
            let outcome = (!ok).then(|| {
                format!(
                    "d={d} case {i}: four-term {four:?} vs pairing {expected} \
                     for u={u:?}, u'={up:?}"
                )
            });
            report.case(outcome);
        }
    }
    Ok(report.finish())
}

const INVARIANCE_CONFIGS: [(usize, usize); 3] = [(1, 1), (2, 1), (0, 1)];

/// Substituted presentation ideals agree with the originals on the nose.
fn ideal_invariance_suite(seed: u64, cases: usize) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("ideal-invariance");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for &(d, e) in &INVARIANCE_CONFIGS {
        for i in 0..cases {
            let q = random_form(&mut rng, d, e);
            let pres = presentation(&q, 2)?;
            let w = random_wreath(&mut rng, &q, 2);
            let subst = substitution_from_wreath(&q, &w)?;
            let check = ideal_invariance_check(&pres, &subst)?;
            let ok = check.invariant && check.on_the_nose;
            let outcome = (!ok).then(|| {
                format!(
                    "(d,e)=({d},{e}) case {i}: relations move under {w:?} \
                     (invariant={}, on_the_nose={})",
                    check.invariant, check.on_the_nose
                )
            });
            report.case(outcome);
        }
    }
    Ok(report.finish())
}

/// On rank 2 the general action formula agrees with the closed coordinate
/// formulas, exactly.
fn specialize_suite(seed: u64, cases: usize) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("specialize");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for &d in &COCYCLE_DIMS {
        for i in 0..cases {
            let q = random_form(&mut rng, d, 1);
            let w = random_wreath(&mut rng, &q, 2);
            let p = random_pi2(&mut rng, &q, 2);
            let general = act_pi2(&q, &w, &p)?;
            let coords = specialize_rank2(&q, &w, &p)?;
            let outcome = (general != coords).then(|| {
                format!(
                    "d={d} case {i}: general {general:?} vs coordinate {coords:?} \
                     for {w:?} on {p:?}"
                )
            });
            report.case(outcome);
        }
    }
    Ok(report.finish())
}

const ORBIT_LEVELS: [i64; 3] = [1, 2, 3];

/// The wreath action permutes orbit-module indices over the window, with each
/// pair verified by exact substitution into the defining relation.
fn orbit_suite(seed: u64, cases: usize) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("orbit");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for &level in &ORBIT_LEVELS {
        for i in 0..cases {
            let q = random_form(&mut rng, 1, 1);
            let w = random_wreath(&mut rng, &q, 2);
            let outcome = match crate::cohomology::orbit_equivariance_check(level, &w) {
                Ok(pairs) => {
                    let side = (10 * level + 1) as usize;
                    (pairs.len() != side * side).then(|| {
                        format!(
                            "N={level} case {i}: window has {} pairs, expected {}",
                            pairs.len(),
                            side * side
                        )
                    })
                }
                Err(Error::Equivariance(msg)) => {
                    Some(format!("N={level} case {i}: {msg} under {w:?}"))
                }
                Err(other) => return Err(other),
            };
            report.case(outcome);
        }
    }
    Ok(report.finish())
}
