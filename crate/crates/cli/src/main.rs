//! Command-line frontend: every evaluation and verification as a subcommand,
//! with reproducible seeded suites and deterministic JSON reports.

use clap::{Parser, Subcommand};
use looijenga::cohomology::{
    hilbert_function, ideal_invariance_check, orbit_module, presentation,
    substitution_from_wreath,
};
use looijenga::moduli::{
    curves_isomorphic, descend, gamma_B_member, isogeny_degree, isogeny_kernel,
    isogeny_normal_form, reduce_tau, FramedLattice, LocusPoint,
};
use looijenga::suites::run_suite;
use looijenga::theta::{
    section_dimension, theta_basis_gram_rank, theta_eval_with_info, translation_check,
    ThetaContext, DEFAULT_MAX_RADIUS, DEFAULT_TOL,
};
use looijenga::{form_from_json, DualCosetRep, Error, IntMatrix, QuadraticForm, Result};
use num::complex::Complex64;
use num::{BigInt, BigRational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use std::time::Instant;

#[derive(Parser)]
#[command(name = "looijenga", version, about = "Exact desk-scale arithmetic for framed lattices, their symmetry groups, theta functions, and equivariant ring presentations")]
struct Cli {
    /// Emit the report as JSON on stdout (byte-identical for identical inputs and seed)
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Quadratic-function queries on a form file
    Qform {
        #[command(subcommand)]
        action: QformCmd,
    },
    /// Run a named seeded property suite
    Verify {
        /// group-axioms | action-axioms | phi-sharp-invariance | cocycle | chern | ideal-invariance | specialize | orbit
        suite: String,
        /// 64-bit seed for the deterministic generator
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random cases per listed configuration
        #[arg(long, default_value_t = 100)]
        cases: usize,
    },
    /// Theta evaluation and section queries
    Theta {
        #[command(subcommand)]
        action: ThetaCmd,
    },
    /// Period-lattice arithmetic: reduction, isomorphy, isogenies, descent
    Moduli {
        #[command(subcommand)]
        action: ModuliCmd,
    },
    /// Graded ring presentations and the symmetry action on them
    Cohomology {
        #[command(subcommand)]
        action: CohomologyCmd,
    },
}

#[derive(Subcommand)]
enum QformCmd {
    /// Evaluate φ(y), plus β(y,y′) and ω(y,y′) when --yp is given
    Eval {
        /// Comma-separated rational coordinates
        #[arg(long)]
        y: String,
        /// Second argument for the bilinear values
        #[arg(long)]
        yp: Option<String>,
        file: String,
    },
    /// Print the Hessian and extension matrices
    Hessian { file: String },
    /// Enumerate dual coset representatives
    DualCosets { file: String },
    /// Positive definiteness (single-component forms)
    Definiteness { file: String },
}

#[derive(Subcommand)]
enum ThetaCmd {
    /// Evaluate θ_u(τ, z) with truncation evidence
    Eval {
        /// τ as "re,im"
        #[arg(long)]
        tau: String,
        /// z as semicolon-separated complex numbers "re,im;re,im;…"
        #[arg(long)]
        z: String,
        /// Characteristic u as comma-separated rationals (default: zero)
        #[arg(long)]
        u: Option<String>,
        /// Requested tail bound
        #[arg(long)]
        tol: Option<f64>,
        /// Truncation radius cap
        #[arg(long)]
        max_radius: Option<usize>,
        file: String,
    },
    /// Residual of the lattice-translation law at one point
    TranslationCheck {
        #[arg(long)]
        tau: String,
        #[arg(long)]
        z: String,
        /// Lattice vector as "m1;m2", each comma-separated integers
        #[arg(long)]
        m: String,
        #[arg(long)]
        u: Option<String>,
        /// Pass threshold for the relative residual
        #[arg(long, default_value_t = 1e-9)]
        residual_tol: f64,
        file: String,
    },
    /// Section dimension det(c) and the dual-coset count
    Dim { file: String },
    /// Numeric rank of the theta-basis Gram matrix at sampled points
    GramRank {
        #[arg(long)]
        tau: String,
        /// Sample points (default: section dimension + 2)
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        file: String,
    },
}

#[derive(Subcommand)]
enum ModuliCmd {
    /// Reduce τ into the fundamental domain, recording the transformation
    ReduceTau {
        /// τ as "re,im"
        tau: String,
    },
    /// Decide whether two framed quotients are isomorphic
    Isomorphic {
        /// First frame, as "re,im" pairs
        #[arg(long)]
        t1: String,
        #[arg(long)]
        t2: String,
        /// Second frame
        #[arg(long)]
        s1: String,
        #[arg(long)]
        s2: String,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Invariants of an isogeny matrix B
    Isogeny {
        /// Row-major 2x2 integer matrix "a,b,c,d"
        #[arg(long = "B")]
        b: String,
        #[command(subcommand)]
        action: IsogenyCmd,
    },
    /// Membership of A in the isogeny stabilizer of B
    GammaMember {
        #[arg(long = "B")]
        b: String,
        #[arg(long = "A")]
        a: String,
    },
    /// Project a locus point to descended coordinates (τ, z, u)
    Descend {
        #[arg(long)]
        t1: String,
        #[arg(long)]
        t2: String,
        /// y as semicolon-separated complex numbers
        #[arg(long)]
        y: String,
        #[arg(long)]
        x1: String,
        #[arg(long)]
        x2: String,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        file: String,
    },
}

#[derive(Subcommand)]
enum IsogenyCmd {
    /// Invariant-factor normal form (M, N)
    NormalForm,
    /// Degree |det B|
    Degree,
    /// Kernel points of the quotient-by-sublattice map
    Kernel {
        #[arg(long)]
        t1: String,
        #[arg(long)]
        t2: String,
    },
}

#[derive(Subcommand)]
enum CohomologyCmd {
    /// Print generators (with degrees) and relations
    Presentation {
        #[arg(long, default_value_t = 2)]
        r: usize,
        file: String,
    },
    /// Graded dimensions through an even cohomological degree
    Hilbert {
        #[arg(long, default_value_t = 2)]
        r: usize,
        /// Optional cross-check against the form file's source rank
        #[arg(long)]
        d: Option<usize>,
        #[arg(long, default_value_t = 8)]
        max: usize,
        file: String,
    },
    /// Random wreath substitutions must fix the relation ideal
    ActionCheck {
        #[arg(long, default_value_t = 2)]
        r: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 25)]
        cases: usize,
        file: String,
    },
    /// Orbit-module presentation at level N and index (n₁, n₂)
    Orbit {
        #[arg(long = "N")]
        n: i64,
        /// Index as "n1,n2"
        #[arg(long)]
        index: String,
    },
}

/// Everything a finished invocation reports; wall time is printed separately
/// in the human-readable output so JSON stays byte-identical across runs.
#[derive(Serialize)]
struct RunReport {
    command: String,
    inputs_digest: String,
    workers: usize,
    results: Value,
    passed: bool,
}

/// Accumulates the input digest (argument tokens plus the bytes of every file
/// read) and the effective worker cap.
struct Run {
    hasher: Sha256,
    workers: usize,
}

impl Run {
    fn new(argv: &[String]) -> Result<Self> {
        let workers = worker_cap()?;
        let mut hasher = Sha256::new();
        for arg in argv {
            hasher.update(arg.as_bytes());
            hasher.update([0x1f]);
        }
        Ok(Run { hasher, workers })
    }

    fn load_form(&mut self, path: &str) -> Result<QuadraticForm> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("cannot read {path}: {e}")))?;
        self.hasher.update([0x1e]);
        self.hasher.update(text.as_bytes());
        form_from_json(&text)
    }

    fn finish(self, argv: &[String], results: Value, passed: bool) -> RunReport {
        RunReport {
            command: argv.join(" "),
            inputs_digest: format!("{:x}", self.hasher.finalize()),
            workers: self.workers,
            results,
            passed,
        }
    }
}

/// LOOIJENGA_THREADS caps the number of workers; batch work currently runs on
/// one worker, which lies within any valid cap.
fn worker_cap() -> Result<usize> {
    match std::env::var("LOOIJENGA_THREADS") {
        Ok(text) => {
            let cap: usize = text
                .parse()
                .map_err(|_| Error::Invalid(format!("LOOIJENGA_THREADS must be a positive integer, got {text:?}")))?;
            if cap == 0 {
                return Err(Error::Invalid("LOOIJENGA_THREADS must be at least 1".into()));
            }
            Ok(cap.min(1))
        }
        Err(_) => Ok(1),
    }
}

fn main() {
    let start = Instant::now();
    let cli = Cli::parse();
    let argv: Vec<String> = std::env::args().skip(1).collect();
    match dispatch(&cli, &argv) {
        Ok(report) => {
            emit(&report, cli.json, start);
            std::process::exit(if report.passed { 0 } else { 1 });
        }
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(exit_code(&err));
        }
    }
}

/// 0 success, 1 verification failure, 2 usage/input error, 3 convergence.
fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Convergence { .. } => 3,
        _ => 2,
    }
}

fn emit(report: &RunReport, as_json: bool, start: Instant) {
    if as_json {
        println!("{}", serde_json::to_string_pretty(report).expect("report serializes"));
        return;
    }
    println!("command: {}", report.command);
    println!("inputs digest: {}", report.inputs_digest);
    println!("workers: {}", report.workers);
    println!("{}", serde_json::to_string_pretty(&report.results).expect("results serialize"));
    println!("pass: {}", report.passed);
    println!("wall time: {:.3} ms", start.elapsed().as_secs_f64() * 1e3);
}

fn dispatch(cli: &Cli, argv: &[String]) -> Result<RunReport> {
    let mut run = Run::new(argv)?;
    let (results, passed) = match &cli.cmd {
        Cmd::Qform { action } => cmd_qform(&mut run, action)?,
        Cmd::Verify { suite, seed, cases } => {
            let report = run_suite(suite, *seed, *cases)?;
            let passed = report.passed;
            (serde_json::to_value(report).expect("suite report serializes"), passed)
        }
        Cmd::Theta { action } => cmd_theta(&mut run, action)?,
        Cmd::Moduli { action } => cmd_moduli(&mut run, action)?,
        Cmd::Cohomology { action } => cmd_cohomology(&mut run, action)?,
    };
    Ok(run.finish(argv, results, passed))
}

fn cmd_qform(run: &mut Run, action: &QformCmd) -> Result<(Value, bool)> {
    match action {
        QformCmd::Eval { y, yp, file } => {
            let q = run.load_form(file)?;
            let yv = parse_rationals(y)?;
            let mut results = json!({ "phi": rationals_out(&q.eval_phi(&yv)?) });
            if let Some(yp) = yp {
                let ypv = parse_rationals(yp)?;
                results["beta"] = rationals_out(&q.eval_beta(&yv, &ypv)?);
                results["omega"] = rationals_out(&q.eval_omega(&yv, &ypv)?);
            }
            Ok((results, true))
        }
        QformCmd::Hessian { file } => {
            let q = run.load_form(file)?;
            Ok((
                json!({
                    "hessians": q.hessians().iter().map(matrix_out).collect::<Vec<_>>(),
                    "extensions": q.extensions().iter().map(matrix_out).collect::<Vec<_>>(),
                }),
                true,
            ))
        }
        QformCmd::DualCosets { file } => {
            let q = run.load_form(file)?;
            let reps = q.dual_coset_reps()?;
            Ok((
                json!({
                    "count": reps.len(),
                    "reps": reps
                        .iter()
                        .map(|r| rationals_out(r.coords()))
                        .collect::<Vec<_>>(),
                }),
                true,
            ))
        }
        QformCmd::Definiteness { file } => {
            let q = run.load_form(file)?;
            Ok((json!({ "positive_definite": q.is_positive_definite()? }), true))
        }
    }
}

fn cmd_theta(run: &mut Run, action: &ThetaCmd) -> Result<(Value, bool)> {
    match action {
        ThetaCmd::Eval { tau, z, u, tol, max_radius, file } => {
            let q = run.load_form(file)?;
            let ctx = ThetaContext::new(
                q,
                parse_complex(tau)?,
                tol.unwrap_or(DEFAULT_TOL),
                max_radius.unwrap_or(DEFAULT_MAX_RADIUS),
            )?;
            let rep = characteristic(&ctx, u.as_deref())?;
            let value = theta_eval_with_info(&ctx, &rep, &parse_complex_list(z)?)?;
            Ok((
                json!({
                    "value": complex_out(value.value),
                    "radius": value.radius,
                    "tail_bound": float_out(value.tail_bound),
                    "terms": value.terms,
                }),
                true,
            ))
        }
        ThetaCmd::TranslationCheck { tau, z, m, u, residual_tol, file } => {
            let q = run.load_form(file)?;
            let ctx = ThetaContext::with_defaults(q, parse_complex(tau)?)?;
            let rep = characteristic(&ctx, u.as_deref())?;
            let (m1, m2) = parse_int_pair_rows(m)?;
            let residual = translation_check(&ctx, &rep, &parse_complex_list(z)?, &m1, &m2)?;
            Ok((
                json!({
                    "residual": float_out(residual),
                    "tolerance": float_out(*residual_tol),
                }),
                residual < *residual_tol,
            ))
        }
        ThetaCmd::Dim { file } => {
            let q = run.load_form(file)?;
            let dim = section_dimension(&q)?;
            let cosets = q.dual_coset_reps()?.len();
            Ok((json!({ "dimension": dim, "dual_coset_count": cosets }), dim == cosets))
        }
        ThetaCmd::GramRank { tau, samples, seed, file } => {
            let q = run.load_form(file)?;
            let ctx = ThetaContext::with_defaults(q, parse_complex(tau)?)?;
            let dim = section_dimension(ctx.form())?;
            let count = samples.unwrap_or(dim + 2);
            let d = ctx.form().d();
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let points: Vec<Vec<Complex64>> = (0..count)
                .map(|_| {
                    (0..d)
                        .map(|_| {
                            Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5))
                        })
                        .collect()
                })
                .collect();
            let rank = theta_basis_gram_rank(&ctx, &points)?;
            Ok((
                json!({ "rank": rank, "dimension": dim, "samples": count }),
                rank == dim,
            ))
        }
    }
}

fn cmd_moduli(run: &mut Run, action: &ModuliCmd) -> Result<(Value, bool)> {
    match action {
        ModuliCmd::ReduceTau { tau } => {
            let input = parse_complex(tau)?;
            let (reduced, a) = reduce_tau(input)?;
            Ok((
                json!({
                    "tau": complex_out(input),
                    "reduced": complex_out(reduced),
                    "matrix": matrix_out(&a),
                }),
                true,
            ))
        }
        ModuliCmd::Isomorphic { t1, t2, s1, s2, tol } => {
            let lat = FramedLattice::new(parse_complex(t1)?, parse_complex(t2)?)?;
            let latp = FramedLattice::new(parse_complex(s1)?, parse_complex(s2)?)?;
            let answer = curves_isomorphic(&lat, &latp, *tol)?;
            let results = match answer {
                Some((a, scale)) => json!({
                    "isomorphic": true,
                    "matrix": matrix_out(&a),
                    "scale": complex_out(scale),
                }),
                None => json!({ "isomorphic": false }),
            };
            Ok((results, true))
        }
        ModuliCmd::Isogeny { b, action } => {
            let b = parse_matrix2(b)?;
            match action {
                IsogenyCmd::NormalForm => {
                    let (m, n) = isogeny_normal_form(&b)?;
                    Ok((
                        json!({ "normal_form": [m.to_string(), n.to_string()] }),
                        true,
                    ))
                }
                IsogenyCmd::Degree => Ok((
                    json!({ "degree": isogeny_degree(&b)?.to_string() }),
                    true,
                )),
                IsogenyCmd::Kernel { t1, t2 } => {
                    let lat = FramedLattice::new(parse_complex(t1)?, parse_complex(t2)?)?;
                    let points = isogeny_kernel(&b, &lat)?;
                    Ok((
                        json!({
                            "size": points.len(),
                            "points": points.iter().map(|p| complex_out(*p)).collect::<Vec<_>>(),
                        }),
                        true,
                    ))
                }
            }
        }
        ModuliCmd::GammaMember { b, a } => {
            let member = gamma_B_member(&parse_matrix2(b)?, &parse_matrix2(a)?)?;
            Ok((json!({ "member": member }), true))
        }
        ModuliCmd::Descend { t1, t2, y, x1, x2, tol, file } => {
            let q = run.load_form(file)?;
            let point = LocusPoint {
                lattice: FramedLattice::new(parse_complex(t1)?, parse_complex(t2)?)?,
                y: parse_complex_list(y)?,
                x1: parse_complex(x1)?,
                x2: parse_complex(x2)?,
            };
            let down = descend(&q, &point, *tol)?;
            Ok((
                json!({
                    "tau": complex_out(down.tau),
                    "z": down.z.iter().map(|c| complex_out(*c)).collect::<Vec<_>>(),
                    "u": complex_out(down.u),
                }),
                true,
            ))
        }
    }
}

fn cmd_cohomology(run: &mut Run, action: &CohomologyCmd) -> Result<(Value, bool)> {
    match action {
        CohomologyCmd::Presentation { r, file } => {
            let q = run.load_form(file)?;
            let p = presentation(&q, *r)?;
            Ok((presentation_out(&p), true))
        }
        CohomologyCmd::Hilbert { r, d, max, file } => {
            let q = run.load_form(file)?;
            if let Some(d) = d {
                if *d != q.d() {
                    return Err(Error::dim("hilbert (--d vs form file)", q.d(), *d));
                }
            }
            let p = presentation(&q, *r)?;
            let values = hilbert_function(&p, *max)?;
            Ok((
                json!({
                    "max_degree": max,
                    "values": values.iter().map(BigInt::to_string).collect::<Vec<_>>(),
                }),
                true,
            ))
        }
        CohomologyCmd::ActionCheck { r, seed, cases, file } => {
            let q = run.load_form(file)?;
            let p = presentation(&q, *r)?;
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let mut failures = Vec::new();
            for i in 0..*cases {
                let w = looijenga::suites::random_wreath(&mut rng, &q, *r);
                let s = substitution_from_wreath(&q, &w)?;
                let check = ideal_invariance_check(&p, &s)?;
                if !(check.invariant && check.on_the_nose) {
                    failures.push(format!("case {i}: relations move under {w:?}"));
                }
            }
            let passed = failures.is_empty();
            Ok((json!({ "cases": cases, "failures": failures }), passed))
        }
        CohomologyCmd::Orbit { n, index } => {
            let idx = parse_index(index)?;
            let p = orbit_module(*n, idx)?;
            Ok((presentation_out(&p), true))
        }
    }
}

fn presentation_out(p: &looijenga::GradedPresentation) -> Value {
    json!({
        "generators": p
            .generators()
            .iter()
            .map(|(name, deg)| json!([name, deg]))
            .collect::<Vec<_>>(),
        "relations": p.relation_strings(),
    })
}

/// Characteristic from comma-separated rationals; default is the zero coset.
fn characteristic(ctx: &ThetaContext, u: Option<&str>) -> Result<DualCosetRep> {
    match u {
        Some(text) => Ok(DualCosetRep::from_coords(parse_rationals(text)?)),
        None => Ok(DualCosetRep::from_coords(vec![
            BigRational::from(BigInt::from(0));
            ctx.form().d()
        ])),
    }
}

fn parse_complex(text: &str) -> Result<Complex64> {
    let parts: Vec<&str> = text.split(',').collect();
    let err = || Error::Parse(format!("expected complex number \"re\" or \"re,im\", got {text:?}"));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(re.trim().parse().map_err(|_| err())?, 0.0)),
        [re, im] => Ok(Complex64::new(
            re.trim().parse().map_err(|_| err())?,
            im.trim().parse().map_err(|_| err())?,
        )),
        _ => Err(err()),
    }
}

fn parse_complex_list(text: &str) -> Result<Vec<Complex64>> {
    text.split(';').map(parse_complex).collect()
}

fn parse_rationals(text: &str) -> Result<Vec<BigRational>> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<BigRational>()
                .map_err(|_| Error::Parse(format!("expected rational \"p/q\", got {part:?}")))
        })
        .collect()
}

fn parse_i64s(text: &str) -> Result<Vec<i64>> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<i64>()
                .map_err(|_| Error::Parse(format!("expected integer, got {part:?}")))
        })
        .collect()
}

/// `"m1;m2"` with both rows comma-separated and of equal length.
fn parse_int_pair_rows(text: &str) -> Result<(Vec<i64>, Vec<i64>)> {
    let rows: Vec<&str> = text.split(';').collect();
    if rows.len() != 2 {
        return Err(Error::Parse(format!("expected \"m1;m2\", got {text:?}")));
    }
    let m1 = parse_i64s(rows[0])?;
    let m2 = parse_i64s(rows[1])?;
    if m1.len() != m2.len() {
        return Err(Error::dim("lattice vector rows", m1.len(), m2.len()));
    }
    Ok((m1, m2))
}

fn parse_matrix2(text: &str) -> Result<IntMatrix> {
    let entries = parse_i64s(text)?;
    if entries.len() != 4 {
        return Err(Error::Parse(format!("expected 4 row-major entries, got {text:?}")));
    }
    Ok(IntMatrix::from_rows(&[&entries[0..2], &entries[2..4]]))
}

fn parse_index(text: &str) -> Result<(i64, i64)> {
    let v = parse_i64s(text)?;
    if v.len() != 2 {
        return Err(Error::Parse(format!("expected \"n1,n2\", got {text:?}")));
    }
    Ok((v[0], v[1]))
}

/// 17 significant digits, scientific notation.
fn float_out(x: f64) -> Value {
    Value::String(format!("{x:.16e}"))
}

fn complex_out(c: Complex64) -> Value {
    json!({ "re": float_out(c.re), "im": float_out(c.im) })
}

fn rationals_out(values: &[BigRational]) -> Value {
    Value::Array(values.iter().map(|v| Value::String(v.to_string())).collect())
}

fn matrix_out(m: &IntMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| {
                Value::Array(
                    (0..m.cols())
                        .map(|j| Value::String(m.get(i, j).to_string()))
                        .collect(),
                )
            })
            .collect(),
    )
}
