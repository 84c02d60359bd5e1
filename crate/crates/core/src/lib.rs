//! Exact desk-scale arithmetic for framed lattices in ℂ, quadratic functions
//! between free abelian groups, the wreath-type symmetry groups they generate,
//! theta functions of positive-definite forms, and the graded ring
//! presentations those symmetries act on.

pub mod cohomology;
pub mod error;
pub mod intlat;
pub mod moduli;
pub mod poly;
pub mod qform;
pub mod suites;
pub mod theta;
pub mod wreath;

pub use cohomology::{orbit_module, presentation, GradedPresentation, RingSubstitution};
pub use error::{Error, Result};
pub use intlat::{contract, lambda2_induced, smith_normal_form, AltForm, IntMatrix, RatMatrix, SmithNormalForm};
pub use moduli::{reduce_tau, CurveTuple, DescendedPoint, FramedLattice, LocusPoint};
pub use qform::{default_extension, form_from_json, form_to_json, regular_sequence_check, DualCosetRep, FormFile, QuadraticForm};
pub use suites::{run_suite, SuiteReport, SUITE_NAMES};
pub use theta::{theta_eval, LatticeVector, ThetaContext, ThetaValue};
pub use wreath::{act_pi2, ExtElement, Pi2Element, WreathElement};
