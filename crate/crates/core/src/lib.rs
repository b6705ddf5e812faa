//! Exact checker for Arnold-Viro type prohibitions on real plane curves
//! with simple singularities.
//!
//! The pipeline: local forms of singular points ([`local`], [`catalog`]),
//! assembly of the partition form of a curve scheme ([`scheme`]), and the
//! inequality check ([`checker`]). All arithmetic is exact.

pub mod catalog;
pub mod checker;
pub mod cli;
pub mod local;
pub mod qform;
pub mod rational;
pub mod scheme;

pub use catalog::{CatalogError, Family, MilnorData, SingularityType, Variant};
pub use checker::{check_petrovskii, check_theorem_a, InequalityReport, Verdict};
pub use local::{
    compute_qp, is_q_singularity, omega_twist, LocalError, MorsifiedLocalScheme, ResolutionGraph,
    SectorSideAssignment,
};
pub use qform::{FormError, InertiaTriple, RationalSymmetricForm};
pub use rational::Rational;
pub use scheme::{CurveScheme, SchemeError};
