//! Binary exchangeable sequences and their mixing measures.
//!
//! An exchangeable law on `{0,1}^n` is stored as the law of its count of
//! ones ([`CountDistribution`]). From it the crate computes mixed moments
//! `E[X_1 ... X_k]`, moments of the empirical mean, and the law of the
//! empirical mean itself, which approximates the de Finetti mixing measure.
//! Mixing measures ([`MixingMeasure`]) can be fitted to moment data, turned
//! back into mixtures of i.i.d. coin flips, and compared against the original
//! law coordinate by coordinate.
//!
//! All computations are generic over [`Scalar`]: exact rationals for small
//! lengths and enumeration checks, `f64` for long sequences.

/// Version of this crate, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub mod combinatorics;
pub mod error;
pub mod generators;
pub mod law;
pub mod measure;
pub mod moments;
pub mod oracle;
pub mod recovery;
pub mod scalar;
pub mod synthesis;

pub use combinatorics::{
    check_collision_bound, count_tuples_with_rho, rho, stirling2, tuple_stats, CollisionBound, TupleMethod, TupleStats,
};
pub use error::{Error, Result};
pub use generators::{generate, sample_count_histogram, sample_counts, FamilySpec};
pub use law::{BinaryAssignment, CountDistribution};
pub use measure::{Atom, MixingMeasure};
pub use moments::{
    mixed_moment, moment_gap, moment_vector, polynomial_expectation, sn_moment, sn_moment_direct, MomentVector,
};
pub use recovery::{
    check_complete_monotonicity, estimate_definetti, law_of_sn, measure_moments, recover_measure, recover_measure_with,
    MonotonicityCheck, Recovery, RecoveryOptions, Solver,
};
pub use scalar::{Mode, Rational, Scalar};
pub use synthesis::{
    bernoulli_product, count_law_of_mixture, synthesize_fdd, verify_representation, VerificationReport,
};
