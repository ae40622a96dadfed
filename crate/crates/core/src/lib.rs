//! Simulation and verification toolkit for two-party agreement protocols on
//! finite information structures.
//!
//! The model: nature draws a pair of signals (σ, τ) from a finite joint
//! distribution together with the conditional expectation μ_στ ∈ [0,1] of a
//! quantity of interest. Alice sees σ, Bob sees τ, and they exchange messages
//! that progressively refine a combinatorial-rectangle partition of the
//! signal grid. This crate simulates those protocols exactly (no sampling),
//! measures agreement and accuracy under squared distance or a general
//! Bregman divergence, checks the rectangle-substitutes condition, and
//! evaluates the bounds that turn approximate agreement into approximate
//! accuracy.
//!
//! Modules:
//! - [`structure`]: joint distributions, conditional means, rectangles.
//! - [`divergence`]: Bregman generators, JB divergence, concave envelopes.
//! - [`protocol`]: exact and discretized message protocols, transcripts.
//! - [`metrics`]: agreement/accuracy profiles, the round-drop monovariant.
//! - [`substitutes`]: rectangle-substitutes checks, violation magnitude δ.
//! - [`analysis`]: accuracy bounds, interval partitions, protocol audits.
//! - [`corpus`]: canonical and randomized example structures.
//! - [`verification`]: the self-check suite behind `agreement-lab verify`.
//! - [`cli`]: the command-line interface.

// Validation sites write `!(x > 0.0)` rather than `x <= 0.0` so that NaN
// parameters fail validation instead of slipping through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cli;
pub mod corpus;
pub mod divergence;
pub mod error;
pub mod metrics;
pub mod protocol;
pub mod structure;
pub mod substitutes;
pub mod verification;

pub use analysis::{
    audit_agreement_accuracy, bound_bregman, bound_quadratic, compute_boolean,
    partition_jb_march, partition_windowed, thwart_density, BooleanComputation, BoundKind,
    BoundReport, BregmanBound, IntervalPartition, PartitionConstruction,
};
pub use corpus::{
    generate, make_coin_xor, make_identical, make_xor, parse_corpus_kind,
    random_boolean_substitutes_structure, random_one_sided_substitutes_structure,
    random_structure, random_substitutes_structure, CorpusKind, CorpusSpec,
};
pub use divergence::{
    bregman, c_approx_min_ratio, envelope, jensen_bregman, parse_generator, BregmanGenerator,
    EnvelopeTable,
};
pub use error::{Error, Result};
pub use metrics::{
    accuracy_profile, agreement_profile, charlie_excess, monovariant_decrease, AccuracyProfile,
    AgreementProfile,
};
pub use protocol::{
    compute_t_end, parse_protocol, run_discretized_bregman, run_discretized_quadratic,
    run_fast_rounding, run_standard, Evolution, Message, ProtocolKind, ProtocolPartition,
    RoundRecord, Speaker, Transcript,
};
pub use structure::{validate_structure, InformationStructure, Rectangle};
pub use substitutes::{
    delta_estimate, rect_violation, rectangle_check, rectangle_check_with_guard, CheckMode,
    DeltaEstimate, SubstitutesReport,
};
pub use verification::{run_suite, CheckResult, VerificationReport};
