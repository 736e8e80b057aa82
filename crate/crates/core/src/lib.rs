//! Exact maximum-likelihood analysis of four-codeword binary codes on the
//! binary symmetric channel.
//!
//! A code is described by a [`CodeProfile`]: how many of its columns carry
//! each of the sixteen possible 4-bit patterns. From a profile the crate
//! computes the distance spectrum and the exact average probability of
//! correct decoding, compares codes, rewrites codes into better ones, and
//! certifies for a given block length that a linear code is optimal.

pub mod analytic;
pub mod binomial;
pub mod classi;
pub mod code;
pub mod error;
pub mod oracle;
pub mod prob;
pub mod reductions;
pub mod spectrum;
pub mod verifier;

pub use analytic::{compare_at_eps, lambda_analytic, spectrum_analytic, WeightTuple};
pub use classi::{dominance_check, CertificateKind, ClassISpectra, DominanceCertificate};
pub use code::{ClassIProfile, CodeProfile, Codebook, Row};
pub use error::{Error, Result};
pub use oracle::{lambda_bruteforce, spectrum_bruteforce, PartitionLabel, Scenario};
pub use prob::RationalProb;
pub use reductions::{reduce_to_linear_or_class_i, ReductionStep, Rule};
pub use spectrum::DistanceSpectrum;
pub use verifier::{verify_linear_optimal, OptimalityReport, Verdict, VerifyOptions};
