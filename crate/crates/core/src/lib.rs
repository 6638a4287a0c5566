//! Numerical laboratory for sign patterns of the Liouville and Möbius functions.
//!
//! Segmented sieves produce λ, μ and truncated squarefree indicators; on top of
//! them sit sign-pattern densities, short-interval sums, a random graph on
//! squarefree shifts of a profinite integer, and exact three-prime counts with
//! their circle-method main term.
//!
//! Numerical routines are generic over [`Scalar`] (exact identities) or
//! [`num_traits::Float`] (Euler products). The aliases below fix the scalar for
//! the common cases.

pub mod error;
pub mod primes;
pub mod scalar;
pub mod sieve;
pub mod pattern;
pub mod short_interval;
pub mod graph;
pub mod circle;

pub use error::{LabError, Result};
pub use scalar::Scalar;

/// Exact rational scalar.
pub type Exact = num_rational::BigRational;

pub type EnsembleReportF64 = graph::EnsembleReport<f64>;
pub type EnsembleReportExact = graph::EnsembleReport<Exact>;
pub type SingularDataF32 = circle::SingularData<f32>;
pub type SingularDataF64 = circle::SingularData<f64>;
pub type ConstantsF64 = pattern::PredictedConstants<f64>;
pub type MaximalReportF64 = pattern::MaximalReport<f64>;
