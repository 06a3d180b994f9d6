//! Construction, evaluation, and verification of smoothing operators for
//! vector-valued `C^l` functions on open subsets of `R^d`, together with
//! extension operators (Seeley/Hestenes axis reflections for corners and
//! cubes, projection retractions, and a Dugundji-style metric extension).
//!
//! The main pipeline: a function enters as a [`provider::JetProvider`]
//! (typically an [`expr::ExprFunction`]), order-`l` Taylor polynomials are
//! taken at lattice points and blended through a smooth periodic partition
//! of unity ([`smoothing::build_stilde`]), and the result is a closed-form
//! [`smoothing::SmoothedFunction`] whose jets, support, and tensor rank are
//! exactly inspectable. The [`harness`] module turns the quantitative
//! statements about these operators into machine-checkable reports.

pub mod bump;
pub mod calculus;
pub mod domains;
pub mod dugundji;
pub mod error;
pub mod expr;
pub mod extension;
pub mod harness;
pub mod provider;
pub mod smoothing;

pub use error::{Error, Result};
