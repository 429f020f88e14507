//! Filtered Khovanov-type link homologies `U_{h,t}` over Q, F_p and Z.
//!
//! The pipeline is: a [`LinkDiagram`] (from a PD code or a braid word) is
//! resolved into the cube of resolutions for the Frobenius algebra
//! `A_{h,t} = R[x]/(x^2 - h x - t)`, giving a [`FilteredComplex`]. The complex
//! is optionally shrunk by filtered Gaussian elimination, then its homology,
//! filtration profile and Rasmussen-type s-invariant are read off.

// Ring operations take the ring by reference, so `from_*` constructors
// are methods; tuple-heavy signatures stay internal.
#![allow(clippy::wrong_self_convention, clippy::type_complexity)]

pub mod cli;
pub mod cube;
pub mod error;
pub mod exactalg;
pub mod frobenius;
pub mod homology;
pub mod invariant;
pub mod linkio;
pub mod reduce;

pub use error::{Error, Result};
