//! Exact central and standardized moments of the aperiodic-autocorrelation
//! demerit factor of random binary sequences, as closed-form
//! quasi-polynomials in the sequence length.
//!
//! The pipeline: enumerate one representative per isomorphism class of the
//! contributory partitions of `[p] x [2] x [2]` ([`classify`]), weight each
//! by its orbit size under the wreath-product symmetry group ([`wreath`]),
//! count the balanced distinct-valued assignments of each representative as
//! an exact quasi-polynomial by lattice-point counting ([`latcount`]), and
//! sum ([`moments`]). Every closed form is cross-checked against the
//! exhaustive brute-force oracle in [`seqstat`].

pub mod classify;
pub mod cli;
pub mod error;
pub mod latcount;
pub mod moments;
pub mod partitions;
pub mod qpoly;
pub mod rat;
pub mod seqstat;
pub mod wreath;

pub use error::{Error, Result};
