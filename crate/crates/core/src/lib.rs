//! Core calculus for sampling orbits of nilrotations along functions from a
//! Hardy field and measuring how well they equidistribute.
//!
//! The crate is split along the pipeline:
//!
//! * [`dd`] — double-double arithmetic used everywhere fractional parts of
//!   large values must survive,
//! * [`hardy`] — the exact symbolic term class `c·t^a·log(t)^b` with growth
//!   comparison, differentiation and high-precision evaluation,
//! * [`normal_form`] — growth-separated, derivative-closed normal forms and
//!   the associated summation-scheme chooser,
//! * [`nilgroup`] — upper-unitriangular matrix groups, their integer lattice
//!   and fundamental-domain reduction,
//! * [`orbit`] — compilation of generator/exponent families into streaming
//!   point generators,
//! * [`equidist`] — weighted Weyl sums, discrepancy and correlation
//!   statistics with the torus-versus-full-space criterion checker.
//!
//! The crate is `no_std` (with `alloc`); everything that touches files,
//! threads or the command line lives in the companion binary crate.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod dd;
pub mod equidist;
pub mod hardy;
pub mod nilgroup;
pub mod normal_form;
pub mod orbit;
pub mod scalar;

pub use dd::Dd;
pub use hardy::{GrowthRelation, HardyError, HardyExpr, HardyTerm, Precision};
pub use normal_form::{
    CharacteristicPair, NormalForm, NormalFormError, PropertyReport, WScheme,
};
pub use scalar::Scalar;
