//! Difference families in finite abelian groups.
//!
//! The crate provides:
//!
//! - finite abelian groups as products of cyclic factors, with subgroups and
//!   quotients ([`group`]);
//! - the group algebra with exact integer coefficients, its involution, norm,
//!   augmentation and the periodic autocorrelation function ([`algebra`]);
//! - characters, the discrete Fourier transform and the power spectral
//!   density ([`fourier`]);
//! - parameter sets and difference-family verification by two independent
//!   routes ([`family`]);
//! - the PSD-test and subgroup compression used to prune searches
//!   ([`filter`]);
//! - exhaustive, fingerprint-join and annealing searches ([`search`]);
//! - the regular representation and the Goethals-Seidel, D-optimal, Legendre
//!   and Golay block constructions with exact verifiers ([`matrices`]).
//!
//! All verification paths use exact integer arithmetic; floating point is
//! confined to Fourier analysis, where every check carries an explicit
//! tolerance.

pub mod algebra;
pub mod error;
pub mod family;
pub mod filter;
pub mod fixtures;
pub mod fourier;
pub mod group;
pub mod matrices;
pub mod search;

pub use error::{Error, Result};
pub use group::{Element, GroupSpec, Subgroup};
