//! Desk-scale toolkit for the theory of very large dense graphs.
//!
//! The crate provides exact, oracle-checked building blocks for:
//! - homomorphism/embedding counts and densities ([`homcount`]);
//! - step functions and general symmetric kernels on `[0,1]` ("graphons"),
//!   their densities and random graphs sampled from them ([`graphon`]);
//! - cut norms and cut distances with certified lower/upper brackets
//!   ([`cutdist`]);
//! - sampling-oracle weak regularity: similarity distances, representative
//!   sets, Voronoi partitions, quotients and a max-cut pipeline
//!   ([`regularity`]);
//! - ground-state energies, multiway cuts and partition functions
//!   ([`energy`]);
//! - the gluing algebra of partially labeled graphs: connection matrices,
//!   positivity certificates and density inequalities ([`algebra`]);
//! - distribution-level sampling, neighborhood statistics, concentration
//!   and quasirandomness harnesses ([`sampling`]).
//!
//! Everything randomized takes an explicit seed and is reproducible;
//! exact routines advertise their size caps and return
//! [`error::Error::SizeBound`]/[`error::Error::WorkBound`] beyond them.

pub mod algebra;
pub mod canon;
pub mod checks;
pub mod cutdist;
pub mod energy;
pub mod error;
pub mod gen;
pub mod graph;
pub mod graphon;
pub mod homcount;
pub mod regularity;
pub mod sampling;

pub use error::{Error, Result};
