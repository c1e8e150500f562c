//! Left-invariant Einstein metrics on `SU(n)`.
//!
//! The crate builds two families of generator bases for `su(n)`, extracts
//! real structure constants, evaluates the Levi-Civita connection, Riemann
//! and Ricci tensors of class-diagonal left-invariant metrics, and solves
//! the resulting Einstein conditions both in closed form and by multistart
//! Newton iteration. Inequivalent solutions are catalogued per `n` using the
//! scale-free invariant `I1 = |Riem|^2 / lambda^2`.
//!
//! Everything here is pure computation over `alloc`; file formats and the
//! command-line front end live in the companion `sun-einstein` crate.

#![no_std]

extern crate alloc;

pub mod catalog;
pub mod cmatrix;
pub mod curvature;
mod error;
pub mod liealg;
pub mod linalg;
pub mod solver;

pub use catalog::{case_classify, enumerate_metrics, Case, CatalogEntry, EquivalenceClass};
pub use curvature::{
    Ansatz, Connection, CurvatureBundle, EinsteinSummary, FrameBrackets, MetricSpec, Tolerances,
};
pub use error::{Error, Result};
pub use liealg::{
    build_scheme1_basis, build_scheme2_basis, structure_constants, validate_basis,
    BasisReport, GeneratorBasis, GeneratorClass, Scheme, StructureConstants,
};
pub use solver::{
    closed_form_scheme1, closed_form_scheme2, multistart_search, newton_solve, scheme1_system,
    scheme2_system, EinsteinRecord, EinsteinSystem, Provenance, SearchConfig,
    SearchOutcome,
};
