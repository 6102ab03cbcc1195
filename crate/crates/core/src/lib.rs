//! Conceptual scaling errors of binary data scalings.
//!
//! A scaling of a formal context `K` is a pair `(σ, S)` of a scale context
//! `S` and an object map `σ: G_K → G_S`. It is a *scale-measure* when the
//! preimage of every extent of `S` is an extent of `K`. This crate measures
//! how far a scaling (typically the factor of a Boolean matrix
//! factorization) is from being one:
//!
//! * [`measure`]: verification, comparison and normal forms of scale-measures;
//! * [`conceptual`]: the conceptual scaling error, the attribute scaling
//!   error and the decompositions built from them;
//! * [`bmf`]: penalized-NMF binary factorization and matrix error metrics;
//! * [`report`]: the combined per-dataset error report.

pub mod bitset;
pub mod bmf;
pub mod conceptual;
pub mod context;
pub mod cxt;
pub mod error;
pub mod fixtures;
pub mod lattice;
pub mod measure;
pub mod report;
pub mod scaling;

pub use bitset::{AttributeSet, ObjectSet};
pub use context::{apposition, sigma_context, FormalContext, ObjectMap};
pub use error::{Error, Result};
pub use lattice::{ClosureSystem, ConceptLattice, DEFAULT_CAP};
