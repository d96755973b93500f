//! Geodesic traffic flow on growing graph families.
//!
//! The crate computes exact (rational) or fast (floating point) geodesic
//! traffic loads, decides membership in the asymptotic α-core of a family
//! `X_0 ⊂ X_1 ⊂ …`, evaluates the closed forms for branching trees, and
//! provides the Poincaré-disk machinery used to classify limiting boundary
//! measures.
//!
//! The crate is `no_std` (it needs `alloc`). File IO, the CLI and report
//! formats live in `corescope-cli`.

#![cfg_attr(not(any(test, feature = "std")), no_std)]

extern crate alloc;

pub mod boundary;
pub mod core_detector;
pub mod error;
pub mod generators;
pub mod graph;
pub mod hyperbolicity;
pub mod scalar;
pub mod tessellation;
pub mod traffic;
pub mod tree_analytics;

pub use error::{Error, Result};
pub use graph::{GeodesicData, Graph, Labels};
pub use scalar::{Mode, Scalar};

/// Seed used whenever the caller does not supply one.
pub const DEFAULT_SEED: u64 = 0x9E37_79B9_7F4A_7C15;
