//! Contexts, systems and modalities as executable linear algebra.
//!
//! * [`model`]: rank-one projectors, contexts, modalities, density operators
//!   and Born probabilities.
//! * [`measurement`]: seeded sequential measurement with the repeatability update.
//! * [`gleason`]: frame-function checks and density-operator reconstruction.
//! * [`uhlhorn`]: certification and fitting of orthogonality-preserving ray maps.
//! * [`partition`]: {0,1} valuation search on Kochen-Specker systems.
//! * [`topology`]: unitary paths to permutation matrices and the orthogonal obstruction.

pub mod error;
pub mod gleason;
pub mod io;
pub mod measurement;
pub mod model;
pub mod numerics;
pub mod partition;
pub mod random;
pub mod topology;
pub mod uhlhorn;

pub use error::{Error, Result};
pub use model::{Context, ContextTransform, DensityOperator, Modality, Projector};
pub use numerics::{ComplexMatrix, ComplexVector, Tolerance};
