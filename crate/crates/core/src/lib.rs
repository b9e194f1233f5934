//! Exact computations of mod-p reductions of two-dimensional crystalline
//! representations of unramified p-adic fields.
//!
//! The layers build on each other: [`scalar`] exact coefficients,
//! [`product_ring`] tuples and matrices with the Frobenius shift,
//! [`filtered`] filtered phi-modules, [`characters`] and [`reduction`] for the
//! character calculus, [`wach`] for truncated series, and [`families`] for the
//! concrete families and the analysis pipeline.

pub mod characters;
pub mod error;
pub mod families;
pub mod filtered;
pub mod product_ring;
pub mod reduction;
pub mod scalar;
pub mod wach;

pub use characters::{CrystallineCharacter, EllSData};
pub use error::{Error, Result};
pub use families::{analyze, AnalysisReport, AnalyzeOptions, FamilySpec, FamilyType, Fixture};
pub use filtered::{FilteredPhiModule, FiltrationStep};
pub use product_ring::{ProductMatrix, Ring, Tuple};
pub use reduction::{InertiaCharacter, SemisimpleReduction};
pub use scalar::{RootOfUnity, Scalar};
pub use wach::{TruncSeries, WachData};
