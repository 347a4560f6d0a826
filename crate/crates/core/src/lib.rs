//! Low-redundancy sparse linear arrays: closed-form generation, co-array
//! analysis, mutual coupling and co-array MUSIC direction finding.

pub mod coarray;
pub mod coupling;
pub mod doa;
pub mod error;
pub mod geometry;
pub mod oracle;
pub mod sweep;

pub use coarray::{analyze, difference_coarray, CoarrayReport, DiffCoarray};
pub use coupling::{build_coupling_matrix, coupling_leakage, CouplingMatrix, CouplingModel};
pub use error::{Error, Result};
pub use geometry::{ArrayFamily, SensorArray, SpacingArray};
