//! Flat surfaces with conical singularities sourced by cosmic strings.
//!
//! - [`cone_geometry`]: tension ↔ angle conversions and Gauss-Bonnet checks
//! - [`flat_structure`]: quadratic-differential local models and cone-metric probes
//! - [`observational`]: tension bound catalog, network sampling and the genus verdict
//! - [`foliation`]: rule engine over compact-leaf scenarios
//! - [`report`]: text/CSV/SVG rendering behind the `conefold` CLI

pub mod cone_geometry;
pub mod error;
pub mod flat_structure;
pub mod foliation;
pub mod observational;
pub mod quadrature;
pub mod report;
pub mod surface_file;

pub use error::{Error, Result};
