//! Arc and curve graphs of punctured surfaces.
//!
//! Everything is exact integer combinatorics: surfaces are ideal
//! triangulations, arcs and simple closed curves are normal (edge
//! intersection) coordinates, and graph distances are certified
//! intervals rather than floating estimates. The `oracle` module is an
//! independent geometric model of the once-punctured torus used to
//! cross-check the coordinate machinery; it shares no code with it.

pub mod error;
pub mod oracle;
pub mod surface;
pub mod coords;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
