//! Independent geometric oracles.
//!
//! These modules cross-check the combinatorial machinery and share no
//! code with it: arcs on the once-punctured torus are straight segments
//! in the plane counted by exact integer geometry, the arc graph of
//! that surface is reproduced as a graph on rational slopes, and
//! annulus arcs are counted in the universal cover.

pub mod annulus;
pub mod farey;
pub mod square;

pub use farey::FareyGraph;
pub use square::Slope;
