//! Topological multigraph drawings: exact validation, lenses, drawing
//! styles, surgeries, bisection and the explicit Crossing Lemma bounds.

pub mod bounds;
pub mod constructions;
pub mod decomposition;
pub mod drawing;
pub mod geometry;
pub mod io;
pub mod styles;
pub mod transforms;
