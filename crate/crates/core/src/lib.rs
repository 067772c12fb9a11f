//! Flat cone surfaces with a triangulation: half-edge storage, affine
//! charts on edge numbers, flips and flip paths, volume densities and the
//! sphere comparison.

pub mod charts;
pub mod flips;
pub mod linalg;
pub mod scalar;
pub mod sphere;
pub mod surface;
pub mod volume;

/// Double-precision surface.
pub type Surface = surface::FlatSurface<f64>;
/// Double-precision cut surface.
pub type Cut = charts::CutSurface<f64>;
/// Double-precision chart system.
pub type System = charts::ChartSystem<f64>;
/// Double-precision flip path.
pub type Path = flips::FlipPath<f64>;
