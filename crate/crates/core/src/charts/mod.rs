//! Affine charts: the surface slit open along its erasing forest, the
//! normalized linear system on edge numbers, and reconstruction from
//! solutions.

mod cut;
mod forest;
mod transition;

use thiserror::Error;

use crate::surface::SurfaceError;

pub use cut::{
    assemble_system, cut_along_forest, solution_vector, surface_from_solution, BoundaryPair,
    ChartDump, ChartSystem, CutSurface, RowKind,
};
pub use forest::{
    boundary_rotation, develop_frames, is_erasing, spanning_forest, with_forest, ErasingCheck,
};
pub use transition::{chart_transition, tree_transition};
pub(crate) use forest::develop;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChartError {
    #[error("forest is not erasing (witness cycle through half-edges {witness:?})")]
    NotErasing { witness: Vec<usize> },
    #[error("the surface's forest is not erasing")]
    ForestNotErasing,
    #[error("partition cannot be realized by trees: {0}")]
    PartitionUnrealizable(String),
    #[error("edge {0} is not a forest edge")]
    NotForestEdge(usize),
    #[error("forest edge {edge}: vectors disagree with the angle-sum rotation (residual {residual:e})")]
    InconsistentRotation { edge: usize, residual: f64 },
    #[error("numerical rank {found} differs from the predicted {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("vector is not in the kernel (relative residual {residual:e})")]
    NotInKernel { residual: f64 },
    #[error("solution length {found} differs from the {expected} chart columns")]
    WrongLength { expected: usize, found: usize },
    #[error("triangle {0} degenerates: the point left the chart")]
    DegenerateTriangle(usize),
    #[error("surfaces do not share the same metric: {0}")]
    NotSameMetric(String),
    #[error("transition undefined: {0}")]
    TransitionUndefined(String),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}
