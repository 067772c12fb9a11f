//! Volume densities on chart kernels induced by exact sequences, and the
//! numeric checks of their invariance under flips, tree changes, splitting
//! and the comparison with period coordinates.

mod density;
mod invariance;
mod period;
mod sample;

use thiserror::Error;

use crate::charts::ChartError;
use crate::flips::FlipError;
use crate::surface::SurfaceError;

pub use density::{default_complement, kernel_density, kernel_density_with, Convention, DensityReport};
pub use invariance::{
    cut_glue_invariance, flip_invariance, increased_constant, increased_system, IncreasedSystem,
    TreeComparison,
};
pub use period::{period_comparison, period_lambda, primitive_family, PeriodReport};
pub use sample::{perturb, sample_nearby};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VolumeError {
    #[error("frame columns are not in the kernel (relative residual {residual:e})")]
    FrameNotInKernel { residual: f64 },
    #[error("frame has shape {found:?}, expected {expected:?}")]
    FrameShape {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("rank {rank} of the {rows}-row system fits neither sequence")]
    RankCaseMismatch { rank: usize, rows: usize },
    #[error("edge {0} is not interior to the cut disk")]
    EdgeNotInterior(usize),
    #[error("not a translation surface with empty forest")]
    NotTranslationSurface,
    #[error("no primitive edge family found")]
    NoPrimitiveFamily,
    #[error("no admissible sample after {0} attempts")]
    SamplingFailed(usize),
    #[error(transparent)]
    Chart(#[from] ChartError),
    #[error(transparent)]
    Flip(#[from] FlipError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}
