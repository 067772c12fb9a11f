//! Genus-zero surfaces: leader charts, the Hermitian area form and the
//! comparison of the chart volume with the complex hyperbolic volume.

mod chart;
mod density;

use thiserror::Error;

use crate::charts::ChartError;
use crate::volume::VolumeError;

pub use chart::{area_form, leader_chart, normalize_form, AreaForm, LeaderChart, Normalization};
pub use density::{
    chart_constant, hyp_density, mu1_density, mu1_density_with, conjugate_frame, quadric, ratio_scan,
    RatioScan,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SphereError {
    #[error("surface has genus {0}, expected a sphere")]
    NotGenusZero(usize),
    #[error("{0} vertices; at least 4 are needed")]
    TooFewVertices(usize),
    #[error("vertex {0} does not exist")]
    UnknownVertex(usize),
    #[error("no tree of the triangulation fits the chosen last vertex: {0}")]
    TreeUnrealizable(String),
    #[error("leader edge numbers do not determine the chart")]
    LeadersDependent,
    #[error("area form has signature ({positive}, {negative}) with {zero} null directions")]
    SignatureUnexpected {
        positive: usize,
        negative: usize,
        zero: usize,
    },
    #[error("frame is not tangent to the unit-area quadric (residual {residual:e})")]
    FrameNotTangent { residual: f64 },
    #[error("point has f = {value}, expected -1")]
    PointNotOnQ1 { value: f64 },
    #[error("frame has shape {found:?}, expected {expected:?}")]
    FrameShape {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("restricted metric is not positive definite")]
    MetricNotPositive,
    #[error(transparent)]
    Chart(#[from] ChartError),
    #[error(transparent)]
    Volume(#[from] VolumeError),
}
