//! Elementary moves on geometric triangulations: flips, Delaunay
//! flipping, segment tracing through developing polygons, segment
//! insertion and flip paths between triangulations of one metric.

mod insert;
mod moves;
mod path;
mod trace;

use thiserror::Error;

use crate::surface::SurfaceError;

pub use insert::insert_segment;
pub use moves::{
    check_property_q, delaunay, delaunay_slack, flip, is_delaunay, is_flippable, FlipMove,
    parse_records, replay_records, FlipPath, FlipRecord, PropertyQ,
};
pub use path::{
    exchange_tree, flip_path, flip_path_via_delaunay, identify, locate_half_edge, Exchange,
};
pub use trace::{trace_segment, DevelopingPolygon, Trace};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TraceError {
    #[error("half-edge {0} does not exist")]
    UnknownCorner(usize),
    #[error("the segment is empty")]
    ZeroLength,
    #[error("direction is not inside the sector of corner {corner}")]
    NotInSector { corner: usize },
    #[error("segment hits vertex {vertex} at t = {t}")]
    HitsVertexEarly { vertex: usize, t: f64 },
    #[error("segment does not end at a vertex")]
    DoesNotTerminateAtVertex,
    #[error("segment crosses forest edge {edge}")]
    ExitsThroughForest { edge: usize },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FlipError {
    #[error("edge {0} does not exist")]
    UnknownEdge(usize),
    #[error("edge {0} belongs to the forest")]
    ForestEdge(usize),
    #[error("edge {0} is not flippable")]
    NotFlippable(usize),
    #[error("no termination after {flips} flips")]
    NonTermination { flips: usize },
    #[error("property Q fails (witness cycle through half-edges {witness:?})")]
    PropertyQViolated { witness: Vec<usize> },
    #[error("crossing number did not decrease ({before} -> {after})")]
    NoProgress { before: usize, after: usize },
    #[error("surfaces do not share the same metric: {0}")]
    NotSameMetric(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("not a spanning tree: {0}")]
    NotSpanningTree(String),
    #[error("replay mismatch at move {0}")]
    ReplayMismatch(usize),
    #[error("flip path file: {0}")]
    Format(String),
    #[error(transparent)]
    Trace(#[from] TraceError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}
