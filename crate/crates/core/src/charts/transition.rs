//! Linear maps between charts of the same surface.

use std::collections::BTreeSet;

use crate::flips::{identify, trace_segment, FlipError};
use crate::linalg::CMatrix;
use crate::scalar::{Complex, Real};
use crate::surface::FlatSurface;

use super::{cut_along_forest, develop_frames, is_erasing, ChartError};

fn undefined(e: FlipError) -> ChartError {
    ChartError::TransitionUndefined(e.to_string())
}

/// Matrix `M` with `z_target = M z_source` for two triangulations of one
/// surface carrying the same forest (for instance related by flips). Each
/// target edge is developed in the source as a sum of source edges.
pub fn chart_transition<T: Real>(
    source: &FlatSurface<T>,
    target: &FlatSurface<T>,
) -> Result<CMatrix<T>, ChartError> {
    if source.forest() != target.forest() || source.num_vertices() != target.num_vertices() {
        return Err(ChartError::NotSameMetric("forests or vertex sets differ".into()));
    }
    let cut1 = cut_along_forest(source)?;
    let cut2 = cut_along_forest(target)?;
    let zero = Complex::new(T::zero(), T::zero());
    let mut m = CMatrix::from_element(cut2.num_edges(), cut1.num_edges(), zero);
    let places = identify(source, target).map_err(undefined)?;
    for (c2, &k) in cut2.columns().iter().enumerate() {
        let (corner, w) = places[k].ok_or_else(|| {
            ChartError::TransitionUndefined(format!("half-edge {k} has no trace in the source"))
        })?;
        let trace = trace_segment(source, corner, w).map_err(|e| undefined(e.into()))?;
        for &(h, sign) in &trace.upper_chain {
            let (c1, s1) = cut1.column(h);
            m[(c2, c1)] += Complex::new(T::of(f64::from(sign * s1)), T::zero());
        }
    }
    Ok(m)
}

/// Matrix `H` with `z' = H z`, where `z` are the edge numbers of `surface`
/// and `z'` those of the same triangulation cut along `forest` instead.
pub fn tree_transition<T: Real>(
    surface: &FlatSurface<T>,
    forest: &BTreeSet<usize>,
) -> Result<CMatrix<T>, ChartError> {
    let check = is_erasing(surface, forest);
    if !check.erasing {
        return Err(ChartError::NotErasing {
            witness: check.witness,
        });
    }
    let reframed = super::with_forest(surface, forest)?;
    let frames = develop_frames(surface, forest).map_err(|witness| ChartError::NotErasing { witness })?;
    let cut1 = cut_along_forest(surface)?;
    let cut2 = cut_along_forest(&reframed)?;
    let zero = Complex::new(T::zero(), T::zero());
    let mut h = CMatrix::from_element(cut2.num_edges(), cut1.num_edges(), zero);
    for (c2, &k) in cut2.columns().iter().enumerate() {
        let (c1, s1) = cut1.column(k);
        h[(c2, c1)] = frames[surface.triangle_of(k)] * T::of(f64::from(s1));
    }
    Ok(h)
}
