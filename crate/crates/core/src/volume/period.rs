use std::collections::VecDeque;

use crate::charts::{assemble_system, cut_along_forest};
use crate::linalg::{real_jacobian, CMatrix};
use crate::surface::FlatSurface;
use crate::scalar::Real;

use super::{kernel_density, VolumeError};

/// Edges off a spanning tree of the dual graph grown breadth-first from
/// `root`. Cutting along the tree's dual edges leaves a disk, so the
/// returned `2g + n - 1` edges give period coordinates.
pub fn primitive_family<T: Real>(surface: &FlatSurface<T>, root: usize) -> Result<Vec<usize>, VolumeError> {
    let nt = surface.num_triangles();
    if root >= nt {
        return Err(VolumeError::NoPrimitiveFamily);
    }
    let mut seen = vec![false; nt];
    let mut crossed = vec![false; surface.num_half_edges()];
    let mut queue = VecDeque::from([root]);
    seen[root] = true;
    while let Some(t) = queue.pop_front() {
        for &h in &surface.triangles()[t] {
            let u = surface.triangle_of(surface.twin(h));
            if !seen[u] {
                seen[u] = true;
                crossed[surface.edge_id(h)] = true;
                queue.push_back(u);
            }
        }
    }
    let family: Vec<usize> = surface.edges().filter(|&e| !crossed[e]).collect();
    let expected = 2 * surface.genus() + surface.num_vertices() - 1;
    if seen.iter().any(|s| !s) || family.len() != expected {
        return Err(VolumeError::NoPrimitiveFamily);
    }
    Ok(family)
}

/// Ratio of the kernel density of the canonical frame to the Lebesgue
/// density of the same frame in the period coordinates of `family`.
pub fn period_lambda<T: Real>(surface: &FlatSurface<T>, family: &[usize]) -> Result<T, VolumeError> {
    if !surface.is_translation() || !surface.forest().is_empty() {
        return Err(VolumeError::NotTranslationSurface);
    }
    let cut = cut_along_forest(surface)?;
    let system = assemble_system(&cut)?;
    let frame = &system.kernel;
    let mut periods = CMatrix::zeros(family.len(), frame.ncols());
    for (i, &e) in family.iter().enumerate() {
        let (c, sign) = cut.column(e);
        let row = frame.row(c).map(|x| x * T::of(f64::from(sign)));
        periods.row_mut(i).copy_from(&row);
    }
    let nu = kernel_density(&system, frame)?.value;
    Ok(nu / real_jacobian(&periods))
}

/// `lambda` at each surface, all sharing the triangulation of the first.
#[derive(Clone, Debug)]
pub struct PeriodReport<T> {
    pub family: Vec<usize>,
    pub lambdas: Vec<T>,
    /// `(max - min) / max` over the samples.
    pub spread: T,
}

pub fn period_comparison<T: Real>(
    samples: &[FlatSurface<T>],
    root: usize,
) -> Result<PeriodReport<T>, VolumeError> {
    let first = samples.first().ok_or(VolumeError::SamplingFailed(0))?;
    if !first.is_translation() || !first.forest().is_empty() {
        return Err(VolumeError::NotTranslationSurface);
    }
    let family = primitive_family(first, root)?;
    let lambdas = samples
        .iter()
        .map(|s| period_lambda(s, &family))
        .collect::<Result<Vec<T>, _>>()?;
    let max = lambdas.iter().copied().fold(T::zero(), |m, x| if x > m { x } else { m });
    let min = lambdas.iter().copied().fold(max, |m, x| if x < m { x } else { m });
    Ok(PeriodReport {
        family,
        lambdas,
        spread: (max - min) / max,
    })
}
