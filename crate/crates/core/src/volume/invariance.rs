use std::collections::BTreeSet;

use crate::charts::{
    assemble_system, chart_transition, cut_along_forest, tree_transition, with_forest, ChartError,
    ChartSystem, CutSurface, RowKind,
};
use crate::linalg::{rank_and_kernel, CMatrix};
use crate::scalar::{Complex, Real};
use crate::surface::FlatSurface;

use super::{kernel_density, VolumeError};

/// Densities of matched frames in two triangulations related by flips:
/// `frame` lives on `a`, its image under the transition on `b`.
pub fn flip_invariance<T: Real>(
    a: &FlatSurface<T>,
    b: &FlatSurface<T>,
    frame: &CMatrix<T>,
) -> Result<(T, T), VolumeError> {
    let sys_a = assemble_system(&cut_along_forest(a)?)?;
    let sys_b = assemble_system(&cut_along_forest(b)?)?;
    let l = chart_transition(a, b)?;
    let va = kernel_density(&sys_a, frame)?.value;
    let vb = kernel_density(&sys_b, &(l * frame))?.value;
    Ok((va, vb))
}

/// The system of a cut disk with one interior edge split in two, and the
/// embedding of the old edge numbers `(z, -z_e)`.
#[derive(Clone, Debug)]
pub struct IncreasedSystem<T: Real> {
    pub system: ChartSystem<T>,
    pub embedding: CMatrix<T>,
    pub edge: usize,
}

pub fn increased_system<T: Real>(cut: &CutSurface<T>, e0: usize) -> Result<IncreasedSystem<T>, VolumeError> {
    let s = cut.surface();
    if e0 >= s.num_half_edges() || s.is_forest_edge(e0) {
        return Err(VolumeError::EdgeNotInterior(e0));
    }
    let base = assemble_system(cut)?;
    let h = s.edge_id(e0);
    let (c, _) = cut.column(h);
    let n1 = base.num_columns();
    let r = base.num_rows();
    let zero = Complex::new(T::zero(), T::zero());
    let one = Complex::new(T::one(), T::zero());

    let mut rows = CMatrix::from_element(r + 1, n1 + 1, zero);
    rows.view_mut((0, 0), (r, n1)).copy_from(&base.rows);
    // the twin's triangle now sees the new column in place of -z_e
    let t = s.triangle_of(s.twin(h));
    rows[(t, c)] += one;
    rows[(t, n1)] += one;
    rows[(r, c)] = one;
    rows[(r, n1)] = one;

    let (rank, kernel) = rank_and_kernel(&rows, T::tolerances().rank);
    if kernel.ncols() != base.dim() {
        return Err(ChartError::DimensionMismatch {
            expected: base.rank + 1,
            found: rank,
        }
        .into());
    }
    let mut row_kind = base.row_kind.clone();
    row_kind.push(RowKind::Split(h));
    let mut column_map = base.column_map.clone();
    column_map.push(s.twin(h));

    let mut embedding = CMatrix::from_element(n1 + 1, n1, zero);
    for j in 0..n1 {
        embedding[(j, j)] = one;
    }
    embedding[(n1, c)] = -one;
    Ok(IncreasedSystem {
        system: ChartSystem {
            rows,
            row_kind,
            column_map,
            kernel,
            rank,
            translation: base.translation,
        },
        embedding,
        edge: h,
    })
}

/// Ratio of the increased density of the embedded frame to the density of
/// the frame itself.
pub fn increased_constant<T: Real>(
    base: &ChartSystem<T>,
    increased: &IncreasedSystem<T>,
    frame: &CMatrix<T>,
) -> Result<T, VolumeError> {
    let nu = kernel_density(base, frame)?.value;
    let hat = kernel_density(&increased.system, &(&increased.embedding * frame))?.value;
    Ok(hat / nu)
}

/// Densities of one surface in the charts of two erasing forests.
#[derive(Clone, Debug)]
pub struct TreeComparison<T> {
    pub value1: T,
    pub value2: T,
    pub ratio: T,
}

/// Compare the densities of a frame in the chart of `tree1` and its image
/// in the chart of `tree2`. Without a frame the canonical kernel basis of
/// the first chart is used.
pub fn cut_glue_invariance<T: Real>(
    surface: &FlatSurface<T>,
    tree1: &BTreeSet<usize>,
    tree2: &BTreeSet<usize>,
    frame: Option<&CMatrix<T>>,
) -> Result<TreeComparison<T>, VolumeError> {
    let s1 = with_forest(surface, tree1)?;
    let s2 = with_forest(surface, tree2)?;
    let sys1 = assemble_system(&cut_along_forest(&s1)?)?;
    let sys2 = assemble_system(&cut_along_forest(&s2)?)?;
    let h = tree_transition(&s1, tree2)?;
    let frame = frame.cloned().unwrap_or_else(|| sys1.kernel.clone());
    let value1 = kernel_density(&sys1, &frame)?.value;
    let value2 = kernel_density(&sys2, &(h * &frame))?.value;
    Ok(TreeComparison {
        value1,
        value2,
        ratio: value2 / value1,
    })
}
