use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::linalg::{rank_and_kernel, CMatrix, CVector};
use crate::scalar::{cross, unit, Complex, Real};
use crate::surface::{forest_components, rotation_side, FlatSurface, SurfaceError};

use super::{is_erasing, ChartError};

/// The two sides of a slit forest edge. Both half-edges follow the boundary
/// orientation and satisfy `z(abar) = -e^{i theta} z(a)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryPair<T> {
    pub edge: usize,
    pub a: usize,
    pub abar: usize,
    pub theta: T,
}

/// A surface slit open along its forest.
///
/// Half-edge ids are those of the surface; forest half-edges become
/// boundary half-edges without a partner. Each cut edge gets one column:
/// interior edges are represented by their smaller half-edge (the other
/// side counts with sign -1), boundary half-edges by themselves.
#[derive(Clone, Debug)]
pub struct CutSurface<T> {
    surface: FlatSurface<T>,
    columns: Vec<usize>,
    column_of: Vec<(usize, i8)>,
    pairs: Vec<BoundaryPair<T>>,
    trees: usize,
}

pub fn cut_along_forest<T: Real>(surface: &FlatSurface<T>) -> Result<CutSurface<T>, ChartError> {
    if !is_erasing(surface, surface.forest()).erasing {
        return Err(ChartError::ForestNotErasing);
    }
    let nh = surface.num_half_edges();
    let mut columns = Vec::new();
    let mut column_of = vec![(usize::MAX, 0i8); nh];
    for h in 0..nh {
        let tw = surface.twin(h);
        if surface.is_forest_edge(h) {
            column_of[h] = (columns.len(), 1);
            columns.push(h);
        } else if h < tw {
            column_of[h] = (columns.len(), 1);
            column_of[tw] = (columns.len(), -1);
            columns.push(h);
        }
    }
    let pairs = surface
        .forest()
        .iter()
        .map(|&e| {
            let (a, theta) = rotation_side(surface, surface.forest(), e);
            BoundaryPair {
                edge: e,
                a,
                abar: surface.twin(a),
                theta,
            }
        })
        .collect();
    let components = forest_components(surface, surface.forest()).ok_or(ChartError::ForestNotErasing)?;
    let trees = components.iter().copied().max().map_or(0, |m| m + 1);
    Ok(CutSurface {
        surface: surface.clone(),
        columns,
        column_of,
        pairs,
        trees,
    })
}

impl<T: Real> CutSurface<T> {
    pub fn surface(&self) -> &FlatSurface<T> {
        &self.surface
    }

    /// `N1`, the number of edges of the cut triangulation.
    pub fn num_edges(&self) -> usize {
        self.columns.len()
    }

    /// `N2`, the number of triangles.
    pub fn num_triangles(&self) -> usize {
        self.surface.num_triangles()
    }

    /// Triangles plus boundary pairs.
    pub fn num_rows(&self) -> usize {
        self.num_triangles() + self.pairs.len()
    }

    /// `m`, trees of the forest counting isolated points.
    pub fn num_trees(&self) -> usize {
        self.trees
    }

    pub fn pairs(&self) -> &[BoundaryPair<T>] {
        &self.pairs
    }

    /// Column index to representative half-edge.
    pub fn columns(&self) -> &[usize] {
        &self.columns
    }

    /// Column and sign with `vec(h) = sign * z[column]`.
    pub fn column(&self, h: usize) -> (usize, i8) {
        self.column_of[h]
    }

    pub fn is_boundary(&self, h: usize) -> bool {
        self.surface.is_forest_edge(h)
    }

    /// Every cone angle in `2 pi N` (the rank-deficient case).
    pub fn is_translation(&self) -> bool {
        self.surface.is_translation()
    }

    /// Predicted kernel dimension, `2g + n - 1` or `2g + n - 2`.
    pub fn expected_dimension(&self) -> usize {
        let s = &self.surface;
        let base = 2 * s.genus() + s.num_vertices();
        if self.is_translation() {
            base - 1
        } else {
            base - 2
        }
    }
}

/// The edge numbers of the surface itself.
pub fn solution_vector<T: Real>(cut: &CutSurface<T>) -> CVector<T> {
    CVector::from_iterator(
        cut.num_edges(),
        cut.columns.iter().map(|&h| cut.surface.vector(h)),
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowKind {
    Triangle(usize),
    BoundaryPair(usize),
    /// Row `z(e') + z(e'') = 0` tying the two sides of a split edge.
    Split(usize),
}

/// The normalized system `S_T` of a cut surface with its kernel.
#[derive(Clone, Debug)]
pub struct ChartSystem<T: Real> {
    pub rows: CMatrix<T>,
    pub row_kind: Vec<RowKind>,
    pub column_map: Vec<usize>,
    pub kernel: CMatrix<T>,
    pub rank: usize,
    /// Rank-deficient case (all angles in `2 pi N`).
    pub translation: bool,
}

pub fn assemble_system<T: Real>(cut: &CutSurface<T>) -> Result<ChartSystem<T>, ChartError> {
    let s = &cut.surface;
    let nrows = cut.num_rows();
    let zero = Complex::new(T::zero(), T::zero());
    let one = Complex::new(T::one(), T::zero());
    let mut rows = CMatrix::from_element(nrows, cut.num_edges(), zero);
    let mut row_kind = Vec::with_capacity(nrows);
    for (t, tri) in s.triangles().iter().enumerate() {
        for &h in tri {
            let (c, sign) = cut.column(h);
            rows[(t, c)] += one * T::of(f64::from(sign));
        }
        row_kind.push(RowKind::Triangle(t));
    }
    for (k, pair) in cut.pairs.iter().enumerate() {
        let r = s.num_triangles() + k;
        rows[(r, cut.column(pair.abar).0)] = one;
        rows[(r, cut.column(pair.a).0)] = unit(pair.theta);
        row_kind.push(RowKind::BoundaryPair(pair.edge));
    }
    let (rank, kernel) = rank_and_kernel(&rows, T::tolerances().rank);
    let translation = cut.is_translation();
    let expected = if translation { nrows - 1 } else { nrows };
    if rank != expected || kernel.ncols() != cut.expected_dimension() {
        return Err(ChartError::DimensionMismatch {
            expected,
            found: rank,
        });
    }
    Ok(ChartSystem {
        rows,
        row_kind,
        column_map: cut.columns.clone(),
        kernel,
        rank,
        translation,
    })
}

impl<T: Real> ChartSystem<T> {
    pub fn dim(&self) -> usize {
        self.kernel.ncols()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.nrows()
    }

    pub fn num_columns(&self) -> usize {
        self.rows.ncols()
    }

    /// Row weights `s` with `s * rows = 0` in the rank-deficient case:
    /// `+1` on triangle rows, `-1` on pair rows.
    pub fn coordinate_sum(&self) -> Vec<T> {
        self.row_kind
            .iter()
            .map(|k| match k {
                RowKind::Triangle(_) => T::one(),
                RowKind::BoundaryPair(_) | RowKind::Split(_) => -T::one(),
            })
            .collect()
    }

    /// `max |(rows z)_i| / (|rows| |z|)`.
    pub fn residual(&self, z: &CVector<T>) -> T {
        let r = &self.rows * z;
        let scale = self.rows.norm() * z.norm();
        if scale == T::zero() {
            return T::zero();
        }
        r.norm() / scale
    }

    /// Stable hash of the matrix entries rounded to 12 digits.
    pub fn fingerprint(&self) -> u64 {
        let mut hasher = DefaultHasher::new();
        self.rows.shape().hash(&mut hasher);
        for z in self.rows.iter() {
            for x in [z.re, z.im] {
                let rounded = (x.as_f64() * 1e12).round() as i64;
                rounded.hash(&mut hasher);
            }
        }
        hasher.finish()
    }

    pub fn dump(&self) -> ChartDump {
        let pairs = |m: &CMatrix<T>| {
            (0..m.nrows())
                .map(|i| {
                    (0..m.ncols())
                        .map(|j| [m[(i, j)].re.as_f64(), m[(i, j)].im.as_f64()])
                        .collect()
                })
                .collect()
        };
        ChartDump {
            rows: pairs(&self.rows),
            row_kind: self
                .row_kind
                .iter()
                .map(|k| match k {
                    RowKind::Triangle(t) => format!("triangle:{t}"),
                    RowKind::BoundaryPair(e) => format!("pair:{e}"),
                    RowKind::Split(e) => format!("split:{e}"),
                })
                .collect(),
            column_map: self.column_map.clone(),
            kernel: pairs(&self.kernel),
            rank: self.rank,
        }
    }
}

/// Serializable form of a [`ChartSystem`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartDump {
    pub rows: Vec<Vec<[f64; 2]>>,
    pub row_kind: Vec<String>,
    pub column_map: Vec<usize>,
    pub kernel: Vec<Vec<[f64; 2]>>,
    pub rank: usize,
}

/// Rebuild the surface whose edge numbers are `z`.
pub fn surface_from_solution<T: Real>(
    cut: &CutSurface<T>,
    system: &ChartSystem<T>,
    z: &CVector<T>,
) -> Result<FlatSurface<T>, ChartError> {
    if z.len() != cut.num_edges() {
        return Err(ChartError::WrongLength {
            expected: cut.num_edges(),
            found: z.len(),
        });
    }
    let residual = system.residual(z);
    if residual > T::of(1e-8) {
        return Err(ChartError::NotInKernel {
            residual: residual.as_f64(),
        });
    }
    let s = &cut.surface;
    let vectors: Vec<Complex<T>> = (0..s.num_half_edges())
        .map(|h| {
            let (c, sign) = cut.column(h);
            z[c] * T::of(f64::from(sign))
        })
        .collect();
    let eps = T::tolerances().convexity;
    for (t, tri) in s.triangles().iter().enumerate() {
        let (a, b) = (vectors[tri[0]], vectors[tri[1]]);
        if !(cross(a, b) > eps * a.norm_sqr().max(b.norm_sqr())) {
            return Err(ChartError::DegenerateTriangle(t));
        }
    }
    match s.with_geometry(vectors, s.forest().clone()) {
        Ok(surface) => Ok(surface),
        Err(SurfaceError::OrientationViolation { triangle }) => {
            Err(ChartError::DegenerateTriangle(triangle))
        }
        Err(e) => Err(e.into()),
    }
}
