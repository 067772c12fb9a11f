use std::collections::BTreeSet;

use nalgebra::SymmetricEigen;

use crate::charts::{assemble_system, cut_along_forest, is_erasing, solution_vector, with_forest, ChartSystem, CutSurface};
use crate::linalg::{canonical_basis, numeric_rank, CMatrix, CVector};
use crate::scalar::{cross, modulus, Complex, Real};
use crate::surface::FlatSurface;

use super::SphereError;

/// Chart of a genus-zero surface by the edge numbers of its leaders.
///
/// The forest is a spanning tree of every vertex but `last_vertex` (the
/// leaders) plus one follower edge reaching `last_vertex`.
#[derive(Clone, Debug)]
pub struct LeaderChart<T: Real> {
    /// The input surface reframed along the leader tree.
    pub surface: FlatSurface<T>,
    pub cut: CutSurface<T>,
    pub system: ChartSystem<T>,
    pub last_vertex: usize,
    pub leaders: Vec<usize>,
    pub follower: usize,
    pub coordinates: CVector<T>,
    /// All edge numbers as linear functions of the leader coordinates.
    pub expansion: CMatrix<T>,
}

pub fn leader_chart<T: Real>(surface: &FlatSurface<T>, last_vertex: usize) -> Result<LeaderChart<T>, SphereError> {
    let n = surface.num_vertices();
    if surface.genus() != 0 {
        return Err(SphereError::NotGenusZero(surface.genus()));
    }
    if n < 4 {
        return Err(SphereError::TooFewVertices(n));
    }
    if last_vertex >= n {
        return Err(SphereError::UnknownVertex(last_vertex));
    }
    let (leaders, follower) = leader_tree(surface, last_vertex)?;
    let mut forest: BTreeSet<usize> = leaders.iter().copied().collect();
    forest.insert(follower);
    if !is_erasing(surface, &forest).erasing {
        return Err(SphereError::TreeUnrealizable("tree is not erasing".into()));
    }
    let reframed = with_forest(surface, &forest)?;
    let cut = cut_along_forest(&reframed)?;
    let system = assemble_system(&cut)?;

    let zero = Complex::new(T::zero(), T::zero());
    let mut select = CMatrix::from_element(leaders.len(), system.num_columns(), zero);
    for (i, &e) in leaders.iter().enumerate() {
        let (c, sign) = cut.column(e);
        select[(i, c)] = Complex::new(T::of(f64::from(sign)), T::zero());
    }
    let square = &select * &system.kernel;
    if numeric_rank(&square, T::tolerances().rank) < leaders.len() {
        return Err(SphereError::LeadersDependent);
    }
    let inverse = square.try_inverse().ok_or(SphereError::LeadersDependent)?;
    let expansion = &system.kernel * inverse;
    let coordinates = &select * solution_vector(&cut);
    Ok(LeaderChart {
        surface: reframed,
        cut,
        system,
        last_vertex,
        leaders,
        follower,
        coordinates,
        expansion,
    })
}

fn leader_tree<T: Real>(surface: &FlatSurface<T>, last: usize) -> Result<(Vec<usize>, usize), SphereError> {
    let n = surface.num_vertices();
    let mut candidates: Vec<usize> = surface.forest().iter().copied().collect();
    candidates.extend(surface.edges().filter(|e| !surface.forest().contains(e)));
    let mut root: Vec<usize> = (0..n).collect();
    fn find(root: &mut [usize], mut x: usize) -> usize {
        while root[x] != x {
            root[x] = root[root[x]];
            x = root[x];
        }
        x
    }
    let mut leaders = Vec::new();
    let mut follower = None;
    for &e in &candidates {
        let (a, b) = (surface.origin(e), surface.head(e));
        if a == b {
            continue;
        }
        if a == last || b == last {
            follower = follower.or(Some(e));
            continue;
        }
        let (ra, rb) = (find(&mut root, a), find(&mut root, b));
        if ra != rb {
            root[ra] = rb;
            leaders.push(e);
        }
    }
    if leaders.len() + 2 != n {
        return Err(SphereError::TreeUnrealizable(
            "the other vertices are not connected without the last one".into(),
        ));
    }
    let follower = follower.ok_or_else(|| SphereError::TreeUnrealizable("no edge reaches the last vertex".into()))?;
    leaders.sort_unstable();
    Ok((leaders, follower))
}

impl<T: Real> LeaderChart<T> {
    pub fn dim(&self) -> usize {
        self.leaders.len()
    }

    /// Leader coordinates of a surface sharing this chart's triangulation
    /// and forest.
    pub fn leader_coordinates(&self, surface: &FlatSurface<T>) -> CVector<T> {
        CVector::from_iterator(
            self.leaders.len(),
            self.leaders.iter().map(|&e| {
                let (_, sign) = self.cut.column(e);
                surface.vector(e) * T::of(f64::from(sign))
            }),
        )
    }

    /// Total area at leader coordinates `v`, summed over the triangles
    /// (also outside the chart, where some areas turn negative).
    pub fn area_at(&self, v: &CVector<T>) -> T {
        let z = &self.expansion * v;
        let s = self.cut.surface();
        let half = T::of(0.5);
        s.triangles().iter().fold(T::zero(), |acc, tri| {
            let vec = |h: usize| {
                let (c, sign) = self.cut.column(h);
                z[c] * T::of(f64::from(sign))
            };
            acc + cross(vec(tri[0]), vec(tri[1])) * half
        })
    }
}

/// The area as a Hermitian form `Area(v) = v* H v` on leader coordinates.
#[derive(Clone, Debug)]
pub struct AreaForm<T: Real> {
    pub h: CMatrix<T>,
    pub signature: (usize, usize),
    /// Eigenvalues of `H`, descending.
    pub eigenvalues: Vec<T>,
}

/// Recover `H` by polarization and check it has one positive and `n - 3`
/// negative directions.
pub fn area_form<T: Real>(chart: &LeaderChart<T>) -> Result<AreaForm<T>, SphereError> {
    let m = chart.dim();
    let zero = Complex::new(T::zero(), T::zero());
    let quarter = T::of(0.25);
    let basis = |j: usize, c: Complex<T>| {
        let mut v = CVector::from_element(m, zero);
        v[j] += c;
        v
    };
    let one = Complex::new(T::one(), T::zero());
    let i = Complex::new(T::zero(), T::one());
    let mut h = CMatrix::from_element(m, m, zero);
    for j in 0..m {
        for k in 0..m {
            let q = |c: Complex<T>| {
                let mut v = basis(j, one);
                v[k] += c;
                chart.area_at(&v)
            };
            let re = (q(one) - q(-one)) * quarter;
            let im = -(q(i) - q(-i)) * quarter;
            h[(j, k)] = Complex::new(re, im);
        }
    }
    // symmetrize away rounding
    let h = (&h + h.adjoint()).map(|x| x * T::of(0.5));
    let eigen = SymmetricEigen::new(h.clone());
    let mut eigenvalues: Vec<T> = eigen.eigenvalues.iter().copied().collect();
    eigenvalues.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    let scale = eigenvalues.iter().fold(T::zero(), |acc, x| acc.max(x.abs()));
    let cutoff = T::tolerances().rank * scale;
    let positive = eigenvalues.iter().filter(|&&x| x > cutoff).count();
    let negative = eigenvalues.iter().filter(|&&x| x < -cutoff).count();
    let zero_count = m - positive - negative;
    if (positive, negative, zero_count) != (1, m - 1, 0) {
        return Err(SphereError::SignatureUnexpected {
            positive,
            negative,
            zero: zero_count,
        });
    }
    Ok(AreaForm {
        h,
        signature: (positive, negative),
        eigenvalues,
    })
}

/// Change of coordinates `v = P Z` with `P* (-H) P = diag(1, ..., 1, -1)`,
/// so that unit-area surfaces satisfy `f(Z) = -1`.
#[derive(Clone, Debug)]
pub struct Normalization<T: Real> {
    pub p: CMatrix<T>,
    pub p_inv: CMatrix<T>,
}

impl<T: Real> Normalization<T> {
    pub fn to_normalized(&self, v: &CVector<T>) -> CVector<T> {
        &self.p_inv * v
    }

    pub fn from_normalized(&self, z: &CVector<T>) -> CVector<T> {
        &self.p * z
    }
}

/// Eigenvectors of `-H` by descending eigenvalue; within a cluster of equal
/// eigenvalues the canonical basis of the eigenspace, and each vector's
/// first clearly nonzero entry made real positive.
pub fn normalize_form<T: Real>(form: &AreaForm<T>) -> Result<Normalization<T>, SphereError> {
    let m = form.h.nrows();
    let neg = form.h.map(|x| -x);
    let eigen = SymmetricEigen::new(neg);
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| {
        eigen.eigenvalues[b]
            .partial_cmp(&eigen.eigenvalues[a])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values: Vec<T> = order.iter().map(|&k| eigen.eigenvalues[k]).collect();
    let scale = values.iter().fold(T::zero(), |acc, x| acc.max(x.abs()));
    let positive = values.iter().filter(|&&x| x > T::tolerances().rank * scale).count();
    if positive + 1 != m || !(values[m - 1] < -T::tolerances().rank * scale) {
        return Err(SphereError::SignatureUnexpected {
            positive: 1,
            negative: positive,
            zero: m - 1 - positive.min(m - 1),
        });
    }
    let cluster_tol = T::of(1e-9) * scale;
    let mut p = CMatrix::zeros(m, m);
    let mut start = 0;
    while start < m {
        let mut end = start + 1;
        while end < m && (values[end] - values[start]).abs() <= cluster_tol {
            end += 1;
        }
        let mut block = CMatrix::zeros(m, end - start);
        for (j, &k) in order[start..end].iter().enumerate() {
            block.set_column(j, &eigen.eigenvectors.column(k));
        }
        let block = canonical_basis(&block);
        for j in 0..end - start {
            let mut v = block.column(j).into_owned();
            let max = v.iter().fold(T::zero(), |acc, x| acc.max(modulus(*x)));
            if let Some(first) = v.iter().find(|x| modulus(**x) > T::of(1e-8) * max).copied() {
                let phase = first.conj().unscale(modulus(first));
                v *= phase;
            }
            let lambda = values[start + j].abs();
            p.set_column(start + j, &v.unscale(lambda.sqrt()));
        }
        start = end;
    }
    let p_inv = p.clone().try_inverse().ok_or(SphereError::SignatureUnexpected {
        positive: 1,
        negative: m - 1,
        zero: 1,
    })?;
    Ok(Normalization { p, p_inv })
}
