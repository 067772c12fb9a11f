//! Erasing forests: selection, the holonomy test and re-framing.

use std::collections::{BTreeSet, VecDeque};

use crate::scalar::{is_multiple_of_two_pi, modulus, Complex, Real};
use crate::surface::{forest_components, rotation_side, FlatSurface};

use super::ChartError;

/// Outcome of [`is_erasing`]. When the forest is not erasing, `witness`
/// lists the half-edges crossed by a closed path with nontrivial rotation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErasingCheck {
    pub erasing: bool,
    pub witness: Vec<usize>,
}

/// Develop the complement of `forest` from triangle 0: the returned unit
/// rotation `r[t]` maps the stored vectors of triangle `t` into one frame
/// in which every non-forest gluing is a plain negation. On contradiction
/// the crossed half-edges of a closed dual path are returned.
pub fn develop_frames<T: Real>(
    surface: &FlatSurface<T>,
    forest: &BTreeSet<usize>,
) -> Result<Vec<Complex<T>>, Vec<usize>> {
    develop(surface, forest, false)
}

/// Frame development; with `modulo_sign` rotations are compared up to
/// `-1`, which tests for holonomy in `{Id, -Id}`.
pub(crate) fn develop<T: Real>(
    surface: &FlatSurface<T>,
    forest: &BTreeSet<usize>,
    modulo_sign: bool,
) -> Result<Vec<Complex<T>>, Vec<usize>> {
    let nt = surface.num_triangles();
    let tol = T::tolerances().rank;
    let mut frame: Vec<Option<Complex<T>>> = vec![None; nt];
    let mut parent: Vec<Option<usize>> = vec![None; nt];
    frame[0] = Some(Complex::new(T::one(), T::zero()));
    let mut queue = VecDeque::from([0]);
    let path_to_root = |parent: &[Option<usize>], mut t: usize| {
        let mut path = Vec::new();
        while let Some(h) = parent[t] {
            path.push(h);
            t = surface.triangle_of(surface.twin(h));
        }
        path
    };
    while let Some(t) = queue.pop_front() {
        let rt = frame[t].expect("queued triangles have frames");
        for &h in &surface.triangles()[t] {
            if forest.contains(&surface.edge_id(h)) {
                continue;
            }
            let tw = surface.twin(h);
            let u = surface.triangle_of(tw);
            let ratio = -(rt * surface.vector(h)) / surface.vector(tw);
            let required = ratio.unscale(modulus(ratio));
            match frame[u] {
                None => {
                    frame[u] = Some(required);
                    parent[u] = Some(tw);
                    queue.push_back(u);
                }
                Some(existing) => {
                    let gap = if modulo_sign {
                        modulus(existing * existing - required * required)
                    } else {
                        modulus(existing - required)
                    };
                    if gap > tol {
                        let mut cycle = path_to_root(&parent, t);
                        cycle.reverse();
                        cycle.push(h);
                        cycle.extend(path_to_root(&parent, u));
                        return Err(cycle);
                    }
                }
            }
        }
    }
    Ok(frame
        .into_iter()
        .map(|f| f.expect("the complement of a forest is connected"))
        .collect())
}

/// Whether `forest` is an erasing forest: disjoint trees covering every
/// vertex of angle outside `2 pi N`, with translational holonomy on the
/// complement.
pub fn is_erasing<T: Real>(surface: &FlatSurface<T>, forest: &BTreeSet<usize>) -> ErasingCheck {
    let valid_edges = forest
        .iter()
        .all(|&e| e < surface.num_half_edges() && surface.edge_id(e) == e);
    if !valid_edges || forest_components(surface, forest).is_none() {
        return ErasingCheck {
            erasing: false,
            witness: Vec::new(),
        };
    }
    let mut covered = vec![false; surface.num_vertices()];
    for &e in forest {
        covered[surface.origin(e)] = true;
        covered[surface.head(e)] = true;
    }
    for v in 0..surface.num_vertices() {
        if !covered[v] && !is_multiple_of_two_pi(surface.cone_angles()[v]) {
            // a small loop around v has rotation alpha_v
            let witness = surface.outgoing(v).into_iter().map(|h| surface.next(h)).collect();
            return ErasingCheck {
                erasing: false,
                witness,
            };
        }
    }
    match develop_frames(surface, forest) {
        Ok(_) => ErasingCheck {
            erasing: true,
            witness: Vec::new(),
        },
        Err(witness) => ErasingCheck {
            erasing: false,
            witness,
        },
    }
}

/// Rotation between the two sides of forest edge `e`, in `(-pi, pi]`,
/// checked against the stored vectors.
pub fn boundary_rotation<T: Real>(surface: &FlatSurface<T>, e: usize) -> Result<T, ChartError> {
    let e = surface.edge_id(e);
    if !surface.forest().contains(&e) {
        return Err(ChartError::NotForestEdge(e));
    }
    let (a, theta) = rotation_side(surface, surface.forest(), e);
    let expected = surface.rotated(a, theta);
    let actual = surface.vector(surface.twin(a));
    let residual = modulus(expected - actual);
    if residual > T::tolerances().closure * (modulus(actual) + modulus(expected)) {
        return Err(ChartError::InconsistentRotation {
            edge: e,
            residual: residual.as_f64(),
        });
    }
    Ok(theta)
}

/// Erasing forest inside the 1-skeleton.
///
/// Without `parts`: empty when every angle is in `2 pi N`, otherwise one
/// spanning tree. With `parts`: one tree per part. Edges already in the
/// surface's forest are preferred, then edges by increasing id.
pub fn spanning_forest<T: Real>(
    surface: &FlatSurface<T>,
    parts: Option<&[Vec<usize>]>,
) -> Result<BTreeSet<usize>, ChartError> {
    let n = surface.num_vertices();
    let mut part_of = vec![0usize; n];
    let part_count = match parts {
        None if surface.is_translation() => return Ok(BTreeSet::new()),
        None => 1,
        Some(parts) => {
            let mut seen = vec![false; n];
            for (p, members) in parts.iter().enumerate() {
                for &v in members {
                    if v >= n || seen[v] {
                        return Err(ChartError::PartitionUnrealizable(format!(
                            "vertex {v} is missing from the surface or listed twice"
                        )));
                    }
                    seen[v] = true;
                    part_of[v] = p;
                }
            }
            if let Some(v) = seen.iter().position(|s| !s) {
                return Err(ChartError::PartitionUnrealizable(format!(
                    "vertex {v} belongs to no part"
                )));
            }
            parts.len()
        }
    };
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
    let mut forest = BTreeSet::new();
    for e in candidates {
        let (a, b) = (surface.origin(e), surface.head(e));
        if part_of[a] != part_of[b] {
            continue;
        }
        let (ra, rb) = (find(&mut root, a), find(&mut root, b));
        if ra != rb {
            root[ra] = rb;
            forest.insert(e);
        }
    }
    let mut trees = BTreeSet::new();
    for v in 0..n {
        trees.insert(find(&mut root, v));
    }
    if trees.len() != part_count {
        return Err(ChartError::PartitionUnrealizable(
            "a part is not connected by edges of the triangulation".into(),
        ));
    }
    let check = is_erasing(surface, &forest);
    if !check.erasing {
        return Err(ChartError::NotErasing {
            witness: check.witness,
        });
    }
    Ok(forest)
}

/// The same triangulation with a different erasing forest, its vectors
/// re-expressed in the frame of the new forest complement (triangle 0 keeps
/// its orientation).
pub fn with_forest<T: Real>(
    surface: &FlatSurface<T>,
    forest: &BTreeSet<usize>,
) -> Result<FlatSurface<T>, ChartError> {
    let check = is_erasing(surface, forest);
    if !check.erasing {
        return Err(ChartError::NotErasing {
            witness: check.witness,
        });
    }
    let frames = develop_frames(surface, forest).map_err(|witness| ChartError::NotErasing { witness })?;
    let vectors = (0..surface.num_half_edges())
        .map(|h| frames[surface.triangle_of(h)] * surface.vector(h))
        .collect();
    Ok(surface.with_geometry(vectors, forest.clone())?)
}
