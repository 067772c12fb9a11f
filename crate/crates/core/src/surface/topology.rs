//! Forest bookkeeping shared by validation and the chart code.

use std::collections::{BTreeSet, VecDeque};

use crate::scalar::{is_multiple_of_two_pi, modulus, reduce_angle, unit, Real};

use super::{FlatSurface, SurfaceError};

/// Tree index of every vertex for the given forest edges, or `None` if the
/// edges contain a cycle. Vertices touched by no edge form point-trees.
pub fn forest_components<T: Real>(
    surface: &FlatSurface<T>,
    forest: &BTreeSet<usize>,
) -> Option<Vec<usize>> {
    let n = surface.num_vertices();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for &e in forest {
        let (a, b) = (surface.origin(e), surface.head(e));
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra == rb {
            return None;
        }
        parent[ra] = rb;
    }
    let mut label = vec![usize::MAX; n];
    let mut count = 0;
    let mut out = vec![0; n];
    for v in 0..n {
        let r = find(&mut parent, v);
        if label[r] == usize::MAX {
            label[r] = count;
            count += 1;
        }
        out[v] = label[r];
    }
    Some(out)
}

/// For a forest edge `e`: the half-edge `a` of `e` whose tail lies in the
/// subtree not containing the tree's smallest vertex, and the rotation
/// `theta` in `(-pi, pi]` with `vec(twin a) = -e^{i theta} vec(a)`.
pub fn rotation_side<T: Real>(
    surface: &FlatSurface<T>,
    forest: &BTreeSet<usize>,
    e: usize,
) -> (usize, T) {
    let n = surface.num_vertices();
    let mut adjacency: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for &f in forest {
        let (a, b) = (surface.origin(f), surface.head(f));
        adjacency[a].push((f, b));
        adjacency[b].push((f, a));
    }
    let e = surface.edge_id(e);
    let reach = |start: usize, skip: Option<usize>| {
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(v) = queue.pop_front() {
            for &(f, w) in &adjacency[v] {
                if Some(f) != skip && !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    };
    let tree = reach(surface.origin(e), None);
    let root = (0..n).find(|&v| tree[v]).expect("tree is nonempty");
    let tail_side = reach(surface.origin(e), Some(e));
    let (a, side) = if tail_side[root] {
        (surface.twin(e), reach(surface.head(e), Some(e)))
    } else {
        (e, tail_side)
    };
    let sum = (0..n)
        .filter(|&v| side[v])
        .map(|v| surface.cone_angles()[v])
        .fold(T::zero(), |s, x| s + x);
    (a, reduce_angle(sum))
}

pub(super) fn check_forest<T: Real>(surface: &FlatSurface<T>) -> Result<(), SurfaceError> {
    forest_components(surface, surface.forest()).ok_or(SurfaceError::ForestNotTrees)?;
    let mut covered = vec![false; surface.num_vertices()];
    for &e in surface.forest() {
        covered[surface.origin(e)] = true;
        covered[surface.head(e)] = true;
    }
    for v in 0..surface.num_vertices() {
        let alpha = surface.cone_angles()[v];
        if !covered[v] && !is_multiple_of_two_pi(alpha) {
            return Err(SurfaceError::ForestMissesSingularity { vertex: v });
        }
    }
    Ok(())
}

pub(super) fn check_forest_rotations<T: Real>(
    surface: &FlatSurface<T>,
) -> Result<(), SurfaceError> {
    let tol = T::tolerances().closure;
    for &e in surface.forest() {
        let (a, theta) = rotation_side(surface, surface.forest(), e);
        let expected = -(unit(theta) * surface.vector(a));
        let actual = surface.vector(surface.twin(a));
        let residual = modulus(expected - actual);
        if residual > tol * (modulus(actual) + modulus(expected)) {
            return Err(SurfaceError::InconsistentRotation {
                edge: e,
                residual: residual.as_f64(),
            });
        }
    }
    Ok(())
}
