use std::collections::{BTreeSet, VecDeque};

use crate::scalar::{abs, argument, modulus, positive_angle, Complex, Real};
use crate::surface::FlatSurface;

use super::insert::{corner_at_angle, insert_unchecked};
use super::moves::{check_property_q, delaunay, delaunay_slack, flip, is_flippable, FlipPath};
use super::trace::trace_segment;
use super::FlipError;

/// Position of a target half-edge inside `source`: counterclockwise angle
/// `phi` from the source half-edge `reference` at the same vertex.
type Placement<T> = (usize, T);

/// Corner of `source` and development vector realizing the half-edge `k`
/// of `target`, a triangulation of the same surface.
///
/// Directions at a vertex are matched through a common reference ray: a
/// forest half-edge, the absolute direction at a vertex of angle `2 pi`
/// off the forest, or a half-edge id present in both with the same vector.
pub fn locate_half_edge<T: Real>(
    source: &FlatSurface<T>,
    target: &FlatSurface<T>,
    k: usize,
) -> Result<(usize, Complex<T>), FlipError> {
    let none = vec![None; target.num_half_edges()];
    let placed = place(source, target, k, &none, true).ok_or_else(|| {
        FlipError::Unsupported(format!(
            "no common reference direction at vertex {}",
            target.origin(k)
        ))
    })?;
    Ok(realize(source, target, k, placed))
}

/// Locations in `source` of every half-edge of `target`, found by
/// spreading from reference rays along the target's corners and edges.
///
/// Forest rays and absolute directions at `2 pi` vertices are used all at
/// once. Otherwise a single half-edge is pinned, first by a shared id and
/// vector, then by each sheet over its vertex, until the spread placements
/// close up consistently. Entries stay `None` where no trace exists.
pub fn identify<T: Real>(
    source: &FlatSurface<T>,
    target: &FlatSurface<T>,
) -> Result<Vec<Option<(usize, Complex<T>)>>, FlipError> {
    let nh = target.num_half_edges();
    let none = vec![None; nh];
    let safe: Vec<(usize, Placement<T>)> = (0..nh)
        .filter_map(|k| place(source, target, k, &none, false).map(|p| (k, p)))
        .collect();
    let attempts: Vec<Vec<(usize, Placement<T>)>> = if safe.is_empty() {
        let shared = (0..nh).filter_map(|k| place(source, target, k, &none, true).map(|p| vec![(k, p)]));
        let sheets = sheet_candidates(source, target, 0).into_iter().map(|p| vec![(0, p)]);
        shared.chain(sheets).collect()
    } else {
        vec![safe]
    };
    for seeds in attempts {
        if let Some(found) = spread(source, target, &seeds) {
            return Ok(found);
        }
    }
    Err(FlipError::Unsupported(
        "no consistent identification of the two triangulations".into(),
    ))
}

fn spread<T: Real>(
    source: &FlatSurface<T>,
    target: &FlatSurface<T>,
    seeds: &[(usize, Placement<T>)],
) -> Option<Vec<Option<(usize, Complex<T>)>>> {
    let nh = target.num_half_edges();
    let mut known: Vec<Option<Placement<T>>> = vec![None; nh];
    let mut queue = VecDeque::new();
    for &(k, p) in seeds {
        known[k] = Some(p);
        queue.push_back(k);
    }
    let end_of = |k: usize, placed: Placement<T>| {
        // the two sides of a forest edge live in different frames
        if target.is_forest_edge(k) {
            return None;
        }
        let (corner, w) = realize(source, target, k, placed);
        let trace = trace_segment(source, corner, w).ok()?;
        let end = match trace.crossings.last() {
            None => source.twin(corner),
            Some(&c) => source.prev(source.twin(c)),
        };
        Some((end, angle_in_corner(source, end, -w)))
    };
    while let Some(k) = queue.pop_front() {
        let placed = known[k].expect("queued entries are placed");
        for rt in target.outgoing_from(k) {
            if known[rt].is_none() {
                known[rt] = place(source, target, rt, &known, false);
                queue.push_back(rt);
            }
        }
        let tw = target.twin(k);
        if known[tw].is_none() {
            if let Some(p) = end_of(k, placed) {
                known[tw] = Some(p);
                queue.push_back(tw);
            }
        }
    }
    let out: Vec<Option<(usize, Complex<T>)>> = (0..nh)
        .map(|k| known[k].map(|p| realize(source, target, k, p)))
        .collect();
    // every traced segment must arrive where its twin was placed
    let tol = T::tolerances().closure;
    for k in 0..nh {
        let (Some(placed), Some((twin_corner, twin_w))) = (known[k], out[target.twin(k)]) else {
            continue;
        };
        let Some(end) = end_of(k, placed) else { continue };
        let (corner, w) = realize(source, target, target.twin(k), end);
        if corner != twin_corner || modulus(w - twin_w) > tol * (T::one() + modulus(w)) {
            return None;
        }
    }
    Some(out)
}

fn realize<T: Real>(
    source: &FlatSurface<T>,
    target: &FlatSurface<T>,
    k: usize,
    (reference, phi): Placement<T>,
) -> (usize, Complex<T>) {
    let alpha = source.cone_angles()[source.origin(reference)];
    let w = target.vector(k);
    corner_at_angle(source, reference, phi, alpha, modulus(w), Some(w))
}

/// Placement of target half-edge `k` from any reference ray at its tail.
fn place<T: Real>(
    source: &FlatSurface<T>,
    target: &FlatSurface<T>,
    k: usize,
    known: &[Option<Placement<T>>],
    shared_ids: bool,
) -> Option<Placement<T>> {
    let v = target.origin(k);
    let alpha = source.cone_angles()[v];
    let tol = T::tolerances().closure;
    let same = |a: Complex<T>, b: Complex<T>| modulus(a - b) <= tol * (T::one() + modulus(a));

    let target_out = target.outgoing_from(k);
    // lifted angle from each outgoing target half-edge to k
    let mut lifted = Vec::with_capacity(target_out.len());
    let mut acc = T::zero();
    for &h in target_out.iter().rev() {
        acc += target.corner_angle(h);
        lifted.push((h, acc));
    }
    let offset_of = |rt: usize| -> T {
        if rt == k {
            T::zero()
        } else {
            lifted.iter().find(|&&(h, _)| h == rt).map(|&(_, a)| a).expect("rt leaves v")
        }
    };
    let source_out = source.outgoing(v);

    for &rt in &target_out {
        if let Some((reference, phi)) = known[rt] {
            return Some((reference, phi + offset_of(rt)));
        }
    }
    for &rt in &target_out {
        if !target.is_forest_edge(rt) {
            continue;
        }
        let matched = source_out.iter().copied().find(|&rs| {
            source.is_forest_edge(rs)
                && source.head(rs) == target.head(rt)
                && same(source.vector(rs), target.vector(rt))
        });
        if let Some(rs) = matched {
            return Some((rs, offset_of(rt)));
        }
    }
    let on_forest = source_out.iter().any(|&h| source.is_forest_edge(h));
    let two_pi = abs(alpha - T::two_pi()) <= T::tolerances().angle * (T::one() + alpha);
    if two_pi && !on_forest {
        let rs = source_out[0];
        return Some((rs, positive_angle(argument(target.vector(k)) - argument(source.vector(rs)))));
    }
    for &rt in target_out.iter().filter(|_| shared_ids) {
        if rt < source.num_half_edges()
            && source.origin(rt) == v
            && source.head(rt) == target.head(rt)
            && same(source.vector(rt), target.vector(rt))
        {
            return Some((rt, offset_of(rt)));
        }
    }
    None
}

/// Counterclockwise angle from `vec(h)` to `w` in `[0, 2 pi)`, with
/// directions along `vec(h)` up to rounding sent to `0`.
fn angle_in_corner<T: Real>(source: &FlatSurface<T>, h: usize, w: Complex<T>) -> T {
    let psi = positive_angle(argument(w) - argument(source.vector(h)));
    if T::two_pi() - psi <= T::tolerances().angle {
        T::zero()
    } else {
        psi
    }
}

/// Corners at the tail of target half-edge `k` whose sector contains its
/// direction, one per sheet over a vertex of angle in `2 pi N`.
fn sheet_candidates<T: Real>(
    source: &FlatSurface<T>,
    target: &FlatSurface<T>,
    k: usize,
) -> Vec<Placement<T>> {
    let w = target.vector(k);
    let tol = T::tolerances().angle;
    source
        .outgoing(target.origin(k))
        .into_iter()
        .filter_map(|rs| {
            let psi = angle_in_corner(source, rs, w);
            (psi < source.corner_angle(rs) - tol).then_some((rs, psi))
        })
        .filter(|&(rs, psi)| {
            let alpha = source.cone_angles()[source.origin(rs)];
            let (corner, w) = corner_at_angle(source, rs, psi, alpha, modulus(w), Some(w));
            trace_segment(source, corner, w).is_ok()
        })
        .collect()
}

fn check_same_metric<T: Real>(a: &FlatSurface<T>, b: &FlatSurface<T>) -> Result<(), FlipError> {
    let tol = T::tolerances().angle;
    if a.num_vertices() != b.num_vertices() || a.num_half_edges() != b.num_half_edges() {
        return Err(FlipError::NotSameMetric("different vertex or edge counts".into()));
    }
    for v in 0..a.num_vertices() {
        let (x, y) = (a.cone_angles()[v], b.cone_angles()[v]);
        if abs(x - y) > tol * (T::one() + x) {
            return Err(FlipError::NotSameMetric(format!("cone angle differs at vertex {v}")));
        }
    }
    let (x, y) = (a.total_area(), b.total_area());
    // rounding in the area grows with the square of the longest edge
    let scale = a.length_scale().max(b.length_scale());
    if abs(x - y) > T::of(1e-9) * (x + scale * scale) {
        return Err(FlipError::NotSameMetric("areas differ".into()));
    }
    if a.forest() != b.forest() {
        return Err(FlipError::NotSameMetric("forests differ".into()));
    }
    Ok(())
}

/// Flips turning `t1` into a triangulation canonically equal to `t2`:
/// the edges of `t2` are inserted one at a time, each placed by its angle
/// from edges already in place.
pub fn flip_path<T: Real>(t1: &FlatSurface<T>, t2: &FlatSurface<T>) -> Result<FlipPath<T>, FlipError> {
    check_same_metric(t1, t2)?;
    if t1.genus() > 0 && !check_property_q(t1).holds {
        return Err(FlipError::Unsupported(
            "positive genus without property Q".into(),
        ));
    }
    if t1.genus() == 0 {
        // both triangulations carry the same tree, so no exchange is needed
        let exchanges = exchange_tree(t1, t1.forest(), t2.forest())?;
        if !exchanges.is_empty() {
            return Err(FlipError::Unsupported("forests differ".into()));
        }
    }
    let Some(first) = t2.edges().find(|&e| !t2.is_forest_edge(e)) else {
        return Ok(FlipPath::new());
    };
    // reference rays first; without them, pin one edge on each sheet in turn
    let mut last = match insert_all(t1, t2, Anchor::SharedIds) {
        Ok(path) => return Ok(path),
        Err(e) => e,
    };
    for sheet in sheet_candidates(t1, t2, first) {
        match insert_all(t1, t2, Anchor::Sheet(first, sheet)) {
            Ok(path) => return Ok(path),
            Err(e) => last = e,
        }
    }
    Err(last)
}

#[derive(Clone, Copy)]
enum Anchor<T> {
    SharedIds,
    Sheet(usize, Placement<T>),
    Used,
}

fn insert_all<T: Real>(
    t1: &FlatSurface<T>,
    t2: &FlatSurface<T>,
    mut anchor: Anchor<T>,
) -> Result<FlipPath<T>, FlipError> {
    let n1 = t1.num_edges() + t1.forest().len();
    let cap = 100 * n1 * n1;
    let mut current = t1.clone();
    let mut path = FlipPath::new();
    let mut known: Vec<Option<Placement<T>>> = vec![None; t2.num_half_edges()];
    let mut pending: Vec<usize> = t2.edges().filter(|&e| !t2.is_forest_edge(e)).collect();
    while !pending.is_empty() {
        let search = |known: &[Option<Placement<T>>], shared: bool| {
            pending.iter().enumerate().find_map(|(i, &e)| {
                [e, t2.twin(e)]
                    .into_iter()
                    .find_map(|k| place(&current, t2, k, known, shared).map(|p| (i, k, p)))
            })
        };
        let found = search(&known, false).or_else(|| match anchor {
            Anchor::SharedIds => search(&known, true),
            Anchor::Sheet(e, p) => Some((pending.iter().position(|&x| x == e).expect("pending"), e, p)),
            Anchor::Used => None,
        });
        let Some((i, k, placed)) = found else {
            return Err(FlipError::Unsupported(format!(
                "edge {} has no reference direction",
                pending[0]
            )));
        };
        anchor = Anchor::Used;
        pending.remove(i);
        let (corner, w) = realize(&current, t2, k, placed);
        let (next, p, h) = insert_unchecked(&current, corner, w)?;
        path.extend(p);
        current = next;
        if path.len() > cap {
            return Err(FlipError::NonTermination { flips: path.len() });
        }
        known[k] = Some((h, T::zero()));
        known[t2.twin(k)] = Some((current.twin(h), T::zero()));
    }
    if !current.canonically_equal(t2) {
        return Err(FlipError::NotSameMetric(
            "all target edges present but the triangulations differ".into(),
        ));
    }
    Ok(path)
}

/// Cross-check route: Delaunay-flip both sides, settle cocircular quads
/// the same way, and walk the second half backwards.
pub fn flip_path_via_delaunay<T: Real>(
    t1: &FlatSurface<T>,
    t2: &FlatSurface<T>,
) -> Result<FlipPath<T>, FlipError> {
    check_same_metric(t1, t2)?;
    let (d1, mut p1) = delaunay(t1)?;
    let (c1, q1) = settle_cocircular(&d1)?;
    p1.extend(q1);
    let (d2, p2) = delaunay(t2)?;
    let (c2, q2) = settle_cocircular(&d2)?;

    // surfaces along the second path, to undo its moves in reverse
    let mut trail = vec![t2.clone()];
    for mv in p2.moves.iter().chain(q2.moves.iter()) {
        let last = trail.last().expect("nonempty");
        trail.push(flip(last, mv.edge)?.0);
    }
    let edges: Vec<usize> = p2.moves.iter().chain(q2.moves.iter()).map(|m| m.edge).collect();
    let mut current = c1;
    let mut map = c2
        .isomorphism(&current)
        .ok_or_else(|| FlipError::NotSameMetric("Delaunay triangulations differ".into()))?;
    for (j, &e) in edges.iter().enumerate().rev() {
        let (next, mv) = flip(&current, current.edge_id(map[e]))?;
        p1.push(mv);
        current = next;
        map = trail[j]
            .isomorphism(&current)
            .ok_or_else(|| FlipError::NotSameMetric("reverse replay diverged".into()))?;
    }
    Ok(p1)
}

/// Flip cocircular quads until every diagonal inside a cocircular cell
/// touches the lowest point (smallest `y`, then `x`) of its quad. The
/// result is the fan from the lowest corner of each cell, which does not
/// depend on the starting triangulation.
fn settle_cocircular<T: Real>(surface: &FlatSurface<T>) -> Result<(FlatSurface<T>, FlipPath<T>), FlipError> {
    let tol = T::tolerances().delaunay;
    let n1 = surface.num_edges() + surface.forest().len();
    let cap = 50 * n1 * n1;
    let mut current = surface.clone();
    let mut path = FlipPath::new();
    let lower = |a: Complex<T>, b: Complex<T>, eps: T| {
        if abs(a.im - b.im) > eps {
            a.im < b.im
        } else {
            a.re < b.re
        }
    };
    loop {
        let candidate = current.edges().find(|&e| {
            if current.is_forest_edge(e)
                || abs(delaunay_slack(&current, e)) > tol
                || !is_flippable(&current, e).unwrap_or(false)
            {
                return false;
            }
            let v = current.vector(e);
            let w = v + current.vector(current.next(e));
            let x = current.vector(current.next(current.twin(e)));
            let eps = T::tolerances().closure * (modulus(v) + modulus(w) + modulus(x));
            let origin = Complex::new(T::zero(), T::zero());
            let low_end = if lower(v, origin, eps) { v } else { origin };
            let low_side = if lower(w, x, eps) { w } else { x };
            lower(low_side, low_end, eps)
        });
        let Some(e) = candidate else {
            return Ok((current, path));
        };
        if path.len() >= cap {
            return Err(FlipError::NonTermination { flips: path.len() });
        }
        let (next, mv) = flip(&current, e)?;
        path.push(mv);
        current = next;
    }
}

/// One step of a tree exchange.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Exchange {
    pub remove: usize,
    pub add: usize,
}

/// Single-edge exchanges turning the forest `a1` into `a2`; every
/// intermediate set is a forest with the same components.
pub fn exchange_tree<T: Real>(
    surface: &FlatSurface<T>,
    a1: &BTreeSet<usize>,
    a2: &BTreeSet<usize>,
) -> Result<Vec<Exchange>, FlipError> {
    let components = |set: &BTreeSet<usize>| -> Result<Vec<usize>, FlipError> {
        for &e in set {
            if e >= surface.num_half_edges() || surface.edge_id(e) != e {
                return Err(FlipError::NotSpanningTree(format!("{e} is not an edge id")));
            }
        }
        crate::surface::forest_components(surface, set)
            .ok_or_else(|| FlipError::NotSpanningTree("edges contain a cycle".into()))
    };
    let (c1, c2) = (components(a1)?, components(a2)?);
    let same_partition = (0..c1.len())
        .all(|u| (0..c1.len()).all(|v| (c1[u] == c1[v]) == (c2[u] == c2[v])));
    if !same_partition {
        return Err(FlipError::NotSpanningTree(
            "the two forests span different vertex sets".into(),
        ));
    }
    let mut current = a1.clone();
    let mut out = Vec::new();
    for &e in a2.difference(a1) {
        let path = tree_path(surface, &current, surface.origin(e), surface.head(e));
        let remove = path
            .into_iter()
            .find(|f| !a2.contains(f))
            .expect("a cycle through a new edge leaves the target forest");
        current.remove(&remove);
        current.insert(e);
        out.push(Exchange { remove, add: e });
    }
    Ok(out)
}

/// Edges of the forest path from `a` to `b`, in order.
fn tree_path<T: Real>(surface: &FlatSurface<T>, forest: &BTreeSet<usize>, a: usize, b: usize) -> Vec<usize> {
    let n = surface.num_vertices();
    let mut adjacency: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for &f in forest {
        let (u, v) = (surface.origin(f), surface.head(f));
        adjacency[u].push((f, v));
        adjacency[v].push((f, u));
    }
    let mut via: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut seen = vec![false; n];
    seen[a] = true;
    let mut queue = VecDeque::from([a]);
    while let Some(u) = queue.pop_front() {
        for &(f, v) in &adjacency[u] {
            if !seen[v] {
                seen[v] = true;
                via[v] = Some((f, u));
                queue.push_back(v);
            }
        }
    }
    let mut path = Vec::new();
    let mut v = b;
    while let Some((f, u)) = via[v] {
        path.push(f);
        v = u;
    }
    path.reverse();
    path
}
