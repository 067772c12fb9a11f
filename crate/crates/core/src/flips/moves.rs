use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::charts::develop;
use crate::scalar::{cross, modulus, Complex, Real};
use crate::surface::FlatSurface;

use super::FlipError;

/// One elementary move. `quad` lists the four sides around the flipped
/// edge `[ha, hb, hc, hd]`: `ha, hb` follow the edge's smaller half-edge in
/// its triangle before the move, `hc, hd` follow its twin.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FlipMove<T> {
    pub edge: usize,
    pub quad: [usize; 4],
    pub old_diagonal: Complex<T>,
    pub new_diagonal: Complex<T>,
}

/// Serialized form of a move.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlipRecord {
    pub edge: usize,
    pub quad: [usize; 4],
    pub new_vector: [f64; 2],
}

/// A sequence of flips, replayable from the surface it was computed on.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FlipPath<T> {
    pub moves: Vec<FlipMove<T>>,
}

impl<T: Real> FlipPath<T> {
    pub fn new() -> Self {
        FlipPath { moves: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn push(&mut self, mv: FlipMove<T>) {
        self.moves.push(mv);
    }

    pub fn extend(&mut self, other: FlipPath<T>) {
        self.moves.extend(other.moves);
    }

    pub fn edges(&self) -> Vec<usize> {
        self.moves.iter().map(|m| m.edge).collect()
    }

    /// Apply the moves to `surface`, checking each recorded quad and new
    /// diagonal.
    pub fn replay(&self, surface: &FlatSurface<T>) -> Result<FlatSurface<T>, FlipError> {
        replay_records(surface, &self.records())
    }

    pub fn records(&self) -> Vec<FlipRecord> {
        self.moves
            .iter()
            .map(|m| FlipRecord {
                edge: m.edge,
                quad: m.quad,
                new_vector: [m.new_diagonal.re.as_f64(), m.new_diagonal.im.as_f64()],
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.records()).expect("records serialize")
    }
}

/// Replay serialized moves.
pub fn replay_records<T: Real>(
    surface: &FlatSurface<T>,
    records: &[FlipRecord],
) -> Result<FlatSurface<T>, FlipError> {
    let mut current = surface.clone();
    for (k, rec) in records.iter().enumerate() {
        let (next, mv) = flip(&current, rec.edge)?;
        let recorded = Complex::new(T::of(rec.new_vector[0]), T::of(rec.new_vector[1]));
        let tol = T::of(1e-9) * (T::one() + modulus(recorded));
        if mv.quad != rec.quad || modulus(mv.new_diagonal - recorded) > tol {
            return Err(FlipError::ReplayMismatch(k));
        }
        current = next;
    }
    Ok(current)
}

pub fn parse_records(text: &str) -> Result<Vec<FlipRecord>, FlipError> {
    serde_json::from_str(text).map_err(|e| FlipError::Format(e.to_string()))
}

fn check_edge<T: Real>(surface: &FlatSurface<T>, e: usize) -> Result<usize, FlipError> {
    if e >= surface.num_half_edges() {
        return Err(FlipError::UnknownEdge(e));
    }
    let e = surface.edge_id(e);
    if surface.is_forest_edge(e) {
        return Err(FlipError::ForestEdge(e));
    }
    Ok(e)
}

/// Developed quad `[u, x, v, w]` (counterclockwise) around edge `h: u -> v`.
fn quad_points<T: Real>(surface: &FlatSurface<T>, h: usize) -> [Complex<T>; 4] {
    let u = Complex::new(T::zero(), T::zero());
    let v = surface.vector(h);
    let w = v + surface.vector(surface.next(h));
    let x = surface.vector(surface.next(surface.twin(h)));
    [u, x, v, w]
}

/// Whether the two triangles at `e` form a strictly convex quadrilateral.
pub fn is_flippable<T: Real>(surface: &FlatSurface<T>, e: usize) -> Result<bool, FlipError> {
    let e = check_edge(surface, e)?;
    let p = quad_points(surface, e);
    let scale = (0..4)
        .map(|i| (p[(i + 1) % 4] - p[i]).norm_sqr())
        .fold(T::zero(), |m, l| if l > m { l } else { m });
    let eps = T::tolerances().convexity * scale;
    Ok((0..4).all(|i| {
        let a = p[(i + 1) % 4] - p[i];
        let b = p[(i + 2) % 4] - p[(i + 1) % 4];
        cross(a, b) > eps
    }))
}

/// Replace edge `e` by the other diagonal of its quadrilateral. Half-edge
/// and triangle ids are kept; only the quad is rewired.
pub fn flip<T: Real>(surface: &FlatSurface<T>, e: usize) -> Result<(FlatSurface<T>, FlipMove<T>), FlipError> {
    let h = check_edge(surface, e)?;
    if !is_flippable(surface, h)? {
        return Err(FlipError::NotFlippable(h));
    }
    let h2 = surface.twin(h);
    let (ha, hb) = (surface.next(h), surface.prev(h));
    let (hc, hd) = (surface.next(h2), surface.prev(h2));
    let (t, t2) = (surface.triangle_of(h), surface.triangle_of(h2));
    let old = surface.vector(h);
    let new = -(surface.vector(hb) + surface.vector(hc));

    let mut parts = surface.to_parts();
    parts.triangles[t] = [hb, hc, h];
    parts.triangles[t2] = [hd, ha, h2];
    parts.vectors[h] = new;
    parts.vectors[h2] = -new;
    if let Some(anchors) = parts.anchors.as_mut() {
        for a in anchors.iter_mut() {
            if *a == h {
                *a = hc;
            } else if *a == h2 {
                *a = ha;
            }
        }
    }
    let flipped = FlatSurface::from_parts(parts)?;
    Ok((
        flipped,
        FlipMove {
            edge: h,
            quad: [ha, hb, hc, hd],
            old_diagonal: old,
            new_diagonal: new,
        },
    ))
}

/// Sum of the two angles opposite edge `e`, minus `pi`.
pub fn delaunay_slack<T: Real>(surface: &FlatSurface<T>, e: usize) -> T {
    let h2 = surface.twin(e);
    surface.corner_angle(surface.prev(e)) + surface.corner_angle(surface.prev(h2)) - T::pi()
}

/// Local Delaunay predicate at every non-forest edge.
pub fn is_delaunay<T: Real>(surface: &FlatSurface<T>) -> bool {
    let tol = T::tolerances().delaunay;
    surface
        .edges()
        .filter(|&e| !surface.is_forest_edge(e))
        .all(|e| delaunay_slack(surface, e) <= tol)
}

/// Flip non-Delaunay edges (smallest id first) until none is left.
/// Cocircular edges are left alone.
pub fn delaunay<T: Real>(surface: &FlatSurface<T>) -> Result<(FlatSurface<T>, FlipPath<T>), FlipError> {
    let tol = T::tolerances().delaunay;
    let n1 = surface.num_edges() + surface.forest().len();
    let cap = 50 * n1 * n1;
    let mut current = surface.clone();
    let mut path = FlipPath::new();
    loop {
        let candidate = current.edges().find(|&e| {
            !current.is_forest_edge(e)
                && delaunay_slack(&current, e) > tol
                && is_flippable(&current, e).unwrap_or(false)
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

/// Result of [`check_property_q`]: `witness` is a closed dual path whose
/// rotation is not `0` or `pi` when the property fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyQ {
    pub holds: bool,
    pub witness: Vec<usize>,
}

/// Whether every closed curve has holonomy rotation in `{0, pi}`. The
/// forest is ignored: curves may cross it.
pub fn check_property_q<T: Real>(surface: &FlatSurface<T>) -> PropertyQ {
    match develop(surface, &BTreeSet::new(), true) {
        Ok(_) => PropertyQ {
            holds: true,
            witness: Vec::new(),
        },
        Err(witness) => PropertyQ {
            holds: false,
            witness,
        },
    }
}
