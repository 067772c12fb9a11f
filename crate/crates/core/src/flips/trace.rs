use crate::scalar::{cross, dot, modulus, Complex, Real};
use crate::surface::FlatSurface;

use super::TraceError;

/// A straight segment developed across the triangulation.
///
/// Positions are planar, with the start vertex at the origin, expressed in
/// the frame of the start triangle. `upper` holds the distinct polygon
/// vertices to the left of the segment in the order met, `lower` those to
/// the right; `crossing_ends[i]` indexes the lower and upper endpoint of
/// `crossings[i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Trace<T> {
    pub start: usize,
    pub w: Complex<T>,
    pub crossings: Vec<usize>,
    pub end_vertex: usize,
    pub upper: Vec<(Complex<T>, usize)>,
    pub lower: Vec<(Complex<T>, usize)>,
    pub crossing_ends: Vec<(usize, usize)>,
    /// Half-edges with signs along the upper boundary: `w = sum sign * vec(h)`.
    pub upper_chain: Vec<(usize, i8)>,
    /// Same along the lower boundary.
    pub lower_chain: Vec<(usize, i8)>,
}

/// Planar unfolding of the triangles met by a segment.
#[derive(Clone, Debug, PartialEq)]
pub struct DevelopingPolygon<T> {
    /// Counterclockwise: start, lower chain, end, upper chain reversed.
    pub vertices: Vec<Complex<T>>,
    /// Indices of the segment's endpoints.
    pub diagonal: (usize, usize),
    /// Preimages of the crossed edges, as (lower, upper) vertex indices.
    pub triangulation: Vec<(usize, usize)>,
    pub corner_map: Vec<usize>,
}

impl<T: Real> Trace<T> {
    pub fn len(&self) -> usize {
        self.crossings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.crossings.is_empty()
    }

    pub fn polygon(&self, surface: &FlatSurface<T>) -> DevelopingPolygon<T> {
        let origin = Complex::new(T::zero(), T::zero());
        let start_vertex = surface.origin(self.start);
        let mut vertices = vec![origin];
        let mut corner_map = vec![start_vertex];
        for &(p, v) in &self.lower {
            vertices.push(p);
            corner_map.push(v);
        }
        let end = vertices.len();
        vertices.push(self.w);
        corner_map.push(self.end_vertex);
        let upper_base = vertices.len();
        for &(p, v) in self.upper.iter().rev() {
            vertices.push(p);
            corner_map.push(v);
        }
        let r = self.upper.len();
        let triangulation = self
            .crossing_ends
            .iter()
            .map(|&(lo, up)| (1 + lo, upper_base + (r - 1 - up)))
            .collect();
        DevelopingPolygon {
            vertices,
            diagonal: (0, end),
            triangulation,
            corner_map,
        }
    }
}

/// Follow the segment of development vector `w` leaving the tail of
/// `start` inside the corner of `start`.
pub fn trace_segment<T: Real>(
    surface: &FlatSurface<T>,
    start: usize,
    w: Complex<T>,
) -> Result<Trace<T>, TraceError> {
    if start >= surface.num_half_edges() {
        return Err(TraceError::UnknownCorner(start));
    }
    let tol = T::tolerances().closure;
    let len = modulus(w);
    if !(len > T::zero()) {
        return Err(TraceError::ZeroLength);
    }
    let a = surface.vector(start);
    let b = -surface.vector(surface.prev(start));
    let mut trace = Trace {
        start,
        w,
        crossings: Vec::new(),
        end_vertex: surface.head(start),
        upper: Vec::new(),
        lower: Vec::new(),
        crossing_ends: Vec::new(),
        upper_chain: Vec::new(),
        lower_chain: Vec::new(),
    };
    let along_a = cross(a, w).abs() <= tol * modulus(a) * len && dot(a, w) > T::zero();
    if along_a {
        let t = modulus(a) / len;
        if (t - T::one()).abs() <= tol * T::of(10.0) {
            trace.upper_chain.push((start, 1));
            trace.lower_chain.push((start, 1));
            return Ok(trace);
        }
        if t < T::one() {
            return Err(TraceError::HitsVertexEarly {
                vertex: surface.head(start),
                t: t.as_f64(),
            });
        }
        return Err(TraceError::DoesNotTerminateAtVertex);
    }
    if !(cross(a, w) > tol * modulus(a) * len && cross(w, b) > tol * modulus(b) * len) {
        return Err(TraceError::NotInSector { corner: start });
    }

    let height = |p: Complex<T>| cross(w, p) / len;
    let mut right = a;
    let mut left = b;
    let mut c = surface.next(start);
    trace.lower.push((right, surface.origin(c)));
    trace.upper.push((left, surface.head(c)));
    trace.lower_chain.push((start, 1));
    trace.upper_chain.push((surface.prev(start), -1));
    // a segment crosses finitely many edges; the bound only guards loops
    for _ in 0..1_000_000 {
        // parameter where the segment leaves through c = right -> left
        let side = left - right;
        let s = cross(right, side) / cross(w, side);
        if s >= T::one() - tol {
            return Err(TraceError::DoesNotTerminateAtVertex);
        }
        if surface.is_forest_edge(c) {
            return Err(TraceError::ExitsThroughForest {
                edge: surface.edge_id(c),
            });
        }
        trace.crossings.push(c);
        trace
            .crossing_ends
            .push((trace.lower.len() - 1, trace.upper.len() - 1));
        let tc = surface.twin(c);
        let s_vertex = surface.head(surface.next(tc));
        let p = right + surface.vector(surface.next(tc));
        let y = height(p);
        let scale = modulus(p).max(len);
        if y.abs() <= tol * scale {
            let t = dot(p, w) / (len * len);
            if (t - T::one()).abs() <= tol * T::of(10.0) {
                trace.end_vertex = s_vertex;
                trace.upper_chain.push((surface.prev(tc), -1));
                trace.lower_chain.push((surface.next(tc), 1));
                return Ok(trace);
            }
            if t < T::one() {
                return Err(TraceError::HitsVertexEarly {
                    vertex: s_vertex,
                    t: t.as_f64(),
                });
            }
            return Err(TraceError::DoesNotTerminateAtVertex);
        }
        if y > T::zero() {
            trace.upper_chain.push((surface.prev(tc), -1));
            trace.upper.push((p, s_vertex));
            left = p;
            c = surface.next(tc);
        } else {
            trace.lower_chain.push((surface.next(tc), 1));
            trace.lower.push((p, s_vertex));
            right = p;
            c = surface.prev(tc);
        }
    }
    Err(TraceError::DoesNotTerminateAtVertex)
}
