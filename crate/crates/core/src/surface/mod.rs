//! Flat surfaces with cone singularities, stored as Euclidean triangle
//! complexes with one planar vector per half-edge.
//!
//! Half-edges are numbered densely. Every triangle lists its three
//! half-edges counterclockwise, so `next` walks a triangle ccw and the
//! vectors of a triangle sum to zero. Vectors live in one global frame on
//! the complement of the erasing forest: across an ordinary edge the two
//! sides carry opposite vectors, across a forest edge they differ by the
//! rotation of the slit.

mod constructors;
mod io;
mod topology;

use std::collections::{BTreeSet, VecDeque};

use thiserror::Error;

use crate::scalar::{abs, angle_from, cross, is_multiple_of_two_pi, modulus, unit, Complex, Real};

pub use constructors::{
    make_doubled_polygon, make_pillowcase, make_regular_4g_gon, make_torus, regular_polygon,
};
pub use io::{build_surface, SurfaceSpec, VertexSpec};
pub use topology::{forest_components, rotation_side};

/// One oriented side of a triangle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HalfEdge {
    pub id: usize,
    pub triangle: usize,
    /// Successor inside the triangle (counterclockwise).
    pub next: usize,
    pub twin: usize,
    /// Tail vertex.
    pub origin: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Vertex<T> {
    pub id: usize,
    /// Declared cone angle, checked against the geometry when present.
    pub target_angle: Option<T>,
    /// An outgoing half-edge; fixes the vertex label independently of ids.
    pub anchor: usize,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SurfaceError {
    #[error("malformed surface: {0}")]
    Malformed(String),
    #[error("triangle {triangle} does not close (residual {residual:e})")]
    ClosureViolation { triangle: usize, residual: f64 },
    #[error("triangle {triangle} is not positively oriented")]
    OrientationViolation { triangle: usize },
    #[error("edge {edge} sides do not match (residual {residual:e})")]
    GluingMismatch { edge: usize, residual: f64 },
    #[error("vertex {vertex}: cone angle {computed} differs from declared {declared}")]
    AngleMismatch {
        vertex: usize,
        computed: f64,
        declared: f64,
    },
    #[error("forest edges contain a cycle")]
    ForestNotTrees,
    #[error("vertex {vertex} has cone angle outside 2πN but is not covered by the forest")]
    ForestMissesSingularity { vertex: usize },
    #[error("forest edge {edge}: vectors disagree with the angle-sum rotation (residual {residual:e})")]
    InconsistentRotation { edge: usize, residual: f64 },
    #[error("Gauss-Bonnet violated (residual {residual:e})")]
    GaussBonnetViolation { residual: f64 },
    #[error("Euler characteristic {euler} does not give an integer genus")]
    NonIntegerGenus { euler: i64 },
    #[error("unknown vertex {0}")]
    UnknownVertex(usize),
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("surface file: {0}")]
    Format(String),
}

/// Unvalidated combinatorics and geometry, the input of [`FlatSurface::from_parts`].
#[derive(Clone, Debug)]
pub struct SurfaceParts<T> {
    pub triangles: Vec<[usize; 3]>,
    pub twins: Vec<usize>,
    pub vectors: Vec<Complex<T>>,
    pub target_angles: Vec<Option<T>>,
    /// Outgoing half-edge per vertex label. `None`: label vertex orbits by
    /// increasing smallest half-edge id.
    pub anchors: Option<Vec<usize>>,
    /// Edge ids (smaller half-edge id of each forest edge).
    pub forest: BTreeSet<usize>,
}

/// A validated flat surface. Immutable; operations return new values.
#[derive(Clone, Debug, PartialEq)]
pub struct FlatSurface<T> {
    half_edges: Vec<HalfEdge>,
    triangles: Vec<[usize; 3]>,
    vectors: Vec<Complex<T>>,
    vertices: Vec<Vertex<T>>,
    forest: BTreeSet<usize>,
    angles: Vec<T>,
    genus: usize,
}

impl<T: Real> FlatSurface<T> {
    /// Validate raw parts and build a surface. Every documented invariant is
    /// checked; the first violation is reported.
    pub fn from_parts(parts: SurfaceParts<T>) -> Result<Self, SurfaceError> {
        let SurfaceParts {
            triangles,
            twins,
            vectors,
            target_angles,
            anchors,
            forest,
        } = parts;
        let nh = twins.len();
        if triangles.is_empty() || nh != 3 * triangles.len() {
            return Err(SurfaceError::Malformed(format!(
                "{} triangles need {} half-edges, found {}",
                triangles.len(),
                3 * triangles.len(),
                nh
            )));
        }
        if vectors.len() != nh {
            return Err(SurfaceError::Malformed(format!(
                "expected {nh} vectors, found {}",
                vectors.len()
            )));
        }
        let mut triangle_of = vec![usize::MAX; nh];
        let mut next = vec![usize::MAX; nh];
        for (t, tri) in triangles.iter().enumerate() {
            for k in 0..3 {
                let h = tri[k];
                if h >= nh || triangle_of[h] != usize::MAX {
                    return Err(SurfaceError::Malformed(format!(
                        "half-edge {h} missing or repeated in triangle {t}"
                    )));
                }
                triangle_of[h] = t;
                next[h] = tri[(k + 1) % 3];
            }
        }
        for (h, &tw) in twins.iter().enumerate() {
            if tw >= nh || tw == h || twins[tw] != h {
                return Err(SurfaceError::Malformed(format!(
                    "half-edge {h} is not glued to exactly one partner"
                )));
            }
        }

        // vertex orbits: rotate ccw around the tail with twin(prev(h))
        let prev = |h: usize| next[next[h]];
        let mut orbit_of = vec![usize::MAX; nh];
        let mut orbits: Vec<Vec<usize>> = Vec::new();
        for h in 0..nh {
            if orbit_of[h] != usize::MAX {
                continue;
            }
            let id = orbits.len();
            let mut members = Vec::new();
            let mut g = h;
            loop {
                orbit_of[g] = id;
                members.push(g);
                g = twins[prev(g)];
                if g == h {
                    break;
                }
            }
            orbits.push(members);
        }
        let n = orbits.len();
        let anchors = match anchors {
            Some(a) => {
                if a.len() != n {
                    return Err(SurfaceError::Malformed(format!(
                        "{} vertex labels declared but the complex has {n} vertices",
                        a.len()
                    )));
                }
                let mut seen = vec![false; n];
                for &h in &a {
                    if h >= nh || seen[orbit_of[h]] {
                        return Err(SurfaceError::Malformed(
                            "vertex anchors must pick one half-edge per vertex".into(),
                        ));
                    }
                    seen[orbit_of[h]] = true;
                }
                a
            }
            // orbits were discovered in increasing order of their smallest id
            None => orbits.iter().map(|o| o[0]).collect(),
        };
        if target_angles.len() != n {
            return Err(SurfaceError::Malformed(format!(
                "{} vertices declared but the complex has {n} vertices",
                target_angles.len()
            )));
        }
        let mut label_of_orbit = vec![0; n];
        for (label, &h) in anchors.iter().enumerate() {
            label_of_orbit[orbit_of[h]] = label;
        }
        let half_edges: Vec<HalfEdge> = (0..nh)
            .map(|h| HalfEdge {
                id: h,
                triangle: triangle_of[h],
                next: next[h],
                twin: twins[h],
                origin: label_of_orbit[orbit_of[h]],
            })
            .collect();
        let vertices: Vec<Vertex<T>> = anchors
            .iter()
            .enumerate()
            .map(|(id, &anchor)| Vertex {
                id,
                target_angle: target_angles[id],
                anchor,
            })
            .collect();

        let tol = T::tolerances();
        for (t, tri) in triangles.iter().enumerate() {
            let [a, b, c] = [vectors[tri[0]], vectors[tri[1]], vectors[tri[2]]];
            let scale = modulus(a) + modulus(b) + modulus(c);
            let residual = modulus(a + b + c);
            if !(residual <= tol.closure * scale) {
                return Err(SurfaceError::ClosureViolation {
                    triangle: t,
                    residual: residual.as_f64(),
                });
            }
            if !(cross(a, b) > tol.convexity * modulus(a) * modulus(b)) {
                return Err(SurfaceError::OrientationViolation { triangle: t });
            }
        }

        for &e in &forest {
            if e >= nh || twins[e] < e {
                return Err(SurfaceError::Malformed(format!(
                    "forest entry {e} is not the smaller half-edge of an edge"
                )));
            }
        }
        for h in 0..nh {
            let tw = twins[h];
            if h < tw && !forest.contains(&h) {
                let scale = modulus(vectors[h]) + modulus(vectors[tw]);
                let residual = modulus(vectors[h] + vectors[tw]);
                if !(residual <= tol.closure * scale) {
                    return Err(SurfaceError::GluingMismatch {
                        edge: h,
                        residual: residual.as_f64(),
                    });
                }
            }
        }

        let mut surface = FlatSurface {
            half_edges,
            triangles,
            vectors,
            vertices,
            forest,
            angles: Vec::new(),
            genus: 0,
        };
        surface.angles = (0..n).map(|v| surface.angle_sum(v)).collect();

        let euler = n as i64 - (nh / 2) as i64 + surface.triangles.len() as i64;
        if euler > 2 || (2 - euler) % 2 != 0 {
            return Err(SurfaceError::NonIntegerGenus { euler });
        }
        surface.genus = ((2 - euler) / 2) as usize;

        topology::check_forest(&surface)?;
        for v in 0..n {
            if let Some(declared) = surface.vertices[v].target_angle {
                let computed = surface.angles[v];
                if abs(computed - declared) > tol.angle * (T::one() + abs(declared)) {
                    return Err(SurfaceError::AngleMismatch {
                        vertex: v,
                        computed: computed.as_f64(),
                        declared: declared.as_f64(),
                    });
                }
            }
        }
        topology::check_forest_rotations(&surface)?;

        let residual = surface.gauss_bonnet_residual();
        let total: T = surface.angles.iter().copied().fold(T::zero(), |s, a| s + a);
        if abs(residual) >= tol.angle * (T::one() + total) {
            return Err(SurfaceError::GaussBonnetViolation {
                residual: residual.as_f64(),
            });
        }
        Ok(surface)
    }

    /// The parts this surface was built from (with explicit vertex anchors).
    pub fn to_parts(&self) -> SurfaceParts<T> {
        SurfaceParts {
            triangles: self.triangles.clone(),
            twins: self.half_edges.iter().map(|h| h.twin).collect(),
            vectors: self.vectors.clone(),
            target_angles: self.vertices.iter().map(|v| v.target_angle).collect(),
            anchors: Some(self.vertices.iter().map(|v| v.anchor).collect()),
            forest: self.forest.clone(),
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_half_edges(&self) -> usize {
        self.half_edges.len()
    }

    pub fn num_edges(&self) -> usize {
        self.half_edges.len() / 2
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn half_edges(&self) -> &[HalfEdge] {
        &self.half_edges
    }

    pub fn half_edge(&self, h: usize) -> &HalfEdge {
        &self.half_edges[h]
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn vertices(&self) -> &[Vertex<T>] {
        &self.vertices
    }

    pub fn vectors(&self) -> &[Complex<T>] {
        &self.vectors
    }

    #[inline]
    pub fn vector(&self, h: usize) -> Complex<T> {
        self.vectors[h]
    }

    #[inline]
    pub fn next(&self, h: usize) -> usize {
        self.half_edges[h].next
    }

    #[inline]
    pub fn prev(&self, h: usize) -> usize {
        self.next(self.next(h))
    }

    #[inline]
    pub fn twin(&self, h: usize) -> usize {
        self.half_edges[h].twin
    }

    #[inline]
    pub fn origin(&self, h: usize) -> usize {
        self.half_edges[h].origin
    }

    #[inline]
    pub fn head(&self, h: usize) -> usize {
        self.origin(self.next(h))
    }

    #[inline]
    pub fn triangle_of(&self, h: usize) -> usize {
        self.half_edges[h].triangle
    }

    /// Edge id: the smaller of the two half-edge ids.
    #[inline]
    pub fn edge_id(&self, h: usize) -> usize {
        h.min(self.twin(h))
    }

    /// Edge ids in increasing order.
    pub fn edges(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.half_edges.len()).filter(move |&h| h < self.twin(h))
    }

    pub fn forest(&self) -> &BTreeSet<usize> {
        &self.forest
    }

    #[inline]
    pub fn is_forest_edge(&self, h: usize) -> bool {
        self.forest.contains(&self.edge_id(h))
    }

    /// Next outgoing half-edge counterclockwise around the tail of `h`.
    #[inline]
    pub fn rotate_ccw(&self, h: usize) -> usize {
        self.twin(self.prev(h))
    }

    /// Outgoing half-edges of `v` in counterclockwise order, starting at `start`
    /// (which must leave `v`), or at the vertex anchor.
    pub fn outgoing_from(&self, start: usize) -> Vec<usize> {
        let mut out = vec![start];
        let mut g = self.rotate_ccw(start);
        while g != start {
            out.push(g);
            g = self.rotate_ccw(g);
        }
        out
    }

    pub fn outgoing(&self, v: usize) -> Vec<usize> {
        self.outgoing_from(self.vertices[v].anchor)
    }

    /// Angle of the triangle corner at the tail of `h`.
    pub fn corner_angle(&self, h: usize) -> T {
        let out = self.vector(h);
        let back = -self.vector(self.prev(h));
        angle_from(out, back)
    }

    fn angle_sum(&self, v: usize) -> T {
        self.outgoing(v)
            .into_iter()
            .map(|h| self.corner_angle(h))
            .fold(T::zero(), |s, a| s + a)
    }

    pub fn cone_angle(&self, v: usize) -> Result<T, SurfaceError> {
        self.angles
            .get(v)
            .copied()
            .ok_or(SurfaceError::UnknownVertex(v))
    }

    pub fn cone_angles(&self) -> &[T] {
        &self.angles
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.num_vertices() as i64 - self.num_edges() as i64 + self.num_triangles() as i64
    }

    /// `sum(alpha) - 2 pi (2g + n - 2)`.
    pub fn gauss_bonnet_residual(&self) -> T {
        let total = self.angles.iter().copied().fold(T::zero(), |s, a| s + a);
        let expected = T::two_pi()
            * T::of((2 * self.genus + self.num_vertices()) as f64 - 2.0);
        total - expected
    }

    /// Whether every cone angle is a multiple of `2 pi`.
    pub fn is_translation(&self) -> bool {
        self.angles.iter().all(|&a| is_multiple_of_two_pi(a))
    }

    pub fn triangle_area(&self, t: usize) -> T {
        let [a, b, _] = self.triangles[t];
        cross(self.vectors[a], self.vectors[b]) / T::of(2.0)
    }

    pub fn total_area(&self) -> T {
        (0..self.triangles.len())
            .map(|t| self.triangle_area(t))
            .fold(T::zero(), |s, a| s + a)
    }

    /// Largest edge length, used to scale geometric tolerances.
    pub fn length_scale(&self) -> T {
        self.vectors
            .iter()
            .map(|&z| modulus(z))
            .fold(T::zero(), |m, l| if l > m { l } else { m })
    }

    /// The surface with every vector multiplied by `w` (a similarity).
    pub fn scaled(&self, w: Complex<T>) -> Result<Self, SurfaceError> {
        let mut parts = self.to_parts();
        for z in parts.vectors.iter_mut() {
            *z *= w;
        }
        FlatSurface::from_parts(parts)
    }

    /// Rotation `rho` of the gluing at `h`: `vec(twin h) = -rho * vec(h)`.
    pub fn edge_rotation(&self, h: usize) -> Complex<T> {
        let ratio = -self.vector(self.twin(h)) / self.vector(h);
        ratio.unscale(modulus(ratio))
    }

    /// Copy of the surface with replaced vectors and forest, revalidated.
    pub fn with_geometry(
        &self,
        vectors: Vec<Complex<T>>,
        forest: BTreeSet<usize>,
    ) -> Result<Self, SurfaceError> {
        let mut parts = self.to_parts();
        parts.vectors = vectors;
        parts.forest = forest;
        FlatSurface::from_parts(parts)
    }

    /// Label-preserving isomorphism test: a bijection of half-edges that
    /// respects `next`, `twin`, `origin`, forest membership and matches
    /// vectors within `1e-9` relative.
    pub fn canonically_equal(&self, other: &Self) -> bool {
        self.isomorphism(other).is_some()
    }

    /// The half-edge bijection behind [`canonically_equal`](Self::canonically_equal).
    pub fn isomorphism(&self, other: &Self) -> Option<Vec<usize>> {
        if self.num_half_edges() != other.num_half_edges()
            || self.num_vertices() != other.num_vertices()
            || self.forest.len() != other.forest.len()
        {
            return None;
        }
        let tol = T::tolerances().closure;
        let close = |a: Complex<T>, b: Complex<T>| {
            modulus(a - b) <= tol * (T::one() + modulus(a))
        };
        let seed = 0;
        for candidate in 0..other.num_half_edges() {
            if other.origin(candidate) != self.origin(seed)
                || !close(self.vector(seed), other.vector(candidate))
            {
                continue;
            }
            let mut map = vec![usize::MAX; self.num_half_edges()];
            let mut used = vec![false; other.num_half_edges()];
            let mut queue = VecDeque::from([(seed, candidate)]);
            map[seed] = candidate;
            used[candidate] = true;
            let mut ok = true;
            while let Some((h, k)) = queue.pop_front() {
                if self.origin(h) != other.origin(k)
                    || !close(self.vector(h), other.vector(k))
                    || self.is_forest_edge(h) != other.is_forest_edge(k)
                {
                    ok = false;
                    break;
                }
                for (a, b) in [(self.next(h), other.next(k)), (self.twin(h), other.twin(k))] {
                    if map[a] == usize::MAX {
                        if used[b] {
                            ok = false;
                            break;
                        }
                        map[a] = b;
                        used[b] = true;
                        queue.push_back((a, b));
                    } else if map[a] != b {
                        ok = false;
                        break;
                    }
                }
                if !ok {
                    break;
                }
            }
            if ok && map.iter().all(|&m| m != usize::MAX) {
                return Some(map);
            }
        }
        None
    }

    /// Vertex of each triangle corner in the plane when the triangle of `h`
    /// is developed with the tail of `h` at `base`.
    pub fn developed_triangle(&self, h: usize, base: Complex<T>) -> [Complex<T>; 3] {
        let p1 = base + self.vector(h);
        let p2 = p1 + self.vector(self.next(h));
        [base, p1, p2]
    }

    /// Rotation of the frame of `e^{i theta}`, helper for callers that need
    /// `-e^{i theta} vec(h)`.
    pub fn rotated(&self, h: usize, theta: T) -> Complex<T> {
        -(unit(theta) * self.vector(h))
    }
}

#[cfg(test)]
mod tests;
