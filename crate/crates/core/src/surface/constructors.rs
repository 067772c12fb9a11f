//! Example surfaces: flat tori, doubled convex polygons and the regular
//! `4g`-gon with opposite sides identified.

use std::collections::BTreeSet;

use crate::scalar::{cross, modulus, unit, Complex, Real};

use super::{FlatSurface, SurfaceError, SurfaceParts};

/// Torus spanned by `u` and `v`, cut along the diagonal `u + v`.
///
/// Half-edges 0, 1, 2 carry `u, v, -u-v`; half-edges 3, 4, 5 their negatives.
pub fn make_torus<T: Real>(u: Complex<T>, v: Complex<T>) -> Result<FlatSurface<T>, SurfaceError> {
    if !(cross(u, v) > T::tolerances().convexity * modulus(u) * modulus(v)) {
        return Err(SurfaceError::DegenerateInput(
            "torus periods must satisfy Im(conj(u) v) > 0".into(),
        ));
    }
    let w = -(u + v);
    FlatSurface::from_parts(SurfaceParts {
        triangles: vec![[0, 1, 2], [3, 4, 5]],
        twins: vec![3, 4, 5, 0, 1, 2],
        vectors: vec![u, v, w, -u, -v, -w],
        target_angles: vec![Some(T::two_pi())],
        anchors: None,
        forest: BTreeSet::new(),
    })
}

/// Two copies of a strictly convex polygon glued along their boundary.
///
/// The top copy is fanned from `p[0]`; the bottom copy is its mirror image
/// across the line through `p[k-1]` and `p[0]`, fanned the same way. The
/// forest is the fold path `p0 p1 ... p(k-1)`, leaving the side `p(k-1) p0`
/// as an ordinary edge. Vertex `i` is the image of `p[i]`.
pub fn make_doubled_polygon<T: Real>(points: &[Complex<T>]) -> Result<FlatSurface<T>, SurfaceError> {
    let k = points.len();
    if k < 3 {
        return Err(SurfaceError::DegenerateInput("a polygon needs at least 3 vertices".into()));
    }
    let eps = T::tolerances().convexity;
    for i in 0..k {
        let a = points[(i + 1) % k] - points[i];
        let b = points[(i + 2) % k] - points[(i + 1) % k];
        if !(cross(a, b) > eps * modulus(a) * modulus(b)) {
            return Err(SurfaceError::DegenerateInput(format!(
                "polygon is not strictly convex and counterclockwise at vertex {}",
                (i + 1) % k
            )));
        }
    }
    let axis = points[k - 1] - points[0];
    let d = axis.unscale(modulus(axis));
    let p0 = points[0];
    let mirror = |z: Complex<T>| p0 + d * d * (z - p0).conj();

    let top = k - 2;
    let nh = 6 * top;
    let mut triangles = Vec::with_capacity(2 * top);
    let mut vectors = vec![Complex::new(T::zero(), T::zero()); nh];
    let mut twins = vec![usize::MAX; nh];
    for j in 0..top {
        let (a, b, c) = (p0, points[j + 1], points[j + 2]);
        triangles.push([3 * j, 3 * j + 1, 3 * j + 2]);
        vectors[3 * j] = b - a;
        vectors[3 * j + 1] = c - b;
        vectors[3 * j + 2] = a - c;
    }
    for j in 0..top {
        let base = 3 * (top + j);
        let (a, b, c) = (mirror(p0), mirror(points[j + 2]), mirror(points[j + 1]));
        triangles.push([base, base + 1, base + 2]);
        vectors[base] = b - a;
        vectors[base + 1] = c - b;
        vectors[base + 2] = a - c;
    }
    let mut glue = |a: usize, b: usize| {
        twins[a] = b;
        twins[b] = a;
    };
    for j in 0..top - 1 {
        glue(3 * j + 2, 3 * (j + 1));
        glue(3 * (top + j), 3 * (top + j + 1) + 2);
    }
    for j in 0..top {
        glue(3 * j + 1, 3 * (top + j) + 1);
    }
    glue(0, 3 * top + 2);
    glue(3 * (top - 1) + 2, 3 * (2 * top - 1));

    let mut forest: BTreeSet<usize> = (0..top).map(|j| 3 * j + 1).collect();
    forest.insert(0);
    let target_angles = (0..k)
        .map(|i| {
            let into = points[i] - points[(i + k - 1) % k];
            let out = points[(i + 1) % k] - points[i];
            // interior angle = pi - exterior turning angle
            let turn = cross(into, out).atan2(crate::scalar::dot(into, out));
            Some(T::of(2.0) * (T::pi() - turn))
        })
        .collect();
    FlatSurface::from_parts(SurfaceParts {
        triangles,
        twins,
        vectors,
        target_angles,
        anchors: None,
        forest,
    })
}

/// Doubled unit square: four cone points of angle `pi`.
pub fn make_pillowcase<T: Real>() -> Result<FlatSurface<T>, SurfaceError> {
    let (o, l) = (T::zero(), T::one());
    make_doubled_polygon(&[
        Complex::new(o, o),
        Complex::new(l, o),
        Complex::new(l, l),
        Complex::new(o, l),
    ])
}

/// Regular `k`-gon with side length `side`, first side along the positive
/// real axis starting at the origin, counterclockwise.
pub fn regular_polygon<T: Real>(k: usize, side: T) -> Vec<Complex<T>> {
    let step = T::two_pi() / T::of(k as f64);
    let mut points = Vec::with_capacity(k);
    let mut p = Complex::new(T::zero(), T::zero());
    for j in 0..k {
        points.push(p);
        p += unit(step * T::of(j as f64)).scale(side);
    }
    points
}

/// Regular `4g`-gon with opposite sides glued by translations: genus `g`,
/// one cone point of angle `2 pi (2g - 1)`, empty forest.
pub fn make_regular_4g_gon<T: Real>(g: usize) -> Result<FlatSurface<T>, SurfaceError> {
    if g < 2 {
        return Err(SurfaceError::DegenerateInput("the 4g-gon surface needs g >= 2".into()));
    }
    let k = 4 * g;
    let points = regular_polygon(k, T::one());
    let nt = k - 2;
    let nh = 3 * nt;
    let mut triangles = Vec::with_capacity(nt);
    let mut vectors = Vec::with_capacity(nh);
    for t in 0..nt {
        let (a, b, c) = (points[0], points[t + 1], points[t + 2]);
        triangles.push([3 * t, 3 * t + 1, 3 * t + 2]);
        vectors.extend([b - a, c - b, a - c]);
    }
    let mut twins = vec![usize::MAX; nh];
    for t in 0..nt - 1 {
        twins[3 * t + 2] = 3 * (t + 1);
        twins[3 * (t + 1)] = 3 * t + 2;
    }
    let side = |i: usize| match i {
        0 => 0,
        i if i == k - 1 => 3 * (nt - 1) + 2,
        i => 3 * (i - 1) + 1,
    };
    for i in 0..2 * g {
        let (a, b) = (side(i), side(i + 2 * g));
        twins[a] = b;
        twins[b] = a;
    }
    // opposite sides of a regular polygon are exact negatives in exact
    // arithmetic; make them so in floating point too
    for i in 0..2 * g {
        let (a, b) = (side(i), side(i + 2 * g));
        let avg = (vectors[a] - vectors[b]).unscale(T::of(2.0));
        vectors[a] = avg;
        vectors[b] = -avg;
    }
    FlatSurface::from_parts(SurfaceParts {
        triangles,
        twins,
        vectors,
        target_angles: vec![Some(T::two_pi() * T::of((2 * g - 1) as f64))],
        anchors: None,
        forest: BTreeSet::new(),
    })
}
