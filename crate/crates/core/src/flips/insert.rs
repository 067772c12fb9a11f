use std::collections::BTreeSet;

use crate::scalar::{cross, modulus, positive_angle, unit, argument, Complex, Real};
use crate::surface::FlatSurface;

use super::moves::{check_property_q, flip, FlipPath};
use super::trace::{trace_segment, Trace};
use super::FlipError;

/// Flip until the segment of development vector `w` from the corner
/// `start` is an edge. Each round reduces the number of crossings.
pub fn insert_segment<T: Real>(
    surface: &FlatSurface<T>,
    start: usize,
    w: Complex<T>,
) -> Result<(FlatSurface<T>, FlipPath<T>), FlipError> {
    if surface.genus() > 0 {
        let q = check_property_q(surface);
        if !q.holds {
            return Err(FlipError::PropertyQViolated { witness: q.witness });
        }
    }
    insert_unchecked(surface, start, w).map(|(s, p, _)| (s, p))
}

/// Insertion without the holonomy check; also returns the half-edge that
/// realizes the segment.
pub(crate) fn insert_unchecked<T: Real>(
    surface: &FlatSurface<T>,
    start: usize,
    w: Complex<T>,
) -> Result<(FlatSurface<T>, FlipPath<T>, usize), FlipError> {
    let mut current = surface.clone();
    let mut path = FlipPath::new();
    let mut trace = trace_segment(&current, start, w)?;
    while !trace.is_empty() {
        let before = trace.len();
        let offsets = corner_offsets(&current, &trace);
        let flipped = fan_round(&mut current, &trace, &mut path)?;
        let (corner, w_next) = relocate(&current, &offsets, &flipped, trace.w)?;
        trace = trace_segment(&current, corner, w_next)?;
        if trace.len() >= before {
            return Err(FlipError::NoProgress {
                before,
                after: trace.len(),
            });
        }
    }
    // an empty trace runs along the side of its start corner
    Ok((current, path, trace.start))
}

/// Counterclockwise angle from every outgoing half-edge at the start vertex
/// to the segment, lifted so that the start corner gets a value in
/// `(0, corner angle)`.
fn corner_offsets<T: Real>(surface: &FlatSurface<T>, trace: &Trace<T>) -> Vec<(usize, T)> {
    let h0 = trace.start;
    let first = positive_angle(argument(trace.w) - argument(surface.vector(h0)));
    let mut out = Vec::new();
    let mut acc = first;
    for h in surface.outgoing_from(h0) {
        out.push((h, acc));
        acc -= surface.corner_angle(h);
    }
    out
}

/// Find the corner holding the segment again after some edges were flipped.
fn relocate<T: Real>(
    surface: &FlatSurface<T>,
    offsets: &[(usize, T)],
    flipped: &BTreeSet<usize>,
    w: Complex<T>,
) -> Result<(usize, Complex<T>), FlipError> {
    let &(reference, phi) = offsets
        .iter()
        .find(|(h, _)| !flipped.contains(&surface.edge_id(*h)))
        .ok_or_else(|| FlipError::Unsupported("every edge at the start vertex was flipped".into()))?;
    let vertex = surface.origin(reference);
    let alpha = surface.cone_angles()[vertex];
    Ok(corner_at_angle(surface, reference, phi, alpha, modulus(w), Some(w)))
}

/// Corner at lifted angle `phi` counterclockwise from `reference`, with
/// the development vector of length `len` in that corner's frame. A
/// `hint` equal to the result up to rounding is returned unchanged.
pub(crate) fn corner_at_angle<T: Real>(
    surface: &FlatSurface<T>,
    reference: usize,
    phi: T,
    alpha: T,
    len: T,
    hint: Option<Complex<T>>,
) -> (usize, Complex<T>) {
    let tol = T::tolerances().angle;
    let mut phi = phi % alpha;
    if phi < T::zero() {
        phi += alpha;
    }
    if alpha - phi <= tol * (T::one() + alpha) {
        phi = T::zero();
    }
    let mut h = reference;
    let mut acc = T::zero();
    for _ in 0..surface.num_half_edges() {
        let corner = surface.corner_angle(h);
        if phi - acc < corner - tol * (T::one() + phi) || surface.rotate_ccw(h) == reference {
            break;
        }
        acc += corner;
        h = surface.rotate_ccw(h);
    }
    let psi = phi - acc;
    let v = surface.vector(h);
    let w = if psi.abs() <= tol * (T::one() + phi) {
        v * (len / modulus(v))
    } else {
        unit(argument(v) + psi) * len
    };
    match hint {
        Some(x) if modulus(x - w) <= T::of(1e-9) * len => (h, x),
        _ => (h, w),
    }
}

/// One application of the crossing-reduction step on the fan of the
/// highest polygon vertex. Returns the flipped edges.
fn fan_round<T: Real>(
    current: &mut FlatSurface<T>,
    trace: &Trace<T>,
    path: &mut FlipPath<T>,
) -> Result<BTreeSet<usize>, FlipError> {
    let mut flipped = BTreeSet::new();
    let mut apply = |current: &mut FlatSurface<T>, e: usize| -> Result<(), FlipError> {
        let (next, mv) = flip(current, e)?;
        flipped.insert(mv.edge);
        path.push(mv);
        *current = next;
        Ok(())
    };
    if trace.len() == 1 {
        apply(current, trace.crossings[0])?;
        return Ok(flipped);
    }
    let len = modulus(trace.w);
    let height = |p: Complex<T>| cross(trace.w, p) / len;
    // the side with more vertices plays the role of the upper side
    let reflect = trace.upper.len() < trace.lower.len();
    let (tops, bottoms): (Vec<T>, Vec<T>) = if reflect {
        (
            trace.lower.iter().map(|&(p, _)| -height(p)).collect(),
            trace.upper.iter().map(|&(p, _)| -height(p)).collect(),
        )
    } else {
        (
            trace.upper.iter().map(|&(p, _)| height(p)).collect(),
            trace.lower.iter().map(|&(p, _)| height(p)).collect(),
        )
    };
    let ends: Vec<(usize, usize)> = trace
        .crossing_ends
        .iter()
        .map(|&(lo, up)| if reflect { (up, lo) } else { (lo, up) })
        .map(|(b, a)| (a, b))
        .collect();
    let tol = T::tolerances().closure * len;
    let top = tops.iter().copied().fold(tops[0], |m, y| if y > m { y } else { m });
    let i0 = tops.iter().position(|&y| y >= top - tol).expect("nonempty");

    // diagonals of the fan at the apex, left to right, with their lower ends
    let mut fan: Vec<(usize, T)> = ends
        .iter()
        .zip(&trace.crossings)
        .filter(|((a, _), _)| *a == i0)
        .map(|(&(_, b), &c)| (current.edge_id(c), bottoms[b]))
        .collect();
    loop {
        let l = fan.len();
        if l == 1 {
            apply(current, fan[0].0)?;
            break;
        }
        let low = fan.iter().map(|f| f.1).fold(fan[0].1, |m, y| if y < m { y } else { m });
        let j0 = fan.iter().position(|f| f.1 <= low + tol).expect("nonempty");
        if j0 > 0 && j0 + 1 < l {
            apply(current, fan[j0].0)?;
            break;
        }
        if j0 == 0 {
            apply(current, fan[0].0)?;
            fan.remove(0);
        } else {
            apply(current, fan[l - 1].0)?;
            fan.pop();
        }
    }
    Ok(flipped)
}
