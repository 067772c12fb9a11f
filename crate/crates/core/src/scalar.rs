//! Scalar abstraction shared by every module.
//!
//! All geometry and linear algebra is written against [`Real`], which is
//! implemented for `f32` and `f64`. Tolerances travel with the scalar type so
//! that single precision gets thresholds it can actually meet.

use std::fmt;

use nalgebra::{ComplexField, RealField};
use num_traits::{FromPrimitive, ToPrimitive};

pub use num_complex::Complex;

/// Floating point scalar usable by the library (f32, f64).
pub trait Real:
    RealField + Copy + FromPrimitive + ToPrimitive + fmt::Display + fmt::LowerExp + Send + Sync
{
    /// Numeric thresholds appropriate for this precision.
    fn tolerances() -> Tolerances<Self>;

    /// Lossy conversion of an `f64` literal.
    #[inline]
    fn of(x: f64) -> Self {
        nalgebra::convert(x)
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {
    fn tolerances() -> Tolerances<f32> {
        Tolerances {
            angle: 1e-4,
            closure: 1e-4,
            rank: 1e-4,
            convexity: 1e-6,
            delaunay: 1e-4,
            kernel: 1e-4,
        }
    }
}

impl Real for f64 {
    fn tolerances() -> Tolerances<f64> {
        Tolerances {
            angle: 1e-9,
            closure: 1e-9,
            rank: 1e-8,
            convexity: 1e-12,
            delaunay: 1e-9,
            kernel: 1e-10,
        }
    }
}

/// Thresholds used for validation and numerical rank decisions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances<T> {
    /// Absolute angle tolerance, scaled by `1 + |value|` at the comparison site.
    pub angle: T,
    /// Relative tolerance for triangle closure and edge gluing residuals.
    pub closure: T,
    /// Singular values below `rank * sigma_max` count as zero.
    pub rank: T,
    /// Relative cross-product threshold for strict convexity and positive area.
    pub convexity: T,
    /// Slack on the local Delaunay predicate (opposite angle sum vs pi).
    pub delaunay: T,
    /// Relative residual accepted for "lies in the kernel" checks.
    pub kernel: T,
}

/// `Im(conj(a) * b)`: twice the signed area spanned by `a` then `b`.
#[inline]
pub fn cross<T: Real>(a: Complex<T>, b: Complex<T>) -> T {
    a.re * b.im - a.im * b.re
}

#[inline]
pub fn dot<T: Real>(a: Complex<T>, b: Complex<T>) -> T {
    a.re * b.re + a.im * b.im
}

/// Counterclockwise angle from `a` to `b`, in `(-pi, pi]`.
#[inline]
pub fn angle_from<T: Real>(a: Complex<T>, b: Complex<T>) -> T {
    cross(a, b).atan2(dot(a, b))
}

/// `e^{i theta}`.
#[inline]
pub fn unit<T: Real>(theta: T) -> Complex<T> {
    Complex::new(theta.cos(), theta.sin())
}

#[inline]
pub fn modulus<T: Real>(z: Complex<T>) -> T {
    z.re.hypot(z.im)
}

#[inline]
pub fn argument<T: Real>(z: Complex<T>) -> T {
    z.im.atan2(z.re)
}

#[inline]
pub fn abs<T: Real>(x: T) -> T {
    <T as ComplexField>::abs(x)
}

/// Reduce an angle to `(-pi, pi]`.
pub fn reduce_angle<T: Real>(theta: T) -> T {
    let two_pi = T::two_pi();
    let mut r = theta % two_pi;
    if r > T::pi() {
        r -= two_pi;
    } else if r <= -T::pi() {
        r += two_pi;
    }
    r
}

/// Reduce an angle to `[0, 2 pi)`.
pub fn positive_angle<T: Real>(theta: T) -> T {
    let two_pi = T::two_pi();
    let mut r = theta % two_pi;
    if r < T::zero() {
        r += two_pi;
    }
    if r >= two_pi {
        r -= two_pi;
    }
    r
}

/// Whether `a` and `b` agree within `tol * (1 + |a|)`.
#[inline]
pub fn approx_eq<T: Real>(a: T, b: T, tol: T) -> bool {
    abs(a - b) <= tol * (T::one() + abs(a))
}

/// Whether the angle is an integer multiple of `2 pi` (within the angle tolerance).
pub fn is_multiple_of_two_pi<T: Real>(alpha: T) -> bool {
    let tol = T::tolerances().angle;
    let k = (alpha / T::two_pi()).round();
    k >= T::one() && abs(alpha - k * T::two_pi()) <= tol * (T::one() + abs(alpha))
}
