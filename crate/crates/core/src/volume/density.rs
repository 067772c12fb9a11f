use serde::{Deserialize, Serialize};

use crate::charts::ChartSystem;
use crate::linalg::{hstack, pseudo_inverse, rank_and_kernel, real_jacobian, CMatrix, CVector};
use crate::scalar::{Complex, Real};

use super::VolumeError;

/// Which exact sequence defines the density.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Convention {
    /// Surjective rows: `0 -> V -> C^N1 -> C^R -> 0`.
    ShortSequence,
    /// Rows of corank one: `0 -> V -> C^N1 -> C^R -> C -> 0` through the
    /// weighted coordinate sum.
    FourTermSequence,
}

impl Convention {
    pub fn tag(self) -> &'static str {
        match self {
            Convention::ShortSequence => "short-sequence",
            Convention::FourTermSequence => "four-term-sequence",
        }
    }
}

/// A density value with the frame it was evaluated on.
#[derive(Clone, Debug)]
pub struct DensityReport<T: Real> {
    pub value: T,
    pub frame: CMatrix<T>,
    pub convention: Convention,
    pub fingerprint: u64,
}

fn convention_of<T: Real>(system: &ChartSystem<T>) -> Result<Convention, VolumeError> {
    let rows = system.num_rows();
    match (system.translation, system.rank) {
        (false, r) if r == rows => Ok(Convention::ShortSequence),
        (true, r) if r + 1 == rows => Ok(Convention::FourTermSequence),
        (_, rank) => Err(VolumeError::RankCaseMismatch { rank, rows }),
    }
}

/// Default complement `W` (columns mapped onto the image by the rows) and,
/// in the corank-one case, a vector `y` with nonzero coordinate sum.
///
/// `W` is the pseudo-inverse applied to the standard codomain basis, or to
/// an orthonormal basis of the sum hyperplane; `y` is the weight vector
/// scaled to unit sum.
pub fn default_complement<T: Real>(system: &ChartSystem<T>) -> Result<(CMatrix<T>, Option<CVector<T>>), VolumeError> {
    let pinv = pseudo_inverse(&system.rows, T::tolerances().rank);
    match convention_of(system)? {
        Convention::ShortSequence => Ok((pinv, None)),
        Convention::FourTermSequence => {
            let s = weights(system);
            let row = CMatrix::from_row_slice(1, s.len(), s.as_slice());
            let (_, hyperplane) = rank_and_kernel(&row, T::tolerances().rank);
            let norm2 = s.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr());
            let y = s.map(|z| z.conj().unscale(norm2));
            Ok((pinv * hyperplane, Some(y)))
        }
    }
}

fn weights<T: Real>(system: &ChartSystem<T>) -> CVector<T> {
    CVector::from_iterator(
        system.num_rows(),
        system.coordinate_sum().into_iter().map(|w| Complex::new(w, T::zero())),
    )
}

/// Density of the frame under the chart's exact sequence, with the default
/// complement.
pub fn kernel_density<T: Real>(system: &ChartSystem<T>, frame: &CMatrix<T>) -> Result<DensityReport<T>, VolumeError> {
    let (w, y) = default_complement(system)?;
    kernel_density_with(system, frame, &w, y.as_ref())
}

/// Density with an explicit complement `w` (and `y` in the corank-one case):
/// `|det[F|W]|^2 / |det(A W)|^2`, or `|det[F|W]|^2 |s(y)|^2 / |det[A W | y]|^2`.
pub fn kernel_density_with<T: Real>(
    system: &ChartSystem<T>,
    frame: &CMatrix<T>,
    w: &CMatrix<T>,
    y: Option<&CVector<T>>,
) -> Result<DensityReport<T>, VolumeError> {
    let convention = convention_of(system)?;
    let expected = (system.num_columns(), system.dim());
    if frame.shape() != expected {
        return Err(VolumeError::FrameShape {
            expected,
            found: frame.shape(),
        });
    }
    let image = &system.rows * frame;
    let scale = system.rows.norm() * frame.norm();
    let residual = if scale > T::zero() { image.norm() / scale } else { T::zero() };
    if residual > T::tolerances().rank {
        return Err(VolumeError::FrameNotInKernel {
            residual: residual.as_f64(),
        });
    }
    let top = real_jacobian(&hstack(frame, w));
    let aw = &system.rows * w;
    let value = match (convention, y) {
        (Convention::ShortSequence, _) => top / real_jacobian(&aw),
        (Convention::FourTermSequence, Some(y)) => {
            let sum = weights(system).dot(y);
            let bottom = real_jacobian(&hstack(&aw, &CMatrix::from_column_slice(y.len(), 1, y.as_slice())));
            top * sum.norm_sqr() / bottom
        }
        (Convention::FourTermSequence, None) => {
            return Err(VolumeError::RankCaseMismatch {
                rank: system.rank,
                rows: system.num_rows(),
            })
        }
    };
    Ok(DensityReport {
        value,
        frame: frame.clone(),
        convention,
        fingerprint: system.fingerprint(),
    })
}
