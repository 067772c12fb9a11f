use nalgebra::DMatrix;

use crate::linalg::{CMatrix, CVector};
use crate::scalar::{modulus, Complex, Real};
use crate::surface::FlatSurface;
use crate::volume::{kernel_density, sample_nearby};

use super::{area_form, leader_chart, normalize_form, LeaderChart, Normalization, SphereError};

/// `f(Z) = |z_1|^2 + ... + |z_{m-1}|^2 - |z_m|^2`, minus the area.
pub fn quadric<T: Real>(z: &CVector<T>) -> T {
    let m = z.len();
    let head = z.iter().take(m - 1).fold(T::zero(), |acc, x| acc + x.norm_sqr());
    head - z[m - 1].norm_sqr()
}

/// `<x, y> = x* G y` for the diagonal form of [`quadric`].
fn form<T: Real>(x: &CVector<T>, y: &CVector<T>) -> Complex<T> {
    let m = x.len();
    let mut acc = Complex::new(T::zero(), T::zero());
    for k in 0..m {
        let term = x[k].conj() * y[k];
        acc = if k + 1 == m { acc - term } else { acc + term };
    }
    acc
}

/// Tangent frame of `Z^perp`: `U_k = (0, .., conj z_m at k, .., conj z_k)`
/// for `k < m`, followed by `V_k = i U_k`.
pub fn conjugate_frame<T: Real>(z: &CVector<T>) -> CMatrix<T> {
    let m = z.len();
    let k = m - 1;
    let mut frame = CMatrix::zeros(m, 2 * k);
    let i = Complex::new(T::zero(), T::one());
    for j in 0..k {
        frame[(j, j)] = z[m - 1].conj();
        frame[(m - 1, j)] = z[j].conj();
        frame[(j, k + j)] = z[m - 1].conj() * i;
        frame[(m - 1, k + j)] = z[j].conj() * i;
    }
    frame
}

fn check_point<T: Real>(z: &CVector<T>, frame: &CMatrix<T>) -> Result<(), SphereError> {
    let m = z.len();
    let f = quadric(z);
    if (f + T::one()).abs() > T::of(1e-9) {
        return Err(SphereError::PointNotOnQ1 { value: f.as_f64() });
    }
    let expected = (m, 2 * (m - 1));
    if frame.shape() != expected {
        return Err(SphereError::FrameShape {
            expected,
            found: frame.shape(),
        });
    }
    for col in frame.column_iter() {
        let x = col.into_owned();
        let residual = modulus(form(z, &x)) / (z.norm() * x.norm());
        if residual > T::of(1e-9) {
            return Err(SphereError::FrameNotTangent {
                residual: residual.as_f64(),
            });
        }
    }
    Ok(())
}

/// Columns of complex vectors as real vectors `(Re z_1, Im z_1, ...)`.
fn real_columns<T: Real>(m: &CMatrix<T>) -> DMatrix<T> {
    DMatrix::from_fn(2 * m.nrows(), m.ncols(), |r, c| {
        let x = m[(r / 2, c)];
        if r % 2 == 0 {
            x.re
        } else {
            x.im
        }
    })
}

/// Chart volume on the frame: `c0 |det(frame, a, b)| / |det(df, df J)(a, b)|`.
pub fn mu1_density_with<T: Real>(
    z: &CVector<T>,
    frame: &CMatrix<T>,
    a: &CVector<T>,
    b: &CVector<T>,
    c0: T,
) -> Result<T, SphereError> {
    check_point(z, frame)?;
    let m = z.len();
    let mut full = CMatrix::zeros(m, frame.ncols() + 2);
    full.view_mut((0, 0), frame.shape()).copy_from(frame);
    full.set_column(frame.ncols(), a);
    full.set_column(frame.ncols() + 1, b);
    let volume = real_columns(&full).determinant().abs();
    let two = T::of(2.0);
    let df = |x: &CVector<T>| form(z, x).re * two;
    let df_j = |x: &CVector<T>| -form(z, x).im * two;
    let det2 = df(a) * df_j(b) - df(b) * df_j(a);
    Ok(c0 * volume / det2.abs())
}

/// [`mu1_density_with`] completed by `a = Z`, `b = iZ`.
pub fn mu1_density<T: Real>(z: &CVector<T>, frame: &CMatrix<T>, c0: T) -> Result<T, SphereError> {
    let iz = z.map(|x| x * Complex::new(T::zero(), T::one()));
    mu1_density_with(z, frame, z, &iz, c0)
}

/// `sqrt det` of the Gram matrix of `Re <x, y>` on the frame.
pub fn hyp_density<T: Real>(z: &CVector<T>, frame: &CMatrix<T>) -> Result<T, SphereError> {
    check_point(z, frame)?;
    let k = frame.ncols();
    let cols: Vec<CVector<T>> = frame.column_iter().map(|c| c.into_owned()).collect();
    let gram = DMatrix::from_fn(k, k, |i, j| form(&cols[i], &cols[j]).re);
    let chol = gram.cholesky().ok_or(SphereError::MetricNotPositive)?;
    let det = chol.l().diagonal().iter().fold(T::one(), |acc, &x| acc * x);
    Ok(det)
}

/// Density of the chart volume with respect to Lebesgue measure in the
/// normalized coordinates.
pub fn chart_constant<T: Real>(chart: &LeaderChart<T>, norm: &Normalization<T>) -> Result<T, SphereError> {
    let frame = &chart.expansion * &norm.p;
    Ok(kernel_density(&chart.system, &frame)?.value)
}

/// Ratios `mu1 / hyp` at perturbed unit-area points of one leader chart.
#[derive(Clone, Debug)]
pub struct RatioScan<T> {
    pub c0: T,
    pub ratios: Vec<T>,
    /// `(max - min) / max`.
    pub spread: T,
    /// Largest `|f(Z) + 1|` before rescaling, a check on the area form.
    pub area_residual: T,
}

pub fn ratio_scan<T: Real>(
    surface: &FlatSurface<T>,
    last_vertex: usize,
    samples: usize,
    seed: u64,
) -> Result<RatioScan<T>, SphereError> {
    let chart = leader_chart(surface, last_vertex)?;
    let form = area_form(&chart)?;
    let norm = normalize_form(&form)?;
    let c0 = chart_constant(&chart, &norm)?;
    let mut ratios = Vec::with_capacity(samples);
    let mut area_residual = T::zero();
    for sample in sample_nearby(&chart.surface, samples, seed)? {
        let v = chart.leader_coordinates(&sample);
        let z = norm.to_normalized(&v);
        let area = sample.total_area();
        area_residual = area_residual.max((quadric(&z) + area).abs() / area);
        let z = z.unscale(area.sqrt());
        let frame = conjugate_frame(&z);
        ratios.push(mu1_density(&z, &frame, c0)? / hyp_density(&z, &frame)?);
    }
    let max = ratios.iter().copied().fold(T::zero(), |m, x| m.max(x));
    let min = ratios.iter().copied().fold(max, |m, x| m.min(x));
    Ok(RatioScan {
        c0,
        ratios,
        spread: if max > T::zero() { (max - min) / max } else { T::zero() },
        area_residual,
    })
}
