//! Small dense complex linear algebra: numerical rank, canonical kernel bases,
//! pseudo-inverses and determinants.

use nalgebra::{ComplexField, DMatrix, DVector};

use crate::scalar::{Complex, Real};

pub type CMatrix<T> = DMatrix<Complex<T>>;
pub type CVector<T> = DVector<Complex<T>>;

/// Singular values (descending) and a full right-singular basis.
///
/// Wide matrices are padded with zero rows so the decomposition also
/// returns the null-space directions.
pub fn full_svd<T: Real>(a: &CMatrix<T>) -> (Vec<T>, CMatrix<T>) {
    let (rows, cols) = a.shape();
    let square = if rows < cols {
        let mut padded = CMatrix::<T>::zeros(cols, cols);
        padded.view_mut((0, 0), (rows, cols)).copy_from(a);
        padded
    } else {
        a.clone()
    };
    let svd = square.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| {
        svd.singular_values[j]
            .partial_cmp(&svd.singular_values[i])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let sigma: Vec<T> = order.iter().map(|&i| svd.singular_values[i]).collect();
    let mut v = CMatrix::<T>::zeros(cols, order.len());
    for (k, &i) in order.iter().enumerate() {
        for r in 0..cols {
            v[(r, k)] = v_t[(i, r)].conjugate();
        }
    }
    (sigma, v)
}

/// Number of singular values above `rel_tol * sigma_max`.
pub fn numeric_rank<T: Real>(a: &CMatrix<T>, rel_tol: T) -> usize {
    let (sigma, _) = full_svd(a);
    count_above(&sigma, rel_tol)
}

fn count_above<T: Real>(sigma: &[T], rel_tol: T) -> usize {
    let max = sigma.iter().copied().fold(T::zero(), |m, s| if s > m { s } else { m });
    if max == T::zero() {
        return 0;
    }
    sigma.iter().filter(|&&s| s > rel_tol * max).count()
}

/// Rank together with a canonical orthonormal kernel basis.
///
/// The basis depends only on the kernel subspace: the orthogonal projector
/// onto the kernel is applied to the standard basis vectors in index order
/// and the survivors are orthonormalized.
pub fn rank_and_kernel<T: Real>(a: &CMatrix<T>, rel_tol: T) -> (usize, CMatrix<T>) {
    let cols = a.ncols();
    let (sigma, v) = full_svd(a);
    let rank = count_above(&sigma, rel_tol);
    let null = v.columns(rank, cols - rank).into_owned();
    (rank, canonical_basis(&null))
}

/// Deterministic orthonormal basis of the column span of `basis`
/// (which must have orthonormal columns).
pub fn canonical_basis<T: Real>(basis: &CMatrix<T>) -> CMatrix<T> {
    let (n, d) = basis.shape();
    let projector = basis * basis.adjoint();
    let mut out: Vec<CVector<T>> = Vec::with_capacity(d);
    let cutoff = T::of(1e-3);
    for j in 0..n {
        if out.len() == d {
            break;
        }
        let mut x: CVector<T> = projector.column(j).into_owned();
        for _ in 0..2 {
            for q in &out {
                let c = q.dotc(&x);
                x -= q * c;
            }
        }
        let norm = x.norm();
        if norm > cutoff {
            out.push(x.unscale(norm));
        }
    }
    let mut m = CMatrix::<T>::zeros(n, out.len());
    for (k, q) in out.iter().enumerate() {
        m.set_column(k, q);
    }
    m
}

/// Moore-Penrose pseudo-inverse with a relative singular value cutoff.
pub fn pseudo_inverse<T: Real>(a: &CMatrix<T>, rel_tol: T) -> CMatrix<T> {
    let svd = a.clone().svd(true, true);
    let max = svd
        .singular_values
        .iter()
        .copied()
        .fold(T::zero(), |m, s| if s > m { s } else { m });
    svd.pseudo_inverse(rel_tol * max)
        .expect("singular vectors were computed")
}

pub fn determinant<T: Real>(a: &CMatrix<T>) -> Complex<T> {
    assert!(a.is_square(), "determinant of a non-square matrix");
    if a.nrows() == 0 {
        return Complex::new(T::one(), T::zero());
    }
    a.clone().lu().determinant()
}

/// `|det|^2`, the real Jacobian of a complex-linear map.
pub fn real_jacobian<T: Real>(a: &CMatrix<T>) -> T {
    determinant(a).modulus_squared()
}

pub fn frobenius<T: Real>(a: &CMatrix<T>) -> T {
    a.norm()
}

/// Horizontal concatenation `[a | b]`.
pub fn hstack<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> CMatrix<T> {
    assert_eq!(a.nrows(), b.nrows());
    let mut m = CMatrix::<T>::zeros(a.nrows(), a.ncols() + b.ncols());
    m.view_mut((0, 0), a.shape()).copy_from(a);
    m.view_mut((0, a.ncols()), b.shape()).copy_from(b);
    m
}

/// Real matrix of a complex matrix acting on `(Re z1, Im z1, Re z2, Im z2, ...)`.
pub fn realify<T: Real>(a: &CMatrix<T>) -> DMatrix<T> {
    let (r, c) = a.shape();
    let mut m = DMatrix::<T>::zeros(2 * r, 2 * c);
    for i in 0..r {
        for j in 0..c {
            let z = a[(i, j)];
            m[(2 * i, 2 * j)] = z.re;
            m[(2 * i, 2 * j + 1)] = -z.im;
            m[(2 * i + 1, 2 * j)] = z.im;
            m[(2 * i + 1, 2 * j + 1)] = z.re;
        }
    }
    m
}
