//! Small dense linear-algebra helpers on top of nalgebra.

use alloc::vec::Vec;

use nalgebra::{DMatrix, SymmetricEigen, SVD};
#[allow(unused_imports)] // redundant whenever std is in the dependency graph
use num_traits::Float;
use rand::Rng;

use crate::{CMatrix, CVector, Complex64, Error, Result};

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Builds a complex matrix from real row-major entries.
pub fn real_matrix(rows: usize, cols: usize, entries: &[f64]) -> CMatrix {
    CMatrix::from_row_iterator(rows, cols, entries.iter().map(|&x| c(x, 0.0)))
}

pub fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest entrywise deviation `max |m - m^H|`.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..=i {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// `||U^H U - 1||_F`.
pub fn unitarity_defect(u: &CMatrix) -> f64 {
    let gram = u.adjoint() * u;
    frobenius(&(gram - CMatrix::identity(u.ncols(), u.ncols())))
}

/// Hermitian eigendecomposition with ascending eigenvalues.
///
/// Real symmetric input takes a real solver, which is several times faster
/// for the GHZ-family Hamiltonians.
pub fn eigh(m: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    let n = m.nrows();
    if n == 0 {
        return Ok((Vec::new(), CMatrix::zeros(0, 0)));
    }
    let max_iter = 200 * n.max(10);
    let (values, vectors) = if m.iter().all(|z| z.im == 0.0) {
        let real: DMatrix<f64> = m.map(|z| z.re);
        let eig = SymmetricEigen::try_new(real, f64::EPSILON, max_iter)
            .ok_or(Error::NoConvergence { dim: n })?;
        (eig.eigenvalues.as_slice().to_vec(), eig.eigenvectors.map(|x| c(x, 0.0)))
    } else {
        let eig = SymmetricEigen::try_new(m.clone(), f64::EPSILON, max_iter)
            .ok_or(Error::NoConvergence { dim: n })?;
        (eig.eigenvalues.as_slice().to_vec(), eig.eigenvectors)
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let sorted_values = order.iter().map(|&i| values[i]).collect();
    let sorted_vectors = CMatrix::from_fn(n, n, |r, col| vectors[(r, order[col])]);
    Ok((sorted_values, sorted_vectors))
}

/// Eigenvalues of a general complex square matrix, sorted by decreasing
/// magnitude.
pub fn eigenvalues_by_magnitude(m: &CMatrix) -> Result<Vec<Complex64>> {
    let n = m.nrows();
    let schur = nalgebra::Schur::try_new(m.clone(), f64::EPSILON, 1000 * n.max(1))
        .ok_or(Error::NoConvergence { dim: n })?;
    let (_, t) = schur.unpack();
    let mut values: Vec<Complex64> = (0..n).map(|i| t[(i, i)]).collect();
    values.sort_by(|a, b| b.norm().total_cmp(&a.norm()));
    Ok(values)
}

/// Unit vector spanning the (numerical) kernel of a square matrix: the right
/// singular vector of the smallest singular value.
pub fn null_vector(m: &CMatrix) -> CVector {
    let n = m.ncols();
    let svd = SVD::new(m.clone(), false, true);
    let v_t = svd.v_t.expect("requested V^H");
    let mut smallest = 0;
    for k in 1..svd.singular_values.len() {
        if svd.singular_values[k] < svd.singular_values[smallest] {
            smallest = k;
        }
    }
    CVector::from_fn(n, |i, _| v_t[(smallest, i)].conj())
}

/// Orthonormal basis of the column space, numerical rank taken relative to
/// the largest singular value. Returns `(Q, singular values)`.
pub fn column_space(m: &CMatrix, rel_threshold: f64) -> (CMatrix, Vec<f64>) {
    let svd = SVD::new(m.clone(), true, false);
    let u = svd.u.expect("requested U");
    let values: Vec<f64> = svd.singular_values.iter().copied().collect();
    let largest = values.iter().copied().fold(0.0, f64::max);
    let keep: Vec<usize> = (0..values.len())
        .filter(|&k| largest > 0.0 && values[k] > rel_threshold * largest)
        .collect();
    let q = CMatrix::from_fn(m.nrows(), keep.len(), |r, col| u[(r, keep[col])]);
    (q, values)
}

/// Orthonormal basis of the orthogonal complement of the columns of `q`,
/// which must be orthonormal. Obtained from the eigenvectors of `1 - Q Q^H`
/// with eigenvalue one.
pub fn orthogonal_complement(q: &CMatrix) -> Result<CMatrix> {
    let n = q.nrows();
    let projector = CMatrix::identity(n, n) - q * q.adjoint();
    let (values, vectors) = eigh(&projector)?;
    let keep: Vec<usize> = (0..n).filter(|&k| values[k] > 0.5).collect();
    Ok(CMatrix::from_fn(n, keep.len(), |r, col| vectors[(r, keep[col])]))
}

/// Unitary (or isometric) polar factor `P Q^H` of `m = P S Q^H`, together
/// with the singular values.
pub fn polar_factor(m: &CMatrix) -> (CMatrix, Vec<f64>) {
    let svd = SVD::new(m.clone(), true, true);
    let u = svd.u.as_ref().expect("requested U");
    let v_t = svd.v_t.as_ref().expect("requested V^H");
    (u * v_t, svd.singular_values.iter().copied().collect())
}

/// Complex number with independent standard-normal real and imaginary parts.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random::<f64>();
    let radius = (-2.0 * u1.ln()).sqrt();
    let angle = 2.0 * core::f64::consts::PI * u2;
    c(radius * angle.cos(), radius * angle.sin())
}

/// Random Hermitian matrix `(G + G^H) / 2` with Gaussian `G`.
pub fn random_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let g = CMatrix::from_fn(n, n, |_, _| complex_gaussian(rng));
    (&g + g.adjoint()).map(|z| z * 0.5)
}

/// Largest absolute eigenvalue of a Hermitian matrix.
pub fn spectral_norm_hermitian(m: &CMatrix) -> Result<f64> {
    let (values, _) = eigh(m)?;
    Ok(values.iter().fold(0.0f64, |acc, v| acc.max(v.abs())))
}

#[cfg(test)]
pub(crate) fn is_zero_matrix(m: &CMatrix) -> bool {
    use num_traits::Zero;
    m.iter().all(|z| z.is_zero())
}
