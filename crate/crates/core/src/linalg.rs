//! Dense complex linear algebra shared by every module.
//!
//! Everything here works on `DMatrix<Complex64>`. Hermitian eigenproblems go
//! through nalgebra's `SymmetricEigen`; generalized Hermitian pencils `(A, B)`
//! with `B` positive definite are reduced to a standard problem with the
//! Cholesky factor of `B`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[inline]
pub fn cr(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn ensure_square(m: &CMat) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(m.nrows())
}

pub fn ensure_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// `(M + M*)/2`.
pub fn hermitian_part(m: &CMat) -> CMat {
    (m + m.adjoint()).scale(0.5)
}

/// `(M - M*)/(2i)`, so that `M = re + i*im` with both parts Hermitian.
pub fn imaginary_part(m: &CMat) -> CMat {
    (m - m.adjoint()) * c(0.0, -0.5)
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn hermitian_deviation(m: &CMat) -> f64 {
    max_abs(&(m - m.adjoint()))
}

/// Largest singular value.
pub fn spectral_norm(m: &CMat) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .fold(0.0, |acc: f64, &s| acc.max(s))
}

pub fn one_norm(m: &CMat) -> f64 {
    m.column_iter()
        .map(|col| col.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix.
/// The input is symmetrized first so round-off asymmetry is harmless.
pub fn eigh(a: &CMat) -> (Vec<f64>, CMat) {
    let n = a.nrows();
    let eig = SymmetricEigen::new(hermitian_part(a));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMat::zeros(n, n);
    for (k, &i) in order.iter().enumerate() {
        vectors.set_column(k, &eig.eigenvectors.column(i));
    }
    (values, vectors)
}

/// Solution of a generalized Hermitian eigenproblem `A x = lambda B x`.
#[derive(Debug, Clone)]
pub struct GenEig {
    /// Ascending.
    pub values: Vec<f64>,
    /// Columns are `B`-orthonormal eigenvectors matching `values`.
    pub vectors: CMat,
}

impl GenEig {
    pub fn min(&self) -> (f64, CVec) {
        (self.values[0], self.vectors.column(0).into_owned())
    }

    pub fn max(&self) -> (f64, CVec) {
        let k = self.values.len() - 1;
        (self.values[k], self.vectors.column(k).into_owned())
    }
}

/// Lower Cholesky factor of a Hermitian positive definite matrix.
pub fn cholesky_lower(b: &CMat) -> Option<CMat> {
    hermitian_part(b).cholesky().map(|ch| ch.l())
}

/// Generalized Hermitian eigenproblem with `B` positive definite.
pub fn gen_eigh(a: &CMat, b: &CMat) -> Result<GenEig> {
    let l = cholesky_lower(b).ok_or(Error::SingularGram)?;
    gen_eigh_with_factor(a, &l)
}

/// Same as [`gen_eigh`] with a precomputed lower Cholesky factor of `B`.
pub fn gen_eigh_with_factor(a: &CMat, l: &CMat) -> Result<GenEig> {
    let n = a.nrows();
    ensure_dim(n, l.nrows())?;
    if n == 0 {
        return Ok(GenEig {
            values: vec![],
            vectors: CMat::zeros(0, 0),
        });
    }
    let a = hermitian_part(a);
    let la = l.solve_lower_triangular(&a).ok_or(Error::SingularGram)?;
    let reduced = l
        .solve_lower_triangular(&la.adjoint())
        .ok_or(Error::SingularGram)?;
    let (values, y) = eigh(&reduced);
    let vectors = l
        .adjoint()
        .solve_upper_triangular(&y)
        .ok_or(Error::SingularGram)?;
    Ok(GenEig { values, vectors })
}

/// Inverse via LU, or `None` when the matrix is numerically singular.
pub fn inverse(m: &CMat) -> Option<CMat> {
    let inv = m.clone().try_inverse()?;
    if inv.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Some(inv)
    } else {
        None
    }
}

/// 1-norm condition estimate `|M|_1 |M^{-1}|_1`; infinite when singular.
pub fn condition_1(m: &CMat) -> f64 {
    match inverse(m) {
        Some(inv) => one_norm(m) * one_norm(&inv),
        None => f64::INFINITY,
    }
}

pub fn solve(m: &CMat, rhs: &CVec) -> Option<CVec> {
    let x = m.clone().lu().solve(rhs)?;
    if x.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Some(x)
    } else {
        None
    }
}

/// `A B` through four real products, which use the blocked `f64` kernel.
/// Small products go through the generic complex path.
pub fn matmul(a: &CMat, b: &CMat) -> CMat {
    if a.nrows() * a.ncols() * b.ncols() < 32 * 32 * 32 {
        return a * b;
    }
    let ar = a.map(|z| z.re);
    let ai = a.map(|z| z.im);
    let br = b.map(|z| z.re);
    let bi = b.map(|z| z.im);
    let re = &ar * &br - &ai * &bi;
    let im = &ar * &bi + &ai * &br;
    re.zip_map(&im, Complex64::new)
}

/// `M^p` by binary powering.
pub fn matrix_power(m: &CMat, mut p: usize) -> CMat {
    let mut result = identity(m.nrows());
    let mut base = m.clone();
    while p > 0 {
        if p & 1 == 1 {
            result = matmul(&result, &base);
        }
        p >>= 1;
        if p > 0 {
            base = matmul(&base, &base);
        }
    }
    result
}

pub fn from_real_rows(rows: &[&[f64]]) -> CMat {
    let n = rows.len();
    let m = rows.first().map_or(0, |r| r.len());
    CMat::from_fn(n, m, |i, j| cr(rows[i][j]))
}

pub fn diag_real(d: &[f64]) -> CMat {
    CMat::from_diagonal(&CVec::from_iterator(d.len(), d.iter().map(|&x| cr(x))))
}

pub fn relative_difference(a: &CMat, b: &CMat) -> f64 {
    let scale = a.norm().max(b.norm()).max(f64::MIN_POSITIVE);
    (a - b).norm() / scale
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_product_matches_generic() {
        let mut rng = crate::sampling::Sampler::new(2);
        let a = CMat::from_fn(40, 50, |_, _| rng.complex());
        let b = CMat::from_fn(50, 45, |_, _| rng.complex());
        let slow = &a * &b;
        assert!(relative_difference(&matmul(&a, &b), &slow) < 1e-14);
    }

    #[test]
    fn parts_reassemble() {
        let m = CMat::from_fn(3, 3, |i, j| c(i as f64 + 0.5 * j as f64, (i * j) as f64 - 1.0));
        let re = hermitian_part(&m);
        let im = imaginary_part(&m);
        assert!(hermitian_deviation(&re) < 1e-15);
        assert!(hermitian_deviation(&im) < 1e-15);
        assert!((&re + im * I - &m).norm() < 1e-14);
    }

    #[test]
    fn generalized_eigen_diagonal_pencil() {
        let a = diag_real(&[2.0, 9.0]);
        let b = diag_real(&[4.0, 3.0]);
        let ge = gen_eigh(&a, &b).unwrap();
        assert!((ge.values[0] - 0.5).abs() < 1e-14);
        assert!((ge.values[1] - 3.0).abs() < 1e-14);
        // B-orthonormal
        let gram = ge.vectors.adjoint() * &b * &ge.vectors;
        assert!((gram - identity(2)).norm() < 1e-13);
    }

    #[test]
    fn matrix_power_matches_repeated_product() {
        let m = from_real_rows(&[&[0.5, 1.0], &[0.0, 0.9]]);
        let mut naive = identity(2);
        for _ in 0..13 {
            naive = &naive * &m;
        }
        assert!((matrix_power(&m, 13) - naive).norm() < 1e-13);
        assert_eq!(matrix_power(&m, 0), identity(2));
    }

    #[test]
    fn singular_matrix_has_no_inverse() {
        let m = from_real_rows(&[&[1.0, 2.0], &[2.0, 4.0]]);
        assert!(inverse(&m).is_none() || condition_1(&m) > 1e15);
    }
}
