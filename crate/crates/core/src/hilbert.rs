//! Finite-dimensional complex Hilbert spaces with a Gram inner product,
//! sesquilinear forms, embeddings and anti-dual vectors.
//!
//! Convention used throughout the crate: inner products and forms are linear
//! in the first slot and conjugate-linear in the second,
//!
//! ```text
//! <x, y>   = y* G x
//! a(u, v)  = v* M u
//! <f, v>   = v* c          (anti-dual pairing)
//! ```
//!
//! With this choice the coordinate matrix of the Lax-Milgram operator
//! `V -> V*` is the form matrix `M` itself.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, CVec};

/// Default relative tolerance for Hermitian validation.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// A complex Hilbert space `C^n` with inner product `<x, y> = y* G x`.
#[derive(Debug, Clone, PartialEq)]
pub struct HilbertSpace {
    gram: CMat,
    chol: CMat,
}

impl HilbertSpace {
    pub fn new(gram: CMat) -> Result<Self> {
        Self::with_tolerance(gram, HERMITIAN_TOL, "gram")
    }

    /// Validate `gram` as Hermitian (to `tol` relative to its largest entry)
    /// and positive definite. `role` names the matrix in error messages.
    pub fn with_tolerance(gram: CMat, tol: f64, role: &str) -> Result<Self> {
        let n = linalg::ensure_square(&gram)?;
        if n == 0 {
            return Err(Error::InvalidArgument("space dimension must be positive".into()));
        }
        let deviation = linalg::hermitian_deviation(&gram);
        if deviation > tol * linalg::max_abs(&gram) {
            return Err(Error::NotHermitian {
                role: role.to_string(),
                deviation,
            });
        }
        let gram = linalg::hermitian_part(&gram);
        let (eigs, _) = linalg::eigh(&gram);
        if eigs[0] <= 0.0 {
            return Err(Error::NotPositiveDefinite {
                role: role.to_string(),
                eigenvalue: eigs[0],
            });
        }
        let chol = linalg::cholesky_lower(&gram).ok_or_else(|| Error::NotPositiveDefinite {
            role: role.to_string(),
            eigenvalue: eigs[0],
        })?;
        Ok(Self { gram, chol })
    }

    /// `C^n` with the Euclidean inner product.
    pub fn standard(n: usize) -> Self {
        Self {
            gram: linalg::identity(n),
            chol: linalg::identity(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.gram.nrows()
    }

    pub fn gram(&self) -> &CMat {
        &self.gram
    }

    /// Lower Cholesky factor `L` with `G = L L*`.
    pub fn cholesky(&self) -> &CMat {
        &self.chol
    }

    pub fn smallest_eigenvalue(&self) -> f64 {
        linalg::eigh(&self.gram).0[0]
    }

    pub fn inner(&self, x: &CVec, y: &CVec) -> Result<Complex64> {
        linalg::ensure_dim(self.dim(), x.len())?;
        linalg::ensure_dim(self.dim(), y.len())?;
        Ok(y.dotc(&(&self.gram * x)))
    }

    pub fn norm(&self, x: &CVec) -> Result<f64> {
        Ok(self.inner(x, x)?.re.max(0.0).sqrt())
    }

    /// `G^{-1}`, the metric of the anti-dual space.
    pub fn dual_metric(&self) -> CMat {
        let n = self.dim();
        let linv = self
            .chol
            .solve_lower_triangular(&linalg::identity(n))
            .expect("Cholesky factor is nonsingular");
        linalg::hermitian_part(&(linv.adjoint() * linv))
    }

    /// Operator norm of `X` acting from this space to itself:
    /// `|L* X L^{-*}|_2`.
    pub fn operator_norm(&self, x: &CMat) -> f64 {
        let lt = self.chol.adjoint();
        let y = &lt * x;
        // y L^{-*} = (L^{-1} y*)*
        let z = self
            .chol
            .solve_lower_triangular(&y.adjoint())
            .expect("Cholesky factor is nonsingular")
            .adjoint();
        linalg::spectral_norm(&z)
    }

    /// Normalize a nonzero vector to unit norm.
    pub fn normalize(&self, x: &CVec) -> Result<CVec> {
        let n = self.norm(x)?;
        if n == 0.0 {
            return Err(Error::InvalidArgument("cannot normalize the zero vector".into()));
        }
        Ok(x.unscale(n))
    }
}

/// A bounded sesquilinear form `a(u, v) = v* M u` on a space `V`.
#[derive(Debug, Clone, PartialEq)]
pub struct Form {
    space: HilbertSpace,
    mat: CMat,
}

impl Form {
    pub fn new(space: HilbertSpace, mat: CMat) -> Result<Self> {
        let n = linalg::ensure_square(&mat)?;
        linalg::ensure_dim(space.dim(), n)?;
        Ok(Self { space, mat })
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    pub fn eval(&self, u: &CVec, v: &CVec) -> Result<Complex64> {
        linalg::ensure_dim(self.space.dim(), u.len())?;
        linalg::ensure_dim(self.space.dim(), v.len())?;
        Ok(v.dotc(&(&self.mat * u)))
    }

    /// The quadratic form `a(u) = a(u, u)`.
    pub fn quad(&self, u: &CVec) -> Result<Complex64> {
        self.eval(u, u)
    }

    /// Matrix of `Re a`.
    pub fn real_part(&self) -> CMat {
        linalg::hermitian_part(&self.mat)
    }

    /// Matrix of `Im a`.
    pub fn imag_part(&self) -> CMat {
        linalg::imaginary_part(&self.mat)
    }
}

/// The map `j: V -> H`, here an invertible matrix between spaces of equal
/// dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    domain: HilbertSpace,
    codomain: HilbertSpace,
    mat: CMat,
}

impl Embedding {
    pub fn new(domain: HilbertSpace, codomain: HilbertSpace, mat: CMat) -> Result<Self> {
        Self::with_tolerance(domain, codomain, mat, HERMITIAN_TOL)
    }

    /// Rejects `mat` when its smallest singular value is below `tol` times
    /// the largest one.
    pub fn with_tolerance(
        domain: HilbertSpace,
        codomain: HilbertSpace,
        mat: CMat,
        tol: f64,
    ) -> Result<Self> {
        let n = linalg::ensure_square(&mat)?;
        linalg::ensure_dim(domain.dim(), n)?;
        linalg::ensure_dim(codomain.dim(), n)?;
        let sv = mat.clone().svd(false, false).singular_values;
        let smax = sv.iter().fold(0.0_f64, |a, &s| a.max(s));
        let smin = sv.iter().fold(f64::INFINITY, |a, &s| a.min(s));
        if !(smin > tol * smax) {
            return Err(Error::SingularEmbedding {
                smallest_singular_value: smin,
            });
        }
        Ok(Self {
            domain,
            codomain,
            mat,
        })
    }

    /// `j = I` between two copies of the same space.
    pub fn identity_on(space: HilbertSpace) -> Self {
        let n = space.dim();
        Self {
            domain: space.clone(),
            codomain: space,
            mat: linalg::identity(n),
        }
    }

    pub fn domain(&self) -> &HilbertSpace {
        &self.domain
    }

    pub fn codomain(&self) -> &HilbertSpace {
        &self.codomain
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    pub fn apply(&self, u: &CVec) -> Result<CVec> {
        linalg::ensure_dim(self.domain.dim(), u.len())?;
        Ok(&self.mat * u)
    }

    /// The H-metric pulled back to V: `J* G_H J`, so `|ju|_H^2 = u* G u`.
    pub fn pulled_back_metric(&self) -> CMat {
        linalg::hermitian_part(&(self.mat.adjoint() * self.codomain.gram() * &self.mat))
    }

    /// The best constant `c` with `|ju|_H <= c |u|_V`.
    pub fn bound(&self) -> f64 {
        op_norm(
            &self.mat,
            Side::Primal(&self.domain),
            Side::Primal(&self.codomain),
        )
        .expect("embedding dimensions are validated at construction")
    }
}

/// An element of the anti-dual `V*`, paired with `v` as `<f, v> = v* c`.
#[derive(Debug, Clone, PartialEq)]
pub struct DualVector {
    space: HilbertSpace,
    coeffs: CVec,
}

impl DualVector {
    pub fn new(space: HilbertSpace, coeffs: CVec) -> Result<Self> {
        linalg::ensure_dim(space.dim(), coeffs.len())?;
        Ok(Self { space, coeffs })
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    pub fn coeffs(&self) -> &CVec {
        &self.coeffs
    }

    pub fn pair(&self, v: &CVec) -> Result<Complex64> {
        linalg::ensure_dim(self.space.dim(), v.len())?;
        Ok(v.dotc(&self.coeffs))
    }

    /// `sup |<f, v>| / |v|_V = sqrt(c* G^{-1} c)`.
    pub fn dual_norm(&self) -> f64 {
        let w = self
            .space
            .cholesky()
            .solve_lower_triangular(&self.coeffs)
            .expect("Cholesky factor is nonsingular");
        w.norm()
    }
}

/// Which side of the pairing an operator endpoint lives on.
#[derive(Debug, Clone, Copy)]
pub enum Side<'a> {
    Primal(&'a HilbertSpace),
    Dual(&'a HilbertSpace),
}

impl Side<'_> {
    fn dim(&self) -> usize {
        match self {
            Side::Primal(s) | Side::Dual(s) => s.dim(),
        }
    }

    fn metric(&self) -> CMat {
        match self {
            Side::Primal(s) => s.gram().clone(),
            Side::Dual(s) => s.dual_metric(),
        }
    }
}

/// Exact operator norm of `map: from -> to`, the square root of the largest
/// eigenvalue of the pencil `(T* W_to T, W_from)`.
pub fn op_norm(map: &CMat, from: Side<'_>, to: Side<'_>) -> Result<f64> {
    linalg::ensure_dim(to.dim(), map.nrows())?;
    linalg::ensure_dim(from.dim(), map.ncols())?;
    let p = map.adjoint() * to.metric() * map;
    let ge = linalg::gen_eigh(&p, &from.metric())?;
    Ok(ge.max().0.max(0.0).sqrt())
}
