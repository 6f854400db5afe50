//! Coercivity, the Lax-Milgram operator `V -> V*`, the canonical injection
//! `k: H -> V*` and the operator associated with a pair `(a, j)`.
//!
//! The associated operator is built from its inverse `A^{-1} = j 𝒜^{-1} k`;
//! in coordinates `A^{-1} = J M^{-1} J* G_H`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hilbert::{op_norm, DualVector, Embedding, Form, HilbertSpace, Side};
use crate::linalg::{self, CMat, CVec};

/// Residual threshold for the Lax-Milgram solve, relative to `|c|`.
pub const SOLVE_RESIDUAL_TOL: f64 = 1e-10;

/// Best coercivity constant `alpha` with a vector attaining it.
#[derive(Debug, Clone, Serialize)]
pub struct CoercivityCertificate {
    pub alpha: f64,
    /// Unit vector in `V` with `Re a(w) = alpha`.
    #[serde(serialize_with = "crate::wire::ser_cvec")]
    pub witness: CVec,
}

/// `alpha = min Re a(u) / |u|_V^2`, the smallest eigenvalue of the pencil
/// `(Re M, G_V)`.
pub fn coercivity_constant(form: &Form) -> Result<CoercivityCertificate> {
    let ge = linalg::gen_eigh_with_factor(&form.real_part(), form.space().cholesky())?;
    let (alpha, witness) = ge.min();
    if alpha <= 0.0 {
        return Err(Error::NotCoercive {
            eigenvalue: alpha,
            witness,
        });
    }
    Ok(CoercivityCertificate { alpha, witness })
}

/// Solve `𝒜u = f`, i.e. `a(u, v) = <f, v>` for every `v`.
pub fn laxmilgram_solve(form: &Form, f: &DualVector) -> Result<CVec> {
    linalg::ensure_dim(form.space().dim(), f.coeffs().len())?;
    coercivity_constant(form)?;
    let m = form.matrix();
    let rhs = f.coeffs();
    let u = linalg::solve(m, rhs).ok_or_else(|| Error::SolveFailed {
        condition: linalg::condition_1(m),
    })?;
    let residual = (m * &u - rhs).norm();
    if residual > SOLVE_RESIDUAL_TOL * rhs.norm() {
        return Err(Error::SolveFailed {
            condition: linalg::condition_1(m),
        });
    }
    Ok(u)
}

/// Exact norm of `𝒜^{-1}: V* -> V`. Never exceeds `1/alpha`.
pub fn laxmilgram_inverse_norm(form: &Form) -> Result<f64> {
    let cert = coercivity_constant(form)?;
    let inv = linalg::inverse(form.matrix()).ok_or_else(|| Error::SolveFailed {
        condition: linalg::condition_1(form.matrix()),
    })?;
    let v = form.space();
    let norm = op_norm(&inv, Side::Dual(v), Side::Primal(v))?;
    debug_assert!(
        norm <= (1.0 / cert.alpha) * (1.0 + 1e-8) + 1e-10,
        "Lax-Milgram bound violated: {norm} > 1/{}",
        cert.alpha
    );
    Ok(norm)
}

/// `k y = <y, j(.)>_H`, with coefficients `J* G_H y`.
pub fn canonical_injection(embedding: &Embedding, y: &CVec) -> Result<DualVector> {
    linalg::ensure_dim(embedding.codomain().dim(), y.len())?;
    let coeffs = embedding.matrix().adjoint() * embedding.codomain().gram() * y;
    DualVector::new(embedding.domain().clone(), coeffs)
}

/// Where an associated operator came from.
#[derive(Debug, Clone)]
pub struct Provenance {
    pub form: Form,
    pub embedding: Embedding,
}

/// An operator on `H`, stored together with its inverse.
#[derive(Debug, Clone)]
pub struct AssociatedOperator {
    space: HilbertSpace,
    op_mat: CMat,
    inv_mat: CMat,
    provenance: Option<Provenance>,
}

impl AssociatedOperator {
    /// Wrap a plain invertible matrix acting on `space`.
    pub fn from_matrix(space: HilbertSpace, op_mat: CMat) -> Result<Self> {
        let n = linalg::ensure_square(&op_mat)?;
        linalg::ensure_dim(space.dim(), n)?;
        let inv_mat = linalg::inverse(&op_mat).ok_or_else(|| Error::SolveFailed {
            condition: linalg::condition_1(&op_mat),
        })?;
        Ok(Self {
            space,
            op_mat,
            inv_mat,
            provenance: None,
        })
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    pub fn matrix(&self) -> &CMat {
        &self.op_mat
    }

    pub fn inverse_matrix(&self) -> &CMat {
        &self.inv_mat
    }

    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_ref()
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// `Re <Ax, x>_H` for a vector in `H`.
    pub fn real_quadratic(&self, x: &CVec) -> Result<f64> {
        Ok(self.space.inner(&(&self.op_mat * x), x)?.re)
    }
}

/// The operator associated with `(a, j)`, via `A^{-1} = J M^{-1} J* G_H`.
pub fn associated_operator(form: &Form, embedding: &Embedding) -> Result<AssociatedOperator> {
    if form.space() != embedding.domain() {
        return Err(Error::InvalidArgument(
            "form must live on the embedding's domain".into(),
        ));
    }
    coercivity_constant(form)?;
    let m = form.matrix();
    let m_inv = linalg::inverse(m).ok_or_else(|| Error::SolveFailed {
        condition: linalg::condition_1(m),
    })?;
    let j = embedding.matrix();
    let inv_mat = j * m_inv * j.adjoint() * embedding.codomain().gram();
    let op_mat = linalg::inverse(&inv_mat).ok_or_else(|| Error::SolveFailed {
        condition: linalg::condition_1(&inv_mat),
    })?;
    Ok(AssociatedOperator {
        space: embedding.codomain().clone(),
        op_mat,
        inv_mat,
        provenance: Some(Provenance {
            form: form.clone(),
            embedding: embedding.clone(),
        }),
    })
}

/// Exact `min Re <Ax, x>_H / |x|_H^2` with its minimizer (unit in `H`).
pub fn accretivity_certificate(op: &AssociatedOperator) -> (f64, CVec) {
    let g = op.space.gram();
    let herm = linalg::hermitian_part(&(g * &op.op_mat));
    let ge = linalg::gen_eigh_with_factor(&herm, op.space.cholesky())
        .expect("validated Gram factor");
    ge.min()
}

/// `min Re <Ax, x>_H / |x|_H^2`.
pub fn accretivity_margin(op: &AssociatedOperator) -> f64 {
    accretivity_certificate(op).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{cr, diag_real, from_real_rows, identity};
    use crate::sampling::{random_search_max, Sampler};

    fn std_form(m: CMat) -> Form {
        let n = m.nrows();
        Form::new(HilbertSpace::standard(n), m).unwrap()
    }

    fn e(n: usize, i: usize) -> CVec {
        let mut v = CVec::zeros(n);
        v[i] = cr(1.0);
        v
    }

    #[test]
    fn coercivity_examples() {
        assert!((coercivity_constant(&std_form(identity(2))).unwrap().alpha - 1.0).abs() < 1e-14);
        let cert = coercivity_constant(&std_form(diag_real(&[2.0, 3.0]))).unwrap();
        assert!((cert.alpha - 2.0).abs() < 1e-14);
        let form = std_form(diag_real(&[2.0, 3.0]));
        let w = &cert.witness;
        assert!((form.quad(w).unwrap().re - cert.alpha * form.space().norm(w).unwrap().powi(2)).abs() < 1e-10);
    }

    #[test]
    fn non_coercive_form_reports_witness() {
        match coercivity_constant(&std_form(diag_real(&[1.0, -0.5]))) {
            Err(Error::NotCoercive { eigenvalue, witness }) => {
                assert!((eigenvalue + 0.5).abs() < 1e-14);
                assert!(witness[1].norm() > 0.99);
            }
            other => panic!("expected NotCoercive, got {other:?}"),
        }
    }

    #[test]
    fn coercivity_matches_sampled_minimum() {
        let mut rng = Sampler::new(21);
        let v = HilbertSpace::new(rng.pd_matrix(4, 0.5)).unwrap();
        let form = Form::new(v.clone(), rng.coercive_matrix(4, 0.3, 1.0)).unwrap();
        let alpha = coercivity_constant(&form).unwrap().alpha;
        let best = -random_search_max(&mut rng, 4, 100_000, |u| {
            -form.quad(u).unwrap().re / v.norm(u).unwrap().powi(2)
        });
        assert!(best >= alpha - 1e-12);
        assert!((best - alpha) / alpha < 1e-2, "alpha {alpha} sampled {best}");
        for _ in 0..100 {
            let u = v.normalize(&rng.vector(4)).unwrap();
            assert!(form.quad(&u).unwrap().re >= alpha - 1e-10);
        }
    }

    #[test]
    fn solve_examples() {
        let s = HilbertSpace::standard(2);
        let f = DualVector::new(s.clone(), e(2, 0)).unwrap();
        let u = laxmilgram_solve(&std_form(identity(2)), &f).unwrap();
        assert!((u - e(2, 0)).norm() < 1e-15);
        let f = DualVector::new(s, CVec::from_vec(vec![cr(2.0), cr(4.0)])).unwrap();
        let u = laxmilgram_solve(&std_form(diag_real(&[2.0, 4.0])), &f).unwrap();
        assert!((u - CVec::from_vec(vec![cr(1.0), cr(1.0)])).norm() < 1e-15);
    }

    #[test]
    fn solve_satisfies_defining_relation() {
        let mut rng = Sampler::new(8);
        let v = HilbertSpace::new(rng.pd_matrix(5, 0.5)).unwrap();
        let form = Form::new(v.clone(), rng.coercive_matrix(5, 0.5, 2.0)).unwrap();
        let f = DualVector::new(v, rng.vector(5)).unwrap();
        let u = laxmilgram_solve(&form, &f).unwrap();
        for i in 0..5 {
            let lhs = form.eval(&u, &e(5, i)).unwrap();
            let rhs = f.pair(&e(5, i)).unwrap();
            assert!((lhs - rhs).norm() < 1e-10 * (1.0 + rhs.norm()));
        }
    }

    #[test]
    fn inverse_norm_examples() {
        let n = laxmilgram_inverse_norm(&std_form(identity(2))).unwrap();
        assert!((n - 1.0).abs() < 1e-14);
        let n = laxmilgram_inverse_norm(&std_form(diag_real(&[2.0, 3.0]))).unwrap();
        assert!((n - 0.5).abs() < 1e-14);

        // non-normal: Re M = [[1, 2], [2, 1]] is indefinite, so this one is not coercive
        let m = from_real_rows(&[&[1.0, 4.0], &[0.0, 1.0]]);
        assert!(matches!(
            laxmilgram_inverse_norm(&std_form(m)),
            Err(Error::NotCoercive { .. })
        ));
        // a coercive non-normal neighbour: Re M = [[1, .4], [.4, 1]]
        let m = from_real_rows(&[&[1.0, 0.8], &[0.0, 1.0]]);
        let form = std_form(m);
        let norm = laxmilgram_inverse_norm(&form).unwrap();
        let alpha = coercivity_constant(&form).unwrap().alpha;
        assert!((alpha - 0.6).abs() < 1e-14);
        // M^{-1} = [[1, -0.8], [0, 1]], norm = (0.8 + sqrt(4.64))/2
        assert!((norm - (0.8 + 4.64_f64.sqrt()) / 2.0).abs() < 1e-14);
        assert!(norm <= 1.0 / alpha + 1e-10);
    }

    #[test]
    fn canonical_injection_examples() {
        let s = HilbertSpace::standard(2);
        let emb = Embedding::identity_on(s.clone());
        let y = CVec::from_vec(vec![cr(3.0), cr(-1.0)]);
        assert_eq!(canonical_injection(&emb, &y).unwrap().coeffs(), &y);
        let emb = Embedding::new(s.clone(), s, identity(2).scale(2.0)).unwrap();
        let ky = canonical_injection(&emb, &e(2, 0)).unwrap();
        assert!((ky.coeffs() - e(2, 0).scale(2.0)).norm() < 1e-15);
    }

    #[test]
    fn canonical_injection_pairing_identity() {
        let mut rng = Sampler::new(4);
        let v = HilbertSpace::new(rng.pd_matrix(4, 0.5)).unwrap();
        let h = HilbertSpace::new(rng.pd_matrix(4, 0.5)).unwrap();
        let emb = Embedding::new(v, h.clone(), rng.invertible(4)).unwrap();
        let y = rng.vector(4);
        let ky = canonical_injection(&emb, &y).unwrap();
        for i in 0..4 {
            let lhs = ky.pair(&e(4, i)).unwrap();
            let rhs = h.inner(&y, &emb.apply(&e(4, i)).unwrap()).unwrap();
            assert!((lhs - rhs).norm() < 1e-12 * (1.0 + rhs.norm()));
        }
    }

    #[test]
    fn associated_operator_examples() {
        let s = HilbertSpace::standard(2);
        let emb = Embedding::identity_on(s.clone());
        let a = associated_operator(&std_form(identity(2)), &emb).unwrap();
        assert!((a.matrix() - identity(2)).norm() < 1e-15);
        let a = associated_operator(&std_form(diag_real(&[1.0, 2.0])), &emb).unwrap();
        assert!((a.matrix() - diag_real(&[1.0, 2.0])).norm() < 1e-15);
        assert!((a.matrix() * a.inverse_matrix() - identity(2)).norm() < 1e-12);
    }

    #[test]
    fn associated_operator_defining_relation() {
        let mut rng = Sampler::new(17);
        let v = HilbertSpace::new(rng.pd_matrix(4, 0.5)).unwrap();
        let h = HilbertSpace::new(rng.pd_matrix(4, 0.5)).unwrap();
        let emb = Embedding::new(v.clone(), h.clone(), rng.invertible(4)).unwrap();
        let form = Form::new(v, rng.coercive_matrix(4, 0.5, 1.0)).unwrap();
        let a = associated_operator(&form, &emb).unwrap();
        let u = rng.vector(4);
        let x = emb.apply(&u).unwrap();
        for i in 0..4 {
            let jv = emb.apply(&e(4, i)).unwrap();
            let lhs = form.eval(&u, &e(4, i)).unwrap();
            let rhs = h.inner(&(a.matrix() * &x), &jv).unwrap();
            assert!((lhs - rhs).norm() < 1e-10 * (1.0 + lhs.norm()));
        }
    }

    #[test]
    fn accretivity_examples() {
        let s = HilbertSpace::standard(2);
        let a = AssociatedOperator::from_matrix(s.clone(), identity(2)).unwrap();
        assert!((accretivity_margin(&a) - 1.0).abs() < 1e-14);
        let a = AssociatedOperator::from_matrix(s, diag_real(&[1.0, 3.0])).unwrap();
        assert!((accretivity_margin(&a) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn accretivity_margin_dominates_alpha_over_c_squared() {
        let mut rng = Sampler::new(99);
        let v = HilbertSpace::new(rng.pd_matrix(5, 0.5)).unwrap();
        let h = HilbertSpace::new(rng.pd_matrix(5, 0.5)).unwrap();
        let emb = Embedding::new(v.clone(), h, rng.invertible(5)).unwrap();
        let form = Form::new(v, rng.coercive_matrix(5, 0.5, 1.0)).unwrap();
        let a = associated_operator(&form, &emb).unwrap();
        let alpha = coercivity_constant(&form).unwrap().alpha;
        let c = emb.bound();
        assert!(accretivity_margin(&a) >= alpha / (c * c) - 1e-10);
    }
}
