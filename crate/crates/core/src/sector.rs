//! Sectoriality certificates for forms.
//!
//! A form is sectorial with vertex `gamma` and slope `C` (semi-angle
//! `arctan C`) when `|Im a(u)| <= C (Re a(u) - gamma |ju|_H^2)` for all `u`.
//! In coordinates this is the statement that both Hermitian pencils
//! `C (Re M - gamma G) -/+ Im M` are positive semidefinite, with
//! `G = J* G_H J`. Every check here is an exact eigenvalue computation;
//! sampling is only provided as an independent oracle and for plotting.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hilbert::{Embedding, Form};
use crate::linalg::{self, CMat, CVec};
use crate::sampling::Sampler;

/// A Hermitian matrix counts as PSD when its smallest eigenvalue is at least
/// `-PSD_TOL * |P|`.
pub const PSD_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Serialize)]
pub struct SectorEstimate {
    pub gamma: f64,
    pub slope: f64,
    /// A vector (unit in `H`) on which the slope is attained, if any.
    #[serde(serialize_with = "crate::wire::ser_opt_cvec")]
    pub tight_witness: Option<CVec>,
}

impl SectorEstimate {
    pub fn semi_angle(&self) -> f64 {
        self.slope.atan()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SectorCheck {
    pub holds: bool,
    /// Smallest eigenvalue over both pencils, divided by `|G|`.
    pub margin: f64,
}

fn check_form(form: &Form, embedding: &Embedding) -> Result<()> {
    if form.space() != embedding.domain() {
        return Err(Error::InvalidArgument(
            "form must live on the embedding's domain".into(),
        ));
    }
    Ok(())
}

/// Largest `gamma` with `Re a(u) >= gamma |ju|_H^2`, with a minimizer.
pub fn vertex(form: &Form, embedding: &Embedding) -> Result<(f64, CVec)> {
    check_form(form, embedding)?;
    let ge = linalg::gen_eigh(&form.real_part(), &embedding.pulled_back_metric())?;
    Ok(ge.min())
}

pub fn sector_check(form: &Form, embedding: &Embedding, gamma: f64, slope: f64) -> Result<SectorCheck> {
    sector_check_with_tol(form, embedding, gamma, slope, PSD_TOL)
}

pub fn sector_check_with_tol(
    form: &Form,
    embedding: &Embedding,
    gamma: f64,
    slope: f64,
    tol: f64,
) -> Result<SectorCheck> {
    check_form(form, embedding)?;
    if !(slope >= 0.0) {
        return Err(Error::InvalidArgument(format!("slope must be >= 0, got {slope}")));
    }
    let g = embedding.pulled_back_metric();
    let shifted = (form.real_part() - g.scale(gamma)).scale(slope);
    let im = form.imag_part();
    let g_norm = linalg::spectral_norm(&g);
    let scale = linalg::spectral_norm(&shifted).max(linalg::spectral_norm(&im));
    let mut holds = true;
    let mut margin = f64::INFINITY;
    for pencil in [&shifted - &im, &shifted + &im] {
        let (eigs, _) = linalg::eigh(&pencil);
        let lo = eigs[0];
        if lo < -tol * scale {
            holds = false;
        }
        margin = margin.min(lo / g_norm);
    }
    Ok(SectorCheck { holds, margin })
}

/// Smallest slope `C` for which the form is sectorial with vertex `gamma`.
pub fn min_semiangle(form: &Form, embedding: &Embedding, gamma: f64) -> Result<SectorEstimate> {
    min_semiangle_with_tol(form, embedding, gamma, PSD_TOL)
}

pub fn min_semiangle_with_tol(
    form: &Form,
    embedding: &Embedding,
    gamma: f64,
    tol: f64,
) -> Result<SectorEstimate> {
    check_form(form, embedding)?;
    let g = embedding.pulled_back_metric();
    let re = form.real_part();
    let im = form.imag_part();
    let base = &re - g.scale(gamma);
    let scale = linalg::spectral_norm(&re).max(gamma.abs() * linalg::spectral_norm(&g));
    let (eigs, q) = linalg::eigh(&base);
    if eigs[0] < -tol * scale {
        return Err(Error::VertexTooLarge {
            gamma,
            eigenvalue: eigs[0],
        });
    }
    let n = eigs.len();
    let kernel: Vec<usize> = (0..n).filter(|&k| eigs[k] <= tol * scale).collect();
    let range: Vec<usize> = (0..n).filter(|&k| eigs[k] > tol * scale).collect();

    if !kernel.is_empty() {
        let qk = q.select_columns(&kernel);
        let leak = linalg::spectral_norm(&(&im * qk));
        if leak > tol * scale.max(linalg::spectral_norm(&im)) {
            return Err(Error::InfiniteSemiAngle);
        }
    }
    if range.is_empty() {
        return Ok(SectorEstimate {
            gamma,
            slope: 0.0,
            tight_witness: None,
        });
    }

    // Restrict to the range of the shifted real part and whiten it.
    let qr = q.select_columns(&range);
    let inv_sqrt: Vec<f64> = range.iter().map(|&k| 1.0 / eigs[k].sqrt()).collect();
    let d = linalg::diag_real(&inv_sqrt);
    let w = &qr * &d;
    let reduced = w.adjoint() * &im * &w;
    let (vals, vecs) = linalg::eigh(&reduced);
    let (lo, hi) = (vals[0], vals[vals.len() - 1]);
    let (slope, col) = if hi >= -lo { (hi, vals.len() - 1) } else { (-lo, 0) };
    let slope = slope.max(0.0);
    let witness = &w * vecs.column(col);
    let h_norm = witness.dotc(&(&g * &witness)).re.sqrt();
    let tight_witness = (h_norm > 0.0 && slope > 0.0).then(|| witness.unscale(h_norm));
    Ok(SectorEstimate {
        gamma,
        slope,
        tight_witness,
    })
}

/// `|u|_a = (Re a(u) + (1 - gamma) |ju|_H^2)^{1/2}`.
pub fn form_norm(form: &Form, embedding: &Embedding, gamma: f64, u: &CVec) -> Result<f64> {
    check_form(form, embedding)?;
    let re = form.quad(u)?.re;
    let h2 = embedding.codomain().norm(&embedding.apply(u)?)?.powi(2);
    let value = re + (1.0 - gamma) * h2;
    if value < 0.0 {
        if value >= -PSD_TOL * (re.abs() + (1.0 - gamma).abs() * h2) {
            return Ok(0.0);
        }
        return Err(Error::NegativeUnderRoot { value });
    }
    Ok(value.sqrt())
}

/// Matrix of `|u|_a^2` for a form normalized to vertex 0:
/// `Re M + J* G_H J`.
pub fn form_norm_matrix(form: &Form, embedding: &Embedding) -> CMat {
    form.real_part() + embedding.pulled_back_metric()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormEquivalence {
    /// `min |u|_{a_z}^2 / |u|_{a_0}^2`.
    pub lower: f64,
    /// `max |u|_{a_z}^2 / |u|_{a_0}^2`.
    pub upper: f64,
    /// Whether `[lower, upper]` lies inside `[1/2, 3/2]`.
    pub holds: bool,
}

/// Exact extremal ratios of the squared vertex-0 form norms of two forms.
pub fn norm_equivalence_check(
    form_a0: &Form,
    form_az: &Form,
    embedding: &Embedding,
) -> Result<NormEquivalence> {
    for form in [form_a0, form_az] {
        if let Err(e) = min_semiangle(form, embedding, 0.0) {
            return match e {
                Error::VertexTooLarge { .. } | Error::InfiniteSemiAngle => Err(Error::VertexNotZero {
                    vertex: vertex(form, embedding)?.0,
                }),
                other => Err(other),
            };
        }
    }
    let n0 = form_norm_matrix(form_a0, embedding);
    let nz = form_norm_matrix(form_az, embedding);
    let ge = linalg::gen_eigh(&nz, &n0)?;
    let lower = ge.values[0];
    let upper = ge.values[ge.values.len() - 1];
    Ok(NormEquivalence {
        lower,
        upper,
        holds: lower >= 0.5 - PSD_TOL && upper <= 1.5 + PSD_TOL,
    })
}

/// Seeded sample of Rayleigh values `a(u) / |ju|_H^2`.
pub fn numerical_range_sample(
    form: &Form,
    embedding: &Embedding,
    count: usize,
    seed: u64,
) -> Result<Vec<Complex64>> {
    check_form(form, embedding)?;
    let mut sampler = Sampler::new(seed);
    let n = form.space().dim();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let u = sampler.vector(n);
        let h2 = embedding.codomain().norm(&embedding.apply(&u)?)?.powi(2);
        if h2 == 0.0 {
            continue;
        }
        out.push(form.quad(&u)? / h2);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::HilbertSpace;
    use crate::linalg::{c, cr, diag_real, from_real_rows, identity};

    fn std_pair(m: CMat) -> (Form, Embedding) {
        let s = HilbertSpace::standard(m.nrows());
        (Form::new(s.clone(), m).unwrap(), Embedding::identity_on(s))
    }

    fn rotated_pair() -> (Form, Embedding) {
        std_pair(from_real_rows(&[&[1.0, 1.0], &[-1.0, 1.0]]))
    }

    fn random_setup(seed: u64, n: usize) -> (Form, Embedding, Sampler) {
        let mut rng = Sampler::new(seed);
        let v = HilbertSpace::new(rng.pd_matrix(n, 0.5)).unwrap();
        let h = HilbertSpace::new(rng.pd_matrix(n, 0.5)).unwrap();
        let emb = Embedding::new(v.clone(), h, rng.invertible(n)).unwrap();
        let form = Form::new(v, rng.coercive_matrix(n, 0.2, 1.5)).unwrap();
        (form, emb, rng)
    }

    #[test]
    fn hermitian_form_has_zero_semiangle() {
        let (form, emb) = std_pair(diag_real(&[0.5, 2.0, 3.0]));
        let (gamma, _) = vertex(&form, &emb).unwrap();
        assert!((gamma - 0.5).abs() < 1e-14);
        assert!(sector_check(&form, &emb, gamma, 0.0).unwrap().holds);
        let est = min_semiangle(&form, &emb, 0.0).unwrap();
        assert_eq!(est.slope, 0.0);
        // tight vertex: kernel present, Im = 0, still finite
        assert_eq!(min_semiangle(&form, &emb, gamma).unwrap().slope, 0.0);
    }

    #[test]
    fn two_by_two_rotated_sector() {
        let (form, emb) = rotated_pair();
        let ok = sector_check(&form, &emb, 0.0, 1.0).unwrap();
        assert!(ok.holds);
        assert!(ok.margin.abs() < 1e-14);
        let bad = sector_check(&form, &emb, 0.0, 0.9).unwrap();
        assert!(!bad.holds);
        assert!((bad.margin + 0.1).abs() < 1e-14);
        let est = min_semiangle(&form, &emb, 0.0).unwrap();
        assert!((est.slope - 1.0).abs() < 1e-14);
        let w = est.tight_witness.unwrap();
        let a = form.quad(&w).unwrap();
        assert!((a.im.abs() - a.re).abs() < 1e-13);
    }

    #[test]
    fn vertex_above_real_part_rejected() {
        let (form, emb) = rotated_pair();
        assert!(matches!(
            min_semiangle(&form, &emb, 1.5),
            Err(Error::VertexTooLarge { .. })
        ));
        // at the exact vertex 1 the shifted real part vanishes while Im does not
        assert!(matches!(
            min_semiangle(&form, &emb, 1.0),
            Err(Error::InfiniteSemiAngle)
        ));
    }

    #[test]
    fn pencil_certificate_agrees_with_sampling() {
        for seed in 0..5 {
            let (form, emb, _) = random_setup(seed, 4);
            let gamma = vertex(&form, &emb).unwrap().0 - 0.1;
            let est = min_semiangle(&form, &emb, gamma).unwrap();
            assert!(sector_check(&form, &emb, gamma, est.slope).unwrap().holds);
            for w in numerical_range_sample(&form, &emb, 10_000, seed).unwrap() {
                assert!(w.im.abs() <= est.slope * (w.re - gamma) + 1e-10);
            }
            // minimality
            assert!(est.slope > 1e-6);
            assert!(!sector_check(&form, &emb, gamma, est.slope - 1e-6).unwrap().holds);
        }
    }

    #[test]
    fn form_norm_examples() {
        let (form, emb) = std_pair(identity(2));
        let u = CVec::from_vec(vec![cr(1.0), cr(0.0)]);
        assert!((form_norm(&form, &emb, 1.0, &u).unwrap() - 1.0).abs() < 1e-15);
        assert!((form_norm(&form, &emb, 0.0, &u).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert!(matches!(
            form_norm(&form, &emb, 3.0, &u),
            Err(Error::NegativeUnderRoot { .. })
        ));
    }

    #[test]
    fn form_norm_matches_defining_formula() {
        let (form, emb, mut rng) = random_setup(31, 5);
        let gamma = vertex(&form, &emb).unwrap().0 - 0.05;
        for _ in 0..100 {
            let u = rng.vector(5);
            let direct = form.quad(&u).unwrap().re
                + (1.0 - gamma) * emb.codomain().norm(&emb.apply(&u).unwrap()).unwrap().powi(2);
            let value = form_norm(&form, &emb, gamma, &u).unwrap();
            assert!((value * value - direct).abs() < 1e-12 * direct.abs().max(1.0));
        }
    }

    #[test]
    fn form_norm_monotone_under_domination() {
        let (form, emb, mut rng) = random_setup(7, 4);
        let extra = rng.pd_matrix(4, 0.0);
        let bigger = Form::new(form.space().clone(), form.matrix() + extra).unwrap();
        let gamma = vertex(&form, &emb).unwrap().0;
        for _ in 0..100 {
            let u = rng.vector(4);
            let a = form_norm(&form, &emb, gamma, &u).unwrap();
            let b = form_norm(&bigger, &emb, gamma, &u).unwrap();
            assert!(a <= b + 1e-12 * b);
        }
    }

    #[test]
    fn norm_equivalence_identity_and_scaling() {
        let (form, emb) = std_pair(diag_real(&[1.0, 2.0, 5.0]));
        let same = norm_equivalence_check(&form, &form, &emb).unwrap();
        assert!(same.holds);
        assert!((same.lower - 1.0).abs() < 1e-14 && (same.upper - 1.0).abs() < 1e-14);

        // 1-d closed form: (1.5 h + 1) / (h + 1) < 1.5 for h = 5
        let scaled = Form::new(form.space().clone(), form.matrix().scale(1.5)).unwrap();
        let eq = norm_equivalence_check(&form, &scaled, &emb).unwrap();
        assert!(eq.holds);
        assert!((eq.upper - 8.5 / 6.0).abs() < 1e-14);
        assert!(eq.upper < 1.5);
        assert!((eq.lower - 2.5 / 2.0).abs() < 1e-14);
    }

    #[test]
    fn norm_equivalence_requires_vertex_zero() {
        let (good, emb) = std_pair(identity(2));
        let bad = Form::new(good.space().clone(), diag_real(&[1.0, -1.0])).unwrap();
        assert!(matches!(
            norm_equivalence_check(&good, &bad, &emb),
            Err(Error::VertexNotZero { .. })
        ));
    }

    #[test]
    fn numerical_range_of_diagonal_is_segment() {
        let m = CMat::from_diagonal(&CVec::from_vec(vec![cr(1.0), c(0.0, 1.0)]));
        let (form, emb) = std_pair(m);
        let pts = numerical_range_sample(&form, &emb, 500, 3).unwrap();
        for w in &pts {
            assert!((w.re + w.im - 1.0).abs() < 1e-12);
            assert!(w.re >= -1e-12 && w.im >= -1e-12);
        }
        let again = numerical_range_sample(&form, &emb, 500, 3).unwrap();
        assert_eq!(pts, again);
        let (id_form, id_emb) = std_pair(identity(3));
        for w in numerical_range_sample(&id_form, &id_emb, 50, 9).unwrap() {
            assert!((w - cr(1.0)).norm() < 1e-14);
        }
    }
}
