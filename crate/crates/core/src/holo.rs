//! Holomorphic families of forms `a_z` with a fixed domain, the locally
//! uniform sector certificate around `z = 0`, and numerical holomorphy
//! checks for operator-valued functions of `z`.
//!
//! Families are polynomials `M(z) = M_0 + z M_1 + ... + z^d M_d`, so every
//! scalar function `z -> a_z(u, v)` is entire. Holomorphy of derived objects
//! (inverses, resolvents, semigroups) is not assumed: it is measured with the
//! trapezoidal mean-value identity `f(z0) = (1/N) sum f(z0 + r e^{i theta_n})`,
//! whose error decays geometrically in `N` exactly when `f` is holomorphic on a
//! neighbourhood of the closed disc.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hilbert::{op_norm, Embedding, Form, Side};
use crate::linalg::{self, c, cr, CMat};
use crate::sampling::Sampler;
use crate::sector;

/// A polynomial family of forms on a disc `|z| <= domain_radius`.
#[derive(Debug, Clone, PartialEq)]
pub struct FormFamily {
    embedding: Embedding,
    coeffs: Vec<CMat>,
    domain_radius: f64,
}

impl FormFamily {
    pub fn new(embedding: Embedding, coeffs: Vec<CMat>, domain_radius: f64) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("family needs at least M_0".into()));
        }
        if !(domain_radius > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "domain radius must be positive, got {domain_radius}"
            )));
        }
        let n = embedding.domain().dim();
        for m in &coeffs {
            linalg::ensure_square(m)?;
            linalg::ensure_dim(n, m.nrows())?;
        }
        Ok(Self {
            embedding,
            coeffs,
            domain_radius,
        })
    }

    pub fn embedding(&self) -> &Embedding {
        &self.embedding
    }

    pub fn coeffs(&self) -> &[CMat] {
        &self.coeffs
    }

    pub fn domain_radius(&self) -> f64 {
        self.domain_radius
    }

    pub fn dim(&self) -> usize {
        self.embedding.domain().dim()
    }

    /// `M(z)` by Horner's rule.
    pub fn matrix_at(&self, z: Complex64) -> Result<CMat> {
        if z.norm() > self.domain_radius * (1.0 + 1e-12) {
            return Err(Error::OutsideDomain {
                z,
                radius: self.domain_radius,
            });
        }
        let mut acc = self.coeffs[self.coeffs.len() - 1].clone();
        for m in self.coeffs.iter().rev().skip(1) {
            acc = acc * z + m;
        }
        Ok(acc)
    }

    /// The form `a_z`.
    pub fn eval(&self, z: Complex64) -> Result<Form> {
        Form::new(self.embedding.domain().clone(), self.matrix_at(z)?)
    }

    /// `a_z + s |j.|_H^2`: adds `s J* G_H J` to `M_0`, moving every vertex
    /// by exactly `s`.
    pub fn shifted(&self, s: f64) -> FormFamily {
        let mut coeffs = self.coeffs.clone();
        if s != 0.0 {
            coeffs[0] += self.embedding.pulled_back_metric().scale(s);
        }
        FormFamily {
            embedding: self.embedding.clone(),
            coeffs,
            domain_radius: self.domain_radius,
        }
    }

    /// Vertex of `a_0`.
    pub fn vertex_at_zero(&self) -> Result<f64> {
        Ok(sector::vertex(&self.eval(cr(0.0))?, &self.embedding)?.0)
    }

    /// Shift needed to bring the vertex of `a_0` to 1.
    pub fn normalizing_shift(&self) -> Result<f64> {
        Ok(1.0 - self.vertex_at_zero()?)
    }

    /// `|M_k|_{V -> V*}` for `k >= 1`.
    pub fn perturbation_norms(&self) -> Result<Vec<f64>> {
        let v = self.embedding.domain();
        self.coeffs[1..]
            .iter()
            .map(|m| op_norm(m, Side::Primal(v), Side::Dual(v)))
            .collect()
    }
}

/// `z0 + r e^{2 pi i k / n}` for `k = 0..n`.
pub fn circle_nodes(z0: Complex64, r: f64, n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|k| z0 + Complex64::from_polar(r, 2.0 * PI * k as f64 / n as f64))
        .collect()
}

/// The locally uniform sector data of a normalized family around `z = 0`.
#[derive(Debug, Clone, Serialize)]
pub struct UniformSectorCertificate {
    #[serde(serialize_with = "crate::wire::ser_complex")]
    pub center: Complex64,
    /// Radius of the closed disc on which `|𝒜_z - 𝒜_0| <= 1/(2 C)`.
    pub radius: f64,
    /// `C` with `|u|_V^2 <= C Re a_0(u)`.
    pub c_big: f64,
    /// Slope of `a_0` measured from vertex 0.
    pub c0: f64,
    /// `2 C0 + 1`, the slope certified for every `a_z` on the disc.
    pub slope_bound: f64,
    pub perturbation_norms: Vec<f64>,
    /// All `M_k` with `k >= 1` vanish; the radius is the domain radius.
    pub degenerate: bool,
}

impl UniformSectorCertificate {
    /// `1/(2 C)`.
    pub fn perturbation_budget(&self) -> f64 {
        0.5 / self.c_big
    }

    /// Opening half-angle of the common sector of holomorphy of the
    /// semigroups, `pi/2 - arctan(2 C0 + 1)`.
    pub fn semigroup_angle(&self) -> f64 {
        0.5 * PI - self.slope_bound.atan()
    }

    pub fn boundary_samples(&self, count: usize) -> Vec<Complex64> {
        circle_nodes(self.center, self.radius, count)
    }
}

/// Number of boundary samples used to verify a fresh certificate.
pub const CERTIFICATE_SAMPLES: usize = 25;

/// Perturbation radius and uniform sector constants for a family whose
/// `a_0` has vertex 1 (to within `normalization_tol`).
pub fn perturbation_radius(family: &FormFamily, normalization_tol: f64) -> Result<UniformSectorCertificate> {
    let emb = family.embedding();
    let a0 = family.eval(cr(0.0))?;
    let vtx = sector::vertex(&a0, emb)?.0;
    if (vtx - 1.0).abs() > normalization_tol {
        return Err(Error::NotNormalized { vertex: vtx });
    }
    let c_big = linalg::gen_eigh(emb.domain().gram(), &a0.real_part())?.max().0;
    let c0 = sector::min_semiangle(&a0, emb, 0.0)?.slope;
    let norms = family.perturbation_norms()?;
    let budget = 0.5 / c_big;
    let big_r = family.domain_radius();
    let growth = |r: f64| -> f64 {
        norms
            .iter()
            .enumerate()
            .map(|(k, b)| b * r.powi(k as i32 + 1))
            .sum()
    };
    let degenerate = norms.iter().all(|&b| b == 0.0);
    let radius = if degenerate || growth(big_r) <= budget {
        big_r
    } else {
        let (mut lo, mut hi) = (0.0_f64, big_r);
        while hi - lo > 1e-12 * hi {
            let mid = 0.5 * (lo + hi);
            if growth(mid) <= budget {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    };
    let cert = UniformSectorCertificate {
        center: cr(0.0),
        radius,
        c_big,
        c0,
        slope_bound: 2.0 * c0 + 1.0,
        perturbation_norms: norms,
        degenerate,
    };
    verify_certificate(family, &cert, CERTIFICATE_SAMPLES)?;
    Ok(cert)
}

/// Check the certificate's operator-norm and sector invariants at `samples`
/// points on the boundary circle.
pub fn verify_certificate(family: &FormFamily, cert: &UniformSectorCertificate, samples: usize) -> Result<()> {
    let emb = family.embedding();
    let v = emb.domain();
    let m0 = family.matrix_at(cert.center)?;
    let budget = cert.perturbation_budget();
    for z in cert.boundary_samples(samples) {
        let mz = family.matrix_at(z)?;
        let gap = op_norm(&(&mz - &m0), Side::Primal(v), Side::Dual(v))?;
        if gap > budget * (1.0 + 1e-10) {
            return Err(Error::CertificateInvariant {
                invariant: "|A_z - A_0| <= 1/(2C)",
                z,
                value: gap,
                bound: budget,
            });
        }
        let form = Form::new(v.clone(), mz)?;
        let check = sector::sector_check(&form, emb, 0.0, cert.slope_bound)?;
        if !check.holds {
            return Err(Error::CertificateInvariant {
                invariant: "sector(vertex 0, slope 2C0+1)",
                z,
                value: check.margin,
                bound: 0.0,
            });
        }
    }
    Ok(())
}

/// Worst margins of the inequalities used in the proof of local uniformity,
/// each reported as `lhs - rhs` (so nonpositive means satisfied).
#[derive(Debug, Clone, Serialize)]
pub struct ProofChainReport {
    pub samples: usize,
    pub vectors_per_sample: usize,
    /// `max_z |𝒜_z - 𝒜_0| - 1/(2C)`.
    pub operator_gap: f64,
    /// `|a_z(u) - a_0(u)| - |u|_V^2/(2C)`.
    pub eq2_left: f64,
    /// `|u|_V^2/(2C) - Re a_0(u)/2`.
    pub eq2_right: f64,
    /// `Re a_0(u)/2 - Re a_z(u)`.
    pub eq3: f64,
    /// `|Im a_z(u)| - (C0 + 1/2) Re a_0(u)`.
    pub chain_left: f64,
    /// `(C0 + 1/2) Re a_0(u) - (2 C0 + 1) Re a_z(u)`.
    pub chain_right: f64,
    /// Largest minimal slope of `a_z` at vertex 0 over the samples.
    pub max_slope: f64,
    pub slope_bound: f64,
    /// `(z, slope)` per boundary sample.
    pub slopes: Vec<(f64, f64)>,
    pub holds: bool,
}

/// Evaluate the proof inequalities on `samples` boundary points with
/// `vectors` random unit vectors each. `slack` is the absolute tolerance for
/// the pointwise inequalities, `slope_slack` for the slope comparison.
pub fn verify_proof_chain(
    family: &FormFamily,
    cert: &UniformSectorCertificate,
    samples: usize,
    vectors: usize,
    seed: u64,
    slack: f64,
    slope_slack: f64,
) -> Result<ProofChainReport> {
    let emb = family.embedding();
    let v = emb.domain();
    let a0 = family.eval(cert.center)?;
    let budget = cert.perturbation_budget();
    let mut rng = Sampler::new(seed);
    let mut report = ProofChainReport {
        samples,
        vectors_per_sample: vectors,
        operator_gap: f64::NEG_INFINITY,
        eq2_left: f64::NEG_INFINITY,
        eq2_right: f64::NEG_INFINITY,
        eq3: f64::NEG_INFINITY,
        chain_left: f64::NEG_INFINITY,
        chain_right: f64::NEG_INFINITY,
        max_slope: 0.0,
        slope_bound: cert.slope_bound,
        slopes: Vec::with_capacity(samples),
        holds: true,
    };
    for (k, z) in cert.boundary_samples(samples).into_iter().enumerate() {
        let az = family.eval(z)?;
        let gap = op_norm(&(az.matrix() - a0.matrix()), Side::Primal(v), Side::Dual(v))?;
        report.operator_gap = report.operator_gap.max(gap - budget);
        for _ in 0..vectors {
            let u = v.normalize(&rng.vector(v.dim()))?;
            let q0 = a0.quad(&u)?;
            let qz = az.quad(&u)?;
            report.eq2_left = report.eq2_left.max((qz - q0).norm() - budget);
            report.eq2_right = report.eq2_right.max(budget - 0.5 * q0.re);
            report.eq3 = report.eq3.max(0.5 * q0.re - qz.re);
            report.chain_left = report.chain_left.max(qz.im.abs() - (cert.c0 + 0.5) * q0.re);
            report.chain_right = report
                .chain_right
                .max((cert.c0 + 0.5) * q0.re - cert.slope_bound * qz.re);
        }
        let slope = sector::min_semiangle(&az, emb, 0.0)?.slope;
        report.max_slope = report.max_slope.max(slope);
        report.slopes.push((k as f64, slope));
    }
    let scale = budget.max(1.0);
    report.holds = report.operator_gap <= 1e-10 * scale
        && report.eq2_left <= slack
        && report.eq2_right <= slack
        && report.eq3 <= slack
        && report.chain_left <= slack
        && report.chain_right <= slack
        && report.max_slope <= cert.slope_bound + slope_slack;
    Ok(report)
}

/// Exact norm-equivalence ratios at `samples` points of the certificate
/// circle: `(z index, lower, upper)`.
pub fn norm_equivalence_on_circle(
    family: &FormFamily,
    cert: &UniformSectorCertificate,
    samples: usize,
) -> Result<Vec<(usize, sector::NormEquivalence)>> {
    let a0 = family.eval(cert.center)?;
    cert.boundary_samples(samples)
        .into_iter()
        .enumerate()
        .map(|(k, z)| {
            let az = family.eval(z)?;
            Ok((k, sector::norm_equivalence_check(&a0, &az, family.embedding())?))
        })
        .collect()
}

pub fn check_node_count(n: usize) -> Result<()> {
    if n < 8 || !n.is_power_of_two() {
        return Err(Error::InvalidNodeCount(n));
    }
    Ok(())
}

/// Values of `f` at the `n` circle nodes, in node order.
pub fn node_values<F>(mut f: F, z0: Complex64, r: f64, n: usize) -> Result<Vec<CMat>>
where
    F: FnMut(Complex64) -> Result<CMat>,
{
    check_node_count(n)?;
    circle_nodes(z0, r, n)
        .into_iter()
        .enumerate()
        .map(|(node, z)| {
            f(z).map_err(|e| Error::EvaluationFailure {
                node,
                z,
                source: Box::new(e),
            })
        })
        .collect()
}

/// Trapezoidal mean over the circle.
pub fn node_mean(values: &[CMat]) -> CMat {
    let mut acc = values[0].clone();
    for v in &values[1..] {
        acc += v;
    }
    acc.unscale(values.len() as f64)
}

/// Trapezoidal Cauchy formula for `f'(z0)` from node values.
pub fn cauchy_derivative(values: &[CMat], r: f64) -> CMat {
    let n = values.len();
    let mut acc = CMat::zeros(values[0].nrows(), values[0].ncols());
    for (k, v) in values.iter().enumerate() {
        let w = Complex64::from_polar(1.0 / r, -2.0 * PI * k as f64 / n as f64);
        acc += v * w;
    }
    acc.unscale(n as f64)
}

/// `|(1/N) sum f(z_n) - f(z0)|_2` on the circle `|z - z0| = r`.
pub fn cauchy_residual<F>(mut f: F, z0: Complex64, r: f64, node_count: usize) -> Result<f64>
where
    F: FnMut(Complex64) -> Result<CMat>,
{
    let values = node_values(&mut f, z0, r, node_count)?;
    let center = f(z0)?;
    Ok(linalg::spectral_norm(&(node_mean(&values) - center)))
}

/// Condition numbers above this count as hitting the spectrum.
pub const SPECTRUM_CONDITION: f64 = 1e13;

/// `(lambda - A_z)^{-1}` together with the 1-norm condition number of the
/// matrix that was inverted.
pub fn resolvent_with_condition(family: &FormFamily, z: Complex64, lambda: Complex64) -> Result<(CMat, f64)> {
    let emb = family.embedding();
    let m = family.matrix_at(z)?;
    let j = emb.matrix();
    let gh = emb.codomain().gram();
    let spectrum_hit = |condition: f64| Error::LambdaInSpectrum { lambda, condition };

    let m_inv = linalg::inverse(&m).ok_or_else(|| spectrum_hit(f64::INFINITY))?;
    let cond_m = linalg::one_norm(&m) * linalg::one_norm(&m_inv);
    // A_z^{-1} = J M(z)^{-1} J* G_H
    let a_inv = j * m_inv * j.adjoint() * gh;
    if lambda == cr(0.0) {
        if !(cond_m < SPECTRUM_CONDITION) {
            return Err(spectrum_hit(cond_m));
        }
        return Ok((-a_inv, cond_m));
    }
    let a = linalg::inverse(&a_inv).ok_or_else(|| spectrum_hit(f64::INFINITY))?;
    let shifted = linalg::identity(a.nrows()) * lambda - a;
    let inv = linalg::inverse(&shifted).ok_or_else(|| spectrum_hit(f64::INFINITY))?;
    let cond = linalg::one_norm(&shifted) * linalg::one_norm(&inv);
    if !(cond < SPECTRUM_CONDITION) {
        return Err(spectrum_hit(cond));
    }
    Ok((inv, cond))
}

/// `(lambda - A_z)^{-1}` in `H`-coordinates. For `lambda = 0` this is
/// `-J M(z)^{-1} J* G_H`.
pub fn resolvent(family: &FormFamily, z: Complex64, lambda: Complex64) -> Result<CMat> {
    resolvent_with_condition(family, z, lambda).map(|(r, _)| r)
}

/// Outcome of a numerical holomorphy check on a circle.
#[derive(Debug, Clone, Serialize)]
pub struct HolomorphyReport {
    #[serde(serialize_with = "crate::wire::ser_complex")]
    pub center: Complex64,
    pub radius: f64,
    pub node_count: usize,
    /// Sup over the profile of the mean-value residual.
    pub mean_value_residual: f64,
    /// Relative gap between the Cauchy derivative and a finite difference.
    pub derivative_fd_gap: Option<f64>,
    /// Per-node condition numbers (resolvent checks) or growth ratios
    /// `|T_z(t)| / (M e^{omega t})` (semigroup checks).
    pub node_condition: Vec<f64>,
    /// `(parameter, residual)` rows, e.g. one per time-grid point.
    pub profile: Vec<(f64, f64)>,
    /// Same residual for a fixed-n exponential-formula iterate, if computed.
    pub iterate_residual: Option<f64>,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct HolomorphyTolerances {
    pub residual: f64,
    pub derivative_gap: f64,
}

impl Default for HolomorphyTolerances {
    fn default() -> Self {
        Self {
            residual: 1e-8,
            derivative_gap: 1e-6,
        }
    }
}

/// Mean-value and derivative check of `z -> (lambda - A_z)^{-1}` on the
/// circle `|z - z0| = r`. Norms are `H -> H` operator norms.
pub fn resolvent_holomorphy_check(
    family: &FormFamily,
    z0: Complex64,
    lambda: Complex64,
    r: f64,
    node_count: usize,
    tol: HolomorphyTolerances,
) -> Result<HolomorphyReport> {
    check_node_count(node_count)?;
    let h = family.embedding().codomain();
    let mut conditions = Vec::with_capacity(node_count);
    let mut values = Vec::with_capacity(node_count);
    for (node, z) in circle_nodes(z0, r, node_count).into_iter().enumerate() {
        match resolvent_with_condition(family, z, lambda) {
            Ok((v, cond)) => {
                values.push(v);
                conditions.push(cond);
            }
            Err(Error::LambdaInSpectrum { condition, .. }) => {
                return Err(Error::NodeSpectrumHit { node, z, condition })
            }
            Err(e) => {
                return Err(Error::EvaluationFailure {
                    node,
                    z,
                    source: Box::new(e),
                })
            }
        }
    }
    let center = resolvent(family, z0, lambda)?;
    let residual = h.operator_norm(&(node_mean(&values) - &center));

    let cauchy = cauchy_derivative(&values, r);
    let step = r / 100.0;
    let at = |dz: f64| resolvent(family, z0 + c(dz, 0.0), lambda);
    let fd = (at(-2.0 * step)? - at(2.0 * step)? + (at(step)? - at(-step)?) * cr(8.0)).unscale(12.0 * step);
    let scale = h.operator_norm(&cauchy).max(h.operator_norm(&center) / r);
    let gap = if scale > 0.0 {
        h.operator_norm(&(&cauchy - &fd)) / scale
    } else {
        0.0
    };
    Ok(HolomorphyReport {
        center: z0,
        radius: r,
        node_count,
        mean_value_residual: residual,
        derivative_fd_gap: Some(gap),
        node_condition: conditions,
        profile: vec![(0.0, residual)],
        iterate_residual: None,
        tolerance: tol.residual,
        passed: residual <= tol.residual && gap <= tol.derivative_gap,
    })
}
