//! Matrix semigroups generated by associated operators.
//!
//! Convention: every function here takes the accretive operator `A` (in
//! `H`-coordinates) and works with the semigroup `T(t) = exp(-tA)`, whose
//! generator is `-A`. The exponential-formula iterate is therefore
//! `(I + (t/n) A)^{-n}` and resolvent powers are `(lambda + A)^{-n}`.
//! Operator norms are taken in the `H` metric.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hilbert::HilbertSpace;
use crate::holo::{self, FormFamily, HolomorphyReport, UniformSectorCertificate};
use crate::linalg::{self, cr, CMat, CVec};

const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371920351148152;

/// `exp(-tA)` by scaling and squaring with a degree-13 Padé approximant.
/// `t` may be complex.
pub fn matrix_exponential(a: &CMat, t: Complex64) -> CMat {
    let n = a.nrows();
    let x = a * (-t);
    let norm = linalg::one_norm(&x);
    let s = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as i32
    } else {
        0
    };
    let x = x.unscale(2f64.powi(s));
    let b = &PADE13;
    let id = linalg::identity(n);
    let mul = linalg::matmul;
    let x2 = mul(&x, &x);
    let x4 = mul(&x2, &x2);
    let x6 = mul(&x4, &x2);
    let u_inner = mul(&x6, &(&x6 * cr(b[13]) + &x4 * cr(b[11]) + &x2 * cr(b[9])))
        + &x6 * cr(b[7])
        + &x4 * cr(b[5])
        + &x2 * cr(b[3])
        + &id * cr(b[1]);
    let u = mul(&x, &u_inner);
    let v = mul(&x6, &(&x6 * cr(b[12]) + &x4 * cr(b[10]) + &x2 * cr(b[8])))
        + &x6 * cr(b[6])
        + &x4 * cr(b[4])
        + &x2 * cr(b[2])
        + &id * cr(b[0]);
    let p = &v + &u;
    let q = &v - &u;
    let mut r = q.lu().solve(&p).expect("Padé denominator is invertible for scaled input");
    for _ in 0..s {
        r = mul(&r, &r);
    }
    r
}

/// `A_z` in `H`-coordinates, the inverse of `J M(z)^{-1} J* G_H`.
pub fn operator_at(family: &FormFamily, z: Complex64) -> Result<CMat> {
    let emb = family.embedding();
    let m = family.matrix_at(z)?;
    let m_inv = linalg::inverse(&m).ok_or(Error::SolveFailed {
        condition: f64::INFINITY,
    })?;
    let a_inv = emb.matrix() * m_inv * emb.matrix().adjoint() * emb.codomain().gram();
    linalg::inverse(&a_inv).ok_or(Error::SolveFailed {
        condition: f64::INFINITY,
    })
}

/// `n` equally spaced points on `[0, t1]`, both ends included.
pub fn time_grid(t1: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![0.0],
        _ => (0..n).map(|k| t1 * k as f64 / (n - 1) as f64).collect(),
    }
}

fn is_uniform_from_zero(times: &[f64]) -> bool {
    if times.len() < 2 || times[0] != 0.0 {
        return false;
    }
    let dt = times[1];
    times
        .iter()
        .enumerate()
        .all(|(k, &t)| (t - k as f64 * dt).abs() <= 1e-14 * t.abs().max(1.0))
}

/// `exp(-tA)` for every `t` in `times`; a uniform grid starting at 0 is
/// evaluated as powers of a single step exponential.
pub fn semigroup_on_grid(a: &CMat, times: &[f64]) -> Vec<CMat> {
    if is_uniform_from_zero(times) {
        let step = matrix_exponential(a, cr(times[1]));
        let mut out = Vec::with_capacity(times.len());
        let mut acc = linalg::identity(a.nrows());
        for _ in times {
            out.push(acc.clone());
            acc = linalg::matmul(&acc, &step);
        }
        out
    } else {
        times.iter().map(|&t| matrix_exponential(a, cr(t))).collect()
    }
}

/// Growth pair `(M, omega)` with `|T(t)| <= M e^{omega t}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrowthBound {
    pub m: f64,
    pub omega: f64,
}

impl GrowthBound {
    pub const CONTRACTION: GrowthBound = GrowthBound { m: 1.0, omega: 0.0 };

    pub fn at(&self, t: f64) -> f64 {
        self.m * (self.omega * t).exp()
    }
}

/// `T(t) = exp(-tA)` sampled on a time grid.
#[derive(Debug, Clone)]
pub struct SemigroupSnapshot {
    pub times: Vec<f64>,
    pub values: Vec<CMat>,
    pub growth: GrowthBound,
}

impl SemigroupSnapshot {
    pub fn new(a: &CMat, times: Vec<f64>, growth: GrowthBound) -> Self {
        let values = semigroup_on_grid(a, &times);
        Self { times, values, growth }
    }

    /// `|T(0) - I|_2`, or 0 when 0 is not on the grid.
    pub fn identity_defect(&self) -> f64 {
        match self.times.iter().position(|&t| t == 0.0) {
            Some(k) => linalg::spectral_norm(&(&self.values[k] - linalg::identity(self.values[k].nrows()))),
            None => 0.0,
        }
    }

    /// Largest `|T(ti + tj) - T(ti) T(tj)|_2` over pairs whose sum is on
    /// the grid.
    pub fn semigroup_law_defect(&self) -> f64 {
        let mut worst = 0.0_f64;
        for (i, &ti) in self.times.iter().enumerate() {
            for (j, &tj) in self.times.iter().enumerate().skip(i) {
                let target = ti + tj;
                let hit = self
                    .times
                    .iter()
                    .position(|&t| (t - target).abs() <= 1e-12 * target.max(1.0));
                if let Some(k) = hit {
                    let d = &self.values[k] - &self.values[i] * &self.values[j];
                    worst = worst.max(linalg::spectral_norm(&d));
                }
            }
        }
        worst
    }

    /// `max_t |T(t)|_H - M e^{omega t}`.
    pub fn growth_excess(&self, space: &HilbertSpace) -> f64 {
        self.times
            .iter()
            .zip(&self.values)
            .map(|(&t, v)| space.operator_norm(v) - self.growth.at(t))
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// One exponential-formula iterate `(I + (t/n) A)^{-n}`.
#[derive(Debug, Clone)]
pub struct EulerApprox {
    pub n: usize,
    pub t: f64,
    pub value: CMat,
    /// `|value - exp(-tA)|_H`.
    pub error: f64,
}

/// `(I + (t/n) A)^{-n}`, by binary powering of the single step inverse.
pub fn euler_iterate(a: &CMat, t: f64, n: usize) -> Result<CMat> {
    if n == 0 {
        return Err(Error::InvalidArgument("step count must be at least 1".into()));
    }
    let step = linalg::identity(a.nrows()) + a * cr(t / n as f64);
    let inv = linalg::inverse(&step).ok_or(Error::SingularStep { t, n })?;
    if !(linalg::one_norm(&step) * linalg::one_norm(&inv) < holo::SPECTRUM_CONDITION) {
        return Err(Error::SingularStep { t, n });
    }
    Ok(linalg::matrix_power(&inv, n))
}

/// The iterate together with its `H`-norm distance to `exp(-tA)`.
pub fn euler_approx(space: &HilbertSpace, a: &CMat, t: f64, n: usize) -> Result<EulerApprox> {
    let value = euler_iterate(a, t, n)?;
    let error = space.operator_norm(&(&value - matrix_exponential(a, cr(t))));
    Ok(EulerApprox { n, t, value, error })
}

/// One row of the resolvent power table.
#[derive(Debug, Clone, Serialize)]
pub struct ResolventPowerRow {
    pub lambda: f64,
    pub n: usize,
    pub norm: f64,
    pub bound: f64,
    /// `bound - norm`.
    pub margin: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResolventPowerReport {
    pub growth: GrowthBound,
    pub rows: Vec<ResolventPowerRow>,
    pub worst_margin: f64,
    pub holds: bool,
}

/// `|(lambda + A)^{-n}|_H <= M / (lambda - omega)^n` for every `lambda` in
/// `lambdas` and `1 <= n <= n_max`; holds when the worst margin is at least
/// `-slack`.
pub fn resolvent_power_bound_check(
    space: &HilbertSpace,
    a: &CMat,
    growth: GrowthBound,
    lambdas: &[f64],
    n_max: usize,
    slack: f64,
) -> Result<ResolventPowerReport> {
    let dim = a.nrows();
    let mut rows = Vec::with_capacity(lambdas.len() * n_max);
    for &lambda in lambdas {
        if !(lambda > growth.omega) {
            return Err(Error::NonPositiveLambda {
                lambda,
                omega: growth.omega,
            });
        }
        let shifted = a + linalg::identity(dim) * cr(lambda);
        let r = linalg::inverse(&shifted).ok_or(Error::LambdaInSpectrum {
            lambda: cr(-lambda),
            condition: f64::INFINITY,
        })?;
        let mut power = linalg::identity(dim);
        for n in 1..=n_max {
            power = &power * &r;
            let norm = space.operator_norm(&power);
            let bound = growth.m / (lambda - growth.omega).powi(n as i32);
            rows.push(ResolventPowerRow {
                lambda,
                n,
                norm,
                bound,
                margin: bound - norm,
            });
        }
    }
    let worst_margin = rows.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min);
    Ok(ResolventPowerReport {
        growth,
        rows,
        worst_margin,
        holds: worst_margin >= -slack,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub sup_error: f64,
    /// `5 t1 |A|^2 / n`.
    pub bound: f64,
    /// `bound - sup_error`.
    pub margin: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceTable {
    pub t1: f64,
    pub grid_points: usize,
    pub rows: Vec<ConvergenceRow>,
    /// Errors are nonincreasing in `n` up to `noise`.
    pub monotone: bool,
    pub passed: bool,
}

impl ConvergenceTable {
    /// `error(n_k) / error(n_{k+1})` for consecutive rows.
    pub fn ratios(&self) -> Vec<f64> {
        self.rows.windows(2).map(|w| w[0].sup_error / w[1].sup_error).collect()
    }
}

/// Sup over a `grid_points`-point grid on `[0, t1]` of the `H`-norm error of
/// the exponential-formula iterate, for each `n` in `n_list` (sorted).
pub fn exponential_formula_convergence(
    space: &HilbertSpace,
    a: &CMat,
    t1: f64,
    grid_points: usize,
    n_list: &[usize],
    noise: f64,
) -> Result<ConvergenceTable> {
    let times = time_grid(t1, grid_points);
    let exact = semigroup_on_grid(a, &times);
    let a_norm = space.operator_norm(a);
    let mut ns = n_list.to_vec();
    ns.sort_unstable();
    ns.dedup();
    let mut rows = Vec::with_capacity(ns.len());
    for n in ns {
        let mut sup = 0.0_f64;
        for (&t, e) in times.iter().zip(&exact) {
            let it = euler_iterate(a, t, n)?;
            sup = sup.max(space.operator_norm(&(it - e)));
        }
        let bound = 5.0 * t1 * a_norm * a_norm / n as f64;
        rows.push(ConvergenceRow {
            n,
            sup_error: sup,
            bound,
            margin: bound - sup,
        });
    }
    let monotone = rows.windows(2).all(|w| w[1].sup_error <= w[0].sup_error + noise);
    let passed = monotone && rows.last().is_some_and(|r| r.margin >= 0.0);
    Ok(ConvergenceTable {
        t1,
        grid_points,
        rows,
        monotone,
        passed,
    })
}

/// Parameters of the mean-value checks of `z -> T_z`.
#[derive(Debug, Clone)]
pub struct HolomorphyParams {
    pub z0: Complex64,
    pub r: f64,
    pub node_count: usize,
    pub t1: f64,
    pub grid_points: usize,
    /// Step count of the exponential-formula iterate whose holomorphy is
    /// also measured (at `t = t1`).
    pub iterate_n: usize,
    pub growth: GrowthBound,
    pub growth_slack: f64,
    pub tolerance: f64,
}

impl HolomorphyParams {
    pub fn new(r: f64, t1: f64) -> Self {
        Self {
            z0: cr(0.0),
            r,
            node_count: 32,
            t1,
            grid_points: 21,
            iterate_n: 64,
            growth: GrowthBound::CONTRACTION,
            growth_slack: 1e-10,
            tolerance: 1e-7,
        }
    }
}

fn check_disc(cert: &UniformSectorCertificate, z0: Complex64, r: f64) -> Result<()> {
    if (z0 - cert.center).norm() + r > cert.radius * (1.0 + 1e-12) {
        return Err(Error::InvalidArgument(format!(
            "circle |z - z0| = {r} leaves the certified disc of radius {}",
            cert.radius
        )));
    }
    Ok(())
}

/// Cauchy mean-value residuals of `z -> T_z(t) x` (first report, `H`-norm)
/// and `z -> T_z(t)` (second report, `H -> H` norm), sup over the time grid,
/// on the circle `|z - z0| = r` inside the certified disc.
pub fn semigroup_holomorphy_check(
    family: &FormFamily,
    cert: &UniformSectorCertificate,
    x: &CVec,
    p: &HolomorphyParams,
) -> Result<(HolomorphyReport, HolomorphyReport)> {
    holo::check_node_count(p.node_count)?;
    check_disc(cert, p.z0, p.r)?;
    let h = family.embedding().codomain();
    linalg::ensure_dim(h.dim(), x.len())?;
    let times = time_grid(p.t1, p.grid_points);
    let nodes = holo::circle_nodes(p.z0, p.r, p.node_count);

    let mut ratios = Vec::with_capacity(nodes.len());
    let mut sum_t: Vec<CMat> = vec![CMat::zeros(h.dim(), h.dim()); times.len()];
    let mut sum_iter = CMat::zeros(h.dim(), h.dim());
    for &z in &nodes {
        let a = operator_at(family, z)?;
        let values = semigroup_on_grid(&a, &times);
        let mut worst_ratio = 0.0_f64;
        for ((&t, v), acc) in times.iter().zip(&values).zip(sum_t.iter_mut()) {
            let norm = h.operator_norm(v);
            let bound = p.growth.at(t);
            if norm > bound + p.growth_slack {
                return Err(Error::UniformBoundUnverified { z, t, norm, bound });
            }
            worst_ratio = worst_ratio.max(norm / bound);
            *acc += v;
        }
        ratios.push(worst_ratio);
        sum_iter += euler_iterate(&a, p.t1, p.iterate_n)?;
    }
    let a0 = operator_at(family, p.z0)?;
    let center = semigroup_on_grid(&a0, &times);
    let n = nodes.len() as f64;

    let mut profile_a = Vec::with_capacity(times.len());
    let mut profile_b = Vec::with_capacity(times.len());
    for ((&t, s), c0) in times.iter().zip(&sum_t).zip(&center) {
        let d = s.unscale(n) - c0;
        profile_a.push((t, h.norm(&(&d * x)).expect("dimension checked")));
        profile_b.push((t, h.operator_norm(&d)));
    }
    let iter_center = euler_iterate(&a0, p.t1, p.iterate_n)?;
    let iter_d = sum_iter.unscale(n) - iter_center;
    let iter_a = h.norm(&(&iter_d * x)).expect("dimension checked");
    let iter_b = h.operator_norm(&iter_d);

    let build = |profile: Vec<(f64, f64)>, iterate: f64| {
        let sup = profile.iter().map(|r| r.1).fold(0.0, f64::max);
        HolomorphyReport {
            center: p.z0,
            radius: p.r,
            node_count: p.node_count,
            mean_value_residual: sup,
            derivative_fd_gap: None,
            node_condition: ratios.clone(),
            profile,
            iterate_residual: Some(iterate),
            tolerance: p.tolerance,
            passed: sup <= p.tolerance && iterate <= p.tolerance,
        }
    };
    Ok((build(profile_a, iter_a), build(profile_b, iter_b)))
}

/// Parameters of the complex-time check.
#[derive(Debug, Clone)]
pub struct SectorParams {
    pub z0: Complex64,
    pub r: f64,
    pub node_count: usize,
    pub theta_prime: f64,
    pub radius_tau: f64,
    /// Number of radii `radius_tau k / radial`, `k = 1..=radial`.
    pub radial: usize,
    /// Number of equally spaced angles in `[-theta', theta']`.
    pub angular: usize,
    pub growth: GrowthBound,
    pub growth_slack: f64,
    pub tolerance: f64,
}

impl SectorParams {
    pub fn new(r: f64, theta_prime: f64, radius_tau: f64) -> Self {
        Self {
            z0: cr(0.0),
            r,
            node_count: 32,
            theta_prime,
            radius_tau,
            radial: 5,
            angular: 5,
            growth: GrowthBound::CONTRACTION,
            growth_slack: 1e-10,
            tolerance: 1e-7,
        }
    }

    pub fn tau_grid(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.radial * self.angular);
        for k in 1..=self.radial {
            let rho = self.radius_tau * k as f64 / self.radial as f64;
            for j in 0..self.angular {
                let phi = if self.angular == 1 {
                    0.0
                } else {
                    -self.theta_prime + 2.0 * self.theta_prime * j as f64 / (self.angular - 1) as f64
                };
                out.push(Complex64::from_polar(rho, phi));
            }
        }
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SectorSemigroupReport {
    pub theta_prime: f64,
    /// `pi/2 - arctan(2 C0 + 1)`.
    pub theta_certified: f64,
    #[serde(serialize_with = "ser_complex_list")]
    pub tau_grid: Vec<Complex64>,
    /// Profile rows are `(tau index, residual)`.
    pub holomorphy: HolomorphyReport,
}

fn ser_complex_list<S: serde::Serializer>(v: &[Complex64], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for z in v {
        seq.serialize_element(&crate::wire::WireComplex::from(*z))?;
    }
    seq.end()
}

/// `exp(-tau A)` over [`SectorParams::tau_grid`], in grid order. Points on
/// one ray are integer multiples of the innermost one, so each ray costs a
/// single exponential.
fn sector_values(a: &CMat, p: &SectorParams) -> Vec<CMat> {
    let taus = p.tau_grid();
    let mut out = vec![CMat::zeros(0, 0); taus.len()];
    for j in 0..p.angular {
        let step = matrix_exponential(a, taus[j]);
        let mut acc = step.clone();
        for k in 0..p.radial {
            if k > 0 {
                acc = linalg::matmul(&acc, &step);
            }
            out[k * p.angular + j] = acc.clone();
        }
    }
    out
}

/// Closed-sector admissibility tolerance on `theta'`.
pub const ANGLE_SLACK: f64 = 1e-12;

/// Evaluate `T_z(tau) = exp(-tau A_z)` for complex `tau` in a sector grid,
/// verify `|T_z(tau)|_H <= M e^{omega Re tau}` at every node, and report the
/// Cauchy mean-value residual in `z`, sup over the grid.
///
/// A grid point violating the bound is reported as `BoundViolated` even
/// when `theta'` also exceeds the certified angle; otherwise a too-wide
/// `theta'` yields `SectorTooWide`.
pub fn sector_semigroup_check(
    family: &FormFamily,
    cert: &UniformSectorCertificate,
    p: &SectorParams,
) -> Result<SectorSemigroupReport> {
    holo::check_node_count(p.node_count)?;
    check_disc(cert, p.z0, p.r)?;
    if !(p.theta_prime >= 0.0 && p.theta_prime < 0.5 * PI) {
        return Err(Error::InvalidArgument(format!(
            "sector half-angle must lie in [0, pi/2), got {}",
            p.theta_prime
        )));
    }
    let h = family.embedding().codomain();
    let dim = h.dim();
    let theta = cert.semigroup_angle();
    let taus = p.tau_grid();
    let nodes = holo::circle_nodes(p.z0, p.r, p.node_count);

    let mut ratios = Vec::with_capacity(nodes.len());
    let mut sums = vec![CMat::zeros(dim, dim); taus.len()];
    let mut violation: Option<Error> = None;
    let mut worst_excess = 0.0_f64;
    for &z in &nodes {
        let a = operator_at(family, z)?;
        let mut worst_ratio = 0.0_f64;
        for ((&tau, acc), v) in taus.iter().zip(sums.iter_mut()).zip(sector_values(&a, p)) {
            let norm = h.operator_norm(&v);
            let bound = p.growth.at(tau.re);
            let excess = norm - bound;
            if excess > p.growth_slack && excess > worst_excess {
                worst_excess = excess;
                violation = Some(Error::BoundViolated { z, tau, norm, bound });
            }
            worst_ratio = worst_ratio.max(norm / bound);
            *acc += &v;
        }
        ratios.push(worst_ratio);
    }
    if let Some(e) = violation {
        return Err(e);
    }
    if p.theta_prime > theta + ANGLE_SLACK {
        return Err(Error::SectorTooWide {
            theta_prime: p.theta_prime,
            theta,
        });
    }
    let a0 = operator_at(family, p.z0)?;
    let n = nodes.len() as f64;
    let profile: Vec<(f64, f64)> = sums
        .iter()
        .zip(sector_values(&a0, p))
        .enumerate()
        .map(|(k, (s, c0))| (k as f64, h.operator_norm(&(s.unscale(n) - c0))))
        .collect();
    let sup = profile.iter().map(|r| r.1).fold(0.0, f64::max);
    Ok(SectorSemigroupReport {
        theta_prime: p.theta_prime,
        theta_certified: theta,
        tau_grid: taus,
        holomorphy: HolomorphyReport {
            center: p.z0,
            radius: p.r,
            node_count: p.node_count,
            mean_value_residual: sup,
            derivative_fd_gap: None,
            node_condition: ratios,
            profile,
            iterate_residual: None,
            tolerance: p.tolerance,
            passed: sup <= p.tolerance,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::Embedding;
    use crate::linalg::{c, diag_real, from_real_rows, identity};
    use crate::sampling::Sampler;

    fn unitary(seed: u64, n: usize) -> CMat {
        let mut rng = Sampler::new(seed);
        rng.matrix(n).qr().q()
    }

    fn normal_accretive(seed: u64, n: usize) -> (CMat, Vec<Complex64>) {
        let mut rng = Sampler::new(seed);
        let eig: Vec<Complex64> = (0..n).map(|_| c(rng.uniform(0.2, 2.0), rng.uniform(-2.0, 2.0))).collect();
        let u = unitary(seed + 100, n);
        let d = CMat::from_diagonal(&CVec::from_vec(eig.clone()));
        (&u * d * u.adjoint(), eig)
    }

    fn std_family(coeffs: Vec<CMat>, radius: f64) -> FormFamily {
        let s = HilbertSpace::standard(coeffs[0].nrows());
        FormFamily::new(Embedding::identity_on(s), coeffs, radius).unwrap()
    }

    #[test]
    fn exponential_examples() {
        assert!((matrix_exponential(&CMat::zeros(3, 3), cr(1.0)) - identity(3)).norm() < 1e-15);
        let e = matrix_exponential(&identity(2), cr(1.0));
        assert!(linalg::max_abs(&(e - identity(2).scale((-1.0f64).exp()))) < 1e-12);
        let jordan = from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]);
        let expected = from_real_rows(&[&[1.0, -1.0], &[0.0, 1.0]]).scale((-1.0f64).exp());
        assert!(linalg::max_abs(&(matrix_exponential(&jordan, cr(1.0)) - expected)) < 1e-12);
    }

    #[test]
    fn exponential_matches_spectral_oracle() {
        for seed in 0..5 {
            let (a, eig) = normal_accretive(seed, 6);
            let u = unitary(seed + 100, 6);
            for t in [c(0.3, 0.0), c(7.5, 0.0), c(1.0, 0.8)] {
                let d = CMat::from_diagonal(&CVec::from_iterator(6, eig.iter().map(|&l| (-t * l).exp())));
                let oracle = &u * d * u.adjoint();
                let got = matrix_exponential(&a, t);
                assert!(linalg::relative_difference(&got, &oracle) < 1e-12);
            }
        }
    }

    #[test]
    fn snapshot_invariants() {
        let mut rng = Sampler::new(3);
        let a = rng.accretive_matrix(4, 0.5, 1.0);
        let snap = SemigroupSnapshot::new(&a, time_grid(2.0, 21), GrowthBound::CONTRACTION);
        assert!(snap.identity_defect() <= 1e-12);
        assert!(snap.semigroup_law_defect() <= 1e-9);
        assert!(snap.growth_excess(&HilbertSpace::standard(4)) <= 1e-10);
    }

    #[test]
    fn grid_powers_match_direct_exponential() {
        let mut rng = Sampler::new(4);
        let a = rng.accretive_matrix(5, 0.2, 2.0);
        let times = time_grid(1.0, 21);
        let fast = semigroup_on_grid(&a, &times);
        for (&t, v) in times.iter().zip(&fast) {
            assert!(linalg::spectral_norm(&(v - matrix_exponential(&a, cr(t)))) < 1e-12);
        }
    }

    #[test]
    fn euler_examples() {
        let s1 = HilbertSpace::standard(1);
        let zero = euler_approx(&HilbertSpace::standard(2), &CMat::zeros(2, 2), 1.0, 7).unwrap();
        assert_eq!(zero.value, identity(2));
        let one = euler_approx(&s1, &identity(1), 1.0, 10).unwrap();
        assert!((one.value[(0, 0)].re - 0.3855432894295314).abs() < 1e-12);
        assert!((one.error - 0.017662).abs() < 1e-5);
        assert!(matches!(
            euler_iterate(&identity(1).scale(-1.0), 1.0, 1),
            Err(Error::SingularStep { .. })
        ));
    }

    #[test]
    fn euler_first_order() {
        let mut rng = Sampler::new(5);
        let a = rng.accretive_matrix(5, 0.3, 1.0);
        let s = HilbertSpace::standard(5);
        let e40 = euler_approx(&s, &a, 1.0, 40).unwrap().error;
        let e80 = euler_approx(&s, &a, 1.0, 80).unwrap().error;
        let ratio = e40 / e80;
        assert!((1.6..=2.4).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn resolvent_power_examples() {
        let s = HilbertSpace::standard(3);
        let rep = resolvent_power_bound_check(&s, &identity(3), GrowthBound::CONTRACTION, &[1.0], 10, 1e-10).unwrap();
        assert!(rep.holds);
        for row in &rep.rows {
            assert!((row.norm - 0.5f64.powi(row.n as i32)).abs() < 1e-14);
        }
        let (a, _) = normal_accretive(7, 5);
        let s5 = HilbertSpace::standard(5);
        let rep = resolvent_power_bound_check(&s5, &a, GrowthBound::CONTRACTION, &[0.5, 1.0, 2.0], 20, 1e-10).unwrap();
        assert!(rep.holds && rep.worst_margin >= -1e-10);
        assert!(matches!(
            resolvent_power_bound_check(&s5, &a, GrowthBound::CONTRACTION, &[0.0], 3, 1e-10),
            Err(Error::NonPositiveLambda { .. })
        ));
    }

    #[test]
    fn resolvent_power_needs_the_h_metric() {
        let (delta, omega, eps) = (0.01, 1.0, 0.01);
        let b = from_real_rows(&[&[delta, omega], &[-omega, delta]]);
        let s = diag_real(&[1.0, eps]);
        let s_inv = diag_real(&[1.0, 1.0 / eps]);
        let a = &s_inv * b * &s;
        let h = HilbertSpace::new(diag_real(&[1.0, eps * eps])).unwrap();
        let right = resolvent_power_bound_check(&h, &a, GrowthBound::CONTRACTION, &[0.25], 5, 1e-10).unwrap();
        assert!(right.holds);
        let wrong = resolvent_power_bound_check(&HilbertSpace::standard(2), &a, GrowthBound::CONTRACTION, &[0.25], 5, 1e-10)
            .unwrap();
        assert!(!wrong.holds);
    }

    #[test]
    fn convergence_examples() {
        let s = HilbertSpace::standard(2);
        let zero = exponential_formula_convergence(&s, &CMat::zeros(2, 2), 1.0, 21, &[4, 8], 1e-12).unwrap();
        assert!(zero.rows.iter().all(|r| r.sup_error == 0.0));

        let s1 = HilbertSpace::standard(1);
        let table = exponential_formula_convergence(&s1, &identity(1), 1.0, 21, &[10, 20, 40], 1e-12).unwrap();
        for ratio in table.ratios() {
            assert!((1.7..=2.3).contains(&ratio), "ratio {ratio}");
        }
        assert!(table.passed);

        let mut rng = Sampler::new(8);
        let a = rng.accretive_matrix(8, 0.3, 1.0);
        let s8 = HilbertSpace::standard(8);
        let table = exponential_formula_convergence(&s8, &a, 1.0, 21, &[1024], 1e-12).unwrap();
        assert!(table.passed, "{table:?}");
    }

    #[test]
    fn contraction_for_normalized_operators() {
        let mut rng = Sampler::new(10);
        let v = HilbertSpace::new(rng.pd_matrix(4, 0.5)).unwrap();
        let h = HilbertSpace::new(rng.pd_matrix(4, 0.5)).unwrap();
        let emb = Embedding::new(v, h.clone(), rng.invertible(4)).unwrap();
        let fam = FormFamily::new(emb, vec![rng.coercive_matrix(4, 0.1, 2.0)], 1.0).unwrap();
        let fam = fam.shifted(fam.normalizing_shift().unwrap());
        let a = operator_at(&fam, cr(0.0)).unwrap();
        for v in semigroup_on_grid(&a, &time_grid(3.0, 31)) {
            assert!(h.operator_norm(&v) <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn holomorphy_constant_family() {
        let fam = std_family(vec![diag_real(&[1.0, 2.0, 3.0])], 1.0);
        let cert = holo::perturbation_radius(&fam, 1e-9).unwrap();
        let x = CVec::from_element(3, cr(1.0));
        let (a, b) = semigroup_holomorphy_check(&fam, &cert, &x, &HolomorphyParams::new(0.5, 1.0)).unwrap();
        assert!(a.mean_value_residual <= 1e-12 && b.mean_value_residual <= 1e-12);
        assert!(a.profile[0].1 <= 1e-14);
    }

    #[test]
    fn holomorphy_affine_family() {
        let mut rng = Sampler::new(11);
        let b = rng.matrix(3).scale(0.3);
        let fam = std_family(vec![identity(3), b], 100.0);
        let cert = holo::perturbation_radius(&fam, 1e-9).unwrap();
        let x = rng.vector(3);
        let p = HolomorphyParams {
            tolerance: 1e-8,
            ..HolomorphyParams::new(0.5 * cert.radius, 1.0)
        };
        let (ra, rb) = semigroup_holomorphy_check(&fam, &cert, &x, &p).unwrap();
        assert!(ra.passed && rb.passed, "{ra:?} {rb:?}");
        assert!(ra.profile[0].1 <= 1e-14);
        let too_far = HolomorphyParams::new(2.0 * cert.radius, 1.0);
        assert!(semigroup_holomorphy_check(&fam, &cert, &x, &too_far).is_err());
    }

    #[test]
    fn uniform_bound_violation_detected() {
        let fam = std_family(vec![identity(2)], 1.0);
        let cert = holo::perturbation_radius(&fam, 1e-9).unwrap();
        let p = HolomorphyParams {
            growth: GrowthBound { m: 0.5, omega: 0.0 },
            ..HolomorphyParams::new(0.5, 1.0)
        };
        let x = CVec::from_element(2, cr(1.0));
        assert!(matches!(
            semigroup_holomorphy_check(&fam, &cert, &x, &p),
            Err(Error::UniformBoundUnverified { .. })
        ));
    }

    #[test]
    fn sector_hermitian_constant_family() {
        let fam = std_family(vec![diag_real(&[1.0, 2.0, 5.0])], 1.0);
        let cert = holo::perturbation_radius(&fam, 1e-9).unwrap();
        let rep = sector_semigroup_check(&fam, &cert, &SectorParams::new(0.5, PI / 4.0, 2.0)).unwrap();
        assert!(rep.holomorphy.passed);
        assert!(rep.holomorphy.node_condition.iter().all(|&r| r <= 1.0 + 1e-12));
        for (&tau, _) in rep.tau_grid.iter().zip(&rep.holomorphy.profile) {
            let t = matrix_exponential(&fam.coeffs()[0], tau);
            // spectral mapping: |e^{-tau l}| = e^{-l Re tau}, largest at l = 1
            assert!((linalg::spectral_norm(&t) - (-tau.re).exp()).abs() < 1e-12);
        }
    }

    #[test]
    fn sector_real_tau_reduces_to_time_grid() {
        let mut rng = Sampler::new(12);
        let fam = std_family(vec![identity(3), rng.matrix(3).scale(0.2)], 10.0);
        let cert = holo::perturbation_radius(&fam, 1e-9).unwrap();
        let r = 0.5 * cert.radius;
        let sp = SectorParams {
            angular: 1,
            ..SectorParams::new(r, 0.0, 1.0)
        };
        let sector = sector_semigroup_check(&fam, &cert, &sp).unwrap();
        let hp = HolomorphyParams {
            grid_points: 6,
            ..HolomorphyParams::new(r, 1.0)
        };
        let (_, b) = semigroup_holomorphy_check(&fam, &cert, &CVec::from_element(3, cr(1.0)), &hp).unwrap();
        for (s, h) in sector.holomorphy.profile.iter().zip(&b.profile[1..]) {
            assert!((s.1 - h.1).abs() <= 1e-12);
        }
    }

    #[test]
    fn sector_edge_violation_and_width() {
        let c1 = 2.0;
        let m0 = CMat::from_diagonal(&CVec::from_vec(vec![c(1.0, c1), c(1.0, -c1)]));
        let fam = std_family(vec![m0, identity(2).scale(0.01)], 1.0);
        let cert = holo::perturbation_radius(&fam, 1e-9).unwrap();
        let r = 0.5 * cert.radius;
        let edge = 0.5 * PI - c1.atan();
        let wide = SectorParams::new(r, edge + 0.05, 1.0);
        assert!(matches!(
            sector_semigroup_check(&fam, &cert, &wide),
            Err(Error::BoundViolated { .. })
        ));
        let between = SectorParams::new(r, 0.5 * (edge + cert.semigroup_angle()), 1.0);
        assert!(matches!(
            sector_semigroup_check(&fam, &cert, &between),
            Err(Error::SectorTooWide { .. })
        ));
        let inside = SectorParams::new(r, cert.semigroup_angle(), 1.0);
        assert!(sector_semigroup_check(&fam, &cert, &inside).unwrap().holomorphy.passed);
    }
}
