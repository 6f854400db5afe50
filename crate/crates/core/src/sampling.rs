//! Seeded random vectors and matrices for sampling oracles, property checks
//! and the synthetic demos.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{self, c, CMat, CVec};

/// Deterministic source of complex Gaussian test data.
#[derive(Debug, Clone)]
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn real(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.random_range(lo..hi)
    }

    pub fn index(&mut self, lo: usize, hi_inclusive: usize) -> usize {
        self.rng.random_range(lo..=hi_inclusive)
    }

    pub fn complex(&mut self) -> num_complex::Complex64 {
        c(self.real(), self.real())
    }

    pub fn vector(&mut self, n: usize) -> CVec {
        CVec::from_fn(n, |_, _| self.complex())
    }

    pub fn matrix(&mut self, n: usize) -> CMat {
        CMat::from_fn(n, n, |_, _| self.complex())
    }

    /// `X X*/n + shift I`: Hermitian positive definite with smallest
    /// eigenvalue at least `shift`.
    pub fn pd_matrix(&mut self, n: usize, shift: f64) -> CMat {
        let x = self.matrix(n);
        linalg::hermitian_part(&((&x * x.adjoint()).unscale(n as f64) + linalg::identity(n).scale(shift)))
    }

    /// A random matrix with smallest singular value bounded away from zero.
    pub fn invertible(&mut self, n: usize) -> CMat {
        loop {
            let m = linalg::identity(n) + self.matrix(n).scale(0.4 / (n as f64).sqrt());
            let sv = m.clone().svd(false, false).singular_values;
            if sv.iter().all(|&s| s > 0.1) {
                return m;
            }
        }
    }

    /// A form matrix whose Hermitian part is positive definite with smallest
    /// eigenvalue at least `shift`, plus a skew-Hermitian part of size `skew`.
    pub fn coercive_matrix(&mut self, n: usize, shift: f64, skew: f64) -> CMat {
        let h = self.pd_matrix(n, shift);
        let y = self.matrix(n);
        let k = (&y - y.adjoint()).scale(0.5 * skew / (n as f64).sqrt());
        h + k
    }

    /// A strictly accretive matrix in the Euclidean metric.
    pub fn accretive_matrix(&mut self, n: usize, shift: f64, skew: f64) -> CMat {
        self.coercive_matrix(n, shift, skew)
    }
}

/// Derivative-free maximization of `objective` over nonzero vectors in
/// `C^n`: `samples` random draws, then shrinking-step random local search
/// from the best few. Used as an oracle for extremal constants that are
/// otherwise computed from eigenproblems.
pub fn random_search_max<F>(sampler: &mut Sampler, n: usize, samples: usize, objective: F) -> f64
where
    F: Fn(&CVec) -> f64,
{
    let mut pool: Vec<(f64, CVec)> = (0..samples)
        .map(|_| {
            let u = sampler.vector(n);
            (objective(&u), u)
        })
        .collect();
    pool.sort_by(|a, b| b.0.total_cmp(&a.0));
    pool.truncate(8);
    let mut best = pool[0].0;
    for (mut value, mut u) in pool {
        let mut step = 0.3;
        while step > 1e-7 {
            let mut improved = false;
            for _ in 0..40 {
                let scale = u.norm();
                let trial = &u + sampler.vector(n).scale(step * scale / (2.0 * n as f64).sqrt());
                let v = objective(&trial);
                if v > value {
                    value = v;
                    u = trial;
                    improved = true;
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        best = best.max(value);
    }
    best
}
