//! Built-in scenarios with documented expected outcomes.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::hilbert::{Embedding, HilbertSpace};
use crate::holo::FormFamily;
use crate::linalg::{c, cr, diag_real, identity, CMat, CVec};
use crate::report::Status;
use crate::sampling::Sampler;
use crate::scenario::{CheckName, Scenario};

/// A named demo and what each check is expected to report on it.
#[derive(Debug, Clone, Copy)]
pub struct Demo {
    pub name: &'static str,
    pub summary: &'static str,
    /// Checks not listed are expected to pass.
    pub exceptions: &'static [(CheckName, Status)],
}

impl Demo {
    pub fn expected(&self, check: CheckName) -> Status {
        self.exceptions
            .iter()
            .find(|(c, _)| *c == check)
            .map_or(Status::Pass, |&(_, s)| s)
    }

    pub fn scenario(&self) -> Scenario {
        builtin_demo(self.name).expect("listed demo exists")
    }
}

const SEMIGROUP_CHECKS: [CheckName; 5] = [
    CheckName::Eq5,
    CheckName::Eq6,
    CheckName::Thm4a,
    CheckName::Thm4b,
    CheckName::RemarkA,
];

pub const DEMOS: [Demo; 5] = [
    Demo {
        name: "affine-hermitian",
        summary: "dim 6, M(z) = M0 + zB with M0 Hermitian positive definite, nontrivial Grams and embedding",
        exceptions: &[],
    },
    Demo {
        name: "schrodinger-1d",
        summary: "finite-difference Dirichlet Laplacian on 100 interior points plus z times a complex potential",
        exceptions: &[],
    },
    Demo {
        name: "rotated-sector",
        summary: "numerical range hugging the lines |Im| = 2 Re; theta' past the sector edge violates the bound",
        exceptions: &[(CheckName::RemarkA, Status::Fail)],
    },
    Demo {
        name: "pole-at-r0",
        summary: "M(z) = (1 - z/r0) I with r0 = 1, resolvent checked on |z| = r0",
        exceptions: &[
            (CheckName::ResolventHolo, Status::Fail),
            (SEMIGROUP_CHECKS[0], Status::Skip),
            (SEMIGROUP_CHECKS[1], Status::Skip),
            (SEMIGROUP_CHECKS[2], Status::Skip),
            (SEMIGROUP_CHECKS[3], Status::Skip),
            (SEMIGROUP_CHECKS[4], Status::Skip),
        ],
    },
    Demo {
        name: "jordan-nonnormal",
        summary: "dim 4, Jordan-type non-normal M0 with a non-normal embedding and weighted H metric",
        exceptions: &[],
    },
];

pub fn list_demos() -> &'static [Demo] {
    &DEMOS
}

pub fn find_demo(name: &str) -> Result<&'static Demo> {
    DEMOS
        .iter()
        .find(|d| d.name == name)
        .ok_or_else(|| Error::UnknownDemo(name.to_string()))
}

/// The scenario of a built-in demo.
pub fn builtin_demo(name: &str) -> Result<Scenario> {
    match name {
        "affine-hermitian" => Ok(affine_hermitian()),
        "schrodinger-1d" => Ok(schrodinger_1d(100)),
        "rotated-sector" => Ok(rotated_sector(2.0)),
        "pole-at-r0" => Ok(pole_at_r0(1.0)),
        "jordan-nonnormal" => Ok(jordan_nonnormal()),
        other => Err(Error::UnknownDemo(other.to_string())),
    }
}

fn family(gram_v: CMat, gram_h: CMat, j: CMat, coeffs: Vec<CMat>, radius: f64) -> FormFamily {
    let v = HilbertSpace::new(gram_v).expect("demo Gram is positive definite");
    let h = HilbertSpace::new(gram_h).expect("demo Gram is positive definite");
    let emb = Embedding::new(v, h, j).expect("demo embedding is invertible");
    FormFamily::new(emb, coeffs, radius).expect("demo coefficients are square")
}

fn with_seed(family: FormFamily, seed: u64) -> Scenario {
    Scenario {
        seed,
        ..Scenario::new(family)
    }
}

fn affine_hermitian() -> Scenario {
    let n = 6;
    let mut rng = Sampler::new(2024);
    let gram_v = rng.pd_matrix(n, 0.5);
    let gram_h = rng.pd_matrix(n, 0.5);
    let j = rng.invertible(n);
    let m0 = rng.pd_matrix(n, 1.0);
    let b = rng.matrix(n).scale(0.3);
    let mut s = with_seed(family(gram_v, gram_h, j, vec![m0, b], 4.0), 7);
    s.semigroup.theta_prime = Some(PI / 4.0);
    s
}

/// `a_z(u, v) = sum (Du)(Dv)^- h + z sum q u v^- h` on `n` interior points
/// of `(0, 1)` with `h = 1/(n+1)`.
pub fn schrodinger_1d(n: usize) -> Scenario {
    let h = 1.0 / (n + 1) as f64;
    let lap = CMat::from_fn(n, n, |i, j| match i.abs_diff(j) {
        0 => cr(2.0 / h),
        1 => cr(-1.0 / h),
        _ => cr(0.0),
    });
    let q = CVec::from_fn(n, |i, _| {
        let x = (i + 1) as f64 * h;
        c(1.0 + (2.0 * PI * x).sin(), (3.0 * PI * x).cos())
    });
    let potential = CMat::from_diagonal(&q).scale(h);
    let gram_h = identity(n).scale(h);
    let gram_v = &lap + &gram_h;
    with_seed(family(gram_v, gram_h, identity(n), vec![lap, potential], 2.0), 11)
}

/// `M0 = diag(1 + iC, 1 - iC)` plus a small perturbation; the sector of the
/// semigroups ends at `pi/2 - arctan(C)` and `theta'` is set 0.05 beyond it.
pub fn rotated_sector(slope: f64) -> Scenario {
    let m0 = CMat::from_diagonal(&CVec::from_vec(vec![c(1.0, slope), c(1.0, -slope)]));
    let b = CMat::from_fn(2, 2, |i, j| if i == j { cr(0.02) } else { c(0.0, 0.01) });
    let mut s = with_seed(family(identity(2), identity(2), identity(2), vec![m0, b], 1.0), 3);
    s.semigroup.theta_prime = Some(0.5 * PI - slope.atan() + 0.05);
    s
}

/// `M(z) = (1 - z/r0) I`, with the resolvent checked on `|z| = r0`.
pub fn pole_at_r0(r0: f64) -> Scenario {
    let n = 2;
    let coeffs = vec![identity(n), identity(n).scale(-1.0 / r0)];
    let mut s = with_seed(family(identity(n), identity(n), identity(n), coeffs, 2.0 * r0), 5);
    s.holomorphy.radius = Some(r0);
    s
}

fn jordan_nonnormal() -> Scenario {
    let n = 4;
    let shift_up = CMat::from_fn(n, n, |i, j| if j == i + 1 { cr(1.0) } else { cr(0.0) });
    let gram_v = identity(n) + (&shift_up + shift_up.adjoint()).scale(0.3);
    let gram_h = diag_real(&[1.0, 0.5, 2.0, 1.5]);
    let j = identity(n) + shift_up.scale(0.5);
    let m0 = identity(n) + shift_up.scale(0.8);
    let m1 = shift_up.transpose() * c(0.0, 0.2) + identity(n).scale(0.1);
    with_seed(family(gram_v, gram_h, j, vec![m0, m1], 2.0), 13)
}
