use num_complex::Complex64;
use thiserror::Error;

use crate::linalg::CVec;

/// Errors raised by the numerical routines and the scenario runner.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("{role} is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { role: String, deviation: f64 },

    #[error("{role} is not positive definite (smallest eigenvalue {eigenvalue:e})")]
    NotPositiveDefinite { role: String, eigenvalue: f64 },

    #[error("embedding is not invertible (smallest singular value {smallest_singular_value:e})")]
    SingularEmbedding { smallest_singular_value: f64 },

    #[error("Gram matrix could not be factorized")]
    SingularGram,

    #[error("form is not coercive (smallest generalized eigenvalue {eigenvalue:e})")]
    NotCoercive { eigenvalue: f64, witness: CVec },

    #[error("linear solve failed (condition estimate {condition:e})")]
    SolveFailed { condition: f64 },

    #[error("vertex {gamma} is too large: Re a - gamma*|.|^2 has eigenvalue {eigenvalue:e}")]
    VertexTooLarge { gamma: f64, eigenvalue: f64 },

    #[error("imaginary part does not vanish on the kernel of the shifted real part; semi-angle is pi/2")]
    InfiniteSemiAngle,

    #[error("form norm undefined: value under the root is {value:e}")]
    NegativeUnderRoot { value: f64 },

    #[error("form is not sectorial with vertex 0 (vertex {vertex:e})")]
    VertexNotZero { vertex: f64 },

    #[error("z = {z} lies outside the family domain |z| <= {radius}")]
    OutsideDomain { z: Complex64, radius: f64 },

    #[error("family not normalized: vertex of a_0 is {vertex}, expected 1")]
    NotNormalized { vertex: f64 },

    #[error("certificate invariant `{invariant}` violated at z = {z} (value {value:e}, bound {bound:e})")]
    CertificateInvariant {
        invariant: &'static str,
        z: Complex64,
        value: f64,
        bound: f64,
    },

    #[error("node count must be a power of two >= 8, got {0}")]
    InvalidNodeCount(usize),

    #[error("evaluation failed at node {node} (z = {z}): {source}")]
    EvaluationFailure {
        node: usize,
        z: Complex64,
        #[source]
        source: Box<Error>,
    },

    #[error("lambda = {lambda} is in the spectrum (condition estimate {condition:e})")]
    LambdaInSpectrum { lambda: Complex64, condition: f64 },

    #[error("lambda hits the spectrum at node {node} (z = {z}, condition estimate {condition:e})")]
    NodeSpectrumHit {
        node: usize,
        z: Complex64,
        condition: f64,
    },

    #[error("I + (t/n)A is singular for t = {t}, n = {n}")]
    SingularStep { t: f64, n: usize },

    #[error("lambda = {lambda} must exceed omega = {omega}")]
    NonPositiveLambda { lambda: f64, omega: f64 },

    #[error("growth bound violated at z = {z}, t = {t}: |T| = {norm:e} > {bound:e}")]
    UniformBoundUnverified {
        z: Complex64,
        t: f64,
        norm: f64,
        bound: f64,
    },

    #[error("theta' = {theta_prime} exceeds the certified sector angle {theta}")]
    SectorTooWide { theta_prime: f64, theta: f64 },

    #[error("sector bound violated at z = {z}, tau = {tau}: |T| = {norm:e} > {bound:e}")]
    BoundViolated {
        z: Complex64,
        tau: Complex64,
        norm: f64,
        bound: f64,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unknown demo `{0}`")]
    UnknownDemo(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("validation error in {role} at {location}: {message}")]
    Validation {
        role: String,
        location: String,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
