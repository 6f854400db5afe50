//! Scenario files: a form family plus the checks to run on it.
//!
//! Complex numbers are `[re, im]` pairs and matrices are row-major nested
//! arrays. Every tolerance used by the checks is a field of [`Tolerances`].

use std::f64::consts::PI;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{Embedding, HilbertSpace};
use crate::holo::{self, FormFamily};
use crate::linalg::{cr, CMat, CVec};
use crate::wire::{self, WireComplex, WireMatrix, WireVector};

/// Names of the available checks, in canonical execution order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckName {
    Laxmilgram,
    Sector,
    UniformSector,
    NormEquiv,
    ResolventHolo,
    Eq5,
    Eq6,
    Thm4a,
    Thm4b,
    RemarkA,
}

impl CheckName {
    pub const ALL: [CheckName; 10] = [
        CheckName::Laxmilgram,
        CheckName::Sector,
        CheckName::UniformSector,
        CheckName::NormEquiv,
        CheckName::ResolventHolo,
        CheckName::Eq5,
        CheckName::Eq6,
        CheckName::Thm4a,
        CheckName::Thm4b,
        CheckName::RemarkA,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CheckName::Laxmilgram => "laxmilgram",
            CheckName::Sector => "sector",
            CheckName::UniformSector => "uniform_sector",
            CheckName::NormEquiv => "norm_equiv",
            CheckName::ResolventHolo => "resolvent_holo",
            CheckName::Eq5 => "eq5",
            CheckName::Eq6 => "eq6",
            CheckName::Thm4a => "thm4a",
            CheckName::Thm4b => "thm4b",
            CheckName::RemarkA => "remark_a",
        }
    }

    /// The check whose certificate this one consumes.
    pub fn prerequisite(self) -> Option<CheckName> {
        match self {
            CheckName::Laxmilgram => None,
            CheckName::Sector => Some(CheckName::Laxmilgram),
            CheckName::UniformSector => Some(CheckName::Sector),
            CheckName::NormEquiv | CheckName::ResolventHolo => Some(CheckName::UniformSector),
            CheckName::Eq5 | CheckName::Eq6 | CheckName::Thm4a | CheckName::Thm4b | CheckName::RemarkA => {
                Some(CheckName::ResolventHolo)
            }
        }
    }
}

impl fmt::Display for CheckName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// All numerical thresholds used by the checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Hermitian deviation allowed in Gram matrices.
    pub hermitian: f64,
    /// Relative PSD tolerance of sector pencils.
    pub psd: f64,
    /// Lax–Milgram defining-relation residual.
    pub defining_relation: f64,
    /// Norm-equivalence ratio slack.
    pub equivalence: f64,
    /// Absolute slack of pointwise inequalities.
    pub bound_slack: f64,
    /// Distance of the normalized vertex from 1.
    pub normalization: f64,
    pub cauchy_residual: f64,
    pub derivative_gap: f64,
    pub semigroup_residual: f64,
    /// Slack in growth bounds `M e^{omega t}` and resolvent power bounds.
    pub growth_slack: f64,
    /// Noise floor for monotonicity comparisons.
    pub monotone_noise: f64,
    /// Slack on the certified slope `2 C0 + 1`.
    pub slope_slack: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermitian: 1e-12,
            psd: 1e-10,
            defining_relation: 1e-10,
            equivalence: 1e-9,
            bound_slack: 1e-10,
            normalization: 1e-9,
            cauchy_residual: 1e-8,
            derivative_gap: 1e-6,
            semigroup_residual: 1e-7,
            growth_slack: 1e-10,
            monotone_noise: 1e-12,
            slope_slack: 1e-8,
        }
    }
}

impl Tolerances {
    /// Every tolerance multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            hermitian: self.hermitian * factor,
            psd: self.psd * factor,
            defining_relation: self.defining_relation * factor,
            equivalence: self.equivalence * factor,
            bound_slack: self.bound_slack * factor,
            normalization: self.normalization * factor,
            cauchy_residual: self.cauchy_residual * factor,
            derivative_gap: self.derivative_gap * factor,
            semigroup_residual: self.semigroup_residual * factor,
            growth_slack: self.growth_slack * factor,
            monotone_noise: self.monotone_noise * factor,
            slope_slack: self.slope_slack * factor,
        }
    }
}

/// Semigroup check parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct SemigroupConfig {
    pub t1: f64,
    pub t_grid: usize,
    pub n_list: Vec<usize>,
    pub lambdas: Vec<f64>,
    /// Largest resolvent power checked.
    pub n_max: usize,
    /// Sector half-angle for the complex-time check; the certified angle
    /// when absent.
    pub theta_prime: Option<f64>,
    pub radius_tau: f64,
    pub m: f64,
    pub omega: f64,
    /// Vector for the strong holomorphy check; seeded random when absent.
    pub x: Option<CVec>,
    /// Step count of the iterate whose holomorphy is also measured.
    pub iterate_n: usize,
}

impl Default for SemigroupConfig {
    fn default() -> Self {
        Self {
            t1: 1.0,
            t_grid: 21,
            n_list: vec![64, 128, 256],
            lambdas: vec![0.25, 0.5, 1.0, 2.0, 4.0],
            n_max: 20,
            theta_prime: None,
            radius_tau: 1.0,
            m: 1.0,
            omega: 0.0,
            x: None,
            iterate_n: 64,
        }
    }
}

/// Circle used by the holomorphy checks.
#[derive(Debug, Clone, PartialEq)]
pub struct HolomorphyConfig {
    /// Half the certified radius when absent.
    pub radius: Option<f64>,
    pub nodes: usize,
    /// Spectral parameter of the resolvent check.
    pub lambda: num_complex::Complex64,
}

impl Default for HolomorphyConfig {
    fn default() -> Self {
        Self {
            radius: None,
            nodes: 32,
            lambda: cr(0.0),
        }
    }
}

/// A validated scenario. `family` is as given; normalization happens when
/// the scenario runs.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub family: FormFamily,
    /// Explicit shift; the normalizing shift is computed when absent.
    pub shift: Option<f64>,
    pub checks: Vec<CheckName>,
    pub tolerances: Tolerances,
    pub seed: u64,
    pub semigroup: SemigroupConfig,
    pub holomorphy: HolomorphyConfig,
}

impl Scenario {
    pub fn new(family: FormFamily) -> Self {
        Self {
            family,
            shift: None,
            checks: CheckName::ALL.to_vec(),
            tolerances: Tolerances::default(),
            seed: 0,
            semigroup: SemigroupConfig::default(),
            holomorphy: HolomorphyConfig::default(),
        }
    }

    pub fn dim(&self) -> usize {
        self.family.dim()
    }

    pub fn to_file(&self) -> ScenarioFile {
        let emb = self.family.embedding();
        let sg = &self.semigroup;
        let ho = &self.holomorphy;
        ScenarioFile {
            dim: self.dim(),
            gram_v: wire::matrix_to_wire(emb.domain().gram()),
            gram_h: wire::matrix_to_wire(emb.codomain().gram()),
            embedding: wire::matrix_to_wire(emb.matrix()),
            coeffs: self.family.coeffs().iter().map(wire::matrix_to_wire).collect(),
            domain_radius: self.family.domain_radius(),
            shift: self.shift,
            checks: self.checks.clone(),
            tolerances: self.tolerances,
            seed: self.seed,
            semigroup: Some(SemigroupFile {
                t1: sg.t1,
                t_grid: sg.t_grid,
                n_list: sg.n_list.clone(),
                lambdas: sg.lambdas.clone(),
                n_max: sg.n_max,
                theta_prime: sg.theta_prime,
                radius_tau: sg.radius_tau,
                m: sg.m,
                omega: sg.omega,
                x: sg.x.as_ref().map(wire::vector_to_wire),
                iterate_n: sg.iterate_n,
            }),
            holomorphy: Some(HolomorphyFile {
                radius: ho.radius,
                nodes: ho.nodes,
                lambda: ho.lambda.into(),
            }),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("scenario serializes")
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }
}

/// On-disk form of a scenario.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub dim: usize,
    #[serde(rename = "gram_V")]
    pub gram_v: WireMatrix,
    #[serde(rename = "gram_H")]
    pub gram_h: WireMatrix,
    pub embedding: WireMatrix,
    pub coeffs: Vec<WireMatrix>,
    pub domain_radius: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shift: Option<f64>,
    #[serde(default)]
    pub checks: Vec<CheckName>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub semigroup: Option<SemigroupFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub holomorphy: Option<HolomorphyFile>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SemigroupFile {
    #[serde(default = "d_t1")]
    pub t1: f64,
    #[serde(default = "d_t_grid")]
    pub t_grid: usize,
    #[serde(default = "d_n_list")]
    pub n_list: Vec<usize>,
    #[serde(default = "d_lambdas")]
    pub lambdas: Vec<f64>,
    #[serde(default = "d_n_max")]
    pub n_max: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_prime: Option<f64>,
    #[serde(default = "d_radius_tau")]
    pub radius_tau: f64,
    #[serde(rename = "M", default = "d_m")]
    pub m: f64,
    #[serde(default)]
    pub omega: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<WireVector>,
    #[serde(default = "d_iterate_n")]
    pub iterate_n: usize,
}

fn d_t1() -> f64 {
    SemigroupConfig::default().t1
}
fn d_t_grid() -> usize {
    SemigroupConfig::default().t_grid
}
fn d_n_list() -> Vec<usize> {
    SemigroupConfig::default().n_list
}
fn d_lambdas() -> Vec<f64> {
    SemigroupConfig::default().lambdas
}
fn d_n_max() -> usize {
    SemigroupConfig::default().n_max
}
fn d_radius_tau() -> f64 {
    SemigroupConfig::default().radius_tau
}
fn d_m() -> f64 {
    SemigroupConfig::default().m
}
fn d_iterate_n() -> usize {
    SemigroupConfig::default().iterate_n
}
fn d_nodes() -> usize {
    HolomorphyConfig::default().nodes
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HolomorphyFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(default = "d_nodes")]
    pub nodes: usize,
    #[serde(default = "d_lambda")]
    pub lambda: WireComplex,
}

fn d_lambda() -> WireComplex {
    WireComplex([0.0, 0.0])
}

/// Read and validate a scenario file.
pub fn load_config(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path)?;
    parse_config(&text)
}

/// Parse and validate scenario JSON.
pub fn parse_config(text: &str) -> Result<Scenario> {
    let file: ScenarioFile = serde_json::from_str(text).map_err(|e| {
        use serde_json::error::Category;
        match e.classify() {
            Category::Data => Error::Schema(e.to_string()),
            _ => Error::Parse {
                line: e.line(),
                column: e.column(),
                message: e.to_string(),
            },
        }
    })?;
    validate(file, text)
}

fn key_line(text: &str, key: &str) -> Option<usize> {
    let needle = format!("\"{key}\"");
    text.lines().position(|l| l.contains(&needle)).map(|i| i + 1)
}

fn location(text: &str, key: &str, pointer: &str) -> String {
    match key_line(text, key) {
        Some(line) => format!("{pointer} (line {line})"),
        None => pointer.to_string(),
    }
}

fn invalid(text: &str, role: &str, key: &str, pointer: &str, message: impl Into<String>) -> Error {
    Error::Validation {
        role: role.to_string(),
        location: location(text, key, pointer),
        message: message.into(),
    }
}

fn square(text: &str, role: &str, key: &str, pointer: &str, rows: &WireMatrix, dim: usize) -> Result<CMat> {
    let m = wire::matrix_from_wire(rows)
        .map_err(|row| invalid(text, role, key, &format!("{pointer}/{row}"), "ragged row"))?;
    if m.nrows() != dim || m.ncols() != dim {
        return Err(invalid(
            text,
            role,
            key,
            pointer,
            format!("expected {dim}x{dim}, found {}x{}", m.nrows(), m.ncols()),
        ));
    }
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(invalid(text, role, key, pointer, "non-finite entry"));
    }
    Ok(m)
}

fn validate(file: ScenarioFile, text: &str) -> Result<Scenario> {
    let dim = file.dim;
    if dim == 0 {
        return Err(invalid(text, "dim", "dim", "/dim", "must be positive"));
    }
    let tol = file.tolerances;
    let tol_fields = serde_json::to_value(tol).expect("tolerances serialize");
    for (name, v) in tol_fields.as_object().expect("struct") {
        if !(v.as_f64().is_some_and(|x| x > 0.0)) {
            return Err(invalid(
                text,
                "tolerances",
                name,
                &format!("/tolerances/{name}"),
                "must be a positive number",
            ));
        }
    }
    let space = |key: &str, rows: &WireMatrix| -> Result<HilbertSpace> {
        let m = square(text, key, key, &format!("/{key}"), rows, dim)?;
        HilbertSpace::with_tolerance(m, tol.hermitian, key)
            .map_err(|e| invalid(text, key, key, &format!("/{key}"), e.to_string()))
    };
    let v = space("gram_V", &file.gram_v)?;
    let h = space("gram_H", &file.gram_h)?;
    let j = square(text, "embedding", "embedding", "/embedding", &file.embedding, dim)?;
    let emb = Embedding::new(v, h, j).map_err(|e| invalid(text, "embedding", "embedding", "/embedding", e.to_string()))?;
    if file.coeffs.is_empty() {
        return Err(invalid(text, "coeffs", "coeffs", "/coeffs", "at least M_0 is required"));
    }
    let coeffs = file
        .coeffs
        .iter()
        .enumerate()
        .map(|(k, m)| square(text, "coeffs", "coeffs", &format!("/coeffs/{k}"), m, dim))
        .collect::<Result<Vec<_>>>()?;
    if !(file.domain_radius > 0.0 && file.domain_radius.is_finite()) {
        return Err(invalid(text, "domain_radius", "domain_radius", "/domain_radius", "must be positive"));
    }
    if let Some(s) = file.shift {
        if !s.is_finite() {
            return Err(invalid(text, "shift", "shift", "/shift", "must be finite"));
        }
    }
    let family = FormFamily::new(emb, coeffs, file.domain_radius)?;

    let semigroup = match file.semigroup {
        None => SemigroupConfig::default(),
        Some(sg) => {
            let bad = |key: &str, msg: &str| invalid(text, "semigroup", key, &format!("/semigroup/{key}"), msg);
            if !(sg.t1 > 0.0 && sg.t1.is_finite()) {
                return Err(bad("t1", "must be positive"));
            }
            if sg.t_grid < 2 {
                return Err(bad("t_grid", "needs at least 2 points"));
            }
            if sg.n_list.is_empty() || sg.n_list.contains(&0) {
                return Err(bad("n_list", "needs positive step counts"));
            }
            if sg.n_max == 0 {
                return Err(bad("n_max", "must be positive"));
            }
            if sg.lambdas.iter().any(|l| !l.is_finite()) {
                return Err(bad("lambdas", "must be finite"));
            }
            if let Some(t) = sg.theta_prime {
                if !(0.0..0.5 * PI).contains(&t) {
                    return Err(bad("theta_prime", "must lie in [0, pi/2)"));
                }
            }
            if !(sg.radius_tau > 0.0) {
                return Err(bad("radius_tau", "must be positive"));
            }
            if !(sg.m >= 1.0) {
                return Err(bad("M", "must be at least 1"));
            }
            if !sg.omega.is_finite() {
                return Err(bad("omega", "must be finite"));
            }
            if sg.iterate_n == 0 {
                return Err(bad("iterate_n", "must be positive"));
            }
            let x = match sg.x {
                Some(x) if x.len() != dim => return Err(bad("x", &format!("expected length {dim}"))),
                Some(x) => Some(wire::vector_from_wire(&x)),
                None => None,
            };
            SemigroupConfig {
                t1: sg.t1,
                t_grid: sg.t_grid,
                n_list: sg.n_list,
                lambdas: sg.lambdas,
                n_max: sg.n_max,
                theta_prime: sg.theta_prime,
                radius_tau: sg.radius_tau,
                m: sg.m,
                omega: sg.omega,
                x,
                iterate_n: sg.iterate_n,
            }
        }
    };
    let holomorphy = match file.holomorphy {
        None => HolomorphyConfig::default(),
        Some(hf) => {
            let bad = |key: &str, msg: String| invalid(text, "holomorphy", key, &format!("/holomorphy/{key}"), msg);
            if let Some(r) = hf.radius {
                if !(r > 0.0) {
                    return Err(bad("radius", "must be positive".into()));
                }
            }
            holo::check_node_count(hf.nodes).map_err(|e| bad("nodes", e.to_string()))?;
            HolomorphyConfig {
                radius: hf.radius,
                nodes: hf.nodes,
                lambda: hf.lambda.into(),
            }
        }
    };
    let mut checks = file.checks;
    checks.sort();
    checks.dedup();
    Ok(Scenario {
        family,
        shift: file.shift,
        checks,
        tolerances: tol,
        seed: file.seed,
        semigroup,
        holomorphy,
    })
}
