//! Running a scenario and writing its report.
//!
//! Checks run in the canonical order of [`CheckName`]. A check whose
//! prerequisite did not pass is skipped with the reason
//! `prerequisite failed: <name>`; prerequisites are evaluated even when not
//! requested, but only requested checks appear in the report. Wall-clock
//! timings are kept out of `report.json` (they go to `timing.json`) so that
//! the report is byte-identical across runs with the same seed.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::hilbert::{Form, HilbertSpace};
use crate::holo::{self, FormFamily, HolomorphyReport, HolomorphyTolerances, UniformSectorCertificate};
use crate::laxmilgram;
use crate::linalg::{self, cr, CMat, CVec};
use crate::sampling::Sampler;
use crate::scenario::{CheckName, Scenario, Tolerances};
use crate::sector;
use crate::semigroup::{self, GrowthBound, HolomorphyParams, SectorParams};
use crate::wire;

/// Boundary samples and random vectors used by the proof-chain check.
pub const CHAIN_SAMPLES: usize = 25;
pub const CHAIN_VECTORS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

/// A table destined for one CSV file.
#[derive(Debug, Clone, Serialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    fn new(name: &str, columns: &[&str]) -> Self {
        Self {
            name: name.to_string(),
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<Value>) {
        self.rows.push(row);
    }

    /// `parameter, value, bound, margin` row with `margin = bound - value`.
    fn upper(&mut self, param: &str, value: f64, bound: f64) {
        self.push(vec![json!(param), json!(value), json!(bound), json!(bound - value)]);
    }

    /// `parameter, value, bound, margin` row with `margin = value - bound`.
    fn lower(&mut self, param: &str, value: f64, bound: f64) {
        self.push(vec![json!(param), json!(value), json!(bound), json!(value - bound)]);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|v| match v {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                })
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: CheckName,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub constants: BTreeMap<String, f64>,
    pub tables: Vec<Table>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<Value>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Normalization {
    pub vertex_before: f64,
    pub shift: f64,
    pub vertex_after: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub seed: u64,
    pub dim: usize,
    pub tolerances: Tolerances,
    pub normalization: Option<Normalization>,
    /// `alpha, c, C_big, C0, r, vertex, slope, M, omega` where computed.
    pub constants: BTreeMap<String, f64>,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
    /// Seconds per executed check, in execution order.
    #[serde(skip)]
    pub timings: Vec<(CheckName, f64)>,
}

impl Report {
    pub fn check(&self, name: CheckName) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn timing_json(&self) -> String {
        let map: BTreeMap<&str, f64> = self.timings.iter().map(|(c, t)| (c.as_str(), *t)).collect();
        serde_json::to_string_pretty(&map).expect("timings serialize") + "\n"
    }

    /// Process exit code: 0 when every requested check passed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

/// Structured witness for a failed check.
pub fn error_witness(e: &Error) -> Value {
    let z = |z: &Complex64| json!([z.re, z.im]);
    let mut w = match e {
        Error::NotCoercive { eigenvalue, witness } => json!({
            "eigenvalue": eigenvalue,
            "vector": wire::vector_to_wire(witness),
        }),
        Error::NodeSpectrumHit { node, z: at, condition } => json!({
            "node": node, "z": z(at), "condition": condition,
        }),
        Error::EvaluationFailure { node, z: at, .. } => json!({ "node": node, "z": z(at) }),
        Error::LambdaInSpectrum { lambda, condition } => json!({ "lambda": z(lambda), "condition": condition }),
        Error::UniformBoundUnverified { z: at, t, norm, bound } => json!({
            "z": z(at), "t": t, "norm": norm, "bound": bound,
        }),
        Error::BoundViolated { z: at, tau, norm, bound } => json!({
            "z": z(at), "tau": z(tau), "norm": norm, "bound": bound,
        }),
        Error::CertificateInvariant { invariant, z: at, value, bound } => json!({
            "invariant": invariant, "z": z(at), "value": value, "bound": bound,
        }),
        Error::SectorTooWide { theta_prime, theta } => json!({ "theta_prime": theta_prime, "theta": theta }),
        Error::NonPositiveLambda { lambda, omega } => json!({ "lambda": lambda, "omega": omega }),
        Error::SingularStep { t, n } => json!({ "t": t, "n": n }),
        Error::NotNormalized { vertex } => json!({ "vertex": vertex }),
        _ => json!({}),
    };
    w["kind"] = json!(error_kind(e));
    w["error"] = json!(e.to_string());
    w
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::NotCoercive { .. } => "NotCoercive",
        Error::NodeSpectrumHit { .. } => "NodeSpectrumHit",
        Error::EvaluationFailure { .. } => "EvaluationFailure",
        Error::LambdaInSpectrum { .. } => "LambdaInSpectrum",
        Error::UniformBoundUnverified { .. } => "UniformBoundUnverified",
        Error::BoundViolated { .. } => "BoundViolated",
        Error::CertificateInvariant { .. } => "CertificateInvariant",
        Error::SectorTooWide { .. } => "SectorTooWide",
        Error::NonPositiveLambda { .. } => "NonPositiveLambda",
        Error::SingularStep { .. } => "SingularStep",
        Error::NotNormalized { .. } => "NotNormalized",
        Error::InfiniteSemiAngle => "InfiniteSemiAngle",
        Error::VertexTooLarge { .. } => "VertexTooLarge",
        Error::VertexNotZero { .. } => "VertexNotZero",
        _ => "Error",
    }
}

#[derive(Default)]
struct Outcome {
    passed: bool,
    constants: BTreeMap<String, f64>,
    tables: Vec<Table>,
    witness: Option<Value>,
    detail: Option<Value>,
}

impl Outcome {
    fn constant(&mut self, name: &str, value: f64) {
        self.constants.insert(name.to_string(), value);
    }
}

struct Runner<'a> {
    scenario: &'a Scenario,
    tol: Tolerances,
    family: FormFamily,
    a0: Form,
    results: BTreeMap<CheckName, CheckResult>,
    timings: Vec<(CheckName, f64)>,
    cert: Option<UniformSectorCertificate>,
    thm4: Option<(HolomorphyReport, HolomorphyReport, HolomorphyReport, HolomorphyReport)>,
}

/// Run every requested check of `scenario`. Check failures are report
/// content; an error is returned only if the family cannot be normalized.
pub fn run_scenario(scenario: &Scenario) -> Result<Report> {
    let tol = scenario.tolerances;
    let mut report = Report {
        seed: scenario.seed,
        dim: scenario.dim(),
        tolerances: tol,
        normalization: None,
        constants: BTreeMap::new(),
        checks: Vec::new(),
        passed: true,
        timings: Vec::new(),
    };
    if scenario.checks.is_empty() {
        return Ok(report);
    }
    let vertex_before = scenario.family.vertex_at_zero()?;
    let shift = scenario.shift.unwrap_or(1.0 - vertex_before);
    let family = scenario.family.shifted(shift);
    let vertex_after = family.vertex_at_zero()?;
    report.normalization = Some(Normalization {
        vertex_before,
        shift,
        vertex_after,
    });
    let a0 = family.eval(cr(0.0))?;
    let mut runner = Runner {
        scenario,
        tol,
        family,
        a0,
        results: BTreeMap::new(),
        timings: Vec::new(),
        cert: None,
        thm4: None,
    };
    let mut requested = scenario.checks.clone();
    requested.sort();
    requested.dedup();
    for &name in &requested {
        runner.ensure(name);
    }
    for name in requested {
        let r = runner.results[&name].clone();
        for (k, v) in &r.constants {
            if matches!(
                k.as_str(),
                "alpha" | "c" | "C_big" | "C0" | "r" | "vertex" | "slope" | "M" | "omega"
            ) {
                report.constants.insert(k.clone(), *v);
            }
        }
        report.passed &= r.passed();
        report.checks.push(r);
    }
    report.timings = runner.timings;
    Ok(report)
}

impl Runner<'_> {
    fn ensure(&mut self, name: CheckName) -> Status {
        if let Some(r) = self.results.get(&name) {
            return r.status;
        }
        if let Some(pre) = name.prerequisite() {
            if self.ensure(pre) != Status::Pass {
                self.results.insert(
                    name,
                    CheckResult {
                        name,
                        status: Status::Skip,
                        reason: Some(format!("prerequisite failed: {pre}")),
                        constants: BTreeMap::new(),
                        tables: Vec::new(),
                        witness: None,
                        detail: None,
                    },
                );
                return Status::Skip;
            }
        }
        let start = Instant::now();
        let outcome = match name {
            CheckName::Laxmilgram => self.laxmilgram(),
            CheckName::Sector => self.sector(),
            CheckName::UniformSector => self.uniform_sector(),
            CheckName::NormEquiv => self.norm_equiv(),
            CheckName::ResolventHolo => self.resolvent_holo(),
            CheckName::Eq5 => self.eq5(),
            CheckName::Eq6 => self.eq6(),
            CheckName::Thm4a => self.thm4(false),
            CheckName::Thm4b => self.thm4(true),
            CheckName::RemarkA => self.remark_a(),
        };
        self.timings.push((name, start.elapsed().as_secs_f64()));
        let result = match outcome {
            Ok(o) => CheckResult {
                name,
                status: if o.passed { Status::Pass } else { Status::Fail },
                reason: None,
                constants: o.constants,
                tables: o.tables,
                witness: o.witness,
                detail: o.detail,
            },
            Err(e) => CheckResult {
                name,
                status: Status::Fail,
                reason: Some(e.to_string()),
                constants: BTreeMap::new(),
                tables: Vec::new(),
                witness: Some(error_witness(&e)),
                detail: None,
            },
        };
        let status = result.status;
        self.results.insert(name, result);
        status
    }

    fn h(&self) -> &HilbertSpace {
        self.family.embedding().codomain()
    }

    fn cert(&self) -> &UniformSectorCertificate {
        self.cert.as_ref().expect("uniform_sector ran before its dependents")
    }

    fn holo_radius(&self) -> f64 {
        self.scenario
            .holomorphy
            .radius
            .unwrap_or_else(|| 0.5 * self.cert().radius)
    }

    fn growth(&self) -> GrowthBound {
        GrowthBound {
            m: self.scenario.semigroup.m,
            omega: self.scenario.semigroup.omega,
        }
    }

    fn operator0(&self) -> Result<CMat> {
        semigroup::operator_at(&self.family, cr(0.0))
    }

    fn laxmilgram(&mut self) -> Result<Outcome> {
        let emb = self.family.embedding();
        let coer = laxmilgram::coercivity_constant(&self.a0)?;
        let op = laxmilgram::associated_operator(&self.a0, emb)?;
        let inv_norm = laxmilgram::laxmilgram_inverse_norm(&self.a0)?;
        let c = emb.bound();
        let (margin, margin_witness) = laxmilgram::accretivity_certificate(&op);
        // a(j^{-1} A^{-1} y, v) = <y, jv>_H for all v, y:  M J^{-1} A^{-1} = J* G_H
        let rhs = emb.matrix().adjoint() * emb.codomain().gram();
        let u = emb
            .matrix()
            .clone()
            .lu()
            .solve(op.inverse_matrix())
            .ok_or(Error::SolveFailed {
                condition: f64::INFINITY,
            })?;
        let relation = linalg::relative_difference(&(self.a0.matrix() * u), &rhs);

        let alpha = coer.alpha;
        let mut o = Outcome::default();
        o.constant("alpha", alpha);
        o.constant("c", c);
        o.constant("inverse_norm", inv_norm);
        o.constant("accretivity_margin", margin);
        o.constant("defining_relation_residual", relation);
        let mut t = Table::new("bounds", &["parameter", "value", "bound", "margin"]);
        t.upper("inverse_norm", inv_norm, 1.0 / alpha);
        t.lower("accretivity_margin", margin, alpha / (c * c));
        t.upper("defining_relation_residual", relation, self.tol.defining_relation);
        o.tables.push(t);
        let inv_ok = inv_norm <= 1.0 / alpha + self.tol.bound_slack;
        let acc_ok = margin >= alpha / (c * c) - self.tol.bound_slack;
        let rel_ok = relation <= self.tol.defining_relation;
        o.passed = alpha > 0.0 && inv_ok && acc_ok && rel_ok;
        if !acc_ok {
            o.witness = Some(json!({ "vector": wire::vector_to_wire(&margin_witness) }));
        } else if !inv_ok {
            o.witness = Some(json!({ "vector": wire::vector_to_wire(&coer.witness) }));
        }
        Ok(o)
    }

    fn sector(&mut self) -> Result<Outcome> {
        let emb = self.family.embedding();
        let (vertex, _) = sector::vertex(&self.a0, emb)?;
        let est = sector::min_semiangle_with_tol(&self.a0, emb, 0.0, self.tol.psd)?;
        let chk = sector::sector_check_with_tol(&self.a0, emb, 0.0, est.slope, self.tol.psd)?;
        let mut o = Outcome::default();
        o.constant("vertex", vertex);
        o.constant("slope", est.slope);
        o.constant("semi_angle", est.semi_angle());
        o.constant("psd_margin", chk.margin);
        let mut t = Table::new("sector", &["parameter", "value", "bound", "margin"]);
        t.upper("vertex_offset", (vertex - 1.0).abs(), self.tol.normalization);
        t.lower("psd_margin", chk.margin, -self.tol.psd);
        o.tables.push(t);
        o.passed = chk.holds && (vertex - 1.0).abs() <= self.tol.normalization;
        if let Some(w) = est.tight_witness {
            o.detail = Some(json!({ "tight_witness": wire::vector_to_wire(&w) }));
        }
        Ok(o)
    }

    fn uniform_sector(&mut self) -> Result<Outcome> {
        let cert = holo::perturbation_radius(&self.family, self.tol.normalization)?;
        let chain = holo::verify_proof_chain(
            &self.family,
            &cert,
            CHAIN_SAMPLES,
            CHAIN_VECTORS,
            self.scenario.seed,
            self.tol.bound_slack,
            self.tol.slope_slack,
        )?;
        let mut o = Outcome::default();
        o.constant("C_big", cert.c_big);
        o.constant("C0", cert.c0);
        o.constant("r", cert.radius);
        o.constant("slope_bound", cert.slope_bound);
        o.constant("theta", cert.semigroup_angle());
        o.constant("degenerate", if cert.degenerate { 1.0 } else { 0.0 });
        let mut t = Table::new("chain", &["parameter", "value", "bound", "margin"]);
        let s = self.tol.bound_slack;
        t.upper("operator_gap", chain.operator_gap, 0.0);
        t.upper("eq2_left", chain.eq2_left, s);
        t.upper("eq2_right", chain.eq2_right, s);
        t.upper("eq3", chain.eq3, s);
        t.upper("chain_left", chain.chain_left, s);
        t.upper("chain_right", chain.chain_right, s);
        t.upper("max_slope", chain.max_slope, cert.slope_bound + self.tol.slope_slack);
        o.tables.push(t);
        let mut slopes = Table::new("slopes", &["sample", "slope", "bound", "margin"]);
        for &(k, slope) in &chain.slopes {
            slopes.push(vec![
                json!(k as usize),
                json!(slope),
                json!(cert.slope_bound),
                json!(cert.slope_bound - slope),
            ]);
        }
        o.tables.push(slopes);
        o.passed = chain.holds;
        o.detail = Some(json!({ "perturbation_norms": cert.perturbation_norms }));
        self.cert = Some(cert);
        Ok(o)
    }

    fn norm_equiv(&mut self) -> Result<Outcome> {
        let rows = holo::norm_equivalence_on_circle(&self.family, self.cert(), CHAIN_SAMPLES)?;
        let eps = self.tol.equivalence;
        let mut t = Table::new("ratios", &["sample", "lower", "upper", "margin"]);
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let mut worst: Option<(usize, f64)> = None;
        for (k, ne) in rows {
            let margin = (ne.lower - 0.5).min(1.5 - ne.upper);
            t.push(vec![json!(k), json!(ne.lower), json!(ne.upper), json!(margin)]);
            lo = lo.min(ne.lower);
            hi = hi.max(ne.upper);
            if worst.is_none_or(|(_, m)| margin < m) {
                worst = Some((k, margin));
            }
        }
        let mut o = Outcome::default();
        o.constant("lower", lo);
        o.constant("upper", hi);
        o.tables.push(t);
        o.passed = lo >= 0.5 - eps && hi <= 1.5 + eps;
        if !o.passed {
            if let Some((k, margin)) = worst {
                o.witness = Some(json!({ "sample": k, "margin": margin }));
            }
        }
        Ok(o)
    }

    fn resolvent_holo(&mut self) -> Result<Outcome> {
        let ho = &self.scenario.holomorphy;
        let r = self.holo_radius();
        let rep = holo::resolvent_holomorphy_check(
            &self.family,
            cr(0.0),
            ho.lambda,
            r,
            ho.nodes,
            HolomorphyTolerances {
                residual: self.tol.cauchy_residual,
                derivative_gap: self.tol.derivative_gap,
            },
        )?;
        let mut o = Outcome::default();
        o.constant("radius", r);
        o.constant("mean_value_residual", rep.mean_value_residual);
        let gap = rep.derivative_fd_gap.unwrap_or(0.0);
        o.constant("derivative_fd_gap", gap);
        o.constant(
            "max_node_condition",
            rep.node_condition.iter().copied().fold(0.0, f64::max),
        );
        let mut t = Table::new("residual", &["parameter", "value", "bound", "margin"]);
        t.upper("mean_value_residual", rep.mean_value_residual, self.tol.cauchy_residual);
        t.upper("derivative_fd_gap", gap, self.tol.derivative_gap);
        o.tables.push(t);
        o.passed = rep.passed;
        Ok(o)
    }

    fn eq5(&mut self) -> Result<Outcome> {
        let sg = &self.scenario.semigroup;
        let a = self.operator0()?;
        let rep =
            semigroup::resolvent_power_bound_check(self.h(), &a, self.growth(), &sg.lambdas, sg.n_max, self.tol.growth_slack)?;
        let mut o = Outcome::default();
        o.constant("M", rep.growth.m);
        o.constant("omega", rep.growth.omega);
        o.constant("worst_margin", rep.worst_margin);
        let mut t = Table::new("powers", &["lambda", "n", "norm", "bound", "margin"]);
        for row in &rep.rows {
            t.push(vec![
                json!(row.lambda),
                json!(row.n),
                json!(row.norm),
                json!(row.bound),
                json!(row.margin),
            ]);
        }
        o.tables.push(t);
        o.passed = rep.holds;
        if !rep.holds {
            let w = rep
                .rows
                .iter()
                .min_by(|a, b| a.margin.total_cmp(&b.margin))
                .expect("nonempty when failing");
            o.witness = Some(json!({ "lambda": w.lambda, "n": w.n, "norm": w.norm, "bound": w.bound }));
        }
        Ok(o)
    }

    fn eq6(&mut self) -> Result<Outcome> {
        let sg = &self.scenario.semigroup;
        let a = self.operator0()?;
        let table = semigroup::exponential_formula_convergence(
            self.h(),
            &a,
            sg.t1,
            sg.t_grid,
            &sg.n_list,
            self.tol.monotone_noise,
        )?;
        let mut o = Outcome::default();
        o.constant("t1", sg.t1);
        if let Some(last) = table.rows.last() {
            o.constant("final_error", last.sup_error);
        }
        let mut t = Table::new("convergence", &["n", "sup_error", "bound", "margin"]);
        for row in &table.rows {
            t.push(vec![json!(row.n), json!(row.sup_error), json!(row.bound), json!(row.margin)]);
        }
        o.tables.push(t);
        o.detail = Some(json!({ "ratios": table.ratios(), "monotone": table.monotone }));
        o.passed = table.passed;
        Ok(o)
    }

    fn x_vector(&self) -> Result<CVec> {
        match &self.scenario.semigroup.x {
            Some(x) => Ok(x.clone()),
            None => {
                let mut rng = Sampler::new(self.scenario.seed.wrapping_add(0x5eed));
                self.h().normalize(&rng.vector(self.h().dim()))
            }
        }
    }

    fn thm4_reports(&mut self) -> Result<()> {
        if self.thm4.is_some() {
            return Ok(());
        }
        let sg = &self.scenario.semigroup;
        let x = self.x_vector()?;
        let nodes = self.scenario.holomorphy.nodes;
        let mut p = HolomorphyParams {
            node_count: nodes,
            grid_points: sg.t_grid,
            iterate_n: sg.iterate_n,
            growth: self.growth(),
            growth_slack: self.tol.growth_slack,
            tolerance: self.tol.semigroup_residual,
            ..HolomorphyParams::new(self.holo_radius(), sg.t1)
        };
        let (a, b) = semigroup::semigroup_holomorphy_check(&self.family, self.cert(), &x, &p)?;
        p.node_count = (nodes / 2).max(8);
        let (ha, hb) = semigroup::semigroup_holomorphy_check(&self.family, self.cert(), &x, &p)?;
        self.thm4 = Some((a, b, ha, hb));
        Ok(())
    }

    fn thm4(&mut self, operator: bool) -> Result<Outcome> {
        self.thm4_reports()?;
        let (a, b, ha, hb) = self.thm4.as_ref().expect("computed above");
        let (full, half) = if operator { (b, hb) } else { (a, ha) };
        let tol = self.tol.semigroup_residual;
        let mut o = Outcome::default();
        o.constant("radius", full.radius);
        o.constant("mean_value_residual", full.mean_value_residual);
        o.constant("half_node_residual", half.mean_value_residual);
        o.constant("iterate_residual", full.iterate_residual.unwrap_or(0.0));
        o.constant(
            "max_growth_ratio",
            full.node_condition.iter().copied().fold(0.0, f64::max),
        );
        let mut t = Table::new("profile", &["t", "residual", "bound", "margin"]);
        for &(time, res) in &full.profile {
            t.push(vec![json!(time), json!(res), json!(tol), json!(tol - res)]);
        }
        o.tables.push(t);
        let mut s = Table::new("summary", &["parameter", "value", "bound", "margin"]);
        s.upper(&format!("residual_n{}", full.node_count), full.mean_value_residual, tol);
        s.upper(
            &format!("residual_n{}_minus_n{}", full.node_count, half.node_count),
            full.mean_value_residual - half.mean_value_residual,
            self.tol.monotone_noise,
        );
        s.upper("iterate_residual", full.iterate_residual.unwrap_or(0.0), tol);
        o.tables.push(s);
        let decays = full.mean_value_residual <= half.mean_value_residual + self.tol.monotone_noise;
        o.passed = full.passed && decays;
        if !full.passed {
            let worst = full
                .profile
                .iter()
                .max_by(|p, q| p.1.total_cmp(&q.1))
                .expect("nonempty grid");
            o.witness = Some(json!({ "t": worst.0, "residual": worst.1 }));
        }
        Ok(o)
    }

    fn remark_a(&mut self) -> Result<Outcome> {
        let sg = &self.scenario.semigroup;
        let theta_prime = sg.theta_prime.unwrap_or_else(|| self.cert().semigroup_angle());
        let p = SectorParams {
            node_count: self.scenario.holomorphy.nodes,
            growth: self.growth(),
            growth_slack: self.tol.growth_slack,
            tolerance: self.tol.semigroup_residual,
            ..SectorParams::new(self.holo_radius(), theta_prime, sg.radius_tau)
        };
        let rep = semigroup::sector_semigroup_check(&self.family, self.cert(), &p)?;
        let tol = self.tol.semigroup_residual;
        let mut o = Outcome::default();
        o.constant("theta_prime", rep.theta_prime);
        o.constant("theta", rep.theta_certified);
        o.constant("mean_value_residual", rep.holomorphy.mean_value_residual);
        o.constant(
            "max_growth_ratio",
            rep.holomorphy.node_condition.iter().copied().fold(0.0, f64::max),
        );
        let mut t = Table::new("profile", &["tau_re", "tau_im", "residual", "bound", "margin"]);
        for (tau, &(_, res)) in rep.tau_grid.iter().zip(&rep.holomorphy.profile) {
            t.push(vec![json!(tau.re), json!(tau.im), json!(res), json!(tol), json!(tol - res)]);
        }
        o.tables.push(t);
        o.passed = rep.holomorphy.passed;
        Ok(o)
    }
}

/// Output formats of [`emit_report`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Both,
}

/// Write the report into `dir`: `report.json` and `timing.json` for JSON,
/// one `<check>_<table>.csv` per table for CSV. Returns the written paths.
pub fn emit_report(report: &Report, dir: &Path, format: Format) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    if matches!(format, Format::Json | Format::Both) {
        let path = dir.join("report.json");
        fs::write(&path, report.to_json())?;
        written.push(path);
        let path = dir.join("timing.json");
        fs::write(&path, report.timing_json())?;
        written.push(path);
    }
    if matches!(format, Format::Csv | Format::Both) {
        for check in &report.checks {
            for table in &check.tables {
                let path = dir.join(format!("{}_{}.csv", check.name, table.name));
                fs::write(&path, table.to_csv())?;
                written.push(path);
            }
        }
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::Embedding;
    use crate::linalg::identity;

    fn scenario(coeffs: Vec<CMat>, checks: Vec<CheckName>) -> Scenario {
        let s = HilbertSpace::standard(coeffs[0].nrows());
        let fam = FormFamily::new(Embedding::identity_on(s), coeffs, 2.0).unwrap();
        Scenario {
            checks,
            ..Scenario::new(fam)
        }
    }

    #[test]
    fn empty_check_list_gives_empty_report() {
        let report = run_scenario(&scenario(vec![identity(2)], vec![])).unwrap();
        assert!(report.checks.is_empty());
        assert_eq!(report.exit_code(), 0);
        let v: Value = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(v["checks"], json!([]));
    }

    #[test]
    fn pole_family_skips_semigroup_checks() {
        let mut s = scenario(
            vec![identity(2), identity(2).scale(-1.0)],
            vec![CheckName::ResolventHolo, CheckName::Eq5, CheckName::Thm4a],
        );
        s.holomorphy.radius = Some(1.0);
        let report = run_scenario(&s).unwrap();
        assert_eq!(report.check(CheckName::ResolventHolo).unwrap().status, Status::Fail);
        assert!(report.check(CheckName::ResolventHolo).unwrap().witness.is_some());
        for name in [CheckName::Eq5, CheckName::Thm4a] {
            let c = report.check(name).unwrap();
            assert_eq!(c.status, Status::Skip);
            assert_eq!(c.reason.as_deref(), Some("prerequisite failed: resolvent_holo"));
        }
        assert_eq!(report.exit_code(), 1);
        assert!(report.check(CheckName::UniformSector).is_none());
    }

    #[test]
    fn eq6_csv_sorted_by_n() {
        let mut s = scenario(vec![identity(2), identity(2).scale(0.1)], vec![CheckName::Eq6]);
        s.semigroup.n_list = vec![32, 8, 16];
        let report = run_scenario(&s).unwrap();
        let table = &report.check(CheckName::Eq6).unwrap().tables[0];
        let csv = table.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("n,sup_error,bound,margin"));
        let ns: Vec<&str> = lines.map(|l| l.split(',').next().unwrap()).collect();
        assert_eq!(ns, ["8", "16", "32"]);
    }

    #[test]
    fn report_is_deterministic() {
        let mut rng = Sampler::new(1);
        let s = scenario(
            vec![identity(3).scale(2.0), rng.matrix(3).scale(0.1)],
            CheckName::ALL.to_vec(),
        );
        let a = run_scenario(&s).unwrap();
        let b = run_scenario(&s).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        assert!(a.passed, "{}", a.to_json());
    }
}
