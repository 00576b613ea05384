//! Executes a parsed scenario and assembles its report.

use serde::Serialize;
use serde_json::{json, Value};

use dsk_core::audit::AuditConfig;
use dsk_core::construction::{certify_construction, construct};
use dsk_core::inner::{interpolating_check, theta_lower_certificate, CertificateError, DiscFunction};
use dsk_core::riesz::{level_set_scan, split, RieszError};
use dsk_core::shift::{
    is_power_bounded, lemmaomega_detect, power_norm, similarity_check, spectral_annulus, tshift_report,
    weight_bounds, Evidence, ShiftError,
};
use dsk_core::{Complex64, DomainError};

use crate::scenario::{Scenario, Task};
use crate::RunError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Refuted,
    HypothesisNotMet,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::Refuted => 2,
            Status::HypothesisNotMet => 3,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub status: Status,
    pub message: Option<String>,
    pub result: Value,
    /// Evidence rows for the shift kinds.
    pub evidence: Vec<Evidence>,
}

impl Outcome {
    fn ok(result: Value) -> Self {
        Outcome { status: Status::Ok, message: None, result, evidence: Vec::new() }
    }

    fn failed(status: Status, message: String, result: Value) -> Self {
        Outcome { status, message: Some(message), result, evidence: Vec::new() }
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("results serialize")
}

fn pair(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn usage(e: impl std::fmt::Display) -> RunError {
    RunError::Usage(e.to_string())
}

fn certificate_failure(e: CertificateError) -> Result<Outcome, RunError> {
    match e {
        CertificateError::Refuted { kind, lower_bound, witness, modulus } => {
            let msg = format!("{kind:?} bound {lower_bound:e} refuted at {witness}");
            Ok(Outcome::failed(
                Status::Refuted,
                msg,
                json!({ "kind": kind, "lower_bound": lower_bound, "witness": pair(witness), "modulus": modulus }),
            ))
        }
        CertificateError::Precondition(m) => Ok(Outcome::failed(Status::HypothesisNotMet, m, Value::Null)),
        other => Err(usage(other)),
    }
}

fn shift_failure(e: ShiftError) -> Result<Outcome, RunError> {
    match e {
        ShiftError::Domain(d) => Err(usage(d)),
        other => Ok(Outcome::failed(Status::HypothesisNotMet, other.to_string(), Value::Null)),
    }
}

fn riesz_failure(e: RieszError) -> Result<Outcome, RunError> {
    match e {
        RieszError::Domain(_) | RieszError::Inner(_) | RieszError::InvalidCurve(_) => Err(usage(e)),
        RieszError::Conditioning { eigenvalue, distance } => Ok(Outcome::failed(
            Status::HypothesisNotMet,
            e.to_string(),
            json!({ "eigenvalue": pair(eigenvalue), "distance": distance }),
        )),
        other => Ok(Outcome::failed(Status::HypothesisNotMet, other.to_string(), Value::Null)),
    }
}

fn audit_config(s: &Scenario, samples: usize) -> AuditConfig {
    let mut cfg = AuditConfig::new(samples, s.seed);
    if let Some(tol) = s.tol {
        cfg.tau_cert = tol;
    }
    cfg
}

fn with_tol(f: &DiscFunction, tol: Option<f64>) -> DiscFunction {
    match (f, tol) {
        (DiscFunction::Blaschke { zeros, .. }, Some(t)) => DiscFunction::Blaschke { zeros: zeros.clone(), tol: t },
        _ => f.clone(),
    }
}

pub fn execute(s: &Scenario) -> Result<Outcome, RunError> {
    match &s.task {
        Task::InnerEval(p) => {
            let f = with_tol(&p.function, s.tol);
            f.validate().map_err(usage)?;
            let values = p
                .points
                .iter()
                .map(|&z| {
                    let v = if p.closed { f.eval_closed(z) } else { f.eval(z) }.map_err(usage)?;
                    Ok(json!({ "z": pair(z), "value": pair(v), "modulus": v.norm() }))
                })
                .collect::<Result<Vec<_>, RunError>>()?;
            Ok(Outcome::ok(json!({ "values": values })))
        }
        Task::ThetaCertificate(p) => {
            let cfg = audit_config(s, p.samples).with_injected(p.injected.clone());
            match theta_lower_certificate(&p.measure, &p.horodiscs, &cfg) {
                Ok(cert) => Ok(Outcome::ok(to_value(&cert))),
                Err(e) => certificate_failure(e),
            }
        }
        Task::LemmagConstruct(p) => {
            let n_max = p.n_max.unwrap_or(p.construction.contact_points.len());
            let out = construct(&p.construction, n_max).map_err(usage)?;
            let verdict = interpolating_check(&out.zeros);
            let cfg = audit_config(s, p.samples);
            match certify_construction(&out, p.c, &cfg) {
                Ok((theta, blaschke)) => Ok(Outcome::ok(json!({
                    "construction": to_value(&out),
                    "interpolation": to_value(&verdict),
                    "theta_certificate": to_value(&theta),
                    "blaschke_certificate": to_value(&blaschke),
                }))),
                Err(e) => certificate_failure(e),
            }
        }
        Task::ShiftAnalyze(p) => {
            let w = p.weight.canonical().map_err(usage)?;
            let norms: Vec<Value> = (1..=p.k_max)
                .map(|k| json!({ "k": k, "norm": finite_or_inf(power_norm(&w, k)) }))
                .collect();
            let (inf, sup) = weight_bounds(&w);
            let base = json!({
                "power_norms": norms,
                "power_bound": to_value(&is_power_bounded(&w)),
                "weight_inf": finite_or_inf(inf),
                "weight_sup": finite_or_inf(sup),
                "similarity": to_value(&similarity_check(&w)),
                "spectral_annulus": to_value(&spectral_annulus(&w)),
            });
            match lemmaomega_detect(&w, p.c, &p.radii) {
                Ok(report) => {
                    let mut result = base;
                    result["detection"] = to_value(&report);
                    let mut out = Outcome::ok(result);
                    out.evidence = report.evidence;
                    Ok(out)
                }
                Err(e) => {
                    let mut out = shift_failure(e)?;
                    out.result = base;
                    Ok(out)
                }
            }
        }
        Task::Tshift(p) => {
            let w = p.weight.canonical().map_err(usage)?;
            match tshift_report(&w, &p.function, p.c, p.budget) {
                Ok(report) => {
                    let mut out = Outcome::ok(to_value(&report));
                    out.evidence = report.evidence;
                    Ok(out)
                }
                Err(e) => shift_failure(e),
            }
        }
        Task::RieszSplit(p) => {
            let gamma = p.gamma.curve().map_err(usage)?;
            let gamma_prime = p.gamma_prime.curve().map_err(usage)?;
            let mut opts = p.options;
            if let Some(tol) = s.tol {
                opts.tau_split = tol;
            }
            match split(&p.matrix, &gamma, &gamma_prime, p.k, &opts) {
                Ok(r) => {
                    let mut v = to_value(&r);
                    v["kernel_dim"] = json!(r.kernel.ncols());
                    v["kernel_prime_dim"] = json!(r.kernel_prime.ncols());
                    Ok(Outcome::ok(v))
                }
                Err(e) => riesz_failure(e),
            }
        }
        Task::LevelSetScan(p) => {
            let m = match p.m.or_else(|| p.matrix.polynomial_bound()) {
                Some(m) => m,
                None => {
                    return Ok(Outcome::failed(
                        Status::HypothesisNotMet,
                        "no polynomial bound M is known for the matrix; pass `m`".into(),
                        Value::Null,
                    ))
                }
            };
            if !(p.c > 0.0 && m > 0.0 && p.k >= 1) {
                return Err(usage(DomainError::Parameter("need C, M > 0 and k ≥ 1".into())));
            }
            let scan = level_set_scan(&p.matrix, p.c, m, p.k, &p.grid);
            let mut v = to_value(&scan);
            v["m"] = json!(m);
            Ok(Outcome::ok(v))
        }
    }
}

/// JSON has no infinity; unbounded values are written as the string `"inf"`.
pub fn finite_or_inf(x: f64) -> Value {
    if x.is_infinite() && x > 0.0 {
        json!("inf")
    } else {
        json!(x)
    }
}

/// The report document: the scenario as run, the status and the results.
pub fn report(s: &Scenario, outcome: &Outcome) -> String {
    let mut doc = json!({
        "scenario": to_value(s),
        "status": outcome.status,
        "result": outcome.result,
    });
    if let Some(m) = &outcome.message {
        doc["message"] = json!(m);
    }
    let mut text = serde_json::to_string_pretty(&doc).expect("report serializes");
    text.push('\n');
    text
}

/// CSV text with `inf` written literally.
pub fn evidence_csv(rows: &[Evidence]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["r_j", "lhs", "rhs", "ratio", "verdict_flag"]).expect("in-memory write");
    for e in rows {
        w.write_record([e.r.to_string(), e.lhs.to_string(), e.rhs.to_string(), e.ratio.to_string(), e.verdict_flag().into()])
            .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii csv")
}
