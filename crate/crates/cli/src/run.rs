//! Running an analysis and assembling its report bundle.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use subadditive::invariants::{
    accepted_equivalence, check_accepted_identities, check_lemmas, delta_report, elasticity_report,
    rho_infinite_detect, Acceptance, DeltaReport, ElasticityReport, UnionsProfile,
};
use subadditive::oracle::{oracle_summary, OracleBudget};
use subadditive::structure::{
    certify_growth, certify_period, certify_structure, check_aap_corollary, check_upper_reduction,
    verify_key_periodicity, Refusal,
};
use subadditive::{ExtRat, LengthSystem, Members, NatSet};

use crate::spec::{AnalysisSpec, Task};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Refused,
    Error,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskOutcome {
    pub task: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    pub files: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    pub k_horizon: u64,
    pub exact: Option<bool>,
    pub tasks: Vec<TaskOutcome>,
    pub exit_code: i32,
}

/// A certificate as written to disk.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub version: String,
    pub kind: String,
    pub horizon: u64,
    pub certificate: T,
}

impl<T: Serialize> Envelope<T> {
    fn render(kind: &str, horizon: u64, certificate: T) -> String {
        pretty(&Envelope {
            version: VERSION.to_string(),
            kind: kind.to_string(),
            horizon,
            certificate,
        })
    }
}

/// Every output file by name, plus the summary report.
#[derive(Clone, Debug)]
pub struct Bundle {
    pub files: BTreeMap<String, String>,
    pub report: Report,
}

impl Bundle {
    pub fn exit_code(&self) -> i32 {
        self.report.exit_code
    }

    pub fn write_to(&self, dir: &std::path::Path) -> std::io::Result<()> {
        std::fs::create_dir_all(dir)?;
        for (name, body) in &self.files {
            std::fs::write(dir.join(name), body)?;
        }
        Ok(())
    }
}

pub fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// Shared intermediate results of one run.
struct Context {
    sys: LengthSystem,
    members: Members,
    profile: UnionsProfile,
    elasticity: ElasticityReport,
}

struct Output {
    status: Status,
    message: Option<String>,
    files: Vec<(String, String)>,
    invariants: Vec<(String, Value)>,
}

impl Output {
    fn ok() -> Self {
        Output {
            status: Status::Ok,
            message: None,
            files: Vec::new(),
            invariants: Vec::new(),
        }
    }

    fn error(msg: impl Into<String>) -> Self {
        Output {
            status: Status::Error,
            message: Some(msg.into()),
            ..Output::ok()
        }
    }

    fn refused(r: &Refusal) -> Self {
        Output {
            status: Status::Refused,
            message: Some(r.to_string()),
            ..Output::ok()
        }
    }

    fn file(mut self, name: &str, body: String) -> Self {
        self.files.push((name.to_string(), body));
        self
    }

    fn invariant(mut self, key: &str, value: Value) -> Self {
        self.invariants.push((key.to_string(), value));
        self
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn delta_json(d: &DeltaReport, wp: u64) -> Value {
    json!({
        "wp": wp,
        "delta": d.delta_min,
        "delta_prime": d.delta_prime(),
        "gcd_delta": d.gcd_delta,
        "delta_family": d.delta_family,
        "delta_union": d.delta_union,
        "stabilized": d.stabilized,
    })
}

fn run_delta(cx: &Context) -> Output {
    let d = match delta_report(&cx.members, &cx.profile) {
        Ok(d) => d,
        Err(e) => return Output::error(e.to_string()),
    };
    let wp = cx.sys.wp();
    let out = Output::ok().invariant("delta", delta_json(&d, wp));
    if !cx.profile.is_exact() {
        return out;
    }
    let checks = check_lemmas(&cx.profile, &cx.members, &d, &cx.elasticity, wp);
    let passed = checks.passed();
    let out = out.invariant("lemma_checks", to_value(&checks));
    if passed {
        out
    } else {
        Output {
            status: Status::Error,
            message: Some(format!("{} identity violations", checks.violations.len())),
            ..out
        }
    }
}

fn run_elasticity(cx: &Context) -> Output {
    let e = &cx.elasticity;
    let verdict = rho_infinite_detect(&cx.sys, &cx.members);
    let mut body = json!({
        "rho": e.rho,
        "lambda": e.lambda,
        "accepted": e.accepted,
        "witness": e.witness,
        "observed": e.observed,
        "infinite": verdict,
    });
    let out = Output::ok();
    if accepted_rho(e).is_some() && cx.profile.is_exact() {
        let ids = match check_accepted_identities(&cx.profile, e) {
            Ok(r) => r,
            Err(err) => return Output::error(err.to_string()),
        };
        let eq = accepted_equivalence(&cx.profile, e);
        body["accepted_identities"] = to_value(&ids);
        body["equivalence"] = to_value(&eq);
        if !ids.passed() || !eq.consistent() {
            return Output {
                status: Status::Error,
                message: Some("accepted-elasticity identities fail".into()),
                ..out.invariant("elasticity", body)
            };
        }
    }
    out.invariant("elasticity", body)
}

fn run_structure(cx: &Context) -> Output {
    let h = cx.profile.horizon();
    match certify_structure(&cx.profile) {
        Ok(cert) => {
            let corollary = check_aap_corollary(&cx.profile, &cert);
            let reduction = if cert.trivial {
                None
            } else {
                check_upper_reduction(&cx.profile, cert.d)
            };
            let extra = json!({
                "aap_bound": corollary.as_ref().ok(),
                "aap_first_failure": corollary.as_ref().err(),
                "upper_reduction": reduction,
            });
            Output::ok()
                .file("structure.json", Envelope::render("structure", h, &cert))
                .invariant("structure", extra)
        }
        Err(r) => Output::refused(&r).invariant("structure_refusal", to_value(&r)),
    }
}

fn accepted_rho(e: &ElasticityReport) -> Option<ExtRat> {
    (e.accepted == Acceptance::Yes && e.rho.is_finite() && !e.rho.is_zero()).then_some(e.rho)
}

fn run_period(cx: &Context, window: u64, i_max: usize) -> Output {
    let h = cx.profile.horizon();
    let cert = match certify_period(&cx.profile, window, accepted_rho(&cx.elasticity)) {
        Ok(c) => c,
        Err(r) => return Output::refused(&r).invariant("period_refusal", to_value(&r)),
    };
    let mut out = Output::ok().file("period.json", Envelope::render("period", h, &cert));
    if accepted_rho(&cx.elasticity).is_some() {
        match verify_key_periodicity(&cx.profile, &cx.elasticity, i_max) {
            Ok(key) => out = out.file("key_periodicity.json", Envelope::render("key_periodicity", h, &key)),
            Err(r) => out = out.invariant("key_periodicity_refusal", to_value(&r)),
        }
    }
    out
}

fn run_growth(cx: &Context) -> Output {
    match certify_growth(&cx.profile) {
        Ok(cert) => Output::ok().file("growth.json", Envelope::render("growth", cx.profile.horizon(), &cert)),
        Err(r) => Output::refused(&r).invariant("growth_refusal", to_value(&r)),
    }
}

#[derive(Serialize)]
struct OracleComparison {
    k_max: u64,
    agree: bool,
    compared: u64,
    mismatches: Vec<String>,
}

fn sorted(mut v: Vec<NatSet>) -> Vec<NatSet> {
    v.sort();
    v.dedup();
    v
}

fn run_oracle(cx: &Context, spec: &AnalysisSpec) -> Output {
    let Some(desc) = spec.description() else {
        return Output::refused(&refusal("the oracle does not interpret per-atom weights on block monoids"));
    };
    if !cx.profile.is_exact() {
        return Output::refused(&refusal("the profile is truncated; the oracle only enumerates exact families"));
    }
    let h = cx.profile.horizon();
    let budget = OracleBudget {
        max_k: h.max(OracleBudget::default().max_k),
        ..OracleBudget::default()
    };
    let o = match oracle_summary(&desc, h, &budget) {
        Ok(o) => o,
        Err(e) => return Output::refused(&refusal(e.to_string())),
    };
    let mut mismatches = Vec::new();
    let mut compared = 0;
    let mut cmp = |what: String, a: String, b: String| {
        compared += 1;
        if a != b {
            mismatches.push(format!("{what}: engine {a}, oracle {b}"));
        }
    };
    for k in 0..=h {
        cmp(format!("U_{k}"), cx.profile.unions(k).to_string(), o.unions[k as usize].to_string());
    }
    let engine_members = sorted(cx.members.sets.clone());
    let oracle_members = sorted(o.members.clone());
    cmp(
        "member count".into(),
        engine_members.len().to_string(),
        oracle_members.len().to_string(),
    );
    for (a, b) in engine_members.iter().zip(&oracle_members) {
        cmp("member".into(), a.to_string(), b.to_string());
    }
    match delta_report(&cx.members, &cx.profile) {
        Ok(d) => {
            cmp("Δ(𝓛)".into(), d.delta_family.to_string(), o.delta_family.to_string());
            cmp("Δ_∪".into(), d.delta_union.to_string(), o.delta_union.to_string());
            cmp("δ".into(), d.delta_min.to_string(), o.delta.to_string());
            cmp("gcd Δ".into(), d.gcd_delta.to_string(), o.gcd_delta.to_string());
        }
        Err(e) => cmp("delta report".into(), e.to_string(), "consistent".into()),
    }
    cmp("℘".into(), cx.sys.wp().to_string(), o.wp.to_string());
    let report = OracleComparison {
        k_max: h,
        agree: mismatches.is_empty(),
        compared,
        mismatches,
    };
    let out = Output::ok().file("oracle.json", pretty(&report));
    if report.agree {
        out
    } else {
        Output {
            status: Status::Error,
            message: Some(format!("{} disagreements with the oracle", report.mismatches.len())),
            ..out
        }
    }
}

fn refusal(reason: impl Into<String>) -> Refusal {
    Refusal {
        reason: reason.into(),
        best_range: None,
        first_violation: None,
    }
}

fn context(spec: &AnalysisSpec) -> Result<Context, String> {
    let sys = spec.system().map_err(|e| e.to_string())?;
    let h = spec.k_horizon;
    let members = sys.members_up_to(h).map_err(|e| e.to_string())?;
    let profile = UnionsProfile::from_members(&members, h, spec.i_max());
    let elasticity = elasticity_report(&sys, &members);
    Ok(Context {
        sys,
        members,
        profile,
        elasticity,
    })
}

fn run_task(task: Task, cx: &Context, spec: &AnalysisSpec) -> Output {
    match task {
        Task::Profile => Output::ok().file("profile.csv", cx.profile.to_csv()),
        Task::Delta => run_delta(cx),
        Task::Elasticity => run_elasticity(cx),
        Task::Structure => run_structure(cx),
        Task::Period => run_period(cx, spec.window(), spec.i_max()),
        Task::Growth => run_growth(cx),
        Task::OracleCheck => run_oracle(cx, spec),
    }
}

/// Runs every task of `spec`. Tasks run in parallel; the bundle is
/// assembled in task order, so the output does not depend on scheduling.
pub fn run(spec: &AnalysisSpec) -> Bundle {
    let (outputs, exact): (Vec<Output>, Option<bool>) = match context(spec) {
        Ok(cx) => (
            spec.tasks.par_iter().map(|&t| run_task(t, &cx, spec)).collect(),
            Some(cx.profile.is_exact()),
        ),
        Err(msg) => (spec.tasks.iter().map(|_| Output::error(msg.clone())).collect(), None),
    };
    let mut files = BTreeMap::new();
    let mut invariants = serde_json::Map::new();
    let mut tasks = Vec::new();
    for (task, out) in spec.tasks.iter().zip(outputs) {
        let mut names: Vec<String> = out.files.iter().map(|(n, _)| n.clone()).collect();
        if !out.invariants.is_empty() {
            names.push("invariants.json".into());
        }
        files.extend(out.files);
        invariants.extend(out.invariants);
        tasks.push(TaskOutcome {
            task: task.name().to_string(),
            status: out.status,
            message: out.message,
            files: names,
        });
    }
    if !invariants.is_empty() {
        let mut doc = serde_json::Map::new();
        doc.insert("version".into(), json!(VERSION));
        doc.insert("k_horizon".into(), json!(spec.k_horizon));
        doc.extend(invariants);
        files.insert("invariants.json".into(), pretty(&doc));
    }
    let exit_code = if tasks.iter().any(|t| t.status == Status::Error) {
        1
    } else if tasks.iter().any(|t| t.status == Status::Refused) {
        2
    } else {
        0
    };
    let report = Report {
        version: VERSION.to_string(),
        k_horizon: spec.k_horizon,
        exact,
        tasks,
        exit_code,
    };
    files.insert("report.json".into(), pretty(&report));
    Bundle { files, report }
}
