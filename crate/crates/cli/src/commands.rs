//! Payload schemas and dispatch, one handler per subcommand.

use fractspec_core::fourier::{evaluate, evaluate_at, sweep, verify_nu_equals_mu, verify_symmetric_example, SweepRow};
use fractspec_core::hadamard::{
    build_product_form, check_hadamard, checked_summary, search_companion, unitarity_deviation, verify_certificate,
    CertificateFile, HadamardOutcome,
};
use fractspec_core::spectra::{
    canonical_spectrum, decompose_spectrum, even_superset_candidates, is_orthogonal, max_orthogonal_family,
    odd_superset_candidates, orthogonality_bound, q_function, spectrality_decision, OrthogonalityVerdict, ZeroOracle,
};
use fractspec_core::{CertifiedComplex, DigitSet, Error, FrequencySet, MeasureSpec, Rational};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::report::Status;

/// Result of a successful dispatch.
pub struct Outcome {
    pub status: Status,
    pub result: Value,
    /// Plot data, for commands that can emit CSV.
    pub rows: Option<Vec<SweepRow>>,
}

pub enum Failure {
    /// Malformed JSON or a payload that does not fit the schema.
    Payload(serde_json::Error),
    Core(Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Handled = std::result::Result<Outcome, Failure>;

/// Settings shared by every command.
pub struct Context {
    pub tol: f64,
}

fn parse<T: DeserializeOwned>(text: &str) -> std::result::Result<T, Failure> {
    serde_json::from_str(text).map_err(Failure::Payload)
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn done(status: Status, result: Value) -> Handled {
    Ok(Outcome {
        status,
        result,
        rows: None,
    })
}

fn certified(v: &CertifiedComplex) -> Value {
    json!({
        "re": v.value.re,
        "im": v.value.im,
        "abs": v.abs(),
        "error_bound": v.error_bound,
    })
}

fn positive_tol(tol: f64) -> std::result::Result<f64, Failure> {
    if tol > 0.0 && tol.is_finite() {
        Ok(tol)
    } else {
        Err(Failure::Usage(format!("tolerance {tol} must be positive and finite")))
    }
}

pub fn run(command: &str, text: &str, ctx: &Context) -> Handled {
    match command {
        "check-hadamard" => check_hadamard_cmd(text),
        "search-companion" => search_companion_cmd(text),
        "build-product-form" => build_product_form_cmd(text),
        "verify-certificate" => verify_certificate_cmd(text),
        "eval-ft" => eval_ft(text, ctx),
        "sweep-ft" => sweep_ft(text, ctx),
        "zero-member" => zero_member(text),
        "check-orthogonal" => check_orthogonal(text),
        "q-function" => q_function_cmd(text, ctx),
        "max-family" => max_family(text),
        "decompose" => decompose(text),
        "decide-spectral" => decide_spectral(text),
        "verify-nu-mu" => verify_nu_mu(text, ctx),
        "verify-symmetric" => verify_symmetric(text, ctx),
        other => Err(Failure::Usage(format!("unknown command {other}"))),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TriplePayload {
    p: u64,
    digits: DigitSet,
    labels: DigitSet,
}

fn check_hadamard_cmd(text: &str) -> Handled {
    let t: TriplePayload = parse(text)?;
    let outcome = check_hadamard(t.p, &t.digits, &t.labels)?;
    let deviation = unitarity_deviation(t.p, &t.digits, &t.labels)?;
    let (status, detail) = match &outcome {
        HadamardOutcome::Verified(cert) => (Status::True, json!({"certificate": to_value(cert)})),
        HadamardOutcome::Failed(f) => (Status::False, json!({"failure": to_value(f)})),
    };
    let mut result = json!({"hadamard": outcome.is_verified(), "unitarity_deviation": deviation});
    merge(&mut result, detail);
    done(status, result)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CompanionPayload {
    p: u64,
    digits: DigitSet,
    label_bound: u64,
}

fn search_companion_cmd(text: &str) -> Handled {
    let c: CompanionPayload = parse(text)?;
    let found = search_companion(c.p, &c.digits, c.label_bound)?;
    let status = Status::from_bool(found.is_some());
    done(
        status,
        json!({"found": found.is_some(), "certificate": to_value(&found)}),
    )
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ProductFormPayload {
    m: u32,
    #[serde(rename = "N")]
    n_blocks: u32,
    p_prime: u32,
}

fn build_product_form_cmd(text: &str) -> Handled {
    let b: ProductFormPayload = parse(text)?;
    let cert = build_product_form(b.m, b.n_blocks, b.p_prime)?;
    let summary = checked_summary(&cert.checked);
    done(
        Status::True,
        json!({"verified": true, "checked_summary": to_value(&summary), "certificate": to_value(&cert)}),
    )
}

/// Accepts a bare certificate or a whole report that carries one.
fn verify_certificate_cmd(text: &str) -> Handled {
    let file: CertificateFile = match parse(text) {
        Ok(f) => f,
        Err(direct) => {
            let embedded = serde_json::from_str::<Value>(text)
                .ok()
                .and_then(|v| v.get("result")?.get("certificate").cloned())
                .filter(|c| !c.is_null());
            match embedded {
                Some(c) => serde_json::from_value(c).map_err(Failure::Payload)?,
                None => return Err(direct),
            }
        }
    };
    let verdict = verify_certificate(&file)?;
    done(Status::from_bool(verdict.verified()), to_value(&verdict))
}

/// A number is a floating point frequency; a string is an exact rational.
#[derive(Deserialize)]
#[serde(untagged)]
enum Point {
    Float(f64),
    Exact(Rational),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EvalPayload {
    spec: MeasureSpec,
    xi: Point,
    tol: Option<f64>,
}

fn eval_ft(text: &str, ctx: &Context) -> Handled {
    let e: EvalPayload = parse(text)?;
    let tol = positive_tol(e.tol.unwrap_or(ctx.tol))?;
    let (xi, value) = match &e.xi {
        Point::Float(x) => (json!(x), evaluate(&e.spec, *x, tol)),
        Point::Exact(q) => (to_value(q), evaluate_at(&e.spec, q, tol)),
    };
    let mut result = json!({"xi": xi, "tol": tol});
    merge(&mut result, certified(&value));
    done(Status::True, result)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepPayload {
    spec: MeasureSpec,
    from: f64,
    to: f64,
    points: usize,
    tol: Option<f64>,
}

fn sweep_ft(text: &str, ctx: &Context) -> Handled {
    let s: SweepPayload = parse(text)?;
    let tol = positive_tol(s.tol.unwrap_or(ctx.tol))?;
    let rows = sweep(&s.spec, s.from, s.to, s.points, tol)?;
    let values: Vec<Value> = rows
        .iter()
        .map(|r| {
            let mut v = json!({"xi": r.xi});
            merge(&mut v, certified(&r.value));
            v
        })
        .collect();
    let max_error = rows.iter().map(|r| r.value.error_bound).fold(0.0, f64::max);
    Ok(Outcome {
        status: Status::True,
        result: json!({"points": rows.len(), "tol": tol, "max_error_bound": max_error, "rows": values}),
        rows: Some(rows),
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MemberPayload {
    spec: MeasureSpec,
    x: Rational,
}

fn zero_member(text: &str) -> Handled {
    let m: MemberPayload = parse(text)?;
    let oracle = ZeroOracle::new(&m.spec);
    let (membership, evidence) = oracle.decide(&m.x);
    let status = match membership {
        fractspec_core::spectra::Membership::Zero => Status::True,
        fractspec_core::spectra::Membership::NonZero => Status::False,
        fractspec_core::spectra::Membership::Indeterminate => Status::Indeterminate,
    };
    done(
        status,
        json!({"x": to_value(&m.x), "membership": to_value(&membership), "evidence": to_value(&evidence)}),
    )
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct OrthogonalPayload {
    spec: MeasureSpec,
    lam: FrequencySet,
}

fn check_orthogonal(text: &str) -> Handled {
    let o: OrthogonalPayload = parse(text)?;
    let verdict = is_orthogonal(&o.spec, &o.lam);
    let status = match verdict {
        OrthogonalityVerdict::Orthogonal => Status::True,
        OrthogonalityVerdict::NotOrthogonal { .. } => Status::False,
        OrthogonalityVerdict::Indeterminate { .. } => Status::Indeterminate,
    };
    let mut result = json!({"size": o.lam.len()});
    merge(&mut result, to_value(&verdict));
    done(status, result)
}

/// `{p, labels, depth}` generating `canonical_spectrum`.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CanonicalPayload {
    p: u64,
    labels: DigitSet,
    depth: u32,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct QPayload {
    spec: MeasureSpec,
    lam: Option<FrequencySet>,
    canonical: Option<CanonicalPayload>,
    xi: f64,
    tol: Option<f64>,
}

fn q_function_cmd(text: &str, ctx: &Context) -> Handled {
    let q: QPayload = parse(text)?;
    let tol = positive_tol(q.tol.unwrap_or(ctx.tol))?;
    let lam = match (q.lam, q.canonical) {
        (Some(lam), None) => lam,
        (None, Some(c)) => canonical_spectrum(c.p, &c.labels, c.depth)?,
        _ => return Err(Failure::Usage("give exactly one of \"lam\" and \"canonical\"".into())),
    };
    let v = q_function(&q.spec, &lam, q.xi, tol)?;
    done(
        Status::True,
        json!({"xi": q.xi, "size": lam.len(), "tol": tol, "value": v.value, "error_bound": v.error_bound}),
    )
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct OddWindow {
    s: u32,
    window: Rational,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EvenWindow {
    s: u32,
    p: u32,
    window: Rational,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyPayload {
    spec: MeasureSpec,
    candidates: Option<FrequencySet>,
    odd_superset: Option<OddWindow>,
    even_superset: Option<EvenWindow>,
}

fn max_family(text: &str) -> Handled {
    let f: FamilyPayload = parse(text)?;
    let candidates = match (f.candidates, f.odd_superset, f.even_superset) {
        (Some(c), None, None) => c,
        (None, Some(o), None) => odd_superset_candidates(o.s, &o.window)?,
        (None, None, Some(e)) => even_superset_candidates(e.s, e.p, &e.window)?,
        _ => {
            return Err(Failure::Usage(
                "give exactly one of \"candidates\", \"odd_superset\" and \"even_superset\"".into(),
            ))
        }
    };
    let family = max_orthogonal_family(&f.spec, &candidates)?;
    let recheck = is_orthogonal(&f.spec, &family.family).is_orthogonal();
    let bound = match &f.spec {
        MeasureSpec::Alternating(a) if a.period == 1 => a
            .rho
            .recip()
            .ok()
            .and_then(|r| r.to_i64())
            .and_then(|p| orthogonality_bound(p as u64, a.digit_count as u64)),
        _ => None,
    };
    done(
        Status::from_bool(recheck),
        json!({
            "candidates": candidates.len(),
            "size": family.size,
            "family": to_value(&family.family),
            "explored_nodes": family.explored_nodes,
            "family_orthogonal": recheck,
            "orthogonality_bound": bound,
        }),
    )
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DecomposePayload {
    lam: FrequencySet,
    b1: Rational,
    c: u64,
    q1: u64,
    gamma1: u64,
}

fn decompose(text: &str) -> Handled {
    let d: DecomposePayload = parse(text)?;
    let r = decompose_spectrum(&d.lam, &d.b1, d.c, d.q1, d.gamma1)?;
    done(Status::True, to_value(&r))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SpectralPayload {
    m: u32,
    #[serde(rename = "N")]
    n_blocks: u32,
    rho: Rational,
}

fn decide_spectral(text: &str) -> Handled {
    let s: SpectralPayload = parse(text)?;
    let d = spectrality_decision(s.m, s.n_blocks, &s.rho)?;
    let verdict = if d.spectral { "spectral" } else { "not_spectral" };
    done(
        Status::from_bool(d.spectral),
        json!({"decision": verdict, "reason": d.reason}),
    )
}

fn default_samples() -> usize {
    200
}

fn default_window() -> f64 {
    10.0
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NuMuPayload {
    m: u32,
    #[serde(rename = "N")]
    n_blocks: u32,
    rho: Rational,
    #[serde(default = "default_samples")]
    samples: usize,
    #[serde(default = "default_window")]
    window: f64,
    tol: Option<f64>,
    #[serde(default)]
    seed: u64,
}

fn verify_nu_mu(text: &str, ctx: &Context) -> Handled {
    let v: NuMuPayload = parse(text)?;
    let tol = positive_tol(v.tol.unwrap_or(ctx.tol))?;
    let report = verify_nu_equals_mu(v.m, v.n_blocks, &v.rho, v.samples, v.window, tol, v.seed)?;
    done(Status::from_bool(report.pass), to_value(&report))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SymmetricPayload {
    n: u32,
    rho: Rational,
    #[serde(default = "default_samples")]
    samples: usize,
    #[serde(default = "default_window")]
    window: f64,
    tol: Option<f64>,
    #[serde(default)]
    seed: u64,
}

fn verify_symmetric(text: &str, ctx: &Context) -> Handled {
    let v: SymmetricPayload = parse(text)?;
    let tol = positive_tol(v.tol.unwrap_or(ctx.tol))?;
    let report = verify_symmetric_example(v.n, &v.rho, v.samples, v.window, tol, v.seed)?;
    done(Status::from_bool(report.pass), to_value(&report))
}

/// Appends the fields of `extra` (an object) to `target`.
fn merge(target: &mut Value, extra: Value) {
    if let (Value::Object(t), Value::Object(e)) = (target, extra) {
        t.extend(e);
    }
}
