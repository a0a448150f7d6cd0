//! `fractspec`: JSON in, deterministic JSON (or CSV) report out.
//!
//! Exit status: 0 true, 1 false, 2 invalid input, 3 indeterminate.

mod commands;
mod report;

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use commands::{Context, Failure, Outcome};
use fractspec_core::Error;
use report::Status;

#[derive(Parser)]
#[command(name = "fractspec", version, about = "Spectral computations for fractal measures")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Worker threads for parallel kernels (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Default tolerance for certified evaluations; a payload "tol" wins.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct Payload {
    /// Inline JSON, `@path` to read a file, or `-` (or nothing) for stdin.
    payload: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Exact Hadamard-triple check of {p, digits, labels}.
    CheckHadamard(Payload),
    /// Search labels in [0, label_bound) completing {p, digits}.
    SearchCompanion(Payload),
    /// Two-stage product-form certificate for {m, N, p_prime}.
    BuildProductForm(Payload),
    /// Re-verify a triple or product-form certificate.
    VerifyCertificate(Payload),
    /// Certified Fourier transform of {spec, xi, tol?}.
    EvalFt(Payload),
    /// Certified transform on an equally spaced grid {spec, from, to, points, tol?}.
    SweepFt(Payload),
    /// Whether {x} is a zero of the transform of {spec}.
    ZeroMember(Payload),
    /// Orthogonality of exponentials {spec, lam}.
    CheckOrthogonal(Payload),
    /// Sum of squared transforms over a frequency set.
    QFunction(Payload),
    /// Largest orthogonal subfamily of a candidate window.
    MaxFamily(Payload),
    /// Split a frequency set into residue cells.
    Decompose(Payload),
    /// Spectrality of the alternating measure {m, N, rho}.
    DecideSpectral(Payload),
    /// Compare the alternating transform with its self-similar counterpart.
    VerifyNuMu(Payload),
    /// Phase identity for the symmetric alternating measure.
    VerifySymmetric(Payload),
}

impl Command {
    fn split(&self) -> (&'static str, &Payload) {
        match self {
            Command::CheckHadamard(p) => ("check-hadamard", p),
            Command::SearchCompanion(p) => ("search-companion", p),
            Command::BuildProductForm(p) => ("build-product-form", p),
            Command::VerifyCertificate(p) => ("verify-certificate", p),
            Command::EvalFt(p) => ("eval-ft", p),
            Command::SweepFt(p) => ("sweep-ft", p),
            Command::ZeroMember(p) => ("zero-member", p),
            Command::CheckOrthogonal(p) => ("check-orthogonal", p),
            Command::QFunction(p) => ("q-function", p),
            Command::MaxFamily(p) => ("max-family", p),
            Command::Decompose(p) => ("decompose", p),
            Command::DecideSpectral(p) => ("decide-spectral", p),
            Command::VerifyNuMu(p) => ("verify-nu-mu", p),
            Command::VerifySymmetric(p) => ("verify-symmetric", p),
        }
    }
}

fn read_payload(arg: Option<&str>) -> io::Result<String> {
    match arg {
        Some(path) if path.starts_with('@') => fs::read_to_string(&path[1..]),
        Some("-") | None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
        Some(inline) => Ok(inline.to_string()),
    }
}

fn failure_report(failure: &Failure) -> (Status, Value) {
    match failure {
        Failure::Payload(e) => (
            Status::Invalid,
            json!({
                "kind": "payload",
                "message": e.to_string(),
                "line": e.line(),
                "column": e.column(),
            }),
        ),
        Failure::Core(Error::Indeterminate(pair)) => (
            Status::Indeterminate,
            json!({
                "kind": "indeterminate",
                "message": failure_message(failure),
                "left": pair.left.to_string(),
                "right": pair.right.to_string(),
                "difference": pair.difference.to_string(),
            }),
        ),
        Failure::Core(_) => (
            Status::Invalid,
            json!({"kind": "domain", "message": failure_message(failure)}),
        ),
        Failure::Usage(_) => (
            Status::Invalid,
            json!({"kind": "usage", "message": failure_message(failure)}),
        ),
    }
}

fn failure_message(failure: &Failure) -> String {
    match failure {
        Failure::Payload(e) => e.to_string(),
        Failure::Core(e) => e.to_string(),
        Failure::Usage(m) => m.clone(),
    }
}

fn csv_rows(outcome: &Outcome) -> Result<String, Failure> {
    let Some(rows) = &outcome.rows else {
        return Err(Failure::Usage(
            "this command has no CSV output; use --format json".into(),
        ));
    };
    let mut w = csv::Writer::from_writer(Vec::new());
    let io_err = |e: csv::Error| Failure::Usage(format!("csv: {e}"));
    w.write_record(["xi", "re", "im", "abs", "error_bound"])
        .map_err(io_err)?;
    for r in rows {
        let v = &r.value;
        w.write_record([r.xi, v.value.re, v.value.im, v.abs(), v.error_bound].map(|f| format!("{f:?}")))
            .map_err(io_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::Usage(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn emit(text: &str, output: Option<&Path>) -> io::Result<()> {
    match output {
        Some(path) => fs::write(path, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, payload_arg) = cli.command.split();

    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("fractspec: cannot configure {n} threads: {e}");
            return ExitCode::from(Status::Invalid.exit_code());
        }
    }

    let (text, payload_bytes) = match read_payload(payload_arg.payload.as_deref()) {
        Ok(t) => {
            let bytes = t.clone().into_bytes();
            (Ok(t), bytes)
        }
        Err(e) => (Err(e), Vec::new()),
    };

    let ctx = Context { tol: cli.tol };
    let outcome = match text {
        Ok(t) => commands::run(name, &t, &ctx),
        Err(e) => Err(Failure::Usage(format!("cannot read payload: {e}"))),
    };

    let csv = match (&outcome, cli.format) {
        (Ok(o), Format::Csv) => Some(csv_rows(o)),
        _ => None,
    };

    let (status, rendered) = match (outcome, csv) {
        (Ok(_), Some(Ok(table))) => (Status::True, table),
        (Ok(o), None) => (
            o.status,
            report::render(&report::envelope(name, &payload_bytes, o.status, "result", o.result)),
        ),
        (Err(f), _) | (Ok(_), Some(Err(f))) => {
            let (status, body) = failure_report(&f);
            eprintln!("fractspec {name}: {}", failure_message(&f));
            (
                status,
                report::render(&report::envelope(name, &payload_bytes, status, "error", body)),
            )
        }
    };

    if let Err(e) = emit(&rendered, cli.output.as_deref()) {
        eprintln!("fractspec: cannot write report: {e}");
        return ExitCode::from(Status::Invalid.exit_code());
    }
    ExitCode::from(status.exit_code())
}
