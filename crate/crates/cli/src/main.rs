//! Command-line front end for the ghost-element verification toolkit.
//!
//! Every subcommand reruns its verification from scratch and reports through
//! a stable JSON envelope (`--json`) or short human lines.  Exit codes: 0 the
//! check passed, 1 it failed, 2 the request was unusable, 3 a size budget
//! refused the work.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ghostring::cert::{check as check_certificate, Certificate};
use ghostring::closure::ClosureError;
use ghostring::ecvec::{verify_vector_identities, ECVector, Window};
use ghostring::ghostmap::{non_evaluation_report, projection_family};
use ghostring::homs::{enumerate_homs, expected_hom_count, summarize};
use ghostring::parity::verify_parity_claim;
use ghostring::ring::verify_ring_identities;
use ghostring::sindi::{exhaustive_scan, fresh_state, run_random, structural_scan, SindiError};
use ghostring::span::SpanSolver;

fn parse_window(s: &str) -> Result<Window, String> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| format!("expected lo:hi, got {s:?}"))?;
    let lo: i64 = lo
        .trim()
        .parse()
        .map_err(|e| format!("bad lower bound {lo:?}: {e}"))?;
    let hi: i64 = hi
        .trim()
        .parse()
        .map_err(|e| format!("bad upper bound {hi:?}: {e}"))?;
    if lo > hi {
        return Err(format!("empty window {lo}:{hi}"));
    }
    if hi - lo > 256 {
        return Err(format!("window {lo}:{hi} is unreasonably wide"));
    }
    Ok(Window::new(lo, hi))
}

#[derive(Parser)]
#[command(name = "ghostring", version, about = "verification toolkit for the ghost-element obstruction")]
struct Cli {
    /// worker threads for parallel scans (0 = all cores)
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// audit the 32-element base ring exhaustively
    VerifyRing(VerifyRingArgs),
    /// run the full membership-obstruction claim with witnesses
    VerifyClaim(VerifyClaimArgs),
    /// enumerate window homomorphisms by two independent algorithms
    EnumHoms(EnumHomsArgs),
    /// show the limit functional evading evaluation on a window
    GhostDemo(GhostDemoArgs),
    /// search for a locally quadratic set with no global witness
    Sindi(SindiArgs),
    /// re-check a certificate file from scratch
    CheckCert(CheckCertArgs),
}

#[derive(Args)]
struct VerifyRingArgs {
    /// emit the JSON envelope instead of human lines
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct VerifyClaimArgs {
    /// index range audited, as lo:hi
    #[arg(long, default_value = "-6:6", value_parser = parse_window, allow_hyphen_values = true)]
    range: Window,
    /// maximum terms in each random member combination
    #[arg(long, default_value_t = 8)]
    sum_len: usize,
    /// number of random member combinations
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// window the constructive witnesses are solved on, as lo:hi
    #[arg(long, default_value = "-5:5", value_parser = parse_window, allow_hyphen_values = true)]
    witness_window: Window,
    /// puncture indices to witness, comma separated
    #[arg(long, default_value = "-1,0,1,2", value_delimiter = ',', allow_hyphen_values = true)]
    witness_indices: Vec<i64>,
    /// directory to write witness certificate files into
    #[arg(long)]
    certs_dir: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct EnumHomsArgs {
    /// window to enumerate on, as lo:hi
    #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
    window: Window,
    /// largest admissible window population
    #[arg(long, default_value_t = 2_000_000)]
    budget: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct GhostDemoArgs {
    /// window to demonstrate on, as lo:hi
    #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
    window: Window,
    /// enumeration budget on narrow windows
    #[arg(long, default_value_t = 2_000_000)]
    budget: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum SindiMode {
    /// pick by dimension: 3 structural, 4 exhaustive, higher random
    Auto,
    Structural,
    Exhaustive,
    Random,
}

#[derive(Args)]
struct SindiArgs {
    /// ambient dimension of the point cube
    #[arg(long)]
    dim: usize,
    #[arg(long, value_enum, default_value_t = SindiMode::Auto)]
    mode: SindiMode,
    /// step budget for the randomized mode
    #[arg(long, default_value_t = 10_000)]
    budget: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// state file: loaded when present, rewritten after the run
    #[arg(long)]
    resume: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CheckCertArgs {
    /// certificate file to re-check
    file: PathBuf,
    #[arg(long)]
    json: bool,
}

struct Outcome {
    command: &'static str,
    config: Value,
    seed: Option<u64>,
    pass: bool,
    results: Value,
    human: Vec<String>,
    json: bool,
    exit_override: Option<u8>,
}

enum Failure {
    Usage(String),
}

fn run_verify_ring(a: &VerifyRingArgs) -> Result<Outcome, Failure> {
    let report = verify_ring_identities();
    Ok(Outcome {
        command: "verify-ring",
        config: json!({}),
        seed: None,
        pass: report.pass,
        human: vec![
            format!("elements: {}", 32),
            format!("identity audit: {}", if report.pass { "pass" } else { "FAIL" }),
        ],
        results: serde_json::to_value(&report).unwrap(),
        json: a.json,
        exit_override: None,
    })
}

fn run_verify_claim(a: &VerifyClaimArgs) -> Result<Outcome, Failure> {
    if a.sum_len == 0 {
        return Err(Failure::Usage("--sum-len must be at least 1".into()));
    }
    let ring = verify_ring_identities();
    let vectors = verify_vector_identities(a.range.lo(), a.range.hi());
    let parity = verify_parity_claim(a.range.lo()..=a.range.hi(), a.samples, a.sum_len, a.seed);

    if let Some(dir) = &a.certs_dir {
        if let Err(e) = fs::create_dir_all(dir) {
            return Err(Failure::Usage(format!("cannot create {}: {e}", dir.display())));
        }
    }

    let solver = SpanSolver::build(a.witness_window);
    let mut witnesses = Vec::new();
    let mut witnesses_pass = true;
    for &index in &a.witness_indices {
        let target = ECVector::punctured_ghost(index).restrict(a.witness_window);
        let entry = match solver.try_express(&target) {
            None => {
                witnesses_pass = false;
                json!({ "index": index, "verified": false, "error": "no expression found" })
            }
            Some(expression) => {
                let cert = Certificate::PuncturedWitness {
                    window: a.witness_window,
                    index,
                    expression,
                };
                let verified = check_certificate(&cert).is_ok();
                witnesses_pass &= verified;
                let mut entry = json!({
                    "index": index,
                    "verified": verified,
                    "certificate": serde_json::to_value(&cert).unwrap(),
                });
                if let Some(dir) = &a.certs_dir {
                    let path = dir.join(format!("witness_{index}.json"));
                    let data = serde_json::to_string_pretty(&cert).unwrap();
                    if let Err(e) = fs::write(&path, data) {
                        return Err(Failure::Usage(format!(
                            "cannot write {}: {e}",
                            path.display()
                        )));
                    }
                    entry["file"] = json!(path.display().to_string());
                }
                entry
            }
        };
        witnesses.push(entry);
    }

    let pass = ring.pass && vectors.pass && parity.pass && witnesses_pass;
    Ok(Outcome {
        command: "verify-claim",
        config: json!({
            "range": a.range.to_string(),
            "sum_len": a.sum_len,
            "samples": a.samples,
            "witness_window": a.witness_window.to_string(),
            "witness_indices": a.witness_indices,
            "certs_dir": a.certs_dir.as_ref().map(|d| d.display().to_string()),
        }),
        seed: Some(a.seed),
        pass,
        human: vec![
            format!("ring audit: {}", if ring.pass { "pass" } else { "FAIL" }),
            format!("family identities on {}: {}", a.range, if vectors.pass { "pass" } else { "FAIL" }),
            format!(
                "parity: ghost rejected, {} punctures accepted, {} random members checked: {}",
                a.range.len(),
                parity.random_sums_checked,
                if parity.pass { "pass" } else { "FAIL" }
            ),
            format!(
                "witnesses on {}: {} of {} verified",
                a.witness_window,
                witnesses.iter().filter(|w| w["verified"] == json!(true)).count(),
                a.witness_indices.len()
            ),
        ],
        results: json!({
            "ring": serde_json::to_value(&ring).unwrap(),
            "vectors": serde_json::to_value(&vectors).unwrap(),
            "parity": serde_json::to_value(&parity).unwrap(),
            "witnesses": witnesses,
        }),
        json: a.json,
        exit_override: None,
    })
}

fn run_enum_homs(a: &EnumHomsArgs) -> Result<Outcome, Failure> {
    match enumerate_homs(a.window, a.budget) {
        Err(ClosureError::WindowTooWide { blocks }) => Err(Failure::Usage(format!(
            "window spans {blocks} blocks; enumeration is limited to 3"
        ))),
        Err(e @ ClosureError::BudgetExceeded { .. }) => Ok(Outcome {
            command: "enum-homs",
            config: json!({ "window": a.window.to_string(), "budget": a.budget }),
            seed: None,
            pass: false,
            human: vec![format!("{e}")],
            results: json!({ "error": e.to_string() }),
            json: a.json,
            exit_override: Some(3),
        }),
        Ok(homs) => {
            let summary = summarize(a.window, &homs);
            let expected = expected_hom_count(a.window.len() as u32);
            let pass = homs.len() == expected;
            Ok(Outcome {
                command: "enum-homs",
                config: json!({ "window": a.window.to_string(), "budget": a.budget }),
                seed: None,
                pass,
                human: vec![
                    format!(
                        "{} homomorphisms on {} ({} zeroring, {} critical), expected {}",
                        summary.count, a.window, summary.zeroring, summary.critical, expected
                    ),
                    format!("critical coordinates: {:?}", summary.by_coordinate),
                ],
                results: json!({
                    "summary": serde_json::to_value(&summary).unwrap(),
                    "expected": expected,
                }),
                json: a.json,
                exit_override: None,
            })
        }
    }
}

fn run_ghost_demo(a: &GhostDemoArgs) -> Result<Outcome, Failure> {
    let (family, homs) = if a.window.len() <= 3 {
        match enumerate_homs(a.window, a.budget) {
            Ok(h) => ("enumerated", h),
            Err(e @ ClosureError::BudgetExceeded { .. }) => {
                return Ok(Outcome {
                    command: "ghost-demo",
                    config: json!({ "window": a.window.to_string(), "budget": a.budget }),
                    seed: None,
                    pass: false,
                    human: vec![format!("{e}")],
                    results: json!({ "error": e.to_string() }),
                    json: a.json,
                    exit_override: Some(3),
                })
            }
            Err(ClosureError::WindowTooWide { .. }) => unreachable!("narrow window"),
        }
    } else {
        ("projections", projection_family(a.window))
    };

    let report = non_evaluation_report(a.window, &homs);
    Ok(Outcome {
        command: "ghost-demo",
        config: json!({ "window": a.window.to_string(), "budget": a.budget }),
        seed: None,
        pass: report.pass,
        human: vec![
            format!("family: {} ({} homs)", family, report.hom_count),
            format!(
                "witness for the whole family at index {:?}; in-window witness: {:?}",
                report.witness_index, report.in_window_witness
            ),
            report.conclusion.clone(),
        ],
        results: json!({
            "family": family,
            "report": serde_json::to_value(&report).unwrap(),
        }),
        json: a.json,
        exit_override: None,
    })
}

fn run_sindi(a: &SindiArgs) -> Result<Outcome, Failure> {
    let mode = match a.mode {
        SindiMode::Auto => match a.dim {
            3 => SindiMode::Structural,
            4 => SindiMode::Exhaustive,
            _ => SindiMode::Random,
        },
        m => m,
    };

    let config = |mode: &str| {
        json!({
            "dim": a.dim,
            "mode": mode,
            "budget": a.budget,
            "resume": a.resume.as_ref().map(|p| p.display().to_string()),
        })
    };

    let (report, seed, extra) = match mode {
        SindiMode::Auto => unreachable!(),
        SindiMode::Structural => {
            if a.dim != 3 {
                return Err(Failure::Usage(format!(
                    "structural mode is the dimension-3 argument, got --dim {}",
                    a.dim
                )));
            }
            (structural_scan(), None, json!({}))
        }
        SindiMode::Exhaustive => match exhaustive_scan(a.dim) {
            Ok(r) => (r, None, json!({})),
            Err(e @ SindiError::ExhaustiveTooLarge { .. }) => {
                return Ok(Outcome {
                    command: "sindi",
                    config: config("exhaustive"),
                    seed: None,
                    pass: false,
                    human: vec![format!("{e}")],
                    results: json!({ "error": e.to_string() }),
                    json: a.json,
                    exit_override: Some(3),
                })
            }
            Err(e) => return Err(Failure::Usage(e.to_string())),
        },
        SindiMode::Random => {
            let state = match &a.resume {
                Some(path) if path.exists() => {
                    let data = fs::read_to_string(path).map_err(|e| {
                        Failure::Usage(format!("cannot read {}: {e}", path.display()))
                    })?;
                    let state: ghostring::sindi::SearchState = serde_json::from_str(&data)
                        .map_err(|e| {
                            Failure::Usage(format!("bad state file {}: {e}", path.display()))
                        })?;
                    if state.dim != a.dim {
                        return Err(Failure::Usage(format!(
                            "state file is for dimension {}, got --dim {}",
                            state.dim, a.dim
                        )));
                    }
                    state
                }
                _ => fresh_state(a.dim, a.seed).map_err(|e| Failure::Usage(e.to_string()))?,
            };
            let seed = state.seed;
            let (report, state) = run_random(state, a.budget);
            if let Some(path) = &a.resume {
                let data = serde_json::to_string_pretty(&state).unwrap();
                fs::write(path, data).map_err(|e| {
                    Failure::Usage(format!("cannot write {}: {e}", path.display()))
                })?;
            }
            let extra = json!({
                "state": {
                    "attempts": state.attempts,
                    "q3_hits": state.q3_hits,
                    "restarts": state.restarts,
                }
            });
            (report, Some(seed), extra)
        }
    };

    let mode_name = match mode {
        SindiMode::Structural => "structural",
        SindiMode::Exhaustive => "exhaustive",
        SindiMode::Random => "random",
        SindiMode::Auto => unreachable!(),
    };
    let mut results = serde_json::to_value(&report).unwrap();
    if let (Value::Object(r), Value::Object(e)) = (&mut results, extra) {
        r.extend(e);
    }
    Ok(Outcome {
        command: "sindi",
        config: config(mode_name),
        seed,
        pass: report.pass,
        human: vec![
            format!("mode: {mode_name}"),
            format!("verdict: {:?}", report.verdict),
        ],
        results,
        json: a.json,
        exit_override: None,
    })
}

fn run_check_cert(a: &CheckCertArgs) -> Result<Outcome, Failure> {
    let data = fs::read_to_string(&a.file)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", a.file.display())))?;
    let config = json!({ "file": a.file.display().to_string() });
    let (pass, results, human) = match serde_json::from_str::<Certificate>(&data) {
        Err(e) => (
            false,
            json!({ "error": format!("unparseable certificate: {e}") }),
            vec![format!("unparseable certificate: {e}")],
        ),
        Ok(cert) => match check_certificate(&cert) {
            Ok(summary) => (
                true,
                serde_json::to_value(&summary).unwrap(),
                vec![format!("{}: {}", summary.kind, summary.detail)],
            ),
            Err(e) => (
                false,
                json!({ "error": e.to_string() }),
                vec![format!("certificate rejected: {e}")],
            ),
        },
    };
    Ok(Outcome {
        command: "check-cert",
        config,
        seed: None,
        pass,
        results,
        human,
        json: a.json,
        exit_override: None,
    })
}

fn dispatch(command: &Command) -> Result<Outcome, Failure> {
    match command {
        Command::VerifyRing(a) => run_verify_ring(a),
        Command::VerifyClaim(a) => run_verify_claim(a),
        Command::EnumHoms(a) => run_enum_homs(a),
        Command::GhostDemo(a) => run_ghost_demo(a),
        Command::Sindi(a) => run_sindi(a),
        Command::CheckCert(a) => run_check_cert(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();

    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.workers)
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            eprintln!("ghostring: {e}");
            return ExitCode::from(2);
        }
    };

    match pool.install(|| dispatch(&cli.command)) {
        Err(Failure::Usage(msg)) => {
            eprintln!("ghostring: {msg}");
            ExitCode::from(2)
        }
        Ok(out) => {
            let timing_ms = started.elapsed().as_millis() as u64;
            if out.json {
                let envelope = json!({
                    "schema": "ghostring/v1",
                    "command": out.command,
                    "config": out.config,
                    "seed": out.seed,
                    "pass": out.pass,
                    "results": out.results,
                    "timing_ms": timing_ms,
                });
                println!("{}", serde_json::to_string_pretty(&envelope).unwrap());
            } else {
                for line in &out.human {
                    println!("{line}");
                }
                println!("result: {}", if out.pass { "pass" } else { "FAIL" });
            }
            ExitCode::from(out.exit_override.unwrap_or(u8::from(!out.pass)))
        }
    }
}
