//! Command-line front end. Every subcommand prints a single JSON document
//! on stdout with a fixed key order, so outputs diff cleanly; run metadata
//! stays on stderr. Exit codes: 0 success, 1 a mathematical check that is
//! expected to hold reported false, 2 usage or input errors.

use clap::{Args, Parser, Subcommand};
use heightfloor::bounds::{
    final_bound_log, tame_bound_log, verify_chain_with, wild_bound_log, ChainReport,
};
use heightfloor::division_poly::{build_samples, verify_height_floor, FloorViolation, HeightSample};
use heightfloor::elliptic::Curve;
use heightfloor::error::Error;
use heightfloor::gl2_lab;
use heightfloor::heights::{
    check_sumexpl, is_root_of_unity, weil_height, AlgebraicNumber,
};
use heightfloor::prime_cert::{find_prime, FindOutcome};
use serde::Serialize;

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(
    name = "heightfloor",
    about = "Prime-condition certificates, Weil heights, and explicit height floors for elliptic-curve torsion fields",
    long_about = None,
    version
)]
struct Cli {
    /// Pretty-print JSON output (same key order, added whitespace).
    #[arg(long, global = true)]
    pretty: bool,

    /// Cap the worker thread count (defaults to the number of cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Scan for the smallest prime satisfying all four certificate
    /// conditions for a curve.
    CertifyPrime(CertifyArgs),
    /// Weil height of an algebraic number given by its minimal polynomial.
    Height(HeightArgs),
    /// Sample torsion-field elements and compare against a certified floor.
    TorsionSample(TorsionArgs),
    /// Evaluate the explicit bound formulas (and optionally the proof
    /// chain) in log scale.
    Bounds(BoundsArgs),
    /// Run the exhaustive small-field group-theory verifiers.
    Gl2Verify(Gl2Args),
    /// Check the archimedean embedding-sum inequality for one element.
    Sumexpl(SumexplArgs),
}

#[derive(Args)]
struct CertifyArgs {
    /// Curve as "a1,a2,a3,a4,a6".
    #[arg(long)]
    curve: String,
    /// Uniform local-degree bound d.
    #[arg(long)]
    d: u32,
    /// Exponent of Gal(L/Q).
    #[arg(long = "exp")]
    exponent: u32,
    /// Scan primes up to this bound.
    #[arg(long)]
    pmax: u64,
    /// Frobenius scan bound for the surjectivity certifier.
    #[arg(long)]
    ellmax: u64,
    /// Also write the JSON document to this path.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Args)]
struct HeightArgs {
    /// Minimal polynomial, descending coefficients, e.g. "1,0,-2".
    #[arg(long)]
    minpoly: String,
}

#[derive(Args)]
struct TorsionArgs {
    #[arg(long)]
    curve: String,
    /// Sample torsion levels N = 1..=nmax.
    #[arg(long)]
    nmax: u32,
    /// Read the floor from a certify-prime JSON document.
    #[arg(long = "bound-from")]
    bound_from: std::path::PathBuf,
    /// Division-polynomial level cap.
    #[arg(long, default_value_t = heightfloor::division_poly::DEFAULT_CAP)]
    cap: u32,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 1)]
    d: u32,
    #[arg(long = "exp", default_value_t = 1)]
    exponent: u32,
    /// Override the default maximal E = (p^2-1) d exp.
    #[arg(long = "cal-e")]
    cal_e: Option<u64>,
    /// Also verify the proof's inequality chain step by step.
    #[arg(long = "verify-chain")]
    verify_chain: bool,
}

#[derive(Args)]
struct Gl2Args {
    #[arg(long)]
    p: u64,
}

#[derive(Args)]
struct SumexplArgs {
    #[arg(long)]
    minpoly: String,
    #[arg(long)]
    delta: f64,
}

fn main() {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("error: --threads must be at least 1");
            std::process::exit(2);
        }
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    let pretty = cli.pretty;
    let code = match run(cli.command, pretty) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    };
    std::process::exit(code);
}

fn emit<T: Serialize>(doc: &T, pretty: bool) -> Result<(), Error> {
    let s = if pretty {
        serde_json::to_string_pretty(doc)
    } else {
        serde_json::to_string(doc)
    }
    .map_err(|e| Error::Domain(format!("serialization failed: {e}")))?;
    println!("{s}");
    Ok(())
}

fn run(cmd: Command, pretty: bool) -> Result<i32, Error> {
    match cmd {
        Command::CertifyPrime(a) => {
            let curve = Curve::parse(&a.curve)?;
            let outcome = find_prime(&curve, a.d, a.exponent, a.pmax, a.ellmax)?;
            #[derive(Serialize)]
            struct Doc {
                schema_version: u32,
                command: &'static str,
                units: &'static str,
                #[serde(flatten)]
                outcome: FindOutcome,
            }
            let doc = Doc {
                schema_version: SCHEMA_VERSION,
                command: "certify-prime",
                units: "nats",
                outcome,
            };
            emit(&doc, pretty)?;
            if let Some(path) = a.out {
                let s = serde_json::to_string_pretty(&doc)
                    .map_err(|e| Error::Domain(format!("serialization failed: {e}")))?;
                std::fs::write(&path, s)
                    .map_err(|e| Error::Domain(format!("cannot write {}: {e}", path.display())))?;
                eprintln!("wrote {}", path.display());
            }
            Ok(0)
        }
        Command::Height(a) => {
            let alg = AlgebraicNumber::parse(&a.minpoly)?;
            let h = weil_height(&alg)?;
            let order = is_root_of_unity(&alg);
            #[derive(Serialize)]
            struct Doc {
                schema_version: u32,
                command: &'static str,
                units: &'static str,
                minpoly: String,
                height_nats: f64,
                abs_error: f64,
                is_root_of_unity: bool,
                #[serde(skip_serializing_if = "Option::is_none")]
                order: Option<u64>,
            }
            emit(
                &Doc {
                    schema_version: SCHEMA_VERSION,
                    command: "height",
                    units: "nats",
                    minpoly: alg.minpoly().to_desc_string(),
                    height_nats: h.nats,
                    abs_error: h.abs_error,
                    is_root_of_unity: order.is_some(),
                    order,
                },
                pretty,
            )?;
            Ok(0)
        }
        Command::TorsionSample(a) => {
            let curve = Curve::parse(&a.curve)?;
            let bound_ln = read_bound_ln(&a.bound_from)?;
            let samples = build_samples(&curve, a.nmax, a.cap)?;
            // the floor arrives as a plain ln value; rebuild the log-scale
            // carrier at working precision
            let bound = heightfloor::bounds::LogScaleValue::from_ln_f64(bound_ln);
            let report = verify_height_floor(&samples, &bound)?;
            #[derive(Serialize)]
            struct SampleDoc {
                level: u32,
                minpoly: String,
                derived_from: &'static str,
                height_nats: f64,
                abs_error: f64,
                excluded: bool,
            }
            #[derive(Serialize)]
            struct Doc {
                schema_version: u32,
                command: &'static str,
                units: &'static str,
                curve: String,
                nmax: u32,
                bound_ln: f64,
                samples: usize,
                excluded: usize,
                min_positive_height: f64,
                ln_margin: f64,
                violations: Vec<FloorViolation>,
                sampled: Vec<SampleDoc>,
            }
            let sampled = samples
                .iter()
                .map(|s: &HeightSample| SampleDoc {
                    level: s.level,
                    minpoly: s.minpoly.to_desc_string(),
                    derived_from: s.derived_from,
                    height_nats: s.height.nats,
                    abs_error: s.height.abs_error,
                    excluded: s.excluded,
                })
                .collect();
            let violated = !report.violations.is_empty();
            emit(
                &Doc {
                    schema_version: SCHEMA_VERSION,
                    command: "torsion-sample",
                    units: "nats",
                    curve: a.curve,
                    nmax: a.nmax,
                    bound_ln,
                    samples: report.samples,
                    excluded: report.excluded,
                    min_positive_height: report.min_positive_height,
                    ln_margin: report.ln_margin,
                    violations: report.violations,
                    sampled,
                },
                pretty,
            )?;
            Ok(if violated { 1 } else { 0 })
        }
        Command::Bounds(a) => {
            let cal_e = match a.cal_e {
                Some(e) => e,
                None => {
                    let full = ((a.p as u128) * (a.p as u128) - 1)
                        * a.d as u128
                        * a.exponent as u128;
                    u64::try_from(full)
                        .map_err(|_| Error::Domain("(p^2-1) d exp exceeds u64".into()))?
                }
            };
            let final_ln = final_bound_log(a.p)?;
            let tame_ln = tame_bound_log(a.p, cal_e)?;
            let wild_ln = wild_bound_log(a.p)?;
            let chain = if a.verify_chain {
                Some(verify_chain_with(a.p, a.d, a.exponent, a.cal_e)?)
            } else {
                None
            };
            #[derive(Serialize)]
            struct Doc {
                schema_version: u32,
                command: &'static str,
                units: &'static str,
                p: u64,
                d: u32,
                exponent: u32,
                cal_e: u64,
                final_bound_ln: f64,
                tame_bound_ln: f64,
                wild_bound_ln: f64,
                #[serde(skip_serializing_if = "Option::is_none")]
                chain: Option<ChainReport>,
            }
            emit(
                &Doc {
                    schema_version: SCHEMA_VERSION,
                    command: "bounds",
                    units: "nats",
                    p: a.p,
                    d: a.d,
                    exponent: a.exponent,
                    cal_e,
                    final_bound_ln: final_ln.ln_f64(),
                    tame_bound_ln: tame_ln.ln_f64(),
                    wild_bound_ln: wild_ln.ln_f64(),
                    chain,
                },
                pretty,
            )?;
            Ok(0)
        }
        Command::Gl2Verify(a) => {
            let doc = gl2_report(a.p)?;
            let ok = doc.report.all_match_expected;
            emit(&doc, pretty)?;
            Ok(if ok { 0 } else { 1 })
        }
        Command::Sumexpl(a) => {
            let alg = AlgebraicNumber::parse(&a.minpoly)?;
            let r = check_sumexpl(&alg, a.delta)?;
            #[derive(Serialize)]
            struct Doc {
                schema_version: u32,
                command: &'static str,
                units: &'static str,
                minpoly: String,
                delta: f64,
                lhs: f64,
                rhs: f64,
                height_nats: f64,
                holds: bool,
            }
            emit(
                &Doc {
                    schema_version: SCHEMA_VERSION,
                    command: "sumexpl",
                    units: "nats",
                    minpoly: alg.minpoly().to_desc_string(),
                    delta: r.delta,
                    lhs: r.lhs,
                    rhs: r.rhs,
                    height_nats: r.height_nats,
                    holds: r.holds,
                },
                pretty,
            )?;
            Ok(if r.holds { 0 } else { 1 })
        }
    }
}

fn read_bound_ln(path: &std::path::Path) -> Result<f64, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Domain(format!("cannot read {}: {e}", path.display())))?;
    let v: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| Error::Domain(format!("bad JSON in {}: {e}", path.display())))?;
    v.pointer("/bound/ln_value")
        .or_else(|| v.pointer("/certificate/bound/ln_value"))
        .or_else(|| v.pointer("/bound_log/ln_value"))
        .and_then(|x| x.as_f64())
        .ok_or_else(|| {
            Error::Domain(format!(
                "{} does not contain a bound_log.ln_value field",
                path.display()
            ))
        })
}

#[derive(Serialize)]
struct Gl2Doc {
    schema_version: u32,
    command: &'static str,
    #[serde(flatten)]
    report: gl2_lab::LabReport,
}

fn gl2_report(p: u64) -> Result<Gl2Doc, Error> {
    Ok(Gl2Doc {
        schema_version: SCHEMA_VERSION,
        command: "gl2-verify",
        report: gl2_lab::run_all(p)?,
    })
}
