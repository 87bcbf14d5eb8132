use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use serde_json::json;

use unipotent_core::cohomology::{brute_force_image, ImageSearch};
use unipotent_core::frattini::{elementary_quotient, etale_not_special, frattini_subgroup};
use unipotent_core::grammar::parse_laurent_poly;
use unipotent_core::{Fq, LaurentSeries};

use unipotent_cli::certificate::{exclusion_to_json, laurent_to_json, Certificate, Verdict};
use unipotent_cli::input::{read_group, read_presentation};
use unipotent_cli::pipeline::{classify, h1_class, verify, H1Outcome, Options};

/// Exact-arithmetic toolkit for the split/special dichotomy of smooth
/// commutative p-torsion unipotent groups over F_q(s), presented as
/// kernels of separable p-polynomials, with H¹ computed over the
/// Laurent series field F_q(s)((t)).
#[derive(Parser)]
#[command(name = "unipotent", version)]
struct Cli {
    /// Laurent window: series are tracked on exponents below N
    #[arg(long, global = true, default_value_t = 16)]
    precision: i64,
    /// Maximum substitution steps in split certification
    #[arg(long, global = true, default_value_t = 8)]
    budget: u32,
    /// Seed for sampled torsor spot checks
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide SPLIT_SPECIAL vs NOT_SPLIT_NOT_SPECIAL, emitting a
    /// replayable certificate JSON on stdout
    Classify { file: PathBuf },
    /// Locate the class of a target in H¹ = L / P(L^r): trivial (with
    /// preimage), nontrivial (with exclusion certificate), or undecided
    H1 {
        /// Target as a literal in s and t, e.g. "t^-1 + s*t"
        #[arg(long)]
        target: String,
        file: PathBuf,
    },
    /// Exhaustive bounded preimage search, independent of all certified
    /// reasoning
    Oracle {
        #[arg(long, allow_negative_numbers = true)]
        vmin: i64,
        #[arg(long, allow_negative_numbers = true)]
        vmax: i64,
        /// s-degree bound on candidate coefficients
        #[arg(long)]
        deg: u32,
        #[arg(long)]
        target: String,
        file: PathBuf,
    },
    /// Frattini quotient rank of a finite p-group table, plus the
    /// non-specialness certificate for the corresponding constant group
    Frattini { file: PathBuf },
    /// Independently replay a certificate against its input
    Verify { cert: PathBuf, file: PathBuf },
}

const ORACLE_NODE_CAP: u64 = 50_000_000;

enum Outcome {
    Decided,
    Undecided,
}

fn parse_target(field: Fq, text: &str, precision: i64) -> Result<LaurentSeries> {
    let poly = parse_laurent_poly(field, text).context("bad target literal")?;
    Ok(LaurentSeries::from_poly(&poly, precision))
}

fn run(cli: &Cli) -> Result<Outcome> {
    let opts = Options { precision: cli.precision, budget: cli.budget, seed: cli.seed };
    match &cli.cmd {
        Cmd::Classify { file } => {
            let (input, p) = read_presentation(file)?;
            let cert = classify(&input, &p, opts)?;
            println!("{}", serde_json::to_string_pretty(&cert)?);
            Ok(match cert.verdict {
                Verdict::Undecided => Outcome::Undecided,
                _ => Outcome::Decided,
            })
        }
        Cmd::H1 { target, file } => {
            let (_, p) = read_presentation(file)?;
            let target = parse_target(p.field(), target, cli.precision)?;
            let outcome = h1_class(&p, &target)?;
            println!("{}", serde_json::to_string_pretty(&outcome)?);
            Ok(match outcome {
                H1Outcome::Undecided { .. } => Outcome::Undecided,
                _ => Outcome::Decided,
            })
        }
        Cmd::Oracle { vmin, vmax, deg, target, file } => {
            let (_, p) = read_presentation(file)?;
            let target = parse_target(p.field(), target, cli.precision)?;
            match brute_force_image(&p, &target, *vmin, *vmax, *deg, ORACLE_NODE_CAP) {
                Ok(ImageSearch::InImage(alpha)) => {
                    let out = json!({
                        "result": "in_image",
                        "preimage": alpha.iter().map(laurent_to_json).collect::<Vec<_>>(),
                    });
                    println!("{}", serde_json::to_string_pretty(&out)?);
                    Ok(Outcome::Decided)
                }
                Ok(ImageSearch::NotInWindow) => {
                    println!("{}", serde_json::to_string_pretty(&json!({"result": "not_in_window"}))?);
                    Ok(Outcome::Decided)
                }
                Err(unipotent_core::Error::SearchSpaceTooLarge) => {
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&json!({
                            "result": "refused",
                            "note": "search space exceeds the node cap",
                        }))?
                    );
                    Ok(Outcome::Undecided)
                }
                Err(e) => Err(e.into()),
            }
        }
        Cmd::Frattini { file } => {
            let (_, g) = read_group(file)?;
            let phi = frattini_subgroup(&g)?;
            let rank = elementary_quotient(&g)?;
            let field = Fq::prime(g.p_group_prime().expect("p-group checked above") as u64)?;
            let cert = etale_not_special(rank, field, cli.precision)?;
            let out = json!({
                "order": g.order(),
                "p": field.p(),
                "frattini_elements": phi.elements(),
                "elementary_quotient_rank": rank,
                "etale_exclusion": exclusion_to_json(&cert),
            });
            println!("{}", serde_json::to_string_pretty(&out)?);
            Ok(Outcome::Decided)
        }
        Cmd::Verify { cert, file } => {
            let text = std::fs::read_to_string(cert)
                .with_context(|| format!("cannot read {}", cert.display()))?;
            let cert: Certificate =
                serde_json::from_str(&text).context("invalid certificate JSON")?;
            let (input, _) = read_presentation(file)?;
            match verify(&cert, &input, opts) {
                Ok(()) => {
                    println!("{}", serde_json::to_string_pretty(&json!({"verified": true}))?);
                    Ok(Outcome::Decided)
                }
                Err(reason) => {
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&json!({
                            "verified": false,
                            "reason": format!("{reason:#}"),
                        }))?
                    );
                    std::process::exit(2);
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Decided) => ExitCode::from(0),
        Ok(Outcome::Undecided) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
