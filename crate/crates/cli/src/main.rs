//! Batch command-line front end for exact quadratic-lattice computations.
//!
//! Every command is deterministic given its flags and seed, emits exact
//! machine-readable JSON by default (`--pretty` switches to human-readable
//! text), and uses the exit codes: 0 success or positive verdict, 1 negative
//! verdict or hypothesis failure, 2 invalid input.

use clap::{Parser, Subcommand};
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;

use uqlat::bounds::{run_bound_chain_fuzz, threshold_polynomial};
use uqlat::lattice::Lattice;
use uqlat::obstruction::certify_no_rank7;
use uqlat::represent::{enumerate_representations, represents};
use uqlat::universal::{search_candidates, universal_up_to};
use uqlat::{AlgInt, Branch, QuadField};

mod latticefile;
mod report;

use report::{
    certify_doc, vector_doc, FieldInfoDoc, FuzzDoc, RepresentDoc, ThresholdDoc, UniversalCheckDoc,
};

#[derive(Parser)]
#[command(
    name = "uqlat",
    about = "Exact arithmetic for universal quadratic lattices over real quadratic fields",
    version
)]
struct Cli {
    /// Human-readable output instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the discriminant and ring generator of Q(sqrt(d)).
    FieldInfo {
        #[arg(long)]
        d: i64,
    },
    /// Decide whether a lattice represents a target element.
    Represent {
        /// Lattice document (JSON; see the book for the format).
        #[arg(long)]
        lattice: PathBuf,
        /// Target as `p,q,den` meaning `(p + q·omega_d)/den`; must be an
        /// algebraic integer.
        #[arg(long)]
        target: String,
        /// Enumerate witnesses instead of stopping at the first.
        #[arg(long)]
        all: bool,
        /// Cap on the number of enumerated witnesses.
        #[arg(long, default_value_t = 64)]
        cap: usize,
    },
    /// Check representation of every totally positive integer up to a trace
    /// bound.
    UniversalCheck {
        #[arg(long)]
        lattice: PathBuf,
        #[arg(long)]
        trace_max: i64,
    },
    /// The quartic positivity threshold for a criterion bound N.
    Threshold {
        #[arg(long)]
        n: u64,
    },
    /// Seeded random verification of the determinant bound chain.
    FuzzBounds {
        #[arg(long)]
        iters: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the full rank-certificate pipeline on a lattice.
    Certify {
        #[arg(long)]
        lattice: PathBuf,
    },
    /// Diagonal classic lattices passing a truncated universality check.
    SearchCandidates {
        #[arg(long)]
        d: i64,
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        coeff_bound: i64,
        #[arg(long)]
        trace_max: i64,
    },
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("UQLAT_THREADS") {
        match threads.parse::<usize>() {
            Ok(n) if n >= 1 => uqlat::set_thread_count(n),
            _ => {
                eprintln!("UQLAT_THREADS must be a positive integer");
                return ExitCode::from(2);
            }
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn emit<T: Serialize>(pretty: bool, doc: &T, render: impl Fn() -> String) -> Result<(), String> {
    if pretty {
        println!("{}", render());
    } else {
        println!("{}", serde_json::to_string(doc).map_err(|e| e.to_string())?);
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::FieldInfo { d } => {
            let field = QuadField::new(d).map_err(|e| e.to_string())?;
            let (congruence, omega, omega_conj) = match field.branch() {
                Branch::Sqrt => ("2 or 3 (mod 4)", "sqrt(d)", "-sqrt(d)"),
                Branch::Half => ("1 (mod 4)", "(1+sqrt(d))/2", "(1-sqrt(d))/2"),
            };
            let doc = FieldInfoDoc {
                d,
                discriminant: field.discriminant(),
                congruence: congruence.to_string(),
                omega: omega.to_string(),
                omega_conj: omega_conj.to_string(),
            };
            emit(cli.pretty, &doc, || {
                format!(
                    "d = {d}\ndiscriminant = {}\nd congruent to {congruence}\nomega_d = {omega}\nconjugate(omega_d) = {omega_conj}",
                    field.discriminant()
                )
            })?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Represent {
            lattice,
            target,
            all,
            cap,
        } => {
            let l = load_lattice(&lattice)?;
            let t = parse_target(&target, l.field())?;
            let witnesses = if all {
                if cap == 0 {
                    return Err("cap must be at least 1".into());
                }
                enumerate_representations(&l, &t, cap).map_err(|e| e.to_string())?
            } else {
                represents(&l, &t)
                    .map_err(|e| e.to_string())?
                    .into_iter()
                    .collect()
            };
            let doc = RepresentDoc {
                found: !witnesses.is_empty(),
                witnesses: witnesses.iter().map(|w| vector_doc(&w.vector)).collect(),
            };
            emit(cli.pretty, &doc, || {
                if doc.found {
                    doc.witnesses
                        .iter()
                        .map(|w| {
                            let coords: Vec<String> =
                                w.iter().map(|[a, b]| render_coord(a, b)).collect();
                            format!("({})", coords.join(", "))
                        })
                        .collect::<Vec<_>>()
                        .join("\n")
                } else {
                    "NONE".to_string()
                }
            })?;
            Ok(if doc.found {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }

        Command::UniversalCheck { lattice, trace_max } => {
            let l = load_lattice(&lattice)?;
            let rep = universal_up_to(&l, trace_max).map_err(|e| e.to_string())?;
            let doc = UniversalCheckDoc {
                targets_checked: rep.targets_checked,
                pass: rep.pass(),
                first_failure: rep
                    .first_failure
                    .as_ref()
                    .map(|x| [x.a().to_string(), x.b().to_string()]),
            };
            emit(cli.pretty, &doc, || {
                if doc.pass {
                    format!("PASS ({} targets)", doc.targets_checked)
                } else {
                    let [a, b] = doc.first_failure.clone().unwrap();
                    format!("FAIL at {a}+{b}w")
                }
            })?;
            Ok(if doc.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }

        Command::Threshold { n } => {
            let rep = threshold_polynomial(n).map_err(|e| e.to_string())?;
            let doc = ThresholdDoc {
                n,
                coefficients: [
                    rep.coefficients[0].to_string(),
                    rep.coefficients[1].to_string(),
                    rep.coefficients[2].to_string(),
                    rep.coefficients[3].to_string(),
                ],
                certified_threshold: rep.certified_threshold.to_string(),
                minimal_threshold: rep.minimal_threshold.to_string(),
                quartic_at_threshold: rep.quartic_at_threshold.to_string(),
            };
            emit(cli.pretty, &doc, || {
                format!(
                    "N = {n}\nc_0 = {}\nc_1 = {}\nc_2 = {}\nc_3 = {}\nthreshold = {}\nminimal integer threshold = {}",
                    doc.coefficients[0],
                    doc.coefficients[1],
                    doc.coefficients[2],
                    doc.coefficients[3],
                    doc.certified_threshold,
                    doc.minimal_threshold
                )
            })?;
            Ok(ExitCode::SUCCESS)
        }

        Command::FuzzBounds { iters, seed } => {
            let rep = run_bound_chain_fuzz(iters, seed);
            let doc = FuzzDoc {
                iterations: rep.iterations,
                seed: rep.seed,
                violations: rep.violations.clone(),
                pass: rep.pass(),
            };
            emit(cli.pretty, &doc, || {
                if doc.pass {
                    format!("{} instances, all within bounds", doc.iterations)
                } else {
                    format!("violations at iterations {:?}", doc.violations)
                }
            })?;
            Ok(if doc.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }

        Command::Certify { lattice } => {
            let l = load_lattice(&lattice)?;
            let report = certify_no_rank7(&l);
            let doc = certify_doc(&report);
            emit(cli.pretty, &doc, || {
                let mut out = vec![format!(
                    "d = {}, discriminant = {}{}",
                    doc.d,
                    doc.discriminant,
                    if doc.below_threshold {
                        " (below threshold)"
                    } else {
                        ""
                    }
                )];
                for s in &doc.stages {
                    out.push(format!(
                        "  [{}] {}: {}",
                        if s.passed { "ok" } else { "FAIL" },
                        s.stage,
                        s.detail
                    ));
                }
                out.push(format!("verdict: {}", doc.verdict));
                out.join("\n")
            })?;
            Ok(if report.certified_independent() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }

        Command::SearchCandidates {
            d,
            rank,
            coeff_bound,
            trace_max,
        } => {
            let field = QuadField::new(d).map_err(|e| e.to_string())?;
            let found = search_candidates(field, rank, coeff_bound, trace_max)
                .map_err(|e| e.to_string())?;
            let docs: Vec<latticefile::LatticeFile> = found
                .iter()
                .map(|l| latticefile::from_lattice(l).map_err(|e| e.to_string()))
                .collect::<Result<_, _>>()?;
            #[derive(Serialize)]
            struct SearchDoc {
                count: usize,
                candidates: Vec<latticefile::LatticeFile>,
            }
            let doc = SearchDoc {
                count: docs.len(),
                candidates: docs,
            };
            emit(cli.pretty, &doc, || {
                let mut out = vec![format!("{} candidate(s)", doc.count)];
                for c in &doc.candidates {
                    out.push(latticefile::serialize(c).trim_end().to_string());
                }
                out.join("\n")
            })?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

/// `a + b·w` with conventional signs, e.g. `-1-w`, `2`, `w`, `3+2w`.
fn render_coord(a: &str, b: &str) -> String {
    match (a, b) {
        (a, "0") => a.to_string(),
        ("0", "1") => "w".to_string(),
        ("0", "-1") => "-w".to_string(),
        ("0", b) => format!("{b}w"),
        (a, "1") => format!("{a}+w"),
        (a, "-1") => format!("{a}-w"),
        (a, b) if b.starts_with('-') => format!("{a}{b}w"),
        (a, b) => format!("{a}+{b}w"),
    }
}

fn load_lattice(path: &PathBuf) -> Result<Lattice, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let (_, lattice) = latticefile::parse(&text).map_err(|e| e.to_string())?;
    Ok(lattice)
}

/// Parses `p,q,den` into the algebraic integer `(p + q·ω_d)/den`.
fn parse_target(text: &str, field: QuadField) -> Result<AlgInt, String> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let (p, q, den): (i64, i64, i64) = match parts.as_slice() {
        [p, q] => (
            p.parse().map_err(|_| format!("bad target component {p}"))?,
            q.parse().map_err(|_| format!("bad target component {q}"))?,
            1,
        ),
        [p, q, den] => (
            p.parse().map_err(|_| format!("bad target component {p}"))?,
            q.parse().map_err(|_| format!("bad target component {q}"))?,
            den.parse()
                .map_err(|_| format!("bad target component {den}"))?,
        ),
        _ => return Err("target must be `p,q` or `p,q,den`".into()),
    };
    if den == 0 {
        return Err("target denominator must be nonzero".into());
    }
    let elem = latticefile::entry_to_elem(field, p, q, den);
    elem.to_alg_int()
        .ok_or_else(|| format!("target ({p} + {q}·omega)/{den} is not an algebraic integer"))
}
