use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use slo_core::free::{default_generators, free_cdis_count};
use slo_core::io::{algebra_to_json, free_model_to_json, read_algebra, read_free_model};
use slo_core::suite::{suite_all, suite_cor52, suite_counts, suite_gl, suite_universality};
use slo_core::{
    build_power, enumerate_subalgebras, extend_hom, free_cdis, free_semilattice, free_semilattice_unit, parse_identity,
    parse_signature, quotient_by_rho, Error, FiniteAlgebra, Limits, PowerVariant, SloAlgebra, SuiteReport,
};

#[derive(Parser)]
#[command(name = "slo", version, about = "Finite semilattice-ordered algebras")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse a signature file and print it back in normal form.
    Parse {
        #[arg(long)]
        sig: PathBuf,
    },
    /// Check an identity on an algebra file.
    Check {
        #[arg(long)]
        alg: PathBuf,
        #[arg(long)]
        id: String,
    },
    /// Report idempotency, entropy, symmetry, conservativity and units.
    Props {
        #[arg(long)]
        alg: PathBuf,
    },
    /// Build a power algebra.
    Power {
        #[arg(long)]
        alg: PathBuf,
        #[arg(long, default_value = "nonempty")]
        variant: PowerVariant,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the subalgebras of an algebra.
    Subalgebras {
        #[arg(long)]
        alg: PathBuf,
        #[arg(long)]
        include_empty: bool,
    },
    /// Quotient a power algebra by the replica relation.
    QuotientRho {
        #[arg(long)]
        alg: PathBuf,
        #[arg(long, default_value = "nonempty")]
        variant: PowerVariant,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The free semilattice on N generators (optionally with a unit).
    FreeSl {
        #[arg(long)]
        gens: usize,
        #[arg(long)]
        unit: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The free commutative doubly-idempotent semiring on N generators.
    FreeCdis {
        #[arg(long)]
        gens: usize,
        /// Print only the number of elements.
        #[arg(long)]
        count: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decompose an element as a join of products of generators.
    Disj {
        #[arg(long)]
        alg: PathBuf,
        /// Comma-separated generator labels.
        #[arg(long)]
        gens: String,
        #[arg(long)]
        elem: String,
    },
    /// Extend a generator map out of a free model.
    Extend {
        #[arg(long)]
        free: PathBuf,
        #[arg(long)]
        target: PathBuf,
        /// Generator images, as `x=a,y=b`.
        #[arg(long)]
        map: String,
    },
    /// Run desk-check suites.
    Suite {
        which: Which,
        /// Largest enumerated table size; for `counts`, the largest generator count.
        #[arg(long)]
        max_size: Option<usize>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Gl,
    Cor52,
    Counts,
    Universality,
    All,
}

/// Failures that are properties of the input rather than malformed input.
fn is_property_failure(e: &anyhow::Error) -> bool {
    matches!(
        e.downcast_ref::<Error>(),
        Some(Error::NotGenerating { .. } | Error::NotHomomorphism(_) | Error::Precondition(_))
    )
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if is_property_failure(&e) { 1 } else { 2 })
        }
    }
}

fn emit(json: serde_json::Value, out: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(&json)? + "\n";
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load(p: &Path) -> Result<FiniteAlgebra> {
    read_algebra(p).with_context(|| format!("reading {}", p.display()))
}

fn as_slo(alg: &FiniteAlgebra) -> Result<SloAlgebra> {
    SloAlgebra::from_designated(alg).map_err(|v| anyhow::anyhow!("not a valid SLO algebra: {v}"))
}

fn run(cmd: Cmd) -> Result<bool> {
    let limits = Limits::from_env();
    match cmd {
        Cmd::Parse { sig } => {
            let text = fs::read_to_string(&sig).with_context(|| format!("reading {}", sig.display()))?;
            let s = parse_signature(&text)?;
            println!("{}", s.to_dsl());
            Ok(true)
        }
        Cmd::Check { alg, id } => {
            let a = load(&alg)?;
            let id = parse_identity(&id, a.signature())?;
            match a.satisfies(&id)? {
                None => {
                    println!("holds: {id}");
                    Ok(true)
                }
                Some(cx) => {
                    let asg: Vec<String> = cx.assignment.iter().map(|(k, v)| format!("{k}={v}")).collect();
                    println!("fails: {id}");
                    println!("witness: {} gives {} ≠ {}", asg.join(", "), cx.lhs, cx.rhs);
                    Ok(false)
                }
            }
        }
        Cmd::Props { alg } => {
            let a = load(&alg)?;
            let units: Vec<&str> = a.units().iter().map(|&u| a.label(u)).collect();
            println!("idempotent: {}", a.is_idempotent());
            println!("entropic: {}", a.is_entropic());
            println!("symmetric: {}", a.is_symmetric());
            println!("conservative: {}", a.is_conservative());
            println!("units: [{}]", units.join(", "));
            Ok(true)
        }
        Cmd::Power { alg, variant, out } => {
            let p = build_power(&load(&alg)?, variant, &limits)?;
            emit(algebra_to_json(p.algebra()), out.as_deref())?;
            if out.is_some() {
                println!("{} elements", p.algebra().size());
            }
            Ok(true)
        }
        Cmd::Subalgebras { alg, include_empty } => {
            let a = load(&alg)?;
            let subs = enumerate_subalgebras(&a, include_empty, &limits)?;
            for s in &subs {
                println!("{}", s.carrier.label(&a));
            }
            println!("{} subalgebras", subs.len());
            Ok(true)
        }
        Cmd::QuotientRho { alg, variant, out } => {
            let p = build_power(&load(&alg)?, variant, &limits)?;
            let q = quotient_by_rho(&p)?;
            emit(algebra_to_json(q.algebra()), out.as_deref())?;
            if out.is_some() {
                println!("{} classes", q.algebra().size());
            }
            Ok(true)
        }
        Cmd::FreeSl { gens, unit, out } => {
            let g = default_generators(gens);
            let g: Vec<&str> = g.iter().map(String::as_str).collect();
            let a = if unit {
                free_semilattice_unit(&g)?
            } else {
                free_semilattice(&g)?
            };
            emit(algebra_to_json(&a), out.as_deref())?;
            Ok(true)
        }
        Cmd::FreeCdis { gens, count, out } => {
            if count {
                println!("{}", free_cdis_count(gens, &limits)?);
                return Ok(true);
            }
            let g = default_generators(gens);
            let g: Vec<&str> = g.iter().map(String::as_str).collect();
            let m = free_cdis(&g, &limits)?;
            emit(free_model_to_json(&m), out.as_deref())?;
            Ok(true)
        }
        Cmd::Disj { alg, gens, elem } => {
            let a = load(&alg)?;
            let s = as_slo(&a)?;
            let xs = gens
                .split(',')
                .map(|g| a.element(g.trim()))
                .collect::<slo_core::Result<Vec<_>>>()?;
            let form = s.disjunctive_form(&xs, a.element(&elem)?)?;
            let parts: Vec<&str> = form.parts.iter().map(|&p| a.label(p)).collect();
            println!(
                "{} = {}",
                elem,
                if parts.is_empty() {
                    "0".to_string()
                } else {
                    parts.join(" + ")
                }
            );
            Ok(true)
        }
        Cmd::Extend { free, target, map } => {
            let m = read_free_model(&free).with_context(|| format!("reading {}", free.display()))?;
            let t = load(&target)?;
            let ts = as_slo(&t)?;
            let pairs = map
                .split(',')
                .filter(|p| !p.trim().is_empty())
                .map(|p| match p.split_once('=') {
                    Some((g, v)) => Ok((g.trim(), v.trim())),
                    None => bail!("map entries must look like `x=a`, got `{p}`"),
                })
                .collect::<Result<Vec<_>>>()?;
            let hom = extend_hom(&m, &pairs, &ts)?;
            for (from, to) in hom.labelled(m.algebra(), &t) {
                println!("{from} -> {to}");
            }
            Ok(true)
        }
        Cmd::Suite { which, max_size, json } => {
            let size = max_size.unwrap_or(3);
            let reports = match which {
                Which::Gl => vec![suite_gl(size, &limits)?],
                Which::Cor52 => vec![suite_cor52(size, &limits)?],
                Which::Counts => vec![suite_counts(max_size.unwrap_or(limits.max_generators), &limits)?],
                Which::Universality => vec![suite_universality(&limits)?],
                Which::All => suite_all(size, &limits)?,
            };
            if json {
                let v = if reports.len() == 1 {
                    serde_json::to_value(&reports[0])?
                } else {
                    serde_json::to_value(&reports)?
                };
                println!("{}", serde_json::to_string_pretty(&v)?);
            } else {
                for r in &reports {
                    print_report(r);
                }
            }
            Ok(reports.iter().all(SuiteReport::all_passed))
        }
    }
}

fn print_report(r: &SuiteReport) {
    println!(
        "suite {}: {} instances, {} passed, {} failed ({:.2?})",
        r.suite, r.instances, r.passed, r.failed, r.wall_time
    );
    for e in &r.entries {
        if e.pass {
            continue;
        }
        println!("  FAIL {}: {}", e.instance, e.detail);
        if let Some(w) = &e.witness {
            println!("       witness: {w}");
        }
    }
}
