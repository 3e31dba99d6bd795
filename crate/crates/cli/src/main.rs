//! `spinorq`: build Bratteli diagrams, quantum dimensions and spectra, and run
//! the verification suites. JSON goes to stdout, a human log to stderr.
//!
//! Exit status: 0 when every check passes, 1 on a failed identity, 2 on a
//! usage or parameter error.

mod suites;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use spinorq::invariant::{build_c, eigen_decomposition};
use spinorq::weights::{bratteli, classical_dim, parse_weight, qdimension};
use spinorq::{EvalPoint, Family, Parity, PinLabel, RootData, VerificationReport};

use suites::{run_all, run_suite, CliError, Request, Suite};

const MAX_RANK: usize = 8;

#[derive(Parser, Debug)]
#[command(name = "spinorq", version, about = "Exact spinor tensor power computations")]
struct Cli {
    /// Worker threads for suites that run concurrently (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Bratteli diagram of S^{⊗n}, levels 1..=L.
    Bratteli {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        levels: usize,
        #[arg(long, conflicts_with = "json")]
        dot: bool,
        /// JSON output (the default).
        #[arg(long)]
        json: bool,
    },
    /// Quantum dimension of a Pin label.
    Qdim {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        rank: usize,
        /// Comma-separated highest weight, e.g. `1,0` or `3/2,1/2`.
        #[arg(long, allow_hyphen_values = true)]
        label: String,
        #[arg(long)]
        assoc: bool,
        /// Also evaluate at q = a/b.
        #[arg(long)]
        q: Option<String>,
    },
    /// Eigenvalues of C on S⊗S with their multiplicities and labels.
    Eigen {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        parity: Parity,
    },
    /// Run one verification suite.
    Verify(VerifyArgs),
    /// Run the full acceptance battery up to the given rank.
    All {
        #[arg(long, default_value_t = 3)]
        max_rank: usize,
    },
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    suite: Suite,
    #[arg(long, default_value_t = 2)]
    rank: usize,
    #[arg(long, default_value = "even")]
    parity: Parity,
    /// Number of tensor factors (for `clifford`, the Clifford index N).
    #[arg(long, default_value_t = 3)]
    n: usize,
    /// Evaluation point q0 = a/b.
    #[arg(long, conflicts_with = "symbolic")]
    q: Option<String>,
    /// Work over the field of rational functions (the default without --q).
    #[arg(long)]
    symbolic: bool,
}

fn check_rank(rank: usize) -> Result<(), CliError> {
    if rank == 0 || rank > MAX_RANK {
        return Err(CliError::Usage(format!("--rank must be in 1..={MAX_RANK}, got {rank}")));
    }
    Ok(())
}

fn parse_point(q: &str) -> Result<EvalPoint, CliError> {
    EvalPoint::parse(q).map_err(|e| CliError::Usage(format!("--q {q}: {e}")))
}

fn log_report(r: &VerificationReport) {
    let failed = r.failures().count();
    eprintln!(
        "{}: {} ({} checks, {failed} failed)",
        r.suite,
        if r.all_pass() { "pass" } else { "FAIL" },
        r.checks.len()
    );
    for f in r.failures() {
        eprintln!("  {} [{}]", f.name, f.witness.as_deref().unwrap_or(""));
    }
}

fn reports_json(reports: &[VerificationReport]) -> Value {
    let pass = reports.iter().all(VerificationReport::all_pass);
    json!({ "pass": pass, "reports": reports })
}

/// Returns the stdout payload and whether every check passed.
fn run(cli: Cli) -> Result<(String, bool), CliError> {
    match cli.cmd {
        Cmd::Bratteli { family, rank, levels, dot, json: _ } => {
            check_rank(rank)?;
            let rd = RootData::new(family, rank).map_err(|e| CliError::Usage(e.to_string()))?;
            let d = bratteli(&rd, levels);
            Ok((if dot { d.to_dot() } else { d.to_json() }, true))
        }
        Cmd::Qdim { family, rank, label, assoc, q } => {
            check_rank(rank)?;
            let rd = RootData::new(family, rank).map_err(|e| CliError::Usage(e.to_string()))?;
            let bad = |e: spinorq::weights::WeightError| CliError::Usage(e.to_string());
            let l = PinLabel::new(family, parse_weight(&label).map_err(bad)?, assoc).map_err(bad)?;
            let qd = qdimension(&l, &rd).map_err(bad)?;
            let mut out = json!({
                "family": family.to_string(),
                "rank": rank,
                "label": l,
                "qdim": qd,
                "dim": classical_dim(&l, &rd).map_err(bad)?,
            });
            if let Some(q) = q {
                let p = parse_point(&q)?;
                let v = qd.eval(&p).map_err(|e| CliError::Compute(e.to_string()))?;
                out["q"] = json!(q);
                out["value"] = json!(v.to_string());
            }
            Ok((serde_json::to_string_pretty(&out).expect("json"), true))
        }
        Cmd::Eigen { rank, parity } => {
            check_rank(rank)?;
            let c = build_c(parity, rank).map_err(|e| CliError::Compute(e.to_string()))?;
            let spaces = eigen_decomposition(&c).map_err(|e| CliError::Compute(e.to_string()))?;
            let rows: Vec<Value> = spaces
                .iter()
                .map(|s| {
                    json!({
                        "eigenvalue": s.eigenvalue,
                        "twisted_eigenvalue": s.twisted_eigenvalue,
                        "rank": s.rank,
                        "labels": s.labels.iter().map(|(l, m)| json!({"label": l, "mult": m})).collect::<Vec<_>>(),
                    })
                })
                .collect();
            let out = json!({ "rank": rank, "parity": parity.to_string(), "dim": c.module_dim().pow(2), "eigenspaces": rows });
            Ok((serde_json::to_string_pretty(&out).expect("json"), true))
        }
        Cmd::Verify(a) => {
            if a.suite != Suite::Clifford {
                check_rank(a.rank)?;
            }
            if a.n == 0 {
                return Err(CliError::Usage("--n must be at least 1".into()));
            }
            let point = a.q.as_deref().map(parse_point).transpose()?;
            let req = Request { suite: a.suite, rank: a.rank, parity: a.parity, n: a.n, point };
            let rep = run_suite(&req)?;
            log_report(&rep);
            Ok((serde_json::to_string_pretty(&reports_json(std::slice::from_ref(&rep))).expect("json"), rep.all_pass()))
        }
        Cmd::All { max_rank } => {
            check_rank(max_rank)?;
            let reports = run_all(max_rank)?;
            reports.iter().for_each(log_report);
            let pass = reports.iter().all(VerificationReport::all_pass);
            Ok((serde_json::to_string_pretty(&reports_json(&reports)).expect("json"), pass))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: --threads {t}: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok((out, pass)) => {
            // a closed pipe (e.g. `| head`) is not an error of ours
            if let Err(e) = writeln!(std::io::stdout().lock(), "{out}") {
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    eprintln!("error: writing output: {e}");
                    return ExitCode::from(2);
                }
            }
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn battery_covers_every_suite() {
        let b = suites::battery(3);
        for s in [
            Suite::Clifford,
            Suite::Serre,
            Suite::Commute,
            Suite::Spectrum,
            Suite::Coideal,
            Suite::Duality,
            Suite::ThirdPower,
            Suite::Trace,
        ] {
            assert!(b.iter().any(|r| r.suite == s), "{s:?} missing");
        }
        assert!(suites::battery(1).iter().all(|r| r.rank <= 1));
    }

    #[test]
    fn rank_bounds() {
        assert!(check_rank(0).is_err());
        assert!(check_rank(MAX_RANK + 1).is_err());
        assert!(check_rank(2).is_ok());
    }
}
