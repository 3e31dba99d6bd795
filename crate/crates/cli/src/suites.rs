//! Suite dispatch and the full acceptance battery.

use rayon::prelude::*;
use spinorq::clifford::{classical_spectrum_check, recursion_check, verify_so_relations};
use spinorq::invariant::{
    build_c, spectrum_check, third_power_profile, trace_check, verify_coideal, verify_commutation, verify_duality, At,
};
use spinorq::qspin::verify_serre;
use spinorq::weights::{bratteli_conservation, qdim_identities};
use spinorq::{EvalPoint, Parity, RootData, VerificationReport};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Compute(String),
}

impl CliError {
    fn compute(e: impl std::fmt::Display) -> Self {
        CliError::Compute(e.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Clifford,
    Serre,
    Commute,
    Spectrum,
    Coideal,
    Duality,
    ThirdPower,
    Trace,
}

/// Validated parameters of one `verify` run.
#[derive(Clone, Debug)]
pub struct Request {
    pub suite: Suite,
    pub rank: usize,
    pub parity: Parity,
    pub n: usize,
    /// `None` means symbolic.
    pub point: Option<EvalPoint>,
}

pub const TRACE_SAMPLES: usize = 20;
const TRACE_SEED: u64 = 7;

fn clifford_suite(n: usize) -> VerificationReport {
    let mut rep = classical_spectrum_check(n);
    rep.suite = "clifford".into();
    for l in 3..=4 {
        rep.extend(verify_so_relations(n, l, false));
        if n >= 2 {
            rep.extend(verify_so_relations(n, l, true));
        }
    }
    rep.extend(recursion_check(n));
    rep
}

pub fn run_suite(req: &Request) -> Result<VerificationReport, CliError> {
    let Request { suite, rank: k, parity, n, .. } = *req;
    let rd = || RootData::new(parity.family(), k).map_err(CliError::compute);
    match suite {
        Suite::Clifford => Ok(clifford_suite(n)),
        Suite::Serre => verify_serre(&rd()?, parity == Parity::Odd).map_err(CliError::compute),
        Suite::Commute => {
            let c = build_c(parity, k).map_err(CliError::compute)?;
            verify_commutation(&c, &c.action()).map_err(CliError::compute)
        }
        Suite::Spectrum => spectrum_check(&build_c(parity, k).map_err(CliError::compute)?).map_err(CliError::compute),
        Suite::Coideal => {
            let at = match &req.point {
                Some(p) => At::Point(p),
                None => At::Symbolic,
            };
            verify_coideal(k, parity, n, at).map_err(CliError::compute)
        }
        Suite::Duality => {
            let p = req.point.clone().ok_or_else(|| CliError::Usage("duality needs an evaluation point: pass --q a/b".into()))?;
            verify_duality(k, parity, n, &p).map_err(CliError::compute)
        }
        Suite::ThirdPower => third_power_profile(k, parity).map_err(CliError::compute),
        Suite::Trace => {
            let c = build_c(parity, k).map_err(CliError::compute)?;
            trace_check(&c, TRACE_SAMPLES, TRACE_SEED).map_err(CliError::compute)
        }
    }
}

fn point(s: &str) -> EvalPoint {
    EvalPoint::parse(s).expect("battery points are valid")
}

/// Every suite instance of the acceptance battery with rank at most `max_rank`.
pub fn battery(max_rank: usize) -> Vec<Request> {
    let mut out = Vec::new();
    let mut push = |suite, rank, parity, n, point: Option<EvalPoint>| out.push(Request { suite, rank, parity, n, point });
    for n in 1..=6 {
        push(Suite::Clifford, 0, Parity::Even, n, None);
    }
    let even: Vec<usize> = (1..=max_rank.min(3)).collect();
    let odd: Vec<usize> = (1..=max_rank.min(2)).collect();
    let both = || even.iter().map(|&k| (k, Parity::Even)).chain(odd.iter().map(|&k| (k, Parity::Odd)));
    for (k, p) in both() {
        push(Suite::Serre, k, p, 1, None);
        push(Suite::Commute, k, p, 2, None);
        push(Suite::Spectrum, k, p, 2, None);
    }
    if max_rank >= 2 {
        push(Suite::Coideal, 2, Parity::Even, 3, None);
    }
    push(Suite::Coideal, 1, Parity::Odd, 3, None);
    if max_rank >= 3 {
        push(Suite::Coideal, 3, Parity::Even, 3, Some(point("3/2")));
    }
    for (k, p) in both().filter(|&(k, _)| k <= 2) {
        let nmax = if k == 1 { 4 } else { 3 };
        for n in 2..=nmax {
            for q in [point("3/2"), point("5/2"), EvalPoint::classical()] {
                push(Suite::Duality, k, p, n, Some(q));
            }
        }
    }
    for &k in &even {
        push(Suite::ThirdPower, k, Parity::Even, 3, None);
        push(Suite::Trace, k, Parity::Even, 2, None);
    }
    push(Suite::Trace, 1, Parity::Odd, 2, None);
    out
}

/// Runs the battery (concurrently) plus the label-level identity reports.
pub fn run_all(max_rank: usize) -> Result<Vec<VerificationReport>, CliError> {
    let jobs = battery(max_rank);
    let mut reports = jobs.par_iter().map(run_suite).collect::<Result<Vec<_>, _>>()?;
    reports.push(qdim_identities(8, max_rank.min(3)));
    reports.push(bratteli_conservation(max_rank.min(4), 4));
    Ok(reports)
}
