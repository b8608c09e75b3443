//! `nearzero`: find and verify monochromatic configurations near zero.
//!
//! Exit codes: 0 success, 1 usage error, 2 search exhausted, 3
//! verification failure.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use nearzero::words::{vdw_number, VdwError};
use nearzero::{
    ap_near_zero, geo_arith_near_zero, parse_coloring, parse_polynomials, poly_vdw_near_zero, ColoringSpec, Exhausted,
    PipelineError, Polynomial, Rational, SearchBudget, SearchOutcome, Witness, WitnessCertificate,
};

#[derive(Parser)]
#[command(name = "nearzero", version, about = "Monochromatic configurations near zero")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Search for a witness and write its certificate.
    Find(FindArgs),
    /// Replay a certificate against a coloring.
    Verify {
        certificate: PathBuf,
        #[arg(long)]
        coloring: String,
    },
    /// Smallest n such that every r-coloring of [1, n] has a monochromatic
    /// (k+1)-term progression.
    Vdw {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        cap: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Ap,
    Geo,
    Poly,
    Bm,
    Phj,
}

#[derive(clap::Args)]
struct FindArgs {
    #[arg(value_enum)]
    kind: Kind,
    #[arg(long)]
    coloring: String,
    #[arg(long)]
    epsilon: String,
    /// Progression parameter for ap, geo and bm.
    #[arg(long)]
    k: Option<usize>,
    /// Expected number of colors; must match the coloring.
    #[arg(long)]
    r: Option<u32>,
    /// Comma-separated polynomials for poly and phj.
    #[arg(long)]
    polys: Option<String>,
    #[arg(long, default_value_t = SearchBudget::default().max_n)]
    max_n: usize,
    #[arg(long, default_value_t = SearchBudget::default().max_nodes)]
    max_nodes: u64,
    /// Seconds, or a duration such as `500ms`, `30s`, `2m`.
    #[arg(long, value_parser = parse_timeout)]
    timeout: Option<Duration>,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Certificate path; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_timeout(text: &str) -> Result<Duration, String> {
    if let Ok(secs) = text.parse::<f64>() {
        return Duration::try_from_secs_f64(secs).map_err(|e| e.to_string());
    }
    humantime::parse_duration(text).map_err(|e| e.to_string())
}

enum Failure {
    Usage(String),
    Exhausted(String),
    Verify(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Exhausted(_) => 2,
            Failure::Verify(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Exhausted(m) | Failure::Verify(m) => m,
        }
    }
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn pipeline(e: PipelineError) -> Failure {
    match e {
        PipelineError::Unverified(f) => Failure::Verify(format!("rejected unverified witness: {f}")),
        other => usage(other),
    }
}

fn exhausted(e: &Exhausted) -> Failure {
    Failure::Exhausted(format!(
        "exhausted: reason={:?} nodes_visited={} max_n_reached={}",
        e.reason, e.nodes_visited, e.max_n_reached
    ))
}

fn unwrap_found<W>(outcome: SearchOutcome<W>) -> Result<(W, u64), Failure> {
    match outcome {
        SearchOutcome::Found { witness, nodes_visited } => Ok((witness, nodes_visited)),
        SearchOutcome::Exhausted(e) => Err(exhausted(&e)),
    }
}

fn require_k(args: &FindArgs) -> Result<usize, Failure> {
    args.k.ok_or_else(|| usage("--k is required for this kind"))
}

fn require_polys(args: &FindArgs) -> Result<Vec<Polynomial>, Failure> {
    let text = args
        .polys
        .as_deref()
        .ok_or_else(|| usage("--polys is required for this kind"))?;
    parse_polynomials(text).map_err(usage)
}

fn find(args: &FindArgs) -> Result<(), Failure> {
    let spec = parse_coloring(&args.coloring).map_err(usage)?;
    let epsilon: Rational = args.epsilon.parse().map_err(|e| usage(format!("--epsilon: {e}")))?;
    if let Some(r) = args.r {
        if r != spec.colors() {
            return Err(usage(format!("--r {r} but the coloring uses {} colors", spec.colors())));
        }
    }
    let budget = SearchBudget {
        max_n: args.max_n,
        max_nodes: args.max_nodes,
        wall_time: args.timeout,
        workers: args.workers,
    };
    let (witness, nodes) = match args.kind {
        Kind::Ap => {
            let (w, n) = unwrap_found(ap_near_zero(&spec, require_k(args)?, &epsilon, &budget).map_err(pipeline)?)?;
            (Witness::Ap(w), n)
        }
        Kind::Geo | Kind::Bm => {
            let k = require_k(args)?;
            if matches!(args.kind, Kind::Bm) && k > 9 {
                return Err(usage("bm certificates need k <= 9"));
            }
            let (run, n) = unwrap_found(geo_arith_near_zero(&spec, k, &epsilon, &budget).map_err(pipeline)?)?;
            let w = match args.kind {
                Kind::Geo => Witness::Geo(run.witness),
                _ => Witness::Bm {
                    witness: run.bm,
                    p: run.p,
                    m: run.m,
                },
            };
            (w, n)
        }
        Kind::Poly | Kind::Phj => {
            let polys = require_polys(args)?;
            let (run, n) = unwrap_found(poly_vdw_near_zero(&polys, &spec, &epsilon, &budget).map_err(pipeline)?)?;
            let w = match args.kind {
                Kind::Poly => Witness::Poly(run.witness),
                _ => Witness::Phj {
                    witness: run.phj,
                    r: run.r,
                },
            };
            (w, n)
        }
    };
    let cert = WitnessCertificate::new(witness, &spec, &epsilon).map_err(pipeline)?;
    // never emit a certificate that does not replay
    cert.verify(&spec)
        .map_err(|f| Failure::Verify(format!("internal certificate failed to verify:\n{f}")))?;
    let text = cert.to_string();
    match &args.out {
        Some(path) => fs::write(path, &text).map_err(|e| usage(format!("{}: {e}", path.display())))?,
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| usage(format!("stdout: {e}")))?,
    }
    eprintln!(
        "found {} witness with {} points after {nodes} nodes",
        cert.kind(),
        cert.points.len()
    );
    Ok(())
}

fn verify(path: &PathBuf, coloring: &str) -> Result<(), Failure> {
    let spec: ColoringSpec = parse_coloring(coloring).map_err(usage)?;
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let cert = WitnessCertificate::parse(&text).map_err(|e| Failure::Verify(e.to_string()))?;
    let color = cert
        .verify(&spec)
        .map_err(|f| Failure::Verify(format!("verification failed: {f}")))?;
    println!(
        "ok: {} certificate, {} points, color {color}",
        cert.kind(),
        cert.points.len()
    );
    Ok(())
}

fn vdw(k: usize, r: usize, cap: usize) -> Result<(), Failure> {
    match vdw_number(k, r, cap) {
        Ok(n) => {
            println!("{n}");
            Ok(())
        }
        Err(VdwError::CapExceeded { cap }) => {
            println!("CapExceeded");
            Err(Failure::Exhausted(format!("no n <= {cap} forces a progression")))
        }
        Err(e) => Err(usage(e)),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Find(args) => find(args),
        Command::Verify { certificate, coloring } => verify(certificate, coloring),
        Command::Vdw { k, r, cap } => vdw(*k, *r, *cap),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", f.message());
            ExitCode::from(f.code())
        }
    }
}
