//! Command-line driver: α-sweeps, band verdicts, exact-identity checks, and
//! direct oracle evaluation.
//!
//! Exit codes: 0 pass, 1 verdict fail, 2 usage/config error, 3 solver error.

use clap::{Args, Parser, Subcommand};
use robin_bands::error::Error;
use robin_bands::geometry::{parse_chain_config, ChainSpec, SectorBlockParams};
use robin_bands::harness::{
    check_bands, parse_csv, plateau_study, run_alpha_sweep, verify_bracketing, verify_scaling,
    write_csv, BandAssignment, MeshOverrides,
};
use robin_bands::oracles;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "robin-bands", version, about = "Robin Laplacian two-band laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an α-sweep over the configured chain domain and emit CSV.
    Sweep(SweepArgs),
    /// Check a sweep CSV against two disjoint target bands.
    Bands(BandsArgs),
    /// Verify exact inequalities/identities of the model.
    Verify(VerifyArgs),
    /// Evaluate a closed-form oracle.
    Oracle(OracleArgs),
}

#[derive(Args)]
struct SweepArgs {
    /// Chain config file (key = value lines).
    #[arg(long)]
    config: PathBuf,
    /// Comma-separated Robin parameters (all ≤ 0).
    #[arg(long)]
    alphas: String,
    /// Concurrent solves.
    #[arg(long)]
    jobs: Option<usize>,
    /// Output CSV path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Extra mesh refinement factor (≥ 1).
    #[arg(long)]
    refine: Option<f64>,
}

#[derive(Args)]
struct BandsArgs {
    /// Sweep CSV produced by `sweep`.
    #[arg(long = "in")]
    input: PathBuf,
    /// Band I' as `lo,hi`.
    #[arg(long = "band-prime")]
    band_prime: String,
    /// Band I'' as `lo,hi`.
    #[arg(long = "band-double")]
    band_double: String,
    /// Comma-separated per-row assignment: `'` for I', `''` for I''.
    #[arg(long)]
    assign: String,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(subcommand)]
    what: VerifyCommand,
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Exact scaling identity E(tα) = t²·E(α on the t-scaled mesh).
    Scaling {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long, default_value_t = 2.0)]
        t: f64,
    },
    /// Dirichlet–Neumann bracketing E_N ≤ E_D on the config's odd block.
    Bracketing {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
    },
    /// Single-block ratio table over an α list, both side modes.
    Plateau {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        alphas: String,
    },
}

#[derive(Args)]
struct OracleArgs {
    /// One of: halfline, interval-rn, interval-rr, disk, sector, trial.
    name: String,
    /// Numeric arguments (see README).
    #[arg(allow_hyphen_values = true)]
    args: Vec<f64>,
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::NotPositiveDefinite { .. } | Error::MaxIterations(_) => 3,
                _ => 2,
            };
            ExitCode::from(code)
        }
    }
}

fn run() -> Result<ExitCode, Error> {
    match Cli::parse().command {
        Command::Sweep(args) => sweep(args),
        Command::Bands(args) => bands(args),
        Command::Verify(args) => verify(args.what),
        Command::Oracle(args) => oracle(args),
    }
}

fn load_config(path: &PathBuf) -> Result<ChainSpec, Error> {
    parse_chain_config(&std::fs::read_to_string(path)?)
}

fn parse_alphas(s: &str) -> Result<Vec<f64>, Error> {
    s.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad alpha `{tok}`")))
        })
        .collect()
}

fn sweep(args: SweepArgs) -> Result<ExitCode, Error> {
    let spec = load_config(&args.config)?;
    let alphas = parse_alphas(&args.alphas)?;
    let overrides = MeshOverrides {
        refine: args.refine,
        ..MeshOverrides::default()
    };
    let (rows, errors) = run_alpha_sweep(&spec, &alphas, &overrides, args.jobs);
    let csv = write_csv(&rows);
    match &args.out {
        Some(path) => std::fs::write(path, &csv)?,
        None => print!("{csv}"),
    }
    for (alpha, msg) in &errors {
        eprintln!("alpha = {alpha}: {msg}");
    }
    Ok(if errors.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(3)
    })
}

fn parse_interval(s: &str) -> Result<(f64, f64), Error> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(Error::Parse(format!("interval `{s}` must be `lo,hi`")));
    }
    let lo = parts[0]
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad number `{}`", parts[0])))?;
    let hi = parts[1]
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad number `{}`", parts[1])))?;
    Ok((lo, hi))
}

fn bands(args: BandsArgs) -> Result<ExitCode, Error> {
    let rows = parse_csv(&std::fs::read_to_string(&args.input)?)?;
    let band_prime = parse_interval(&args.band_prime)?;
    let band_double = parse_interval(&args.band_double)?;
    let assignment: Vec<BandAssignment> = args
        .assign
        .split(',')
        .map(|tok| match tok.trim() {
            "'" => Ok(BandAssignment::Prime),
            "''" => Ok(BandAssignment::DoublePrime),
            other => Err(Error::Parse(format!("bad band assignment `{other}`"))),
        })
        .collect::<Result<_, _>>()?;
    let report = check_bands(&rows, band_prime, band_double, &assignment)?;
    for h in &report.hits {
        let band = match h.assigned {
            BandAssignment::Prime => "I'",
            BandAssignment::DoublePrime => "I''",
        };
        println!(
            "alpha = {}: ratio = {} -> {band} {}",
            h.alpha,
            h.ratio,
            if h.hit {
                "hit".to_string()
            } else {
                format!("MISS (distance {})", h.distance)
            }
        );
    }
    println!(
        "separation = {}, verdict = {}",
        report.separation,
        if report.verdict { "PASS" } else { "FAIL" }
    );
    Ok(if report.verdict {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn verify(cmd: VerifyCommand) -> Result<ExitCode, Error> {
    match cmd {
        VerifyCommand::Scaling { config, alpha, t } => {
            let spec = load_config(&config)?;
            let dev = verify_scaling(&spec, alpha, t)?;
            println!("scaling deviation = {dev}");
            Ok(if dev <= 1e-10 {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        VerifyCommand::Bracketing { config, alpha } => {
            let spec = load_config(&config)?;
            let (e_n, e_d) = verify_bracketing(spec.block_odd, alpha)?;
            println!("E_neumann = {e_n}, E_dirichlet = {e_d}");
            Ok(if e_n <= e_d + 1e-12 {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        VerifyCommand::Plateau { config, alphas } => {
            let spec = load_config(&config)?;
            let alphas = parse_alphas(&alphas)?;
            println!("alpha,ratio_neumann,ratio_dirichlet,n_vertices");
            for row in plateau_study(spec.block_odd, &alphas)? {
                println!(
                    "{},{},{},{}",
                    row.alpha, row.ratio_neumann, row.ratio_dirichlet, row.n_vertices
                );
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn oracle(args: OracleArgs) -> Result<ExitCode, Error> {
    let need = |n: usize| -> Result<(), Error> {
        if args.args.len() == n {
            Ok(())
        } else {
            Err(Error::Parse(format!(
                "oracle `{}` takes {n} argument(s), got {}",
                args.name,
                args.args.len()
            )))
        }
    };
    let a = &args.args;
    let value = match args.name.as_str() {
        // halfline <alpha> <T>
        "halfline" => {
            need(2)?;
            oracles::halfline_quotient(a[0], a[1], 2048)?
        }
        // interval-rn <ell> <alpha>
        "interval-rn" => {
            need(2)?;
            oracles::interval_robin_neumann(a[0], a[1])?
        }
        // interval-rr <ell> <alpha>
        "interval-rr" => {
            need(2)?;
            oracles::interval_robin_robin(a[0], a[1])?
        }
        // disk <R> <alpha>
        "disk" => {
            need(2)?;
            oracles::disk_robin(a[0], a[1])?
        }
        // sector <theta_deg> <alpha> <T>
        "sector" => {
            need(3)?;
            oracles::sector_quotient(a[0].to_radians(), a[1], a[2])?
        }
        // trial <theta_deg> <L> <eps> <M> <alpha>
        "trial" => {
            need(5)?;
            let params = SectorBlockParams::new(a[0].to_radians(), a[1], a[2], a[3])?;
            oracles::lemma4_trial_quotient(params, a[4])?
        }
        other => {
            return Err(Error::Parse(format!(
                "unknown oracle `{other}` (expected halfline, interval-rn, interval-rr, disk, sector, trial)"
            )))
        }
    };
    println!("{value}");
    Ok(ExitCode::SUCCESS)
}
