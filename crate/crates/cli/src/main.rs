use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sgad_cli::check::validate_channel;
use sgad_cli::grid::{parse_bracket, parse_values};
use sgad_cli::output::{sink, write_rows, Format};
use sgad_cli::scan::{self, Scan, DEFAULT_RESOLUTION};
use sgad_cli::sweep::{self, Measures, Source, SweepConfig, TimeSpec, DEFAULT_OMEGA_T};
use sgad_cli::{error_code, exit, status_code};
use sgad_core::sdp::SolverOptions;
use sgad_core::states::{make_noisy, StateFile};
use sgad_core::witness::gmn;
use sgad_core::{DensityMatrix, Error, Family, NoisyFamilySpec, Result};

/// Three-qubit SGAD channels with memory: evolution, asymptotic states and
/// genuine multipartite negativity.
#[derive(Parser)]
#[command(name = "sgad", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check Kraus completeness, complete positivity and the closed forms against RK4.
    Validate(ValidateArgs),
    /// Evolve a state for finite times and measure it.
    Evolve(EvolveArgs),
    /// Measure asymptotic states over a (parameter, n, μ) grid.
    Asymptotic(AsymptoticArgs),
    /// Genuine multipartite negativity of one state.
    Gmn(GmnArgs),
    /// Bisect for the gmn > 1e-6 boundary along α, β or μ.
    Scan(ScanArgs),
}

/// Initial state: a family with its parameter, or a state file.
#[derive(Args)]
struct StateArgs {
    /// ghz1, ghz2, ghz3, ghz4, w or wtilde.
    #[arg(long)]
    family: Option<Family>,
    /// Pure-state weight for GHZ families (list or start:stop:step).
    #[arg(long)]
    alpha: Option<String>,
    /// Noise weight for W families (list or start:stop:step).
    #[arg(long)]
    beta: Option<String>,
    /// JSON state file (matrix or family form).
    #[arg(long, conflicts_with = "family")]
    state: Option<PathBuf>,
}

#[derive(Args)]
struct SolverArgs {
    /// Interior-point tolerance.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
}

impl SolverArgs {
    fn options(&self) -> SolverOptions {
        SolverOptions {
            tol: self.tol,
            ..SolverOptions::default()
        }
    }
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long, default_value_t = 1.0)]
    n: f64,
    #[arg(long, default_value_t = 0.0)]
    m: f64,
    #[arg(long = "omega-t", default_value = "0.1,1,10")]
    omega_t: String,
    /// csv prints a text report; json prints the machine-readable check list.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct EvolveArgs {
    #[command(flatten)]
    state: StateArgs,
    #[arg(long, default_value = "1")]
    n: String,
    #[arg(long, default_value = "0")]
    m: String,
    #[arg(long, default_value = "0")]
    mu: String,
    #[arg(long = "omega-t", default_value_t = DEFAULT_OMEGA_T.to_string())]
    omega_t: String,
    /// Subset of gmn, neg, xstate.
    #[arg(long, default_value = "gmn,neg,xstate")]
    measures: String,
    #[arg(long, default_value_t = default_workers())]
    workers: usize,
    #[command(flatten)]
    solver: SolverArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct AsymptoticArgs {
    #[command(flatten)]
    state: StateArgs,
    #[arg(long, default_value = "1")]
    n: String,
    /// Explicit μ values.
    #[arg(long, conflicts_with = "grid")]
    mu: Option<String>,
    /// μ grid as start:stop:step.
    #[arg(long, default_value = "0:1:0.01")]
    grid: String,
    #[arg(long, default_value = "gmn,neg,xstate")]
    measures: String,
    #[arg(long, default_value_t = default_workers())]
    workers: usize,
    #[command(flatten)]
    solver: SolverArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct GmnArgs {
    #[command(flatten)]
    state: StateArgs,
    #[command(flatten)]
    solver: SolverArgs,
    /// Write the optimal witness to this file.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum Vary {
    Alpha,
    Beta,
    Mu,
}

#[derive(Args)]
struct ScanArgs {
    #[command(flatten)]
    state: StateArgs,
    #[arg(long, value_enum)]
    vary: Vary,
    /// Search interval lo:hi.
    #[arg(long, default_value = "0:1")]
    bracket: String,
    /// Scan asymptotic states at this n; initial states when absent.
    #[arg(long)]
    n: Option<f64>,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
    resolution: f64,
    #[command(flatten)]
    solver: SolverArgs,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn input<T>(r: std::io::Result<T>) -> Result<T> {
    r.map_err(|e| Error::InvalidInput(e.to_string()))
}

/// Family parameter list; Fig. 1/2 style defaults when none is given.
fn family_params(family: Family, args: &StateArgs) -> Result<Vec<f64>> {
    let (given, wrong, name) = if family.is_ghz() {
        (&args.alpha, &args.beta, "--beta")
    } else {
        (&args.beta, &args.alpha, "--alpha")
    };
    if wrong.is_some() {
        return Err(Error::InvalidInput(format!("{name} does not apply to family {family}")));
    }
    match given {
        Some(text) => parse_values(text),
        None if family.is_ghz() => Ok(vec![1.0, 0.95, 0.9]),
        None => Ok(vec![0.0, 0.2, 0.522]),
    }
}

fn single(values: Vec<f64>, flag: &str) -> Result<f64> {
    match values.as_slice() {
        [x] => Ok(*x),
        _ => Err(Error::InvalidInput(format!("{flag} takes a single value here"))),
    }
}

fn source(args: &StateArgs) -> Result<Source> {
    match (&args.state, args.family) {
        (Some(path), _) => {
            let text = input(fs::read_to_string(path))?;
            let file = StateFile::parse(&text)?;
            match file.family_spec()? {
                Some(spec) => Ok(Source::Family {
                    family: spec.family(),
                    params: vec![spec.param()],
                }),
                None => Ok(Source::State(file.to_density()?)),
            }
        }
        (None, Some(family)) => Ok(Source::Family {
            family,
            params: family_params(family, args)?,
        }),
        (None, None) => Err(Error::InvalidInput("give --family or --state".into())),
    }
}

fn single_state(args: &StateArgs) -> Result<DensityMatrix> {
    match source(args)? {
        Source::State(rho) => Ok(rho),
        Source::Family { family, params } => {
            let x = single(params, if family.is_ghz() { "--alpha" } else { "--beta" })?;
            Ok(make_noisy(&NoisyFamilySpec::new(family, x)?))
        }
    }
}

fn cmd_validate(args: ValidateArgs) -> Result<i32> {
    let report = validate_channel(args.n, args.m, &parse_values(&args.omega_t)?)?;
    let mut out = input(sink(None))?;
    match args.format {
        Format::Json => input(serde_json::to_writer_pretty(&mut out, &report).map_err(std::io::Error::other))?,
        Format::Csv => {
            input(writeln!(out, "channel checks at n = {}, m = {}", report.n, report.m))?;
            for check in &report.checks {
                input(writeln!(out, "{check}"))?;
            }
            let failures = report.failures().count();
            if failures == 0 {
                input(writeln!(out, "all {} checks passed", report.checks.len()))?;
            } else {
                input(writeln!(out, "{failures} of {} checks failed", report.checks.len()))?;
            }
        }
    }
    input(writeln!(out))?;
    input(out.flush())?;
    Ok(if report.passed() { exit::SUCCESS } else { exit::VALIDATION_FAILURE })
}

fn run_sweep(cfg: SweepConfig, output: &OutputArgs, asymptotic: bool) -> Result<i32> {
    let rows = sweep::run(&cfg)?;
    let mut out = input(sink(output.out.as_deref()))?;
    if asymptotic {
        let records: Vec<_> = rows.iter().map(|r| r.asymptotic_record()).collect();
        input(write_rows(&records, output.format, &mut out))?;
    } else {
        let records: Vec<_> = rows.iter().map(|r| r.evolve_record()).collect();
        input(write_rows(&records, output.format, &mut out))?;
    }
    input(out.flush())?;
    for row in &rows {
        if let sweep::Outcome::Failed { message, .. } = &row.result.outcome {
            eprintln!("row n={} μ={} failed: {message}", row.n, row.mu);
        }
    }
    Ok(sweep::exit_code(&rows))
}

fn cmd_evolve(args: EvolveArgs) -> Result<i32> {
    let cfg = SweepConfig {
        source: source(&args.state)?,
        ns: parse_values(&args.n)?,
        ms: parse_values(&args.m)?,
        mus: parse_values(&args.mu)?,
        time: TimeSpec::Finite(parse_values(&args.omega_t)?),
        measures: Measures::parse(&args.measures)?,
        workers: args.workers,
        solver: args.solver.options(),
    };
    run_sweep(cfg, &args.output, false)
}

fn cmd_asymptotic(args: AsymptoticArgs) -> Result<i32> {
    let mus = match &args.mu {
        Some(text) => parse_values(text)?,
        None => parse_values(&args.grid)?,
    };
    let cfg = SweepConfig {
        source: source(&args.state)?,
        ns: parse_values(&args.n)?,
        ms: vec![0.0],
        mus,
        time: TimeSpec::Asymptotic,
        measures: Measures::parse(&args.measures)?,
        workers: args.workers,
        solver: args.solver.options(),
    };
    run_sweep(cfg, &args.output, true)
}

fn cmd_gmn(args: GmnArgs) -> Result<i32> {
    let rho = single_state(&args.state)?;
    let report = gmn(&rho, &args.solver.options())?;
    let mut out = input(sink(None))?;
    match args.format {
        Format::Json => {
            let value = serde_json::json!({
                "gmn": report.value,
                "raw_optimum": report.raw_optimum,
                "neg_A_BC": report.negativities[0],
                "neg_B_AC": report.negativities[1],
                "neg_C_AB": report.negativities[2],
                "status": report.status.as_str(),
                "iterations": report.iterations,
            });
            input(writeln!(out, "{}", serde_json::to_string_pretty(&value).expect("json value")))?;
        }
        Format::Csv => {
            input(writeln!(out, "gmn = {:.6}", report.value))?;
            let [a, b, c] = report.negativities;
            input(writeln!(out, "negativity A|BC = {a:.6}, B|AC = {b:.6}, C|AB = {c:.6}"))?;
            input(writeln!(out, "status = {} ({} iterations)", report.status, report.iterations))?;
            if !report.trusted() {
                input(writeln!(out, "warning: solver did not reach its tolerances; value is untrusted"))?;
            }
        }
    }
    input(out.flush())?;
    if let Some(path) = &args.out {
        input(fs::write(path, report.witness_json()))?;
    }
    Ok(status_code(report.status))
}

fn cmd_scan(args: ScanArgs) -> Result<i32> {
    let family = args
        .state
        .family
        .ok_or_else(|| Error::InvalidInput("scan needs --family".into()))?;
    let param_flag = if family.is_ghz() { Vary::Alpha } else { Vary::Beta };
    let scan = match (args.vary, args.n) {
        (Vary::Mu, Some(n)) => {
            if args.mu.is_some() {
                return Err(Error::InvalidInput("--mu is the scanned variable".into()));
            }
            let params = family_params(family, &args.state)?;
            let flag = if family.is_ghz() { "--alpha" } else { "--beta" };
            Scan::AsymptoticMu {
                family,
                param: single(params, flag)?,
                n,
            }
        }
        (Vary::Mu, None) => return Err(Error::InvalidInput("scanning μ needs --n".into())),
        (v, _) if v != param_flag => {
            return Err(Error::InvalidInput(format!(
                "family {family} is parametrized by {}",
                if family.is_ghz() { "alpha" } else { "beta" }
            )))
        }
        (_, None) => Scan::Initial { family },
        (_, Some(n)) => Scan::AsymptoticParam {
            family,
            n,
            mu: args
                .mu
                .ok_or_else(|| Error::InvalidInput("asymptotic scans over α/β need --mu".into()))?,
        },
    };
    let report = scan::run(scan, parse_bracket(&args.bracket)?, args.resolution, &args.solver.options())?;
    let mut out = input(sink(None))?;
    match args.format {
        Format::Json => input(writeln!(out, "{}", serde_json::to_string_pretty(&report).expect("json value")))?,
        Format::Csv => match report.boundary {
            Some(b) => input(writeln!(
                out,
                "boundary {} = {b:.4} (bracket [{:.6}, {:.6}], gmn {:.3e} / {:.3e}, {} evaluations)",
                report.variable, report.lower, report.upper, report.gmn_lower, report.gmn_upper, report.evaluations
            ))?,
            None => input(writeln!(
                out,
                "no threshold in [{}, {}]: gmn {:.3e} at {}, {:.3e} at {}",
                report.bracket.0, report.bracket.1, report.gmn_lower, report.bracket.0, report.gmn_upper, report.bracket.1
            ))?,
        },
    }
    input(out.flush())?;
    Ok(if report.untrusted > 0 { exit::SOLVER_FAILURE } else { exit::SUCCESS })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Validate(a) => cmd_validate(a),
        Command::Evolve(a) => cmd_evolve(a),
        Command::Asymptotic(a) => cmd_asymptotic(a),
        Command::Gmn(a) => cmd_gmn(a),
        Command::Scan(a) => cmd_scan(a),
    };
    let code = match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            error_code(&e)
        }
    };
    ExitCode::from(code as u8)
}
