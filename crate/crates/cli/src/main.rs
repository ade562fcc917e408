//! `bohr`: certified enclosures of the radius bounds, Sidon constant
//! estimation, and verification runs, emitted as CSV or JSON.
//!
//! Exit status: 0 success, 2 configuration error, 3 numeric
//! non-convergence, 4 cache I/O failure.

mod rows;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use bohr_core::cache;
use bohr_core::multiindex::MultiIndex;
use bohr_core::polynorms::{norm_sup_certified, HomogeneousPolynomial, TruncatedPowerSeries};
use bohr_core::radii::{bohr_bounds_report, solve_gamma_bounds, solve_root_detailed, SeriesSpec};
use bohr_core::sidon::{build_coefficient_table, sidon_bounds, CoefficientBounds};
use bohr_core::spaces::Exponent;
use bohr_core::verify::{
    corner_strictness_check, moebius_bohr_scan, moebius_family, wiener_bound_check, Verdict,
    VerdictWitness,
};
use bohr_core::SpaceSpec;
use num_complex::Complex64;
use rows::{Cell, Report};

const CACHE_ENV: &str = "BOHR_CACHE_PATH";

#[derive(Parser)]
#[command(
    name = "bohr",
    version,
    about = "Certified enclosures of multidimensional Bohr radius bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enclose the root of x + Σ √N_m(n) x^m = λ/2 for each (n, λ).
    Beta(BetaArgs),
    /// Enclose γ_n between the two table-side roots for each (n, λ).
    Gamma(GammaArgs),
    /// Two-sided Sidon constant estimates for each (m, n).
    Sidon(SidonArgs),
    /// The comparison table: β, γ enclosure, and the asymptotic reference.
    Table(TableArgs),
    /// Run the verification battery (Bohr scan, Wiener bound, corner
    /// strictness) and emit verdict rows.
    Verify(VerifyArgs),
}

#[derive(Args, Clone)]
struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write to a file instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Clone)]
struct SpaceArgs {
    /// Domain exponent q (a real >= 1 or "inf").
    #[arg(long, default_value = "inf")]
    q: Exponent,
    /// Codomain dimension d (1 = scalar).
    #[arg(long, default_value_t = 1)]
    d: usize,
    /// Codomain exponent p (a real >= 1 or "inf").
    #[arg(long, default_value = "2")]
    p: Exponent,
}

impl SpaceArgs {
    fn spec(&self, n: usize) -> Result<SpaceSpec, CliError> {
        SpaceSpec::new(n, self.q, self.d, self.p).map_err(CliError::Core)
    }
}

#[derive(Args, Clone)]
struct SearchArgs {
    /// Largest explicit series degree in the coefficient table.
    #[arg(long = "m-max", default_value_t = 8)]
    m_max: u32,
    /// Witness-search budget in candidate evaluations (0 = trivial bounds).
    #[arg(long, default_value_t = 0)]
    budget: u64,
    /// Search seed.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Sidon estimate cache path (default: $BOHR_CACHE_PATH if set).
    #[arg(long)]
    cache: Option<PathBuf>,
}

impl SearchArgs {
    fn cache_path(&self) -> Option<PathBuf> {
        self.cache
            .clone()
            .or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))
    }
}

#[derive(Args)]
struct BetaArgs {
    /// n or an inclusive range ("4" or "2..30") or a comma list.
    #[arg(long)]
    n: String,
    /// Comma list of λ values (each >= 1).
    #[arg(long, default_value = "1")]
    lambda: String,
    /// Enclosure width target.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct GammaArgs {
    #[arg(long)]
    n: String,
    #[arg(long, default_value = "1")]
    lambda: String,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[command(flatten)]
    space: SpaceArgs,
    #[command(flatten)]
    search: SearchArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SidonArgs {
    /// m or an inclusive range or comma list.
    #[arg(long)]
    m: String,
    #[arg(long)]
    n: String,
    #[command(flatten)]
    space: SpaceArgs,
    /// Witness-search budget in candidate evaluations.
    #[arg(long, default_value_t = 0)]
    budget: u64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Sidon estimate cache path (default: $BOHR_CACHE_PATH if set).
    #[arg(long)]
    cache: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct TableArgs {
    #[arg(long)]
    n: String,
    #[arg(long, default_value = "1")]
    lambda: String,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// K(D, X, λ) when known: adds the upper bound γ_hi/K to the report.
    #[arg(long = "k-disk")]
    k_disk: Option<f64>,
    #[command(flatten)]
    space: SpaceArgs,
    #[command(flatten)]
    search: SearchArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct VerifyArgs {
    /// Which checks to run.
    #[arg(long, value_enum, default_value_t = CheckSet::All)]
    check: CheckSet,
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    /// Radii for the disc-automorphism scan (comma list).
    #[arg(long, default_value = "0.3333333333333333,0.35")]
    r: String,
    /// Parameter grid size for the scan.
    #[arg(long, default_value_t = 999)]
    grid: usize,
    /// Truncation degree of the scanned family.
    #[arg(long, default_value_t = 60)]
    trunc: u32,
    /// Monte-Carlo samples per check.
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum CheckSet {
    All,
    Moebius,
    Wiener,
    Corner,
}

#[derive(Debug)]
enum CliError {
    Config(String),
    Core(bohr_core::Error),
}

impl From<bohr_core::Error> for CliError {
    fn from(e: bohr_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Core(e) => match e {
                bohr_core::Error::NonConvergence { .. }
                | bohr_core::Error::ToleranceTooTight { .. } => 3,
                bohr_core::Error::CacheIo(_) | bohr_core::Error::CacheFormat(_) => 4,
                _ => 2,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Config(m) => m.clone(),
            CliError::Core(e) => e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (result, command_name, output) = match cli.command {
        Command::Beta(args) => (run_beta(&args), "beta", args.output),
        Command::Gamma(args) => {
            let out = args.output.clone();
            (run_gamma(&args), "gamma", out)
        }
        Command::Sidon(args) => {
            let out = args.output.clone();
            (run_sidon(&args), "sidon", out)
        }
        Command::Table(args) => {
            let out = args.output.clone();
            (run_table(&args), "table", out)
        }
        Command::Verify(args) => {
            let out = args.output.clone();
            (run_verify(&args), "verify", out)
        }
    };

    match result {
        Ok(report) => match emit(&report, command_name, &output) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("bohr: output error: {e}");
                ExitCode::from(4)
            }
        },
        Err(e) => {
            eprintln!("bohr: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

fn emit(report: &Report, command: &str, output: &OutputArgs) -> std::io::Result<()> {
    let mut buffer: Vec<u8> = Vec::new();
    match output.format {
        Format::Csv => report.write_csv(&mut buffer, command, cache::unix_now())?,
        Format::Json => report.write_json(&mut buffer)?,
    }
    match &output.output {
        Some(path) => std::fs::write(path, &buffer),
        None => std::io::stdout().write_all(&buffer),
    }
}

/// Inclusive range "a..b", comma list "a,b,c", or a single value.
fn parse_usize_list(text: &str, name: &str) -> Result<Vec<usize>, CliError> {
    let text = text.trim();
    let parse_one = |s: &str| -> Result<usize, CliError> {
        s.trim()
            .parse::<usize>()
            .map_err(|_| CliError::Config(format!("--{name}: cannot parse {s:?} as an integer")))
    };
    let values = if let Some((a, b)) = text.split_once("..") {
        let (a, b) = (parse_one(a)?, parse_one(b)?);
        if a > b {
            return Err(CliError::Config(format!(
                "--{name}: empty range {a}..{b} (start exceeds end)"
            )));
        }
        (a..=b).collect()
    } else {
        text.split(',')
            .map(parse_one)
            .collect::<Result<Vec<_>, _>>()?
    };
    if values.is_empty() {
        return Err(CliError::Config(format!("--{name}: empty list")));
    }
    if values.iter().any(|&v| v < 1) {
        return Err(CliError::Config(format!("--{name}: values must be >= 1")));
    }
    Ok(values)
}

fn parse_f64_list(text: &str, name: &str, min: f64) -> Result<Vec<f64>, CliError> {
    let values = text
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Config(format!("--{name}: cannot parse {s:?} as a number")))
        })
        .collect::<Result<Vec<f64>, _>>()?;
    if values.is_empty() {
        return Err(CliError::Config(format!("--{name}: empty list")));
    }
    for &v in &values {
        if !v.is_finite() || v < min {
            return Err(CliError::Config(format!(
                "--{name}: value {v} out of range (must be >= {min})"
            )));
        }
    }
    Ok(values)
}

fn check_tol(tol: f64) -> Result<(), CliError> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(CliError::Config(format!("--tol: {tol} must be > 0")))
    }
}

fn run_beta(args: &BetaArgs) -> Result<Report, CliError> {
    check_tol(args.tol)?;
    let ns = parse_usize_list(&args.n, "n")?;
    let lambdas = parse_f64_list(&args.lambda, "lambda", 1.0)?;

    let mut report = Report::new(vec!["n", "lambda", "beta_lo", "beta_hi", "iterations"]);
    for &n in &ns {
        for &lambda in &lambdas {
            let series = SeriesSpec::sqrt_n(n, lambda)?;
            let solve = solve_root_detailed(&series, args.tol)?;
            report.push(vec![
                Cell::Int(n as u64),
                Cell::Num(lambda),
                Cell::Num(solve.interval.lo),
                Cell::Num(solve.interval.hi),
                Cell::Int(u64::from(solve.iterations)),
            ]);
        }
    }
    Ok(report)
}

fn build_table(
    n: usize,
    space: &SpaceArgs,
    search: &SearchArgs,
) -> Result<(CoefficientBounds, String), CliError> {
    let spec = space.spec(n)?;
    let cache_path = search.cache_path();
    let build = build_coefficient_table(
        n,
        search.m_max,
        &spec,
        search.budget,
        search.seed,
        cache_path.as_deref(),
    )?;
    let mut provenance = if search.budget == 0 {
        "trivial".to_string()
    } else {
        format!("search budget={} seed={}", search.budget, search.seed)
    };
    if cache_path.is_some() {
        provenance.push_str(&format!(
            " cache hits={} misses={}",
            build.cache_hits, build.cache_misses
        ));
    }
    Ok((build.bounds, provenance))
}

fn run_gamma(args: &GammaArgs) -> Result<Report, CliError> {
    check_tol(args.tol)?;
    let ns = parse_usize_list(&args.n, "n")?;
    let lambdas = parse_f64_list(&args.lambda, "lambda", 1.0)?;

    let mut report = Report::new(vec![
        "n",
        "lambda",
        "gamma_lo_lo",
        "gamma_lo_hi",
        "gamma_hi_lo",
        "gamma_hi_hi",
        "tail_m_max",
        "table_provenance",
    ]);
    for &n in &ns {
        let (table, provenance) = build_table(n, &args.space, &args.search)?;
        for &lambda in &lambdas {
            let gamma = solve_gamma_bounds(n, lambda, &table, args.tol)?;
            report.push(vec![
                Cell::Int(n as u64),
                Cell::Num(lambda),
                Cell::Num(gamma.lo.lo),
                Cell::Num(gamma.lo.hi),
                Cell::Num(gamma.hi.lo),
                Cell::Num(gamma.hi.hi),
                Cell::Int(u64::from(table.m_max())),
                Cell::Text(provenance.clone()),
            ]);
        }
    }
    Ok(report)
}

fn run_sidon(args: &SidonArgs) -> Result<Report, CliError> {
    let ms = parse_usize_list(&args.m, "m")?;
    let ns = parse_usize_list(&args.n, "n")?;
    let cache_path = args
        .cache
        .clone()
        .or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from));

    let mut report = Report::new(vec!["m", "n", "lower", "upper", "method", "witness_hash"]);
    let mut fresh = Vec::new();
    for &m in &ms {
        for &n in &ns {
            let spec = args.space.spec(n)?;
            let key = cache::CacheKey {
                m: m as u32,
                n,
                q: spec.domain_exponent,
                d: spec.codomain_dim,
                p: spec.codomain_exponent,
                budget: args.budget,
                seed: args.seed,
            };
            let record = match &cache_path {
                Some(path) => cache::lookup(&cache::read_records(path)?.records, &key),
                None => None,
            };
            let (lower, upper, method, hash) = match record {
                Some(rec) => (
                    rec.lower,
                    rec.upper,
                    rec.method.to_string(),
                    rec.witness_hash.clone(),
                ),
                None => {
                    let est = sidon_bounds(m as u32, &spec, args.budget, args.seed)?;
                    let hash = est.witness_hash();
                    fresh.push(est.to_cache_record());
                    (est.lower, est.upper, est.method.to_string(), hash)
                }
            };
            report.push(vec![
                Cell::Int(m as u64),
                Cell::Int(n as u64),
                Cell::Num(lower),
                Cell::Num(upper),
                Cell::Text(method),
                Cell::Text(hash.unwrap_or_else(|| "-".to_string())),
            ]);
        }
    }
    if let (Some(path), false) = (&cache_path, fresh.is_empty()) {
        cache::upsert(path, &fresh)?;
    }
    Ok(report)
}

fn run_table(args: &TableArgs) -> Result<Report, CliError> {
    check_tol(args.tol)?;
    let ns = parse_usize_list(&args.n, "n")?;
    let lambdas = parse_f64_list(&args.lambda, "lambda", 1.0)?;

    let mut report = Report::new(vec![
        "n",
        "q",
        "lambda",
        "beta_lo",
        "beta_hi",
        "gamma_lo_lo",
        "gamma_lo_hi",
        "gamma_hi_lo",
        "gamma_hi_hi",
        "asymptotic_ref",
        "ratio_lo",
        "ratio_hi",
    ]);
    for &n in &ns {
        let spec = args.space.spec(n)?;
        let (table, _) = build_table(n, &args.space, &args.search)?;
        for &lambda in &lambdas {
            let full = bohr_bounds_report(n, lambda, &spec, &table, args.k_disk, args.tol)?;
            let (ref_cell, ratio_lo, ratio_hi) = match full.asymptotic_ref {
                Some(r) if r > 0.0 => (
                    Cell::Num(r),
                    Cell::Num(full.beta.lo / r),
                    Cell::Num(full.beta.hi / r),
                ),
                _ => (Cell::Empty, Cell::Empty, Cell::Empty),
            };
            report.push(vec![
                Cell::Int(n as u64),
                Cell::Text(args.space.q.to_string()),
                Cell::Num(lambda),
                Cell::Num(full.beta.lo),
                Cell::Num(full.beta.hi),
                Cell::Num(full.gamma.lo.lo),
                Cell::Num(full.gamma.lo.hi),
                Cell::Num(full.gamma.hi.lo),
                Cell::Num(full.gamma.hi.hi),
                ref_cell,
                ratio_lo,
                ratio_hi,
            ]);
        }
    }
    Ok(report)
}

fn verdict_row(check: &str, instance: String, verdict: &Verdict) -> Vec<Cell> {
    let witness = match &verdict.witness {
        Some(VerdictWitness::Parameter(a)) => format!("a={}", rows::fmt_num(*a)),
        Some(VerdictWitness::Point(_)) => "point".to_string(),
        None => "-".to_string(),
    };
    vec![
        Cell::Text(check.to_string()),
        Cell::Text(instance),
        Cell::Text(verdict.kind.to_string()),
        Cell::Num(verdict.margin),
        Cell::Text(verdict.certified.to_string()),
        Cell::Text(witness),
    ]
}

fn run_verify(args: &VerifyArgs) -> Result<Report, CliError> {
    if args.lambda < 1.0 {
        return Err(CliError::Config(format!(
            "--lambda: {} must be >= 1",
            args.lambda
        )));
    }
    let radii_list = parse_f64_list(&args.r, "r", 0.0)?;
    let mut report = Report::new(vec![
        "check",
        "instance",
        "verdict",
        "margin",
        "certified",
        "witness",
    ]);

    let want = |set: CheckSet| args.check == CheckSet::All || args.check == set;

    if want(CheckSet::Moebius) {
        for &r in &radii_list {
            if !(0.0..=1.0).contains(&r) {
                return Err(CliError::Config(format!("--r: {r} outside [0, 1]")));
            }
            let scan = moebius_bohr_scan(r, args.lambda, args.grid, args.trunc)?;
            report.push(verdict_row(
                "moebius-scan",
                format!(
                    "r={} grid={} M={} holds={} violated={}",
                    rows::fmt_num(r),
                    scan.grid,
                    scan.truncation,
                    scan.holds,
                    scan.violated
                ),
                &scan.worst,
            ));
        }
    }

    if want(CheckSet::Wiener) {
        // Equality case: the m = 1 slice of a disc automorphism meets the
        // bound exactly.
        let f = moebius_family(0.9, args.trunc)?;
        let v = wiener_bound_check(&f, 1, 1.0, args.samples, args.seed)?;
        report.push(verdict_row("wiener", "moebius a=0.9 m=1".to_string(), &v));

        // Certified-normalized random instance on the bidisk.
        let (f, m) = wiener_instance(args.seed)?;
        let cap = bohr_core::sidon::sqrt_count_cap(m, 2)?;
        let v = wiener_bound_check(&f, m, cap, args.samples, args.seed ^ 0xA5)?;
        report.push(verdict_row(
            "wiener",
            format!("random n=2 m={m} sup<=0.9"),
            &v,
        ));
    }

    if want(CheckSet::Corner) {
        let spec = SpaceSpec::scalar_polydisk(2);
        let m = 3u32;
        let q = HomogeneousPolynomial::new(
            m,
            spec,
            [
                (
                    MultiIndex::corner(2, 0, m).map_err(CliError::Core)?,
                    vec![Complex64::new(1.0, 0.0)],
                ),
                (
                    MultiIndex::corner(2, 1, m).map_err(CliError::Core)?,
                    vec![Complex64::new(1.0, 0.0)],
                ),
            ],
        )?;
        let z = vec![Complex64::new(0.6, 0.0), Complex64::new(0.6, 0.0)];
        let v = corner_strictness_check(&q, &z, args.samples, args.seed)?;
        report.push(verdict_row(
            "corner",
            "z1^3 + z2^3 at z=(0.6 0.6)".to_string(),
            &v,
        ));
    }

    Ok(report)
}

/// A deterministic random series on the bidisk with a certified sup bound:
/// constant plus a degree-m slice, scaled so ‖x_0‖ + certified-sup <= 0.9.
fn wiener_instance(seed: u64) -> Result<(TruncatedPowerSeries, u32), CliError> {
    let spec = SpaceSpec::scalar_polydisk(2);
    let m = 2u32;
    // Small fixed pseudo-random coefficients derived from the seed.
    let mut state = seed | 1;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    };
    let indices = bohr_core::multiindex::enumerate_indices(m, 2)?;
    let slice_coeffs: Vec<(MultiIndex, Vec<Complex64>)> = indices
        .into_iter()
        .map(|alpha| (alpha, vec![Complex64::new(next(), next())]))
        .collect();
    let slice = HomogeneousPolynomial::new(m, spec, slice_coeffs.clone())?;
    let sup = norm_sup_certified(&slice, 64)?;
    let x0 = 0.3;
    let scale = (0.9 - x0) / sup.hi;

    let mut coeffs = vec![(
        MultiIndex::new(vec![0, 0]).map_err(CliError::Core)?,
        vec![Complex64::new(x0, 0.0)],
    )];
    for (alpha, x) in slice_coeffs {
        coeffs.push((alpha, x.iter().map(|c| c * scale).collect()));
    }
    Ok((TruncatedPowerSeries::new(m, spec, coeffs)?, m))
}
