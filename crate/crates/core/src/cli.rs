//! Command-line front end. [`run`] returns the process exit code:
//! 0 pass, 1 property failure, 2 usage, 3 invalid seed, 4 io or parse error.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::analysis::{bounds_for, comparison_rows, optimality, BoundsReport, ComparisonRow};
use crate::construction::{
    build_ccc_family, build_qccs, canonical_seed, CodeFamily, FamilyKind, SeedSpec,
};
use crate::correlation::{shift_profile, write_shift_profile, Arithmetic, DEFAULT_ZERO_TOL};
use crate::error::Error;
use crate::io::{read_family, write_family, Format};
use crate::poly::{certify_hamiltonian_path, Params, Polynomial};
use crate::verify::verify_family;

// A closed stdout (e.g. piped into `head`) ends output quietly.
macro_rules! out {
    ($($arg:tt)*) => {{
        let _ = writeln!(io::stdout().lock(), $($arg)*);
    }};
}

pub const EXIT_PASS: i32 = 0;
pub const EXIT_PROPERTY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_SEED: i32 = 3;
pub const EXIT_IO: i32 = 4;

/// Environment variable overriding the worker thread count.
pub const THREADS_ENV: &str = "QCCS_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "qccs",
    version,
    about = "Generate and verify quasi-complementary code sets"
)]
pub struct Cli {
    /// Worker threads (default: QCCS_THREADS, else all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a family and write it to a file.
    Generate(GenerateArgs),
    /// Exhaustively check a family file.
    Verify(VerifyArgs),
    /// Lower bounds and optimality factor.
    Bounds(BoundsArgs),
    /// Per-shift correlation magnitudes of one code pair.
    Correlate(CorrelateArgs),
    /// Check a seed function against the path condition.
    CertifySeed(CertifyArgs),
}

#[derive(Debug, Args)]
pub struct ParamArgs {
    #[arg(long)]
    pub p: u32,
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub lambda: u32,
}

#[derive(Debug, Args)]
pub struct SeedArgs {
    /// Seed function as polynomial JSON.
    #[arg(long, conflicts_with = "seed_expr")]
    pub seed: Option<PathBuf>,
    /// Seed function as an expression such as "x1x2 + 2x0".
    #[arg(long)]
    pub seed_expr: Option<String>,
    /// Restricted indices J, comma separated (default 0..n-1).
    #[arg(long, value_delimiter = ',')]
    pub j: Option<Vec<usize>>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub seed: SeedArgs,
    /// Emit the single complete complementary set for --k.
    #[arg(long, requires = "k")]
    pub ccc_only: bool,
    #[arg(long, requires = "ccc_only")]
    pub k: Option<u32>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long, short)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub family: PathBuf,
    #[arg(long, default_value_t = DEFAULT_ZERO_TOL)]
    pub tolerance: f64,
    /// Decide zero values exactly instead of by tolerance.
    #[arg(long)]
    pub exact: bool,
    /// Report JSON destination (default stdout).
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[allow(non_snake_case)]
pub struct BoundsArgs {
    #[arg(long, requires_all = ["m", "n"], conflicts_with_all = ["K", "M", "L"])]
    pub p: Option<u32>,
    #[arg(long, requires = "p")]
    pub m: Option<usize>,
    #[arg(long, requires = "p")]
    pub n: Option<usize>,
    /// Alphabet size, only used for the comparison table (default p).
    #[arg(long, requires = "p")]
    pub lambda: Option<u32>,
    #[arg(long = "K", requires_all = ["M", "L", "theta"])]
    pub K: Option<usize>,
    #[arg(long = "M", requires = "K")]
    pub M: Option<usize>,
    #[arg(long = "L", requires = "K")]
    pub L: Option<usize>,
    /// Correlation magnitude to judge; with --p it is a measured value
    /// reported next to the guaranteed p^m.
    #[arg(long)]
    pub theta: Option<f64>,
    /// Full JSON report destination.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CorrelateArgs {
    pub family: PathBuf,
    /// Code indices `i,j` in file order.
    #[arg(long, value_delimiter = ',', num_args = 1, required = true)]
    pub pair: Vec<usize>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[command(flatten)]
    pub seed: SeedArgs,
    /// Needed with --seed-expr.
    #[arg(long)]
    pub p: Option<u32>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub lambda: Option<u32>,
    /// Check every restriction even when a single one would do.
    #[arg(long)]
    pub exhaustive: bool,
}

/// Failure of a subcommand, carrying its exit code.
#[derive(Debug)]
pub struct Exit {
    pub code: i32,
    pub message: String,
}

impl Exit {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Exit {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for Exit {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidSeed(_) => EXIT_SEED,
            Error::Io(_) | Error::Json(_) | Error::Csv(_) | Error::Format(_) => EXIT_IO,
            _ => EXIT_USAGE,
        };
        Exit::new(code, e.to_string())
    }
}

type CmdResult = std::result::Result<i32, Exit>;

fn io_exit(path: &Path, e: io::Error) -> Exit {
    Exit::new(EXIT_IO, format!("{}: {e}", path.display()))
}

fn read_text(path: &Path) -> std::result::Result<String, Exit> {
    fs::read_to_string(path).map_err(|e| io_exit(path, e))
}

fn write_text(path: Option<&Path>, text: &str) -> std::result::Result<(), Exit> {
    match path {
        Some(path) => fs::write(path, text).map_err(|e| io_exit(path, e)),
        None => {
            let _ = io::stdout().lock().write_all(text.as_bytes());
            Ok(())
        }
    }
}

fn configure_threads(flag: Option<usize>) -> std::result::Result<(), Exit> {
    let from_env = match std::env::var(THREADS_ENV) {
        Ok(v) => Some(v.trim().parse::<usize>().map_err(|_| {
            Exit::new(
                EXIT_USAGE,
                format!("{THREADS_ENV} must be a positive integer, got {v:?}"),
            )
        })?),
        Err(_) => None,
    };
    if let Some(threads) = flag.or(from_env) {
        if threads == 0 {
            return Err(Exit::new(EXIT_USAGE, "thread count must be positive"));
        }
        // A second call in the same process keeps the first pool.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    Ok(())
}

fn load_seed_function(
    args: &SeedArgs,
    p: u32,
    m: usize,
    lambda: u32,
) -> std::result::Result<Option<Polynomial>, Exit> {
    if let Some(path) = &args.seed {
        let f = Polynomial::from_json(&read_text(path)?)?;
        return Ok(Some(f));
    }
    if let Some(expr) = &args.seed_expr {
        return Ok(Some(Polynomial::parse(p, m, lambda, expr)?));
    }
    Ok(None)
}

fn cmd_generate(args: &GenerateArgs) -> CmdResult {
    let ParamArgs { p, m, n, lambda } = args.params;
    let params = Params::new(p, m, n, lambda)?;
    let seed = match load_seed_function(&args.seed, p, m, lambda)? {
        Some(f) => {
            let j = args.seed.j.clone().unwrap_or_else(|| (0..n).collect());
            SeedSpec::new(params, f, j)?
        }
        None => {
            if args.seed.j.is_some() {
                return Err(Exit::new(EXIT_USAGE, "--j needs --seed or --seed-expr"));
            }
            canonical_seed(params, None, None)?
        }
    };
    let family = match (args.ccc_only, args.k) {
        (true, Some(k)) => build_ccc_family(&seed, k)?,
        _ => build_qccs(&seed)?,
    };
    let file = fs::File::create(&args.output).map_err(|e| io_exit(&args.output, e))?;
    let mut out = BufWriter::new(file);
    write_family(&family, args.format, &mut out)?;
    out.flush().map_err(|e| io_exit(&args.output, e))?;
    let d = family.descriptor;
    out!(
        "K={} M={} L={} theta_bound={} lambda={} -> {}",
        d.K,
        d.M,
        d.L,
        d.theta_bound,
        d.alphabet,
        args.output.display()
    );
    Ok(EXIT_PASS)
}

fn load_family(path: &Path) -> std::result::Result<CodeFamily, Exit> {
    Ok(read_family(&read_text(path)?)?)
}

fn cmd_verify(args: &VerifyArgs) -> CmdResult {
    if args.tolerance.is_nan() || args.tolerance < 0.0 {
        return Err(Exit::new(EXIT_USAGE, "--tolerance must be nonnegative"));
    }
    let family = load_family(&args.family)?;
    let arithmetic = if args.exact {
        Arithmetic::Exact
    } else {
        Arithmetic::Float
    };
    let report = verify_family(&family, args.tolerance, arithmetic)?;
    write_text(args.output.as_deref(), &format!("{}\n", report.to_json()?))?;
    let kind = match family.kind {
        FamilyKind::Qccs => "qccs".to_string(),
        FamilyKind::Ccc { k } => format!("ccc k={k}"),
    };
    eprintln!(
        "{kind}: within-set {} zero-shift {} cross-set {} -> {}",
        verdict(report.within_set_pass),
        verdict(report.zero_shift_peak_pass),
        verdict(report.cross_set_pass),
        verdict(report.pass)
    );
    for f in &report.failures {
        eprintln!(
            "  {:?} codes {:?} tau {} |value| {:.6}",
            f.check, f.codes, f.tau, f.magnitude
        );
    }
    Ok(if report.pass {
        EXIT_PASS
    } else {
        EXIT_PROPERTY
    })
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

#[derive(serde::Serialize)]
struct BoundsOutput {
    guaranteed: Option<BoundsReport>,
    measured: Option<BoundsReport>,
    given: Option<BoundsReport>,
    comparison: Vec<ComparisonRow>,
}

fn print_report(label: &str, r: &BoundsReport) {
    let opt = |v: Option<f64>| v.map_or("n/a".to_string(), |x| format!("{x:.6}"));
    out!(
        "{label}: K={} M={} L={} theta={} welch={:.6} liu={} rho_welch={} rho_liu={} rho={} ({:?}) -> {}",
        r.K,
        r.M,
        r.L,
        r.theta,
        r.welch_bound,
        opt(r.liu_bound),
        opt(r.rho_welch),
        opt(r.rho_liu),
        opt(r.rho),
        r.applicable_bound,
        serde_json::to_value(r.classification)
            .ok()
            .and_then(|v| v.as_str().map(str::to_string))
            .unwrap_or_default()
    );
    for note in &r.notes {
        out!("  note: {note}");
    }
}

fn cmd_bounds(args: &BoundsArgs) -> CmdResult {
    let mut out = BoundsOutput {
        guaranteed: None,
        measured: None,
        given: None,
        comparison: Vec::new(),
    };
    match (args.p, args.m, args.n, args.K, args.M, args.L) {
        (Some(p), Some(m), Some(n), None, None, None) => {
            let params = Params::new(p, m, n, args.lambda.unwrap_or(p))?;
            let guaranteed = optimality(params, params.length() as f64)?;
            print_report("guaranteed", &guaranteed);
            if let Some(cf) = guaranteed.closed_form_rho {
                out!(
                    "  closed-form rho {cf:.9} agrees: {}",
                    guaranteed.closed_form_agrees == Some(true)
                );
            }
            out.guaranteed = Some(guaranteed);
            if let Some(theta) = args.theta {
                let measured = optimality(params, theta)?;
                print_report("measured", &measured);
                out.measured = Some(measured);
            }
            out.comparison = comparison_rows(params);
            out!(
                "{:<34} {:>10} {:>8} {:>8} {:>8} {:>8}",
                "construction",
                "K",
                "M",
                "L",
                "theta",
                "alphabet"
            );
            let cell = |v: Option<usize>| v.map_or("-".to_string(), |x| x.to_string());
            for row in &out.comparison {
                out!(
                    "{:<34} {:>10} {:>8} {:>8} {:>8} {:>8}",
                    row.construction,
                    cell(row.K),
                    cell(row.M),
                    cell(row.L),
                    cell(row.theta),
                    cell(row.alphabet)
                );
            }
        }
        (None, None, None, Some(k), Some(m), Some(l)) => {
            let theta = args
                .theta
                .ok_or_else(|| Exit::new(EXIT_USAGE, "--theta is required with --K"))?;
            let given = bounds_for(k, m, l, theta)?;
            print_report("given", &given);
            out.given = Some(given);
        }
        _ => {
            return Err(Exit::new(
                EXIT_USAGE,
                "give either --p --m --n or --K --M --L --theta",
            ));
        }
    }
    if let Some(path) = &args.output {
        let json = serde_json::to_string_pretty(&out).map_err(Error::from)?;
        write_text(Some(path), &format!("{json}\n"))?;
    }
    Ok(EXIT_PASS)
}

fn cmd_correlate(args: &CorrelateArgs) -> CmdResult {
    let &[i, j] = args.pair.as_slice() else {
        return Err(Exit::new(
            EXIT_USAGE,
            "--pair takes exactly two indices, e.g. --pair 0,3",
        ));
    };
    let family = load_family(&args.family)?;
    let count = family.codes.len();
    if i >= count || j >= count {
        return Err(Exit::new(
            EXIT_USAGE,
            format!("code indices must be below {count}"),
        ));
    }
    let profile = shift_profile(&family.codes[i], &family.codes[j])?;
    let mut buf = Vec::new();
    write_shift_profile(&profile, &mut buf)?;
    write_text(args.output.as_deref(), &String::from_utf8_lossy(&buf))?;
    Ok(EXIT_PASS)
}

fn cmd_certify(args: &CertifyArgs) -> CmdResult {
    let f = match (
        &args.seed.seed,
        &args.seed.seed_expr,
        args.p,
        args.m,
        args.lambda,
    ) {
        (Some(_), _, _, _, _) => load_seed_function(&args.seed, 0, 0, 0)?,
        (None, Some(_), Some(p), Some(m), Some(lambda)) => {
            load_seed_function(&args.seed, p, m, lambda)?
        }
        (None, Some(_), _, _, _) => {
            return Err(Exit::new(
                EXIT_USAGE,
                "--seed-expr needs --p, --m and --lambda",
            ));
        }
        _ => return Err(Exit::new(EXIT_USAGE, "give --seed or --seed-expr")),
    }
    .expect("one seed source was given");
    let j = args.seed.j.clone().unwrap_or_default();
    let cert = if args.exhaustive {
        crate::poly::certify_hamiltonian_path_exhaustive(&f, &j)?
    } else {
        certify_hamiltonian_path(&f, &j)?
    };
    let json = serde_json::to_string_pretty(&cert).map_err(Error::from)?;
    out!("{json}");
    if cert.valid {
        Ok(EXIT_PASS)
    } else {
        eprintln!(
            "seed rejected: {}",
            cert.failure_reason.as_deref().unwrap_or("unknown")
        );
        Ok(EXIT_SEED)
    }
}

/// Runs a parsed command line and returns the exit code.
pub fn execute(cli: &Cli) -> i32 {
    let result = configure_threads(cli.threads).and_then(|()| match &cli.command {
        Command::Generate(a) => cmd_generate(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Bounds(a) => cmd_bounds(a),
        Command::Correlate(a) => cmd_correlate(a),
        Command::CertifySeed(a) => cmd_certify(a),
    });
    match result {
        Ok(code) => code,
        Err(exit) => {
            eprintln!("error: {}", exit.message);
            exit.code
        }
    }
}

/// Parses `args` (including the program name) and runs them.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli),
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_PASS
            };
            let _ = e.print();
            code
        }
    }
}
