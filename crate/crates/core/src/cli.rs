//! Command-line front end; the binary is a thin wrapper around [`run`].

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::catalog::{self, CatalogEntry, CatalogError, Grouping};
use crate::lattice::{integer_distance, LatticeFace, Rational};
use crate::moebius1d::{self, MoebiusError};
use crate::moebius2d::{self, FrequencyResult, McConfig, Moebius2dError};
use crate::planar::PlanarError;
use crate::report::{self, format_sig, Format, Row};
use crate::sail1d::{self, Parity, SailError};
use crate::sail2d::Sail2dError;
use crate::streams::default_workers;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_INVARIANT: i32 = 4;

/// Standard errors of two estimates may differ by at most this many combined sigmas.
pub const AGREEMENT_SIGMAS: f64 = 3.0;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Budget(String),
    #[error("{0}")]
    Invariant(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Budget(_) => EXIT_BUDGET,
            CliError::Invariant(_) => EXIT_INVARIANT,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(format!("i/o error: {e}"))
    }
}

impl From<CatalogError> for CliError {
    fn from(e: CatalogError) -> Self {
        match e {
            CatalogError::Mismatch { .. } => CliError::Invariant(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<SailError> for CliError {
    fn from(e: SailError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<MoebiusError> for CliError {
    fn from(e: MoebiusError) -> Self {
        match e {
            MoebiusError::BudgetExceeded { .. } | MoebiusError::Quadrature(_) => {
                CliError::Budget(e.to_string())
            }
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<Moebius2dError> for CliError {
    fn from(e: Moebius2dError) -> Self {
        use Moebius2dError as E;
        let msg = e.to_string();
        match e {
            E::DistanceNotOne(d) => CliError::Usage(format!(
                "exact method is unsupported for faces at integer distance {d}; use --method mc"
            )),
            E::BudgetExceeded { .. }
            | E::NoAcceptedSamples
            | E::Planar(PlanarError::RadiusExceeded { .. })
            | E::Sail(Sail2dError::Budget(_)) => CliError::Budget(msg),
            E::DegenerateCell(_) | E::Singular => CliError::Invariant(msg),
            _ => CliError::Usage(msg),
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "klein-freq",
    version,
    about = "Klein sails and relative frequencies of their faces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Exact,
    Mc,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Continued fraction expansions and sail vertices of a rational.
    Cf {
        /// Rational as `p/q` or an integer.
        alpha: String,
    },
    /// 1D face frequencies with a numerical check and Gauss–Kuzmin probabilities.
    Freq1d {
        #[arg(long, default_value_t = 20)]
        k_max: i64,
        /// Absolute tolerance of the numerical check.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Relative frequency of a 2D face.
    Freq2d {
        /// Catalog id (T1, T2, Q1, Q2, A<n>, B<n>, An, Bn, An/Bn, T-pair, Q-pair) or a face JSON path.
        #[arg(long)]
        face: String,
        #[arg(long, value_enum, default_value_t = MethodArg::Mc)]
        method: MethodArg,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Relative tolerance of the exact path.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Defaults to KLEIN_FREQ_WORKERS or the number of CPUs.
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Index for An, Bn and An/Bn.
        #[arg(long)]
        n: Option<i64>,
        #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
        format: FormatArg,
        /// Fill the runtime_ms column (makes output run-dependent).
        #[arg(long)]
        timing: bool,
    },
    /// Empirical distribution of Gauss-map tails against log2(1 + x).
    Gk {
        #[arg(long, default_value_t = 5)]
        n: usize,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lists catalog faces after verifying their declared invariants.
    Catalog {
        /// Largest series index listed.
        #[arg(long, default_value_t = 3)]
        n: i64,
    },
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(cli.command, stdout, stderr) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cmd: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    match cmd {
        Command::Cf { alpha } => cmd_cf(&alpha, stdout),
        Command::Freq1d { k_max, tol, out } => {
            with_output(out.as_deref(), stdout, |w| cmd_freq1d(k_max, tol, w))
        }
        Command::Freq2d {
            face,
            method,
            samples,
            seed,
            tol,
            workers,
            out,
            n,
            format,
            timing,
        } => {
            let config = RunConfig {
                method,
                samples,
                seed,
                tol,
                workers: workers.unwrap_or_else(default_workers),
                timing,
            };
            let format = match format {
                FormatArg::Csv => Format::Csv,
                FormatArg::Json => Format::Json,
            };
            let (rows, outcome) = cmd_freq2d(&face, n, &config, stderr)?;
            with_output(out.as_deref(), stdout, |w| {
                report::write_rows(w, &rows, format).map_err(CliError::from)
            })?;
            outcome
        }
        Command::Gk {
            n,
            samples,
            seed,
            workers,
            out,
        } => {
            let workers = workers.unwrap_or_else(default_workers);
            with_output(out.as_deref(), stdout, |w| {
                cmd_gk(n, samples, seed, workers, w)
            })
        }
        Command::Catalog { n } => cmd_catalog(n, stdout),
    }
}

fn with_output<F>(path: Option<&Path>, stdout: &mut dyn Write, f: F) -> Result<(), CliError>
where
    F: FnOnce(&mut dyn Write) -> Result<(), CliError>,
{
    match path {
        Some(p) => {
            let file = File::create(p)
                .map_err(|e| CliError::Usage(format!("cannot create {}: {e}", p.display())))?;
            let mut w = BufWriter::new(file);
            f(&mut w)?;
            w.flush()?;
            Ok(())
        }
        None => f(stdout),
    }
}

pub fn parse_rational(text: &str) -> Result<Rational, CliError> {
    let bad = || {
        CliError::Usage(format!(
            "malformed rational '{text}' (expected p/q or an integer)"
        ))
    };
    let t = text.trim();
    let (p, q) = match t.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (t, "1"),
    };
    let p = num_bigint::BigInt::from_str(p).map_err(|_| bad())?;
    let q = num_bigint::BigInt::from_str(q).map_err(|_| bad())?;
    if q == num_bigint::BigInt::from(0) {
        return Err(CliError::Usage(format!(
            "malformed rational '{text}': zero denominator"
        )));
    }
    Ok(Rational::new(p, q))
}

fn cmd_cf(alpha: &str, out: &mut dyn Write) -> Result<(), CliError> {
    let a = parse_rational(alpha)?;
    writeln!(out, "alpha {a}")?;
    writeln!(out, "shortest {}", sail1d::cf_expand(&a, Parity::Shortest))?;
    writeln!(out, "even {}", sail1d::cf_expand(&a, Parity::Even))?;
    writeln!(out, "odd {}", sail1d::cf_expand(&a, Parity::Odd))?;
    match sail1d::sail_vertices(&a) {
        Ok(sail) => {
            let v: Vec<String> = sail
                .vertices()
                .iter()
                .map(|p| format!("({},{})", p.0[0], p.0[1]))
                .collect();
            writeln!(out, "sail {}", v.join(","))?;
        }
        Err(e) => writeln!(out, "sail unavailable: {e}")?,
    }
    Ok(())
}

fn cmd_freq1d(k_max: i64, tol: f64, out: &mut dyn Write) -> Result<(), CliError> {
    if k_max < 1 {
        return Err(CliError::Usage(format!(
            "--k-max must be >= 1, got {k_max}"
        )));
    }
    let mut rows = Vec::new();
    for k in 1..=k_max {
        let exact = moebius1d::freq_1d_exact(k)?;
        let numeric = moebius1d::freq_1d_numeric(k, tol)?;
        rows.push(vec![
            k.to_string(),
            format_sig(exact),
            format_sig(numeric.value),
            format_sig((numeric.value - exact).abs()),
            format_sig(moebius1d::gk_frequency(k)?),
        ]);
    }
    let sum = moebius1d::freq_1d_partial_sum(k_max)?;
    let ln2 = std::f64::consts::LN_2;
    rows.push(vec![
        "sum".into(),
        format_sig(sum),
        format_sig(ln2),
        format_sig(ln2 - sum),
        String::new(),
    ]);
    report::write_table(out, &["k", "mu", "numeric", "abs_diff", "p_k"], &rows)?;
    Ok(())
}

fn cmd_gk(
    n: usize,
    samples: u64,
    seed: u64,
    workers: usize,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let s = sail1d::gauss_kuzmin_empirical(n, samples, seed, workers)?;
    let mut rows: Vec<Vec<String>> = s
        .cdf_table(101)
        .into_iter()
        .map(|(x, e, l)| vec![format_sig(x), format_sig(e), format_sig(l)])
        .collect();
    rows.push(vec![
        "sup_deviation".into(),
        format_sig(s.sup_deviation()),
        String::new(),
    ]);
    rows.push(vec![
        "digit1_frequency".into(),
        format_sig(s.digit_frequency(1)),
        format_sig(moebius1d::gk_frequency(1)?),
    ]);
    report::write_table(out, &["x", "empirical", "limit"], &rows)?;
    Ok(())
}

fn cmd_catalog(n: i64, out: &mut dyn Write) -> Result<(), CliError> {
    let rows: Vec<Vec<String>> = catalog::all(n)?
        .into_iter()
        .map(|e| {
            vec![
                e.id.clone(),
                e.ls.to_string(),
                e.ld.to_string(),
                e.source.to_string(),
                e.face.to_json(),
            ]
        })
        .collect();
    report::write_table(out, &["id", "ls", "ld", "source", "face"], &rows)?;
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub method: MethodArg,
    pub samples: u64,
    pub seed: u64,
    pub tol: f64,
    pub workers: usize,
    pub timing: bool,
}

/// Catalog id or a path to a face JSON file.
pub fn resolve_faces(face_arg: &str, n: Option<i64>) -> Result<catalog::Lookup, CliError> {
    match catalog::lookup(face_arg, n) {
        Ok(l) => Ok(l),
        Err(CatalogError::Unknown(_)) if Path::new(face_arg).exists() => {
            let text = std::fs::read_to_string(face_arg)?;
            let face = LatticeFace::from_json(&text).map_err(|e| CliError::Usage(e.to_string()))?;
            let id = Path::new(face_arg)
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| face_arg.to_string());
            Ok(catalog::Lookup {
                entries: vec![CatalogEntry {
                    id,
                    ls: face.integer_area(),
                    ld: integer_distance(&face),
                    face,
                    source: "file",
                }],
                grouping: Grouping::Single,
            })
        }
        Err(e) => Err(e.into()),
    }
}

fn agreement_row(id: &str, a: &FrequencyResult, b: &FrequencyResult) -> Row {
    let diff = (a.value - b.value).abs();
    let bound = AGREEMENT_SIGMAS * a.error.hypot(b.error);
    let verdict = if diff <= bound { "agree" } else { "disagree" };
    Row::summary(id, verdict, diff, bound)
}

fn ratio_row(id: &str, a: &FrequencyResult, b: &FrequencyResult) -> Row {
    let r = a.value / b.value;
    let err = r.abs() * (a.error / a.value).hypot(b.error / b.value);
    Row::summary(id, "ratio", r, err)
}

/// Rows for a face request, and the deferred outcome (invariant warnings
/// are reported after the rows are written).
pub fn cmd_freq2d(
    face_arg: &str,
    n: Option<i64>,
    config: &RunConfig,
    stderr: &mut dyn Write,
) -> Result<(Vec<Row>, Result<(), CliError>), CliError> {
    if config.samples == 0 {
        return Err(CliError::Usage("--samples must be >= 1".into()));
    }
    if !(config.tol.is_finite() && config.tol > 0.0) {
        return Err(CliError::Usage("--tol must be positive".into()));
    }
    let lookup = resolve_faces(face_arg, n)?;
    let want_exact = matches!(config.method, MethodArg::Exact | MethodArg::Both);
    let want_mc = matches!(config.method, MethodArg::Mc | MethodArg::Both);
    if want_exact {
        if let Some(e) = lookup.entries.iter().find(|e| e.ld != 1) {
            return Err(Moebius2dError::DistanceNotOne(e.ld).into());
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers.max(1))
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let mut rows = Vec::new();
    let mut primary = Vec::new();
    let mut outcome = Ok(());
    for entry in &lookup.entries {
        let mut exact = None;
        let mut mc = None;
        if want_exact {
            let start = Instant::now();
            let r = pool.install(|| moebius2d::frequency_exact(&entry.face, config.tol))?;
            let t = config.timing.then(|| start.elapsed().as_millis());
            rows.push(Row::frequency(entry, &r, None, t));
            exact = Some(r);
        }
        if want_mc {
            let start = Instant::now();
            let mc_config = McConfig::new(config.samples, config.seed).workers(config.workers);
            let r = moebius2d::frequency_mc(&entry.face, &mc_config)?;
            let t = config.timing.then(|| start.elapsed().as_millis());
            rows.push(Row::frequency(entry, &r, Some(config.seed), t));
            if let Some(w) = &r.warning {
                writeln!(stderr, "warning: {}: {w}", entry.id)?;
            }
            if r.outside_box > 0 {
                outcome = Err(CliError::Invariant(format!(
                    "{}: {} accepted samples fell outside the derived support box",
                    entry.id, r.outside_box
                )));
            }
            mc = Some(r);
        }
        if let (Some(a), Some(b)) = (&exact, &mc) {
            rows.push(agreement_row(&entry.id, a, b));
        }
        primary.push(mc.or(exact).expect("at least one method"));
    }
    match lookup.grouping {
        Grouping::Single => {}
        Grouping::DistancePair => {
            let id = format!("{}|{}", lookup.entries[0].id, lookup.entries[1].id);
            rows.push(agreement_row(&id, &primary[0], &primary[1]));
        }
        Grouping::Ratio => {
            let id = format!("{}/{}", lookup.entries[0].id, lookup.entries[1].id);
            rows.push(ratio_row(&id, &primary[0], &primary[1]));
        }
    }
    Ok((rows, outcome))
}
