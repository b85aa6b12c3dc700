//! Command implementations for the `fcgram` binary.
//!
//! Every command writes plain CSV (17 significant digits) into an existing
//! output directory together with a `manifest.json` describing the run.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use fcgram::continuation::parse_rational;
use fcgram::convergence::{CRule, ConvergenceRow, SRule, StudySpec, TestFunction, DEFAULT_N_EVAL};
use fcgram::hermite_extension::build_phi_h;
use fcgram::lsq_continuation::{default_m, load_or_solve, LsGrid, DEFAULT_N_OVER, DEFAULT_SVD_CUTOFF, DEFAULT_Z};
use fcgram::trig_interp::GridWindow;
use fcgram::verify::{self, Level, VerifyOptions};
use fcgram::{validate_params, Continuator, FcError, GramBasis, Method, RawParams};
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

/// Environment variable naming the least-squares coefficient cache directory.
pub const CACHE_ENV: &str = "FC_CACHE_DIR";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid parameters: {0}")]
    Invalid(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("verification failed")]
    VerifyFailed,
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::VerifyFailed => 1,
            CliError::Invalid(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl From<FcError> for CliError {
    fn from(e: FcError) -> Self {
        match e {
            FcError::Io(_) => CliError::Io(e.to_string()),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        if e.is_io() {
            CliError::Io(e.to_string())
        } else {
            CliError::Invalid(format!("manifest: {e}"))
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

fn invalid<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Invalid(msg.into()))
}

#[derive(Parser, Debug)]
#[command(name = "fcgram", version, about = "Fourier continuation approximations and convergence studies")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Approximate one function at one resolution.
    Approximate(StudyArgs),
    /// Error and order-of-convergence table over a list of resolutions.
    Convergence(StudyArgs),
    /// Least-squares and Hermite extensions of each Gram polynomial.
    CompareExtensions(CompareArgs),
    /// Check the numerical invariants against reference implementations.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Md,
}

#[derive(Args, Debug, Clone)]
pub struct StudyArgs {
    /// Read the study from a JSON manifest; other study flags are ignored.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Test function id: const1, osc54, expx, cosk, runge.
    #[arg(long, default_value = "osc54")]
    pub function: String,
    #[arg(long)]
    pub k: Option<f64>,
    #[arg(long)]
    pub eps: Option<f64>,
    /// Matching points; a comma list such as 3,4,5 gives one column pair per d.
    #[arg(long, default_value = "5")]
    pub d: String,
    /// Period as p/q or an exact decimal.
    #[arg(long, default_value = "2")]
    pub b: String,
    /// Single resolution (approximate).
    #[arg(long)]
    pub n: Option<usize>,
    /// Comma list of resolutions; `2^k` entries are accepted.
    #[arg(long)]
    pub n_list: Option<String>,
    #[arg(long, default_value = "hermite")]
    pub method: String,
    /// `period` (C = n b - n - 1), a fixed integer, or `n/4-1`.
    #[arg(long, default_value = "period")]
    pub c_rule: String,
    /// Skipping stride: an integer or `n/8`.
    #[arg(long, default_value = "1")]
    pub s: String,
    #[arg(long, default_value_t = DEFAULT_N_EVAL)]
    pub n_eval: usize,
    /// Existing output directory.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Args, Debug, Clone)]
pub struct CompareArgs {
    #[arg(long, default_value_t = 5)]
    pub d: usize,
    #[arg(long, default_value_t = 25)]
    pub c: usize,
    #[arg(long, default_value_t = DEFAULT_Z)]
    pub z: usize,
    /// Extra least-squares segment; defaults to C.
    #[arg(long)]
    pub e: Option<usize>,
    /// Grid resolution, h = 1/n.
    #[arg(long, default_value_t = 256)]
    pub n: usize,
    /// Only this Gram index.
    #[arg(long)]
    pub l: Option<usize>,
    /// Output points per grid cell.
    #[arg(long, default_value_t = 8)]
    pub per_cell: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    #[arg(long, default_value = "fast")]
    pub level: String,
    /// Offsets one stored Gram coefficient; the suite must then fail.
    #[arg(long, hide = true)]
    pub tamper_gram: Option<f64>,
}

/// A study as stored in `manifest.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StudyConfig {
    pub function: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    pub d: Vec<usize>,
    /// Exact rational, `"p/q"`.
    pub b: String,
    pub n_list: Vec<usize>,
    pub method: String,
    pub c_rule: String,
    pub s: String,
    pub n_eval: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

fn parse_n_token(tok: &str) -> CliResult<usize> {
    let tok = tok.trim();
    let parsed = match tok.split_once('^') {
        Some(("2", k)) => k.trim().parse::<u32>().ok().and_then(|k| 1usize.checked_shl(k)),
        Some(_) => None,
        None => tok.parse().ok(),
    };
    parsed.ok_or_else(|| CliError::Invalid(format!("`{tok}` is not a resolution")))
}

pub fn parse_n_list(text: &str) -> CliResult<Vec<usize>> {
    let list: Vec<usize> = text
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(parse_n_token)
        .collect::<CliResult<_>>()?;
    if list.is_empty() {
        return invalid("the n list is empty");
    }
    Ok(list)
}

fn parse_d_list(text: &str) -> CliResult<Vec<usize>> {
    let list: Vec<usize> = text
        .split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| CliError::Invalid(format!("`{t}` is not a valid d"))))
        .collect::<CliResult<_>>()?;
    if list.is_empty() {
        return invalid("no d given");
    }
    Ok(list)
}

pub fn parse_c_rule(text: &str, b: Rational64) -> CliResult<CRule> {
    match text.trim() {
        "period" => Ok(CRule::Period(b)),
        "n/4-1" | "quarter" => Ok(CRule::QuarterMinusOne),
        other => other
            .trim_start_matches("fixed:")
            .parse::<usize>()
            .map(CRule::Fixed)
            .map_err(|_| CliError::Invalid(format!("unknown C rule `{other}` (period, n/4-1 or an integer)"))),
    }
}

pub fn parse_s_rule(text: &str) -> CliResult<SRule> {
    match text.trim() {
        "n/8" => Ok(SRule::EighthOfN),
        other => other
            .parse::<usize>()
            .map(SRule::Fixed)
            .map_err(|_| CliError::Invalid(format!("unknown skipping rule `{other}` (an integer or n/8)"))),
    }
}

fn rational_text(b: Rational64) -> String {
    format!("{}/{}", b.numer(), b.denom())
}

impl StudyConfig {
    pub fn from_args(args: &StudyArgs, single_n: bool) -> CliResult<Self> {
        if let Some(path) = &args.config {
            let mut cfg: StudyConfig = serde_json::from_reader(File::open(path)?)?;
            cfg.out = Some(args.out.clone());
            return Ok(cfg);
        }
        let n_list = match (args.n, &args.n_list) {
            (Some(n), None) => vec![n],
            (None, Some(list)) => parse_n_list(list)?,
            (Some(_), Some(_)) => return invalid("give either --n or --n-list"),
            (None, None) => return invalid(if single_n { "--n is required" } else { "--n-list is required" }),
        };
        let b = parse_rational(&args.b)?;
        Ok(Self {
            function: args.function.clone(),
            k: args.k,
            eps: args.eps,
            d: parse_d_list(&args.d)?,
            b: rational_text(b),
            n_list,
            method: args.method.clone(),
            c_rule: args.c_rule.clone(),
            s: args.s.clone(),
            n_eval: args.n_eval,
            out: Some(args.out.clone()),
        })
    }

    pub fn function(&self) -> CliResult<TestFunction> {
        Ok(TestFunction::lookup(&self.function, self.k, self.eps)?)
    }

    pub fn period(&self) -> CliResult<Rational64> {
        Ok(parse_rational(&self.b)?)
    }

    pub fn spec(&self, d: usize) -> CliResult<StudySpec> {
        let method: Method = self.method.parse()?;
        let mut spec = StudySpec::new(self.function()?, d, parse_c_rule(&self.c_rule, self.period()?)?, method);
        spec.s_rule = parse_s_rule(&self.s)?;
        spec.n_eval = self.n_eval;
        spec.cache_dir = std::env::var_os(CACHE_ENV).map(PathBuf::from);
        Ok(spec)
    }

    fn out_dir(&self) -> CliResult<&Path> {
        let dir = self.out.as_deref().ok_or_else(|| CliError::Invalid("no output directory".into()))?;
        if !dir.is_dir() {
            return Err(CliError::Io(format!("output directory {} does not exist", dir.display())));
        }
        Ok(dir)
    }
}

fn create(dir: &Path, name: &str) -> CliResult<BufWriter<File>> {
    let path = dir.join(name);
    File::create(&path)
        .map(BufWriter::new)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write_manifest(dir: &Path, cfg: &StudyConfig) -> CliResult<()> {
    let mut stored = cfg.clone();
    stored.out = None;
    let mut w = create(dir, "manifest.json")?;
    serde_json::to_writer_pretty(&mut w, &stored)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

/// Writes `approximation.csv` (x, f, approximation, error on the fine grid),
/// `extension.csv` (the continued samples) and `manifest.json`.
pub fn cmd_approximate(cfg: &StudyConfig) -> CliResult<f64> {
    let dir = cfg.out_dir()?;
    let [n] = cfg.n_list[..] else {
        return invalid("approximate takes exactly one n");
    };
    let [d] = cfg.d[..] else {
        return invalid("approximate takes exactly one d");
    };
    let spec = cfg.spec(d)?;
    let c = spec.c_rule.c_for(n)?;
    let s = spec.s_rule.s_for(n)?;
    let mut raw = RawParams::new(n, d).with_c(c).with_s(s).with_method(spec.method);
    if spec.method == Method::LeastSquares {
        raw = raw.with_ls(LsGrid::with_defaults(d, s, c)?);
    }
    let params = validate_params(raw)?;
    let cont = Continuator::<f64>::new(params, spec.cache_dir.as_deref())?;
    let derivs = match spec.method {
        Method::Reference => Some(spec.function.endpoint_derivatives(d)?),
        _ => None,
    };
    let samples = spec.function.samples::<f64>(n);
    let continued = cont.continue_samples(&samples, derivs.as_ref())?;
    let t = continued.fit()?;
    if cfg.n_eval < continued.len() {
        return invalid(format!("--n-eval must be at least N = {}", continued.len()));
    }
    let approx = t.eval_fine_grid(cfg.n_eval, GridWindow::Unit)?;

    let mut w = create(dir, "approximation.csv")?;
    writeln!(w, "x,f,approximation,error")?;
    let mut worst = 0.0f64;
    for (j, a) in approx.iter().enumerate() {
        let x = j as f64 / cfg.n_eval as f64;
        let v = spec.function.eval(x);
        worst = worst.max((a - v).abs());
        writeln!(w, "{x:.16e},{v:.16e},{a:.16e},{:.16e}", a - v)?;
    }
    w.flush()?;
    let mut w = create(dir, "extension.csv")?;
    continued.write_csv(&mut w)?;
    w.flush()?;
    write_manifest(dir, cfg)?;
    Ok(worst)
}

fn fmt_opt(v: Option<f64>, digits: usize) -> String {
    v.map_or_else(String::new, |x| format!("{x:.digits$}"))
}

/// Rows share `n` across every `d`; each inner vector is one `d`.
pub fn render_convergence(ds: &[usize], tables: &[Vec<ConvergenceRow>], format: Format) -> String {
    let mut out = String::new();
    let ns: Vec<usize> = tables.first().map(|t| t.iter().map(|r| r.n).collect()).unwrap_or_default();
    match format {
        Format::Csv => {
            out.push('n');
            for d in ds {
                let _ = write!(out, ",e_n_d{d},noc_d{d}");
            }
            out.push('\n');
            for (i, n) in ns.iter().enumerate() {
                let _ = write!(out, "{n}");
                for t in tables {
                    let _ = write!(out, ",{:.16e},{}", t[i].e_n, fmt_opt(t[i].noc, 16));
                }
                out.push('\n');
            }
        }
        Format::Md => {
            out.push_str("| n |");
            for d in ds {
                let _ = write!(out, " e_n (d={d}) | noc (d={d}) |");
            }
            out.push_str("\n|---|");
            for _ in ds {
                out.push_str("---|---|");
            }
            out.push('\n');
            for (i, n) in ns.iter().enumerate() {
                let _ = write!(out, "| {n} |");
                for t in tables {
                    let noc = t[i].noc.map_or_else(|| "---".to_string(), |o| format!("{o:.2}"));
                    let _ = write!(out, " {:.2e} | {noc} |", t[i].e_n);
                }
                out.push('\n');
            }
        }
    }
    out
}

/// Writes `convergence.csv` or `convergence.md` and `manifest.json`.
pub fn cmd_convergence(cfg: &StudyConfig, format: Format) -> CliResult<Vec<Vec<ConvergenceRow>>> {
    let dir = cfg.out_dir()?;
    if cfg.n_list.is_empty() {
        return invalid("the n list is empty");
    }
    let tables = cfg
        .d
        .iter()
        .map(|&d| Ok(cfg.spec(d)?.run(&cfg.n_list)?))
        .collect::<CliResult<Vec<_>>>()?;
    let name = match format {
        Format::Csv => "convergence.csv",
        Format::Md => "convergence.md",
    };
    let mut w = create(dir, name)?;
    w.write_all(render_convergence(&cfg.d, &tables, format).as_bytes())?;
    w.flush()?;
    write_manifest(dir, cfg)?;
    Ok(tables)
}

/// Writes `phi_l{l}.csv` with columns `x, phi_ls, phi_h` over the full
/// extension window `[0, (d+C+Z+E) h]`.
pub fn cmd_compare_extensions(args: &CompareArgs) -> CliResult<Vec<PathBuf>> {
    if !args.out.is_dir() {
        return Err(CliError::Io(format!("output directory {} does not exist", args.out.display())));
    }
    let e = args.e.unwrap_or(args.c);
    if args.n == 0 || args.per_cell == 0 {
        return invalid("n and per-cell must be positive");
    }
    if let Some(l) = args.l.filter(|&l| l >= args.d) {
        return invalid(format!("Gram index {l} must be below d = {}", args.d));
    }
    let grid = LsGrid::new(args.d, 1, args.c, args.z, e, DEFAULT_N_OVER)?;
    let cache = std::env::var_os(CACHE_ENV).map(PathBuf::from);
    let ls = load_or_solve(&grid, default_m(&grid), DEFAULT_SVD_CUTOFF, cache.as_deref())?;
    let basis = GramBasis::<f64>::new(args.d)?;
    let h = 1.0 / args.n as f64;
    let cells = args.d + args.c + args.z + e;
    let ls_list: Vec<usize> = match args.l {
        Some(l) => vec![l],
        None => (0..args.d).collect(),
    };
    let mut written = Vec::new();
    for l in ls_list {
        let phi_h = build_phi_h(&basis, l, args.c, args.z, e, h)?;
        let name = format!("phi_l{l}.csv");
        let mut w = create(&args.out, &name)?;
        writeln!(w, "x,phi_ls,phi_h")?;
        for k in 0..=cells * args.per_cell {
            let cell = k as f64 / args.per_cell as f64;
            let x = cell * h;
            let ls_value = ls[l].eval(cell).re;
            let h_value = phi_h.eval(x).unwrap_or(f64::NAN);
            writeln!(w, "{x:.16e},{ls_value:.16e},{h_value:.16e}")?;
        }
        w.flush()?;
        written.push(args.out.join(name));
    }
    Ok(written)
}

pub fn cmd_verify(args: &VerifyArgs) -> CliResult<verify::Report> {
    let level: Level = args.level.parse()?;
    let report = verify::run(level, &VerifyOptions { gram_tamper: args.tamper_gram })?;
    println!("{report}");
    if report.passed() {
        Ok(report)
    } else {
        Err(CliError::VerifyFailed)
    }
}

pub fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Approximate(args) => {
            let cfg = StudyConfig::from_args(&args, true)?;
            let worst = cmd_approximate(&cfg)?;
            println!("max |error| on the fine grid: {worst:.3e}");
        }
        Command::Convergence(args) => {
            let cfg = StudyConfig::from_args(&args, false)?;
            let tables = cmd_convergence(&cfg, args.format)?;
            print!("{}", render_convergence(&cfg.d, &tables, Format::Md));
        }
        Command::CompareExtensions(args) => {
            for path in cmd_compare_extensions(&args)? {
                println!("{}", path.display());
            }
        }
        Command::Verify(args) => {
            cmd_verify(&args)?;
        }
    }
    Ok(())
}
