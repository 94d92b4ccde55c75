//! The `secant` command line.
//!
//! Exit codes: 0 success, 1 verification mismatch, 2 usage error,
//! 3 backend failure.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::field::{PrimeField, RealField};
use crate::golden::{self, GoldenData};
use crate::plucker::TangentPlan;
use crate::rank::{
    BackendMode, RankBackendConfig, DEFAULT_EXACT_TRIALS, DEFAULT_FLOAT_TRIALS, DEFAULT_PRIME, DEFAULT_TOLERANCE,
};
use crate::scan::{classify_cell_detailed, scan_range_partial, CellCache, ScanPlan, ScanRecord};
use crate::table::{EmittedTable, TableFormat};
use crate::terracini::{assemble, sample_points, RandomPointSource, DEFAULT_FLOAT_BOUND};
use crate::veronese::{veronese_classify, veronese_scan};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BACKEND: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "secant", version, about = "Secant dimensions of Grassmannians via Terracini's lemma")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sweep (n, k, s) cells and emit a table.
    Scan(ScanArgs),
    /// Classify one cell and show the per-trial evidence.
    Cell(CellArgs),
    /// Recompute the shipped reference tables and report differences.
    Verify(VerifyArgs),
    /// Classify secant varieties of Veronese varieties.
    Veronese(VeroneseArgs),
    /// Write the Terracini matrix of one cell (first trial) as text.
    Dump(DumpArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Backend {
    Exact,
    Float,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Markdown,
}

impl From<Format> for TableFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => TableFormat::Csv,
            Format::Json => TableFormat::Json,
            Format::Markdown => TableFormat::Markdown,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Continuation {
    Auto,
    Off,
}

#[derive(Args, Debug, Clone)]
struct BackendArgs {
    #[arg(long, value_enum, default_value = "exact")]
    backend: Backend,
    /// Modulus for the exact backend, a prime in [2^30, 2^31).
    #[arg(long, default_value_t = DEFAULT_PRIME)]
    prime: u32,
    /// Relative singular-value cutoff for the float backend.
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tol: f64,
    /// Float entries are drawn from [-L, L].
    #[arg(long = "range-bound", value_name = "L", default_value_t = DEFAULT_FLOAT_BOUND)]
    range_bound: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Trials per cell (default 2 exact, 3 float).
    #[arg(long)]
    trials: Option<usize>,
    /// Use a different prime in each trial.
    #[arg(long)]
    vary_prime: bool,
}

impl BackendArgs {
    fn config(&self) -> RankBackendConfig {
        let (mode, trials) = match self.backend {
            Backend::Exact => (BackendMode::ExactPrime, DEFAULT_EXACT_TRIALS),
            Backend::Float => (BackendMode::FloatSvd, DEFAULT_FLOAT_TRIALS),
        };
        RankBackendConfig {
            mode,
            prime: self.prime,
            tolerance: self.tol,
            float_bound: self.range_bound,
            trials: self.trials.unwrap_or(trials),
            seed: self.seed,
            vary_prime: self.vary_prime,
        }
    }
}

#[derive(Args, Debug, Clone)]
struct RangeArgs {
    #[arg(long, default_value_t = 3)]
    n_min: usize,
    #[arg(long, default_value_t = 14)]
    n_max: usize,
    /// Largest k (default floor((n-1)/2), and 5 at n = 14).
    #[arg(long)]
    k_max: Option<usize>,
    #[arg(long)]
    k_only: Option<usize>,
    #[arg(long)]
    s_max: Option<usize>,
    /// Also scan k above (n-1)/2.
    #[arg(long)]
    lift_k_cap: bool,
}

impl RangeArgs {
    fn plan(&self) -> ScanPlan {
        ScanPlan {
            n_min: self.n_min,
            n_max: self.n_max,
            k_max: self.k_max,
            k_only: self.k_only,
            s_max: self.s_max,
            lift_k_cap: self.lift_k_cap,
            ..ScanPlan::default()
        }
    }
}

#[derive(Args, Debug, Clone)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "markdown")]
    format: Format,
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Mark defective cells with '*' instead of printing the defect.
    #[arg(long)]
    paper_style: bool,
}

#[derive(Args, Debug)]
struct ScanArgs {
    #[command(flatten)]
    range: RangeArgs,
    #[command(flatten)]
    backend: BackendArgs,
    #[command(flatten)]
    output: OutputArgs,
    /// Cache file (default: $SECANT_CACHE_DIR/cells.kv when set).
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Recompute cells already in the cache.
    #[arg(long)]
    force: bool,
    #[arg(long = "continue-past-S", value_enum, default_value = "auto")]
    continue_past_s: Continuation,
    /// Worker threads (default: available parallelism).
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args, Debug)]
struct CellArgs {
    #[arg(short = 'k')]
    k: usize,
    #[arg(short = 'n')]
    n: usize,
    #[arg(short = 's')]
    s: usize,
    #[command(flatten)]
    backend: BackendArgs,
    /// Emit the record as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    range: RangeArgs,
    #[command(flatten)]
    backend: BackendArgs,
    /// Alternative table file; a sibling `<file>.sha256` is enforced if present.
    #[arg(long)]
    golden: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VeroneseArgs {
    #[arg(long, default_value_t = 5)]
    k_max: usize,
    #[arg(long, default_value_t = 4)]
    n_max: usize,
    /// Classify a single cell `k n s` instead of sweeping.
    #[arg(long, num_args = 3, value_names = ["K", "N", "S"])]
    cell: Option<Vec<usize>>,
    #[command(flatten)]
    backend: BackendArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct DumpArgs {
    #[arg(short = 'k')]
    k: usize,
    #[arg(short = 'n')]
    n: usize,
    #[arg(short = 's')]
    s: usize,
    #[command(flatten)]
    backend: BackendArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidConfig(_) | Error::Index(_) | Error::Empty(_) => EXIT_USAGE,
        _ => EXIT_BACKEND,
    }
}

fn open_out<'a>(path: Option<&PathBuf>, stdout: &'a mut dyn Write) -> io::Result<Box<dyn Write + 'a>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(stdout),
    })
}

fn emit(records: &[ScanRecord], output: &OutputArgs, stdout: &mut dyn Write) -> crate::error::Result<()> {
    let mut w = open_out(output.out.as_ref(), stdout)?;
    EmittedTable::from_records(records).write(output.format.into(), output.paper_style, &mut w)?;
    w.flush()?;
    Ok(())
}

/// Runs the CLI on `args` (including the program name).
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match cli.command {
        Command::Scan(a) => cmd_scan(a, stdout, stderr),
        Command::Cell(a) => cmd_cell(a, stdout),
        Command::Verify(a) => cmd_verify(a, stdout, stderr),
        Command::Veronese(a) => cmd_veronese(a, stdout),
        Command::Dump(a) => cmd_dump(a, stdout),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn main() {
    let mut out = io::stdout().lock();
    let mut err = io::stderr().lock();
    let code = run(std::env::args_os(), &mut out, &mut err);
    let _ = out.flush();
    std::process::exit(code);
}

fn cmd_scan(a: ScanArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> crate::error::Result<i32> {
    let cfg = a.backend.config();
    let jobs = a.jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let plan =
        ScanPlan { continue_past_s: a.continue_past_s == Continuation::Auto, jobs, force: a.force, ..a.range.plan() };
    plan.validate()?;
    cfg.validate()?;
    let mut cache = match a.cache.or_else(CellCache::from_env) {
        Some(p) => Some(CellCache::open(p)?),
        None => None,
    };
    let outcome = scan_range_partial(&plan, &cfg, cache.as_mut());
    if let Some(e) = outcome.error {
        if cache.is_some() {
            let _ = writeln!(stderr, "{} finished cells kept in the cache", outcome.records.len());
        }
        return Err(e);
    }
    emit(&outcome.records, &a.output, stdout)?;
    Ok(EXIT_OK)
}

fn cmd_cell(a: CellArgs, stdout: &mut dyn Write) -> crate::error::Result<i32> {
    let cfg = a.backend.config();
    let (record, rank) = classify_cell_detailed(a.k, a.n, a.s, &cfg)?;
    if a.json {
        serde_json::to_writer_pretty(&mut *stdout, &record).map_err(|e| Error::Parse(e.to_string()))?;
        writeln!(stdout)?;
        return Ok(EXIT_OK);
    }
    let r = &record;
    writeln!(stdout, "G({},{})^{}", r.k, r.n, r.s)?;
    writeln!(stdout, "N              {}", r.ambient)?;
    writeln!(stdout, "S              {}", r.saturation)?;
    writeln!(stdout, "expected_dim   {}", r.expected_dim)?;
    writeln!(stdout, "computed_dim   {}", r.computed_dim)?;
    writeln!(stdout, "defect         {}", r.defect)?;
    writeln!(stdout, "status         {}", r.status)?;
    writeln!(stdout, "backend        {}", r.backend)?;
    if let Some(p) = r.prime {
        writeln!(stdout, "prime          {p}")?;
    }
    writeln!(stdout, "seed           {}", r.seed)?;
    for (t, rk) in rank.per_trial_ranks.iter().enumerate() {
        let spec = cfg.trial(t);
        match r.backend {
            BackendMode::ExactPrime => {
                writeln!(stdout, "trial {t}: rank {rk} (seed {}, prime {})", spec.seed, spec.prime)?
            }
            BackendMode::FloatSvd => writeln!(stdout, "trial {t}: rank {rk} (seed {})", spec.seed)?,
        }
    }
    Ok(EXIT_OK)
}

fn cmd_verify(a: VerifyArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> crate::error::Result<i32> {
    let cfg = a.backend.config();
    let plan = a.range.plan();
    let data = match &a.golden {
        Some(p) => GoldenData::load(p),
        None => GoldenData::embedded(),
    };
    let data = match data {
        Ok(d) => d,
        Err(e) => {
            writeln!(stderr, "error: {e}")?;
            return Ok(EXIT_MISMATCH);
        }
    };
    for problem in data.audit() {
        writeln!(stderr, "warning: {problem}")?;
    }
    let report = golden::verify(&data, &plan, &cfg)?;
    for m in &report.mismatches {
        writeln!(stdout, "MISMATCH {m}")?;
    }
    writeln!(
        stdout,
        "checked {} cells, {} mismatches (golden sha256 {})",
        report.checked,
        report.mismatches.len(),
        data.checksum()
    )?;
    Ok(if report.passed() { EXIT_OK } else { EXIT_MISMATCH })
}

fn cmd_veronese(a: VeroneseArgs, stdout: &mut dyn Write) -> crate::error::Result<i32> {
    let cfg = a.backend.config();
    cfg.validate()?;
    let records = match a.cell.as_deref() {
        Some(&[k, n, s]) => vec![veronese_classify(k, n, s, &cfg)?],
        Some(_) => return Err(Error::InvalidConfig("--cell takes three values".into())),
        None => {
            let mut r = veronese_scan(a.k_max, a.n_max, &cfg)?;
            r.sort_by_key(|r| (r.n, r.k, r.s));
            r
        }
    };
    emit(&records, &a.output, stdout)?;
    Ok(EXIT_OK)
}

fn cmd_dump(a: DumpArgs, stdout: &mut dyn Write) -> crate::error::Result<i32> {
    let cfg = a.backend.config();
    cfg.validate()?;
    if a.k >= a.n {
        return Err(Error::InvalidConfig(format!("G({},{}) needs k < n", a.k, a.n)));
    }
    let plan = TangentPlan::new(a.n, a.k)?;
    let trial = cfg.trial(0);
    let mut w = open_out(a.out.as_ref(), stdout)?;
    match cfg.mode {
        BackendMode::ExactPrime => {
            let field = PrimeField::new(trial.prime)?;
            let mut src = RandomPointSource::new(field, trial.seed);
            let pts = sample_points(&mut src, a.k, a.n, a.s)?;
            assemble(&field, &pts, &plan, trial.seed, cfg.mode.id())?.write_dense(&field, &mut w)?;
        }
        BackendMode::FloatSvd => {
            let mut src = RandomPointSource::new(RealField, trial.seed).with_bound(cfg.float_bound);
            let pts = sample_points(&mut src, a.k, a.n, a.s)?;
            assemble(&RealField, &pts, &plan, trial.seed, cfg.mode.id())?.write_dense(&RealField, &mut w)?;
        }
    }
    w.flush()?;
    Ok(EXIT_OK)
}
