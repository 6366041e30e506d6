//! The `snc` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use snc_core::claims::{verify_claim, ClaimReport, CLAIMS};
use snc_core::{generate, parse_family, FamilySpec, LoopyMultigraph, SolveError, SolveOptions, Solver};

use crate::cache::{self, CacheFile};
use crate::edge_list::parse_edge_list;
use crate::output::{Format, OutputRow, TSV_HEADER};
use crate::parallel::{solve_parallel, SharedTable, StdClock};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

/// Environment variable naming the default cache file.
pub const CACHE_ENV: &str = "SNC_CACHE";

#[derive(Parser, Debug)]
#[command(name = "snc", version, about = "Exact solver for Strings-and-Coins on loopy multigraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve one position.
    Solve {
        #[command(flatten)]
        position: Position,
        #[command(flatten)]
        format: FormatArgs,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Solve a family over a parameter range.
    Table {
        /// Family name followed by any fixed trailing parameters.
        #[arg(long, num_args = 1.., required = true, value_name = "NAME [FIXED]...")]
        family: Vec<String>,
        #[arg(long)]
        from: u32,
        #[arg(long)]
        to: u32,
        #[command(flatten)]
        format: FormatArgs,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Print an optimal first move.
    Bestmove {
        #[command(flatten)]
        position: Position,
        #[arg(long)]
        json: bool,
    },
    /// Check registered claims.
    Verify {
        #[arg(long, conflicts_with = "all", required_unless_present = "all")]
        claim: Option<String>,
        #[arg(long)]
        all: bool,
    },
    /// Maintain cache files.
    Cache {
        /// Rewrite the file with one record per position.
        #[arg(long, value_name = "PATH", required_unless_present = "stats")]
        compact: Option<PathBuf>,
        /// Report record counts.
        #[arg(long, value_name = "PATH", conflicts_with = "compact")]
        stats: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct Position {
    /// Family name followed by its parameters.
    #[arg(long, num_args = 1.., value_name = "NAME [PARAM]...", required_unless_present = "edges", conflicts_with = "edges")]
    family: Vec<String>,
    /// Edge-list file.
    #[arg(long, value_name = "FILE")]
    edges: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct FormatArgs {
    #[arg(long, conflicts_with = "tsv")]
    json: bool,
    #[arg(long)]
    tsv: bool,
}

impl FormatArgs {
    fn format(&self) -> Format {
        if self.json {
            Format::Json
        } else if self.tsv {
            Format::Tsv
        } else {
            Format::Text
        }
    }
}

#[derive(Args, Debug)]
struct SearchArgs {
    /// Persistent cache file (default: $SNC_CACHE).
    #[arg(long, value_name = "PATH")]
    cache: Option<PathBuf>,
    /// Ignore $SNC_CACHE.
    #[arg(long, conflicts_with = "cache")]
    no_cache: bool,
    #[arg(long)]
    no_prune: bool,
    #[arg(long)]
    no_memo: bool,
    #[arg(long)]
    orbit_dedup: bool,
    #[arg(long, value_name = "SECONDS")]
    time_budget: Option<f64>,
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

impl SearchArgs {
    fn options(&self) -> SolveOptions {
        SolveOptions {
            pruning: !self.no_prune,
            memo: !self.no_memo,
            orbit_dedup: self.orbit_dedup,
            time_budget_ms: self.time_budget.map(|s| (s.max(0.0) * 1000.0) as u64),
            ..SolveOptions::default()
        }
    }

    fn cache_path(&self, env_cache: Option<PathBuf>) -> Option<PathBuf> {
        if self.no_cache {
            None
        } else {
            self.cache.clone().or(env_cache)
        }
    }
}

struct Failure {
    code: i32,
    message: String,
}

fn usage(message: impl ToString) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.to_string(),
    }
}

fn failure(message: impl ToString) -> Failure {
    Failure {
        code: EXIT_FAILURE,
        message: message.to_string(),
    }
}

struct Io<'a> {
    out: &'a mut dyn Write,
}

impl Io<'_> {
    fn line(&mut self, s: &str) -> Result<(), Failure> {
        writeln!(self.out, "{}", s)
            .and_then(|_| self.out.flush())
            .map_err(|e| failure(format!("writing output: {}", e)))
    }
}

/// Runs the command line with `$SNC_CACHE` as the default cache.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let env_cache = std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from);
    run_with_env(args, env_cache, out, err)
}

pub fn run_with_env<I, T>(args: I, env_cache: Option<PathBuf>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { write!(out, "{}", text) } else { write!(err, "{}", text) };
            return code;
        }
    };
    let mut io = Io { out };
    match dispatch(cli.command, env_cache, &mut io) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "snc: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cmd: Command, env_cache: Option<PathBuf>, io: &mut Io) -> Result<i32, Failure> {
    match cmd {
        Command::Solve {
            position,
            format,
            search,
        } => solve_cmd(&position, format.format(), &search, env_cache, io),
        Command::Table {
            family,
            from,
            to,
            format,
            search,
        } => table_cmd(&family, from, to, format.format(), &search, env_cache, io),
        Command::Bestmove { position, json } => bestmove_cmd(&position, json, io),
        Command::Verify { claim, all } => verify_cmd(claim.as_deref(), all, io),
        Command::Cache { compact, stats } => cache_cmd(compact.as_deref(), stats.as_deref(), io),
    }
}

fn family_spec(name: &str, params: &[u32]) -> Result<FamilySpec, Failure> {
    parse_family(name, params).map_err(usage)
}

fn numbers(words: &[String]) -> Result<Vec<u32>, Failure> {
    words
        .iter()
        .map(|w| w.parse::<u32>().map_err(|_| usage(format!("parameter '{}' is not a non-negative integer", w))))
        .collect()
}

/// The position plus the label and parameters to report it under.
fn load_position(p: &Position) -> Result<(String, Vec<u32>, LoopyMultigraph), Failure> {
    if let Some(path) = &p.edges {
        let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {}", path.display(), e)))?;
        let g = parse_edge_list(&text).map_err(|e| usage(format!("{}: {}", path.display(), e)))?;
        return Ok(("edges".into(), Vec::new(), g));
    }
    let (name, rest) = p.family.split_first().ok_or_else(|| usage("--family needs a name"))?;
    let params = numbers(rest)?;
    let g = generate(&family_spec(name, &params)?).map_err(usage)?;
    Ok((name.clone(), params, g))
}

struct Session {
    table: SharedTable,
    file: Option<CacheFile>,
}

impl Session {
    fn open(path: Option<PathBuf>) -> Result<Self, Failure> {
        let table = SharedTable::new();
        let file = match path {
            Some(p) => {
                let f = CacheFile::open(&p).map_err(failure)?;
                f.fill(&table);
                log::info!("{}: loaded {} record(s)", p.display(), f.loaded.records.len());
                Some(f)
            }
            None => None,
        };
        Ok(Session { table, file })
    }

    fn persist(&mut self) -> Result<(), Failure> {
        if let Some(f) = &mut self.file {
            let n = f.persist(&self.table).map_err(failure)?;
            log::info!("{}: appended {} record(s)", f.path().display(), n);
        }
        Ok(())
    }
}

fn abort_message(e: SolveError) -> Failure {
    match e {
        SolveError::Aborted(_) => Failure {
            code: EXIT_BUDGET,
            message: e.to_string(),
        },
        other => failure(other),
    }
}

fn solve_cmd(
    p: &Position,
    format: Format,
    search: &SearchArgs,
    env_cache: Option<PathBuf>,
    io: &mut Io,
) -> Result<i32, Failure> {
    let (name, params, g) = load_position(p)?;
    let mut session = Session::open(search.cache_path(env_cache))?;
    let result = solve_parallel(&g, search.options(), search.threads, &session.table, StdClock::new());
    session.persist()?;
    let v = result.map_err(abort_message)?;
    if format == Format::Tsv {
        io.line(TSV_HEADER)?;
    }
    io.line(&OutputRow::new(&name, params, &v).render(format))?;
    Ok(EXIT_OK)
}

fn table_cmd(
    family: &[String],
    from: u32,
    to: u32,
    format: Format,
    search: &SearchArgs,
    env_cache: Option<PathBuf>,
    io: &mut Io,
) -> Result<i32, Failure> {
    let (name, rest) = family.split_first().ok_or_else(|| usage("--family needs a name"))?;
    let fixed = numbers(rest)?;
    if from > to {
        return Err(usage(format!("--from {} exceeds --to {}", from, to)));
    }
    let mut rows = Vec::new();
    for k in from..=to {
        let mut params = vec![k];
        params.extend_from_slice(&fixed);
        let spec = family_spec(name, &params)?;
        rows.push((params, generate(&spec).map_err(usage)?));
    }

    let mut session = Session::open(search.cache_path(env_cache))?;
    let clock = StdClock::new();
    if format == Format::Tsv {
        io.line(TSV_HEADER)?;
    }
    let total = rows.len();
    for (done, (params, g)) in rows.into_iter().enumerate() {
        let result = solve_parallel(&g, search.options(), search.threads, &session.table, clock);
        session.persist()?;
        match result {
            Ok(v) => io.line(&OutputRow::new(name, params, &v).render(format))?,
            Err(e) => {
                let mut f = abort_message(e);
                f.message = format!(
                    "{} at {} {}; {} of {} row(s) completed",
                    f.message, name, params[0], done, total
                );
                return Err(f);
            }
        }
    }
    Ok(EXIT_OK)
}

fn bestmove_cmd(p: &Position, json: bool, io: &mut Io) -> Result<i32, Failure> {
    let (name, params, g) = load_position(p)?;
    let clock = StdClock::new();
    let mut solver = Solver::new(SolveOptions::default()).with_clock(Box::new(clock));
    let (e, v) = solver.best_move(&g).map_err(abort_message)?;
    let (a, b) = e.endpoints();
    if json {
        let doc = serde_json::json!({
            "family": name,
            "parameters": params,
            "edge": [a, b],
            "winner": v.winner.token(),
            "p1": v.p1_score,
            "p2": v.p2_score,
            "differential": v.differential,
        });
        io.line(&doc.to_string())?;
    } else {
        io.line(&format!(
            "{} {}  ({} ({} - {}), differential {:+})",
            a, b, v.winner, v.p1_score, v.p2_score, v.differential
        ))?;
    }
    Ok(EXIT_OK)
}

fn report_lines(r: &ClaimReport) -> Vec<String> {
    let mut lines = vec![format!(
        "{} {}: {}",
        if r.passed { "PASS" } else { "FAIL" },
        r.id,
        r.witness
    )];
    lines.extend(r.notes.iter().map(|n| format!("    {}", n)));
    lines
}

fn verify_cmd(claim: Option<&str>, all: bool, io: &mut Io) -> Result<i32, Failure> {
    let reports: Vec<ClaimReport> = if all {
        CLAIMS
            .par_iter()
            .map(|c| verify_claim(c.id).expect("registered claim"))
            .collect()
    } else {
        let id = claim.expect("clap requires --claim or --all");
        vec![verify_claim(id).map_err(usage)?]
    };
    for r in &reports {
        for l in report_lines(r) {
            io.line(&l)?;
        }
    }
    Ok(if reports.iter().all(|r| r.passed) { EXIT_OK } else { EXIT_FAILURE })
}

fn cache_cmd(compact: Option<&Path>, stats: Option<&Path>, io: &mut Io) -> Result<i32, Failure> {
    if let Some(path) = compact {
        let r = cache::compact(path).map_err(failure)?;
        io.line(&format!(
            "{}: {} record(s) -> {} record(s), {} trailing byte(s) dropped",
            path.display(),
            r.records_before,
            r.records_after,
            r.bytes_dropped
        ))?;
    } else if let Some(path) = stats {
        let l = cache::load(path).map_err(failure)?;
        io.line(&format!(
            "{}: {} record(s), {} invalid, {} trailing byte(s)",
            path.display(),
            l.records.len(),
            l.rejected,
            l.truncated_bytes
        ))?;
    }
    Ok(EXIT_OK)
}
