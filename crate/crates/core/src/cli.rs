//! Command-line front end.
//!
//! Settings resolve as: command-line flag, then `DISCRIM_*` environment
//! variable, then a `key = value` config file. Exit status is 0 when every
//! record conforms to its suite's expectation, 1 when some record does not,
//! and 2 for usage, configuration or I/O errors.

use std::collections::HashMap;
use std::ffi::OsString;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::builder::BoolishValueParser;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::casework::{
    classify, classify_modulus, compute_all_tj, compute_tj, count_n, count_n_star, CaseTag,
};
use crate::charsum::{ap_direct, ap_kloosterman, ell_p, l_p, residue_profile, ResidueProfile};
use crate::discriminator::{delta_bruteforce, delta_closed_form, find_collision, verify_range};
use crate::error::{Error, Result};
use crate::modarith::factorize;
use crate::report::{load_log, params, CsvMirror, JsonlSink, RecordSink, Tee, VerificationRecord};
use crate::suites::{default_limit, desk_limit, lemma_suites};
use crate::sweep::{run_suites, RunSummary, Suite};

/// Largest `delta verify --to` accepted without `--long-run`.
pub const DESK_DELTA_LIMIT: u64 = 10_000;

#[derive(Parser, Debug)]
#[command(name = "discrim", version, about = "Discriminator of x^3 + x: computation and verification")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Default)]
pub struct GlobalArgs {
    /// Append JSONL records to this file instead of printing them.
    #[arg(long, global = true, env = "DISCRIM_OUT")]
    pub out: Option<PathBuf>,
    /// Also append records to this CSV file.
    #[arg(long, global = true, env = "DISCRIM_CSV")]
    pub csv: Option<PathBuf>,
    /// `key = value` file consulted for settings not given otherwise.
    #[arg(long, global = true, env = "DISCRIM_CONFIG")]
    pub config: Option<PathBuf>,
    /// Allow sweeps beyond desk scale.
    #[arg(long, global = true, env = "DISCRIM_LONG_RUN", num_args = 0..=1,
          default_missing_value = "true", value_parser = BoolishValueParser::new())]
    pub long_run: Option<bool>,
    /// Worker threads for sweeps.
    #[arg(long, global = true, env = "DISCRIM_WORKERS")]
    pub workers: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute or verify Δ(n).
    Delta {
        #[command(subcommand)]
        cmd: DeltaCmd,
    },
    /// Find a colliding pair modulo m.
    Collision {
        #[command(subcommand)]
        cmd: CollisionCmd,
    },
    /// Character sums modulo a prime.
    Charsum {
        #[command(subcommand)]
        cmd: CharsumCmd,
    },
    /// Run a named verification suite.
    Lemma {
        #[command(subcommand)]
        cmd: LemmaCmd,
    },
    /// Case analysis of a modulus.
    Cases {
        #[command(subcommand)]
        cmd: CasesCmd,
    },
    /// Counting sums for m = δp^t.
    Counting {
        #[command(subcommand)]
        cmd: CountingCmd,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Brute,
    Closed,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Form {
    Direct,
    Kloosterman,
    Both,
}

#[derive(Subcommand, Debug)]
pub enum DeltaCmd {
    Compute {
        #[arg(long)]
        n: u64,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
    },
    Verify {
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
        /// Continue an interrupted log, skipping completed records.
        #[arg(long)]
        resume: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum CollisionCmd {
    Find {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        m: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum CharsumCmd {
    Ap {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        delta: u64,
        #[arg(long, allow_negative_numbers = true)]
        u: i64,
        #[arg(long, value_enum, default_value_t = Form::Both)]
        form: Form,
    },
    Ell {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        delta: u64,
    },
    Profile {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        delta: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum LemmaCmd {
    Verify {
        #[arg(long)]
        id: String,
        #[arg(long)]
        limit: Option<u64>,
        #[arg(long)]
        resume: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum CasesCmd {
    Classify {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        n: u64,
        /// Classify even when m lies outside the window of n.
        #[arg(long)]
        exploratory: bool,
    },
}

#[derive(Args, Debug, Clone, Copy)]
pub struct Instance {
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub t: u32,
    #[arg(long)]
    pub delta: u64,
}

#[derive(Subcommand, Debug)]
pub enum CountingCmd {
    #[command(name = "N")]
    N(Instance),
    #[command(name = "Nstar")]
    NStar(Instance),
    #[command(name = "Tj")]
    Tj {
        #[command(flatten)]
        instance: Instance,
        /// A single j; all of 1..=t when omitted.
        #[arg(long)]
        j: Option<u32>,
    },
}

/// Settings after merging flags, environment and config file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Settings {
    pub out: Option<PathBuf>,
    pub csv: Option<PathBuf>,
    pub long_run: bool,
    pub workers: usize,
}

fn parse_config(path: &Path) -> Result<HashMap<String, String>> {
    let text = std::fs::read_to_string(path)?;
    let mut map = HashMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("{}:{}: expected key = value", path.display(), i + 1)))?;
        let key = key.trim().replace('-', "_");
        if !["out", "csv", "long_run", "workers"].contains(&key.as_str()) {
            return Err(Error::Config(format!("{}:{}: unknown key {key}", path.display(), i + 1)));
        }
        map.insert(key, value.trim().to_string());
    }
    Ok(map)
}

impl Settings {
    pub fn resolve(args: &GlobalArgs) -> Result<Self> {
        let file = match &args.config {
            Some(path) => parse_config(path)?,
            None => HashMap::new(),
        };
        let bad = |key: &str, value: &str| Error::Config(format!("invalid {key} = {value}"));
        let long_run = match (args.long_run, file.get("long_run")) {
            (Some(v), _) => v,
            (None, Some(v)) => match v.to_ascii_lowercase().as_str() {
                "1" | "true" | "yes" | "on" => true,
                "0" | "false" | "no" | "off" => false,
                _ => return Err(bad("long_run", v)),
            },
            (None, None) => false,
        };
        let workers = match (args.workers, file.get("workers")) {
            (Some(w), _) => w,
            (None, Some(v)) => v.parse().map_err(|_| bad("workers", v))?,
            (None, None) => std::thread::available_parallelism().map_or(1, |n| n.get()),
        };
        if workers == 0 {
            return Err(bad("workers", "0"));
        }
        Ok(Settings {
            out: args.out.clone().or_else(|| file.get("out").map(PathBuf::from)),
            csv: args.csv.clone().or_else(|| file.get("csv").map(PathBuf::from)),
            long_run,
            workers,
        })
    }
}

/// Parses `argv` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer(&mut out, value)?;
    out.write_all(b"\n")?;
    Ok(())
}

struct Stdout;

impl RecordSink for Stdout {
    fn emit(&mut self, record: &VerificationRecord) -> Result<()> {
        let mut out = io::stdout().lock();
        serde_json::to_writer(&mut out, record)?;
        out.write_all(b"\n")?;
        out.flush()?;
        Ok(())
    }
}

/// The record sink for this run and any records already in the resumed log.
fn open_sink(settings: &Settings, resume: Option<&Path>) -> Result<(Tee, Vec<VerificationRecord>)> {
    let mut tee = Tee::default();
    let mut prior = Vec::new();
    match (resume, &settings.out) {
        (Some(log), _) => {
            prior = load_log(log)?;
            tee.push(Box::new(JsonlSink::append(log)?));
        }
        (None, Some(out)) => tee.push(Box::new(JsonlSink::append(out)?)),
        (None, None) => tee.push(Box::new(Stdout)),
    }
    if let Some(csv) = &settings.csv {
        tee.push(Box::new(CsvMirror::append(csv)?));
    }
    Ok((tee, prior))
}

#[derive(Serialize)]
struct SummaryLine<'a> {
    summary: &'a str,
    total: usize,
    passed: usize,
    failed: usize,
    expected_failures: usize,
    nonconforming: usize,
    resumed: usize,
}

fn report_summary(name: &str, s: &RunSummary) -> bool {
    let line = SummaryLine {
        summary: name,
        total: s.total,
        passed: s.passed,
        failed: s.failed,
        expected_failures: s.expected_failures,
        nonconforming: s.nonconforming,
        resumed: s.resumed,
    };
    if let Ok(text) = serde_json::to_string(&line) {
        eprintln!("{text}");
    }
    s.all_conforming()
}

fn single_record(settings: &Settings, record: VerificationRecord) -> Result<bool> {
    let (mut sink, _) = open_sink(settings, None)?;
    sink.emit(&record)?;
    Ok(record.pass)
}

fn require_long_run(settings: &Settings, what: &str, value: u64, cap: u64) -> Result<()> {
    if value > cap && !settings.long_run {
        return Err(Error::Config(format!("{what} = {value} exceeds {cap}; pass --long-run to allow it")));
    }
    Ok(())
}

pub fn execute(cli: &Cli) -> Result<bool> {
    let settings = Settings::resolve(&cli.global)?;
    match &cli.command {
        Command::Delta { cmd } => delta(&settings, cmd),
        Command::Collision { cmd: CollisionCmd::Find { n, m } } => {
            if *n == 0 || *m == 0 || *n > u32::MAX as u64 {
                return Err(Error::OutOfRange(format!("need n in [1, 2^32) and m >= 1, got n = {n}, m = {m}")));
            }
            #[derive(Serialize)]
            struct Found {
                n: u64,
                m: u64,
                witness: Option<crate::discriminator::CollisionWitness>,
            }
            print_json(&Found { n: *n, m: *m, witness: find_collision(*n, *m) })?;
            Ok(true)
        }
        Command::Charsum { cmd } => charsum(&settings, cmd),
        Command::Lemma { cmd: LemmaCmd::Verify { id, limit, resume } } => {
            let limit = limit.unwrap_or_else(|| default_limit(id));
            require_long_run(&settings, "--limit", limit, desk_limit(id))?;
            let suites = lemma_suites(id, limit)?;
            let refs: Vec<&dyn Suite> = suites.iter().map(|s| s.as_ref()).collect();
            let (mut sink, prior) = open_sink(&settings, resume.as_deref())?;
            let summary = run_suites(&refs, settings.workers, &prior, &mut sink)?;
            Ok(report_summary(id, &summary))
        }
        Command::Cases { cmd: CasesCmd::Classify { m, n, exploratory } } => {
            let factored = factorize(*m);
            let tag: CaseTag =
                if *exploratory { classify_modulus(&factored)? } else { classify(&factored, *n)? };
            #[derive(Serialize)]
            struct Classified {
                m: u64,
                n: u64,
                factors: String,
                label: String,
                #[serde(flatten)]
                tag: CaseTag,
            }
            print_json(&Classified { m: *m, n: *n, factors: factored.to_string(), label: tag.to_string(), tag })?;
            Ok(true)
        }
        Command::Counting { cmd } => counting(cmd),
    }
}

fn delta(settings: &Settings, cmd: &DeltaCmd) -> Result<bool> {
    match cmd {
        DeltaCmd::Compute { n, method } => {
            let brute = || delta_bruteforce(*n, false).map(|b| b.result);
            match method {
                Method::Brute => {
                    print_json(&brute()?)?;
                    Ok(true)
                }
                Method::Closed => {
                    print_json(&delta_closed_form(*n)?)?;
                    Ok(true)
                }
                Method::Both => {
                    let start = std::time::Instant::now();
                    let (b, c) = (brute()?, delta_closed_form(*n)?);
                    single_record(
                        settings,
                        VerificationRecord {
                            suite: "delta_compute".into(),
                            params: params([("n", *n)]),
                            computed: b.delta_value.to_string(),
                            expected: c.delta_value.to_string(),
                            pass: b.delta_value == c.delta_value,
                            elapsed_us: start.elapsed().as_micros() as u64,
                            worker: 0,
                        },
                    )
                }
            }
        }
        DeltaCmd::Verify { from, to, resume } => {
            require_long_run(settings, "--to", *to, DESK_DELTA_LIMIT)?;
            let (mut sink, prior) = open_sink(settings, resume.as_deref())?;
            let summary = verify_range(*from, *to, settings.workers, &prior, &mut sink)?;
            Ok(report_summary("delta_verify", &summary))
        }
    }
}

fn charsum(settings: &Settings, cmd: &CharsumCmd) -> Result<bool> {
    match cmd {
        CharsumCmd::Ap { p, delta, u, form } => {
            #[derive(Serialize)]
            struct Ap {
                p: u64,
                delta: u64,
                u: i64,
                form: &'static str,
                value: String,
                abs: f64,
            }
            let show = |form, v: crate::charsum::CyclotomicInt| Ap {
                p: *p,
                delta: *delta,
                u: *u,
                form,
                abs: v.abs(),
                value: v.to_string(),
            };
            match form {
                Form::Direct => print_json(&show("direct", ap_direct(*p, *delta, *u)?))?,
                Form::Kloosterman => print_json(&show("kloosterman", ap_kloosterman(*p, *delta, *u)?))?,
                Form::Both => {
                    let start = std::time::Instant::now();
                    let (d, k) = (ap_direct(*p, *delta, *u)?, ap_kloosterman(*p, *delta, *u)?);
                    return single_record(
                        settings,
                        VerificationRecord {
                            suite: "ap_forms".into(),
                            params: params([("delta", *delta), ("p", *p), ("u", u.rem_euclid(*p as i64) as u64)]),
                            pass: d == k,
                            computed: d.to_string(),
                            expected: k.to_string(),
                            elapsed_us: start.elapsed().as_micros() as u64,
                            worker: 0,
                        },
                    );
                }
            }
            Ok(true)
        }
        CharsumCmd::Ell { p, delta } => {
            #[derive(Serialize)]
            struct Ell {
                p: u64,
                delta: u64,
                ell: u64,
                bound: u64,
            }
            print_json(&Ell { p: *p, delta: *delta, ell: ell_p(*p, *delta)?, bound: l_p(*p)? })?;
            Ok(true)
        }
        CharsumCmd::Profile { p, delta } => {
            let profile = residue_profile(*p, *delta)?;
            let (zero, plus, minus) = ResidueProfile::closed_form(*p);
            #[derive(Serialize)]
            struct Profile {
                p: u64,
                delta: u64,
                n_plus: u64,
                n_minus: u64,
                n_zero: u64,
                closed_form: [u64; 3],
                matches: bool,
            }
            print_json(&Profile {
                p: *p,
                delta: *delta,
                n_plus: profile.n_plus,
                n_minus: profile.n_minus,
                n_zero: profile.n_zero,
                closed_form: [plus, minus, zero],
                matches: profile.matches_closed_form(),
            })?;
            Ok(true)
        }
    }
}

fn counting(cmd: &CountingCmd) -> Result<bool> {
    match cmd {
        CountingCmd::N(i) => print_json(&count_n(i.p, i.t, i.delta)?)?,
        CountingCmd::NStar(i) => print_json(&count_n_star(i.p, i.t, i.delta)?)?,
        CountingCmd::Tj { instance: i, j } => {
            let reports = match j {
                Some(j) => vec![compute_tj(i.p, i.t, i.delta, *j)?],
                None => compute_all_tj(i.p, i.t, i.delta, crate::casework::counting::DEFAULT_BUDGET)?,
            };
            let consistent = reports.iter().all(|r| r.consistent);
            print_json(&reports)?;
            return Ok(consistent);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn global(workers: Option<usize>, config: Option<PathBuf>) -> GlobalArgs {
        GlobalArgs { workers, config, ..GlobalArgs::default() }
    }

    #[test]
    fn config_file_fills_gaps_only() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("discrim.conf");
        std::fs::write(&path, "# sweep settings\nworkers = 3\nlong-run = yes\ncsv = mirror.csv\n").unwrap();
        let s = Settings::resolve(&global(None, Some(path.clone()))).unwrap();
        assert_eq!((s.workers, s.long_run, s.csv), (3, true, Some(PathBuf::from("mirror.csv"))));
        let s = Settings::resolve(&global(Some(5), Some(path))).unwrap();
        assert_eq!(s.workers, 5);
    }

    #[test]
    fn bad_config_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.conf");
        std::fs::write(&path, "threads = 4\n").unwrap();
        assert!(matches!(Settings::resolve(&global(None, Some(path.clone()))), Err(Error::Config(_))));
        std::fs::write(&path, "workers = many\n").unwrap();
        assert!(Settings::resolve(&global(None, Some(path))).is_err());
        assert!(Settings::resolve(&global(Some(0), None)).is_err());
    }

    #[test]
    fn parses_every_subcommand() {
        for argv in [
            "discrim delta compute --n 244 --method both",
            "discrim delta verify --from 1 --to 10 --workers 2",
            "discrim collision find --n 10 --m 12",
            "discrim charsum ap --p 5 --delta 1 --u -2 --form kloosterman",
            "discrim charsum ell --p 7 --delta 1",
            "discrim charsum profile --p 7 --delta 1",
            "discrim lemma verify --id 5.1 --limit 18",
            "discrim cases classify --m 567 --n 245",
            "discrim counting N --p 7 --t 1 --delta 1",
            "discrim counting Nstar --p 5 --t 1 --delta 2",
            "discrim counting Tj --p 5 --t 2 --delta 1 --j 1",
        ] {
            assert!(Cli::try_parse_from(argv.split(' ')).is_ok(), "{argv}");
        }
        assert!(Cli::try_parse_from("discrim delta compute".split(' ')).is_err());
        assert!(Cli::try_parse_from("discrim delta compute --n 5 --method fast".split(' ')).is_err());
    }

    #[test]
    fn long_run_gate() {
        assert_eq!(run("discrim lemma verify --id 4.9 --limit 200000".split(' ')), 2);
        assert_eq!(run("discrim delta verify --from 1 --to 20000".split(' ')), 2);
    }
}
