//! Command-line front door: traces, searches, family checks, and residue-map
//! censuses, with CSV/JSON emission.
//!
//! Exit codes: 0 on success, 1 on domain errors (zero polynomial,
//! out-of-range degree, bad config file), 2 on usage errors.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{ArgGroup, Parser, Subcommand};

use gf2collatz::collatz;
use gf2collatz::enumeration::{count, Constraint, Stratum};
use gf2collatz::families::{
    check_conjecture_2, check_conjecture_3, check_conjecture_4, ConjectureReport, FamilyId,
};
use gf2collatz::gf2poly::Poly;
use gf2collatz::matthews::{self, MatthewsConfig};
use gf2collatz::search::{self, SearchConfig};

#[derive(Parser)]
#[command(name = "gf2collatz", version, about = "Collatz-style dynamics over binary polynomials")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Trace one seed; prints its odd degree sequence
    Trace {
        /// Seed polynomial, as text ("x^3+x+1") or hex mask ("0xb")
        #[arg(long)]
        poly: String,
        /// Emit the full trace as JSON instead
        #[arg(long)]
        json: bool,
        /// Emit the full trace as a line-oriented text record instead
        #[arg(long)]
        record: bool,
    },
    /// Maximal trajectory length per degree: CSV rows for n = 1..=N
    SearchF {
        #[arg(long)]
        n: u32,
        /// Worker threads (0 = one per core)
        #[arg(long, default_value_t = 0)]
        par: usize,
        /// Checkpoint file, appended as ranges complete
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Resume from the checkpoint instead of starting over
        #[arg(long, requires = "checkpoint")]
        resume: bool,
    },
    /// Maximal within-degree chain length per degree: CSV rows for n = 2..=N
    SearchG {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 0)]
        par: usize,
        /// Emit the full chain census of degree N as JSON instead of CSV
        #[arg(long)]
        census: bool,
    },
    /// Family tables and conjecture checks
    Families {
        /// One of: c2, c3, c4, tables
        #[arg(long)]
        check: String,
        /// Inclusive parameter range "a..b" (r values for c2, degrees otherwise)
        #[arg(long)]
        range: String,
        /// Output format for conjecture checks: csv or text
        #[arg(long, default_value = "csv")]
        format: String,
    },
    /// Classify trajectories of the generalized (K*S - R)/D map
    #[command(group(ArgGroup::new("what").required(true).args(["all_seeds_upto", "seed"])))]
    Matthews {
        /// Config file: lines K=<poly>, D=<poly>, then R[<residue>]=<poly>
        #[arg(long)]
        config: PathBuf,
        /// Degree threshold for declaring divergence
        #[arg(long, default_value_t = 64)]
        max_degree: usize,
        /// Step budget per trajectory
        #[arg(long, default_value_t = 10_000)]
        steps: usize,
        /// Census CSV over every seed of degree <= this
        #[arg(long)]
        all_seeds_upto: Option<usize>,
        /// Classify a single seed
        #[arg(long)]
        seed: Option<String>,
    },
    /// Stratum sizes with closed-form cross-check
    Count {
        #[arg(long)]
        degree: u32,
        /// One of: odd, quadrants, all
        #[arg(long)]
        stratum: String,
    },
}

fn main() {
    // Die quietly on a closed pipe (e.g. `... | head`) instead of panicking.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    if let Err(message) = run(cli.command) {
        eprintln!("error: {message}");
        std::process::exit(1);
    }
}

fn run(command: Command) -> Result<(), String> {
    match command {
        Command::Trace { poly, json, record } => cmd_trace(&poly, json, record),
        Command::SearchF {
            n,
            par,
            checkpoint,
            resume,
        } => cmd_search_f(n, par, checkpoint.as_deref(), resume),
        Command::SearchG { n, par, census } => cmd_search_g(n, par, census),
        Command::Families {
            check,
            range,
            format,
        } => cmd_families(&check, &range, &format),
        Command::Matthews {
            config,
            max_degree,
            steps,
            all_seeds_upto,
            seed,
        } => cmd_matthews(&config, max_degree, steps, all_seeds_upto, seed.as_deref()),
        Command::Count { degree, stratum } => cmd_count(degree, &stratum),
    }
}

fn parse_poly(text: &str) -> Result<Poly, String> {
    text.parse::<Poly>().map_err(|e| e.to_string())
}

fn cmd_trace(poly: &str, json: bool, record: bool) -> Result<(), String> {
    let seed = parse_poly(poly)?;
    if json || record {
        let trace = collatz::trace(&seed).map_err(|e| e.to_string())?;
        if json {
            println!("{}", trace.to_json());
        }
        if record {
            print!("{}", trace.to_text_record());
        }
    } else {
        let degrees = collatz::odd_degree_sequence(&seed).map_err(|e| e.to_string())?;
        println!("{degrees:?}");
    }
    Ok(())
}

const CONVENTION_NOTE: &str = "# convention: row n ranges over seeds with n coefficient bits \
(degree n-1); value counts the sequence terms before the stationary tail (x^2+x, 1), which is \
2m-2 for an odd seed and 2m-1 for an even one, m being the count of odd terms through the \
first 1";

fn cmd_search_f(
    n: u32,
    par: usize,
    checkpoint: Option<&std::path::Path>,
    resume: bool,
) -> Result<(), String> {
    let cfg = SearchConfig::with_workers(par);
    let table =
        search::compute_f_table(n, &cfg, checkpoint, resume).map_err(|e| e.to_string())?;
    let mut out = String::new();
    let _ = writeln!(out, "{}", search::CSV_HEADER);
    for record in &table {
        let _ = writeln!(out, "{}", record.csv_row());
    }
    let _ = writeln!(out, "{CONVENTION_NOTE}");
    print!("{out}");
    Ok(())
}

fn cmd_search_g(n: u32, par: usize, census: bool) -> Result<(), String> {
    let cfg = SearchConfig::with_workers(par);
    if census {
        let (_, census) = search::compute_g(n, &cfg).map_err(|e| e.to_string())?;
        println!("{}", census.to_json());
        return Ok(());
    }
    let mut out = String::new();
    let _ = writeln!(out, "{}", search::CSV_HEADER);
    for degree in 2..=n {
        let (record, _) = search::compute_g(degree, &cfg).map_err(|e| e.to_string())?;
        let _ = writeln!(out, "{}", record.csv_row());
    }
    print!("{out}");
    Ok(())
}

fn parse_range(range: &str) -> Result<(u32, u32), String> {
    let (a, b) = range
        .split_once("..")
        .ok_or_else(|| format!("range `{range}` must look like a..b (inclusive)"))?;
    let lo: u32 = a.trim().parse().map_err(|_| format!("bad range start `{a}`"))?;
    let hi: u32 = b.trim().parse().map_err(|_| format!("bad range end `{b}`"))?;
    if lo > hi {
        return Err(format!("empty range `{range}`"));
    }
    Ok((lo, hi))
}

fn print_conjectures(report: &ConjectureReport, format: &str) -> Result<(), String> {
    match format {
        "csv" => print!("{}", report.to_csv()),
        "text" => {
            println!("conjecture {}", report.conjecture.label());
            for row in &report.rows {
                println!(
                    "{} n={} | {:?} | predicted {} observed {} | {}",
                    row.family,
                    row.n,
                    row.odd_degrees,
                    row.predicted,
                    row.observed,
                    row.verdict.label()
                );
            }
        }
        other => return Err(format!("unknown format `{other}` (use csv or text)")),
    }
    Ok(())
}

fn family_table_section(
    title: &str,
    ids: impl Iterator<Item = FamilyId>,
) -> Result<String, String> {
    let mut out = format!("family {title}\n");
    for id in ids {
        match id.sequence() {
            Ok((_, degrees)) => {
                let label = id
                    .parameter()
                    .map_or_else(|| id.label().to_string(), |n| n.to_string());
                let _ = writeln!(out, "{} | {:?} | {}", label, degrees, degrees.len());
            }
            Err(gf2collatz::families::FamilyError::ParamOutOfRange { .. }) => continue,
            Err(e) => return Err(e.to_string()),
        }
    }
    Ok(out)
}

fn cmd_families(check: &str, range: &str, format: &str) -> Result<(), String> {
    let (lo, hi) = parse_range(range)?;
    match check {
        "c2" => print_conjectures(&check_conjecture_2(lo..=hi).map_err(|e| e.to_string())?, format),
        "c3" => print_conjectures(&check_conjecture_3(lo..=hi).map_err(|e| e.to_string())?, format),
        "c4" => print_conjectures(&check_conjecture_4(lo..=hi).map_err(|e| e.to_string())?, format),
        "tables" => {
            let mut out = String::new();
            out += &family_table_section("t (x^n+x+1)", (lo..=hi).map(FamilyId::T))?;
            out += &family_table_section("u (x^n+x^(n-1)+1)", (lo..=hi).map(FamilyId::U))?;
            out += &family_table_section("s (x^n+x^7+x^3+1)", (lo..=hi).map(FamilyId::S))?;
            out += &family_table_section("mpow (M1^n+1)", (lo..=hi).map(FamilyId::M1Power))?;
            out += &family_table_section(
                "p (fixed degree-14 seeds)",
                [FamilyId::P1, FamilyId::P2, FamilyId::P3].into_iter(),
            )?;
            print!("{out}");
            Ok(())
        }
        other => Err(format!("unknown check `{other}` (use c2, c3, c4, or tables)")),
    }
}

fn load_matthews_config(path: &std::path::Path) -> Result<MatthewsConfig, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let mut multiplier: Option<Poly> = None;
    let mut modulus: Option<Poly> = None;
    let mut residues: Vec<(Poly, Poly)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (lhs, rhs) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected key=value", lineno + 1))?;
        let (lhs, rhs) = (lhs.trim(), rhs.trim());
        let value = parse_poly(rhs).map_err(|e| format!("line {}: {e}", lineno + 1))?;
        match lhs {
            "K" => multiplier = Some(value),
            "D" => modulus = Some(value),
            _ => {
                let residue_text = lhs
                    .strip_prefix("R[")
                    .and_then(|s| s.strip_suffix(']'))
                    .ok_or_else(|| {
                        format!("line {}: unknown key `{lhs}` (expected K, D, or R[..])", lineno + 1)
                    })?;
                let residue =
                    parse_poly(residue_text).map_err(|e| format!("line {}: {e}", lineno + 1))?;
                residues.push((residue, value));
            }
        }
    }
    let multiplier = multiplier.ok_or("config is missing a K= line")?;
    let modulus = modulus.ok_or("config is missing a D= line")?;
    MatthewsConfig::new(multiplier, modulus, &residues).map_err(|e| e.to_string())
}

fn cmd_matthews(
    config_path: &std::path::Path,
    max_degree: usize,
    steps: usize,
    all_seeds_upto: Option<usize>,
    seed: Option<&str>,
) -> Result<(), String> {
    let cfg = load_matthews_config(config_path)?;
    if let Some(limit) = all_seeds_upto {
        let rows = matthews::census(&cfg, limit, max_degree, steps);
        print!("{}", matthews::census_csv(&rows));
    }
    if let Some(seed_text) = seed {
        let seed = parse_poly(seed_text)?;
        if seed.is_zero() && matthews::step(&cfg, &seed).is_err() {
            return Err("zero polynomial seed, and R[0] is nonzero".into());
        }
        let outcome = matthews::classify(&cfg, &seed, max_degree, steps);
        println!(
            "seed={:#x} kind={} steps={} max_degree={} cycle_len={}",
            seed,
            outcome.kind.label(),
            outcome.steps(),
            outcome.max_degree(),
            outcome.cycle_len()
        );
        if let gf2collatz::matthews::OutcomeKind::Cycle { entry, members } = &outcome.kind {
            let hex: Vec<String> = members.iter().map(|m| m.to_hex()).collect();
            println!("cycle entry={} members={}", entry, hex.join(","));
        }
    }
    Ok(())
}

fn cmd_count(degree: u32, stratum: &str) -> Result<(), String> {
    let run = |constraint| -> Result<u64, String> {
        let stratum = Stratum::new(degree, constraint).map_err(|e| e.to_string())?;
        count(stratum).map_err(|e| e.to_string())
    };
    match stratum {
        "odd" => println!("{}", run(Constraint::Odd)?),
        "all" => println!("{}", run(Constraint::All)?),
        "quadrants" => {
            for constraint in [
                Constraint::ValueAt0(false),
                Constraint::ValueAt0(true),
                Constraint::ValueAt1(false),
                Constraint::ValueAt1(true),
            ] {
                println!("{},{}", constraint.label(), run(constraint)?);
            }
        }
        other => return Err(format!("unknown stratum `{other}` (use odd, quadrants, or all)")),
    }
    Ok(())
}
