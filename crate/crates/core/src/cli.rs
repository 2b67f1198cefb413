//! Command-line front end. Results go to `out`, diagnostics to `err`.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::circuit::{read_jsonl, write_jsonl, CountReport};
use crate::constructions::{
    boost_to_one, build_c1, build_recursive, build_schedule, loglog_recipe, main_result, BuildMode, Claim, MainMode, Pipeline,
    RecursionSchedule, SearchAlgorithm,
};
use crate::error::{bail, Error, Result};
use crate::estimator::{estimate_recursive, EstimateReport};
use crate::numerics::{EvalCache, Real};
use crate::oracle::Database;
use crate::simulator::{good_probability, run as simulate_circuit, GoodSet, SimConfig, DEFAULT_MAX_WIRES};
use crate::verify::{run_suites, Suite, VerifyConfig};

/// Simulated success must match `a_known` this closely.
const TOLERANCE: f64 = 1e-9;

#[derive(Parser, Debug)]
#[command(name = "gatesearch", version, about = "Exact quantum search circuits: schedules, estimates, simulation and verification")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the address widths of a recursion and the hypotheses they meet.
    Schedule(ScheduleArgs),
    /// Exact query and gate counts with every bound check.
    Estimate(EstimateArgs),
    /// Build a construction, run it on a database and compare with `a_known`.
    Simulate(SimulateArgs),
    /// Run the property suites.
    Verify(VerifyArgs),
    /// Write a construction as line-oriented JSON.
    Export(ExportArgs),
    /// Read an exported circuit, print its counts and optionally simulate it.
    Import(ImportArgs),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Tsv,
    Json,
}

#[derive(Args, Debug)]
pub struct Output {
    #[arg(long, value_enum, default_value_t = Format::Tsv)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct ScheduleArgs {
    /// log N.
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub k: u64,
    #[arg(long)]
    pub r: u32,
    /// Allow k above log log N and report the broken hypotheses.
    #[arg(long)]
    pub relaxed: bool,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("recipe").args(["loglog", "main_eps", "main_r"])))]
pub struct EstimateArgs {
    /// log N.
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub k: Option<u64>,
    #[arg(long)]
    pub r: Option<u32>,
    /// Boost the recursion to certainty.
    #[arg(long)]
    pub boost: bool,
    /// Single lift at k = log log N.
    #[arg(long, alias = "grover02")]
    pub loglog: bool,
    /// r = log* N with k chosen for overhead at most 1 + epsilon.
    #[arg(long, requires = "epsilon")]
    pub main_eps: bool,
    #[arg(long, requires = "main_eps")]
    pub epsilon: Option<f64>,
    /// Fixed depth r with k = (c log* N)^2.
    #[arg(long, requires = "r")]
    pub main_r: bool,
    #[arg(long)]
    pub relaxed: bool,
    #[command(flatten)]
    pub output: Output,
}

/// Which construction to build.
#[derive(Args, Debug)]
#[command(group(ArgGroup::new("construction").args(["c1", "pipeline"]).required(true)))]
pub struct ConstructionArgs {
    /// First level: H^n amplified to 1/k.
    #[arg(long)]
    pub c1: bool,
    /// Recursion over `--n-seq`, or over the schedule for `--n`, `--r`.
    #[arg(long)]
    pub pipeline: bool,
    /// Address width (log N).
    #[arg(long)]
    pub n: Option<u32>,
    /// Hand-picked widths, comma separated.
    #[arg(long, value_delimiter = ',', conflicts_with = "n")]
    pub n_seq: Option<Vec<u32>>,
    #[arg(long, default_value_t = 4)]
    pub k: u64,
    #[arg(long)]
    pub r: Option<u32>,
    #[arg(long, requires = "pipeline")]
    pub boost: bool,
    #[arg(long)]
    pub relaxed: bool,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("database").args(["solution", "bits"])))]
pub struct DatabaseArgs {
    /// Position of the unique marked item.
    #[arg(long)]
    pub solution: Option<u64>,
    /// The database as a hex string, most significant item first.
    #[arg(long)]
    pub bits: Option<String>,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub construction: ConstructionArgs,
    #[command(flatten)]
    pub database: DatabaseArgs,
    /// Exact counts only; no circuit, no simulation.
    #[arg(long)]
    pub count_only: bool,
    #[arg(long, default_value_t = DEFAULT_MAX_WIRES)]
    pub max_sim_wires: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Comma-separated suites: numerics, circuit, oracle, simulator, constructions, estimator, facts.
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<Suite>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Shift the expected amplification gate count by one.
    #[arg(long, hide = true)]
    pub inject_fault: bool,
}

#[derive(Args, Debug)]
pub struct ExportArgs {
    #[command(flatten)]
    pub construction: ConstructionArgs,
    #[arg(long, short)]
    pub output: PathBuf,
}

#[derive(Args, Debug)]
pub struct ImportArgs {
    #[arg(long, short)]
    pub input: PathBuf,
    #[command(flatten)]
    pub database: DatabaseArgs,
    #[arg(long, default_value_t = DEFAULT_MAX_WIRES)]
    pub max_sim_wires: usize,
    #[command(flatten)]
    pub output: Output,
}

/// Twelve significant digits.
pub fn format_probability(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let mag = x.abs().log10().floor() as i32;
    if (-4..12).contains(&mag) {
        format!("{:.*}", (11 - mag) as usize, x)
    } else {
        format!("{x:.11e}")
    }
}

fn warn_unmet<'a>(err: &mut dyn Write, unmet: impl IntoIterator<Item = &'a Claim>) -> Result<()> {
    let mut seen = std::collections::BTreeSet::new();
    let list: Vec<String> =
        unmet.into_iter().filter(|c| seen.insert(c.name.clone())).map(|c| format!("{} ({})", c.name, c.detail)).collect();
    if !list.is_empty() {
        writeln!(err, "warning: relaxed mode; unmet preconditions: {}", list.join("; "))?;
    }
    Ok(())
}

/// Parses `argv` and runs the command; returns the process exit status.
pub fn main_with(argv: impl IntoIterator<Item = std::ffi::OsString>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = if code == 0 { e.to_string() } else { e.render().to_string() };
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        // A closed pipe downstream (`| head`) is not a failure of ours.
        Err(Error::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let mut cache = EvalCache::default();
    match cmd {
        Command::Schedule(a) => schedule(a, out, err),
        Command::Estimate(a) => estimate(a, &mut cache, out, err),
        Command::Simulate(a) => simulate(a, &mut cache, out, err),
        Command::Verify(a) => verify(a, out),
        Command::Export(a) => export(a, &mut cache, out, err),
        Command::Import(a) => import(a, out),
    }
}

fn schedule(a: ScheduleArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let s = build_schedule(a.n, a.k, a.r, a.relaxed)?;
    if a.relaxed {
        warn_unmet(err, s.preconditions.iter().filter(|c| !c.holds))?;
    }
    match a.output.format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&s).expect("schedule serializes"))?,
        Format::Tsv => {
            writeln!(out, "level\tn_i")?;
            for (i, n) in s.n_seq.iter().enumerate() {
                writeln!(out, "{}\t{n}", i + 1)?;
            }
            writeln!(out)?;
            writeln!(out, "claim\tholds\tdetail")?;
            for c in &s.preconditions {
                writeln!(out, "{}\t{}\t{}", c.name, c.holds, c.detail)?;
            }
        }
    }
    Ok(0)
}

fn estimate(a: EstimateArgs, cache: &mut EvalCache, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let mut notes: Vec<(&str, String)> = Vec::new();
    let p = if a.loglog {
        loglog_recipe(a.n, BuildMode::CountOnly, cache)?
    } else if a.main_eps || a.main_r {
        let mode = match (a.main_eps, a.epsilon, a.r) {
            (true, Some(e), _) => MainMode::FixedEps(e),
            (false, _, Some(r)) => MainMode::FixedR(r),
            _ => bail!(Config, "--main-eps needs --epsilon and --main-r needs --r"),
        };
        if a.k.is_some() {
            bail!(Config, "k is chosen by the recipe; drop --k");
        }
        let p = main_result(a.n, mode, a.relaxed, BuildMode::CountOnly, cache)?;
        let c = p.k_choice.as_ref().expect("recipes record their choice");
        notes.push(("c", c.c.clone()));
        notes.push(("log_star", c.log_star.to_string()));
        notes.push(("r", p.levels.len().to_string()));
        p
    } else {
        let (Some(k), Some(r)) = (a.k, a.r) else { bail!(Config, "estimate needs --k and --r (or a recipe flag)") };
        estimate_recursive(a.n, k, r, a.relaxed, a.boost, cache)?
    };
    if a.relaxed {
        warn_unmet(err, p.unmet())?;
    }
    let report = EstimateReport::from_pipeline(&p);
    notes.insert(0, ("k", report.k.clone()));
    notes.insert(1, ("n_seq", report.n_seq.iter().map(u32::to_string).collect::<Vec<_>>().join(",")));
    match a.output.format {
        Format::Json => {
            let mut v = serde_json::to_value(&report).expect("report serializes");
            for (key, val) in &notes[2..] {
                v[*key] = json!(val);
            }
            writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("value serializes"))?;
        }
        Format::Tsv => {
            let line: Vec<String> = notes.iter().map(|(k, v)| format!("{k}={v}")).collect();
            writeln!(out, "# {}", line.join(" "))?;
            write!(out, "{}", report.to_tsv())?;
        }
    }
    if !report.bounds_ok() {
        writeln!(err, "bound check failed with preconditions met")?;
        return Ok(1);
    }
    Ok(0)
}

/// Number of wires the construction will use, known before building it.
fn planned_wires(c: &ConstructionArgs) -> Result<(u64, Option<RecursionSchedule>)> {
    if c.c1 {
        let Some(n) = c.n else { bail!(Config, "--c1 needs --n") };
        if c.n_seq.is_some() || c.r.is_some() {
            bail!(Config, "--c1 takes --n and --k only");
        }
        return Ok((u64::from(n) + 1, None));
    }
    let s = match (&c.n_seq, c.n, c.r) {
        (Some(seq), None, None) => RecursionSchedule::with_widths(seq.clone(), c.k)?,
        (None, Some(n), Some(r)) => build_schedule(n, c.k, r, c.relaxed)?,
        _ => bail!(Config, "--pipeline needs either --n-seq or both --n and --r"),
    };
    let wires = u64::from(s.n()) + s.n_seq.len() as u64 + u64::from(c.boost);
    Ok((wires, Some(s)))
}

fn build(c: &ConstructionArgs, mode: BuildMode, cache: &mut EvalCache, err: &mut dyn Write) -> Result<(SearchAlgorithm, Option<Pipeline>)> {
    let (_, sched) = planned_wires(c)?;
    let k = Real::ratio(c.k as i64, 1);
    match sched {
        None => Ok((build_c1(c.n.expect("checked"), &k, mode, cache)?, None)),
        Some(s) => {
            let p = build_recursive(&s, false, mode, cache)?;
            warn_unmet(err, p.unmet())?;
            let alg = match c.boost {
                true => boost_to_one(p.last(), &k, cache)?,
                false => p.last().clone(),
            };
            Ok((alg, Some(p)))
        }
    }
}

fn database(d: &DatabaseArgs, n: u32) -> Result<Database> {
    let db = match (d.solution, &d.bits) {
        (Some(t), None) => crate::oracle::make_unique_database(n, t)?,
        (None, Some(hex)) => Database::from_hex(hex, Some(n))?,
        _ => bail!(Config, "give the database with --solution or --bits"),
    };
    if db.solution().is_none() {
        bail!(Config, "the database must have exactly one marked item, found {}", db.ones().len());
    }
    Ok(db)
}

fn report(format: Format, fields: &[(&str, String)], out: &mut dyn Write) -> Result<()> {
    match format {
        Format::Tsv => {
            for (k, v) in fields {
                writeln!(out, "{k}\t{v}")?;
            }
        }
        Format::Json => {
            let map: serde_json::Map<String, serde_json::Value> = fields.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
            writeln!(out, "{}", serde_json::to_string_pretty(&map).expect("map serializes"))?;
        }
    }
    Ok(())
}

fn count_fields(c: &CountReport) -> [(&'static str, String); 2] {
    [("queries", c.queries.to_string()), ("gates", c.elementary_gates.to_string())]
}

fn simulate(a: SimulateArgs, cache: &mut EvalCache, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let (wires, _) = planned_wires(&a.construction)?;
    if a.count_only {
        let (alg, _) = build(&a.construction, BuildMode::CountOnly, cache, err)?;
        let mut fields = vec![("a_known", alg.a_known().to_decimal(40)), ("wires", alg.total_wires().to_string())];
        fields.extend(count_fields(alg.counts()));
        report(a.output.format, &fields, out)?;
        return Ok(0);
    }
    if wires > a.max_sim_wires as u64 {
        bail!(Resource, "{wires} wires exceed the simulation cap of {}; use --count-only for exact counts", a.max_sim_wires);
    }
    let (alg, _) = build(&a.construction, BuildMode::Circuit, cache, err)?;
    let db = database(&a.database, alg.n())?;
    let state = simulate_circuit(alg.require_circuit()?, &db, &SimConfig { max_wires: a.max_sim_wires })?;
    let measured = good_probability(&state, &alg.good_set(&db))?;
    let expected = alg.a_known().to_f64();
    let diff = (measured - expected).abs();
    let mut fields = vec![
        ("a_known", format_probability(expected)),
        ("measured", format_probability(measured)),
        ("difference", format_probability(diff)),
        ("wires", alg.total_wires().to_string()),
    ];
    fields.extend(count_fields(alg.counts()));
    report(a.output.format, &fields, out)?;
    if diff > TOLERANCE {
        writeln!(err, "measured probability differs from a_known by {}", format_probability(diff))?;
        return Ok(1);
    }
    Ok(0)
}

fn verify(a: VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let cfg = VerifyConfig { only: a.only, seed: a.seed, inject_fault: a.inject_fault };
    let results = run_suites(&cfg);
    writeln!(out, "suite\tcases\tfailures\tseconds\tstatus")?;
    for r in &results {
        writeln!(out, "{}\t{}\t{}\t{:.2}\t{}", r.suite, r.cases, r.failures.len(), r.seconds, if r.passed() { "PASS" } else { "FAIL" })?;
    }
    for r in &results {
        for f in &r.failures {
            writeln!(out, "FAIL {}: {f}", r.suite)?;
        }
    }
    Ok(if results.iter().all(|r| r.passed()) { 0 } else { 1 })
}

fn export(a: ExportArgs, cache: &mut EvalCache, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let (alg, _) = build(&a.construction, BuildMode::Circuit, cache, err)?;
    let file = File::create(&a.output).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", a.output.display()))))?;
    write_jsonl(alg.require_circuit()?, Some(&alg.extension()), BufWriter::new(file))?;
    let mut fields = vec![("path", a.output.display().to_string()), ("records", (alg.require_circuit()?.len() + 2).to_string())];
    fields.extend(count_fields(alg.counts()));
    report(Format::Tsv, &fields, out)?;
    Ok(0)
}

fn import(a: ImportArgs, out: &mut dyn Write) -> Result<i32> {
    let file = File::open(&a.input).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", a.input.display()))))?;
    let (circuit, ext) = read_jsonl(BufReader::new(file))?;
    let mut fields = vec![("wires", circuit.num_wires().to_string())];
    fields.extend(count_fields(&circuit.counts()));
    let simulate = a.database.solution.is_some() || a.database.bits.is_some();
    let mut code = 0;
    if simulate {
        let Some(ext) = &ext else { bail!(Config, "the file has no extension record, so there is no good set to measure") };
        if circuit.num_wires() > a.max_sim_wires {
            bail!(Resource, "{} wires exceed the simulation cap of {}", circuit.num_wires(), a.max_sim_wires);
        }
        let db = database(&a.database, ext.address_wires.len() as u32)?;
        let state = simulate_circuit(&circuit, &db, &SimConfig { max_wires: a.max_sim_wires })?;
        let good = GoodSet {
            address_wires: ext.address_wires.clone(),
            flag_wires: ext.flag_wires.last().copied().into_iter().collect(),
            database: &db,
        };
        let measured = good_probability(&state, &good)?;
        let expected: f64 = ext.a_known.parse().map_err(|_| Error::Parse(format!("a_known '{}' is not a decimal", ext.a_known)))?;
        let diff = (measured - expected).abs();
        fields.push(("a_known", format_probability(expected)));
        fields.push(("measured", format_probability(measured)));
        fields.push(("difference", format_probability(diff)));
        if diff > TOLERANCE {
            code = 1;
        }
    } else if let Some(ext) = &ext {
        fields.push(("a_known", ext.a_known.clone()));
    }
    report(a.output.format, &fields, out)?;
    Ok(code)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &str) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = main_with(std::iter::once("gatesearch").chain(args.split_whitespace()).map(Into::into), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn probabilities_have_twelve_significant_digits() {
        assert_eq!(format_probability(0.25), "0.250000000000");
        assert_eq!(format_probability(1.0), "1.00000000000");
        assert_eq!(format_probability(0.0), "0");
        assert_eq!(format_probability(3.5e-16), "3.50000000000e-16");
        assert_eq!(format_probability(0.001), "0.00100000000000");
    }

    #[test]
    fn schedule_rows_and_errors() {
        let (code, out, _) = call("schedule --n 1024 --k 4 --r 3");
        assert_eq!(code, 0);
        assert!(out.starts_with("level\tn_i\n1\t20\n2\t26\n3\t1024\n"), "{out}");
        let (code, _, err) = call("schedule --n 1024 --k 6 --r 2");
        assert_eq!(code, 2);
        assert!(err.contains("not a power of 2"));
        let (code, _, err) = call("schedule --n 20 --k 4 --r 9");
        assert_eq!(code, 2);
        assert!(err.contains("log* N"));
    }

    #[test]
    fn conflicting_flags_are_configuration_errors() {
        assert_eq!(call("estimate --n 64 --loglog --main-r --r 2").0, 2);
        assert_eq!(call("simulate --c1 --pipeline --n 4 --solution 1").0, 2);
        assert_eq!(call("estimate --n 64 --epsilon 1").0, 2);
    }

    #[test]
    fn simulate_c1_and_cap() {
        let (code, out, _) = call("simulate --c1 --n 4 --k 4 --solution 9");
        assert_eq!(code, 0);
        assert!(out.contains("measured\t0.250000000000\n"), "{out}");
        let (code, _, err) = call("simulate --c1 --n 30 --k 4 --solution 9");
        assert_eq!(code, 3);
        assert!(err.contains("--count-only"));
    }
}
