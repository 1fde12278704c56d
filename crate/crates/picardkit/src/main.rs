use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand};
use picardkit::cache::resolve_dir;
use picardkit::error::{CliError, EXIT_OK, EXIT_UNDECIDED};
use picardkit::formats::{from_json, CycleFile, ModuleFamilyFile, SizeTableFile};
use picardkit::pipeline::{self, digest, Session, Settings, Variety};
use picardkit::report::{Report, Timing};
use picardkit::tasks;
use picardkit_core::counting::DEFAULT_BUDGET;
use picardkit_core::weil::DEFAULT_PRECISION_BITS;
use picardkit_core::zeta::ZetaFunction;
use serde_json::Value;

const EXIT_CODES: &str = "\
Exit codes:
  0  success
  1  internal error (including cache and IO failures)
  2  invalid input
  3  budget exceeded (point-count budget, field too large, Sturm precision cap)
  4  undecided (rank pipeline still running, or ambiguous surface zeta function)

The report is printed to stdout as JSON; progress lines go to stderr.
Environment: PICARDKIT_CACHE overrides --cache-dir.";

#[derive(Parser)]
#[command(name = "picardkit", version, about = "Zeta functions, Betti numbers and Picard-rank bounds over finite fields", after_help = EXIT_CODES)]
struct Cli {
    /// Directory of the persistent point-count cache.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Enumerated assignments allowed per point count.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Worker threads for counting (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Cap on Sturm-sequence coefficient size in bits for weight certification.
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION_BITS)]
    precision_bits: u64,
    /// Checkpoint file for the rank pipeline.
    #[arg(long, global = true)]
    checkpoint: Option<PathBuf>,
    /// Leave the timing section out of the report.
    #[arg(long, global = true)]
    no_timing: bool,
    /// Seconds between heartbeat lines on stderr during counting (0 = off).
    #[arg(long, global = true, default_value_t = 10)]
    heartbeat: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Point counts N_1..N_n of a variety spec.
    Count {
        spec: PathBuf,
        #[arg(short, long, default_value_t = 1)]
        n: u32,
    },
    /// Zeta function reconstructed from point counts.
    Zeta { spec: PathBuf },
    /// Betti numbers and weight decomposition, from a spec or a zeta file.
    Betti { input: PathBuf },
    /// dim V_mu for the given p (all p when omitted), from a spec or a zeta file.
    TateBound {
        input: PathBuf,
        #[arg(short, long)]
        p: Vec<u32>,
    },
    /// Rank pipeline: Tate bound against certified lower bounds from cycle data.
    Rank {
        /// Zeta file, report with a zeta section, or variety spec.
        #[arg(long)]
        zeta: PathBuf,
        #[arg(long)]
        cycles: PathBuf,
        #[arg(short, long, default_value_t = 1)]
        p: u32,
    },
    /// Torsion of integral cohomology from a size table.
    Torsion {
        table: PathBuf,
        #[arg(long)]
        degree: Option<u32>,
    },
    /// Upper bounds on the invariant rank from a family of finite Galois modules.
    GaloisRank { family: PathBuf },
    /// Run the demonstration dovetail.
    Dovetail {
        #[arg(long, required = true)]
        demo: bool,
        #[arg(long, default_value_t = 16)]
        tasks: usize,
        #[arg(long, default_value_t = 100_000)]
        quanta: u64,
        #[arg(long, default_value_t = 1)]
        quantum: u64,
        /// Write the NDJSON event trace here.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Make this task panic, to show failure isolation.
        #[arg(long)]
        inject_panic: Option<usize>,
    },
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))
}

fn is_spec(text: &str) -> bool {
    serde_json::from_str::<Value>(text).ok().is_some_and(|v| v.get("generators").is_some())
}

/// A zeta function from a spec (computing it and filling the report) or
/// from a zeta file. Returns it with the canonical input text.
fn zeta_input(text: &str, session: &mut Session, report: &mut Report) -> Result<(ZetaFunction, String), CliError> {
    if is_spec(text) {
        let v = Variety::from_json(text)?;
        let o = session.zeta(&v)?;
        report.variety = Some(v.info(o.smooth));
        report.counts = Some(pipeline::counts_section(&o.series, o.from_cache));
        report.zeta = Some(pipeline::zeta_section(&o));
        Ok((o.zeta, v.canonical_json()))
    } else {
        let z = pipeline::zeta_from_json(text)?;
        let canon = pipeline::zeta_digest_text(&z);
        Ok((z, canon))
    }
}

/// Returns the report and the exit code to use after printing it.
fn run(cli: &Cli) -> Result<(Report, i32), CliError> {
    let bits = cli.precision_bits;
    let settings = Settings {
        cache_dir: resolve_dir(cli.cache_dir.as_deref()),
        budget: cli.budget,
        threads: cli.threads,
        precision_bits: bits,
        heartbeat: (cli.heartbeat > 0).then(|| Duration::from_secs(cli.heartbeat)),
    };
    let needs_session = !matches!(cli.command, Command::Torsion { .. } | Command::GaloisRank { .. } | Command::Dovetail { .. });
    let mut session = if needs_session { Some(Session::new(settings)?) } else { None };
    let mut code = EXIT_OK;
    let report = match &cli.command {
        Command::Count { spec, n } => {
            let v = Variety::from_json(&read(spec)?)?;
            let mut r = Report::new("count", digest(&["count", &n.to_string(), &v.canonical_json()]));
            let (series, cached) = session.as_mut().unwrap().counts(&v, *n)?;
            r.variety = Some(v.info(None));
            r.counts = Some(pipeline::counts_section(&series, cached));
            r
        }
        Command::Zeta { spec } => {
            let v = Variety::from_json(&read(spec)?)?;
            let mut r = Report::new("zeta", digest(&["zeta", &v.canonical_json()]));
            let o = session.as_mut().unwrap().zeta(&v)?;
            r.variety = Some(v.info(o.smooth));
            r.counts = Some(pipeline::counts_section(&o.series, o.from_cache));
            r.zeta = Some(pipeline::zeta_section(&o));
            r
        }
        Command::Betti { input } => {
            let mut r = Report::new("betti", String::new());
            let (z, canon) = zeta_input(&read(input)?, session.as_mut().unwrap(), &mut r)?;
            r.inputs_digest = digest(&["betti", &bits.to_string(), &canon]);
            r.betti = Some(pipeline::betti_section(&z, bits)?);
            r
        }
        Command::TateBound { input, p } => {
            let mut r = Report::new("tate-bound", String::new());
            let (z, canon) = zeta_input(&read(input)?, session.as_mut().unwrap(), &mut r)?;
            let ps: Vec<u32> = if p.is_empty() { (0..=z.dim).collect() } else { p.clone() };
            let ps_text = format!("{ps:?}");
            r.inputs_digest = digest(&["tate-bound", &ps_text, &bits.to_string(), &canon]);
            r.tate = Some(ps.iter().map(|&p| pipeline::tate_section(&z, p, bits)).collect::<Result<_, _>>()?);
            r
        }
        Command::Rank { zeta, cycles, p } => {
            let mut r = Report::new("rank", String::new());
            let (z, canon) = zeta_input(&read(zeta)?, session.as_mut().unwrap(), &mut r)?;
            let cyc: CycleFile = from_json(&read(cycles)?, "cycle file")?;
            let cyc_text = serde_json::to_string(&cyc).expect("cycle file serializes");
            r.inputs_digest = digest(&["rank", &p.to_string(), &bits.to_string(), &canon, &cyc_text]);
            let section = pipeline::rank(&z, &cyc, *p, bits, &r.inputs_digest, cli.checkpoint.as_deref())?;
            if section.status != "halted" {
                code = EXIT_UNDECIDED;
            }
            r.tate = Some(vec![pipeline::tate_section(&z, *p, bits)?]);
            r.rank = Some(section);
            r
        }
        Command::Torsion { table, degree } => {
            let f: SizeTableFile = from_json(&read(table)?, "size table")?;
            let canon = serde_json::to_string(&f).expect("table serializes");
            let mut r = Report::new("torsion", digest(&["torsion", &format!("{degree:?}"), &canon]));
            r.torsion = Some(pipeline::torsion(&f, *degree)?);
            r
        }
        Command::GaloisRank { family } => {
            let f: ModuleFamilyFile = from_json(&read(family)?, "module family")?;
            let canon = serde_json::to_string(&f).expect("family serializes");
            let mut r = Report::new("galois-rank", digest(&["galois-rank", &canon]));
            r.galois_rank = Some(pipeline::galois_rank(&f)?);
            r
        }
        Command::Dovetail { demo: _, tasks: n, quanta, quantum, trace, inject_panic } => {
            let params = format!("{n}:{quanta}:{quantum}:{inject_panic:?}");
            let mut r = Report::new("dovetail", digest(&["dovetail", &params]));
            // task panics are reported in the failures section
            let hook = std::panic::take_hook();
            std::panic::set_hook(Box::new(|_| {}));
            let (events, summary) = tasks::run_demo(*n, *quanta, *quantum, *inject_panic);
            std::panic::set_hook(hook);
            if let Some(path) = trace {
                let mut f = std::io::BufWriter::new(fs::File::create(path)?);
                tasks::write_trace(&mut f, &events)?;
            }
            r.dovetail = Some(summary);
            r
        }
    };
    Ok((report, code))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    match run(&cli) {
        Ok((mut report, code)) => {
            if !cli.no_timing {
                report.timing = Some(Timing { elapsed_ms: start.elapsed().as_millis() });
            }
            let mut out = std::io::stdout().lock();
            let _ = writeln!(out, "{}", report.to_json());
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("picardkit: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
