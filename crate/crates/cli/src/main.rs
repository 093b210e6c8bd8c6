use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use revivalscope::revival::Fraction;
use revivalscope::scenario::{self, csv, AnalysisConfig, Scenario, ScenarioConfig};
use revivalscope::{Eigenbasis, Timescales};

const EXIT_CONFIG: u8 = 2;
const EXIT_BREACH: u8 = 3;

#[derive(Parser)]
#[command(name = "revivalscope", version, about = "Wave-packet revivals seen through entropies and autocorrelation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep [0, t_max] and write the time series plus the revival report.
    Run {
        #[arg(long)]
        preset: String,
        /// Overrides applied on top of the preset.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write position densities at fractions of the revival time.
    Snapshots {
        #[arg(long)]
        preset: String,
        /// Comma-separated `p/q` list.
        #[arg(long, value_delimiter = ',', required = true)]
        fractions: Vec<Fraction>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Revival report from an existing time-series CSV.
    Report {
        #[arg(long)]
        csv: PathBuf,
        #[arg(long)]
        trev: f64,
        #[arg(long)]
        qmax: u64,
        #[arg(long)]
        tol: f64,
        /// Fraction of each series' range.
        #[arg(long, default_value_t = 0.02)]
        min_prominence: f64,
        /// Smooth over one classical period of this length before detection.
        #[arg(long)]
        tcl: Option<f64>,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Failure carrying its exit status.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

fn config_failure(error: impl Into<anyhow::Error>) -> Failure {
    Failure {
        code: EXIT_CONFIG,
        error: error.into(),
    }
}

fn other_failure(error: impl Into<anyhow::Error>) -> Failure {
    Failure {
        code: 1,
        error: error.into(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(f) = init_threads() {
        eprintln!("error: {:#}", f.error);
        return ExitCode::from(f.code);
    }
    let result = match cli.command {
        Command::Run { preset, config, out } => run(&preset, config.as_deref(), out),
        Command::Snapshots {
            preset,
            fractions,
            config,
            out,
        } => snapshots(&preset, config.as_deref(), out, &fractions),
        Command::Report {
            csv,
            trev,
            qmax,
            tol,
            min_prominence,
            tcl,
            out,
        } => report(&csv, trev, qmax, tol, min_prominence, tcl, out.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

fn init_threads() -> Result<(), Failure> {
    let threads = match std::env::var("REVIVALSCOPE_THREADS") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .with_context(|| format!("REVIVALSCOPE_THREADS='{v}' is not a thread count"))
            .map_err(config_failure)?,
        Err(_) => 0,
    };
    if threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(other_failure)?;
    }
    Ok(())
}

fn load(preset: &str, config: Option<&Path>) -> Result<Scenario, Failure> {
    let mut cfg = ScenarioConfig::preset(preset).map_err(config_failure)?;
    if let Some(path) = config {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))
            .map_err(config_failure)?;
        cfg = cfg.with_overrides(&text).map_err(config_failure)?;
    }
    let scenario = Scenario::build(&cfg)
        .with_context(|| format!("building scenario '{}'", cfg.name))
        .map_err(config_failure)?;
    let Timescales { t_cl, t_rev } = scenario.timescales;
    eprintln!(
        "{}: {} states n = {}..={}, T_cl = {t_cl:.9e}, T_rev = {t_rev:.9e}, norm = {:.12}",
        cfg.name,
        scenario.packet.basis().kind(),
        scenario.packet.n_min(),
        scenario.packet.n_max(),
        revivalscope::packet_norm(&scenario.packet),
    );
    for w in &scenario.warnings {
        eprintln!("warning: {w}");
    }
    Ok(scenario)
}

fn run(preset: &str, config: Option<&Path>, out: Option<PathBuf>) -> Result<(), Failure> {
    let scenario = load(preset, config)?;
    let cfg = &scenario.config;
    let outcome = scenario::run_sweep(&scenario).map_err(other_failure)?;
    let dir = out.unwrap_or_else(|| cfg.output.dir.clone());
    let (ts, rep) = outcome
        .write(&dir, &cfg.output.timeseries, &cfg.output.report)
        .map_err(other_failure)?;
    eprintln!("wrote {} and {}", ts.display(), rep.display());
    for (kind, fraction, row) in outcome
        .report
        .rows
        .iter()
        .filter_map(|r| r.matched.map(|f| (r.kind, f, r)))
    {
        println!("{kind} {fraction} t/T_rev = {:.6} prominence = {:.3e}", row.t_over_trev, row.prominence);
    }
    if let Some(first) = outcome.breaches.first() {
        return Err(Failure {
            code: EXIT_BREACH,
            error: anyhow::anyhow!("{first} ({} breaches in total)", outcome.breaches.len()),
        });
    }
    Ok(())
}

fn snapshots(
    preset: &str,
    config: Option<&Path>,
    out: Option<PathBuf>,
    fractions: &[Fraction],
) -> Result<(), Failure> {
    let scenario = load(preset, config)?;
    let shots = scenario::run_snapshots(&scenario, fractions).map_err(config_failure)?;
    let dir = out.unwrap_or_else(|| scenario.config.output.dir.clone());
    std::fs::create_dir_all(&dir)
        .with_context(|| format!("creating {}", dir.display()))
        .map_err(other_failure)?;
    for shot in &shots {
        let path = dir.join(shot.file_name(&scenario.config.name));
        shot.write(&path).map_err(other_failure)?;
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

fn report(
    path: &Path,
    t_rev: f64,
    q_max: u64,
    tol: f64,
    min_prominence: f64,
    t_cl: Option<f64>,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let analysis = AnalysisConfig {
        q_max,
        tol,
        min_prominence,
        smoothing: t_cl.is_some(),
        momentum: Default::default(),
    };
    if !(t_rev > 0.0) {
        return Err(config_failure(anyhow::anyhow!("--trev must be positive")));
    }
    let file = File::open(path)
        .with_context(|| format!("opening {}", path.display()))
        .map_err(config_failure)?;
    let records = csv::read_timeseries(BufReader::new(file), t_rev).map_err(config_failure)?;
    let timescales = Timescales {
        t_cl: t_cl.unwrap_or(0.0),
        t_rev,
    };
    let report = scenario::analyse(&records, timescales, &analysis).map_err(config_failure)?;
    match out {
        Some(p) => {
            let file = File::create(p)
                .with_context(|| format!("creating {}", p.display()))
                .map_err(other_failure)?;
            csv::write_report(std::io::BufWriter::new(file), &report).map_err(other_failure)?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            csv::write_report(&mut lock, &report).map_err(other_failure)?;
            lock.flush().map_err(other_failure)?;
        }
    }
    Ok(())
}
