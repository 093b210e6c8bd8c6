use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::{csv, AnalysisConfig, Scenario};
use crate::error::{Error, Result};
use crate::fourier::{Diagnostics, RecordEngine, ENTROPY_BOUND};
use crate::grid::Grid;
use crate::revival::{
    find_extrema_in, match_revivals, moving_average, ExtremumKind, Fraction, RevivalReport,
    SignalKind,
};
use crate::spectral::{TimeSeriesRecord, Timescales, NORM_TOLERANCE};

const NORM_DRIFT: f64 = 1e-6;
const AUTOCORR_SLACK: f64 = 1e-9;
const BOUND_SLACK: f64 = 1e-3;
const PARSEVAL_TOLERANCE: f64 = 1e-10;
const ROUNDTRIP_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub record: TimeSeriesRecord,
    pub diagnostics: Diagnostics,
}

/// A violated numerical invariant at a given time.
#[derive(Debug, Clone, PartialEq)]
pub struct Breach {
    pub invariant: &'static str,
    pub t: f64,
    pub detail: String,
}

impl std::fmt::Display for Breach {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "invariant '{}' breached at t = {:e}: {}", self.invariant, self.t, self.detail)
    }
}

#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub timescales: Timescales,
    pub rows: Vec<SweepRow>,
    pub report: RevivalReport,
    pub breaches: Vec<Breach>,
}

impl SweepOutcome {
    pub fn records(&self) -> Vec<TimeSeriesRecord> {
        self.rows.iter().map(|r| r.record).collect()
    }

    /// Writes the time series and the revival report; returns both paths.
    pub fn write(&self, dir: &Path, timeseries: &str, report: &str) -> Result<(PathBuf, PathBuf)> {
        std::fs::create_dir_all(dir).map_err(io_error(dir))?;
        let ts_path = dir.join(timeseries);
        let file = File::create(&ts_path).map_err(io_error(&ts_path))?;
        csv::write_timeseries(BufWriter::new(file), &self.records()).map_err(io_error(&ts_path))?;
        let report_path = dir.join(report);
        let file = File::create(&report_path).map_err(io_error(&report_path))?;
        csv::write_report(BufWriter::new(file), &self.report).map_err(io_error(&report_path))?;
        Ok((ts_path, report_path))
    }
}

fn io_error(path: &Path) -> impl Fn(std::io::Error) -> Error + '_ {
    move |e| Error::Data(format!("{}: {e}", path.display()))
}

/// Evaluates every sample time in parallel, checks the per-row invariants
/// and extracts the revival report. Rows come back ordered by `t`.
pub fn run_sweep(scenario: &Scenario) -> Result<SweepOutcome> {
    let cfg = &scenario.config;
    let t_rev = scenario.timescales.t_rev;
    let engine = RecordEngine::new(
        &scenario.packet,
        &scenario.grid,
        cfg.grid.zero_pad,
        cfg.analysis.momentum,
        t_rev,
    )?
    .with_roundtrip_check(true);
    let rows = cfg
        .sample_times(t_rev)
        .par_iter()
        .map(|&t| {
            engine
                .record_with_diagnostics(t)
                .map(|(record, diagnostics)| SweepRow { record, diagnostics })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut breaches = Vec::new();
    if let Err(e) = scenario.packet.check_norm(NORM_TOLERANCE) {
        breaches.push(Breach {
            invariant: "packet-norm",
            t: 0.0,
            detail: e.to_string(),
        });
    }
    breaches.extend(rows.iter().flat_map(check_row));
    let records: Vec<TimeSeriesRecord> = rows.iter().map(|r| r.record).collect();
    let report = analyse(&records, scenario.timescales, &cfg.analysis)?;
    Ok(SweepOutcome {
        timescales: scenario.timescales,
        rows,
        report,
        breaches,
    })
}

fn check_row(row: &SweepRow) -> Vec<Breach> {
    let SweepRow { record: r, diagnostics: d } = row;
    let mut out = Vec::new();
    let mut flag = |invariant, ok: bool, detail: String| {
        if !ok {
            out.push(Breach {
                invariant,
                t: r.t,
                detail,
            })
        }
    };
    let drift = (d.position_norm - d.packet_norm).abs();
    flag("norm", drift <= NORM_DRIFT, format!("|∫ρ dx − Σ|a_n|²| = {drift:e}"));
    flag(
        "autocorrelation",
        r.autocorr_sq <= 1.0 + AUTOCORR_SLACK,
        format!("|A|² = {}", r.autocorr_sq),
    );
    flag(
        "entropy-bound",
        r.s_sum >= ENTROPY_BOUND - BOUND_SLACK,
        format!("S_sum = {}", r.s_sum),
    );
    let parseval = d.parseval_error / d.packet_norm.max(1.0);
    flag("parseval", parseval <= PARSEVAL_TOLERANCE, format!("error {parseval:e}"));
    if let Some(rt) = d.roundtrip_error {
        flag("round-trip", rt <= ROUNDTRIP_TOLERANCE, format!("error {rt:e}"));
    }
    out
}

/// Entropy-sum minima and `|A|²` maxima, matched to fractions of `T_rev`.
pub fn analyse(
    records: &[TimeSeriesRecord],
    timescales: Timescales,
    analysis: &AnalysisConfig,
) -> Result<RevivalReport> {
    if records.len() < 3 {
        return Err(Error::Data(format!("need at least 3 samples, got {}", records.len())));
    }
    let ts: Vec<f64> = records.iter().map(|r| r.t).collect();
    let window = if analysis.smoothing {
        let dt = ts[1] - ts[0];
        let w = (timescales.t_cl / dt).round() as usize;
        w | 1
    } else {
        1
    };
    let signals = [
        (
            SignalKind::EntropyMin,
            ExtremumKind::Minimum,
            records.iter().map(|r| r.s_sum).collect::<Vec<_>>(),
        ),
        (
            SignalKind::AutocorrMax,
            ExtremumKind::Maximum,
            records.iter().map(|r| r.autocorr_sq).collect(),
        ),
    ];
    let mut reports = Vec::with_capacity(2);
    for (signal, extremum, raw) in signals {
        let values = if window > 1 { moving_average(&raw, window) } else { raw };
        let (lo, hi) = values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
        let extrema = find_extrema_in(&ts, &values, extremum, analysis.min_prominence * (hi - lo))?;
        reports.push(match_revivals(&extrema, signal, timescales.t_rev, analysis.q_max, analysis.tol)?);
    }
    Ok(RevivalReport::merged(reports))
}

/// Position density at one fractional revival time.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub fraction: Fraction,
    pub t: f64,
    pub xs: Vec<f64>,
    pub rho: Vec<f64>,
}

impl Snapshot {
    pub fn file_name(&self, scenario: &str) -> String {
        format!("{scenario}-snapshot-{}_{}.csv", self.fraction.p, self.fraction.q)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(io_error(path))?;
        csv::write_density(BufWriter::new(file), &self.xs, &self.rho).map_err(io_error(path))
    }
}

/// Densities `ρ(x, p T_rev / q)` on the scenario grid.
pub fn run_snapshots(scenario: &Scenario, fractions: &[Fraction]) -> Result<Vec<Snapshot>> {
    for f in fractions {
        if f.q == 0 || f.p == 0 || f.p > f.q {
            return Err(Error::Parameter(format!("fraction {f} not in (0, 1]")));
        }
    }
    let propagator = crate::spectral::Propagator::new(&scenario.packet, &scenario.grid)?;
    let xs = scenario.grid.coords();
    Ok(fractions
        .par_iter()
        .map(|&fraction| {
            let t = fraction.value() * scenario.timescales.t_rev;
            let rho = propagator.position(t).density().values;
            Snapshot {
                fraction,
                t,
                xs: xs.clone(),
                rho,
            }
        })
        .collect())
}
