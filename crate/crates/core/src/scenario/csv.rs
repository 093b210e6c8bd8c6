//! CSV writers and the time-series reader.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::revival::RevivalReport;
use crate::spectral::TimeSeriesRecord;

pub const TIMESERIES_HEADER: &str = "t,t_over_Trev,abs_A2,S_rho,S_gamma,S_sum";
pub const REPORT_HEADER: &str = "t,t_over_Trev,kind,value,prominence,p,q,deviation";
pub const SNAPSHOT_HEADER: &str = "x,rho";

/// C-style `%.12e`: twelve mantissa digits, signed exponent of at least two digits.
pub fn fmt_e12(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let s = format!("{x:.12e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.unsigned_abs())
}

pub fn write_timeseries<W: Write>(mut out: W, rows: &[TimeSeriesRecord]) -> std::io::Result<()> {
    writeln!(out, "{TIMESERIES_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            fmt_e12(r.t),
            fmt_e12(r.t_over_trev),
            fmt_e12(r.autocorr_sq),
            fmt_e12(r.s_rho),
            fmt_e12(r.s_gamma),
            fmt_e12(r.s_sum)
        )?;
    }
    out.flush()
}

/// Reads a file written by [`write_timeseries`]; `t_over_Trev` is recomputed from `t_rev`.
pub fn read_timeseries<R: BufRead>(input: R, t_rev: f64) -> Result<Vec<TimeSeriesRecord>> {
    let mut lines = input.lines();
    let header = lines
        .next()
        .transpose()
        .map_err(|e| Error::Data(e.to_string()))?
        .ok_or_else(|| Error::Data("empty time-series file".into()))?;
    if header.trim_end_matches('\r') != TIMESERIES_HEADER {
        return Err(Error::Data(format!("unexpected header '{header}'")));
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line.map_err(|e| Error::Data(e.to_string()))?;
        let line = line.trim_end_matches('\r');
        if line.is_empty() {
            continue;
        }
        let fields = line
            .split(',')
            .map(|f| f.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Data(format!("row {}: {e}", i + 2)))?;
        if fields.len() != 6 {
            return Err(Error::Data(format!("row {}: expected 6 columns, got {}", i + 2, fields.len())));
        }
        rows.push(TimeSeriesRecord::new(fields[0], t_rev, fields[2], fields[3], fields[4]));
    }
    Ok(rows)
}

pub fn write_report<W: Write>(mut out: W, report: &RevivalReport) -> std::io::Result<()> {
    writeln!(out, "{REPORT_HEADER}")?;
    for r in &report.rows {
        let (p, q) = match r.matched {
            Some(f) => (f.p.to_string(), f.q.to_string()),
            None => (String::new(), String::new()),
        };
        writeln!(
            out,
            "{},{},{},{},{},{p},{q},{}",
            fmt_e12(r.t),
            fmt_e12(r.t_over_trev),
            r.kind,
            fmt_e12(r.value),
            fmt_e12(r.prominence),
            fmt_e12(r.deviation)
        )?;
    }
    out.flush()
}

pub fn write_density<W: Write>(mut out: W, xs: &[f64], rho: &[f64]) -> std::io::Result<()> {
    writeln!(out, "{SNAPSHOT_HEADER}")?;
    for (x, r) in xs.iter().zip(rho) {
        writeln!(out, "{},{}", fmt_e12(*x), fmt_e12(*r))?;
    }
    out.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf_exponent_form() {
        assert_eq!(fmt_e12(1.0), "1.000000000000e+00");
        assert_eq!(fmt_e12(-0.00123), "-1.230000000000e-03");
        assert_eq!(fmt_e12(2.1447298858494002), "2.144729885849e+00");
        assert_eq!(fmt_e12(6.02e123), "6.020000000000e+123");
        assert_eq!(fmt_e12(0.0), "0.000000000000e+00");
        assert_eq!(fmt_e12(f64::NAN), "nan");
    }

    #[test]
    fn timeseries_round_trips() {
        let rows = vec![
            TimeSeriesRecord::new(0.0, 2.0, 1.0, 0.5, 1.7),
            TimeSeriesRecord::new(0.5, 2.0, 0.25, 0.75, 1.5),
        ];
        let mut buf = Vec::new();
        write_timeseries(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("t,t_over_Trev,abs_A2,S_rho,S_gamma,S_sum\n"));
        assert!(!text.contains('\r'));
        let back = read_timeseries(&buf[..], 2.0).unwrap();
        assert_eq!(back.len(), 2);
        assert_eq!(back[1].t_over_trev, 0.25);
        assert!((back[1].s_sum - 2.25).abs() < 1e-12);
        assert!(read_timeseries(&b"a,b\n"[..], 1.0).is_err());
        assert!(read_timeseries(&b"t,t_over_Trev,abs_A2,S_rho,S_gamma,S_sum\n1,2\n"[..], 1.0).is_err());
    }
}
