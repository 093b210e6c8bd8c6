//! Fractional-revival detection from sweep time series.
//!
//! Revivals show up as local minima of `S_ρ + S_γ` (and, less reliably, as
//! local maxima of `|A|²`). Extrema are ranked by topographic prominence and
//! labelled with the nearest reduced fraction `p/q` of the revival time.

use crate::error::{Error, Result};
use crate::spectral::TimeSeriesRecord;

/// Reduced fraction `p/q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fraction {
    pub p: u64,
    pub q: u64,
}

impl Fraction {
    pub fn value(&self) -> f64 {
        self.p as f64 / self.q as f64
    }

    pub fn is_reduced(&self) -> bool {
        gcd(self.p, self.q) == 1
    }
}

impl std::fmt::Display for Fraction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl std::str::FromStr for Fraction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parameter(format!("'{s}' is not a fraction p/q"));
        let (p, q) = match s.trim().split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (s.trim(), "1"),
        };
        let p: u64 = p.parse().map_err(|_| bad())?;
        let q: u64 = q.parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        Ok(Self { p, q })
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Reduced fractions in `(0, 1]` with denominator at most `q_max`, ascending.
///
/// Generated by the next-term Farey recurrence, so the list is sorted and
/// duplicate-free by construction.
pub fn farey_fractions(q_max: u64) -> Result<Vec<Fraction>> {
    if q_max < 2 {
        return Err(Error::Parameter(format!("q_max must be at least 2, got {q_max}")));
    }
    let mut out = Vec::new();
    let (mut a, mut b, mut c, mut d) = (0u64, 1u64, 1u64, q_max);
    while c <= d {
        out.push(Fraction { p: c, q: d });
        let k = (q_max + b) / d;
        (a, b, c, d) = (c, d, k * c - a, k * d - b);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtremumKind {
    Minimum,
    Maximum,
}

/// Column of a [`TimeSeriesRecord`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Column {
    AutocorrSq,
    SRho,
    SGamma,
    SSum,
}

impl Column {
    pub fn get(&self, r: &TimeSeriesRecord) -> f64 {
        match self {
            Column::AutocorrSq => r.autocorr_sq,
            Column::SRho => r.s_rho,
            Column::SGamma => r.s_gamma,
            Column::SSum => r.s_sum,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremum {
    pub index: usize,
    pub t: f64,
    pub value: f64,
    pub prominence: f64,
}

/// Strict local extrema of a record column with prominence ≥ `min_prominence`.
pub fn find_extrema(
    series: &[TimeSeriesRecord],
    column: Column,
    kind: ExtremumKind,
    min_prominence: f64,
) -> Result<Vec<Extremum>> {
    let ts: Vec<f64> = series.iter().map(|r| r.t).collect();
    let vs: Vec<f64> = series.iter().map(|r| column.get(r)).collect();
    find_extrema_in(&ts, &vs, kind, min_prominence)
}

/// As [`find_extrema`], on bare `(t, value)` columns.
///
/// A flat top (or bottom) counts once, at its middle sample. The prominence
/// of a maximum is its height above the higher of the two cols separating it
/// from strictly higher ground on either side; a side that runs into the
/// series edge without meeting higher ground offers no col. When neither
/// side does, the prominence is the height above the series minimum.
/// Minima are handled as maxima of the negated series.
pub fn find_extrema_in(
    ts: &[f64],
    values: &[f64],
    kind: ExtremumKind,
    min_prominence: f64,
) -> Result<Vec<Extremum>> {
    if ts.len() != values.len() {
        return Err(Error::Data("time and value columns differ in length".into()));
    }
    if ts.len() < 3 {
        return Err(Error::Data(format!("need at least 3 samples, got {}", ts.len())));
    }
    if ts.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Data("series is not strictly sorted by t".into()));
    }
    let sign = match kind {
        ExtremumKind::Maximum => 1.0,
        ExtremumKind::Minimum => -1.0,
    };
    let v: Vec<f64> = values.iter().map(|x| sign * x).collect();
    let floor = v.iter().copied().fold(f64::INFINITY, f64::min);
    let n = v.len();
    let mut out = Vec::new();
    let mut i = 1;
    while i < n - 1 {
        if v[i] <= v[i - 1] {
            i += 1;
            continue;
        }
        let mut j = i;
        while j + 1 < n && v[j + 1] == v[i] {
            j += 1;
        }
        if j + 1 >= n || v[j + 1] > v[i] {
            i = j + 1;
            continue;
        }
        let peak = v[i];
        let mid = (i + j) / 2;

        let mut col_left = None;
        let mut low = peak;
        for k in (0..i).rev() {
            if v[k] > peak {
                col_left = Some(low);
                break;
            }
            low = low.min(v[k]);
        }
        let mut col_right = None;
        let mut low = peak;
        for &x in &v[j + 1..] {
            if x > peak {
                col_right = Some(low);
                break;
            }
            low = low.min(x);
        }
        let key_col = match (col_left, col_right) {
            (Some(a), Some(b)) => a.max(b),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => floor,
        };
        let prominence = peak - key_col;
        if prominence >= min_prominence {
            out.push(Extremum {
                index: mid,
                t: ts[mid],
                value: values[mid],
                prominence,
            });
        }
        i = j + 1;
    }
    Ok(out)
}

/// Centred moving average over `window` samples (shrunk at the edges).
pub fn moving_average(values: &[f64], window: usize) -> Vec<f64> {
    let half = window.max(1) / 2;
    let mut prefix = Vec::with_capacity(values.len() + 1);
    prefix.push(0.0);
    for v in values {
        prefix.push(prefix.last().unwrap() + v);
    }
    (0..values.len())
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half + 1).min(values.len());
            (prefix[hi] - prefix[lo]) / (hi - lo) as f64
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignalKind {
    EntropyMin,
    AutocorrMax,
}

impl std::fmt::Display for SignalKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SignalKind::EntropyMin => "entropy-min",
            SignalKind::AutocorrMax => "autocorr-max",
        })
    }
}

impl std::str::FromStr for SignalKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "entropy-min" => Ok(SignalKind::EntropyMin),
            "autocorr-max" => Ok(SignalKind::AutocorrMax),
            _ => Err(Error::Data(format!("unknown extremum kind '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RevivalRow {
    pub t: f64,
    pub t_over_trev: f64,
    pub kind: SignalKind,
    pub value: f64,
    pub prominence: f64,
    pub matched: Option<Fraction>,
    /// `|t/T_rev − p/q|` for matched rows, distance to the nearest candidate otherwise.
    pub deviation: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RevivalReport {
    pub rows: Vec<RevivalRow>,
}

impl RevivalReport {
    /// Merges several reports, re-sorting by time.
    pub fn merged(reports: impl IntoIterator<Item = RevivalReport>) -> Self {
        let mut rows: Vec<RevivalRow> = reports.into_iter().flat_map(|r| r.rows).collect();
        rows.sort_by(|a, b| a.t.total_cmp(&b.t));
        Self { rows }
    }

    pub fn matched(&self, kind: SignalKind) -> impl Iterator<Item = (Fraction, &RevivalRow)> {
        self.rows
            .iter()
            .filter(move |r| r.kind == kind)
            .filter_map(|r| r.matched.map(|f| (f, r)))
    }

    pub fn contains(&self, kind: SignalKind, fraction: Fraction) -> bool {
        self.matched(kind).any(|(f, _)| f == fraction)
    }
}

/// Labels each extremum with the nearest fraction `p/q` (`q ≤ q_max`) of
/// `T_rev` when it lies within `tol`. Times beyond `T_rev` are matched
/// against the same fractions shifted by whole revivals. Equidistant
/// candidates resolve to the smaller denominator.
pub fn match_revivals(
    extrema: &[Extremum],
    kind: SignalKind,
    t_rev: f64,
    q_max: u64,
    tol: f64,
) -> Result<RevivalReport> {
    if !(t_rev > 0.0) {
        return Err(Error::Parameter(format!("T_rev must be positive, got {t_rev}")));
    }
    if !(tol > 0.0) {
        return Err(Error::Parameter(format!("tolerance must be positive, got {tol}")));
    }
    let farey = farey_fractions(q_max)?;
    let mut rows: Vec<RevivalRow> = extrema
        .iter()
        .map(|e| {
            let u = e.t / t_rev;
            let whole = u.floor().max(0.0);
            let mut best: Option<(Fraction, f64)> = None;
            let shifted = farey.iter().map(|f| Fraction {
                p: f.p + whole as u64 * f.q,
                q: f.q,
            });
            // k/1 for the whole revival just below u, except t = 0 itself
            let below = (whole >= 1.0).then_some(Fraction {
                p: whole as u64,
                q: 1,
            });
            for f in below.into_iter().chain(shifted) {
                let dev = (u - f.value()).abs();
                let better = match best {
                    None => true,
                    Some((b, bd)) => dev < bd || (dev == bd && f.q < b.q),
                };
                if better {
                    best = Some((f, dev));
                }
            }
            let (f, dev) = best.expect("farey list is never empty");
            RevivalRow {
                t: e.t,
                t_over_trev: u,
                kind,
                value: e.value,
                prominence: e.prominence,
                matched: (dev <= tol).then_some(f),
                deviation: dev,
            }
        })
        .collect();
    rows.sort_by(|a, b| a.t.total_cmp(&b.t));
    Ok(RevivalReport { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fr(p: u64, q: u64) -> Fraction {
        Fraction { p, q }
    }

    fn totient(n: u64) -> u64 {
        (1..=n).filter(|&k| gcd(k, n) == 1).count() as u64
    }

    #[test]
    fn farey_small_cases() {
        assert_eq!(farey_fractions(2).unwrap(), vec![fr(1, 2), fr(1, 1)]);
        assert_eq!(
            farey_fractions(4).unwrap(),
            vec![fr(1, 4), fr(1, 3), fr(1, 2), fr(2, 3), fr(3, 4), fr(1, 1)]
        );
        assert!(farey_fractions(1).is_err());
    }

    #[test]
    fn farey_count_matches_totient_sum() {
        for q in 2..=30u64 {
            let oracle = 1 + (2..=q).map(totient).sum::<u64>();
            assert_eq!(farey_fractions(q).unwrap().len() as u64, oracle);
        }
        assert_eq!(farey_fractions(10).unwrap().len(), 32);
    }

    #[test]
    fn farey_is_reduced_sorted_and_mirror_symmetric() {
        let f = farey_fractions(12).unwrap();
        assert!(f.iter().all(Fraction::is_reduced));
        assert!(f.windows(2).all(|w| w[0].value() < w[1].value()));
        for x in f.iter().filter(|x| x.q > 1) {
            assert!(f.contains(&fr(x.q - x.p, x.q)));
        }
    }

    #[test]
    fn sine_has_one_maximum() {
        let n = 1000;
        let ts: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
        let vs: Vec<f64> = ts.iter().map(|t| (2.0 * std::f64::consts::PI * t).sin()).collect();
        let e = find_extrema_in(&ts, &vs, ExtremumKind::Maximum, 0.1).unwrap();
        assert_eq!(e.len(), 1);
        assert!((e[0].t - 0.25).abs() < 1.0 / n as f64);
        assert!((e[0].prominence - 2.0).abs() < 1e-4);
        let m = find_extrema_in(&ts, &vs, ExtremumKind::Minimum, 0.1).unwrap();
        assert_eq!(m.len(), 1);
        assert!((m[0].t - 0.75).abs() < 1.0 / n as f64);
    }

    #[test]
    fn monotone_has_none() {
        let ts: Vec<f64> = (0..50).map(|i| i as f64).collect();
        let vs: Vec<f64> = ts.iter().map(|t| t * t).collect();
        assert!(find_extrema_in(&ts, &vs, ExtremumKind::Maximum, 0.0).unwrap().is_empty());
        assert!(find_extrema_in(&ts, &vs, ExtremumKind::Minimum, 0.0).unwrap().is_empty());
    }

    #[test]
    fn prominence_uses_key_col() {
        // peaks at 3 (value 5) and 7 (value 4), col at 5 (value 1), walls at 0
        let vs = [0.0, 1.0, 3.0, 5.0, 3.0, 1.0, 2.0, 4.0, 2.0, 0.0];
        let ts: Vec<f64> = (0..vs.len()).map(|i| i as f64).collect();
        let e = find_extrema_in(&ts, &vs, ExtremumKind::Maximum, 0.0).unwrap();
        assert_eq!(e.len(), 2);
        assert_eq!(e[0].prominence, 5.0);
        assert_eq!(e[1].prominence, 3.0);
        let e = find_extrema_in(&ts, &vs, ExtremumKind::Maximum, 3.5).unwrap();
        assert_eq!(e.len(), 1);
    }

    #[test]
    fn plateau_counts_once() {
        let vs = [0.0, 1.0, 2.0, 2.0, 2.0, 1.0, 0.0];
        let ts: Vec<f64> = (0..vs.len()).map(|i| i as f64).collect();
        let e = find_extrema_in(&ts, &vs, ExtremumKind::Maximum, 0.0).unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].index, 3);
    }

    #[test]
    fn unsorted_or_short_input_is_rejected() {
        assert!(find_extrema_in(&[0.0, 2.0, 1.0], &[0.0, 1.0, 0.0], ExtremumKind::Maximum, 0.0).is_err());
        assert!(find_extrema_in(&[0.0, 1.0], &[0.0, 1.0], ExtremumKind::Maximum, 0.0).is_err());
    }

    fn ext(t: f64) -> Extremum {
        Extremum {
            index: 0,
            t,
            value: 0.0,
            prominence: 1.0,
        }
    }

    #[test]
    fn matching_examples() {
        let r = match_revivals(&[ext(0.5)], SignalKind::EntropyMin, 1.0, 4, 0.01).unwrap();
        assert_eq!(r.rows[0].matched, Some(fr(1, 2)));
        assert_eq!(r.rows[0].deviation, 0.0);

        let r = match_revivals(&[ext(0.3 * 7.0)], SignalKind::EntropyMin, 7.0, 10, 0.005).unwrap();
        assert_eq!(r.rows[0].matched, Some(fr(3, 10)));

        let r = match_revivals(&[ext(0.142857)], SignalKind::EntropyMin, 1.0, 6, 0.005).unwrap();
        assert_eq!(r.rows[0].matched, None);
    }

    #[test]
    fn ties_prefer_small_denominator() {
        // 3/4 is exactly midway between 1/2 and 1/1
        let r = match_revivals(&[ext(0.75)], SignalKind::EntropyMin, 1.0, 2, 0.3).unwrap();
        assert_eq!(r.rows[0].matched, Some(fr(1, 1)));
    }

    #[test]
    fn times_past_one_revival() {
        let r = match_revivals(&[ext(1.5), ext(1.001)], SignalKind::AutocorrMax, 1.0, 4, 0.01).unwrap();
        assert_eq!(r.rows[0].matched, Some(fr(1, 1)));
        assert_eq!(r.rows[1].matched, Some(fr(3, 2)));
    }

    #[test]
    fn fraction_parsing() {
        assert_eq!("3/10".parse::<Fraction>().unwrap(), fr(3, 10));
        assert_eq!("1".parse::<Fraction>().unwrap(), fr(1, 1));
        assert!("1/0".parse::<Fraction>().is_err());
        assert!("x".parse::<Fraction>().is_err());
    }

    #[test]
    fn moving_average_preserves_constants() {
        let v = vec![2.0; 17];
        assert!(moving_average(&v, 5).iter().all(|&x| (x - 2.0).abs() < 1e-15));
        let ramp: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let s = moving_average(&ramp, 3);
        assert_eq!(s[5], 5.0);
        assert_eq!(s[0], 0.5);
    }

    proptest! {
        #[test]
        fn detection_is_offset_invariant_and_scale_covariant(
            raw in prop::collection::vec(-10.0f64..10.0, 5..80),
            offset in -100.0f64..100.0,
            scale in 0.1f64..10.0,
        ) {
            let ts: Vec<f64> = (0..raw.len()).map(|i| i as f64).collect();
            for kind in [ExtremumKind::Minimum, ExtremumKind::Maximum] {
                let base = find_extrema_in(&ts, &raw, kind, 0.0).unwrap();
                let shifted: Vec<f64> = raw.iter().map(|v| v + offset).collect();
                let scaled: Vec<f64> = raw.iter().map(|v| v * scale).collect();
                let a = find_extrema_in(&ts, &shifted, kind, 0.0).unwrap();
                let b = find_extrema_in(&ts, &scaled, kind, 0.0).unwrap();
                prop_assert_eq!(base.len(), a.len());
                prop_assert_eq!(base.len(), b.len());
                for ((x, y), z) in base.iter().zip(&a).zip(&b) {
                    prop_assert_eq!(x.index, y.index);
                    prop_assert_eq!(x.index, z.index);
                    prop_assert!((x.prominence - y.prominence).abs() < 1e-9);
                    prop_assert!((x.prominence * scale - z.prominence).abs() < 1e-9 * (1.0 + z.prominence));
                }
            }
        }
    }
}
