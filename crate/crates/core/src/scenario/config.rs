//! Flat sectioned configuration text.
//!
//! ```text
//! # comment
//! [packet]
//! p0 = 400*pi
//! sigma = 0.1
//! ```
//!
//! Values are plain decimals, words, or booleans. The one exception is
//! `packet.p0`, which also accepts `<decimal>*pi`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::PathBuf;

use super::{AnalysisConfig, ScenarioConfig, SystemConfig};
use crate::fourier::MomentumPathway;
use crate::morse::MorseParams;

/// A rejected configuration entry.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("config field '{field}': {message}")]
pub struct ConfigError {
    pub field: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            message: message.into(),
        }
    }
}

/// `section.key → (line number, raw value)` in file order of sections.
pub type RawConfig = BTreeMap<String, (usize, String)>;

pub fn parse(text: &str) -> Result<RawConfig, ConfigError> {
    let mut out = RawConfig::new();
    let mut section: Option<String> = None;
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = match line.find('#') {
            Some(k) => &line[..k],
            None => line,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let name = rest.strip_suffix(']').ok_or_else(|| {
                ConfigError::new(format!("line {lineno}"), "unterminated section header")
            })?;
            section = Some(name.trim().to_string());
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            ConfigError::new(format!("line {lineno}"), "expected `key = value`")
        })?;
        let sec = section.as_deref().ok_or_else(|| {
            ConfigError::new(format!("line {lineno}"), "key outside of any [section]")
        })?;
        let field = format!("{sec}.{}", key.trim());
        let value = value.trim().trim_matches('"').to_string();
        if out.insert(field.clone(), (lineno, value)).is_some() {
            return Err(ConfigError::new(field, format!("duplicate key on line {lineno}")));
        }
    }
    Ok(out)
}

fn number(field: &str, raw: &str) -> Result<f64, ConfigError> {
    raw.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| ConfigError::new(field, format!("'{raw}' is not a decimal number")))
}

fn momentum_literal(field: &str, raw: &str) -> Result<f64, ConfigError> {
    match raw.split_once('*') {
        Some((coef, unit)) if unit.trim() == "pi" => Ok(number(field, coef.trim())? * PI),
        Some(_) => Err(ConfigError::new(field, format!("'{raw}': only `<decimal>*pi` is accepted"))),
        None => number(field, raw),
    }
}

fn integer(field: &str, raw: &str) -> Result<usize, ConfigError> {
    raw.parse::<usize>()
        .map_err(|_| ConfigError::new(field, format!("'{raw}' is not a non-negative integer")))
}

fn boolean(field: &str, raw: &str) -> Result<bool, ConfigError> {
    match raw {
        "true" | "on" | "yes" => Ok(true),
        "false" | "off" | "no" => Ok(false),
        _ => Err(ConfigError::new(field, format!("'{raw}' is not a boolean"))),
    }
}

/// Applies parsed entries on top of `base`.
pub fn apply(base: &ScenarioConfig, raw: &RawConfig) -> Result<ScenarioConfig, ConfigError> {
    let mut cfg = base.clone();
    if let Some((_, kind)) = raw.get("system.kind") {
        let switched = match kind.as_str() {
            "square-well" => super::presets::square_well_fig1().system,
            "bouncer" => super::presets::bouncer_fig4().system,
            "morse" => super::presets::morse_fig5().system,
            other => {
                return Err(ConfigError::new(
                    "system.kind",
                    format!("unknown system '{other}' (square-well | bouncer | morse)"),
                ))
            }
        };
        if std::mem::discriminant(&switched) != std::mem::discriminant(&cfg.system) {
            cfg.system = switched;
        }
    }
    for (field, (_, value)) in raw {
        let f = field.as_str();
        let v = value.as_str();
        match (f, &mut cfg.system) {
            ("system.kind", _) => {}
            ("system.L", SystemConfig::SquareWell { length, .. }) => *length = number(f, v)?,
            ("packet.x0", SystemConfig::SquareWell { x0, .. }) => *x0 = number(f, v)?,
            ("packet.p0", SystemConfig::SquareWell { p0, .. }) => *p0 = momentum_literal(f, v)?,
            ("packet.sigma", SystemConfig::SquareWell { sigma, .. }) => *sigma = number(f, v)?,
            ("packet.z0", SystemConfig::Bouncer { z0, .. }) => *z0 = number(f, v)?,
            ("packet.sigma", SystemConfig::Bouncer { sigma, .. }) => *sigma = number(f, v)?,
            ("packet.p0", SystemConfig::Bouncer { p0, .. }) => *p0 = momentum_literal(f, v)?,
            ("system.D", SystemConfig::Morse(m)) => m.dissociation = number(f, v)?,
            ("system.beta", SystemConfig::Morse(m)) => m.beta = number(f, v)?,
            ("system.r0", SystemConfig::Morse(m)) => m.r0 = number(f, v)?,
            ("system.mu", SystemConfig::Morse(m)) => m.mu = number(f, v)?,
            ("packet.n0", SystemConfig::Morse(m)) => m.n0 = integer(f, v)?,
            ("packet.sigma_n", SystemConfig::Morse(m)) => m.sigma_n = number(f, v)?,
            ("packet.renormalize", _) => cfg.packet.renormalize = boolean(f, v)?,
            ("packet.truncation", _) => cfg.packet.truncation = number(f, v)?,
            ("packet.n_window", _) => cfg.packet.n_window = integer(f, v)?,
            ("grid.x_min", _) => cfg.grid.x_min = number(f, v)?,
            ("grid.x_max", _) => cfg.grid.x_max = number(f, v)?,
            ("grid.n_points", _) => cfg.grid.n_points = integer(f, v)?,
            ("grid.zero_pad", _) => cfg.grid.zero_pad = integer(f, v)?,
            ("time.t_max_over_Trev", _) => cfg.time.t_max_over_trev = number(f, v)?,
            ("time.n_samples", _) => cfg.time.n_samples = integer(f, v)?,
            ("analysis.q_max", _) => cfg.analysis.q_max = integer(f, v)? as u64,
            ("analysis.tol", _) => cfg.analysis.tol = number(f, v)?,
            ("analysis.min_prominence", _) => cfg.analysis.min_prominence = number(f, v)?,
            ("analysis.smoothing", _) => cfg.analysis.smoothing = boolean(f, v)?,
            ("analysis.momentum", _) => {
                cfg.analysis.momentum = match v {
                    "fft" => MomentumPathway::Fft,
                    "analytic" => MomentumPathway::Analytic,
                    _ => return Err(ConfigError::new(f, format!("'{v}' is not fft | analytic"))),
                }
            }
            ("output.dir", _) => cfg.output.dir = PathBuf::from(v),
            ("output.timeseries", _) => cfg.output.timeseries = v.to_string(),
            ("output.report", _) => cfg.output.report = v.to_string(),
            _ => {
                return Err(ConfigError::new(
                    f,
                    format!("unknown key for a {} scenario", cfg.system.kind()),
                ))
            }
        }
    }
    validate(&cfg)?;
    Ok(cfg)
}

/// Field-level checks that do not need any numerics.
pub fn validate(cfg: &ScenarioConfig) -> Result<(), ConfigError> {
    let positive = |field: &str, v: f64| {
        if v > 0.0 && v.is_finite() {
            Ok(())
        } else {
            Err(ConfigError::new(field, format!("must be positive, got {v}")))
        }
    };
    match &cfg.system {
        SystemConfig::SquareWell {
            length, x0, sigma, ..
        } => {
            positive("system.L", *length)?;
            positive("packet.sigma", *sigma)?;
            if !(*x0 > 0.0 && x0 < length) {
                return Err(ConfigError::new("packet.x0", format!("{x0} not inside (0, {length})")));
            }
        }
        SystemConfig::Bouncer { z0, sigma, .. } => {
            positive("packet.z0", *z0)?;
            positive("packet.sigma", *sigma)?;
            if z0 - 4.0 * sigma <= 0.0 {
                return Err(ConfigError::new("packet.z0", "packet closer than 4 sigma to the floor"));
            }
        }
        SystemConfig::Morse(m) => validate_morse(m)?,
    }
    if !(cfg.packet.truncation >= 0.0 && cfg.packet.truncation < 1e-3) {
        return Err(ConfigError::new("packet.truncation", "must lie in [0, 1e-3)"));
    }
    if cfg.grid.x_max <= cfg.grid.x_min {
        return Err(ConfigError::new("grid.x_max", "must exceed grid.x_min"));
    }
    if cfg.grid.n_points < 16 || !cfg.grid.n_points.is_power_of_two() {
        return Err(ConfigError::new("grid.n_points", "must be a power of two >= 16"));
    }
    if cfg.grid.zero_pad == 0 || !cfg.grid.zero_pad.is_power_of_two() {
        return Err(ConfigError::new("grid.zero_pad", "must be a power of two"));
    }
    positive("time.t_max_over_Trev", cfg.time.t_max_over_trev)?;
    if cfg.time.n_samples < 16 {
        return Err(ConfigError::new("time.n_samples", "must be at least 16"));
    }
    validate_analysis(&cfg.analysis)
}

fn validate_morse(m: &MorseParams) -> Result<(), ConfigError> {
    m.validate().map_err(|e| {
        let field = match e.to_string() {
            s if s.contains("n0") => "packet.n0",
            s if s.contains("sigma_n") => "packet.sigma_n",
            _ => "system",
        };
        ConfigError::new(field, e.to_string())
    })
}

fn validate_analysis(a: &AnalysisConfig) -> Result<(), ConfigError> {
    if a.q_max < 2 {
        return Err(ConfigError::new("analysis.q_max", "must be at least 2"));
    }
    if !(a.tol > 0.0 && a.tol < 0.5) {
        return Err(ConfigError::new("analysis.tol", "must lie in (0, 0.5)"));
    }
    if !(a.min_prominence >= 0.0 && a.min_prominence < 1.0) {
        return Err(ConfigError::new("analysis.min_prominence", "must lie in [0, 1)"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::presets;

    #[test]
    fn parses_sections_comments_and_pi() {
        let raw = parse("# hi\n[packet]\np0 = 400*pi # launch\nx0=0.25\n\n[time]\nn_samples = 64\n").unwrap();
        assert_eq!(raw["packet.p0"].1, "400*pi");
        let cfg = apply(&presets::square_well_fig1(), &raw).unwrap();
        match cfg.system {
            SystemConfig::SquareWell { p0, x0, .. } => {
                assert!((p0 - 400.0 * PI).abs() < 1e-9);
                assert_eq!(x0, 0.25);
            }
            _ => unreachable!(),
        }
        assert_eq!(cfg.time.n_samples, 64);
    }

    #[test]
    fn pi_only_allowed_for_momentum() {
        let raw = parse("[packet]\nx0 = 0.1*pi\n").unwrap();
        let err = apply(&presets::square_well_fig1(), &raw).unwrap_err();
        assert_eq!(err.field, "packet.x0");
        let raw = parse("[packet]\np0 = 400*tau\n").unwrap();
        assert_eq!(apply(&presets::square_well_fig1(), &raw).unwrap_err().field, "packet.p0");
    }

    #[test]
    fn field_level_errors() {
        for (text, field) in [
            ("[grid]\nn_points = 1000\n", "grid.n_points"),
            ("[time]\nn_samples = 8\n", "time.n_samples"),
            ("[packet]\nsigma = -1\n", "packet.sigma"),
            ("[system]\nkind = harmonic\n", "system.kind"),
            ("[packet]\nz0 = 5\n", "packet.z0"),
            ("[analysis]\nq_max = 1\n", "analysis.q_max"),
        ] {
            let raw = parse(text).unwrap();
            let err = apply(&presets::square_well_fig1(), &raw).unwrap_err();
            assert_eq!(err.field, field, "{text}");
        }
        assert!(parse("p0 = 1\n").is_err());
        assert!(parse("[packet\n").is_err());
        assert!(parse("[packet]\np0 1\n").is_err());
        assert!(parse("[a]\nx=1\nx=2\n").is_err());
    }

    #[test]
    fn switching_kind_loads_that_systems_defaults() {
        let raw = parse("[system]\nkind = morse\n[packet]\nn0 = 5\n").unwrap();
        let cfg = apply(&presets::square_well_fig1(), &raw).unwrap();
        match cfg.system {
            SystemConfig::Morse(m) => assert_eq!(m.n0, 5),
            _ => panic!("expected morse"),
        }
        let raw = parse("[system]\nkind = morse\n[packet]\nn0 = 40\n").unwrap();
        assert_eq!(apply(&presets::square_well_fig1(), &raw).unwrap_err().field, "packet.n0");
    }
}
