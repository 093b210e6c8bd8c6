//! Compiled-in scenarios.

use std::f64::consts::PI;
use std::path::PathBuf;

use super::{
    default_grid, default_packet, default_time, AnalysisConfig, OutputConfig, PacketConfig,
    ScenarioConfig, SystemConfig,
};
use crate::fourier::MomentumPathway;
use crate::morse::MorseParams;

pub const NAMES: [&str; 4] = ["squarewell-fig1", "squarewell-fig3", "bouncer-fig4", "morse-fig5"];

pub fn by_name(name: &str) -> Option<ScenarioConfig> {
    match name {
        "squarewell-fig1" => Some(square_well_fig1()),
        "squarewell-fig3" => Some(square_well_fig3()),
        "bouncer-fig4" => Some(bouncer_fig4()),
        "morse-fig5" => Some(morse_fig5()),
        _ => None,
    }
}

fn analysis(q_max: u64, tol: f64, smoothing: bool) -> AnalysisConfig {
    AnalysisConfig {
        q_max,
        tol,
        min_prominence: 0.02,
        smoothing,
        momentum: MomentumPathway::Fft,
    }
}

fn output(name: &str) -> OutputConfig {
    OutputConfig {
        dir: PathBuf::from("out"),
        timeseries: format!("{name}.csv"),
        report: format!("{name}-revivals.csv"),
    }
}

/// Fast packet `x0 = L/2`, `p0 = 400π`, `σ = 0.1` in a unit well.
pub fn square_well_fig1() -> ScenarioConfig {
    let name = "squarewell-fig1";
    ScenarioConfig {
        name: name.into(),
        system: SystemConfig::SquareWell {
            length: 1.0,
            x0: 0.5,
            p0: 400.0 * PI,
            sigma: 0.1,
        },
        packet: default_packet(),
        grid: default_grid(0.0, 1.0, 1 << 13),
        time: default_time(),
        analysis: analysis(4, 0.01, true),
        output: output(name),
    }
}

/// Packet at rest at `x0 = 0.8 L`.
pub fn square_well_fig3() -> ScenarioConfig {
    let name = "squarewell-fig3";
    ScenarioConfig {
        name: name.into(),
        system: SystemConfig::SquareWell {
            length: 1.0,
            x0: 0.8,
            p0: 0.0,
            sigma: 0.1,
        },
        packet: PacketConfig {
            renormalize: true,
            ..default_packet()
        },
        grid: default_grid(0.0, 1.0, 1 << 12),
        time: default_time(),
        analysis: analysis(10, 0.005, false),
        output: output(name),
    }
}

/// Packet dropped from rest at height `z0 = 100`, `σ = 1`.
pub fn bouncer_fig4() -> ScenarioConfig {
    let name = "bouncer-fig4";
    ScenarioConfig {
        name: name.into(),
        system: SystemConfig::Bouncer {
            z0: 100.0,
            sigma: 1.0,
            p0: 0.0,
        },
        packet: PacketConfig {
            n_window: 80,
            ..default_packet()
        },
        grid: default_grid(0.0, 128.0, 1 << 13),
        time: default_time(),
        analysis: analysis(6, 0.005, false),
        output: output(name),
    }
}

/// Hydrogen iodide with a Gaussian population around `n0 = 7`.
pub fn morse_fig5() -> ScenarioConfig {
    let name = "morse-fig5";
    ScenarioConfig {
        name: name.into(),
        system: SystemConfig::Morse(MorseParams::hydrogen_iodide()),
        packet: default_packet(),
        grid: default_grid(-0.8, 4.0, 1 << 12),
        time: default_time(),
        analysis: analysis(6, 0.01, false),
        output: output(name),
    }
}
