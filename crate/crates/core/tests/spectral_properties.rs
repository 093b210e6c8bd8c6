use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use revivalscope::scenario::{presets, Scenario};
use revivalscope::spectral::Propagator;
use revivalscope::square_well::SquareWell;
use revivalscope::{autocorrelation, packet_norm, Grid, SpatialGrid, SpectralPacket, System};

fn fig1() -> Scenario {
    Scenario::build(&presets::square_well_fig1()).unwrap()
}

#[test]
fn fig1_packet_spans_the_expected_levels() {
    let s = fig1();
    assert!(packet_norm(&s.packet) >= 0.9999);
    assert!(s.packet.n_min() >= 340 && s.packet.n_max() <= 460);
    assert_eq!(s.packet.dominant_index(), 400);
}

#[test]
fn grid_norm_tracks_coefficient_norm() {
    let s = fig1();
    let prop = Propagator::new(&s.packet, &s.grid).unwrap();
    let norm = packet_norm(&s.packet);
    for k in 0..=16 {
        let t = s.timescales.t_rev * k as f64 / 16.0 + 1.3e-5 * k as f64;
        let integral = prop.position(t).density().integral();
        assert!((integral - norm).abs() < 1e-6, "t = {t}: {integral} vs {norm}");
    }
}

#[test]
fn autocorrelation_is_bounded_and_time_symmetric() {
    let s = fig1();
    for k in 0..200 {
        let t = s.timescales.t_rev * (k as f64 / 199.0) * 1.7;
        let a = autocorrelation(&s.packet, t).unwrap();
        let b = autocorrelation(&s.packet, -t).unwrap();
        assert!(a.norm() <= 1.0 + 1e-9);
        assert!((a.norm() - b.norm()).abs() < 1e-12);
    }
    let a0 = autocorrelation(&s.packet, 0.0).unwrap();
    assert!((a0.re - packet_norm(&s.packet)).abs() < 1e-14 && a0.im.abs() < 1e-14);
}

#[test]
fn full_revival_and_mirror_at_half() {
    for cfg in [presets::square_well_fig1(), presets::square_well_fig3()] {
        let s = Scenario::build(&cfg).unwrap();
        let a = autocorrelation(&s.packet, s.timescales.t_rev).unwrap();
        assert!(a.norm_sqr() > 0.999, "{}: {}", cfg.name, a.norm_sqr());
        let prop = Propagator::new(&s.packet, &s.grid).unwrap();
        let start = prop.position(0.0).density();
        let half = prop.position(0.5 * s.timescales.t_rev).density();
        let l1 = half.l1_distance(&start.reflected());
        assert!(l1 < 1e-2, "{}: L1 = {l1}", cfg.name);
    }
}

#[test]
fn eigenstate_is_stationary() {
    let basis = Arc::new(System::SquareWell(SquareWell::new(1.0).unwrap()));
    let packet = SpectralPacket::eigenstate(basis, 7).unwrap();
    let grid = SpatialGrid::new(0.0, 1.0, 1024).unwrap();
    let prop = Propagator::new(&packet, &grid).unwrap();
    let rho0 = prop.position(0.0).density().values;
    for t in [0.1, 3.7, 1234.5] {
        let rho = prop.position(t).density().values;
        let worst = rho.iter().zip(&rho0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(worst < 1e-12, "t = {t}: {worst}");
        assert!((autocorrelation(&packet, t).unwrap().norm() - 1.0).abs() < 1e-14);
    }
}

#[test]
fn classical_component_is_periodic_and_follows_the_packet() {
    let s = fig1();
    let prop = Propagator::new(&s.packet, &s.grid).unwrap();
    let t_cl = s.timescales.t_cl;
    let q0 = prop.position(0.0);
    let c0 = prop.classical(0.0, t_cl).unwrap();
    let c1 = prop.classical(t_cl, t_cl).unwrap();
    for ((a, b), q) in c0.values.iter().zip(&c1.values).zip(&q0.values) {
        assert!((a - b).norm() < 1e-10);
        assert!((a - q).norm() < 1e-10);
    }
    for k in 1..20 {
        let t = 2.0 * t_cl * k as f64 / 20.0;
        let q = prop.position(t);
        let c = prop.classical(t, t_cl).unwrap();
        let overlap = c.overlap(&q).norm();
        assert!(overlap > 0.9, "t/T_cl = {}: overlap {overlap}", t / t_cl);
    }
    // speed 2 p0 bounces the packet back through the centre at 1.5 T_cl,
    // and carries it to x = 0.7 after 0.1 T_cl
    for (frac, expected) in [(1.5, 0.5), (0.1, 0.7)] {
        let rho = prop.classical(frac * t_cl, t_cl).unwrap().density();
        let peak = rho
            .values
            .iter()
            .enumerate()
            .fold((0, 0.0), |b, (i, &v)| if v > b.1 { (i, v) } else { b })
            .0;
        let x = s.grid.coord(peak);
        assert!((x - expected).abs() < 0.02, "peak at {x}, expected {expected}");
    }
}

#[test]
fn t0_field_reproduces_the_initial_gaussian() {
    let s = fig1();
    let prop = Propagator::new(&s.packet, &s.grid).unwrap();
    let psi = prop.position(0.0);
    let norm = 1.0 / (0.1 * PI.sqrt()).sqrt();
    let worst = s
        .grid
        .coords()
        .iter()
        .zip(&psi.values)
        .map(|(&x, v)| {
            let d = x - 0.5;
            let g = Complex64::from_polar(norm * (-d * d / 0.02).exp(), 400.0 * PI * d);
            (g - v).norm()
        })
        .fold(0.0, f64::max);
    assert!(worst < 1e-4, "max deviation {worst}");
}
