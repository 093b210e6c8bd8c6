use revivalscope::fourier::{MomentumPathway, RecordEngine};
use revivalscope::revival::Fraction;
use revivalscope::scenario::{presets, run_snapshots, Scenario};
use revivalscope::square_well::{SquareWellParams, sw_gaussian_coefficients};
use revivalscope::DensityProfile;

fn engine(s: &Scenario, pathway: MomentumPathway) -> RecordEngine {
    RecordEngine::new(&s.packet, &s.grid, s.config.grid.zero_pad, pathway, s.timescales.t_rev).unwrap()
}

#[test]
fn analytic_and_fft_momentum_densities_agree() {
    for cfg in [presets::square_well_fig1(), presets::square_well_fig3()] {
        let s = Scenario::build(&cfg).unwrap();
        let fft = engine(&s, MomentumPathway::Fft);
        let analytic = engine(&s, MomentumPathway::Analytic);
        for frac in [0.0, 0.25, 0.5] {
            let t = frac * s.timescales.t_rev;
            let a = fft.momentum(t).unwrap().density();
            let b = analytic.momentum(t).unwrap().density();
            let worst = a.values.iter().zip(&b.values).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
            assert!(worst < 1e-4, "{} t/T_rev = {frac}: {worst}", cfg.name);
        }
    }
}

#[test]
fn centred_packet_peaks_at_p0_l_over_pi() {
    for (p0, expected) in [(400.0, 400usize), (123.0, 123)] {
        let params = SquareWellParams::new(1.0, 0.5, p0 * std::f64::consts::PI, 0.1).unwrap();
        let c = sw_gaussian_coefficients(&params, 1, expected + 100).unwrap();
        let best = c
            .coefficients
            .iter()
            .enumerate()
            .fold((0, 0.0), |b, (i, a)| if a.norm() > b.1 { (i, a.norm()) } else { b })
            .0
            + c.n_min;
        assert_eq!(best, expected);
    }
}

fn peak(d: &[f64]) -> f64 {
    d.iter().copied().fold(0.0, f64::max)
}

#[test]
fn fig3_snapshots() {
    let s = Scenario::build(&presets::square_well_fig3()).unwrap();
    let fractions: Vec<Fraction> = ["1/2", "1/7", "1/1"].iter().map(|f| f.parse().unwrap()).collect();
    let shots = run_snapshots(&s, &fractions).unwrap();
    let start = run_snapshots(&s, &[Fraction { p: 1, q: 1 }]).unwrap().remove(0);
    let initial = revivalscope::spectral::Propagator::new(&s.packet, &s.grid)
        .unwrap()
        .position(0.0)
        .density();

    let mirror = DensityProfile {
        grid: s.grid,
        values: shots[0].rho.clone(),
    };
    assert!(mirror.l1_distance(&initial.reflected()) < 1e-2);

    assert!(
        peak(&shots[1].rho) < 0.5 * peak(&initial.values),
        "1/7 peak {} vs initial {}",
        peak(&shots[1].rho),
        peak(&initial.values)
    );

    let full = DensityProfile {
        grid: s.grid,
        values: shots[2].rho.clone(),
    };
    assert!(full.l1_distance(&initial.values) < 1e-2);
    assert_eq!(start.rho, shots[2].rho);
}
