//! Swarm optimizer versus an exhaustive grid oracle on the two-element
//! half-wave array.
//!
//! The oracle never touches the library's field evaluation: with
//! `w1 = a∠0°`, `w2 = b∠φ` (b = √(1−a²)) and per-element phases
//! ±x(θ) = ±90°·sin θ, the radiated power reduces to the closed form
//! `P(θ) = a² + b² + 2ab·cos(2x(θ) − φ)`, which the tests below grid-search
//! at 0.01 amplitude-ratio and 1° phase resolution.

use mmbeam::farfield::{angle_grid, synthetic::two_element_half_wave};
use mmbeam::optimizer::{optimize, Objective, PsoConfig};

const SEEDS: [u64; 5] = [0, 1, 2, 3, 4];

/// 2·x(θ) − the argument of the interference cosine — in radians, over the
/// default sector grid.
fn cosine_args() -> Vec<f64> {
    angle_grid(-45.0, 45.0, 1.0)
        .iter()
        .map(|theta| 2.0 * (90.0f64.to_radians() * theta.to_radians().sin()))
        .collect()
}

fn power(a: f64, b: f64, arg: f64, phi: f64) -> f64 {
    a * a + b * b + 2.0 * a * b * (arg - phi).cos()
}

/// Best achievable gain at broadside over the (amplitude ratio × phase)
/// grid.
fn brute_force_max_gain_at_zero() -> f64 {
    let arg0 = 0.0; // x(0°) = 0
    let mut best = f64::NEG_INFINITY;
    for ai in 0..=100 {
        let a = ai as f64 / 100.0;
        let b = (1.0 - a * a).max(0.0).sqrt();
        for phi_deg in -179..=180 {
            let phi = (phi_deg as f64).to_radians();
            let p = power(a, b, arg0, phi);
            best = best.max(10.0 * p.log10());
        }
    }
    best
}

/// Smallest achievable sector ripple over the same grid.
fn brute_force_min_ripple() -> f64 {
    let args = cosine_args();
    let mut best = f64::INFINITY;
    for ai in 0..=100 {
        let a = ai as f64 / 100.0;
        let b = (1.0 - a * a).max(0.0).sqrt();
        for phi_deg in -179..=180 {
            let phi = (phi_deg as f64).to_radians();
            let mut max_p = f64::NEG_INFINITY;
            let mut min_p = f64::INFINITY;
            for &arg in &args {
                let p = power(a, b, arg, phi);
                max_p = max_p.max(p);
                min_p = min_p.min(p);
            }
            let ripple = if max_p == min_p {
                0.0
            } else {
                10.0 * (max_p / min_p).log10()
            };
            best = best.min(ripple);
        }
    }
    best
}

#[test]
fn max_gain_matches_brute_force_for_five_seeds() {
    let patterns = two_element_half_wave(&angle_grid(-90.0, 90.0, 1.0));
    let ports = patterns.ports();
    let brute = brute_force_max_gain_at_zero();
    // Theory: equal split, in phase, |E|² = 2 → 3.0103 dB.
    assert!((brute - 10.0 * 2.0f64.log10()).abs() < 1e-3, "oracle sanity: {brute}");

    for seed in SEEDS {
        let config = PsoConfig {
            rng_seed: seed,
            ..PsoConfig::default()
        };
        let (weights, score) =
            optimize(&patterns, &ports, Objective::MaxGainAt { target_deg: 0.0 }, &config)
                .unwrap();
        assert!(
            (score - brute).abs() <= 0.05,
            "seed {seed}: swarm {score} dB vs oracle {brute} dB"
        );
        // The known optimum: equal amplitudes, equal phases.
        let w: Vec<_> = weights.values().collect();
        assert!(
            (w[0].amplitude() - w[1].amplitude()).abs() < 0.05,
            "seed {seed}: amplitudes {} / {}",
            w[0].amplitude(),
            w[1].amplitude()
        );
        assert!(
            w[1].phase_deg().abs() < 5.0,
            "seed {seed}: relative phase {}",
            w[1].phase_deg()
        );
    }
}

#[test]
fn omni_ripple_matches_brute_force_for_five_seeds() {
    let patterns = two_element_half_wave(&angle_grid(-90.0, 90.0, 1.0));
    let ports = patterns.ports();
    let brute = brute_force_min_ripple();
    // A single driven element radiates a constant envelope: ripple ~ 0.
    assert!(brute < 1e-6, "oracle sanity: {brute}");

    for seed in SEEDS {
        let config = PsoConfig {
            rng_seed: seed,
            ..PsoConfig::default()
        };
        let (_, score) =
            optimize(&patterns, &ports, Objective::OmniRipple, &config).unwrap();
        assert!(
            (score - brute).abs() <= 0.1,
            "seed {seed}: swarm ripple {score} dB vs oracle {brute} dB"
        );
    }
}
