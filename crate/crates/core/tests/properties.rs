//! Randomized property suites. Each suite runs 1000 cases.

use mmbeam::calibration::invert_ratio;
use mmbeam::coeff::{format_complex, parse_complex, wrap_phase_deg, ComplexCoefficient};
use mmbeam::compare::compare;
use mmbeam::farfield::{
    angle_grid, evaluate_field, gain_db, synthetic::two_element_half_wave, ElementPatternSet,
    PatternCut, PortPattern,
};
use mmbeam::optimizer::{normalize_power, optimize, Objective, PsoConfig};
use mmbeam::{AntennaPort, WeightMap};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

const CASES: u32 = 1000;

/// A small pattern set with pseudorandom complex samples on both
/// polarizations, reproducible from `seed`.
fn random_patterns(seed: u64, n_ports: u32) -> ElementPatternSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let angles = angle_grid(-60.0, 60.0, 10.0);
    let mut elements = BTreeMap::new();
    for port in 1..=n_ports {
        let sample =
            |rng: &mut ChaCha8Rng| Complex64::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0));
        let vert = (0..angles.len()).map(|_| sample(&mut rng)).collect();
        let horz = (0..angles.len()).map(|_| sample(&mut rng)).collect();
        elements.insert(AntennaPort(port), PortPattern { vert, horz });
    }
    ElementPatternSet::new(angles, elements, None).unwrap()
}

fn weight_map(ports: u32, raw: &[(f64, f64)]) -> WeightMap {
    (1..=ports)
        .zip(raw)
        .map(|(p, &(re, im))| (AntennaPort(p), ComplexCoefficient::from_cartesian(re, im)))
        .collect()
}

/// Σ|w_p|·(|vert_p| + |horz_p|) at one angle: the natural error scale of a
/// superposition.
fn eval_scale(patterns: &ElementPatternSet, weights: &WeightMap, angle: f64) -> f64 {
    weights
        .iter()
        .map(|(&p, w)| {
            let single: WeightMap = [(p, ComplexCoefficient::UNIT)].into_iter().collect();
            let (v, h) = evaluate_field(patterns, &single, angle).unwrap();
            w.amplitude() * (v.norm() + h.norm())
        })
        .sum()
}

// --- suite 1: phase canonicalization -----------------------------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(CASES))]

    #[test]
    fn phase_canonicalization(deg in -1.0e6f64..1.0e6) {
        let w = wrap_phase_deg(deg);
        prop_assert!(w > -180.0 && w <= 180.0, "{deg} wrapped to {w}");
        // Same angle modulo 360°.
        let turns = (deg - w) / 360.0;
        prop_assert!((turns - turns.round()).abs() < 1e-9, "{deg} -> {w}");
        // Idempotent, bit for bit.
        prop_assert_eq!(wrap_phase_deg(w).to_bits(), w.to_bits());
        // Constructors canonicalize too, folding negative amplitudes.
        let c = ComplexCoefficient::from_polar(-2.5, deg);
        prop_assert!(c.amplitude() >= 0.0);
        prop_assert!(c.phase_deg() > -180.0 && c.phase_deg() <= 180.0);
    }
}

// --- suite 2: superposition linearity -----------------------------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(CASES))]

    #[test]
    fn superposition_linearity(
        seed in any::<u64>(),
        wa in proptest::array::uniform3((-1.0f64..1.0, -1.0f64..1.0)),
        wb in proptest::array::uniform3((-1.0f64..1.0, -1.0f64..1.0)),
        alpha in 0.01f64..10.0,
        angle in -60.0f64..60.0,
    ) {
        let patterns = random_patterns(seed, 3);
        let a = weight_map(3, &wa);
        let b = weight_map(3, &wb);
        let sum: WeightMap = a
            .iter()
            .map(|(&p, w)| {
                (p, ComplexCoefficient::from_complex(w.as_complex() + b[&p].as_complex()))
            })
            .collect();
        let scaled: WeightMap = a
            .iter()
            .map(|(&p, w)| (p, w.scale_amplitude(alpha)))
            .collect();

        let (va, ha) = evaluate_field(&patterns, &a, angle).unwrap();
        let (vb, hb) = evaluate_field(&patterns, &b, angle).unwrap();
        let (vs, hs) = evaluate_field(&patterns, &sum, angle).unwrap();
        let (vx, hx) = evaluate_field(&patterns, &scaled, angle).unwrap();

        let scale = eval_scale(&patterns, &a, angle) + eval_scale(&patterns, &b, angle) + 1e-30;
        prop_assert!((vs - (va + vb)).norm() <= 1e-12 * scale);
        prop_assert!((hs - (ha + hb)).norm() <= 1e-12 * scale);
        prop_assert!((vx - va * alpha).norm() <= 1e-12 * alpha * scale);
        prop_assert!((hx - ha * alpha).norm() <= 1e-12 * alpha * scale);
    }
}

// --- suite 3: global-phase invariance of gain ----------------------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(CASES))]

    #[test]
    fn global_phase_invariance(
        seed in any::<u64>(),
        raw in proptest::array::uniform3((-1.0f64..1.0, -1.0f64..1.0)),
        rot in -720.0f64..720.0,
        angle in -60.0f64..60.0,
    ) {
        let patterns = random_patterns(seed, 3);
        let w = weight_map(3, &raw);
        let rotated: WeightMap = w.iter().map(|(&p, c)| (p, c.rotate_deg(rot))).collect();

        let (v0, h0) = evaluate_field(&patterns, &w, angle).unwrap();
        let (v1, h1) = evaluate_field(&patterns, &rotated, angle).unwrap();
        let power0 = v0.norm_sqr() + h0.norm_sqr();
        let power1 = v1.norm_sqr() + h1.norm_sqr();

        // Near-total cancellation leaves too few significant bits for a
        // meaningful dB comparison; skip those corner draws.
        let scale = eval_scale(&patterns, &w, angle) + 1e-30;
        prop_assume!(power0.sqrt() >= scale / 32.0);

        let g0 = gain_db(v0, h0);
        let g1 = gain_db(v1, h1);
        prop_assert!((g0 - g1).abs() <= 1e-12, "{g0} vs {g1} (rot {rot})");
        prop_assert!((power0 - power1).abs() <= 1e-13 * scale * scale);
    }
}

// --- suite 4: ratio inversion is an involution ---------------------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(CASES))]

    #[test]
    fn invert_ratio_involution(
        log_amp in -3.0f64..3.0,
        phase in -720.0f64..720.0,
    ) {
        let r = ComplexCoefficient::from_polar(10.0f64.powf(log_amp), phase);
        let twice = invert_ratio(invert_ratio(r).unwrap()).unwrap();
        prop_assert!(
            (twice.amplitude() - r.amplitude()).abs() <= 1e-12 * r.amplitude(),
            "{} vs {}", twice.amplitude(), r.amplitude()
        );
        let d = (twice.phase_deg() - r.phase_deg()).rem_euclid(360.0);
        prop_assert!(d.min(360.0 - d) <= 1e-12, "{} vs {}", twice.phase_deg(), r.phase_deg());
        // And the defining identity: r × r⁻¹ = 1∠0°.
        let unit = r * invert_ratio(r).unwrap();
        prop_assert!((unit.amplitude() - 1.0).abs() <= 1e-12);
        prop_assert!(unit.phase_deg().abs() <= 1e-9);
    }
}

// --- suite 5: self-comparison is exactly zero ----------------------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(CASES))]

    #[test]
    fn compare_with_self_is_zero(
        seed in any::<u64>(),
        n in 3usize..40,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let angles: Vec<f64> = (0..n).map(|i| -60.0 + 3.0 * i as f64).collect();
        let gain: Vec<f64> = (0..n)
            .map(|_| {
                // Mix ordinary levels with deep nulls and exact −∞.
                match rng.random_range(0..10u32) {
                    0 => f64::NEG_INFINITY,
                    1 => -400.0,
                    _ => rng.random_range(-60.0..3.0),
                }
            })
            .collect();
        let cut = PatternCut::new(
            angles,
            gain.clone(),
            gain,
            vec![f64::NEG_INFINITY; n],
            "self",
        ).unwrap();
        let r = compare(&cut, &cut, (-60.0, 60.0)).unwrap();
        prop_assert_eq!(r.rms_db, 0.0);
        prop_assert_eq!(r.max_abs_db, 0.0);
        prop_assert_eq!(r.argmax_delta_deg, 0.0);
        prop_assert_eq!(r.samples, n);
    }
}

// --- suite 6: optimization is deterministic under the seed ----------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(CASES))]

    #[test]
    fn determinism_under_seed(
        seed in any::<u64>(),
        max_gain in proptest::bool::ANY,
        target in -40.0f64..40.0,
    ) {
        let patterns = two_element_half_wave(&angle_grid(-60.0, 60.0, 5.0));
        let ports = patterns.ports();
        let objective = if max_gain {
            Objective::MaxGainAt { target_deg: target }
        } else {
            Objective::OmniRipple
        };
        let config = PsoConfig {
            swarm_size: 8,
            iterations: 10,
            rng_seed: seed,
            ..PsoConfig::default()
        };
        let (w1, s1) = optimize(&patterns, &ports, objective, &config).unwrap();
        let (w2, s2) = optimize(&patterns, &ports, objective, &config).unwrap();
        prop_assert_eq!(s1.to_bits(), s2.to_bits());
        for (p, c1) in &w1 {
            let c2 = w2[p];
            prop_assert_eq!(c1.amplitude().to_bits(), c2.amplitude().to_bits());
            prop_assert_eq!(c1.phase_deg().to_bits(), c2.phase_deg().to_bits());
        }
    }
}

// --- bonus coverage -------------------------------------------------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(CASES))]

    #[test]
    fn complex_literals_round_trip_bitwise(
        re in -1.0e3f64..1.0e3,
        im in -1.0e3f64..1.0e3,
    ) {
        let z = Complex64::new(re, im);
        let back = parse_complex(&format_complex(z)).unwrap();
        prop_assert_eq!(back.re.to_bits(), z.re.to_bits());
        prop_assert_eq!(back.im.to_bits(), z.im.to_bits());
    }

    #[test]
    fn normalize_power_yields_unit_power(
        raw in proptest::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 1..6),
    ) {
        let weights: WeightMap = raw
            .iter()
            .enumerate()
            .map(|(i, &(re, im))| {
                (AntennaPort(i as u32 + 1), ComplexCoefficient::from_cartesian(re, im))
            })
            .collect();
        let total: f64 = weights.values().map(|w| w.power()).sum();
        prop_assume!(total > 1e-12);
        let normalized = normalize_power(&weights).unwrap();
        let total: f64 = normalized.values().map(|w| w.power()).sum();
        prop_assert!((total - 1.0).abs() <= 1e-12);
        // Phases are untouched.
        for (p, w) in &weights {
            prop_assert_eq!(normalized[p].phase_deg().to_bits(), w.phase_deg().to_bits());
        }
    }

    #[test]
    fn angle_grid_is_monotone_and_covers_endpoints(
        lo in -90.0f64..0.0,
        span in 1.0f64..180.0,
        step in 0.1f64..10.0,
    ) {
        let hi = lo + span;
        let grid = angle_grid(lo, hi, step);
        prop_assert_eq!(grid[0], lo);
        let last = *grid.last().unwrap();
        // The grid walks the lattice lo + i·step, never past hi, and never
        // leaves a full step of uncovered span at the top.
        prop_assert!(last <= hi);
        prop_assert!(hi - last < step * (1.0 + 1e-6), "gap {} above {last}", hi - last);
        for w in grid.windows(2) {
            prop_assert!(w[0] < w[1]);
            prop_assert!(w[1] - w[0] <= step * (1.0 + 1e-9));
        }
    }
}
