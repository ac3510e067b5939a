//! Particle-swarm synthesis of precoding vectors, plus the multi-run
//! port down-selection procedure.
//!
//! The search space is one complex weight per active port, parameterized as
//! cartesian (re, im) pairs. After every position update each particle is
//! projected back onto the feasible set: the first active port's phase is
//! rotated to 0° (removing the global-phase degeneracy) and the vector is
//! rescaled to unit total power. A standard global-best swarm with inertia
//! and velocity clamping drives the search; all randomness comes from a
//! seeded stream cipher, so a given configuration reproduces its
//! trajectory bit for bit.

use crate::coeff::ComplexCoefficient;
use crate::error::{Error, Result};
use crate::farfield::{angle_grid, power_db, sample_port, ElementPatternSet};
use crate::ports::AntennaPort;
use crate::WeightMap;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

/// What the synthesized pattern should achieve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Objective {
    /// Flatten the total gain over the sector: minimize max − min dB
    /// (ripple).
    OmniRipple,
    /// Maximize the total gain toward one angle.
    MaxGainAt { target_deg: f64 },
}

impl Objective {
    /// Short machine-readable kind tag, as used in files and CLI flags.
    pub fn kind_str(&self) -> &'static str {
        match self {
            Objective::OmniRipple => "omni",
            Objective::MaxGainAt { .. } => "max-gain",
        }
    }

    pub fn target_deg(&self) -> Option<f64> {
        match self {
            Objective::OmniRipple => None,
            Objective::MaxGainAt { target_deg } => Some(*target_deg),
        }
    }
}

/// Swarm hyperparameters and evaluation setup.
///
/// `sector` bounds the angular range the objective is scored over;
/// `grid_step_deg` is the sampling step within it. Identical configs (seed
/// included) produce bit-identical optimization trajectories.
#[derive(Debug, Clone, PartialEq)]
pub struct PsoConfig {
    pub swarm_size: usize,
    pub iterations: usize,
    pub inertia: f64,
    pub cognitive: f64,
    pub social: f64,
    /// Per-dimension velocity limit.
    pub velocity_clamp: f64,
    pub rng_seed: u64,
    /// (lo, hi) degrees.
    pub sector: (f64, f64),
    pub grid_step_deg: f64,
}

impl Default for PsoConfig {
    /// Constriction-style defaults: swarm 40, 200 iterations, inertia 0.72,
    /// cognitive = social = 1.49, velocity clamp 0.5, broadside sector
    /// [−45°, 45°] sampled every 1°.
    fn default() -> Self {
        PsoConfig {
            swarm_size: 40,
            iterations: 200,
            inertia: 0.72,
            cognitive: 1.49,
            social: 1.49,
            velocity_clamp: 0.5,
            rng_seed: 0,
            sector: (-45.0, 45.0),
            grid_step_deg: 1.0,
        }
    }
}

impl PsoConfig {
    pub fn validate(&self) -> Result<()> {
        if self.swarm_size < 2 {
            return Err(Error::validation("swarm_size must be at least 2"));
        }
        if self.iterations < 1 {
            return Err(Error::validation("iterations must be at least 1"));
        }
        if !(self.grid_step_deg > 0.0) {
            return Err(Error::validation("grid_step_deg must be positive"));
        }
        let (lo, hi) = self.sector;
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::validation(format!(
                "sector [{lo}°, {hi}°] must satisfy lo < hi"
            )));
        }
        for (name, v) in [
            ("inertia", self.inertia),
            ("cognitive", self.cognitive),
            ("social", self.social),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::validation(format!("{name} must be finite and >= 0")));
            }
        }
        if !(self.velocity_clamp > 0.0) {
            return Err(Error::validation("velocity_clamp must be positive"));
        }
        Ok(())
    }
}

/// Result of one optimization run with its convergence record.
#[derive(Debug, Clone)]
pub struct OptimizeTrace {
    pub weights: WeightMap,
    /// Objective value of the returned weights: sector ripple in dB for
    /// [`Objective::OmniRipple`] (smaller is better), gain in dB at the
    /// target for [`Objective::MaxGainAt`] (larger is better).
    pub score: f64,
    /// Best internal fitness after each iteration; non-increasing.
    pub gbest_history: Vec<f64>,
    /// Largest |Σ|w|² − 1| observed across all particles and iterations.
    pub max_power_error: f64,
}

/// Per-port field samples over the evaluation grid, in a flat layout for
/// the inner fitness loop. Ports are kept in ascending order so the
/// accumulation order matches [`crate::farfield::evaluate_field`].
struct Evaluator {
    n_ports: usize,
    grid_len: usize,
    vert: Vec<Complex64>,
    horz: Vec<Complex64>,
    /// MaxGainAt mode: the grid is the single target angle and fitness is
    /// the negated gain.
    maximize_gain: bool,
}

impl Evaluator {
    fn build(
        patterns: &ElementPatternSet,
        active_ports: &[AntennaPort],
        objective: Objective,
        config: &PsoConfig,
    ) -> Result<Evaluator> {
        let grid = match objective {
            Objective::OmniRipple => {
                angle_grid(config.sector.0, config.sector.1, config.grid_step_deg)
            }
            Objective::MaxGainAt { target_deg } => vec![target_deg],
        };
        let mut vert = Vec::with_capacity(active_ports.len() * grid.len());
        let mut horz = Vec::with_capacity(active_ports.len() * grid.len());
        for &port in active_ports {
            for &angle in &grid {
                let (v, h) = sample_port(patterns, port, angle)?;
                vert.push(v);
                horz.push(h);
            }
        }
        Ok(Evaluator {
            n_ports: active_ports.len(),
            grid_len: grid.len(),
            vert,
            horz,
            maximize_gain: matches!(objective, Objective::MaxGainAt { .. }),
        })
    }

    /// Internal fitness, minimized: ripple in dB, or negated target gain.
    /// Degenerate values (NaN from all-null patterns) rank worst.
    fn fitness(&self, position: &[f64]) -> f64 {
        let mut max_db = f64::NEG_INFINITY;
        let mut min_db = f64::INFINITY;
        for g in 0..self.grid_len {
            let mut ev = Complex64::ZERO;
            let mut eh = Complex64::ZERO;
            for p in 0..self.n_ports {
                let w = Complex64::new(position[2 * p], position[2 * p + 1]);
                let idx = p * self.grid_len + g;
                ev += w * self.vert[idx];
                eh += w * self.horz[idx];
            }
            let gain = power_db(ev.norm_sqr() + eh.norm_sqr());
            if self.maximize_gain {
                let f = -gain;
                return if f.is_nan() { f64::INFINITY } else { f };
            }
            if gain > max_db || g == 0 {
                max_db = gain;
            }
            if gain < min_db || g == 0 {
                min_db = gain;
            }
        }
        let ripple = if max_db == min_db { 0.0 } else { max_db - min_db };
        if ripple.is_nan() {
            f64::INFINITY
        } else {
            ripple
        }
    }
}

/// Projects a position onto the feasible set: first port's phase rotated
/// to 0°, then the whole vector rescaled to unit total power. A vanished
/// (all-zero) position restarts at unit weight on the first port.
fn project(position: &mut [f64]) {
    let (re0, im0) = (position[0], position[1]);
    let r0 = re0.hypot(im0);
    if r0 > 0.0 && (im0 != 0.0 || re0 < 0.0) {
        // Rotate every port by −phase(first port).
        let (c, s) = (re0 / r0, im0 / r0);
        for p in 0..position.len() / 2 {
            let (re, im) = (position[2 * p], position[2 * p + 1]);
            position[2 * p] = re * c + im * s;
            position[2 * p + 1] = im * c - re * s;
        }
        position[0] = r0;
        position[1] = 0.0;
    }

    let power: f64 = position.iter().map(|x| x * x).sum();
    if power == 0.0 {
        position[0] = 1.0;
        return;
    }
    let scale = 1.0 / power.sqrt();
    for x in position.iter_mut() {
        *x *= scale;
    }
}

fn total_power(position: &[f64]) -> f64 {
    position.iter().map(|x| x * x).sum()
}

fn validate_ports(patterns: &ElementPatternSet, ports: &[AntennaPort]) -> Result<Vec<AntennaPort>> {
    if ports.is_empty() {
        return Err(Error::validation("no active ports given"));
    }
    let mut sorted = ports.to_vec();
    sorted.sort();
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            return Err(Error::validation(format!("port {} listed twice", w[0])));
        }
    }
    for &port in &sorted {
        if !patterns.contains_port(port) {
            return Err(Error::validation(format!(
                "port {port} has no element pattern (available: {})",
                patterns
                    .ports()
                    .iter()
                    .map(|p| p.to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            )));
        }
    }
    Ok(sorted)
}

fn validate_problem(
    patterns: &ElementPatternSet,
    objective: Objective,
    config: &PsoConfig,
) -> Result<()> {
    config.validate()?;
    let (lo, hi) = config.sector;
    let (span_lo, span_hi) = patterns.span();
    if lo < span_lo || hi > span_hi {
        return Err(Error::validation(format!(
            "sector [{lo}°, {hi}°] outside the pattern grid span [{span_lo}°, {span_hi}°]"
        )));
    }
    if let Objective::MaxGainAt { target_deg } = objective {
        if !(target_deg >= lo && target_deg <= hi) {
            return Err(Error::validation(format!(
                "target {target_deg}° outside the sector [{lo}°, {hi}°]"
            )));
        }
    }
    Ok(())
}

/// Synthesizes a unit-power precoding vector over `active_ports` for the
/// given objective, returning the weights and their convergence trace.
///
/// Evaluations within an iteration are independent; personal/global bests
/// are reduced in fixed particle order after the whole sweep, so the result
/// does not depend on evaluation order.
pub fn optimize_with_trace(
    patterns: &ElementPatternSet,
    active_ports: &[AntennaPort],
    objective: Objective,
    config: &PsoConfig,
) -> Result<OptimizeTrace> {
    validate_problem(patterns, objective, config)?;
    let ports = validate_ports(patterns, active_ports)?;
    let evaluator = Evaluator::build(patterns, &ports, objective, config)?;

    let dim = 2 * ports.len();
    let swarm = config.swarm_size;
    let clamp = config.velocity_clamp;
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);

    let mut positions: Vec<Vec<f64>> = (0..swarm)
        .map(|_| {
            let mut x: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..=1.0)).collect();
            project(&mut x);
            x
        })
        .collect();
    let mut velocities: Vec<Vec<f64>> = (0..swarm)
        .map(|_| (0..dim).map(|_| rng.random_range(-clamp..=clamp)).collect())
        .collect();

    let mut pbest_pos = positions.clone();
    let mut pbest_fit = vec![f64::INFINITY; swarm];
    let mut gbest_pos = positions[0].clone();
    let mut gbest_fit = f64::INFINITY;
    let mut history = Vec::with_capacity(config.iterations);
    let mut max_power_error: f64 = positions
        .iter()
        .map(|x| (total_power(x) - 1.0).abs())
        .fold(0.0, f64::max);

    for iteration in 0..config.iterations {
        // Evaluation sweep, then best-reduction in fixed particle order.
        for i in 0..swarm {
            let fit = evaluator.fitness(&positions[i]);
            if fit < pbest_fit[i] {
                pbest_fit[i] = fit;
                pbest_pos[i].copy_from_slice(&positions[i]);
            }
        }
        for i in 0..swarm {
            if pbest_fit[i] < gbest_fit {
                gbest_fit = pbest_fit[i];
                gbest_pos.copy_from_slice(&pbest_pos[i]);
            }
        }
        history.push(gbest_fit);
        if iteration + 1 == config.iterations {
            break;
        }

        for i in 0..swarm {
            for d in 0..dim {
                let r1: f64 = rng.random();
                let r2: f64 = rng.random();
                let v = config.inertia * velocities[i][d]
                    + config.cognitive * r1 * (pbest_pos[i][d] - positions[i][d])
                    + config.social * r2 * (gbest_pos[d] - positions[i][d]);
                velocities[i][d] = v.clamp(-clamp, clamp);
                positions[i][d] += velocities[i][d];
            }
            project(&mut positions[i]);
            let err = (total_power(&positions[i]) - 1.0).abs();
            if err > max_power_error {
                max_power_error = err;
            }
        }
    }

    let mut weights = WeightMap::new();
    for (p, &port) in ports.iter().enumerate() {
        weights.insert(
            port,
            ComplexCoefficient::from_cartesian(gbest_pos[2 * p], gbest_pos[2 * p + 1]),
        );
    }
    let score = if matches!(objective, Objective::MaxGainAt { .. }) {
        -gbest_fit
    } else {
        gbest_fit
    };
    Ok(OptimizeTrace {
        weights,
        score,
        gbest_history: history,
        max_power_error,
    })
}

/// [`optimize_with_trace`] without the convergence record: returns the
/// unit-power weights and their objective score.
pub fn optimize(
    patterns: &ElementPatternSet,
    active_ports: &[AntennaPort],
    objective: Objective,
    config: &PsoConfig,
) -> Result<(WeightMap, f64)> {
    let trace = optimize_with_trace(patterns, active_ports, objective, config)?;
    Ok((trace.weights, trace.score))
}

/// Outcome of the multi-run power-ranking procedure.
#[derive(Debug, Clone)]
pub struct SelectionReport {
    pub runs: usize,
    /// Mean |w_p|² across runs, per port.
    pub avg_power: BTreeMap<AntennaPort, f64>,
    /// Ports with the smallest average power, ascending id.
    pub dropped: Vec<AntennaPort>,
    /// The remaining ports, ascending id.
    pub retained: Vec<AntennaPort>,
}

/// Splits ports into (dropped, retained) by ascending average power,
/// breaking power ties toward dropping the lower port id. Both lists are
/// returned sorted by port id.
fn rank_ports(
    avg_power: &BTreeMap<AntennaPort, f64>,
    drop_count: usize,
) -> (Vec<AntennaPort>, Vec<AntennaPort>) {
    let mut ranked: Vec<(AntennaPort, f64)> = avg_power.iter().map(|(p, a)| (*p, *a)).collect();
    // BTreeMap iteration is ascending by port, and the sort is stable, so
    // equal powers keep lower ids first.
    ranked.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
    let mut dropped: Vec<AntennaPort> = ranked[..drop_count].iter().map(|r| r.0).collect();
    let mut retained: Vec<AntennaPort> = ranked[drop_count..].iter().map(|r| r.0).collect();
    dropped.sort();
    retained.sort();
    (dropped, retained)
}

/// Runs `runs` independent optimizations (seeds `rng_seed + run index`),
/// averages per-port power |w_p|², and drops the `drop_count` weakest
/// ports. The caller chains a final [`optimize`] over the retained ports;
/// this report only ranks.
pub fn select_ports(
    patterns: &ElementPatternSet,
    all_ports: &[AntennaPort],
    runs: usize,
    drop_count: usize,
    objective: Objective,
    config: &PsoConfig,
) -> Result<SelectionReport> {
    if runs < 1 {
        return Err(Error::validation("selection needs at least 1 run"));
    }
    let ports = validate_ports(patterns, all_ports)?;
    if drop_count >= ports.len() {
        return Err(Error::validation(format!(
            "cannot drop {drop_count} of {} ports — at least one must remain",
            ports.len()
        )));
    }

    let mut acc: BTreeMap<AntennaPort, f64> = ports.iter().map(|p| (*p, 0.0)).collect();
    for run in 0..runs {
        let run_config = PsoConfig {
            rng_seed: config.rng_seed.wrapping_add(run as u64),
            ..config.clone()
        };
        let (weights, _) = optimize(patterns, &ports, objective, &run_config)?;
        for (port, w) in &weights {
            *acc.get_mut(port).unwrap() += w.power();
        }
    }
    let avg_power: BTreeMap<AntennaPort, f64> =
        acc.into_iter().map(|(p, sum)| (p, sum / runs as f64)).collect();
    let (dropped, retained) = rank_ports(&avg_power, drop_count);
    Ok(SelectionReport {
        runs,
        avg_power,
        dropped,
        retained,
    })
}

/// Rescales a weight vector to unit total power (Σ|w_p|² = 1), leaving
/// every phase untouched. All-zero input is an error.
pub fn normalize_power(weights: &WeightMap) -> Result<WeightMap> {
    let total: f64 = weights.values().map(|w| w.power()).sum();
    if total == 0.0 {
        return Err(Error::validation("cannot normalize an all-zero weight vector"));
    }
    if !total.is_finite() {
        return Err(Error::validation("cannot normalize non-finite weights"));
    }
    let scale = 1.0 / total.sqrt();
    Ok(weights
        .iter()
        .map(|(port, w)| (*port, w.scale_amplitude(scale)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::farfield::{predict_cut_raw, sector_stats, synthetic};

    fn grid() -> Vec<f64> {
        angle_grid(-90.0, 90.0, 1.0)
    }

    fn quick_config(seed: u64) -> PsoConfig {
        PsoConfig {
            swarm_size: 20,
            iterations: 60,
            rng_seed: seed,
            ..PsoConfig::default()
        }
    }

    #[test]
    fn config_validation_catches_degenerate_setups() {
        let c = PsoConfig { swarm_size: 1, ..PsoConfig::default() };
        assert!(c.validate().is_err());
        let c = PsoConfig { sector: (45.0, -45.0), ..PsoConfig::default() };
        assert!(c.validate().is_err());
        let c = PsoConfig { grid_step_deg: 0.0, ..PsoConfig::default() };
        assert!(c.validate().is_err());
        assert!(PsoConfig::default().validate().is_ok());
    }

    #[test]
    fn single_port_gets_unit_amplitude_and_element_score() {
        let patterns = synthetic::six_port_demo(&grid());
        let port = AntennaPort(5);
        let (weights, score) =
            optimize(&patterns, &[port], Objective::OmniRipple, &quick_config(7)).unwrap();
        let w = weights[&port];
        assert!((w.amplitude() - 1.0).abs() < 1e-9);
        assert_eq!(w.phase_deg(), 0.0);

        let cut = predict_cut_raw(&patterns, &weights, &angle_grid(-45.0, 45.0, 1.0), "p5").unwrap();
        let stats = sector_stats(&cut, (-45.0, 45.0)).unwrap();
        assert!((score - stats.ripple_db).abs() < 1e-9);
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let patterns = synthetic::two_element_half_wave(&grid());
        let ports = [AntennaPort(1), AntennaPort(2)];
        let a = optimize_with_trace(&patterns, &ports, Objective::OmniRipple, &quick_config(42))
            .unwrap();
        let b = optimize_with_trace(&patterns, &ports, Objective::OmniRipple, &quick_config(42))
            .unwrap();
        assert_eq!(a.score, b.score);
        assert_eq!(a.gbest_history, b.gbest_history);
        for (port, wa) in &a.weights {
            let wb = &b.weights[port];
            assert_eq!(wa.amplitude(), wb.amplitude());
            assert_eq!(wa.phase_deg(), wb.phase_deg());
        }
    }

    #[test]
    fn gbest_history_is_monotone_and_positions_stay_feasible() {
        let patterns = synthetic::six_port_demo(&grid());
        let ports: Vec<AntennaPort> = patterns.ports();
        let trace =
            optimize_with_trace(&patterns, &ports, Objective::OmniRipple, &quick_config(3))
                .unwrap();
        for w in trace.gbest_history.windows(2) {
            assert!(w[1] <= w[0], "gbest rose from {} to {}", w[0], w[1]);
        }
        assert!(trace.max_power_error <= 1e-9, "power error {}", trace.max_power_error);
        let total: f64 = trace.weights.values().map(|w| w.power()).sum();
        assert!((total - 1.0).abs() < 1e-9);
    }

    #[test]
    fn max_gain_score_matches_field_recomputation() {
        let patterns = synthetic::six_port_demo(&grid());
        let ports = [AntennaPort(2), AntennaPort(4), AntennaPort(5), AntennaPort(6)];
        let objective = Objective::MaxGainAt { target_deg: 30.0 };
        let (weights, score) = optimize(&patterns, &ports, objective, &quick_config(11)).unwrap();
        let cut = predict_cut_raw(&patterns, &weights, &[29.0, 30.0], "steer").unwrap();
        assert!((score - cut.gain_db[1]).abs() < 1e-9, "score {score} vs {}", cut.gain_db[1]);
    }

    #[test]
    fn rejects_bad_problems() {
        let patterns = synthetic::two_element_half_wave(&grid());
        let cfg = quick_config(0);
        assert!(optimize(&patterns, &[], Objective::OmniRipple, &cfg).is_err());
        assert!(optimize(&patterns, &[AntennaPort(9)], Objective::OmniRipple, &cfg).is_err());
        assert!(optimize(
            &patterns,
            &[AntennaPort(1), AntennaPort(1)],
            Objective::OmniRipple,
            &cfg
        )
        .is_err());

        let mut wide = quick_config(0);
        wide.sector = (-120.0, 45.0);
        assert!(optimize(&patterns, &[AntennaPort(1)], Objective::OmniRipple, &wide).is_err());

        let objective = Objective::MaxGainAt { target_deg: 60.0 };
        assert!(optimize(&patterns, &[AntennaPort(1)], objective, &quick_config(0)).is_err());
    }

    #[test]
    fn ranking_drops_smallest_average_power() {
        let avg: BTreeMap<AntennaPort, f64> = [
            (AntennaPort(1), 0.01),
            (AntennaPort(2), 0.30),
            (AntennaPort(3), 0.02),
            (AntennaPort(4), 0.25),
            (AntennaPort(5), 0.22),
            (AntennaPort(6), 0.20),
        ]
        .into_iter()
        .collect();
        let (dropped, retained) = rank_ports(&avg, 2);
        assert_eq!(dropped, vec![AntennaPort(1), AntennaPort(3)]);
        assert_eq!(
            retained,
            vec![AntennaPort(2), AntennaPort(4), AntennaPort(5), AntennaPort(6)]
        );
    }

    #[test]
    fn ranking_tie_break_drops_lower_port_ids() {
        let avg: BTreeMap<AntennaPort, f64> =
            (1..=4).map(|p| (AntennaPort(p), 0.25)).collect();
        let (dropped, retained) = rank_ports(&avg, 2);
        assert_eq!(dropped, vec![AntennaPort(1), AntennaPort(2)]);
        assert_eq!(retained, vec![AntennaPort(3), AntennaPort(4)]);
    }

    #[test]
    fn select_ports_zero_drop_retains_all() {
        let patterns = synthetic::two_element_half_wave(&grid());
        let ports = [AntennaPort(1), AntennaPort(2)];
        let mut cfg = quick_config(0);
        cfg.swarm_size = 8;
        cfg.iterations = 10;
        let report =
            select_ports(&patterns, &ports, 1, 0, Objective::OmniRipple, &cfg).unwrap();
        assert!(report.dropped.is_empty());
        assert_eq!(report.retained, ports.to_vec());
        assert_eq!(report.runs, 1);
    }

    #[test]
    fn select_ports_rejects_dropping_everything() {
        let patterns = synthetic::two_element_half_wave(&grid());
        let ports = [AntennaPort(1), AntennaPort(2)];
        let cfg = quick_config(0);
        assert!(select_ports(&patterns, &ports, 1, 2, Objective::OmniRipple, &cfg).is_err());
        assert!(select_ports(&patterns, &ports, 0, 1, Objective::OmniRipple, &cfg).is_err());
    }

    #[test]
    fn normalize_power_examples() {
        let mut w = WeightMap::new();
        w.insert(AntennaPort(1), ComplexCoefficient::from_polar(2.0, 30.0));
        let n = normalize_power(&w).unwrap();
        assert!((n[&AntennaPort(1)].amplitude() - 1.0).abs() < 1e-12);
        assert_eq!(n[&AntennaPort(1)].phase_deg(), 30.0);

        let mut w = WeightMap::new();
        w.insert(AntennaPort(1), ComplexCoefficient::UNIT);
        w.insert(AntennaPort(2), ComplexCoefficient::UNIT);
        let n = normalize_power(&w).unwrap();
        for v in n.values() {
            assert!((v.amplitude() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        }

        let mut w = WeightMap::new();
        w.insert(AntennaPort(1), ComplexCoefficient::ZERO);
        assert!(normalize_power(&w).is_err());
    }

    #[test]
    fn normalize_power_reaches_unit_power() {
        let mut w = WeightMap::new();
        w.insert(AntennaPort(2), ComplexCoefficient::from_cartesian(0.23, 0.0));
        w.insert(AntennaPort(4), ComplexCoefficient::from_cartesian(-0.60, -0.02));
        w.insert(AntennaPort(5), ComplexCoefficient::from_cartesian(0.77, 0.0));
        w.insert(AntennaPort(6), ComplexCoefficient::ZERO);
        let before: f64 = w.values().map(|v| v.power()).sum();
        assert!((before - 1.0062).abs() < 1e-3);
        let n = normalize_power(&w).unwrap();
        let total: f64 = n.values().map(|v| v.power()).sum();
        assert!((total - 1.0).abs() < 1e-12);
        // Phases untouched, amplitudes scaled by the same factor.
        let scale = n[&AntennaPort(5)].amplitude() / w[&AntennaPort(5)].amplitude();
        assert!((scale - 1.0 / before.sqrt()).abs() < 1e-12);
        assert_eq!(n[&AntennaPort(4)].phase_deg(), w[&AntennaPort(4)].phase_deg());
    }
}
