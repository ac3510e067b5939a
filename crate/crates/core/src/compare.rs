//! Predicted-versus-measured pattern comparison.
//!
//! Both cuts are reduced to total gain over a common angular sector, each
//! normalized to its own 0 dB peak there, and differenced on the predicted
//! cut's grid (the measured trace is interpolated linearly in dB). The
//! self-comparison of any cut is exactly zero.

use crate::error::{Error, Result};
use crate::farfield::{floor_db, PatternCut};
use std::fmt;

/// Agreement statistics between a predicted and a measured cut.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    /// Root-mean-square of the per-angle gain difference, in dB.
    pub rms_db: f64,
    /// Largest absolute per-angle gain difference, in dB.
    pub max_abs_db: f64,
    /// Beam-pointing offset: predicted peak angle minus measured peak
    /// angle, in degrees (peaks located on the common grid, ties to the
    /// smallest angle).
    pub argmax_delta_deg: f64,
    /// The sector the comparison was restricted to.
    pub sector: (f64, f64),
    /// Number of grid points that entered the statistics.
    pub samples: usize,
}

impl ComparisonReport {
    /// Machine-readable `key = value` lines, exact floats.
    pub fn key_value_lines(&self) -> String {
        format!(
            "rms_db = {}\nmax_abs_db = {}\nargmax_delta_deg = {}\nsector = {}:{}\nsamples = {}\n",
            self.rms_db,
            self.max_abs_db,
            self.argmax_delta_deg,
            self.sector.0,
            self.sector.1,
            self.samples
        )
    }
}

impl fmt::Display for ComparisonReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "compared {} points in [{}°, {}°]: rms difference {:.3} dB, \
             max |difference| {:.3} dB, peak-angle offset {}°",
            self.samples,
            self.sector.0,
            self.sector.1,
            self.rms_db,
            self.max_abs_db,
            self.argmax_delta_deg
        )
    }
}

/// Measured gain at `angle`, linear interpolation in dB. Exact grid hits
/// return the stored sample (floored) bit for bit. The caller guarantees
/// `angle` lies within the measured span.
fn sample_measured(measured: &PatternCut, angle: f64) -> f64 {
    let xs = &measured.angles_deg;
    match xs.binary_search_by(|x| x.partial_cmp(&angle).unwrap()) {
        Ok(i) => floor_db(measured.gain_db[i]),
        Err(pos) => {
            let (i, j) = (pos - 1, pos);
            let t = (angle - xs[i]) / (xs[j] - xs[i]);
            let gi = floor_db(measured.gain_db[i]);
            let gj = floor_db(measured.gain_db[j]);
            gi + (gj - gi) * t
        }
    }
}

/// Compares a predicted cut against a measured one over `sector`.
///
/// The comparison grid is the predicted cut's angles restricted to the
/// sector and to the measured span. Gains on both sides pass through
/// [`floor_db`] first (so file round-trips and in-memory traces agree),
/// then each side is shifted to a 0 dB maximum before differencing —
/// absolute levels cancel, only shape differences remain.
pub fn compare(
    predicted: &PatternCut,
    measured: &PatternCut,
    sector: (f64, f64),
) -> Result<ComparisonReport> {
    let (lo, hi) = sector;
    if !lo.is_finite() || !hi.is_finite() || !(lo < hi) {
        return Err(Error::validation(format!(
            "comparison sector must be finite with lo < hi, got [{lo}°, {hi}°]"
        )));
    }
    let m_span = (
        *measured.angles_deg.first().unwrap(),
        *measured.angles_deg.last().unwrap(),
    );

    let mut angles = Vec::new();
    let mut p_gain = Vec::new();
    let mut m_gain = Vec::new();
    for (i, &a) in predicted.angles_deg.iter().enumerate() {
        if a < lo || a > hi || a < m_span.0 || a > m_span.1 {
            continue;
        }
        angles.push(a);
        p_gain.push(floor_db(predicted.gain_db[i]));
        m_gain.push(sample_measured(measured, a));
    }
    if angles.is_empty() {
        return Err(Error::validation(format!(
            "no predicted samples fall inside both the sector [{lo}°, {hi}°] \
             and the measured span [{}°, {}°]",
            m_span.0, m_span.1
        )));
    }

    let peak = |gain: &[f64]| -> (f64, f64) {
        let mut max = f64::NEG_INFINITY;
        let mut arg = angles[0];
        for (&a, &g) in angles.iter().zip(gain) {
            if g > max {
                max = g;
                arg = a;
            }
        }
        (max, arg)
    };
    let (p_max, p_arg) = peak(&p_gain);
    let (m_max, m_arg) = peak(&m_gain);

    let mut sum_sq = 0.0;
    let mut max_abs = 0.0f64;
    for (&p, &m) in p_gain.iter().zip(&m_gain) {
        let delta = (p - p_max) - (m - m_max);
        sum_sq += delta * delta;
        max_abs = max_abs.max(delta.abs());
    }

    Ok(ComparisonReport {
        rms_db: (sum_sq / angles.len() as f64).sqrt(),
        max_abs_db: max_abs,
        argmax_delta_deg: p_arg - m_arg,
        sector,
        samples: angles.len(),
    })
}
