//! Far-field data model: per-port element patterns, weighted superposition,
//! gain traces, and sector statistics.
//!
//! An [`ElementPatternSet`] holds one complex far-field sample per port,
//! angle, and polarization over a shared angular cut. Applying a set of
//! per-port complex weights superposes the element fields linearly; the
//! resulting combined field is reduced to dB gain traces ([`PatternCut`])
//! and scored over angular sectors ([`sector_stats`]).

#[cfg(test)]
use crate::coeff::ComplexCoefficient;
use crate::error::{Error, Result};
use crate::ports::AntennaPort;
use crate::table::{load_table, parse_table, Table};
use crate::WeightMap;
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::fs;
use std::io::Write as _;
use std::path::Path;

/// Floor applied to dB values in file output. Exact nulls (zero power,
/// −∞ dB) and anything below this floor are stored as −300, which is some
/// 27 orders of magnitude below any measurable sidelobe.
pub const FILE_FLOOR_DB: f64 = -300.0;

/// Snaps a dB value to the file representation: −∞, NaN, and anything
/// below [`FILE_FLOOR_DB`] are raised to the floor.
pub fn floor_db(v: f64) -> f64 {
    // f64::max(NaN, floor) = floor, so this also catches NaN.
    v.max(FILE_FLOOR_DB)
}

/// Per-port complex far-field samples for both polarizations, aligned with
/// the owning set's angle grid.
#[derive(Debug, Clone)]
pub struct PortPattern {
    pub vert: Vec<Complex64>,
    pub horz: Vec<Complex64>,
}

/// Complex far-field element patterns for a set of antenna ports over a
/// shared angular cut.
///
/// Invariants (enforced at construction):
/// * the angle grid is strictly increasing, finite, with ≥ 2 samples;
/// * every port carries one finite sample per grid angle and polarization.
#[derive(Debug, Clone)]
pub struct ElementPatternSet {
    angles_deg: Vec<f64>,
    elements: BTreeMap<AntennaPort, PortPattern>,
    frequency_hz: Option<f64>,
}

impl ElementPatternSet {
    pub fn new(
        angles_deg: Vec<f64>,
        elements: BTreeMap<AntennaPort, PortPattern>,
        frequency_hz: Option<f64>,
    ) -> Result<Self> {
        if angles_deg.len() < 2 {
            return Err(Error::validation(
                "element pattern grid needs at least 2 angle samples",
            ));
        }
        for w in angles_deg.windows(2) {
            if !(w[0] < w[1]) {
                return Err(Error::validation(format!(
                    "element pattern grid must be strictly increasing ({} then {})",
                    w[0], w[1]
                )));
            }
        }
        if angles_deg.iter().any(|a| !a.is_finite()) {
            return Err(Error::validation("element pattern grid contains a non-finite angle"));
        }
        if elements.is_empty() {
            return Err(Error::validation("element pattern set has no ports"));
        }
        for (port, pattern) in &elements {
            if pattern.vert.len() != angles_deg.len() || pattern.horz.len() != angles_deg.len() {
                return Err(Error::validation(format!(
                    "port {port}: {} vertical / {} horizontal samples for a {}-angle grid",
                    pattern.vert.len(),
                    pattern.horz.len(),
                    angles_deg.len()
                )));
            }
            let finite = |v: &Complex64| v.re.is_finite() && v.im.is_finite();
            if !(pattern.vert.iter().all(finite) && pattern.horz.iter().all(finite)) {
                return Err(Error::validation(format!(
                    "port {port}: element pattern contains a non-finite sample"
                )));
            }
        }
        Ok(ElementPatternSet {
            angles_deg,
            elements,
            frequency_hz,
        })
    }

    /// Port identifiers, ascending.
    pub fn ports(&self) -> Vec<AntennaPort> {
        self.elements.keys().copied().collect()
    }

    pub fn contains_port(&self, port: AntennaPort) -> bool {
        self.elements.contains_key(&port)
    }

    pub fn angles_deg(&self) -> &[f64] {
        &self.angles_deg
    }

    /// Grid span as (first, last) angle.
    pub fn span(&self) -> (f64, f64) {
        (self.angles_deg[0], *self.angles_deg.last().unwrap())
    }

    pub fn frequency_hz(&self) -> Option<f64> {
        self.frequency_hz
    }

    pub fn port_pattern(&self, port: AntennaPort) -> Option<&PortPattern> {
        self.elements.get(&port)
    }
}

/// Where an angle falls on a grid: exactly on sample `i`, or between
/// samples `i` and `i + 1` at fraction `t`.
#[derive(Debug, Clone, Copy)]
enum GridPos {
    Exact(usize),
    Between(usize, f64),
}

fn locate(angles: &[f64], angle: f64) -> Result<GridPos> {
    if !angle.is_finite() {
        return Err(Error::validation(format!("angle {angle} is not finite")));
    }
    let (lo, hi) = (angles[0], *angles.last().unwrap());
    if angle < lo || angle > hi {
        return Err(Error::validation(format!(
            "angle {angle}° outside the pattern grid span [{lo}°, {hi}°]"
        )));
    }
    match angles.binary_search_by(|a| a.partial_cmp(&angle).unwrap()) {
        Ok(i) => Ok(GridPos::Exact(i)),
        Err(i) => {
            // In range and not an exact hit, so 1 <= i <= len - 1.
            let t = (angle - angles[i - 1]) / (angles[i] - angles[i - 1]);
            Ok(GridPos::Between(i - 1, t))
        }
    }
}

fn sample_at(samples: &[Complex64], pos: GridPos) -> Complex64 {
    match pos {
        GridPos::Exact(i) => samples[i],
        GridPos::Between(i, t) => samples[i] + (samples[i + 1] - samples[i]) * t,
    }
}

/// Both-polarization element field of one port at an angle, interpolating
/// linearly on the complex samples between grid points. Exact grid hits
/// return the stored sample bit for bit.
pub(crate) fn sample_port(
    patterns: &ElementPatternSet,
    port: AntennaPort,
    angle_deg: f64,
) -> Result<(Complex64, Complex64)> {
    let pattern = patterns
        .port_pattern(port)
        .ok_or_else(|| Error::validation(format!("unknown antenna port {port}")))?;
    let pos = locate(&patterns.angles_deg, angle_deg)?;
    Ok((sample_at(&pattern.vert, pos), sample_at(&pattern.horz, pos)))
}

/// Superposes the weighted element fields at one angle:
/// `E_pol(θ) = Σ_p w_p · E_p,pol(θ)` for each polarization.
///
/// Ports are accumulated in ascending port order, so results are
/// reproducible bit for bit. Off-grid angles interpolate linearly on the
/// complex element samples; on-grid angles use the stored samples exactly.
pub fn evaluate_field(
    patterns: &ElementPatternSet,
    weights: &WeightMap,
    angle_deg: f64,
) -> Result<(Complex64, Complex64)> {
    let pos = locate(&patterns.angles_deg, angle_deg)?;
    let mut e_vert = Complex64::ZERO;
    let mut e_horz = Complex64::ZERO;
    for (port, weight) in weights {
        let pattern = patterns
            .port_pattern(*port)
            .ok_or_else(|| Error::validation(format!("unknown antenna port {port}")))?;
        let w = weight.as_complex();
        e_vert += w * sample_at(&pattern.vert, pos);
        e_horz += w * sample_at(&pattern.horz, pos);
    }
    Ok((e_vert, e_horz))
}

/// Linear power → dB; zero or negative power yields `-inf`.
pub fn power_db(power: f64) -> f64 {
    if power > 0.0 {
        10.0 * power.log10()
    } else {
        f64::NEG_INFINITY
    }
}

/// Total gain of a field sample in dB: `10·log10(|E_v|² + |E_h|²)`, the
/// power sum over both polarizations. Zero field yields `-inf`.
pub fn gain_db(e_vert: Complex64, e_horz: Complex64) -> f64 {
    power_db(e_vert.norm_sqr() + e_horz.norm_sqr())
}

/// A gain-versus-angle trace in dB: total gain plus the two polarized
/// components.
///
/// Invariants (enforced at construction):
/// * all traces share the grid length; grid strictly increasing;
/// * total gain is never more than 1e-9 dB below either component
///   (total power ≥ component power).
#[derive(Debug, Clone)]
pub struct PatternCut {
    pub angles_deg: Vec<f64>,
    pub gain_db: Vec<f64>,
    pub vert_db: Vec<f64>,
    pub horz_db: Vec<f64>,
    pub label: String,
}

impl PatternCut {
    pub fn new(
        angles_deg: Vec<f64>,
        gain_db: Vec<f64>,
        vert_db: Vec<f64>,
        horz_db: Vec<f64>,
        label: impl Into<String>,
    ) -> Result<Self> {
        let n = angles_deg.len();
        if n == 0 {
            return Err(Error::validation("pattern cut has no samples"));
        }
        if gain_db.len() != n || vert_db.len() != n || horz_db.len() != n {
            return Err(Error::validation(format!(
                "pattern cut trace lengths differ: {n} angles, {} gain, {} vert, {} horz",
                gain_db.len(),
                vert_db.len(),
                horz_db.len()
            )));
        }
        if angles_deg.iter().any(|a| !a.is_finite()) {
            return Err(Error::validation("pattern cut contains a non-finite angle"));
        }
        for w in angles_deg.windows(2) {
            if !(w[0] < w[1]) {
                return Err(Error::validation(format!(
                    "pattern cut angles must be strictly increasing ({} then {})",
                    w[0], w[1]
                )));
            }
        }
        for i in 0..n {
            let component = vert_db[i].max(horz_db[i]);
            if gain_db[i] < component - 1e-9 {
                return Err(Error::validation(format!(
                    "at {}°: total gain {} dB is below the {} dB polarized component \
                     (total power must cover each component)",
                    angles_deg[i], gain_db[i], component
                )));
            }
        }
        Ok(PatternCut {
            angles_deg,
            gain_db,
            vert_db,
            horz_db,
            label: label.into(),
        })
    }

    /// Shifts all three traces so the maximum total gain reads 0 dB. A cut
    /// with no finite gain sample (all nulls) is left unshifted.
    pub fn normalize_to_peak(&mut self) {
        let peak = self
            .gain_db
            .iter()
            .copied()
            .filter(|g| g.is_finite())
            .fold(f64::NEG_INFINITY, f64::max);
        if !peak.is_finite() {
            return;
        }
        for trace in [&mut self.gain_db, &mut self.vert_db, &mut self.horz_db] {
            for v in trace.iter_mut() {
                *v -= peak;
            }
        }
    }
}

/// Predicts the combined pattern over `grid` without normalization: at each
/// angle, [`evaluate_field`] then dB reduction of total and per-polarization
/// power.
pub fn predict_cut_raw(
    patterns: &ElementPatternSet,
    weights: &WeightMap,
    grid: &[f64],
    label: impl Into<String>,
) -> Result<PatternCut> {
    let mut gain = Vec::with_capacity(grid.len());
    let mut vert = Vec::with_capacity(grid.len());
    let mut horz = Vec::with_capacity(grid.len());
    for &angle in grid {
        let (ev, eh) = evaluate_field(patterns, weights, angle)?;
        let pv = ev.norm_sqr();
        let ph = eh.norm_sqr();
        gain.push(power_db(pv + ph));
        vert.push(power_db(pv));
        horz.push(power_db(ph));
    }
    PatternCut::new(grid.to_vec(), gain, vert, horz, label)
}

/// Predicts the combined pattern over `grid`, normalized so the maximum
/// total gain reads 0 dB (the same offset is applied to the polarized
/// component traces).
pub fn predict_cut(
    patterns: &ElementPatternSet,
    weights: &WeightMap,
    grid: &[f64],
    label: impl Into<String>,
) -> Result<PatternCut> {
    let mut cut = predict_cut_raw(patterns, weights, grid, label)?;
    cut.normalize_to_peak();
    Ok(cut)
}

/// Summary statistics of a cut's total gain over an angular sector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorStats {
    pub min_db: f64,
    pub max_db: f64,
    /// `max_db - min_db`; 0 for a constant trace (including all-null cuts).
    pub ripple_db: f64,
    /// Angle of the maximum; ties resolve to the smallest angle.
    pub argmax_deg: f64,
}

/// Gain statistics over the samples with `lo ≤ angle ≤ hi`.
pub fn sector_stats(cut: &PatternCut, sector: (f64, f64)) -> Result<SectorStats> {
    let (lo, hi) = sector;
    if !(lo <= hi) {
        return Err(Error::validation(format!(
            "sector [{lo}°, {hi}°] is reversed or non-finite"
        )));
    }
    let mut max_db = f64::NEG_INFINITY;
    let mut min_db = f64::INFINITY;
    let mut argmax_deg = f64::NAN;
    let mut count = 0usize;
    for (i, &angle) in cut.angles_deg.iter().enumerate() {
        if angle < lo || angle > hi {
            continue;
        }
        count += 1;
        let g = cut.gain_db[i];
        if g > max_db || count == 1 {
            max_db = g;
            argmax_deg = angle;
        }
        if g < min_db || count == 1 {
            min_db = g;
        }
    }
    if count == 0 {
        return Err(Error::validation(format!(
            "sector [{lo}°, {hi}°] contains no samples of the cut"
        )));
    }
    let ripple_db = if max_db == min_db { 0.0 } else { max_db - min_db };
    Ok(SectorStats {
        min_db,
        max_db,
        ripple_db,
        argmax_deg,
    })
}

/// Builds an inclusive angle grid from `lo` to `hi` with the given step.
/// The final point snaps onto `hi` when the step divides the span (up to
/// rounding).
pub fn angle_grid(lo_deg: f64, hi_deg: f64, step_deg: f64) -> Vec<f64> {
    assert!(step_deg > 0.0 && lo_deg <= hi_deg, "degenerate angle grid");
    let mut grid = Vec::new();
    let mut i: u64 = 0;
    loop {
        let a = lo_deg + i as f64 * step_deg;
        if a > hi_deg + step_deg * 1e-9 {
            break;
        }
        grid.push(a.min(hi_deg));
        i += 1;
    }
    grid
}

// ---------------------------------------------------------------------------
// File I/O
// ---------------------------------------------------------------------------

const PATTERN_COLUMNS: [&str; 6] = ["port", "angle_deg", "re_vert", "im_vert", "re_horz", "im_horz"];

/// Loads an element pattern file: one row per (port, angle), columns
/// `port,angle_deg,re_vert,im_vert,re_horz,im_horz`, optional
/// `# frequency_hz = ...` metadata. Rows may appear in any order; every
/// port must cover the identical angle grid.
pub fn load_pattern_set(path: &Path) -> Result<ElementPatternSet> {
    parse_pattern_table(load_table(path)?)
}

/// Same as [`load_pattern_set`] for already-loaded text.
pub fn parse_pattern_set(text: &str, origin: &str) -> Result<ElementPatternSet> {
    parse_pattern_table(parse_table(text, origin)?)
}

fn parse_pattern_table(table: Table) -> Result<ElementPatternSet> {
    let cols = table.require_columns(&PATTERN_COLUMNS)?;
    let frequency_hz = match table.meta_value("frequency_hz") {
        Some(text) => Some(text.parse().map_err(|_| {
            Error::parse(&table.origin, 1, format!("frequency_hz `{text}` is not a number"))
        })?),
        None => None,
    };

    // port -> (angle, vert, horz) rows in file order.
    let mut per_port: BTreeMap<AntennaPort, Vec<(f64, Complex64, Complex64)>> = BTreeMap::new();
    for row in &table.rows {
        let port = AntennaPort(table.u32_field(row, cols[0])?);
        let angle = table.f64_field(row, cols[1])?;
        let vert = Complex64::new(table.f64_field(row, cols[2])?, table.f64_field(row, cols[3])?);
        let horz = Complex64::new(table.f64_field(row, cols[4])?, table.f64_field(row, cols[5])?);
        if !angle.is_finite() || !vert.re.is_finite() || !vert.im.is_finite()
            || !horz.re.is_finite() || !horz.im.is_finite()
        {
            return Err(table.err_at(row.line, "non-finite pattern sample"));
        }
        per_port.entry(port).or_default().push((angle, vert, horz));
    }
    if per_port.is_empty() {
        return Err(Error::parse(&table.origin, 1, "pattern file has no data rows"));
    }

    let mut angles_deg: Option<Vec<f64>> = None;
    let mut elements = BTreeMap::new();
    for (port, mut rows) in per_port {
        rows.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        for w in rows.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::validation(format!(
                    "{}: port {port} has duplicate samples at {}°",
                    table.origin, w[0].0
                )));
            }
        }
        let grid: Vec<f64> = rows.iter().map(|r| r.0).collect();
        match &angles_deg {
            None => angles_deg = Some(grid),
            Some(reference) => {
                if *reference != grid {
                    return Err(Error::validation(format!(
                        "{}: port {port} covers a different angle grid than the first port",
                        table.origin
                    )));
                }
            }
        }
        elements.insert(
            port,
            PortPattern {
                vert: rows.iter().map(|r| r.1).collect(),
                horz: rows.iter().map(|r| r.2).collect(),
            },
        );
    }
    ElementPatternSet::new(angles_deg.unwrap(), elements, frequency_hz)
}

/// Writes an element pattern set in the format read by
/// [`load_pattern_set`]. Floats use shortest-exact formatting, so a
/// load/save cycle preserves every sample bit for bit.
pub fn save_pattern_set(path: &Path, patterns: &ElementPatternSet) -> Result<()> {
    let mut out = String::new();
    if let Some(f) = patterns.frequency_hz() {
        out.push_str(&format!("# frequency_hz = {f}\n"));
    }
    out.push_str(&PATTERN_COLUMNS.join(","));
    out.push('\n');
    for port in patterns.ports() {
        let pattern = patterns.port_pattern(port).unwrap();
        for (i, &angle) in patterns.angles_deg().iter().enumerate() {
            let v = pattern.vert[i];
            let h = pattern.horz[i];
            out.push_str(&format!("{port},{angle},{},{},{},{}\n", v.re, v.im, h.re, h.im));
        }
    }
    write_file(path, out.as_bytes())
}

const CUT_COLUMNS: [&str; 4] = ["angle_deg", "gain_db", "vert_db", "horz_db"];

/// Writes a cut as `angle_deg,gain_db,vert_db,horz_db`. All dB values are
/// floored at [`FILE_FLOOR_DB`]; in particular −∞ (exact nulls) is stored
/// as −300.
pub fn save_cut(path: &Path, cut: &PatternCut) -> Result<()> {
    let mut out = String::new();
    out.push_str(&CUT_COLUMNS.join(","));
    out.push('\n');
    for i in 0..cut.angles_deg.len() {
        out.push_str(&format!(
            "{},{},{},{}\n",
            cut.angles_deg[i],
            floor_db(cut.gain_db[i]),
            floor_db(cut.vert_db[i]),
            floor_db(cut.horz_db[i]),
        ));
    }
    write_file(path, out.as_bytes())
}

/// Loads a gain cut from a text table.
///
/// Column names are matched case-insensitively with aliases: angle
/// (`angle_deg`/`Angle`/`angle`), total gain (`gain_db`/`G`/`gain`),
/// vertical component (`vert_db`/`s_vert`/`vert`), horizontal component
/// (`horz_db`/`s_horz`/`horz`). Angle and gain are required; missing
/// component columns are filled with the −∞ sentinel. Rows are sorted by
/// angle; duplicate angles are an error.
pub fn load_cut(path: &Path) -> Result<PatternCut> {
    let table = load_table(path)?;
    let label = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "cut".to_string());
    parse_cut_table(table, label)
}

/// Same as [`load_cut`] for already-loaded text.
pub fn parse_cut(text: &str, origin: &str, label: impl Into<String>) -> Result<PatternCut> {
    parse_cut_table(parse_table(text, origin)?, label.into())
}

fn parse_cut_table(table: Table, label: String) -> Result<PatternCut> {
    let angle_col = table
        .find_column(&["angle_deg", "angle"])
        .ok_or_else(|| Error::parse(&table.origin, 1, "missing angle column (`angle_deg` or `Angle`)"))?;
    let gain_col = table
        .find_column(&["gain_db", "g", "gain"])
        .ok_or_else(|| Error::parse(&table.origin, 1, "missing gain column (`gain_db` or `G`)"))?;
    let vert_col = table.find_column(&["vert_db", "s_vert", "vert"]);
    let horz_col = table.find_column(&["horz_db", "s_horz", "horz"]);

    let mut rows: Vec<(f64, f64, f64, f64)> = Vec::with_capacity(table.rows.len());
    for row in &table.rows {
        let angle = table.f64_field(row, angle_col)?;
        if !angle.is_finite() {
            return Err(table.err_at(row.line, "non-finite angle"));
        }
        let db = |col: Option<usize>| -> Result<f64> {
            let Some(col) = col else {
                return Ok(f64::NEG_INFINITY);
            };
            let v = table.f64_field(row, col)?;
            if v.is_nan() || v == f64::INFINITY {
                return Err(table.err_at(
                    row.line,
                    format!("column `{}`: {v} dB is not a usable gain", table.header[col]),
                ));
            }
            Ok(v)
        };
        rows.push((angle, db(Some(gain_col))?, db(vert_col)?, db(horz_col)?));
    }
    if rows.is_empty() {
        return Err(Error::parse(&table.origin, 1, "cut file has no data rows"));
    }
    rows.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    for w in rows.windows(2) {
        if w[0].0 == w[1].0 {
            return Err(Error::validation(format!(
                "{}: duplicate angle {}° in cut",
                table.origin, w[0].0
            )));
        }
    }
    PatternCut::new(
        rows.iter().map(|r| r.0).collect(),
        rows.iter().map(|r| r.1).collect(),
        rows.iter().map(|r| r.2).collect(),
        rows.iter().map(|r| r.3).collect(),
        label,
    )
}

pub(crate) fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    file.write_all(bytes).map_err(|e| Error::io(path, e))?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Synthetic pattern sets
// ---------------------------------------------------------------------------

/// Closed-form element pattern sets for demos and oracle tests. These are
/// not measurements; they exist so the pipeline can be exercised end to end
/// without simulation data.
pub mod synthetic {
    use super::*;
    use crate::coeff::deg_to_rad;

    /// Two isotropic vertically polarized elements with the phase profile
    /// of a half-wavelength-spaced pair: element phases ±90°·sin θ.
    ///
    /// With equal weights 0.5 the combined vertical field is exactly
    /// `cos(90°·sin θ)` — a closed-form oracle for superposition.
    pub fn two_element_half_wave(angles_deg: &[f64]) -> ElementPatternSet {
        let mut elements = BTreeMap::new();
        for (port, sign) in [(AntennaPort(1), 1.0), (AntennaPort(2), -1.0)] {
            let vert: Vec<Complex64> = angles_deg
                .iter()
                .map(|&theta| {
                    let x_deg = 90.0 * deg_to_rad(theta).sin();
                    Complex64::from_polar(1.0, sign * deg_to_rad(x_deg))
                })
                .collect();
            let horz = vec![Complex64::ZERO; angles_deg.len()];
            elements.insert(port, PortPattern { vert, horz });
        }
        ElementPatternSet::new(angles_deg.to_vec(), elements, None)
            .expect("two-element construction is valid for any valid grid")
    }

    /// A six-port demo set with four useful radiators and two deliberately
    /// poor ones.
    ///
    /// Ports 2, 4, 5, 6 carry smooth overlapping lobes centered at −40°,
    /// −15°, +15°, +40°, so broadside sectors can be flattened or steered
    /// by weighting. Ports 1 and 3 radiate 20 dB weaker and with a rapidly
    /// twirling phase, so any power spent on them buys ripple instead of
    /// gain — power-based port selection must discard them.
    pub fn six_port_demo(angles_deg: &[f64]) -> ElementPatternSet {
        let mut elements = BTreeMap::new();

        // Weak, phase-twirling ports.
        for (port, twirl_deg_per_deg, offset_deg) in
            [(AntennaPort(1), 6.0, 0.0), (AntennaPort(3), -7.0, 90.0)]
        {
            let vert: Vec<Complex64> = angles_deg
                .iter()
                .map(|&theta| {
                    let amp = 0.1 * (1.0 + 0.2 * deg_to_rad(3.0 * theta).cos());
                    Complex64::from_polar(amp, deg_to_rad(twirl_deg_per_deg * theta + offset_deg))
                })
                .collect();
            let horz = vec![Complex64::ZERO; angles_deg.len()];
            elements.insert(port, PortPattern { vert, horz });
        }

        // Strong lobed ports.
        for (port, center_deg) in [
            (AntennaPort(2), -40.0),
            (AntennaPort(4), -15.0),
            (AntennaPort(5), 15.0),
            (AntennaPort(6), 40.0),
        ] {
            let mut vert = Vec::with_capacity(angles_deg.len());
            let mut horz = Vec::with_capacity(angles_deg.len());
            for &theta in angles_deg {
                let rel = theta - center_deg;
                let amp = (-(rel / 45.0) * (rel / 45.0)).exp();
                let phase_deg = 0.25 * rel;
                vert.push(Complex64::from_polar(amp, deg_to_rad(phase_deg)));
                horz.push(Complex64::from_polar(
                    0.2 * amp,
                    deg_to_rad(phase_deg + 35.0),
                ));
            }
            elements.insert(port, PortPattern { vert, horz });
        }

        ElementPatternSet::new(angles_deg.to_vec(), elements, Some(7.25e9))
            .expect("six-port construction is valid for any valid grid")
    }
}
