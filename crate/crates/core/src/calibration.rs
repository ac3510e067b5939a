//! Hardware correction factors and the per-port compensation chain.
//!
//! The transmit path runs SDR → mixers and transmission lines → feed
//! network → radiating ports. Each stage's measured impairment becomes a
//! complex correction factor, and the setting actually programmed into an
//! SDR port is the codebook weight multiplied through the whole chain:
//!
//! ```text
//! setting = weight × (1 / measured_ratio) × 1∠(−feed_phase) × sdr_cal
//! ```

use crate::coeff::{wrap_phase_deg, ComplexCoefficient};
use crate::error::{Error, Result};
use crate::farfield::write_file;
use crate::ports::{AntennaPort, SdrPort};
use crate::table::{load_table, parse_table, Table};
use crate::WeightMap;
use std::collections::BTreeMap;
use std::path::Path;

// ---------------------------------------------------------------------------
// Measured wave-quantity ratios
// ---------------------------------------------------------------------------

/// How port labels in a ratio file map onto SDR ports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RatioIndexing {
    /// Labels are measurement-path numbers starting at 1; path `p` feeds
    /// SDR port `p − 1`. The convention of the bundled data files.
    #[default]
    PathOneBased,
    /// Labels already are SDR port numbers starting at 0.
    SdrZeroBased,
}

impl RatioIndexing {
    fn to_sdr(self, label: u32) -> Result<SdrPort> {
        match self {
            RatioIndexing::PathOneBased => {
                if label == 0 {
                    Err(Error::validation(
                        "ratio table uses 1-based path labels, but contains port 0 \
                         (set `# indexing = sdr` for 0-based SDR labels)",
                    ))
                } else {
                    Ok(SdrPort(label - 1))
                }
            }
            RatioIndexing::SdrZeroBased => Ok(SdrPort(label)),
        }
    }

    fn parse(text: &str) -> Option<RatioIndexing> {
        match text.trim().to_ascii_lowercase().as_str() {
            "path" | "path-one-based" | "1-based" => Some(RatioIndexing::PathOneBased),
            "sdr" | "sdr-zero-based" | "0-based" => Some(RatioIndexing::SdrZeroBased),
            _ => None,
        }
    }
}

/// One row of a ratio file, with the port label exactly as written.
#[derive(Debug, Clone, Copy)]
pub struct RatioRow {
    pub port_label: u32,
    pub ratio: ComplexCoefficient,
}

/// A ratio file in raw row form: port labels untouched. This is what
/// row-level transforms (ratio inversion) operate on, so output rows keep
/// the caller's numbering scheme.
#[derive(Debug, Clone)]
pub struct RawRatioTable {
    pub rows: Vec<RatioRow>,
    pub frequency_hz: Option<f64>,
    pub indexing: RatioIndexing,
}

/// Loads a `port,amplitude,phase_deg` ratio file. Optional metadata:
/// `# frequency_hz = ...` and `# indexing = path|sdr` (default `path`).
pub fn load_ratio_rows(path: &Path) -> Result<RawRatioTable> {
    parse_ratio_rows_table(load_table(path)?)
}

/// Same as [`load_ratio_rows`] for already-loaded text.
pub fn parse_ratio_rows(text: &str, origin: &str) -> Result<RawRatioTable> {
    parse_ratio_rows_table(parse_table(text, origin)?)
}

fn parse_ratio_rows_table(table: Table) -> Result<RawRatioTable> {
    let cols = table.require_columns(&["port", "amplitude", "phase_deg"])?;
    let frequency_hz = parse_meta_f64(&table, "frequency_hz")?;
    let indexing = match table.meta_value("indexing") {
        None => RatioIndexing::default(),
        Some(text) => RatioIndexing::parse(text).ok_or_else(|| {
            Error::parse(
                &table.origin,
                1,
                format!("indexing `{text}` is neither `path` nor `sdr`"),
            )
        })?,
    };
    let mut rows = Vec::with_capacity(table.rows.len());
    for row in &table.rows {
        let port_label = table.u32_field(row, cols[0])?;
        let amplitude = table.f64_field(row, cols[1])?;
        let phase_deg = table.f64_field(row, cols[2])?;
        if !(amplitude > 0.0) || !amplitude.is_finite() {
            return Err(table.err_at(
                row.line,
                format!("ratio amplitude must be positive and finite, got {amplitude}"),
            ));
        }
        if !phase_deg.is_finite() {
            return Err(table.err_at(row.line, "ratio phase must be finite"));
        }
        if rows.iter().any(|r: &RatioRow| r.port_label == port_label) {
            return Err(table.err_at(row.line, format!("duplicate port {port_label}")));
        }
        rows.push(RatioRow {
            port_label,
            ratio: ComplexCoefficient::from_polar(amplitude, phase_deg),
        });
    }
    if rows.is_empty() {
        return Err(Error::parse(&table.origin, 1, "ratio table has no rows"));
    }
    Ok(RawRatioTable {
        rows,
        frequency_hz,
        indexing,
    })
}

/// Measured wave-quantity ratios keyed by SDR port, relative to the
/// reference port (the lowest-numbered one), whose ratio must be exactly
/// 1∠0°.
#[derive(Debug, Clone)]
pub struct MeasuredRatioTable {
    pub reference_port: SdrPort,
    ratios: BTreeMap<SdrPort, ComplexCoefficient>,
    pub frequency_hz: Option<f64>,
}

impl MeasuredRatioTable {
    /// Resolves raw rows onto SDR ports using the table's indexing rule and
    /// checks the reference invariant.
    pub fn from_rows(raw: &RawRatioTable) -> Result<Self> {
        let mut ratios = BTreeMap::new();
        for row in &raw.rows {
            let port = raw.indexing.to_sdr(row.port_label)?;
            ratios.insert(port, row.ratio);
        }
        let reference_port = *ratios.keys().next().unwrap();
        let reference = ratios[&reference_port];
        if reference.amplitude() != 1.0 || reference.phase_deg() != 0.0 {
            return Err(Error::validation(format!(
                "reference ratio (sdr port {reference_port}) must be exactly 1∠0°, got {reference}"
            )));
        }
        Ok(MeasuredRatioTable {
            reference_port,
            ratios,
            frequency_hz: raw.frequency_hz,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_rows(&load_ratio_rows(path)?)
    }

    pub fn ratio(&self, port: SdrPort) -> Option<ComplexCoefficient> {
        self.ratios.get(&port).copied()
    }

    pub fn ports(&self) -> Vec<SdrPort> {
        self.ratios.keys().copied().collect()
    }
}

/// Correction factor for a measured ratio: `1/amplitude ∠ −phase`, so that
/// ratio × correction = 1∠0°.
pub fn invert_ratio(ratio: ComplexCoefficient) -> Result<ComplexCoefficient> {
    ratio
        .inverse()
        .ok_or_else(|| Error::validation("cannot invert a zero-amplitude ratio"))
}

// ---------------------------------------------------------------------------
// Feed network phases
// ---------------------------------------------------------------------------

/// Per-antenna-port feed phases in degrees, relative to antenna port 1
/// (which must be present with phase 0).
#[derive(Debug, Clone)]
pub struct FeedNetworkTable {
    phases: BTreeMap<AntennaPort, f64>,
}

impl FeedNetworkTable {
    pub fn new(phases: BTreeMap<AntennaPort, f64>) -> Result<Self> {
        match phases.get(&AntennaPort(1)) {
            Some(&0.0) => Ok(FeedNetworkTable { phases }),
            Some(&p) => Err(Error::validation(format!(
                "feed network reference (antenna port 1) must have phase 0, got {p}°"
            ))),
            None => Err(Error::validation(
                "feed network table must contain the reference antenna port 1",
            )),
        }
    }

    /// Loads an `antenna_port,phase_deg` file.
    pub fn load(path: &Path) -> Result<Self> {
        Self::from_table(load_table(path)?)
    }

    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        Self::from_table(parse_table(text, origin)?)
    }

    fn from_table(table: Table) -> Result<Self> {
        let cols = table.require_columns(&["antenna_port", "phase_deg"])?;
        let mut phases = BTreeMap::new();
        for row in &table.rows {
            let port = AntennaPort(table.u32_field(row, cols[0])?);
            let phase = table.f64_field(row, cols[1])?;
            if !phase.is_finite() {
                return Err(table.err_at(row.line, "feed phase must be finite"));
            }
            if phases.insert(port, phase).is_some() {
                return Err(table.err_at(row.line, format!("duplicate antenna port {port}")));
            }
        }
        Self::new(phases)
    }

    pub fn phase_deg(&self, port: AntennaPort) -> Option<f64> {
        self.phases.get(&port).copied()
    }

    pub fn ports(&self) -> Vec<AntennaPort> {
        self.phases.keys().copied().collect()
    }

    /// The correction the SDR applies for this port: unit amplitude at the
    /// negated feed phase, canonicalized.
    pub fn feed_correction(&self, port: AntennaPort) -> Result<ComplexCoefficient> {
        let phase = self.phase_deg(port).ok_or_else(|| {
            Error::validation(format!("antenna port {port} missing from the feed network table"))
        })?;
        Ok(ComplexCoefficient::from_polar(1.0, -phase))
    }
}

// ---------------------------------------------------------------------------
// SDR calibration coefficients
// ---------------------------------------------------------------------------

/// Per-SDR-port calibration coefficients from the reference-nulling
/// procedure, plus the measured inter-cable offset of the reference paths
/// and a per-port half-turn ambiguity flag.
#[derive(Debug, Clone)]
pub struct SdrCalTable {
    coeffs: BTreeMap<SdrPort, ComplexCoefficient>,
    ambiguity: BTreeMap<SdrPort, bool>,
    /// Measured phase offset between the two reference cables, in degrees.
    pub vna_path_offset_deg: f64,
}

impl SdrCalTable {
    pub fn new(
        coeffs: BTreeMap<SdrPort, ComplexCoefficient>,
        ambiguity: BTreeMap<SdrPort, bool>,
        vna_path_offset_deg: f64,
    ) -> Result<Self> {
        match coeffs.get(&SdrPort(0)) {
            Some(c) if c.amplitude() == 1.0 && c.phase_deg() == 0.0 => {}
            Some(c) => {
                return Err(Error::validation(format!(
                    "calibration reference (sdr port 0) must be exactly 1∠0°, got {c}"
                )))
            }
            None => {
                return Err(Error::validation(
                    "calibration table must contain the reference sdr port 0",
                ))
            }
        }
        Ok(SdrCalTable {
            coeffs,
            ambiguity,
            vna_path_offset_deg,
        })
    }

    /// Loads an `sdr_port,phase_deg,amplitude,ambiguous` file with optional
    /// `# vna_path_offset_deg = ...` metadata (default 0).
    pub fn load(path: &Path) -> Result<Self> {
        Self::from_table(load_table(path)?)
    }

    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        Self::from_table(parse_table(text, origin)?)
    }

    fn from_table(table: Table) -> Result<Self> {
        let cols = table.require_columns(&["sdr_port", "phase_deg", "amplitude", "ambiguous"])?;
        let offset = parse_meta_f64(&table, "vna_path_offset_deg")?.unwrap_or(0.0);
        let mut coeffs = BTreeMap::new();
        let mut ambiguity = BTreeMap::new();
        for row in &table.rows {
            let port = SdrPort(table.u32_field(row, cols[0])?);
            let phase = table.f64_field(row, cols[1])?;
            let amplitude = table.f64_field(row, cols[2])?;
            if !(amplitude > 0.0) || !amplitude.is_finite() || !phase.is_finite() {
                return Err(table.err_at(
                    row.line,
                    "calibration coefficient must have finite phase and positive amplitude",
                ));
            }
            if coeffs
                .insert(port, ComplexCoefficient::from_polar(amplitude, phase))
                .is_some()
            {
                return Err(table.err_at(row.line, format!("duplicate sdr port {port}")));
            }
            ambiguity.insert(port, table.bool_field(row, cols[3])?);
        }
        Self::new(coeffs, ambiguity, offset)
    }

    pub fn coeff(&self, port: SdrPort) -> Option<ComplexCoefficient> {
        self.coeffs.get(&port).copied()
    }

    pub fn is_ambiguous(&self, port: SdrPort) -> bool {
        self.ambiguity.get(&port).copied().unwrap_or(false)
    }

    pub fn ports(&self) -> Vec<SdrPort> {
        self.coeffs.keys().copied().collect()
    }
}

/// Reduces a raw phase reading to its calibrated value by removing the
/// measured reference-path offset: `raw − offset`, canonicalized. Nulling
/// a reading that equals the offset yields exactly 0°.
pub fn vna_offset_apply(raw_phase_deg: f64, offset_deg: f64) -> f64 {
    wrap_phase_deg(raw_phase_deg - offset_deg)
}

// ---------------------------------------------------------------------------
// Port map
// ---------------------------------------------------------------------------

/// Bijective assignment of antenna ports to SDR ports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PortMap {
    /// Sorted by antenna port.
    pairs: Vec<(AntennaPort, SdrPort)>,
}

impl PortMap {
    pub fn new(mut pairs: Vec<(AntennaPort, SdrPort)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::validation("port map has no pairs"));
        }
        pairs.sort();
        for w in pairs.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::validation(format!(
                    "antenna port {} mapped twice",
                    w[0].0
                )));
            }
        }
        let mut sdr: Vec<SdrPort> = pairs.iter().map(|p| p.1).collect();
        sdr.sort();
        for w in sdr.windows(2) {
            if w[0] == w[1] {
                return Err(Error::validation(format!("sdr port {} mapped twice", w[0])));
            }
        }
        Ok(PortMap { pairs })
    }

    /// The assignment used by the bundled data set: the four active antenna
    /// ports 2, 4, 5, 6 in ascending order onto SDR ports 0–3.
    pub fn default_mapping() -> Self {
        PortMap::new(vec![
            (AntennaPort(2), SdrPort(0)),
            (AntennaPort(4), SdrPort(1)),
            (AntennaPort(5), SdrPort(2)),
            (AntennaPort(6), SdrPort(3)),
        ])
        .unwrap()
    }

    /// Loads an `antenna_port,sdr_port` file.
    pub fn load(path: &Path) -> Result<Self> {
        Self::from_table(load_table(path)?)
    }

    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        Self::from_table(parse_table(text, origin)?)
    }

    fn from_table(table: Table) -> Result<Self> {
        let cols = table.require_columns(&["antenna_port", "sdr_port"])?;
        let mut pairs = Vec::with_capacity(table.rows.len());
        for row in &table.rows {
            pairs.push((
                AntennaPort(table.u32_field(row, cols[0])?),
                SdrPort(table.u32_field(row, cols[1])?),
            ));
        }
        Self::new(pairs)
    }

    pub fn sdr_for(&self, antenna: AntennaPort) -> Option<SdrPort> {
        self.pairs.iter().find(|p| p.0 == antenna).map(|p| p.1)
    }

    pub fn antenna_for(&self, sdr: SdrPort) -> Option<AntennaPort> {
        self.pairs.iter().find(|p| p.1 == sdr).map(|p| p.0)
    }

    /// Pairs sorted by antenna port.
    pub fn pairs(&self) -> &[(AntennaPort, SdrPort)] {
        &self.pairs
    }

    /// One-line rendering like `2->0, 4->1, 5->2, 6->3`.
    pub fn describe(&self) -> String {
        self.pairs
            .iter()
            .map(|(a, s)| format!("{a}->{s}"))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

// ---------------------------------------------------------------------------
// Chain composition
// ---------------------------------------------------------------------------

/// Multiplies a codebook weight through the correction chain. Amplitudes
/// multiply, phases add and re-canonicalize; the factors commute.
pub fn compose_setting(
    codebook_weight: ComplexCoefficient,
    hw: ComplexCoefficient,
    feed: ComplexCoefficient,
    sdr: ComplexCoefficient,
) -> ComplexCoefficient {
    codebook_weight * hw * feed * sdr
}

/// Per-SDR-port settings composed from a codebook entry, plus any
/// half-turn-ambiguity warnings raised along the way.
#[derive(Debug, Clone)]
pub struct ComposedSettings {
    pub settings: BTreeMap<SdrPort, ComplexCoefficient>,
    pub warnings: Vec<String>,
}

/// Composes the full chain for one codebook entry: for every mapped port,
/// `setting = weight × invert_ratio(measured ratio) × feed correction ×
/// sdr coefficient`. Antenna ports absent from the entry (or with zero
/// weight) produce 0∠0° settings without requiring table entries.
pub fn compose_all(
    weights: &WeightMap,
    ratios: &MeasuredRatioTable,
    feed: &FeedNetworkTable,
    sdrcal: &SdrCalTable,
    map: &PortMap,
) -> Result<ComposedSettings> {
    for port in weights.keys() {
        if map.sdr_for(*port).is_none() {
            return Err(Error::validation(format!(
                "antenna port {port} of the codebook entry is missing from the port map"
            )));
        }
    }

    let mut settings = BTreeMap::new();
    let mut warnings = Vec::new();
    for &(antenna, sdr) in map.pairs() {
        if sdrcal.is_ambiguous(sdr) {
            warnings.push(format!(
                "sdr port {sdr} (antenna port {antenna}): 180° phase ambiguity flagged — \
                 the composed phase may be off by a half turn until recalibrated"
            ));
        }
        let weight = weights.get(&antenna).copied().unwrap_or(ComplexCoefficient::ZERO);
        if weight.is_zero() {
            settings.insert(sdr, ComplexCoefficient::ZERO);
            continue;
        }
        let ratio = ratios.ratio(sdr).ok_or_else(|| {
            Error::validation(format!(
                "sdr port {sdr} (antenna port {antenna}) missing from the measured-ratio table"
            ))
        })?;
        let hw = invert_ratio(ratio)?;
        let feed_corr = feed.feed_correction(antenna)?;
        let sdr_coeff = sdrcal.coeff(sdr).ok_or_else(|| {
            Error::validation(format!(
                "sdr port {sdr} (antenna port {antenna}) missing from the sdr calibration table"
            ))
        })?;
        settings.insert(sdr, compose_setting(weight, hw, feed_corr, sdr_coeff));
    }
    Ok(ComposedSettings { settings, warnings })
}

// ---------------------------------------------------------------------------
// Transmission-line records
// ---------------------------------------------------------------------------

/// One measured transmission line: serial number, attenuation, phase.
#[derive(Debug, Clone, PartialEq)]
pub struct LineRecord {
    pub serial: String,
    pub attenuation_db: f64,
    pub phase_deg: f64,
}

/// Reference measurements of individual cables. These are bookkeeping
/// data — they are queryable but never inserted into the composition chain
/// (the chain corrections already cover the assembled paths).
#[derive(Debug, Clone)]
pub struct LineRecordSet {
    pub records: Vec<LineRecord>,
    pub frequency_hz: Option<f64>,
}

impl LineRecordSet {
    /// Loads a `serial,attenuation_db,phase_deg` file with optional
    /// `# frequency_hz = ...` metadata.
    pub fn load(path: &Path) -> Result<Self> {
        Self::from_table(load_table(path)?)
    }

    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        Self::from_table(parse_table(text, origin)?)
    }

    fn from_table(table: Table) -> Result<Self> {
        let cols = table.require_columns(&["serial", "attenuation_db", "phase_deg"])?;
        let frequency_hz = parse_meta_f64(&table, "frequency_hz")?;
        let mut records = Vec::with_capacity(table.rows.len());
        for row in &table.rows {
            let attenuation_db = table.f64_field(row, cols[1])?;
            if !(attenuation_db >= 0.0) {
                return Err(table.err_at(
                    row.line,
                    format!("attenuation must be >= 0 dB, got {attenuation_db}"),
                ));
            }
            records.push(LineRecord {
                serial: row.fields[cols[0]].clone(),
                attenuation_db,
                phase_deg: table.f64_field(row, cols[2])?,
            });
        }
        Ok(LineRecordSet {
            records,
            frequency_hz,
        })
    }

    pub fn find(&self, serial: &str) -> Option<&LineRecord> {
        self.records.iter().find(|r| r.serial == serial)
    }
}

// ---------------------------------------------------------------------------
// Settings file I/O
// ---------------------------------------------------------------------------

/// Writes composed settings as `sdr_port,amplitude,phase_deg,re,im`,
/// preceded by a `# key = value` metadata block (typically input digests
/// and the port map).
pub fn save_settings(
    path: &Path,
    settings: &BTreeMap<SdrPort, ComplexCoefficient>,
    meta: &[(String, String)],
) -> Result<()> {
    let mut out = String::new();
    for (key, value) in meta {
        out.push_str(&format!("# {key} = {value}\n"));
    }
    out.push_str("sdr_port,amplitude,phase_deg,re,im\n");
    for (port, c) in settings {
        let z = c.as_complex();
        out.push_str(&format!(
            "{port},{},{},{},{}\n",
            c.amplitude(),
            c.phase_deg(),
            z.re,
            z.im
        ));
    }
    write_file(path, out.as_bytes())
}

/// Per-port settings plus the `# key = value` metadata block they were
/// stored with.
pub type SettingsWithMeta = (BTreeMap<SdrPort, ComplexCoefficient>, Vec<(String, String)>);

/// Reads a settings file back: the polar columns are authoritative, the
/// cartesian ones informational. Returns the settings and the metadata
/// block.
pub fn load_settings(path: &Path) -> Result<SettingsWithMeta> {
    let table = load_table(path)?;
    let cols = table.require_columns(&["sdr_port", "amplitude", "phase_deg"])?;
    let mut settings = BTreeMap::new();
    for row in &table.rows {
        let port = SdrPort(table.u32_field(row, cols[0])?);
        let amplitude = table.f64_field(row, cols[1])?;
        let phase = table.f64_field(row, cols[2])?;
        if settings
            .insert(port, ComplexCoefficient::from_polar(amplitude, phase))
            .is_some()
        {
            return Err(table.err_at(row.line, format!("duplicate sdr port {port}")));
        }
    }
    Ok((settings, table.meta))
}

fn parse_meta_f64(table: &Table, key: &str) -> Result<Option<f64>> {
    match table.meta_value(key) {
        None => Ok(None),
        Some(text) => text.parse().map(Some).map_err(|_| {
            Error::parse(&table.origin, 1, format!("{key} `{text}` is not a number"))
        }),
    }
}
