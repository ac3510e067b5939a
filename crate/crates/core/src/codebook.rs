//! Named collections of beamforming weight vectors.
//!
//! A codebook file is a list of `[name]` blocks. Inside a block, lines with
//! an integer key assign a complex weight to that antenna port, and a few
//! named keys carry optional provenance of the entry:
//!
//! ```text
//! [steer30]
//! objective = max-gain
//! target = 30
//! sector = -45:45
//! 2 = 0.525
//! 4 = 0.7607j
//! ```
//!
//! Weights accept the usual complex literal forms (`0.23`, `-0.6-0.02j`,
//! `j0.76`, `1.026∠162.3°`). Saving writes the polar form (`0.525∠0°`),
//! which reparses bit for bit, so save → load → save is byte-stable.

use crate::coeff::parse_coefficient;
#[cfg(test)]
use crate::coeff::ComplexCoefficient;
use crate::error::{Error, Result};
use crate::farfield::write_file;
use crate::optimizer::Objective;
use crate::ports::AntennaPort;
use crate::WeightMap;
use std::path::Path;

/// One named weight vector, with the objective and sector it was built
/// for when known.
#[derive(Debug, Clone)]
pub struct CodebookEntry {
    pub name: String,
    pub weights: WeightMap,
    pub objective: Option<Objective>,
    pub sector: Option<(f64, f64)>,
}

impl CodebookEntry {
    /// Total radiated power of the weight vector, Σ|w|².
    pub fn squared_norm(&self) -> f64 {
        self.weights.values().map(|w| w.power()).sum()
    }
}

/// An ordered set of uniquely named entries.
#[derive(Debug, Clone, Default)]
pub struct Codebook {
    pub entries: Vec<CodebookEntry>,
}

/// Entries whose squared norm strays outside this band draw a load
/// warning: the vector still works, but its total power differs from the
/// usual unit normalization.
pub const NORM_BAND: (f64, f64) = (0.99, 1.01);

impl Codebook {
    pub fn entry(&self, name: &str) -> Option<&CodebookEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    /// Replaces the entry with the same name in place, or appends.
    pub fn upsert(&mut self, entry: CodebookEntry) {
        match self.entries.iter_mut().find(|e| e.name == entry.name) {
            Some(slot) => *slot = entry,
            None => self.entries.push(entry),
        }
    }

    /// Loads a codebook and returns it together with any norm warnings.
    pub fn load(path: &Path) -> Result<(Self, Vec<String>)> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn parse(text: &str, origin: &str) -> Result<(Self, Vec<String>)> {
        let mut book = Codebook::default();
        let mut current: Option<PendingEntry> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            if let Some(name) = trimmed.strip_prefix('[') {
                let name = name
                    .strip_suffix(']')
                    .ok_or_else(|| Error::parse(origin, line, "unterminated [entry] header"))?
                    .trim();
                if name.is_empty() || name.contains(['[', ']']) {
                    return Err(Error::parse(origin, line, format!("bad entry name `{name}`")));
                }
                if let Some(done) = current.take() {
                    book.entries.push(done.finish(origin)?);
                }
                if book.entry(name).is_some() {
                    return Err(Error::parse(
                        origin,
                        line,
                        format!("duplicate entry name `{name}`"),
                    ));
                }
                current = Some(PendingEntry::new(name, line));
                continue;
            }
            let entry = current.as_mut().ok_or_else(|| {
                Error::parse(origin, line, "value line before any [entry] header")
            })?;
            let (key, value) = trimmed.split_once('=').ok_or_else(|| {
                Error::parse(origin, line, format!("expected `key = value`, got `{trimmed}`"))
            })?;
            entry.set(origin, line, key.trim(), value.trim())?;
        }
        if let Some(done) = current.take() {
            book.entries.push(done.finish(origin)?);
        }
        let warnings = book
            .entries
            .iter()
            .filter(|e| {
                let n = e.squared_norm();
                !(n >= NORM_BAND.0 && n <= NORM_BAND.1)
            })
            .map(|e| {
                format!(
                    "entry `{}`: squared weight norm {:.6} outside [{}, {}]",
                    e.name,
                    e.squared_norm(),
                    NORM_BAND.0,
                    NORM_BAND.1
                )
            })
            .collect();
        Ok((book, warnings))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        write_file(path, self.render().as_bytes())
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (i, entry) in self.entries.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            out.push_str(&format!("[{}]\n", entry.name));
            match entry.objective {
                Some(Objective::OmniRipple) => out.push_str("objective = omni\n"),
                Some(Objective::MaxGainAt { target_deg }) => {
                    out.push_str("objective = max-gain\n");
                    out.push_str(&format!("target = {target_deg}\n"));
                }
                None => {}
            }
            if let Some((lo, hi)) = entry.sector {
                out.push_str(&format!("sector = {lo}:{hi}\n"));
            }
            for (port, w) in &entry.weights {
                out.push_str(&format!("{port} = {w}\n"));
            }
        }
        out
    }
}

struct PendingEntry {
    name: String,
    header_line: usize,
    weights: WeightMap,
    objective_kind: Option<String>,
    target: Option<f64>,
    sector: Option<(f64, f64)>,
}

impl PendingEntry {
    fn new(name: &str, header_line: usize) -> Self {
        PendingEntry {
            name: name.to_string(),
            header_line,
            weights: WeightMap::new(),
            objective_kind: None,
            target: None,
            sector: None,
        }
    }

    fn set(&mut self, origin: &str, line: usize, key: &str, value: &str) -> Result<()> {
        if let Ok(port) = key.parse::<u32>() {
            let w = parse_coefficient(value).map_err(|msg| Error::parse(origin, line, msg))?;
            let port = AntennaPort(port);
            if self.weights.insert(port, w).is_some() {
                return Err(Error::parse(origin, line, format!("duplicate port {port}")));
            }
            return Ok(());
        }
        match key {
            "objective" => match value {
                "omni" | "max-gain" => self.objective_kind = Some(value.to_string()),
                other => {
                    return Err(Error::parse(
                        origin,
                        line,
                        format!("objective must be `omni` or `max-gain`, got `{other}`"),
                    ))
                }
            },
            "target" => {
                let t: f64 = value.parse().map_err(|_| {
                    Error::parse(origin, line, format!("target `{value}` is not a number"))
                })?;
                if !t.is_finite() {
                    return Err(Error::parse(origin, line, "target must be finite"));
                }
                self.target = Some(t);
            }
            "sector" => {
                let (lo, hi) = value.split_once(':').ok_or_else(|| {
                    Error::parse(origin, line, format!("sector `{value}` is not `lo:hi`"))
                })?;
                let lo: f64 = lo.trim().parse().map_err(|_| {
                    Error::parse(origin, line, format!("sector bound `{lo}` is not a number"))
                })?;
                let hi: f64 = hi.trim().parse().map_err(|_| {
                    Error::parse(origin, line, format!("sector bound `{hi}` is not a number"))
                })?;
                if !lo.is_finite() || !hi.is_finite() || lo >= hi {
                    return Err(Error::parse(
                        origin,
                        line,
                        format!("sector bounds must be finite with lo < hi, got {lo}:{hi}"),
                    ));
                }
                self.sector = Some((lo, hi));
            }
            other => {
                return Err(Error::parse(origin, line, format!("unknown key `{other}`")));
            }
        }
        Ok(())
    }

    fn finish(self, origin: &str) -> Result<CodebookEntry> {
        if self.weights.is_empty() {
            return Err(Error::parse(
                origin,
                self.header_line,
                format!("entry `{}` has no weights", self.name),
            ));
        }
        let objective = match self.objective_kind.as_deref() {
            None => {
                if self.target.is_some() {
                    return Err(Error::parse(
                        origin,
                        self.header_line,
                        format!("entry `{}` sets target without an objective", self.name),
                    ));
                }
                None
            }
            Some("omni") => {
                if self.target.is_some() {
                    return Err(Error::parse(
                        origin,
                        self.header_line,
                        format!(
                            "entry `{}`: target is only meaningful with objective = max-gain",
                            self.name
                        ),
                    ));
                }
                Some(Objective::OmniRipple)
            }
            Some("max-gain") => {
                let target_deg = self.target.ok_or_else(|| {
                    Error::parse(
                        origin,
                        self.header_line,
                        format!("entry `{}`: objective max-gain needs a target", self.name),
                    )
                })?;
                Some(Objective::MaxGainAt { target_deg })
            }
            Some(_) => unreachable!(),
        };
        Ok(CodebookEntry {
            name: self.name,
            weights: self.weights,
            objective,
            sector: self.sector,
        })
    }
}
