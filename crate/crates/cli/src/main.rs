//! `mmbeam` — beam weight synthesis, hardware calibration, and far-field
//! prediction for a multi-port antenna driven by a multi-channel SDR.
//!
//! The subcommands mirror the measurement workflow: rank and select the
//! antenna ports worth driving, synthesize precoding weights, invert the
//! measured hardware impairments, compose the actual SDR settings, and
//! finally predict and score radiation patterns.
//!
//! Every output file gains a sibling `<name>.manifest` recording the exact
//! invocation, tool version, seed, and a digest of every input consumed.
//! Reruns with identical inputs produce byte-identical outputs (manifests
//! differ only in their timestamp).
//!
//! Exit codes: 0 success, 2 validation or parse failure (including missing
//! input files), 3 filesystem trouble.

mod config;
mod manifest;

use clap::{Parser, Subcommand, ValueEnum};
use manifest::RunManifest;
use mmbeam::calibration::{
    compose_all, invert_ratio, load_ratio_rows, save_settings, FeedNetworkTable,
    MeasuredRatioTable, PortMap, RatioIndexing, SdrCalTable,
};
use mmbeam::codebook::{Codebook, CodebookEntry};
use mmbeam::compare::compare;
use mmbeam::error::{Error, Result};
use mmbeam::farfield::{angle_grid, load_cut, load_pattern_set, predict_cut, save_cut, ElementPatternSet};
use mmbeam::optimizer::{optimize, select_ports, Objective, SelectionReport};
use mmbeam::AntennaPort;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "mmbeam",
    version,
    about = "Beam weight synthesis, hardware calibration, and pattern prediction \
             for a multi-port antenna"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Synthesize a precoding weight vector and store it in a codebook
    Optimize(OptimizeArgs),
    /// Rank ports by average optimized power and report the weakest
    SelectPorts(SelectPortsArgs),
    /// Invert measured wave-quantity ratios into correction factors
    InvertRatios(InvertRatiosArgs),
    /// Multiply a codebook entry through the hardware correction chain
    Compose(ComposeArgs),
    /// Predict the far-field gain cut of a codebook entry
    Predict(PredictArgs),
    /// Score a predicted pattern against a measured cut
    Compare(CompareArgs),
    /// Emit plot-ready gain tables for codebook entries
    PlotData(PlotDataArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ObjectiveKind {
    /// Minimize gain ripple over the sector
    Omni,
    /// Maximize gain toward --target
    MaxGain,
}

#[derive(clap::Args)]
struct OptimizeArgs {
    /// Element pattern file
    #[arg(long)]
    patterns: PathBuf,
    /// Antenna ports to drive, e.g. 2,4,5,6 (default: all in the file)
    #[arg(long, value_delimiter = ',')]
    ports: Option<Vec<u32>>,
    #[arg(long, value_enum)]
    objective: ObjectiveKind,
    /// Steering angle in degrees (max-gain only)
    #[arg(long, allow_hyphen_values = true)]
    target: Option<f64>,
    /// Optimization sector, `lo:hi` degrees (default -45:45)
    #[arg(long, allow_hyphen_values = true)]
    sector: Option<String>,
    /// Random seed for the swarm
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Codebook file to create or update
    #[arg(long, default_value = "codebook.txt")]
    codebook: PathBuf,
    /// Entry name (default: `omni` or `steer<target>`)
    #[arg(long)]
    entry: Option<String>,
}

#[derive(clap::Args)]
struct SelectPortsArgs {
    #[arg(long)]
    patterns: PathBuf,
    /// Candidate ports (default: all in the file)
    #[arg(long, value_delimiter = ',')]
    ports: Option<Vec<u32>>,
    #[arg(long, value_enum, default_value = "omni")]
    objective: ObjectiveKind,
    #[arg(long, allow_hyphen_values = true)]
    target: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    sector: Option<String>,
    /// Independent optimization runs to average
    #[arg(long, default_value_t = 50)]
    runs: usize,
    /// How many of the weakest ports to drop
    #[arg(long, default_value_t = 2)]
    drop: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Selection report file
    #[arg(long)]
    out: PathBuf,
}

#[derive(clap::Args)]
struct InvertRatiosArgs {
    /// Measured wave-quantity ratio file
    #[arg(long)]
    ratios: PathBuf,
    /// Correction table to write
    #[arg(long)]
    out: PathBuf,
}

#[derive(clap::Args)]
struct ComposeArgs {
    #[arg(long)]
    codebook: PathBuf,
    /// Codebook entry to compose
    #[arg(long)]
    entry: String,
    #[arg(long)]
    ratios: PathBuf,
    /// Feed network phase file
    #[arg(long)]
    feed: PathBuf,
    /// SDR calibration coefficient file
    #[arg(long)]
    sdrcal: PathBuf,
    /// Antenna-to-SDR port map file (default: 2,4,5,6 onto 0..3)
    #[arg(long)]
    portmap: Option<PathBuf>,
    /// SDR settings file to write
    #[arg(long)]
    out: PathBuf,
}

#[derive(clap::Args)]
struct PredictArgs {
    #[arg(long)]
    patterns: PathBuf,
    #[arg(long)]
    codebook: PathBuf,
    #[arg(long)]
    entry: String,
    /// Angular range `lo:hi` (default: the entry's sector, else the full
    /// pattern span)
    #[arg(long, allow_hyphen_values = true)]
    sector: Option<String>,
    /// Pattern cut file to write
    #[arg(long)]
    out: PathBuf,
}

#[derive(clap::Args)]
struct CompareArgs {
    #[arg(long)]
    patterns: PathBuf,
    #[arg(long)]
    codebook: PathBuf,
    #[arg(long)]
    entry: String,
    /// Measured pattern cut file
    #[arg(long)]
    measured: PathBuf,
    /// Scoring sector `lo:hi` (default: the entry's sector, else -45:45)
    #[arg(long, allow_hyphen_values = true)]
    sector: Option<String>,
    /// Also write the report to this file
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct PlotDataArgs {
    #[arg(long)]
    patterns: PathBuf,
    #[arg(long)]
    codebook: PathBuf,
    /// Single entry to plot (default: every entry)
    #[arg(long)]
    entry: Option<String>,
    /// Angular range `lo:hi` (default: full pattern span)
    #[arg(long, allow_hyphen_values = true)]
    sector: Option<String>,
    /// Directory for the per-entry tables
    #[arg(long)]
    out: PathBuf,
}

fn main() {
    // Die quietly when a downstream pipe (`mmbeam ... | head`) closes early
    // instead of panicking mid-print.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Optimize(args) => cmd_optimize(args),
        Cmd::SelectPorts(args) => cmd_select_ports(args),
        Cmd::InvertRatios(args) => cmd_invert_ratios(args),
        Cmd::Compose(args) => cmd_compose(args),
        Cmd::Predict(args) => cmd_predict(args),
        Cmd::Compare(args) => cmd_compare(args),
        Cmd::PlotData(args) => cmd_plot_data(args),
    };
    if let Err(e) = result {
        eprintln!("error: {e}");
        // Missing inputs are a caller mistake (2); everything else on the
        // Io path is real filesystem trouble (3).
        let code = match &e {
            Error::Io { .. } if !e.is_not_found() => 3,
            _ => 2,
        };
        std::process::exit(code);
    }
}

// ---------------------------------------------------------------------------
// Shared argument plumbing
// ---------------------------------------------------------------------------

pub(crate) fn parse_sector(text: &str) -> Result<(f64, f64)> {
    let (lo, hi) = text
        .split_once(':')
        .ok_or_else(|| Error::validation(format!("sector `{text}` is not `lo:hi`")))?;
    let parse = |s: &str| -> Result<f64> {
        s.trim()
            .parse()
            .map_err(|_| Error::validation(format!("sector bound `{s}` is not a number")))
    };
    let (lo, hi) = (parse(lo)?, parse(hi)?);
    if !lo.is_finite() || !hi.is_finite() || lo >= hi {
        return Err(Error::validation(format!(
            "sector bounds must be finite with lo < hi, got {lo}:{hi}"
        )));
    }
    Ok((lo, hi))
}

fn resolve_ports(flag: &Option<Vec<u32>>, patterns: &ElementPatternSet) -> Vec<AntennaPort> {
    match flag {
        Some(ids) => {
            let mut ports: Vec<AntennaPort> = ids.iter().map(|&p| AntennaPort(p)).collect();
            ports.sort();
            ports
        }
        None => patterns.ports(),
    }
}

fn resolve_objective(kind: ObjectiveKind, target: Option<f64>) -> Result<Objective> {
    match kind {
        ObjectiveKind::Omni => match target {
            Some(_) => Err(Error::validation(
                "--target is only meaningful with --objective max-gain",
            )),
            None => Ok(Objective::OmniRipple),
        },
        ObjectiveKind::MaxGain => {
            let target_deg = target.ok_or_else(|| {
                Error::validation("--objective max-gain requires --target")
            })?;
            if !target_deg.is_finite() {
                return Err(Error::validation("--target must be finite"));
            }
            Ok(Objective::MaxGainAt { target_deg })
        }
    }
}

fn default_entry_name(objective: Objective) -> String {
    match objective {
        Objective::OmniRipple => "omni".to_string(),
        Objective::MaxGainAt { target_deg } => format!("steer{target_deg}"),
    }
}

/// Loads a codebook, forwarding power warnings to standard error.
fn load_codebook(path: &Path) -> Result<Codebook> {
    let (book, warnings) = Codebook::load(path)?;
    for w in warnings {
        eprintln!("warning: {w}");
    }
    Ok(book)
}

fn find_entry<'b>(book: &'b Codebook, name: &str, path: &Path) -> Result<&'b CodebookEntry> {
    book.entry(name).ok_or_else(|| {
        let known: Vec<&str> = book.entries.iter().map(|e| e.name.as_str()).collect();
        Error::validation(format!(
            "no entry `{name}` in {} (entries: {})",
            path.display(),
            known.join(", ")
        ))
    })
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn describe_score(objective: Objective, score: f64) -> String {
    match objective {
        Objective::OmniRipple => format!("sector ripple {score} dB"),
        Objective::MaxGainAt { target_deg } => {
            format!("gain {score} dB toward {target_deg}°")
        }
    }
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

fn cmd_optimize(args: OptimizeArgs) -> Result<()> {
    let run_config = config::load_run_config()?;
    let mut manifest = RunManifest::new(args.seed);
    if let Some(src) = &run_config.source {
        manifest.record_input(src)?;
    }

    let patterns = load_pattern_set(&args.patterns)?;
    manifest.record_input(&args.patterns)?;
    let ports = resolve_ports(&args.ports, &patterns);
    let objective = resolve_objective(args.objective, args.target)?;
    let sector = match &args.sector {
        Some(s) => parse_sector(s)?,
        None => run_config.pso.sector,
    };

    let mut book = if args.codebook.exists() {
        manifest.record_input(&args.codebook)?;
        load_codebook(&args.codebook)?
    } else {
        Codebook::default()
    };

    let mut pso = run_config.pso;
    pso.sector = sector;
    pso.rng_seed = args.seed;
    let (weights, score) = optimize(&patterns, &ports, objective, &pso)?;

    let name = args.entry.unwrap_or_else(|| default_entry_name(objective));
    println!(
        "entry `{name}`: {} over [{}, {}]°",
        describe_score(objective, score),
        sector.0,
        sector.1
    );
    for (port, w) in &weights {
        println!("  port {port} = {w}");
    }

    book.upsert(CodebookEntry {
        name,
        weights,
        objective: Some(objective),
        sector: Some(sector),
    });
    book.save(&args.codebook)?;
    manifest.write_beside(&args.codebook)?;
    println!("codebook written to {}", args.codebook.display());
    Ok(())
}

fn render_selection(report: &SelectionReport, objective: Objective) -> String {
    let join = |ports: &[AntennaPort]| {
        ports
            .iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join(",")
    };
    let mut out = String::new();
    out.push_str(&format!("runs = {}\n", report.runs));
    out.push_str(&format!("objective = {}\n", objective.kind_str()));
    out.push_str(&format!("dropped = {}\n", join(&report.dropped)));
    out.push_str(&format!("retained = {}\n", join(&report.retained)));
    for (port, power) in &report.avg_power {
        out.push_str(&format!("avg_power_{port} = {power}\n"));
    }
    out
}

fn cmd_select_ports(args: SelectPortsArgs) -> Result<()> {
    let run_config = config::load_run_config()?;
    let mut manifest = RunManifest::new(args.seed);
    if let Some(src) = &run_config.source {
        manifest.record_input(src)?;
    }

    let patterns = load_pattern_set(&args.patterns)?;
    manifest.record_input(&args.patterns)?;
    let ports = resolve_ports(&args.ports, &patterns);
    let objective = resolve_objective(args.objective, args.target)?;

    let mut pso = run_config.pso;
    if let Some(s) = &args.sector {
        pso.sector = parse_sector(s)?;
    }
    pso.rng_seed = args.seed;

    let report = select_ports(&patterns, &ports, args.runs, args.drop, objective, &pso)?;
    let text = render_selection(&report, objective);
    print!("{text}");
    write_text(&args.out, &text)?;
    manifest.write_beside(&args.out)?;
    println!("selection report written to {}", args.out.display());
    Ok(())
}

fn cmd_invert_ratios(args: InvertRatiosArgs) -> Result<()> {
    let mut manifest = RunManifest::new(0);
    let raw = load_ratio_rows(&args.ratios)?;
    manifest.record_input(&args.ratios)?;
    // Inversion is row-local, but insist on a well-formed table (reference
    // row, resolvable port labels) so corrections inherit its guarantees.
    MeasuredRatioTable::from_rows(&raw)?;

    let mut out = String::new();
    out.push_str(match raw.indexing {
        RatioIndexing::PathOneBased => "# indexing = path\n",
        RatioIndexing::SdrZeroBased => "# indexing = sdr\n",
    });
    if let Some(f) = raw.frequency_hz {
        out.push_str(&format!("# frequency_hz = {f}\n"));
    }
    out.push_str("port,amplitude,phase_deg\n");
    for row in &raw.rows {
        let c = invert_ratio(row.ratio)?;
        out.push_str(&format!(
            "{},{},{}\n",
            row.port_label,
            c.amplitude(),
            c.phase_deg()
        ));
        println!("port {}: {} -> correction {}", row.port_label, row.ratio, c);
    }
    write_text(&args.out, &out)?;
    manifest.write_beside(&args.out)?;
    println!("corrections written to {}", args.out.display());
    Ok(())
}

fn cmd_compose(args: ComposeArgs) -> Result<()> {
    let mut manifest = RunManifest::new(0);
    let book = load_codebook(&args.codebook)?;
    manifest.record_input(&args.codebook)?;
    let entry = find_entry(&book, &args.entry, &args.codebook)?;

    let ratios = MeasuredRatioTable::load(&args.ratios)?;
    manifest.record_input(&args.ratios)?;
    let feed = FeedNetworkTable::load(&args.feed)?;
    manifest.record_input(&args.feed)?;
    let sdrcal = SdrCalTable::load(&args.sdrcal)?;
    manifest.record_input(&args.sdrcal)?;
    let map = match &args.portmap {
        Some(path) => {
            let map = PortMap::load(path)?;
            manifest.record_input(path)?;
            map
        }
        None => PortMap::default_mapping(),
    };

    let composed = compose_all(&entry.weights, &ratios, &feed, &sdrcal, &map)?;
    for w in &composed.warnings {
        eprintln!("warning: {w}");
    }
    for (port, setting) in &composed.settings {
        println!("sdr port {port} = {setting}");
    }

    let meta = vec![
        ("entry".to_string(), entry.name.clone()),
        ("port_map".to_string(), map.describe()),
    ];
    save_settings(&args.out, &composed.settings, &meta)?;
    manifest.write_beside(&args.out)?;
    println!("settings written to {}", args.out.display());
    Ok(())
}

fn cmd_predict(args: PredictArgs) -> Result<()> {
    let run_config = config::load_run_config()?;
    let mut manifest = RunManifest::new(0);
    if let Some(src) = &run_config.source {
        manifest.record_input(src)?;
    }

    let patterns = load_pattern_set(&args.patterns)?;
    manifest.record_input(&args.patterns)?;
    let book = load_codebook(&args.codebook)?;
    manifest.record_input(&args.codebook)?;
    let entry = find_entry(&book, &args.entry, &args.codebook)?;

    let sector = match &args.sector {
        Some(s) => parse_sector(s)?,
        None => entry.sector.unwrap_or_else(|| patterns.span()),
    };
    let grid = angle_grid(sector.0, sector.1, run_config.pso.grid_step_deg);
    let cut = predict_cut(&patterns, &entry.weights, &grid, entry.name.clone())?;
    save_cut(&args.out, &cut)?;
    manifest.write_beside(&args.out)?;
    println!(
        "predicted {} samples over [{}, {}]° for `{}`, written to {}",
        grid.len(),
        sector.0,
        sector.1,
        entry.name,
        args.out.display()
    );
    Ok(())
}

fn cmd_compare(args: CompareArgs) -> Result<()> {
    let run_config = config::load_run_config()?;
    let mut manifest = RunManifest::new(0);
    if let Some(src) = &run_config.source {
        manifest.record_input(src)?;
    }

    let patterns = load_pattern_set(&args.patterns)?;
    manifest.record_input(&args.patterns)?;
    let book = load_codebook(&args.codebook)?;
    manifest.record_input(&args.codebook)?;
    let entry = find_entry(&book, &args.entry, &args.codebook)?;
    let measured = load_cut(&args.measured)?;
    manifest.record_input(&args.measured)?;

    let sector = match &args.sector {
        Some(s) => parse_sector(s)?,
        None => entry.sector.unwrap_or((-45.0, 45.0)),
    };
    let grid = angle_grid(sector.0, sector.1, run_config.pso.grid_step_deg);
    let predicted = predict_cut(&patterns, &entry.weights, &grid, entry.name.clone())?;
    let report = compare(&predicted, &measured, sector)?;

    println!("{report}");
    print!("{}", report.key_value_lines());
    if let Some(out) = &args.out {
        write_text(out, &report.key_value_lines())?;
        manifest.write_beside(out)?;
        println!("report written to {}", out.display());
    }
    Ok(())
}

fn cmd_plot_data(args: PlotDataArgs) -> Result<()> {
    let run_config = config::load_run_config()?;
    let mut manifest = RunManifest::new(0);
    if let Some(src) = &run_config.source {
        manifest.record_input(src)?;
    }

    let patterns = load_pattern_set(&args.patterns)?;
    manifest.record_input(&args.patterns)?;
    let book = load_codebook(&args.codebook)?;
    manifest.record_input(&args.codebook)?;

    let entries: Vec<&CodebookEntry> = match &args.entry {
        Some(name) => vec![find_entry(&book, name, &args.codebook)?],
        None => book.entries.iter().collect(),
    };
    if entries.is_empty() {
        return Err(Error::validation(format!(
            "{} has no entries to plot",
            args.codebook.display()
        )));
    }

    let sector = match &args.sector {
        Some(s) => parse_sector(s)?,
        None => patterns.span(),
    };
    let grid = angle_grid(sector.0, sector.1, run_config.pso.grid_step_deg);

    std::fs::create_dir_all(&args.out).map_err(|e| Error::io(&args.out, e))?;
    for entry in entries {
        if entry.name.contains(['/', '\\']) {
            return Err(Error::validation(format!(
                "entry name `{}` cannot be used as a file name",
                entry.name
            )));
        }
        let cut = predict_cut(&patterns, &entry.weights, &grid, entry.name.clone())?;
        let path = args.out.join(format!("{}.csv", entry.name));
        save_cut(&path, &cut)?;
        println!("wrote {}", path.display());
    }
    manifest.write_to(&args.out.join("plot-data.manifest"))?;
    Ok(())
}
