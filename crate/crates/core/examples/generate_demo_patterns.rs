//! Regenerates `data/demo_patterns.csv`: the six-port synthetic element
//! pattern set sampled every degree from -90° to +90°.
//!
//! Usage: `cargo run --example generate_demo_patterns -- [OUT_PATH]`

use mmbeam::farfield::{angle_grid, save_pattern_set, synthetic::six_port_demo};
use std::path::PathBuf;

fn main() -> mmbeam::Result<()> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("data/demo_patterns.csv"));
    let patterns = six_port_demo(&angle_grid(-90.0, 90.0, 1.0));
    save_pattern_set(&out, &patterns)?;
    println!("wrote {}", out.display());
    Ok(())
}
