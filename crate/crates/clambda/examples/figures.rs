//! Writes the CSV data behind every figure preset into a directory (default `figures/`).

use clambda::figures::{preset, run_figure, to_csv, PRESETS};
use clambda::{Error, Result};
use std::path::PathBuf;

fn main() -> Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "figures".into()));
    std::fs::create_dir_all(&dir).map_err(|e| Error::Config(e.to_string()))?;
    for name in PRESETS {
        let job = preset(name)?;
        let data = run_figure(&job)?;
        let path = dir.join(format!("{name}.csv"));
        std::fs::write(&path, to_csv(&data)).map_err(|e| Error::Config(e.to_string()))?;
        println!("{:6} {:3} curves x {} points -> {}", name, job.curves.len(), job.grid.points, path.display());
    }
    Ok(())
}
