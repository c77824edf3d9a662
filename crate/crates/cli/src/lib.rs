//! Sweep runner for mixed multihop FSO/RF links.
//!
//! A [`SweepConfig`] names the channel profiles, the power grid and the
//! metric; [`run_sweep`] evaluates every grid point and [`write_outputs`]
//! stores the CSV (and optionally an SVG plot).

pub mod config;
pub mod error;
pub mod output;
pub mod plot;
pub mod profiles;
pub mod sweep;

use std::path::{Path, PathBuf};

pub use config::{Metric, Mode, SweepConfig};
pub use error::CliError;
pub use output::{read_csv, to_csv_string, write_csv};
pub use sweep::{run_sweep, Row, SweepResult};

/// Writes `<dir>/<name>.csv` and, if requested, `<dir>/<name>.svg`.
/// Returns the paths written.
pub fn write_outputs(res: &SweepResult, dir: &Path, plot: bool) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io(dir.to_path_buf(), e))?;
    let csv_path = dir.join(format!("{}.csv", res.meta.name));
    std::fs::write(&csv_path, to_csv_string(res)).map_err(|e| CliError::Io(csv_path.clone(), e))?;
    let mut written = vec![csv_path];
    if plot {
        let svg_path = dir.join(format!("{}.svg", res.meta.name));
        std::fs::write(&svg_path, plot::to_svg(res))
            .map_err(|e| CliError::Io(svg_path.clone(), e))?;
        written.push(svg_path);
    }
    Ok(written)
}

/// Validates, evaluates and writes. Nothing is written if the config is
/// rejected.
pub fn run_to_dir(cfg: &SweepConfig, dir: &Path) -> Result<(SweepResult, Vec<PathBuf>), CliError> {
    let res = run_sweep(cfg)?;
    let paths = write_outputs(&res, dir, cfg.plot)?;
    Ok((res, paths))
}
