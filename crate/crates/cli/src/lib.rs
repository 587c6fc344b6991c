//! Experiment runner for the `infogeom` library.

pub mod catalog;
pub mod config;
pub mod error;
pub mod experiments;
pub mod table;

use std::path::{Path, PathBuf};
use std::time::Instant;

use config::ExperimentConfig;
use error::{CliError, Result};
use table::ResultTable;

/// Everything `run` needs besides the file system.
#[derive(Debug, Clone, Default)]
pub struct RunRequest {
    pub experiment: Option<String>,
    pub config_text: Option<String>,
    pub overrides: Vec<String>,
    pub digits: usize,
}

pub struct RunOutput {
    pub config: ExperimentConfig,
    pub table: ResultTable,
    pub wall_time_s: f64,
}

impl RunOutput {
    pub fn csv(&self) -> String {
        self.table.to_csv(self.config.digits)
    }

    pub fn json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.table.to_json(&self.config, self.wall_time_s))
            .expect("JSON values serialize");
        s.push('\n');
        s
    }
}

/// Resolves the experiment name from the argument or the `experiment` key,
/// validates the parameters and runs it.
pub fn run(req: &RunRequest) -> Result<RunOutput> {
    let mut params = config::merge(req.config_text.as_deref(), &req.overrides)?;
    let from_file = params.remove("experiment");
    let name = match (&req.experiment, from_file) {
        (Some(a), Some(b)) if *a != b => {
            return Err(CliError::config(
                Some("experiment"),
                format!("command line names '{a}' but config names '{b}'"),
            ))
        }
        (Some(a), _) => a.clone(),
        (None, Some(b)) => b,
        (None, None) => return Err(CliError::config(Some("experiment"), "no experiment given")),
    };
    let exp = catalog::find(&name)
        .ok_or_else(|| CliError::config(Some("experiment"), format!("unknown experiment '{name}'")))?;
    let config = ExperimentConfig::validate(exp.name, exp.params, &params, req.digits)?;
    let start = Instant::now();
    let table = (exp.run)(&config)?;
    Ok(RunOutput {
        config,
        table,
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

/// JSON sidecar path: the output path with a `.json` extension.
pub fn sidecar_path(out: &Path) -> PathBuf {
    let p = out.with_extension("json");
    if p == out {
        let mut s = out.as_os_str().to_owned();
        s.push(".meta.json");
        PathBuf::from(s)
    } else {
        p
    }
}

pub fn write_outputs(output: &RunOutput, out: &Path) -> Result<PathBuf> {
    let io = |path: &Path| {
        let context = format!("writing {}", path.display());
        move |source| CliError::Io { context, source }
    };
    std::fs::write(out, output.csv()).map_err(io(out))?;
    let side = sidecar_path(out);
    std::fs::write(&side, output.json()).map_err(io(&side))?;
    Ok(side)
}
