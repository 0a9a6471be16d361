//! Experiment harness for `greyvar-core`: flat JSON configurations, a
//! thread-pool executor, path and report file formats, and the runners
//! behind the `greyvar` command.
//!
//! Results depend only on the configuration and its `master_seed`; the
//! thread count changes wall time and nothing else.

pub mod commands;
pub mod config;
pub mod error;
pub mod exec;
pub mod io;
pub mod presets;

use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use greyvar_core::{Executor, SamplePath};
use serde::Serialize;

use crate::commands::{DiscriminateResults, EstimateResults, SampleResults, ValidateResults, VariationResults};
pub use crate::config::{Command, ExperimentConfig, Format};
pub use crate::error::{CliError, Result};
pub use crate::exec::Pool;
use crate::io::{fmt_f64, write_atomic, BundleHeader};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Results {
    Sample(SampleResults),
    Variation(VariationResults),
    Estimate(EstimateResults),
    Discriminate(DiscriminateResults),
    Validate(ValidateResults),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub command: Command,
    pub version: String,
    pub wall_time_s: f64,
    pub config: ExperimentConfig,
    pub results: Results,
}

impl RunReport {
    /// The part of the report that must be identical across reruns.
    pub fn results_json(&self) -> Vec<u8> {
        serde_json::to_vec(&self.results).expect("results serialize")
    }

    pub fn to_json(&self) -> Vec<u8> {
        let mut v = serde_json::to_vec_pretty(self).expect("report serializes");
        v.push(b'\n');
        v
    }

    fn comments(&self) -> Vec<String> {
        vec![
            format!("greyvar {} {}", self.version, self.command.name()),
            format!("wall_time_s={}", fmt_f64(self.wall_time_s)),
            format!(
                "config={}",
                serde_json::to_string(&self.config).expect("config serializes")
            ),
        ]
    }

    /// Result table as CSV, preceded by comment lines with the version,
    /// wall time and config echo. `None` for `sample`, whose CSV output is
    /// one file per path.
    pub fn to_csv(&self) -> Option<Vec<u8>> {
        let table = match &self.results {
            Results::Sample(_) => return None,
            Results::Variation(r) => r.table(),
            Results::Estimate(r) => r.table(),
            Results::Discriminate(r) => r.confusion.table(),
            Results::Validate(r) => r.table(),
        };
        Some(table.to_csv(&self.comments()))
    }

    /// Whether a `validate` run passed every check; `true` otherwise.
    pub fn passed(&self) -> bool {
        match &self.results {
            Results::Validate(v) => v.pass,
            _ => true,
        }
    }
}

pub struct Outcome {
    pub report: RunReport,
    /// Sampled paths, kept for the path files of `sample`.
    pub paths: Vec<SamplePath>,
}

/// Resolves `config` for `cmd` and runs it.
pub fn run<E: Executor + ?Sized>(cmd: Command, config: &ExperimentConfig, exec: &E) -> Result<Outcome> {
    let start = Instant::now();
    let (filled, plan) = config.resolve(cmd)?;
    let mut paths = Vec::new();
    let results = match plan {
        config::Plan::Sample(p) => {
            let (r, ps) = commands::sample(&p, exec)?;
            paths = ps;
            Results::Sample(r)
        }
        config::Plan::Variation(p) => Results::Variation(commands::variation(&p, exec)?),
        config::Plan::Estimate(p) => Results::Estimate(commands::estimate(&p, exec)?),
        config::Plan::Discriminate(p) => Results::Discriminate(commands::discriminate_batch(&p, exec)?),
        config::Plan::Validate(p) => Results::Validate(commands::validate(&p, exec)?),
    };
    Ok(Outcome {
        report: RunReport {
            command: cmd,
            version: VERSION.into(),
            wall_time_s: start.elapsed().as_secs_f64(),
            config: filled,
            results,
        },
        paths,
    })
}

/// Where [`write_outcome`] put its output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Written {
    Stdout(Vec<u8>),
    Files(Vec<PathBuf>),
}

/// Writes the outcome in the configured format to the configured path,
/// or returns the bytes for stdout when no path is set.
///
/// `sample` with CSV output needs a directory: it receives one
/// `path_<stream_id>.csv` per path plus the binary bundle `run.gvb`.
pub fn write_outcome(outcome: &Outcome) -> Result<Written> {
    let report = &outcome.report;
    let format = report.config.format.unwrap_or_default();
    let out = report.config.out.clone();
    if let (Results::Sample(s), Format::Csv) = (&report.results, format) {
        let dir = out.ok_or_else(|| CliError::usage("sample with csv output needs --out DIR"))?;
        fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
        let mut files = Vec::new();
        for p in &outcome.paths {
            let name = dir.join(format!("path_{:06}.csv", p.seed().map_or(0, |s| s.stream_id)));
            write_atomic(&name, &io::path_to_csv(p))?;
            files.push(name);
        }
        let header = BundleHeader {
            grid: s.grid.clone(),
            resolution: s.resolution,
            alpha: s.alpha,
            beta: s.beta,
            master_seed: s.master_seed,
            method: s.method.clone(),
        };
        let name = dir.join("run.gvb");
        write_atomic(&name, &io::bundle_to_bytes(&header, &outcome.paths)?)?;
        files.push(name);
        return Ok(Written::Files(files));
    }
    let bytes = match format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv().expect("non-sample results have a table"),
    };
    match out {
        Some(path) => {
            write_atomic(&path, &bytes)?;
            Ok(Written::Files(vec![path]))
        }
        None => Ok(Written::Stdout(bytes)),
    }
}
