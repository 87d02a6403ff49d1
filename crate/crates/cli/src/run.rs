//! Serialized form of a run: the manifest that produced it and one record
//! per fit.

use std::path::{Path, PathBuf};

use scurve::data::Strategy;
use scurve::{FitConfig, FitReport};
use serde::{Deserialize, Serialize};

use crate::args::{Emit, Target};
use crate::error::CliError;

pub const REPORT_FILE: &str = "fit_report.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    FitCdf,
    FitTarget,
    Sweep,
    Report,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Input {
    /// The iris data shipped with the library.
    BundledIris,
    File {
        path: PathBuf,
    },
    Target {
        target: Target,
        intervals: Vec<(f64, f64)>,
        points: usize,
    },
}

/// Everything needed to rerun a command; echoed into every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: CommandKind,
    pub input: Input,
    pub attributes: Vec<String>,
    pub species: Vec<String>,
    pub strategy: Strategy,
    pub zero_points: Vec<f64>,
    pub n_values: Vec<usize>,
    /// Template configuration; each fit overrides `n`.
    pub config: FitConfig,
    pub out: PathBuf,
    pub emit: Vec<Emit>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Source {
    Dataset {
        attribute: String,
        species: String,
        zero_points: Vec<f64>,
    },
    Target {
        target: Target,
        interval: (f64, f64),
        points: usize,
    },
}

impl Source {
    /// Table grouping: the attribute, or the target and interval.
    pub fn group(&self) -> String {
        match self {
            Source::Dataset { attribute, .. } => attribute.clone(),
            Source::Target {
                target, interval, ..
            } => {
                format!("{}_{}_{}", target_name(*target), interval.0, interval.1)
            }
        }
    }

    /// Column heading inside a group.
    pub fn member(&self) -> String {
        match self {
            Source::Dataset { species, .. } => species.clone(),
            Source::Target { .. } => String::new(),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Source::Dataset {
                attribute, species, ..
            } => format!("{attribute}/{species}"),
            Source::Target {
                target, interval, ..
            } => {
                format!("{}[{},{}]", target_name(*target), interval.0, interval.1)
            }
        }
    }
}

pub fn target_name(t: Target) -> &'static str {
    match t {
        Target::Sigmoid => "sigmoid",
        Target::Erf => "erf",
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitRecord {
    pub source: Source,
    pub n: usize,
    /// Inflection points the components were anchored at.
    pub inflections: Vec<(f64, f64)>,
    /// Absent when the fit could not be set up or evaluated.
    pub report: Option<FitReport>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunFile {
    pub manifest: RunManifest,
    pub fits: Vec<FitRecord>,
}

impl RunFile {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("run files serialize");
        s.push('\n');
        s
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
    }
}

/// All `fit_report.json` files under `root`, in path order.
pub fn find_reports(root: &Path) -> Result<Vec<PathBuf>, CliError> {
    if !root.is_dir() {
        return Err(CliError::Input(format!(
            "{} is not a directory",
            root.display()
        )));
    }
    let mut found = Vec::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        let entries = std::fs::read_dir(&dir)
            .map_err(|e| CliError::Input(format!("{}: {e}", dir.display())))?;
        for entry in entries {
            let path = entry.map_err(|e| CliError::Input(e.to_string()))?.path();
            if path.is_dir() {
                stack.push(path);
            } else if path.file_name().is_some_and(|n| n == REPORT_FILE) {
                found.push(path);
            }
        }
    }
    found.sort();
    Ok(found)
}
