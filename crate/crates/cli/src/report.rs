use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::matrix_file::MatrixFile;
use crate::CliError;

/// Machine-readable record of one invocation. Contains no timestamps, so
/// re-running the same command gives the same bytes.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub inputs_sha256: BTreeMap<String, String>,
    pub results: Value,
    pub verdict: String,
    pub tolerances: BTreeMap<String, f64>,
    pub seed: u64,
}

/// What a command produced: its report, exit code, text for humans and
/// matrix files for `--out`.
pub struct Outcome {
    pub report: RunReport,
    pub exit: u8,
    pub human: String,
    pub artifacts: Vec<(String, MatrixFile)>,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Writes `report.json` and the artifacts into `dir`.
pub fn write_out(dir: &Path, outcome: &Outcome) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let mut files: Vec<(String, String)> = outcome
        .artifacts
        .iter()
        .map(|(name, f)| (name.clone(), f.to_json()))
        .collect();
    files.push(("report.json".into(), outcome.report.to_json()));
    for (name, text) in files {
        let path = dir.join(name);
        std::fs::write(&path, text + "\n").map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

/// `value` to 12 significant digits in fixed notation, e.g. `5.00000000000`.
pub fn sig12(value: f64) -> String {
    if !value.is_finite() {
        return value.to_string();
    }
    let sci = format!("{value:.11e}");
    let exp: i32 = sci.split_once('e').and_then(|(_, e)| e.parse().ok()).unwrap_or(0);
    let decimals = (11 - exp).max(0) as usize;
    format!("{value:.decimals$}")
}
