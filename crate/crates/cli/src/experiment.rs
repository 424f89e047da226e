//! Single experiments and cartesian sweeps.

use std::io::Write;
use std::path::{Path, PathBuf};

use fracoga::IterationRecord64;
use rayon::prelude::*;

use crate::config::{ExperimentConfig, OutputFormat, SweepConfig};
use crate::error::{exit, CliError, Result};
use crate::table;

/// Writes `contents` through a temporary file in the destination directory
/// and renames it into place.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    std::fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(|e| CliError::io(&dir, e))?;
    tmp.write_all(contents.as_bytes())
        .map_err(|e| CliError::io(tmp.path(), e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}

/// `table.csv` -> `table.full.csv`.
pub fn sidecar_path(path: &Path) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "table".into());
    path.with_file_name(format!("{stem}.full.csv"))
}

/// Paths written by [`run_experiment`].
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutput {
    pub table: PathBuf,
    pub sidecar: PathBuf,
    pub rows: Vec<IterationRecord64>,
}

/// Solves one configuration and writes its table plus the full-precision
/// sidecar.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    let solve = config.solve_config()?;
    let rows = fracoga::run(&solve)?;
    let rendered = match config.output_format {
        OutputFormat::Csv => table::to_csv(&rows),
        OutputFormat::Markdown => table::to_markdown(&rows),
    };
    let sidecar = sidecar_path(&config.output_path);
    write_atomic(&config.output_path, &rendered)?;
    write_atomic(&sidecar, &table::to_full_csv(&rows))?;
    Ok(ExperimentOutput {
        table: config.output_path.clone(),
        sidecar,
        rows,
    })
}

/// Completion status of one sweep cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CellStatus {
    pub alpha: f64,
    pub relu_power: u32,
    pub grid_intervals: usize,
    pub file: String,
    pub error: Option<String>,
    pub exit_code: i32,
}

pub const INDEX_FILE: &str = "index.csv";

fn index_csv(cells: &[CellStatus]) -> String {
    let mut out = String::from("alpha,k,M,file,status,message\n");
    for c in cells {
        let (status, msg) = match &c.error {
            None => ("ok", String::new()),
            Some(e) => ("failed", e.replace([',', '\n'], ";")),
        };
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            c.alpha, c.relu_power, c.grid_intervals, c.file, status, msg
        ));
    }
    out
}

/// Runs every cell, in parallel unless `sequential`. Failed cells are
/// recorded in the index and the remaining cells still run.
pub fn run_sweep(sweep: &SweepConfig, out_dir: &Path, sequential: bool) -> Result<Vec<CellStatus>> {
    std::fs::create_dir_all(out_dir).map_err(|e| CliError::io(out_dir, e))?;
    let cells = sweep.cells(out_dir);
    let run_cell = |cfg: &ExperimentConfig| {
        let result = run_experiment(cfg);
        CellStatus {
            alpha: cfg.alpha,
            relu_power: cfg.relu_power,
            grid_intervals: cfg.grid_intervals,
            file: cfg
                .output_path
                .file_name()
                .map(|f| f.to_string_lossy().into_owned())
                .unwrap_or_default(),
            exit_code: result
                .as_ref()
                .map_or_else(|e| e.exit_code(), |_| exit::SUCCESS),
            error: result.err().map(|e| e.to_string()),
        }
    };
    let statuses: Vec<CellStatus> = if sequential {
        cells.iter().map(run_cell).collect()
    } else {
        cells.par_iter().map(run_cell).collect()
    };
    write_atomic(&out_dir.join(INDEX_FILE), &index_csv(&statuses))?;
    let failed: Vec<&CellStatus> = statuses.iter().filter(|c| c.error.is_some()).collect();
    if !failed.is_empty() {
        let code = failed
            .iter()
            .map(|c| c.exit_code)
            .max()
            .unwrap_or(exit::VALIDATION);
        return Err(CliError::SweepFailed {
            failed: failed.len(),
            code,
        });
    }
    Ok(statuses)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sidecar_naming() {
        assert_eq!(
            sidecar_path(Path::new("out/t.csv")),
            PathBuf::from("out/t.full.csv")
        );
        assert_eq!(sidecar_path(Path::new("t.md")), PathBuf::from("t.full.csv"));
    }

    #[test]
    fn atomic_write_replaces_contents() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("nested/file.csv");
        write_atomic(&p, "first\n").unwrap();
        write_atomic(&p, "second\n").unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "second\n");
        assert_eq!(std::fs::read_dir(p.parent().unwrap()).unwrap().count(), 1);
    }

    #[test]
    fn index_escapes_messages() {
        let s = index_csv(&[CellStatus {
            alpha: 1.0,
            relu_power: 1,
            grid_intervals: 10,
            file: "t.csv".into(),
            error: Some("bad, worse\nworst".into()),
            exit_code: 1,
        }]);
        assert_eq!(
            s.lines().nth(1).unwrap(),
            "1,1,10,t.csv,failed,bad; worse;worst"
        );
    }
}
