//! Flat `key = value` experiment configuration.
//!
//! One pair per line, `#` starts a comment, lists are comma separated:
//!
//! ```text
//! # alpha = 2 reduces the operator to -u''
//! alpha = 1.5
//! relu_power = 1
//! grid_intervals = 1000      # M intervals, M-1 interior points
//! max_neurons = 64
//! bias_range = -1.1, 1.1
//! checkpoints = 2, 4, 8, 16, 32, 64
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use fracoga::oga::default_checkpoints;
use fracoga::{DictionaryGrid, FractionalOrder, Grid, NormWeighting, SolveConfig};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Markdown,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "csv" => Ok(Self::Csv),
            "markdown" | "md" => Ok(Self::Markdown),
            _ => Err(format!("expected `csv` or `markdown`, got `{s}`")),
        }
    }
}

impl OutputFormat {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Csv => "csv",
            Self::Markdown => "markdown",
        }
    }
}

fn parse_weighting(s: &str) -> std::result::Result<NormWeighting, String> {
    match s {
        "raw" => Ok(NormWeighting::Raw),
        "h_weighted" => Ok(NormWeighting::HWeighted),
        _ => Err(format!("expected `raw` or `h_weighted`, got `{s}`")),
    }
}

fn weighting_str(w: NormWeighting) -> &'static str {
    match w {
        NormWeighting::Raw => "raw",
        NormWeighting::HWeighted => "h_weighted",
    }
}

/// Parsed `key = value` pairs with their line numbers.
#[derive(Debug, Default)]
struct Document {
    entries: BTreeMap<String, (usize, String)>,
}

impl Document {
    fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| CliError::Syntax {
                line,
                message: format!("expected `key = value`, got `{content}`"),
            })?;
            let key = key.trim();
            if key.is_empty() {
                return Err(CliError::Syntax {
                    line,
                    message: "empty key".into(),
                });
            }
            if entries
                .insert(key.to_string(), (line, value.trim().to_string()))
                .is_some()
            {
                return Err(CliError::Syntax {
                    line,
                    message: format!("duplicate key `{key}`"),
                });
            }
        }
        Ok(Self { entries })
    }

    fn take(&mut self, key: &str) -> Option<String> {
        self.entries.remove(key).map(|(_, v)| v)
    }

    fn required<T: FromStr>(&mut self, key: &str) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        let v = self
            .take(key)
            .ok_or_else(|| CliError::field(key, "missing required key"))?;
        parse_value(key, &v)
    }

    fn optional<T: FromStr>(&mut self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        self.take(key).map(|v| parse_value(key, &v)).transpose()
    }

    fn list<T: FromStr>(&mut self, key: &str) -> Result<Option<Vec<T>>>
    where
        T::Err: std::fmt::Display,
    {
        self.take(key).map(|v| parse_list(key, &v)).transpose()
    }

    fn finish(self) -> Result<()> {
        match self.entries.into_iter().next() {
            Some((key, (line, _))) => Err(CliError::Syntax {
                line,
                message: format!("unknown key `{key}`"),
            }),
            None => Ok(()),
        }
    }
}

fn parse_value<T: FromStr>(key: &str, v: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    v.parse::<T>()
        .map_err(|e| CliError::field(key, format!("cannot parse `{v}`: {e}")))
}

fn parse_list<T: FromStr>(key: &str, v: &str) -> Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    if v.trim().is_empty() {
        return Ok(Vec::new());
    }
    v.split(',').map(|s| parse_value(key, s.trim())).collect()
}

fn nonempty<T>(key: &str, v: Option<Vec<T>>) -> Result<Vec<T>> {
    match v {
        Some(v) if !v.is_empty() => Ok(v),
        _ => Err(CliError::field(key, "list must be non-empty")),
    }
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(", ")
}

/// Settings shared by single experiments and sweeps.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverSettings {
    pub max_neurons: usize,
    pub bias_range: (f64, f64),
    pub bias_samples: usize,
    pub checkpoints: Option<Vec<usize>>,
    pub norm_weighting: NormWeighting,
}

impl SolverSettings {
    fn from_document(doc: &mut Document) -> Result<Self> {
        let max_neurons = doc.required("max_neurons")?;
        let bias_range = match doc.list::<f64>("bias_range")? {
            None => DictionaryGrid::<f64>::DEFAULT_BIAS_RANGE,
            Some(v) if v.len() == 2 => (v[0], v[1]),
            Some(v) => {
                return Err(CliError::field(
                    "bias_range",
                    format!("expected two values `c1, c2`, got {}", v.len()),
                ))
            }
        };
        let bias_samples = doc
            .optional("bias_samples")?
            .unwrap_or(DictionaryGrid::<f64>::DEFAULT_BIAS_SAMPLES);
        let checkpoints = doc.list("checkpoints")?;
        let norm_weighting = match doc.take("norm_weighting") {
            None => NormWeighting::Raw,
            Some(v) => parse_weighting(&v).map_err(|e| CliError::field("norm_weighting", e))?,
        };
        Ok(Self {
            max_neurons,
            bias_range,
            bias_samples,
            checkpoints,
            norm_weighting,
        })
    }

    fn resolved_checkpoints(&self) -> Vec<usize> {
        self.checkpoints
            .clone()
            .unwrap_or_else(|| default_checkpoints(self.max_neurons))
    }

    fn write(&self, out: &mut String) {
        let _ = writeln!(out, "max_neurons = {}", self.max_neurons);
        let _ = writeln!(
            out,
            "bias_range = {}, {}",
            self.bias_range.0, self.bias_range.1
        );
        let _ = writeln!(out, "bias_samples = {}", self.bias_samples);
        let _ = writeln!(out, "checkpoints = {}", join(&self.resolved_checkpoints()));
        let _ = writeln!(
            out,
            "norm_weighting = {}",
            weighting_str(self.norm_weighting)
        );
    }

    fn solve_config(
        &self,
        alpha: f64,
        relu_power: u32,
        grid_intervals: usize,
    ) -> Result<SolveConfig<f64>> {
        let alpha = FractionalOrder::new(alpha).map_err(|e| CliError::field("alpha", e))?;
        let grid = Grid::new(grid_intervals).map_err(|e| CliError::field("grid_intervals", e))?;
        if !(1..=2).contains(&relu_power) {
            return Err(CliError::field(
                "relu_power",
                format!("must be 1 or 2, got {relu_power}"),
            ));
        }
        let dict = DictionaryGrid::new(
            self.bias_range.0,
            self.bias_range.1,
            self.bias_samples,
            relu_power,
        )
        .map_err(|e| CliError::field("bias_range/bias_samples", e))?;
        let cfg = SolveConfig::new(alpha, grid, dict, self.max_neurons)
            .map_err(|e| CliError::field("max_neurons", e))?;
        let cfg = match &self.checkpoints {
            Some(c) => cfg
                .with_checkpoints(c.clone())
                .map_err(|e| CliError::field("checkpoints", e))?,
            None => cfg,
        };
        Ok(cfg.with_weighting(self.norm_weighting))
    }
}

/// One convergence-table experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub alpha: f64,
    pub relu_power: u32,
    pub grid_intervals: usize,
    pub settings: SolverSettings,
    pub output_path: PathBuf,
    pub output_format: OutputFormat,
}

impl ExperimentConfig {
    pub const DEFAULT_OUTPUT: &'static str = "table.csv";

    pub fn parse(text: &str) -> Result<Self> {
        let mut doc = Document::parse(text)?;
        let alpha = doc.required("alpha")?;
        let relu_power = doc.required("relu_power")?;
        let grid_intervals = doc.required("grid_intervals")?;
        let settings = SolverSettings::from_document(&mut doc)?;
        let output_path = doc
            .take("output_path")
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from(Self::DEFAULT_OUTPUT));
        let output_format = match doc.take("output_format") {
            None => OutputFormat::Csv,
            Some(v) => v.parse().map_err(|e| CliError::field("output_format", e))?,
        };
        doc.finish()?;
        Ok(Self {
            alpha,
            relu_power,
            grid_intervals,
            settings,
            output_path,
            output_format,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }

    /// Serializes with every default made explicit.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "alpha = {}", self.alpha);
        let _ = writeln!(out, "relu_power = {}", self.relu_power);
        let _ = writeln!(out, "grid_intervals = {}", self.grid_intervals);
        self.settings.write(&mut out);
        let _ = writeln!(out, "output_path = {}", self.output_path.display());
        let _ = writeln!(out, "output_format = {}", self.output_format.as_str());
        out
    }

    /// Copy with the default checkpoint list spelled out.
    pub fn resolved(&self) -> Self {
        let mut c = self.clone();
        c.settings.checkpoints = Some(self.settings.resolved_checkpoints());
        c
    }

    pub fn solve_config(&self) -> Result<SolveConfig<f64>> {
        self.settings
            .solve_config(self.alpha, self.relu_power, self.grid_intervals)
    }
}

/// Cartesian sweep over orders, powers and grids.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub alphas: Vec<f64>,
    pub relu_powers: Vec<u32>,
    pub grid_intervals: Vec<usize>,
    pub settings: SolverSettings,
}

impl SweepConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut doc = Document::parse(text)?;
        let alphas = nonempty("alphas", doc.list("alphas")?)?;
        let relu_powers = nonempty("relu_powers", doc.list("relu_powers")?)?;
        let grid_intervals = nonempty("grid_intervals", doc.list("grid_intervals")?)?;
        let settings = SolverSettings::from_document(&mut doc)?;
        doc.finish()?;
        Ok(Self {
            alphas,
            relu_powers,
            grid_intervals,
            settings,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "alphas = {}", join(&self.alphas));
        let _ = writeln!(out, "relu_powers = {}", join(&self.relu_powers));
        let _ = writeln!(out, "grid_intervals = {}", join(&self.grid_intervals));
        self.settings.write(&mut out);
        out
    }

    /// Cells in `alpha`-major, then power, then grid order.
    pub fn cells(&self, out_dir: &Path) -> Vec<ExperimentConfig> {
        let mut cells = Vec::new();
        for &alpha in &self.alphas {
            for &relu_power in &self.relu_powers {
                for &grid_intervals in &self.grid_intervals {
                    cells.push(ExperimentConfig {
                        alpha,
                        relu_power,
                        grid_intervals,
                        settings: self.settings.clone(),
                        output_path: out_dir.join(table_file_name(
                            alpha,
                            relu_power,
                            grid_intervals,
                        )),
                        output_format: OutputFormat::Csv,
                    });
                }
            }
        }
        cells
    }
}

/// `table_alpha{α}_k{k}_M{M}.csv`, with `α` in shortest decimal form.
pub fn table_file_name(alpha: f64, relu_power: u32, grid_intervals: usize) -> String {
    format!("table_alpha{alpha}_k{relu_power}_M{grid_intervals}.csv")
}
