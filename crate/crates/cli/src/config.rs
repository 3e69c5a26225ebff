//! Run configuration: TOML key-value file with flag overrides.

use kdv_ist::numerics::SplineOrder;
use kdv_ist::pipeline::NumericParams;
use kdv_ist::potential::Potential;
use serde::Deserialize;
use std::path::PathBuf;

#[derive(Debug, Clone)]
pub enum PotentialSpec {
    Zero,
    GaussianOdd,
    Soliton { c: f64 },
    PiecewiseBessel,
    Table(PathBuf),
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub potential: PotentialSpec,
    pub half_width: f64,
    pub grid_count: usize,
    pub levels: usize,
    pub truncation: usize,
    pub theta_count: usize,
    pub times: Vec<f64>,
    pub window: (f64, f64),
    pub recovery_step: f64,
    pub out: PathBuf,
    pub data: Option<PathBuf>,
    pub verbose: bool,
}

/// Raw file keys; unknown keys are rejected with the offending name.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    potential: Option<String>,
    c: Option<f64>,
    b: Option<f64>,
    grid_count: Option<usize>,
    n: Option<usize>,
    ns: Option<usize>,
    theta_count: Option<usize>,
    times: Option<Vec<f64>>,
    window: Option<[f64; 2]>,
    recovery_step: Option<f64>,
    out: Option<String>,
    data: Option<String>,
    verbose: Option<bool>,
}

/// Flag values collected by the argument parser; every field overrides the
/// file value when present.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub config: Option<PathBuf>,
    pub potential: Option<String>,
    pub c: Option<f64>,
    pub b: Option<f64>,
    pub grid_count: Option<usize>,
    pub levels: Option<usize>,
    pub truncation: Option<usize>,
    pub theta_count: Option<usize>,
    pub times: Option<String>,
    pub window: Option<String>,
    pub out: Option<PathBuf>,
    pub data: Option<PathBuf>,
    pub verbose: bool,
}

#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for UsageError {}

fn parse_times(text: &str) -> Result<Vec<f64>, UsageError> {
    let times: Result<Vec<f64>, _> = text.split(',').map(|t| t.trim().parse::<f64>()).collect();
    let mut times =
        times.map_err(|_| UsageError(format!("malformed number in times list `{text}`")))?;
    times.sort_by(|a, b| a.partial_cmp(b).expect("finite times"));
    Ok(times)
}

fn parse_window(text: &str) -> Result<(f64, f64), UsageError> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 2 {
        return Err(UsageError(format!("window `{text}` must be LO,HI")));
    }
    let lo = parts[0]
        .trim()
        .parse()
        .map_err(|_| UsageError(format!("malformed number in window `{text}`")))?;
    let hi = parts[1]
        .trim()
        .parse()
        .map_err(|_| UsageError(format!("malformed number in window `{text}`")))?;
    Ok((lo, hi))
}

pub fn resolve(over: &Overrides) -> Result<RunConfig, UsageError> {
    let file: FileConfig = match &over.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| UsageError(format!("cannot read config {}: {e}", path.display())))?;
            toml::from_str(&text).map_err(|e| UsageError(format!("bad config: {e}")))?
        }
        None => FileConfig::default(),
    };

    let potential_name = over
        .potential
        .clone()
        .or(file.potential)
        .unwrap_or_else(|| "zero".to_string());
    let c = over.c.or(file.c).unwrap_or(std::f64::consts::PI);
    let potential = match potential_name.as_str() {
        "zero" => PotentialSpec::Zero,
        "gaussian-odd" => PotentialSpec::GaussianOdd,
        "soliton" => PotentialSpec::Soliton { c },
        "example3" => PotentialSpec::PiecewiseBessel,
        other => {
            let path = PathBuf::from(other);
            if path.is_file() {
                PotentialSpec::Table(path)
            } else {
                return Err(UsageError(format!(
                    "unknown potential `{other}` (builtins: zero, gaussian-odd, soliton, example3; otherwise a data file path)"
                )));
            }
        }
    };

    let times = match &over.times {
        Some(text) => parse_times(text)?,
        None => {
            let mut t = file.times.unwrap_or_else(|| vec![0.0]);
            t.sort_by(|a, b| a.partial_cmp(b).expect("finite times"));
            t
        }
    };
    let window = match &over.window {
        Some(text) => parse_window(text)?,
        None => file
            .window
            .map(|w| (w[0], w[1]))
            .unwrap_or((-5.0, 7.0)),
    };

    Ok(RunConfig {
        potential,
        half_width: over.b.or(file.b).unwrap_or(12.0),
        grid_count: over.grid_count.or(file.grid_count).unwrap_or(2401),
        levels: over.levels.or(file.n).unwrap_or(64),
        truncation: over.truncation.or(file.ns).unwrap_or(5),
        theta_count: over.theta_count.or(file.theta_count).unwrap_or(10_000),
        times,
        window,
        recovery_step: file.recovery_step.unwrap_or(0.02),
        out: over
            .out
            .clone()
            .or(file.out.map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(".")),
        data: over.data.clone().or(file.data.map(PathBuf::from)),
        verbose: over.verbose || file.verbose.unwrap_or(false),
    })
}

impl RunConfig {
    pub fn numeric_params(&self) -> NumericParams {
        NumericParams {
            half_width: self.half_width,
            grid_count: self.grid_count,
            coeff_levels: self.levels,
            truncation: self.truncation,
            theta_count: self.theta_count,
            recovery_step: self.recovery_step,
            spline_order: SplineOrder::Quintic,
            ..NumericParams::default()
        }
    }

    pub fn build_potential(&self) -> kdv_ist::Result<Potential> {
        match &self.potential {
            PotentialSpec::Zero => Potential::zero(self.half_width, self.grid_count),
            PotentialSpec::GaussianOdd => {
                Potential::gaussian_odd(self.half_width, self.grid_count)
            }
            PotentialSpec::Soliton { c } => {
                Potential::soliton(*c, self.half_width, self.grid_count)
            }
            PotentialSpec::PiecewiseBessel => {
                Potential::piecewise_bessel(self.half_width, self.grid_count)
            }
            PotentialSpec::Table(path) => {
                let text = std::fs::read_to_string(path)?;
                let mut xs = Vec::new();
                let mut ys = Vec::new();
                for (ln, line) in text.lines().enumerate() {
                    let line = line.trim();
                    if line.is_empty() || line.starts_with('#') {
                        continue;
                    }
                    let cols: Vec<&str> = line.split_whitespace().collect();
                    if cols.len() != 2 {
                        return Err(kdv_ist::Error::FileFormat(format!(
                            "line {}: expected two columns",
                            ln + 1
                        )));
                    }
                    let x: f64 = cols[0].parse().map_err(|_| {
                        kdv_ist::Error::FileFormat(format!("line {}: bad abscissa", ln + 1))
                    })?;
                    let y: f64 = cols[1].parse().map_err(|_| {
                        kdv_ist::Error::FileFormat(format!("line {}: bad ordinate", ln + 1))
                    })?;
                    xs.push(x);
                    ys.push(y);
                }
                Potential::from_table(&xs, &ys, self.half_width, self.grid_count)
            }
        }
    }
}
