//! Command-line front end: direct scattering, data evolution, inverse
//! recovery, the full Cauchy-problem solve, and the built-in verification
//! suite.

mod config;

use clap::{Parser, Subcommand};
use config::{resolve, Overrides, RunConfig, UsageError};
use kdv_ist::glm::{recover_potential, RecoverParams};
use kdv_ist::numerics::UniformGrid;
use kdv_ist::pipeline::{diagnostics, direct_scattering, solve_cauchy, CauchyProblem};
use kdv_ist::scatter::ScatteringData;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "kdvist",
    about = "Inverse scattering transform solver for the KdV equation on the line",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// TOML configuration file; flags override file values
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Built-in potential (zero, gaussian-odd, soliton, example3) or a
    /// two-column data file
    #[arg(long, global = true)]
    potential: Option<String>,

    /// Soliton speed parameter
    #[arg(long, global = true)]
    c: Option<f64>,

    /// Truncation half-width of the potential box
    #[arg(long, global = true)]
    b: Option<f64>,

    /// Number of series coefficient levels
    #[arg(long = "N", global = true)]
    levels: Option<usize>,

    /// Truncation order of the inverse-scattering systems
    #[arg(long = "Ns", global = true)]
    truncation: Option<usize>,

    /// Sample count of the reflection-coefficient circle grid
    #[arg(long = "theta-count", global = true)]
    theta_count: Option<usize>,

    /// Node count of the potential grid (odd)
    #[arg(long = "grid-count", global = true)]
    grid_count: Option<usize>,

    /// Output times, comma separated
    #[arg(long, global = true)]
    times: Option<String>,

    /// Recovery window LO,HI
    #[arg(long, global = true, allow_hyphen_values = true)]
    window: Option<String>,

    /// Output directory
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Scattering-data input file (evolve, invert)
    #[arg(long, global = true)]
    data: Option<PathBuf>,

    #[arg(long, global = true)]
    verbose: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the direct scattering problem and write the data file
    Direct,
    /// Read a scattering-data file and write evolved copies at the requested times
    Evolve,
    /// Read a scattering-data file and recover the potential on the window
    Invert,
    /// Run the full pipeline: direct scattering, evolution, inverse recovery
    Solve,
    /// Run the built-in verification suite and print one line per criterion
    Validate,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let over = Overrides {
        config: cli.config.clone(),
        potential: cli.potential.clone(),
        c: cli.c,
        b: cli.b,
        grid_count: cli.grid_count,
        levels: cli.levels,
        truncation: cli.truncation,
        theta_count: cli.theta_count,
        times: cli.times.clone(),
        window: cli.window.clone(),
        out: cli.out.clone(),
        data: cli.data.clone(),
        verbose: cli.verbose,
    };
    let cfg = match resolve(&over) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    if cfg.verbose {
        eprintln!("resolved configuration: {cfg:?}");
    }

    let run = match cli.command {
        Command::Direct => run_direct(&cfg),
        Command::Evolve => run_evolve(&cfg),
        Command::Invert => run_invert(&cfg),
        Command::Solve => run_solve(&cfg),
        Command::Validate => return run_validate(),
    };
    match run {
        Ok(()) => ExitCode::SUCCESS,
        Err(RunError::Usage(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(RunError::Numeric(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

enum RunError {
    Usage(UsageError),
    Numeric(kdv_ist::Error),
}

impl From<kdv_ist::Error> for RunError {
    fn from(e: kdv_ist::Error) -> Self {
        match e {
            kdv_ist::Error::InvalidInput(msg) => RunError::Usage(UsageError(msg)),
            other => RunError::Numeric(other),
        }
    }
}

impl From<UsageError> for RunError {
    fn from(e: UsageError) -> Self {
        RunError::Usage(e)
    }
}

impl From<std::io::Error> for RunError {
    fn from(e: std::io::Error) -> Self {
        RunError::Numeric(kdv_ist::Error::Io(e))
    }
}

fn ensure_out(cfg: &RunConfig) -> Result<(), RunError> {
    std::fs::create_dir_all(&cfg.out)?;
    Ok(())
}

fn load_data(cfg: &RunConfig) -> Result<ScatteringData, RunError> {
    let path = cfg
        .data
        .clone()
        .unwrap_or_else(|| cfg.out.join("scattering.txt"));
    let file = std::fs::File::open(&path).map_err(|e| {
        RunError::Usage(UsageError(format!(
            "cannot open scattering data {}: {e}",
            path.display()
        )))
    })?;
    Ok(ScatteringData::read_text(&mut std::io::BufReader::new(
        file,
    ))?)
}

fn write_data(data: &ScatteringData, path: &Path) -> Result<(), RunError> {
    let mut out = BufWriter::new(std::fs::File::create(path)?);
    data.write_text(&mut out)?;
    out.flush()?;
    Ok(())
}

fn window_grid(cfg: &RunConfig) -> Result<UniformGrid, RunError> {
    let (lo, hi) = cfg.window;
    let count = ((hi - lo) / cfg.recovery_step).round() as usize + 1;
    Ok(UniformGrid::new(lo, hi, count)?)
}

fn run_direct(cfg: &RunConfig) -> Result<(), RunError> {
    ensure_out(cfg)?;
    let q = cfg.build_potential()?;
    let data = direct_scattering(&q, &cfg.numeric_params())?;
    for w in &data.warnings {
        eprintln!("warning: {w}");
    }
    let path = cfg.out.join("scattering.txt");
    write_data(&data, &path)?;
    println!(
        "wrote {} ({} bound states, {} reflection samples)",
        path.display(),
        data.discrete.len(),
        data.reflection.len()
    );
    Ok(())
}

fn run_evolve(cfg: &RunConfig) -> Result<(), RunError> {
    ensure_out(cfg)?;
    let data = load_data(cfg)?;
    for &t in &cfg.times {
        let evolved = data.evolve(t)?;
        let path = cfg.out.join(format!("scattering_t{:.4}.txt", evolved.time));
        write_data(&evolved, &path)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn run_invert(cfg: &RunConfig) -> Result<(), RunError> {
    ensure_out(cfg)?;
    let data = load_data(cfg)?;
    let grid = window_grid(cfg)?;
    let rec = recover_potential(
        &data,
        &grid,
        &RecoverParams {
            n_trunc: cfg.truncation,
            ..RecoverParams::default()
        },
    )?;
    let path = cfg.out.join(format!("recovered_t{:.4}.txt", data.time));
    let mut out = BufWriter::new(std::fs::File::create(&path)?);
    rec.write_table(&mut out)?;
    out.flush()?;
    println!(
        "wrote {} (stitch residual {:.3e}, max condition {:.3e})",
        path.display(),
        rec.stitch_residual,
        rec.max_condition
    );
    Ok(())
}

fn run_solve(cfg: &RunConfig) -> Result<(), RunError> {
    ensure_out(cfg)?;
    let problem = CauchyProblem {
        potential: cfg.build_potential()?,
        times: cfg.times.clone(),
        window: cfg.window,
        params: cfg.numeric_params(),
    };
    let field = solve_cauchy(&problem)?;
    for w in &field.warnings {
        eprintln!("warning: {w}");
    }
    let matrix_path = cfg.out.join("solution.txt");
    let mut out = BufWriter::new(std::fs::File::create(&matrix_path)?);
    field.write_matrix(&mut out)?;
    out.flush()?;
    let slice_paths = field.write_slices(&cfg.out)?;
    println!("wrote {}", matrix_path.display());
    for p in &slice_paths {
        println!("wrote {}", p.display());
    }
    let report = diagnostics(&field);
    println!("direct stage: {:.2}s", report.direct_seconds);
    for (i, &t) in report.times.iter().enumerate() {
        println!(
            "t = {t}: mass {:.6e}, momentum {:.6e}, stitch {:.2e}, cond {:.2e}, {:.2}s",
            report.mass[i],
            report.momentum[i],
            report.stitch_residuals[i],
            report.max_conditions[i],
            report.seconds[i]
        );
    }
    Ok(())
}

fn run_validate() -> ExitCode {
    match kdv_ist::acceptance::run_all() {
        Ok(outcomes) => {
            let mut all_ok = true;
            for o in &outcomes {
                let status = if o.passed { "PASS" } else { "FAIL" };
                println!("[{status}] {} {} ({:.1}s)", o.id, o.name, o.seconds);
                for line in o.detail.lines() {
                    println!("       {line}");
                }
                all_ok &= o.passed;
            }
            if all_ok {
                println!("all criteria passed");
                ExitCode::SUCCESS
            } else {
                println!("some criteria failed");
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
