use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use subnormal_cli::commands::{self, parse_params};
use subnormal_cli::{CliError, Grid, OutputFormat, Result, RunConfig};
use subnormal_core::cm::{DEFAULT_M_CAP, DEFAULT_N_CAP};
use subnormal_core::NumericMode;

#[derive(Parser)]
#[command(name = "subnormal", version, about = "Subnormality of tensor products of weighted Bergman modules")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Arithmetic for the parameters: rational (exact) or real (f64).
    #[arg(long, global = true, default_value = "rational")]
    mode: NumericMode,
    /// Largest difference order searched.
    #[arg(long = "m-cap", global = true, default_value_t = DEFAULT_M_CAP)]
    m_cap: u64,
    /// Largest difference offset searched.
    #[arg(long = "n-cap", global = true, default_value_t = DEFAULT_N_CAP)]
    n_cap: u64,
    /// Quadrature tolerance.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,
}

#[derive(Args)]
struct Point {
    s1: String,
    s2: String,
}

#[derive(Subcommand)]
enum Command {
    /// Verdict report for one point (JSON).
    Classify {
        #[command(flatten)]
        point: Point,
        #[command(flatten)]
        common: Common,
    },
    /// The roots of the moment cubic (JSON).
    Roots {
        #[command(flatten)]
        point: Point,
        #[command(flatten)]
        common: Common,
    },
    /// Exact tensor moments (JSON).
    Moments {
        #[command(flatten)]
        point: Point,
        #[arg(long, default_value_t = 10)]
        count: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Search for a negative finite difference or density value.
    Witness {
        #[command(flatten)]
        point: Point,
        #[command(flatten)]
        common: Common,
    },
    /// Samples of the representing density as CSV `t,w(t)`.
    Density {
        #[command(flatten)]
        point: Point,
        #[arg(long = "per-decade", default_value_t = 20)]
        per_decade: usize,
        /// Check moments 0..=N by quadrature before sampling.
        #[arg(long)]
        verify: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Classify every point of a grid.
    Scan {
        /// x0:x1:step[,y0:y1:step]
        #[arg(long, default_value = "0.1:30:0.1")]
        grid: String,
        #[arg(long, default_value = "json")]
        format: OutputFormat,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the region map here.
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Worker threads (default: all cores).
        #[arg(long)]
        jobs: Option<usize>,
        /// Search for witnesses at every point.
        #[arg(long)]
        witness: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Check the stored reference cases.
    Golden {
        #[arg(long)]
        file: Option<PathBuf>,
        /// Rederive the reference cases instead of checking them.
        #[arg(long)]
        bootstrap: bool,
        #[arg(long, requires = "bootstrap")]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<String> {
    match cli.command {
        Command::Classify { point, common } => {
            commands::cmd_classify(&parse_params(&point.s1, &point.s2, common.mode)?)
        }
        Command::Roots { point, common } => commands::cmd_roots(&parse_params(&point.s1, &point.s2, common.mode)?),
        Command::Moments { point, count, common } => {
            commands::cmd_moments(&parse_params(&point.s1, &point.s2, common.mode)?, count)
        }
        Command::Witness { point, common } => {
            commands::cmd_witness(&parse_params(&point.s1, &point.s2, common.mode)?, common.m_cap, common.n_cap)
        }
        Command::Density { point, per_decade, verify, out, common } => {
            let params = parse_params(&point.s1, &point.s2, common.mode)?;
            let text = commands::cmd_density(&params, per_decade, verify, common.tol)?;
            match out {
                Some(path) => {
                    subnormal_cli::scan::write_atomic(&path, text.as_bytes())?;
                    Ok(String::new())
                }
                None => Ok(text),
            }
        }
        Command::Scan { grid, format, out, svg, jobs, witness, common } => {
            let mut config = RunConfig::new(common.mode);
            config.grid = Grid::parse(&grid, common.mode)?;
            config.format = format;
            config.jobs = jobs;
            config.witnesses = witness;
            config.m_cap = common.m_cap;
            config.n_cap = common.n_cap;
            config.tol = common.tol;
            commands::cmd_scan(&config, out.as_deref(), svg.as_deref())
        }
        Command::Golden { file, bootstrap, out } => commands::cmd_golden(file.as_deref(), bootstrap, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(text) => {
            let _ = std::io::stdout().write_all(text.as_bytes());
            ExitCode::SUCCESS
        }
        Err(e) => {
            report(&e);
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn report(e: &CliError) {
    eprintln!("error: {e}");
}
