//! Argument parsing and dispatch for the `robin-dce` binary.
//!
//! Exit codes: 0 on success, 1 on numerical or I/O failure (partial tables
//! are still written, with failed points listed in their metadata), 2 on
//! usage errors.

use std::f64::consts::FRAC_PI_2;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use robin_dce::general::{spectrum_general, GeneralSpectrumRequest};
use robin_dce::kinematics::{MotionSpectrum, SampledTrajectory};
use robin_dce::rates::{angular_table, frequency_table, ratio_curve, ratio_minimum, total_table, MINIMUM_SEARCH};
use robin_dce::table::FailedPoint;
use robin_dce::{Error, Execution, Product, QuadratureConfig, RobinCondition, Rule, SpectrumTable, TableMeta};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NUMERIC: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Gammas of the angular-spectrum figure.
pub const FIG2_GAMMAS: [f64; 5] = [0.0, 1.0, 2.0, 3.0, 5.0];
/// Finite betas of the frequency-spectrum figure; Neumann is added on top.
pub const FIG1_BETAS: [f64; 5] = [0.0, 1.0, 2.0, 3.0, 5.0];

const DEFAULT_ALPHA_GRID: &str = "0:1:200";
const DEFAULT_THETA_GRID: &str = "0:1.5707963267948966:200";
const DEFAULT_BETA_GRID: &str = "0.01:1000:60,log";

/// A command-line problem, reported by clap with its own exit code
/// (2 for errors, 0 for `--help` and `--version`).
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(#[from] clap::Error);

impl UsageError {
    pub fn exit_code(&self) -> i32 {
        self.0.exit_code()
    }

    pub fn print(&self) {
        let _ = self.0.print();
    }

    fn invalid(message: impl std::fmt::Display) -> Self {
        UsageError(clap::Error::raw(clap::error::ErrorKind::ValueValidation, format!("{message}\n")))
    }
}

/// `start:stop:count[,log]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid(pub Vec<f64>);

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (body, log) = match s.split_once(',') {
            Some((body, "log")) => (body, true),
            Some((_, other)) => return Err(format!("unknown grid modifier {other:?}, expected \"log\"")),
            None => (s, false),
        };
        let parts: Vec<&str> = body.split(':').collect();
        let [start, stop, count] = parts.as_slice() else {
            return Err(format!("grid {s:?} is not of the form start:stop:count[,log]"));
        };
        let start: f64 = start.trim().parse().map_err(|e| format!("grid start {start:?}: {e}"))?;
        let stop: f64 = stop.trim().parse().map_err(|e| format!("grid stop {stop:?}: {e}"))?;
        let count: usize = count.trim().parse().map_err(|e| format!("grid count {count:?}: {e}"))?;
        if !(start.is_finite() && stop.is_finite()) {
            return Err("grid limits must be finite".into());
        }
        if count == 0 {
            return Err("grid count must be at least 1".into());
        }
        if count > 1 && stop <= start {
            return Err(format!("grid stop {stop} must exceed start {start}"));
        }
        if log && start <= 0.0 {
            return Err("log grids need a positive start".into());
        }
        if count == 1 {
            return Ok(Grid(vec![start]));
        }
        let last = (count - 1) as f64;
        let points = (0..count)
            .map(|i| {
                let f = i as f64 / last;
                match (log, i) {
                    (_, 0) => start,
                    (_, i) if i == count - 1 => stop,
                    (true, _) => (start.ln() + f * (stop.ln() - start.ln())).exp(),
                    (false, _) => start + f * (stop - start),
                }
            })
            .collect();
        Ok(Grid(points))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    Fig1,
    Fig2,
    Fig3,
}

#[derive(Parser, Debug)]
#[command(name = "robin-dce", version, about = "Particle creation by a moving Robin mirror")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct BcArgs {
    /// Robin length gamma (0 means Dirichlet).
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    dirichlet: bool,
    #[arg(long)]
    neumann: bool,
}

#[derive(Args, Debug)]
struct CommonArgs {
    #[arg(long, default_value_t = 1e-9)]
    rel_tol: f64,
    #[arg(long, default_value_t = 1e-12)]
    abs_tol: f64,
    #[arg(long, default_value_t = 2000)]
    max_subdiv: usize,
    /// Gauss-Kronrod order, 15 or 21.
    #[arg(long, default_value_t = 15)]
    rule: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output file; a directory for `reproduce`. Tables go to stdout if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Evaluate grid points on a single thread.
    #[arg(long)]
    sequential: bool,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Angular spectrum w0^4 F~ at one frequency.
    Angular {
        #[command(flatten)]
        bc: BcArgs,
        #[arg(long, default_value_t = 1.0)]
        omega0: f64,
        /// Emission frequency; defaults to omega0 / 2.
        #[arg(long)]
        omega: Option<f64>,
        #[arg(long, default_value = DEFAULT_THETA_GRID)]
        theta_grid: Grid,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Angle-integrated spectrum F(alpha, w0 gamma).
    Spectrum {
        #[command(flatten)]
        bc: BcArgs,
        #[arg(long, default_value_t = 1.0)]
        omega0: f64,
        #[arg(long, default_value = DEFAULT_ALPHA_GRID)]
        alpha_grid: Grid,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Total number of particles per unit time and area, w0^5 F(w0 gamma).
    Total {
        #[command(flatten)]
        bc: BcArgs,
        #[arg(long, default_value_t = 1.0)]
        omega0: f64,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Total rate relative to Dirichlet over a beta grid.
    Ratio {
        #[arg(long, default_value = DEFAULT_BETA_GRID)]
        beta_grid: Grid,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Spectrum of a sampled trajectory at one frequency over angles.
    General {
        #[command(flatten)]
        bc: BcArgs,
        #[arg(long)]
        trajectory: PathBuf,
        #[arg(long)]
        omega: f64,
        /// Single emission angle; overrides --theta-grid.
        #[arg(long, conflicts_with = "theta_grid")]
        theta: Option<f64>,
        #[arg(long, default_value = DEFAULT_THETA_GRID)]
        theta_grid: Grid,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Write the data behind one of the standard figures.
    Reproduce {
        #[arg(value_enum)]
        figure: Figure,
        #[arg(long, default_value = DEFAULT_ALPHA_GRID)]
        alpha_grid: Grid,
        #[arg(long, default_value = DEFAULT_THETA_GRID)]
        theta_grid: Grid,
        #[arg(long, default_value = DEFAULT_BETA_GRID)]
        beta_grid: Grid,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Angular { bc: RobinCondition, omega0: f64, omega: f64, theta: Vec<f64> },
    Spectrum { bc: RobinCondition, omega0: f64, alpha: Vec<f64> },
    Total { bc: RobinCondition, omega0: f64 },
    Ratio { beta: Vec<f64> },
    General { bc: RobinCondition, trajectory: PathBuf, omega: f64, theta: Vec<f64> },
    Reproduce { figure: Figure, alpha: Vec<f64>, theta: Vec<f64>, beta: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub quadrature: QuadratureConfig,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub execution: Execution,
}

fn resolve_bc(bc: &BcArgs) -> Result<RobinCondition, UsageError> {
    match (bc.gamma, bc.dirichlet, bc.neumann) {
        (Some(g), false, false) => RobinCondition::from_gamma(g).map_err(|e| UsageError::invalid(format!("--gamma: {e}"))),
        (None, true, false) => Ok(RobinCondition::Dirichlet),
        (None, false, true) => Ok(RobinCondition::Neumann),
        _ => Err(UsageError::invalid("exactly one of --gamma, --dirichlet, --neumann is required")),
    }
}

fn positive(flag: &str, v: f64) -> Result<f64, UsageError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(UsageError::invalid(format!("{flag} must be positive and finite, got {v}")))
    }
}

fn angles(flag: &str, grid: Grid) -> Result<Vec<f64>, UsageError> {
    // Allow the usual decimal spelling of pi/2 as the last point.
    let g: Vec<f64> = grid.0.into_iter().map(|t| if (t - FRAC_PI_2).abs() < 1e-6 { t.min(FRAC_PI_2) } else { t }).collect();
    if g.iter().any(|t| !(0.0..=FRAC_PI_2).contains(t)) {
        return Err(UsageError::invalid(format!("{flag} must lie within [0, pi/2]")));
    }
    Ok(g)
}

/// Parses arguments (without the program name) into a validated configuration.
pub fn parse_config<I, T>(argv: I) -> Result<RunConfig, UsageError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = std::iter::once(std::ffi::OsString::from("robin-dce")).chain(argv.into_iter().map(Into::into));
    let cli = Cli::try_parse_from(args)?;

    let (command, common) = match cli.command {
        Cmd::Angular { bc, omega0, omega, theta_grid, common } => {
            let omega0 = positive("--omega0", omega0)?;
            let omega = omega.unwrap_or(0.5 * omega0);
            if !(omega >= 0.0 && omega.is_finite()) {
                return Err(UsageError::invalid(format!("--omega must be >= 0, got {omega}")));
            }
            let theta = angles("--theta-grid", theta_grid)?;
            (Command::Angular { bc: resolve_bc(&bc)?, omega0, omega, theta }, common)
        }
        Cmd::Spectrum { bc, omega0, alpha_grid, common } => {
            let omega0 = positive("--omega0", omega0)?;
            if alpha_grid.0[0] < 0.0 {
                return Err(UsageError::invalid("--alpha-grid must be non-negative"));
            }
            (Command::Spectrum { bc: resolve_bc(&bc)?, omega0, alpha: alpha_grid.0 }, common)
        }
        Cmd::Total { bc, omega0, common } => {
            let omega0 = positive("--omega0", omega0)?;
            (Command::Total { bc: resolve_bc(&bc)?, omega0 }, common)
        }
        Cmd::Ratio { beta_grid, common } => {
            if beta_grid.0[0] < 0.0 {
                return Err(UsageError::invalid("--beta-grid must be non-negative"));
            }
            (Command::Ratio { beta: beta_grid.0 }, common)
        }
        Cmd::General { bc, trajectory, omega, theta, theta_grid, common } => {
            let bc = resolve_bc(&bc)?;
            if bc == RobinCondition::Neumann {
                return Err(UsageError::invalid("general motion supports --gamma or --dirichlet only"));
            }
            let omega = positive("--omega", omega)?;
            let theta = match theta {
                Some(t) => angles("--theta", Grid(vec![t]))?,
                None => angles("--theta-grid", theta_grid)?,
            };
            (Command::General { bc, trajectory, omega, theta }, common)
        }
        Cmd::Reproduce { figure, alpha_grid, theta_grid, beta_grid, common } => {
            let theta = angles("--theta-grid", theta_grid)?;
            if alpha_grid.0[0] < 0.0 || beta_grid.0[0] < 0.0 {
                return Err(UsageError::invalid("grids must be non-negative"));
            }
            (Command::Reproduce { figure, alpha: alpha_grid.0, theta, beta: beta_grid.0 }, common)
        }
    };

    let rule = Rule::from_order(common.rule).map_err(|e| UsageError::invalid(format!("--rule: {e}")))?;
    let quadrature = QuadratureConfig::new(common.rel_tol, common.abs_tol, common.max_subdiv, rule)
        .map_err(|e| UsageError::invalid(e.to_string()))?;
    Ok(RunConfig {
        command,
        quadrature,
        format: common.format,
        out: common.out,
        execution: if common.sequential { Execution::Sequential } else { Execution::Parallel },
    })
}

fn render(table: &SpectrumTable, format: Format) -> Result<String, Error> {
    match format {
        Format::Csv => Ok(table.to_csv()),
        Format::Json => table.to_json(),
    }
}

fn write_text(path: Option<&Path>, text: &str) -> Result<(), Error> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn general_table(
    bc: &RobinCondition,
    trajectory: &Path,
    omega: f64,
    theta: &[f64],
    cfg: &QuadratureConfig,
    exec: Execution,
) -> Result<SpectrumTable, Error> {
    let motion = MotionSpectrum::Sampled(SampledTrajectory::from_file(trajectory)?);
    let results = exec.map(theta, |&theta| {
        spectrum_general(&GeneralSpectrumRequest {
            motion: motion.clone(),
            bc: *bc,
            omega,
            theta,
            cfg: *cfg,
        })
    });
    // A sampled trajectory has no carrier frequency; omega0 is left at zero.
    let mut meta = TableMeta::new(Product::General, 0.0, bc.to_string(), *cfg);
    meta.extra.insert("omega".into(), omega);
    let mut values = Vec::with_capacity(results.len());
    for (index, r) in results.into_iter().enumerate() {
        match r {
            Ok(v) => values.push(v),
            Err(e) => {
                values.push(f64::NAN);
                meta.failed.push(FailedPoint { index, message: e.to_string() });
            }
        }
    }
    SpectrumTable::new(theta.to_vec(), values, meta)
}

fn file_tag(bc: &RobinCondition, prefix: &str) -> String {
    match bc {
        RobinCondition::Dirichlet => format!("{prefix}_0"),
        RobinCondition::Finite(g) => format!("{prefix}_{}", g.get()),
        RobinCondition::Neumann => "neumann".to_string(),
    }
}

/// Named tables produced by one run.
fn compute(cfg: &RunConfig) -> Result<Vec<(String, SpectrumTable)>, Error> {
    let q = &cfg.quadrature;
    let exec = cfg.execution;
    Ok(match &cfg.command {
        Command::Angular { bc, omega0, omega, theta } => {
            vec![("angular".into(), angular_table(theta, *omega, *omega0, bc, exec)?)]
        }
        Command::Spectrum { bc, omega0, alpha } => {
            vec![("spectrum".into(), frequency_table(alpha, *omega0, bc, q, exec)?)]
        }
        Command::Total { bc, omega0 } => vec![("total".into(), total_table(*omega0, bc, q)?)],
        Command::Ratio { beta } => vec![("ratio".into(), ratio_curve(beta, q, exec)?)],
        Command::General { bc, trajectory, omega, theta } => {
            vec![("general".into(), general_table(bc, trajectory, *omega, theta, q, exec)?)]
        }
        Command::Reproduce { figure: Figure::Fig1, alpha, .. } => {
            let mut bcs: Vec<RobinCondition> = FIG1_BETAS.iter().map(|&b| RobinCondition::from_gamma(b)).collect::<Result<_, _>>()?;
            bcs.push(RobinCondition::Neumann);
            bcs.iter()
                .map(|bc| Ok((format!("fig1_{}", file_tag(bc, "beta")), frequency_table(alpha, 1.0, bc, q, exec)?)))
                .collect::<Result<_, Error>>()?
        }
        Command::Reproduce { figure: Figure::Fig2, theta, .. } => FIG2_GAMMAS
            .iter()
            .map(|&g| {
                let bc = RobinCondition::from_gamma(g)?;
                Ok((format!("fig2_{}", file_tag(&bc, "gamma")), angular_table(theta, 0.5, 1.0, &bc, exec)?))
            })
            .collect::<Result<_, Error>>()?,
        Command::Reproduce { figure: Figure::Fig3, beta, .. } => {
            let mut table = ratio_curve(beta, q, exec)?;
            match ratio_minimum(MINIMUM_SEARCH.0, MINIMUM_SEARCH.1, q, exec) {
                Ok(m) => {
                    table.meta.extra.insert("beta_star".into(), m.beta);
                    table.meta.extra.insert("ratio_star".into(), m.ratio);
                }
                Err(e) => table.meta.failed.push(FailedPoint { index: usize::MAX, message: format!("minimum search: {e}") }),
            }
            vec![("fig3_ratio".into(), table)]
        }
    })
}

fn report(e: &Error) -> i32 {
    eprintln!("robin-dce: {e}");
    match e {
        Error::Validation(_) | Error::Parse(_) => EXIT_USAGE,
        _ => EXIT_NUMERIC,
    }
}

/// Runs a parsed configuration and returns the process exit code.
pub fn run(cfg: &RunConfig) -> i32 {
    let tables = match compute(cfg) {
        Ok(t) => t,
        Err(e) => return report(&e),
    };
    let reproduce = matches!(cfg.command, Command::Reproduce { .. });
    if reproduce {
        let dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from("."));
        if let Err(e) = fs::create_dir_all(&dir) {
            return report(&Error::Io(format!("{}: {e}", dir.display())));
        }
    }
    let mut code = EXIT_OK;
    for (name, table) in &tables {
        let path = if reproduce {
            let dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from("."));
            Some(dir.join(format!("{name}.{}", cfg.format.extension())))
        } else {
            cfg.out.clone()
        };
        if let Err(e) = render(table, cfg.format).and_then(|text| write_text(path.as_deref(), &text)) {
            return report(&e);
        }
        for f in &table.meta.failed {
            eprintln!("robin-dce: {name}: point {} failed: {}", f.index, f.message);
            code = EXIT_NUMERIC;
        }
    }
    code
}

/// Parses and runs, printing usage errors.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match parse_config(argv) {
        Ok(cfg) => run(&cfg),
        Err(e) => {
            e.print();
            e.exit_code()
        }
    }
}
