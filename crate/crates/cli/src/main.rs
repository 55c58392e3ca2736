use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use cohomsol::commands::{self, CommandOutput};
use cohomsol::config::{parse_kernel, parse_l1, KernelEntry, L1Entry, Overrides, RunConfig};
use cohomsol::error::{CliError, Result, EXIT_OK};
use cohomsol::{builtin, geometry_file};

/// Gradient Ricci solitons of cohomogeneity one near a singular orbit.
#[derive(Parser, Debug)]
#[command(name = "cohomsol", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Power-series jet at the singular orbit.
    #[command(allow_negative_numbers = true)]
    Series {
        #[command(flatten)]
        run: RunArgs,
        /// Also solve in rational arithmetic.
        #[arg(long)]
        exact: bool,
    },
    /// Continue the jet with the ODE integrator.
    #[command(allow_negative_numbers = true)]
    Integrate {
        #[command(flatten)]
        run: RunArgs,
        /// Write profile radii for plotting.
        #[arg(long)]
        emit_plot_data: bool,
    },
    /// Kernel dimensions of the recursion operators.
    #[command(allow_negative_numbers = true)]
    Indeterminacy {
        #[command(flatten)]
        run: RunArgs,
    },
    /// Run every certificate and report pass or fail.
    #[command(allow_negative_numbers = true)]
    Verify {
        #[command(flatten)]
        run: RunArgs,
    },
    /// Print a builtin geometry in the geometry file format.
    ExportGeometry {
        /// Builtin name, e.g. `stiefel-so(4)`.
        name: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        p: Option<usize>,
    },
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Run configuration file; repeat for a sweep.
    #[arg(long = "config", value_name = "FILE")]
    configs: Vec<PathBuf>,
    /// Worker threads for sweeps.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Builtin name or geometry file.
    #[arg(long)]
    geometry: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    epsilon: Option<f64>,
    /// Second derivative of the potential at the singular orbit.
    #[arg(long)]
    u2: Option<f64>,
    /// Second fundamental form entry, `LABEL=VALUE`.
    #[arg(long = "l1", value_parser = parse_l1)]
    l1: Vec<L1Entry>,
    /// Kernel coefficients, `M:C1,C2,...`.
    #[arg(long = "kernel", value_parser = parse_kernel)]
    kernel: Vec<KernelEntry>,
    #[arg(long = "order")]
    series_order: Option<usize>,
    #[arg(long)]
    t0: Option<f64>,
    #[arg(long)]
    t_end: Option<f64>,
    #[arg(long)]
    rtol: Option<f64>,
    #[arg(long)]
    atol: Option<f64>,
    #[arg(long)]
    scan_limit: Option<usize>,
    /// Directory for CSV tables. Without it the main table goes to stdout.
    #[arg(long)]
    outputs: Option<PathBuf>,
}

impl RunArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            geometry: self.geometry.clone(),
            n: self.n,
            k: self.k,
            p: self.p,
            epsilon: self.epsilon,
            u2: self.u2,
            l1: self.l1.clone(),
            kernel_params: self.kernel.clone(),
            series_order: self.series_order,
            t0: self.t0,
            t_end: self.t_end,
            rtol: self.rtol,
            atol: self.atol,
            scan_limit: self.scan_limit,
            outputs: self.outputs.clone(),
        }
    }

    /// One resolved configuration per `--config`, or a single one built
    /// from flags alone.
    fn configs(&self) -> Vec<(Option<String>, Result<RunConfig>)> {
        let o = self.overrides();
        if self.configs.is_empty() {
            return vec![(None, Ok(RunConfig::default().apply(&o)))];
        }
        self.configs
            .iter()
            .map(|p| {
                let stem = p.file_stem().map(|s| s.to_string_lossy().into_owned());
                (stem, RunConfig::load(p).map(|c| c.apply(&o)))
            })
            .collect()
    }
}

fn emit(stem: Option<&str>, cfg: &RunConfig, out: &CommandOutput) -> Result<()> {
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    let io_err = |path: &Path| {
        let path = path.to_path_buf();
        move |source| CliError::Io { path, source }
    };
    match cfg.outputs_dir() {
        Some(dir) => {
            std::fs::create_dir_all(&dir).map_err(io_err(&dir))?;
            for (name, bytes) in &out.tables {
                let file = match stem {
                    Some(s) => dir.join(format!("{s}_{name}")),
                    None => dir.join(name),
                };
                std::fs::write(&file, bytes).map_err(io_err(&file))?;
            }
            for line in &out.summary {
                writeln!(lock, "{line}").map_err(io_err(Path::new("<stdout>")))?;
            }
        }
        None => {
            if let Some((_, bytes)) = out.tables.first() {
                lock.write_all(bytes)
                    .map_err(io_err(Path::new("<stdout>")))?;
            }
            for line in &out.summary {
                eprintln!("{line}");
            }
        }
    }
    Ok(())
}

fn run_all(run: &RunArgs, cmd: impl Fn(&RunConfig) -> Result<CommandOutput> + Sync) -> i32 {
    let configs = run.configs();
    let work = |(_, cfg): &(Option<String>, Result<RunConfig>)| cfg.as_ref().ok().map(&cmd);
    let results: Vec<Option<Result<CommandOutput>>> = if run.jobs > 1 && configs.len() > 1 {
        match rayon::ThreadPoolBuilder::new()
            .num_threads(run.jobs)
            .build()
        {
            Ok(pool) => pool.install(|| configs.par_iter().map(work).collect()),
            Err(_) => configs.iter().map(work).collect(),
        }
    } else {
        configs.iter().map(work).collect()
    };
    let mut code = EXIT_OK;
    for (result, (stem, cfg)) in results.into_iter().zip(configs) {
        let failure = match (result, cfg) {
            (Some(Ok(out)), Ok(cfg)) => match emit(stem.as_deref(), &cfg, &out) {
                Ok(()) => out.failure,
                Err(e) => Some(e),
            },
            (Some(Err(e)), _) | (None, Err(e)) => Some(e),
            (_, Ok(_)) | (Some(_), Err(_)) => None,
        };
        if let Some(e) = failure {
            eprintln!("{}: error: {e}", stem.as_deref().unwrap_or("run"));
            code = code.max(e.exit_code());
        }
    }
    code
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match &cli.command {
        Command::Series { run, exact } => run_all(run, |c| commands::series(c, *exact)),
        Command::Integrate {
            run,
            emit_plot_data,
        } => run_all(run, |c| commands::integrate(c, *emit_plot_data)),
        Command::Indeterminacy { run } => run_all(run, commands::indeterminacy),
        Command::Verify { run } => run_all(run, commands::verify),
        Command::ExportGeometry { name, n, k, p } => {
            match builtin::resolve(
                name,
                builtin::Params {
                    n: *n,
                    k: *k,
                    p: *p,
                },
            ) {
                Ok(b) => {
                    print!("{}", geometry_file::to_toml(&b.geometry));
                    EXIT_OK
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    e.exit_code()
                }
            }
        }
    };
    ExitCode::from(code as u8)
}
