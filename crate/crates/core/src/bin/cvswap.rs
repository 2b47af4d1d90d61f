use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use cvswap::experiments::{self, Config, FigureId, Level, ValidationOptions};
use cvswap::optimizer::{optimize_traced, scenario_fidelity};
use cvswap::states::sb_cf;
use cvswap::swapping::OracleSettings;
use cvswap::teleportation::oracle_fidelity;
use cvswap::Error;

#[derive(Parser)]
#[command(name = "cvswap", version, about = "Entanglement swapping with squeezed Bell resources")]
struct Cli {
    /// Scenario file (`key = value` lines).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,

    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Oracle quadrature tolerance.
    #[arg(long, global = true, default_value_t = 1e-6)]
    tol: f64,

    /// Override one config key, e.g. `--set r12=0.5`. Repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    overrides: Vec<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fidelity of one scenario at its stated angles and gains (JSON).
    Fidelity {
        /// Also evaluate through the protocol oracle.
        #[arg(long)]
        oracle: bool,
    },
    /// Optimize a scenario over its free parameters (JSON report).
    Optimize {
        /// Include every refinement evaluation.
        #[arg(long)]
        trace: bool,
    },
    /// Sweep the scenario along an axis, writing CSV and manifest.
    Sweep,
    /// Regenerate the datasets of one figure (fig2 to fig7).
    Figure { id: String },
    /// Run the self-check suite.
    Validate {
        #[arg(long)]
        full: bool,
        #[arg(long, hide = true)]
        mutate_displacement_phase: bool,
    },
}

enum Failure {
    Usage(String),
    Runtime(String),
    Validation,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_) | Error::ParameterRange(_) => Failure::Usage(e.to_string()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

fn load_config(cli: &Cli) -> Result<Config, Failure> {
    let mut cfg = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    for o in &cli.overrides {
        cfg.set_assignment(o)?;
    }
    Ok(cfg)
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json"));
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    if let Some(d) = path.parent() {
        std::fs::create_dir_all(d).map_err(|e| Failure::Runtime(e.to_string()))?;
    }
    std::fs::write(path, text).map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))
}

fn run(cli: &Cli) -> Result<(), Failure> {
    experiments::validate::check_tolerance(cli.tol)?;
    match &cli.command {
        Command::Fidelity { oracle } => {
            let cfg = load_config(cli)?;
            let s = cfg.scenario()?;
            let app = s.apparatus;
            let f = scenario_fidelity(&s, s.delta12, s.delta34, app.g1, app.g4)?;
            let mut report = json!({
                "scenario": s,
                "config": cfg.entries(),
                "fidelity": f,
            });
            if *oracle {
                let a = sb_cf(&s.input_params(s.delta12)?)?;
                let b = sb_cf(&s.resource_params(s.delta34)?)?;
                let fo = oracle_fidelity(&a, &b, &app, &OracleSettings::new(cli.tol), 16)?;
                report["oracle_fidelity"] = json!(fo);
                report["oracle_difference"] = json!((fo - f).abs());
            }
            print_json(&report);
        }
        Command::Optimize { trace } => {
            let cfg = load_config(cli)?;
            let s = cfg.scenario()?;
            let rep = optimize_traced(&s, *trace)?;
            print_json(&json!({ "scenario": s, "config": cfg.entries(), "report": rep }));
        }
        Command::Sweep => {
            let cfg = load_config(cli)?;
            if cli.config.is_none() && cfg.entries().is_empty() {
                return Err(Failure::Usage("sweep needs --config or --set".into()));
            }
            let spec = cfg.sweep_spec()?;
            let (csv, manifest, _) = experiments::run_sweep(&spec, &cli.out, cfg.entries())?;
            eprintln!("wrote {} and {}", csv.display(), manifest.display());
        }
        Command::Figure { id } => {
            let id: FigureId = id.parse()?;
            for p in experiments::reproduce_figure(id, &cli.out)? {
                eprintln!("wrote {}", p.display());
            }
        }
        Command::Validate {
            full,
            mutate_displacement_phase,
        } => {
            let opts = ValidationOptions {
                level: if *full { Level::Full } else { Level::Quick },
                tol: cli.tol,
                mutate_displacement_phase: *mutate_displacement_phase,
            };
            let report = experiments::validate(&opts);
            for c in &report.checks {
                let mark = if c.passed { "PASS" } else { "FAIL" };
                println!("{mark} {:<28} {:>8.2}s  {}", c.name, c.seconds, c.detail);
            }
            let path = cli.out.join("validate_report.json");
            write_file(&path, &report.to_json())?;
            if !report.passed {
                return Err(Failure::Validation);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let jobs = cli
        .jobs
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    if jobs == 0 {
        eprintln!("error: --jobs must be at least 1");
        return ExitCode::from(2);
    }
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    match pool.install(|| run(&cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation) => ExitCode::from(1),
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
