use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use openshop::exact::ExactLimits;
use openshop::harness::bench::{run_algorithm, Algorithm};
use openshop::harness::{
    generate, read_instance, read_schedule, write_instance, write_schedule, BenchConfig, Family, GeneratorSpec,
};
use openshop::ptas::{ptas_solve, Mode, PtasParams};
use openshop::rational::{format_rational, parse_rational, Rational};
use openshop::{lateness_profile, validate_schedule};

#[derive(Parser)]
#[command(name = "openshop", version, about = "Open shop scheduling with delivery times (O||Lmax)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance.
    Gen {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 9)]
        p_max: u64,
        #[arg(long, default_value_t = 20)]
        q_max: u64,
        /// Tight family parameter.
        #[arg(long, default_value_t = 1)]
        a: u64,
        /// Mixed family: length of each big operation.
        #[arg(long, default_value_t = 300)]
        big_ops: u64,
        /// Mixed family: number of unit jobs.
        #[arg(long, default_value_t = 3)]
        tiny_count: usize,
        /// Defaults to stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Solve an instance and write the schedule.
    Solve {
        #[arg(long, value_enum)]
        algo: AlgoArg,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        /// Comma-separated job order for `--algo list`.
        #[arg(long)]
        priority: Option<String>,
        #[arg(long, default_value = "1")]
        epsilon: String,
        #[arg(long, default_value = "enumerate")]
        mode: String,
        #[arg(long)]
        delta_override: Option<String>,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        max_combinations: Option<u64>,
        /// PTAS only: write partition and grid diagnostics as JSON.
        #[arg(long)]
        diagnostics: Option<PathBuf>,
    },
    /// Check a schedule against an instance.
    Validate {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        schedule: PathBuf,
    },
    /// Run a benchmark config and write the CSV report.
    Bench {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config's `out`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Random,
    Tight,
    Mixed,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoArg {
    List,
    Jackson,
    Ptas,
    Exact,
}

fn read(path: &Path) -> Result<Vec<u8>, String> {
    std::fs::read(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), String> {
    std::fs::write(path, bytes).map_err(|e| format!("{}: {e}", path.display()))
}

fn rational(flag: &str, text: &str) -> Result<Rational, String> {
    parse_rational(text).map_err(|e| format!("--{flag}: {e}"))
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Gen { family, seed, m, n, p_max, q_max, a, big_ops, tiny_count, output } => {
            let family = match family {
                FamilyArg::Random => Family::Random,
                FamilyArg::Tight => Family::Tight,
                FamilyArg::Mixed => Family::Mixed,
            };
            let spec = GeneratorSpec { family, seed, m, n, p_max, q_max, a, big_ops, tiny_count };
            let inst = generate(&spec).map_err(|e| e.to_string())?;
            let bytes = write_instance(&inst);
            match output {
                Some(path) => write(&path, &bytes)?,
                None => println!("{}", String::from_utf8_lossy(&bytes)),
            }
        }
        Command::Solve {
            algo,
            input,
            output,
            priority,
            epsilon,
            mode,
            delta_override,
            budget,
            max_combinations,
            diagnostics,
        } => {
            let inst = read_instance(&read(&input)?).map_err(|e| format!("{}: {e}", input.display()))?;
            let mut limits = ExactLimits::default();
            if let Some(n) = max_combinations {
                limits.max_combinations = n;
            }
            let (schedule, lmax) = match algo {
                AlgoArg::Ptas => {
                    let mode = Mode::parse(&mode).ok_or_else(|| format!("--mode: unknown mode '{mode}'"))?;
                    let mut params = PtasParams::new(rational("epsilon", &epsilon)?, mode)
                        .map_err(|e| e.to_string())?
                        .with_exact_limits(limits);
                    if let Some(d) = delta_override {
                        params = params.with_delta(rational("delta-override", &d)?).map_err(|e| e.to_string())?;
                    }
                    if let Some(b) = budget {
                        params = params.with_budget(b).map_err(|e| e.to_string())?;
                    }
                    let out = ptas_solve(&inst, &params).map_err(|e| e.to_string())?;
                    if let Some(path) = diagnostics {
                        let text =
                            serde_json::to_vec_pretty(&out.diagnostics.to_json()).expect("diagnostics serialize");
                        write(&path, &text)?;
                    }
                    (out.schedule, out.lmax)
                }
                other => {
                    let algorithm = match other {
                        AlgoArg::Jackson => Algorithm::Jackson,
                        AlgoArg::Exact => Algorithm::Exact(limits),
                        _ => {
                            let text = priority.ok_or("--algo list needs --priority")?;
                            let order = text
                                .split(',')
                                .map(|s| {
                                    s.trim().parse::<usize>().map_err(|_| format!("--priority: bad job index '{s}'"))
                                })
                                .collect::<Result<Vec<_>, _>>()?;
                            Algorithm::List(order)
                        }
                    };
                    let out = run_algorithm(&inst, &algorithm)?;
                    if out.status != "ok" && out.status != "proved-optimal" {
                        eprintln!("status: {}", out.status);
                    }
                    (out.schedule, out.lmax)
                }
            };
            write(&output, &write_schedule(&schedule))?;
            println!("lmax {}", format_rational(&lmax));
        }
        Command::Validate { instance, schedule } => {
            let inst = read_instance(&read(&instance)?).map_err(|e| format!("{}: {e}", instance.display()))?;
            let sched = read_schedule(&read(&schedule)?).map_err(|e| format!("{}: {e}", schedule.display()))?;
            let violations = validate_schedule(&inst, &sched);
            if !violations.is_empty() {
                for v in &violations {
                    println!("{v}");
                }
                return Ok(ExitCode::FAILURE);
            }
            let profile = lateness_profile(&inst, &sched).map_err(|e| e.to_string())?;
            println!("valid; lmax {}", format_rational(&profile.lmax));
        }
        Command::Bench { config, out } => {
            let cfg = BenchConfig::from_json(&read(&config)?).map_err(|e| e.to_string())?;
            let base = config.parent().map(Path::to_path_buf).unwrap_or_default();
            let report = openshop::harness::run_bench(&cfg, &base).map_err(|e| e.to_string())?;
            let target = out
                .or_else(|| cfg.out.as_ref().map(|p| base.join(p)))
                .ok_or("no output path: pass --out or set \"out\"")?;
            report.write_csv(&target).map_err(|e| e.to_string())?;
            if report.has_invalid() {
                eprintln!("some schedules failed validation; see the status column");
                return Ok(ExitCode::FAILURE);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
