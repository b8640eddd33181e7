use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use ttp_core::coordination::CoordMode;
use ttp_core::harness::{
    brute_force_solve, generate_instance, load_instances, run_experiment, ExperimentFile, ExperimentSettings,
    GeneratorConfig, Version,
};
use ttp_core::io::{read_instance_file, read_solution, write_instance, write_solution, SolutionRecord};
use ttp_core::search::{ttps, ClockKind, KpsMode, SearchConfig};
use ttp_core::TtpError;

#[derive(Parser)]
#[command(name = "ttp", version, about = "Travelling Thief Problem solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum CoordArg {
    Noch,
    Sgch,
    Pgch,
    Lgch,
}

#[derive(Clone, Copy, ValueEnum)]
enum KpsArg {
    Sbfs,
    Mbfs,
    Sas,
}

#[derive(Clone, Copy, ValueEnum)]
enum ClockArg {
    Wall,
    Work,
}

#[derive(Clone, Copy, ValueEnum)]
enum CategoryArg {
    A,
    B,
    C,
}

impl From<CoordArg> for CoordMode {
    fn from(c: CoordArg) -> Self {
        match c {
            CoordArg::Noch => CoordMode::Noch,
            CoordArg::Sgch => CoordMode::Sgch,
            CoordArg::Pgch => CoordMode::Pgch,
            CoordArg::Lgch => CoordMode::Lgch,
        }
    }
}

impl From<KpsArg> for KpsMode {
    fn from(k: KpsArg) -> Self {
        match k {
            KpsArg::Sbfs => KpsMode::Sbfs,
            KpsArg::Mbfs => KpsMode::Mbfs,
            KpsArg::Sas => KpsMode::Sas,
        }
    }
}

impl From<ClockArg> for ClockKind {
    fn from(c: ClockArg) -> Self {
        match c {
            ClockArg::Wall => ClockKind::Wall,
            ClockArg::Work => ClockKind::Work,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance and print the best objective.
    Solve {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "pgch")]
        coord: CoordArg,
        #[arg(long, value_enum, default_value = "mbfs")]
        kps: KpsArg,
        #[arg(long, default_value_t = 10_000)]
        timeout_ms: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Measure the budget in counted work instead of wall time.
        #[arg(long, value_enum, default_value = "wall")]
        clock: ClockArg,
        #[arg(long)]
        solution_out: Option<PathBuf>,
    },
    /// Run a grid of solver versions over instances.
    Experiment {
        /// TOML experiment description; flags override its values.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Instance files or directories.
        #[arg(long, num_args = 1..)]
        instances: Vec<PathBuf>,
        /// Comma-separated versions such as `noch+sbfs,pgch+mbfs`.
        #[arg(long, value_delimiter = ',')]
        versions: Vec<Version>,
        #[arg(long)]
        runs: Option<usize>,
        #[arg(long)]
        timeout_ms: Option<u64>,
        #[arg(long)]
        base_seed: Option<u64>,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long, value_enum)]
        clock: Option<ClockArg>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact optimum of a tiny instance by enumeration.
    Oracle {
        #[arg(long)]
        instance: PathBuf,
    },
    /// Check a solution file against an instance.
    Validate {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        solution: PathBuf,
    },
    /// Write a random benchmark-style instance.
    Generate {
        #[arg(long)]
        cities: usize,
        #[arg(long, value_enum, default_value = "b")]
        category: CategoryArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn exit_code(e: &TtpError) -> u8 {
    match e {
        TtpError::SizeGuard(_) => 3,
        TtpError::Config(_) => 1,
        _ => 2,
    }
}

fn run(cmd: Command) -> Result<(), TtpError> {
    match cmd {
        Command::Solve { instance, coord, kps, timeout_ms, seed, clock, solution_out } => {
            let inst = read_instance_file(&instance)?;
            let cfg = SearchConfig { clock: clock.into(), ..SearchConfig::new(coord.into(), kps.into(), timeout_ms, seed) };
            let (sol, stats) = ttps(&inst, &cfg)?;
            println!("instance {}", inst.name());
            println!("version {}", cfg.version());
            println!("objective {}", sol.objective);
            println!("restarts {}", stats.restarts);
            println!("accepted_2opt {}", stats.accepted_two_opt);
            println!("elapsed_ms {}", stats.elapsed_ms);
            if let Some(path) = solution_out {
                let rec = SolutionRecord::new(&inst, &sol.tour, &sol.plan, stats.elapsed_ms, seed);
                std::fs::write(path, write_solution(&inst, &rec)?)?;
            }
        }
        Command::Experiment { config, instances, versions, runs, timeout_ms, base_seed, workers, clock, out } => {
            let file = match &config {
                Some(p) => Some(ExperimentFile::parse(&std::fs::read_to_string(p)?)?),
                None => None,
            };
            let mut settings = file.as_ref().map_or_else(ExperimentSettings::default, |f| f.settings());
            // Paths inside a config file are relative to the file itself.
            let base = config.as_ref().and_then(|c| c.parent()).map(PathBuf::from).unwrap_or_default();
            let mut paths: Vec<PathBuf> = file.as_ref().map_or_else(Vec::new, |f| f.instances.iter().map(|p| base.join(p)).collect());
            if !instances.is_empty() {
                paths = instances;
            }
            if paths.is_empty() {
                return Err(TtpError::Config("no instances given; use --config or --instances".into()));
            }
            if !versions.is_empty() {
                settings.versions = versions;
            }
            settings.runs = runs.unwrap_or(settings.runs);
            settings.timeout_ms = timeout_ms.unwrap_or(settings.timeout_ms);
            settings.base_seed = base_seed.unwrap_or(settings.base_seed);
            settings.workers = workers.unwrap_or(settings.workers);
            if let Some(c) = clock {
                settings.clock = c.into();
            }
            let out = out.or_else(|| file.and_then(|f| f.out).map(|o| base.join(o)));
            let report = run_experiment(&load_instances(&paths), &settings)?;
            for r in &report.runs {
                if let Some(e) = &r.error {
                    log::error!("{} {} run {}: {e}", r.row.instance, r.row.version, r.row.run);
                }
            }
            match out {
                Some(dir) => {
                    report.write_to(&dir)?;
                    println!("wrote {}", dir.display());
                }
                None => print!("{}", report.to_csv()?),
            }
        }
        Command::Oracle { instance } => {
            let inst = read_instance_file(&instance)?;
            let r = brute_force_solve(&inst)?;
            println!("objective {}", r.objective);
            let tour: Vec<String> = r.tour.order().iter().map(|c| (c + 1).to_string()).collect();
            let items: Vec<String> = r.plan.picked_items().iter().map(|i| (i + 1).to_string()).collect();
            println!("tour {}", tour.join(" "));
            println!("items {}", items.join(" "));
        }
        Command::Validate { instance, solution } => {
            let inst = read_instance_file(&instance)?;
            let read = read_solution(&inst, &std::fs::read_to_string(solution)?)?;
            for w in &read.warnings {
                eprintln!("warning: {w}");
            }
            println!("objective {}", read.recomputed_objective);
        }
        Command::Generate { cities, category, seed, out } => {
            let cfg = match category {
                CategoryArg::A => GeneratorConfig::cat_a(cities, seed),
                CategoryArg::B => GeneratorConfig::cat_b(cities, seed),
                CategoryArg::C => GeneratorConfig::cat_c(cities, seed),
            };
            let inst = generate_instance(&cfg)?;
            std::fs::write(&out, write_instance(&inst))?;
            println!("wrote {}", out.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
