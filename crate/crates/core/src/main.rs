use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use moap::bench::{self, Method, RunLimits};
use moap::conflict::{DemandConflictGraph, OfferConflictGraph};
use moap::exact::{build_model, export_model, BoundRule, ExportFormat, Formulation};
use moap::gen::{self, AgParams, RwParams};
use moap::greedy::SortCriterion;
use moap::model::{read_instance, write_instance, SolutionFile};

/// Validation errors (bad input files or arguments).
const EXIT_INVALID: u8 = 2;
/// Some runs produced no feasible solution.
const EXIT_PARTIAL: u8 = 3;

#[derive(Parser)]
#[command(name = "moap", version, about = "Mobility offer allocation toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a benchmark instance.
    #[command(subcommand)]
    Generate(GenerateCmd),
    /// Solve an instance.
    Solve(SolveArgs),
    /// Run or aggregate experiments.
    #[command(subcommand)]
    Bench(BenchCmd),
}

#[derive(Subcommand)]
enum GenerateCmd {
    /// Artificial mixed-fleet instance.
    Ag {
        #[arg(long)]
        demands: usize,
        /// Fleet utilization, in percent (40) or as a fraction (0.4).
        #[arg(long)]
        pu: f64,
        #[arg(long)]
        pa: f64,
        #[arg(long)]
        pl: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Company instance with vehicle classes.
    Rw {
        #[arg(long)]
        employees: usize,
        #[arg(long)]
        nu: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Reduction of an interval scheduling instance (`M a b` / `J s f` lines).
    Isma {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Bound {
    Lp,
    Cheapest,
}

#[derive(Args)]
struct SolveArgs {
    instance: PathBuf,
    /// greedy, g1mw, bnb, bnb-classes, alns, lns-random, lns-time-interval or
    /// lns-demand-conflict.
    #[arg(long, default_value = "greedy")]
    method: String,
    #[arg(long, default_value = "maxmincost")]
    criterion: SortCriterion,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 300.0)]
    time_limit: f64,
    /// ALNS only: stop after this many iterations, with counted timing.
    #[arg(long)]
    iterations: Option<u64>,
    #[arg(long, default_value = "clique")]
    formulation: Formulation,
    #[arg(long, value_enum, default_value = "lp")]
    bound: Bound,
    /// ALNS parameter overrides (JSON object).
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    export_lp: Option<PathBuf>,
    #[arg(long)]
    export_mps: Option<PathBuf>,
    /// ALNS convergence trace (CSV).
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Offer and demand conflict graphs in DOT format; writes
    /// `<prefix>.offers.dot` and `<prefix>.demands.dot`.
    #[arg(long)]
    dot: Option<PathBuf>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum BenchCmd {
    Run {
        spec: PathBuf,
        /// Also print a summary grouped by these keys.
        #[arg(long, value_delimiter = ',', default_value = "method")]
        group_by: Vec<String>,
    },
    Aggregate {
        results: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "method")]
        group_by: Vec<String>,
    },
}

struct Failure(u8, String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(EXIT_INVALID, e.to_string())
    }
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), Failure> {
    match output {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn generate(cmd: GenerateCmd) -> Result<u8, Failure> {
    let (inst, output) = match cmd {
        GenerateCmd::Ag { demands, pu, pa, pl, seed, output } => {
            let pu = if pu > 1.0 { pu / 100.0 } else { pu };
            if !(pu > 0.0 && pu <= 1.0) || !(0.0..=1.0).contains(&pa) || !(0.0..=1.0).contains(&pl) {
                return Err(Failure(EXIT_INVALID, "pu must be in (0, 1], pa and pl in [0, 1]".into()));
            }
            (gen::generate_ag(&AgParams::new(demands, pu, pa, pl, seed)), output)
        }
        GenerateCmd::Rw { employees, nu, seed, output } => {
            if !(0.0..=1.0).contains(&nu) {
                return Err(Failure(EXIT_INVALID, "nu must be in [0, 1]".into()));
            }
            (gen::generate_rw(&RwParams::new(employees, nu, seed)), output)
        }
        GenerateCmd::Isma { input, output } => {
            let isma = gen::parse_isma(&std::fs::read_to_string(&input)?)?;
            (gen::reduce_isma_to_moap(&isma.machines, &isma.jobs), output)
        }
    };
    match output {
        Some(p) => write_instance(p, &inst)?,
        None => print!("{}", inst.to_json()),
    }
    Ok(0)
}

fn solve(args: SolveArgs) -> Result<u8, Failure> {
    let inst = read_instance(&args.instance)?;
    let graph = OfferConflictGraph::build(&inst);
    if let Some(prefix) = &args.dot {
        let dg = DemandConflictGraph::build(&graph);
        std::fs::write(prefix.with_extension("offers.dot"), graph.to_dot(&inst))?;
        std::fs::write(prefix.with_extension("demands.dot"), dg.to_dot(&inst))?;
    }
    let mut method = match args.method.as_str() {
        "greedy" => Method::Greedy(args.criterion),
        other => Method::from_tag(other)?,
    };
    if let Method::Bnb { formulation, bound, classes } = &mut method {
        *formulation = args.formulation;
        *bound = match args.bound {
            Bound::Lp => BoundRule::LpRelaxation,
            Bound::Cheapest => BoundRule::CheapestOffer,
        };
        if args.export_lp.is_some() || args.export_mps.is_some() {
            let target = if !*classes && inst.has_class_offers() { inst.expand_classes()? } else { inst.clone() };
            let tg = OfferConflictGraph::build(&target);
            let model = build_model(&target, &tg, *formulation, *classes)?;
            if let Some(p) = &args.export_lp {
                std::fs::write(p, export_model(&model, ExportFormat::Lp))?;
            }
            if let Some(p) = &args.export_mps {
                std::fs::write(p, export_model(&model, ExportFormat::Mps))?;
            }
        }
    }
    if let (Some(path), Method::Alns(cfg)) = (&args.config, &mut method) {
        let overrides: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        **cfg = bench::merge_alns_config(cfg, &overrides)?;
    }
    let limits = RunLimits { time_limit: args.time_limit, iterations: args.iterations };
    let clock = Instant::now();
    let out = bench::run_method(&inst, &method, args.seed, limits);
    let runtime_ms = clock.elapsed().as_millis() as u64;
    if let (Some(p), Some(t)) = (&args.trace, &out.trace) {
        std::fs::write(p, t)?;
    }
    if let Some(e) = &out.error {
        eprintln!("{}: {e}", args.method);
    }
    let Some(sol) = out.solution else {
        return Ok(EXIT_PARTIAL);
    };
    let seed = matches!(method, Method::Alns(_) | Method::Greedy(SortCriterion::Random)).then_some(args.seed);
    let file = SolutionFile::from_solution(&inst, &sol, &args.method, runtime_ms, seed);
    if let Some(b) = out.bound {
        eprintln!("bound {b} ({})", if out.optimal { "optimal" } else { "not proven" });
    }
    emit(args.output.as_deref(), &file.to_json())?;
    Ok(if file.feasible { 0 } else { EXIT_PARTIAL })
}

fn bench_cmd(cmd: BenchCmd) -> Result<u8, Failure> {
    match cmd {
        BenchCmd::Run { spec, group_by } => {
            let spec = bench::ExperimentSpec::load(&spec)?;
            let report = bench::run_experiment(&spec)?;
            if spec.output_dir.is_none() {
                print!("{}", bench::results_csv(&report.rows)?);
            }
            let keys: Vec<&str> = group_by.iter().map(String::as_str).collect();
            let groups = bench::aggregate(&report.rows, &keys)?;
            eprint!("{}", bench::render_table(&keys, &groups));
            Ok(if report.failures > 0 { EXIT_PARTIAL } else { 0 })
        }
        BenchCmd::Aggregate { results, group_by } => {
            let rows = bench::read_results(&std::fs::read_to_string(results)?)?;
            let keys: Vec<&str> = group_by.iter().map(String::as_str).collect();
            let groups = bench::aggregate(&rows, &keys)?;
            print!("{}", bench::render_table(&keys, &groups));
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.command {
        Command::Generate(c) => generate(c),
        Command::Solve(a) => solve(a),
        Command::Bench(c) => bench_cmd(c),
    };
    match res {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
