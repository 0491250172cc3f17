use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use cardsched::clcs::UniformLbParams;
use cardsched::harness::{
    generate, parse_jsonl, run_adversary, run_algorithm, run_clcs_adversary,
    run_clcs_greedy, run_oracle, AdversarySpec, Generator, JobLine, OracleMethod, RunOptions,
    Versioned,
};
use cardsched::online::Denominator;

#[derive(Parser)]
#[command(name = "cardsched", version, about = "Makespan scheduling with at most k jobs per machine")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scheduler on an instance file or a generated stream.
    Run(RunArgs),
    /// Play a lower-bound construction against a scheduler.
    Adversary(AdversaryArgs),
    /// Solve an instance offline.
    Oracle(OracleArgs),
    /// Class-constrained scheduling.
    #[command(subcommand)]
    Clcs(ClcsCommand),
}

#[derive(Args)]
struct Output {
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct InstanceSource {
    /// JSONL file with one {"size": ...} object per line.
    #[arg(long, conflicts_with = "gen")]
    input: Option<PathBuf>,
    #[arg(long, value_enum)]
    gen: Option<GenKind>,
    /// Number of generated jobs.
    #[arg(long, requires = "gen")]
    n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Uniform,
    Loguniform,
}

#[derive(Clone, Copy, ValueEnum)]
enum DenominatorArg {
    Exact,
    LowerBound,
}

#[derive(Args)]
struct RunArgs {
    /// round-robin, greedy-capped, phi, constant, robust-ordinal or ordinal.
    #[arg(long)]
    algo: String,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    k: usize,
    #[command(flatten)]
    source: InstanceSource,
    #[arg(long, default_value_t = 1.0)]
    epsilon: f64,
    /// Defaults to exact for up to 20 jobs, lower-bound otherwise.
    #[arg(long, value_enum)]
    denominator: Option<DenominatorArg>,
    /// Include the constant scheduler's final row structure.
    #[arg(long)]
    dump_structure: bool,
    /// Include the ordinal position-to-machine map.
    #[arg(long)]
    emit_map: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct AdversaryArgs {
    /// pure-lb, balanced-lb, robust-lb or phi-lb.
    #[arg(long)]
    family: String,
    #[arg(long)]
    algo: String,
    #[arg(long, default_value_t = 2)]
    m: usize,
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// N for pure-lb and balanced-lb.
    #[arg(long, default_value_t = 10.0)]
    n_param: f64,
    #[arg(long, default_value_t = 100)]
    round_cap: usize,
    /// M for phi-lb.
    #[arg(long, default_value_t = 1e4)]
    big_m: f64,
    #[arg(long, default_value_t = 1.0)]
    epsilon: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Exact,
    Brute,
    LowerBound,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    k: usize,
    #[arg(long, conflicts_with = "sizes")]
    input: Option<PathBuf>,
    /// Comma-separated sizes, e.g. 3,2,1,1.
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<f64>>,
    #[arg(long, value_enum, default_value = "exact")]
    method: MethodArg,
    #[command(flatten)]
    output: Output,
}

#[derive(Subcommand)]
enum ClcsCommand {
    /// Run the greedy class-binding scheduler on a JSONL file with "class" fields.
    Run {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        input: PathBuf,
        /// Comma-separated machine speeds; identical machines by default.
        #[arg(long, value_delimiter = ',')]
        speeds: Option<Vec<f64>>,
        #[command(flatten)]
        output: Output,
    },
    /// Play a lower-bound construction against the greedy scheduler.
    Adversary {
        /// identical-lb or uniform-lb.
        #[arg(long)]
        family: String,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Speed of machines 2..m.
        #[arg(long, default_value_t = 2.0)]
        speed: f64,
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        #[arg(long, default_value_t = 0.01)]
        epsilon: f64,
        /// The number M that scales the round count.
        #[arg(long, default_value_t = 200)]
        big_m: u64,
        #[command(flatten)]
        output: Output,
    },
}

fn read_jobs(path: &Path) -> Result<Vec<JobLine>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(parse_jsonl(&text).with_context(|| format!("parsing {}", path.display()))?)
}

fn emit<T: Serialize>(value: &T, output: &Output) -> Result<()> {
    let json = serde_json::to_string_pretty(value)?;
    match &output.out {
        Some(path) => std::fs::write(path, json + "\n").with_context(|| format!("writing {}", path.display()))?,
        None => println!("{json}"),
    }
    Ok(())
}

fn cmd_run(args: RunArgs) -> Result<()> {
    let (sizes, generator, seed) = match (&args.source.input, args.source.gen) {
        (Some(path), None) => (read_jobs(path)?.iter().map(|j| j.size).collect(), None, None),
        (None, Some(kind)) => {
            let generator = match kind {
                GenKind::Uniform => Generator::Uniform,
                GenKind::Loguniform => Generator::Loguniform,
            };
            let n = args.source.n.context("--gen needs --n")?;
            (generate(generator, n, args.source.seed), Some(generator), Some(args.source.seed))
        }
        _ => bail!("give either --input or --gen"),
    };
    let options = RunOptions {
        epsilon: args.epsilon,
        denominator: args.denominator.map(|d| match d {
            DenominatorArg::Exact => Denominator::Exact,
            DenominatorArg::LowerBound => Denominator::LowerBound,
        }),
        dump_structure: args.dump_structure,
        emit_map: args.emit_map,
        generator,
        seed,
    };
    let report = run_algorithm(&args.algo, args.m, args.k, &sizes, &options)?;
    emit(&report, &args.output)
}

fn cmd_adversary(args: AdversaryArgs) -> Result<()> {
    let spec = AdversarySpec {
        family: args.family,
        algorithm: args.algo,
        m: args.m,
        k: args.k,
        n_param: args.n_param,
        round_cap: args.round_cap,
        big_m: args.big_m,
        epsilon: args.epsilon,
    };
    let report = run_adversary(&spec)?;
    emit(&Versioned::new(report), &args.output)
}

fn cmd_oracle(args: OracleArgs) -> Result<()> {
    let sizes: Vec<f64> = match (&args.input, &args.sizes) {
        (Some(path), None) => read_jobs(path)?.iter().map(|j| j.size).collect(),
        (None, Some(sizes)) => sizes.clone(),
        _ => bail!("give either --input or --sizes"),
    };
    let method = match args.method {
        MethodArg::Exact => OracleMethod::Exact,
        MethodArg::Brute => OracleMethod::Brute,
        MethodArg::LowerBound => OracleMethod::LowerBound,
    };
    let report = run_oracle(method, args.m, args.k, &sizes)?;
    emit(&report, &args.output)
}

fn cmd_clcs(command: ClcsCommand) -> Result<()> {
    match command {
        ClcsCommand::Run {
            m,
            k,
            input,
            speeds,
            output,
        } => {
            let report = run_clcs_greedy(m, k, speeds, &read_jobs(&input)?)?;
            emit(&report, &output)
        }
        ClcsCommand::Adversary {
            family,
            m,
            k,
            speed,
            beta,
            epsilon,
            big_m,
            output,
        } => {
            let params = UniformLbParams {
                speed,
                beta,
                epsilon,
                rounds_scale: big_m,
            };
            let report = run_clcs_adversary(&family, m, k, params)?;
            emit(&Versioned::new(report), &output)
        }
    }
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Run(args) => cmd_run(args),
        Command::Adversary(args) => cmd_adversary(args),
        Command::Oracle(args) => cmd_oracle(args),
        Command::Clcs(command) => cmd_clcs(command),
    }
}
