//! Experiment plumbing shared by the command-line tool and the tests:
//! instance parsing, seeded generators, and versioned JSON reports.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::adversary::{
    balanced_lb_drive, phi_lb_drive, pure_lb_drive, robust_lb_drive, AdversaryReport,
};
use crate::clcs::{
    clcs_exact, identical_lb_report, run_clcs, uniform_lb_drive, ClassId, ClcsInstance,
    GreedyClcs, UniformLbParams, CLCS_BRUTE_LIMIT,
};
use crate::constant::{ConstantCompetitive, RowStructure};
use crate::error::{Error, Result};
use crate::model::{makespan, Instance, MachineId, Move, Trace};
use crate::online::{
    build_scheduler, competitive_metrics, migration_stats, run_stream, run_stream_with,
    Denominator, EXACT_METRICS_LIMIT,
};
use crate::oracle::{brute_opt, exact_opt, lower_bound, BRUTE_FORCE_LIMIT};
use crate::ordinal::{ordinal_map, ordinal_schedule};

pub const SCHEMA_VERSION: u32 = 1;

/// One parsed input line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JobLine {
    pub size: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<ClassId>,
}

/// Parses one JSON object per line. Blank lines are skipped; line numbers in
/// errors are 1-based positions in the text.
pub fn parse_jsonl(text: &str) -> Result<Vec<JobLine>> {
    let mut jobs = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let parse_error = |message: String| Error::Parse {
            line: idx + 1,
            message,
        };
        let job: JobLine = serde_json::from_str(trimmed).map_err(|e| parse_error(e.to_string()))?;
        if !(job.size.is_finite() && job.size >= 0.0) {
            return Err(parse_error(format!("size must be a nonnegative number, got {}", job.size)));
        }
        if job.class == Some(0) {
            return Err(parse_error("class labels start at 1".into()));
        }
        jobs.push(job);
    }
    Ok(jobs)
}

pub fn to_jsonl(sizes: &[f64]) -> String {
    sizes
        .iter()
        .map(|&size| serde_json::to_string(&JobLine { size, class: None }).expect("finite size") + "\n")
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Generator {
    /// Uniform over `[1, 100]`.
    Uniform,
    /// `2^u` with `u` uniform over `[-10, 10]`.
    Loguniform,
}

impl std::str::FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(Self::Uniform),
            "loguniform" => Ok(Self::Loguniform),
            other => Err(Error::InvalidParameter(format!(
                "unknown generator '{other}' (expected uniform or loguniform)"
            ))),
        }
    }
}

pub fn generate(generator: Generator, n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| match generator {
            Generator::Uniform => rng.gen_range(1.0..=100.0),
            Generator::Loguniform => 2f64.powf(rng.gen_range(-10.0..=10.0)),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportStep {
    pub size: f64,
    pub machine: MachineId,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub moves: Vec<Move>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: u32,
    pub algorithm: String,
    pub m: usize,
    pub k: usize,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<Generator>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub final_makespan: f64,
    pub denominator_mode: Denominator,
    pub denominator: f64,
    pub final_ratio: f64,
    /// Absent for offline algorithms, which have no prefix schedules.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prefix_max_ratio: Option<f64>,
    pub migration_total: f64,
    pub migration_max_factor: f64,
    pub wall_time_ms: f64,
    pub transcript: Vec<ReportStep>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structure: Option<RowStructure>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ordinal_map: Option<Vec<MachineId>>,
}

impl RunReport {
    /// The report with its wall time cleared, for determinism comparisons.
    pub fn without_timing(&self) -> Self {
        Self {
            wall_time_ms: 0.0,
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunOptions {
    pub epsilon: f64,
    /// `None` picks exact for up to 20 jobs and the lower bound otherwise.
    pub denominator: Option<Denominator>,
    pub dump_structure: bool,
    pub emit_map: bool,
    pub generator: Option<Generator>,
    pub seed: Option<u64>,
}

pub const OFFLINE_KEYS: [&str; 1] = ["ordinal"];

fn pick_denominator(requested: Option<Denominator>, n: usize) -> Denominator {
    requested.unwrap_or(if n <= EXACT_METRICS_LIMIT {
        Denominator::Exact
    } else {
        Denominator::LowerBound
    })
}

fn offline_denominator(instance: &Instance, mode: Denominator) -> Result<f64> {
    match mode {
        Denominator::Exact => {
            if instance.n() > EXACT_METRICS_LIMIT {
                return Err(Error::TooLarge {
                    what: "exact competitive metrics",
                    n: instance.n(),
                    limit: EXACT_METRICS_LIMIT,
                });
            }
            Ok(exact_opt(instance)?.opt_makespan)
        }
        Denominator::LowerBound => Ok(lower_bound(instance)),
    }
}

fn steps_of(trace: &Trace) -> Vec<ReportStep> {
    trace
        .steps
        .iter()
        .map(|s| ReportStep {
            size: s.size,
            machine: s.machine,
            moves: s.migration.moves.clone(),
        })
        .collect()
}

/// Runs `algorithm` (an online key or `ordinal`) on `sizes`.
pub fn run_algorithm(algorithm: &str, m: usize, k: usize, sizes: &[f64], options: &RunOptions) -> Result<RunReport> {
    let start = Instant::now();
    let instance = Instance::new(sizes, m, k)?;
    instance.ensure_feasible()?;
    let mode = pick_denominator(options.denominator, instance.n());
    let uses_epsilon = algorithm == "robust-ordinal";

    let mut report = if algorithm == "ordinal" {
        let schedule = ordinal_schedule(&instance)?;
        let span = makespan(&schedule, &instance)?;
        let denominator = offline_denominator(&instance, mode)?;
        let transcript = (1..=instance.n())
            .map(|job| ReportStep {
                size: sizes[job - 1],
                machine: schedule.machine_of(job).expect("every job is placed"),
                moves: Vec::new(),
            })
            .collect();
        RunReport {
            schema: SCHEMA_VERSION,
            algorithm: algorithm.to_string(),
            m,
            k,
            n: instance.n(),
            epsilon: None,
            generator: options.generator,
            seed: options.seed,
            final_makespan: span,
            denominator_mode: mode,
            denominator,
            final_ratio: ratio(span, denominator),
            prefix_max_ratio: None,
            migration_total: 0.0,
            migration_max_factor: 0.0,
            wall_time_ms: 0.0,
            transcript,
            structure: None,
            ordinal_map: options.emit_map.then(|| ordinal_map(m, k).sigma),
        }
    } else {
        let (trace, structure) = if algorithm == "constant" && options.dump_structure {
            let (trace, s) = run_stream_with(ConstantCompetitive::new(m, k)?, sizes, |_, _| Ok(()))?;
            (trace, Some(s.structure_snapshot()))
        } else {
            let scheduler = build_scheduler(algorithm, m, k, options.epsilon)?;
            (run_stream(scheduler, sizes)?, None)
        };
        let metrics = competitive_metrics(&trace, &instance, mode)?;
        let migration = migration_stats(&trace);
        RunReport {
            schema: SCHEMA_VERSION,
            algorithm: algorithm.to_string(),
            m,
            k,
            n: instance.n(),
            epsilon: uses_epsilon.then_some(options.epsilon),
            generator: options.generator,
            seed: options.seed,
            final_makespan: trace.final_makespan(),
            denominator_mode: mode,
            denominator: metrics.denominator,
            final_ratio: metrics.final_ratio,
            prefix_max_ratio: Some(metrics.prefix_max_ratio),
            migration_total: migration.total_moved,
            migration_max_factor: migration.max_factor,
            wall_time_ms: 0.0,
            transcript: steps_of(&trace),
            structure,
            ordinal_map: (options.emit_map && uses_epsilon).then(|| ordinal_map(m, k).sigma),
        }
    };
    report.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(report)
}

fn ratio(value: f64, denominator: f64) -> f64 {
    if denominator == 0.0 {
        if value == 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        value / denominator
    }
}

/// Final machine of every job after applying the transcript's moves.
pub fn final_machines(transcript: &[ReportStep]) -> Vec<MachineId> {
    let mut machines = Vec::with_capacity(transcript.len());
    for step in transcript {
        machines.push(step.machine);
        for mv in &step.moves {
            machines[mv.job - 1] = mv.to;
        }
    }
    machines
}

/// Recomputes the makespan from a report's transcript alone.
pub fn replay_makespan(report: &RunReport) -> Result<f64> {
    let sizes: Vec<f64> = report.transcript.iter().map(|s| s.size).collect();
    let instance = Instance::new(&sizes, report.m, report.k)?;
    let schedule = crate::model::Schedule::from_machines(&final_machines(&report.transcript));
    makespan(&schedule, &instance)
}

/// A report with its schema version attached at the top level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Versioned<T> {
    pub schema: u32,
    #[serde(flatten)]
    pub body: T,
}

impl<T> Versioned<T> {
    pub fn new(body: T) -> Self {
        Self {
            schema: SCHEMA_VERSION,
            body,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdversarySpec {
    pub family: String,
    pub algorithm: String,
    pub m: usize,
    pub k: usize,
    /// `N` for the pure and balanced families.
    pub n_param: f64,
    pub round_cap: usize,
    /// `M` for the phi family.
    pub big_m: f64,
    pub epsilon: f64,
}

pub fn run_adversary(spec: &AdversarySpec) -> Result<AdversaryReport> {
    let scheduler = build_scheduler(&spec.algorithm, spec.m, spec.k, spec.epsilon)?;
    match spec.family.as_str() {
        "pure-lb" => pure_lb_drive(scheduler, spec.n_param),
        "balanced-lb" => balanced_lb_drive(scheduler, spec.n_param, spec.round_cap),
        "robust-lb" => robust_lb_drive(scheduler),
        "phi-lb" => phi_lb_drive(scheduler, spec.big_m),
        other => Err(Error::InvalidParameter(format!(
            "unknown adversary family '{other}' (expected one of {})",
            crate::adversary::FAMILIES.join(", ")
        ))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleMethod {
    Exact,
    Brute,
    LowerBound,
}

impl std::str::FromStr for OracleMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Self::Exact),
            "brute" => Ok(Self::Brute),
            "lower-bound" => Ok(Self::LowerBound),
            other => Err(Error::InvalidParameter(format!(
                "unknown oracle method '{other}' (expected exact, brute or lower-bound)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub schema: u32,
    pub method: OracleMethod,
    pub m: usize,
    pub k: usize,
    pub n: usize,
    pub opt: f64,
    pub lower_bound: f64,
    /// Machine of each job in arrival order (exact method only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<Vec<MachineId>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nodes_explored: Option<u64>,
}

pub fn run_oracle(method: OracleMethod, m: usize, k: usize, sizes: &[f64]) -> Result<OracleReport> {
    let instance = Instance::new(sizes, m, k)?;
    instance.ensure_feasible()?;
    let lb = lower_bound(&instance);
    let mut report = OracleReport {
        schema: SCHEMA_VERSION,
        method,
        m,
        k,
        n: instance.n(),
        opt: lb,
        lower_bound: lb,
        schedule: None,
        nodes_explored: None,
    };
    match method {
        OracleMethod::Exact => {
            let result = exact_opt(&instance)?;
            report.opt = result.opt_makespan;
            report.schedule = Some(
                (1..=instance.n())
                    .map(|job| result.schedule.machine_of(job).expect("every job is placed"))
                    .collect(),
            );
            report.nodes_explored = Some(result.nodes_explored);
        }
        OracleMethod::Brute => {
            if instance.n() > BRUTE_FORCE_LIMIT {
                return Err(Error::TooLarge {
                    what: "brute_opt",
                    n: instance.n(),
                    limit: BRUTE_FORCE_LIMIT,
                });
            }
            report.opt = brute_opt(&instance)?;
        }
        OracleMethod::LowerBound => {}
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClcsRunReport {
    pub schema: u32,
    pub algorithm: String,
    pub m: usize,
    pub k: usize,
    pub speeds: Vec<f64>,
    pub machines: Vec<MachineId>,
    pub makespan: f64,
    /// Exact optimum when the instance is small enough to enumerate.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub opt: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ratio: Option<f64>,
}

/// Runs the greedy class-binding scheduler. Jobs without a class get a class
/// of their own.
pub fn run_clcs_greedy(m: usize, k: usize, speeds: Option<Vec<f64>>, jobs: &[JobLine]) -> Result<ClcsRunReport> {
    let mut next_fresh = jobs.iter().filter_map(|j| j.class).max().unwrap_or(0) + 1;
    let classed: Vec<(f64, ClassId)> = jobs
        .iter()
        .map(|j| {
            let class = j.class.unwrap_or_else(|| {
                next_fresh += 1;
                next_fresh - 1
            });
            (j.size, class)
        })
        .collect();
    let instance = ClcsInstance::new(&classed, m, k, speeds)?;
    let (machines, span) = run_clcs(GreedyClcs::new(m, k)?, &instance)?;
    let opt = if instance.n() <= CLCS_BRUTE_LIMIT {
        Some(clcs_exact(&instance)?)
    } else {
        None
    };
    Ok(ClcsRunReport {
        schema: SCHEMA_VERSION,
        algorithm: "greedy-clcs".into(),
        m,
        k,
        speeds: instance.speeds().to_vec(),
        machines,
        makespan: span,
        ratio: opt.map(|o| ratio(span, o)),
        opt,
    })
}

pub fn run_clcs_adversary(
    family: &str,
    m: usize,
    k: usize,
    uniform: UniformLbParams,
) -> Result<AdversaryReport> {
    let scheduler = GreedyClcs::new(m, k)?;
    match family {
        "identical-lb" => identical_lb_report(scheduler),
        "uniform-lb" => uniform_lb_drive(scheduler, uniform),
        other => Err(Error::InvalidParameter(format!(
            "unknown ClCS family '{other}' (expected identical-lb or uniform-lb)"
        ))),
    }
}
