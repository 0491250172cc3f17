//! The online scheduler contract, the stream runner, ratio and migration
//! metering, and the simple baseline schedulers.

use serde::{Deserialize, Serialize};

use crate::constant::ConstantCompetitive;
use crate::error::{Error, Result};
use crate::model::{Instance, JobId, MachineId, MigrationRecord, Trace, TraceStep};
use crate::oracle::{exact_opt, lower_bound};
use crate::robust::RobustOrdinal;

/// Largest stream for which [`competitive_metrics`] will call the exact oracle.
pub const EXACT_METRICS_LIMIT: usize = 20;

/// What a scheduler does with one arriving job.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchedulerDecision {
    pub machine: MachineId,
    pub migrations: MigrationRecord,
}

impl SchedulerDecision {
    pub fn place(job: JobId, machine: MachineId) -> Self {
        Self {
            machine,
            migrations: MigrationRecord::none(job),
        }
    }
}

/// A scheduler that sees jobs one at a time.
///
/// Job ids are arrival indices starting at 1, so implementations can name
/// earlier jobs in their migration records. A decision must never move the
/// arriving job itself.
pub trait OnlineScheduler {
    fn name(&self) -> &str;
    fn machines(&self) -> usize;
    fn cap(&self) -> usize;
    fn on_arrival(&mut self, size: f64) -> Result<SchedulerDecision>;

    /// Upper bound on moved size per unit of arriving size; `None` for
    /// pure online schedulers.
    fn migration_factor(&self) -> Option<f64> {
        None
    }
}

/// Applies scheduler decisions and enforces the online contract.
///
/// Loads are maintained so that each equals the sum of the machine's job
/// sizes taken in increasing id order; machines touched by a migration are
/// re-summed from scratch.
pub struct Session<S> {
    scheduler: S,
    m: usize,
    k: usize,
    sizes: Vec<f64>,
    machine_of: Vec<MachineId>,
    counts: Vec<usize>,
    loads: Vec<f64>,
}

impl<S: OnlineScheduler> Session<S> {
    pub fn new(scheduler: S) -> Self {
        let (m, k) = (scheduler.machines(), scheduler.cap());
        Self {
            scheduler,
            m,
            k,
            sizes: Vec::new(),
            machine_of: Vec::new(),
            counts: vec![0; m],
            loads: vec![0.0; m],
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn scheduler(&self) -> &S {
        &self.scheduler
    }

    pub fn arrivals(&self) -> usize {
        self.sizes.len()
    }

    pub fn sizes(&self) -> &[f64] {
        &self.sizes
    }

    pub fn loads(&self) -> &[f64] {
        &self.loads
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn machine_of(&self, job: JobId) -> Option<MachineId> {
        job.checked_sub(1).and_then(|i| self.machine_of.get(i)).copied()
    }

    pub fn assignment(&self) -> &[MachineId] {
        &self.machine_of
    }

    pub fn makespan(&self) -> f64 {
        self.loads.iter().copied().fold(0.0, f64::max)
    }

    /// Sizes of the jobs currently on `machine`, in id order.
    pub fn machine_sizes(&self, machine: MachineId) -> Vec<f64> {
        self.machine_of
            .iter()
            .zip(&self.sizes)
            .filter(|(&mach, _)| mach == machine)
            .map(|(_, &s)| s)
            .collect()
    }

    fn resum(&mut self, machine: MachineId) {
        self.loads[machine - 1] = self
            .machine_of
            .iter()
            .zip(&self.sizes)
            .filter(|(&mach, _)| mach == machine)
            .fold(0.0, |acc, (_, &s)| acc + s);
    }

    /// Feeds one job and validates the resulting state.
    pub fn arrive(&mut self, size: f64) -> Result<SchedulerDecision> {
        let arrival = self.sizes.len() + 1;
        if arrival > self.m * self.k {
            return Err(Error::Infeasible {
                jobs: arrival,
                capacity: self.m * self.k,
            });
        }
        let decision = self.scheduler.on_arrival(size)?;
        let violation = |reason: String| Error::ContractViolation { arrival, reason };
        if !(1..=self.m).contains(&decision.machine) {
            return Err(violation(format!("machine {} out of range", decision.machine)));
        }
        self.sizes.push(size);
        self.machine_of.push(decision.machine);
        self.counts[decision.machine - 1] += 1;
        self.loads[decision.machine - 1] += size;

        let mut touched = Vec::new();
        let mut moved_size = 0.0;
        for mv in &decision.migrations.moves {
            if mv.job == arrival {
                return Err(violation("the arriving job was migrated".into()));
            }
            if mv.from == mv.to {
                return Err(violation(format!("job {} moved onto its own machine", mv.job)));
            }
            let current = self
                .machine_of(mv.job)
                .ok_or_else(|| violation(format!("move of unknown job {}", mv.job)))?;
            if current != mv.from {
                return Err(violation(format!(
                    "job {} moved from {} but sits on {}",
                    mv.job, mv.from, current
                )));
            }
            if !(1..=self.m).contains(&mv.to) {
                return Err(violation(format!("move target {} out of range", mv.to)));
            }
            self.machine_of[mv.job - 1] = mv.to;
            self.counts[mv.from - 1] -= 1;
            self.counts[mv.to - 1] += 1;
            moved_size += self.sizes[mv.job - 1];
            touched.push(mv.from);
            touched.push(mv.to);
        }
        touched.sort_unstable();
        touched.dedup();
        for machine in touched {
            self.resum(machine);
        }
        if let Some(machine) = self.counts.iter().position(|&c| c > self.k) {
            return Err(violation(format!(
                "machine {} holds {} jobs, cap is {}",
                machine + 1,
                self.counts[machine],
                self.k
            )));
        }
        let mut decision = decision;
        decision.migrations.trigger = arrival;
        decision.migrations.moved_size = moved_size;
        Ok(decision)
    }

    pub fn into_scheduler(self) -> S {
        self.scheduler
    }
}

/// Feeds `sizes` in order and records placements, migrations and loads
/// after every arrival.
pub fn run_stream<S: OnlineScheduler>(scheduler: S, sizes: &[f64]) -> Result<Trace> {
    Ok(run_stream_with(scheduler, sizes, |_, _| Ok(()))?.0)
}

/// Like [`run_stream`], but calls `inspect` with the scheduler after each
/// arrival and hands the scheduler back at the end.
pub fn run_stream_with<S, F>(scheduler: S, sizes: &[f64], mut inspect: F) -> Result<(Trace, S)>
where
    S: OnlineScheduler,
    F: FnMut(usize, &S) -> Result<()>,
{
    let (m, k) = (scheduler.machines(), scheduler.cap());
    if sizes.len() > m * k {
        return Err(Error::Infeasible {
            jobs: sizes.len(),
            capacity: m * k,
        });
    }
    let mut session = Session::new(scheduler);
    let mut steps = Vec::with_capacity(sizes.len());
    for &size in sizes {
        let decision = session.arrive(size)?;
        let arrival = session.arrivals();
        inspect(arrival, session.scheduler())?;
        steps.push(TraceStep {
            job: arrival,
            size,
            machine: decision.machine,
            migration: decision.migrations,
            loads: session.loads().to_vec(),
            makespan: session.makespan(),
        });
    }
    Ok((Trace { m, k, steps }, session.into_scheduler()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Denominator {
    Exact,
    LowerBound,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompetitiveMetrics {
    pub final_ratio: f64,
    pub prefix_max_ratio: f64,
    pub denominator: f64,
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

/// Ratio of the trace's makespan to the offline denominator, both at the end
/// and maximized over all prefixes.
pub fn competitive_metrics(
    trace: &Trace,
    instance: &Instance,
    mode: Denominator,
) -> Result<CompetitiveMetrics> {
    trace.replay(instance)?;
    if mode == Denominator::Exact && instance.n() > EXACT_METRICS_LIMIT {
        return Err(Error::TooLarge {
            what: "exact competitive metrics",
            n: instance.n(),
            limit: EXACT_METRICS_LIMIT,
        });
    }
    let denominator_of = |len: usize| -> Result<f64> {
        let prefix = instance.prefix(len);
        match mode {
            Denominator::Exact => Ok(exact_opt(&prefix)?.opt_makespan),
            Denominator::LowerBound => Ok(lower_bound(&prefix)),
        }
    };
    let mut prefix_max: f64 = if trace.steps.is_empty() { 1.0 } else { 0.0 };
    let mut last_denominator = 0.0;
    for (idx, step) in trace.steps.iter().enumerate() {
        let denominator = denominator_of(idx + 1)?;
        prefix_max = prefix_max.max(ratio(step.makespan, denominator));
        last_denominator = denominator;
    }
    Ok(CompetitiveMetrics {
        final_ratio: ratio(trace.final_makespan(), last_denominator),
        prefix_max_ratio: prefix_max,
        denominator: last_denominator,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MigrationStats {
    pub max_factor: f64,
    pub total_moved: f64,
}

pub fn migration_stats(trace: &Trace) -> MigrationStats {
    let mut stats = MigrationStats {
        max_factor: 0.0,
        total_moved: 0.0,
    };
    for step in &trace.steps {
        let moved = step.migration.moved_size;
        stats.total_moved += moved;
        if moved > 0.0 {
            stats.max_factor = stats.max_factor.max(ratio(moved, step.size));
        }
    }
    stats
}

fn check_dimensions(m: usize, k: usize) -> Result<()> {
    if m == 0 || k == 0 {
        Err(Error::InvalidParameter(format!(
            "m and k must be positive (m = {m}, k = {k})"
        )))
    } else {
        Ok(())
    }
}

fn check_size(size: f64) -> Result<()> {
    if size.is_finite() && size >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("invalid job size {size}")))
    }
}

/// Arrival `i` goes to machine `((i - 1) mod m) + 1`.
#[derive(Debug, Clone)]
pub struct RoundRobin {
    m: usize,
    k: usize,
    arrivals: usize,
}

impl RoundRobin {
    pub fn new(m: usize, k: usize) -> Result<Self> {
        check_dimensions(m, k)?;
        Ok(Self { m, k, arrivals: 0 })
    }
}

impl OnlineScheduler for RoundRobin {
    fn name(&self) -> &str {
        "round-robin"
    }

    fn machines(&self) -> usize {
        self.m
    }

    fn cap(&self) -> usize {
        self.k
    }

    fn on_arrival(&mut self, size: f64) -> Result<SchedulerDecision> {
        check_size(size)?;
        if self.arrivals >= self.m * self.k {
            return Err(Error::Infeasible {
                jobs: self.arrivals + 1,
                capacity: self.m * self.k,
            });
        }
        self.arrivals += 1;
        Ok(SchedulerDecision::place(
            self.arrivals,
            (self.arrivals - 1) % self.m + 1,
        ))
    }
}

/// List scheduling restricted to machines with fewer than `k` jobs: the
/// least loaded open machine wins, ties to the lowest index.
#[derive(Debug, Clone)]
pub struct GreedyCapped {
    k: usize,
    loads: Vec<f64>,
    counts: Vec<usize>,
    arrivals: usize,
}

impl GreedyCapped {
    pub fn new(m: usize, k: usize) -> Result<Self> {
        check_dimensions(m, k)?;
        Ok(Self {
            k,
            loads: vec![0.0; m],
            counts: vec![0; m],
            arrivals: 0,
        })
    }
}

impl OnlineScheduler for GreedyCapped {
    fn name(&self) -> &str {
        "greedy-capped"
    }

    fn machines(&self) -> usize {
        self.loads.len()
    }

    fn cap(&self) -> usize {
        self.k
    }

    fn on_arrival(&mut self, size: f64) -> Result<SchedulerDecision> {
        check_size(size)?;
        let mut best: Option<usize> = None;
        for machine in 0..self.loads.len() {
            if self.counts[machine] >= self.k {
                continue;
            }
            if best.is_none_or(|b| self.loads[machine] < self.loads[b]) {
                best = Some(machine);
            }
        }
        let machine = best.ok_or(Error::Infeasible {
            jobs: self.arrivals + 1,
            capacity: self.loads.len() * self.k,
        })?;
        self.arrivals += 1;
        self.loads[machine] += size;
        self.counts[machine] += 1;
        Ok(SchedulerDecision::place(self.arrivals, machine + 1))
    }
}

/// The golden ratio.
pub const PHI: f64 = 1.618_033_988_749_895;

/// Two machines, two jobs each. Jobs 1 and 2 are split; job 3 joins the
/// larger of them iff it is at most `1/phi` of that job, otherwise the
/// smaller one; job 4 fills the remaining slot.
#[derive(Debug, Clone, Default)]
pub struct PhiScheduler {
    sizes: Vec<f64>,
    machine_of: Vec<MachineId>,
}

impl PhiScheduler {
    pub fn new() -> Self {
        Self::default()
    }
}

impl OnlineScheduler for PhiScheduler {
    fn name(&self) -> &str {
        "phi"
    }

    fn machines(&self) -> usize {
        2
    }

    fn cap(&self) -> usize {
        2
    }

    fn on_arrival(&mut self, size: f64) -> Result<SchedulerDecision> {
        check_size(size)?;
        let job = self.sizes.len() + 1;
        let machine = match job {
            1 => 1,
            2 => 2,
            3 => {
                let (big, small) = if self.sizes[0] >= self.sizes[1] {
                    (1, 2)
                } else {
                    (2, 1)
                };
                let big_size = self.sizes[big - 1];
                if size <= big_size / PHI {
                    big
                } else {
                    small
                }
            }
            4 => {
                if self.machine_of.iter().filter(|&&m| m == 1).count() == 1 {
                    1
                } else {
                    2
                }
            }
            _ => return Err(Error::Infeasible { jobs: job, capacity: 4 }),
        };
        self.sizes.push(size);
        self.machine_of.push(machine);
        Ok(SchedulerDecision::place(job, machine))
    }
}

impl<T: OnlineScheduler + ?Sized> OnlineScheduler for Box<T> {
    fn name(&self) -> &str {
        (**self).name()
    }

    fn machines(&self) -> usize {
        (**self).machines()
    }

    fn cap(&self) -> usize {
        (**self).cap()
    }

    fn on_arrival(&mut self, size: f64) -> Result<SchedulerDecision> {
        (**self).on_arrival(size)
    }

    fn migration_factor(&self) -> Option<f64> {
        (**self).migration_factor()
    }
}

/// Keys accepted by [`build_scheduler`].
pub const SCHEDULER_KEYS: [&str; 5] = ["round-robin", "greedy-capped", "phi", "constant", "robust-ordinal"];

/// Schedulers that never migrate.
pub const PURE_ONLINE_KEYS: [&str; 4] = ["round-robin", "greedy-capped", "phi", "constant"];

/// Builds a scheduler by key. `epsilon` is only read by `robust-ordinal`.
pub fn build_scheduler(
    key: &str,
    m: usize,
    k: usize,
    epsilon: f64,
) -> Result<Box<dyn OnlineScheduler + Send>> {
    Ok(match key {
        "round-robin" => Box::new(RoundRobin::new(m, k)?),
        "greedy-capped" => Box::new(GreedyCapped::new(m, k)?),
        "phi" => {
            if m != 2 || k != 2 {
                return Err(Error::InvalidParameter(format!(
                    "phi requires m = k = 2 (got m = {m}, k = {k})"
                )));
            }
            Box::new(PhiScheduler::new())
        }
        "constant" => Box::new(ConstantCompetitive::new(m, k)?),
        "robust-ordinal" => Box::new(RobustOrdinal::new(m, k, epsilon)?),
        other => {
            return Err(Error::InvalidParameter(format!(
                "unknown scheduler '{other}' (expected one of {})",
                SCHEDULER_KEYS.join(", ")
            )))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{check_feasible, Move, Schedule};

    #[test]
    fn round_robin_examples() {
        let trace = run_stream(RoundRobin::new(3, 1).unwrap(), &[1.0, 1.0, 1.0]).unwrap();
        let machines: Vec<_> = trace.steps.iter().map(|s| s.machine).collect();
        assert_eq!(machines, vec![1, 2, 3]);
        assert_eq!(trace.final_makespan(), 1.0);

        let trace = run_stream(RoundRobin::new(2, 2).unwrap(), &[1.0; 4]).unwrap();
        let machines: Vec<_> = trace.steps.iter().map(|s| s.machine).collect();
        assert_eq!(machines, vec![1, 2, 1, 2]);

        let trace = run_stream(RoundRobin::new(3, 2).unwrap(), &[1.0; 4]).unwrap();
        assert_eq!(trace.steps[3].machine, 1);

        let mut rr = RoundRobin::new(2, 1).unwrap();
        rr.on_arrival(1.0).unwrap();
        rr.on_arrival(1.0).unwrap();
        assert!(matches!(rr.on_arrival(1.0), Err(Error::Infeasible { .. })));
    }

    #[test]
    fn greedy_examples() {
        let trace = run_stream(GreedyCapped::new(2, 2).unwrap(), &[2.0, 1.0, 1.0]).unwrap();
        let machines: Vec<_> = trace.steps.iter().map(|s| s.machine).collect();
        assert_eq!(machines, vec![1, 2, 2]);
        assert_eq!(trace.steps[2].loads, vec![2.0, 2.0]);

        let trace = run_stream(GreedyCapped::new(2, 2).unwrap(), &[5.0, 1.0, 1.0]).unwrap();
        let machines: Vec<_> = trace.steps.iter().map(|s| s.machine).collect();
        assert_eq!(machines, vec![1, 2, 2]);

        let trace = run_stream(GreedyCapped::new(2, 1).unwrap(), &[1.0, 1.0]).unwrap();
        let machines: Vec<_> = trace.steps.iter().map(|s| s.machine).collect();
        assert_eq!(machines, vec![1, 2]);
    }

    #[test]
    fn greedy_unit_jobs_fill_evenly() {
        let k = 6;
        let trace = run_stream(GreedyCapped::new(k, k).unwrap(), &vec![1.0; k * (k - 1)]).unwrap();
        let schedule = Schedule::from_machines(
            &trace.steps.iter().map(|s| s.machine).collect::<Vec<_>>(),
        );
        assert!(schedule.jobs_by_machine(k).iter().all(|jobs| jobs.len() == k - 1));
    }

    #[test]
    fn guard_before_dispatch() {
        let err = run_stream(RoundRobin::new(2, 1).unwrap(), &[1.0; 3]).unwrap_err();
        assert_eq!(err, Error::Infeasible { jobs: 3, capacity: 2 });
    }

    #[test]
    fn phi_rule() {
        // 10 / phi ~ 6.18
        let t = run_stream(PhiScheduler::new(), &[10.0, 6.0, 6.0, 1.0]).unwrap();
        assert_eq!(t.steps[2].machine, 1);
        let t = run_stream(PhiScheduler::new(), &[10.0, 6.0, 7.0, 1.0]).unwrap();
        assert_eq!(t.steps[2].machine, 2);
        // Roles swap when job 2 is larger.
        let t = run_stream(PhiScheduler::new(), &[6.0, 10.0, 6.0, 1.0]).unwrap();
        assert_eq!(t.steps[2].machine, 2);
        let instance = Instance::new(&[10.0, 6.0, 7.0, 1.0], 2, 2).unwrap();
        let s = t.replay(&Instance::new(&[6.0, 10.0, 6.0, 1.0], 2, 2).unwrap()).unwrap();
        assert!(s.jobs_by_machine(2).iter().all(|j| j.len() == 2));
        let _ = instance;

        let mut phi = PhiScheduler::new();
        for _ in 0..4 {
            phi.on_arrival(1.0).unwrap();
        }
        assert!(matches!(phi.on_arrival(1.0), Err(Error::Infeasible { .. })));
    }

    #[test]
    fn metrics_on_single_machine() {
        let sizes = [3.0, 1.0, 2.0];
        let trace = run_stream(GreedyCapped::new(1, 3).unwrap(), &sizes).unwrap();
        let instance = Instance::new(&sizes, 1, 3).unwrap();
        let metrics = competitive_metrics(&trace, &instance, Denominator::Exact).unwrap();
        assert_eq!(metrics.final_ratio, 1.0);
        assert_eq!(metrics.prefix_max_ratio, 1.0);
    }

    #[test]
    fn lower_bound_ratio_dominates_exact_ratio() {
        let sizes = [1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 3.0];
        let trace = run_stream(GreedyCapped::new(3, 3).unwrap(), &sizes).unwrap();
        let instance = Instance::new(&sizes, 3, 3).unwrap();
        let exact = competitive_metrics(&trace, &instance, Denominator::Exact).unwrap();
        let lb = competitive_metrics(&trace, &instance, Denominator::LowerBound).unwrap();
        assert!(exact.final_ratio >= 1.0);
        assert!(lb.final_ratio >= exact.final_ratio);
        assert_eq!(exact.final_ratio, 5.0 / 3.0);
    }

    #[test]
    fn exact_metrics_guard() {
        let sizes = vec![1.0; 21];
        let trace = run_stream(RoundRobin::new(3, 7).unwrap(), &sizes).unwrap();
        let instance = Instance::new(&sizes, 3, 7).unwrap();
        assert!(matches!(
            competitive_metrics(&trace, &instance, Denominator::Exact),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn migration_stats_quotient() {
        let trace = run_stream(RoundRobin::new(2, 2).unwrap(), &[1.0, 2.0]).unwrap();
        assert_eq!(migration_stats(&trace).max_factor, 0.0);

        let mut trace = trace;
        trace.steps[1].migration.moved_size = 3.0;
        let stats = migration_stats(&trace);
        assert_eq!(stats.max_factor, 1.5);
        assert_eq!(stats.total_moved, 3.0);
    }

    struct Migrates {
        arrivals: usize,
    }

    impl OnlineScheduler for Migrates {
        fn name(&self) -> &str {
            "migrates-self"
        }
        fn machines(&self) -> usize {
            2
        }
        fn cap(&self) -> usize {
            2
        }
        fn on_arrival(&mut self, _size: f64) -> Result<SchedulerDecision> {
            self.arrivals += 1;
            let mut d = SchedulerDecision::place(self.arrivals, 1);
            d.migrations.moves.push(Move {
                job: self.arrivals,
                from: 1,
                to: 2,
            });
            Ok(d)
        }
    }

    struct Overfills;

    impl OnlineScheduler for Overfills {
        fn name(&self) -> &str {
            "overfills"
        }
        fn machines(&self) -> usize {
            2
        }
        fn cap(&self) -> usize {
            1
        }
        fn on_arrival(&mut self, size: f64) -> Result<SchedulerDecision> {
            Ok(SchedulerDecision::place(0, if size > 0.0 { 1 } else { 2 }))
        }
    }

    #[test]
    fn contract_violations_are_reported() {
        let err = run_stream(Migrates { arrivals: 0 }, &[1.0]).unwrap_err();
        assert!(matches!(err, Error::ContractViolation { arrival: 1, .. }));
        let err = run_stream(Overfills, &[1.0, 1.0]).unwrap_err();
        assert!(matches!(err, Error::ContractViolation { arrival: 2, .. }));
    }

    #[test]
    fn every_baseline_stays_feasible() {
        let sizes = [4.0, 1.0, 3.0, 3.0, 2.0, 5.0, 1.0, 1.0, 2.0];
        for key in ["round-robin", "greedy-capped", "constant", "robust-ordinal"] {
            let trace = run_stream(build_scheduler(key, 3, 3, 1.0).unwrap(), &sizes).unwrap();
            let instance = Instance::new(&sizes, 3, 3).unwrap();
            for len in 1..=sizes.len() {
                let prefix = instance.prefix(len);
                let mut partial = trace.clone();
                partial.steps.truncate(len);
                let schedule = partial.replay(&prefix).unwrap();
                assert!(check_feasible(&schedule, &prefix).is_empty(), "{key} at {len}");
            }
        }
    }

    #[test]
    fn unknown_key() {
        assert!(build_scheduler("lpt", 2, 2, 1.0).is_err());
        assert!(build_scheduler("phi", 3, 2, 1.0).is_err());
    }
}
