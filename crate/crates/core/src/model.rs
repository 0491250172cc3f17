//! Instances, schedules and load accounting.
//!
//! Jobs are identified by their 1-based arrival index and machines are
//! 1-based as well. A [`Schedule`] is kept as a list of placements rather
//! than a map so that [`check_feasible`] can report doubly assigned jobs.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// 1-based job identifier, equal to the arrival position.
pub type JobId = usize;

/// 1-based machine index.
pub type MachineId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Job {
    pub id: JobId,
    pub size: f64,
}

/// A job list together with the machine count `m` and the per-machine cap `k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    jobs: Vec<Job>,
    m: usize,
    k: usize,
}

impl Instance {
    /// Builds an instance from sizes in arrival order.
    ///
    /// Sizes must be finite and non-negative; zero-size jobs are allowed
    /// (they show up as padding in ordinal schedules).
    pub fn new(sizes: &[f64], m: usize, k: usize) -> Result<Self> {
        if m == 0 || k == 0 {
            return Err(Error::InvalidParameter(format!(
                "m and k must be positive (m = {m}, k = {k})"
            )));
        }
        let jobs = sizes
            .iter()
            .enumerate()
            .map(|(idx, &size)| {
                if !size.is_finite() || size < 0.0 {
                    return Err(Error::Domain(format!(
                        "job {} has invalid size {size}",
                        idx + 1
                    )));
                }
                Ok(Job { id: idx + 1, size })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { jobs, m, k })
    }

    pub fn jobs(&self) -> &[Job] {
        &self.jobs
    }

    pub fn sizes(&self) -> Vec<f64> {
        self.jobs.iter().map(|j| j.size).collect()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.jobs.len()
    }

    pub fn capacity(&self) -> usize {
        self.m * self.k
    }

    /// A feasible schedule exists iff `n <= m * k`.
    pub fn is_feasible(&self) -> bool {
        self.n() <= self.capacity()
    }

    pub fn ensure_feasible(&self) -> Result<()> {
        if self.is_feasible() {
            Ok(())
        } else {
            Err(Error::Infeasible {
                jobs: self.n(),
                capacity: self.capacity(),
            })
        }
    }

    pub fn size_of(&self, job: JobId) -> Option<f64> {
        job.checked_sub(1)
            .and_then(|idx| self.jobs.get(idx))
            .map(|j| j.size)
    }

    pub fn total_size(&self) -> f64 {
        self.jobs.iter().map(|j| j.size).sum()
    }

    pub fn max_size(&self) -> f64 {
        self.jobs.iter().map(|j| j.size).fold(0.0, f64::max)
    }

    /// The instance restricted to its first `len` jobs.
    pub fn prefix(&self, len: usize) -> Instance {
        Instance {
            jobs: self.jobs[..len.min(self.jobs.len())].to_vec(),
            m: self.m,
            k: self.k,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Placement {
    pub job: JobId,
    pub machine: MachineId,
}

/// Job-to-machine assignment.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schedule {
    placements: Vec<Placement>,
}

impl Schedule {
    pub fn new() -> Self {
        Self::default()
    }

    /// `machines[i]` is the machine of job `i + 1`.
    pub fn from_machines(machines: &[MachineId]) -> Self {
        Self {
            placements: machines
                .iter()
                .enumerate()
                .map(|(idx, &machine)| Placement {
                    job: idx + 1,
                    machine,
                })
                .collect(),
        }
    }

    pub fn assign(&mut self, job: JobId, machine: MachineId) {
        self.placements.push(Placement { job, machine });
    }

    pub fn placements(&self) -> &[Placement] {
        &self.placements
    }

    pub fn machine_of(&self, job: JobId) -> Option<MachineId> {
        self.placements
            .iter()
            .find(|p| p.job == job)
            .map(|p| p.machine)
    }

    /// Jobs per machine, indexed `0..m` for machines `1..=m`. Ids are sorted.
    pub fn jobs_by_machine(&self, m: usize) -> Vec<Vec<JobId>> {
        let mut out = vec![Vec::new(); m];
        for p in &self.placements {
            if (1..=m).contains(&p.machine) {
                out[p.machine - 1].push(p.job);
            }
        }
        for jobs in &mut out {
            jobs.sort_unstable();
        }
        out
    }

    pub fn len(&self) -> usize {
        self.placements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.placements.is_empty()
    }
}

/// Per-machine loads. Each load is summed over the machine's jobs in
/// increasing id order, which makes the value reproducible bit for bit.
pub fn loads(schedule: &Schedule, instance: &Instance) -> Result<Vec<f64>> {
    let m = instance.m();
    let mut per_machine: Vec<Vec<(JobId, f64)>> = vec![Vec::new(); m];
    for p in schedule.placements() {
        let size = instance.size_of(p.job).ok_or(Error::UnknownJob(p.job))?;
        if !(1..=m).contains(&p.machine) {
            return Err(Error::MachineOutOfRange {
                machine: p.machine,
                m,
            });
        }
        per_machine[p.machine - 1].push((p.job, size));
    }
    Ok(per_machine
        .into_iter()
        .map(|mut jobs| {
            jobs.sort_unstable_by_key(|&(id, _)| id);
            jobs.into_iter().map(|(_, s)| s).fold(0.0, |acc, s| acc + s)
        })
        .collect())
}

pub fn makespan(schedule: &Schedule, instance: &Instance) -> Result<f64> {
    Ok(loads(schedule, instance)?.into_iter().fold(0.0, f64::max))
}

/// A single reason a schedule is not feasible for an instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    OverCap { machine: MachineId, count: usize },
    Unassigned { job: JobId },
    MultiplyAssigned { job: JobId, times: usize },
    UnknownJob { job: JobId },
    MachineOutOfRange { job: JobId, machine: MachineId },
}

/// Reports every cap violation and every unassigned, doubly assigned or
/// foreign job. An empty vector means the schedule is feasible.
pub fn check_feasible(schedule: &Schedule, instance: &Instance) -> Vec<Violation> {
    let m = instance.m();
    let mut violations = Vec::new();
    let mut counts = vec![0usize; m];
    let mut seen: BTreeMap<JobId, usize> = BTreeMap::new();
    for p in schedule.placements() {
        if instance.size_of(p.job).is_none() {
            violations.push(Violation::UnknownJob { job: p.job });
            continue;
        }
        *seen.entry(p.job).or_default() += 1;
        if (1..=m).contains(&p.machine) {
            counts[p.machine - 1] += 1;
        } else {
            violations.push(Violation::MachineOutOfRange {
                job: p.job,
                machine: p.machine,
            });
        }
    }
    for (idx, &count) in counts.iter().enumerate() {
        if count > instance.k() {
            violations.push(Violation::OverCap {
                machine: idx + 1,
                count,
            });
        }
    }
    for job in instance.jobs() {
        match seen.get(&job.id) {
            None => violations.push(Violation::Unassigned { job: job.id }),
            Some(&times) if times > 1 => violations.push(Violation::MultiplyAssigned {
                job: job.id,
                times,
            }),
            _ => {}
        }
    }
    violations
}

/// One job moved between machines as a side effect of an arrival.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Move {
    pub job: JobId,
    pub from: MachineId,
    pub to: MachineId,
}

/// Migrations triggered by a single arrival.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MigrationRecord {
    pub trigger: JobId,
    pub moves: Vec<Move>,
    /// Total original size of the moved jobs.
    pub moved_size: f64,
}

impl MigrationRecord {
    pub fn none(trigger: JobId) -> Self {
        Self {
            trigger,
            moves: Vec::new(),
            moved_size: 0.0,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }
}

/// State after one arrival.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub job: JobId,
    pub size: f64,
    pub machine: MachineId,
    pub migration: MigrationRecord,
    pub loads: Vec<f64>,
    pub makespan: f64,
}

/// Per-arrival evidence of an online run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    pub m: usize,
    pub k: usize,
    pub steps: Vec<TraceStep>,
}

impl Trace {
    pub fn sizes(&self) -> Vec<f64> {
        self.steps.iter().map(|s| s.size).collect()
    }

    pub fn final_makespan(&self) -> f64 {
        self.steps.last().map_or(0.0, |s| s.makespan)
    }

    /// Final machine of every job, following recorded moves.
    pub fn final_assignment(&self) -> Vec<MachineId> {
        let mut machine_of: Vec<MachineId> = Vec::with_capacity(self.steps.len());
        for step in &self.steps {
            machine_of.push(step.machine);
            for mv in &step.migration.moves {
                if let Some(slot) = mv.job.checked_sub(1).and_then(|i| machine_of.get_mut(i)) {
                    *slot = mv.to;
                }
            }
        }
        machine_of
    }

    /// Replays placements and moves, returning the final schedule. Fails if
    /// the recorded sizes disagree with `instance` or a move does not start
    /// from the job's current machine.
    pub fn replay(&self, instance: &Instance) -> Result<Schedule> {
        if instance.m() != self.m || instance.k() != self.k || instance.n() != self.steps.len() {
            return Err(Error::InvalidParameter(
                "trace does not match the instance dimensions".into(),
            ));
        }
        let mut machine_of: Vec<MachineId> = Vec::with_capacity(self.steps.len());
        for (idx, step) in self.steps.iter().enumerate() {
            let arrival = idx + 1;
            let violation = |reason: String| Error::ContractViolation { arrival, reason };
            if instance.size_of(arrival) != Some(step.size) || step.job != arrival {
                return Err(violation("recorded job differs from the instance".into()));
            }
            machine_of.push(step.machine);
            for mv in &step.migration.moves {
                let slot = mv
                    .job
                    .checked_sub(1)
                    .and_then(|i| machine_of.get_mut(i))
                    .ok_or_else(|| violation(format!("move of unknown job {}", mv.job)))?;
                if *slot != mv.from {
                    return Err(violation(format!(
                        "job {} moved from {} but sits on {}",
                        mv.job, mv.from, slot
                    )));
                }
                *slot = mv.to;
            }
        }
        Ok(Schedule::from_machines(&machine_of))
    }
}
