//! Bounded-migration scheduling by re-sorting a rounded list and applying the
//! ordinal map.
//!
//! Sizes are rounded up to powers of `1 + eps`. The list of all jobs sorted by
//! rounded size is padded with zero dummies to `m * k` positions, and
//! position `p` always lives on machine `sigma(p)`. When a job arrives it
//! joins the tail of its size class, and every smaller class rotates its head
//! to its tail. Only those heads change position, so at most one job per
//! smaller class migrates.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{JobId, MachineId, MigrationRecord, Move};
use crate::online::{OnlineScheduler, SchedulerDecision};
use crate::ordinal::{ordinal_map, OrdinalMap};
use crate::rounding::{int_pow, round_up_geometric};

/// Jobs grouped by rounded-size exponent, plus the zero dummies that pad the
/// list to full length.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeClassList {
    classes: BTreeMap<i32, VecDeque<JobId>>,
    dummies: usize,
}

impl SizeClassList {
    pub fn new(total_positions: usize) -> Self {
        Self {
            classes: BTreeMap::new(),
            dummies: total_positions,
        }
    }

    pub fn dummies(&self) -> usize {
        self.dummies
    }

    pub fn class(&self, exponent: i32) -> Option<&VecDeque<JobId>> {
        self.classes.get(&exponent)
    }

    /// Real jobs in list order: classes by descending exponent, each from
    /// head to tail.
    pub fn order(&self) -> impl Iterator<Item = JobId> + '_ {
        self.classes.values().rev().flat_map(|queue| queue.iter().copied())
    }

    /// `(job, 1-based position)` for every real job.
    pub fn positions(&self) -> Vec<(JobId, usize)> {
        self.order().enumerate().map(|(idx, job)| (job, idx + 1)).collect()
    }

    /// Inserts `job` into class `exponent` and rotates the head of every
    /// smaller nonempty class to its tail. Returns the rotated jobs, largest
    /// class first. A class with a single member still counts as rotated even
    /// though its position is unchanged.
    pub fn resort_on_arrival(&mut self, job: JobId, exponent: i32) -> Result<Vec<JobId>> {
        if self.dummies == 0 {
            return Err(Error::Infeasible {
                jobs: self.order().count() + 1,
                capacity: self.order().count(),
            });
        }
        self.classes.entry(exponent).or_default().push_back(job);
        let mut moved = Vec::new();
        for (_, queue) in self.classes.range_mut(..exponent).rev() {
            if let Some(head) = queue.pop_front() {
                queue.push_back(head);
                moved.push(head);
            }
        }
        self.dummies -= 1;
        Ok(moved)
    }
}

#[derive(Debug, Clone)]
pub struct RobustOrdinal {
    m: usize,
    k: usize,
    epsilon: f64,
    map: OrdinalMap,
    list: SizeClassList,
    exponents: Vec<i32>,
    machine_of: Vec<MachineId>,
    last_rotated: Vec<JobId>,
}

impl RobustOrdinal {
    pub fn new(m: usize, k: usize, epsilon: f64) -> Result<Self> {
        if m == 0 || k == 0 {
            return Err(Error::InvalidParameter(format!(
                "m and k must be positive (m = {m}, k = {k})"
            )));
        }
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "epsilon must be positive, got {epsilon}"
            )));
        }
        Ok(Self {
            m,
            k,
            epsilon,
            map: ordinal_map(m, k),
            list: SizeClassList::new(m * k),
            exponents: Vec::new(),
            machine_of: Vec::new(),
            last_rotated: Vec::new(),
        })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn list(&self) -> &SizeClassList {
        &self.list
    }

    pub fn map(&self) -> &OrdinalMap {
        &self.map
    }

    /// Rounded size of every job so far, in arrival order.
    pub fn rounded_sizes(&self) -> Vec<f64> {
        let base = 1.0 + self.epsilon;
        self.exponents.iter().map(|&e| int_pow(base, e)).collect()
    }

    /// Class heads rotated by the most recent arrival.
    pub fn last_rotated(&self) -> &[JobId] {
        &self.last_rotated
    }

    /// Current machine of every job, in arrival order.
    pub fn assignment(&self) -> &[MachineId] {
        &self.machine_of
    }
}

impl OnlineScheduler for RobustOrdinal {
    fn name(&self) -> &str {
        "robust-ordinal"
    }

    fn machines(&self) -> usize {
        self.m
    }

    fn cap(&self) -> usize {
        self.k
    }

    fn on_arrival(&mut self, size: f64) -> Result<SchedulerDecision> {
        let (_, exponent) = round_up_geometric(size, self.epsilon)?;
        let job = self.exponents.len() + 1;
        let rotated = self.list.resort_on_arrival(job, exponent)?;
        self.exponents.push(exponent);
        self.machine_of.push(0);

        let mut placed = 0;
        let mut moves = Vec::new();
        for (id, position) in self.list.positions() {
            let machine = self.map.machine(position);
            let current = &mut self.machine_of[id - 1];
            if id == job {
                placed = machine;
            } else if *current != machine {
                moves.push(Move {
                    job: id,
                    from: *current,
                    to: machine,
                });
            }
            *current = machine;
        }
        moves.sort_by_key(|mv| mv.job);
        self.last_rotated = rotated;
        Ok(SchedulerDecision {
            machine: placed,
            migrations: MigrationRecord {
                trigger: job,
                moves,
                moved_size: 0.0,
            },
        })
    }

    fn migration_factor(&self) -> Option<f64> {
        Some((1.0 + self.epsilon) / self.epsilon)
    }
}
