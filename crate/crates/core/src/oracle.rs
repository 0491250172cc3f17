//! Offline solvers used as denominators for ratio measurements.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{makespan, Instance, MachineId, Schedule};

/// Largest instance [`brute_opt`] will enumerate.
pub const BRUTE_FORCE_LIMIT: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub opt_makespan: f64,
    pub schedule: Schedule,
    pub nodes_explored: u64,
}

/// Job ids sorted by non-increasing size, ties by arrival.
pub(crate) fn sorted_ids(instance: &Instance) -> Vec<usize> {
    let mut ids: Vec<usize> = (1..=instance.n()).collect();
    let jobs = instance.jobs();
    ids.sort_by(|&a, &b| {
        jobs[b - 1]
            .size
            .total_cmp(&jobs[a - 1].size)
            .then(a.cmp(&b))
    });
    ids
}

/// `max(p_max, total / m)`; never above the optimum.
pub fn lower_bound(instance: &Instance) -> f64 {
    instance
        .max_size()
        .max(instance.total_size() / instance.m() as f64)
}

/// Sorts jobs non-increasingly and deals them out round-robin starting at
/// machine 1. Every load is at most `total / m + p_max`.
pub fn sorted_round_robin(instance: &Instance) -> Result<Schedule> {
    instance.ensure_feasible()?;
    let m = instance.m();
    let mut machines = vec![0; instance.n()];
    for (rank, id) in sorted_ids(instance).into_iter().enumerate() {
        machines[id - 1] = rank % m + 1;
    }
    Ok(Schedule::from_machines(&machines))
}

struct Search<'a> {
    sizes: &'a [f64],
    suffix: Vec<f64>,
    m: usize,
    k: usize,
    loads: Vec<f64>,
    counts: Vec<usize>,
    current: Vec<MachineId>,
    best: f64,
    best_assignment: Option<Vec<MachineId>>,
    nodes: u64,
}

impl Search<'_> {
    fn descend(&mut self, depth: usize) {
        self.nodes += 1;
        if depth == self.sizes.len() {
            let span = self.loads.iter().copied().fold(0.0, f64::max);
            if span < self.best {
                self.best = span;
                self.best_assignment = Some(self.current.clone());
            }
            return;
        }
        let size = self.sizes[depth];
        let current_max = self.loads.iter().copied().fold(0.0, f64::max);
        let total: f64 = self.loads.iter().sum::<f64>() + self.suffix[depth];
        // The slack keeps float error in the average from cutting a branch
        // that could still tie below the incumbent.
        if current_max >= self.best || total / self.m as f64 >= self.best * (1.0 + 1e-12) {
            return;
        }
        for machine in 0..self.m {
            if self.counts[machine] >= self.k || self.loads[machine] + size >= self.best {
                continue;
            }
            // Machines in an identical (load, count) state are interchangeable.
            let duplicate = (0..machine).any(|other| {
                self.counts[other] == self.counts[machine]
                    && self.loads[other] == self.loads[machine]
            });
            if duplicate {
                continue;
            }
            let saved = self.loads[machine];
            self.loads[machine] = saved + size;
            self.counts[machine] += 1;
            self.current[depth] = machine + 1;
            self.descend(depth + 1);
            self.loads[machine] = saved;
            self.counts[machine] -= 1;
        }
    }
}

/// Exact optimum by branch and bound over jobs in non-increasing order.
///
/// The incumbent starts at the sorted round-robin schedule. A branch is cut
/// when it cannot beat the incumbent strictly, so ties keep the earlier
/// schedule. Intended for instances of up to about 20 jobs.
pub fn exact_opt(instance: &Instance) -> Result<OracleResult> {
    let incumbent = sorted_round_robin(instance)?;
    let incumbent_value = makespan(&incumbent, instance)?;

    let order = sorted_ids(instance);
    let sizes: Vec<f64> = order
        .iter()
        .map(|&id| instance.jobs()[id - 1].size)
        .collect();
    let mut suffix = vec![0.0; sizes.len() + 1];
    for idx in (0..sizes.len()).rev() {
        suffix[idx] = suffix[idx + 1] + sizes[idx];
    }

    let mut search = Search {
        sizes: &sizes,
        suffix,
        m: instance.m(),
        k: instance.k(),
        loads: vec![0.0; instance.m()],
        counts: vec![0; instance.m()],
        current: vec![0; sizes.len()],
        best: incumbent_value,
        best_assignment: None,
        nodes: 0,
    };
    search.descend(0);

    let schedule = match search.best_assignment {
        Some(sorted_assignment) => {
            let mut machines = vec![0; instance.n()];
            for (pos, &id) in order.iter().enumerate() {
                machines[id - 1] = sorted_assignment[pos];
            }
            Schedule::from_machines(&machines)
        }
        None => incumbent,
    };
    // Report the makespan recomputed in canonical summation order.
    let opt_makespan = makespan(&schedule, instance)?;
    Ok(OracleResult {
        opt_makespan,
        schedule,
        nodes_explored: search.nodes,
    })
}

/// Minimum makespan over every cardinality-feasible assignment, found by
/// plain enumeration. Shares no code with [`exact_opt`].
pub fn brute_opt(instance: &Instance) -> Result<f64> {
    if instance.n() > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge {
            what: "brute_opt",
            n: instance.n(),
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    instance.ensure_feasible()?;
    let sizes = instance.sizes();
    let (m, k, n) = (instance.m(), instance.k(), instance.n());
    let mut assignment = vec![0usize; n];
    let mut best = f64::INFINITY;
    loop {
        let mut counts = vec![0usize; m];
        let mut loads = vec![0.0f64; m];
        for (job, &machine) in assignment.iter().enumerate() {
            counts[machine] += 1;
            loads[machine] += sizes[job];
        }
        if counts.iter().all(|&c| c <= k) {
            best = best.min(loads.into_iter().fold(0.0, f64::max));
        }
        // Odometer increment over m^n assignments.
        let mut pos = 0;
        loop {
            if pos == n {
                return Ok(if n == 0 { 0.0 } else { best });
            }
            assignment[pos] += 1;
            if assignment[pos] < m {
                break;
            }
            assignment[pos] = 0;
            pos += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::check_feasible;

    fn inst(sizes: &[f64], m: usize, k: usize) -> Instance {
        Instance::new(sizes, m, k).unwrap()
    }

    #[test]
    fn exact_examples() {
        assert_eq!(exact_opt(&inst(&[3.0, 2.0, 1.0, 1.0], 2, 2)).unwrap().opt_makespan, 4.0);
        assert_eq!(exact_opt(&inst(&[1.0, 2.0, 3.0], 1, 3)).unwrap().opt_makespan, 6.0);
        let stacked = inst(&[1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 3.0], 3, 3);
        assert_eq!(exact_opt(&stacked).unwrap().opt_makespan, 3.0);
    }

    #[test]
    fn exact_schedule_matches_value() {
        let i = inst(&[7.0, 5.0, 4.0, 3.0, 3.0, 2.0, 1.0], 3, 3);
        let r = exact_opt(&i).unwrap();
        assert!(check_feasible(&r.schedule, &i).is_empty());
        assert_eq!(makespan(&r.schedule, &i).unwrap(), r.opt_makespan);
        assert_eq!(r.opt_makespan, brute_opt(&i).unwrap());
    }

    #[test]
    fn brute_examples() {
        assert_eq!(brute_opt(&inst(&[5.0, 5.0], 2, 1)).unwrap(), 5.0);
        assert_eq!(brute_opt(&inst(&[3.0, 2.0, 1.0, 1.0], 2, 2)).unwrap(), 4.0);
        // {9,9} | {6} = 18 and {9,6} | {9} = 15; enumeration also finds nothing lower.
        assert_eq!(brute_opt(&inst(&[9.0, 9.0, 6.0], 2, 2)).unwrap(), 15.0);
        assert_eq!(brute_opt(&inst(&[], 2, 2)).unwrap(), 0.0);
    }

    #[test]
    fn guards() {
        assert!(matches!(
            brute_opt(&inst(&[1.0; 11], 4, 4)),
            Err(Error::TooLarge { .. })
        ));
        assert!(matches!(
            brute_opt(&inst(&[1.0; 3], 1, 2)),
            Err(Error::Infeasible { .. })
        ));
        assert!(matches!(
            exact_opt(&inst(&[1.0; 5], 2, 2)),
            Err(Error::Infeasible { .. })
        ));
    }

    #[test]
    fn lower_bound_examples() {
        assert_eq!(lower_bound(&inst(&[3.0, 1.0], 2, 2)), 3.0);
        assert_eq!(lower_bound(&inst(&[1.0; 4], 4, 1)), 1.0);
        assert_eq!(lower_bound(&inst(&[1.0; 4], 2, 2)), 2.0);
        assert_eq!(lower_bound(&inst(&[], 2, 2)), 0.0);
    }

    #[test]
    fn sorted_round_robin_examples() {
        let i = inst(&[4.0, 3.0, 2.0, 1.0], 2, 2);
        let s = sorted_round_robin(&i).unwrap();
        assert_eq!(s.jobs_by_machine(2), vec![vec![1, 3], vec![2, 4]]);
        assert_eq!(makespan(&s, &i).unwrap(), 6.0);

        let single = inst(&[5.0], 3, 1);
        assert_eq!(sorted_round_robin(&single).unwrap().machine_of(1), Some(1));

        let full = inst(&[5.0, 1.0, 4.0, 2.0, 2.0, 3.0], 3, 2);
        let s = sorted_round_robin(&full).unwrap();
        assert!(s.jobs_by_machine(3).iter().all(|jobs| jobs.len() == 2));
        assert!(sorted_round_robin(&inst(&[1.0; 7], 3, 2)).is_err());
    }
}
