//! The ordinal algorithm: a fixed map from sorted position to machine.
//!
//! Positions are 1-based ranks in the non-increasing order of sizes. The map
//! depends only on `(m, k)`, so it can be built once and reused.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::model::{Instance, MachineId, Schedule};
use crate::oracle::sorted_ids;

/// Number of phases, `floor(log2 m) + 2`.
pub fn phase_count(m: usize) -> usize {
    assert!(m >= 1, "m must be positive");
    m.ilog2() as usize + 2
}

/// Border machine `mu(i) = floor(m / 2^(xi - i)) + 1` for `i` in `1..=xi`.
pub fn border(m: usize, i: usize) -> MachineId {
    let xi = phase_count(m);
    assert!((1..=xi).contains(&i), "border index {i} outside 1..={xi}");
    (m >> (xi - i)) + 1
}

/// All borders `mu(1), ..., mu(xi)`.
pub fn borders(m: usize) -> Vec<MachineId> {
    (1..=phase_count(m)).map(|i| border(m, i)).collect()
}

/// Jobs the first border machine of phase `s` receives during phase `s`,
/// in closed form. Requires `s >= 2` and `k >= 3`.
pub fn iota(s: usize, k: usize) -> usize {
    assert!(s >= 2 && k >= 3, "iota needs s >= 2 and k >= 3");
    let q = (k - 1) / 3;
    if (k - 1) % 3 == 1 && s % 2 == 1 {
        q
    } else {
        (k - 1).div_ceil(3)
    }
}

/// The same count from its defining recursion.
pub fn iota_recursive(s: usize, k: usize) -> usize {
    assert!(s >= 2 && k >= 3, "iota needs s >= 2 and k >= 3");
    let mut value = (k - 1).div_ceil(3);
    for _ in 3..=s {
        value = (k - 1 - value).div_ceil(2);
    }
    value
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrdinalMap {
    pub m: usize,
    pub k: usize,
    /// `sigma[pos - 1]` is the machine of the `pos`-th largest job.
    pub sigma: Vec<MachineId>,
    /// Phase in which each position is assigned. Special cases use phase 1
    /// for the first `m` positions and phase 2 for the rest.
    pub phase: Vec<usize>,
}

impl OrdinalMap {
    pub fn machine(&self, position: usize) -> MachineId {
        self.sigma[position - 1]
    }

    pub fn len(&self) -> usize {
        self.sigma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigma.is_empty()
    }

    /// Jobs `machine` receives during `phase`.
    pub fn received_in_phase(&self, machine: MachineId, phase: usize) -> usize {
        self.sigma
            .iter()
            .zip(&self.phase)
            .filter(|&(&mach, &ph)| mach == machine && ph == phase)
            .count()
    }
}

struct Builder {
    k: usize,
    counts: Vec<usize>,
    sigma: Vec<MachineId>,
    phase: Vec<usize>,
}

impl Builder {
    /// One round over machines `[left, right)`.
    fn round(&mut self, left: MachineId, right: MachineId, phase: usize) {
        for machine in left..right {
            let count = &mut self.counts[machine - 1];
            assert!(*count < self.k, "round overflows machine {machine}");
            *count += 1;
            self.sigma.push(machine);
            self.phase.push(phase);
        }
    }

    fn full(&self, left: MachineId, right: MachineId) -> bool {
        (left..right).all(|mach| self.counts[mach - 1] == self.k)
    }
}

pub fn ordinal_map(m: usize, k: usize) -> OrdinalMap {
    assert!(m >= 1 && k >= 1, "m and k must be positive");
    if m == 1 || k <= 2 {
        return special_case(m, k);
    }
    let xi = phase_count(m);
    let mu = |i: usize| border(m, i);
    let mut b = Builder {
        k,
        counts: vec![0; m],
        sigma: Vec::with_capacity(m * k),
        phase: Vec::with_capacity(m * k),
    };

    b.round(1, m + 1, 1);

    let (wide, narrow, right) = (mu(xi - 2), mu(xi - 1), mu(xi));
    'second: loop {
        for left in [wide, narrow, narrow] {
            if b.full(narrow, right) {
                break 'second;
            }
            b.round(left, right, 2);
        }
    }

    for s in 3..xi {
        let (wide, narrow, right) = (mu(xi - s), mu(xi - s + 1), mu(xi - s + 2));
        let mut left = wide;
        while !b.full(narrow, right) {
            b.round(left, right, s);
            left = if left == wide { narrow } else { wide };
        }
    }

    while b.counts[0] < k {
        b.round(1, 2, xi);
    }

    assert!(b.counts.iter().all(|&c| c == k), "every machine ends with k positions");
    OrdinalMap {
        m,
        k,
        sigma: b.sigma,
        phase: b.phase,
    }
}

fn special_case(m: usize, k: usize) -> OrdinalMap {
    let sigma: Vec<MachineId> = if m == 1 {
        vec![1; k]
    } else if k == 1 {
        (1..=m).collect()
    } else {
        (1..=m).chain((1..=m).rev()).collect()
    };
    let phase = (0..sigma.len()).map(|pos| if pos < m { 1 } else { 2 }).collect();
    OrdinalMap { m, k, sigma, phase }
}

/// Sorts the jobs (ties by arrival), pads to `m * k` with zero-size virtual
/// jobs and applies [`ordinal_map`]. Virtual jobs are not part of the result.
pub fn ordinal_schedule(instance: &Instance) -> Result<Schedule> {
    instance.ensure_feasible()?;
    let map = ordinal_map(instance.m(), instance.k());
    let mut machines = vec![0; instance.n()];
    for (rank, id) in sorted_ids(instance).into_iter().enumerate() {
        machines[id - 1] = map.sigma[rank];
    }
    Ok(Schedule::from_machines(&machines))
}
