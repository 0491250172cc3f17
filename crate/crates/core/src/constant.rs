//! Constant-competitive online scheduling under a per-machine job cap.
//!
//! Every machine has `k` slots and the slots are organized in rows, one slot
//! per machine. Sizes are rounded down to powers of two and bucketed by their
//! distance to the current maximum: group `i` holds jobs of size
//! `p_max / 2^i` for `i <= l = floor(2 log2 k)`, everything smaller is a
//! small job. While the structure is live it keeps
//!
//! * for each `i` in `0..=l` one pure row (only group `i`) and one mixed row
//!   (group `i` and small jobs), never both full,
//! * `ceil(k/2) - 2(l+1)` small rows, none full,
//! * `floor(k/2)` free rows.
//!
//! Full rows are retired: their jobs stay on their machines, but the row no
//! longer counts and the working `k` drops by the number of rows retired.
//! Once the working `k` falls below [`STRUCTURE_MIN_K`] the remaining slots
//! are filled by fewest-jobs-first; instances that start below it use that
//! rule from the beginning.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{JobId, MachineId, Trace};
use crate::online::{OnlineScheduler, SchedulerDecision};
use crate::rounding::{int_pow, round_down_pow2};

/// Smallest working `k` for which the row structure is maintained.
pub const STRUCTURE_MIN_K: usize = 50;

/// `floor(2 log2 k)`, computed without floating point.
pub fn last_group_index(k: usize) -> usize {
    let squared = (k as u128) * (k as u128);
    squared.ilog2() as usize
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// `k < 50` from the start: balanced fill forever.
    Fallback,
    /// Waiting for the first job to fix `p_max`.
    Uninitialized,
    Structured,
    /// Working `k` dropped below 50; the structure is frozen.
    Terminal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowKind {
    Free,
    GroupPure(usize),
    GroupMixed(usize),
    Small,
    Removed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Row {
    pub id: usize,
    pub kind: RowKind,
    /// `slots[machine - 1]` holds the job in that machine's slot.
    pub slots: Vec<Option<JobId>>,
}

impl Row {
    pub fn filled(&self) -> usize {
        self.slots.iter().filter(|s| s.is_some()).count()
    }

    pub fn is_full(&self) -> bool {
        self.slots.iter().all(Option::is_some)
    }

    pub fn is_empty(&self) -> bool {
        self.slots.iter().all(Option::is_none)
    }
}

/// Bookkeeping for one placed job.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlacedJob {
    pub id: JobId,
    pub size: f64,
    pub exponent: i32,
    /// `log2 p_max` when the job arrived (after any update it caused).
    pub p_max_exponent: i32,
    /// Group index at placement; `None` for small jobs and balanced fill.
    pub group: Option<usize>,
    pub machine: MachineId,
    pub row: Option<usize>,
}

/// Read-only copy of the scheduler's internal state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowStructure {
    pub m: usize,
    pub original_k: usize,
    pub active_k: usize,
    pub mode: Mode,
    pub p_max_exponent: Option<i32>,
    pub p_max: Option<f64>,
    pub last_group: usize,
    pub rows: Vec<Row>,
    pub jobs: Vec<PlacedJob>,
}

impl RowStructure {
    pub fn is_fallback(&self) -> bool {
        self.mode == Mode::Fallback
    }

    pub fn rows_of(&self, kind: RowKind) -> impl Iterator<Item = &Row> {
        self.rows.iter().filter(move |r| r.kind == kind)
    }

    pub fn count_of(&self, kind: RowKind) -> usize {
        self.rows_of(kind).count()
    }

    pub fn removed_rows(&self) -> impl Iterator<Item = &Row> {
        self.rows_of(RowKind::Removed)
    }

    pub fn live_rows(&self) -> usize {
        self.rows.iter().filter(|r| r.kind != RowKind::Removed).count()
    }

    /// Checks the structural invariants. Slot bookkeeping is checked in
    /// every mode; the row-count invariants only while the structure is live.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        for job in &self.jobs {
            if let Some(row) = job.row {
                if self.rows[row].slots[job.machine - 1] != Some(job.id) {
                    return Err(format!("job {} missing from row {row}", job.id));
                }
            }
        }
        let mut per_machine = vec![0usize; self.m];
        for job in &self.jobs {
            per_machine[job.machine - 1] += 1;
        }
        if let Some(machine) = per_machine.iter().position(|&c| c > self.original_k) {
            return Err(format!("machine {} over cap", machine + 1));
        }
        if self.mode != Mode::Structured {
            return Ok(());
        }

        let l = self.last_group;
        if l != last_group_index(self.active_k) {
            return Err(format!("l = {l} but k = {} needs {}", self.active_k, last_group_index(self.active_k)));
        }
        if self.live_rows() != self.active_k {
            return Err(format!("{} live rows for k = {}", self.live_rows(), self.active_k));
        }
        for row in self.removed_rows() {
            if !row.is_full() {
                return Err(format!("removed row {} is not full", row.id));
            }
        }
        for i in 0..=l {
            let pure: Vec<_> = self.rows_of(RowKind::GroupPure(i)).collect();
            let mixed: Vec<_> = self.rows_of(RowKind::GroupMixed(i)).collect();
            if pure.len() != 1 || mixed.len() != 1 {
                return Err(format!("group {i} has {} pure and {} mixed rows", pure.len(), mixed.len()));
            }
            if pure[0].is_full() && mixed[0].is_full() {
                return Err(format!("both rows of group {i} are full"));
            }
            for job in pure[0].slots.iter().flatten() {
                if self.jobs[job - 1].group != Some(i) {
                    return Err(format!("pure row of group {i} holds job {job} from another group"));
                }
            }
        }
        for row in &self.rows {
            match row.kind {
                RowKind::GroupPure(i) | RowKind::GroupMixed(i) if i > l => {
                    return Err(format!("row {} labelled with dropped group {i}", row.id));
                }
                RowKind::Small if row.is_full() => {
                    return Err(format!("small row {} is full", row.id));
                }
                RowKind::Free if !row.is_empty() => {
                    return Err(format!("free row {} holds jobs", row.id));
                }
                _ => {}
            }
        }
        let small = self.count_of(RowKind::Small);
        let expected_small = self.active_k.div_ceil(2) - 2 * (l + 1);
        if small != expected_small {
            return Err(format!("{small} small rows, expected {expected_small}"));
        }
        let free = self.count_of(RowKind::Free);
        if free != self.active_k / 2 {
            return Err(format!("{free} free rows, expected {}", self.active_k / 2));
        }
        Ok(())
    }
}

/// The row-structured online scheduler.
#[derive(Debug, Clone)]
pub struct ConstantCompetitive {
    m: usize,
    original_k: usize,
    active_k: usize,
    mode: Mode,
    p_max_exponent: Option<i32>,
    last_group: usize,
    rows: Vec<Row>,
    /// `(pure row, mixed row)` for each group index.
    pairs: Vec<(usize, usize)>,
    counts: Vec<usize>,
    jobs: Vec<PlacedJob>,
}

impl ConstantCompetitive {
    pub fn new(m: usize, k: usize) -> Result<Self> {
        if m == 0 || k == 0 {
            return Err(Error::InvalidParameter(format!(
                "m and k must be positive (m = {m}, k = {k})"
            )));
        }
        let mode = if k < STRUCTURE_MIN_K {
            Mode::Fallback
        } else {
            Mode::Uninitialized
        };
        Ok(Self {
            m,
            original_k: k,
            active_k: k,
            mode,
            p_max_exponent: None,
            last_group: last_group_index(k),
            rows: Vec::new(),
            pairs: Vec::new(),
            counts: vec![0; m],
            jobs: Vec::new(),
        })
    }

    pub fn structure_snapshot(&self) -> RowStructure {
        RowStructure {
            m: self.m,
            original_k: self.original_k,
            active_k: self.active_k,
            mode: self.mode,
            p_max_exponent: self.p_max_exponent,
            p_max: self.p_max_exponent.map(|e| int_pow(2.0, e)),
            last_group: self.last_group,
            rows: self.rows.clone(),
            jobs: self.jobs.clone(),
        }
    }

    /// Rounded size of every job placed so far, in arrival order.
    pub fn rounded_sizes(&self) -> Vec<f64> {
        self.jobs.iter().map(|j| int_pow(2.0, j.exponent)).collect()
    }

    fn initialize(&mut self) {
        let k = self.original_k;
        let l = self.last_group;
        let small = k.div_ceil(2) - 2 * (l + 1);
        let mut kinds = Vec::with_capacity(k);
        for i in 0..=l {
            kinds.push(RowKind::GroupPure(i));
            kinds.push(RowKind::GroupMixed(i));
        }
        kinds.extend(std::iter::repeat_n(RowKind::Small, small));
        kinds.extend(std::iter::repeat_n(RowKind::Free, k / 2));
        self.rows = kinds
            .into_iter()
            .enumerate()
            .map(|(id, kind)| Row {
                id,
                kind,
                slots: vec![None; self.m],
            })
            .collect();
        self.pairs = (0..=l).map(|i| (2 * i, 2 * i + 1)).collect();
        self.mode = Mode::Structured;
    }

    /// Machine with the fewest jobs among those with an empty slot in `row`.
    fn slot_in_row(&self, row: usize) -> MachineId {
        let slots = &self.rows[row].slots;
        (0..self.m)
            .filter(|&mach| slots[mach].is_none())
            .min_by_key(|&mach| (self.counts[mach], mach))
            .expect("row has an empty slot")
            + 1
    }

    fn fill(&mut self, row: usize, machine: MachineId, job: JobId) {
        self.rows[row].slots[machine - 1] = Some(job);
    }

    fn free_row(&self) -> usize {
        self.rows
            .iter()
            .position(|r| r.kind == RowKind::Free)
            .expect("free rows are never exhausted while the structure is live")
    }

    /// Fullest row of a kind that still has room, ties to the lowest id.
    fn fullest_open(&self, kind: RowKind) -> Option<usize> {
        self.rows
            .iter()
            .filter(|r| r.kind == kind && !r.is_full())
            .min_by_key(|r| (self.m - r.filled(), r.id))
            .map(|r| r.id)
    }

    fn retire(&mut self, row: usize) {
        self.rows[row].kind = RowKind::Removed;
        self.active_k -= 1;
    }

    fn enter_terminal_if_needed(&mut self) -> bool {
        if self.active_k < STRUCTURE_MIN_K {
            self.mode = Mode::Terminal;
            true
        } else {
            false
        }
    }

    fn top_up_small(&mut self) {
        let target = self.active_k.div_ceil(2) - 2 * (self.last_group + 1);
        let mut small = self.rows.iter().filter(|r| r.kind == RowKind::Small).count();
        debug_assert!(small <= target, "too many small rows");
        while small < target {
            let free = self.free_row();
            self.rows[free].kind = RowKind::Small;
            small += 1;
        }
    }

    /// Both rows of group `group` are full.
    fn retire_pair(&mut self, group: usize) {
        let (pure, mixed) = self.pairs[group];
        self.retire(pure);
        self.retire(mixed);
        if self.enter_terminal_if_needed() {
            return;
        }
        let l = self.last_group;
        let new_l = last_group_index(self.active_k);
        debug_assert!(new_l + 1 >= l);
        if new_l == l {
            // A small row becomes the new mixed row, a free row the new pure row.
            let small = self
                .fullest_open(RowKind::Small)
                .expect("at least one small row while the structure is live");
            let free = self.free_row();
            self.rows[small].kind = RowKind::GroupMixed(group);
            self.rows[free].kind = RowKind::GroupPure(group);
            self.pairs[group] = (free, small);
        } else if group == l {
            // The group disappears.
            self.pairs.pop();
            self.last_group = new_l;
            self.top_up_small();
        } else {
            // Group l joins the small jobs and lends a row to the group.
            let (old_pure, old_mixed) = self.pairs.pop().expect("group l exists");
            let (keep, release) = if self.rows[old_pure].filled() > self.rows[old_mixed].filled() {
                (old_pure, old_mixed)
            } else {
                (old_mixed, old_pure)
            };
            let free = self.free_row();
            self.rows[keep].kind = RowKind::GroupMixed(group);
            self.rows[release].kind = RowKind::Small;
            self.rows[free].kind = RowKind::GroupPure(group);
            self.pairs[group] = (free, keep);
            self.last_group = new_l;
            self.top_up_small();
        }
    }

    /// A small row became full.
    fn retire_small(&mut self, row: usize) {
        self.retire(row);
        loop {
            if self.enter_terminal_if_needed() {
                return;
            }
            let new_l = last_group_index(self.active_k);
            while new_l < self.last_group {
                let (pure, mixed) = self.pairs.pop().expect("group l exists");
                self.rows[pure].kind = RowKind::Small;
                self.rows[mixed].kind = RowKind::Small;
                self.last_group -= 1;
            }
            // A merged row may already be full; retire it and repair again.
            let full_small = self
                .rows
                .iter()
                .find(|r| r.kind == RowKind::Small && r.is_full())
                .map(|r| r.id);
            match full_small {
                Some(full) => self.retire(full),
                None => break,
            }
        }
        self.top_up_small();
    }

    fn balanced_machine(&self) -> Result<MachineId> {
        (0..self.m)
            .filter(|&mach| self.counts[mach] < self.original_k)
            .min_by_key(|&mach| (self.counts[mach], mach))
            .map(|mach| mach + 1)
            .ok_or(Error::Infeasible {
                jobs: self.jobs.len() + 1,
                capacity: self.m * self.original_k,
            })
    }

    fn record(&mut self, job: PlacedJob) -> SchedulerDecision {
        self.counts[job.machine - 1] += 1;
        self.jobs.push(job);
        SchedulerDecision::place(job.id, job.machine)
    }
}

impl OnlineScheduler for ConstantCompetitive {
    fn name(&self) -> &str {
        "constant"
    }

    fn machines(&self) -> usize {
        self.m
    }

    fn cap(&self) -> usize {
        self.original_k
    }

    fn on_arrival(&mut self, size: f64) -> Result<SchedulerDecision> {
        let (_, exponent) = round_down_pow2(size)?;
        let id = self.jobs.len() + 1;
        if id > self.m * self.original_k {
            return Err(Error::Infeasible {
                jobs: id,
                capacity: self.m * self.original_k,
            });
        }
        let p_max_exponent = self.p_max_exponent.map_or(exponent, |e| e.max(exponent));
        self.p_max_exponent = Some(p_max_exponent);
        let mut placed = PlacedJob {
            id,
            size,
            exponent,
            p_max_exponent,
            group: None,
            machine: 0,
            row: None,
        };

        match self.mode {
            Mode::Fallback => {
                placed.machine = self.balanced_machine()?;
                return Ok(self.record(placed));
            }
            Mode::Terminal => {
                placed.machine = self.balanced_machine()?;
                let row = self
                    .rows
                    .iter()
                    .find(|r| r.kind != RowKind::Removed && r.slots[placed.machine - 1].is_none())
                    .map(|r| r.id)
                    .expect("a machine below the cap has a live empty slot");
                placed.row = Some(row);
                self.fill(row, placed.machine, id);
                return Ok(self.record(placed));
            }
            Mode::Uninitialized => self.initialize(),
            Mode::Structured => {}
        }

        let group = (p_max_exponent - exponent) as usize;
        if group <= self.last_group {
            let (pure, mixed) = self.pairs[group];
            let open = |row: usize| !self.rows[row].is_full();
            let row = match (open(pure), open(mixed)) {
                (true, true) => {
                    if self.rows[pure].filled() > self.rows[mixed].filled() {
                        pure
                    } else {
                        mixed
                    }
                }
                (true, false) => pure,
                (false, true) => mixed,
                (false, false) => unreachable!("one row of every pair has room"),
            };
            placed.group = Some(group);
            placed.row = Some(row);
            placed.machine = self.slot_in_row(row);
            self.fill(row, placed.machine, id);
            let decision = self.record(placed);
            if self.rows[pure].is_full() && self.rows[mixed].is_full() {
                self.retire_pair(group);
            }
            Ok(decision)
        } else {
            let row = self
                .fullest_open(RowKind::Small)
                .expect("small rows exist while the structure is live");
            placed.row = Some(row);
            placed.machine = self.slot_in_row(row);
            self.fill(row, placed.machine, id);
            let decision = self.record(placed);
            if self.rows[row].is_full() {
                self.retire_small(row);
            }
            Ok(decision)
        }
    }
}

/// Outcome of [`certify_load_bound`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoadCertificate {
    pub max_rounded_load: f64,
    pub bound: f64,
    /// `true` when the instance ran in fallback mode and only the
    /// `k * p_max` check applied.
    pub fallback: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoadBoundViolation {
    pub machine: MachineId,
    pub rounded_load: f64,
    pub bound: f64,
}

/// Checks the end-of-stream load guarantee on rounded sizes: every machine
/// carries at most `(2/m) * total + (50 - 1/(k-1)) * p_max`. For `k < 50`
/// the check is `k * p_max`.
pub fn certify_load_bound(
    trace: &Trace,
    rounded: &[f64],
) -> std::result::Result<LoadCertificate, LoadBoundViolation> {
    let (m, k) = (trace.m, trace.k);
    let assignment = trace.final_assignment();
    let mut loads = vec![0.0; m];
    for (job, &machine) in assignment.iter().enumerate() {
        loads[machine - 1] += rounded[job];
    }
    let p_max = rounded.iter().copied().fold(0.0, f64::max);
    let total: f64 = rounded.iter().sum();
    let fallback = k < STRUCTURE_MIN_K;
    let bound = if fallback {
        k as f64 * p_max
    } else {
        2.0 / m as f64 * total + (50.0 - 1.0 / (k as f64 - 1.0)) * p_max
    };
    let mut max_rounded_load: f64 = 0.0;
    for (idx, &load) in loads.iter().enumerate() {
        if load > bound {
            return Err(LoadBoundViolation {
                machine: idx + 1,
                rounded_load: load,
                bound,
            });
        }
        max_rounded_load = max_rounded_load.max(load);
    }
    Ok(LoadCertificate {
        max_rounded_load,
        bound,
        fallback,
    })
}
