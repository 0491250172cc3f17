//! Class-constrained scheduling: each machine may host jobs of at most `k`
//! distinct classes, any number of jobs each. Machines may run at different
//! speeds; a machine's load is its total size divided by its speed.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::adversary::{AdversaryReport, OptProvenance, TranscriptEntry};
use crate::error::{Error, Result};
use crate::model::MachineId;

/// Class labels start at 1.
pub type ClassId = u64;

/// Largest instance [`clcs_exact`] will enumerate.
pub const CLCS_BRUTE_LIMIT: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassedJob {
    pub id: usize,
    pub size: f64,
    pub class: ClassId,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClcsInstance {
    jobs: Vec<ClassedJob>,
    m: usize,
    k: usize,
    speeds: Vec<f64>,
}

impl ClcsInstance {
    pub fn new(jobs: &[(f64, ClassId)], m: usize, k: usize, speeds: Option<Vec<f64>>) -> Result<Self> {
        if m == 0 || k == 0 {
            return Err(Error::InvalidParameter(format!(
                "m and k must be positive (m = {m}, k = {k})"
            )));
        }
        let speeds = speeds.unwrap_or_else(|| vec![1.0; m]);
        if speeds.len() != m || speeds.iter().any(|&s| !(s.is_finite() && s > 0.0)) {
            return Err(Error::InvalidParameter(format!(
                "need {m} positive speeds, got {speeds:?}"
            )));
        }
        let mut built = Vec::with_capacity(jobs.len());
        for (idx, &(size, class)) in jobs.iter().enumerate() {
            if !(size.is_finite() && size >= 0.0) {
                return Err(Error::Domain(format!("job {} has size {size}", idx + 1)));
            }
            if class == 0 {
                return Err(Error::Domain(format!("job {} has class 0", idx + 1)));
            }
            built.push(ClassedJob {
                id: idx + 1,
                size,
                class,
            });
        }
        Ok(Self {
            jobs: built,
            m,
            k,
            speeds,
        })
    }

    pub fn jobs(&self) -> &[ClassedJob] {
        &self.jobs
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn speeds(&self) -> &[f64] {
        &self.speeds
    }

    pub fn n(&self) -> usize {
        self.jobs.len()
    }
}

/// Speed-scaled loads of an assignment (`machines[j]` is job `j+1`'s machine).
pub fn clcs_loads(instance: &ClcsInstance, machines: &[MachineId]) -> Vec<f64> {
    let mut sums = vec![0.0; instance.m];
    for (job, &mach) in instance.jobs.iter().zip(machines) {
        sums[mach - 1] += job.size;
    }
    sums.iter().zip(&instance.speeds).map(|(s, v)| s / v).collect()
}

/// Machines whose assignment uses more than `k` classes.
pub fn class_violations(instance: &ClcsInstance, machines: &[MachineId]) -> Vec<MachineId> {
    let mut classes = vec![BTreeSet::new(); instance.m];
    for (job, &mach) in instance.jobs.iter().zip(machines) {
        classes[mach - 1].insert(job.class);
    }
    (1..=instance.m)
        .filter(|&mach| classes[mach - 1].len() > instance.k)
        .collect()
}

/// Optimal makespan by enumerating all `m^n` assignments.
pub fn clcs_exact(instance: &ClcsInstance) -> Result<f64> {
    let n = instance.n();
    if n > CLCS_BRUTE_LIMIT {
        return Err(Error::TooLarge {
            what: "clcs_exact",
            n,
            limit: CLCS_BRUTE_LIMIT,
        });
    }
    let m = instance.m;
    let mut assignment = vec![1usize; n];
    let mut best = f64::INFINITY;
    loop {
        if class_violations(instance, &assignment).is_empty() {
            let span = clcs_loads(instance, &assignment).into_iter().fold(0.0, f64::max);
            best = best.min(span);
        }
        let mut pos = 0;
        loop {
            if pos == n {
                return if best.is_finite() {
                    Ok(best)
                } else {
                    // Only possible with more than m*k classes.
                    Err(Error::Infeasible {
                        jobs: n,
                        capacity: m * instance.k,
                    })
                };
            }
            assignment[pos] += 1;
            if assignment[pos] <= m {
                break;
            }
            assignment[pos] = 1;
            pos += 1;
        }
    }
}

/// An online scheduler over classed jobs.
pub trait ClcsScheduler {
    fn name(&self) -> &str;
    fn machines(&self) -> usize;
    fn class_cap(&self) -> usize;
    fn on_arrival(&mut self, size: f64, class: ClassId) -> Result<MachineId>;
}

/// Binds each new class to the machine with the fewest bound classes
/// (lowest index on ties) and sends every job to its class's machine.
#[derive(Debug, Clone)]
pub struct GreedyClcs {
    m: usize,
    k: usize,
    bound: Vec<usize>,
    home: std::collections::HashMap<ClassId, MachineId>,
}

impl GreedyClcs {
    pub fn new(m: usize, k: usize) -> Result<Self> {
        if m == 0 || k == 0 {
            return Err(Error::InvalidParameter(format!(
                "m and k must be positive (m = {m}, k = {k})"
            )));
        }
        Ok(Self {
            m,
            k,
            bound: vec![0; m],
            home: Default::default(),
        })
    }

    pub fn classes_on(&self, machine: MachineId) -> usize {
        self.bound[machine - 1]
    }
}

impl ClcsScheduler for GreedyClcs {
    fn name(&self) -> &str {
        "greedy-clcs"
    }

    fn machines(&self) -> usize {
        self.m
    }

    fn class_cap(&self) -> usize {
        self.k
    }

    fn on_arrival(&mut self, _size: f64, class: ClassId) -> Result<MachineId> {
        if let Some(&mach) = self.home.get(&class) {
            return Ok(mach);
        }
        let mach = (0..self.m)
            .filter(|&i| self.bound[i] < self.k)
            .min_by_key(|&i| (self.bound[i], i))
            .ok_or(Error::Infeasible {
                jobs: self.home.len() + 1,
                capacity: self.m * self.k,
            })?
            + 1;
        self.bound[mach - 1] += 1;
        self.home.insert(class, mach);
        Ok(mach)
    }
}

/// Runs a ClCS scheduler and checks the class cap after each arrival.
struct ClcsRun<S> {
    scheduler: S,
    speeds: Vec<f64>,
    sums: Vec<f64>,
    classes: Vec<BTreeSet<ClassId>>,
    transcript: Vec<TranscriptEntry>,
}

impl<S: ClcsScheduler> ClcsRun<S> {
    fn new(scheduler: S, speeds: Vec<f64>) -> Result<Self> {
        let m = scheduler.machines();
        if speeds.len() != m || speeds.iter().any(|&s| !(s.is_finite() && s > 0.0)) {
            return Err(Error::InvalidParameter(format!(
                "need {m} positive speeds, got {speeds:?}"
            )));
        }
        Ok(Self {
            scheduler,
            speeds,
            sums: vec![0.0; m],
            classes: vec![BTreeSet::new(); m],
            transcript: Vec::new(),
        })
    }

    fn send(&mut self, size: f64, class: ClassId) -> Result<MachineId> {
        let arrival = self.transcript.len() + 1;
        let mach = self.scheduler.on_arrival(size, class)?;
        let m = self.scheduler.machines();
        if !(1..=m).contains(&mach) {
            return Err(Error::ContractViolation {
                arrival,
                reason: format!("machine {mach} out of range"),
            });
        }
        self.classes[mach - 1].insert(class);
        if self.classes[mach - 1].len() > self.scheduler.class_cap() {
            return Err(Error::ContractViolation {
                arrival,
                reason: format!("machine {mach} exceeds the class cap"),
            });
        }
        self.sums[mach - 1] += size;
        self.transcript.push(TranscriptEntry {
            size,
            machine: mach,
            class: Some(class),
        });
        Ok(mach)
    }

    fn makespan(&self) -> f64 {
        self.sums
            .iter()
            .zip(&self.speeds)
            .map(|(s, v)| s / v)
            .fold(0.0, f64::max)
    }

    fn finish(self, family: &str, branch: &str, opt_value: f64) -> AdversaryReport {
        let alg_makespan = self.makespan();
        AdversaryReport {
            family: family.to_string(),
            algorithm: self.scheduler.name().to_string(),
            m: self.scheduler.machines(),
            k: self.scheduler.class_cap(),
            branch: branch.to_string(),
            transcript: self.transcript,
            migrations: Vec::new(),
            alg_makespan,
            opt_value,
            opt_provenance: OptProvenance::Analytic,
            ratio: alg_makespan / opt_value,
            aborted: None,
            declared_migration_factor: None,
        }
    }
}

/// Feeds an instance to a scheduler and returns the chosen machines and the
/// speed-scaled makespan.
pub fn run_clcs<S: ClcsScheduler>(scheduler: S, instance: &ClcsInstance) -> Result<(Vec<MachineId>, f64)> {
    let mut run = ClcsRun::new(scheduler, instance.speeds.clone())?;
    for job in &instance.jobs {
        run.send(job.size, job.class)?;
    }
    let machines = run.transcript.iter().map(|e| e.machine).collect();
    Ok((machines, run.makespan()))
}

/// `m` unit jobs of one class on identical machines; the optimum is 1.
pub fn identical_lb_report<S: ClcsScheduler>(scheduler: S) -> Result<AdversaryReport> {
    let m = scheduler.machines();
    if m < 2 {
        return Err(Error::InvalidParameter(format!("identical-lb needs m >= 2, got {m}")));
    }
    let mut run = ClcsRun::new(scheduler, vec![1.0; m])?;
    for _ in 0..m {
        run.send(1.0, 1)?;
    }
    Ok(run.finish("clcs-identical-lb", "single-class", 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UniformLbParams {
    /// Speed of machines 2..m; machine 1 has speed 1.
    pub speed: f64,
    pub beta: f64,
    pub epsilon: f64,
    pub rounds_scale: u64,
}

/// Uniform-machine construction: `m*k` unit jobs of distinct classes, then
/// `M * beta` rounds of `min(k, m-1)` jobs of size `1/beta - eps`, one for
/// each of the first classes the scheduler put on the slow machine.
///
/// The reported optimum `max(k, (M + k)/s)` is the makespan of an explicit
/// schedule: the slow machine takes `k` untouched unit classes and each
/// chosen class shares a fast machine with `k-1` unit classes.
pub fn uniform_lb_drive<S: ClcsScheduler>(scheduler: S, params: UniformLbParams) -> Result<AdversaryReport> {
    let (m, k) = (scheduler.machines(), scheduler.class_cap());
    let UniformLbParams {
        speed,
        beta,
        epsilon,
        rounds_scale,
    } = params;
    if m < 2 || !(speed > 1.0) || !(beta > 0.0) || !(epsilon > 0.0 && epsilon < 1.0 / beta) {
        return Err(Error::InvalidParameter(format!(
            "uniform-lb needs m >= 2, s > 1, beta > 0, 0 < eps < 1/beta (m = {m}, s = {speed}, beta = {beta}, eps = {epsilon})"
        )));
    }
    let mut speeds = vec![speed; m];
    speeds[0] = 1.0;
    let mut run = ClcsRun::new(scheduler, speeds)?;
    let classes = (m * k) as ClassId;
    for class in 1..=classes {
        run.send(1.0, class)?;
    }
    let slow: Vec<ClassId> = run
        .transcript
        .iter()
        .filter(|e| e.machine == 1)
        .filter_map(|e| e.class)
        .collect();
    let k_prime = k.min(m - 1).min(slow.len());
    let rounds = (rounds_scale as f64 * beta).round() as u64;
    let small = 1.0 / beta - epsilon;
    for _ in 0..rounds {
        for &class in &slow[..k_prime] {
            run.send(small, class)?;
        }
    }
    let kf = k as f64;
    let opt = kf.max((rounds_scale as f64 + kf) / speed);
    Ok(run.finish("clcs-uniform-lb", "slow-machine-classes", opt))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn instance(jobs: &[(f64, ClassId)], m: usize, k: usize) -> ClcsInstance {
        ClcsInstance::new(jobs, m, k, None).unwrap()
    }

    #[test]
    fn greedy_binding() {
        let (machines, _) = run_clcs(GreedyClcs::new(2, 1).unwrap(), &instance(&[(1.0, 1), (1.0, 2), (1.0, 1)], 2, 1)).unwrap();
        assert_eq!(machines, vec![1, 2, 1]);
        let (machines, span) = run_clcs(GreedyClcs::new(3, 2).unwrap(), &instance(&[(1.0, 7); 4], 3, 2)).unwrap();
        assert_eq!(machines, vec![1; 4]);
        assert_eq!(span, 4.0);
        let mut g = GreedyClcs::new(1, 1).unwrap();
        g.on_arrival(1.0, 1).unwrap();
        assert!(matches!(g.on_arrival(1.0, 2), Err(Error::Infeasible { .. })));
    }

    #[test]
    fn exact_examples() {
        assert_eq!(clcs_exact(&instance(&[(1.0, 1); 3], 3, 1)).unwrap(), 1.0);
        assert_eq!(clcs_exact(&instance(&[(1.0, 1), (2.0, 2), (4.0, 3)], 1, 3)).unwrap(), 7.0);
        let fast = ClcsInstance::new(&[(2.0, 1)], 2, 1, Some(vec![1.0, 2.0])).unwrap();
        assert_eq!(clcs_exact(&fast).unwrap(), 1.0);
        assert!(clcs_exact(&instance(&[(1.0, 1), (1.0, 2)], 1, 1)).is_err());
        assert!(matches!(clcs_exact(&instance(&[(1.0, 1); 9], 2, 1)), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn identical_lb_against_greedy() {
        for m in 2..=6 {
            let r = identical_lb_report(GreedyClcs::new(m, 2).unwrap()).unwrap();
            assert_eq!(r.ratio, m as f64);
        }
    }

    #[test]
    fn identical_lb_against_spreading() {
        struct Spread(usize);
        impl ClcsScheduler for Spread {
            fn name(&self) -> &str {
                "spread"
            }
            fn machines(&self) -> usize {
                3
            }
            fn class_cap(&self) -> usize {
                1
            }
            fn on_arrival(&mut self, _: f64, _: ClassId) -> Result<MachineId> {
                self.0 += 1;
                Ok(self.0)
            }
        }
        let r = identical_lb_report(Spread(0)).unwrap();
        assert_eq!(r.ratio, 1.0);
        assert!(r.transcript.iter().all(|e| e.class == Some(1)));
    }

    #[test]
    fn uniform_lb_against_greedy() {
        let params = UniformLbParams {
            speed: 2.0,
            beta: 1.0,
            epsilon: 0.01,
            rounds_scale: 200,
        };
        let r = uniform_lb_drive(GreedyClcs::new(3, 2).unwrap(), params).unwrap();
        assert!((r.alg_makespan - 398.0).abs() < 1e-9);
        assert_eq!(r.opt_value, 101.0);
        assert!(r.ratio >= 3.6);

        let none = uniform_lb_drive(GreedyClcs::new(3, 2).unwrap(), UniformLbParams { rounds_scale: 0, ..params }).unwrap();
        assert!(none.ratio >= 1.0);
        assert!(uniform_lb_drive(GreedyClcs::new(3, 2).unwrap(), UniformLbParams { epsilon: 1.0, ..params }).is_err());
    }
}
