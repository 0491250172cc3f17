//! Interactive lower-bound drivers. Each driver watches a scheduler's
//! decisions and picks the next job size accordingly, then reports the
//! achieved ratio against an optimum it can justify.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{makespan, Instance, MachineId, MigrationRecord};
use crate::online::{OnlineScheduler, Session, PHI};
use crate::oracle::sorted_round_robin;
use crate::rounding::int_pow;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OptProvenance {
    /// Closed-form value from the construction.
    Analytic,
    /// Computed by an exact solver.
    Oracle,
    /// Makespan of an explicit feasible schedule, so an upper bound.
    Constructive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TranscriptEntry {
    pub size: f64,
    pub machine: MachineId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdversaryReport {
    pub family: String,
    pub algorithm: String,
    pub m: usize,
    pub k: usize,
    /// Which branch of the construction was taken.
    pub branch: String,
    pub transcript: Vec<TranscriptEntry>,
    /// Arrivals that migrated earlier jobs.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub migrations: Vec<MigrationRecord>,
    pub alg_makespan: f64,
    pub opt_value: f64,
    pub opt_provenance: OptProvenance,
    pub ratio: f64,
    /// Set when the driver stopped before the construction completed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aborted: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub declared_migration_factor: Option<f64>,
}

impl AdversaryReport {
    pub fn sizes(&self) -> Vec<f64> {
        self.transcript.iter().map(|e| e.size).collect()
    }

    /// Final machine of every job after applying recorded migrations.
    pub fn final_assignment(&self) -> Vec<MachineId> {
        let mut machines: Vec<_> = self.transcript.iter().map(|e| e.machine).collect();
        for record in &self.migrations {
            for mv in &record.moves {
                machines[mv.job - 1] = mv.to;
            }
        }
        machines
    }
}

pub const FAMILIES: [&str; 4] = ["pure-lb", "balanced-lb", "robust-lb", "phi-lb"];

/// `(-3 + sqrt(837)) / 2`, the positive root of
/// `(18 + (x - 9)/2) / (x + 6) = (x + 6) / 18`.
pub fn robust_lb_constant() -> f64 {
    (-3.0 + 837f64.sqrt()) / 2.0
}

struct Driver<S> {
    session: Session<S>,
    transcript: Vec<TranscriptEntry>,
    migrations: Vec<MigrationRecord>,
}

impl<S: OnlineScheduler> Driver<S> {
    fn new(scheduler: S) -> Self {
        Self {
            session: Session::new(scheduler),
            transcript: Vec::new(),
            migrations: Vec::new(),
        }
    }

    fn send(&mut self, size: f64) -> Result<MachineId> {
        let decision = self.session.arrive(size)?;
        self.transcript.push(TranscriptEntry {
            size,
            machine: decision.machine,
            class: None,
        });
        if !decision.migrations.is_empty() {
            self.migrations.push(decision.migrations);
        }
        Ok(decision.machine)
    }

    fn finish(
        self,
        family: &str,
        branch: &str,
        opt_value: f64,
        opt_provenance: OptProvenance,
        aborted: Option<String>,
    ) -> AdversaryReport {
        let scheduler = self.session.scheduler();
        let alg_makespan = self.session.makespan();
        AdversaryReport {
            family: family.to_string(),
            algorithm: scheduler.name().to_string(),
            m: self.session.m(),
            k: self.session.k(),
            branch: branch.to_string(),
            declared_migration_factor: scheduler.migration_factor(),
            transcript: self.transcript,
            migrations: self.migrations,
            alg_makespan,
            opt_value,
            opt_provenance,
            ratio: alg_makespan / opt_value,
            aborted,
        }
    }
}

fn require(condition: bool, message: impl FnOnce() -> String) -> Result<()> {
    if condition {
        Ok(())
    } else {
        Err(Error::InvalidParameter(message()))
    }
}

/// `m(k-1)` unit jobs, then either one job of size `k` (every machine holds
/// `k-1`) or `m` jobs of size `big`.
pub fn pure_lb_drive<S: OnlineScheduler>(scheduler: S, big: f64) -> Result<AdversaryReport> {
    let (m, k) = (scheduler.machines(), scheduler.cap());
    require(m >= k && k >= 2, || format!("pure-lb needs m >= k >= 2 (m = {m}, k = {k})"))?;
    require(big.is_finite() && big > 0.0, || format!("N must be positive, got {big}"))?;
    let mut d = Driver::new(scheduler);
    for _ in 0..m * (k - 1) {
        d.send(1.0)?;
    }
    let kf = k as f64;
    if d.session.counts().iter().all(|&c| c == k - 1) {
        d.send(kf)?;
        Ok(d.finish("pure-lb", "balanced", kf, OptProvenance::Analytic, None))
    } else {
        for _ in 0..m {
            d.send(big)?;
        }
        // One big job and k-1 unit jobs per machine.
        Ok(d.finish("pure-lb", "unbalanced", big + kf - 1.0, OptProvenance::Analytic, None))
    }
}

/// `k` rounds of sizes `1, N, N^2, ...`, each ending when machine 1 receives
/// a job. A round longer than `round_cap` aborts the run.
pub fn balanced_lb_drive<S: OnlineScheduler>(
    scheduler: S,
    base: f64,
    round_cap: usize,
) -> Result<AdversaryReport> {
    let (m, k) = (scheduler.machines(), scheduler.cap());
    require(k >= 2, || format!("balanced-lb needs k >= 2, got {k}"))?;
    require(base >= 2.0 && base.is_finite(), || format!("N must be at least 2, got {base}"))?;
    require(round_cap >= 1, || "round cap must be positive".to_string())?;
    let mut d = Driver::new(scheduler);
    let mut aborted = None;
    'rounds: for round in 1..=k {
        let mut exponent = 0;
        loop {
            if d.transcript.len() == m * k {
                aborted = Some(format!("stream reached m*k jobs during round {round}"));
                break 'rounds;
            }
            if exponent as usize >= round_cap {
                aborted = Some(format!(
                    "round {round} emitted {round_cap} jobs without feeding machine 1"
                ));
                break 'rounds;
            }
            let size = int_pow(base, exponent);
            if !size.is_finite() {
                aborted = Some(format!("round {round} overflowed at exponent {exponent}"));
                break 'rounds;
            }
            if d.send(size)? == 1 {
                break;
            }
            exponent += 1;
        }
    }
    let instance = Instance::new(d.session.sizes(), m, k)?;
    let schedule = sorted_round_robin(&instance)?;
    let opt = makespan(&schedule, &instance)?;
    let branch = if aborted.is_some() { "aborted" } else { "complete" };
    Ok(d.finish("balanced-lb", branch, opt, OptProvenance::Constructive, aborted))
}

fn sort_profile(profile: &mut [Vec<f64>]) {
    for sizes in profile.iter_mut() {
        sizes.sort_by(f64::total_cmp);
    }
    profile.sort_by(|a, b| {
        a.len().cmp(&b.len()).then_with(|| {
            a.iter()
                .zip(b)
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        })
    });
}

/// Per-machine size multisets in a permutation-invariant order.
fn machine_profile<S: OnlineScheduler>(session: &Session<S>) -> Vec<Vec<f64>> {
    let mut profile: Vec<Vec<f64>> = (1..=session.m()).map(|mach| session.machine_sizes(mach)).collect();
    sort_profile(&mut profile);
    profile
}

/// Three jobs of 6, two of 9 and `m-2` of `X`. Unless the scheduler builds
/// `{6,6,6}`, `{9,9}`, `{X}`, ... the run stops; otherwise small jobs follow
/// that only the two heavy machines can absorb.
pub fn robust_lb_drive<S: OnlineScheduler>(scheduler: S) -> Result<AdversaryReport> {
    let (m, k) = (scheduler.machines(), scheduler.cap());
    require(m >= 3, || format!("robust-lb needs m >= 3, got {m}"))?;
    require(k >= 8 && k % 2 == 0, || format!("robust-lb needs an even k >= 8, got {k}"))?;
    let x = robust_lb_constant();
    let mut d = Driver::new(scheduler);
    for size in [6.0, 6.0, 6.0, 9.0, 9.0] {
        d.send(size)?;
    }
    for _ in 0..m - 2 {
        d.send(x)?;
    }

    let mut canonical = vec![vec![6.0, 6.0, 6.0], vec![9.0, 9.0]];
    canonical.extend(std::iter::repeat_n(vec![x], m - 2));
    sort_profile(&mut canonical);
    if machine_profile(&d.session) != canonical {
        return Ok(d.finish("robust-lb", "non-canonical", 18.0, OptProvenance::Analytic, None));
    }

    let small = 6.0 / (k - 1) as f64;
    for _ in 0..(m - 3) * (k - 1) {
        d.send(small)?;
    }
    let filler = (x - 9.0) / (k - 2) as f64;
    for _ in 0..2 * (k - 2) {
        d.send(filler)?;
    }
    Ok(d.finish("robust-lb", "canonical", x + 6.0, OptProvenance::Analytic, None))
}

/// The two-machine, two-slot construction with jobs `M`, `1`, then
/// `(phi-1)M` and a final job chosen from the response.
pub fn phi_lb_drive<S: OnlineScheduler>(scheduler: S, big: f64) -> Result<AdversaryReport> {
    let (m, k) = (scheduler.machines(), scheduler.cap());
    require(m == 2 && k == 2, || format!("phi-lb needs m = k = 2 (m = {m}, k = {k})"))?;
    require(
        big.is_finite() && 2.0 * big * big > PHI * (big + big * big),
        || format!("M = {big} is too small: need 2M^2 > phi(M + M^2)"),
    )?;
    let mut d = Driver::new(scheduler);
    d.send(big)?;
    d.send(1.0)?;
    let machine_of = |d: &Driver<S>, job| d.session.machine_of(job).expect("job placed");
    if machine_of(&d, 1) == machine_of(&d, 2) {
        d.send(big * big)?;
        d.send(big * big)?;
        return Ok(d.finish("phi-lb", "co-located", big + big * big, OptProvenance::Analytic, None));
    }
    d.send((PHI - 1.0) * big)?;
    if machine_of(&d, 3) == machine_of(&d, 1) {
        d.send(1.0)?;
        Ok(d.finish("phi-lb", "third-with-big", big + 1.0, OptProvenance::Analytic, None))
    } else {
        d.send(PHI * big)?;
        Ok(d.finish("phi-lb", "third-with-small", PHI * big + 1.0, OptProvenance::Analytic, None))
    }
}
