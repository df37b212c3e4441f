//! Problem instances, bound profiles, schedules and the energy cost model.
//!
//! Time is discrete. A job may run in any slot of its execution window
//! `[release, deadline]`, both ends inclusive. Instances are normalized on
//! construction so that the earliest release is slot 0; the shift is kept in
//! [`Instance::origin`] so output can be mapped back to the caller's clock.

mod bounds;
mod cost;
mod schedule;

use std::collections::HashSet;
use std::fmt;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

pub use bounds::{BoundProfile, BoundSegment};
pub use cost::{compute_cost, cost_busy_idle_view, cost_on_off_view, processor_cost, CostBreakdown, ProcessorCost};
pub use schedule::{check_stair, check_valid, Placement, Schedule, ScheduleReport, ScheduleViolation};

use crate::error::{Error, Result};

/// Index of a discrete time slot.
pub type Slot = usize;

/// Energy units.
pub type Energy = u64;

/// A job as it appears in an instance file, before validation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JobSpec {
    pub id: String,
    pub release: i64,
    pub deadline: i64,
    pub volume: i64,
}

/// An instance as it appears on disk.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub q: i64,
    pub m: i64,
    pub jobs: Vec<JobSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Job {
    pub id: String,
    pub release: Slot,
    pub deadline: Slot,
    pub volume: usize,
}

impl Job {
    pub fn new(id: impl Into<String>, release: Slot, deadline: Slot, volume: usize) -> Self {
        Job {
            id: id.into(),
            release,
            deadline,
            volume,
        }
    }

    /// Number of slots in the execution window.
    pub fn window_len(&self) -> usize {
        self.deadline + 1 - self.release
    }

    pub fn window(&self) -> RangeInclusive<Slot> {
        self.release..=self.deadline
    }

    pub fn is_available(&self, t: Slot) -> bool {
        self.release <= t && t <= self.deadline
    }

    /// True when the window can hold the whole volume.
    pub fn fits(&self) -> bool {
        self.volume <= self.window_len()
    }
}

/// What went wrong with one field of an instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub job: Option<String>,
    pub field: &'static str,
    pub message: String,
    /// Structural violations make the input unusable. Non-structural ones
    /// (a job larger than its window) only make the instance infeasible.
    pub structural: bool,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.job {
            Some(job) => write!(f, "job {job}: {} ({})", self.message, self.field),
            None => write!(f, "{} ({})", self.message, self.field),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has_structural(&self) -> bool {
        self.violations.iter().any(|v| v.structural)
    }

    fn push(&mut self, job: Option<&str>, field: &'static str, message: String, structural: bool) {
        self.violations.push(Violation {
            job: job.map(str::to_owned),
            field,
            message,
            structural,
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks every job and instance invariant and lists all violations.
pub fn validate_instance(spec: &InstanceSpec) -> ValidationReport {
    let mut report = ValidationReport::default();
    if spec.m < 1 {
        report.push(None, "m", format!("processor count {} is below 1", spec.m), true);
    }
    if spec.q < 0 {
        report.push(None, "q", format!("wake-up cost {} is negative", spec.q), true);
    }
    let mut seen = HashSet::new();
    for job in &spec.jobs {
        let id = Some(job.id.as_str());
        if !seen.insert(job.id.as_str()) {
            report.push(id, "id", "duplicate id".into(), true);
        }
        if job.release < 0 {
            report.push(id, "release", format!("negative release {}", job.release), true);
        }
        if job.deadline < 0 {
            report.push(id, "deadline", format!("negative deadline {}", job.deadline), true);
        }
        if job.volume < 1 {
            report.push(id, "volume", format!("volume {} is below 1", job.volume), true);
        }
        if job.deadline < job.release {
            report.push(
                id,
                "deadline",
                format!("deadline {} precedes release {}", job.deadline, job.release),
                true,
            );
        } else if job.volume > job.deadline - job.release + 1 {
            report.push(
                id,
                "volume",
                format!(
                    "volume exceeds execution interval ({} > {} slots)",
                    job.volume,
                    job.deadline - job.release + 1
                ),
                false,
            );
        }
    }
    report
}

/// A validated, normalized problem instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    jobs: Vec<Job>,
    m: usize,
    q: Energy,
    origin: i64,
}

impl Instance {
    /// Builds an instance from already non-negative jobs, shifting time so the
    /// earliest release is slot 0.
    pub fn new(jobs: Vec<Job>, m: usize, q: Energy) -> Result<Self> {
        let spec = InstanceSpec {
            q: q as i64,
            m: m as i64,
            jobs: jobs
                .iter()
                .map(|j| JobSpec {
                    id: j.id.clone(),
                    release: j.release as i64,
                    deadline: j.deadline as i64,
                    volume: j.volume as i64,
                })
                .collect(),
        };
        Self::from_spec(&spec)
    }

    /// Validates and normalizes an instance read from disk.
    ///
    /// Jobs whose volume exceeds their window are accepted: such an instance
    /// is well-formed but infeasible, and the feasibility check produces a
    /// certificate for it.
    pub fn from_spec(spec: &InstanceSpec) -> Result<Self> {
        let report = validate_instance(spec);
        if report.has_structural() {
            return Err(Error::InvalidInstance(report));
        }
        let origin = spec.jobs.iter().map(|j| j.release).min().unwrap_or(0);
        let jobs = spec
            .jobs
            .iter()
            .map(|j| Job {
                id: j.id.clone(),
                release: (j.release - origin) as Slot,
                deadline: (j.deadline - origin) as Slot,
                volume: j.volume as usize,
            })
            .collect();
        Ok(Instance {
            jobs,
            m: spec.m as usize,
            q: spec.q as Energy,
            origin,
        })
    }

    /// Inverse of [`Instance::from_spec`], restoring the original time offset.
    pub fn to_spec(&self) -> InstanceSpec {
        InstanceSpec {
            q: self.q as i64,
            m: self.m as i64,
            jobs: self
                .jobs
                .iter()
                .map(|j| JobSpec {
                    id: j.id.clone(),
                    release: j.release as i64 + self.origin,
                    deadline: j.deadline as i64 + self.origin,
                    volume: j.volume as i64,
                })
                .collect(),
        }
    }

    pub fn jobs(&self) -> &[Job] {
        &self.jobs
    }

    pub fn job(&self, index: usize) -> &Job {
        &self.jobs[index]
    }

    pub fn job_index(&self, id: &str) -> Option<usize> {
        self.jobs.iter().position(|j| j.id == id)
    }

    pub fn n(&self) -> usize {
        self.jobs.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Processors that can ever be busy at once: `min(m, n)`.
    pub fn effective_m(&self) -> usize {
        self.m.min(self.jobs.len())
    }

    pub fn q(&self) -> Energy {
        self.q
    }

    /// Amount the original time axis was shifted by during normalization.
    pub fn origin(&self) -> i64 {
        self.origin
    }

    /// Total processing volume `P`.
    pub fn total_volume(&self) -> usize {
        self.jobs.iter().map(|j| j.volume).sum()
    }

    /// Last deadline `d` and the number of slots `d + 1`.
    pub fn horizon(&self) -> Result<(Slot, usize)> {
        let d = self.jobs.iter().map(|j| j.deadline).max().ok_or(Error::EmptyInstance)?;
        Ok((d, d + 1))
    }

    /// Number of slots in the horizon, 0 for an instance without jobs.
    pub fn slot_count(&self) -> usize {
        self.horizon().map(|(_, len)| len).unwrap_or(0)
    }

    /// The unrestricted profile: `0 <= vol(t) <= min(m, n)` on every slot.
    pub fn default_bounds(&self) -> BoundProfile {
        BoundProfile::uniform(self.slot_count(), 0, self.effective_m())
    }

    /// Same jobs with every time shifted by `delta` slots.
    pub fn shifted(&self, delta: usize) -> Instance {
        let jobs = self
            .jobs
            .iter()
            .map(|j| Job::new(j.id.clone(), j.release + delta, j.deadline + delta, j.volume))
            .collect();
        Instance {
            jobs,
            m: self.m,
            q: self.q,
            origin: self.origin,
        }
    }
}
