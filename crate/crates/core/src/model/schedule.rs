use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use super::{BoundProfile, Instance, Slot};

/// Job `job` (an index into the instance) runs on processor `processor`
/// (1-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Placement {
    pub processor: usize,
    pub job: usize,
}

/// Assignment of jobs to processors, slot by slot.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Schedule {
    slots: Vec<Vec<Placement>>,
}

impl Schedule {
    pub fn new(len: usize) -> Self {
        Schedule {
            slots: vec![Vec::new(); len],
        }
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.iter().all(Vec::is_empty)
    }

    /// Records `job` on `processor` at slot `t`, growing the horizon if needed.
    pub fn assign(&mut self, t: Slot, processor: usize, job: usize) {
        if t >= self.slots.len() {
            self.slots.resize(t + 1, Vec::new());
        }
        self.slots[t].push(Placement { processor, job });
    }

    pub fn at(&self, t: Slot) -> &[Placement] {
        self.slots.get(t).map_or(&[], Vec::as_slice)
    }

    pub fn placements(&self) -> impl Iterator<Item = (Slot, Placement)> + '_ {
        self.slots
            .iter()
            .enumerate()
            .flat_map(|(t, ps)| ps.iter().map(move |&p| (t, p)))
    }

    /// Number of busy processors at `t`.
    pub fn volume_at(&self, t: Slot) -> usize {
        self.at(t).len()
    }

    /// Highest processor index in use, 0 when nothing is scheduled.
    pub fn processor_count(&self) -> usize {
        self.placements().map(|(_, p)| p.processor).max().unwrap_or(0)
    }

    /// Sorted slots in which processor `k` is busy.
    pub fn busy_slots(&self, k: usize) -> Vec<Slot> {
        let mut slots: Vec<Slot> = self
            .placements()
            .filter(|(_, p)| p.processor == k)
            .map(|(t, _)| t)
            .collect();
        slots.dedup();
        slots
    }

    /// Sorted slots in which `job` runs.
    pub fn job_slots(&self, job: usize) -> Vec<Slot> {
        self.placements()
            .filter(|(_, p)| p.job == job)
            .map(|(t, _)| t)
            .collect()
    }

    /// Number of maximal busy intervals summed over all processors.
    pub fn busy_interval_count(&self) -> usize {
        (1..=self.processor_count())
            .map(|k| {
                let slots = self.busy_slots(k);
                let gaps = slots.windows(2).filter(|w| w[1] > w[0] + 1).count();
                if slots.is_empty() {
                    0
                } else {
                    gaps + 1
                }
            })
            .sum()
    }
}

/// Busy processors at every slot are exactly `1..=vol(t)`.
pub fn check_stair(schedule: &Schedule) -> bool {
    (0..schedule.len()).all(|t| {
        let mut procs: Vec<usize> = schedule.at(t).iter().map(|p| p.processor).collect();
        procs.sort_unstable();
        procs.iter().enumerate().all(|(i, &k)| k == i + 1)
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScheduleViolation {
    UnknownJob {
        slot: Slot,
        job: usize,
    },
    ProcessorOutOfRange {
        slot: Slot,
        processor: usize,
    },
    DuplicateProcessor {
        slot: Slot,
        processor: usize,
    },
    DuplicateJob {
        slot: Slot,
        job: usize,
    },
    OutsideWindow {
        slot: Slot,
        job: usize,
    },
    VolumeDeficit {
        job: usize,
        scheduled: usize,
        required: usize,
    },
    VolumeSurplus {
        job: usize,
        scheduled: usize,
        required: usize,
    },
    BelowLowerBound {
        slot: Slot,
        busy: usize,
        lower: usize,
    },
    AboveUpperBound {
        slot: Slot,
        busy: usize,
        upper: usize,
    },
}

impl fmt::Display for ScheduleViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ScheduleViolation::*;
        match *self {
            UnknownJob { slot, job } => write!(f, "unknown job index {job} at slot {slot}"),
            ProcessorOutOfRange { slot, processor } => {
                write!(f, "processor {processor} out of range at slot {slot}")
            }
            DuplicateProcessor { slot, processor } => {
                write!(f, "processor {processor} used twice at slot {slot}")
            }
            DuplicateJob { slot, job } => write!(f, "job {job} runs twice at slot {slot}"),
            OutsideWindow { slot, job } => {
                write!(f, "slot outside execution interval: job {job} at slot {slot}")
            }
            VolumeDeficit {
                job,
                scheduled,
                required,
            } => {
                write!(f, "volume deficit: job {job} scheduled {scheduled} of {required}")
            }
            VolumeSurplus {
                job,
                scheduled,
                required,
            } => {
                write!(f, "volume surplus: job {job} scheduled {scheduled} of {required}")
            }
            BelowLowerBound { slot, busy, lower } => {
                write!(f, "slot {slot}: {busy} busy processors below lower bound {lower}")
            }
            AboveUpperBound { slot, busy, upper } => {
                write!(f, "slot {slot}: {busy} busy processors above upper bound {upper}")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ScheduleReport {
    pub violations: Vec<ScheduleViolation>,
}

impl ScheduleReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ScheduleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "ok");
        }
        let parts: Vec<String> = self.violations.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// Verifies that `schedule` is a complete feasible schedule for `instance`
/// and, if given, respects `bounds` at every slot.
pub fn check_valid(schedule: &Schedule, instance: &Instance, bounds: Option<&BoundProfile>) -> ScheduleReport {
    use ScheduleViolation::*;
    let mut violations = Vec::new();
    let mut counts = vec![0usize; instance.n()];

    for t in 0..schedule.len() {
        let mut procs = HashSet::new();
        let mut jobs = HashSet::new();
        for p in schedule.at(t) {
            if p.processor == 0 || p.processor > instance.m() {
                violations.push(ProcessorOutOfRange {
                    slot: t,
                    processor: p.processor,
                });
            }
            if !procs.insert(p.processor) {
                violations.push(DuplicateProcessor {
                    slot: t,
                    processor: p.processor,
                });
            }
            if p.job >= instance.n() {
                violations.push(UnknownJob { slot: t, job: p.job });
                continue;
            }
            if !jobs.insert(p.job) {
                violations.push(DuplicateJob { slot: t, job: p.job });
            }
            if !instance.job(p.job).is_available(t) {
                violations.push(OutsideWindow { slot: t, job: p.job });
            }
            counts[p.job] += 1;
        }
    }

    for (job, (&scheduled, spec)) in counts.iter().zip(instance.jobs()).enumerate() {
        let required = spec.volume;
        if scheduled < required {
            violations.push(VolumeDeficit {
                job,
                scheduled,
                required,
            });
        } else if scheduled > required {
            violations.push(VolumeSurplus {
                job,
                scheduled,
                required,
            });
        }
    }

    if let Some(bounds) = bounds {
        for t in 0..bounds.len() {
            let busy = schedule.volume_at(t);
            let (lower, upper) = (bounds.lower_at(t), bounds.upper_at(t));
            if busy < lower {
                violations.push(BelowLowerBound { slot: t, busy, lower });
            }
            if busy > upper {
                violations.push(AboveUpperBound { slot: t, busy, upper });
            }
        }
        for t in bounds.len()..schedule.len() {
            if schedule.volume_at(t) > 0 {
                violations.push(AboveUpperBound {
                    slot: t,
                    busy: schedule.volume_at(t),
                    upper: 0,
                });
            }
        }
    }

    ScheduleReport { violations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Job;

    fn fixture_a() -> Instance {
        Instance::new(vec![Job::new("j1", 0, 4, 2)], 1, 2).unwrap()
    }

    #[test]
    fn stair_examples() {
        let mut s = Schedule::new(2);
        s.assign(0, 1, 0);
        s.assign(0, 2, 1);
        assert!(check_stair(&s));

        let mut s = Schedule::new(1);
        s.assign(0, 2, 0);
        assert!(!check_stair(&s));

        assert!(check_stair(&Schedule::default()));
    }

    #[test]
    fn valid_fixture_schedule() {
        let mut s = Schedule::new(5);
        s.assign(3, 1, 0);
        s.assign(4, 1, 0);
        let bounds = BoundProfile::from_per_slot(&[0, 0, 0, 1, 1], &[0, 0, 0, 1, 1]).unwrap();
        assert!(check_valid(&s, &fixture_a(), Some(&bounds)).is_ok());
        assert_eq!(s.busy_interval_count(), 1);
    }

    #[test]
    fn outside_window_and_deficit() {
        let mut s = Schedule::new(6);
        s.assign(3, 1, 0);
        s.assign(5, 1, 0);
        let report = check_valid(&s, &fixture_a(), None);
        assert_eq!(
            report.violations,
            vec![ScheduleViolation::OutsideWindow { slot: 5, job: 0 }]
        );
        assert!(report.to_string().contains("slot outside execution interval"));

        let mut s = Schedule::new(5);
        s.assign(3, 1, 0);
        let report = check_valid(&s, &fixture_a(), None);
        assert_eq!(
            report.violations,
            vec![ScheduleViolation::VolumeDeficit {
                job: 0,
                scheduled: 1,
                required: 2
            }]
        );
        assert!(report.to_string().contains("volume deficit"));
    }

    #[test]
    fn duplicates_and_bounds() {
        let inst = Instance::new(vec![Job::new("a", 0, 1, 2), Job::new("b", 0, 1, 1)], 2, 0).unwrap();
        let mut s = Schedule::new(2);
        s.assign(0, 1, 0);
        s.assign(0, 1, 0);
        s.assign(1, 3, 1);
        let bounds = BoundProfile::uniform(2, 1, 1);
        let v = check_valid(&s, &inst, Some(&bounds)).violations;
        assert!(v.contains(&ScheduleViolation::DuplicateProcessor { slot: 0, processor: 1 }));
        assert!(v.contains(&ScheduleViolation::DuplicateJob { slot: 0, job: 0 }));
        assert!(v.contains(&ScheduleViolation::ProcessorOutOfRange { slot: 1, processor: 3 }));
        assert!(v.contains(&ScheduleViolation::AboveUpperBound {
            slot: 0,
            busy: 2,
            upper: 1
        }));
    }
}
