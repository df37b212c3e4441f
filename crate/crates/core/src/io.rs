//! JSON documents for instances, bounds and schedules.
//!
//! Times in documents are on the caller's clock; they are shifted by the
//! instance origin on the way in and out.

use std::collections::BTreeMap;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{compute_cost, BoundProfile, CostBreakdown, Energy, Instance, InstanceSpec, Schedule};

/// Pretty-printed JSON with object keys in sorted order and a trailing newline.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    // serde_json's map type is a BTreeMap here, so going through `Value`
    // sorts every object's keys.
    let value = serde_json::to_value(value).expect("documents serialize to JSON");
    let mut text = serde_json::to_string_pretty(&value).expect("JSON values always print");
    text.push('\n');
    text
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))
}

/// Parses and validates an instance document.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let spec: InstanceSpec = from_json(text)?;
    Instance::from_spec(&spec)
}

pub fn instance_to_json(instance: &Instance) -> String {
    to_canonical_json(&instance.to_spec())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundSegmentDoc {
    pub start: i64,
    /// Exclusive.
    pub end: i64,
    pub lower: usize,
    pub upper: usize,
}

/// Per-slot processor bounds. Slots not covered by any segment keep the
/// defaults `0 <= vol(t) <= min(m, n)`; later segments override earlier ones.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsDoc {
    pub segments: Vec<BoundSegmentDoc>,
}

impl BoundsDoc {
    /// Resolves the document against `instance`, validating `l <= u <= m`.
    pub fn to_profile(&self, instance: &Instance) -> Result<BoundProfile> {
        let len = instance.slot_count();
        let mut pieces = Vec::with_capacity(self.segments.len());
        for s in &self.segments {
            let (start, end) = (s.start - instance.origin(), s.end - instance.origin());
            if start < 0 || end < start || end as usize > len {
                return Err(Error::InvalidBounds(format!(
                    "segment {}..{} lies outside the horizon",
                    s.start, s.end
                )));
            }
            pieces.push((start as usize..end as usize, s.lower, s.upper));
        }
        let profile = BoundProfile::from_ranges(len, instance.effective_m(), &pieces)?;
        profile.validate(instance.m())?;
        Ok(profile)
    }

    pub fn from_profile(profile: &BoundProfile, instance: &Instance) -> Self {
        let segments = (0..profile.segments().len())
            .map(|i| {
                let r = profile.segment_range(i);
                let s = profile.segments()[i];
                BoundSegmentDoc {
                    start: r.start as i64 + instance.origin(),
                    end: r.end as i64 + instance.origin(),
                    lower: s.lower,
                    upper: s.upper,
                }
            })
            .collect();
        BoundsDoc { segments }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlotEntry {
    pub t: i64,
    pub job: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProcessorLane {
    pub k: usize,
    pub slots: Vec<SlotEntry>,
}

/// A schedule as written to disk, one lane per processor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScheduleDoc {
    /// Wake-up cost the breakdown was computed with.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Energy>,
    pub processors: Vec<ProcessorLane>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cost: Option<CostBreakdown>,
}

/// A schedule read back without its instance: jobs are numbered by sorted id
/// and slots are shifted so the earliest one is non-negative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoadedSchedule {
    pub schedule: Schedule,
    pub job_names: Vec<String>,
    /// Caller-clock time of slot 0.
    pub origin: i64,
    pub processors: usize,
}

impl ScheduleDoc {
    pub fn from_schedule(schedule: &Schedule, instance: &Instance) -> Self {
        let lanes = (1..=instance.effective_m().max(schedule.processor_count()))
            .map(|k| {
                let slots = schedule
                    .placements()
                    .filter(|(_, p)| p.processor == k)
                    .map(|(t, p)| SlotEntry {
                        t: t as i64 + instance.origin(),
                        job: instance.job(p.job).id.clone(),
                    })
                    .collect();
                ProcessorLane { k, slots }
            })
            .collect();
        ScheduleDoc {
            q: Some(instance.q()),
            processors: lanes,
            cost: Some(compute_cost(schedule, instance.q())),
        }
    }

    /// Maps job ids through `instance`.
    pub fn to_schedule_for(&self, instance: &Instance) -> Result<Schedule> {
        let mut schedule = Schedule::new(instance.slot_count());
        for lane in &self.processors {
            for entry in &lane.slots {
                let job = instance
                    .job_index(&entry.job)
                    .ok_or_else(|| Error::Malformed(format!("unknown job {:?}", entry.job)))?;
                let t = entry.t - instance.origin();
                if t < 0 {
                    return Err(Error::Malformed(format!("slot {} precedes the horizon", entry.t)));
                }
                schedule.assign(t as usize, lane.k, job);
            }
        }
        Ok(schedule)
    }

    pub fn load(&self) -> Result<LoadedSchedule> {
        let mut names: BTreeMap<&str, usize> = BTreeMap::new();
        for lane in &self.processors {
            if lane.k == 0 {
                return Err(Error::Malformed("processor numbers start at 1".into()));
            }
            for entry in &lane.slots {
                names.insert(&entry.job, 0);
            }
        }
        for (i, index) in names.values_mut().enumerate() {
            *index = i;
        }
        let origin = self
            .processors
            .iter()
            .flat_map(|l| l.slots.iter().map(|s| s.t))
            .min()
            .unwrap_or(0)
            .min(0);
        let mut seen = std::collections::BTreeSet::new();
        let mut schedule = Schedule::default();
        for lane in &self.processors {
            for entry in &lane.slots {
                if !seen.insert((entry.t, Some(lane.k), None)) {
                    return Err(Error::Malformed(format!(
                        "processor {} listed twice at t={}",
                        lane.k, entry.t
                    )));
                }
                if !seen.insert((entry.t, None, Some(entry.job.as_str()))) {
                    return Err(Error::Malformed(format!(
                        "job {:?} runs twice at t={}",
                        entry.job, entry.t
                    )));
                }
                schedule.assign((entry.t - origin) as usize, lane.k, names[entry.job.as_str()]);
            }
        }
        let processors = self.processors.iter().map(|l| l.k).max().unwrap_or(0);
        Ok(LoadedSchedule {
            schedule,
            job_names: names.keys().map(|s| s.to_string()).collect(),
            origin,
            processors,
        })
    }
}
