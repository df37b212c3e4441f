//! Volume measures over slot sets and the exhaustive subset feasibility test.
//!
//! For a set `Q` of slots, the forced volume of a job is the part of it that
//! every feasible schedule must put inside `Q`, and the possible volume is the
//! most that can be put there. Summed over jobs and compared against the
//! processor bounds on `Q` they give the deficiency and excess of `Q`. An
//! instance with bounds is feasible exactly when no slot set has positive
//! deficiency or positive excess.

use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{BoundProfile, Instance, Job, Schedule, Slot};

/// Largest slot set accepted by [`peak_density`] unless overridden.
pub const PEAK_DENSITY_CAP: usize = 20;

/// Largest horizon accepted by [`feasible_by_enumeration`] unless overridden.
pub const ENUMERATION_CAP: usize = 16;

/// A sorted, duplicate-free set of slots.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SlotSet(Vec<Slot>);

impl SlotSet {
    pub fn new() -> Self {
        SlotSet(Vec::new())
    }

    /// Every slot in `0..len`.
    pub fn full(len: usize) -> Self {
        SlotSet((0..len).collect())
    }

    /// Slots whose bit is set in `mask`.
    pub fn from_mask(mask: u64) -> Self {
        SlotSet((0..64).filter(|t| mask >> t & 1 == 1).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, t: Slot) -> bool {
        self.0.binary_search(&t).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = Slot> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[Slot] {
        &self.0
    }

    /// Number of slots of `job`'s window that lie in the set.
    pub fn overlap(&self, job: &Job) -> usize {
        let lo = self.0.partition_point(|&t| t < job.release);
        let hi = self.0.partition_point(|&t| t <= job.deadline);
        hi - lo
    }
}

impl FromIterator<Slot> for SlotSet {
    fn from_iter<I: IntoIterator<Item = Slot>>(iter: I) -> Self {
        let mut v: Vec<Slot> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        SlotSet(v)
    }
}

impl fmt::Display for SlotSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{t}")?;
        }
        write!(f, "}}")
    }
}

/// `max(0, p_j - |E_j \ Q|)`.
pub fn forced_volume(job: &Job, q: &SlotSet) -> usize {
    let outside = job.window_len() - q.overlap(job);
    job.volume.saturating_sub(outside)
}

/// `min(p_j, |E_j ∩ Q|)`.
pub fn possible_volume(job: &Job, q: &SlotSet) -> usize {
    job.volume.min(q.overlap(job))
}

pub fn total_forced_volume(instance: &Instance, q: &SlotSet) -> usize {
    instance.jobs().iter().map(|j| forced_volume(j, q)).sum()
}

pub fn total_possible_volume(instance: &Instance, q: &SlotSet) -> usize {
    instance.jobs().iter().map(|j| possible_volume(j, q)).sum()
}

/// Placements of the given jobs (all jobs when `jobs` is `None`) inside `Q`.
pub fn scheduled_volume(schedule: &Schedule, jobs: Option<&[usize]>, q: &SlotSet) -> usize {
    q.iter()
        .flat_map(|t| schedule.at(t))
        .filter(|p| jobs.is_none_or(|js| js.contains(&p.job)))
        .count()
}

/// Scheduled volume of `job` inside `Q` beyond its forced volume.
pub fn unnecessary_volume(schedule: &Schedule, instance: &Instance, job: usize, q: &SlotSet) -> i64 {
    scheduled_volume(schedule, Some(&[job]), q) as i64 - forced_volume(instance.job(job), q) as i64
}

/// Forced volume per slot of `Q`, as an exact fraction.
pub fn density(instance: &Instance, q: &SlotSet) -> Result<Ratio<i64>> {
    if q.is_empty() {
        return Err(Error::UndefinedDensity);
    }
    Ok(Ratio::new(total_forced_volume(instance, q) as i64, q.len() as i64))
}

/// Largest density over non-empty subsets of `Q`. Exponential in `|Q|`.
pub fn peak_density(instance: &Instance, q: &SlotSet, cap: usize) -> Result<Ratio<i64>> {
    if q.len() > cap {
        return Err(Error::PeakDensityCap { size: q.len(), cap });
    }
    if q.is_empty() {
        return Err(Error::UndefinedDensity);
    }
    let slots = q.as_slice();
    let mut best = Ratio::from_integer(0);
    for mask in 1u64..(1 << slots.len()) {
        let sub: SlotSet = (0..slots.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| slots[i])
            .collect();
        best = best.max(density(instance, &sub)?);
    }
    Ok(best)
}

/// `fv(J, Q) - sum_{t in Q} m_t`. Positive means no schedule fits.
pub fn deficiency(instance: &Instance, bounds: &BoundProfile, q: &SlotSet) -> i64 {
    let capacity: usize = q.iter().map(|t| bounds.upper_at(t)).sum();
    total_forced_volume(instance, q) as i64 - capacity as i64
}

/// `sum_{t in Q} l_t - pv(J, Q)`. Positive means no schedule fits.
pub fn excess(instance: &Instance, bounds: &BoundProfile, q: &SlotSet) -> i64 {
    let required: usize = q.iter().map(|t| bounds.lower_at(t)).sum();
    required as i64 - total_possible_volume(instance, q) as i64
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumerationVerdict {
    pub feasible: bool,
    /// First violating set found, scanning subsets from the full horizon
    /// downwards in bitmask order.
    pub witness: Option<SlotSet>,
}

/// Decides feasibility by checking deficiency and excess of every subset of
/// the horizon covered by `bounds`.
pub fn feasible_by_enumeration(instance: &Instance, bounds: &BoundProfile, cap: usize) -> Result<EnumerationVerdict> {
    let len = bounds.len().max(instance.slot_count());
    if len > cap || len > 63 {
        return Err(Error::EnumerationCap { slots: len, cap });
    }
    if bounds.len() < instance.slot_count() {
        return Err(Error::InvalidBounds(format!(
            "bounds cover {} slots, horizon has {}",
            bounds.len(),
            instance.slot_count()
        )));
    }
    let upper = bounds.upper_per_slot();
    let lower = bounds.lower_per_slot();
    let windows: Vec<(u64, usize, usize)> = instance
        .jobs()
        .iter()
        .map(|j| {
            let mask = (j.release..=j.deadline).fold(0u64, |m, t| m | 1 << t);
            (mask, j.window_len(), j.volume)
        })
        .collect();

    for mask in (0..1u64 << len).rev() {
        let (mut fv, mut pv) = (0usize, 0usize);
        for &(window, window_len, volume) in &windows {
            let inside = (window & mask).count_ones() as usize;
            fv += volume.saturating_sub(window_len - inside);
            pv += volume.min(inside);
        }
        let (mut cap_upper, mut need_lower) = (0usize, 0usize);
        for t in (0..len).filter(|t| mask >> t & 1 == 1) {
            cap_upper += upper[t];
            need_lower += lower[t];
        }
        if fv > cap_upper || need_lower > pv {
            return Ok(EnumerationVerdict {
                feasible: false,
                witness: Some(SlotSet::from_mask(mask)),
            });
        }
    }
    Ok(EnumerationVerdict {
        feasible: true,
        witness: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Job;
    use proptest::prelude::*;

    fn set(slots: &[Slot]) -> SlotSet {
        slots.iter().copied().collect()
    }

    fn fixture_a() -> Instance {
        Instance::new(vec![Job::new("j1", 0, 4, 2)], 1, 2).unwrap()
    }

    fn fixture_b() -> Instance {
        Instance::new(vec![Job::new("j1", 0, 1, 2), Job::new("j2", 0, 1, 2)], 2, 1).unwrap()
    }

    fn fixture_inf() -> Instance {
        Instance::new(vec![Job::new("j1", 0, 1, 3)], 1, 0).unwrap()
    }

    fn schedule(placements: &[(Slot, usize, usize)]) -> Schedule {
        let mut s = Schedule::default();
        for &(t, k, j) in placements {
            s.assign(t, k, j);
        }
        s
    }

    #[test]
    fn forced_volume_examples() {
        let job = Job::new("j", 0, 4, 3);
        assert_eq!(forced_volume(&job, &set(&[1, 2])), 0);
        assert_eq!(forced_volume(&job, &set(&[0, 1, 2, 3])), 2);
        assert_eq!(forced_volume(&Job::new("j", 0, 4, 2), &SlotSet::new()), 0);
    }

    #[test]
    fn possible_volume_examples() {
        assert_eq!(possible_volume(&Job::new("j", 0, 1, 3), &set(&[0, 1])), 2);
        assert_eq!(possible_volume(&Job::new("j", 0, 4, 1), &set(&[7])), 0);
        assert_eq!(possible_volume(&Job::new("j", 0, 4, 2), &SlotSet::full(5)), 2);
    }

    #[test]
    fn scheduled_and_unnecessary_volume() {
        let a = schedule(&[(3, 1, 0), (4, 1, 0)]);
        assert_eq!(scheduled_volume(&a, Some(&[0]), &set(&[3, 4])), 2);
        assert_eq!(scheduled_volume(&a, None, &SlotSet::new()), 0);
        assert_eq!(unnecessary_volume(&a, &fixture_a(), 0, &set(&[3, 4])), 2);
        assert_eq!(unnecessary_volume(&a, &fixture_a(), 0, &SlotSet::new()), 0);

        let b = schedule(&[(0, 1, 0), (0, 2, 1), (1, 1, 0), (1, 2, 1)]);
        assert_eq!(scheduled_volume(&b, None, &set(&[0])), 2);
        assert_eq!(unnecessary_volume(&b, &fixture_b(), 0, &set(&[0, 1])), 0);
    }

    #[test]
    fn density_examples() {
        assert_eq!(density(&fixture_b(), &set(&[0, 1])).unwrap(), Ratio::from_integer(2));
        let loose = Instance::new(vec![Job::new("j", 0, 9, 1)], 1, 0).unwrap();
        assert_eq!(density(&loose, &set(&[0])).unwrap(), Ratio::from_integer(0));
        assert_eq!(density(&fixture_inf(), &set(&[0, 1])).unwrap(), Ratio::new(3, 2));
        assert!(matches!(
            density(&fixture_b(), &SlotSet::new()),
            Err(Error::UndefinedDensity)
        ));
    }

    #[test]
    fn peak_density_examples() {
        assert_eq!(
            peak_density(&fixture_b(), &set(&[0, 1]), PEAK_DENSITY_CAP).unwrap(),
            Ratio::from_integer(2)
        );
        let tight = Instance::new(vec![Job::new("j", 0, 0, 1)], 1, 0).unwrap();
        assert_eq!(
            peak_density(&tight, &set(&[0]), PEAK_DENSITY_CAP).unwrap(),
            Ratio::from_integer(1)
        );
        let empty = Instance::new(vec![], 1, 0).unwrap();
        assert_eq!(
            peak_density(&empty, &set(&[0, 3]), PEAK_DENSITY_CAP).unwrap(),
            Ratio::from_integer(0)
        );
        assert!(matches!(
            peak_density(&empty, &SlotSet::full(21), PEAK_DENSITY_CAP),
            Err(Error::PeakDensityCap { size: 21, cap: 20 })
        ));
    }

    #[test]
    fn deficiency_examples() {
        let inf = fixture_inf();
        assert_eq!(deficiency(&inf, &BoundProfile::uniform(2, 0, 1), &set(&[0, 1])), 1);
        let a = fixture_a();
        assert_eq!(deficiency(&a, &BoundProfile::uniform(5, 0, 1), &SlotSet::full(5)), -3);
        assert_eq!(deficiency(&a, &BoundProfile::uniform(5, 0, 1), &SlotSet::new()), 0);
    }

    #[test]
    fn excess_examples() {
        let empty = Instance::new(vec![], 1, 0).unwrap();
        assert_eq!(excess(&empty, &BoundProfile::uniform(1, 1, 1), &set(&[0])), 1);
        let a = fixture_a();
        let free = BoundProfile::uniform(5, 0, 1);
        assert_eq!(excess(&a, &free, &set(&[1, 2, 3])), -2);
        assert_eq!(excess(&fixture_b(), &BoundProfile::uniform(2, 2, 2), &set(&[0, 1])), 0);
    }

    #[test]
    fn enumeration_examples() {
        let v = feasible_by_enumeration(&fixture_inf(), &BoundProfile::uniform(2, 0, 1), ENUMERATION_CAP).unwrap();
        assert_eq!(
            v,
            EnumerationVerdict {
                feasible: false,
                witness: Some(set(&[0, 1]))
            }
        );

        let v = feasible_by_enumeration(&fixture_a(), &BoundProfile::uniform(5, 0, 1), ENUMERATION_CAP).unwrap();
        assert_eq!(
            v,
            EnumerationVerdict {
                feasible: true,
                witness: None
            }
        );

        let b = fixture_b();
        let bounds = BoundProfile::from_per_slot(&[0, 0], &[1, 2]).unwrap();
        let v = feasible_by_enumeration(&b, &bounds, ENUMERATION_CAP).unwrap();
        assert!(!v.feasible);
        assert!(deficiency(&b, &bounds, v.witness.as_ref().unwrap()) > 0);

        assert!(matches!(
            feasible_by_enumeration(&b, &BoundProfile::uniform(17, 0, 2), ENUMERATION_CAP),
            Err(Error::EnumerationCap { .. })
        ));
    }

    fn job_and_sets() -> impl Strategy<Value = (Job, u64, u64)> {
        (0usize..8, 0usize..8, 1usize..6, any::<u16>(), any::<u16>()).prop_map(|(r, len, p, a, b)| {
            let job = Job::new("j", r, r + len, p.min(len + 1));
            let small = (a & b) as u64;
            (job, small, a as u64 | small)
        })
    }

    proptest! {
        #[test]
        fn forced_below_possible_and_monotone((job, small, large) in job_and_sets()) {
            let (qs, ql) = (SlotSet::from_mask(small), SlotSet::from_mask(large));
            prop_assert!(forced_volume(&job, &qs) <= possible_volume(&job, &qs));
            prop_assert!(forced_volume(&job, &qs) <= forced_volume(&job, &ql));
            prop_assert!(possible_volume(&job, &qs) <= possible_volume(&job, &ql));
        }
    }
}
