//! Exact reference engines for small instances.
//!
//! Some optimal schedule uses the lowest-numbered processors first at every
//! slot, so an optimum is determined by its per-slot busy counts. The
//! brute-force search enumerates those count profiles, prices each one, and
//! keeps the cheapest profile that the flow check accepts as exact bounds.

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::flow::{self, Verdict};
use crate::model::{compute_cost, processor_cost, BoundProfile, Energy, Instance, Schedule, Slot};
use crate::pltr;
use crate::schedule_build::realize;

/// Default limit on `(m' + 1)^(d + 1)`, the size of the profile space.
pub const ORACLE_CAP: u128 = 2_000_000;

#[derive(Clone, Debug)]
pub struct OptResult {
    pub cost: Energy,
    /// Busy processors per slot.
    pub profile: Vec<usize>,
    pub schedule: Schedule,
}

/// Size of the unpruned profile space, saturating.
pub fn profile_space(instance: &Instance) -> u128 {
    let base = instance.effective_m() as u128 + 1;
    let exp = instance.slot_count() as u32;
    base.checked_pow(exp).unwrap_or(u128::MAX)
}

pub fn within_cap(instance: &Instance, cap: u128) -> bool {
    profile_space(instance) <= cap
}

/// Cost of the stair schedule with the given per-slot busy counts.
pub fn profile_cost(profile: &[usize], q: Energy) -> Energy {
    let top = profile.iter().copied().max().unwrap_or(0);
    (1..=top)
        .map(|k| {
            let busy: Vec<Slot> = (0..profile.len()).filter(|&t| profile[t] >= k).collect();
            processor_cost(k, &busy, q).total
        })
        .sum()
}

pub fn brute_force_opt(instance: &Instance) -> Result<OptResult> {
    brute_force_opt_with(instance, ORACLE_CAP)
}

/// Minimum-cost schedule by exhaustive search over stair profiles. Among
/// equally cheap profiles the lexicographically smallest wins.
pub fn brute_force_opt_with(instance: &Instance, cap: u128) -> Result<OptResult> {
    let profiles = profile_space(instance);
    if profiles > cap {
        return Err(Error::OracleCap { profiles, cap });
    }
    if let Verdict::Infeasible(cert) = flow::check(instance, &instance.default_bounds())? {
        return Err(Error::Infeasible(cert));
    }

    let len = instance.slot_count();
    let m = instance.effective_m();
    let room: Vec<usize> = (0..len)
        .map(|t| instance.jobs().iter().filter(|j| j.is_available(t)).count().min(m))
        .collect();
    let mut suffix_room = vec![0; len + 1];
    for t in (0..len).rev() {
        suffix_room[t] = suffix_room[t + 1] + room[t];
    }

    let mut search = Search {
        instance,
        room,
        suffix_room,
        profile: vec![0; len],
        best: None,
    };
    search.descend(0, instance.total_volume());

    let (cost, profile) = search
        .best
        .ok_or_else(|| Error::InvariantBroken("feasible instance without a feasible profile".into()))?;
    let exact = BoundProfile::from_per_slot(&profile, &profile)?;
    let schedule = realize(instance, &exact)?;
    Ok(OptResult {
        cost,
        profile,
        schedule,
    })
}

struct Search<'a> {
    instance: &'a Instance,
    room: Vec<usize>,
    suffix_room: Vec<usize>,
    profile: Vec<usize>,
    best: Option<(Energy, Vec<usize>)>,
}

impl Search<'_> {
    fn descend(&mut self, t: Slot, remaining: usize) {
        if remaining > self.suffix_room[t] {
            return;
        }
        if t == self.profile.len() {
            self.leaf();
            return;
        }
        for busy in 0..=self.room[t].min(remaining) {
            self.profile[t] = busy;
            self.descend(t + 1, remaining - busy);
        }
        self.profile[t] = 0;
    }

    fn leaf(&mut self) {
        let cost = profile_cost(&self.profile, self.instance.q());
        if self.best.as_ref().is_some_and(|(best, _)| cost >= *best) {
            return;
        }
        let exact =
            BoundProfile::from_per_slot(&self.profile, &self.profile).expect("profile vectors have equal length");
        if flow::is_feasible(self.instance, &exact) {
            self.best = Some((cost, self.profile.clone()));
        }
    }
}

/// Earliest-deadline-first simulation on a single processor.
pub fn edf_feasible(instance: &Instance) -> Result<bool> {
    let m = instance.effective_m();
    if m > 1 {
        return Err(Error::EdfMultiProcessor(m));
    }
    let mut remaining: Vec<usize> = instance.jobs().iter().map(|j| j.volume).collect();
    for t in 0..instance.slot_count() {
        let pick = instance
            .jobs()
            .iter()
            .enumerate()
            .filter(|&(j, job)| remaining[j] > 0 && job.is_available(t))
            .min_by_key(|&(j, job)| (job.deadline, j))
            .map(|(j, _)| j);
        if let Some(j) = pick {
            remaining[j] -= 1;
        }
        let missed = instance
            .jobs()
            .iter()
            .enumerate()
            .any(|(j, job)| job.deadline == t && remaining[j] > 0);
        if missed {
            return Ok(false);
        }
    }
    Ok(remaining.iter().all(|&r| r == 0))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApproximationReport {
    pub pltr_cost: Energy,
    pub opt_cost: Energy,
    pub total_volume: Energy,
    /// `pltr_cost <= 2 * opt_cost + total_volume`.
    pub bound_ok: bool,
    /// `pltr_cost / opt_cost`, 1 when both are zero.
    pub ratio: Ratio<u64>,
}

impl ApproximationReport {
    pub fn bound(&self) -> Energy {
        2 * self.opt_cost + self.total_volume
    }
}

/// Runs PLTR and the brute-force optimum side by side.
pub fn approximation_report(instance: &Instance) -> Result<ApproximationReport> {
    approximation_report_with(instance, ORACLE_CAP)
}

pub fn approximation_report_with(instance: &Instance, cap: u128) -> Result<ApproximationReport> {
    let opt = brute_force_opt_with(instance, cap)?;
    let result = pltr::run(instance)?;
    let schedule = realize(instance, &result.final_bounds)?;
    let pltr_cost = compute_cost(&schedule, instance.q()).total;
    let total_volume = instance.total_volume() as Energy;
    let ratio = if opt.cost == 0 {
        Ratio::from_integer(1)
    } else {
        Ratio::new(pltr_cost, opt.cost)
    };
    Ok(ApproximationReport {
        pltr_cost,
        opt_cost: opt.cost,
        total_volume,
        bound_ok: pltr_cost <= 2 * opt.cost + total_volume,
        ratio,
    })
}
