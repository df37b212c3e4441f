//! Turning feasible bounds into a concrete schedule.
//!
//! The compressed flow network gives, for every time interval, how many slots
//! each job runs inside it. Within one interval every job is available in
//! every slot, so the per-interval problem is solved by the wrap-around rule:
//! lay the job units row by row over a grid with one column per slot. A job
//! never takes more units than there are columns, so it never lands twice in
//! one column, and column heights differ by at most one.

use crate::error::{Error, Result};
use crate::flow::{self, max_flow};
use crate::model::{check_stair, check_valid, compute_cost, BoundProfile, CostBreakdown, Instance, Schedule, Slot};
use crate::oracle;
use crate::pltr::PltrResult;

/// Work assigned to one time interval by the flow.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalAssignment {
    pub start: Slot,
    pub len: usize,
    pub lower: usize,
    pub upper: usize,
    /// `(job index, units)` in fill order.
    pub volumes: Vec<(usize, usize)>,
}

impl IntervalAssignment {
    pub fn total(&self) -> usize {
        self.volumes.iter().map(|&(_, x)| x).sum()
    }
}

/// Distributes an interval's units over its slots. Column `c` of the result
/// lists the jobs at slot `start + c`, bottom processor first.
pub fn expand_interval(a: &IntervalAssignment) -> Result<Vec<Vec<usize>>> {
    let total = a.total();
    if a.len == 0 {
        return if total == 0 {
            Ok(Vec::new())
        } else {
            Err(Error::InvariantBroken("units assigned to an empty interval".into()))
        };
    }
    if let Some(&(job, x)) = a.volumes.iter().find(|&&(_, x)| x > a.len) {
        return Err(Error::InvariantBroken(format!(
            "job {job} needs {x} slots in an interval of {}",
            a.len
        )));
    }
    if total < a.lower * a.len || total > a.upper * a.len {
        return Err(Error::InvariantBroken(format!(
            "{total} units do not fit bounds [{}, {}] over {} slots",
            a.lower, a.upper, a.len
        )));
    }

    let mut columns = vec![Vec::new(); a.len];
    let mut pos = 0;
    for &(job, x) in &a.volumes {
        for _ in 0..x {
            columns[pos % a.len].push(job);
            pos += 1;
        }
    }
    debug_assert!(columns.iter().all(|c| c.len() >= a.lower && c.len() <= a.upper));
    Ok(columns)
}

/// Builds a stair schedule that meets `bounds` from a max flow of the
/// compressed network.
pub fn realize(instance: &Instance, bounds: &BoundProfile) -> Result<Schedule> {
    let network = flow::build_network(instance, bounds, true)?;
    let result = max_flow(&network);
    if result.value != network.total_volume() {
        return Err(Error::InvariantBroken(format!(
            "flow {} short of P = {} on supposedly feasible bounds",
            result.value,
            network.total_volume()
        )));
    }

    let mut order: Vec<usize> = (0..instance.n()).collect();
    order.sort_by(|&a, &b| instance.job(a).id.cmp(&instance.job(b).id));

    let mut per_interval: Vec<Vec<(usize, usize)>> = vec![Vec::new(); network.intervals().len()];
    for &j in &order {
        for &(i, units) in &result.job_interval_flows[j] {
            if units > 0 {
                per_interval[i].push((j, units as usize));
            }
        }
    }

    let mut schedule = Schedule::new(bounds.len());
    for (iv, volumes) in network.intervals().iter().zip(per_interval) {
        let assignment = IntervalAssignment {
            start: iv.start,
            len: iv.len(),
            lower: iv.lower,
            upper: iv.upper,
            volumes,
        };
        for (c, column) in expand_interval(&assignment)?.into_iter().enumerate() {
            for (level, job) in column.into_iter().enumerate() {
                schedule.assign(iv.start + c, level + 1, job);
            }
        }
    }
    Ok(schedule)
}

/// Realizes PLTR's final bounds, checks the schedule and prices it. On
/// instances small enough for the brute-force oracle the cost is also checked
/// against `2 OPT + P`.
pub fn schedule_from_result(instance: &Instance, result: &PltrResult) -> Result<(Schedule, CostBreakdown)> {
    let schedule = realize(instance, &result.final_bounds)?;
    let report = check_valid(&schedule, instance, Some(&result.final_bounds));
    if !report.is_ok() {
        return Err(Error::InvariantBroken(format!("realized schedule invalid: {report}")));
    }
    if !check_stair(&schedule) {
        return Err(Error::InvariantBroken("realized schedule is not a stair".into()));
    }
    let cost = compute_cost(&schedule, instance.q());
    if cost.busy != instance.total_volume() as u64 {
        return Err(Error::InvariantBroken(format!(
            "busy cost {} differs from P = {}",
            cost.busy,
            instance.total_volume()
        )));
    }
    if oracle::within_cap(instance, oracle::ORACLE_CAP) {
        let opt = oracle::brute_force_opt(instance)?;
        let limit = 2 * opt.cost + instance.total_volume() as u64;
        if cost.total > limit {
            return Err(Error::InvariantBroken(format!(
                "cost {} exceeds 2 OPT + P = {limit}",
                cost.total
            )));
        }
    }
    Ok((schedule, cost))
}
