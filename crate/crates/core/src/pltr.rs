//! Parallel left-to-right greedy.
//!
//! Processors are handled from the highest index down. On each processor the
//! driver alternates two steps until the horizon is exhausted: keep the
//! processor idle for as long as the instance stays feasible (capping the
//! upper bound at `k - 1`), then keep it and every processor below it busy
//! for as long as possible (raising the lower bound to `k`). Both steps are
//! binary searches over the end of the stretch, each probe a max-flow check.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::flow::{self, Verdict};
use crate::model::{BoundProfile, Instance, Slot};
use crate::search::max_true;

/// First slot of a busy interval on `processor`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Engagement {
    pub processor: usize,
    pub slot: Slot,
    /// Index into [`PltrResult::snapshots`] of the bounds right after the
    /// idle step that ended at `slot`, when diagnostics are on.
    pub snapshot: Option<usize>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct PltrOptions {
    /// Keep a copy of the bounds at every engagement.
    pub diagnostics: bool,
}

#[derive(Clone, Debug)]
pub struct PltrResult {
    pub final_bounds: BoundProfile,
    pub engagements: Vec<Engagement>,
    pub snapshots: Vec<BoundProfile>,
    pub feasibility_calls: u64,
    pub busy_interval_count: usize,
    pub effective_m: usize,
}

impl PltrResult {
    /// Upper limit on feasibility checks implied by the busy-interval count:
    /// `2 (n + m') (ceil(log2(d + 2)) + 2)`.
    pub fn call_budget(instance: &Instance) -> u64 {
        let n = instance.n() as u64;
        let m = instance.effective_m() as u64;
        let d = instance.horizon().map_or(0, |(d, _)| d as u64);
        let log = u64::from(u64::BITS - (d + 1).leading_zeros());
        2 * (n + m) * (log + 2)
    }
}

/// Mutable state of one run: the instance, the current bounds and a counter
/// of feasibility checks.
#[derive(Debug)]
pub struct Pltr<'a> {
    instance: &'a Instance,
    bounds: BoundProfile,
    calls: u64,
}

impl<'a> Pltr<'a> {
    /// Starts from `0 <= vol(t) <= min(m, n)`.
    pub fn new(instance: &'a Instance) -> Self {
        Self::with_bounds(instance, instance.default_bounds())
    }

    /// Starts from the given bounds, which the caller promises are feasible.
    pub fn with_bounds(instance: &'a Instance, bounds: BoundProfile) -> Self {
        Pltr {
            instance,
            bounds,
            calls: 0,
        }
    }

    pub fn bounds(&self) -> &BoundProfile {
        &self.bounds
    }

    pub fn into_bounds(self) -> BoundProfile {
        self.bounds
    }

    pub fn feasibility_calls(&self) -> u64 {
        self.calls
    }

    fn probe(&mut self, candidate: &BoundProfile) -> bool {
        self.calls += 1;
        flow::is_feasible(self.instance, candidate)
    }

    fn commit(&mut self, next: BoundProfile) {
        assert!(next.is_tightening_of(&self.bounds), "bound update loosened the profile");
        self.bounds = next;
    }

    /// Extends an idle stretch of processor `k` from `t` as far as possible.
    /// Returns the end `t'` (exclusive); `t' == t` means `k` must be busy at `t`.
    pub fn keep_idle(&mut self, k: usize, t: Slot) -> Slot {
        let end = self.bounds.len();
        if t >= end {
            return t;
        }
        let cap = k - 1;
        let base = self.bounds.clone();
        let best = max_true(t, end, |stop| {
            let candidate = base.with_upper_cap(t..stop, cap);
            self.probe(&candidate)
        });
        if best > t {
            self.commit(base.with_upper_cap(t..best, cap));
        }
        best
    }

    /// Extends a busy stretch of processors `1..=k` from `t` as far as
    /// possible and returns its end (exclusive).
    pub fn keep_busy(&mut self, k: usize, t: Slot) -> Slot {
        let end = self.bounds.len();
        if t >= end {
            return t;
        }
        let base = self.bounds.clone();
        let best = max_true(t, end, |stop| {
            let candidate = base.with_lower_floor(t..stop, k);
            self.probe(&candidate)
        });
        if best > t {
            self.commit(base.with_lower_floor(t..best, k));
        }
        best
    }
}

/// Standalone idle step on externally held bounds. Fails if `bounds` are not
/// feasible on entry.
pub fn keep_idle(instance: &Instance, bounds: &mut BoundProfile, k: usize, t: Slot) -> Result<Slot> {
    step(instance, bounds, |p| p.keep_idle(k, t))
}

/// Standalone busy step on externally held bounds. Fails if `bounds` are not
/// feasible on entry.
pub fn keep_busy(instance: &Instance, bounds: &mut BoundProfile, k: usize, t: Slot) -> Result<Slot> {
    step(instance, bounds, |p| p.keep_busy(k, t))
}

fn step(instance: &Instance, bounds: &mut BoundProfile, f: impl FnOnce(&mut Pltr<'_>) -> Slot) -> Result<Slot> {
    if !flow::is_feasible(instance, bounds) {
        return Err(Error::InvariantBroken("bounds infeasible on entry".into()));
    }
    let mut pltr = Pltr::with_bounds(instance, bounds.clone());
    let t = f(&mut pltr);
    *bounds = pltr.into_bounds();
    Ok(t)
}

pub fn run(instance: &Instance) -> Result<PltrResult> {
    run_with(instance, PltrOptions::default())
}

/// Runs the greedy to completion. Infeasible instances fail with a certificate.
pub fn run_with(instance: &Instance, options: PltrOptions) -> Result<PltrResult> {
    let mut pltr = Pltr::new(instance);
    pltr.calls += 1;
    if let Verdict::Infeasible(cert) = flow::check(instance, pltr.bounds())? {
        return Err(Error::Infeasible(cert));
    }

    let last = pltr.bounds().len();
    let effective_m = instance.effective_m();
    let mut engagements = Vec::new();
    let mut snapshots = Vec::new();

    for k in (1..=effective_m).rev() {
        let mut t = 0;
        while t < last {
            t = pltr.keep_idle(k, t);
            if t >= last {
                break;
            }
            let snapshot = options.diagnostics.then(|| {
                snapshots.push(pltr.bounds().clone());
                snapshots.len() - 1
            });
            engagements.push(Engagement {
                processor: k,
                slot: t,
                snapshot,
            });
            let next = pltr.keep_busy(k, t);
            if next == t {
                return Err(Error::InvariantBroken(format!(
                    "processor {k} can be neither idle nor busy at slot {t}"
                )));
            }
            t = next;
        }
    }

    Ok(PltrResult {
        busy_interval_count: engagements.len(),
        feasibility_calls: pltr.feasibility_calls(),
        final_bounds: pltr.into_bounds(),
        engagements,
        snapshots,
        effective_m,
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TightnessReport {
    pub checked: usize,
    /// Engagements whose idle stretch could have been extended by one slot.
    pub violations: Vec<Engagement>,
    /// Engagements without a stored snapshot.
    pub skipped: usize,
}

impl TightnessReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty() && self.skipped == 0
    }
}

/// Confirms that at every engagement `(k, t)` keeping processor `k` idle at
/// `t` as well would have made the bounds infeasible.
pub fn engagement_tightness_check(result: &PltrResult, instance: &Instance) -> TightnessReport {
    let mut report = TightnessReport::default();
    for e in &result.engagements {
        let Some(i) = e.snapshot else {
            report.skipped += 1;
            continue;
        };
        let extended = result.snapshots[i].with_upper_cap(e.slot..e.slot + 1, e.processor - 1);
        report.checked += 1;
        if flow::is_feasible(instance, &extended) {
            report.violations.push(*e);
        }
    }
    report
}
