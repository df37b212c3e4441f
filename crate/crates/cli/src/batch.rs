//! Trial batches for `compare`, `gen` and `bench`. Trials run in parallel;
//! results come back in trial order.

use std::time::Instant;

use anyhow::bail;
use pltr_core::flow;
use pltr_core::generate::{generate, GenSpec};
use pltr_core::model::Instance;
use pltr_core::oracle::{approximation_report_with, within_cap};
use pltr_core::pltr::{self, PltrResult};
use pltr_core::Error;
use rayon::prelude::*;
use serde::Serialize;

/// Redraws allowed per trial under `--feasible-only`.
const MAX_ATTEMPTS: usize = 1000;

pub enum Draw {
    Fixed(Instance),
    Generated { seed: u64, instance: Instance },
}

impl Draw {
    fn instance(&self) -> &Instance {
        match self {
            Draw::Fixed(instance) | Draw::Generated { instance, .. } => instance,
        }
    }

    fn seed(&self) -> Option<u64> {
        match self {
            Draw::Fixed(_) => None,
            Draw::Generated { seed, .. } => Some(*seed),
        }
    }
}

/// Seed of the given attempt of a trial. Attempt 0 of trial `i` uses `base + i`.
fn trial_seed(base: u64, trial: usize, attempt: usize) -> u64 {
    base.wrapping_add(trial as u64)
        .wrapping_add((attempt as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

fn feasible(instance: &Instance) -> bool {
    instance.n() == 0 || flow::is_feasible(instance, &instance.default_bounds())
}

/// Draws trial `trial`, or `None` if no feasible instance turned up.
fn draw(spec: &GenSpec, trial: usize, feasible_only: bool) -> Option<Draw> {
    let attempts = if feasible_only { MAX_ATTEMPTS } else { 1 };
    (0..attempts).find_map(|attempt| {
        let seed = trial_seed(spec.seed, trial, attempt);
        let instance = generate(&spec.clone().with_seed(seed));
        (!feasible_only || feasible(&instance)).then_some(Draw::Generated { seed, instance })
    })
}

pub fn draw_trials(spec: &GenSpec, trials: usize, feasible_only: bool) -> anyhow::Result<Vec<Instance>> {
    let draws: Vec<Option<Draw>> = (0..trials)
        .into_par_iter()
        .map(|i| draw(spec, i, feasible_only))
        .collect();
    let mut out = Vec::with_capacity(trials);
    for (i, d) in draws.into_iter().enumerate() {
        match d {
            Some(Draw::Fixed(instance) | Draw::Generated { instance, .. }) => out.push(instance),
            None => bail!("trial {i}: no feasible instance in {MAX_ATTEMPTS} draws"),
        }
    }
    Ok(out)
}

#[derive(Debug, Serialize)]
pub struct CompareRow {
    pub trial: usize,
    pub seed: Option<u64>,
    pub n: usize,
    pub pltr_cost: Option<u64>,
    pub opt_cost: Option<u64>,
    #[serde(rename = "P")]
    pub total_volume: u64,
    /// `2 * opt_cost + P`.
    pub bound: Option<u64>,
    pub bound_ok: Option<bool>,
    pub ratio: Option<String>,
    /// Why the trial was skipped.
    pub notice: Option<String>,
}

pub fn compare_one(trial: usize, draw: Draw, cap: u128) -> CompareRow {
    let instance = draw.instance();
    let mut row = CompareRow {
        trial,
        seed: draw.seed(),
        n: instance.n(),
        pltr_cost: None,
        opt_cost: None,
        total_volume: instance.total_volume() as u64,
        bound: None,
        bound_ok: None,
        ratio: None,
        notice: None,
    };
    if !within_cap(instance, cap) {
        row.notice = Some(format!("instance exceeds the oracle cap of {cap} profiles"));
        return row;
    }
    match approximation_report_with(instance, cap) {
        Ok(report) => {
            row.pltr_cost = Some(report.pltr_cost);
            row.opt_cost = Some(report.opt_cost);
            row.bound = Some(report.bound());
            row.bound_ok = Some(report.bound_ok);
            row.ratio = Some(report.ratio.to_string());
        }
        Err(Error::Infeasible(cert)) => row.notice = Some(format!("infeasible ({cert})")),
        Err(e) => row.notice = Some(e.to_string()),
    }
    row
}

pub fn compare_trials(spec: &GenSpec, trials: usize, feasible_only: bool, cap: u128) -> Vec<CompareRow> {
    (0..trials)
        .into_par_iter()
        .map(|i| match draw(spec, i, feasible_only) {
            Some(d) => compare_one(i, d, cap),
            None => CompareRow {
                trial: i,
                seed: None,
                n: spec.n,
                pltr_cost: None,
                opt_cost: None,
                total_volume: 0,
                bound: None,
                bound_ok: None,
                ratio: None,
                notice: Some(format!("no feasible instance in {MAX_ATTEMPTS} draws")),
            },
        })
        .collect()
}

#[derive(Debug, Serialize)]
pub struct BenchRow {
    pub trial: usize,
    pub seed: Option<u64>,
    pub n: usize,
    pub slots: usize,
    pub effective_m: usize,
    pub feasible: bool,
    pub feasibility_calls: u64,
    pub call_budget: u64,
    pub busy_interval_count: usize,
    pub wall_ms: f64,
    pub calls_ok: bool,
    pub intervals_ok: bool,
}

fn bench_one(trial: usize, draw: Draw) -> BenchRow {
    let instance = draw.instance();
    let budget = PltrResult::call_budget(instance);
    let start = Instant::now();
    let outcome = pltr::run(instance);
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    let (feasible, calls, intervals) = match &outcome {
        Ok(result) => (true, result.feasibility_calls, result.busy_interval_count),
        // An infeasible instance stops after the initial check.
        Err(_) => (false, 1, 0),
    };
    BenchRow {
        trial,
        seed: draw.seed(),
        n: instance.n(),
        slots: instance.slot_count(),
        effective_m: instance.effective_m(),
        feasible,
        feasibility_calls: calls,
        call_budget: budget,
        busy_interval_count: intervals,
        wall_ms,
        calls_ok: calls <= budget.max(1),
        intervals_ok: intervals <= instance.n(),
    }
}

pub fn bench_trials(spec: &GenSpec, trials: usize, feasible_only: bool) -> Vec<BenchRow> {
    (0..trials)
        .into_par_iter()
        .filter_map(|i| draw(spec, i, feasible_only).map(|d| bench_one(i, d)))
        .collect()
}
