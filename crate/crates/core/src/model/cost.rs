//! Energy accounting.
//!
//! A processor starts off. It is on while busy and during an interior idle
//! gap of at most `q` slots; longer gaps are spent off and end with another
//! wake-up. Idle time before the first and after the last busy slot is free.
//! Two decompositions of the same cost are provided and must agree:
//!
//! * busy/idle: `|busy| + q + sum over interior gaps of min(|gap|, q)`
//! * on/off: `sum of on-interval lengths + q * (number of on-intervals)`

use serde::{Deserialize, Serialize};

use super::{Energy, Schedule, Slot};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProcessorCost {
    pub processor: usize,
    pub busy: Energy,
    pub idle: Energy,
    pub powerup: Energy,
    pub on: Energy,
    pub off: Energy,
    pub on_intervals: usize,
    pub total: Energy,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostBreakdown {
    pub processors: Vec<ProcessorCost>,
    pub busy: Energy,
    pub idle: Energy,
    pub powerup: Energy,
    pub on: Energy,
    pub off: Energy,
    pub total: Energy,
}

/// `(busy, interior idle, power-up)` for one processor's sorted busy slots.
pub fn cost_busy_idle_view(busy: &[Slot], q: Energy) -> (Energy, Energy, Energy) {
    if busy.is_empty() {
        return (0, 0, 0);
    }
    let idle = busy
        .windows(2)
        .map(|w| (w[1] - w[0] - 1) as Energy)
        .filter(|&gap| gap > 0)
        .map(|gap| gap.min(q))
        .sum();
    (busy.len() as Energy, idle, q)
}

/// `(on, off, on-interval count)` for one processor's sorted busy slots.
pub fn cost_on_off_view(busy: &[Slot], q: Energy) -> (Energy, Energy, usize) {
    let Some((&first, rest)) = busy.split_first() else {
        return (0, 0, 0);
    };
    let mut on = 0;
    let mut intervals = 0;
    let mut start = first;
    let mut last = first;
    for &t in rest {
        let gap = (t - last - 1) as Energy;
        if gap > q {
            on += (last - start + 1) as Energy;
            intervals += 1;
            start = t;
        }
        last = t;
    }
    on += (last - start + 1) as Energy;
    intervals += 1;
    (on, q * intervals as Energy, intervals)
}

/// Cost of processor `k` busy exactly on the sorted slots `busy`.
pub fn processor_cost(processor: usize, busy: &[Slot], q: Energy) -> ProcessorCost {
    let (b, idle, powerup) = cost_busy_idle_view(busy, q);
    let (on, off, on_intervals) = cost_on_off_view(busy, q);
    let total = b + idle + powerup;
    assert_eq!(total, on + off, "cost views disagree for busy slots {busy:?}, q = {q}");
    ProcessorCost {
        processor,
        busy: b,
        idle,
        powerup,
        on,
        off,
        on_intervals,
        total,
    }
}

pub fn compute_cost(schedule: &Schedule, q: Energy) -> CostBreakdown {
    let processors: Vec<ProcessorCost> = (1..=schedule.processor_count())
        .map(|k| processor_cost(k, &schedule.busy_slots(k), q))
        .collect();
    let sum = |f: fn(&ProcessorCost) -> Energy| processors.iter().map(f).sum();
    CostBreakdown {
        busy: sum(|p| p.busy),
        idle: sum(|p| p.idle),
        powerup: sum(|p| p.powerup),
        on: sum(|p| p.on),
        off: sum(|p| p.off),
        total: sum(|p| p.total),
        processors,
    }
}
