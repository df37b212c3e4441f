//! JSON and text renderings of command results.

use std::fmt::Write as _;

use pltr_core::flow::CutCertificate;
use pltr_core::io::{BoundsDoc, ScheduleDoc};
use pltr_core::model::{BoundProfile, CostBreakdown, Instance};
use pltr_core::pltr::{engagement_tightness_check, PltrResult};
use pltr_core::volume::SlotSet;
use serde_json::{json, Value};

use crate::batch::CompareRow;

/// Slots of `q` on the instance's own clock.
pub fn original_slots(q: &SlotSet, instance: &Instance) -> Vec<i64> {
    q.iter().map(|t| t as i64 + instance.origin()).collect()
}

/// The certificate with `Q` on the instance's clock. With `bounds`, the
/// deficiency or excess is recomputed from the volume formulas and reported
/// next to the value read off the cut.
pub fn infeasible(cert: &CutCertificate, instance: &Instance, bounds: Option<&BoundProfile>) -> Value {
    let mut certificate = json!({
        "kind": cert.kind,
        "Q": original_slots(&cert.slots, instance),
        "value": cert.value,
    });
    if let Some(bounds) = bounds {
        certificate["recomputed"] = json!(cert.recompute(instance, bounds));
    }
    json!({ "status": "infeasible", "certificate": certificate })
}

pub fn solved(
    instance: &Instance,
    result: &PltrResult,
    schedule: &ScheduleDoc,
    cost: &CostBreakdown,
    diagnostics: bool,
) -> Value {
    let engagements: Vec<Value> = result
        .engagements
        .iter()
        .map(|e| json!({ "processor": e.processor, "t": e.slot as i64 + instance.origin() }))
        .collect();
    let mut out = json!({
        "status": "solved",
        "result": {
            "effective_m": result.effective_m,
            "feasibility_calls": result.feasibility_calls,
            "call_budget": PltrResult::call_budget(instance),
            "busy_interval_count": result.busy_interval_count,
            "engagements": engagements,
            "final_bounds": BoundsDoc::from_profile(&result.final_bounds, instance),
        },
        "schedule": schedule,
        "cost": cost,
    });
    if diagnostics {
        let snapshots: Vec<BoundsDoc> = result
            .snapshots
            .iter()
            .map(|s| BoundsDoc::from_profile(s, instance))
            .collect();
        out["diagnostics"] = json!({
            "snapshots": snapshots,
            "tightness": engagement_tightness_check(result, instance),
        });
    }
    out
}

fn cell<T: ToString>(value: &Option<T>) -> String {
    value.as_ref().map_or_else(|| "-".to_string(), T::to_string)
}

pub fn compare_table(rows: &[CompareRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:>6} {:>10} {:>9} {:>6} {:>9} {:>8} {:>8}",
        "trial", "pltr_cost", "opt_cost", "P", "2opt+P", "bound_ok", "ratio"
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{:>6} {:>10} {:>9} {:>6} {:>9} {:>8} {:>8}",
            r.trial,
            cell(&r.pltr_cost),
            cell(&r.opt_cost),
            r.total_volume,
            cell(&r.bound),
            cell(&r.bound_ok),
            cell(&r.ratio)
        );
    }
    out
}
