//! Static SVG Gantt charts of schedules.
//!
//! One lane per processor. Job blocks are colored per job; a hatched marker
//! sits at the start of each power-up; idle gaps short enough to stay on
//! (at most `q` slots) are shaded grey, and time spent off is left pale.

use std::fmt::Write as _;

use crate::model::{compute_cost, cost_on_off_view, Energy, Schedule, Slot};

const LEFT: f64 = 64.0;
const TOP: f64 = 36.0;
const LANE: f64 = 28.0;
const GAP: f64 = 6.0;
const PALETTE: [&str; 10] = [
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac",
];

pub struct GanttOptions {
    pub q: Energy,
    /// Caller-clock time of slot 0, used for axis labels.
    pub origin: i64,
    /// Number of lanes to draw even if upper processors stay unused.
    pub processors: usize,
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Maximal runs of consecutive slots, as `(first, last)`.
fn runs(slots: &[Slot], q: Energy) -> Vec<(Slot, Slot)> {
    let mut out: Vec<(Slot, Slot)> = Vec::new();
    for &t in slots {
        match out.last_mut() {
            Some((_, last)) if (t - *last - 1) as Energy <= q => *last = t,
            _ => out.push((t, t)),
        }
    }
    out
}

pub fn render_svg(schedule: &Schedule, job_names: &[String], options: &GanttOptions) -> String {
    let len = schedule.len().max(1);
    let lanes = options.processors.max(schedule.processor_count());
    let slot_w = (1200.0 / len as f64).clamp(2.0, 40.0);
    let width = LEFT + slot_w * len as f64 + 20.0;
    let height = TOP + (LANE + GAP) * lanes as f64 + 30.0;
    let x = |t: Slot| LEFT + slot_w * t as f64;
    let cost = compute_cost(schedule, options.q);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r##"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}" font-family="sans-serif" font-size="11">
<defs>
<pattern id="powerup" patternUnits="userSpaceOnUse" width="4" height="4" patternTransform="rotate(45)"><rect width="4" height="4" fill="#ffffff"/><line x1="0" y1="0" x2="0" y2="4" stroke="#c0392b" stroke-width="2"/></pattern>
</defs>
<text x="{LEFT}" y="16">energy {} (busy {}, idle {}, power-up {}), q = {}</text>"##,
        cost.total, cost.busy, cost.idle, cost.powerup, options.q
    );

    for k in 1..=lanes {
        let y = TOP + (LANE + GAP) * (lanes - k) as f64;
        let _ = writeln!(svg, r#"<g class="lane" data-processor="{k}">"#);
        let _ = writeln!(
            svg,
            r##"<text x="{:.1}" y="{:.1}" text-anchor="end">P{k}</text>"##,
            LEFT - 8.0,
            y + LANE / 2.0 + 4.0
        );
        let _ = writeln!(
            svg,
            r##"<rect class="off" x="{LEFT:.1}" y="{y:.1}" width="{:.1}" height="{LANE:.1}" fill="#f7f7f7" stroke="#dddddd"/>"##,
            slot_w * len as f64
        );

        let busy = schedule.busy_slots(k);
        for (first, last) in runs(&busy, options.q) {
            let _ = writeln!(
                svg,
                r##"<rect class="on" x="{:.1}" y="{y:.1}" width="{:.1}" height="{LANE:.1}" fill="#d9d9d9"/>"##,
                x(first),
                slot_w * (last - first + 1) as f64
            );
            let marker = (slot_w / 4.0).max(1.0);
            let _ = writeln!(
                svg,
                r##"<rect class="powerup" x="{:.1}" y="{y:.1}" width="{marker:.1}" height="{LANE:.1}" fill="url(#powerup)" stroke="#c0392b" stroke-width="0.5"/>"##,
                x(first) - marker
            );
        }

        // Job blocks, merging consecutive slots of the same job.
        let mut blocks: Vec<(Slot, Slot, usize)> = Vec::new();
        for (t, p) in schedule.placements().filter(|(_, p)| p.processor == k) {
            match blocks.last_mut() {
                Some((_, end, job)) if *job == p.job && *end + 1 == t => *end = t,
                _ => blocks.push((t, t, p.job)),
            }
        }
        for (first, last, job) in blocks {
            let name = job_names.get(job).map_or_else(|| format!("#{job}"), |n| escape(n));
            let w = slot_w * (last - first + 1) as f64;
            let _ = writeln!(
                svg,
                r##"<rect class="job" data-job="{name}" data-start="{}" data-end="{}" x="{:.1}" y="{:.1}" width="{w:.1}" height="{:.1}" fill="{}" stroke="#ffffff" stroke-width="0.5"><title>{name} @ {}..{}</title></rect>"##,
                first as i64 + options.origin,
                last as i64 + options.origin,
                x(first),
                y + 2.0,
                LANE - 4.0,
                PALETTE[job % PALETTE.len()],
                first as i64 + options.origin,
                last as i64 + options.origin,
            );
            if w >= 7.0 * name.len() as f64 {
                let _ = writeln!(
                    svg,
                    r##"<text x="{:.1}" y="{:.1}" text-anchor="middle" fill="#ffffff">{name}</text>"##,
                    x(first) + w / 2.0,
                    y + LANE / 2.0 + 4.0
                );
            }
        }
        let _ = writeln!(svg, "</g>");
    }

    let axis_y = TOP + (LANE + GAP) * lanes as f64 + 4.0;
    let step = len.div_ceil(20).max(1);
    for t in (0..=len).step_by(step) {
        let _ = writeln!(
            svg,
            r##"<line x1="{0:.1}" y1="{1:.1}" x2="{0:.1}" y2="{2:.1}" stroke="#999999"/><text x="{0:.1}" y="{3:.1}" text-anchor="middle">{4}</text>"##,
            x(t),
            axis_y,
            axis_y + 4.0,
            axis_y + 16.0,
            t as i64 + options.origin
        );
    }
    svg.push_str("</svg>\n");
    svg
}

/// Number of power-up markers drawn for processor `k`.
pub fn powerup_count(schedule: &Schedule, k: usize, q: Energy) -> usize {
    cost_on_off_view(&schedule.busy_slots(k), q).2
}
