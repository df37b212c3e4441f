//! Reference implementations that share no code path with the library:
//! they enumerate every way of placing each job's units in its window.

#![allow(dead_code)]

use pltr_core::model::{Instance, Job};

/// All `k`-subsets of `window`, as sorted vectors.
pub fn combinations(window: &[usize], k: usize) -> Vec<Vec<usize>> {
    fn rec(rest: &[usize], k: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == 0 {
            out.push(acc.clone());
            return;
        }
        if rest.len() < k {
            return;
        }
        acc.push(rest[0]);
        rec(&rest[1..], k - 1, acc, out);
        acc.pop();
        rec(&rest[1..], k, acc, out);
    }
    let mut out = Vec::new();
    rec(window, k, &mut Vec::new(), &mut out);
    out
}

fn job_choices(job: &Job) -> Vec<Vec<usize>> {
    let window: Vec<usize> = (job.release..=job.deadline).collect();
    combinations(&window, job.volume)
}

/// Calls `visit` with the per-slot busy counts of every placement of all jobs.
/// Returns early when `visit` returns true.
pub fn for_each_count_profile(instance: &Instance, len: usize, mut visit: impl FnMut(&[usize]) -> bool) {
    let choices: Vec<Vec<Vec<usize>>> = instance.jobs().iter().map(job_choices).collect();
    if choices.iter().any(Vec::is_empty) {
        return;
    }
    let mut counts = vec![0usize; len];
    fn rec(
        choices: &[Vec<Vec<usize>>],
        i: usize,
        counts: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if i == choices.len() {
            return visit(counts);
        }
        for pick in &choices[i] {
            for &t in pick {
                counts[t] += 1;
            }
            let stop = rec(choices, i + 1, counts, visit);
            for &t in pick {
                counts[t] -= 1;
            }
            if stop {
                return true;
            }
        }
        false
    }
    rec(&choices, 0, &mut counts, &mut visit);
}

/// Whether some placement keeps `lower[t] <= count[t] <= upper[t]` everywhere.
pub fn brute_feasible(instance: &Instance, lower: &[usize], upper: &[usize]) -> bool {
    let mut found = false;
    for_each_count_profile(instance, lower.len(), |counts| {
        found = counts
            .iter()
            .zip(lower.iter().zip(upper))
            .all(|(c, (l, u))| l <= c && c <= u);
        found
    });
    found
}

/// Energy of one processor busy on the sorted `busy` slots, computed from
/// the on/off states directly: it is on from the first to the last busy slot
/// except during idle runs longer than `q`, and each off-to-on switch costs `q`.
pub fn lane_energy(busy: &[usize], q: u64) -> u64 {
    let Some(&last) = busy.last() else { return 0 };
    let mut energy = 0;
    let mut on = false;
    let mut t = busy[0];
    while t <= last {
        if busy.contains(&t) {
            if !on {
                energy += q;
                on = true;
            }
            energy += 1;
            t += 1;
        } else {
            let gap_end = (t..).find(|s| busy.contains(s)).unwrap();
            let gap = (gap_end - t) as u64;
            if gap > q {
                on = false;
            } else {
                energy += gap;
            }
            t = gap_end;
        }
    }
    energy
}

/// Cost of the stair arrangement of per-slot busy counts.
pub fn stair_energy(counts: &[usize], q: u64) -> u64 {
    let top = counts.iter().copied().max().unwrap_or(0);
    (1..=top)
        .map(|k| {
            let busy: Vec<usize> = (0..counts.len()).filter(|&t| counts[t] >= k).collect();
            lane_energy(&busy, q)
        })
        .sum()
}

/// Optimal energy over all placements with at most `m` busy processors per
/// slot, or `None` if nothing fits.
pub fn brute_opt(instance: &Instance) -> Option<u64> {
    let len = instance.slot_count();
    let m = instance.m();
    let mut best: Option<u64> = None;
    for_each_count_profile(instance, len, |counts| {
        if counts.iter().all(|&c| c <= m) {
            let e = stair_energy(counts, instance.q());
            best = Some(best.map_or(e, |b| b.min(e)));
        }
        false
    });
    best
}

/// Small deterministic PRNG so the reference side does not depend on the
/// library's generator.
pub struct SplitMix(pub u64);

impl SplitMix {
    pub fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in `lo..=hi`.
    pub fn range(&mut self, lo: usize, hi: usize) -> usize {
        lo + (self.next() % (hi - lo + 1) as u64) as usize
    }
}

/// Random instance with `n` jobs inside `0..=d`; jobs always fit their window.
pub fn random_instance(rng: &mut SplitMix, n: usize, d: usize, m: usize, q: u64) -> Instance {
    let jobs = (0..n)
        .map(|i| {
            let r = rng.range(0, d);
            let dl = rng.range(r, d);
            let p = rng.range(1, dl - r + 1);
            Job::new(format!("j{i}"), r, dl, p)
        })
        .collect();
    Instance::new(jobs, m, q).unwrap()
}

/// Random `(lower, upper)` with `lower <= upper <= m` per slot.
pub fn random_bounds(rng: &mut SplitMix, len: usize, m: usize) -> (Vec<usize>, Vec<usize>) {
    (0..len)
        .map(|_| {
            let a = rng.range(0, m);
            let b = rng.range(0, m);
            (a.min(b), a.max(b))
        })
        .unzip()
}
