//! Random instance generation for benchmarks and randomized tests.

use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{Instance, Job};

/// Parameters for [`generate`]. Ranges are inclusive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenSpec {
    pub n: usize,
    pub m: usize,
    pub q: u64,
    /// Last slot a window may end at.
    pub horizon: usize,
    pub volume: (usize, usize),
    /// Extra slots in a window beyond the job's volume.
    pub slack: (usize, usize),
    /// Percentage of draws built to be infeasible, when `n > m` allows it.
    pub infeasible_pct: u8,
    pub seed: u64,
}

impl Default for GenSpec {
    fn default() -> Self {
        GenSpec::new(4, 2, 2, 8, 0)
    }
}

impl GenSpec {
    /// Spec with volume and slack ranges scaled to the horizon.
    pub fn new(n: usize, m: usize, q: u64, horizon: usize, seed: u64) -> Self {
        let slots = horizon + 1;
        GenSpec {
            n,
            m,
            q,
            horizon,
            volume: (1, (slots / 3).max(1)),
            slack: (0, (slots / 2).max(1)),
            infeasible_pct: 10,
            seed,
        }
    }

    /// Sets the volume and slack ranges for the current horizon.
    pub fn rescaled(self) -> Self {
        let slots = self.horizon + 1;
        GenSpec {
            volume: (1, (slots / 3).max(1)),
            slack: (0, (slots / 2).max(1)),
            ..self
        }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        GenSpec { seed, ..self }
    }
}

impl fmt::Display for GenSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n={},m={},q={},d={},vmin={},vmax={},smin={},smax={},inf={},seed={}",
            self.n,
            self.m,
            self.q,
            self.horizon,
            self.volume.0,
            self.volume.1,
            self.slack.0,
            self.slack.1,
            self.infeasible_pct,
            self.seed
        )
    }
}

impl FromStr for GenSpec {
    type Err = String;

    /// Parses `key=value` pairs separated by commas, e.g. `n=3,d=8,m=2,q=2,seed=7`.
    /// Volume and slack ranges default to values scaled to `d` unless given;
    /// `inf` sets the infeasible percentage (default 10).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut spec = GenSpec::default();
        let (mut vmin, mut vmax, mut smin, mut smax) = (None, None, None, None);
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| format!("expected key=value, got {part:?}"))?;
            let number = |v: &str| v.parse::<u64>().map_err(|e| format!("{key}: {e}"));
            let v = number(value)?;
            match key {
                "n" => spec.n = v as usize,
                "m" => spec.m = v as usize,
                "q" => spec.q = v,
                "d" => spec.horizon = v as usize,
                "vmin" => vmin = Some(v as usize),
                "vmax" => vmax = Some(v as usize),
                "smin" => smin = Some(v as usize),
                "smax" => smax = Some(v as usize),
                "inf" if v <= 100 => spec.infeasible_pct = v as u8,
                "inf" => return Err(format!("inf is a percentage, got {v}")),
                "seed" => spec.seed = v,
                _ => return Err(format!("unknown key {key:?}")),
            }
        }
        spec = spec.rescaled();
        spec.volume = (vmin.unwrap_or(spec.volume.0), vmax.unwrap_or(spec.volume.1));
        spec.slack = (smin.unwrap_or(spec.slack.0), smax.unwrap_or(spec.slack.1));
        if spec.m == 0 {
            return Err("m must be at least 1".into());
        }
        if spec.volume.0 == 0 || spec.volume.0 > spec.volume.1 {
            return Err(format!("bad volume range {:?}", spec.volume));
        }
        if spec.slack.0 > spec.slack.1 {
            return Err(format!("bad slack range {:?}", spec.slack));
        }
        Ok(spec)
    }
}

/// Draws one instance from `spec.seed`.
pub fn generate(spec: &GenSpec) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    generate_with(spec, &mut rng)
}

/// Draws one instance from `rng`. Every job fits its window; windows end no
/// later than `spec.horizon`.
///
/// A draw is infeasible by construction with probability
/// `spec.infeasible_pct` percent when `n > m`: `m + 1` jobs then share one
/// window and each fills it. Otherwise units are planted slot by slot
/// under the processor limit, so the instance is feasible unless the whole
/// horizon runs out of room.
pub fn generate_with<R: Rng>(spec: &GenSpec, rng: &mut R) -> Instance {
    let slots = spec.horizon + 1;
    let m = spec.m.max(1);
    let vmax = spec.volume.1.min(slots).max(1);
    let mut load = vec![0usize; slots];
    let mut jobs: Vec<Option<Job>> = vec![None; spec.n];

    if spec.n > m && rng.gen_range(0..100) < spec.infeasible_pct {
        let len = rng.gen_range(spec.volume.0.min(vmax)..=vmax);
        let release = rng.gen_range(0..=slots - len);
        for i in sample(rng, spec.n, m + 1).into_iter() {
            jobs[i] = Some(Job::new(format!("j{}", i + 1), release, release + len - 1, len));
        }
    }

    for (i, slot) in jobs.iter_mut().enumerate() {
        if slot.is_some() {
            continue;
        }
        let mut volume = rng.gen_range(spec.volume.0.min(vmax)..=vmax);
        let slack = rng.gen_range(spec.slack.0..=spec.slack.1);
        let len = (volume + slack).min(slots);
        let mut release = rng.gen_range(0..=slots - len);
        let mut deadline = release + len - 1;
        let mut free: Vec<usize> = (release..=deadline).filter(|&t| load[t] < m).collect();
        if free.is_empty() {
            (release, deadline) = (0, slots - 1);
            free = (0..slots).filter(|&t| load[t] < m).collect();
        }
        volume = volume.min(free.len()).max(1);
        for k in sample(rng, free.len(), volume.min(free.len())).into_iter() {
            load[free[k]] += 1;
        }
        *slot = Some(Job::new(format!("j{}", i + 1), release, deadline, volume));
    }

    let jobs = jobs.into_iter().map(|j| j.expect("every job is drawn")).collect();
    Instance::new(jobs, m, spec.q).expect("generated jobs are well-formed")
}
