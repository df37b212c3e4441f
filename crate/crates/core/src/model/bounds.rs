use std::ops::Range;

use serde::{Deserialize, Serialize};

use super::Slot;
use crate::error::{Error, Result};

/// One constant piece of a [`BoundProfile`], running from `start` up to the
/// next segment's start.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundSegment {
    pub start: Slot,
    pub lower: usize,
    pub upper: usize,
}

/// Per-slot lower and upper bounds on the number of busy processors, stored
/// as a piecewise-constant function over `0..len`.
///
/// Adjacent segments never carry equal bounds, so the segment starts are
/// exactly the breakpoints of the profile.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundProfile {
    len: usize,
    segments: Vec<BoundSegment>,
}

impl BoundProfile {
    pub fn uniform(len: usize, lower: usize, upper: usize) -> Self {
        let segments = if len == 0 {
            Vec::new()
        } else {
            vec![BoundSegment { start: 0, lower, upper }]
        };
        BoundProfile { len, segments }
    }

    pub fn from_per_slot(lower: &[usize], upper: &[usize]) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::InvalidBounds(format!(
                "lower bounds cover {} slots, upper bounds {}",
                lower.len(),
                upper.len()
            )));
        }
        let segments = lower
            .iter()
            .zip(upper)
            .enumerate()
            .map(|(start, (&lower, &upper))| BoundSegment { start, lower, upper })
            .collect();
        let mut profile = BoundProfile {
            len: lower.len(),
            segments,
        };
        profile.merge();
        Ok(profile)
    }

    /// Builds a profile from `(range, lower, upper)` pieces laid over a
    /// default of `(0, default_upper)`. Later pieces override earlier ones.
    pub fn from_ranges(len: usize, default_upper: usize, pieces: &[(Range<Slot>, usize, usize)]) -> Result<Self> {
        let mut lower = vec![0; len];
        let mut upper = vec![default_upper; len];
        for (range, l, u) in pieces {
            if range.end > len {
                return Err(Error::InvalidBounds(format!(
                    "segment {}..{} extends past the horizon of {len} slots",
                    range.start, range.end
                )));
            }
            for t in range.clone() {
                lower[t] = *l;
                upper[t] = *u;
            }
        }
        Self::from_per_slot(&lower, &upper)
    }

    /// Number of slots covered.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn segments(&self) -> &[BoundSegment] {
        &self.segments
    }

    /// Half-open slot range covered by segment `i`.
    pub fn segment_range(&self, i: usize) -> Range<Slot> {
        let end = self.segments.get(i + 1).map_or(self.len, |s| s.start);
        self.segments[i].start..end
    }

    /// Slots at which a new segment begins.
    pub fn breakpoints(&self) -> impl Iterator<Item = Slot> + '_ {
        self.segments.iter().map(|s| s.start)
    }

    fn segment_at(&self, t: Slot) -> &BoundSegment {
        assert!(t < self.len, "slot {t} outside profile of length {}", self.len);
        let i = self.segments.partition_point(|s| s.start <= t) - 1;
        &self.segments[i]
    }

    pub fn lower_at(&self, t: Slot) -> usize {
        self.segment_at(t).lower
    }

    pub fn upper_at(&self, t: Slot) -> usize {
        self.segment_at(t).upper
    }

    pub fn lower_per_slot(&self) -> Vec<usize> {
        (0..self.segments.len())
            .flat_map(|i| {
                let l = self.segments[i].lower;
                self.segment_range(i).map(move |_| l)
            })
            .collect()
    }

    pub fn upper_per_slot(&self) -> Vec<usize> {
        (0..self.segments.len())
            .flat_map(|i| {
                let u = self.segments[i].upper;
                self.segment_range(i).map(move |_| u)
            })
            .collect()
    }

    /// `sum_t l_t` over the whole horizon.
    pub fn total_lower(&self) -> usize {
        (0..self.segments.len())
            .map(|i| self.segments[i].lower * self.segment_range(i).len())
            .sum()
    }

    /// First slot where the lower bound exceeds the upper bound.
    pub fn first_inverted(&self) -> Option<Slot> {
        self.segments.iter().find(|s| s.lower > s.upper).map(|s| s.start)
    }

    /// Checks `0 <= l <= u <= m` everywhere.
    pub fn validate(&self, m: usize) -> Result<()> {
        for (i, s) in self.segments.iter().enumerate() {
            let r = self.segment_range(i);
            if s.lower > s.upper {
                return Err(Error::InvalidBounds(format!(
                    "lower bound {} exceeds upper bound {} on slots {}..{}",
                    s.lower, s.upper, r.start, r.end
                )));
            }
            if s.upper > m {
                return Err(Error::InvalidBounds(format!(
                    "upper bound {} exceeds m = {m} on slots {}..{}",
                    s.upper, r.start, r.end
                )));
            }
        }
        Ok(())
    }

    /// Copy with `u_t = min(u_t, cap)` on `range`.
    pub fn with_upper_cap(&self, range: Range<Slot>, cap: usize) -> BoundProfile {
        let mut next = self.clone();
        next.update(range, |s| s.upper = s.upper.min(cap));
        next
    }

    /// Copy with `l_t = max(l_t, floor)` on `range`.
    pub fn with_lower_floor(&self, range: Range<Slot>, floor: usize) -> BoundProfile {
        let mut next = self.clone();
        next.update(range, |s| s.lower = s.lower.max(floor));
        next
    }

    /// True if every lower bound is at least, and every upper bound at most,
    /// the corresponding bound in `earlier`.
    pub fn is_tightening_of(&self, earlier: &BoundProfile) -> bool {
        if self.len != earlier.len {
            return false;
        }
        // Checking at the union of both breakpoint sets covers every slot.
        let mut cuts: Vec<Slot> = self.breakpoints().chain(earlier.breakpoints()).collect();
        cuts.sort_unstable();
        cuts.dedup();
        cuts.into_iter().all(|t| {
            let (a, b) = (self.segment_at(t), earlier.segment_at(t));
            a.lower >= b.lower && a.upper <= b.upper
        })
    }

    fn split_at(&mut self, t: Slot) {
        if t == 0 || t >= self.len {
            return;
        }
        let i = self.segments.partition_point(|s| s.start <= t) - 1;
        if self.segments[i].start != t {
            let mut piece = self.segments[i];
            piece.start = t;
            self.segments.insert(i + 1, piece);
        }
    }

    fn update(&mut self, range: Range<Slot>, f: impl Fn(&mut BoundSegment)) {
        let end = range.end.min(self.len);
        if range.start >= end {
            return;
        }
        self.split_at(range.start);
        self.split_at(end);
        for s in self
            .segments
            .iter_mut()
            .filter(|s| s.start >= range.start && s.start < end)
        {
            f(s);
        }
        self.merge();
    }

    fn merge(&mut self) {
        self.segments
            .dedup_by(|next, prev| next.lower == prev.lower && next.upper == prev.upper);
    }
}
