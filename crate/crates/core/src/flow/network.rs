use std::ops::Range;

use super::dinic::{EdgeId, FlowGraph};
use crate::model::{BoundProfile, Instance, Slot};

/// A maximal run of slots on which the bounds and the set of available jobs
/// are constant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TimeInterval {
    pub start: Slot,
    pub end: Slot,
    pub lower: usize,
    pub upper: usize,
}

impl TimeInterval {
    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end == self.start
    }

    pub fn slots(&self) -> Range<Slot> {
        self.start..self.end
    }
}

/// Source `α` feeds one node per job with its volume; each job node feeds the
/// time-interval nodes inside its window, one unit per slot; each interval
/// sends its lower-bound share straight to the sink `ω` and up to
/// `upper - lower` per slot through the relief node `γ`, whose edge to `ω`
/// carries `P - sum_t l_t`.
///
/// Node layout: `α = 0`, jobs `1..=n`, intervals next, then `γ` and `ω`.
#[derive(Clone, Debug)]
pub struct FlowNetwork {
    pub(crate) graph: FlowGraph,
    intervals: Vec<TimeInterval>,
    /// `(interval index, edge)` for every job node, in interval order.
    job_edges: Vec<Vec<(usize, EdgeId)>>,
    total_volume: i64,
}

/// Why a network cannot be built for the given bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BuildIssue {
    /// `l_t > m_t` somewhere.
    InvertedBounds { slot: Slot },
    /// `sum_t l_t > P`, so the `γ -> ω` capacity would be negative.
    LowerExceedsVolume { lower: usize, volume: usize },
    /// The bounds stop before the last deadline.
    ShortBounds { bounds: usize, horizon: usize },
}

impl FlowNetwork {
    /// Builds the network. With `compressed`, time nodes stand for maximal
    /// intervals split at every release, every deadline + 1 and every bound
    /// breakpoint; otherwise there is one node per slot.
    pub fn build(instance: &Instance, bounds: &BoundProfile, compressed: bool) -> Result<Self, BuildIssue> {
        let horizon = instance.slot_count();
        if bounds.len() < horizon {
            return Err(BuildIssue::ShortBounds {
                bounds: bounds.len(),
                horizon,
            });
        }
        if let Some(slot) = bounds.first_inverted() {
            return Err(BuildIssue::InvertedBounds { slot });
        }
        let volume = instance.total_volume();
        let lower = bounds.total_lower();
        if lower > volume {
            return Err(BuildIssue::LowerExceedsVolume { lower, volume });
        }

        let intervals = if compressed {
            compressed_intervals(instance, bounds)
        } else {
            (0..bounds.len())
                .map(|t| TimeInterval {
                    start: t,
                    end: t + 1,
                    lower: bounds.lower_at(t),
                    upper: bounds.upper_at(t),
                })
                .collect()
        };

        let n = instance.n();
        let k = intervals.len();
        let (source, relief, sink) = (0, n + k + 1, n + k + 2);
        let mut graph = FlowGraph::new(n + k + 3);

        for (j, job) in instance.jobs().iter().enumerate() {
            graph.add_edge(source, 1 + j, job.volume as i64);
        }
        let mut job_edges = vec![Vec::new(); n];
        for (j, job) in instance.jobs().iter().enumerate() {
            // Intervals never straddle a window boundary, so checking the
            // first slot decides containment.
            for (i, iv) in intervals.iter().enumerate() {
                if job.is_available(iv.start) {
                    let e = graph.add_edge(1 + j, 1 + n + i, iv.len() as i64);
                    job_edges[j].push((i, e));
                }
            }
        }
        for (i, iv) in intervals.iter().enumerate() {
            let node = 1 + n + i;
            let len = iv.len() as i64;
            graph.add_edge(node, relief, (iv.upper - iv.lower) as i64 * len);
            graph.add_edge(node, sink, iv.lower as i64 * len);
        }
        graph.add_edge(relief, sink, (volume - lower) as i64);

        Ok(FlowNetwork {
            graph,
            intervals,
            job_edges,
            total_volume: volume as i64,
        })
    }

    pub fn source(&self) -> usize {
        0
    }

    pub fn sink(&self) -> usize {
        self.graph.node_count() - 1
    }

    pub fn relief(&self) -> usize {
        self.graph.node_count() - 2
    }

    pub fn job_node(&self, j: usize) -> usize {
        1 + j
    }

    pub fn interval_node(&self, i: usize) -> usize {
        1 + self.job_edges.len() + i
    }

    pub fn intervals(&self) -> &[TimeInterval] {
        &self.intervals
    }

    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    /// `P`, also the total capacity into the sink.
    pub fn total_volume(&self) -> i64 {
        self.total_volume
    }

    /// Forward edges as `(from, to, capacity)`, in insertion order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        (0..self.graph.edge_count()).map(|i| self.graph.edge(2 * i))
    }

    /// `(interval index, edge)` pairs leaving job `j`'s node.
    pub fn job_edges(&self, j: usize) -> &[(usize, EdgeId)] {
        &self.job_edges[j]
    }
}

/// Splits `0..bounds.len()` at every release, deadline + 1 and bound
/// breakpoint.
fn compressed_intervals(instance: &Instance, bounds: &BoundProfile) -> Vec<TimeInterval> {
    let len = bounds.len();
    let mut cuts: Vec<Slot> = instance
        .jobs()
        .iter()
        .flat_map(|j| [j.release, j.deadline + 1])
        .chain(bounds.breakpoints())
        .chain([0, len])
        .filter(|&t| t <= len)
        .collect();
    cuts.sort_unstable();
    cuts.dedup();
    cuts.windows(2)
        .map(|w| TimeInterval {
            start: w[0],
            end: w[1],
            lower: bounds.lower_at(w[0]),
            upper: bounds.upper_at(w[0]),
        })
        .collect()
}

/// Result of a maximum-flow computation on a [`FlowNetwork`].
#[derive(Clone, Debug)]
pub struct MaxFlow {
    pub value: i64,
    /// Flow on every forward edge, indexed like [`FlowNetwork::edges`].
    pub edge_flows: Vec<i64>,
    /// Source side of the min cut: every node except those that can still
    /// reach `ω` in the residual network.
    pub source_side: Vec<bool>,
    /// For each job, flow sent to each interval it can use.
    pub job_interval_flows: Vec<Vec<(usize, i64)>>,
}

/// Computes a maximum `α`-`ω` flow. The network is left untouched.
pub fn max_flow(network: &FlowNetwork) -> MaxFlow {
    let mut graph = network.graph.clone();
    let value = graph.max_flow(network.source(), network.sink());
    let edge_flows = (0..graph.edge_count()).map(|i| graph.flow(2 * i)).collect();
    let source_side = graph.reaching(network.sink()).into_iter().map(|r| !r).collect();
    let job_interval_flows = network
        .job_edges
        .iter()
        .map(|edges| edges.iter().map(|&(i, e)| (i, graph.flow(e))).collect())
        .collect();
    MaxFlow {
        value,
        edge_flows,
        source_side,
        job_interval_flows,
    }
}
