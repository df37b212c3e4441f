use std::collections::VecDeque;

pub type EdgeId = usize;

#[derive(Clone, Debug)]
struct Edge {
    to: usize,
    cap: i64,
    flow: i64,
}

/// Directed graph with integral capacities, solved with Dinic's blocking-flow
/// method. Edges are stored in forward/backward pairs `2i`, `2i + 1`.
#[derive(Clone, Debug, Default)]
pub struct FlowGraph {
    edges: Vec<Edge>,
    adj: Vec<Vec<EdgeId>>,
}

impl FlowGraph {
    pub fn new(nodes: usize) -> Self {
        FlowGraph {
            edges: Vec::new(),
            adj: vec![Vec::new(); nodes],
        }
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    /// Number of forward edges.
    pub fn edge_count(&self) -> usize {
        self.edges.len() / 2
    }

    pub fn add_edge(&mut self, from: usize, to: usize, cap: i64) -> EdgeId {
        assert!(cap >= 0, "negative capacity {cap} on edge {from}->{to}");
        let id = self.edges.len();
        self.edges.push(Edge { to, cap, flow: 0 });
        self.edges.push(Edge {
            to: from,
            cap: 0,
            flow: 0,
        });
        self.adj[from].push(id);
        self.adj[to].push(id + 1);
        id
    }

    /// `(from, to, capacity)` of a forward edge.
    pub fn edge(&self, id: EdgeId) -> (usize, usize, i64) {
        (self.edges[id ^ 1].to, self.edges[id].to, self.edges[id].cap)
    }

    pub fn flow(&self, id: EdgeId) -> i64 {
        self.edges[id].flow
    }

    fn residual(&self, id: EdgeId) -> i64 {
        self.edges[id].cap - self.edges[id].flow
    }

    /// Runs Dinic from `s` to `t` on top of any flow already present and
    /// returns the value added.
    pub fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        if s == t {
            return 0;
        }
        let mut total = 0;
        let mut level = vec![usize::MAX; self.adj.len()];
        let mut next = vec![0usize; self.adj.len()];
        while self.bfs(s, t, &mut level) {
            next.fill(0);
            loop {
                let pushed = self.dfs(s, t, i64::MAX, &level, &mut next);
                if pushed == 0 {
                    break;
                }
                total += pushed;
            }
        }
        total
    }

    fn bfs(&self, s: usize, t: usize, level: &mut [usize]) -> bool {
        level.fill(usize::MAX);
        level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &e in &self.adj[u] {
                let v = self.edges[e].to;
                if self.residual(e) > 0 && level[v] == usize::MAX {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        level[t] != usize::MAX
    }

    fn dfs(&mut self, u: usize, t: usize, limit: i64, level: &[usize], next: &mut [usize]) -> i64 {
        if u == t {
            return limit;
        }
        while next[u] < self.adj[u].len() {
            let e = self.adj[u][next[u]];
            let v = self.edges[e].to;
            let room = self.residual(e);
            if room > 0 && level[v] == level[u] + 1 {
                let pushed = self.dfs(v, t, limit.min(room), level, next);
                if pushed > 0 {
                    self.edges[e].flow += pushed;
                    self.edges[e ^ 1].flow -= pushed;
                    return pushed;
                }
            }
            next[u] += 1;
        }
        0
    }

    /// Nodes reachable from `s` through edges with residual capacity.
    pub fn reachable_from(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &e in &self.adj[u] {
                let v = self.edges[e].to;
                if !seen[v] && self.residual(e) > 0 {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen
    }

    /// Nodes that can still reach `t` through edges with residual capacity.
    pub fn reaching(&self, t: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[t] = true;
        let mut stack = vec![t];
        while let Some(v) = stack.pop() {
            // Each edge into `v` is the twin of an edge stored at `v`.
            for &back in &self.adj[v] {
                let e = back ^ 1;
                let u = self.edges[back].to;
                if !seen[u] && self.residual(e) > 0 {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen
    }
}
