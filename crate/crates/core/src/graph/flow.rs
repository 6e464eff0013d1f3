use std::collections::VecDeque;

/// Collects directed edges before freezing them into a [`FlowNetwork`].
#[derive(Debug, Default, Clone)]
pub struct FlowBuilder {
    nodes: usize,
    edges: Vec<(u32, u32, i64)>,
}

impl FlowBuilder {
    pub fn new(nodes: usize) -> Self {
        FlowBuilder { nodes, edges: Vec::new() }
    }

    /// Adds `u -> v` with capacity `cap` and returns the edge id.
    pub fn add_edge(&mut self, u: usize, v: usize, cap: i64) -> usize {
        assert!(u < self.nodes && v < self.nodes && cap >= 0);
        self.edges.push((u as u32, v as u32, cap));
        self.edges.len() - 1
    }

    pub fn build(self) -> FlowNetwork {
        let n = self.nodes;
        let mut degree = vec![0usize; n + 1];
        for &(u, v, _) in &self.edges {
            degree[u as usize] += 1;
            degree[v as usize] += 1;
        }
        let mut head = vec![0usize; n + 1];
        for i in 0..n {
            head[i + 1] = head[i] + degree[i];
        }
        let arcs = head[n];
        let mut fill = head.clone();
        let mut to = vec![0u32; arcs];
        let mut cap = vec![0i64; arcs];
        let mut rev = vec![0u32; arcs];
        let mut arc_of_edge = Vec::with_capacity(self.edges.len());
        for &(u, v, c) in &self.edges {
            let a = fill[u as usize];
            fill[u as usize] += 1;
            let b = fill[v as usize];
            fill[v as usize] += 1;
            to[a] = v;
            cap[a] = c;
            rev[a] = b as u32;
            to[b] = u;
            cap[b] = 0;
            rev[b] = a as u32;
            arc_of_edge.push(a as u32);
        }
        FlowNetwork {
            head,
            to,
            original: cap.clone(),
            cap,
            rev,
            arc_of_edge,
            level: vec![-1; n],
            cursor: vec![0; n],
        }
    }
}

/// A residual network solved with Dinic's algorithm.
///
/// Capacities can be reset between solves so one network serves many
/// related instances (for example, every coordinate shift of a function).
#[derive(Debug, Clone)]
pub struct FlowNetwork {
    head: Vec<usize>,
    to: Vec<u32>,
    cap: Vec<i64>,
    original: Vec<i64>,
    rev: Vec<u32>,
    arc_of_edge: Vec<u32>,
    level: Vec<i32>,
    cursor: Vec<usize>,
}

impl FlowNetwork {
    pub fn nodes(&self) -> usize {
        self.head.len() - 1
    }

    /// Restores every residual capacity to its configured value.
    pub fn reset(&mut self) {
        self.cap.copy_from_slice(&self.original);
    }

    /// Changes the configured capacity of an edge; takes effect on the next [`reset`](Self::reset).
    pub fn set_capacity(&mut self, edge: usize, cap: i64) {
        let a = self.arc_of_edge[edge] as usize;
        self.original[a] = cap;
    }

    /// Flow currently carried by an edge.
    pub fn edge_flow(&self, edge: usize) -> i64 {
        let a = self.arc_of_edge[edge] as usize;
        self.original[a] - self.cap[a]
    }

    /// Pushes flow from `s` to `t` until the flow is maximum or reaches `limit`.
    /// Returns the flow value; a result `>= limit` only certifies that bound.
    pub fn max_flow(&mut self, s: usize, t: usize, limit: i64) -> i64 {
        let mut flow = 0i64;
        let mut path: Vec<usize> = Vec::new();
        while flow < limit && self.layer(s, t) {
            for u in 0..self.nodes() {
                self.cursor[u] = self.head[u];
            }
            while flow < limit {
                let pushed = self.augment(s, t, limit - flow, &mut path);
                if pushed == 0 {
                    break;
                }
                flow += pushed;
            }
        }
        flow
    }

    fn layer(&mut self, s: usize, t: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = -1);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s as u32]);
        while let Some(u) = queue.pop_front() {
            let u = u as usize;
            for a in self.head[u]..self.head[u + 1] {
                let v = self.to[a] as usize;
                if self.cap[a] > 0 && self.level[v] < 0 {
                    self.level[v] = self.level[u] + 1;
                    queue.push_back(v as u32);
                }
            }
        }
        self.level[t] >= 0
    }

    /// Finds one blocking-flow path with an explicit stack and saturates it.
    fn augment(&mut self, s: usize, t: usize, limit: i64, path: &mut Vec<usize>) -> i64 {
        path.clear();
        let mut u = s;
        loop {
            if u == t {
                let pushed = path.iter().map(|&a| self.cap[a]).min().unwrap_or(0).min(limit);
                for &a in path.iter() {
                    self.cap[a] -= pushed;
                    self.cap[self.rev[a] as usize] += pushed;
                }
                return pushed;
            }
            let mut advanced = false;
            while self.cursor[u] < self.head[u + 1] {
                let a = self.cursor[u];
                let v = self.to[a] as usize;
                if self.cap[a] > 0 && self.level[v] == self.level[u] + 1 {
                    path.push(a);
                    u = v;
                    advanced = true;
                    break;
                }
                self.cursor[u] += 1;
            }
            if !advanced {
                // Dead end: retreat and skip the arc that led here.
                self.level[u] = -1;
                match path.pop() {
                    None => return 0,
                    Some(a) => {
                        u = self.to[self.rev[a] as usize] as usize;
                        self.cursor[u] += 1;
                    }
                }
            }
        }
    }

    /// Vertices reachable from `s` in the residual network: the source side of a minimum cut.
    pub fn source_side(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.nodes()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for a in self.head[u]..self.head[u + 1] {
                let v = self.to[a] as usize;
                if self.cap[a] > 0 && !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen
    }
}
