/// Outcome of a minimum vertex cover search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexCover {
    /// Best cover found, sorted.
    pub cover: Vec<u32>,
    /// True when `cover` is proven minimum.
    pub optimal: bool,
    /// Size of a maximal matching: a lower bound on any cover.
    pub matching: Vec<(u32, u32)>,
    pub nodes_explored: u64,
}

/// Greedy maximal matching over `adj` (symmetric lists, no self loops).
pub fn greedy_maximal_matching(adj: &[Vec<u32>]) -> Vec<(u32, u32)> {
    let mut used = vec![false; adj.len()];
    let mut out = Vec::new();
    // Low-degree vertices first tends to give larger matchings.
    let mut order: Vec<usize> = (0..adj.len()).collect();
    order.sort_by_key(|&v| adj[v].len());
    for u in order {
        if used[u] {
            continue;
        }
        if let Some(&v) = adj[u].iter().filter(|&&v| !used[v as usize] && v as usize != u).min_by_key(|&&v| adj[v as usize].len()) {
            used[u] = true;
            used[v as usize] = true;
            out.push((u as u32, v));
        }
    }
    out
}

/// Exact minimum vertex cover by branch and bound.
///
/// `adj` must be symmetric without self loops; `forced` lists vertices that
/// belong to every cover (vertices with a self loop). The search stops after
/// `node_budget` branch nodes, in which case the best cover found so far is
/// returned with `optimal = false`.
pub fn min_vertex_cover(adj: &[Vec<u32>], forced: &[u32], node_budget: u64) -> VertexCover {
    let mut solver = Solver::new(adj);
    for &v in forced {
        if solver.alive[v as usize] {
            solver.remove(v as usize, true);
        }
    }
    let matching = {
        let residual: Vec<Vec<u32>> = (0..adj.len())
            .map(|u| {
                if solver.alive[u] {
                    adj[u].iter().copied().filter(|&v| solver.alive[v as usize]).collect()
                } else {
                    Vec::new()
                }
            })
            .collect();
        greedy_maximal_matching(&residual)
    };
    solver.best = solver.greedy_cover();
    solver.budget = node_budget;
    solver.search();
    let mut cover = solver.best;
    cover.sort_unstable();
    VertexCover {
        cover,
        optimal: !solver.aborted,
        matching,
        nodes_explored: solver.nodes,
    }
}

struct Solver<'a> {
    adj: &'a [Vec<u32>],
    alive: Vec<bool>,
    degree: Vec<usize>,
    cover: Vec<u32>,
    log: Vec<(u32, bool)>,
    best: Vec<u32>,
    nodes: u64,
    budget: u64,
    aborted: bool,
    scratch: Vec<bool>,
}

impl<'a> Solver<'a> {
    fn new(adj: &'a [Vec<u32>]) -> Self {
        let n = adj.len();
        Solver {
            adj,
            alive: vec![true; n],
            degree: adj.iter().map(Vec::len).collect(),
            cover: Vec::new(),
            log: Vec::new(),
            best: Vec::new(),
            nodes: 0,
            budget: 0,
            aborted: false,
            scratch: vec![false; n],
        }
    }

    fn remove(&mut self, v: usize, into_cover: bool) {
        debug_assert!(self.alive[v]);
        self.alive[v] = false;
        for &u in &self.adj[v] {
            if self.alive[u as usize] {
                self.degree[u as usize] -= 1;
            }
        }
        if into_cover {
            self.cover.push(v as u32);
        }
        self.log.push((v as u32, into_cover));
    }

    fn undo(&mut self, mark: usize) {
        while self.log.len() > mark {
            let (v, into_cover) = self.log.pop().expect("log entry");
            let v = v as usize;
            for &u in &self.adj[v] {
                if self.alive[u as usize] {
                    self.degree[u as usize] += 1;
                }
            }
            self.alive[v] = true;
            if into_cover {
                self.cover.pop();
            }
        }
    }

    /// Repeatedly takes the max-degree vertex; used for the initial incumbent.
    fn greedy_cover(&mut self) -> Vec<u32> {
        let mark = self.log.len();
        loop {
            let pick = (0..self.adj.len())
                .filter(|&v| self.alive[v] && self.degree[v] > 0)
                .max_by_key(|&v| self.degree[v]);
            match pick {
                Some(v) => self.remove(v, true),
                None => break,
            }
        }
        let out = self.cover.clone();
        self.undo(mark);
        out
    }

    /// Size of a greedy maximal matching among alive vertices.
    fn matching_bound(&mut self) -> usize {
        let mut size = 0;
        for u in 0..self.adj.len() {
            self.scratch[u] = false;
        }
        for u in 0..self.adj.len() {
            if !self.alive[u] || self.scratch[u] {
                continue;
            }
            if let Some(&v) = self.adj[u]
                .iter()
                .find(|&&v| self.alive[v as usize] && !self.scratch[v as usize])
            {
                self.scratch[u] = true;
                self.scratch[v as usize] = true;
                size += 1;
            }
        }
        size
    }

    fn search(&mut self) {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.aborted = true;
            return;
        }
        let mark = self.log.len();
        self.reduce();
        if self.cover.len() + self.matching_bound() >= self.best.len() {
            self.undo(mark);
            return;
        }
        let pick = (0..self.adj.len())
            .filter(|&v| self.alive[v] && self.degree[v] > 0)
            .max_by_key(|&v| self.degree[v]);
        let Some(v) = pick else {
            self.best = self.cover.clone();
            self.undo(mark);
            return;
        };

        let branch = self.log.len();
        self.remove(v, true);
        self.search();
        self.undo(branch);
        if self.aborted {
            self.undo(mark);
            return;
        }

        let neighbours: Vec<u32> =
            self.adj[v].iter().copied().filter(|&u| self.alive[u as usize]).collect();
        if self.cover.len() + neighbours.len() < self.best.len() {
            for u in neighbours {
                self.remove(u as usize, true);
            }
            self.search();
            self.undo(branch);
        }
        self.undo(mark);
    }

    /// Degree-0, degree-1 and high-degree reductions, applied to a fixpoint.
    fn reduce(&mut self) {
        loop {
            let mut changed = false;
            for v in 0..self.adj.len() {
                if !self.alive[v] {
                    continue;
                }
                let d = self.degree[v];
                if d == 0 {
                    self.remove(v, false);
                } else if d == 1 {
                    let u = self.adj[v]
                        .iter()
                        .copied()
                        .find(|&u| self.alive[u as usize])
                        .expect("live neighbour") as usize;
                    self.remove(u, true);
                    changed = true;
                } else if self.cover.len() + d >= self.best.len() {
                    // Leaving v out would cost all d neighbours: no improvement.
                    self.remove(v, true);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
    }
}
