use std::collections::VecDeque;

const NIL: u32 = u32::MAX;

/// Read access to a bipartite graph, left vertices to right vertices.
///
/// Adjacency is exposed by slot: slot `k < degree(u)` of `u` holds either a
/// right vertex or nothing, which lets implicit graphs filter candidates
/// without materializing edge lists.
pub trait BipartiteGraph {
    fn n_left(&self) -> usize;
    fn n_right(&self) -> usize;
    fn degree(&self, u: usize) -> usize;
    fn neighbour(&self, u: usize, slot: usize) -> Option<u32>;
}

/// A bipartite graph in compressed adjacency form, left vertices to right.
#[derive(Debug, Clone)]
pub struct Bipartite {
    n_left: usize,
    n_right: usize,
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl Bipartite {
    /// `targets[offsets[u]..offsets[u + 1]]` are the right neighbours of `u`.
    pub fn new(n_left: usize, n_right: usize, offsets: Vec<usize>, targets: Vec<u32>) -> Self {
        assert_eq!(offsets.len(), n_left + 1);
        assert!(targets.iter().all(|&v| (v as usize) < n_right));
        Bipartite { n_left, n_right, offsets, targets }
    }

    pub fn from_lists(n_right: usize, adj: &[Vec<u32>]) -> Self {
        let mut offsets = Vec::with_capacity(adj.len() + 1);
        offsets.push(0);
        let mut targets = Vec::new();
        for list in adj {
            targets.extend_from_slice(list);
            offsets.push(targets.len());
        }
        Self::new(adj.len(), n_right, offsets, targets)
    }

    pub fn neighbours(&self, u: usize) -> &[u32] {
        &self.targets[self.offsets[u]..self.offsets[u + 1]]
    }

    /// Maximum matching by Hopcroft-Karp; entry `u` is the partner of left vertex `u`.
    pub fn maximum_matching(&self) -> Vec<Option<u32>> {
        hopcroft_karp(self)
    }
}

impl BipartiteGraph for Bipartite {
    fn n_left(&self) -> usize {
        self.n_left
    }

    fn n_right(&self) -> usize {
        self.n_right
    }

    fn degree(&self, u: usize) -> usize {
        self.offsets[u + 1] - self.offsets[u]
    }

    fn neighbour(&self, u: usize, slot: usize) -> Option<u32> {
        Some(self.targets[self.offsets[u] + slot])
    }
}

/// Maximum matching by Hopcroft-Karp; entry `u` is the partner of left vertex `u`.
pub fn hopcroft_karp<G: BipartiteGraph + ?Sized>(g: &G) -> Vec<Option<u32>> {
    let (n_left, n_right) = (g.n_left(), g.n_right());
    let mut mate_l = vec![NIL; n_left];
    let mut mate_r = vec![NIL; n_right];
    let mut dist = vec![u32::MAX; n_left];
    let mut cursor = vec![0usize; n_left];
    let mut queue = VecDeque::new();
    let mut stack: Vec<u32> = Vec::new();

    // Greedy start.
    for u in 0..n_left {
        for k in 0..g.degree(u) {
            if let Some(v) = g.neighbour(u, k) {
                if mate_r[v as usize] == NIL {
                    mate_l[u] = v;
                    mate_r[v as usize] = u as u32;
                    break;
                }
            }
        }
    }

    loop {
        // Layer the graph from the free left vertices.
        queue.clear();
        for u in 0..n_left {
            if mate_l[u] == NIL {
                dist[u] = 0;
                queue.push_back(u as u32);
            } else {
                dist[u] = u32::MAX;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            let u = u as usize;
            for k in 0..g.degree(u) {
                let Some(v) = g.neighbour(u, k) else { continue };
                let w = mate_r[v as usize];
                if w == NIL {
                    found = true;
                } else if dist[w as usize] == u32::MAX {
                    dist[w as usize] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        if !found {
            break;
        }

        cursor.iter_mut().for_each(|c| *c = 0);
        for root in 0..n_left {
            if mate_l[root] != NIL {
                continue;
            }
            stack.clear();
            stack.push(root as u32);
            while let Some(&u) = stack.last() {
                let u = u as usize;
                if cursor[u] == g.degree(u) {
                    dist[u] = u32::MAX;
                    stack.pop();
                    if let Some(&p) = stack.last() {
                        cursor[p as usize] += 1;
                    }
                    continue;
                }
                let Some(v) = g.neighbour(u, cursor[u]) else {
                    cursor[u] += 1;
                    continue;
                };
                let w = mate_r[v as usize];
                if w == NIL {
                    // Flip the alternating path recorded on the stack.
                    for &x in stack.iter() {
                        let y = g.neighbour(x as usize, cursor[x as usize]).expect("path slot");
                        mate_l[x as usize] = y;
                        mate_r[y as usize] = x;
                    }
                    break;
                } else if dist[w as usize] != u32::MAX && dist[w as usize] == dist[u] + 1 {
                    stack.push(w);
                } else {
                    cursor[u] += 1;
                }
            }
        }
    }
    mate_l.into_iter().map(|v| (v != NIL).then_some(v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Maximum matching size by exhaustive search over left vertices.
    fn brute(adj: &[Vec<u32>], used: &mut Vec<bool>, u: usize) -> usize {
        if u == adj.len() {
            return 0;
        }
        let mut best = brute(adj, used, u + 1);
        for &v in &adj[u] {
            if !used[v as usize] {
                used[v as usize] = true;
                best = best.max(1 + brute(adj, used, u + 1));
                used[v as usize] = false;
            }
        }
        best
    }

    #[test]
    fn path_needing_augmentation() {
        // Greedy picks 0-0, forcing an augmenting path for vertex 1.
        let g = Bipartite::from_lists(2, &[vec![0, 1], vec![0]]);
        let m = g.maximum_matching();
        assert_eq!(m, vec![Some(1), Some(0)]);
    }

    proptest! {
        #[test]
        fn matches_brute_force(adj in prop::collection::vec(prop::collection::vec(0u32..6, 0..4), 0..7)) {
            let mut adj = adj;
            for l in adj.iter_mut() { l.sort(); l.dedup(); }
            let g = Bipartite::from_lists(6, &adj);
            let m = g.maximum_matching();
            let mut used = vec![false; 6];
            for (u, v) in m.iter().enumerate() {
                if let Some(v) = v {
                    prop_assert!(adj[u].contains(v));
                    prop_assert!(!used[*v as usize]);
                    used[*v as usize] = true;
                }
            }
            let size = m.iter().filter(|v| v.is_some()).count();
            prop_assert_eq!(size, brute(&adj, &mut vec![false; 6], 0));
        }
    }
}
