use serde::{Deserialize, Serialize};

use super::binomial::binomial_u64;
use super::point::Point;
use crate::error::{Error, Result};
use crate::graph::Bipartite;

/// Default largest dimension accepted by [`level_matching`].
pub const LEVEL_MATCHING_CAP: usize = 22;

/// A set of disjoint point pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matching {
    pub pairs: Vec<(Point, Point)>,
    /// `(w, a - w)` for level matchings.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levels: Option<(u32, u32)>,
}

impl Matching {
    pub fn new(pairs: Vec<(Point, Point)>) -> Self {
        Matching { pairs, levels: None }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// No point occurs in two pairs. A pair `(x, x)` uses `x` once.
    pub fn is_disjoint(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.pairs.iter().all(|(x, y)| {
            let first = seen.insert(*x);
            first && (x == y || seen.insert(*y))
        })
    }

    /// Disjoint, every pair ordered by `<=`, and levels respected when recorded.
    pub fn is_valid_level_matching(&self) -> bool {
        self.is_disjoint()
            && self.pairs.iter().all(|(x, y)| {
                x.dominates(y).unwrap_or(false)
                    && self
                        .levels
                        .map_or(true, |(lo, hi)| x.weight() == lo && y.weight() == hi)
            })
    }
}

/// A perfect matching between weight-`w` and weight-`a - w` points of
/// `{0,1}^a` with `x <= y` in every pair, found by Hopcroft-Karp.
pub fn level_matching(a: usize, w: usize) -> Result<Matching> {
    level_matching_capped(a, w, LEVEL_MATCHING_CAP)
}

pub fn level_matching_capped(a: usize, w: usize, cap: usize) -> Result<Matching> {
    if a > cap {
        return Err(Error::DimensionTooLarge { what: "level matching", n: a, max: cap });
    }
    if a == 0 || 2 * w > a {
        return Err(Error::InvalidParameter(format!("need 1 <= a and 0 <= w <= a/2, got a={a}, w={w}")));
    }
    let top = a - w;
    let lower = level_points(a, w);
    let upper = level_points(a, top);
    let pairs = if w == top {
        lower.iter().map(|&x| (Point::raw(a, x), Point::raw(a, x))).collect()
    } else {
        let index_of = |x: u32| upper.binary_search(&x).expect("level point") as u32;
        let mut offsets = Vec::with_capacity(lower.len() + 1);
        let mut targets = Vec::new();
        offsets.push(0);
        for &x in &lower {
            // Supersets of x of weight a - w: add (a - 2w) of the free coordinates.
            let free = !x & ((1u32 << a) - 1);
            for_each_subset_of_size(free, top - w, |s| targets.push(index_of(x | s)));
            offsets.push(targets.len());
        }
        let graph = Bipartite::new(lower.len(), upper.len(), offsets, targets);
        let mate = graph.maximum_matching();
        let pairs: Vec<_> = lower
            .iter()
            .zip(&mate)
            .filter_map(|(&x, &m)| m.map(|m| (Point::raw(a, x), Point::raw(a, upper[m as usize]))))
            .collect();
        if pairs.len() as u64 != binomial_u64(a as u64, w as u64) {
            return Err(Error::Precondition("containment graph has no perfect matching".into()));
        }
        pairs
    };
    Ok(Matching { pairs, levels: Some((w as u32, top as u32)) })
}

/// All `a`-bit indices of weight `w`, ascending.
pub fn level_points(a: usize, w: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(binomial_u64(a as u64, w as u64) as usize);
    for_each_subset_of_size(((1u64 << a) - 1) as u32, w, |s| out.push(s));
    out.sort_unstable();
    out
}

/// Calls `f` on every subset of `mask` with exactly `size` elements.
pub fn for_each_subset_of_size(mask: u32, size: usize, mut f: impl FnMut(u32)) {
    let elems: Vec<u32> = (0..32).filter(|b| mask >> b & 1 == 1).map(|b| 1u32 << b).collect();
    if size > elems.len() {
        return;
    }
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        f(idx.iter().fold(0, |acc, &i| acc | elems[i]));
        // Advance to the next combination in lexicographic order.
        let n = elems.len();
        let mut i = size;
        while i > 0 && idx[i - 1] == i - 1 + n - size {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        idx[i - 1] += 1;
        for j in i..size {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
