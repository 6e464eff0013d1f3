use rayon::prelude::*;

use super::{fraction, Certificate, DistanceReport};
use crate::cube::bits::scatter;
use crate::cube::sensitivity::{edge_profile, EdgeProfile};
use crate::cube::{Matching, Point, TruthTable};
use crate::error::{Error, Result};
use crate::graph::{hopcroft_karp, BipartiteGraph, FlowBuilder, FlowNetwork};
use crate::property::Property;

/// Largest dimension for the flow-based monotonicity oracle.
pub const MONOTONE_MAX_DIM: usize = 20;
/// Largest dimension for the unateness oracle (one flow per shift).
pub const UNATE_MAX_DIM: usize = 13;
/// Largest dimension for the explicit violation matching.
pub const MATCHING_MAX_DIM: usize = 16;

/// Minimum-cut formulation of distance to monotonicity on `{0,1}^n`.
///
/// A monotone function is an up-set `U`. Node `x` gets an edge from the
/// source of capacity 1 when `f(x) = 1` and an edge to the sink of capacity 1
/// when `f(x) = 0`; every covering pair `x -> x | e_i` gets an uncuttable
/// edge. A finite cut is then exactly an up-set (the source side), and its
/// value counts the 1-points outside `U` plus the 0-points inside `U`.
///
/// The network is built once; terminal capacities are reloaded for every
/// function, so one solver can evaluate all shifts of a function.
#[derive(Debug, Clone)]
pub struct MonotoneSolver {
    n: usize,
    net: FlowNetwork,
}

impl MonotoneSolver {
    pub fn new(n: usize) -> Result<Self> {
        if n > MONOTONE_MAX_DIM {
            return Err(Error::DimensionTooLarge { what: "monotonicity oracle", n, max: MONOTONE_MAX_DIM });
        }
        let size = 1usize << n;
        let (source, sink) = (size, size + 1);
        let infinite = size as i64 + 1;
        let mut b = FlowBuilder::new(size + 2);
        // Edge 2x is source -> x, edge 2x + 1 is x -> sink.
        for x in 0..size {
            b.add_edge(source, x, 0);
            b.add_edge(x, sink, 0);
        }
        for x in 0..size {
            for i in 0..n {
                if x >> i & 1 == 0 {
                    b.add_edge(x, x | 1 << i, infinite);
                }
            }
        }
        Ok(MonotoneSolver { n, net: b.build() })
    }

    /// Minimum number of flips making `value` monotone, or any number
    /// `>= limit` once that is certain.
    pub fn solve(&mut self, value: impl Fn(u32) -> bool, limit: i64) -> i64 {
        let size = 1usize << self.n;
        for x in 0..size {
            let v = value(x as u32);
            self.net.set_capacity(2 * x, v as i64);
            self.net.set_capacity(2 * x + 1, (!v) as i64);
        }
        self.net.reset();
        self.net.max_flow(size, size + 1, limit)
    }

    /// The optimal up-set after a complete [`solve`](Self::solve).
    pub fn repaired(&self) -> TruthTable {
        let side = self.net.source_side(1 << self.n);
        TruthTable::from_fn(self.n, |x| side[x as usize]).expect("dimension checked")
    }
}

/// Exact distance to monotonicity by minimum cut.
pub fn dist_monotone(f: &TruthTable) -> Result<DistanceReport> {
    let mut solver = MonotoneSolver::new(f.dim())?;
    let flips = solver.solve(|x| f.get(x), i64::MAX) as u64;
    let repaired = solver.repaired();
    debug_assert_eq!(f.hamming(&repaired).ok(), Some(flips));
    Ok(DistanceReport::exact(Property::Monotone, f.dim(), fraction(flips, f.dim()), Certificate::Repaired { repaired }))
}

/// Lower bound on the flips needed after shifting by `r`.
///
/// The violated edges of one dimension are disjoint, so each needs its own
/// flip; all violated edges together need at least `total / n` flips since a
/// flip touches `n` edges.
fn shift_lower_bound(profile: &EdgeProfile, r: u32) -> u64 {
    let n = profile.descending.len().max(1) as u64;
    let (mut widest, mut total) = (0, 0);
    for v in profile.violations_under_shift(r) {
        widest = widest.max(v);
        total += v;
    }
    widest.max(total.div_ceil(n))
}

/// Exact distance to unateness: the minimum over shifts `r` of the distance
/// of `x -> f(x xor r)` to monotonicity.
///
/// Shifts are visited in order of a cheap lower bound, each flow stopping as
/// soon as it reaches the best value so far; the search ends once the lower
/// bound of the next shift reaches that value. Chunks of shifts run in
/// parallel against the incumbent of the previous chunk, so the result
/// (including which optimal shift is reported) is independent of threading.
pub fn dist_unate(f: &TruthTable) -> Result<DistanceReport> {
    let n = f.dim();
    if n > UNATE_MAX_DIM {
        return Err(Error::DimensionTooLarge { what: "unateness oracle", n, max: UNATE_MAX_DIM });
    }
    let profile = edge_profile(f);
    let mut order: Vec<(u64, u32)> = (0..1u32 << n)
        .map(|r| (shift_lower_bound(&profile, r), r))
        .collect();
    order.sort_unstable();

    let solver = MonotoneSolver::new(n)?;
    let mut best: Option<(u64, u32)> = None;
    const CHUNK: usize = 16;
    for chunk in order.chunks(CHUNK) {
        let limit = best.map_or(i64::MAX, |(v, _)| v as i64);
        let live: Vec<u32> = chunk.iter().filter(|(lb, _)| (*lb as i64) < limit).map(|&(_, r)| r).collect();
        if live.is_empty() {
            break;
        }
        let results: Vec<(i64, u32)> = live
            .par_iter()
            .map_init(|| solver.clone(), |s, &r| (s.solve(|x| f.get(x ^ r), limit), r))
            .collect();
        for (v, r) in results {
            if v < limit && best.map_or(true, |(b, _)| (v as u64) < b) {
                best = Some((v as u64, r));
            }
        }
        if best.map_or(false, |(b, _)| b == 0) {
            break;
        }
    }
    let (flips, r) = best.expect("at least one shift is evaluated");
    let mut s = solver;
    let check = s.solve(|x| f.get(x ^ r), i64::MAX) as u64;
    debug_assert_eq!(check, flips);
    let repaired = s.repaired().shifted(r);
    let mut report = DistanceReport::exact(Property::Unate, n, fraction(flips, n), Certificate::Repaired { repaired });
    report.shift = Point::new(n, r).ok();
    Ok(report)
}

/// Implicit bipartite graph of monotonicity violations: 1-points on the
/// left, 0-points strictly above them on the right.
struct ViolationGraph<'a> {
    f: &'a TruthTable,
    ones: Vec<u32>,
}

impl BipartiteGraph for ViolationGraph<'_> {
    fn n_left(&self) -> usize {
        self.ones.len()
    }

    fn n_right(&self) -> usize {
        self.f.len()
    }

    fn degree(&self, u: usize) -> usize {
        let free = !self.ones[u] & (self.f.len() as u32 - 1);
        (1usize << free.count_ones()) - 1
    }

    fn neighbour(&self, u: usize, slot: usize) -> Option<u32> {
        let x = self.ones[u];
        let free = !x & (self.f.len() as u32 - 1);
        let y = x | scatter(slot as u32 + 1, free);
        (!self.f.get(y)).then_some(y)
    }
}

/// Maximum set of disjoint violating pairs `x < y` with `f(x) = 1`, `f(y) = 0`,
/// found by Hopcroft-Karp on the comparability graph. Its size over `2^n`
/// is a lower bound on the distance to monotonicity.
pub fn mono_violation_matching(f: &TruthTable) -> Result<Matching> {
    let n = f.dim();
    if n > MATCHING_MAX_DIM {
        return Err(Error::DimensionTooLarge { what: "violation matching", n, max: MATCHING_MAX_DIM });
    }
    if n == 0 {
        return Ok(Matching::new(Vec::new()));
    }
    let graph = ViolationGraph { f, ones: f.ones().collect() };
    let mate = hopcroft_karp(&graph);
    let pairs = graph
        .ones
        .iter()
        .zip(mate)
        .filter_map(|(&x, m)| m.map(|y| (Point::raw(n, x), Point::raw(n, y))))
        .collect();
    Ok(Matching::new(pairs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;
    use crate::property::{is_monotone, is_unate};
    use proptest::prelude::*;

    fn table(n: usize, ones: &[u32]) -> TruthTable {
        TruthTable::from_indices(n, ones.iter().copied()).unwrap()
    }

    #[test]
    fn monotone_examples() {
        // f = 1 - x1 on n = 1.
        let f = table(1, &[0]);
        let r = dist_monotone(&f).unwrap();
        assert_eq!(r.exact, Some(Ratio::new(1, 2)));
        r.verify(&f).unwrap();
        let xor = table(2, &[1, 2]);
        let r = dist_monotone(&xor).unwrap();
        assert_eq!(r.exact, Some(Ratio::new(1, 4)));
        r.verify(&xor).unwrap();
        for v in [false, true] {
            let c = TruthTable::constant(5, v).unwrap();
            assert_eq!(dist_monotone(&c).unwrap().exact, Some(Ratio::from_integer(0)));
        }
    }

    #[test]
    fn matching_examples() {
        let or = TruthTable::from_fn(3, |x| x != 0).unwrap();
        assert!(mono_violation_matching(&or).unwrap().is_empty());
        let xor = table(2, &[1, 2]);
        let m = mono_violation_matching(&xor).unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!(m.pairs[0].1.bits(), 3);
        let m = mono_violation_matching(&table(1, &[0])).unwrap();
        assert_eq!(m.pairs, vec![(Point::raw(1, 0), Point::raw(1, 1))]);
    }

    #[test]
    fn unate_examples() {
        let dict = TruthTable::from_fn(4, |x| x & 2 != 0).unwrap();
        let anti = dict.negated();
        for f in [dict, anti] {
            let r = dist_unate(&f).unwrap();
            assert_eq!(r.exact, Some(Ratio::from_integer(0)));
            r.verify(&f).unwrap();
        }
        let xor = table(2, &[1, 2]);
        let r = dist_unate(&xor).unwrap();
        assert_eq!(r.exact, Some(Ratio::new(1, 4)));
        r.verify(&xor).unwrap();
        let maj = TruthTable::from_fn(5, |x| x.count_ones() >= 3).unwrap();
        let r = dist_unate(&maj).unwrap();
        assert_eq!(r.shift.unwrap().bits(), 0);
    }

    #[test]
    fn flow_limit_is_a_valid_cutoff() {
        let parity = TruthTable::from_fn(6, |x| x.count_ones() % 2 == 1).unwrap();
        let mut s = MonotoneSolver::new(6).unwrap();
        let full = s.solve(|x| parity.get(x), i64::MAX);
        assert!(s.solve(|x| parity.get(x), 3) >= 3);
        assert_eq!(s.solve(|x| parity.get(x), full + 1), full);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn sandwich_and_certificates(n in 1usize..9, seed in any::<u64>(), density in 1u64..4) {
            let f = TruthTable::from_fn(n, |x| (x as u64 ^ seed).wrapping_mul(0x9E37_79B9_7F4A_7C15) >> 62 < density).unwrap();
            let mono = dist_monotone(&f).unwrap();
            mono.verify(&f).unwrap();
            let m = mono_violation_matching(&f).unwrap();
            prop_assert!(m.is_disjoint());
            for (x, y) in &m.pairs {
                prop_assert!(x.dominates(y).unwrap() && x != y && f.get(x.bits()) && !f.get(y.bits()));
            }
            prop_assert_eq!(fraction(m.len() as u64, n), mono.exact.unwrap());
            let unate = dist_unate(&f).unwrap();
            unate.verify(&f).unwrap();
            prop_assert!(unate.exact.unwrap() <= mono.exact.unwrap());
            prop_assert_eq!(unate.exact.unwrap() == Ratio::from_integer(0), is_unate(&f));
            prop_assert_eq!(mono.exact.unwrap() == Ratio::from_integer(0), is_monotone(&f));
        }
    }
}
