use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::{fraction, Certificate, DistanceReport};
use crate::cube::{Point, TruthTable};
use crate::error::{Error, Result};
use crate::property::{union_below, Property};

/// Largest dimension for which every union-closed table is enumerated.
pub const UC_EXACT_MAX_DIM: usize = 4;
/// Largest dimension for the bound computation.
pub const UC_BOUNDS_MAX_DIM: usize = 16;

/// 1-points whose union `end` is a 0-point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UcTuple {
    pub members: Vec<Point>,
    pub end: Point,
}

impl UcTuple {
    /// True when every member is a 1-point, the end is a 0-point and the
    /// members cover the end exactly.
    pub fn is_violation(&self, f: &TruthTable) -> bool {
        let n = f.dim();
        if self.end.dim() != n || self.members.is_empty() || f.get(self.end.bits()) {
            return false;
        }
        let mut union = 0;
        for m in &self.members {
            if m.dim() != n || !f.get(m.bits()) {
                return false;
            }
            union |= m.bits();
        }
        union == self.end.bits()
    }
}

/// Greedy cover of `target` by sets from `pool`, followed by removal of
/// members made redundant by later picks. Every coordinate of `target` must be
/// covered by some pool element.
pub(crate) fn minimal_cover(target: u32, pool: &[u32]) -> Vec<u32> {
    let mut chosen = Vec::new();
    let mut covered = 0;
    while covered != target {
        let &pick = pool
            .iter()
            .max_by_key(|&&p| ((p & !covered).count_ones(), std::cmp::Reverse(p)))
            .expect("pool covers the target");
        debug_assert!(pick & !covered != 0);
        chosen.push(pick);
        covered |= pick;
    }
    let mut i = 0;
    while i < chosen.len() {
        let rest = chosen.iter().enumerate().filter(|&(j, _)| j != i).fold(0, |acc, (_, &p)| acc | p);
        if rest == target {
            chosen.remove(i);
        } else {
            i += 1;
        }
    }
    chosen.sort_unstable();
    chosen
}

/// 1-points of `f` strictly below `x` (the caller guarantees `f(x) = 0`).
fn ones_below(f: &TruthTable, x: u32, skip: Option<&TruthTable>) -> Vec<u32> {
    let mut out = Vec::new();
    let mut y = x;
    loop {
        y = y.wrapping_sub(1) & x;
        if f.get(y) && !skip.is_some_and(|s| s.get(y)) {
            out.push(y);
        }
        if y == 0 {
            break;
        }
    }
    out
}

/// A violating tuple ending at `x`, if one exists.
///
/// One exists exactly when the union of all 1-points below `x` equals `x`,
/// since any violating tuple is a subfamily of those points. The returned
/// members are an inclusion-minimal greedy selection.
pub fn uc_tuples(f: &TruthTable, x: &Point) -> Result<Option<UcTuple>> {
    let n = f.dim();
    if x.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: x.dim() });
    }
    if f.get(x.bits()) {
        return Err(Error::Precondition(format!("{x} is a 1-point, so no violating tuple ends there")));
    }
    let below = ones_below(f, x.bits(), None);
    Ok(tuple_from_pool(n, x.bits(), &below))
}

pub(crate) fn tuple_from_pool(n: usize, end: u32, pool: &[u32]) -> Option<UcTuple> {
    let union = pool.iter().fold(0, |acc, &p| acc | p);
    if union != end || end == 0 {
        return None;
    }
    let members = minimal_cover(end, pool).into_iter().map(|p| Point::raw(n, p)).collect();
    Some(UcTuple { members, end: Point::raw(n, end) })
}

/// Violating triples `(P, m, P | m)` read off the prefix unions of a tuple:
/// `P` is a prefix union that is a 1-point, `m` the next member and `P | m`
/// a 0-point.
pub fn tuple_to_triples(f: &TruthTable, tuple: &UcTuple) -> Result<Vec<(Point, Point, Point)>> {
    if !tuple.is_violation(f) {
        return Err(Error::Precondition("tuple is not a violation of this function".into()));
    }
    let n = f.dim();
    let mut out = Vec::new();
    let mut prefix = tuple.members[0].bits();
    for m in &tuple.members[1..] {
        let next = prefix | m.bits();
        if f.get(prefix) && !f.get(next) {
            out.push((Point::raw(n, prefix), *m, Point::raw(n, next)));
        }
        prefix = next;
    }
    Ok(out)
}

/// Every union-closed table on `n <= 4` coordinates, as bitmasks.
fn union_closed_tables(n: usize) -> &'static [u64] {
    static CACHE: [OnceLock<Vec<u64>>; UC_EXACT_MAX_DIM + 1] =
        [OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new()];
    CACHE[n].get_or_init(|| {
        let size = 1u32 << n;
        let count = 1u64 << size;
        (0..count)
            .filter(|&t| {
                (0..size).all(|x| t >> x & 1 == 0 || (0..size).all(|y| t >> y & 1 == 0 || t >> (x | y) & 1 == 1))
            })
            .collect()
    })
}

/// Point-disjoint violating tuples, chosen greedily with ends in order of
/// increasing weight. Each needs its own flip, so the count is a lower bound.
fn disjoint_tuples(f: &TruthTable) -> Vec<UcTuple> {
    let n = f.dim();
    let spans = union_below(f);
    let mut ends: Vec<u32> = (1..f.len() as u32).filter(|&x| !f.get(x) && spans[x as usize] == x).collect();
    ends.sort_by_key(|&x| (x.count_ones(), x));
    let mut used = TruthTable::zeros(n).expect("dimension checked");
    let mut out = Vec::new();
    for x in ends {
        let pool = ones_below(f, x, Some(&used));
        if let Some(t) = tuple_from_pool(n, x, &pool) {
            used.set(x, true);
            for m in &t.members {
                used.set(m.bits(), true);
            }
            out.push(t);
        }
    }
    out
}

/// Distance to the class of union-closed families.
///
/// Up to four coordinates the value is exact by enumeration. Beyond that the
/// report carries bounds: the union closure of `f` or the empty family,
/// whichever is closer, from above, and greedy point-disjoint violating
/// tuples from below.
pub fn dist_union_closed(f: &TruthTable) -> Result<DistanceReport> {
    let n = f.dim();
    if n > UC_BOUNDS_MAX_DIM {
        return Err(Error::DimensionTooLarge { what: "union-closed oracle", n, max: UC_BOUNDS_MAX_DIM });
    }
    let tuples = disjoint_tuples(f);
    if n <= UC_EXACT_MAX_DIM {
        let bits = f.words()[0];
        let best = *union_closed_tables(n)
            .iter()
            .min_by_key(|&&t| (t ^ bits).count_ones())
            .expect("the empty family is union-closed");
        let repaired = TruthTable::from_fn(n, |x| best >> x & 1 == 1)?;
        let flips = (best ^ bits).count_ones() as u64;
        return Ok(DistanceReport::exact(
            Property::UnionClosed,
            n,
            fraction(flips, n),
            Certificate::TupleCollection { tuples, repaired },
        ));
    }
    let spans = union_below(f);
    let closure = TruthTable::from_fn(n, |x| if x == 0 { f.get(0) } else { spans[x as usize] == x })?;
    let closure_cost = f.hamming(&closure)?;
    let (repaired, upper) =
        if closure_cost <= f.count_ones() { (closure, closure_cost) } else { (TruthTable::zeros(n)?, f.count_ones()) };
    Ok(DistanceReport::bounds(
        Property::UnionClosed,
        n,
        fraction(tuples.len() as u64, n),
        fraction(upper, n),
        Certificate::TupleCollection { tuples, repaired },
    ))
}
