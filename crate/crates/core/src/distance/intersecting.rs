use super::{fraction, Certificate, DistanceReport};
use crate::cube::{Matching, Point, TruthTable};
use crate::error::{Error, Result};
use crate::graph::min_vertex_cover;
use crate::property::Property;

/// Largest dimension for the intersecting oracle.
pub const INTERSECTING_MAX_DIM: usize = 20;

/// Tuning for [`dist_intersecting_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntersectingOptions {
    /// Skip the exact search and report matching bounds.
    pub bounds_only: bool,
    /// Above this many 1-points only bounds are computed.
    pub max_points: usize,
    /// Branch nodes allowed to the exact vertex cover search.
    pub node_budget: u64,
}

impl Default for IntersectingOptions {
    fn default() -> Self {
        IntersectingOptions { bounds_only: false, max_points: 4000, node_budget: 2_000_000 }
    }
}

/// Distance to the class of intersecting families with default options.
pub fn dist_intersecting(f: &TruthTable) -> Result<DistanceReport> {
    dist_intersecting_with(f, IntersectingOptions::default())
}

/// Distance to the class of intersecting families.
///
/// Turning a 0 into a 1 can only add violations, so an optimal repair deletes
/// a minimum set of 1-points touching every disjoint pair: a minimum vertex
/// cover of the disjointness graph on 1-points, with the empty set forced in
/// because it is disjoint from itself. Disjoint violating pairs give the lower
/// bound; the pair `(0, 0)` stands for the empty set on its own.
pub fn dist_intersecting_with(f: &TruthTable, opts: IntersectingOptions) -> Result<DistanceReport> {
    let n = f.dim();
    if n > INTERSECTING_MAX_DIM {
        return Err(Error::DimensionTooLarge { what: "intersecting oracle", n, max: INTERSECTING_MAX_DIM });
    }
    let ones: Vec<u32> = f.ones().collect();
    let point = |x: u32| Point::raw(n, x);
    if !opts.bounds_only && ones.len() <= opts.max_points {
        let adj: Vec<Vec<u32>> = ones
            .iter()
            .map(|&x| {
                (0..ones.len() as u32).filter(|&j| ones[j as usize] & x == 0 && ones[j as usize] != x).collect()
            })
            .collect();
        // The empty set, when present, is the first 1-point.
        let forced: Vec<u32> = if f.get(0) { vec![0] } else { Vec::new() };
        let vc = min_vertex_cover(&adj, &forced, opts.node_budget);
        let mut pairs: Vec<(Point, Point)> = forced.iter().map(|_| (point(0), point(0))).collect();
        pairs.extend(vc.matching.iter().map(|&(u, v)| (point(ones[u as usize]), point(ones[v as usize]))));
        let cover: Vec<Point> = vc.cover.iter().map(|&i| point(ones[i as usize])).collect();
        let upper = fraction(cover.len() as u64, n);
        let lower = fraction(pairs.len() as u64, n);
        let certificate = Certificate::Cover { cover, matching: Matching::new(pairs) };
        return Ok(if vc.optimal {
            DistanceReport::exact(Property::Intersecting, n, upper, certificate)
        } else {
            DistanceReport::bounds(Property::Intersecting, n, lower, upper, certificate)
        });
    }
    Ok(greedy_bounds(f))
}

/// Greedy maximal matching of disjoint 1-points, found by walking the
/// subsets of each complement. Its size bounds the distance from below and
/// its endpoints form a cover.
fn greedy_bounds(f: &TruthTable) -> DistanceReport {
    let n = f.dim();
    let full = (f.len() - 1) as u32;
    let mut used = TruthTable::zeros(n).expect("dimension checked");
    let mut pairs = Vec::new();
    let mut cover = Vec::new();
    let point = |x: u32| Point::raw(n, x);
    if f.get(0) {
        used.set(0, true);
        pairs.push((point(0), point(0)));
        cover.push(point(0));
    }
    for x in f.ones() {
        if used.get(x) {
            continue;
        }
        let free = !x & full;
        // Walk the non-empty subsets of the complement, smallest first in index order.
        let mut y = free;
        let partner = loop {
            if y != 0 && f.get(y) && !used.get(y) {
                break Some(y);
            }
            if y == 0 {
                break None;
            }
            y = (y - 1) & free;
        };
        if let Some(y) = partner {
            used.set(x, true);
            used.set(y, true);
            pairs.push((point(x), point(y)));
            cover.push(point(x));
            cover.push(point(y));
        }
    }
    cover.sort_by_key(|p| p.bits());
    let lower = fraction(pairs.len() as u64, n);
    let upper = fraction(cover.len() as u64, n);
    DistanceReport::bounds(
        Property::Intersecting,
        n,
        lower,
        upper,
        Certificate::Cover { cover, matching: Matching::new(pairs) },
    )
}
