use std::collections::HashMap;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cube::bits::low_mask;
use crate::cube::binomial::binomial_u64;
use crate::cube::Point;
use crate::error::{Error, Result};
use crate::instances::{sample_mono_instance, ActionBand, JuntaInstance, MonoInstance};
use crate::rng::{sub_rng, LabRng};
use crate::stats::{wilson, Estimate};
use crate::talagrand::Satisfied;

/// A non-adaptive set of query points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryPlan {
    pub points: Vec<Point>,
    /// Set when the complement of every point is also in the plan.
    pub closed_under_complement: bool,
}

impl QueryPlan {
    /// Wraps `points`, which must share one dimension; the complement flag
    /// is computed.
    pub fn new(points: Vec<Point>) -> Result<Self> {
        if let Some(p) = points.iter().find(|p| p.dim() != points[0].dim()) {
            return Err(Error::DimensionMismatch { expected: points[0].dim(), found: p.dim() });
        }
        let set: std::collections::HashSet<u32> = points.iter().map(|p| p.bits()).collect();
        let closed = points.iter().all(|p| set.contains(&p.complement().bits()));
        Ok(QueryPlan { points, closed_under_complement: closed })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        match self.points.first() {
            Some(p) if p.dim() != n => Err(Error::DimensionMismatch { expected: n, found: p.dim() }),
            _ => Ok(()),
        }
    }
}

/// Recipes for random query plans.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "strategy", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PlanStrategy {
    /// `q` independent uniform points.
    Uniform { q: usize },
    /// `pairs` uniform points together with their complements.
    Antipodal { pairs: usize },
    /// `q` points within Hamming distance `radius` of one uniform centre.
    Ball { q: usize, radius: usize },
    /// Explicit points.
    Fixed { points: Vec<Point> },
}

impl PlanStrategy {
    pub fn generate(&self, n: usize, rng: &mut LabRng) -> Result<QueryPlan> {
        if n == 0 || n > crate::cube::MAX_DIM {
            return Err(Error::DimensionTooLarge { what: "query plan", n, max: crate::cube::MAX_DIM });
        }
        let full = low_mask(n);
        let uniform = |rng: &mut LabRng| Point::raw(n, rng.gen::<u32>() & full);
        let points = match self {
            PlanStrategy::Uniform { q } => (0..*q).map(|_| uniform(rng)).collect(),
            PlanStrategy::Antipodal { pairs } => (0..*pairs)
                .flat_map(|_| {
                    let x = uniform(rng);
                    [x, x.complement()]
                })
                .collect(),
            PlanStrategy::Ball { q, radius } => {
                let centre = uniform(rng);
                let radius = (*radius).min(n);
                (0..*q)
                    .map(|_| {
                        let d = rng.gen_range(0..=radius);
                        let flips = rand::seq::index::sample(rng, n, d).into_iter().fold(0u32, |m, i| m | 1 << i);
                        Point::raw(n, centre.bits() ^ flips)
                    })
                    .collect()
            }
            PlanStrategy::Fixed { points } => points.clone(),
        };
        let plan = QueryPlan::new(points)?;
        plan.check_dim(n)?;
        Ok(plan)
    }
}

/// True when two plan points in the same group fall in the top and the
/// bottom action band respectively.
fn opposite_bands_in_a_group<K: std::hash::Hash + Eq>(items: impl Iterator<Item = (K, ActionBand)>) -> bool {
    let mut seen: HashMap<K, (bool, bool)> = HashMap::new();
    for (key, band) in items {
        let e = seen.entry(key).or_default();
        match band {
            ActionBand::Top => e.0 = true,
            ActionBand::Bottom => e.1 = true,
            ActionBand::Middle => {}
        }
        if e.0 && e.1 {
            return true;
        }
    }
    false
}

/// The bad event of the monotonicity construction: two plan points share the
/// same unique satisfied term with control weights in the band, one in the
/// top and one in the bottom action band.
pub fn detect_bad(plan: &QueryPlan, inst: &MonoInstance) -> Result<bool> {
    plan.check_dim(inst.n)?;
    let width = inst.action_width();
    Ok(opposite_bands_in_a_group(plan.points.iter().filter_map(|p| {
        let x = p.bits();
        inst.active_term(x)
            .map(|l| (l, crate::instances::action_band(inst.action_weight(x), inst.a, width)))
    })))
}

/// The bad event of the junta construction: two plan points agree on the
/// controls, one in the top and one in the bottom action band.
pub fn detect_bad_junta(plan: &QueryPlan, inst: &JuntaInstance) -> Result<bool> {
    plan.check_dim(inst.n)?;
    Ok(opposite_bands_in_a_group(plan.points.iter().map(|p| (p.bits() & inst.control_mask, inst.band(p.bits())))))
}

/// Necessary conditions for the ordered pair `(x, y)` to be bad with `x`
/// in the bottom band and `y` in the top band.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairEvents {
    /// At least `2 c1 sqrt(a)` action coordinates go from 0 in `x` to 1 in `y`.
    pub diamond: bool,
    /// Both control restrictions satisfy the same single term.
    pub star: bool,
    /// The pair is bad in the stated orientation.
    pub bad: bool,
}

pub fn pair_events(inst: &MonoInstance, x: u32, y: u32) -> PairEvents {
    let rising = (!x & y & inst.action_mask).count_ones() as f64;
    let diamond = rising >= 2.0 * inst.c1 * (inst.a as f64).sqrt();
    let star = match (inst.dnf.classify(inst.controls(x) as u64), inst.dnf.classify(inst.controls(y) as u64)) {
        (Satisfied::Unique(l), Satisfied::Unique(r)) => l == r,
        _ => false,
    };
    let width = inst.action_width();
    let band = |p: u32| crate::instances::action_band(inst.action_weight(p), inst.a, width);
    let bad = star
        && inst.active_term(x).is_some()
        && inst.active_term(y).is_some()
        && band(x) == ActionBand::Bottom
        && band(y) == ActionBand::Top;
    PairEvents { diamond, star, bad }
}

/// Analytic bound on the diamond event for a pair with `t` rising
/// coordinates: `C(a, s) (t/(n-a))^s` with `s = ceil(2 c1 sqrt(a))`, capped at 1.
pub fn diamond_envelope(n: usize, a: usize, c1: f64, t: u32) -> f64 {
    let s = (2.0 * c1 * (a as f64).sqrt()).ceil() as u64;
    let ratio = t as f64 / (n - a) as f64;
    (binomial_u64(a as u64, s.min(a as u64)) as f64 * ratio.powi(s as i32)).min(1.0)
}

/// Analytic bound on the star event: `(1 - t/(n-a))^(sqrt(n-a)/eps)`.
pub fn star_envelope(n: usize, a: usize, eps: f64, t: u32) -> f64 {
    let m = (n - a) as f64;
    let base = (1.0 - t as f64 / m).max(0.0);
    base.powf(m.sqrt() / eps)
}

/// Monte Carlo summary of the bad event over fresh instances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BadEventReport {
    pub n: usize,
    pub eps: f64,
    pub trials: u64,
    pub plan_size: usize,
    pub bad: Estimate,
    /// Per trial, one uniformly drawn ordered pair of distinct plan points.
    pub pair_trials: u64,
    pub pair_bad: Estimate,
    pub diamond: Estimate,
    pub star: Estimate,
    pub diamond_envelope: f64,
    pub star_envelope: f64,
    /// `#bad <= min(#diamond, #star)` over the sampled pairs; always true
    /// since a bad pair meets both conditions.
    pub pair_bound_holds: bool,
}

/// Estimates the probability of the bad event for a fixed plan over fresh
/// draws of the monotonicity construction. Trial `i` uses its own sub-seeded
/// generator, so results do not depend on the thread count.
pub fn bad_event_estimate(plan: &QueryPlan, n: usize, eps: f64, trials: u64, seed: u64) -> Result<BadEventReport> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    plan.check_dim(n)?;
    crate::instances::mono_action_size(n, eps)?;
    let q = plan.len();
    let rows: Vec<(bool, Option<(PairEvents, f64, f64)>)> = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<_> {
            let mut rng = sub_rng(seed, t);
            let inst = sample_mono_instance(n, eps, &mut rng)?;
            let bad = detect_bad(plan, &inst)?;
            let pair = (q >= 2).then(|| {
                let i = rng.gen_range(0..q);
                let j = (i + rng.gen_range(1..q)) % q;
                let (x, y) = (plan.points[i].bits(), plan.points[j].bits());
                let rising = (!x & y & low_mask(n)).count_ones();
                (
                    pair_events(&inst, x, y),
                    diamond_envelope(n, inst.a, inst.c1, rising),
                    star_envelope(n, inst.a, eps, rising),
                )
            });
            Ok((bad, pair))
        })
        .collect::<Result<_>>()?;
    let bad = rows.iter().filter(|r| r.0).count() as u64;
    let pairs: Vec<_> = rows.iter().filter_map(|r| r.1).collect();
    let count = |f: fn(&PairEvents) -> bool| pairs.iter().filter(|p| f(&p.0)).count() as u64;
    let (pb, pd, ps) = (count(|e| e.bad), count(|e| e.diamond), count(|e| e.star));
    let np = pairs.len() as u64;
    let mean = |v: f64| if np == 0 { 0.0 } else { v / np as f64 };
    Ok(BadEventReport {
        n,
        eps,
        trials,
        plan_size: q,
        bad: wilson(bad, trials, 3.0),
        pair_trials: np,
        pair_bad: wilson(pb, np, 3.0),
        diamond: wilson(pd, np, 3.0),
        star: wilson(ps, np, 3.0),
        diamond_envelope: mean(pairs.iter().map(|p| p.1).sum()),
        star_envelope: mean(pairs.iter().map(|p| p.2).sum()),
        pair_bound_holds: pb <= pd.min(ps),
    })
}
