use rand::RngCore;
use serde::{Deserialize, Serialize};

use super::band::Band;
use crate::cube::binomial::binomial_u64;
use crate::cube::matching::for_each_subset_of_size;
use crate::cube::{Point, TruthTable};
use crate::distance::{tuple_from_pool, UcTuple};
use crate::error::{Error, Result};
use crate::instances::{HardFunction, Kind};
use crate::rng::{sub_rng, LabRng};
use crate::talagrand::LevelSampler;

/// Query access to a Boolean function on `{0,1}^dim`.
pub trait Oracle: Sync {
    fn dim(&self) -> usize;
    fn query(&self, x: u32) -> bool;
}

impl Oracle for TruthTable {
    fn dim(&self) -> usize {
        TruthTable::dim(self)
    }

    fn query(&self, x: u32) -> bool {
        self.get(x)
    }
}

/// One kind of a lazily evaluated hard instance.
pub struct InstanceOracle<'a, H> {
    pub instance: &'a H,
    pub kind: Kind,
}

impl<H: HardFunction + Sync> Oracle for InstanceOracle<'_, H> {
    fn dim(&self) -> usize {
        self.instance.domain_dim()
    }

    fn query(&self, x: u32) -> bool {
        self.instance.eval_bits(self.kind, x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Decision {
    Accept,
    Reject,
}

/// Evidence attached to a rejection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Witness {
    /// 1-points whose union is a 0-point.
    Tuple(UcTuple),
    /// Two disjoint 1-points (possibly the empty set twice).
    Pair { x: Point, y: Point },
}

/// Outcome of a tester run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub decision: Decision,
    pub witness: Option<Witness>,
    /// Queries in order, when recording was requested.
    pub transcript: Vec<(Point, bool)>,
    /// Rounds actually run; the tester stops at the first rejection.
    pub rounds: u64,
    /// `ceil(100/eps)`.
    pub planned_rounds: u64,
    pub queries: u64,
}

impl Verdict {
    pub fn accepted(&self) -> bool {
        self.decision == Decision::Accept
    }

    /// Re-checks a rejection witness against the oracle.
    pub fn verify(&self, f: &dyn Oracle) -> Result<()> {
        let fail = |m: &str| Err(Error::Precondition(format!("verdict rejected: {m}")));
        match (&self.decision, &self.witness) {
            (Decision::Accept, None) => Ok(()),
            (Decision::Accept, Some(_)) => fail("accepting verdict carries a witness"),
            (Decision::Reject, None) => fail("rejection without a witness"),
            (Decision::Reject, Some(Witness::Tuple(t))) => {
                let mut union = 0;
                for m in &t.members {
                    if !f.query(m.bits()) {
                        return fail("tuple member is not a 1-point");
                    }
                    union |= m.bits();
                }
                if t.members.is_empty() || union != t.end.bits() || f.query(t.end.bits()) {
                    return fail("tuple does not end at a 0-point union");
                }
                Ok(())
            }
            (Decision::Reject, Some(Witness::Pair { x, y })) => {
                if x.bits() & y.bits() != 0 || !f.query(x.bits()) || !f.query(y.bits()) {
                    return fail("pair is not two disjoint 1-points");
                }
                Ok(())
            }
        }
    }
}

/// Tuning shared by both testers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TesterOptions {
    /// Largest number of band points a single round may enumerate.
    pub budget: u64,
    pub record_transcript: bool,
}

impl Default for TesterOptions {
    fn default() -> Self {
        TesterOptions { budget: 1 << 22, record_transcript: true }
    }
}

/// `ceil(100/eps)`.
pub fn tester_rounds(eps: f64) -> u64 {
    (100.0 / eps).ceil() as u64
}

/// Band points inside a cube of dimension `d`, i.e. the worst-case
/// enumeration of one round.
fn enumeration_size(band: &Band, d: u32) -> u64 {
    let (lo, hi) = band.levels();
    (lo..=hi.min(d)).map(|w| binomial_u64(d as u64, w as u64)).fold(0u64, u64::saturating_add)
}

struct Run<'a> {
    f: &'a dyn Oracle,
    n: usize,
    opts: TesterOptions,
    transcript: Vec<(Point, bool)>,
    queries: u64,
}

impl Run<'_> {
    fn ask(&mut self, x: u32) -> bool {
        let v = self.f.query(x);
        self.queries += 1;
        if self.opts.record_transcript {
            self.transcript.push((Point::raw(self.n, x), v));
        }
        v
    }
}

/// Shared driver: `round` returns a witness to reject.
fn drive(
    f: &dyn Oracle,
    eps: f64,
    rng: &mut LabRng,
    opts: TesterOptions,
    worst_case: impl Fn(&Band) -> u64,
    mut round: impl FnMut(&mut Run, &Band, u32) -> Option<Witness>,
) -> Result<Verdict> {
    let n = f.dim();
    if n > crate::cube::MAX_DIM {
        return Err(Error::DimensionTooLarge { what: "tester", n, max: crate::cube::MAX_DIM });
    }
    let band = Band::new(n, eps)?;
    let need = worst_case(&band);
    if need > opts.budget {
        return Err(Error::BudgetExceeded(format!(
            "a round may enumerate {need} band points, above the budget of {}",
            opts.budget
        )));
    }
    let (lo, hi) = band.levels();
    let sampler = LevelSampler::new(n as u32, lo, hi);
    let planned = tester_rounds(eps);
    let master = rng.next_u64();
    let mut run = Run { f, n, opts, transcript: Vec::new(), queries: 0 };
    for r in 0..planned {
        let x = sampler.sample(&mut sub_rng(master, r)) as u32;
        if let Some(w) = round(&mut run, &band, x) {
            return Ok(Verdict {
                decision: Decision::Reject,
                witness: Some(w),
                transcript: run.transcript,
                rounds: r + 1,
                planned_rounds: planned,
                queries: run.queries,
            });
        }
    }
    Ok(Verdict {
        decision: Decision::Accept,
        witness: None,
        transcript: run.transcript,
        rounds: planned,
        planned_rounds: planned,
        queries: run.queries,
    })
}

/// Band points of each allowed weight inside `mask`, in a fixed order.
fn band_subsets(band: &Band, mask: u32, mut visit: impl FnMut(u32)) {
    let (lo, hi) = band.levels();
    for w in lo..=hi.min(mask.count_ones()) {
        for_each_subset_of_size(mask, w as usize, &mut visit);
    }
}

/// One-sided tester for union-closedness.
///
/// Each round draws a band point `x`. If `f(x) = 0`, it queries every band
/// point strictly below `x` and rejects when the union of the 1-answers is
/// `x`. This is the same as asking whether *some* 1-points below `x` have
/// union `x`: a union of a subfamily is contained in the union of all of
/// them, which is contained in `x`, so the full union reaches `x` whenever
/// any subfamily does. A union-closed input has no such `x` and is always
/// accepted.
pub fn uc_tester(f: &dyn Oracle, eps: f64, rng: &mut LabRng, opts: TesterOptions) -> Result<Verdict> {
    let n = f.dim();
    drive(
        f,
        eps,
        rng,
        opts,
        |band| enumeration_size(band, band.levels().1),
        |run, band, x| {
            if run.ask(x) {
                return None;
            }
            let mut ones = Vec::new();
            band_subsets(band, x, |y| {
                if y != x && run.ask(y) {
                    ones.push(y);
                }
            });
            tuple_from_pool(n, x, &ones).map(Witness::Tuple)
        },
    )
}

/// One-sided tester for intersecting families.
///
/// Each round draws a band point `x`. If `f(x) = 1`, it queries the band
/// points inside the complement of `x` and rejects on the first 1-answer,
/// which is a 1-point disjoint from `x`. Intersecting inputs are always
/// accepted.
pub fn intersecting_tester(f: &dyn Oracle, eps: f64, rng: &mut LabRng, opts: TesterOptions) -> Result<Verdict> {
    let n = f.dim();
    let full = crate::cube::bits::low_mask(n);
    drive(
        f,
        eps,
        rng,
        opts,
        |band| enumeration_size(band, n as u32 - band.levels().0),
        |run, band, x| {
            if !run.ask(x) {
                return None;
            }
            let mut found = None;
            band_subsets(band, !x & full, |y| {
                if found.is_none() && run.ask(y) {
                    found = Some(y);
                }
            });
            found.map(|y| Witness::Pair { x: Point::raw(n, x), y: Point::raw(n, y) })
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::property::{is_intersecting, is_union_closed};
    use crate::rng::rng_from_seed;

    fn table(n: usize, ones: &[u32]) -> TruthTable {
        TruthTable::from_indices(n, ones.iter().copied()).unwrap()
    }

    #[test]
    fn two_singletons_are_caught() {
        let f = table(2, &[1, 2]);
        let v = uc_tester(&f, 0.2, &mut rng_from_seed(1), TesterOptions::default()).unwrap();
        assert_eq!(v.decision, Decision::Reject);
        v.verify(&f).unwrap();
        assert!(matches!(&v.witness, Some(Witness::Tuple(t)) if t.end.bits() == 3));
        let v = intersecting_tester(&f, 0.2, &mut rng_from_seed(1), TesterOptions::default()).unwrap();
        assert_eq!(v.decision, Decision::Reject);
        v.verify(&f).unwrap();
        assert!(v.rounds <= v.planned_rounds && v.planned_rounds == 500);
    }

    #[test]
    fn zero_function_is_accepted() {
        let f = TruthTable::zeros(5).unwrap();
        for seed in 0..5 {
            let mut rng = rng_from_seed(seed);
            assert!(uc_tester(&f, 0.3, &mut rng, TesterOptions::default()).unwrap().accepted());
            assert!(intersecting_tester(&f, 0.3, &mut rng, TesterOptions::default()).unwrap().accepted());
        }
    }

    #[test]
    fn one_sided_on_all_three_dimensional_tables() {
        let opts = TesterOptions { record_transcript: false, ..Default::default() };
        for bits in 0u32..256 {
            let f = TruthTable::from_fn(3, |x| bits >> x & 1 == 1).unwrap();
            let mut rng = rng_from_seed(bits as u64);
            if is_union_closed(&f) {
                assert!(uc_tester(&f, 0.5, &mut rng, opts).unwrap().accepted());
            }
            if is_intersecting(&f) {
                assert!(intersecting_tester(&f, 0.5, &mut rng, opts).unwrap().accepted());
            }
        }
    }

    #[test]
    fn transcript_matches_the_oracle() {
        let f = TruthTable::from_fn(6, |x| x.count_ones() == 2).unwrap();
        let v = uc_tester(&f, 0.5, &mut rng_from_seed(4), TesterOptions::default()).unwrap();
        assert_eq!(v.transcript.len() as u64, v.queries);
        for (p, a) in &v.transcript {
            assert_eq!(f.get(p.bits()), *a);
        }
        assert_eq!(v.decision, Decision::Reject);
        v.verify(&f).unwrap();
    }

    #[test]
    fn budget_is_enforced() {
        let f = TruthTable::zeros(20).unwrap();
        let opts = TesterOptions { budget: 1000, record_transcript: false };
        assert!(matches!(uc_tester(&f, 0.5, &mut rng_from_seed(0), opts), Err(Error::BudgetExceeded(_))));
    }
}
