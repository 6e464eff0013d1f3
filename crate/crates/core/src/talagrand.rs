//! The Talagrand random monotone DNF.
//!
//! A DNF over `m` variables with `L` terms, each term the conjunction of `k`
//! variables drawn independently and uniformly with replacement, where
//! `k = round(sqrt(m)/eps)` and `L = round(0.1 * 2^(sqrt(m)/eps))`.

use rand::seq::index::sample as sample_indices;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cube::binomial::binomial;
use crate::cube::Point;
use crate::error::{Error, Result};
use crate::rng::{sub_rng, LabRng};
use crate::stats::{wilson, Estimate};

/// Default cap on the number of terms.
pub const DEFAULT_MAX_TERMS: usize = 1 << 20;

/// Largest supported number of variables (terms are stored as 64-bit masks).
pub const MAX_VARS: usize = 64;

/// How many terms a point satisfies, with the index when it is exactly one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Satisfied {
    None,
    Unique(usize),
    Several,
}

/// A sampled DNF. Terms keep their raw draws; evaluation uses the set of
/// distinct variables of each term.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDnf", into = "RawDnf")]
pub struct TalagrandDnf {
    m: usize,
    eps: f64,
    k: usize,
    terms: Vec<Vec<u32>>,
    seed: Option<u64>,
    masks: Vec<u64>,
}

/// Serialized form; variables are 1-based.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDnf {
    m: usize,
    eps: f64,
    k: usize,
    #[serde(rename = "L")]
    l: usize,
    terms: Vec<Vec<u32>>,
    seed: Option<u64>,
}

impl TryFrom<RawDnf> for TalagrandDnf {
    type Error = Error;
    fn try_from(raw: RawDnf) -> Result<Self> {
        if raw.l != raw.terms.len() {
            return Err(Error::Format(format!(
                "L = {} but {} terms present",
                raw.l,
                raw.terms.len()
            )));
        }
        let terms: Vec<Vec<u32>> = raw
            .terms
            .into_iter()
            .map(|t| t.into_iter().map(|v| v.wrapping_sub(1)).collect())
            .collect();
        TalagrandDnf::from_terms(raw.m, raw.eps, raw.k, terms, raw.seed)
    }
}

impl From<TalagrandDnf> for RawDnf {
    fn from(d: TalagrandDnf) -> RawDnf {
        RawDnf {
            m: d.m,
            eps: d.eps,
            k: d.k,
            l: d.terms.len(),
            terms: d.terms.iter().map(|t| t.iter().map(|v| v + 1).collect()).collect(),
            seed: d.seed,
        }
    }
}

/// `(k, L)` for the given parameters, checking the term cap.
///
/// `L` is computed from the unrounded exponent, then rounded; both values are
/// at least 1.
pub fn dnf_shape(m: usize, eps: f64, max_terms: usize) -> Result<(usize, usize)> {
    if m == 0 || m > MAX_VARS {
        return Err(Error::InvalidParameter(format!("m must lie in 1..={MAX_VARS}, got {m}")));
    }
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::InvalidParameter(format!("eps must lie in (0, 1], got {eps}")));
    }
    let exponent = (m as f64).sqrt() / eps;
    shape_from_exponent(exponent, max_terms)
}

pub(crate) fn shape_from_exponent(exponent: f64, max_terms: usize) -> Result<(usize, usize)> {
    let k = (exponent.round() as usize).max(1);
    let required = (0.1 * exponent.exp2()).round().max(1.0);
    if !(required <= max_terms as f64) {
        return Err(Error::TermOverflow { required, cap: max_terms });
    }
    Ok((k, required as usize))
}

/// Samples a DNF with the default term cap.
pub fn sample_talagrand(m: usize, eps: f64, rng: &mut LabRng) -> Result<TalagrandDnf> {
    sample_talagrand_capped(m, eps, DEFAULT_MAX_TERMS, rng)
}

pub fn sample_talagrand_capped(
    m: usize,
    eps: f64,
    max_terms: usize,
    rng: &mut LabRng,
) -> Result<TalagrandDnf> {
    let (k, l) = dnf_shape(m, eps, max_terms)?;
    TalagrandDnf::sample_shape(m, eps, k, l, rng)
}

impl TalagrandDnf {
    /// Samples `l` terms of `k` uniform draws from `m` variables.
    pub fn sample_shape(m: usize, eps: f64, k: usize, l: usize, rng: &mut LabRng) -> Result<Self> {
        let terms = (0..l)
            .map(|_| (0..k).map(|_| rng.gen_range(0..m as u32)).collect())
            .collect();
        Self::from_terms(m, eps, k, terms, None)
    }

    /// Builds a DNF from explicit 0-based terms.
    pub fn from_terms(m: usize, eps: f64, k: usize, terms: Vec<Vec<u32>>, seed: Option<u64>) -> Result<Self> {
        if m == 0 || m > MAX_VARS {
            return Err(Error::InvalidParameter(format!("m must lie in 1..={MAX_VARS}, got {m}")));
        }
        if let Some(bad) = terms.iter().flatten().find(|&&v| v as usize >= m) {
            return Err(Error::InvalidParameter(format!(
                "term variable {} outside 1..={m}",
                bad.wrapping_add(1)
            )));
        }
        let masks = terms.iter().map(|t| t.iter().fold(0u64, |acc, &v| acc | 1 << v)).collect();
        Ok(TalagrandDnf { m, eps, k, terms, seed, masks })
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Draws per term.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Raw draws of each term (0-based, duplicates kept).
    pub fn terms(&self) -> &[Vec<u32>] {
        &self.terms
    }

    /// Distinct variables of each term as bit masks.
    pub fn masks(&self) -> &[u64] {
        &self.masks
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// Indices of the terms satisfied by `x`, ascending.
    pub fn satisfied_terms(&self, x: &Point) -> Result<Vec<usize>> {
        if x.dim() != self.m {
            return Err(Error::DimensionMismatch { expected: self.m, found: x.dim() });
        }
        let bits = x.bits() as u64;
        Ok(self.satisfied_bits(bits).collect())
    }

    /// Satisfied terms of a packed assignment.
    pub fn satisfied_bits(&self, x: u64) -> impl Iterator<Item = usize> + '_ {
        self.masks.iter().enumerate().filter(move |(_, &t)| t & !x == 0).map(|(i, _)| i)
    }

    /// Classifies a packed assignment by its number of satisfied terms.
    #[inline]
    pub fn classify(&self, x: u64) -> Satisfied {
        let mut found = Satisfied::None;
        for (i, &t) in self.masks.iter().enumerate() {
            if t & !x == 0 {
                if let Satisfied::Unique(_) = found {
                    return Satisfied::Several;
                }
                found = Satisfied::Unique(i);
            }
        }
        found
    }

    pub fn count_satisfied(&self, x: u64) -> usize {
        self.masks.iter().filter(|&&t| t & !x == 0).count()
    }
}

/// Monte Carlo estimates of how many terms a band point satisfies.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UniqueProfile {
    pub m: usize,
    pub eps: f64,
    pub k: usize,
    pub terms: usize,
    pub band: (u32, u32),
    pub samples: u64,
    pub count0: u64,
    pub count1: u64,
    pub count2plus: u64,
    pub p0: Estimate,
    pub p1: Estimate,
    pub p2plus: Estimate,
    pub mean_count: Estimate,
}

/// Samples `dnf_trials` DNFs and, for each, `point_trials` points uniform on
/// the weight band `[lo, hi]`; tallies how many terms each point satisfies.
///
/// DNF trial `t` uses the generator `sub_rng(seed, t)`, so results do not
/// depend on the thread count. Intervals are Wilson intervals at `z`
/// standard deviations (normal intervals for the mean).
pub fn unique_prob_profile(
    m: usize,
    eps: f64,
    band: (u32, u32),
    dnf_trials: u64,
    point_trials: u64,
    seed: u64,
    z: f64,
) -> Result<UniqueProfile> {
    let (lo, hi) = band;
    if lo > hi || hi as usize > m {
        return Err(Error::InvalidParameter(format!("empty or out-of-range band [{lo}, {hi}] for m = {m}")));
    }
    let (k, l) = dnf_shape(m, eps, DEFAULT_MAX_TERMS)?;
    let level_sampler = LevelSampler::new(m as u32, lo, hi);

    let tallies: Vec<[u64; 5]> = (0..dnf_trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = sub_rng(seed, t);
            let dnf = TalagrandDnf::sample_shape(m, eps, k, l, &mut rng).expect("validated shape");
            let mut tally = [0u64; 5];
            for _ in 0..point_trials {
                let x = level_sampler.sample(&mut rng);
                let c = dnf.count_satisfied(x) as u64;
                tally[(c as usize).min(2)] += 1;
                tally[3] += c;
                tally[4] += c * c;
            }
            tally
        })
        .collect();
    let mut sum = [0u64; 5];
    for t in &tallies {
        for i in 0..5 {
            sum[i] += t[i];
        }
    }
    let samples = dnf_trials * point_trials;
    debug_assert_eq!(sum[0] + sum[1] + sum[2], samples);
    let nf = samples.max(1) as f64;
    let mean = sum[3] as f64 / nf;
    let var = if samples > 1 {
        ((sum[4] as f64) - nf * mean * mean).max(0.0) / (nf - 1.0)
    } else {
        0.0
    };
    let se = (var / nf).sqrt();
    Ok(UniqueProfile {
        m,
        eps,
        k,
        terms: l,
        band,
        samples,
        count0: sum[0],
        count1: sum[1],
        count2plus: sum[2],
        p0: wilson(sum[0], samples, z),
        p1: wilson(sum[1], samples, z),
        p2plus: wilson(sum[2], samples, z),
        mean_count: Estimate { value: mean, lo: mean - z * se, hi: mean + z * se, sigma: se },
    })
}

/// Samples points of `{0,1}^m` uniformly among those with weight in `[lo, hi]`.
#[derive(Debug, Clone)]
pub struct LevelSampler {
    m: u32,
    levels: Vec<u32>,
    cumulative: Vec<f64>,
}

impl LevelSampler {
    /// Requires `lo <= hi <= m`.
    pub fn new(m: u32, lo: u32, hi: u32) -> Self {
        assert!(lo <= hi && hi <= m && m as usize <= MAX_VARS);
        let levels: Vec<u32> = (lo..=hi).collect();
        let mut acc = 0.0;
        let cumulative = levels
            .iter()
            .map(|&w| {
                acc += num_traits::ToPrimitive::to_f64(&binomial(m as u64, w as u64)).unwrap_or(f64::MAX);
                acc
            })
            .collect();
        LevelSampler { m, levels, cumulative }
    }

    /// Draws a weight proportionally to the level sizes.
    pub fn sample_level(&self, rng: &mut impl Rng) -> u32 {
        let total = *self.cumulative.last().expect("nonempty band");
        let u = rng.gen::<f64>() * total;
        let i = self.cumulative.partition_point(|&c| c <= u).min(self.levels.len() - 1);
        self.levels[i]
    }

    /// Draws a packed point.
    pub fn sample(&self, rng: &mut impl Rng) -> u64 {
        let w = self.sample_level(rng);
        sample_indices(rng, self.m as usize, w as usize)
            .into_iter()
            .fold(0u64, |acc, i| acc | 1 << i)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;
    use proptest::prelude::*;

    #[test]
    fn shapes_follow_the_rounding_rules() {
        assert_eq!(dnf_shape(16, 1.0, DEFAULT_MAX_TERMS).unwrap(), (4, 2));
        assert_eq!(dnf_shape(4, 1.0, DEFAULT_MAX_TERMS).unwrap(), (2, 1));
        assert_eq!(dnf_shape(64, 0.5, DEFAULT_MAX_TERMS).unwrap(), (16, 6554));
        assert_eq!(dnf_shape(64, 1.0, DEFAULT_MAX_TERMS).unwrap(), (8, 26));
        // sqrt(12) = 3.46: k = 3, L = round(1.1) = 1.
        assert_eq!(dnf_shape(12, 1.0, DEFAULT_MAX_TERMS).unwrap(), (3, 1));
    }

    #[test]
    fn overflow_is_refused_with_required_count() {
        match dnf_shape(64, 0.2, DEFAULT_MAX_TERMS) {
            Err(Error::TermOverflow { required, cap }) => {
                assert_eq!(cap, DEFAULT_MAX_TERMS);
                assert!((required - (0.1f64 * 2f64.powi(40)).round()).abs() < 1.0);
            }
            other => panic!("expected overflow, got {other:?}"),
        }
        assert!(dnf_shape(0, 1.0, 10).is_err());
        assert!(dnf_shape(8, 0.0, 10).is_err());
        assert!(dnf_shape(8, 1.5, 10).is_err());
    }

    #[test]
    fn satisfied_terms_examples() {
        let dnf = TalagrandDnf::from_terms(3, 1.0, 2, vec![vec![0, 1], vec![1, 2]], None).unwrap();
        let p = |s: &str| s.parse::<Point>().unwrap();
        assert_eq!(dnf.satisfied_terms(&p("110")).unwrap(), vec![0]);
        assert_eq!(dnf.satisfied_terms(&p("111")).unwrap(), vec![0, 1]);
        assert!(dnf.satisfied_terms(&p("000")).unwrap().is_empty());
        assert!(dnf.satisfied_terms(&p("00")).is_err());
        assert_eq!(dnf.classify(0b011), Satisfied::Unique(0));
        assert_eq!(dnf.classify(0b111), Satisfied::Several);
    }

    #[test]
    fn duplicates_shrink_the_effective_term() {
        let dnf = TalagrandDnf::from_terms(4, 1.0, 3, vec![vec![2, 2, 0]], None).unwrap();
        assert_eq!(dnf.masks(), &[0b101]);
        assert_eq!(dnf.terms()[0].len(), 3);
    }

    #[test]
    fn sampling_is_deterministic_and_serializes() {
        let a = sample_talagrand(16, 1.0, &mut rng_from_seed(5)).unwrap().with_seed(5);
        let b = sample_talagrand(16, 1.0, &mut rng_from_seed(5)).unwrap().with_seed(5);
        assert_eq!(a, b);
        assert_eq!(a.len(), 2);
        assert!(a.terms().iter().all(|t| t.len() == 4 && t.iter().all(|&v| v < 16)));
        let json = serde_json::to_string(&a).unwrap();
        assert!(json.contains("\"L\":2"));
        let back: TalagrandDnf = serde_json::from_str(&json).unwrap();
        assert_eq!(back, a);
        assert_eq!(serde_json::to_string(&back).unwrap(), json);
    }

    #[test]
    fn single_term_never_counts_twice() {
        let prof = unique_prob_profile(4, 1.0, (0, 4), 50, 20, 1, 3.0).unwrap();
        assert_eq!(prof.terms, 1);
        assert_eq!(prof.count2plus, 0);
        assert_eq!(prof.count0 + prof.count1 + prof.count2plus, 1000);
        assert!(unique_prob_profile(4, 1.0, (3, 2), 1, 1, 1, 3.0).is_err());
    }

    #[test]
    fn level_sampler_hits_only_band() {
        let s = LevelSampler::new(10, 4, 6);
        let mut rng = rng_from_seed(3);
        let mut seen = [0u32; 11];
        for _ in 0..3000 {
            let x = s.sample(&mut rng);
            seen[x.count_ones() as usize] += 1;
            assert!(x < 1 << 10);
        }
        assert!(seen[..4].iter().chain(&seen[7..]).all(|&c| c == 0));
        // Level sizes 210 : 252 : 210.
        assert!(seen[5] > seen[4] && seen[5] > seen[6]);
    }

    proptest! {
        #[test]
        fn dnf_is_monotone(seed in any::<u64>(), m in 1usize..=16, x in any::<u32>(), extra in any::<u32>()) {
            let dnf = sample_talagrand(m, 1.0, &mut rng_from_seed(seed)).unwrap();
            let mask = (1u64 << m) - 1;
            let x = x as u64 & mask;
            let y = x | (extra as u64 & mask);
            let sx: Vec<usize> = dnf.satisfied_bits(x).collect();
            let sy: Vec<usize> = dnf.satisfied_bits(y).collect();
            prop_assert!(sx.iter().all(|i| sy.contains(i)));
        }
    }
}
