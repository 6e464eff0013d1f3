use rayon::prelude::*;

use super::{fraction, Certificate, DistanceReport};
use crate::cube::bits::{coords_of, gather, low_mask};
use crate::cube::binomial::binomial_u64;
use crate::cube::matching::for_each_subset_of_size;
use crate::cube::TruthTable;
use crate::error::{Error, Result};
use crate::property::Property;

/// Largest number of candidate coordinate sets the exact oracle will scan.
pub const JUNTA_BUDGET: u64 = 1_000_000;
/// Largest dimension accepted by the junta oracle.
pub const JUNTA_ORACLE_MAX_DIM: usize = 22;

const HALF: u32 = 11;

/// Projection `x -> x_J` through two 11-bit lookup tables.
struct Projector {
    low: Vec<u32>,
    high: Vec<u32>,
    shift: u32,
}

impl Projector {
    fn new(mask: u32) -> Self {
        let low_part = mask & low_mask(HALF as usize);
        let low = (0..1u32 << HALF).map(|v| gather(v, low_part)).collect();
        let high = (0..1u32 << HALF).map(|v| gather(v << HALF, mask & !low_part)).collect();
        Projector { low, high, shift: low_part.count_ones() }
    }

    #[inline]
    fn project(&self, x: u32) -> u32 {
        self.low[(x & ((1 << HALF) - 1)) as usize] | self.high[(x >> HALF) as usize] << self.shift
    }
}

/// Ones of `f` inside each subcube `x_J = z`.
fn ones_per_pattern(f: &TruthTable, mask: u32) -> Vec<u32> {
    let proj = Projector::new(mask);
    let mut counts = vec![0u32; 1 << mask.count_ones()];
    for x in f.ones() {
        counts[proj.project(x) as usize] += 1;
    }
    counts
}

/// Exact distance to the class of `k`-juntas.
///
/// For a fixed coordinate set `J` the best junta takes the majority value of
/// `f` on each subcube `x_J = z`, so the distance is a minimum over all
/// `k`-subsets. Larger `k` than `n` is treated as `n`. Ties between sets go to
/// the lexicographically first one; ties inside a subcube repair to 0.
pub fn dist_junta(f: &TruthTable, k: usize) -> Result<DistanceReport> {
    let n = f.dim();
    let k = k.min(n);
    if n > JUNTA_ORACLE_MAX_DIM {
        return Err(Error::DimensionTooLarge { what: "junta oracle", n, max: JUNTA_ORACLE_MAX_DIM });
    }
    let candidates = binomial_u64(n as u64, k as u64);
    if candidates > JUNTA_BUDGET {
        return Err(Error::BudgetExceeded(format!(
            "{candidates} coordinate sets of size {k} out of {n} exceed the budget of {JUNTA_BUDGET}"
        )));
    }
    let mut sets = Vec::with_capacity(candidates as usize);
    for_each_subset_of_size(low_mask(n), k, |m| sets.push(m));
    let subcube = 1u32 << (n - k);
    let cost = |mask: u32| -> u64 {
        ones_per_pattern(f, mask).iter().map(|&c| c.min(subcube - c) as u64).sum()
    };
    let (flips, best) = sets
        .par_iter()
        .enumerate()
        .map(|(i, &m)| (cost(m), i))
        .min()
        .map(|(c, i)| (c, sets[i]))
        .expect("at least the empty set is a candidate");
    let majority = ones_per_pattern(f, best);
    let proj = Projector::new(best);
    let repaired = TruthTable::from_fn(n, |x| 2 * majority[proj.project(x) as usize] > subcube)?;
    let mut report = DistanceReport::exact(Property::Junta(k), n, fraction(flips, n), Certificate::Repaired { repaired });
    report.coordinates = Some(coords_of(best));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;
    use proptest::prelude::*;

    #[test]
    fn parity_against_small_juntas() {
        let parity = TruthTable::from_fn(3, |x| x.count_ones() % 2 == 1).unwrap();
        for k in 0..3 {
            let r = dist_junta(&parity, k).unwrap();
            assert_eq!(r.exact, Some(Ratio::new(1, 2)));
            r.verify(&parity).unwrap();
        }
        assert_eq!(dist_junta(&parity, 3).unwrap().exact, Some(Ratio::from_integer(0)));
        assert_eq!(dist_junta(&parity, 9).unwrap().exact, Some(Ratio::from_integer(0)));
    }

    #[test]
    fn finds_the_relevant_coordinates() {
        let f = TruthTable::from_fn(14, |x| (x >> 3 & 1 == 1) ^ (x >> 12 & 1 == 1)).unwrap();
        let r = dist_junta(&f, 2).unwrap();
        assert_eq!(r.exact, Some(Ratio::from_integer(0)));
        assert_eq!(r.coordinates, Some(vec![4, 13]));
        r.verify(&f).unwrap();
    }

    #[test]
    fn projector_matches_gather() {
        for mask in [0u32, 1, 0x7FF, 0x800, 0x2A_AAAA, 0x3F_FFFF, 0x15_5555] {
            let p = Projector::new(mask);
            for x in (0..1u32 << 22).step_by(997) {
                assert_eq!(p.project(x), gather(x, mask));
            }
        }
    }

    #[test]
    fn oversized_inputs_are_refused() {
        let f = TruthTable::zeros(23).unwrap();
        assert!(matches!(dist_junta(&f, 2), Err(Error::DimensionTooLarge { .. })));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn certificate_and_monotone_in_k(n in 1usize..8, seed in any::<u64>()) {
            let f = TruthTable::from_fn(n, |x| (x as u64 ^ seed).wrapping_mul(0x9E37_79B9_7F4A_7C15) >> 63 == 1).unwrap();
            let mut last = Ratio::new(1, 1);
            for k in 0..=n {
                let r = dist_junta(&f, k).unwrap();
                r.verify(&f).unwrap();
                prop_assert!(r.exact.unwrap() <= last);
                prop_assert!(r.exact.unwrap() <= Ratio::new(1, 2));
                last = r.exact.unwrap();
            }
            prop_assert_eq!(last, Ratio::from_integer(0));
        }
    }
}
