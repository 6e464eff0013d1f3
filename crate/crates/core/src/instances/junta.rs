use num_rational::Ratio;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{action_band, action_bit, check_split, coord_list, sample_subset_mask, ActionBand, HardFunction, Kind};
use crate::cube::binomial::binomial_u64;
use crate::cube::bits::{gather, low_mask};
use crate::cube::TruthTable;
use crate::error::{Error, Result};
use crate::rng::LabRng;

/// Action band constant of the junta construction.
pub const JUNTA_WIDTH_CONSTANT: f64 = 0.05;

/// Largest supported dimension (the control table is explicit).
pub const JUNTA_MAX_DIM: usize = 28;

/// An instance of the junta construction: `a = n/2` action coordinates and a
/// uniformly random control table `b` on the other half. The value at `x` is
/// `h(sign, b(x_C))(x_A)` with band half-width `0.05 sqrt(a)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JuntaInstance {
    pub n: usize,
    pub a: usize,
    #[serde(with = "coord_list", rename = "action")]
    pub action_mask: u32,
    #[serde(with = "coord_list", rename = "control")]
    pub control_mask: u32,
    pub control_table: TruthTable,
    pub c1: f64,
}

pub fn sample_junta_instance(n: usize, rng: &mut LabRng) -> Result<JuntaInstance> {
    if n == 0 || n % 2 == 1 {
        return Err(Error::InvalidParameter(format!("junta instances need even n, got {n}")));
    }
    if n > JUNTA_MAX_DIM {
        return Err(Error::DimensionTooLarge { what: "junta instance", n, max: JUNTA_MAX_DIM });
    }
    let a = n / 2;
    let action_mask = sample_subset_mask(n, a, rng);
    let control_table = TruthTable::from_fn(n - a, |_| rng.gen())?;
    JuntaInstance::from_parts(n, action_mask, control_table)
}

impl JuntaInstance {
    pub fn from_parts(n: usize, action_mask: u32, control_table: TruthTable) -> Result<Self> {
        check_split(n, action_mask)?;
        let a = action_mask.count_ones() as usize;
        if n % 2 == 1 || 2 * a != n {
            return Err(Error::InvalidParameter("junta instances use n even and |A| = n/2".into()));
        }
        if control_table.dim() != n - a {
            return Err(Error::DimensionMismatch { expected: n - a, found: control_table.dim() });
        }
        let control_mask = !action_mask & low_mask(n);
        Ok(JuntaInstance { n, a, action_mask, control_mask, control_table, c1: JUNTA_WIDTH_CONSTANT })
    }

    pub fn action_width(&self) -> f64 {
        self.c1 * (self.a as f64).sqrt()
    }

    #[inline]
    pub fn control_bit(&self, x: u32) -> bool {
        self.control_table.get(gather(x, self.control_mask))
    }

    #[inline]
    pub fn band(&self, x: u32) -> ActionBand {
        action_band((x & self.action_mask).count_ones(), self.a, self.action_width())
    }

    /// The `n/2`-junta `x -> b(x_C)`, which agrees with the yes function off
    /// the action middle band.
    pub fn control_junta(&self) -> Result<TruthTable> {
        TruthTable::from_fn(self.n, |x| self.control_bit(x))
    }

    /// Exact mass of the action middle band.
    pub fn action_middle_measure(&self) -> Ratio<u64> {
        let count: u64 = (0..=self.a as u32)
            .filter(|&w| action_band(w, self.a, self.action_width()) == ActionBand::Middle)
            .map(|w| binomial_u64(self.a as u64, w as u64))
            .sum();
        Ratio::new(count, 1u64 << self.a)
    }
}

impl HardFunction for JuntaInstance {
    fn domain_dim(&self) -> usize {
        self.n
    }

    fn eval_bits(&self, kind: Kind, x: u32) -> bool {
        action_bit(kind.sign(), self.control_bit(x), self.band(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::property::relevant_coordinates;
    use crate::rng::rng_from_seed;

    #[test]
    fn examples() {
        let inst = sample_junta_instance(8, &mut rng_from_seed(3)).unwrap();
        let width = inst.action_width();
        for x in 0..256u32 {
            let wa = (x & inst.action_mask).count_ones();
            let top = wa as f64 > 2.0 + width;
            if !inst.control_bit(x) {
                assert!(!inst.eval_bits(Kind::Yes, x));
                assert_eq!(inst.eval_bits(Kind::No, x), top);
            } else if wa == 2 {
                assert!(!inst.eval_bits(Kind::Yes, x));
            }
        }
        assert!(sample_junta_instance(7, &mut rng_from_seed(3)).is_err());
    }

    #[test]
    fn yes_differs_from_control_junta_only_in_middle_band() {
        for seed in 0..10 {
            let inst = sample_junta_instance(10, &mut rng_from_seed(seed)).unwrap();
            let f = inst.materialize(Kind::Yes).unwrap();
            let g = inst.control_junta().unwrap();
            assert!(relevant_coordinates(&g).len() <= 5);
            for x in 0..1024 {
                if f.get(x) != g.get(x) {
                    assert_eq!(inst.band(x), ActionBand::Middle);
                }
            }
        }
    }

    #[test]
    fn middle_measure() {
        let inst = sample_junta_instance(8, &mut rng_from_seed(1)).unwrap();
        // a = 4, width 0.1: only weight 2.
        assert_eq!(inst.action_middle_measure(), Ratio::new(6, 16));
        let inst = sample_junta_instance(10, &mut rng_from_seed(1)).unwrap();
        assert_eq!(inst.action_middle_measure(), Ratio::new(0, 32));
    }
}
