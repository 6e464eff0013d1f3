use rand::Rng;
use serde::{Deserialize, Serialize};

use super::mono::mono_action_size;
use super::{action_band, action_bit, check_split, coord_list, sample_subset_mask, HardFunction, Kind, Sign};
use crate::cube::bits::{gather, low_mask};
use crate::error::{Error, Result};
use crate::rng::LabRng;
use crate::talagrand::{sample_talagrand, Satisfied, TalagrandDnf};

/// An instance of the intersecting-family construction on `{0,1}^(n+2)`.
///
/// Coordinates `n+1` and `n+2` are tags. Equal tags give 0. With tag `(0,1)`
/// the unique term `l` of `x_C` selects `g(sign, b_l)(x_A)`; with tag `(1,0)`
/// the unique term of the complemented controls selects `g(+, 1 - b_l)` for
/// the yes kind and `g(-, b_l)` for the no kind. The action band half-width
/// is `sqrt(a)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntersectInstance {
    pub n: usize,
    pub eps: f64,
    pub a: usize,
    #[serde(with = "coord_list", rename = "action")]
    pub action_mask: u32,
    #[serde(with = "coord_list", rename = "control")]
    pub control_mask: u32,
    pub dnf: TalagrandDnf,
    #[serde(with = "super::bit_string")]
    pub b: Vec<bool>,
}

/// Samples an instance with `a = round(sqrt(n)/eps)`.
pub fn sample_intersect_instance(n: usize, eps: f64, rng: &mut LabRng) -> Result<IntersectInstance> {
    if n == 0 || n + 2 > crate::cube::MAX_DIM {
        return Err(Error::InvalidParameter(format!("need 1 <= n <= 28, got {n}")));
    }
    let a = mono_action_size(n, eps)?;
    let action_mask = sample_subset_mask(n, a, rng);
    let dnf = sample_talagrand(n - a, eps, rng)?;
    let b = (0..dnf.len()).map(|_| rng.gen()).collect();
    IntersectInstance::from_parts(n, eps, action_mask, dnf, b)
}

impl IntersectInstance {
    pub fn from_parts(n: usize, eps: f64, action_mask: u32, dnf: TalagrandDnf, b: Vec<bool>) -> Result<Self> {
        check_split(n, action_mask)?;
        let a = action_mask.count_ones() as usize;
        if a == 0 || a == n {
            return Err(Error::InvalidParameter("both coordinate blocks must be nonempty".into()));
        }
        if dnf.m() != n - a {
            return Err(Error::DimensionMismatch { expected: n - a, found: dnf.m() });
        }
        if b.len() != dnf.len() {
            return Err(Error::InvalidParameter("one hidden bit per term required".into()));
        }
        let control_mask = !action_mask & low_mask(n);
        Ok(IntersectInstance { n, eps, a, action_mask, control_mask, dnf, b })
    }

    pub fn action_width(&self) -> f64 {
        (self.a as f64).sqrt()
    }

    /// Bits of the two tag coordinates, `(x_{n+1}, x_{n+2})`.
    #[inline]
    pub fn tags(&self, x: u32) -> (bool, bool) {
        (x >> self.n & 1 == 1, x >> (self.n + 1) & 1 == 1)
    }

    /// The term whose action cube decides `x`, if any.
    pub fn active_term(&self, x: u32) -> Option<usize> {
        let controls = match self.tags(x) {
            (false, true) => gather(x, self.control_mask),
            (true, false) => gather(!x, self.control_mask),
            _ => return None,
        };
        match self.dnf.classify(controls as u64) {
            Satisfied::Unique(l) => Some(l),
            _ => None,
        }
    }
}

impl HardFunction for IntersectInstance {
    fn domain_dim(&self) -> usize {
        self.n + 2
    }

    fn eval_bits(&self, kind: Kind, x: u32) -> bool {
        let Some(l) = self.active_term(x) else { return false };
        let bl = self.b[l];
        let (sign, bit) = match (self.tags(x), kind) {
            ((false, true), _) => (kind.sign(), bl),
            (_, Kind::Yes) => (Sign::Plus, !bl),
            (_, Kind::No) => (Sign::Minus, bl),
        };
        let band = action_band((x & self.action_mask).count_ones(), self.a, self.action_width());
        action_bit(sign, bit, band)
    }
}
