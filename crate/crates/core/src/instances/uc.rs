use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{check_split, coord_list, sample_subset_mask, HardFunction, Kind};
use crate::cube::bits::{gather, low_mask};
use crate::error::{Error, Result};
use crate::rng::LabRng;
use crate::talagrand::{sample_talagrand, Satisfied, TalagrandDnf};

/// An instance of the union-closed construction.
///
/// `a = round(log2(1/eps))` action coordinates, a DNF drawn with parameter
/// 0.5 on the `c = n - a` controls, and per-term action strings. Both kinds
/// give 1 when several terms are satisfied and 0 when none is. With a unique
/// term `l`, the yes function is `[x_A = s_l]` and the no function is
/// `b_l [x_A in {r_l, complement of r_l}]`.
///
/// The randomness of both kinds is drawn together so one instance evaluates
/// either kind; `kind` records which kind was requested at sampling time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UcInstance {
    pub n: usize,
    pub eps: f64,
    pub a: usize,
    pub c: usize,
    #[serde(rename = "sampled_kind")]
    pub kind: Kind,
    #[serde(with = "coord_list", rename = "action")]
    pub action_mask: u32,
    #[serde(with = "coord_list", rename = "control")]
    pub control_mask: u32,
    pub dnf: TalagrandDnf,
    /// Yes strings `s_l`, packed over `A` in ascending coordinate order.
    pub s: Vec<u32>,
    /// No strings `r_l`.
    pub r: Vec<u32>,
    #[serde(with = "super::bit_string")]
    pub b: Vec<bool>,
}

/// `round(log2(1/eps))` clamped to `[1, n-1]`.
pub fn uc_action_size(n: usize, eps: f64) -> usize {
    let a = (1.0 / eps).log2().round() as i64;
    a.clamp(1, n as i64 - 1) as usize
}

pub fn sample_uc_instance(n: usize, eps: f64, kind: Kind, rng: &mut LabRng) -> Result<UcInstance> {
    if n < 2 || n > crate::cube::MAX_DIM {
        return Err(Error::InvalidParameter(format!("need 2 <= n <= 30, got {n}")));
    }
    let floor = (-(n as f64).sqrt()).exp2();
    if !(eps >= floor && eps < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "eps must lie in [2^-sqrt(n), 1) = [{floor:.3e}, 1), got {eps}"
        )));
    }
    let a = uc_action_size(n, eps);
    let action_mask = sample_subset_mask(n, a, rng);
    let dnf = sample_talagrand(n - a, 0.5, rng)?;
    let l = dnf.len();
    let mask = low_mask(a);
    let s = (0..l).map(|_| rng.gen::<u32>() & mask).collect();
    let r = (0..l).map(|_| rng.gen::<u32>() & mask).collect();
    let b = (0..l).map(|_| rng.gen()).collect();
    UcInstance::from_parts(n, eps, kind, action_mask, dnf, s, r, b)
}

impl UcInstance {
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        n: usize,
        eps: f64,
        kind: Kind,
        action_mask: u32,
        dnf: TalagrandDnf,
        s: Vec<u32>,
        r: Vec<u32>,
        b: Vec<bool>,
    ) -> Result<Self> {
        check_split(n, action_mask)?;
        let a = action_mask.count_ones() as usize;
        let c = n - a;
        if dnf.m() != c {
            return Err(Error::DimensionMismatch { expected: c, found: dnf.m() });
        }
        let l = dnf.len();
        if s.len() != l || r.len() != l || b.len() != l {
            return Err(Error::InvalidParameter("per-term randomness must have one entry per term".into()));
        }
        if s.iter().chain(&r).any(|&v| v & !low_mask(a) != 0) {
            return Err(Error::InvalidParameter("action strings exceed the action block".into()));
        }
        let control_mask = !action_mask & low_mask(n);
        Ok(UcInstance { n, eps, a, c, kind, action_mask, control_mask, dnf, s, r, b })
    }

    /// Complement of `r_l` within the action block.
    pub fn r_bar(&self, l: usize) -> u32 {
        !self.r[l] & low_mask(self.a)
    }
}

impl HardFunction for UcInstance {
    fn domain_dim(&self) -> usize {
        self.n
    }

    fn eval_bits(&self, kind: Kind, x: u32) -> bool {
        match self.dnf.classify(gather(x, self.control_mask) as u64) {
            Satisfied::None => false,
            Satisfied::Several => true,
            Satisfied::Unique(l) => {
                let xa = gather(x, self.action_mask);
                match kind {
                    Kind::Yes => xa == self.s[l],
                    Kind::No => self.b[l] && (xa == self.r[l] || xa == self.r_bar(l)),
                }
            }
        }
    }
}
