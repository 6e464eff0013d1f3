use num_rational::Ratio;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{action_band, action_bit, check_split, coord_list, sample_subset_mask, ActionBand, HardFunction, Kind};
use crate::cube::binomial::binomial_u64;
use crate::cube::bits::gather;
use crate::error::{Error, Result};
use crate::rng::LabRng;
use crate::talagrand::{sample_talagrand, Satisfied, TalagrandDnf};

/// Default action band constant; it must stay below 0.01.
pub const DEFAULT_C1: f64 = 0.009;

/// Constant in the recommended lower bound `eps >= c0 / sqrt(n)`; smaller
/// values only trigger a warning.
pub const DEFAULT_C0: f64 = 2.0;

/// An instance of the monotonicity/unateness construction.
///
/// With `m = n - a` controls, a point `x` evaluates to
///
/// * 1 if several terms are satisfied or `|x_C| > m/2 + 0.05 eps sqrt(m)`;
/// * otherwise 0 if no term is satisfied or `|x_C| < m/2`;
/// * otherwise the action function `h(sign, b_l)(x_A)` of the unique term `l`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonoInstance {
    pub n: usize,
    pub eps: f64,
    pub a: usize,
    pub m: usize,
    /// Action coordinates `A`.
    #[serde(with = "coord_list", rename = "action")]
    pub action_mask: u32,
    /// Control coordinates `C = [n] \ A`; DNF variable `j` is the `j`-th smallest.
    #[serde(with = "coord_list", rename = "control")]
    pub control_mask: u32,
    pub dnf: TalagrandDnf,
    #[serde(with = "super::bit_string")]
    pub b: Vec<bool>,
    pub c1: f64,
}

/// `round(sqrt(n)/eps)` with the refusal `a >= n`.
pub fn mono_action_size(n: usize, eps: f64) -> Result<usize> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::InvalidParameter(format!("eps must lie in (0, 1], got {eps}")));
    }
    let a = ((n as f64).sqrt() / eps).round() as usize;
    if a >= n {
        return Err(Error::InvalidParameter(format!(
            "action block a = round(sqrt({n})/{eps}) = {a} leaves no control coordinates"
        )));
    }
    Ok(a.max(1))
}

/// Samples `A`, the DNF over the controls, and the hidden bits.
pub fn sample_mono_instance(n: usize, eps: f64, rng: &mut LabRng) -> Result<MonoInstance> {
    MonoInstance::sample_with(n, eps, DEFAULT_C1, rng)
}

impl MonoInstance {
    pub fn sample_with(n: usize, eps: f64, c1: f64, rng: &mut LabRng) -> Result<Self> {
        if n == 0 || n > crate::cube::MAX_DIM {
            return Err(Error::InvalidParameter(format!("dimension {n} outside 1..=30")));
        }
        let a = mono_action_size(n, eps)?;
        if eps < DEFAULT_C0 / (n as f64).sqrt() {
            log::warn!("eps = {eps} is below c0/sqrt(n) = {:.3}; proceeding at desk scale", DEFAULT_C0 / (n as f64).sqrt());
        }
        let action_mask = sample_subset_mask(n, a, rng);
        let dnf = sample_talagrand(n - a, eps, rng)?;
        let b = (0..dnf.len()).map(|_| rng.gen()).collect();
        Self::from_parts(n, eps, action_mask, dnf, b, c1)
    }

    /// Assembles an instance from explicit parts (hand-built examples, tests).
    pub fn from_parts(n: usize, eps: f64, action_mask: u32, dnf: TalagrandDnf, b: Vec<bool>, c1: f64) -> Result<Self> {
        check_split(n, action_mask)?;
        let a = action_mask.count_ones() as usize;
        let m = n - a;
        if a == 0 || m == 0 {
            return Err(Error::InvalidParameter("both coordinate blocks must be nonempty".into()));
        }
        if dnf.m() != m {
            return Err(Error::DimensionMismatch { expected: m, found: dnf.m() });
        }
        if b.len() != dnf.len() {
            return Err(Error::InvalidParameter(format!("{} hidden bits for {} terms", b.len(), dnf.len())));
        }
        if !(c1 > 0.0 && c1 < 0.01) {
            return Err(Error::InvalidParameter(format!("c1 must lie in (0, 0.01), got {c1}")));
        }
        let control_mask = !action_mask & crate::cube::bits::low_mask(n);
        Ok(MonoInstance { n, eps, a, m, action_mask, control_mask, dnf, b, c1 })
    }

    /// Half-width of the action middle band, `c1 sqrt(a)`.
    pub fn action_width(&self) -> f64 {
        self.c1 * (self.a as f64).sqrt()
    }

    /// Upper end `m/2 + 0.05 eps sqrt(m)` of the control band; the lower end is `m/2`.
    pub fn control_band_top(&self) -> f64 {
        self.m as f64 / 2.0 + 0.05 * self.eps * (self.m as f64).sqrt()
    }

    /// Whether a control weight lies in `[m/2, m/2 + 0.05 eps sqrt(m)]`.
    #[inline]
    pub fn control_in_band(&self, wc: u32) -> bool {
        2 * wc as usize >= self.m && wc as f64 <= self.control_band_top()
    }

    /// The controls of `x`, packed as DNF variables.
    #[inline]
    pub fn controls(&self, x: u32) -> u32 {
        gather(x, self.control_mask)
    }

    #[inline]
    pub fn action_weight(&self, x: u32) -> u32 {
        (x & self.action_mask).count_ones()
    }

    /// The unique satisfied term, when the control weight is in the band.
    #[inline]
    pub fn active_term(&self, x: u32) -> Option<usize> {
        let xc = self.controls(x);
        match self.dnf.classify(xc as u64) {
            Satisfied::Unique(l) if self.control_in_band(xc.count_ones()) => Some(l),
            _ => None,
        }
    }

    /// Points whose value is decided by an action function in its middle band;
    /// the yes function is monotone once these are removed.
    pub fn is_erased(&self, x: u32) -> bool {
        self.active_term(x).is_some()
            && action_band(self.action_weight(x), self.a, self.action_width()) == ActionBand::Middle
    }

    /// Exact measure of the erased region.
    pub fn erased_measure(&self) -> Ratio<u64> {
        let (active, _) = self.control_counts();
        Ratio::new(active * self.action_middle_count(), 1u64 << self.n)
    }

    /// `(#controls with a unique term and weight in band, #controls with weight in band)`.
    pub fn control_counts(&self) -> (u64, u64) {
        let mut active = 0;
        let mut in_band = 0;
        for xc in 0u32..1 << self.m {
            if self.control_in_band(xc.count_ones()) {
                in_band += 1;
                if let Satisfied::Unique(_) = self.dnf.classify(xc as u64) {
                    active += 1;
                }
            }
        }
        (active, in_band)
    }

    /// Number of action points in the closed middle band.
    pub fn action_middle_count(&self) -> u64 {
        (0..=self.a as u32)
            .filter(|&w| action_band(w, self.a, self.action_width()) == ActionBand::Middle)
            .map(|w| binomial_u64(self.a as u64, w as u64))
            .sum()
    }

    /// The erased measure bound `(control band mass) * (action middle mass)`
    /// together with its excess over the asymptotic value `0.1 c1 eps`.
    ///
    /// At small `a` the action middle band contains a whole level, so its
    /// mass is far above `2 c1`; the excess records that rounding effect.
    pub fn erased_envelope(&self) -> (f64, f64) {
        let (_, in_band) = self.control_counts();
        let envelope = in_band as f64 / (1u64 << self.m) as f64 * self.action_middle_count() as f64
            / (1u64 << self.a) as f64;
        (envelope, (envelope - 0.1 * self.c1 * self.eps).max(0.0))
    }
}

/// A fixed six-coordinate example: `A = {5, 6}`, controls `{1, 2, 3, 4}`,
/// the single term `{1, 2}` and `b = (1)`.
pub fn hand_built_instance() -> MonoInstance {
    let dnf = TalagrandDnf::from_terms(4, 1.0, 2, vec![vec![0, 1]], None).expect("valid term");
    MonoInstance::from_parts(6, 1.0, 0b110000, dnf, vec![true], DEFAULT_C1).expect("valid split")
}

impl HardFunction for MonoInstance {
    fn domain_dim(&self) -> usize {
        self.n
    }

    fn eval_bits(&self, kind: Kind, x: u32) -> bool {
        let xc = self.controls(x);
        let wc = xc.count_ones();
        let sat = self.dnf.classify(xc as u64);
        if sat == Satisfied::Several || wc as f64 > self.control_band_top() {
            return true;
        }
        let Satisfied::Unique(l) = sat else { return false };
        if 2 * (wc as usize) < self.m {
            return false;
        }
        let band = action_band(self.action_weight(x), self.a, self.action_width());
        action_bit(kind.sign(), self.b[l], band)
    }
}
