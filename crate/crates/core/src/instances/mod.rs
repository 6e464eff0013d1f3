//! Hard yes/no function families.
//!
//! Each family splits the coordinates into *control* coordinates `C`, which
//! feed a random DNF, and *action* coordinates `A`, on which a small action
//! function decides the value once a unique DNF term is satisfied. Yes and no
//! functions share all randomness and differ only in the action functions.

mod intersect;
mod junta;
mod mono;
mod record;
mod uc;

pub use intersect::{sample_intersect_instance, IntersectInstance};
pub use junta::{sample_junta_instance, JuntaInstance, JUNTA_MAX_DIM, JUNTA_WIDTH_CONSTANT};
pub use mono::{hand_built_instance, mono_action_size, sample_mono_instance, MonoInstance, DEFAULT_C0, DEFAULT_C1};
pub use record::{AnyInstance, InstanceRecord};
pub use uc::{sample_uc_instance, uc_action_size, UcInstance};

use rand::seq::index::sample as sample_indices;
use serde::{Deserialize, Serialize};

use crate::cube::bits::low_mask;
use crate::cube::{Point, TruthTable};
use crate::error::{Error, Result};
use crate::rng::LabRng;

/// Largest domain dimension that [`HardFunction::materialize`] accepts.
pub const MATERIALIZE_CAP: usize = 24;

/// Which side of the construction a function comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Yes,
    No,
}

impl Kind {
    pub fn sign(self) -> Sign {
        match self {
            Kind::Yes => Sign::Plus,
            Kind::No => Sign::Minus,
        }
    }
}

impl std::str::FromStr for Kind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "yes" => Ok(Kind::Yes),
            "no" => Ok(Kind::No),
            _ => Err(Error::InvalidParameter(format!("kind must be yes or no, got {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

/// Which action-function family is meant; both share the same case split
/// and differ only in the band width supplied by the caller.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ActionFamily {
    Mono,
    Intersect,
}

/// Position of an action weight relative to `[a/2 - width, a/2 + width]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ActionBand {
    Bottom,
    Middle,
    Top,
}

/// Classifies an action weight. The middle band is closed.
#[inline]
pub fn action_band(weight: u32, a: usize, width: f64) -> ActionBand {
    let w = weight as f64;
    let half = a as f64 / 2.0;
    if w > half + width {
        ActionBand::Top
    } else if w < half - width {
        ActionBand::Bottom
    } else {
        ActionBand::Middle
    }
}

/// The four action functions as a table over (sign, bit, band).
///
/// `(+,0)` is identically 0; `(+,1)` is 1 on both outer bands; `(-,0)` is 1
/// on the top band only; `(-,1)` is 1 on the bottom band only. All four are
/// 0 on the middle band.
#[inline]
pub fn action_bit(sign: Sign, bit: bool, band: ActionBand) -> bool {
    match (sign, bit, band) {
        (_, _, ActionBand::Middle) => false,
        (Sign::Plus, false, _) => false,
        (Sign::Plus, true, _) => true,
        (Sign::Minus, false, b) => b == ActionBand::Top,
        (Sign::Minus, true, b) => b == ActionBand::Bottom,
    }
}

/// Evaluates an action function on a point of the action cube.
pub fn action_value(
    _family: ActionFamily,
    sign: Sign,
    bit: bool,
    x_a: &Point,
    width: f64,
) -> Result<bool> {
    if !(width > 0.0) {
        return Err(Error::InvalidParameter(format!("band width must be positive, got {width}")));
    }
    Ok(action_bit(sign, bit, action_band(x_a.weight(), x_a.dim(), width)))
}

/// A lazily evaluated hard function (both kinds share one instance).
pub trait HardFunction {
    /// Dimension of the function's domain.
    fn domain_dim(&self) -> usize;

    /// Evaluates at a packed point; `x < 2^domain_dim()`.
    fn eval_bits(&self, kind: Kind, x: u32) -> bool;

    fn eval(&self, kind: Kind, x: &Point) -> Result<bool> {
        if x.dim() != self.domain_dim() {
            return Err(Error::DimensionMismatch { expected: self.domain_dim(), found: x.dim() });
        }
        Ok(self.eval_bits(kind, x.bits()))
    }

    /// Tabulates the function; refuses domains above [`MATERIALIZE_CAP`].
    fn materialize(&self, kind: Kind) -> Result<TruthTable>
    where
        Self: Sync,
    {
        let n = self.domain_dim();
        if n > MATERIALIZE_CAP {
            return Err(Error::DimensionTooLarge { what: "materialization", n, max: MATERIALIZE_CAP });
        }
        TruthTable::from_fn_par(n, |x| self.eval_bits(kind, x))
    }
}

/// Uniform random `a`-subset of the `n` coordinates, as a mask.
pub(crate) fn sample_subset_mask(n: usize, a: usize, rng: &mut LabRng) -> u32 {
    sample_indices(rng, n, a).into_iter().fold(0u32, |m, i| m | 1 << i)
}

/// Validates a coordinate split of `{0,1}^n`.
pub(crate) fn check_split(n: usize, action_mask: u32) -> Result<()> {
    if n == 0 || n > crate::cube::MAX_DIM {
        return Err(Error::InvalidParameter(format!("dimension {n} outside 1..=30")));
    }
    if action_mask & !low_mask(n) != 0 {
        return Err(Error::InvalidParameter("action coordinates outside the dimension".into()));
    }
    Ok(())
}

/// Serializes a coordinate mask as an ascending list of 1-based coordinates.
pub(crate) mod coord_list {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::cube::bits::{coords_of, mask_of};

    pub fn serialize<S: Serializer>(mask: &u32, s: S) -> Result<S::Ok, S::Error> {
        coords_of(*mask).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<u32, D::Error> {
        let coords = Vec::<usize>::deserialize(d)?;
        if coords.iter().any(|&c| c == 0 || c > 30) {
            return Err(serde::de::Error::custom("coordinate outside 1..=30"));
        }
        Ok(mask_of(&coords))
    }
}

/// Serializes bits as a '0'/'1' string.
pub(crate) mod bit_string {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(bits: &[bool], s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&bits.iter().map(|&b| if b { '1' } else { '0' }).collect::<String>())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<bool>, D::Error> {
        let s = String::deserialize(d)?;
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(serde::de::Error::custom("bit string must contain only 0 and 1")),
            })
            .collect()
    }
}
