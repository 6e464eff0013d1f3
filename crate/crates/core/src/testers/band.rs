use serde::{Deserialize, Serialize};

use crate::cube::TruthTable;
use crate::error::{Error, Result};

/// Largest dimension accepted by [`truncate`].
pub const TRUNCATE_MAX_DIM: usize = 24;

/// The weight band `[n/2 - T, n/2 + T]` with `T = sqrt(2 n ln(4/eps))`.
///
/// Outside it the uniform measure is at most `eps/2` in total, which is why
/// the testers may ignore those points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Band {
    pub n: usize,
    pub radius: f64,
    pub lo: f64,
    pub hi: f64,
}

impl Band {
    pub fn new(n: usize, eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps <= 1.0) {
            return Err(Error::InvalidParameter(format!("eps must lie in (0, 1], got {eps}")));
        }
        let radius = (2.0 * n as f64 * (4.0 / eps).ln()).sqrt();
        let mid = n as f64 / 2.0;
        Ok(Band { n, radius, lo: mid - radius, hi: mid + radius })
    }

    /// Integer weight against the real bounds, both ends included.
    #[inline]
    pub fn contains(&self, weight: u32) -> bool {
        let w = weight as f64;
        self.lo <= w && w <= self.hi
    }

    /// Smallest and largest weight inside the band.
    pub fn levels(&self) -> (u32, u32) {
        let lo = self.lo.ceil().max(0.0) as u32;
        let hi = self.hi.floor().min(self.n as f64) as u32;
        (lo, hi)
    }
}

/// How [`truncate`] fills the two tails.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TruncStyle {
    /// Low tail to 0, high tail to 1.
    Uc,
    /// Both tails to 0.
    Intersecting,
}

impl std::str::FromStr for TruncStyle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uc" | "union-closed" => Ok(TruncStyle::Uc),
            "intersecting" => Ok(TruncStyle::Intersecting),
            other => Err(Error::InvalidParameter(format!("unknown truncation style {other:?}"))),
        }
    }
}

/// Overwrites `f` outside the band: weights below it become 0, weights above
/// it become 1 (union-closed style) or 0 (intersecting style). Band points
/// keep their value.
pub fn truncate(f: &TruthTable, eps: f64, style: TruncStyle) -> Result<TruthTable> {
    let n = f.dim();
    if n > TRUNCATE_MAX_DIM {
        return Err(Error::DimensionTooLarge { what: "truncation", n, max: TRUNCATE_MAX_DIM });
    }
    let band = Band::new(n, eps)?;
    let high = style == TruncStyle::Uc;
    let mid = n as f64 / 2.0;
    TruthTable::from_fn(n, |x| {
        let w = x.count_ones();
        if band.contains(w) {
            f.get(x)
        } else if (w as f64) < mid {
            false
        } else {
            high
        }
    })
}
