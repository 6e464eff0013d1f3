use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::bits::{gather, low_mask};
use crate::error::{Error, Result};

/// Largest supported dimension.
pub const MAX_DIM: usize = 30;

/// A point of `{0,1}^n`. Coordinate `i` (1-based) is bit `i - 1` of `bits`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Point {
    n: u8,
    bits: u32,
}

impl Point {
    pub fn new(n: usize, bits: u32) -> Result<Self> {
        if n == 0 || n > MAX_DIM {
            return Err(Error::InvalidParameter(format!(
                "point dimension must lie in 1..={MAX_DIM}, got {n}"
            )));
        }
        if bits & !low_mask(n) != 0 {
            return Err(Error::InvalidParameter(format!(
                "bits {bits:#x} exceed dimension {n}"
            )));
        }
        Ok(Point { n: n as u8, bits })
    }

    /// Builds a point from a truth-table index without validation.
    ///
    /// Callers guarantee `1 <= n <= MAX_DIM` and `bits < 2^n`.
    #[inline]
    pub(crate) fn raw(n: usize, bits: u32) -> Self {
        debug_assert!(n >= 1 && n <= MAX_DIM && bits & !low_mask(n) == 0);
        Point { n: n as u8, bits }
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::new(n, 0)
    }

    pub fn ones(n: usize) -> Result<Self> {
        Self::new(n, low_mask(n))
    }

    /// Builds a point from its set of 1-based coordinates.
    pub fn from_coords(n: usize, coords: &[usize]) -> Result<Self> {
        let mut bits = 0u32;
        for &c in coords {
            if c == 0 || c > n {
                return Err(Error::InvalidParameter(format!(
                    "coordinate {c} outside 1..={n}"
                )));
            }
            bits |= 1 << (c - 1);
        }
        Self::new(n, bits)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n as usize
    }

    /// Packed bits, which double as the truth-table index.
    #[inline]
    pub fn bits(&self) -> u32 {
        self.bits
    }

    #[inline]
    pub fn index(&self) -> usize {
        self.bits as usize
    }

    /// Hamming weight `|x|`.
    #[inline]
    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    /// Value of 1-based coordinate `i`.
    pub fn get(&self, i: usize) -> Result<bool> {
        self.check_coord(i)?;
        Ok(self.bits >> (i - 1) & 1 == 1)
    }

    /// `x` with coordinate `i` flipped.
    pub fn flip(&self, i: usize) -> Result<Self> {
        self.check_coord(i)?;
        Ok(Point { n: self.n, bits: self.bits ^ (1 << (i - 1)) })
    }

    /// Bitwise complement within the dimension.
    pub fn complement(&self) -> Self {
        Point { n: self.n, bits: !self.bits & low_mask(self.dim()) }
    }

    /// True iff `self <= other` coordinate-wise.
    pub fn dominates(&self, other: &Point) -> Result<bool> {
        self.check_same(other)?;
        Ok(self.bits & !other.bits == 0)
    }

    pub fn xor(&self, other: &Point) -> Result<Self> {
        self.check_same(other)?;
        Ok(Point { n: self.n, bits: self.bits ^ other.bits })
    }

    /// Restriction `x_A` to the given 1-based coordinates, in ascending order.
    pub fn restrict(&self, coords_mask: u32) -> Result<Self> {
        if coords_mask & !low_mask(self.dim()) != 0 || coords_mask == 0 {
            return Err(Error::InvalidParameter("restriction mask outside dimension".into()));
        }
        Ok(Point::raw(coords_mask.count_ones() as usize, gather(self.bits, coords_mask)))
    }

    fn check_coord(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.dim() {
            return Err(Error::InvalidParameter(format!(
                "coordinate {i} outside 1..={}",
                self.n
            )));
        }
        Ok(())
    }

    fn check_same(&self, other: &Point) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }
}

/// Weight of a packed index.
#[inline]
pub fn weight(x: &Point) -> u32 {
    x.weight()
}

/// `x <= y` coordinate-wise.
pub fn dominates(x: &Point, y: &Point) -> Result<bool> {
    x.dominates(y)
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim() {
            f.write_str(if self.bits >> i & 1 == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Point({self})")
    }
}

impl FromStr for Point {
    type Err = Error;

    /// Parses a '0'/'1' string; the leftmost character is coordinate 1.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut bits = 0u32;
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' if i < 32 => bits |= 1 << i,
                _ => return Err(Error::Format(format!("invalid point string {s:?}"))),
            }
        }
        Point::new(s.chars().count(), bits)
    }
}

impl TryFrom<String> for Point {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Point> for String {
    fn from(p: Point) -> String {
        p.to_string()
    }
}
