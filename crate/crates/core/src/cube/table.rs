use std::io::{Read, Write};
use std::path::Path;

use rayon::prelude::*;

use super::point::{Point, MAX_DIM};
use crate::error::{Error, Result};

/// An explicit Boolean function on `{0,1}^n`, stored as `2^n` packed bits.
///
/// Bit `x` of the table is `f(x)` where `x = sum x_i 2^(i-1)`. Bits past
/// `2^n` in the last word (only possible for `n < 6`) are always zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruthTable {
    n: usize,
    words: Vec<u64>,
}

const MAGIC: &[u8; 4] = b"HCUB";

impl TruthTable {
    fn check_dim(n: usize) -> Result<()> {
        if n > MAX_DIM {
            return Err(Error::DimensionTooLarge { what: "truth table", n, max: MAX_DIM });
        }
        Ok(())
    }

    fn word_count(n: usize) -> usize {
        if n >= 6 {
            1 << (n - 6)
        } else {
            1
        }
    }

    /// The constant-0 function. `n = 0` is allowed and gives a one-point cube.
    pub fn zeros(n: usize) -> Result<Self> {
        Self::check_dim(n)?;
        Ok(TruthTable { n, words: vec![0; Self::word_count(n)] })
    }

    pub fn constant(n: usize, value: bool) -> Result<Self> {
        let mut t = Self::zeros(n)?;
        if value {
            t.words.iter_mut().for_each(|w| *w = u64::MAX);
            t.clear_tail();
        }
        Ok(t)
    }

    /// Tabulates `f` sequentially.
    pub fn from_fn(n: usize, mut f: impl FnMut(u32) -> bool) -> Result<Self> {
        let mut t = Self::zeros(n)?;
        for x in 0..t.len() as u32 {
            if f(x) {
                t.set(x, true);
            }
        }
        Ok(t)
    }

    /// Tabulates `f` in parallel over 64-point blocks.
    pub fn from_fn_par(n: usize, f: impl Fn(u32) -> bool + Sync) -> Result<Self> {
        let mut t = Self::zeros(n)?;
        let len = t.len();
        t.words.par_iter_mut().enumerate().for_each(|(j, w)| {
            let base = j * 64;
            let mut acc = 0u64;
            for b in 0..64.min(len - base) {
                if f((base + b) as u32) {
                    acc |= 1 << b;
                }
            }
            *w = acc;
        });
        Ok(t)
    }

    /// Builds a table from explicit values, `values[x] = f(x)`.
    pub fn from_bools(n: usize, values: &[bool]) -> Result<Self> {
        Self::check_dim(n)?;
        if values.len() != 1usize << n {
            return Err(Error::DimensionMismatch { expected: 1 << n, found: values.len() });
        }
        Self::from_fn(n, |x| values[x as usize])
    }

    /// Indicator of a set of indices.
    pub fn from_indices(n: usize, ones: impl IntoIterator<Item = u32>) -> Result<Self> {
        let mut t = Self::zeros(n)?;
        for x in ones {
            if (x as usize) >= t.len() {
                return Err(Error::InvalidParameter(format!("index {x} outside 2^{n}")));
            }
            t.set(x, true);
        }
        Ok(t)
    }

    /// Indicator of a set of points.
    pub fn from_points(n: usize, points: &[Point]) -> Result<Self> {
        let mut t = Self::zeros(n)?;
        for p in points {
            if p.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, found: p.dim() });
            }
            t.set(p.bits(), true);
        }
        Ok(t)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Number of points, `2^n`.
    #[inline]
    pub fn len(&self) -> usize {
        1 << self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub(crate) fn words_mut(&mut self) -> &mut [u64] {
        &mut self.words
    }

    #[inline]
    pub fn get(&self, x: u32) -> bool {
        let x = x as usize;
        debug_assert!(x < self.len());
        self.words[x >> 6] >> (x & 63) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, x: u32, v: bool) {
        let x = x as usize;
        debug_assert!(x < self.len());
        if v {
            self.words[x >> 6] |= 1 << (x & 63);
        } else {
            self.words[x >> 6] &= !(1 << (x & 63));
        }
    }

    /// Evaluates at a point, checking its dimension.
    pub fn eval(&self, x: &Point) -> Result<bool> {
        if x.dim() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: x.dim() });
        }
        Ok(self.get(x.bits()))
    }

    pub fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// Indices of the 1-points in increasing order.
    pub fn ones(&self) -> impl Iterator<Item = u32> + '_ {
        self.words.iter().enumerate().flat_map(|(j, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros();
                w &= w - 1;
                Some((j as u32) * 64 + b)
            })
        })
    }

    /// Number of points where the two tables differ.
    pub fn hamming(&self, other: &TruthTable) -> Result<u64> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        Ok(self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as u64)
            .sum())
    }

    /// The table of `x -> f(x xor r)`.
    pub fn shifted(&self, r: u32) -> TruthTable {
        if r == 0 {
            return self.clone();
        }
        let mut t = TruthTable { n: self.n, words: vec![0; self.words.len()] };
        for x in self.ones() {
            t.set(x ^ r, true);
        }
        t
    }

    /// Pointwise complement `1 - f`.
    pub fn negated(&self) -> TruthTable {
        let mut t = TruthTable { n: self.n, words: self.words.iter().map(|w| !w).collect() };
        t.clear_tail();
        t
    }

    fn clear_tail(&mut self) {
        if self.n < 6 {
            self.words[0] &= (1u64 << (1 << self.n)) - 1;
        }
    }

    /// Serializes to the HCUB format: magic, `n` as u32 LE, then the packed bits.
    pub fn to_hcub(&self) -> Vec<u8> {
        let nbytes = self.len().div_ceil(8);
        let mut out = Vec::with_capacity(8 + nbytes);
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&(self.n as u32).to_le_bytes());
        for (k, w) in self.words.iter().enumerate() {
            let bytes = w.to_le_bytes();
            let take = 8.min(nbytes - k * 8);
            out.extend_from_slice(&bytes[..take]);
        }
        out
    }

    pub fn from_hcub(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < 8 || &bytes[..4] != MAGIC {
            return Err(Error::Format("missing HCUB header".into()));
        }
        let n = u32::from_le_bytes(bytes[4..8].try_into().expect("4 bytes")) as usize;
        let mut t = Self::zeros(n)?;
        let nbytes = t.len().div_ceil(8);
        let body = &bytes[8..];
        if body.len() != nbytes {
            return Err(Error::Format(format!(
                "HCUB body has {} bytes, expected {nbytes} for n = {n}",
                body.len()
            )));
        }
        for (k, chunk) in body.chunks(8).enumerate() {
            let mut buf = [0u8; 8];
            buf[..chunk.len()].copy_from_slice(chunk);
            t.words[k] = u64::from_le_bytes(buf);
        }
        let before = t.words[0];
        t.clear_tail();
        if t.words[0] != before {
            return Err(Error::Format("HCUB padding bits are not zero".into()));
        }
        Ok(t)
    }

    pub fn write_hcub(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut file = std::fs::File::create(path)?;
        file.write_all(&self.to_hcub())?;
        Ok(())
    }

    pub fn read_hcub(path: impl AsRef<Path>) -> Result<Self> {
        let mut bytes = Vec::new();
        std::fs::File::open(path)?.read_to_end(&mut bytes)?;
        Self::from_hcub(&bytes)
    }
}

impl std::fmt::Debug for TruthTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.n <= 6 {
            let bits: String =
                (0..self.len() as u32).map(|x| if self.get(x) { '1' } else { '0' }).collect();
            write!(f, "TruthTable(n={}, {bits})", self.n)
        } else {
            write!(f, "TruthTable(n={}, ones={})", self.n, self.count_ones())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn hcub_layout() {
        // n = 3, ones at indices 0 and 5 -> byte 0b0010_0001.
        let t = TruthTable::from_indices(3, [0, 5]).unwrap();
        let bytes = t.to_hcub();
        assert_eq!(&bytes[..4], b"HCUB");
        assert_eq!(&bytes[4..8], &3u32.to_le_bytes());
        assert_eq!(&bytes[8..], &[0b0010_0001]);
        assert_eq!(TruthTable::from_hcub(&bytes).unwrap(), t);
    }

    #[test]
    fn hcub_rejects_garbage() {
        assert!(TruthTable::from_hcub(b"HCU").is_err());
        assert!(TruthTable::from_hcub(b"XCUB\x01\0\0\0\0").is_err());
        assert!(TruthTable::from_hcub(b"HCUB\x02\0\0\0").is_err());
        // n = 1 uses 2 bits; a set padding bit is malformed.
        assert!(TruthTable::from_hcub(b"HCUB\x01\0\0\0\x04").is_err());
    }

    #[test]
    fn constant_and_negation() {
        let t = TruthTable::constant(3, true).unwrap();
        assert_eq!(t.count_ones(), 8);
        assert_eq!(t.negated().count_ones(), 0);
        let big = TruthTable::constant(8, true).unwrap();
        assert_eq!(big.count_ones(), 256);
    }

    #[test]
    fn shift_matches_definition() {
        let f = TruthTable::from_fn(4, |x| x.count_ones() >= 3).unwrap();
        let g = f.shifted(0b0101);
        for x in 0..16 {
            assert_eq!(g.get(x), f.get(x ^ 0b0101));
        }
    }

    proptest! {
        #[test]
        fn parallel_and_serial_agree(n in 0usize..10, seed in any::<u64>()) {
            let f = |x: u32| (x as u64).wrapping_mul(seed | 1).rotate_left(17) & 4 != 0;
            let a = TruthTable::from_fn(n, f).unwrap();
            let b = TruthTable::from_fn_par(n, f).unwrap();
            prop_assert_eq!(&a, &b);
            prop_assert_eq!(TruthTable::from_hcub(&a.to_hcub()).unwrap(), a.clone());
            let ones: Vec<u32> = a.ones().collect();
            prop_assert_eq!(ones.len() as u64, a.count_ones());
            prop_assert!(ones.iter().all(|&x| a.get(x)));
        }
    }
}

mod serde_impl {
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::TruthTable;

    /// JSON form: the dimension plus the HCUB body as lowercase hex.
    #[derive(Serialize, Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Repr {
        n: usize,
        hex: String,
    }

    impl Serialize for TruthTable {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            let body = &self.to_hcub()[8..];
            let hex = body.iter().map(|b| format!("{b:02x}")).collect();
            Repr { n: self.n, hex }.serialize(s)
        }
    }

    impl<'de> Deserialize<'de> for TruthTable {
        fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
            let repr = Repr::deserialize(d)?;
            if repr.hex.len() % 2 != 0 || !repr.hex.is_ascii() {
                return Err(D::Error::custom("hex string has odd length"));
            }
            let body = (0..repr.hex.len())
                .step_by(2)
                .map(|i| u8::from_str_radix(&repr.hex[i..i + 2], 16))
                .collect::<Result<Vec<u8>, _>>()
                .map_err(D::Error::custom)?;
            let mut bytes = b"HCUB".to_vec();
            bytes.extend_from_slice(&(repr.n as u32).to_le_bytes());
            bytes.extend_from_slice(&body);
            TruthTable::from_hcub(&bytes).map_err(D::Error::custom)
        }
    }

    #[cfg(test)]
    mod tests {
        use super::*;

        #[test]
        fn json_roundtrip() {
            let t = TruthTable::from_fn(7, |x| x % 3 == 0).unwrap();
            let s = serde_json::to_string(&t).unwrap();
            assert_eq!(serde_json::from_str::<TruthTable>(&s).unwrap(), t);
            assert!(serde_json::from_str::<TruthTable>(r#"{"n":2,"hex":"f"}"#).is_err());
        }
    }
}
