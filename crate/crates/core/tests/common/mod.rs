//! Brute-force reference oracles, written straight from the definitions and
//! independent of the library's checkers. Tables are plain bitmasks over
//! `2^n <= 16` points.
#![allow(dead_code)]

use cubelab_core::TruthTable;

pub fn to_table(n: usize, bits: u64) -> TruthTable {
    TruthTable::from_fn(n, |x| bits >> x & 1 == 1).unwrap()
}

pub fn from_table(t: &TruthTable) -> u64 {
    (0..t.len() as u32).filter(|&x| t.get(x)).fold(0, |acc, x| acc | 1 << x)
}

fn bit(t: u64, x: u32) -> bool {
    t >> x & 1 == 1
}

pub fn is_monotone(n: usize, t: u64) -> bool {
    let size = 1u32 << n;
    (0..size).all(|x| (0..size).all(|y| x & y != x || !bit(t, x) || bit(t, y)))
}

pub fn shift(n: usize, t: u64, r: u32) -> u64 {
    (0..1u32 << n).filter(|&x| bit(t, x ^ r)).fold(0, |acc, x| acc | 1 << x)
}

pub fn is_unate(n: usize, t: u64) -> bool {
    (0..1u32 << n).any(|r| is_monotone(n, shift(n, t, r)))
}

/// Depends only on the coordinates in some `k`-subset.
pub fn is_junta(n: usize, t: u64, k: usize) -> bool {
    let size = 1u32 << n;
    (0..size).filter(|j| j.count_ones() as usize == k).any(|j| {
        (0..size).all(|x| (0..size).all(|y| (x ^ y) & j != 0 || bit(t, x) == bit(t, y)))
    })
}

pub fn is_intersecting(n: usize, t: u64) -> bool {
    let size = 1u32 << n;
    (0..size).all(|x| (0..size).all(|y| !bit(t, x) || !bit(t, y) || x & y != 0))
}

pub fn is_union_closed(n: usize, t: u64) -> bool {
    let size = 1u32 << n;
    (0..size).all(|x| (0..size).all(|y| !bit(t, x) || !bit(t, y) || bit(t, x | y)))
}

/// All tables on `n <= 4` coordinates satisfying `pred`.
pub fn class(n: usize, pred: impl Fn(u64) -> bool) -> Vec<u64> {
    (0..1u64 << (1 << n)).filter(|&t| pred(t)).collect()
}

/// Minimum Hamming distance from `t` to the class, as a count of points.
pub fn distance(t: u64, class: &[u64]) -> u32 {
    class.iter().map(|&g| (g ^ t).count_ones()).min().unwrap()
}
