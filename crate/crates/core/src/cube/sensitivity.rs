use num_rational::Ratio;

use super::bits::IN_WORD;
use super::point::Point;
use super::table::TruthTable;
use crate::error::{Error, Result};

/// Per-dimension edge statistics of a truth table.
///
/// For dimension `i`, an edge joins `x` (bit `i` clear) to `x | e_i`.
/// `descending[i]` counts edges with `f(x) = 1, f(x | e_i) = 0` (monotonicity
/// violations) and `ascending[i]` counts edges with `f(x) = 0, f(x | e_i) = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeProfile {
    pub descending: Vec<u64>,
    pub ascending: Vec<u64>,
}

impl EdgeProfile {
    pub fn bichromatic(&self) -> u64 {
        self.descending.iter().chain(&self.ascending).sum()
    }

    /// Monotonicity-violating edges of `x -> f(x xor r)`: flipping coordinate
    /// `i` swaps the roles of the two counts, other coordinates only permute
    /// the edges of dimension `i`.
    pub fn violations_under_shift(&self, r: u32) -> impl Iterator<Item = u64> + '_ {
        (0..self.descending.len())
            .map(move |i| if r >> i & 1 == 1 { self.ascending[i] } else { self.descending[i] })
    }
}

/// Counts ascending and descending edges in every dimension using word operations.
pub fn edge_profile(f: &TruthTable) -> EdgeProfile {
    let n = f.dim();
    let words = f.words();
    let mut descending = vec![0u64; n];
    let mut ascending = vec![0u64; n];
    for i in 0..n {
        let (mut down, mut up) = (0u64, 0u64);
        if i < 6 {
            let shift = 1 << i;
            for &w in words {
                let lower = w & IN_WORD[i];
                let upper = (w >> shift) & IN_WORD[i];
                down += (lower & !upper).count_ones() as u64;
                up += (!lower & upper & IN_WORD[i]).count_ones() as u64;
            }
        } else {
            let stride = 1usize << (i - 6);
            for j in (0..words.len()).filter(|j| j & stride == 0) {
                let (lower, upper) = (words[j], words[j + stride]);
                down += (lower & !upper).count_ones() as u64;
                up += (!lower & upper).count_ones() as u64;
            }
        }
        descending[i] = down;
        ascending[i] = up;
    }
    EdgeProfile { descending, ascending }
}

/// Average sensitivity `E_x #{i : f(x) != f(x^i)}` as an exact rational,
/// equal to `2 * (bichromatic edges) / 2^n`.
pub fn avg_sensitivity(f: &TruthTable) -> Ratio<u64> {
    Ratio::new(2 * edge_profile(f).bichromatic(), f.len() as u64)
}

/// `sens-_S(x)`: the number of coordinates `i` with `x_i = 1` whose down
/// neighbour `x^i` is outside `S`. `S` is given as an indicator table.
pub fn directed_neg_sensitivity(set: &TruthTable, x: &Point) -> Result<u32> {
    if !set.eval(x)? {
        return Err(Error::Precondition(format!("point {x} is not in the set")));
    }
    let bits = x.bits();
    Ok((0..x.dim())
        .filter(|&i| bits >> i & 1 == 1 && !set.get(bits ^ (1 << i)))
        .count() as u32)
}

/// Indicator of `{x : some y in S has y <= x}`.
pub fn upward_closure(points: &[Point], n: usize) -> Result<TruthTable> {
    let mut t = TruthTable::from_points(n, points)?;
    close_upward_in_place(&mut t);
    Ok(t)
}

/// Replaces `t` by its upward closure (superset OR transform).
pub(crate) fn close_upward_in_place(t: &mut TruthTable) {
    let n = t.dim();
    let words = t.words_mut();
    for i in 0..n {
        if i < 6 {
            let shift = 1 << i;
            for w in words.iter_mut() {
                *w |= (*w & IN_WORD[i]) << shift;
            }
        } else {
            let stride = 1usize << (i - 6);
            for j in 0..words.len() {
                if j & stride == 0 {
                    words[j + stride] |= words[j];
                }
            }
        }
    }
}

/// Replaces `t` by its downward closure (subset OR transform).
pub(crate) fn close_downward_in_place(t: &mut TruthTable) {
    let n = t.dim();
    let words = t.words_mut();
    for i in 0..n {
        if i < 6 {
            let shift = 1 << i;
            for w in words.iter_mut() {
                *w |= (*w >> shift) & IN_WORD[i];
            }
        } else {
            let stride = 1usize << (i - 6);
            for j in 0..words.len() {
                if j & stride == 0 {
                    words[j] |= words[j + stride];
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_profile(f: &TruthTable) -> EdgeProfile {
        let n = f.dim();
        let mut p = EdgeProfile { descending: vec![0; n], ascending: vec![0; n] };
        for x in 0..f.len() as u32 {
            for i in 0..n {
                if x >> i & 1 == 0 {
                    match (f.get(x), f.get(x | 1 << i)) {
                        (true, false) => p.descending[i] += 1,
                        (false, true) => p.ascending[i] += 1,
                        _ => {}
                    }
                }
            }
        }
        p
    }

    #[test]
    fn sensitivity_examples() {
        let parity = TruthTable::from_fn(5, |x| x.count_ones() % 2 == 1).unwrap();
        assert_eq!(avg_sensitivity(&parity), Ratio::from_integer(5));
        let maj = TruthTable::from_fn(3, |x| x.count_ones() >= 2).unwrap();
        assert_eq!(avg_sensitivity(&maj), Ratio::new(3, 2));
        let and = TruthTable::from_fn(2, |x| x == 3).unwrap();
        assert_eq!(avg_sensitivity(&and), Ratio::from_integer(1));
    }

    #[test]
    fn neg_sensitivity_examples() {
        let p = |s: &str| s.parse::<Point>().unwrap();
        let s = TruthTable::from_points(2, &[p("11")]).unwrap();
        assert_eq!(directed_neg_sensitivity(&s, &p("11")).unwrap(), 2);
        let s = TruthTable::from_points(2, &[p("11"), p("01")]).unwrap();
        assert_eq!(directed_neg_sensitivity(&s, &p("11")).unwrap(), 1);
        let all = TruthTable::constant(4, true).unwrap();
        assert_eq!(directed_neg_sensitivity(&all, &p("1011")).unwrap(), 0);
        assert!(directed_neg_sensitivity(&s, &p("10")).is_err());
    }

    #[test]
    fn closure_examples() {
        assert_eq!(upward_closure(&[], 3).unwrap().count_ones(), 0);
        let z = "000".parse::<Point>().unwrap();
        assert_eq!(upward_closure(&[z], 3).unwrap().count_ones(), 8);
        let or = upward_closure(&["10".parse().unwrap(), "01".parse().unwrap()], 2).unwrap();
        assert_eq!(or, TruthTable::from_fn(2, |x| x != 0).unwrap());
    }

    proptest! {
        #[test]
        fn profile_matches_brute_force(n in 0usize..10, seed in any::<u64>()) {
            let f = TruthTable::from_fn(n, |x| (x as u64 ^ seed).wrapping_mul(0x9E37_79B9_7F4A_7C15) >> 63 == 1).unwrap();
            prop_assert_eq!(edge_profile(&f), brute_profile(&f));
        }

        #[test]
        fn closures_match_brute_force(n in 1usize..9, seed in any::<u64>()) {
            let f = TruthTable::from_fn(n, |x| (x as u64 ^ seed).wrapping_mul(0x2545_F491_4F6C_DD1D) >> 61 == 0).unwrap();
            let mut up = f.clone();
            close_upward_in_place(&mut up);
            let mut down = f.clone();
            close_downward_in_place(&mut down);
            for x in 0..f.len() as u32 {
                let has_below = f.ones().any(|y| y & !x == 0);
                let has_above = f.ones().any(|y| x & !y == 0);
                prop_assert_eq!(up.get(x), has_below);
                prop_assert_eq!(down.get(x), has_above);
            }
            prop_assert!(edge_profile(&up).descending.iter().all(|&d| d == 0));
        }
    }
}
