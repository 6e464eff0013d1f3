//! Membership checkers for the five properties.
//!
//! Points are read as subsets of `[n]` (bit `i - 1` set means `i` is a member).

use crate::cube::sensitivity::{close_downward_in_place, close_upward_in_place, edge_profile};
use crate::cube::TruthTable;
use crate::error::{Error, Result};

/// The properties the distance oracles know about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Property {
    Monotone,
    Unate,
    Junta(usize),
    Intersecting,
    UnionClosed,
}

impl Property {
    pub fn holds(&self, f: &TruthTable) -> bool {
        match *self {
            Property::Monotone => is_monotone(f),
            Property::Unate => is_unate(f),
            Property::Junta(k) => is_junta(f, k),
            Property::Intersecting => is_intersecting(f),
            Property::UnionClosed => is_union_closed(f),
        }
    }

    pub fn tag(&self) -> String {
        match self {
            Property::Monotone => "monotone".into(),
            Property::Unate => "unate".into(),
            Property::Junta(k) => format!("junta:{k}"),
            Property::Intersecting => "intersecting".into(),
            Property::UnionClosed => "union-closed".into(),
        }
    }
}

impl std::str::FromStr for Property {
    type Err = Error;

    /// Parses `monotone`, `unate`, `junta:K`, `intersecting` or `union-closed`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "monotone" => Ok(Property::Monotone),
            "unate" => Ok(Property::Unate),
            "intersecting" => Ok(Property::Intersecting),
            "union-closed" => Ok(Property::UnionClosed),
            _ => s
                .strip_prefix("junta:")
                .and_then(|k| k.parse().ok())
                .map(Property::Junta)
                .ok_or_else(|| Error::InvalidParameter(format!("unknown property {s:?}"))),
        }
    }
}

impl TryFrom<String> for Property {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Property> for String {
    fn from(p: Property) -> String {
        p.tag()
    }
}

impl std::fmt::Display for Property {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.tag())
    }
}

/// No edge `x < x | e_i` has `f(x) = 1` and `f(x | e_i) = 0`.
pub fn is_monotone(f: &TruthTable) -> bool {
    edge_profile(f).descending.iter().all(|&d| d == 0)
}

/// Each coordinate is either non-decreasing or non-increasing.
pub fn is_unate(f: &TruthTable) -> bool {
    let p = edge_profile(f);
    p.descending.iter().zip(&p.ascending).all(|(&d, &a)| d == 0 || a == 0)
}

/// A shift `r` with `x -> f(x xor r)` monotone, when `f` is unate.
pub fn unate_shift(f: &TruthTable) -> Option<u32> {
    let p = edge_profile(f);
    let mut r = 0;
    for i in 0..f.dim() {
        match (p.descending[i], p.ascending[i]) {
            (0, _) => {}
            (_, 0) => r |= 1 << i,
            _ => return None,
        }
    }
    Some(r)
}

/// Coordinates (1-based) that `f` depends on.
pub fn relevant_coordinates(f: &TruthTable) -> Vec<usize> {
    let p = edge_profile(f);
    (0..f.dim()).filter(|&i| p.descending[i] + p.ascending[i] > 0).map(|i| i + 1).collect()
}

pub fn is_junta(f: &TruthTable, k: usize) -> bool {
    relevant_coordinates(f).len() <= k
}

/// Every two 1-sets share an element. The empty set meets nothing, itself
/// included, so `f(0) = 1` already violates the property.
pub fn is_intersecting(f: &TruthTable) -> bool {
    if f.dim() == 0 {
        return !f.get(0);
    }
    // below[y] = some 1-point is a subset of y.
    let mut has_subset = f.clone();
    close_upward_in_place(&mut has_subset);
    let full = (f.len() - 1) as u32;
    f.ones().all(|x| !has_subset.get(!x & full))
}

/// The union of any two 1-sets is a 1-set.
pub fn is_union_closed(f: &TruthTable) -> bool {
    let spans = union_below(f);
    (1..f.len()).all(|x| spans[x] != x as u32 || f.get(x as u32))
}

/// `spans[x]` = union of all 1-points that are subsets of `x`.
pub fn union_below(f: &TruthTable) -> Vec<u32> {
    let n = f.dim();
    let mut u: Vec<u32> = (0..f.len() as u32).map(|x| if f.get(x) { x } else { 0 }).collect();
    for i in 0..n {
        let bit = 1usize << i;
        for x in 0..f.len() {
            if x & bit != 0 {
                u[x] |= u[x ^ bit];
            }
        }
    }
    u
}

/// `x -> 1` iff some 1-point of `f` lies above `x`.
pub fn has_superset(f: &TruthTable) -> TruthTable {
    let mut t = f.clone();
    close_downward_in_place(&mut t);
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairwise_union_closed(f: &TruthTable) -> bool {
        let ones: Vec<u32> = f.ones().collect();
        ones.iter().all(|&x| ones.iter().all(|&y| f.get(x | y)))
    }

    fn pairwise_intersecting(f: &TruthTable) -> bool {
        let ones: Vec<u32> = f.ones().collect();
        ones.iter().all(|&x| ones.iter().all(|&y| x & y != 0))
    }

    fn pairwise_monotone(f: &TruthTable) -> bool {
        (0..f.len() as u32).all(|x| (0..f.len() as u32).all(|y| x & !y != 0 || !f.get(x) || f.get(y)))
    }

    #[test]
    fn agree_with_pairwise_definitions_on_all_n3_tables() {
        for code in 0u32..256 {
            let f = TruthTable::from_fn(3, |x| code >> x & 1 == 1).unwrap();
            assert_eq!(is_union_closed(&f), pairwise_union_closed(&f), "{f:?}");
            assert_eq!(is_intersecting(&f), pairwise_intersecting(&f), "{f:?}");
            assert_eq!(is_monotone(&f), pairwise_monotone(&f), "{f:?}");
            let unate_brute = (0..8).any(|r| pairwise_monotone(&f.shifted(r)));
            assert_eq!(is_unate(&f), unate_brute);
            if let Some(r) = unate_shift(&f) {
                assert!(is_monotone(&f.shifted(r)));
            }
        }
    }

    #[test]
    fn property_names_roundtrip() {
        for p in [Property::Monotone, Property::Unate, Property::Junta(3), Property::Intersecting, Property::UnionClosed] {
            assert_eq!(p.tag().parse::<Property>().unwrap(), p);
        }
        assert!("junta:x".parse::<Property>().is_err());
        assert!("sorted".parse::<Property>().is_err());
    }

    #[test]
    fn junta_examples() {
        let dict = TruthTable::from_fn(4, |x| x & 0b0100 != 0).unwrap();
        assert_eq!(relevant_coordinates(&dict), vec![3]);
        assert!(is_junta(&dict, 1));
        let parity = TruthTable::from_fn(3, |x| x.count_ones() % 2 == 1).unwrap();
        assert!(!is_junta(&parity, 2));
        assert!(is_junta(&parity, 3));
    }

    #[test]
    fn intersecting_examples() {
        let dict = TruthTable::from_fn(2, |x| x & 1 != 0).unwrap();
        assert!(is_intersecting(&dict));
        assert!(!is_intersecting(&TruthTable::from_indices(2, [1, 2]).unwrap()));
        assert!(!is_intersecting(&TruthTable::from_indices(2, [0]).unwrap()));
        assert!(is_union_closed(&TruthTable::zeros(3).unwrap()));
    }
}
