//! Distance oracles.
//!
//! Every oracle returns a [`DistanceReport`] carrying a lower and an upper
//! bound (equal when the value is exact) and a certificate that can be
//! re-checked against the input with [`DistanceReport::verify`].

mod intersecting;
mod junta;
mod monotone;
mod union_closed;

pub use intersecting::{dist_intersecting, dist_intersecting_with, IntersectingOptions};
pub use junta::{dist_junta, JUNTA_BUDGET};
pub use monotone::{dist_monotone, dist_unate, mono_violation_matching, MonotoneSolver};
pub use union_closed::{dist_union_closed, tuple_to_triples, uc_tuples, UcTuple};
pub(crate) use union_closed::tuple_from_pool;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::cube::{Matching, Point, TruthTable};
use crate::error::{Error, Result};
use crate::property::{is_intersecting, Property};

/// Result of a distance computation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceReport {
    pub property: Property,
    pub n: usize,
    #[serde(with = "ratio_opt")]
    pub exact: Option<Ratio<u64>>,
    #[serde(with = "ratio_str")]
    pub lower: Ratio<u64>,
    #[serde(with = "ratio_str")]
    pub upper: Ratio<u64>,
    pub certificate: Certificate,
    /// Best coordinate shift (unateness).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shift: Option<Point>,
    /// Best coordinate set, 1-based (juntas).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coordinates: Option<Vec<usize>>,
}

/// Evidence for the bounds of a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Certificate {
    /// A function with the property at distance `upper`.
    Repaired { repaired: TruthTable },
    /// 1-points whose removal leaves an intersecting family (upper bound) and
    /// vertex-disjoint violation pairs (lower bound). `(x, x)` denotes the
    /// empty set violating on its own.
    Cover { cover: Vec<Point>, matching: Matching },
    /// Point-disjoint violating tuples (lower bound) and a repaired function (upper bound).
    TupleCollection { tuples: Vec<UcTuple>, repaired: TruthTable },
}

impl DistanceReport {
    pub(crate) fn exact(property: Property, n: usize, value: Ratio<u64>, certificate: Certificate) -> Self {
        DistanceReport { property, n, exact: Some(value), lower: value, upper: value, certificate, shift: None, coordinates: None }
    }

    pub(crate) fn bounds(property: Property, n: usize, lower: Ratio<u64>, upper: Ratio<u64>, certificate: Certificate) -> Self {
        DistanceReport { property, n, exact: None, lower, upper, certificate, shift: None, coordinates: None }
    }

    /// The exact value, or the midpoint of the bounds as a float.
    pub fn value_f64(&self) -> f64 {
        let r = self.exact.unwrap_or((self.lower + self.upper) / 2);
        *r.numer() as f64 / *r.denom() as f64
    }

    pub fn lower_f64(&self) -> f64 {
        *self.lower.numer() as f64 / *self.lower.denom() as f64
    }

    pub fn upper_f64(&self) -> f64 {
        *self.upper.numer() as f64 / *self.upper.denom() as f64
    }

    /// Re-checks the report against `f`: bound ordering, and that the
    /// certificate really proves both bounds.
    pub fn verify(&self, f: &TruthTable) -> Result<()> {
        let fail = |msg: String| Err(Error::Precondition(format!("certificate rejected: {msg}")));
        if f.dim() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: f.dim() });
        }
        if self.lower > self.upper {
            return fail("lower bound exceeds upper bound".into());
        }
        if let Some(e) = self.exact {
            if e != self.lower || e != self.upper {
                return fail("exact value differs from the bounds".into());
            }
        }
        let size = f.len() as u64;
        let upper_count = self.upper * size;
        let lower_count = self.lower * size;
        match &self.certificate {
            Certificate::Repaired { repaired } => {
                if !self.property.holds(repaired) {
                    return fail(format!("repaired function is not {}", self.property));
                }
                if Ratio::from_integer(f.hamming(repaired)?) != upper_count {
                    return fail("repaired function is not at the reported distance".into());
                }
            }
            Certificate::Cover { cover, matching } => {
                let mut g = f.clone();
                for p in cover {
                    if p.dim() != self.n || !f.get(p.bits()) {
                        return fail(format!("cover point {p} is not a 1-point"));
                    }
                    g.set(p.bits(), false);
                }
                if !is_intersecting(&g) {
                    return fail("removing the cover leaves a violation".into());
                }
                if Ratio::from_integer(f.hamming(&g)?) != upper_count {
                    return fail("cover size differs from the upper bound".into());
                }
                if !matching.is_disjoint() {
                    return fail("matching pairs overlap".into());
                }
                for (x, y) in &matching.pairs {
                    if !f.get(x.bits()) || !f.get(y.bits()) || x.bits() & y.bits() != 0 {
                        return fail(format!("({x}, {y}) is not a violation"));
                    }
                }
                // An exact value is proven by the search; the matching then
                // only has to stay below it.
                let matched = Ratio::from_integer(matching.len() as u64);
                if matched > lower_count || (self.exact.is_none() && matched != lower_count) {
                    return fail("matching size does not support the lower bound".into());
                }
            }
            Certificate::TupleCollection { tuples, repaired } => {
                if !self.property.holds(repaired) {
                    return fail("repaired function is not union-closed".into());
                }
                if Ratio::from_integer(f.hamming(repaired)?) != upper_count {
                    return fail("repaired function is not at the reported distance".into());
                }
                let mut used = std::collections::HashSet::new();
                for t in tuples {
                    if !t.is_violation(f) {
                        return fail(format!("tuple ending at {} is not a violation", t.end));
                    }
                    for p in t.members.iter().chain(std::iter::once(&t.end)) {
                        if !used.insert(p.bits()) {
                            return fail(format!("point {p} used by two tuples"));
                        }
                    }
                }
                let disjoint = Ratio::from_integer(tuples.len() as u64);
                if disjoint > lower_count || (self.exact.is_none() && disjoint != lower_count) {
                    return fail("tuple count does not support the lower bound".into());
                }
            }
        }
        Ok(())
    }
}

/// Serializes a ratio as `"num/den"`.
pub mod ratio_str {
    use num_rational::Ratio;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Ratio<u64>, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Ratio<u64>, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).ok_or_else(|| D::Error::custom(format!("invalid ratio {s:?}")))
    }

    pub fn parse(s: &str) -> Option<Ratio<u64>> {
        let (n, d) = s.split_once('/')?;
        let d: u64 = d.trim().parse().ok()?;
        (d != 0).then_some(())?;
        Some(Ratio::new(n.trim().parse().ok()?, d))
    }
}

mod ratio_opt {
    use num_rational::Ratio;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Option<Ratio<u64>>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => super::ratio_str::serialize(r, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Ratio<u64>>, D::Error> {
        match Option::<String>::deserialize(d)? {
            None => Ok(None),
            Some(s) => super::ratio_str::parse(&s)
                .map(Some)
                .ok_or_else(|| D::Error::custom(format!("invalid ratio {s:?}"))),
        }
    }
}

/// Reduced fraction `count / 2^n`.
pub(crate) fn fraction(count: u64, n: usize) -> Ratio<u64> {
    Ratio::new(count, 1u64 << n)
}
