use serde::{Deserialize, Serialize};

use super::{HardFunction, IntersectInstance, JuntaInstance, Kind, MonoInstance, UcInstance};
use crate::cube::TruthTable;
use crate::error::Result;

/// Any of the four families, tagged by `"family"` in JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum AnyInstance {
    Mono(MonoInstance),
    Junta(JuntaInstance),
    Intersect(IntersectInstance),
    Uc(UcInstance),
}

impl AnyInstance {
    pub fn family(&self) -> &'static str {
        match self {
            AnyInstance::Mono(_) => "mono",
            AnyInstance::Junta(_) => "junta",
            AnyInstance::Intersect(_) => "intersect",
            AnyInstance::Uc(_) => "uc",
        }
    }

    fn inner(&self) -> &(dyn HardFunction + Sync) {
        match self {
            AnyInstance::Mono(i) => i,
            AnyInstance::Junta(i) => i,
            AnyInstance::Intersect(i) => i,
            AnyInstance::Uc(i) => i,
        }
    }
}

impl HardFunction for AnyInstance {
    fn domain_dim(&self) -> usize {
        self.inner().domain_dim()
    }

    fn eval_bits(&self, kind: Kind, x: u32) -> bool {
        self.inner().eval_bits(kind, x)
    }

    fn materialize(&self, kind: Kind) -> Result<TruthTable> {
        match self {
            AnyInstance::Mono(i) => i.materialize(kind),
            AnyInstance::Junta(i) => i.materialize(kind),
            AnyInstance::Intersect(i) => i.materialize(kind),
            AnyInstance::Uc(i) => i.materialize(kind),
        }
    }
}

/// On-disk form of a sampled instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub version: String,
    pub rounding: String,
    pub seed: u64,
    pub kind: Kind,
    #[serde(flatten)]
    pub instance: AnyInstance,
}

impl InstanceRecord {
    pub fn new(instance: AnyInstance, kind: Kind, seed: u64) -> Self {
        InstanceRecord {
            version: crate::VERSION.to_string(),
            rounding: crate::ROUNDING_POLICY.to_string(),
            seed,
            kind,
            instance,
        }
    }
}
