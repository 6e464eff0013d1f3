//! Experiment configuration: a JSON file overlaid by command-line flags.

use std::path::{Path, PathBuf};

use cubelab_core::testers::PlanStrategy;
use cubelab_core::{Error, Result};
use serde::{Deserialize, Serialize};

/// Every experiment field is optional here; [`Resolved`] fills in the
/// defaults of the chosen experiment.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: Option<String>,
    /// Cube dimension; the DNF experiment reads it as the variable count.
    #[serde(alias = "m")]
    pub n: Option<usize>,
    pub eps: Option<f64>,
    pub seed: Option<u64>,
    #[serde(alias = "samples")]
    pub trials: Option<u64>,
    /// `mono`, `junta` or `hand-built`, for the indistinguishability run.
    pub family: Option<String>,
    /// Junta size for the junta farness run.
    pub k: Option<usize>,
    pub plan: Option<PlanStrategy>,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
}

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::Format(format!("config {}: {e}", path.display())))
    }

    /// Fields set in `flags` replace those of `self`.
    pub fn overlay(self, flags: ExperimentConfig) -> ExperimentConfig {
        ExperimentConfig {
            name: flags.name.or(self.name),
            n: flags.n.or(self.n),
            eps: flags.eps.or(self.eps),
            seed: flags.seed.or(self.seed),
            trials: flags.trials.or(self.trials),
            family: flags.family.or(self.family),
            k: flags.k.or(self.k),
            plan: flags.plan.or(self.plan),
            out: flags.out.or(self.out),
            threads: flags.threads.or(self.threads),
        }
    }
}

/// Names accepted by `experiment --name`.
pub const EXPERIMENTS: [&str; 7] = ["prop32", "lemma41", "indist", "bad-event", "junta-far", "unate-far", "sensitivity"];

/// A configuration with every field the experiment needs.
#[derive(Debug, Clone, PartialEq)]
pub struct Resolved {
    pub name: &'static str,
    pub n: usize,
    pub eps: f64,
    pub seed: u64,
    pub trials: u64,
    pub family: String,
    pub k: usize,
    pub plan: PlanStrategy,
}

impl Resolved {
    pub fn new(cfg: &ExperimentConfig) -> Result<Self> {
        let given = cfg.name.as_deref().ok_or_else(|| Error::InvalidParameter("experiment name missing".into()))?;
        let name = EXPERIMENTS
            .iter()
            .copied()
            .find(|&e| e == given)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown experiment {given:?}; known: {}", EXPERIMENTS.join(", "))))?;
        let (n, eps, trials) = match name {
            "prop32" => (64, 1.0, 10_000),
            "lemma41" => (12, 1.0, 100),
            "indist" | "bad-event" => (16, 1.0, 10_000),
            "junta-far" => (12, 1.0, 100),
            "unate-far" => (12, 0.6, 100),
            _ => (12, 1.0, 1000),
        };
        let n = cfg.n.unwrap_or(n);
        let eps = cfg.eps.unwrap_or(eps);
        if !(eps > 0.0 && eps <= 1.0) {
            return Err(Error::InvalidParameter(format!("eps must lie in (0, 1], got {eps}")));
        }
        let trials = cfg.trials.unwrap_or(trials);
        if trials == 0 {
            return Err(Error::InvalidParameter("trials must be at least 1".into()));
        }
        let family = cfg.family.clone().unwrap_or_else(|| "mono".into());
        if !["mono", "junta", "hand-built"].contains(&family.as_str()) {
            return Err(Error::InvalidParameter(format!("family must be mono, junta or hand-built, got {family:?}")));
        }
        Ok(Resolved {
            name,
            n,
            eps,
            seed: cfg.seed.unwrap_or(0),
            trials,
            family,
            k: cfg.k.unwrap_or(n / 2),
            plan: cfg.plan.clone().unwrap_or(PlanStrategy::Uniform { q: 64 }),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_fields_are_rejected() {
        let err = serde_json::from_str::<ExperimentConfig>(r#"{"name": "prop32", "colour": 3}"#).unwrap_err();
        assert!(err.to_string().contains("colour"));
    }

    #[test]
    fn aliases_and_plans_parse() {
        let cfg: ExperimentConfig =
            serde_json::from_str(r#"{"name": "indist", "m": 6, "samples": 5, "plan": {"strategy": "ball", "q": 4, "radius": 2}}"#)
                .unwrap();
        assert_eq!(cfg.n, Some(6));
        assert_eq!(cfg.trials, Some(5));
        assert_eq!(cfg.plan, Some(PlanStrategy::Ball { q: 4, radius: 2 }));
    }

    #[test]
    fn flags_win() {
        let file = ExperimentConfig { name: Some("lemma41".into()), n: Some(16), seed: Some(3), ..Default::default() };
        let flags = ExperimentConfig { seed: Some(9), ..Default::default() };
        let merged = file.overlay(flags);
        assert_eq!((merged.n, merged.seed), (Some(16), Some(9)));
    }

    #[test]
    fn defaults_and_unknown_names() {
        let r = Resolved::new(&ExperimentConfig { name: Some("junta-far".into()), n: Some(10), ..Default::default() }).unwrap();
        assert_eq!((r.n, r.k, r.trials), (10, 5, 100));
        let e = Resolved::new(&ExperimentConfig { name: Some("prop33".into()), ..Default::default() }).unwrap_err();
        assert_eq!(e.kind(), "invalid_parameter");
    }
}
