use std::collections::BTreeMap;
use std::sync::OnceLock;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bad::{detect_bad, detect_bad_junta, QueryPlan};
use crate::cube::matching::for_each_subset_of_size;
use crate::error::{Error, Result};
use crate::instances::{
    sample_junta_instance, sample_mono_instance, HardFunction, JuntaInstance, Kind, MonoInstance, DEFAULT_C1,
};
use crate::rng::{sub_rng, LabRng};
use crate::stats::{wilson, Estimate};
use crate::talagrand::TalagrandDnf;

/// Where the yes/no functions of an experiment come from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum InstanceSource {
    Mono { n: usize, eps: f64 },
    Junta { n: usize },
    /// Uniform over [`hand_family`].
    HandBuilt,
}

/// A sampled instance of either construction.
#[derive(Debug, Clone, PartialEq)]
pub enum FamilyInstance {
    Mono(MonoInstance),
    Junta(JuntaInstance),
}

impl FamilyInstance {
    pub fn eval_bits(&self, kind: Kind, x: u32) -> bool {
        match self {
            FamilyInstance::Mono(i) => i.eval_bits(kind, x),
            FamilyInstance::Junta(i) => i.eval_bits(kind, x),
        }
    }

    pub fn detect_bad(&self, plan: &QueryPlan) -> Result<bool> {
        match self {
            FamilyInstance::Mono(i) => detect_bad(plan, i),
            FamilyInstance::Junta(i) => detect_bad_junta(plan, i),
        }
    }
}

impl InstanceSource {
    pub fn dim(&self) -> usize {
        match *self {
            InstanceSource::Mono { n, .. } | InstanceSource::Junta { n } => n,
            InstanceSource::HandBuilt => 6,
        }
    }

    pub fn sample(&self, rng: &mut LabRng) -> Result<FamilyInstance> {
        Ok(match *self {
            InstanceSource::Mono { n, eps } => FamilyInstance::Mono(sample_mono_instance(n, eps, rng)?),
            InstanceSource::Junta { n } => FamilyInstance::Junta(sample_junta_instance(n, rng)?),
            InstanceSource::HandBuilt => {
                let family = hand_family();
                FamilyInstance::Mono(family[rng.gen_range(0..family.len())].clone())
            }
        })
    }
}

/// Every outcome of the six-coordinate construction with `eps = 1`: two
/// action coordinates, four controls, one term of two ordered variable draws
/// and one hidden bit, 15 * 16 * 2 = 480 equally likely instances.
pub fn hand_family() -> &'static [MonoInstance] {
    static FAMILY: OnceLock<Vec<MonoInstance>> = OnceLock::new();
    FAMILY.get_or_init(|| {
        let mut out = Vec::with_capacity(480);
        for_each_subset_of_size(0b111111, 2, |action| {
            for first in 0..4 {
                for second in 0..4 {
                    for b in [false, true] {
                        let dnf = TalagrandDnf::from_terms(4, 1.0, 2, vec![vec![first, second]], None)
                            .expect("variables in range");
                        out.push(
                            MonoInstance::from_parts(6, 1.0, action, dnf, vec![b], DEFAULT_C1)
                                .expect("valid split"),
                        );
                    }
                }
            }
        });
        out
    })
}

fn answers(inst: &FamilyInstance, kind: Kind, plan: &QueryPlan) -> Vec<bool> {
    plan.points.iter().map(|p| inst.eval_bits(kind, p.bits())).collect()
}

fn pattern_key(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// Exact transcript laws over [`hand_family`], restricted to outcomes
/// without the bad event. The bad event depends only on the coordinates and
/// the term, so both kinds condition on the same outcomes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionalViews {
    pub outcomes: u64,
    pub bad_outcomes: u64,
    pub yes: BTreeMap<String, u64>,
    pub no: BTreeMap<String, u64>,
    pub identical: bool,
}

pub fn exact_conditional_views(plan: &QueryPlan) -> Result<ConditionalViews> {
    let mut views = ConditionalViews {
        outcomes: 0,
        bad_outcomes: 0,
        yes: BTreeMap::new(),
        no: BTreeMap::new(),
        identical: false,
    };
    for inst in hand_family() {
        let inst = FamilyInstance::Mono(inst.clone());
        views.outcomes += 1;
        if inst.detect_bad(plan)? {
            views.bad_outcomes += 1;
            continue;
        }
        *views.yes.entry(pattern_key(&answers(&inst, Kind::Yes, plan))).or_default() += 1;
        *views.no.entry(pattern_key(&answers(&inst, Kind::No, plan))).or_default() += 1;
    }
    views.identical = views.yes == views.no;
    Ok(views)
}

/// Largest gap `|P_yes[s >= t] - P_no[s >= t]|` over thresholds `t` of the
/// count statistic `s`.
pub fn best_threshold_advantage(yes: &[usize], no: &[usize]) -> f64 {
    if yes.is_empty() || no.is_empty() {
        return 0.0;
    }
    let top = yes.iter().chain(no).copied().max().unwrap_or(0);
    let tail = |v: &[usize]| {
        let mut hist = vec![0u64; top + 2];
        for &s in v {
            hist[s] += 1;
        }
        let mut acc = vec![0f64; top + 2];
        for t in (0..=top).rev() {
            acc[t] = acc[t + 1] + hist[t] as f64;
        }
        acc.iter().map(|c| c / v.len() as f64).collect::<Vec<_>>()
    };
    let (ty, tn) = (tail(yes), tail(no));
    ty.iter().zip(&tn).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
}

/// Two-sample chi-square on the count statistic, pooling sparse cells
/// (fewer than 10 observations in total) into one. Returns the statistic and
/// its degrees of freedom.
pub fn two_sample_chi_square(yes: &[usize], no: &[usize]) -> (f64, usize) {
    if yes.is_empty() || no.is_empty() {
        return (0.0, 0);
    }
    let top = yes.iter().chain(no).copied().max().unwrap_or(0);
    let mut cells = vec![(0u64, 0u64); top + 1];
    for &s in yes {
        cells[s].0 += 1;
    }
    for &s in no {
        cells[s].1 += 1;
    }
    let mut pooled = (0u64, 0u64);
    let mut kept = Vec::new();
    for c in cells {
        if c.0 + c.1 >= 10 {
            kept.push(c);
        } else {
            pooled.0 += c.0;
            pooled.1 += c.1;
        }
    }
    if pooled.0 + pooled.1 > 0 {
        kept.push(pooled);
    }
    let (n1, n2) = (yes.len() as f64, no.len() as f64);
    let (k1, k2) = ((n2 / n1).sqrt(), (n1 / n2).sqrt());
    let stat = kept
        .iter()
        .map(|&(a, b)| (k1 * a as f64 - k2 * b as f64).powi(2) / (a + b) as f64)
        .sum();
    (stat, kept.len().saturating_sub(1))
}

/// Per plan point, the largest gap in the frequency of a 1-answer.
fn pattern_advantage(yes: &[Vec<bool>], no: &[Vec<bool>]) -> f64 {
    if yes.is_empty() || no.is_empty() {
        return 0.0;
    }
    let q = yes[0].len();
    (0..q)
        .map(|i| {
            let fy = yes.iter().filter(|a| a[i]).count() as f64 / yes.len() as f64;
            let fn_ = no.iter().filter(|a| a[i]).count() as f64 / no.len() as f64;
            (fy - fn_).abs()
        })
        .fold(0.0, f64::max)
}

/// Acceptance-gap report for one plan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndistReport {
    pub source: InstanceSource,
    pub trials: u64,
    pub plan_size: usize,
    pub bad_yes: Estimate,
    pub bad_no: Estimate,
    /// Best threshold on the number of 1-answers, all trials.
    pub advantage: f64,
    pub advantage_sigma: f64,
    /// Trials left after discarding the bad event, per side.
    pub kept_yes: u64,
    pub kept_no: u64,
    /// Same statistic after discarding the bad event.
    pub advantage_cond: f64,
    /// Standard error of a difference of two proportions at its worst
    /// (`p = 1/2`) for the kept sample sizes.
    pub sigma_cond: f64,
    /// Largest per-point answer-frequency gap after conditioning.
    pub pattern_advantage_cond: f64,
    pub chi_square_cond: f64,
    pub chi_df_cond: usize,
    /// Unconditional advantage beyond three standard errors.
    pub flagged: bool,
}

fn diff_sigma(a: u64, b: u64) -> f64 {
    if a == 0 || b == 0 {
        return 0.5;
    }
    (0.25 * (1.0 / a as f64 + 1.0 / b as f64)).sqrt()
}

/// Runs a fixed plan against `trials` fresh yes draws and `trials` fresh no
/// draws. Trial `i` of kind yes uses sub-seed `2i`, kind no uses `2i + 1`.
pub fn indist_experiment(source: &InstanceSource, plan: &QueryPlan, trials: u64, seed: u64) -> Result<IndistReport> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    if let Some(p) = plan.points.first() {
        if p.dim() != source.dim() {
            return Err(Error::DimensionMismatch { expected: source.dim(), found: p.dim() });
        }
    }
    let rows: Vec<(bool, Vec<bool>)> = (0..2 * trials)
        .into_par_iter()
        .map(|i| -> Result<_> {
            let kind = if i % 2 == 0 { Kind::Yes } else { Kind::No };
            let inst = source.sample(&mut sub_rng(seed, i))?;
            Ok((inst.detect_bad(plan)?, answers(&inst, kind, plan)))
        })
        .collect::<Result<_>>()?;
    let (yes_rows, no_rows): (Vec<_>, Vec<_>) = rows.into_iter().enumerate().partition(|(i, _)| i % 2 == 0);
    let strip = |v: Vec<(usize, (bool, Vec<bool>))>| v.into_iter().map(|(_, r)| r).collect::<Vec<_>>();
    let (yes_rows, no_rows) = (strip(yes_rows), strip(no_rows));
    let count = |v: &[(bool, Vec<bool>)]| v.iter().map(|r| r.1.iter().filter(|&&b| b).count()).collect::<Vec<_>>();
    let advantage = best_threshold_advantage(&count(&yes_rows), &count(&no_rows));
    let good = |v: &[(bool, Vec<bool>)]| v.iter().filter(|r| !r.0).cloned().collect::<Vec<_>>();
    let (gy, gn) = (good(&yes_rows), good(&no_rows));
    let (cy, cn) = (count(&gy), count(&gn));
    let (chi, df) = two_sample_chi_square(&cy, &cn);
    let answers_only = |v: &[(bool, Vec<bool>)]| v.iter().map(|r| r.1.clone()).collect::<Vec<_>>();
    let advantage_sigma = diff_sigma(trials, trials);
    Ok(IndistReport {
        source: *source,
        trials,
        plan_size: plan.len(),
        bad_yes: wilson(yes_rows.iter().filter(|r| r.0).count() as u64, trials, 3.0),
        bad_no: wilson(no_rows.iter().filter(|r| r.0).count() as u64, trials, 3.0),
        advantage,
        advantage_sigma,
        kept_yes: gy.len() as u64,
        kept_no: gn.len() as u64,
        advantage_cond: best_threshold_advantage(&cy, &cn),
        sigma_cond: diff_sigma(gy.len() as u64, gn.len() as u64),
        pattern_advantage_cond: pattern_advantage(&answers_only(&gy), &answers_only(&gn)),
        chi_square_cond: chi,
        chi_df_cond: df,
        flagged: advantage > 3.0 * advantage_sigma,
    })
}
