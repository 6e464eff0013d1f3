//! The experiment registry. Trial `i` always draws from `sub_rng(seed, i)`,
//! and rows are written in trial order, so the thread count never changes
//! the output.

use std::io::Write;

use cubelab_core::cube::{avg_sensitivity, upward_closure};
use cubelab_core::distance::{dist_junta, dist_monotone, dist_unate};
use cubelab_core::instances::{sample_junta_instance, sample_mono_instance, HardFunction, Kind};
use cubelab_core::rng::{rng_from_seed, sub_rng};
use cubelab_core::stats::{mean_interval, sign_test_p, wilson};
use cubelab_core::talagrand::unique_prob_profile;
use cubelab_core::testers::{bad_event_estimate, indist_experiment, InstanceSource};
use cubelab_core::{Point, Result, TruthTable};
use num_rational::Ratio;
use rand::Rng;
use rayon::prelude::*;

use crate::config::Resolved;
use crate::report::Report;

/// Interval width, in standard errors, of every reported interval.
const Z: f64 = 3.0;

/// Trials evaluated in parallel before their rows are written.
const CHUNK: u64 = 32;

fn ratio(r: Ratio<u64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Runs `trial` over `0..count` in parallel chunks and hands results to
/// `emit` in index order.
fn ordered<T: Send>(
    count: u64,
    trial: impl Fn(u64) -> Result<T> + Sync,
    mut emit: impl FnMut(u64, T) -> Result<()>,
) -> Result<()> {
    let mut start = 0;
    while start < count {
        let end = (start + CHUNK).min(count);
        let batch: Vec<T> = (start..end).into_par_iter().map(&trial).collect::<Result<_>>()?;
        for (i, t) in (start..).zip(batch) {
            emit(i, t)?;
        }
        start = end;
    }
    Ok(())
}

pub fn run<W: Write>(cfg: &Resolved, out: W) -> Result<()> {
    let mut report = Report::new(out, cfg.name, cfg.n, cfg.eps, cfg.seed);
    log::info!("running {} with n = {}, eps = {}, trials = {}, seed = {}", cfg.name, cfg.n, cfg.eps, cfg.trials, cfg.seed);
    match cfg.name {
        "prop32" => dnf_profile(cfg, &mut report),
        "lemma41" => erased_region(cfg, &mut report),
        "indist" => indist(cfg, &mut report),
        "bad-event" => bad_event(cfg, &mut report),
        "junta-far" => paired_far(cfg, &mut report, |i| {
            let inst = sample_junta_instance(cfg.n, &mut sub_rng(cfg.seed, i))?;
            let yes = dist_junta(&inst.materialize(Kind::Yes)?, cfg.k)?;
            let no = dist_junta(&inst.materialize(Kind::No)?, cfg.k)?;
            Ok((yes.value_f64(), no.value_f64()))
        }),
        "unate-far" => paired_far(cfg, &mut report, |i| {
            let inst = sample_mono_instance(cfg.n, cfg.eps, &mut sub_rng(cfg.seed, i))?;
            let yes = dist_unate(&inst.materialize(Kind::Yes)?)?;
            let no = dist_unate(&inst.materialize(Kind::No)?)?;
            Ok((yes.value_f64(), no.value_f64()))
        }),
        "sensitivity" => sensitivity(cfg, &mut report),
        other => unreachable!("unregistered experiment {other}"),
    }
}

/// Unique-satisfaction profile of the random DNF on the middle level.
fn dnf_profile<W: Write>(cfg: &Resolved, report: &mut Report<W>) -> Result<()> {
    // The trial budget is split into up to 100 DNFs with equally many points.
    let dnfs = cfg.trials.min(100);
    let points = cfg.trials.div_ceil(dnfs);
    let mid = (cfg.n / 2) as u32;
    let p = unique_prob_profile(cfg.n, cfg.eps, (mid, mid), dnfs, points, cfg.seed, Z)?;
    report.value("term_width", p.k as f64, p.samples)?;
    report.value("term_count", p.terms as f64, p.samples)?;
    report.estimate("p0", &p.p0, p.samples)?;
    report.estimate("p1", &p.p1, p.samples)?;
    report.estimate("p2plus", &p.p2plus, p.samples)?;
    report.estimate("mean_count", &p.mean_count, p.samples)
}

/// Monotone distance of yes functions against the erased region.
fn erased_region<W: Write>(cfg: &Resolved, report: &mut Report<W>) -> Result<()> {
    let (mut dists, mut erased, mut holds) = (Vec::new(), Vec::new(), 0);
    ordered(
        cfg.trials,
        |i| {
            let inst = sample_mono_instance(cfg.n, cfg.eps, &mut sub_rng(cfg.seed, i))?;
            let d = dist_monotone(&inst.materialize(Kind::Yes)?)?.exact.expect("monotone distance is exact");
            let e = inst.erased_measure();
            let bound = 0.1 * inst.c1 * inst.eps + inst.erased_envelope().1;
            Ok((d, e, bound))
        },
        |i, (d, e, bound)| {
            report.value(&format!("dist_monotone/{i}"), ratio(d), 1)?;
            report.value(&format!("erased_measure/{i}"), ratio(e), 1)?;
            report.value(&format!("erased_bound/{i}"), bound, 1)?;
            dists.push(ratio(d));
            erased.push(ratio(e));
            holds += u64::from(d <= e && ratio(e) <= bound + 1e-15);
            Ok(())
        },
    )?;
    report.estimate("mean_dist_monotone", &mean_interval(&dists, Z), cfg.trials)?;
    report.estimate("mean_erased_measure", &mean_interval(&erased, Z), cfg.trials)?;
    report.estimate("holds_rate", &wilson(holds, cfg.trials, Z), cfg.trials)
}

fn instance_source(cfg: &Resolved) -> InstanceSource {
    match cfg.family.as_str() {
        "junta" => InstanceSource::Junta { n: cfg.n },
        "hand-built" => InstanceSource::HandBuilt,
        _ => InstanceSource::Mono { n: cfg.n, eps: cfg.eps },
    }
}

/// Distinguishing advantage of a fixed plan, before and after discarding
/// the bad event.
fn indist<W: Write>(cfg: &Resolved, report: &mut Report<W>) -> Result<()> {
    let source = instance_source(cfg);
    let n = match source {
        InstanceSource::HandBuilt => 6,
        _ => cfg.n,
    };
    let plan = cfg.plan.generate(n, &mut rng_from_seed(cfg.seed))?;
    let r = indist_experiment(&source, &plan, cfg.trials, cfg.seed)?;
    let t = r.trials;
    report.value("plan_size", r.plan_size as f64, t)?;
    report.estimate("bad_yes", &r.bad_yes, t)?;
    report.estimate("bad_no", &r.bad_no, t)?;
    report.row("advantage", r.advantage, Some((0.0, Z * r.advantage_sigma)), t)?;
    report.value("kept_yes", r.kept_yes as f64, t)?;
    report.value("kept_no", r.kept_no as f64, t)?;
    report.row("advantage_cond", r.advantage_cond, Some((0.0, Z * r.sigma_cond)), t)?;
    report.value("pattern_advantage_cond", r.pattern_advantage_cond, t)?;
    report.value("chi_square_cond", r.chi_square_cond, t)?;
    report.value("chi_df_cond", r.chi_df_cond as f64, t)?;
    report.value("flagged", f64::from(u8::from(r.flagged)), t)
}

/// Bad-event frequency of a fixed plan against the analytic envelopes.
fn bad_event<W: Write>(cfg: &Resolved, report: &mut Report<W>) -> Result<()> {
    let plan = cfg.plan.generate(cfg.n, &mut rng_from_seed(cfg.seed))?;
    let r = bad_event_estimate(&plan, cfg.n, cfg.eps, cfg.trials, cfg.seed)?;
    report.value("plan_size", r.plan_size as f64, r.trials)?;
    report.estimate("bad", &r.bad, r.trials)?;
    report.estimate("pair_bad", &r.pair_bad, r.pair_trials)?;
    report.estimate("pair_diamond", &r.diamond, r.pair_trials)?;
    report.estimate("pair_star", &r.star, r.pair_trials)?;
    report.value("diamond_envelope", r.diamond_envelope, r.pair_trials)?;
    report.value("star_envelope", r.star_envelope, r.pair_trials)?;
    report.value("pair_bound_holds", f64::from(u8::from(r.pair_bound_holds)), r.pair_trials)
}

/// Paired yes/no distances of one sampled instance per trial, with a sign
/// test on the differences (ties dropped).
fn paired_far<W: Write>(
    cfg: &Resolved,
    report: &mut Report<W>,
    trial: impl Fn(u64) -> Result<(f64, f64)> + Sync,
) -> Result<()> {
    let (mut yes, mut no) = (Vec::new(), Vec::new());
    ordered(cfg.trials, trial, |i, (y, n)| {
        report.value(&format!("dist_yes/{i}"), y, 1)?;
        report.value(&format!("dist_no/{i}"), n, 1)?;
        yes.push(y);
        no.push(n);
        Ok(())
    })?;
    let farther = yes.iter().zip(&no).filter(|(y, n)| n > y).count() as u64;
    let closer = yes.iter().zip(&no).filter(|(y, n)| n < y).count() as u64;
    report.estimate("mean_dist_yes", &mean_interval(&yes, Z), cfg.trials)?;
    report.estimate("mean_dist_no", &mean_interval(&no, Z), cfg.trials)?;
    report.value("no_farther", farther as f64, cfg.trials)?;
    report.value("no_closer", closer as f64, cfg.trials)?;
    report.value("sign_test_p", sign_test_p(farther, closer), cfg.trials)
}

/// Upward closure of one to eight random generators.
fn random_upset(n: usize, rng: &mut impl Rng) -> Result<TruthTable> {
    let generators = rng.gen_range(1..=8);
    let points = (0..generators)
        .map(|_| {
            let w = rng.gen_range(0..=n);
            let mask = rand::seq::index::sample(rng, n, w).into_iter().fold(0u32, |m, i| m | 1 << i);
            Point::new(n, mask)
        })
        .collect::<Result<Vec<_>>>()?;
    upward_closure(&points, n)
}

/// Average sensitivity of random monotone functions against `2 sqrt(n)`.
fn sensitivity<W: Write>(cfg: &Resolved, report: &mut Report<W>) -> Result<()> {
    let n = cfg.n;
    let mut values = Vec::new();
    let mut violations = 0u64;
    ordered(
        cfg.trials,
        |i| Ok(avg_sensitivity(&random_upset(n, &mut sub_rng(cfg.seed, i))?)),
        |_, s| {
            // s <= 2 sqrt(n) compared exactly as s^2 <= 4n.
            let (num, den) = (*s.numer() as u128, *s.denom() as u128);
            violations += u64::from(num * num > 4 * n as u128 * den * den);
            values.push(ratio(s));
            Ok(())
        },
    )?;
    let max = values.iter().copied().fold(0.0, f64::max);
    report.estimate("mean_avg_sensitivity", &mean_interval(&values, Z), cfg.trials)?;
    report.value("max_avg_sensitivity", max, cfg.trials)?;
    report.value("bound", 2.0 * (n as f64).sqrt(), cfg.trials)?;
    report.value("violations", violations as f64, cfg.trials)?;
    let parity = TruthTable::from_fn(n, |x| x.count_ones() % 2 == 1)?;
    report.value("parity_avg_sensitivity", ratio(avg_sensitivity(&parity)), 1)
}
