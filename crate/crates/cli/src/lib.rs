//! Command implementations behind the `cubelab` binary.
//!
//! Library errors become a one-line JSON object on standard error and a
//! nonzero exit status; everything else goes to standard output or to the
//! requested file.

pub mod config;
pub mod experiments;
pub mod report;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use cubelab_core::distance::{
    dist_intersecting_with, dist_junta, dist_monotone, dist_unate, dist_union_closed, IntersectingOptions,
};
use cubelab_core::instances::{
    sample_intersect_instance, sample_junta_instance, sample_mono_instance, sample_uc_instance, AnyInstance,
    HardFunction, InstanceRecord, Kind,
};
use cubelab_core::rng::rng_from_seed;
use cubelab_core::testers::{intersecting_tester, uc_tester, TesterOptions};
use cubelab_core::{DistanceReport, Error, Point, Result, TruthTable};
use serde::Serialize;

/// Machine-readable error line for standard error.
pub fn error_json(kind: &str, message: &str) -> String {
    serde_json::json!({ "error": kind, "message": message }).to_string()
}

/// Opens `path` for writing, or standard output when absent.
pub fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(std::io::stdout().lock()),
    })
}

fn write_json(value: &impl Serialize, path: Option<&Path>) -> Result<()> {
    let mut out = output(path)?;
    serde_json::to_writer_pretty(&mut out, value).map_err(|e| match e.io_error_kind() {
        Some(_) => Error::Io(e.to_string()),
        None => Error::Format(e.to_string()),
    })?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

pub fn read_record(path: &Path) -> Result<InstanceRecord> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Format(format!("instance {}: {e}", path.display())))
}

fn read_table(path: &Path) -> Result<TruthTable> {
    TruthTable::read_hcub(path).map_err(|e| match e {
        Error::Io(m) => Error::Io(format!("{}: {m}", path.display())),
        other => other,
    })
}

pub fn sample(family: &str, kind: Kind, n: usize, eps: Option<f64>, seed: u64, out: Option<&Path>) -> Result<()> {
    let mut rng = rng_from_seed(seed);
    let need_eps = || eps.ok_or_else(|| Error::InvalidParameter(format!("family {family} needs --eps")));
    let instance = match family {
        "mono" => AnyInstance::Mono(sample_mono_instance(n, need_eps()?, &mut rng)?),
        "junta" => AnyInstance::Junta(sample_junta_instance(n, &mut rng)?),
        "intersect" => AnyInstance::Intersect(sample_intersect_instance(n, need_eps()?, &mut rng)?),
        "uc" => AnyInstance::Uc(sample_uc_instance(n, need_eps()?, kind, &mut rng)?),
        other => {
            return Err(Error::InvalidParameter(format!("family must be mono, junta, intersect or uc, got {other:?}")))
        }
    };
    write_json(&InstanceRecord::new(instance, kind, seed), out)
}

/// Where a function to evaluate comes from.
pub enum Source {
    Instance { path: PathBuf, kind: Option<Kind> },
    Table(PathBuf),
}

#[derive(Serialize)]
struct Evaluation {
    point: Point,
    value: u8,
}

pub fn eval(source: &Source, point: &str) -> Result<()> {
    let x: Point = point.parse()?;
    let value = match source {
        Source::Instance { path, kind } => {
            let record = read_record(path)?;
            record.instance.eval(kind.unwrap_or(record.kind), &x)?
        }
        Source::Table(path) => read_table(path)?.eval(&x)?,
    };
    write_json(&Evaluation { point: x, value: u8::from(value) }, None)
}

pub fn materialize(instance: &Path, kind: Option<Kind>, out: &Path) -> Result<()> {
    let record = read_record(instance)?;
    record.instance.materialize(kind.unwrap_or(record.kind))?.write_hcub(out)
}

/// Exactness requested with `dist`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Auto,
    Exact,
    Bounds,
}

pub fn distance_report(f: &TruthTable, metric: &str, mode: Mode) -> Result<DistanceReport> {
    let report = match metric {
        "monotone" => dist_monotone(f)?,
        "unate" => dist_unate(f)?,
        "intersecting" => {
            let opts = IntersectingOptions { bounds_only: mode == Mode::Bounds, ..Default::default() };
            dist_intersecting_with(f, opts)?
        }
        "union-closed" => dist_union_closed(f)?,
        m => match m.strip_prefix("junta:").map(str::parse::<usize>) {
            Some(Ok(k)) => dist_junta(f, k)?,
            _ => {
                return Err(Error::InvalidParameter(format!(
                    "metric must be monotone, unate, junta:K, intersecting or union-closed, got {m:?}"
                )))
            }
        },
    };
    if mode == Mode::Exact && report.exact.is_none() {
        return Err(Error::Precondition(format!(
            "no exact {metric} distance at n = {}; rerun with --bounds",
            f.dim()
        )));
    }
    report.verify(f)?;
    Ok(report)
}

pub fn dist(table: &Path, metric: &str, mode: Mode) -> Result<()> {
    write_json(&distance_report(&read_table(table)?, metric, mode)?, None)
}

pub fn tester(table: &Path, alg: &str, eps: f64, seed: u64, transcript: bool) -> Result<()> {
    let f = read_table(table)?;
    let opts = TesterOptions { record_transcript: transcript, ..Default::default() };
    let mut rng = rng_from_seed(seed);
    let verdict = match alg {
        "uc" | "union-closed" => uc_tester(&f, eps, &mut rng, opts)?,
        "intersecting" => intersecting_tester(&f, eps, &mut rng, opts)?,
        other => return Err(Error::InvalidParameter(format!("alg must be uc or intersecting, got {other:?}"))),
    };
    verdict.verify(&f)?;
    write_json(&verdict, None)
}
