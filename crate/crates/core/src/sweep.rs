//! Batch verification over seeded random convex polygons.

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domain::DomainSpec;
use crate::pipeline::{verify, write_outputs, OutputOptions, PipelineError, VerifyOptions};
use crate::rng::{derive_seed, SplitMix64};

pub const THREADS_ENV: &str = "HSV_THREADS";
pub const SUMMARY_FILE: &str = "summary.json";
pub const MIN_VERTICES: usize = 5;
pub const MAX_VERTICES: usize = 30;

/// Thread cap from `HSV_THREADS`; `None` if unset or not a positive integer.
pub fn threads_from_env() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.trim().parse().ok().filter(|&n| n > 0)
}

/// The `index`-th domain of a sweep.
pub fn sweep_domain(seed: u64, index: usize) -> DomainSpec {
    let s = derive_seed(seed, index as u64);
    let n = MIN_VERTICES + SplitMix64::new(s).below(MAX_VERTICES - MIN_VERTICES + 1);
    DomainSpec::random_convex(s, n)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DomainStatus {
    Pass,
    Violation,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepEntry {
    pub index: usize,
    pub domain: serde_json::Value,
    pub status: DomainStatus,
    pub strong_kroger: Option<bool>,
    pub mu2: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub count: usize,
    pub seed: u64,
    pub h_rel: f64,
    pub pass_count: usize,
    pub violation_count: usize,
    pub error_count: usize,
    pub strong_kroger_count: usize,
    /// Minima over successful domains; absent if none succeeded.
    pub min_kroger_margin: Option<f64>,
    pub min_payne_weinberger_margin: Option<f64>,
    pub min_szego_weinberger_margin: Option<f64>,
    pub min_polya_margin: Option<f64>,
    pub entries: Vec<SweepEntry>,
}

#[derive(Debug, thiserror::Error)]
pub enum SweepError {
    #[error("count must be at least 1")]
    EmptySweep,
    #[error("h_rel = {0} must lie in (0, 0.25)")]
    InvalidH(f64),
    #[error("i/o error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("thread pool: {0}")]
    Pool(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOptions {
    pub count: usize,
    pub seed: u64,
    /// Mesh size as a fraction of each domain's diameter.
    pub h_rel: f64,
    pub k: usize,
    pub tol: f64,
    pub threads: Option<usize>,
}

struct Outcome {
    entry: SweepEntry,
    margins: Option<[f64; 4]>,
}

fn run_one(opts: &SweepOptions, index: usize, out_dir: &Path) -> Outcome {
    let spec = sweep_domain(opts.seed, index);
    let domain = spec.to_json();
    let fail = |e: PipelineError| Outcome {
        entry: SweepEntry {
            index,
            domain: domain.clone(),
            status: DomainStatus::Error,
            strong_kroger: None,
            mu2: None,
            error: Some(e.to_string()),
        },
        margins: None,
    };
    let diam = match spec.realize() {
        Ok(p) => p.diameter().d,
        Err(e) => {
            return fail(PipelineError {
                stage: "realize",
                source: e.into(),
            })
        }
    };
    let vopts = VerifyOptions {
        h: opts.h_rel * diam,
        k: opts.k,
        tol: opts.tol,
        seed: derive_seed(opts.seed, index as u64),
        ..VerifyOptions::default()
    };
    let out = match verify(&spec, &vopts) {
        Ok(o) => o,
        Err(e) => return fail(e),
    };
    let dir = out_dir.join(format!("domain_{index:04}"));
    if let Err(e) = write_outputs(&out, &dir, OutputOptions::default()) {
        return fail(e);
    }
    let r = &out.report;
    let iq = &r.inequalities;
    Outcome {
        entry: SweepEntry {
            index,
            domain,
            status: if r.verdict.pass {
                DomainStatus::Pass
            } else {
                DomainStatus::Violation
            },
            strong_kroger: Some(iq.strong_kroger_holds),
            mu2: Some(r.spectrum.neumann[1]),
            error: None,
        },
        margins: Some([
            iq.kroger_margin,
            iq.payne_weinberger_margin,
            iq.szego_weinberger_margin,
            iq.polya_margin,
        ]),
    }
}

/// Verify `count` seeded domains concurrently; per-domain outputs go to
/// `out_dir/domain_NNNN/`, the merged summary to `out_dir/summary.json`.
/// Failed domains are recorded, not fatal.
pub fn run_sweep(opts: &SweepOptions, out_dir: &Path) -> Result<SweepSummary, SweepError> {
    if opts.count == 0 {
        return Err(SweepError::EmptySweep);
    }
    if !(opts.h_rel > 0.0 && opts.h_rel < 0.25) {
        return Err(SweepError::InvalidH(opts.h_rel));
    }
    std::fs::create_dir_all(out_dir).map_err(|source| SweepError::Io {
        path: out_dir.display().to_string(),
        source,
    })?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = opts.threads {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| SweepError::Pool(e.to_string()))?;
    let outcomes: Vec<Outcome> =
        pool.install(|| (0..opts.count).into_par_iter().map(|i| run_one(opts, i, out_dir)).collect());

    let count_of = |s: DomainStatus| outcomes.iter().filter(|o| o.entry.status == s).count();
    let min_of = |k: usize| {
        outcomes
            .iter()
            .filter_map(|o| o.margins.map(|m| m[k]))
            .reduce(f64::min)
    };
    let summary = SweepSummary {
        count: opts.count,
        seed: opts.seed,
        h_rel: opts.h_rel,
        pass_count: count_of(DomainStatus::Pass),
        violation_count: count_of(DomainStatus::Violation),
        error_count: count_of(DomainStatus::Error),
        strong_kroger_count: outcomes.iter().filter(|o| o.entry.strong_kroger == Some(true)).count(),
        min_kroger_margin: min_of(0),
        min_payne_weinberger_margin: min_of(1),
        min_szego_weinberger_margin: min_of(2),
        min_polya_margin: min_of(3),
        entries: outcomes.into_iter().map(|o| o.entry).collect(),
    };
    let path = out_dir.join(SUMMARY_FILE);
    let text = serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n";
    std::fs::write(&path, text).map_err(|source| SweepError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(summary)
}
