//! Monte-Carlo trials over an `(n, p)` grid.
//!
//! Trials are independent and run data-parallel when the `parallel` feature is
//! on. Records always come back in grid order, so the CSV does not depend on
//! scheduling.

use std::fmt::Write as _;
use std::time::Instant;

use crate::pipeline::{failed_phase, find_hamilton, Input, Parameters, Phase};
use crate::random::{derive_seed, Seed};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// `jobs = 0` uses the global pool. Falls back to sequential without the `parallel` feature.
    Parallel {
        jobs: usize,
    },
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    /// Template for every trial; its seed is the base seed.
    pub params: Parameters,
    pub n_list: Vec<usize>,
    pub p_grid: Vec<f64>,
    pub trials: usize,
    pub execution: Execution,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub n: usize,
    pub p: f64,
    pub trial: usize,
    pub seed: Seed,
    pub success: bool,
    pub phase_failed: Option<Phase>,
    /// Attempts used; `retries + 1` on failure.
    pub attempts: usize,
    pub runtime_ms: u128,
}

/// Seed of trial `trial` at grid point `point`.
pub fn trial_seed(base: Seed, point: usize, trial: usize) -> Seed {
    derive_seed(derive_seed(base, point as u64), trial as u64)
}

#[derive(Debug, Clone, Copy)]
struct Task {
    n: usize,
    p: f64,
    trial: usize,
    seed: Seed,
}

fn tasks(cfg: &ExperimentConfig) -> Vec<Task> {
    let mut out = Vec::new();
    let mut point = 0;
    for &n in &cfg.n_list {
        for &p in &cfg.p_grid {
            for trial in 0..cfg.trials {
                out.push(Task { n, p, trial, seed: trial_seed(cfg.params.seed, point, trial) });
            }
            point += 1;
        }
    }
    out
}

/// Runs a single trial on a fresh model sample.
pub fn run_trial(params: &Parameters, n: usize, p: f64, trial: usize, seed: Seed) -> TrialRecord {
    let mut params = params.clone();
    params.seed = seed;
    let start = Instant::now();
    let outcome = find_hamilton(Input::Model { n, p }, &params);
    let runtime_ms = start.elapsed().as_millis();
    let (success, phase_failed, attempts) = match &outcome {
        Ok(found) => (true, None, found.attempts),
        Err(e) => (false, Some(failed_phase(e)), params.retries + 1),
    };
    TrialRecord { n, p, trial, seed, success, phase_failed, attempts, runtime_ms }
}

fn run_task(params: &Parameters, t: &Task) -> TrialRecord {
    run_trial(params, t.n, t.p, t.trial, t.seed)
}

#[cfg(feature = "parallel")]
fn run_parallel(cfg: &ExperimentConfig, work: &[Task], jobs: usize) -> Vec<TrialRecord> {
    use rayon::prelude::*;
    let go = || work.par_iter().map(|t| run_task(&cfg.params, t)).collect();
    if jobs == 0 {
        return go();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(go),
        Err(_) => go(),
    }
}

#[cfg(not(feature = "parallel"))]
fn run_parallel(cfg: &ExperimentConfig, work: &[Task], _jobs: usize) -> Vec<TrialRecord> {
    work.iter().map(|t| run_task(&cfg.params, t)).collect()
}

/// All trials in grid order: `n` outermost, then `p`, then trial index.
pub fn run_experiment(cfg: &ExperimentConfig) -> Vec<TrialRecord> {
    let work = tasks(cfg);
    match cfg.execution {
        Execution::Sequential => work.iter().map(|t| run_task(&cfg.params, t)).collect(),
        Execution::Parallel { jobs } => run_parallel(cfg, &work, jobs),
    }
}

pub const CSV_HEADER: &str = "n,p,trial,seed,success,phase_failed,runtime_ms";

/// CSV text. Runtimes are written as 0 unless `timing`, keeping output byte-stable.
pub fn to_csv(records: &[TrialRecord], timing: bool) -> String {
    let mut s = String::with_capacity(64 * (records.len() + 1));
    s.push_str(CSV_HEADER);
    s.push('\n');
    for r in records {
        let phase = r.phase_failed.map(|p| p.to_string()).unwrap_or_default();
        let ms = if timing { r.runtime_ms } else { 0 };
        let _ = writeln!(s, "{},{},{},{},{},{},{}", r.n, r.p, r.trial, r.seed, u8::from(r.success), phase, ms);
    }
    s
}

/// Success counts per `(n, p)` point, in grid order.
pub fn summarize(records: &[TrialRecord]) -> Vec<(usize, f64, usize, usize)> {
    let mut out: Vec<(usize, f64, usize, usize)> = Vec::new();
    for r in records {
        match out.last_mut() {
            Some(last) if last.0 == r.n && last.1 == r.p => {
                last.2 += usize::from(r.success);
                last.3 += 1;
            }
            _ => out.push((r.n, r.p, usize::from(r.success), 1)),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::templates::Mode;

    fn cfg(execution: Execution) -> ExperimentConfig {
        ExperimentConfig {
            params: Parameters::new(1, Mode::Power),
            n_list: vec![90],
            p_grid: vec![0.5, 1.0],
            trials: 3,
            execution,
        }
    }

    #[test]
    fn order_and_determinism() {
        let a = run_experiment(&cfg(Execution::Sequential));
        let b = run_experiment(&cfg(Execution::Parallel { jobs: 2 }));
        assert_eq!(to_csv(&a, false), to_csv(&b, false));
        assert_eq!(a.len(), 6);
        assert!(a[3..].iter().all(|r| r.success));
        let csv = to_csv(&a, false);
        assert!(csv.starts_with(CSV_HEADER));
        assert_eq!(summarize(&a).len(), 2);
    }
}
