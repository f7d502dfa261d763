use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use super::config::{ExperimentConfig, Scenario};
use crate::dominating::{decide, QuantileEstimator, Verdict, WRecursion};
use crate::engine::{AnnealOutcome, Annealer, EngineConfig, TrajectoryRecord, TrajectoryWriter};
use crate::error::Result;
use crate::rng::{derive_seed, purpose};
use crate::with_model;

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Worker threads; zero means one per available core.
    pub workers: usize,
    /// When set, every replication streams its trajectory here as
    /// `trajectory_<i>.csv`.
    pub trajectory_dir: Option<PathBuf>,
}

#[derive(Debug, Clone)]
pub struct ReplicationResult {
    /// Position in sweep-major order, also used in output file names.
    pub index: usize,
    pub sweep_index: usize,
    pub replication: usize,
    pub seed: u64,
    /// The annealer's terminal state, or the error that stopped it.
    pub outcome: std::result::Result<AnnealOutcome, String>,
    pub verdict: Option<Verdict>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRecord {
    pub sweep_value: Option<f64>,
    pub replications: usize,
    pub n_unstable: usize,
    /// Share of completed replications declared unstable.
    pub proportion: f64,
    pub mean_drift_ratio: f64,
    pub failures: usize,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Timing {
    pub annealing: Duration,
    pub quantiles: Duration,
}

#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub replications: Vec<ReplicationResult>,
    pub summary: Vec<SummaryRecord>,
    /// Per sweep point, the `(k, q_k)` pairs used by its verdicts.
    pub quantiles: Vec<Vec<(u64, f64)>>,
    pub timing: Timing,
}

pub fn replication_seed(root: u64, sweep_index: usize, replication: usize) -> u64 {
    derive_seed(root, &[sweep_index as u64, replication as u64])
}

pub fn quantile_seed(root: u64) -> u64 {
    derive_seed(root, &[purpose::DOMINATING])
}

/// Key of the quantile cache: everything `W` depends on.
type GroupKey = (Vec<u64>, usize, bool);

fn group_key(s: &Scenario, w0: f64) -> GroupKey {
    let d = &s.dominating;
    let bits = vec![
        d.delta.to_bits(),
        u64::from(d.sigma),
        d.kappa.to_bits(),
        d.phi.to_bits(),
        d.tau.c().to_bits(),
        d.tau.d().to_bits(),
        d.alpha.to_bits(),
        w0.to_bits(),
    ];
    (bits, s.n_reps, WRecursion::from(s.engine.algorithm) == WRecursion::Paired)
}

fn run_one(
    scenario: &Scenario,
    engine: &EngineConfig,
    trajectory: Option<PathBuf>,
) -> io::Result<std::result::Result<AnnealOutcome, String>> {
    with_model!(&scenario.model, m => {
        let mut annealer = match Annealer::new(m, &scenario.set, engine, None, None) {
            Ok(a) => a,
            Err(e) => return Ok(Err(e.to_string())),
        };
        let run = match trajectory {
            None => annealer.run(|_, _| {}),
            Some(path) => {
                let mut writer = TrajectoryWriter::new(BufWriter::new(File::create(path)?), scenario.set.dim())?;
                let mut io_err = None;
                let mut record = |s: &crate::engine::AnnealerState<_>, accepted: bool| {
                    if io_err.is_none() {
                        let r = TrajectoryRecord { k: s.k, t: s.t, f_y: s.f_y, lambda: &s.lambda, accepted };
                        if let Err(e) = writer.write(&r) {
                            io_err = Some(e);
                        }
                    }
                };
                record(annealer.state(), false);
                let run = annealer.run(&mut record);
                if let Some(e) = io_err {
                    return Err(e);
                }
                writer.into_inner().flush()?;
                run
            }
        };
        Ok(run.map(|()| annealer.outcome()).map_err(|e| e.to_string()))
    })
}

/// Runs every replication of every sweep point and tests each one.
///
/// Output depends only on the config (including its seed), not on the
/// number of workers.
pub fn run_replications(config: &ExperimentConfig, options: &RunOptions) -> Result<ExperimentReport> {
    let scenarios = config.scenarios()?;
    let r = config.replications;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.workers)
        .build()
        .expect("thread pool");

    let started = Instant::now();
    let jobs: Vec<(usize, usize)> = (0..scenarios.len())
        .flat_map(|s| (0..r).map(move |i| (s, i)))
        .collect();
    let outcomes: Vec<_> = pool.install(|| {
        jobs.par_iter()
            .enumerate()
            .map(|(index, &(s, i))| {
                let scenario = &scenarios[s];
                let mut engine = scenario.engine.clone();
                engine.seed = replication_seed(config.seed, s, i);
                let path = options
                    .trajectory_dir
                    .as_ref()
                    .map(|d| d.join(format!("trajectory_{index}.csv")));
                run_one(scenario, &engine, path).map(|o| (engine.seed, o))
            })
            .collect::<io::Result<Vec<_>>>()
    })?;
    let annealing = started.elapsed();

    let started = Instant::now();
    let mut groups: BTreeMap<GroupKey, (usize, f64, Vec<u64>)> = BTreeMap::new();
    for (index, &(s, _)) in jobs.iter().enumerate() {
        if let Ok(o) = &outcomes[index].1 {
            let w0 = scenarios[s].w0.unwrap_or(o.f_y0);
            let entry = groups.entry(group_key(&scenarios[s], w0)).or_insert((s, w0, Vec::new()));
            entry.2.push(o.k);
        }
    }
    let q_seed = quantile_seed(config.seed);
    let solved: Vec<(GroupKey, Vec<u64>, Vec<f64>)> = pool.install(|| {
        groups
            .into_par_iter()
            .map(|(key, (s, w0, mut ks))| {
                ks.sort_unstable();
                ks.dedup();
                let sc = &scenarios[s];
                let estimator = QuantileEstimator::new(
                    sc.dominating,
                    WRecursion::from(sc.engine.algorithm),
                    sc.n_reps,
                    q_seed,
                )?;
                let values = estimator.quantiles_at(w0, &ks);
                Ok((key, ks, values))
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let cache: BTreeMap<GroupKey, (Vec<u64>, Vec<f64>)> =
        solved.into_iter().map(|(key, ks, v)| (key, (ks, v))).collect();
    let quantile_time = started.elapsed();

    let mut replications = Vec::with_capacity(jobs.len());
    let mut quantiles: Vec<BTreeMap<u64, f64>> = vec![BTreeMap::new(); scenarios.len()];
    for (index, (&(s, i), (seed, outcome))) in jobs.iter().zip(outcomes).enumerate() {
        let sc = &scenarios[s];
        let verdict = outcome.as_ref().ok().map(|o| {
            let w0 = sc.w0.unwrap_or(o.f_y0);
            let (ks, values) = &cache[&group_key(sc, w0)];
            let q = values[ks.binary_search(&o.k).expect("k was requested")];
            quantiles[s].insert(o.k, q);
            decide(o, q, sc.dominating.alpha, sc.engine.k_star, seed)
        });
        replications.push(ReplicationResult {
            index,
            sweep_index: s,
            replication: i,
            seed,
            outcome,
            verdict,
        });
    }

    let summary = scenarios
        .iter()
        .enumerate()
        .map(|(s, sc)| summarise(sc.sweep_value, &replications[s * r..(s + 1) * r]))
        .collect();
    Ok(ExperimentReport {
        config: config.clone(),
        replications,
        summary,
        quantiles: quantiles.into_iter().map(|m| m.into_iter().collect()).collect(),
        timing: Timing {
            annealing,
            quantiles: quantile_time,
        },
    })
}

pub fn summarise(sweep_value: Option<f64>, reps: &[ReplicationResult]) -> SummaryRecord {
    let done: Vec<_> = reps.iter().filter_map(|r| Some((r.outcome.as_ref().ok()?, r.verdict.as_ref()?))).collect();
    let n_unstable = done.iter().filter(|(_, v)| v.is_unstable()).count();
    let completed = done.len() as f64;
    SummaryRecord {
        sweep_value,
        replications: reps.len(),
        n_unstable,
        proportion: n_unstable as f64 / completed,
        mean_drift_ratio: done.iter().map(|(o, _)| o.drift_ratio()).sum::<f64>() / completed,
        failures: reps.len() - done.len(),
    }
}
