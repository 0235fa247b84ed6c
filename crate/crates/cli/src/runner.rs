// SPDX-License-Identifier: Apache-2.0

//! Executes planner x seed matrices and perturbation sweeps, and writes the
//! results CSV and summary JSON.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use hasrrt_core::planners::plan;
use hasrrt_core::stats::{mean, median, std_dev};
use hasrrt_core::{PerturbationSpec, PlanResult, PlannerConfig, PlannerKind, RunRecord, WorkspaceSkeleton};

use crate::experiment::Experiment;
use crate::CliError;

pub const CSV_HEADER: [&str; 9] = [
    "planner",
    "seed",
    "d",
    "success",
    "time_s",
    "vertices",
    "cd_calls",
    "path_cost",
    "env_region_frac",
];

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn planner_tag(k: PlannerKind) -> u64 {
    match k {
        PlannerKind::Rrt => 1,
        PlannerKind::Drrrt => 2,
        PlannerKind::Hasrrt => 3,
    }
}

/// Planner rng seed for one cell of the matrix. The perturbation distance is
/// deliberately not mixed in: it only changes the skeleton, so `d = 0`
/// reproduces the unperturbed run exactly.
pub fn run_seed(master: u64, planner: PlannerKind, seed: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(master) ^ planner_tag(planner)) ^ seed)
}

/// Seed for the skeleton perturbation of one `(d, seed)` cell.
pub fn perturb_seed(master: u64, seed: u64, d: f64) -> u64 {
    const TAG: u64 = 0x70_6572_7475_7262;
    splitmix64(splitmix64(splitmix64(master ^ TAG) ^ seed) ^ d.to_bits())
}

/// One cell of a matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Job {
    pub planner: PlannerKind,
    pub seed: u64,
    pub d: Option<f64>,
}

/// One CSV row: the record, or the setup error that prevented the run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunRow {
    pub planner: PlannerKind,
    pub seed: u64,
    pub d: Option<f64>,
    pub outcome: Result<RunRecord, String>,
}

impl RunRow {
    pub fn success(&self) -> bool {
        self.outcome.as_ref().is_ok_and(|r| r.success)
    }
}

/// A row plus, when requested, the full planner output and the skeleton the
/// run used.
#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub row: RunRow,
    pub result: Option<PlanResult>,
    pub skeleton: Option<WorkspaceSkeleton>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct ExecOptions {
    pub parallel: bool,
    /// Worker count for parallel runs; `None` uses all cores.
    pub threads: Option<usize>,
    /// Keep trees and skeletons in the outcomes.
    pub keep_results: bool,
}

/// Configuration for one job: the experiment's overrides plus the derived
/// seed, the wall-clock cap and the scene resolution.
pub fn job_config(exp: &Experiment, job: &Job) -> PlannerConfig {
    let mut cfg = exp.spec.config.clone();
    cfg.seed = run_seed(exp.spec.master_seed, job.planner, job.seed);
    cfg.time_cap = Some(exp.spec.cap_s);
    if cfg.resolution.is_none() {
        cfg.resolution = exp.scene.resolution;
    }
    if job.d.is_some() {
        if let Some(r) = exp.spec.perturb.as_ref().and_then(|p| p.region_radius) {
            cfg.max_radius = r;
            cfg.min_radius = cfg.min_radius.min(r);
        }
    }
    cfg
}

/// The skeleton a job runs on: the experiment's, perturbed when `d` is set.
pub fn job_skeleton(exp: &Experiment, job: &Job) -> Option<WorkspaceSkeleton> {
    let skel = exp.skeleton.as_ref()?;
    Some(match job.d {
        None => skel.clone(),
        Some(d) => skel.perturb(
            &PerturbationSpec {
                d,
                seed: perturb_seed(exp.spec.master_seed, job.seed, d),
            },
            &exp.scene.env.workspace,
            &exp.scene.query.start.position,
            &exp.scene.query.goal.position,
        ),
    })
}

pub fn run_job(exp: &Experiment, job: &Job, keep: bool) -> RunOutcome {
    let cfg = job_config(exp, job);
    let skeleton = if job.planner.needs_skeleton() {
        job_skeleton(exp, job)
    } else {
        None
    };
    let result = plan(job.planner, &exp.scene.env, &exp.scene.query, skeleton.as_ref(), &cfg);
    let row = RunRow {
        planner: job.planner,
        seed: job.seed,
        d: job.d,
        outcome: result.as_ref().map(|r| r.record.clone()).map_err(|e| e.to_string()),
    };
    RunOutcome {
        row,
        result: result.ok().filter(|_| keep),
        skeleton: skeleton.filter(|_| keep),
    }
}

fn sort_key(job: &Job) -> (PlannerKind, u64, u64) {
    // non-negative floats order like their bit patterns
    (job.planner, job.d.map_or(0, f64::to_bits), job.seed)
}

/// Runs every job and returns outcomes sorted by planner, then `d`, then
/// seed, independent of execution order.
pub fn execute(exp: &Experiment, mut jobs: Vec<Job>, opts: ExecOptions) -> Result<Vec<RunOutcome>, CliError> {
    jobs.sort_by_key(sort_key);
    let outcomes = if opts.parallel {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(n) = opts.threads {
            builder = builder.num_threads(n);
        }
        let pool = builder.build().map_err(|e| CliError::Invalid(e.to_string()))?;
        pool.install(|| jobs.par_iter().map(|j| run_job(exp, j, opts.keep_results)).collect())
    } else {
        jobs.iter().map(|j| run_job(exp, j, opts.keep_results)).collect()
    };
    Ok(outcomes)
}

/// The planner x seed matrix of the experiment.
pub fn bench_jobs(exp: &Experiment) -> Vec<Job> {
    exp.spec
        .planners
        .iter()
        .flat_map(|&planner| exp.spec.seeds.iter().map(move |&seed| Job { planner, seed, d: None }))
        .collect()
}

/// HAS-RRT over every `(d, seed)` pair.
pub fn perturb_jobs(exp: &Experiment, d_list: &[f64]) -> Vec<Job> {
    d_list
        .iter()
        .flat_map(|&d| {
            exp.spec.seeds.iter().map(move |&seed| Job {
                planner: PlannerKind::Hasrrt,
                seed,
                d: Some(d),
            })
        })
        .collect()
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| x.to_string())
}

pub fn write_csv<W: Write>(out: W, rows: &[RunRow]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for row in rows {
        let (success, time, vertices, cd, cost, frac) = match &row.outcome {
            Ok(r) => (
                r.success.to_string(),
                r.time_s.to_string(),
                r.vertices.to_string(),
                r.cd_calls.to_string(),
                fmt_opt(r.path_cost),
                fmt_opt(r.env_region_frac),
            ),
            Err(_) => (
                "false".into(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
            ),
        };
        w.write_record([
            row.planner.name().to_string(),
            row.seed.to_string(),
            fmt_opt(row.d),
            success,
            time,
            vertices,
            cd,
            cost,
            frac,
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Stat {
    pub mean: f64,
    pub std: f64,
    pub median: f64,
}

impl Stat {
    pub fn of(xs: &[f64]) -> Option<Stat> {
        Some(Stat {
            mean: mean(xs)?,
            std: std_dev(xs)?,
            median: median(xs)?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GroupSummary {
    pub planner: PlannerKind,
    pub d: Option<f64>,
    pub runs: usize,
    pub successes: usize,
    pub errors: usize,
    pub success_rate: f64,
    pub vertices: Option<Stat>,
    pub cd_calls: Option<Stat>,
    pub time_s: Option<Stat>,
    /// Over successful runs only.
    pub path_cost: Option<Stat>,
    pub env_region_frac: Option<Stat>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub experiment: String,
    pub groups: Vec<GroupSummary>,
}

/// Per-(planner, d) statistics over rows already sorted by [`execute`].
pub fn summarize(name: &str, rows: &[RunRow]) -> Summary {
    let mut groups: Vec<GroupSummary> = Vec::new();
    let mut start = 0;
    while start < rows.len() {
        let key = (rows[start].planner, rows[start].d.map(f64::to_bits));
        let end = start
            + rows[start..]
                .iter()
                .take_while(|r| (r.planner, r.d.map(f64::to_bits)) == key)
                .count();
        let group = &rows[start..end];
        let records: Vec<&RunRecord> = group.iter().filter_map(|r| r.outcome.as_ref().ok()).collect();
        let pick =
            |f: &dyn Fn(&RunRecord) -> Option<f64>| -> Vec<f64> { records.iter().filter_map(|r| f(r)).collect() };
        let successes = records.iter().filter(|r| r.success).count();
        groups.push(GroupSummary {
            planner: key.0,
            d: rows[start].d,
            runs: group.len(),
            successes,
            errors: group.len() - records.len(),
            success_rate: successes as f64 / group.len() as f64,
            vertices: Stat::of(&pick(&|r| Some(r.vertices as f64))),
            cd_calls: Stat::of(&pick(&|r| Some(r.cd_calls as f64))),
            time_s: Stat::of(&pick(&|r| Some(r.time_s))),
            path_cost: Stat::of(&pick(&|r| r.path_cost)),
            env_region_frac: Stat::of(&pick(&|r| r.env_region_frac)),
        });
        start = end;
    }
    Summary {
        experiment: name.to_string(),
        groups,
    }
}
