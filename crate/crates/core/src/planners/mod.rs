// SPDX-License-Identifier: Apache-2.0

//! RRT, DR-RRT and HAS-RRT.
//!
//! All three share one loop: pick a sampling distribution, draw `q_rand`,
//! extend the nearest tree vertex toward it, and try to connect the goal.
//! They differ only in where samples come from and how regions react to
//! extension outcomes.

mod config;
pub mod region;
mod tree;

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use config::{PlannerConfig, PlannerKind, SuccessRule};
pub use region::{
    select_region, selection_probabilities, AdvanceMode, Anchor, RadiusRule, RegionSet, SamplingRegion, Selection,
};
pub use tree::{path_cost, TreeRoadmap};

use crate::cspace::{Configuration, Environment, Query, ValidityCounter};
use crate::error::{PlanError, SkeletonError};
use crate::skeleton::{DirectedQuerySkeleton, WorkspaceSkeleton};

/// Metrics of one planner run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub planner: PlannerKind,
    pub seed: u64,
    pub success: bool,
    pub time_s: f64,
    pub vertices: usize,
    pub cd_calls: u64,
    pub iterations: u64,
    pub path_cost: Option<f64>,
    /// Share of main-loop selections that drew from the whole environment;
    /// absent for plain RRT.
    pub env_region_frac: Option<f64>,
}

/// Everything a run produced.
#[derive(Clone, Debug)]
pub struct PlanResult {
    pub record: RunRecord,
    pub config: PlannerConfig,
    pub tree: TreeRoadmap,
    /// Root-to-goal configurations; empty on failure.
    pub path: Vec<Configuration>,
    /// Tree vertex ids along `path`.
    pub path_ids: Vec<usize>,
    /// Resolution the tree edges were checked at.
    pub resolution: f64,
    /// Every sampling region the run created, with final counts, by id.
    /// Empty for RRT.
    pub regions: Vec<SamplingRegion>,
}

impl PlanResult {
    pub fn success(&self) -> bool {
        self.record.success
    }
}

/// Plain RRT with uniform sampling over the whole environment.
pub fn rrt_plan(env: &Environment, query: &Query, cfg: &PlannerConfig) -> Result<PlanResult, PlanError> {
    Run::new(PlannerKind::Rrt, env, query, cfg)?.finish_with(|run| {
        while run.keep_going() {
            let q_rand = run.env.sample_uniform(&mut run.rng);
            run.grow(&q_rand);
        }
    })
}

/// Dynamic-region RRT: regions step one intermediate per success and are
/// never retracted.
pub fn drrrt_plan(
    env: &Environment,
    query: &Query,
    skel: &WorkspaceSkeleton,
    cfg: &PlannerConfig,
) -> Result<PlanResult, PlanError> {
    guided(PlannerKind::Drrrt, env, query, skel, cfg)
}

/// Hierarchical annotated-skeleton RRT: regions jump to the end of their edge
/// on success and retract halfway toward the tree on failure.
pub fn hasrrt_plan(
    env: &Environment,
    query: &Query,
    skel: &WorkspaceSkeleton,
    cfg: &PlannerConfig,
) -> Result<PlanResult, PlanError> {
    guided(PlannerKind::Hasrrt, env, query, skel, cfg)
}

/// Runs `kind`, passing `skel` to the guided planners.
pub fn plan(
    kind: PlannerKind,
    env: &Environment,
    query: &Query,
    skel: Option<&WorkspaceSkeleton>,
    cfg: &PlannerConfig,
) -> Result<PlanResult, PlanError> {
    match (kind, skel) {
        (PlannerKind::Rrt, _) => rrt_plan(env, query, cfg),
        (_, None) => Err(PlanError::SkeletonRequired(kind.name())),
        (PlannerKind::Drrrt, Some(s)) => drrrt_plan(env, query, s, cfg),
        (PlannerKind::Hasrrt, Some(s)) => hasrrt_plan(env, query, s, cfg),
    }
}

fn guided(
    kind: PlannerKind,
    env: &Environment,
    query: &Query,
    skel: &WorkspaceSkeleton,
    cfg: &PlannerConfig,
) -> Result<PlanResult, PlanError> {
    if skel.is_empty() {
        return Err(PlanError::EmptySkeleton);
    }
    if skel.dim() != env.dim() {
        return Err(PlanError::BadConfig(
            "skeleton dimension differs from the environment".into(),
        ));
    }
    let run = Run::new(kind, env, query, cfg)?;
    let (mode, retracts) = match kind {
        PlannerKind::Hasrrt => (AdvanceMode::EdgeEnd, true),
        _ => (AdvanceMode::SingleStep, false),
    };
    // pruning counts toward run time, so the clock is already running
    let directed = match skel.direct_and_prune(&query.start.position, &query.goal.position) {
        Ok(d) => Some(d),
        Err(SkeletonError::NoGuidance { .. }) => None,
        Err(SkeletonError::Empty) => return Err(PlanError::EmptySkeleton),
        Err(e) => return Err(PlanError::BadConfig(e.to_string())),
    };
    let mut regions = RegionSet::new(RadiusRule {
        max: cfg.max_radius,
        min: cfg.min_radius,
    });
    if let Some(d) = directed.as_ref().filter(|d| !d.outgoing(d.source()).is_empty()) {
        regions.spawn(d, Anchor::Vertex(d.source()));
    }
    run.finish_with(|run| {
        let Some(skel) = directed.as_ref() else {
            run.environment_only();
            return;
        };
        if !regions.is_empty() {
            run.grow_into_first_region(regions.get(0));
        }
        let mut selections = 0u64;
        let mut env_picks = 0u64;
        while run.keep_going() {
            let pick = select_region(regions.regions(), cfg.explore_bias, &mut run.rng);
            selections += 1;
            let i = match pick {
                Selection::Environment => {
                    env_picks += 1;
                    let q_rand = run.env.sample_uniform(&mut run.rng);
                    run.grow(&q_rand);
                    continue;
                }
                Selection::Region(i) => i,
            };
            let r = regions.get(i);
            let q_rand = run.env.sample_in_region(&r.center, r.radius, &mut run.rng);
            match run.grow(&q_rand) {
                Growth::Extended { q_new } => {
                    let r = regions.get_mut(i);
                    let counts = match cfg.success_rule {
                        SuccessRule::Extended => true,
                        SuccessRule::Reached => r.contains(&q_new.position),
                    };
                    if counts {
                        r.successes += 1;
                        regions.advance(skel, i, mode);
                    } else {
                        r.failures += 1;
                        if retracts {
                            r.retract(&q_new.position, None);
                        }
                    }
                }
                Growth::Failed { near } => {
                    let r = regions.get_mut(i);
                    r.failures += 1;
                    if retracts {
                        r.retract(&near.position, None);
                    }
                }
            }
        }
        run.env_frac = Some(if selections == 0 {
            0.0
        } else {
            env_picks as f64 / selections as f64
        });
        run.regions = regions.into_history();
    })
}

enum Growth {
    Extended { q_new: Configuration },
    Failed { near: Configuration },
}

/// Mutable state of one run.
struct Run<'a> {
    kind: PlannerKind,
    env: &'a Environment,
    query: &'a Query,
    cfg: &'a PlannerConfig,
    resolution: f64,
    goal_tolerance: f64,
    rng: ChaCha8Rng,
    counter: ValidityCounter,
    tree: TreeRoadmap,
    goal_vertex: Option<usize>,
    iterations: u64,
    started: Instant,
    env_frac: Option<f64>,
    regions: Vec<SamplingRegion>,
}

impl<'a> Run<'a> {
    fn new(
        kind: PlannerKind,
        env: &'a Environment,
        query: &'a Query,
        cfg: &'a PlannerConfig,
    ) -> Result<Self, PlanError> {
        let started = Instant::now();
        cfg.validate()?;
        env.check_configuration(&query.start)?;
        env.check_configuration(&query.goal)?;
        let mut counter = ValidityCounter::new();
        if !env.is_valid(&query.start, &mut counter) {
            return Err(PlanError::InvalidEndpoint { which: "start" });
        }
        if !env.is_valid(&query.goal, &mut counter) {
            return Err(PlanError::InvalidEndpoint { which: "goal" });
        }
        let mut run = Run {
            kind,
            env,
            query,
            cfg,
            resolution: cfg.resolution.unwrap_or_else(|| env.default_resolution()),
            goal_tolerance: cfg.goal_tolerance.unwrap_or(query.goal_tolerance),
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
            counter,
            tree: TreeRoadmap::new(query.start),
            goal_vertex: None,
            iterations: 0,
            started,
            env_frac: None,
            regions: Vec::new(),
        };
        if run.env.distance(&query.start, &query.goal) == 0.0 {
            run.goal_vertex = Some(0);
        }
        Ok(run)
    }

    fn elapsed(&self) -> f64 {
        self.started.elapsed().as_secs_f64()
    }

    fn keep_going(&self) -> bool {
        self.goal_vertex.is_none()
            && self.iterations < self.cfg.max_iterations
            && self.cfg.time_cap.is_none_or(|cap| self.elapsed() < cap)
    }

    fn environment_only(&mut self) {
        while self.keep_going() {
            let q_rand = self.env.sample_uniform(&mut self.rng);
            self.grow(&q_rand);
        }
        self.env_frac = Some(1.0);
    }

    /// One iteration: extend the nearest vertex toward `q_rand`, add the
    /// result, then try to connect the goal.
    fn grow(&mut self, q_rand: &Configuration) -> Growth {
        self.iterations += 1;
        let near_id = self.tree.nearest(self.env, q_rand);
        let near = *self.tree.vertex(near_id).expect("nearest vertex exists");
        let reached = self
            .env
            .extend(&near, q_rand, self.cfg.max_step, self.resolution, &mut self.counter)
            .map(|q| (self.env.distance(&near, &q), q))
            .filter(|(step, _)| *step >= self.cfg.min_step);
        let Some((step, q_new)) = reached else {
            return Growth::Failed { near };
        };
        let id = self.tree.add(q_new, near_id, step);
        self.try_goal(id);
        Growth::Extended { q_new }
    }

    fn try_goal(&mut self, id: usize) {
        let q = *self.tree.vertex(id).expect("vertex just added");
        let d = self.env.distance(&q, &self.query.goal);
        if d > self.goal_tolerance {
            return;
        }
        if d == 0.0 {
            self.goal_vertex = Some(id);
        } else if self
            .env
            .validate_edge(&q, &self.query.goal, self.resolution, &mut self.counter)
        {
            self.goal_vertex = Some(self.tree.add(self.query.goal, id, d));
        }
    }

    /// Grows the tree toward the first region until a vertex lies inside it,
    /// bounded by `init_attempts`.
    fn grow_into_first_region(&mut self, r: &SamplingRegion) {
        for _ in 0..self.cfg.init_attempts {
            if !self.keep_going() || self.tree.vertices().iter().any(|q| r.contains(&q.position)) {
                return;
            }
            let q_rand = self.env.sample_in_region(&r.center, r.radius, &mut self.rng);
            self.grow(&q_rand);
        }
    }

    fn finish_with(mut self, body: impl FnOnce(&mut Self)) -> Result<PlanResult, PlanError> {
        body(&mut self);
        let time_s = self.elapsed();
        let (path_ids, path, cost) = match self.goal_vertex {
            Some(g) => {
                let ids = self.tree.path_to(g)?;
                let path = self.tree.extract_path(g)?;
                let cost = self.tree.cost_to(g)?;
                (ids, path, Some(cost))
            }
            None => (Vec::new(), Vec::new(), None),
        };
        Ok(PlanResult {
            record: RunRecord {
                planner: self.kind,
                seed: self.cfg.seed,
                success: self.goal_vertex.is_some(),
                time_s,
                vertices: self.tree.len(),
                cd_calls: self.counter.calls(),
                iterations: self.iterations,
                path_cost: cost,
                env_region_frac: self.env_frac,
            },
            config: self.cfg.clone(),
            tree: self.tree,
            path,
            path_ids,
            resolution: self.resolution,
            regions: self.regions,
        })
    }
}

/// Prunes `skel` for `query`, exposing the directed skeleton the guided
/// planners would use.
pub fn directed_for(skel: &WorkspaceSkeleton, query: &Query) -> Result<DirectedQuerySkeleton, SkeletonError> {
    skel.direct_and_prune(&query.start.position, &query.goal.position)
}
