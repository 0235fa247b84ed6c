// SPDX-License-Identifier: Apache-2.0

//! Experiment files (`hasrrt-experiment/1`): which scene, which planners,
//! which seeds, and the shared planner configuration.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use hasrrt_core::scene::{load_blockgrid, load_scene, load_skeleton, Scene};
use hasrrt_core::{PlannerConfig, PlannerKind, SceneError, WorkspaceSkeleton};

use crate::CliError;

pub const EXPERIMENT_FORMAT: &str = "hasrrt-experiment/1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerturbSettings {
    pub d_list: Vec<f64>,
    /// Replaces the configured maximum region radius for perturbed runs.
    #[serde(default)]
    pub region_radius: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub format: String,
    #[serde(default)]
    pub name: String,
    /// Scene file; exclusive with `blockgrid`.
    #[serde(default)]
    pub scene: Option<PathBuf>,
    #[serde(default)]
    pub skeleton: Option<PathBuf>,
    /// Block-grid file providing both scene and skeleton.
    #[serde(default)]
    pub blockgrid: Option<PathBuf>,
    pub planners: Vec<PlannerKind>,
    pub seeds: Vec<u64>,
    /// Per-run wall-clock cap in seconds.
    pub cap_s: f64,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default)]
    pub config: PlannerConfig,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub perturb: Option<PerturbSettings>,
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("results")
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Invalid(m));
        if self.format != EXPERIMENT_FORMAT {
            return bad(format!(
                "unsupported format {:?}, expected {EXPERIMENT_FORMAT:?}",
                self.format
            ));
        }
        if self.seeds.is_empty() {
            return bad("seed list is empty".into());
        }
        let unique: BTreeSet<_> = self.seeds.iter().collect();
        if unique.len() != self.seeds.len() {
            return bad("seed list contains duplicates".into());
        }
        if self.planners.is_empty() {
            return bad("planner list is empty".into());
        }
        let unique: BTreeSet<_> = self.planners.iter().collect();
        if unique.len() != self.planners.len() {
            return bad("planner list contains duplicates".into());
        }
        if !(self.cap_s > 0.0 && self.cap_s.is_finite()) {
            return bad("cap_s must be positive".into());
        }
        match (&self.scene, &self.blockgrid) {
            (Some(_), Some(_)) => return bad("give either scene or blockgrid, not both".into()),
            (None, None) => return bad("one of scene or blockgrid is required".into()),
            (None, Some(_)) if self.skeleton.is_some() => return bad("a blockgrid supplies its own skeleton".into()),
            _ => {}
        }
        if let Some(p) = &self.perturb {
            if p.d_list.iter().any(|d| !(*d >= 0.0 && d.is_finite())) {
                return bad("perturbation distances must be non-negative".into());
            }
            if p.region_radius.is_some_and(|r| !(r > 0.0)) {
                return bad("region_radius must be positive".into());
            }
        }
        self.config.validate().map_err(|e| CliError::Invalid(e.to_string()))
    }
}

/// A validated experiment with its inputs loaded.
#[derive(Clone, Debug)]
pub struct Experiment {
    pub spec: ExperimentSpec,
    pub scene: Scene,
    pub skeleton: Option<WorkspaceSkeleton>,
    /// Output directory resolved against the experiment file.
    pub output_dir: PathBuf,
}

fn resolve(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

impl Experiment {
    pub fn load(path: &Path) -> Result<Experiment, CliError> {
        let text = fs::read_to_string(path).map_err(|source| SceneError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let spec: ExperimentSpec = serde_json::from_str(&text).map_err(|e| SceneError::Parse {
            path: path.to_path_buf(),
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        let base = path.parent().unwrap_or(Path::new("."));
        Experiment::from_spec(spec, base)
    }

    /// Loads the inputs named by `spec`, resolving relative paths against
    /// `base`.
    pub fn from_spec(spec: ExperimentSpec, base: &Path) -> Result<Experiment, CliError> {
        spec.validate()?;
        let (scene, skeleton) = match (&spec.scene, &spec.blockgrid) {
            (Some(scene), _) => {
                let scene = load_scene(&resolve(base, scene))?;
                let skeleton = match &spec.skeleton {
                    Some(s) => Some(load_guidance(&resolve(base, s), &scene)?),
                    None => None,
                };
                (scene, skeleton)
            }
            (None, Some(grid)) => {
                let (scene, skeleton) = load_blockgrid(&resolve(base, grid))?.compose()?;
                (scene, Some(skeleton))
            }
            (None, None) => unreachable!("validated above"),
        };
        let needs = spec.planners.iter().find(|k| k.needs_skeleton());
        if let (Some(k), None) = (needs, &skeleton) {
            return Err(CliError::Invalid(format!("planner {k} requires a skeleton")));
        }
        if spec.perturb.is_some() && skeleton.is_none() {
            return Err(CliError::Invalid("perturbation needs a skeleton".into()));
        }
        let output_dir = resolve(base, &spec.output_dir);
        Ok(Experiment {
            spec,
            scene,
            skeleton,
            output_dir,
        })
    }
}

/// Loads a skeleton for `scene`, computing clearance annotations from the
/// scene's workspace when the file carries none.
pub fn load_guidance(path: &Path, scene: &Scene) -> Result<WorkspaceSkeleton, CliError> {
    let skeleton = load_skeleton(path, scene.dim())?;
    Ok(if skeleton.is_annotated() {
        skeleton
    } else {
        skeleton.annotate_clearance(&scene.env.workspace)
    })
}
