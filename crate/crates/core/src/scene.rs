// SPDX-License-Identifier: Apache-2.0

//! JSON file formats for scenes, skeletons, block grids and plan reports.
//!
//! Every file carries a `format` tag; parse errors report line and column.
//! Configurations are flat coordinate lists: the position, then the planar
//! angle (one value) or the unit quaternion `w, x, y, z` (four values).

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::cspace::{Configuration, Environment, Query, RobotModel, RotationFreedom};
use crate::error::SceneError;
use crate::geometry::{Aabb, ConvexShape, Dim, Point, Rotation, ShapeKind, Workspace};
use crate::planners::{PlanResult, PlannerConfig, RunRecord};
use crate::skeleton::{compose_blocks, BlockGrid, BlockSpec, SkeletonEdge, SkeletonVertex, WorkspaceSkeleton};

pub const SCENE_FORMAT: &str = "hasrrt-scene/1";
pub const SKELETON_FORMAT: &str = "hasrrt-skeleton/1";
pub const BLOCKGRID_FORMAT: &str = "hasrrt-blockgrid/1";
pub const PLAN_FORMAT: &str = "hasrrt-plan/1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ShapeSpec {
    Box { min: Vec<f64>, max: Vec<f64> },
    Convex { vertices: Vec<Vec<f64>> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsSpec {
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RotationSpec {
    None,
    Planar,
    Spatial,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RobotSpec {
    pub rotation: RotationSpec,
    pub parts: Vec<ShapeSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuerySpec {
    pub start: Vec<f64>,
    pub goal: Vec<f64>,
    pub goal_tolerance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneFile {
    pub format: String,
    #[serde(default)]
    pub name: String,
    pub dimension: usize,
    pub boundary: BoundsSpec,
    #[serde(default)]
    pub obstacles: Vec<ShapeSpec>,
    pub robot: RobotSpec,
    pub query: QuerySpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexSpec {
    pub id: u32,
    pub position: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub clearance: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeSpec {
    pub source: u32,
    pub target: u32,
    /// Omitted intermediates mean a straight edge at the file's spacing.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intermediates: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_clearance: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SkeletonFile {
    pub format: String,
    pub dimension: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spacing: Option<f64>,
    pub vertices: Vec<VertexSpec>,
    #[serde(default)]
    pub edges: Vec<EdgeSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockGridFile {
    pub format: String,
    #[serde(default)]
    pub name: String,
    pub dimension: usize,
    pub block_side: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_thickness: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub opening_width: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spacing: Option<f64>,
    pub blocks: Vec<BlockSpec>,
    pub robot: RobotSpec,
    pub query: QuerySpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution: Option<f64>,
}

/// A loaded environment with its query.
#[derive(Clone, Debug, PartialEq)]
pub struct Scene {
    pub name: String,
    pub env: Environment,
    pub query: Query,
    pub resolution: Option<f64>,
}

impl Scene {
    pub fn dim(&self) -> Dim {
        self.env.dim()
    }
}

fn read(path: &Path) -> Result<String, SceneError> {
    fs::read_to_string(path).map_err(|source| SceneError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<(), SceneError> {
    fs::write(path, text).map_err(|source| SceneError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn parse<T: DeserializeOwned>(text: &str, path: &Path) -> Result<T, SceneError> {
    serde_json::from_str(text).map_err(|e| SceneError::Parse {
        path: path.to_path_buf(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("file types serialize");
    s.push('\n');
    s
}

fn check_format(found: &str, expected: &str) -> Result<(), SceneError> {
    if found == expected {
        Ok(())
    } else {
        Err(SceneError::Format {
            expected: expected.into(),
            found: found.into(),
        })
    }
}

fn point(dim: Dim, coords: &[f64], what: &str) -> Result<Point, SceneError> {
    if coords.len() != dim.count() {
        return Err(SceneError::Invalid(format!(
            "{what} has {} coordinates, expected {}",
            coords.len(),
            dim.count()
        )));
    }
    Ok(Point::from_slice(coords)?)
}

fn coords(dim: Dim, p: &Point) -> Vec<f64> {
    p.coords(dim).to_vec()
}

impl ShapeSpec {
    pub fn build(&self, dim: Dim) -> Result<ConvexShape, SceneError> {
        Ok(match self {
            ShapeSpec::Box { min, max } => {
                ConvexShape::aabb(dim, point(dim, min, "box min")?, point(dim, max, "box max")?)?
            }
            ShapeSpec::Convex { vertices } => {
                let pts = vertices
                    .iter()
                    .map(|v| point(dim, v, "convex vertex"))
                    .collect::<Result<Vec<_>, _>>()?;
                ConvexShape::convex(dim, pts)?
            }
        })
    }

    pub fn describe(shape: &ConvexShape) -> ShapeSpec {
        let dim = shape.dim();
        match shape.kind() {
            ShapeKind::Box => ShapeSpec::Box {
                min: coords(dim, &shape.bounds().min),
                max: coords(dim, &shape.bounds().max),
            },
            ShapeKind::Convex => ShapeSpec::Convex {
                vertices: shape.vertices().iter().map(|p| coords(dim, p)).collect(),
            },
        }
    }
}

impl RobotSpec {
    pub fn build(&self, dim: Dim) -> Result<RobotModel, SceneError> {
        let parts = self.parts.iter().map(|p| p.build(dim)).collect::<Result<Vec<_>, _>>()?;
        let freedom = match self.rotation {
            RotationSpec::None => RotationFreedom::None,
            RotationSpec::Planar => RotationFreedom::Planar,
            RotationSpec::Spatial => RotationFreedom::Spatial,
        };
        Ok(RobotModel::new(dim, parts, freedom)?)
    }

    pub fn describe(robot: &RobotModel) -> RobotSpec {
        RobotSpec {
            rotation: match robot.freedom() {
                RotationFreedom::None => RotationSpec::None,
                RotationFreedom::Planar => RotationSpec::Planar,
                RotationFreedom::Spatial => RotationSpec::Spatial,
            },
            parts: robot.parts().iter().map(ShapeSpec::describe).collect(),
        }
    }
}

/// Reads a flat coordinate list as a configuration of `robot`.
pub fn configuration_from_coords(robot: &RobotModel, c: &[f64]) -> Result<Configuration, SceneError> {
    let d = robot.dim().count();
    let extra = match robot.freedom() {
        RotationFreedom::None => 0,
        RotationFreedom::Planar => 1,
        RotationFreedom::Spatial => 4,
    };
    if c.len() != d + extra {
        return Err(SceneError::Invalid(format!(
            "configuration has {} values, expected {}",
            c.len(),
            d + extra
        )));
    }
    let p = Point::from_slice(&c[..d])?;
    let rotation = match robot.freedom() {
        RotationFreedom::None => Rotation::Identity,
        RotationFreedom::Planar if c[d].is_finite() => Rotation::Planar(c[d]),
        RotationFreedom::Planar => return Err(SceneError::Invalid("non-finite angle".into())),
        RotationFreedom::Spatial => Rotation::from_quaternion(c[d], c[d + 1], c[d + 2], c[d + 3])?,
    };
    Ok(Configuration::new(p, rotation))
}

/// Flattens a configuration into the file representation.
pub fn configuration_coords(dim: Dim, q: &Configuration) -> Vec<f64> {
    let mut out = coords(dim, &q.position);
    match q.rotation {
        Rotation::Identity => {}
        Rotation::Planar(t) => out.push(t),
        Rotation::Spatial(u) => out.extend([u.w, u.i, u.j, u.k]),
    }
    out
}

fn build_query(robot: &RobotModel, q: &QuerySpec) -> Result<Query, SceneError> {
    if !(q.goal_tolerance >= 0.0 && q.goal_tolerance.is_finite()) {
        return Err(SceneError::Invalid("goal_tolerance must be non-negative".into()));
    }
    Ok(Query {
        start: configuration_from_coords(robot, &q.start)?,
        goal: configuration_from_coords(robot, &q.goal)?,
        goal_tolerance: q.goal_tolerance,
    })
}

fn check_resolution(r: Option<f64>) -> Result<Option<f64>, SceneError> {
    match r {
        Some(r) if !(r > 0.0 && r.is_finite()) => Err(SceneError::Invalid("resolution must be positive".into())),
        r => Ok(r),
    }
}

impl SceneFile {
    pub fn build(&self) -> Result<Scene, SceneError> {
        check_format(&self.format, SCENE_FORMAT)?;
        let dim = Dim::from_count(self.dimension)?;
        let boundary = Aabb::new(
            point(dim, &self.boundary.min, "boundary min")?,
            point(dim, &self.boundary.max, "boundary max")?,
        );
        let obstacles = self
            .obstacles
            .iter()
            .map(|o| o.build(dim))
            .collect::<Result<Vec<_>, _>>()?;
        let workspace = Workspace::new(dim, boundary, obstacles)?;
        let robot = self.robot.build(dim)?;
        let query = build_query(&robot, &self.query)?;
        Ok(Scene {
            name: self.name.clone(),
            env: Environment::new(workspace, robot)?,
            query,
            resolution: check_resolution(self.resolution)?,
        })
    }

    pub fn describe(scene: &Scene) -> SceneFile {
        let dim = scene.dim();
        let ws = &scene.env.workspace;
        SceneFile {
            format: SCENE_FORMAT.into(),
            name: scene.name.clone(),
            dimension: dim.count(),
            boundary: BoundsSpec {
                min: coords(dim, &ws.boundary().min),
                max: coords(dim, &ws.boundary().max),
            },
            obstacles: ws.obstacles().iter().map(ShapeSpec::describe).collect(),
            robot: RobotSpec::describe(&scene.env.robot),
            query: QuerySpec {
                start: configuration_coords(dim, &scene.query.start),
                goal: configuration_coords(dim, &scene.query.goal),
                goal_tolerance: scene.query.goal_tolerance,
            },
            resolution: scene.resolution,
        }
    }
}

impl SkeletonFile {
    pub fn build(&self) -> Result<WorkspaceSkeleton, SceneError> {
        check_format(&self.format, SKELETON_FORMAT)?;
        let dim = Dim::from_count(self.dimension)?;
        let mut s = WorkspaceSkeleton::new(dim);
        s.set_spacing(self.spacing);
        for v in &self.vertices {
            if s.vertex(v.id).is_some() {
                return Err(SceneError::Invalid(format!("duplicate skeleton vertex id {}", v.id)));
            }
            s.insert(
                v.id,
                SkeletonVertex {
                    position: point(dim, &v.position, "skeleton vertex")?,
                    clearance: v.clearance,
                },
            );
        }
        for (i, e) in self.edges.iter().enumerate() {
            match &e.intermediates {
                Some(list) => {
                    let intermediates = list
                        .iter()
                        .map(|p| point(dim, p, "edge intermediate"))
                        .collect::<Result<Vec<_>, _>>()?;
                    s.push_edge(SkeletonEdge {
                        source: e.source,
                        target: e.target,
                        intermediates,
                        min_clearance: e.min_clearance,
                    });
                }
                None => {
                    s.add_straight_edge(e.source, e.target)?;
                    if e.min_clearance.is_some() {
                        return Err(SceneError::Invalid(format!(
                            "edge {i}: min_clearance given without intermediates"
                        )));
                    }
                }
            }
        }
        s.validate()?;
        Ok(s)
    }

    pub fn describe(s: &WorkspaceSkeleton) -> SkeletonFile {
        let dim = s.dim();
        SkeletonFile {
            format: SKELETON_FORMAT.into(),
            dimension: dim.count(),
            spacing: s.spacing(),
            vertices: s
                .vertices()
                .iter()
                .map(|(&id, v)| VertexSpec {
                    id,
                    position: coords(dim, &v.position),
                    clearance: v.clearance,
                })
                .collect(),
            edges: s
                .edges()
                .iter()
                .map(|e| EdgeSpec {
                    source: e.source,
                    target: e.target,
                    intermediates: Some(e.intermediates.iter().map(|p| coords(dim, p)).collect()),
                    min_clearance: e.min_clearance,
                })
                .collect(),
        }
    }
}

impl BlockGridFile {
    pub fn grid(&self) -> Result<BlockGrid, SceneError> {
        check_format(&self.format, BLOCKGRID_FORMAT)?;
        Ok(BlockGrid {
            dim: Dim::from_count(self.dimension)?,
            block_side: self.block_side,
            wall_thickness: self.wall_thickness,
            opening_width: self.opening_width,
            spacing: self.spacing,
            blocks: self.blocks.clone(),
        })
    }

    /// Composes the environment and skeleton described by the file.
    pub fn compose(&self) -> Result<(Scene, WorkspaceSkeleton), SceneError> {
        let grid = self.grid()?;
        let (workspace, skeleton) = compose_blocks(&grid)?;
        let robot = self.robot.build(grid.dim)?;
        let query = build_query(&robot, &self.query)?;
        let scene = Scene {
            name: self.name.clone(),
            env: Environment::new(workspace, robot)?,
            query,
            resolution: check_resolution(self.resolution)?,
        };
        Ok((scene, skeleton))
    }
}

pub fn parse_scene(text: &str, path: &Path) -> Result<Scene, SceneError> {
    parse::<SceneFile>(text, path)?.build()
}

pub fn load_scene(path: &Path) -> Result<Scene, SceneError> {
    parse_scene(&read(path)?, path)
}

pub fn scene_to_json(scene: &Scene) -> String {
    to_json(&SceneFile::describe(scene))
}

pub fn save_scene(path: &Path, scene: &Scene) -> Result<(), SceneError> {
    write(path, &scene_to_json(scene))
}

pub fn parse_skeleton(text: &str, path: &Path) -> Result<WorkspaceSkeleton, SceneError> {
    parse::<SkeletonFile>(text, path)?.build()
}

/// Loads a skeleton and checks it against the scene's dimension.
pub fn load_skeleton(path: &Path, dim: Dim) -> Result<WorkspaceSkeleton, SceneError> {
    let s = parse_skeleton(&read(path)?, path)?;
    if s.dim() != dim {
        return Err(SceneError::Invalid(format!(
            "skeleton is {} but the scene is {}",
            s.dim(),
            dim
        )));
    }
    Ok(s)
}

pub fn skeleton_to_json(s: &WorkspaceSkeleton) -> String {
    to_json(&SkeletonFile::describe(s))
}

pub fn save_skeleton(path: &Path, s: &WorkspaceSkeleton) -> Result<(), SceneError> {
    write(path, &skeleton_to_json(s))
}

pub fn load_blockgrid(path: &Path) -> Result<BlockGridFile, SceneError> {
    let f: BlockGridFile = parse(&read(path)?, path)?;
    check_format(&f.format, BLOCKGRID_FORMAT)?;
    Ok(f)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlanStatus {
    Success,
    Failure,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TreeReport {
    pub vertices: Vec<Vec<f64>>,
    /// Parent index per vertex; `None` for the root.
    pub parents: Vec<Option<usize>>,
}

/// Serializable summary of a [`PlanResult`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlanReport {
    pub format: String,
    pub status: PlanStatus,
    pub planner: String,
    pub seed: u64,
    pub config: PlannerConfig,
    pub record: RunRecord,
    pub path: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tree: Option<TreeReport>,
}

impl PlanReport {
    pub fn new(result: &PlanResult, dim: Dim) -> PlanReport {
        let flat = |q: &Configuration| configuration_coords(dim, q);
        PlanReport {
            format: PLAN_FORMAT.into(),
            status: if result.success() {
                PlanStatus::Success
            } else {
                PlanStatus::Failure
            },
            planner: result.record.planner.name().into(),
            seed: result.record.seed,
            config: result.config.clone(),
            record: result.record.clone(),
            path: result.path.iter().map(flat).collect(),
            tree: Some(TreeReport {
                vertices: result.tree.vertices().iter().map(flat).collect(),
                parents: (0..result.tree.len())
                    .map(|i| result.tree.parent(i).map(|(p, _)| p))
                    .collect(),
            }),
        }
    }

    /// The same report without the (potentially large) tree.
    pub fn without_tree(&self) -> PlanReport {
        PlanReport {
            tree: None,
            ..self.clone()
        }
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }
}

pub fn load_plan_report(path: &Path) -> Result<PlanReport, SceneError> {
    let r: PlanReport = parse(&read(path)?, path)?;
    check_format(&r.format, PLAN_FORMAT)?;
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SCENE: &str = r#"{
  "format": "hasrrt-scene/1",
  "name": "t",
  "dimension": 2,
  "boundary": {"min": [0, 0], "max": [10, 10]},
  "obstacles": [
    {"box": {"min": [4, 0], "max": [6, 4]}},
    {"convex": {"vertices": [[1, 8], [2, 8], [1.5, 9]]}}
  ],
  "robot": {"rotation": "planar", "parts": [{"box": {"min": [-0.2, -0.1], "max": [0.2, 0.1]}}]},
  "query": {"start": [1, 1, 0], "goal": [9, 1, 1.5], "goal_tolerance": 0.5}
}"#;

    #[test]
    fn scene_round_trips() {
        let p = Path::new("t.json");
        let scene = parse_scene(SCENE, p).unwrap();
        assert_eq!(scene.env.workspace.obstacles().len(), 2);
        assert_eq!(scene.query.goal, Configuration::planar(9.0, 1.0, 1.5));
        let again = parse_scene(&scene_to_json(&scene), p).unwrap();
        assert_eq!(again, scene);
    }

    #[test]
    fn parse_errors_carry_position() {
        let broken = SCENE.replace("\"dimension\": 2,", "\"dimension\": 2");
        match parse_scene(&broken, Path::new("x.json")) {
            Err(SceneError::Parse { line, column, .. }) => {
                assert_eq!(line, 5);
                assert!(column > 0);
            }
            other => panic!("unexpected {other:?}"),
        }
        let wrong = SCENE.replace("hasrrt-scene/1", "hasrrt-scene/9");
        assert!(matches!(
            parse_scene(&wrong, Path::new("x")),
            Err(SceneError::Format { .. })
        ));
        let short = SCENE.replace("[9, 1, 1.5]", "[9, 1]");
        assert!(matches!(
            parse_scene(&short, Path::new("x")),
            Err(SceneError::Invalid(_))
        ));
    }

    #[test]
    fn skeleton_round_trips_and_names_bad_edges() {
        let text = r#"{"format": "hasrrt-skeleton/1", "dimension": 2, "spacing": 0.5,
            "vertices": [{"id": 0, "position": [1, 1]}, {"id": 4, "position": [3, 1], "clearance": 0.7}],
            "edges": [{"source": 0, "target": 4}]}"#;
        let s = parse_skeleton(text, Path::new("s")).unwrap();
        assert_eq!(s.edges()[0].intermediates.len(), 5);
        assert_eq!(s.vertex(4).unwrap().clearance, Some(0.7));
        assert_eq!(parse_skeleton(&skeleton_to_json(&s), Path::new("s")).unwrap(), s);

        let bad = text.replace("\"target\": 4", "\"target\": 9");
        let err = parse_skeleton(&bad, Path::new("s")).unwrap_err().to_string();
        assert!(err.contains("edge 0"), "{err}");
    }

    #[test]
    fn spatial_configurations_use_quaternions() {
        let robot = RobotSpec {
            rotation: RotationSpec::Spatial,
            parts: vec![ShapeSpec::Box {
                min: vec![-0.1; 3],
                max: vec![0.1; 3],
            }],
        }
        .build(Dim::Three)
        .unwrap();
        let q = configuration_from_coords(&robot, &[1.0, 2.0, 3.0, 0.0, 0.0, 0.0, 2.0]).unwrap();
        let c = configuration_coords(Dim::Three, &q);
        assert_eq!(c, vec![1.0, 2.0, 3.0, 0.0, 0.0, 0.0, 1.0]);
        assert!(configuration_from_coords(&robot, &[1.0, 2.0, 3.0, 0.0, 0.0, 0.0, 0.0]).is_err());
    }
}
