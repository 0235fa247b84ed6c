// SPDX-License-Identifier: Apache-2.0

//! Skeleton-guided sampling-based motion planning.
//!
//! The crate provides three single-query tree planners over a shared
//! configuration-space layer:
//!
//! * [`planners::rrt_plan`]: uniform-sampling RRT,
//! * [`planners::drrrt_plan`]: dynamic-region RRT that walks sampling regions
//!   along a workspace skeleton one intermediate at a time,
//! * [`planners::hasrrt_plan`]: hierarchical annotated-skeleton RRT, which
//!   jumps regions to the end of their skeleton edge and retracts them on
//!   failed extensions.
//!
//! Skeletons can be loaded from JSON, composed together with their
//! environment from block grids, pruned to a query, and perturbed.

pub mod cspace;
pub mod error;
pub mod geometry;
pub mod planners;
pub mod scene;
pub mod skeleton;
pub mod stats;

pub use cspace::{Configuration, Environment, Query, RobotModel, RotationFreedom, ValidityCounter};
pub use error::{GeometryError, PlanError, SceneError, SkeletonError};
pub use geometry::{Aabb, ConvexShape, Dim, Placement, Point, Rotation, Workspace};
pub use planners::{
    drrrt_plan, hasrrt_plan, rrt_plan, PlanResult, PlannerConfig, PlannerKind, RunRecord, SuccessRule, TreeRoadmap,
};
pub use skeleton::{DirectedQuerySkeleton, PerturbationSpec, WorkspaceSkeleton};
