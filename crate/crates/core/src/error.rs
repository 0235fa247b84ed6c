// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use thiserror::Error;

use crate::geometry::Dim;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: Dim, found: Dim },
    #[error("unsupported dimension {0}, expected 2 or 3")]
    BadDimension(usize),
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("shape is degenerate (zero area or volume)")]
    Degenerate,
    #[error("shape vertices are not in convex position")]
    NotConvexPosition,
    #[error("quaternion has zero or non-finite norm")]
    BadQuaternion,
    #[error("point lies outside the environment boundary")]
    OutsideBoundary,
}

#[derive(Debug, Error)]
pub enum SkeletonError {
    #[error("edge {edge}: {reason}")]
    InvalidEdge { edge: usize, reason: String },
    #[error("vertex {vertex}: {reason}")]
    InvalidVertex { vertex: u32, reason: String },
    #[error("skeleton has no vertices")]
    Empty,
    #[error("no skeleton guidance: source vertex {from} and sink vertex {to} are disconnected")]
    NoGuidance { from: u32, to: u32 },
    #[error("blocks {a:?} and {b:?} disagree on their shared face")]
    FaceMismatch { a: Vec<i64>, b: Vec<i64> },
    #[error("duplicate block at {0:?}")]
    DuplicateBlock(Vec<i64>),
    #[error("no traversable opening: every block is closed")]
    NoOpening,
    #[error("block grid: {0}")]
    BadGrid(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Error)]
pub enum SceneError {
    #[error("{path}: line {line}, column {column}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("unsupported format tag {found:?}, expected {expected:?}")]
    Format { expected: String, found: String },
    #[error("invalid scene: {0}")]
    Invalid(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Skeleton(#[from] SkeletonError),
}

#[derive(Debug, Error)]
pub enum PlanError {
    #[error("query {which} configuration is invalid in the environment")]
    InvalidEndpoint { which: &'static str },
    #[error("configuration dimension does not match the robot model")]
    ConfigurationMismatch,
    #[error("planner {0} requires a skeleton")]
    SkeletonRequired(&'static str),
    #[error("skeleton is empty")]
    EmptySkeleton,
    #[error("invalid planner configuration: {0}")]
    BadConfig(String),
    #[error("vertex {0} is not in the tree")]
    UnknownVertex(usize),
}
