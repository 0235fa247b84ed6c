// SPDX-License-Identifier: Apache-2.0

//! Benchmark harness behind the `hasrrt` binary: experiment files, the run
//! matrix, CSV/summary output and SVG rendering.

pub mod commands;
pub mod experiment;
pub mod render;
pub mod runner;

use thiserror::Error;

use hasrrt_core::{PlanError, SceneError, SkeletonError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Scene(#[from] SceneError),
    #[error(transparent)]
    Plan(#[from] PlanError),
    #[error(transparent)]
    Skeleton(#[from] SkeletonError),
    #[error("{path}: {source}")]
    Io {
        path: std::path::PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const RUN_FAILED: i32 = 1;
    pub const USAGE: i32 = 2;
}
