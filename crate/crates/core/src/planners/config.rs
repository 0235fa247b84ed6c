// SPDX-License-Identifier: Apache-2.0

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::PlanError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlannerKind {
    Rrt,
    Drrrt,
    Hasrrt,
}

impl PlannerKind {
    pub const ALL: [PlannerKind; 3] = [PlannerKind::Rrt, PlannerKind::Drrrt, PlannerKind::Hasrrt];

    pub fn name(self) -> &'static str {
        match self {
            PlannerKind::Rrt => "rrt",
            PlannerKind::Drrrt => "drrrt",
            PlannerKind::Hasrrt => "hasrrt",
        }
    }

    pub fn needs_skeleton(self) -> bool {
        self != PlannerKind::Rrt
    }
}

impl fmt::Display for PlannerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PlannerKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PlannerKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown planner {s:?}, expected one of rrt, drrrt, hasrrt"))
    }
}

/// What counts as a successful region extension.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SuccessRule {
    /// Any extension that adds a vertex, wherever it lands.
    #[default]
    Extended,
    /// The new vertex must also lie inside the sampled region's ball.
    Reached,
}

/// Planner hyperparameters. Every field has a default, so JSON overrides can
/// name only what they change.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlannerConfig {
    /// Share of selection mass spread uniformly over regions and the
    /// environment, in `[0, 1]`.
    pub explore_bias: f64,
    /// Longest extension, in configuration-space distance.
    pub max_step: f64,
    /// Extensions that advance less than this count as failed.
    pub min_step: f64,
    pub success_rule: SuccessRule,
    pub max_radius: f64,
    /// Floor applied after the clearance cap so regions never collapse.
    pub min_radius: f64,
    /// Edge-check spacing; `None` uses the environment default.
    pub resolution: Option<f64>,
    /// Goal connection radius; `None` uses the query's tolerance.
    pub goal_tolerance: Option<f64>,
    pub max_iterations: u64,
    /// Wall-clock cap in seconds.
    pub time_cap: Option<f64>,
    pub seed: u64,
    /// Extension attempts spent growing the tree into the first region.
    pub init_attempts: u32,
}

impl Default for PlannerConfig {
    fn default() -> Self {
        PlannerConfig {
            explore_bias: 0.1,
            max_step: 1.0,
            min_step: 0.0,
            success_rule: SuccessRule::Extended,
            max_radius: 1.0,
            min_radius: 0.05,
            resolution: None,
            goal_tolerance: None,
            max_iterations: 200_000,
            time_cap: Some(60.0),
            seed: 0,
            init_attempts: 100,
        }
    }
}

impl PlannerConfig {
    pub fn validate(&self) -> Result<(), PlanError> {
        let bad = |m: &str| Err(PlanError::BadConfig(m.to_string()));
        if !(0.0..=1.0).contains(&self.explore_bias) {
            return bad("explore_bias must lie in [0, 1]");
        }
        if !(self.max_step > 0.0 && self.max_step.is_finite()) {
            return bad("max_step must be positive");
        }
        if !(self.min_step >= 0.0 && self.min_step < self.max_step) {
            return bad("min_step must lie in [0, max_step)");
        }
        if !(self.min_radius > 0.0 && self.min_radius <= self.max_radius && self.max_radius.is_finite()) {
            return bad("radii must satisfy 0 < min_radius <= max_radius");
        }
        if self.resolution.is_some_and(|r| !(r > 0.0 && r.is_finite())) {
            return bad("resolution must be positive");
        }
        if self.goal_tolerance.is_some_and(|g| !(g >= 0.0 && g.is_finite())) {
            return bad("goal_tolerance must be non-negative");
        }
        if self.time_cap.is_some_and(|t| !(t > 0.0)) {
            return bad("time_cap must be positive");
        }
        if self.max_iterations == 0 {
            return bad("max_iterations must be positive");
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for k in PlannerKind::ALL {
            assert_eq!(k.name().parse::<PlannerKind>().unwrap(), k);
        }
        assert!("prm".parse::<PlannerKind>().is_err());
    }

    #[test]
    fn partial_json_overrides() {
        let c: PlannerConfig = serde_json::from_str(r#"{"max_step": 2.5, "explore_bias": 0.3}"#).unwrap();
        assert_eq!(c.max_step, 2.5);
        assert_eq!(c.explore_bias, 0.3);
        assert_eq!(c.min_radius, PlannerConfig::default().min_radius);
        assert!(serde_json::from_str::<PlannerConfig>(r#"{"bias": 1}"#).is_err());
    }

    #[test]
    fn rejects_out_of_range() {
        let c = PlannerConfig {
            explore_bias: 1.5,
            ..PlannerConfig::default()
        };
        assert!(c.validate().is_err());
        let c = PlannerConfig {
            min_radius: 2.0,
            ..PlannerConfig::default()
        };
        assert!(c.validate().is_err());
        assert!(PlannerConfig::default().validate().is_ok());
    }
}
