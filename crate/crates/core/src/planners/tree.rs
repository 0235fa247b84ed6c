// SPDX-License-Identifier: Apache-2.0

use crate::cspace::{nearest_neighbor, Configuration, Environment};
use crate::error::PlanError;

/// A rooted tree of configurations. Vertex 0 is the root; every other vertex
/// stores its parent and the cost of the edge to it.
#[derive(Clone, Debug, PartialEq)]
pub struct TreeRoadmap {
    vertices: Vec<Configuration>,
    parents: Vec<Option<(usize, f64)>>,
}

impl TreeRoadmap {
    pub fn new(root: Configuration) -> Self {
        TreeRoadmap {
            vertices: vec![root],
            parents: vec![None],
        }
    }

    pub fn root(&self) -> usize {
        0
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn vertex(&self, id: usize) -> Option<&Configuration> {
        self.vertices.get(id)
    }

    pub fn vertices(&self) -> &[Configuration] {
        &self.vertices
    }

    pub fn parent(&self, id: usize) -> Option<(usize, f64)> {
        self.parents.get(id).copied().flatten()
    }

    /// Iterates `(child, parent)` pairs.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.parents
            .iter()
            .enumerate()
            .filter_map(|(c, p)| p.map(|(p, _)| (c, p)))
    }

    pub fn add(&mut self, q: Configuration, parent: usize, cost: f64) -> usize {
        assert!(parent < self.vertices.len(), "parent {parent} not in tree");
        self.vertices.push(q);
        self.parents.push(Some((parent, cost)));
        self.vertices.len() - 1
    }

    pub fn nearest(&self, env: &Environment, q: &Configuration) -> usize {
        nearest_neighbor(env, &self.vertices, q).unwrap_or(0)
    }

    /// Vertex ids from the root to `goal`.
    pub fn path_to(&self, goal: usize) -> Result<Vec<usize>, PlanError> {
        if goal >= self.vertices.len() {
            return Err(PlanError::UnknownVertex(goal));
        }
        let mut ids = vec![goal];
        let mut cur = goal;
        while let Some((p, _)) = self.parents[cur] {
            ids.push(p);
            cur = p;
        }
        ids.reverse();
        Ok(ids)
    }

    /// Configurations from the root to `goal`.
    pub fn extract_path(&self, goal: usize) -> Result<Vec<Configuration>, PlanError> {
        Ok(self.path_to(goal)?.into_iter().map(|i| self.vertices[i]).collect())
    }

    /// Sum of stored edge costs from the root to `goal`.
    pub fn cost_to(&self, goal: usize) -> Result<f64, PlanError> {
        Ok(self
            .path_to(goal)?
            .iter()
            .filter_map(|&i| self.parents[i].map(|(_, c)| c))
            .sum())
    }
}

/// Total length of a configuration sequence under the environment metric.
pub fn path_cost(env: &Environment, path: &[Configuration]) -> f64 {
    path.windows(2).map(|w| env.distance(&w[0], &w[1])).sum()
}
