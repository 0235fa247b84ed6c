// SPDX-License-Identifier: Apache-2.0

//! Sampling regions anchored to a directed query skeleton, their weights,
//! the selection law, and the advance/retract moves.

use rand::Rng;

use crate::geometry::Point;
use crate::skeleton::{DirectedQuerySkeleton, VertexId};

/// Where a region sits on the directed skeleton.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Anchor {
    Vertex(VertexId),
    Edge { edge: usize, index: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct SamplingRegion {
    pub id: u64,
    pub anchor: Anchor,
    pub center: Point,
    pub radius: f64,
    pub successes: u64,
    pub failures: u64,
}

impl SamplingRegion {
    /// Fraction of successful extensions, or 1.0 before any attempt.
    pub fn weight(&self) -> f64 {
        let total = self.successes + self.failures;
        if total == 0 {
            1.0
        } else {
            self.successes as f64 / total as f64
        }
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.center.distance(p) <= self.radius
    }

    /// Moves the centre halfway toward the last tree progress point
    /// (`q_new` when present, else `q_near`) and returns the negated
    /// displacement. The anchor stays where it is.
    pub fn retract(&mut self, near: &Point, new: Option<&Point>) -> f64 {
        let prev = new.unwrap_or(near);
        let old = self.center;
        self.center = prev.midpoint(&old);
        -self.center.distance(&old)
    }
}

/// How far a successful region moves along its edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AdvanceMode {
    /// Jump straight to the edge's last intermediate.
    EdgeEnd,
    /// Step one intermediate at a time.
    SingleStep,
}

/// Radius limits shared by all regions of one run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadiusRule {
    pub max: f64,
    pub min: f64,
}

impl RadiusRule {
    /// `min(max, clearance)` floored at `min`; unannotated anchors get `max`.
    pub fn radius(&self, skel: &DirectedQuerySkeleton, anchor: Anchor) -> f64 {
        let clearance = match anchor {
            Anchor::Vertex(v) => skel.vertex(v).clearance,
            Anchor::Edge { edge, index } => {
                let e = skel.edge(edge);
                if index == 0 {
                    skel.vertex(e.source).clearance
                } else if index == e.last_index() {
                    skel.vertex(e.target).clearance
                } else {
                    e.min_clearance
                }
            }
        };
        clearance.map_or(self.max, |c| c.min(self.max)).max(self.min)
    }
}

pub fn anchor_point(skel: &DirectedQuerySkeleton, anchor: Anchor) -> Point {
    match anchor {
        Anchor::Vertex(v) => skel.vertex(v).position,
        Anchor::Edge { edge, index } => skel.edge(edge).intermediates[index],
    }
}

/// The live region set, the regions retired so far, and the id counter.
#[derive(Clone, Debug, PartialEq)]
pub struct RegionSet {
    regions: Vec<SamplingRegion>,
    retired: Vec<SamplingRegion>,
    next_id: u64,
    rule: RadiusRule,
}

impl RegionSet {
    pub fn new(rule: RadiusRule) -> Self {
        RegionSet {
            regions: Vec::new(),
            retired: Vec::new(),
            next_id: 0,
            rule,
        }
    }

    pub fn regions(&self) -> &[SamplingRegion] {
        &self.regions
    }

    /// Regions removed by splits, in retirement order.
    pub fn retired(&self) -> &[SamplingRegion] {
        &self.retired
    }

    /// Every region ever created, live or retired, ordered by id.
    pub fn into_history(self) -> Vec<SamplingRegion> {
        let mut all = self.retired;
        all.extend(self.regions);
        all.sort_by_key(|r| r.id);
        all
    }

    pub fn get(&self, i: usize) -> &SamplingRegion {
        &self.regions[i]
    }

    pub fn get_mut(&mut self, i: usize) -> &mut SamplingRegion {
        &mut self.regions[i]
    }

    pub fn len(&self) -> usize {
        self.regions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.regions.is_empty()
    }

    pub fn spawn(&mut self, skel: &DirectedQuerySkeleton, anchor: Anchor) {
        self.regions.push(SamplingRegion {
            id: self.next_id,
            anchor,
            center: anchor_point(skel, anchor),
            radius: self.rule.radius(skel, anchor),
            successes: 0,
            failures: 0,
        });
        self.next_id += 1;
    }

    /// Removes region `i` and opens one fresh region at the start of each
    /// outgoing edge of `vertex`. Ids stay ascending along the vector.
    fn split(&mut self, skel: &DirectedQuerySkeleton, i: usize, vertex: VertexId) {
        let old = self.regions.remove(i);
        self.retired.push(old);
        for &edge in skel.outgoing(vertex) {
            self.spawn(skel, Anchor::Edge { edge, index: 0 });
        }
    }

    /// Applies a successful extension to region `i`.
    pub fn advance(&mut self, skel: &DirectedQuerySkeleton, i: usize, mode: AdvanceMode) {
        let (edge, index) = match self.regions[i].anchor {
            Anchor::Vertex(v) => return self.split(skel, i, v),
            Anchor::Edge { edge, index } => (edge, index),
        };
        let e = skel.edge(edge);
        let last = e.last_index();
        let at_end = index == last && self.regions[i].center == e.intermediates[last];
        if at_end {
            return self.split(skel, i, e.target);
        }
        let next = match mode {
            AdvanceMode::EdgeEnd => last,
            AdvanceMode::SingleStep => (index + 1).min(last),
        };
        let anchor = Anchor::Edge { edge, index: next };
        let r = &mut self.regions[i];
        r.anchor = anchor;
        r.center = e.intermediates[next];
        r.radius = self.rule.radius(skel, anchor);
    }
}

/// Outcome of one selection draw.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Selection {
    Environment,
    Region(usize),
}

/// Environment probability followed by per-region probabilities for weights
/// `w` and explore bias `e`. When the weights sum to zero the exploit share
/// goes to the environment.
pub fn selection_probabilities(weights: &[f64], e: f64) -> (f64, Vec<f64>) {
    let base = e / (weights.len() + 1) as f64;
    let total: f64 = weights.iter().sum();
    if total > 0.0 {
        let p = weights.iter().map(|w| base + (1.0 - e) * w / total).collect();
        (base, p)
    } else {
        (base + (1.0 - e), vec![base; weights.len()])
    }
}

/// Draws a region with one uniform variate against the cumulative
/// distribution, environment first, then regions in id order. An empty
/// region set selects the environment without touching `rng`.
pub fn select_region<R: Rng + ?Sized>(regions: &[SamplingRegion], e: f64, rng: &mut R) -> Selection {
    if regions.is_empty() {
        return Selection::Environment;
    }
    let weights: Vec<f64> = regions.iter().map(SamplingRegion::weight).collect();
    let (p_env, p) = selection_probabilities(&weights, e);
    let u: f64 = rng.random();
    let mut acc = p_env;
    if u < acc {
        return Selection::Environment;
    }
    for (i, pi) in p.iter().enumerate() {
        acc += pi;
        if u < acc {
            return Selection::Region(i);
        }
    }
    Selection::Region(regions.len() - 1)
}
