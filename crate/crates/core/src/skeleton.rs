// SPDX-License-Identifier: Apache-2.0

//! Workspace skeletons: annotated graphs embedded in the workspace whose
//! edges carry ordered intermediate points.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::SkeletonError;
use crate::geometry::{Dim, Point, Workspace};

mod blocks;

pub use blocks::{compose_blocks, BlockGrid, BlockSpec, Face};

pub type VertexId = u32;

/// Tolerance for matching edge endpoints to vertex positions.
const ENDPOINT_TOL: f64 = 1e-9;

/// Rejection cap when looking for a free perturbed position.
const PERTURB_TRIES: usize = 1000;

#[derive(Clone, Debug, PartialEq)]
pub struct SkeletonVertex {
    pub position: Point,
    pub clearance: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SkeletonEdge {
    pub source: VertexId,
    pub target: VertexId,
    /// Ordered points from the source position to the target position.
    pub intermediates: Vec<Point>,
    pub min_clearance: Option<f64>,
}

impl SkeletonEdge {
    pub fn length(&self) -> f64 {
        self.intermediates.windows(2).map(|w| w[0].distance(&w[1])).sum()
    }

    pub fn last_index(&self) -> usize {
        self.intermediates.len() - 1
    }
}

/// Evenly spaced points from `a` to `b`, inclusive, with gaps of at most
/// `spacing`.
pub fn straight_intermediates(a: &Point, b: &Point, spacing: f64) -> Vec<Point> {
    let n = ((a.distance(b) / spacing) - 1e-9).ceil().max(1.0) as usize;
    (0..=n)
        .map(|i| match i {
            0 => *a,
            i if i == n => *b,
            i => a.lerp(b, i as f64 / n as f64),
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct WorkspaceSkeleton {
    dim: Dim,
    vertices: BTreeMap<VertexId, SkeletonVertex>,
    edges: Vec<SkeletonEdge>,
    /// Maximum gap between consecutive intermediates, when known.
    spacing: Option<f64>,
}

impl WorkspaceSkeleton {
    pub fn new(dim: Dim) -> Self {
        WorkspaceSkeleton {
            dim,
            vertices: BTreeMap::new(),
            edges: Vec::new(),
            spacing: None,
        }
    }

    pub fn with_spacing(mut self, spacing: f64) -> Self {
        self.spacing = Some(spacing);
        self
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn spacing(&self) -> Option<f64> {
        self.spacing
    }

    pub fn set_spacing(&mut self, spacing: Option<f64>) {
        self.spacing = spacing;
    }

    pub fn vertices(&self) -> &BTreeMap<VertexId, SkeletonVertex> {
        &self.vertices
    }

    pub fn vertex(&self, id: VertexId) -> Option<&SkeletonVertex> {
        self.vertices.get(&id)
    }

    pub fn edges(&self) -> &[SkeletonEdge] {
        &self.edges
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_annotated(&self) -> bool {
        self.vertices.values().any(|v| v.clearance.is_some()) || self.edges.iter().any(|e| e.min_clearance.is_some())
    }

    /// Inserts or replaces a vertex.
    pub fn insert_vertex(&mut self, id: VertexId, position: Point) {
        self.insert(
            id,
            SkeletonVertex {
                position,
                clearance: None,
            },
        );
    }

    /// Inserts or replaces a vertex together with its annotation.
    pub fn insert(&mut self, id: VertexId, vertex: SkeletonVertex) {
        self.vertices.insert(id, vertex);
    }

    /// Adds a vertex with the next free id.
    pub fn add_vertex(&mut self, position: Point) -> VertexId {
        let id = self.vertices.keys().next_back().map_or(0, |k| k + 1);
        self.insert_vertex(id, position);
        id
    }

    pub fn push_edge(&mut self, edge: SkeletonEdge) {
        self.edges.push(edge);
    }

    /// Adds a straight edge using the skeleton's spacing, or a single segment
    /// when no spacing is configured.
    pub fn add_straight_edge(&mut self, source: VertexId, target: VertexId) -> Result<usize, SkeletonError> {
        let pos = |id| {
            self.vertices
                .get(&id)
                .map(|v| v.position)
                .ok_or(SkeletonError::InvalidEdge {
                    edge: self.edges.len(),
                    reason: format!("unknown vertex {id}"),
                })
        };
        let (a, b) = (pos(source)?, pos(target)?);
        let intermediates = match self.spacing {
            Some(s) => straight_intermediates(&a, &b, s),
            None => vec![a, b],
        };
        self.edges.push(SkeletonEdge {
            source,
            target,
            intermediates,
            min_clearance: None,
        });
        Ok(self.edges.len() - 1)
    }

    /// Checks every structural invariant, naming the offending vertex or edge.
    pub fn validate(&self) -> Result<(), SkeletonError> {
        for (&id, v) in &self.vertices {
            if !v.position.is_finite() || (self.dim == Dim::Two && v.position.z() != 0.0) {
                return Err(SkeletonError::InvalidVertex {
                    vertex: id,
                    reason: "position is not a finite point of the skeleton's dimension".into(),
                });
            }
            if v.clearance.is_some_and(|c| !(c >= 0.0)) {
                return Err(SkeletonError::InvalidVertex {
                    vertex: id,
                    reason: "clearance must be non-negative".into(),
                });
            }
        }
        for (i, e) in self.edges.iter().enumerate() {
            let bad = |reason: String| SkeletonError::InvalidEdge { edge: i, reason };
            let src = self
                .vertices
                .get(&e.source)
                .ok_or_else(|| bad(format!("unknown source vertex {}", e.source)))?;
            let dst = self
                .vertices
                .get(&e.target)
                .ok_or_else(|| bad(format!("unknown target vertex {}", e.target)))?;
            if e.intermediates.len() < 2 {
                return Err(bad("needs at least two intermediates".into()));
            }
            if e.intermediates[0].distance(&src.position) > ENDPOINT_TOL {
                return Err(bad("intermediates do not start at the source position".into()));
            }
            if e.intermediates[e.last_index()].distance(&dst.position) > ENDPOINT_TOL {
                return Err(bad("intermediates do not end at the target position".into()));
            }
            if e.intermediates
                .iter()
                .any(|p| !p.is_finite() || (self.dim == Dim::Two && p.z() != 0.0))
            {
                return Err(bad(
                    "intermediate is not a finite point of the skeleton's dimension".into()
                ));
            }
            if let Some(s) = self.spacing {
                if e.intermediates.windows(2).any(|w| w[0].distance(&w[1]) > s + 1e-9) {
                    return Err(bad(format!("intermediates are farther apart than the spacing {s}")));
                }
            }
            if e.min_clearance.is_some_and(|c| !(c >= 0.0)) {
                return Err(bad("min_clearance must be non-negative".into()));
            }
        }
        Ok(())
    }

    /// Recomputes clearance for every vertex and every edge (minimum over its
    /// intermediates). Points outside the boundary get zero.
    pub fn annotate_clearance(&self, ws: &Workspace) -> WorkspaceSkeleton {
        let clearance = |p: &Point| ws.point_clearance(p).unwrap_or(0.0);
        let mut out = self.clone();
        for v in out.vertices.values_mut() {
            v.clearance = Some(clearance(&v.position));
        }
        for e in &mut out.edges {
            e.min_clearance = Some(e.intermediates.iter().map(clearance).fold(f64::INFINITY, f64::min));
        }
        out
    }

    /// Vertex closest to `p`; ties go to the lowest id.
    pub fn nearest_vertex(&self, p: &Point) -> Result<VertexId, SkeletonError> {
        let mut best: Option<(VertexId, f64)> = None;
        for (&id, v) in &self.vertices {
            let d = v.position.distance(p);
            if best.is_none_or(|(_, bd)| d < bd) {
                best = Some((id, d));
            }
        }
        best.map(|(id, _)| id).ok_or(SkeletonError::Empty)
    }

    pub fn total_length(&self) -> f64 {
        self.edges.iter().map(SkeletonEdge::length).sum()
    }

    fn adjacency(&self) -> BTreeMap<VertexId, Vec<(VertexId, usize)>> {
        let mut adj: BTreeMap<VertexId, Vec<(VertexId, usize)>> =
            self.vertices.keys().map(|&k| (k, Vec::new())).collect();
        for (i, e) in self.edges.iter().enumerate() {
            adj.entry(e.source).or_default().push((e.target, i));
            adj.entry(e.target).or_default().push((e.source, i));
        }
        adj
    }

    /// Undirected hop distance from `root` to every reachable vertex.
    fn hop_levels(&self, root: VertexId) -> BTreeMap<VertexId, usize> {
        let adj = self.adjacency();
        let mut level = BTreeMap::from([(root, 0usize)]);
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            let lu = level[&u];
            for &(v, _) in adj.get(&u).into_iter().flatten() {
                if let std::collections::btree_map::Entry::Vacant(slot) = level.entry(v) {
                    slot.insert(lu + 1);
                    queue.push_back(v);
                }
            }
        }
        level
    }

    /// Restricts the skeleton to guidance from `start` toward `goal`.
    ///
    /// Edges are oriented from lower to higher hop level measured from the
    /// source vertex, edges joining equal levels are dropped, and only
    /// vertices and edges on some directed source-to-sink path survive. The
    /// result is acyclic and never contains an edge absent from the input.
    pub fn direct_and_prune(&self, start: &Point, goal: &Point) -> Result<DirectedQuerySkeleton, SkeletonError> {
        let source = self.nearest_vertex(start)?;
        let sink = self.nearest_vertex(goal)?;
        let from_source = self.hop_levels(source);
        let from_sink = self.hop_levels(sink);
        if !from_source.contains_key(&sink) {
            return Err(SkeletonError::NoGuidance { from: source, to: sink });
        }

        let mut oriented: Vec<(usize, bool)> = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            let (Some(&lu), Some(&lv)) = (from_source.get(&e.source), from_source.get(&e.target)) else {
                continue;
            };
            if !(from_sink.contains_key(&e.source) && from_sink.contains_key(&e.target)) {
                continue;
            }
            if lv == lu + 1 {
                oriented.push((i, false));
            } else if lu == lv + 1 {
                oriented.push((i, true));
            }
        }
        let ends = |&(i, rev): &(usize, bool)| {
            let e = &self.edges[i];
            if rev {
                (e.target, e.source)
            } else {
                (e.source, e.target)
            }
        };

        // forward reachability from the source, backward from the sink
        let reach = |root: VertexId, forward: bool| {
            let mut seen = BTreeSet::from([root]);
            let mut stack = vec![root];
            while let Some(u) = stack.pop() {
                for o in &oriented {
                    let (a, b) = ends(o);
                    let (from, to) = if forward { (a, b) } else { (b, a) };
                    if from == u && seen.insert(to) {
                        stack.push(to);
                    }
                }
            }
            seen
        };
        let fwd = reach(source, true);
        let bwd = reach(sink, false);

        let mut skeleton = WorkspaceSkeleton::new(self.dim);
        skeleton.spacing = self.spacing;
        let mut origin = Vec::new();
        for &id in fwd.intersection(&bwd) {
            skeleton.vertices.insert(id, self.vertices[&id].clone());
        }
        for o in &oriented {
            let (a, b) = ends(o);
            if !(fwd.contains(&a) && bwd.contains(&b)) {
                continue;
            }
            let e = &self.edges[o.0];
            let mut intermediates = e.intermediates.clone();
            if o.1 {
                intermediates.reverse();
            }
            skeleton.edges.push(SkeletonEdge {
                source: a,
                target: b,
                intermediates,
                min_clearance: e.min_clearance,
            });
            origin.push(o.0);
        }
        let mut outgoing: BTreeMap<VertexId, Vec<usize>> = skeleton.vertices.keys().map(|&k| (k, Vec::new())).collect();
        for (i, e) in skeleton.edges.iter().enumerate() {
            outgoing.entry(e.source).or_default().push(i);
        }
        Ok(DirectedQuerySkeleton {
            skeleton,
            source,
            sink,
            outgoing,
            origin,
        })
    }

    /// Moves every vertex except those nearest to `start` and `goal` by
    /// exactly `spec.d` in a uniformly random direction, retrying until the
    /// new position is in free workspace (the vertex stays put after
    /// [`PERTURB_TRIES`] misses). Edges touching moved vertices become
    /// straight lines; annotated skeletons are re-annotated.
    pub fn perturb(&self, spec: &PerturbationSpec, ws: &Workspace, start: &Point, goal: &Point) -> WorkspaceSkeleton {
        if spec.d == 0.0 || self.is_empty() {
            return self.clone();
        }
        let pinned = [self.nearest_vertex(start), self.nearest_vertex(goal)];
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        let mut out = self.clone();
        let mut moved = BTreeSet::new();
        for (&id, v) in out.vertices.iter_mut() {
            if pinned.iter().any(|p| p.as_ref().is_ok_and(|&p| p == id)) {
                continue;
            }
            for _ in 0..PERTURB_TRIES {
                let candidate = v.position + random_direction(self.dim, &mut rng) * spec.d;
                if ws.is_free_point(&candidate) {
                    v.position = candidate;
                    moved.insert(id);
                    break;
                }
            }
        }
        let spacing = self
            .spacing
            .unwrap_or_else(|| ws.boundary().shortest_side(ws.dim()) / 50.0);
        for e in &mut out.edges {
            if moved.contains(&e.source) || moved.contains(&e.target) {
                let a = out.vertices[&e.source].position;
                let b = out.vertices[&e.target].position;
                e.intermediates = straight_intermediates(&a, &b, spacing);
            }
        }
        if self.spacing.is_none() && !moved.is_empty() {
            // untouched edges keep their own spacing, which is unknown
            out.spacing = None;
        }
        if self.is_annotated() {
            out = out.annotate_clearance(ws);
        }
        out
    }
}

fn random_direction<R: Rng + ?Sized>(dim: Dim, rng: &mut R) -> Point {
    match dim {
        Dim::Two => {
            let t = 2.0 * PI * rng.random::<f64>();
            Point::new2(t.cos(), t.sin())
        }
        Dim::Three => {
            let z = 2.0 * rng.random::<f64>() - 1.0;
            let t = 2.0 * PI * rng.random::<f64>();
            let r = (1.0 - z * z).max(0.0).sqrt();
            Point::new3(r * t.cos(), r * t.sin(), z)
        }
    }
}

/// Shift magnitude and seed for [`WorkspaceSkeleton::perturb`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PerturbationSpec {
    pub d: f64,
    pub seed: u64,
}

/// A skeleton pruned to one query and oriented from source to sink.
#[derive(Clone, Debug, PartialEq)]
pub struct DirectedQuerySkeleton {
    skeleton: WorkspaceSkeleton,
    source: VertexId,
    sink: VertexId,
    outgoing: BTreeMap<VertexId, Vec<usize>>,
    /// Index of each directed edge in the undirected input.
    origin: Vec<usize>,
}

impl DirectedQuerySkeleton {
    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn sink(&self) -> VertexId {
        self.sink
    }

    pub fn skeleton(&self) -> &WorkspaceSkeleton {
        &self.skeleton
    }

    pub fn edges(&self) -> &[SkeletonEdge] {
        &self.skeleton.edges
    }

    pub fn edge(&self, i: usize) -> &SkeletonEdge {
        &self.skeleton.edges[i]
    }

    pub fn vertex(&self, id: VertexId) -> &SkeletonVertex {
        &self.skeleton.vertices[&id]
    }

    pub fn outgoing(&self, id: VertexId) -> &[usize] {
        self.outgoing.get(&id).map_or(&[], Vec::as_slice)
    }

    pub fn origin_edge(&self, i: usize) -> usize {
        self.origin[i]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Aabb, ConvexShape};
    use proptest::prelude::*;

    fn graph(points: &[(f64, f64)], edges: &[(u32, u32)]) -> WorkspaceSkeleton {
        let mut s = WorkspaceSkeleton::new(Dim::Two);
        for (i, p) in points.iter().enumerate() {
            s.insert_vertex(i as u32, Point::new2(p.0, p.1));
        }
        for &(a, b) in edges {
            s.add_straight_edge(a, b).unwrap();
        }
        s
    }

    fn directed_pairs(d: &DirectedQuerySkeleton) -> BTreeSet<(u32, u32)> {
        d.edges().iter().map(|e| (e.source, e.target)).collect()
    }

    fn open_box() -> Workspace {
        Workspace::new(
            Dim::Two,
            Aabb::new(Point::new2(0.0, 0.0), Point::new2(10.0, 10.0)),
            vec![],
        )
        .unwrap()
    }

    #[test]
    fn path_graph_is_kept_whole() {
        let s = graph(&[(0.0, 0.0), (5.0, 0.0), (10.0, 0.0)], &[(1, 0), (1, 2)]);
        let d = s
            .direct_and_prune(&Point::new2(0.1, 0.0), &Point::new2(9.9, 0.0))
            .unwrap();
        assert_eq!(directed_pairs(&d), BTreeSet::from([(0, 1), (1, 2)]));
        // the first edge was reversed, and so were its intermediates
        let e = &d.edges()[0];
        assert_eq!(e.intermediates[0], Point::new2(0.0, 0.0));
        assert_eq!(e.intermediates[e.last_index()], Point::new2(5.0, 0.0));
        assert_eq!((d.source(), d.sink()), (0, 2));
    }

    #[test]
    fn triangle_with_pendant_keeps_only_the_direct_edge() {
        // A=0, B=1, C=2, D=3 hanging off B
        let s = graph(
            &[(0.0, 0.0), (5.0, 5.0), (10.0, 0.0), (5.0, 9.0)],
            &[(0, 1), (1, 2), (0, 2), (1, 3)],
        );
        let d = s
            .direct_and_prune(&Point::new2(0.0, 0.1), &Point::new2(10.0, 0.1))
            .unwrap();
        assert_eq!(directed_pairs(&d), BTreeSet::from([(0, 2)]));
        assert_eq!(d.skeleton().vertices().keys().copied().collect::<Vec<_>>(), vec![0, 2]);
        assert_eq!(d.origin_edge(0), 2);
    }

    #[test]
    fn shared_nearest_vertex_gives_single_vertex_skeleton() {
        let s = graph(&[(0.0, 0.0), (5.0, 0.0)], &[(0, 1)]);
        let d = s
            .direct_and_prune(&Point::new2(0.0, 1.0), &Point::new2(1.0, 0.0))
            .unwrap();
        assert!(d.edges().is_empty());
        assert_eq!(d.skeleton().vertices().len(), 1);
        assert_eq!(d.source(), d.sink());
    }

    #[test]
    fn disconnected_query_has_no_guidance() {
        let s = graph(&[(0.0, 0.0), (1.0, 0.0), (9.0, 0.0), (10.0, 0.0)], &[(0, 1), (2, 3)]);
        let err = s.direct_and_prune(&Point::new2(0.0, 0.0), &Point::new2(10.0, 0.0));
        assert!(matches!(err, Err(SkeletonError::NoGuidance { from: 0, to: 3 })));
        let empty = WorkspaceSkeleton::new(Dim::Two);
        assert!(matches!(
            empty.direct_and_prune(&Point::ORIGIN, &Point::ORIGIN),
            Err(SkeletonError::Empty)
        ));
    }

    #[test]
    fn nearest_vertex_examples() {
        let s = graph(&[(0.0, 0.0)], &[]);
        assert_eq!(s.nearest_vertex(&Point::new2(7.0, 7.0)).unwrap(), 0);
        let s = graph(&[(0.0, 0.0), (10.0, 0.0)], &[]);
        assert_eq!(s.nearest_vertex(&Point::new2(2.0, 0.0)).unwrap(), 0);
        assert_eq!(s.nearest_vertex(&Point::new2(5.0, 0.0)).unwrap(), 0);
        assert!(WorkspaceSkeleton::new(Dim::Two).nearest_vertex(&Point::ORIGIN).is_err());
    }

    #[test]
    fn corridor_edge_clearance() {
        let w = 2.0;
        let ws = Workspace::new(
            Dim::Two,
            Aabb::new(Point::new2(0.0, 0.0), Point::new2(10.0, 10.0)),
            vec![
                ConvexShape::aabb(Dim::Two, Point::new2(2.0, 0.0), Point::new2(8.0, 4.0)).unwrap(),
                ConvexShape::aabb(Dim::Two, Point::new2(2.0, 4.0 + w), Point::new2(8.0, 10.0)).unwrap(),
            ],
        )
        .unwrap();
        let s = graph(&[(3.0, 5.0), (7.0, 5.0)], &[]).with_spacing(0.25);
        let mut s = s;
        s.add_straight_edge(0, 1).unwrap();
        let a = s.annotate_clearance(&ws);
        // oracle: clearance of each intermediate by brute force over walls
        let oracle = a.edges()[0]
            .intermediates
            .iter()
            .map(|p| (p.y() - 4.0).min(4.0 + w - p.y()))
            .fold(f64::INFINITY, f64::min);
        assert_eq!(oracle, w / 2.0);
        assert_eq!(a.edges()[0].min_clearance, Some(w / 2.0));
        assert_eq!(a.vertices()[&0].position, s.vertices()[&0].position);
    }

    #[test]
    fn vertex_clearance_inside_obstacle_and_in_open_box() {
        let ws = Workspace::new(
            Dim::Two,
            Aabb::new(Point::new2(0.0, 0.0), Point::new2(10.0, 10.0)),
            vec![ConvexShape::aabb(Dim::Two, Point::new2(4.0, 4.0), Point::new2(6.0, 6.0)).unwrap()],
        )
        .unwrap();
        let s = graph(&[(5.0, 5.0), (1.5, 7.0)], &[]).annotate_clearance(&ws);
        assert_eq!(s.vertices()[&0].clearance, Some(0.0));
        assert_eq!(s.vertices()[&1].clearance, Some(1.5));
    }

    #[test]
    fn validation_names_the_bad_edge() {
        let mut s = graph(&[(0.0, 0.0), (5.0, 0.0)], &[]);
        s.push_edge(SkeletonEdge {
            source: 0,
            target: 1,
            intermediates: vec![Point::new2(0.5, 0.0), Point::new2(5.0, 0.0)],
            min_clearance: None,
        });
        match s.validate() {
            Err(SkeletonError::InvalidEdge { edge: 0, reason }) => assert!(reason.contains("start")),
            other => panic!("unexpected {other:?}"),
        }
        assert!(WorkspaceSkeleton::new(Dim::Two).validate().is_ok());
    }

    #[test]
    fn zero_perturbation_is_identity() {
        let s = graph(&[(1.0, 1.0), (5.0, 5.0), (9.0, 9.0)], &[(0, 1), (1, 2)]);
        let p = s.perturb(
            &PerturbationSpec { d: 0.0, seed: 9 },
            &open_box(),
            &Point::new2(1.0, 1.0),
            &Point::new2(9.0, 9.0),
        );
        assert_eq!(p, s);
    }

    #[test]
    fn perturbation_moves_interior_vertices_by_d() {
        let ws = open_box();
        let s = graph(
            &[(1.0, 1.0), (3.0, 5.0), (7.0, 5.0), (9.0, 9.0)],
            &[(0, 1), (1, 2), (2, 3)],
        )
        .with_spacing(0.2)
        .annotate_clearance(&ws);
        let start = Point::new2(1.0, 1.0);
        let goal = Point::new2(9.0, 9.0);
        for seed in 0..20 {
            let p = s.perturb(&PerturbationSpec { d: 1.5, seed }, &ws, &start, &goal);
            assert_eq!(p.vertices()[&0].position, start);
            assert_eq!(p.vertices()[&3].position, goal);
            for id in [1, 2] {
                let moved = p.vertices()[&id].position.distance(&s.vertices()[&id].position);
                assert!((moved - 1.5).abs() < 1e-9);
                assert!(ws.point_clearance(&p.vertices()[&id].position).unwrap() > 0.0);
            }
            p.validate().unwrap();
            assert_eq!(p, s.perturb(&PerturbationSpec { d: 1.5, seed }, &ws, &start, &goal));
        }
    }

    #[test]
    fn oversized_perturbation_leaves_vertex_in_place() {
        let ws = open_box();
        let s = graph(&[(1.0, 1.0), (5.0, 5.0), (9.0, 9.0)], &[(0, 1), (1, 2)]);
        let p = s.perturb(
            &PerturbationSpec { d: 50.0, seed: 1 },
            &ws,
            &Point::new2(1.0, 1.0),
            &Point::new2(9.0, 9.0),
        );
        assert_eq!(p.vertices()[&1].position, Point::new2(5.0, 5.0));
    }

    #[test]
    fn straight_intermediates_respect_spacing() {
        let pts = straight_intermediates(&Point::new2(0.0, 0.0), &Point::new2(1.0, 0.0), 0.25);
        assert_eq!(pts.len(), 5);
        let pts = straight_intermediates(&Point::new2(0.0, 0.0), &Point::new2(1.0, 0.0), 0.3);
        assert_eq!(pts.len(), 5);
        assert!(pts.windows(2).all(|w| w[0].distance(&w[1]) <= 0.3));
    }

    /// All simple paths from `s` to `g` by exhaustive DFS.
    fn simple_paths(n: usize, edges: &[(u32, u32)], s: u32, g: u32) -> Vec<Vec<usize>> {
        fn dfs(
            u: u32,
            g: u32,
            edges: &[(u32, u32)],
            on: &mut Vec<bool>,
            path: &mut Vec<usize>,
            out: &mut Vec<Vec<usize>>,
        ) {
            if u == g {
                out.push(path.clone());
                return;
            }
            for (i, &(a, b)) in edges.iter().enumerate() {
                let next = if a == u {
                    b
                } else if b == u {
                    a
                } else {
                    continue;
                };
                if on[next as usize] {
                    continue;
                }
                on[next as usize] = true;
                path.push(i);
                dfs(next, g, edges, on, path, out);
                path.pop();
                on[next as usize] = false;
            }
        }
        let mut on = vec![false; n];
        on[s as usize] = true;
        let mut out = Vec::new();
        dfs(s, g, edges, &mut on, &mut Vec::new(), &mut out);
        out
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn pruning_matches_path_enumeration(
            n in 2usize..=10,
            raw_edges in prop::collection::vec((0u32..10, 0u32..10), 0..20),
            s in 0u32..10, g in 0u32..10,
        ) {
            let n32 = n as u32;
            let edges: Vec<(u32, u32)> = raw_edges.into_iter().map(|(a, b)| (a % n32, b % n32)).collect();
            let (s, g) = (s % n32, g % n32);
            // vertices on a circle so nearest-vertex lookups are exact
            let pts: Vec<(f64, f64)> = (0..n).map(|i| {
                let t = 2.0 * PI * i as f64 / n as f64;
                (5.0 + 4.0 * t.cos(), 5.0 + 4.0 * t.sin())
            }).collect();
            let sk = graph(&pts, &edges);
            let at = |v: u32| Point::new2(pts[v as usize].0, pts[v as usize].1);
            let paths = simple_paths(n, &edges, s, g);
            let result = sk.direct_and_prune(&at(s), &at(g));
            if paths.is_empty() {
                let no_guidance = matches!(result, Err(SkeletonError::NoGuidance { .. }));
                prop_assert!(no_guidance);
                return Ok(());
            }
            let d = result.unwrap();
            // oracle: edges on minimum-hop simple paths, oriented along the path
            let shortest = paths.iter().map(Vec::len).min().unwrap();
            let mut expected_edges = BTreeSet::new();
            let mut expected_vertices = BTreeSet::from([s, g]);
            for p in paths.iter().filter(|p| p.len() == shortest) {
                let mut u = s;
                for &i in p {
                    let (a, b) = edges[i];
                    let v = if a == u { b } else { a };
                    expected_edges.insert((i, u, v));
                    expected_vertices.insert(v);
                    u = v;
                }
            }
            let got_edges: BTreeSet<(usize, u32, u32)> = d.edges().iter().enumerate()
                .map(|(k, e)| (d.origin_edge(k), e.source, e.target)).collect();
            prop_assert_eq!(got_edges, expected_edges);
            let got_vertices: BTreeSet<u32> = d.skeleton().vertices().keys().copied().collect();
            prop_assert_eq!(got_vertices, expected_vertices);
        }
    }
}
