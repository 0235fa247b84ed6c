// SPDX-License-Identifier: Apache-2.0

//! Euclidean primitives, rigid placements, convex shapes and clearance.
//!
//! Points are stored as three coordinates; planar scenes keep `z = 0` and
//! carry [`Dim::Two`] on every shape and workspace so that mixed-dimension
//! inputs are rejected instead of silently projected.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{Quaternion, UnitQuaternion, Vector3};

use crate::error::GeometryError;

/// Tolerance used for hull construction and containment tests.
const HULL_EPS: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dim {
    Two,
    Three,
}

impl Dim {
    pub fn count(self) -> usize {
        match self {
            Dim::Two => 2,
            Dim::Three => 3,
        }
    }

    pub fn from_count(n: usize) -> Result<Self, GeometryError> {
        match n {
            2 => Ok(Dim::Two),
            3 => Ok(Dim::Three),
            other => Err(GeometryError::BadDimension(other)),
        }
    }
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}D", self.count())
    }
}

/// A workspace point. Unused trailing coordinates are zero.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Point(pub [f64; 3]);

impl Point {
    pub const ORIGIN: Point = Point([0.0; 3]);

    pub fn new2(x: f64, y: f64) -> Self {
        Point([x, y, 0.0])
    }

    pub fn new3(x: f64, y: f64, z: f64) -> Self {
        Point([x, y, z])
    }

    /// Builds a point from a coordinate slice of length 2 or 3.
    pub fn from_slice(c: &[f64]) -> Result<Self, GeometryError> {
        let p = match c.len() {
            2 => Point::new2(c[0], c[1]),
            3 => Point::new3(c[0], c[1], c[2]),
            n => return Err(GeometryError::BadDimension(n)),
        };
        if !p.is_finite() {
            return Err(GeometryError::NonFinite);
        }
        Ok(p)
    }

    pub fn coords(&self, dim: Dim) -> &[f64] {
        &self.0[..dim.count()]
    }

    pub fn x(&self) -> f64 {
        self.0[0]
    }

    pub fn y(&self) -> f64 {
        self.0[1]
    }

    pub fn z(&self) -> f64 {
        self.0[2]
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    pub fn dot(&self, o: &Point) -> f64 {
        self.0[0] * o.0[0] + self.0[1] * o.0[1] + self.0[2] * o.0[2]
    }

    pub fn cross(&self, o: &Point) -> Point {
        let [a1, a2, a3] = self.0;
        let [b1, b2, b3] = o.0;
        Point([a2 * b3 - a3 * b2, a3 * b1 - a1 * b3, a1 * b2 - a2 * b1])
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn distance(&self, o: &Point) -> f64 {
        (*self - *o).norm()
    }

    pub fn lerp(&self, o: &Point, t: f64) -> Point {
        *self + (*o - *self) * t
    }

    pub fn midpoint(&self, o: &Point) -> Point {
        Point([
            0.5 * (self.0[0] + o.0[0]),
            0.5 * (self.0[1] + o.0[1]),
            0.5 * (self.0[2] + o.0[2]),
        ])
    }

    pub fn normalized(&self) -> Option<Point> {
        let n = self.norm();
        (n > 1e-12).then(|| *self * (1.0 / n))
    }

    fn to_vector(self) -> Vector3<f64> {
        Vector3::new(self.0[0], self.0[1], self.0[2])
    }

    fn from_vector(v: Vector3<f64>) -> Point {
        Point([v.x, v.y, v.z])
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point([self.0[0] * s, self.0[1] * s, self.0[2] * s])
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point([-self.0[0], -self.0[1], -self.0[2]])
    }
}

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_angle(theta: f64) -> f64 {
    let mut t = theta % (2.0 * PI);
    if t <= -PI {
        t += 2.0 * PI;
    } else if t > PI {
        t -= 2.0 * PI;
    }
    t
}

/// Orientation of a placed body.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Rotation {
    Identity,
    /// Counter-clockwise angle about +z, radians.
    Planar(f64),
    Spatial(UnitQuaternion<f64>),
}

impl Rotation {
    pub fn from_quaternion(w: f64, i: f64, j: f64, k: f64) -> Result<Self, GeometryError> {
        let q = Quaternion::new(w, i, j, k);
        let n = q.norm();
        if !n.is_finite() || n < 1e-12 {
            return Err(GeometryError::BadQuaternion);
        }
        Ok(Rotation::Spatial(UnitQuaternion::from_quaternion(q)))
    }

    pub fn apply(&self, p: &Point) -> Point {
        match self {
            Rotation::Identity => *p,
            Rotation::Planar(theta) => {
                let (s, c) = theta.sin_cos();
                Point([c * p.0[0] - s * p.0[1], s * p.0[0] + c * p.0[1], p.0[2]])
            }
            Rotation::Spatial(q) => Point::from_vector(q.transform_vector(&p.to_vector())),
        }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Rotation) -> Rotation {
        match (self, other) {
            (Rotation::Identity, r) | (r, Rotation::Identity) => *r,
            (Rotation::Planar(a), Rotation::Planar(b)) => Rotation::Planar(wrap_angle(a + b)),
            (a, b) => {
                let q = renormalize(a.to_quaternion() * b.to_quaternion());
                Rotation::Spatial(q)
            }
        }
    }

    pub fn to_quaternion(&self) -> UnitQuaternion<f64> {
        match self {
            Rotation::Identity => UnitQuaternion::identity(),
            Rotation::Planar(t) => UnitQuaternion::from_axis_angle(&Vector3::z_axis(), *t),
            Rotation::Spatial(q) => *q,
        }
    }

    /// Angle of the relative rotation between `self` and `other`, in `[0, pi]`.
    pub fn angle_to(&self, other: &Rotation) -> f64 {
        match (self, other) {
            (Rotation::Identity, Rotation::Identity) => 0.0,
            (Rotation::Planar(a), Rotation::Planar(b)) => wrap_angle(b - a).abs(),
            (Rotation::Identity, Rotation::Planar(b)) => wrap_angle(*b).abs(),
            (Rotation::Planar(a), Rotation::Identity) => wrap_angle(*a).abs(),
            (a, b) => {
                let d = a.to_quaternion().coords.dot(&b.to_quaternion().coords).abs();
                2.0 * d.min(1.0).acos()
            }
        }
    }

    /// Shortest-arc interpolation; `t = 0` gives `self`, `t = 1` gives `other`.
    pub fn interpolate(&self, other: &Rotation, t: f64) -> Rotation {
        match (self, other) {
            (Rotation::Identity, Rotation::Identity) => Rotation::Identity,
            (Rotation::Planar(a), Rotation::Planar(b)) => Rotation::Planar(wrap_angle(a + wrap_angle(b - a) * t)),
            (a, b) => {
                let qa = a.to_quaternion();
                let mut qb = b.to_quaternion();
                if qa.coords.dot(&qb.coords) < 0.0 {
                    qb = UnitQuaternion::new_unchecked(-qb.into_inner());
                }
                let q = qa.try_slerp(&qb, t, 1e-12).unwrap_or(qa);
                Rotation::Spatial(renormalize(q))
            }
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            Rotation::Identity => true,
            Rotation::Planar(t) => *t == 0.0,
            Rotation::Spatial(q) => q.angle() == 0.0,
        }
    }
}

fn renormalize(q: UnitQuaternion<f64>) -> UnitQuaternion<f64> {
    if (q.quaternion().norm() - 1.0).abs() > 1e-9 {
        UnitQuaternion::from_quaternion(q.into_inner())
    } else {
        q
    }
}

/// Rigid placement: rotate about the local origin, then translate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Placement {
    pub translation: Point,
    pub rotation: Rotation,
}

impl Placement {
    pub const IDENTITY: Placement = Placement {
        translation: Point::ORIGIN,
        rotation: Rotation::Identity,
    };

    pub fn translation(t: Point) -> Self {
        Placement {
            translation: t,
            rotation: Rotation::Identity,
        }
    }

    pub fn new(translation: Point, rotation: Rotation) -> Self {
        Placement { translation, rotation }
    }

    pub fn apply(&self, p: &Point) -> Point {
        self.rotation.apply(p) + self.translation
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Placement) -> Placement {
        Placement {
            translation: self.apply(&inner.translation),
            rotation: self.rotation.compose(&inner.rotation),
        }
    }
}

/// Closed axis-aligned box.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Aabb {
    pub min: Point,
    pub max: Point,
}

impl Aabb {
    pub fn new(min: Point, max: Point) -> Self {
        Aabb { min, max }
    }

    fn from_points(points: &[Point]) -> Aabb {
        let mut min = Point([f64::INFINITY; 3]);
        let mut max = Point([f64::NEG_INFINITY; 3]);
        for p in points {
            for k in 0..3 {
                min.0[k] = min.0[k].min(p.0[k]);
                max.0[k] = max.0[k].max(p.0[k]);
            }
        }
        Aabb { min, max }
    }

    pub fn overlaps(&self, o: &Aabb) -> bool {
        (0..3).all(|k| self.min.0[k] <= o.max.0[k] && o.min.0[k] <= self.max.0[k])
    }

    pub fn contains(&self, p: &Point, dim: Dim) -> bool {
        (0..dim.count()).all(|k| self.min.0[k] <= p.0[k] && p.0[k] <= self.max.0[k])
    }

    pub fn extent(&self, axis: usize) -> f64 {
        self.max.0[axis] - self.min.0[axis]
    }

    pub fn center(&self) -> Point {
        self.min.midpoint(&self.max)
    }

    pub fn shortest_side(&self, dim: Dim) -> f64 {
        (0..dim.count()).map(|k| self.extent(k)).fold(f64::INFINITY, f64::min)
    }

    pub fn clamp(&self, p: &Point, dim: Dim) -> Point {
        let mut out = *p;
        for k in 0..dim.count() {
            out.0[k] = p.0[k].clamp(self.min.0[k], self.max.0[k]);
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShapeKind {
    Box,
    Convex,
}

/// A convex polygon (2D) or polyhedron (3D) with precomputed hull features.
///
/// Faces are stored as outward unit normals with offsets so that the closed
/// interior is `{x : n·x <= offset}` for every face.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvexShape {
    dim: Dim,
    kind: ShapeKind,
    vertices: Vec<Point>,
    normals: Vec<Point>,
    offsets: Vec<f64>,
    /// Hull edges as vertex index pairs. In 2D these coincide with faces.
    edges: Vec<(usize, usize)>,
    bounds: Aabb,
}

impl ConvexShape {
    /// Axis-aligned box spanning `[min, max]`.
    pub fn aabb(dim: Dim, min: Point, max: Point) -> Result<Self, GeometryError> {
        if (0..dim.count()).any(|k| max.0[k] - min.0[k] <= 0.0) {
            return Err(GeometryError::Degenerate);
        }
        let vertices: Vec<Point> = match dim {
            Dim::Two => vec![
                Point::new2(min.x(), min.y()),
                Point::new2(max.x(), min.y()),
                Point::new2(max.x(), max.y()),
                Point::new2(min.x(), max.y()),
            ],
            Dim::Three => (0..8)
                .map(|m| {
                    Point::new3(
                        if m & 1 == 0 { min.x() } else { max.x() },
                        if m & 2 == 0 { min.y() } else { max.y() },
                        if m & 4 == 0 { min.z() } else { max.z() },
                    )
                })
                .collect(),
        };
        let mut shape = Self::convex(dim, vertices)?;
        shape.kind = ShapeKind::Box;
        Ok(shape)
    }

    /// Box of the given size centred on the local origin.
    pub fn centered_box(dim: Dim, size: Point) -> Result<Self, GeometryError> {
        let half = size * 0.5;
        Self::aabb(dim, -half, half)
    }

    /// Convex polygon or polyhedron from its vertices, which must all be
    /// extreme points of their hull.
    pub fn convex(dim: Dim, vertices: Vec<Point>) -> Result<Self, GeometryError> {
        if vertices.iter().any(|v| !v.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        if dim == Dim::Two && vertices.iter().any(|v| v.z() != 0.0) {
            return Err(GeometryError::DimensionMismatch {
                expected: Dim::Two,
                found: Dim::Three,
            });
        }
        match dim {
            Dim::Two => Self::polygon(vertices),
            Dim::Three => Self::polyhedron(vertices),
        }
    }

    fn polygon(vertices: Vec<Point>) -> Result<Self, GeometryError> {
        if vertices.len() < 3 {
            return Err(GeometryError::Degenerate);
        }
        let hull = convex_hull_2d(&vertices);
        if hull.len() != vertices.len() {
            return Err(GeometryError::NotConvexPosition);
        }
        let ordered: Vec<Point> = hull.iter().map(|&i| vertices[i]).collect();
        let n = ordered.len();
        let area: f64 = (0..n)
            .map(|i| {
                let a = ordered[i];
                let b = ordered[(i + 1) % n];
                a.x() * b.y() - b.x() * a.y()
            })
            .sum::<f64>()
            * 0.5;
        if area <= HULL_EPS {
            return Err(GeometryError::Degenerate);
        }
        let mut normals = Vec::with_capacity(n);
        let mut offsets = Vec::with_capacity(n);
        let mut edges = Vec::with_capacity(n);
        for i in 0..n {
            let a = ordered[i];
            let b = ordered[(i + 1) % n];
            let d = b - a;
            // counter-clockwise order: outward normal is (dy, -dx)
            let nrm = Point::new2(d.y(), -d.x())
                .normalized()
                .ok_or(GeometryError::Degenerate)?;
            normals.push(nrm);
            offsets.push(nrm.dot(&a));
            edges.push((i, (i + 1) % n));
        }
        let bounds = Aabb::from_points(&ordered);
        Ok(ConvexShape {
            dim: Dim::Two,
            kind: ShapeKind::Convex,
            vertices: ordered,
            normals,
            offsets,
            edges,
            bounds,
        })
    }

    fn polyhedron(vertices: Vec<Point>) -> Result<Self, GeometryError> {
        let n = vertices.len();
        if n < 4 {
            return Err(GeometryError::Degenerate);
        }
        let scale = vertices
            .iter()
            .flat_map(|v| v.0.iter().map(|c| c.abs()))
            .fold(1.0_f64, f64::max);
        let eps = HULL_EPS * scale;
        let mut normals: Vec<Point> = Vec::new();
        let mut offsets: Vec<f64> = Vec::new();
        let mut face_members: Vec<Vec<usize>> = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    let raw = (vertices[j] - vertices[i]).cross(&(vertices[k] - vertices[i]));
                    let Some(nrm) = raw.normalized() else { continue };
                    let off = nrm.dot(&vertices[i]);
                    let side: Vec<f64> = vertices.iter().map(|v| nrm.dot(v) - off).collect();
                    let outward = if side.iter().all(|&s| s <= eps) {
                        (nrm, off)
                    } else if side.iter().all(|&s| s >= -eps) {
                        (-nrm, -off)
                    } else {
                        continue;
                    };
                    let dup = normals
                        .iter()
                        .zip(&offsets)
                        .any(|(m, o)| (*m - outward.0).norm() < 1e-9 && (o - outward.1).abs() < eps);
                    if dup {
                        continue;
                    }
                    let members = (0..n).filter(|&v| side[v].abs() <= eps).collect::<Vec<_>>();
                    normals.push(outward.0);
                    offsets.push(outward.1);
                    face_members.push(members);
                }
            }
        }
        if normals.len() < 4 {
            return Err(GeometryError::Degenerate);
        }
        // an extreme point of a 3D hull lies on at least three faces
        for v in 0..n {
            let count = face_members.iter().filter(|m| m.contains(&v)).count();
            if count < 3 {
                return Err(GeometryError::NotConvexPosition);
            }
        }
        let mut edges = Vec::new();
        for a in 0..n {
            for b in (a + 1)..n {
                let shared = face_members.iter().filter(|m| m.contains(&a) && m.contains(&b)).count();
                if shared < 2 {
                    continue;
                }
                // reject diagonals: no other vertex of a shared face may lie strictly
                // between a and b
                let mid_vertex =
                    (0..n).any(|c| c != a && c != b && point_on_segment(&vertices[c], &vertices[a], &vertices[b], eps));
                if !mid_vertex {
                    edges.push((a, b));
                }
            }
        }
        let bounds = Aabb::from_points(&vertices);
        Ok(ConvexShape {
            dim: Dim::Three,
            kind: ShapeKind::Convex,
            vertices,
            normals,
            offsets,
            edges,
            bounds,
        })
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn kind(&self) -> ShapeKind {
        self.kind
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn face_normals(&self) -> &[Point] {
        &self.normals
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn bounds(&self) -> &Aabb {
        &self.bounds
    }

    /// Largest distance from the local origin to a vertex.
    pub fn circumradius(&self) -> f64 {
        self.vertices.iter().map(Point::norm).fold(0.0, f64::max)
    }

    /// Returns the shape with every feature mapped through `pl`.
    pub fn transformed(&self, pl: &Placement) -> ConvexShape {
        let vertices: Vec<Point> = self.vertices.iter().map(|v| pl.apply(v)).collect();
        let normals: Vec<Point> = self.normals.iter().map(|n| pl.rotation.apply(n)).collect();
        let offsets = self
            .offsets
            .iter()
            .zip(&normals)
            .map(|(o, n)| o + n.dot(&pl.translation))
            .collect();
        let bounds = Aabb::from_points(&vertices);
        ConvexShape {
            dim: self.dim,
            kind: self.kind,
            vertices,
            normals,
            offsets,
            edges: self.edges.clone(),
            bounds,
        }
    }

    /// Closed-set membership.
    pub fn contains(&self, p: &Point) -> bool {
        self.normals
            .iter()
            .zip(&self.offsets)
            .all(|(n, o)| n.dot(p) <= o + HULL_EPS)
    }

    /// Euclidean distance from `p` to the shape; zero inside.
    pub fn distance_to(&self, p: &Point) -> f64 {
        if self.contains(p) {
            return 0.0;
        }
        let mut best = f64::INFINITY;
        for &(a, b) in &self.edges {
            best = best.min(segment_distance(p, &self.vertices[a], &self.vertices[b]));
        }
        if self.dim == Dim::Three {
            for (n, o) in self.normals.iter().zip(&self.offsets) {
                let signed = n.dot(p) - o;
                let foot = *p - *n * signed;
                if self.contains(&foot) {
                    best = best.min(signed.abs());
                }
            }
        }
        best
    }

    fn project(&self, axis: &Point) -> (f64, f64) {
        self.vertices
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                let d = axis.dot(v);
                (lo.min(d), hi.max(d))
            })
    }

    fn edge_directions(&self) -> impl Iterator<Item = Point> + '_ {
        self.edges
            .iter()
            .filter_map(|&(a, b)| (self.vertices[b] - self.vertices[a]).normalized())
    }
}

fn point_on_segment(p: &Point, a: &Point, b: &Point, eps: f64) -> bool {
    let ab = *b - *a;
    let len2 = ab.dot(&ab);
    if len2 == 0.0 {
        return false;
    }
    let t = (*p - *a).dot(&ab) / len2;
    t > 1e-9 && t < 1.0 - 1e-9 && (a.lerp(b, t) - *p).norm() <= eps
}

pub fn segment_distance(p: &Point, a: &Point, b: &Point) -> f64 {
    let ab = *b - *a;
    let len2 = ab.dot(&ab);
    if len2 == 0.0 {
        return p.distance(a);
    }
    let t = ((*p - *a).dot(&ab) / len2).clamp(0.0, 1.0);
    p.distance(&a.lerp(b, t))
}

/// Andrew's monotone chain; returns indices of strict hull vertices in
/// counter-clockwise order.
fn convex_hull_2d(points: &[Point]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by(|&a, &b| {
        points[a]
            .x()
            .total_cmp(&points[b].x())
            .then(points[a].y().total_cmp(&points[b].y()))
    });
    idx.dedup_by(|a, b| points[*a] == points[*b]);
    if idx.len() < 3 {
        return idx;
    }
    let cross = |o: usize, a: usize, b: usize| {
        let (o, a, b) = (points[o], points[a], points[b]);
        (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x())
    };
    let mut hull: Vec<usize> = Vec::with_capacity(idx.len() * 2);
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &usize>> = if pass == 0 {
            Box::new(idx.iter())
        } else {
            Box::new(idx.iter().rev())
        };
        for &i in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], i) <= HULL_EPS {
                hull.pop();
            }
            hull.push(i);
        }
        hull.pop();
    }
    hull
}

/// Separating-axis test on two already placed shapes. Touching counts as
/// intersecting.
fn placed_intersect(a: &ConvexShape, b: &ConvexShape) -> bool {
    if !a.bounds.overlaps(&b.bounds) {
        return false;
    }
    let separated = |axis: &Point| {
        let (amin, amax) = a.project(axis);
        let (bmin, bmax) = b.project(axis);
        amax < bmin || bmax < amin
    };
    if a.normals.iter().chain(&b.normals).any(separated) {
        return false;
    }
    if a.dim == Dim::Three {
        for ea in a.edge_directions() {
            for eb in b.edge_directions() {
                if let Some(axis) = ea.cross(&eb).normalized() {
                    if separated(&axis) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// True iff the closed placed shapes share a point.
pub fn shapes_intersect(
    a: &ConvexShape,
    pa: &Placement,
    b: &ConvexShape,
    pb: &Placement,
) -> Result<bool, GeometryError> {
    if a.dim != b.dim {
        return Err(GeometryError::DimensionMismatch {
            expected: a.dim,
            found: b.dim,
        });
    }
    Ok(placed_intersect(&a.transformed(pa), &b.transformed(pb)))
}

/// Static workspace: closed boundary box and world-frame convex obstacles.
#[derive(Clone, Debug, PartialEq)]
pub struct Workspace {
    dim: Dim,
    boundary: Aabb,
    obstacles: Vec<ConvexShape>,
}

impl Workspace {
    pub fn new(dim: Dim, boundary: Aabb, obstacles: Vec<ConvexShape>) -> Result<Self, GeometryError> {
        if (0..dim.count()).any(|k| boundary.extent(k) <= 0.0) {
            return Err(GeometryError::Degenerate);
        }
        if let Some(o) = obstacles.iter().find(|o| o.dim != dim) {
            return Err(GeometryError::DimensionMismatch {
                expected: dim,
                found: o.dim,
            });
        }
        Ok(Workspace {
            dim,
            boundary,
            obstacles,
        })
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn boundary(&self) -> &Aabb {
        &self.boundary
    }

    pub fn obstacles(&self) -> &[ConvexShape] {
        &self.obstacles
    }

    /// Distance from `p` to the nearest obstacle or boundary wall; zero
    /// inside an obstacle.
    pub fn point_clearance(&self, p: &Point) -> Result<f64, GeometryError> {
        if !self.boundary.contains(p, self.dim) {
            return Err(GeometryError::OutsideBoundary);
        }
        let mut best = f64::INFINITY;
        for k in 0..self.dim.count() {
            best = best
                .min(p.0[k] - self.boundary.min.0[k])
                .min(self.boundary.max.0[k] - p.0[k]);
        }
        for o in &self.obstacles {
            if best == 0.0 {
                break;
            }
            best = best.min(o.distance_to(p));
        }
        Ok(best)
    }

    /// True iff `p` is inside the boundary and strictly away from every
    /// obstacle and wall.
    pub fn is_free_point(&self, p: &Point) -> bool {
        self.point_clearance(p).map(|c| c > 0.0).unwrap_or(false)
    }

    /// True iff every vertex of the placed shape lies in the closed boundary.
    pub fn boundary_contains(&self, s: &ConvexShape, pl: &Placement) -> bool {
        s.vertices
            .iter()
            .all(|v| self.boundary.contains(&pl.apply(v), self.dim))
    }

    pub(crate) fn boundary_contains_placed(&self, placed: &ConvexShape) -> bool {
        placed.vertices.iter().all(|v| self.boundary.contains(v, self.dim))
    }

    /// True iff the placed shape touches any obstacle.
    pub fn collides(&self, s: &ConvexShape, pl: &Placement) -> bool {
        self.collides_placed(&s.transformed(pl))
    }

    pub(crate) fn collides_placed(&self, placed: &ConvexShape) -> bool {
        self.obstacles.iter().any(|o| placed_intersect(placed, o))
    }
}
