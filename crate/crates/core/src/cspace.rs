// SPDX-License-Identifier: Apache-2.0

//! Configuration-space layer: robot model, instrumented validity checks,
//! the distance metric, straight-line local planning and sampling.

use std::cmp::Ordering;
use std::f64::consts::PI;

use nalgebra::{Quaternion, UnitQuaternion};
use rand::Rng;

use crate::error::{GeometryError, PlanError};
use crate::geometry::{wrap_angle, ConvexShape, Dim, Placement, Point, Rotation, Workspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RotationFreedom {
    None,
    Planar,
    Spatial,
}

impl RotationFreedom {
    pub fn dof(self) -> usize {
        match self {
            RotationFreedom::None => 0,
            RotationFreedom::Planar => 1,
            RotationFreedom::Spatial => 3,
        }
    }
}

/// Rigid robot: a union of convex parts expressed in the robot frame.
#[derive(Clone, Debug, PartialEq)]
pub struct RobotModel {
    dim: Dim,
    parts: Vec<ConvexShape>,
    freedom: RotationFreedom,
    rotation_weight: f64,
}

impl RobotModel {
    pub fn new(dim: Dim, parts: Vec<ConvexShape>, freedom: RotationFreedom) -> Result<Self, GeometryError> {
        if parts.is_empty() {
            return Err(GeometryError::Degenerate);
        }
        if let Some(p) = parts.iter().find(|p| p.dim() != dim) {
            return Err(GeometryError::DimensionMismatch {
                expected: dim,
                found: p.dim(),
            });
        }
        match (dim, freedom) {
            (Dim::Two, RotationFreedom::Spatial) | (Dim::Three, RotationFreedom::Planar) => {
                return Err(GeometryError::DimensionMismatch {
                    expected: dim,
                    found: if dim == Dim::Two { Dim::Three } else { Dim::Two },
                })
            }
            _ => {}
        }
        let rotation_weight = parts.iter().map(ConvexShape::circumradius).fold(0.0, f64::max);
        Ok(RobotModel {
            dim,
            parts,
            freedom,
            rotation_weight,
        })
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn parts(&self) -> &[ConvexShape] {
        &self.parts
    }

    pub fn freedom(&self) -> RotationFreedom {
        self.freedom
    }

    /// Positional plus rotational degrees of freedom.
    pub fn dof(&self) -> usize {
        self.dim.count() + self.freedom.dof()
    }

    /// Scale applied to rotational displacement in the metric: the robot's
    /// circumradius about its reference point.
    pub fn rotation_weight(&self) -> f64 {
        self.rotation_weight
    }

    /// Checks that `q` has the shape this robot expects.
    pub fn conforms(&self, q: &Configuration) -> bool {
        let rot_ok = matches!(
            (self.freedom, &q.rotation),
            (RotationFreedom::None, Rotation::Identity)
                | (RotationFreedom::Planar, Rotation::Planar(_))
                | (RotationFreedom::Spatial, Rotation::Spatial(_))
        );
        let planar_ok = self.dim == Dim::Three || q.position.z() == 0.0;
        rot_ok && planar_ok && q.position.is_finite()
    }
}

/// A robot pose.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Configuration {
    pub position: Point,
    pub rotation: Rotation,
}

impl Configuration {
    pub fn new(position: Point, rotation: Rotation) -> Self {
        let rotation = match rotation {
            Rotation::Planar(t) => Rotation::Planar(wrap_angle(t)),
            r => r,
        };
        Configuration { position, rotation }
    }

    pub fn translation(position: Point) -> Self {
        Configuration {
            position,
            rotation: Rotation::Identity,
        }
    }

    pub fn planar(x: f64, y: f64, theta: f64) -> Self {
        Configuration::new(Point::new2(x, y), Rotation::Planar(theta))
    }

    pub fn placement(&self) -> Placement {
        Placement::new(self.position, self.rotation)
    }

    /// Straight-line interpolation with shortest-arc rotation. The endpoints
    /// are returned exactly at `t = 0` and `t = 1`.
    pub fn interpolate(&self, other: &Configuration, t: f64) -> Configuration {
        if t <= 0.0 {
            return *self;
        }
        if t >= 1.0 {
            return *other;
        }
        Configuration {
            position: self.position.lerp(&other.position, t),
            rotation: self.rotation.interpolate(&other.rotation, t),
        }
    }

    fn canonical_cmp(&self, other: &Configuration) -> Ordering {
        let key = |c: &Configuration| -> [f64; 7] {
            let r = match c.rotation {
                Rotation::Identity => [0.0; 4],
                Rotation::Planar(t) => [t, 0.0, 0.0, 0.0],
                Rotation::Spatial(q) => [q.w, q.i, q.j, q.k],
            };
            [
                c.position.0[0],
                c.position.0[1],
                c.position.0[2],
                r[0],
                r[1],
                r[2],
                r[3],
            ]
        };
        let (a, b) = (key(self), key(other));
        a.iter()
            .zip(&b)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    }
}

/// A start/goal pair. The goal counts as reached within `goal_tolerance`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Query {
    pub start: Configuration,
    pub goal: Configuration,
    pub goal_tolerance: f64,
}

/// Counts single-configuration validity tests.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ValidityCounter {
    calls: u64,
}

impl ValidityCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn calls(&self) -> u64 {
        self.calls
    }

    fn bump(&mut self) {
        self.calls += 1;
    }
}

/// Number of equal sub-segments that keeps spacing at or below `resolution`.
///
/// The small slack keeps exact multiples from gaining an extra segment to
/// rounding, so every prefix of a subdivided segment subdivides onto the same
/// points.
fn subdivisions(length: f64, resolution: f64) -> usize {
    ((length / resolution) - 1e-9).ceil().max(1.0) as usize
}

/// Workspace plus robot: everything needed to decide validity.
#[derive(Clone, Debug, PartialEq)]
pub struct Environment {
    pub workspace: Workspace,
    pub robot: RobotModel,
}

impl Environment {
    pub fn new(workspace: Workspace, robot: RobotModel) -> Result<Self, GeometryError> {
        if workspace.dim() != robot.dim() {
            return Err(GeometryError::DimensionMismatch {
                expected: workspace.dim(),
                found: robot.dim(),
            });
        }
        Ok(Environment { workspace, robot })
    }

    pub fn dim(&self) -> Dim {
        self.workspace.dim()
    }

    /// Default edge resolution: 1/100 of the shortest boundary side.
    pub fn default_resolution(&self) -> f64 {
        self.workspace.boundary().shortest_side(self.dim()) / 100.0
    }

    /// True iff the placed robot lies in the boundary and touches no
    /// obstacle. Always counts exactly one call.
    pub fn is_valid(&self, q: &Configuration, counter: &mut ValidityCounter) -> bool {
        counter.bump();
        let pl = q.placement();
        self.robot.parts.iter().all(|part| {
            let placed = part.transformed(&pl);
            self.workspace.boundary_contains_placed(&placed) && !self.workspace.collides_placed(&placed)
        })
    }

    /// Euclidean distance over position and weighted rotational displacement:
    /// `sqrt(|dp|^2 + (w * angle)^2)` with `w` the robot circumradius.
    pub fn distance(&self, a: &Configuration, b: &Configuration) -> f64 {
        let dp = a.position.distance(&b.position);
        let da = self.robot.rotation_weight * a.rotation.angle_to(&b.rotation);
        if da == 0.0 {
            dp
        } else {
            dp.hypot(da)
        }
    }

    /// True iff every configuration on the straight segment, at spacing no
    /// larger than `resolution` and including both endpoints, is valid.
    ///
    /// Segments are always walked from the canonically smaller endpoint so the
    /// result does not depend on argument order. Thin obstacles narrower than
    /// `resolution` can be stepped over.
    pub fn validate_edge(
        &self,
        a: &Configuration,
        b: &Configuration,
        resolution: f64,
        counter: &mut ValidityCounter,
    ) -> bool {
        let (lo, hi) = if a.canonical_cmp(b).is_le() { (a, b) } else { (b, a) };
        let n = subdivisions(self.distance(lo, hi), resolution);
        (0..=n).all(|i| self.is_valid(&lo.interpolate(hi, i as f64 / n as f64), counter))
    }

    /// Moves from `near` toward `rand`, at most `max_step`, and returns the
    /// furthest valid configuration reached, or `None` when the first step
    /// already fails.
    pub fn extend(
        &self,
        near: &Configuration,
        rand: &Configuration,
        max_step: f64,
        resolution: f64,
        counter: &mut ValidityCounter,
    ) -> Option<Configuration> {
        let full = self.distance(near, rand);
        if full == 0.0 {
            return None;
        }
        let target = if full <= max_step {
            *rand
        } else {
            near.interpolate(rand, max_step / full)
        };
        let n = subdivisions(self.distance(near, &target), resolution);
        let mut reached = None;
        for i in 1..=n {
            let q = near.interpolate(&target, i as f64 / n as f64);
            if !self.is_valid(&q, counter) {
                break;
            }
            reached = Some(q);
        }
        reached
    }

    /// Uniform position in the boundary box and uniform orientation; no
    /// validity guarantee.
    pub fn sample_uniform<R: Rng + ?Sized>(&self, rng: &mut R) -> Configuration {
        let b = self.workspace.boundary();
        let mut p = Point::ORIGIN;
        for k in 0..self.dim().count() {
            p.0[k] = b.min.0[k] + rng.random::<f64>() * b.extent(k);
        }
        Configuration::new(p, self.sample_rotation(rng))
    }

    /// Uniform position in the ball of `radius` about `center` (clamped to the
    /// boundary box) and uniform orientation; no validity guarantee.
    pub fn sample_in_region<R: Rng + ?Sized>(&self, center: &Point, radius: f64, rng: &mut R) -> Configuration {
        let d = self.dim().count();
        let offset = loop {
            let mut v = Point::ORIGIN;
            for k in 0..d {
                v.0[k] = 2.0 * rng.random::<f64>() - 1.0;
            }
            if v.dot(&v) <= 1.0 {
                break v;
            }
        };
        let p = self
            .workspace
            .boundary()
            .clamp(&(*center + offset * radius), self.dim());
        Configuration::new(p, self.sample_rotation(rng))
    }

    fn sample_rotation<R: Rng + ?Sized>(&self, rng: &mut R) -> Rotation {
        match self.robot.freedom {
            RotationFreedom::None => Rotation::Identity,
            RotationFreedom::Planar => Rotation::Planar(wrap_angle(-PI + 2.0 * PI * rng.random::<f64>())),
            RotationFreedom::Spatial => {
                // Shoemake's uniform unit quaternion
                let (u1, u2, u3) = (rng.random::<f64>(), rng.random::<f64>(), rng.random::<f64>());
                let (a, b) = ((1.0 - u1).sqrt(), u1.sqrt());
                let (t2, t3) = (2.0 * PI * u2, 2.0 * PI * u3);
                let q = Quaternion::new(b * t3.cos(), a * t2.sin(), a * t2.cos(), b * t3.sin());
                Rotation::Spatial(UnitQuaternion::from_quaternion(q))
            }
        }
    }

    /// Checks that `q` matches the robot model; used by planners at setup.
    pub fn check_configuration(&self, q: &Configuration) -> Result<(), PlanError> {
        if self.robot.conforms(q) {
            Ok(())
        } else {
            Err(PlanError::ConfigurationMismatch)
        }
    }
}

/// Index of the configuration closest to `q`; ties go to the lowest index.
pub fn nearest_neighbor<'a, I>(env: &Environment, vertices: I, q: &Configuration) -> Option<usize>
where
    I: IntoIterator<Item = &'a Configuration>,
{
    let mut best: Option<(usize, f64)> = None;
    for (i, v) in vertices.into_iter().enumerate() {
        let d = env.distance(v, q);
        if best.is_none_or(|(_, bd)| d < bd) {
            best = Some((i, d));
        }
    }
    best.map(|(i, _)| i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Aabb;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn boxed(dim: Dim, lo: Point, hi: Point) -> ConvexShape {
        ConvexShape::aabb(dim, lo, hi).unwrap()
    }

    fn env_2d(obstacles: Vec<ConvexShape>, robot: ConvexShape, freedom: RotationFreedom) -> Environment {
        let ws = Workspace::new(
            Dim::Two,
            Aabb::new(Point::new2(0.0, 0.0), Point::new2(10.0, 10.0)),
            obstacles,
        )
        .unwrap();
        Environment::new(ws, RobotModel::new(Dim::Two, vec![robot], freedom).unwrap()).unwrap()
    }

    fn unit_robot() -> ConvexShape {
        ConvexShape::centered_box(Dim::Two, Point::new2(1.0, 1.0)).unwrap()
    }

    fn tiny_robot() -> ConvexShape {
        ConvexShape::centered_box(Dim::Two, Point::new2(0.1, 0.1)).unwrap()
    }

    fn at(x: f64, y: f64) -> Configuration {
        Configuration::translation(Point::new2(x, y))
    }

    #[test]
    fn validity_in_open_and_blocked_space() {
        let obstacle = boxed(Dim::Two, Point::new2(2.0, 2.0), Point::new2(3.0, 3.0));
        let env = env_2d(vec![obstacle], unit_robot(), RotationFreedom::None);
        let mut c = ValidityCounter::new();
        assert!(env.is_valid(&at(5.0, 5.0), &mut c));
        assert!(!env.is_valid(&at(2.5, 2.5), &mut c));
        assert!(!env.is_valid(&at(9.8, 5.0), &mut c));
        assert_eq!(c.calls(), 3);
    }

    #[test]
    fn robot_at_sixty_percent_of_passage_width() {
        // passage of width w = 1 between two walls, robot 0.6 wide
        let w = 1.0;
        let walls = vec![
            boxed(Dim::Two, Point::new2(4.0, 0.0), Point::new2(6.0, 4.5)),
            boxed(Dim::Two, Point::new2(4.0, 4.5 + w), Point::new2(6.0, 10.0)),
        ];
        let robot = ConvexShape::centered_box(Dim::Two, Point::new2(0.3, 0.6 * w)).unwrap();
        let env = env_2d(walls, robot, RotationFreedom::None);
        let mut c = ValidityCounter::new();
        assert!(env.is_valid(&at(5.0, 5.0), &mut c));
        // beyond a 0.2w offset the robot reaches into the wall
        assert!(!env.is_valid(&at(5.0, 5.0 + 0.2 * w + 1e-6), &mut c));
        assert!(!env.is_valid(&at(5.0, 5.0 - 0.2 * w - 1e-6), &mut c));
        assert!(env.is_valid(&at(5.0, 5.0 + 0.2 * w - 1e-6), &mut c));
    }

    #[test]
    fn distance_examples() {
        let env = env_2d(vec![], unit_robot(), RotationFreedom::Planar);
        let a = Configuration::planar(0.0, 0.0, 0.0);
        assert_eq!(env.distance(&a, &Configuration::planar(3.0, 4.0, 0.0)), 5.0);
        assert_eq!(env.distance(&a, &a), 0.0);
        let lambda = env.robot.rotation_weight();
        assert!((lambda - 0.5f64.sqrt()).abs() < 1e-12);
        let turned = Configuration::planar(0.0, 0.0, PI / 2.0);
        assert!((env.distance(&a, &turned) - lambda * PI / 2.0).abs() < 1e-12);
        // shortest arc across the branch cut
        let b = Configuration::planar(0.0, 0.0, 3.0);
        let c = Configuration::planar(0.0, 0.0, -3.0);
        assert!((env.distance(&b, &c) - lambda * (2.0 * PI - 6.0)).abs() < 1e-12);
    }

    #[test]
    fn spatial_distance_uses_geodesic_angle() {
        let ws = Workspace::new(
            Dim::Three,
            Aabb::new(Point::ORIGIN, Point::new3(10.0, 10.0, 10.0)),
            vec![],
        )
        .unwrap();
        let cube = ConvexShape::centered_box(Dim::Three, Point::new3(1.0, 1.0, 1.0)).unwrap();
        let env = Environment::new(
            ws,
            RobotModel::new(Dim::Three, vec![cube], RotationFreedom::Spatial).unwrap(),
        )
        .unwrap();
        let p = Point::new3(5.0, 5.0, 5.0);
        let a = Configuration::new(p, Rotation::Spatial(UnitQuaternion::identity()));
        let q = UnitQuaternion::from_axis_angle(&nalgebra::Vector3::y_axis(), 1.0);
        let b = Configuration::new(p, Rotation::Spatial(q));
        let expected = env.robot.rotation_weight() * 1.0;
        assert!((env.distance(&a, &b) - expected).abs() < 1e-12);
        // q and -q are the same rotation
        let neg = Configuration::new(p, Rotation::Spatial(UnitQuaternion::new_unchecked(-q.into_inner())));
        assert!((env.distance(&a, &neg) - expected).abs() < 1e-12);
    }

    #[test]
    fn edge_validation_examples() {
        let obstacle = boxed(Dim::Two, Point::new2(4.0, 0.0), Point::new2(6.0, 6.0));
        let env = env_2d(vec![obstacle], tiny_robot(), RotationFreedom::None);
        let mut c = ValidityCounter::new();
        assert!(env.validate_edge(&at(1.0, 8.0), &at(9.0, 8.0), 0.1, &mut c));
        assert!(!env.validate_edge(&at(1.0, 3.0), &at(9.0, 3.0), 0.1, &mut c));
    }

    #[test]
    fn edge_validation_can_step_over_thin_obstacles() {
        let sliver = boxed(Dim::Two, Point::new2(5.01, 0.0), Point::new2(5.02, 10.0));
        let env = env_2d(
            vec![sliver],
            ConvexShape::centered_box(Dim::Two, Point::new2(0.001, 0.001)).unwrap(),
            RotationFreedom::None,
        );
        let mut c = ValidityCounter::new();
        // samples land at x = 5.0 and x = 5.5, both clear of the sliver
        assert!(env.validate_edge(&at(4.5, 5.0), &at(5.5, 5.0), 0.5, &mut c));
        assert!(!env.validate_edge(&at(4.5, 5.0), &at(5.5, 5.0), 0.005, &mut c));
    }

    #[test]
    fn extend_examples() {
        let env = env_2d(vec![], tiny_robot(), RotationFreedom::None);
        let mut c = ValidityCounter::new();
        assert_eq!(
            env.extend(&at(1.0, 1.0), &at(9.0, 1.0), 4.0, 0.1, &mut c),
            Some(at(5.0, 1.0))
        );
        assert_eq!(
            env.extend(&at(1.0, 1.0), &at(2.0, 2.0), 4.0, 0.1, &mut c),
            Some(at(2.0, 2.0))
        );
    }

    #[test]
    fn extend_stops_before_wall() {
        // step-walk oracle: positions 0.5, 1.0, 1.5 are clear of the wall at
        // x = 2, the 2.0 step touches it
        let ws = Workspace::new(
            Dim::Two,
            Aabb::new(Point::new2(-1.0, -1.0), Point::new2(10.0, 10.0)),
            vec![boxed(Dim::Two, Point::new2(2.0, -1.0), Point::new2(3.0, 10.0))],
        )
        .unwrap();
        let env = Environment::new(
            ws,
            RobotModel::new(Dim::Two, vec![tiny_robot()], RotationFreedom::None).unwrap(),
        )
        .unwrap();
        let oracle = (1..=8)
            .map(|i| 0.5 * i as f64)
            .take_while(|x| x + 0.05 < 2.0)
            .last()
            .unwrap();
        assert_eq!(oracle, 1.5);
        let mut c = ValidityCounter::new();
        let q = env.extend(&at(0.0, 0.0), &at(10.0, 0.0), 4.0, 0.5, &mut c).unwrap();
        assert_eq!(q, at(oracle, 0.0));
        assert_eq!(c.calls(), 4);
        // first step already blocked
        let stuck = env.extend(&at(1.9, 0.0), &at(10.0, 0.0), 4.0, 0.5, &mut c);
        assert_eq!(stuck, None);
    }

    #[test]
    fn nearest_neighbor_examples() {
        let env = env_2d(vec![], unit_robot(), RotationFreedom::None);
        let single = [at(3.0, 3.0)];
        assert_eq!(nearest_neighbor(&env, &single, &at(9.0, 9.0)), Some(0));
        let two = [at(0.0, 0.0), at(5.0, 0.0)];
        assert_eq!(nearest_neighbor(&env, &two, &at(1.0, 0.0)), Some(0));
        let mut tied = vec![at(9.0, 9.0); 8];
        tied[3] = at(4.0, 5.0);
        tied[7] = at(6.0, 5.0);
        assert_eq!(nearest_neighbor(&env, &tied, &at(5.0, 5.0)), Some(3));
        assert_eq!(nearest_neighbor(&env, &[], &at(5.0, 5.0)), None);
    }

    #[test]
    fn uniform_samples_are_centered_and_reproducible() {
        let env = env_2d(vec![], unit_robot(), RotationFreedom::None);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let samples: Vec<_> = (0..10_000).map(|_| env.sample_uniform(&mut rng)).collect();
        let mx = samples.iter().map(|q| q.position.x()).sum::<f64>() / 1e4;
        let my = samples.iter().map(|q| q.position.y()).sum::<f64>() / 1e4;
        assert!((4.5..=5.5).contains(&mx) && (4.5..=5.5).contains(&my));
        assert!(samples.iter().all(|q| q.rotation == Rotation::Identity));
        let mut rng2 = ChaCha8Rng::seed_from_u64(11);
        let again: Vec<_> = (0..10_000).map(|_| env.sample_uniform(&mut rng2)).collect();
        assert_eq!(samples, again);
    }

    #[test]
    fn region_samples_stay_in_ball_and_boundary() {
        let env = env_2d(vec![], unit_robot(), RotationFreedom::Planar);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let c = Point::new2(5.0, 5.0);
        for _ in 0..10_000 {
            let q = env.sample_in_region(&c, 1.5, &mut rng);
            assert!(q.position.distance(&c) <= 1.5);
            let Rotation::Planar(t) = q.rotation else {
                panic!("expected planar")
            };
            assert!(t > -PI && t <= PI);
        }
        let q = env.sample_in_region(&c, 1e-9, &mut rng);
        assert!(q.position.distance(&c) <= 1e-9);
        let wall = Point::new2(10.0, 5.0);
        for _ in 0..1_000 {
            let q = env.sample_in_region(&wall, 2.0, &mut rng);
            assert!(env.workspace.boundary().contains(&q.position, Dim::Two));
        }
    }

    #[test]
    fn spatial_samples_are_unit_quaternions() {
        let ws = Workspace::new(Dim::Three, Aabb::new(Point::ORIGIN, Point::new3(1.0, 1.0, 1.0)), vec![]).unwrap();
        let cube = ConvexShape::centered_box(Dim::Three, Point::new3(0.1, 0.1, 0.1)).unwrap();
        let env = Environment::new(
            ws,
            RobotModel::new(Dim::Three, vec![cube], RotationFreedom::Spatial).unwrap(),
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let Rotation::Spatial(q) = env.sample_uniform(&mut rng).rotation else {
                panic!()
            };
            assert!((q.quaternion().norm() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn robot_model_rejects_mismatched_freedom() {
        let r = RobotModel::new(Dim::Two, vec![unit_robot()], RotationFreedom::Spatial);
        assert!(r.is_err());
        let ok = RobotModel::new(Dim::Two, vec![unit_robot()], RotationFreedom::Planar).unwrap();
        assert_eq!(ok.dof(), 3);
    }

    fn cluttered() -> Environment {
        env_2d(
            vec![
                boxed(Dim::Two, Point::new2(2.0, 2.0), Point::new2(4.0, 3.0)),
                boxed(Dim::Two, Point::new2(6.0, 5.0), Point::new2(7.0, 9.0)),
                ConvexShape::convex(
                    Dim::Two,
                    vec![Point::new2(1.0, 6.0), Point::new2(3.0, 6.5), Point::new2(2.0, 8.0)],
                )
                .unwrap(),
            ],
            ConvexShape::centered_box(Dim::Two, Point::new2(0.4, 0.2)).unwrap(),
            RotationFreedom::Planar,
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1_000))]

        #[test]
        fn edge_validation_is_symmetric(
            a in (0.0..10.0f64, 0.0..10.0f64, -PI..PI),
            b in (0.0..10.0f64, 0.0..10.0f64, -PI..PI),
        ) {
            let env = cluttered();
            let qa = Configuration::planar(a.0, a.1, a.2);
            let qb = Configuration::planar(b.0, b.1, b.2);
            let (mut c1, mut c2) = (ValidityCounter::new(), ValidityCounter::new());
            prop_assert_eq!(
                env.validate_edge(&qa, &qb, 0.1, &mut c1),
                env.validate_edge(&qb, &qa, 0.1, &mut c2)
            );
            prop_assert_eq!(c1, c2);
        }

        #[test]
        fn extension_stays_valid_and_bounded(
            a in (0.5..9.5f64, 0.5..9.5f64, -PI..PI),
            b in (0.0..10.0f64, 0.0..10.0f64, -PI..PI),
            step in 0.2..4.0f64,
        ) {
            let env = cluttered();
            let near = Configuration::planar(a.0, a.1, a.2);
            let mut c = ValidityCounter::new();
            prop_assume!(env.is_valid(&near, &mut c));
            let rand = Configuration::planar(b.0, b.1, b.2);
            if let Some(q) = env.extend(&near, &rand, step, 0.1, &mut c) {
                prop_assert!(env.is_valid(&q, &mut c));
                prop_assert!(env.distance(&near, &q) <= step + 0.1 + 1e-12);
                // the stored edge re-validates at the same resolution
                prop_assert!(env.validate_edge(&near, &q, 0.1, &mut c));
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]

        #[test]
        fn distance_obeys_triangle_inequality(
            a in (0.0..10.0f64, 0.0..10.0f64, -PI..PI),
            b in (0.0..10.0f64, 0.0..10.0f64, -PI..PI),
            c in (0.0..10.0f64, 0.0..10.0f64, -PI..PI),
        ) {
            let env = cluttered();
            let (qa, qb, qc) = (
                Configuration::planar(a.0, a.1, a.2),
                Configuration::planar(b.0, b.1, b.2),
                Configuration::planar(c.0, c.1, c.2),
            );
            prop_assert!(env.distance(&qa, &qc) <= env.distance(&qa, &qb) + env.distance(&qb, &qc) + 1e-9);
            prop_assert!((env.distance(&qa, &qb) - env.distance(&qb, &qa)).abs() <= 1e-12);
        }
    }
}
