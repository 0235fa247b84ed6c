// SPDX-License-Identifier: Apache-2.0

//! In-memory fixtures shared by the criterion benchmarks.

use hasrrt_core::cspace::{RobotModel, RotationFreedom};
use hasrrt_core::{Aabb, Configuration, ConvexShape, Dim, Environment, Point, Query, Workspace, WorkspaceSkeleton};

/// A 10 x 10 room split by a thick wall with a single 1.0-wide gap, a small
/// planar rectangle robot, and a three-vertex skeleton through the gap.
pub fn gap_fixture() -> (Environment, Query, WorkspaceSkeleton) {
    let wall = |y0: f64, y1: f64| ConvexShape::aabb(Dim::Two, Point::new2(4.0, y0), Point::new2(6.0, y1)).unwrap();
    let ws = Workspace::new(
        Dim::Two,
        Aabb::new(Point::new2(0.0, 0.0), Point::new2(10.0, 10.0)),
        vec![wall(0.0, 4.5), wall(5.5, 10.0)],
    )
    .unwrap();
    let robot = RobotModel::new(
        Dim::Two,
        vec![ConvexShape::centered_box(Dim::Two, Point::new2(0.48, 0.36)).unwrap()],
        RotationFreedom::Planar,
    )
    .unwrap();
    let env = Environment::new(ws, robot).unwrap();
    let query = Query {
        start: Configuration::planar(1.5, 5.0, 0.0),
        goal: Configuration::planar(8.5, 5.0, 0.0),
        goal_tolerance: 0.5,
    };
    let mut skel = WorkspaceSkeleton::new(Dim::Two).with_spacing(0.25);
    let a = skel.add_vertex(Point::new2(1.5, 5.0));
    let b = skel.add_vertex(Point::new2(5.0, 5.0));
    let c = skel.add_vertex(Point::new2(8.5, 5.0));
    skel.add_straight_edge(a, b).unwrap();
    skel.add_straight_edge(b, c).unwrap();
    let skel = skel.annotate_clearance(&env.workspace);
    (env, query, skel)
}
