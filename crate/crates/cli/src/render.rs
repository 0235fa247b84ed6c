// SPDX-License-Identifier: Apache-2.0

//! Deterministic SVG pictures of a scene, its skeleton, and a planner tree.

use std::fmt::Write;

use hasrrt_core::scene::{configuration_from_coords, PlanReport, Scene};
use hasrrt_core::{Configuration, ConvexShape, Dim, Point, WorkspaceSkeleton};

use crate::CliError;

const CANVAS: f64 = 800.0;
const MARGIN: f64 = 10.0;

/// Which two workspace axes to draw.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Projection {
    Xy,
    Xz,
    Yz,
}

impl Projection {
    fn axes(self) -> (usize, usize) {
        match self {
            Projection::Xy => (0, 1),
            Projection::Xz => (0, 2),
            Projection::Yz => (1, 2),
        }
    }
}

impl std::str::FromStr for Projection {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "xy" => Ok(Projection::Xy),
            "xz" => Ok(Projection::Xz),
            "yz" => Ok(Projection::Yz),
            _ => Err(format!("unknown projection {s:?}, expected xy, xz or yz")),
        }
    }
}

struct Frame {
    axes: (usize, usize),
    min: (f64, f64),
    max_v: f64,
    scale: f64,
}

impl Frame {
    fn map(&self, p: &Point) -> (f64, f64) {
        let (i, j) = self.axes;
        (
            MARGIN + (p.0[i] - self.min.0) * self.scale,
            MARGIN + (self.max_v - p.0[j]) * self.scale,
        )
    }
}

fn hull2(mut pts: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: (f64, f64), a: (f64, f64), b: (f64, f64)| (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
    let mut lower: Vec<(f64, f64)> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<(f64, f64)> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn points_attr(pts: &[(f64, f64)]) -> String {
    pts.iter()
        .map(|(x, y)| format!("{x:.3},{y:.3}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn polygon(out: &mut String, frame: &Frame, shape: &ConvexShape, class: &str) {
    let pts = hull2(shape.vertices().iter().map(|p| frame.map(p)).collect());
    let _ = writeln!(out, r#"<polygon class="{class}" points="{}"/>"#, points_attr(&pts));
}

fn robot_at(out: &mut String, frame: &Frame, scene: &Scene, q: &Configuration, class: &str) {
    for part in scene.env.robot.parts() {
        polygon(out, frame, &part.transformed(&q.placement()), class);
    }
    let (x, y) = frame.map(&q.position);
    let _ = writeln!(out, r#"<circle class="{class}-marker" cx="{x:.3}" cy="{y:.3}" r="4"/>"#);
}

/// Renders `scene` with optional skeleton and run report. 3D scenes need an
/// explicit projection.
pub fn render_svg(
    scene: &Scene,
    skeleton: Option<&WorkspaceSkeleton>,
    report: Option<&PlanReport>,
    projection: Option<Projection>,
) -> Result<String, CliError> {
    let projection = match (scene.dim(), projection) {
        (Dim::Two, None | Some(Projection::Xy)) => Projection::Xy,
        (Dim::Two, Some(p)) => {
            return Err(CliError::Invalid(format!("projection {p:?} needs a 3D scene")));
        }
        (Dim::Three, Some(p)) => p,
        (Dim::Three, None) => {
            return Err(CliError::Invalid(
                "3D scenes render only with an axis projection; pass --project xy, xz or yz".into(),
            ));
        }
    };
    let axes = projection.axes();
    let b = scene.env.workspace.boundary();
    let (w, h) = (b.extent(axes.0), b.extent(axes.1));
    let scale = (CANVAS - 2.0 * MARGIN) / w.max(h);
    let frame = Frame {
        axes,
        min: (b.min.0[axes.0], b.min.0[axes.1]),
        max_v: b.max.0[axes.1],
        scale,
    };
    let (width, height) = (w * scale + 2.0 * MARGIN, h * scale + 2.0 * MARGIN);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.3} {height:.3}">"#
    );
    out.push_str(concat!(
        "<style>\n",
        ".boundary{fill:#fff;stroke:#000;stroke-width:2}\n",
        ".obstacle{fill:#777;stroke:#333}\n",
        ".skeleton{fill:none;stroke:#1f5fbf;stroke-width:2;stroke-dasharray:6 3}\n",
        ".skeleton-vertex{fill:#1f5fbf}\n",
        ".tree{stroke:#2a2;stroke-width:0.8}\n",
        ".path{fill:none;stroke:#d22;stroke-width:3}\n",
        ".start,.goal{fill-opacity:0.4}\n",
        ".start{fill:#2a2}.goal{fill:#d22}\n",
        ".start-marker{fill:#060}.goal-marker{fill:#900}\n",
        "</style>\n"
    ));

    let (x0, y0) = frame.map(&b.min);
    let (x1, y1) = frame.map(&b.max);
    let _ = writeln!(out, "<g id=\"boundary\">");
    let _ = writeln!(
        out,
        r#"<rect class="boundary" x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}"/>"#,
        x0.min(x1),
        y0.min(y1),
        (x1 - x0).abs(),
        (y1 - y0).abs()
    );
    out.push_str("</g>\n<g id=\"obstacles\">\n");
    for o in scene.env.workspace.obstacles() {
        polygon(&mut out, &frame, o, "obstacle");
    }
    out.push_str("</g>\n");

    if let Some(s) = skeleton {
        out.push_str("<g id=\"skeleton\">\n");
        for e in s.edges() {
            let pts: Vec<_> = e.intermediates.iter().map(|p| frame.map(p)).collect();
            let _ = writeln!(out, r#"<polyline class="skeleton" points="{}"/>"#, points_attr(&pts));
        }
        for v in s.vertices().values() {
            let (x, y) = frame.map(&v.position);
            let _ = writeln!(
                out,
                r#"<circle class="skeleton-vertex" cx="{x:.3}" cy="{y:.3}" r="3"/>"#
            );
        }
        out.push_str("</g>\n");
    }

    if let Some(r) = report {
        let robot = &scene.env.robot;
        let parse = |c: &Vec<f64>| configuration_from_coords(robot, c).map_err(CliError::from);
        let tree = r
            .tree
            .as_ref()
            .ok_or_else(|| CliError::Invalid("run report has no tree; write it with plan --out".into()))?;
        let verts = tree.vertices.iter().map(parse).collect::<Result<Vec<_>, _>>()?;
        out.push_str("<g id=\"tree\">\n");
        for (child, parent) in tree.parents.iter().enumerate() {
            let Some(p) = parent else { continue };
            let (Some(a), Some(b)) = (verts.get(child), verts.get(*p)) else {
                return Err(CliError::Invalid(format!("tree vertex {child} has unknown parent {p}")));
            };
            let (ax, ay) = frame.map(&a.position);
            let (bx, by) = frame.map(&b.position);
            let _ = writeln!(
                out,
                r#"<line class="tree" x1="{ax:.3}" y1="{ay:.3}" x2="{bx:.3}" y2="{by:.3}"/>"#
            );
        }
        out.push_str("</g>\n");
        if !r.path.is_empty() {
            let path = r.path.iter().map(parse).collect::<Result<Vec<_>, _>>()?;
            let pts: Vec<_> = path.iter().map(|q| frame.map(&q.position)).collect();
            let _ = writeln!(
                out,
                "<g id=\"path\">\n<polyline class=\"path\" points=\"{}\"/>\n</g>",
                points_attr(&pts)
            );
        }
    }

    out.push_str("<g id=\"query\">\n");
    robot_at(&mut out, &frame, scene, &scene.query.start, "start");
    robot_at(&mut out, &frame, scene, &scene.query.goal, "goal");
    out.push_str("</g>\n</svg>\n");
    Ok(out)
}
