// SPDX-License-Identifier: Apache-2.0

//! Block-grid composition: each block is a room of side `block_side` with
//! wall slabs on its closed faces. Adjacent open faces form a shared doorway
//! whose centre becomes a single skeleton vertex.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{straight_intermediates, SkeletonEdge, VertexId, WorkspaceSkeleton};
use crate::error::SkeletonError;
use crate::geometry::{Aabb, ConvexShape, Dim, Point, Workspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Face {
    pub axis: usize,
    pub positive: bool,
}

impl Face {
    pub const ALL: [Face; 6] = [
        Face {
            axis: 0,
            positive: false,
        },
        Face {
            axis: 0,
            positive: true,
        },
        Face {
            axis: 1,
            positive: false,
        },
        Face {
            axis: 1,
            positive: true,
        },
        Face {
            axis: 2,
            positive: false,
        },
        Face {
            axis: 2,
            positive: true,
        },
    ];

    fn opposite(self) -> Face {
        Face {
            axis: self.axis,
            positive: !self.positive,
        }
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.positive { '+' } else { '-' };
        write!(f, "{sign}{}", ['x', 'y', 'z'][self.axis])
    }
}

impl FromStr for Face {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut chars = s.chars();
        let positive = match chars.next() {
            Some('+') => true,
            Some('-') => false,
            _ => return Err(format!("bad face {s:?}, expected one of +x -x +y -y +z -z")),
        };
        let axis = match (chars.next(), chars.next()) {
            (Some('x'), None) => 0,
            (Some('y'), None) => 1,
            (Some('z'), None) => 2,
            _ => return Err(format!("bad face {s:?}, expected one of +x -x +y -y +z -z")),
        };
        Ok(Face { axis, positive })
    }
}

impl TryFrom<String> for Face {
    type Error = String;
    fn try_from(s: String) -> Result<Self, String> {
        s.parse()
    }
}

impl From<Face> for String {
    fn from(f: Face) -> String {
        f.to_string()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockSpec {
    /// Integer grid coordinates, one per workspace axis.
    pub at: Vec<i64>,
    pub open: BTreeSet<Face>,
}

/// A grid of blocks plus the construction parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockGrid {
    pub dim: Dim,
    pub block_side: f64,
    /// Defaults to `block_side / 10`.
    pub wall_thickness: Option<f64>,
    /// Width of the doorway cut into each open face; `None` leaves the face
    /// fully open.
    pub opening_width: Option<f64>,
    /// Defaults to `block_side / 8`.
    pub spacing: Option<f64>,
    pub blocks: Vec<BlockSpec>,
}

impl BlockGrid {
    pub fn wall_thickness(&self) -> f64 {
        self.wall_thickness.unwrap_or(self.block_side / 10.0)
    }

    pub fn spacing(&self) -> f64 {
        self.spacing.unwrap_or(self.block_side / 8.0)
    }

    fn validate(&self) -> Result<BTreeMap<Vec<i64>, &BlockSpec>, SkeletonError> {
        let d = self.dim.count();
        let side = self.block_side;
        if !(side > 0.0 && side.is_finite()) {
            return Err(SkeletonError::BadGrid("block_side must be positive".into()));
        }
        let t = self.wall_thickness();
        if !(t > 0.0 && t < side / 2.0) {
            return Err(SkeletonError::BadGrid(
                "wall thickness must lie in (0, block_side / 2)".into(),
            ));
        }
        if let Some(w) = self.opening_width {
            if !(w > 0.0 && w < side) {
                return Err(SkeletonError::BadGrid(
                    "opening_width must lie in (0, block_side)".into(),
                ));
            }
        }
        if !(self.spacing() > 0.0) {
            return Err(SkeletonError::BadGrid("spacing must be positive".into()));
        }
        if self.blocks.is_empty() {
            return Err(SkeletonError::BadGrid("no blocks".into()));
        }
        let mut by_pos = BTreeMap::new();
        for b in &self.blocks {
            if b.at.len() != d {
                return Err(SkeletonError::BadGrid(format!(
                    "block {:?} has {} coordinates in a {} grid",
                    b.at,
                    b.at.len(),
                    self.dim
                )));
            }
            if let Some(f) = b.open.iter().find(|f| f.axis >= d) {
                return Err(SkeletonError::BadGrid(format!(
                    "block {:?} opens {f} in a {} grid",
                    b.at, self.dim
                )));
            }
            if by_pos.insert(b.at.clone(), b).is_some() {
                return Err(SkeletonError::DuplicateBlock(b.at.clone()));
            }
        }
        if self.blocks.iter().all(|b| b.open.is_empty()) {
            return Err(SkeletonError::NoOpening);
        }
        for (pos, b) in &by_pos {
            for axis in 0..d {
                let mut n = pos.clone();
                n[axis] += 1;
                if let Some(nb) = by_pos.get(&n) {
                    let here = b.open.contains(&Face { axis, positive: true });
                    let there = nb.open.contains(&Face { axis, positive: false });
                    if here != there {
                        return Err(SkeletonError::FaceMismatch { a: pos.clone(), b: n });
                    }
                }
            }
        }
        Ok(by_pos)
    }
}

/// Builds the walled environment and its skeleton: a centre vertex per open
/// block, one vertex per open face (shared between neighbours), and straight
/// centre-to-face edges.
pub fn compose_blocks(grid: &BlockGrid) -> Result<(Workspace, WorkspaceSkeleton), SkeletonError> {
    let by_pos = grid.validate()?;
    let d = grid.dim.count();
    let side = grid.block_side;
    let t = grid.wall_thickness();

    let corner = |at: &[i64]| {
        let mut lo = Point::ORIGIN;
        for (c, &a) in lo.0.iter_mut().zip(at).take(d) {
            *c = a as f64 * side;
        }
        lo
    };
    let mut bmin = Point([f64::INFINITY; 3]);
    let mut bmax = Point([f64::NEG_INFINITY; 3]);
    for pos in by_pos.keys() {
        let lo = corner(pos);
        for k in 0..d {
            bmin.0[k] = bmin.0[k].min(lo.0[k]);
            bmax.0[k] = bmax.0[k].max(lo.0[k] + side);
        }
    }
    for k in d..3 {
        bmin.0[k] = 0.0;
        bmax.0[k] = 0.0;
    }

    let mut obstacles = Vec::new();
    let mut push_box = |lo: Point, hi: Point| -> Result<(), SkeletonError> {
        obstacles.push(ConvexShape::aabb(grid.dim, lo, hi)?);
        Ok(())
    };
    for (pos, b) in &by_pos {
        let lo = corner(pos);
        let mut hi = lo;
        for k in 0..d {
            hi.0[k] += side;
        }
        if b.open.is_empty() {
            push_box(lo, hi)?;
            continue;
        }
        for face in Face::ALL.iter().filter(|f| f.axis < d) {
            let mut slab_lo = lo;
            let mut slab_hi = hi;
            if face.positive {
                slab_lo.0[face.axis] = hi.0[face.axis] - t;
            } else {
                slab_hi.0[face.axis] = lo.0[face.axis] + t;
            }
            if !b.open.contains(face) {
                push_box(slab_lo, slab_hi)?;
                continue;
            }
            let Some(w) = grid.opening_width else { continue };
            // frame around a centred doorway of width w
            let others: Vec<usize> = (0..d).filter(|&k| k != face.axis).collect();
            let c = lo + (hi - lo) * 0.5;
            let (door_lo, door_hi) = (
                others.iter().map(|&k| c.0[k] - w / 2.0).collect::<Vec<_>>(),
                others.iter().map(|&k| c.0[k] + w / 2.0).collect::<Vec<_>>(),
            );
            let k0 = others[0];
            let mut a_hi = slab_hi;
            a_hi.0[k0] = door_lo[0];
            push_box(slab_lo, a_hi)?;
            let mut b_lo = slab_lo;
            b_lo.0[k0] = door_hi[0];
            push_box(b_lo, slab_hi)?;
            if let Some(&k1) = others.get(1) {
                let mut mid_lo = slab_lo;
                let mut mid_hi = slab_hi;
                mid_lo.0[k0] = door_lo[0];
                mid_hi.0[k0] = door_hi[0];
                let mut below = mid_hi;
                below.0[k1] = door_lo[1];
                push_box(mid_lo, below)?;
                let mut above = mid_lo;
                above.0[k1] = door_hi[1];
                push_box(above, mid_hi)?;
            }
        }
    }
    let workspace = Workspace::new(grid.dim, Aabb::new(bmin, bmax), obstacles)?;

    let spacing = grid.spacing();
    let mut skeleton = WorkspaceSkeleton::new(grid.dim).with_spacing(spacing);
    // shared faces are keyed by the lower block's coordinates and the axis
    let mut face_vertex: BTreeMap<(Vec<i64>, usize), VertexId> = BTreeMap::new();
    for (pos, b) in &by_pos {
        if b.open.is_empty() {
            continue;
        }
        let lo = corner(pos);
        let mut center = lo;
        for k in 0..d {
            center.0[k] += side / 2.0;
        }
        let center_id = skeleton.add_vertex(center);
        for face in Face::ALL.iter().filter(|f| b.open.contains(f)) {
            let mut key_pos = pos.clone();
            if !face.positive {
                key_pos[face.axis] -= 1;
            }
            let key = (key_pos, face.axis);
            let mut at = center;
            at.0[face.axis] += if face.positive { side / 2.0 } else { -side / 2.0 };
            let fid = match face_vertex.get(&key) {
                Some(&id) => id,
                None => {
                    let id = skeleton.add_vertex(at);
                    face_vertex.insert(key, id);
                    id
                }
            };
            debug_assert!(face.opposite() != *face);
            skeleton.push_edge(SkeletonEdge {
                source: center_id,
                target: fid,
                intermediates: straight_intermediates(&center, &at, spacing),
                min_clearance: None,
            });
        }
    }
    let skeleton = skeleton.annotate_clearance(&workspace);
    Ok((workspace, skeleton))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn faces(list: &[&str]) -> BTreeSet<Face> {
        list.iter().map(|s| s.parse().unwrap()).collect()
    }

    fn grid2(blocks: &[((i64, i64), &[&str])]) -> BlockGrid {
        BlockGrid {
            dim: Dim::Two,
            block_side: 4.0,
            wall_thickness: None,
            opening_width: None,
            spacing: None,
            blocks: blocks
                .iter()
                .map(|(at, open)| BlockSpec {
                    at: vec![at.0, at.1],
                    open: faces(open),
                })
                .collect(),
        }
    }

    fn degrees(s: &WorkspaceSkeleton) -> BTreeMap<VertexId, usize> {
        let mut deg: BTreeMap<VertexId, usize> = s.vertices().keys().map(|&k| (k, 0)).collect();
        for e in s.edges() {
            *deg.get_mut(&e.source).unwrap() += 1;
            *deg.get_mut(&e.target).unwrap() += 1;
        }
        deg
    }

    #[test]
    fn face_names_round_trip() {
        for f in Face::ALL {
            assert_eq!(f.to_string().parse::<Face>().unwrap(), f);
        }
        assert!("x".parse::<Face>().is_err());
        assert!("+w".parse::<Face>().is_err());
    }

    #[test]
    fn single_block_with_two_openings() {
        let (ws, s) = compose_blocks(&grid2(&[((0, 0), &["+x", "-x"])])).unwrap();
        assert_eq!(s.vertices().len(), 3);
        assert_eq!(s.edges().len(), 2);
        // closed faces -y and +y become walls
        assert_eq!(ws.obstacles().len(), 2);
        s.validate().unwrap();
        assert_eq!(s.total_length(), 4.0);
    }

    #[test]
    fn two_blocks_share_one_face_vertex() {
        let (_, s) = compose_blocks(&grid2(&[((0, 0), &["+x"]), ((1, 0), &["-x"])])).unwrap();
        // hand enumeration: two centres plus the merged face vertex
        assert_eq!(s.vertices().len(), 3);
        assert_eq!(s.edges().len(), 2);
        assert!((s.total_length() - 4.0).abs() < 1e-12);
        let deg = degrees(&s);
        assert_eq!(deg.values().filter(|&&d| d == 2).count(), 1);
        // every intermediate sits in free space
        let (ws, _) = compose_blocks(&grid2(&[((0, 0), &["+x"]), ((1, 0), &["-x"])])).unwrap();
        for e in s.edges() {
            for p in &e.intermediates {
                assert!(ws.point_clearance(p).unwrap() > 0.0);
            }
        }
    }

    #[test]
    fn ring_of_four_blocks_is_one_cycle() {
        let (_, s) = compose_blocks(&grid2(&[
            ((0, 0), &["+x", "+y"]),
            ((1, 0), &["-x", "+y"]),
            ((0, 1), &["+x", "-y"]),
            ((1, 1), &["-x", "-y"]),
        ]))
        .unwrap();
        assert_eq!(s.vertices().len(), 8);
        assert_eq!(s.edges().len(), 8);
        assert!(degrees(&s).values().all(|&d| d == 2));
        // connected: a walk along the cycle visits all eight vertices
        let start = *s.vertices().keys().next().unwrap();
        let mut seen = BTreeSet::from([start]);
        let mut cur = start;
        let mut prev_edge = usize::MAX;
        for _ in 0..8 {
            let (i, e) = s
                .edges()
                .iter()
                .enumerate()
                .find(|(i, e)| *i != prev_edge && (e.source == cur || e.target == cur))
                .unwrap();
            cur = if e.source == cur { e.target } else { e.source };
            prev_edge = i;
            seen.insert(cur);
        }
        assert_eq!(cur, start);
        assert_eq!(seen.len(), 8);
    }

    #[test]
    fn mismatched_shared_face_is_rejected() {
        let err = compose_blocks(&grid2(&[((0, 0), &["+x"]), ((1, 0), &["+y"])])).unwrap_err();
        match err {
            SkeletonError::FaceMismatch { a, b } => {
                assert_eq!(a, vec![0, 0]);
                assert_eq!(b, vec![1, 0]);
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn fully_closed_grid_has_no_opening() {
        let err = compose_blocks(&grid2(&[((0, 0), &[])])).unwrap_err();
        assert!(matches!(err, SkeletonError::NoOpening));
    }

    #[test]
    fn doorway_frames_and_3d_blocks() {
        let mut g = grid2(&[((0, 0), &["+x"]), ((1, 0), &["-x"])]);
        g.opening_width = Some(1.0);
        let (ws, s) = compose_blocks(&g).unwrap();
        // 3 closed walls per block plus a two-piece frame per open face
        assert_eq!(ws.obstacles().len(), 10);
        let door = s.vertices().values().find(|v| v.position.x() == 4.0).unwrap();
        assert!((door.clearance.unwrap() - 0.5).abs() < 1e-12);

        let g3 = BlockGrid {
            dim: Dim::Three,
            block_side: 2.0,
            wall_thickness: None,
            opening_width: Some(0.8),
            spacing: None,
            blocks: vec![
                BlockSpec {
                    at: vec![0, 0, 0],
                    open: faces(&["+z"]),
                },
                BlockSpec {
                    at: vec![0, 0, 1],
                    open: faces(&["-z", "+x"]),
                },
                BlockSpec {
                    at: vec![1, 0, 1],
                    open: faces(&["-x"]),
                },
            ],
        };
        let (ws, s) = compose_blocks(&g3).unwrap();
        assert_eq!(s.vertices().len(), 5);
        assert_eq!(s.edges().len(), 4);
        for e in s.edges() {
            assert!(e.min_clearance.unwrap() > 0.0);
        }
        assert_eq!(ws.dim(), Dim::Three);
    }
}
