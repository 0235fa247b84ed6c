// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use hasrrt_core::scene::{load_blockgrid, load_scene, load_skeleton, parse_scene, scene_to_json, skeleton_to_json};
use hasrrt_core::skeleton::{compose_blocks, BlockGrid, BlockSpec, Face};
use hasrrt_core::{Dim, Point, SceneError};
use serde_json::Value;

fn scenes_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenes")
}

fn json(text: &str) -> Value {
    serde_json::from_str(text).unwrap()
}

#[test]
fn checked_in_scene_and_skeleton_pairs_load() {
    let pairs = [
        ("narrow2d.json", "narrow2d_skeleton.json"),
        ("fork2d.json", "fork2d_skeleton.json"),
        ("openbox.json", "openbox_corner_skeleton.json"),
        ("window3d.json", "window3d_skeleton.json"),
        ("grid4x4.json", "grid4x4_skeleton.json"),
        ("grid8x8.json", "grid8x8_skeleton.json"),
    ];
    for (scene_file, skel_file) in pairs {
        let scene = load_scene(&scenes_dir().join(scene_file)).unwrap();
        let skel = load_skeleton(&scenes_dir().join(skel_file), scene.dim()).unwrap();
        skel.validate().unwrap();
        for v in skel.vertices().values() {
            assert!(
                scene.env.workspace.is_free_point(&v.position),
                "{skel_file}: vertex {:?} not in free space",
                v.position
            );
        }
    }
}

#[test]
fn generated_grid_files_match_their_block_grids() {
    for name in ["grid4x4", "grid8x8"] {
        let grid = load_blockgrid(&scenes_dir().join(format!("{name}.blockgrid.json"))).unwrap();
        let (scene, skel) = grid.compose().unwrap();
        let on_disk = |suffix: &str| fs::read_to_string(scenes_dir().join(format!("{name}{suffix}"))).unwrap();
        assert_eq!(json(&scene_to_json(&scene)), json(&on_disk(".json")), "{name} scene");
        assert_eq!(
            json(&skeleton_to_json(&skel)),
            json(&on_disk("_skeleton.json")),
            "{name} skeleton"
        );
        assert!(skel.is_annotated());
    }
}

#[test]
fn malformed_scene_reports_a_position() {
    let err = parse_scene("{\n  \"format\": \"hasrrt-scene/1\",\n  oops\n}", Path::new("bad.json")).unwrap_err();
    let msg = err.to_string();
    assert!(msg.contains("bad.json") && msg.contains("line 3"), "{msg}");
    assert!(matches!(err, SceneError::Parse { .. }));
}

fn block(at: [i64; 2], open: &[&str]) -> BlockSpec {
    BlockSpec {
        at: at.to_vec(),
        open: open.iter().map(|f| f.parse::<Face>().unwrap()).collect(),
    }
}

fn grid(blocks: Vec<BlockSpec>) -> BlockGrid {
    BlockGrid {
        dim: Dim::Two,
        block_side: 4.0,
        wall_thickness: None,
        opening_width: None,
        spacing: None,
        blocks,
    }
}

type Key = (i64, i64);

/// Vertex positions and undirected edges as coordinate pairs.
fn shape(g: &BlockGrid) -> (BTreeSet<Key>, BTreeSet<(Key, Key)>) {
    let (_, s) = compose_blocks(g).unwrap();
    let key = |p: &Point| ((p.x() * 10.0).round() as i64, (p.y() * 10.0).round() as i64);
    let vertices = s.vertices().values().map(|v| key(&v.position)).collect();
    let edges = s
        .edges()
        .iter()
        .map(|e| {
            let (a, b) = (
                key(&s.vertex(e.source).unwrap().position),
                key(&s.vertex(e.target).unwrap().position),
            );
            (a.min(b), a.max(b))
        })
        .collect();
    (vertices, edges)
}

#[test]
fn composed_graphs_match_hand_enumeration() {
    // one block open on both x faces: centre joined to two face points
    let (v, e) = shape(&grid(vec![block([0, 0], &["-x", "+x"])]));
    assert_eq!(v, BTreeSet::from([(0, 20), (20, 20), (40, 20)]));
    assert_eq!(e, BTreeSet::from([((0, 20), (20, 20)), ((20, 20), (40, 20))]));

    // two blocks sharing the x = 4 face
    let (v, e) = shape(&grid(vec![block([0, 0], &["+x"]), block([1, 0], &["-x"])]));
    assert_eq!(v, BTreeSet::from([(20, 20), (40, 20), (60, 20)]));
    assert_eq!(e, BTreeSet::from([((20, 20), (40, 20)), ((40, 20), (60, 20))]));

    // 2 x 2 ring: four centres, four shared faces, eight spokes
    let (v, e) = shape(&grid(vec![
        block([0, 0], &["+x", "+y"]),
        block([1, 0], &["-x", "+y"]),
        block([0, 1], &["+x", "-y"]),
        block([1, 1], &["-x", "-y"]),
    ]));
    let centres = [(20, 20), (60, 20), (20, 60), (60, 60)];
    let faces = [(40, 20), (20, 40), (60, 40), (40, 60)];
    assert_eq!(v, centres.iter().chain(&faces).copied().collect());
    let spokes: BTreeSet<_> = [
        ((20, 20), (40, 20)),
        ((40, 20), (60, 20)),
        ((20, 20), (20, 40)),
        ((20, 40), (20, 60)),
        ((60, 20), (60, 40)),
        ((60, 40), (60, 60)),
        ((20, 60), (40, 60)),
        ((40, 60), (60, 60)),
    ]
    .into_iter()
    .collect();
    assert_eq!(e, spokes);
}
