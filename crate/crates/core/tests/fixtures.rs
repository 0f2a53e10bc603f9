//! Worked examples with three 39-step paths and their drawn trees.

use std::collections::BTreeMap;

use flipmix::bijection::{path_to_tree, tree_to_path};
use flipmix::canonical::{build_path, classify_move, Direction, EncodingTag, MoveTag, MoveType};
use flipmix::fuss_dyck::parse_path;
use flipmix::{DyckPath, Edge, Ncst};
use serde::Deserialize;

#[derive(Deserialize)]
struct Fixture {
    n: usize,
    paths: BTreeMap<String, String>,
    trees: BTreeMap<String, Vec<[usize; 2]>>,
    differences: BTreeMap<String, Vec<usize>>,
}

fn load() -> Fixture {
    let text = include_str!("data/example_paths.json");
    serde_json::from_str(text).unwrap()
}

fn path(f: &Fixture, name: &str) -> DyckPath {
    parse_path(&f.paths[name]).unwrap()
}

fn tree(f: &Fixture, name: &str) -> Ncst {
    Ncst::new(f.n, f.trees[name].iter().map(|&[a, b]| Edge(a, b))).unwrap()
}

fn differing_positions(a: &DyckPath, b: &DyckPath) -> Vec<usize> {
    (0..a.len()).filter(|&k| a.steps()[k] != b.steps()[k]).map(|k| k + 1).collect()
}

#[test]
fn paths_map_to_drawn_trees() {
    let f = load();
    for name in ["W1", "W2", "W3"] {
        let p = path(&f, name);
        assert_eq!(p.size(), f.n);
        assert_eq!(path_to_tree(&p), tree(&f, name), "{name}");
        assert_eq!(tree_to_path(&tree(&f, name)), p);
    }
}

#[test]
fn recorded_differences() {
    let f = load();
    assert_eq!(differing_positions(&path(&f, "W1"), &path(&f, "W2")), f.differences["W1_W2"]);
    assert_eq!(differing_positions(&path(&f, "W2"), &path(&f, "W3")), f.differences["W2_W3"]);
    // Moving one down step far away leaves a single edge, (3,4), in place.
    let (w1, w2) = (tree(&f, "W1"), tree(&f, "W2"));
    assert_eq!(w1.common_edges(&w2), 1);
    assert!(w1.contains(Edge(3, 4)) && w2.contains(Edge(3, 4)));
}

#[test]
fn adjacent_move_shifts_a_block() {
    let f = load();
    let (w2, w3) = (tree(&f, "W2"), tree(&f, "W3"));
    let red = [Edge(0, 1), Edge(0, 3), Edge(2, 3), Edge(3, 4), Edge(3, 5)];
    for e in red {
        assert!(w2.contains(e));
        assert!(w3.contains(e.shifted(1)));
    }
}

#[test]
fn w3_to_w2_path() {
    let f = load();
    let (w2, w3) = (path(&f, "W2"), path(&f, "W3"));
    let c = classify_move(&w3, &w2).unwrap();
    assert_eq!(c.direction, Direction::Left);
    assert_eq!(c.move_type, MoveType::Type2);
    assert_eq!((c.x, c.y, c.x_prime, c.y_prime), (20, 21, 1, 22));

    let canonical = build_path(&w3, &w2).unwrap();
    assert_eq!(canonical.steps.first().unwrap().before, tree(&f, "W3"));
    assert_eq!(canonical.steps.last().unwrap().after, tree(&f, "W2"));
    assert_eq!(canonical.len(), 9);
    let shift = canonical.shift.unwrap();
    assert_eq!((shift.span, shift.edges), (Edge(0, 6), 5));
    assert_eq!(canonical.steps[0].tag, MoveTag::M3);
    assert_eq!((canonical.steps[0].removed, canonical.steps[0].added), (Edge(6, 7), Edge(0, 6)));
    assert!(canonical.steps[1..].iter().all(|s| s.encoding_tag == EncodingTag::S2));

    let reverse = build_path(&w2, &w3).unwrap();
    assert_eq!(reverse.classification.direction, Direction::Right);
    assert_eq!(reverse.len(), 9);
}
