//! Non-crossing spanning trees on the points `0..=n` drawn on a line.
//!
//! An edge `(a, b)` with `a < b` is drawn as an arc above the line. Two edges
//! `(a, b)` and `(c, d)` cross iff `a < c < b < d`. Every connected piece of a
//! non-crossing tree covers consecutive points, so subtrees are written `[lo, hi]`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fuss_dyck::DEFAULT_ENUMERATION_CAP;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge(pub usize, pub usize);

impl Edge {
    /// Builds an edge with its endpoints in increasing order.
    pub fn new(a: usize, b: usize) -> Self {
        if a <= b {
            Edge(a, b)
        } else {
            Edge(b, a)
        }
    }

    pub fn lo(self) -> usize {
        self.0
    }

    pub fn hi(self) -> usize {
        self.1
    }

    pub fn span(self) -> usize {
        self.1 - self.0
    }

    pub fn crosses(self, other: Edge) -> bool {
        let (a, b) = (self.0, self.1);
        let (c, d) = (other.0, other.1);
        (a < c && c < b && b < d) || (c < a && a < d && d < b)
    }

    /// `self` lies under `outer` (non-strict on the endpoints) and differs from it.
    pub fn is_beneath(self, outer: Edge) -> bool {
        self != outer && outer.0 <= self.0 && self.1 <= outer.1
    }

    pub fn shifted(self, by: isize) -> Edge {
        Edge((self.0 as isize + by) as usize, (self.1 as isize + by) as usize)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.0, self.1)
    }
}

impl FromStr for Edge {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::BadEdge(s.to_string());
        let (a, b) = s.trim().split_once('-').ok_or_else(bad)?;
        let a = a.trim().parse().map_err(|_| bad())?;
        let b = b.trim().parse().map_err(|_| bad())?;
        if a == b {
            return Err(bad());
        }
        Ok(Edge::new(a, b))
    }
}

/// A validated non-crossing spanning tree with `n` edges on points `0..=n`.
/// Edges are kept sorted by left then right endpoint.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ncst {
    n: usize,
    edges: Vec<Edge>,
}

impl Ncst {
    /// Validates `edges` as a non-crossing spanning tree on `0..=n`.
    pub fn new(n: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        let mut edges: Vec<Edge> = edges.into_iter().map(|e| Edge::new(e.0, e.1)).collect();
        edges.sort_unstable();
        check_tree(n, &edges)?;
        Ok(Self { n, edges })
    }

    /// Skips validation; used on hot paths whose output is validated by tests.
    pub(crate) fn from_sorted_unchecked(n: usize, edges: Vec<Edge>) -> Self {
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        debug_assert_eq!(check_tree(n, &edges), Ok(()), "{edges:?}");
        Self { n, edges }
    }

    /// The tree on a single point.
    pub fn empty() -> Self {
        Self { n: 0, edges: Vec::new() }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn contains(&self, e: Edge) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    pub fn edge_set(&self) -> BTreeSet<Edge> {
        self.edges.iter().copied().collect()
    }

    /// Number of edges shared with `other`.
    pub fn common_edges(&self, other: &Ncst) -> usize {
        let (mut i, mut j, mut count) = (0, 0, 0);
        while i < self.edges.len() && j < other.edges.len() {
            match self.edges[i].cmp(&other.edges[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    count += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        count
    }

    /// The innermost edge enclosing `e`, if any.
    pub fn overarching_edge(&self, e: Edge) -> Result<Option<Edge>> {
        self.require(e)?;
        Ok(overarching_in(&self.edges, e))
    }

    /// The gap beneath `e = (a, b)`: the largest `s` such that `[a, s]` stays
    /// connected once `e` is removed. For `b = a + 1` this is `a`.
    pub fn gap_beneath(&self, e: Edge) -> Result<usize> {
        self.require(e)?;
        Ok(gap_in(&self.edges, e))
    }

    /// Minimal segments directly under `under`, or the outermost ones for `None`,
    /// from left to right.
    pub fn minimal_segments(&self, under: Option<Edge>) -> Result<Vec<Segment>> {
        if let Some(e) = under {
            self.require(e)?;
        }
        Ok(segments_in(&self.edges, under))
    }

    /// Fact-3.3 style split around the pivot edge `(0, t)`.
    pub fn decompose(&self) -> Result<TreeDecomposition> {
        if self.n == 0 {
            return Err(Error::EmptyTree);
        }
        let t = self.edges.iter().filter(|e| e.0 == 0).map(|e| e.1).max().expect("point 0 has an edge");
        let pivot = Edge(0, t);
        let s = gap_in(&self.edges, pivot);
        Ok(TreeDecomposition {
            pivot,
            gap: s,
            t_a: self.subtree(0, s),
            t_b: self.subtree(s + 1, t),
            t_c: self.subtree(t, self.n),
        })
    }

    /// Edges with both endpoints in `[lo, hi]`, re-indexed to start at 0.
    /// The caller guarantees that these edges span `[lo, hi]`.
    pub fn subtree(&self, lo: usize, hi: usize) -> Ncst {
        let edges: Vec<Edge> = self
            .edges
            .iter()
            .filter(|e| e.0 >= lo && e.1 <= hi)
            .map(|e| Edge(e.0 - lo, e.1 - lo))
            .collect();
        let mut edges = edges;
        edges.sort_unstable();
        Ncst::from_sorted_unchecked(hi - lo, edges)
    }

    /// Edges of the tree restricted to `[lo, hi]` without re-indexing.
    pub fn edges_within(&self, lo: usize, hi: usize) -> Vec<Edge> {
        self.edges.iter().copied().filter(|e| e.0 >= lo && e.1 <= hi).collect()
    }

    /// The edge set with `removed` replaced by `added`, validated.
    pub fn flipped(&self, removed: Edge, added: Edge) -> Result<Ncst> {
        self.require(removed)?;
        let edges = self.edges.iter().copied().filter(|&e| e != removed).chain(std::iter::once(added));
        Ncst::new(self.n, edges)
    }

    fn require(&self, e: Edge) -> Result<()> {
        if self.contains(e) {
            Ok(())
        } else {
            Err(Error::EdgeNotInTree(e))
        }
    }

    /// `a-b` pairs joined by commas, in canonical order.
    pub fn to_text(&self) -> String {
        self.edges.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",")
    }

    /// Parses the comma-separated text form; `n` is inferred from the edge count.
    pub fn parse(text: &str) -> Result<Ncst> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Ncst::empty());
        }
        let edges = text.split(',').map(str::parse).collect::<Result<Vec<Edge>>>()?;
        Ncst::new(edges.len(), edges)
    }

    pub fn to_json_value(&self) -> TreeJson {
        TreeJson { n: self.n, edges: self.edges.iter().map(|e| [e.0, e.1]).collect() }
    }
}

impl fmt::Display for Ncst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for Ncst {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ncst::parse(s)
    }
}

/// JSON form `{"n": int, "edges": [[a, b], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeJson {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

impl TryFrom<TreeJson> for Ncst {
    type Error = Error;

    fn try_from(value: TreeJson) -> Result<Self> {
        Ncst::new(value.n, value.edges.into_iter().map(|[a, b]| Edge::new(a, b)))
    }
}

impl Serialize for Ncst {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json_value().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Ncst {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = TreeJson::deserialize(deserializer)?;
        Ncst::try_from(raw).map_err(serde::de::Error::custom)
    }
}

/// `T = (T_A, T_B, T_C)` around the pivot `(0, t)` with the gap after `s`.
/// Parts are re-indexed to start at point 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub pivot: Edge,
    pub gap: usize,
    pub t_a: Ncst,
    pub t_b: Ncst,
    pub t_c: Ncst,
}

/// Inverse of [`Ncst::decompose`]: `T_A` on `[0, s]`, `T_B` on `[s+1, t]`,
/// `T_C` on `[t, n]` and the pivot `(0, t)`.
pub fn compose_tree(t_a: &Ncst, t_b: &Ncst, t_c: &Ncst) -> Ncst {
    let s = t_a.size();
    let t = s + 1 + t_b.size();
    let n = t + t_c.size();
    let mut edges = Vec::with_capacity(n);
    edges.extend_from_slice(t_a.edges());
    edges.extend(t_b.edges().iter().map(|e| e.shifted((s + 1) as isize)));
    edges.extend(t_c.edges().iter().map(|e| e.shifted(t as isize)));
    edges.push(Edge(0, t));
    edges.sort_unstable();
    Ncst::from_sorted_unchecked(n, edges)
}

/// A subtree `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Segment {
    pub lo: usize,
    pub hi: usize,
}

impl Segment {
    pub fn edge(self) -> Edge {
        Edge(self.lo, self.hi)
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.lo, self.hi)
    }
}

/// Innermost edge of `edges` enclosing `e` (excluding `e` itself).
pub(crate) fn overarching_in(edges: &[Edge], e: Edge) -> Option<Edge> {
    edges.iter().copied().filter(|&o| e.is_beneath(o)).min_by_key(|o| o.span())
}

/// Gap beneath `e` within the edge set `edges` (which must contain `e`).
pub(crate) fn gap_in(edges: &[Edge], e: Edge) -> usize {
    let Edge(a, b) = e;
    let mut s = a;
    // Edges are sorted by left endpoint; a single sweep extends the reach.
    for &f in edges {
        if f.0 > s {
            break;
        }
        if f != e && f.0 >= a && f.1 <= b && f.1 > s {
            s = f.1;
        }
    }
    s
}

pub(crate) fn segments_in(edges: &[Edge], under: Option<Edge>) -> Vec<Segment> {
    let mut out: Vec<Segment> = edges
        .iter()
        .copied()
        .filter(|&f| Some(f) != under && overarching_in(edges, f) == under)
        .map(|f| Segment { lo: f.0, hi: f.1 })
        .collect();
    out.sort_unstable();
    out
}

fn check_tree(n: usize, edges: &[Edge]) -> Result<()> {
    if edges.len() != n {
        return Err(Error::NotSpanning(format!("{} edges for {} points", edges.len(), n + 1)));
    }
    for &e in edges {
        if e.0 >= e.1 || e.1 > n {
            return Err(Error::NotSpanning(format!("edge {e} out of range 0..={n}")));
        }
    }
    for w in edges.windows(2) {
        if w[0] == w[1] {
            return Err(Error::NotSpanning(format!("duplicate edge {}", w[0])));
        }
    }
    for (i, &e) in edges.iter().enumerate() {
        for &f in &edges[i + 1..] {
            if e.crosses(f) {
                let (first, second) = if e.0 < f.0 { (e, f) } else { (f, e) };
                return Err(Error::Crossing(first, second));
            }
        }
    }
    let mut uf = UnionFind::new(n + 1);
    for &e in edges {
        if !uf.union(e.0, e.1) {
            return Err(Error::NotSpanning(format!("edge {e} closes a cycle")));
        }
    }
    Ok(())
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

/// All trees with `n` edges found by a direct search over edge subsets, in
/// canonical (sorted edge list) order. Independent of the path bijection.
pub fn enumerate_trees_by_search(n: usize, cap: usize) -> Result<Vec<Ncst>> {
    if n > cap {
        return Err(Error::CapExceeded { n, cap });
    }
    if n == 0 {
        return Ok(vec![Ncst::empty()]);
    }
    let all: Vec<Edge> = (0..n).flat_map(|a| (a + 1..=n).map(move |b| Edge(a, b))).collect();
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(n);
    search_trees(n, &all, 0, &mut chosen, &mut out);
    Ok(out)
}

fn search_trees(n: usize, all: &[Edge], from: usize, chosen: &mut Vec<Edge>, out: &mut Vec<Ncst>) {
    if chosen.len() == n {
        if check_tree(n, chosen).is_ok() {
            out.push(Ncst { n, edges: chosen.clone() });
        }
        return;
    }
    let needed = n - chosen.len();
    for i in from..all.len() {
        if all.len() - i < needed {
            break;
        }
        let e = all[i];
        if chosen.iter().any(|&f| f.crosses(e)) || closes_cycle(chosen, e) {
            continue;
        }
        chosen.push(e);
        search_trees(n, all, i + 1, chosen, out);
        chosen.pop();
    }
}

fn closes_cycle(edges: &[Edge], e: Edge) -> bool {
    let max = edges.iter().map(|f| f.1).max().unwrap_or(0).max(e.1);
    let mut uf = UnionFind::new(max + 1);
    for f in edges {
        uf.union(f.0, f.1);
    }
    uf.find(e.0) == uf.find(e.1)
}

/// All trees with `n` edges, ordered like their images in
/// [`crate::fuss_dyck::enumerate_paths`] so both chains share state indices.
pub fn enumerate_trees(n: usize) -> Result<Vec<Ncst>> {
    enumerate_trees_with_cap(n, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_trees_with_cap(n: usize, cap: usize) -> Result<Vec<Ncst>> {
    let mut trees = enumerate_trees_by_search(n, cap)?;
    trees.sort_by_cached_key(crate::bijection::tree_to_path);
    Ok(trees)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tree(n: usize, edges: &[(usize, usize)]) -> Ncst {
        Ncst::new(n, edges.iter().map(|&(a, b)| Edge(a, b))).unwrap()
    }

    fn fig_tree() -> Ncst {
        tree(7, &[(0, 1), (0, 2), (2, 3), (4, 5), (4, 6), (6, 7), (0, 6)])
    }

    #[test]
    fn validate_examples() {
        assert_eq!(fig_tree().to_text(), "0-1,0-2,0-6,2-3,4-5,4-6,6-7");
        tree(1, &[(0, 1)]);
        let crossing = Ncst::new(3, [Edge(0, 2), Edge(1, 3), Edge(2, 3)]);
        assert_eq!(crossing, Err(Error::Crossing(Edge(0, 2), Edge(1, 3))));
        assert!(matches!(Ncst::new(2, [Edge(0, 1)]), Err(Error::NotSpanning(_))));
        assert!(matches!(Ncst::new(3, [Edge(0, 1), Edge(1, 2), Edge(0, 2)]), Err(Error::NotSpanning(_))));
        assert!(matches!(Ncst::new(2, [Edge(0, 1), Edge(0, 1)]), Err(Error::NotSpanning(_))));
    }

    #[test]
    fn decompose_examples() {
        let d = fig_tree().decompose().unwrap();
        assert_eq!(d.pivot, Edge(0, 6));
        assert_eq!(d.gap, 3);
        assert_eq!(d.t_a, tree(3, &[(0, 1), (0, 2), (2, 3)]));
        assert_eq!(d.t_b, tree(2, &[(0, 1), (0, 2)]));
        assert_eq!(d.t_c, tree(1, &[(0, 1)]));

        let d = tree(1, &[(0, 1)]).decompose().unwrap();
        assert_eq!((d.pivot, d.gap), (Edge(0, 1), 0));
        assert!(d.t_a.size() == 0 && d.t_b.size() == 0 && d.t_c.size() == 0);

        let d = tree(2, &[(0, 1), (1, 2)]).decompose().unwrap();
        assert_eq!((d.pivot, d.gap), (Edge(0, 1), 0));
        assert_eq!(d.t_c, tree(1, &[(0, 1)]));
        assert_eq!(Ncst::empty().decompose(), Err(Error::EmptyTree));
    }

    #[test]
    fn compose_examples() {
        let e = Ncst::empty();
        let one = tree(1, &[(0, 1)]);
        assert_eq!(compose_tree(&e, &e, &e), one);
        assert_eq!(compose_tree(&one, &e, &e), tree(2, &[(0, 1), (0, 2)]));
        assert_eq!(compose_tree(&e, &one, &e), tree(2, &[(0, 2), (1, 2)]));
    }

    #[test]
    fn compose_inverts_decompose() {
        for n in 1..=7 {
            for t in enumerate_trees_by_search(n, 8).unwrap() {
                let d = t.decompose().unwrap();
                assert_eq!(d.t_a.size() + d.t_b.size() + d.t_c.size(), n - 1);
                assert_eq!(compose_tree(&d.t_a, &d.t_b, &d.t_c), t);
            }
        }
    }

    #[test]
    fn overarching_examples() {
        let t = fig_tree();
        assert_eq!(t.overarching_edge(Edge(0, 1)).unwrap(), Some(Edge(0, 2)));
        assert_eq!(t.overarching_edge(Edge(0, 2)).unwrap(), Some(Edge(0, 6)));
        assert_eq!(t.overarching_edge(Edge(0, 6)).unwrap(), None);
        assert_eq!(tree(1, &[(0, 1)]).overarching_edge(Edge(0, 1)).unwrap(), None);
        assert_eq!(t.overarching_edge(Edge(1, 2)), Err(Error::EdgeNotInTree(Edge(1, 2))));
    }

    #[test]
    fn gap_examples() {
        let t = fig_tree();
        assert_eq!(t.gap_beneath(Edge(0, 6)).unwrap(), 3);
        assert_eq!(t.gap_beneath(Edge(4, 6)).unwrap(), 5);
        assert_eq!(tree(1, &[(0, 1)]).gap_beneath(Edge(0, 1)).unwrap(), 0);
    }

    #[test]
    fn segment_examples() {
        let t = fig_tree();
        let segs = |u| t.minimal_segments(u).unwrap().iter().map(|s| (s.lo, s.hi)).collect::<Vec<_>>();
        assert_eq!(segs(Some(Edge(0, 6))), vec![(0, 2), (2, 3), (4, 6)]);
        assert_eq!(segs(None), vec![(0, 6), (6, 7)]);
        let one = tree(1, &[(0, 1)]);
        assert_eq!(one.minimal_segments(None).unwrap(), vec![Segment { lo: 0, hi: 1 }]);
    }

    #[test]
    fn enumeration_examples() {
        let texts = |n| enumerate_trees(n).unwrap().iter().map(Ncst::to_text).collect::<Vec<_>>();
        assert_eq!(texts(1), vec!["0-1"]);
        assert_eq!(texts(2), vec!["0-1,1-2", "0-1,0-2", "0-2,1-2"]);
        assert_eq!(enumerate_trees(4).unwrap().len(), 55);
    }

    #[test]
    fn brute_force_n2_matches() {
        // All 2-subsets of the three possible edges on {0,1,2}.
        let all = [Edge(0, 1), Edge(0, 2), Edge(1, 2)];
        let mut valid = Vec::new();
        for i in 0..3 {
            for j in i + 1..3 {
                if let Ok(t) = Ncst::new(2, [all[i], all[j]]) {
                    valid.push(t);
                }
            }
        }
        valid.sort();
        assert_eq!(valid, enumerate_trees_by_search(2, 8).unwrap());
    }

    #[test]
    fn segment_subtrees_are_trees() {
        for n in 1..=6 {
            for t in enumerate_trees_by_search(n, 8).unwrap() {
                let mut unders: Vec<Option<Edge>> = t.edges().iter().copied().map(Some).collect();
                unders.push(None);
                for under in unders {
                    for seg in t.minimal_segments(under).unwrap() {
                        let edges = t.edges_within(seg.lo, seg.hi);
                        let local = edges.iter().map(|e| e.shifted(-(seg.lo as isize)));
                        assert!(Ncst::new(seg.hi - seg.lo, local).is_ok(), "{t} {seg}");
                    }
                }
            }
        }
    }

    #[test]
    fn overarching_forest_terminates() {
        for n in 1..=6 {
            for t in enumerate_trees_by_search(n, 8).unwrap() {
                for &e in t.edges() {
                    let mut cur = e;
                    let mut hops = 0;
                    while let Some(up) = t.overarching_edge(cur).unwrap() {
                        assert!(up.span() > cur.span() || up.0 < cur.0 || up.1 > cur.1);
                        cur = up;
                        hops += 1;
                        assert!(hops <= n);
                    }
                    assert!(t.minimal_segments(None).unwrap().contains(&Segment { lo: cur.0, hi: cur.1 }));
                }
            }
        }
    }

    #[test]
    fn matroid_exchange_fails() {
        let t1 = tree(3, &[(0, 1), (1, 3), (2, 3)]);
        let t2 = tree(3, &[(0, 2), (1, 2), (2, 3)]);
        let candidates: Vec<Edge> = t2.edges().iter().copied().filter(|e| !t1.contains(*e)).collect();
        assert_eq!(candidates, vec![Edge(0, 2), Edge(1, 2)]);
        for added in candidates {
            assert!(t1.flipped(Edge(0, 1), added).is_err());
        }
    }

    #[test]
    fn text_and_json_round_trip() {
        let t = fig_tree();
        assert_eq!(Ncst::parse(&t.to_text()).unwrap(), t);
        let json = serde_json::to_string(&t).unwrap();
        assert_eq!(json, r#"{"n":7,"edges":[[0,1],[0,2],[0,6],[2,3],[4,5],[4,6],[6,7]]}"#);
        let back: Ncst = serde_json::from_str(&json).unwrap();
        assert_eq!(back, t);
        assert!(Ncst::parse("0-1,x").is_err());
    }
}
