//! Flip-move canonical paths simulating single adjacent moves.
//!
//! An adjacent move that pushes a down step one place left is either Type 1
//! (the path next returns one level below the moved down step) or Type 2 (two
//! levels below). Type 1 is simulated by a right shift of one subtree followed
//! by two flips (`M1`, `M2`); Type 2 by a flip (`M3`), a left shift and another
//! flip (`M4`). A move to the right uses the reversed path of the opposite move.
//! Shifts are sequences of flips `M5`, `M6`, `M7` built recursively over
//! minimal segments (see [`shift`]).

use serde::Serialize;

use crate::bijection::path_to_tree;
use crate::error::{Error, Result};
use crate::fuss_dyck::{first_return_split, DyckPath, Step};
use crate::ncst::{gap_in, overarching_in, segments_in, Edge, Ncst};

mod census;
mod encoding;
pub mod shift;

pub use census::{congestion_census, congestion_census_with_cap, CongestionReport, TransitionUsage, DEFAULT_CENSUS_CAP};
pub use encoding::{decode, encode, EncodingTriple};
pub use shift::{shift_left, shift_right};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Direction {
    /// A down step moves one position to the left.
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum MoveType {
    Type1,
    Type2,
}

/// Which flip of the construction a step is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum MoveTag {
    M1,
    M2,
    M3,
    M4,
    M5,
    M6,
    M7,
}

/// Tag carried by the encoding: top-level flips keep their name, flips inside a
/// shift report the shift they belong to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum EncodingTag {
    M1,
    M2,
    M3,
    M4,
    S1,
    S2,
}

impl EncodingTag {
    pub fn is_shift(self) -> bool {
        matches!(self, EncodingTag::S1 | EncodingTag::S2)
    }
}

/// Houses of an adjacent move, always stated for the leftward form: `x` holds
/// an up step and `y = x + 1` a down step in the initial path of that form.
/// For a rightward move the initial path of the leftward form is the target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MoveClassification {
    pub direction: Direction,
    pub move_type: MoveType,
    pub x: usize,
    pub y: usize,
    pub x_prime: usize,
    pub y_prime: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnnotatedStep {
    pub before: Ncst,
    pub after: Ncst,
    pub removed: Edge,
    pub added: Edge,
    pub tag: MoveTag,
    /// Recursion depth of the shift call performing the flip; 0 for top-level flips.
    pub depth: usize,
    pub encoding_tag: EncodingTag,
}

impl AnnotatedStep {
    fn reversed(&self) -> AnnotatedStep {
        AnnotatedStep {
            before: self.after.clone(),
            after: self.before.clone(),
            removed: self.added,
            added: self.removed,
            ..self.clone()
        }
    }
}

/// The subtree moved by the shift of a path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ShiftSpan {
    /// Edge the subtree is shifted under, in the tree where the subtree sits left.
    pub span: Edge,
    /// Number of edges strictly beneath `span`.
    pub edges: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CanonicalPath {
    pub initial: DyckPath,
    pub target: DyckPath,
    pub classification: MoveClassification,
    pub shift: Option<ShiftSpan>,
    pub steps: Vec<AnnotatedStep>,
}

impl CanonicalPath {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Maximal runs of consecutive shift steps, as index ranges.
    pub fn shift_blocks(&self) -> Vec<std::ops::Range<usize>> {
        let mut blocks = Vec::new();
        let mut start = None;
        for (k, step) in self.steps.iter().enumerate() {
            match (step.encoding_tag.is_shift(), start) {
                (true, None) => start = Some(k),
                (false, Some(s)) => {
                    blocks.push(s..k);
                    start = None;
                }
                _ => {}
            }
        }
        if let Some(s) = start {
            blocks.push(s..self.steps.len());
        }
        blocks
    }
}

/// Depth reported by the encoding: the shift depth, or 1 for top-level flips.
pub(crate) fn encoding_depth(step: &AnnotatedStep) -> usize {
    if step.encoding_tag.is_shift() {
        step.depth
    } else {
        1
    }
}

/// Locates the two swapped positions and the houses `x', y'` of the move.
pub fn classify_move(i: &DyckPath, f: &DyckPath) -> Result<MoveClassification> {
    if i.size() != f.size() {
        return Err(Error::SizeMismatch(i.size(), f.size()));
    }
    let diff: Vec<usize> = (0..i.len()).filter(|&k| i.steps()[k] != f.steps()[k]).collect();
    if diff.len() != 2 || diff[1] != diff[0] + 1 {
        return Err(Error::NotAdjacentMove);
    }
    let x = diff[0] + 1;
    let (direction, left_initial) = match i.steps()[x - 1] {
        Step::Up => (Direction::Left, i),
        Step::Down => (Direction::Right, f),
    };
    let h = left_initial.heights();
    let y = x + 1;
    let (drop1, drop2) = (h[y] - 1, h[y] - 2);
    let y_prime = (y + 1..h.len()).find(|&j| h[j] == drop1 || h[j] == drop2).expect("path returns to 0");
    let x_prime = (0..x).rev().find(|&j| h[j] == h[y_prime]).expect("height reached before x");
    let move_type = if h[y_prime] == drop1 { MoveType::Type1 } else { MoveType::Type2 };
    Ok(MoveClassification { direction, move_type, x, y, x_prime, y_prime })
}

/// Working copy of a tree's sorted edge list, shared by construction and decoding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Work {
    pub n: usize,
    pub edges: Vec<Edge>,
}

impl Work {
    pub fn of(tree: &Ncst) -> Self {
        Work { n: tree.size(), edges: tree.edges().to_vec() }
    }

    pub fn tree(&self) -> Ncst {
        Ncst::from_sorted_unchecked(self.n, self.edges.clone())
    }

    /// Validating conversion, for states reconstructed from untrusted input.
    pub fn checked_tree(&self) -> Option<Ncst> {
        Ncst::new(self.n, self.edges.iter().copied()).ok()
    }

    pub fn contains(&self, e: Edge) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    pub fn overarching(&self, e: Edge) -> Option<Edge> {
        overarching_in(&self.edges, e)
    }

    pub fn gap(&self, e: Edge) -> usize {
        gap_in(&self.edges, e)
    }

    pub fn segment_pivots(&self, under: Edge) -> Vec<Edge> {
        segments_in(&self.edges, Some(under)).into_iter().map(|s| s.edge()).collect()
    }

    /// Replaces `removed` by `added`; false if `removed` is absent.
    pub fn replace(&mut self, removed: Edge, added: Edge) -> bool {
        match self.edges.binary_search(&removed) {
            Ok(k) => {
                self.edges[k] = added;
                self.edges.sort_unstable();
                true
            }
            Err(_) => false,
        }
    }

    /// Moves every edge selected by `pick` by `by` positions.
    pub fn shift_where(&mut self, pick: impl Fn(Edge) -> bool, by: isize) {
        for e in self.edges.iter_mut() {
            if pick(*e) {
                *e = e.shifted(by);
            }
        }
        self.edges.sort_unstable();
    }

    /// Moves the edges strictly beneath `outer` by `by` positions.
    pub fn shift_beneath(&mut self, outer: Edge, by: isize) {
        self.shift_where(|e| e.is_beneath(outer), by);
    }
}

/// Accumulates annotated flips while mutating a working tree.
pub(crate) struct Recorder {
    pub work: Work,
    pub steps: Vec<AnnotatedStep>,
    pub encoding_tag: EncodingTag,
}

impl Recorder {
    pub fn new(work: Work, encoding_tag: EncodingTag) -> Self {
        Recorder { work, steps: Vec::new(), encoding_tag }
    }

    pub fn flip(&mut self, removed: Edge, added: Edge, tag: MoveTag, depth: usize) {
        let before = self.work.tree();
        let replaced = self.work.replace(removed, added);
        debug_assert!(replaced, "flip of an absent edge {removed}");
        let after = self.work.tree();
        self.steps.push(AnnotatedStep { before, after, removed, added, tag, depth, encoding_tag: self.encoding_tag });
    }
}

/// Pivot edge of the recursion node whose first structural up step is the
/// 0-based step `target`.
fn node_pivot(steps: &[Step], target: usize) -> Option<Edge> {
    fn walk(steps: &[Step], base: usize, origin: usize, target: usize) -> Option<Edge> {
        if steps.is_empty() || target < base {
            return None;
        }
        let (u1, u2, z) = first_return_split(steps);
        let s = origin + (u2 - u1 - 1) / 3;
        let t = s + 1 + (z - u2 - 1) / 3;
        let offset = target - base;
        if offset == 0 {
            Some(Edge(origin, t))
        } else if offset < u2 {
            walk(&steps[u1 + 1..u2], base + u1 + 1, origin, target)
        } else if offset < z {
            walk(&steps[u2 + 1..z], base + u2 + 1, s + 1, target)
        } else {
            walk(&steps[z + 1..], base + z + 1, t, target)
        }
    }
    walk(steps, 0, 0, target)
}

/// Builds the flip path from `T_I` to `T_F` for one adjacent move `I -> F`.
pub fn build_path(i: &DyckPath, f: &DyckPath) -> Result<CanonicalPath> {
    let classification = classify_move(i, f)?;
    let (shift, steps) = match classification.direction {
        Direction::Left => left_move_steps(i, &classification),
        Direction::Right => {
            let (shift, forward) = left_move_steps(f, &classification);
            (shift, forward.iter().rev().map(AnnotatedStep::reversed).collect())
        }
    };
    Ok(CanonicalPath { initial: i.clone(), target: f.clone(), classification, shift, steps })
}

/// Steps for the leftward form starting from `initial`.
fn left_move_steps(initial: &DyckPath, c: &MoveClassification) -> (Option<ShiftSpan>, Vec<AnnotatedStep>) {
    let h = initial.heights();
    let level = h[c.y_prime];
    let last_at = |height: i64| (0..c.x).rev().find(|&j| h[j] == height).expect("level visited before x");
    let a = node_pivot(initial.steps(), c.x_prime).expect("excursion starts a recursion node");
    let tree = path_to_tree(initial);
    match c.move_type {
        MoveType::Type1 => {
            let u = last_at(level + 1);
            let n_a1 = (u - c.x_prime - 1) / 3;
            let n_a2 = (c.x - u - 2) / 3;
            let p = a.lo() + n_a1;
            let g_e = p + n_a2;
            let mut rec = Recorder::new(Work::of(&tree), EncodingTag::S1);
            debug_assert!(rec.work.contains(Edge(p, g_e + 1)));
            if n_a2 >= 1 {
                shift::shift_right_rec(&mut rec, p, g_e + 1, 1);
            }
            rec.encoding_tag = EncodingTag::M1;
            if p != a.lo() {
                rec.flip(Edge(p, g_e + 1), Edge(a.lo(), g_e + 1), MoveTag::M1, 0);
            }
            rec.encoding_tag = EncodingTag::M2;
            rec.flip(a, Edge(g_e + 1, a.hi()), MoveTag::M2, 0);
            let shift = (n_a2 >= 1).then_some(ShiftSpan { span: Edge(p, g_e + 1), edges: n_a2 });
            (shift, rec.steps)
        }
        MoveType::Type2 => {
            let u1 = last_at(level + 1);
            let u2 = last_at(level + 2);
            let n_a1 = (u1 - c.x_prime - 1) / 3;
            let n_a2 = (u2 - u1 - 1) / 3;
            let n_a3 = (c.x - u2 - 2) / 3;
            let g_a = a.lo() + n_a1;
            let q = g_a + 1 + n_a2;
            let g_e = q + n_a3;
            let mut rec = Recorder::new(Work::of(&tree), EncodingTag::M3);
            rec.flip(Edge(q, g_e + 1), Edge(g_a, q), MoveTag::M3, 0);
            if n_a2 >= 1 {
                rec.encoding_tag = EncodingTag::S2;
                shift::shift_left_rec(&mut rec, Edge(g_a, q));
            }
            if q != g_e {
                rec.encoding_tag = EncodingTag::M4;
                rec.flip(Edge(g_a, q), Edge(g_a, g_e), MoveTag::M4, 0);
            }
            let shift = (n_a2 >= 1).then_some(ShiftSpan { span: Edge(g_a, q), edges: n_a2 });
            (shift, rec.steps)
        }
    }
}
