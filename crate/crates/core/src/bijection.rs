//! The recursive correspondence between 2-Dyck paths of length `3n` and
//! non-crossing spanning trees with `n` edges.
//!
//! `U A U B D C` maps to the tree with pivot `(0, t)`, `T_A` on `[0, s]`,
//! `T_B` on `[s+1, t]` and `T_C` on `[t, n]`, where each part is the image of
//! the matching sub-path.

use crate::fuss_dyck::{first_return_split, DyckPath, Step};
use crate::ncst::{gap_in, Edge, Ncst};

pub fn path_to_tree(path: &DyckPath) -> Ncst {
    let mut edges = Vec::with_capacity(path.size());
    collect_edges(path.steps(), 0, &mut edges);
    edges.sort_unstable();
    Ncst::from_sorted_unchecked(path.size(), edges)
}

/// Appends the edges of the tree for `steps`, with points offset by `origin`.
fn collect_edges(steps: &[Step], origin: usize, out: &mut Vec<Edge>) {
    if steps.is_empty() {
        return;
    }
    let (u1, u2, z) = first_return_split(steps);
    let a = &steps[u1 + 1..u2];
    let b = &steps[u2 + 1..z];
    let c = &steps[z + 1..];
    let s = origin + a.len() / 3;
    let t = s + 1 + b.len() / 3;
    out.push(Edge(origin, t));
    collect_edges(a, origin, out);
    collect_edges(b, s + 1, out);
    collect_edges(c, t, out);
}

pub fn tree_to_path(tree: &Ncst) -> DyckPath {
    let mut steps = Vec::with_capacity(3 * tree.size());
    emit_steps(tree.edges(), 0, tree.size(), &mut steps);
    DyckPath::from_steps_unchecked(steps)
}

/// Emits the path of the subtree spanning `[lo, hi]`, reading only edges inside it.
fn emit_steps(edges: &[Edge], lo: usize, hi: usize, out: &mut Vec<Step>) {
    if lo == hi {
        return;
    }
    let inside: Vec<Edge> = edges.iter().copied().filter(|e| e.0 >= lo && e.1 <= hi).collect();
    let t = inside.iter().filter(|e| e.0 == lo).map(|e| e.1).max().expect("segment has a pivot");
    let s = gap_in(&inside, Edge(lo, t));
    out.push(Step::Up);
    emit_steps(&inside, lo, s, out);
    out.push(Step::Up);
    emit_steps(&inside, s + 1, t, out);
    out.push(Step::Down);
    emit_steps(&inside, t, hi, out);
}

/// Checks that the tree of `u·v` restricts to the tree of `u` on `[0, n_u]`
/// and to the (shifted) tree of `v` on `[n_u, n_u + n_v]`.
pub fn check_concatenation(u: &DyckPath, v: &DyckPath) -> bool {
    let joined = path_to_tree(&u.concat(v));
    let (nu, nv) = (u.size(), v.size());
    joined.subtree(0, nu) == path_to_tree(u) && joined.subtree(nu, nu + nv) == path_to_tree(v)
}
